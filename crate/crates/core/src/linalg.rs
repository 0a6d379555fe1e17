//! Small dense linear-algebra helpers on complex matrices.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::rng::{self, Rng};
use crate::{CMat, CVec, C64};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const IM: C64 = C64::new(0.0, 1.0);

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

pub fn outer(v: &CVec) -> CMat {
    v * v.adjoint()
}

/// Pauli matrix σ_k, k ∈ {0,1,2,3}.
pub fn pauli(k: usize) -> CMat {
    let (a, b, c, d) = match k {
        0 => (ONE, ZERO, ZERO, ONE),
        1 => (ZERO, ONE, ONE, ZERO),
        2 => (ZERO, -IM, IM, ZERO),
        3 => (ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    };
    CMat::from_row_slice(2, 2, &[a, b, c, d])
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().sum()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_error(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * re(0.5)
}

/// Eigenvalues (descending) and eigenvectors (columns, same order) of the
/// Hermitian part of `m`.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let se = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].total_cmp(&se.eigenvalues[i]));
    let vals = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Eigenvalues of the Hermitian part of `m`, descending.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(m);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for k in 0..n {
        let fk = re(f(vals[k]));
        for i in 0..n {
            scaled[(i, k)] *= fk;
        }
    }
    scaled * vecs.adjoint()
}

/// Square root of a positive semidefinite matrix; negative round-off clipped.
pub fn sqrtm_psd(m: &CMat) -> CMat {
    hermitian_function(m, |x| x.max(0.0).sqrt())
}

/// `(m + reg·I)^{-1/2}` for a positive semidefinite `m`.
pub fn inv_sqrtm_psd(m: &CMat, reg: f64) -> CMat {
    hermitian_function(m, |x| 1.0 / (x.max(0.0) + reg).sqrt())
}

/// Sum of singular values.
pub fn trace_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().sum()
}

/// Trace norm of a Hermitian matrix via its spectrum.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

pub fn det(m: &CMat) -> C64 {
    m.clone().determinant()
}

/// `exp(i h)` for Hermitian `h`.
pub fn unitary_from_hermitian(h: &CMat) -> CMat {
    let (vals, vecs) = eigh(h);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for k in 0..n {
        let ph = C64::from_polar(1.0, vals[k]);
        for i in 0..n {
            scaled[(i, k)] *= ph;
        }
    }
    scaled * vecs.adjoint()
}

/// Hermitian matrix from `n²` real parameters (diagonal first, then the
/// real and imaginary parts of the strict upper triangle).
pub fn hermitian_from_params(n: usize, p: &[f64]) -> CMat {
    assert_eq!(p.len(), n * n);
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = re(p[i]);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(p[k], p[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// `exp(a)` for a traceless 2×2 matrix, using `a² = -det(a)·I`.
pub fn expm_traceless2(a: &CMat) -> CMat {
    let s = (-det(a)).sqrt();
    let (ch, sh_over_s) = if s.norm() < 1e-8 {
        let s2 = s * s;
        (ONE + s2 / 2.0, ONE + s2 / 6.0)
    } else {
        (s.cosh(), s.sinh() / s)
    };
    identity(2) * ch + a * sh_over_s
}

/// Element of SL(2,ℂ) from six real parameters: the exponential of the
/// traceless generator `[[p0+ip1, p2+ip3],[p4+ip5, -(p0+ip1)]]`.
pub fn sl2_from_params(p: &[f64]) -> CMat {
    let a = C64::new(p[0], p[1]);
    let g = CMat::from_row_slice(2, 2, &[a, C64::new(p[2], p[3]), C64::new(p[4], p[5]), -a]);
    expm_traceless2(&g)
}

/// Element of SU(2) from three Euler-type angles.
pub fn su2_from_angles(theta: f64, phi: f64, lambda: f64) -> CMat {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    CMat::from_row_slice(
        2,
        2,
        &[
            C64::from_polar(c, -(phi + lambda) / 2.0),
            -C64::from_polar(s, (lambda - phi) / 2.0),
            C64::from_polar(s, (phi - lambda) / 2.0),
            C64::from_polar(c, (phi + lambda) / 2.0),
        ],
    )
}

/// Element of U(2) from four angles (global phase times SU(2)).
pub fn u2_from_angles(p: &[f64]) -> CMat {
    su2_from_angles(p[0], p[1], p[2]) * C64::from_polar(1.0, p[3])
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| rng::complex_normal(rng))
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix.
pub fn haar_unitary(n: usize, rng: &mut Rng) -> CMat {
    let qr = ginibre(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, k)] *= ph;
        }
    }
    q
}

/// Ginibre matrix rescaled to unit determinant.
pub fn random_sl(d: usize, rng: &mut Rng) -> CMat {
    let g = ginibre(d, d, rng);
    let root = det(&g).powf(1.0 / d as f64);
    g / root
}

/// Distance of `m†m` from the identity (orthonormality of the columns).
pub fn isometry_error(m: &CMat) -> f64 {
    max_abs(&(m.adjoint() * m - identity(m.ncols())))
}

pub fn hs_distance(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}

/// Real matrix to complex.
pub fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(re)
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

/// Shannon entropy in bits; zero and negative round-off entries ignored.
pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Elementary symmetric polynomial `e_k` of `x`.
pub fn elementary_symmetric(x: &[f64], k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &v in x {
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * v;
        }
    }
    e[k]
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
