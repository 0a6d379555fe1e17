//! Measure values tagged with what they are known to be: exact values,
//! lower bounds or upper bounds.

use serde::Serialize;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Exact => "exact",
        }
    }
}

#[derive(Serialize, Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub kind: BoundKind,
}

impl BoundValue {
    pub fn exact(value: f64) -> Self {
        Self { value, kind: BoundKind::Exact }
    }

    pub fn lower(value: f64) -> Self {
        Self { value, kind: BoundKind::Lower }
    }

    pub fn upper(value: f64) -> Self {
        Self { value, kind: BoundKind::Upper }
    }
}

/// One named entry; `value` is `None` when the measure is unavailable for
/// the input.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct MeasureEntry {
    pub name: String,
    pub value: Option<f64>,
    pub kind: BoundKind,
}

/// Ordered measure values plus classification labels.
#[derive(Serialize, Clone, Debug, Default, PartialEq)]
pub struct MeasureReport {
    pub measures: Vec<MeasureEntry>,
    pub labels: Vec<(String, String)>,
}

impl MeasureReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, v: BoundValue) {
        self.measures.push(MeasureEntry { name: name.into(), value: Some(v.value), kind: v.kind });
    }

    pub fn push_unavailable(&mut self, name: &str, kind: BoundKind) {
        self.measures.push(MeasureEntry { name: name.into(), value: None, kind });
    }

    pub fn label(&mut self, key: &str, value: impl Into<String>) {
        self.labels.push((key.into(), value.into()));
    }

    pub fn get(&self, name: &str) -> Option<BoundValue> {
        self.measures
            .iter()
            .find(|e| e.name == name)
            .and_then(|e| e.value.map(|value| BoundValue { value, kind: e.kind }))
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|b| b.value)
    }

    pub fn get_label(&self, key: &str) -> Option<&str> {
        self.labels.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_unavailable() {
        let mut r = MeasureReport::new();
        r.push("negativity", BoundValue::exact(0.5));
        r.push_unavailable("concurrence", BoundKind::Exact);
        r.label("class", "GHZ");
        assert_eq!(r.value("negativity"), Some(0.5));
        assert_eq!(r.value("concurrence"), None);
        assert_eq!(r.get_label("class"), Some("GHZ"));
    }
}
