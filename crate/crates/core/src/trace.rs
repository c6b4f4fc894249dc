use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Tree of construction steps, serialized into a design file's
/// `provenance` field. Leaves are explicit fixtures, ingredient artifacts,
/// or trivial objects.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionTrace {
    pub step: String,
    pub params: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ConstructionTrace>,
}

impl ConstructionTrace {
    pub fn new(step: impl Into<String>) -> Self {
        Self { step: step.into(), params: BTreeMap::new(), children: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("trace params serialize"));
        self
    }

    pub fn child(mut self, child: ConstructionTrace) -> Self {
        self.children.push(child);
        self
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("traces serialize")
    }

    /// Steps in pre-order.
    pub fn steps(&self) -> Vec<&str> {
        let mut out = vec![self.step.as_str()];
        for c in &self.children {
            out.extend(c.steps());
        }
        out
    }

    /// First step with the given name, searching pre-order.
    pub fn find(&self, step: &str) -> Option<&ConstructionTrace> {
        if self.step == step {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(step))
    }
}
