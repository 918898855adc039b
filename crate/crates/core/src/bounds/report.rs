use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// The quantity a bound constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "C")]
    Concurrence,
    #[serde(rename = "C^2")]
    ConcurrenceSquared,
    /// C(ρ) C(σ) for a pair bound.
    #[serde(rename = "C(rho)C(sigma)")]
    ConcurrenceProduct,
    #[serde(rename = "C_N^2")]
    MultipartiteSquared,
    #[serde(rename = "C_N(rho)C_N(sigma)")]
    MultipartiteProduct,
}

impl Target {
    fn squared(self) -> bool {
        !matches!(self, Target::Concurrence)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub raw: f64,
    /// max(0, raw) for lower bounds, raw for upper bounds.
    pub clipped: f64,
    pub side: Side,
    pub target: Target,
    pub ingredients: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(name: &str, raw: f64, side: Side, target: Target) -> Self {
        let clipped = match side {
            Side::Lower => raw.max(0.0),
            Side::Upper => raw,
        };
        Self {
            name: name.to_string(),
            raw,
            clipped,
            side,
            target,
            ingredients: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.ingredients.insert(key.to_string(), value);
        self
    }

    pub fn ingredient(&self, key: &str) -> Option<f64> {
        self.ingredients.get(key).copied()
    }

    /// The bound expressed on the scale of C itself: the square root of the
    /// clipped value for squared targets.
    pub fn on_c_scale(&self) -> f64 {
        if self.target.squared() {
            self.clipped.max(0.0).sqrt()
        } else {
            self.clipped
        }
    }

    /// Positive raw value: the bound certifies entanglement.
    pub fn detects(&self) -> bool {
        self.side == Side::Lower && self.raw > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_rule() {
        let lo = BoundReport::new("x", -0.3, Side::Lower, Target::ConcurrenceSquared);
        assert_eq!(lo.clipped, 0.0);
        assert_eq!(lo.on_c_scale(), 0.0);
        let up = BoundReport::new("y", 0.25, Side::Upper, Target::ConcurrenceSquared);
        assert_eq!(up.clipped, 0.25);
        assert_eq!(up.on_c_scale(), 0.5);
    }

    #[test]
    fn stable_field_names() {
        let r = BoundReport::new("mb_lower", 1.0, Side::Lower, Target::ConcurrenceSquared)
            .with("purity", 1.0);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["clipped", "ingredients", "name", "raw", "side", "target"]);
        assert_eq!(v["side"], "lower");
        assert_eq!(v["target"], "C^2");
    }
}
