use crate::error::{Error, Result};
use crate::ground::{ElementId, ElementSet};
use crate::oracle::Objective;

/// `f(S) = Σ_{e ∈ S} w_e` with non-negative weights. The simplest monotone
/// submodular function; handy as a baseline in tests and benchmarks.
#[derive(Clone, Debug)]
pub struct ModularObjective {
    weights: Vec<f64>,
}

impl ModularObjective {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Config(
                "modular objective needs at least one weight".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config(
                "modular weights must be finite and non-negative".into(),
            ));
        }
        Ok(ModularObjective { weights })
    }

    pub fn weight(&self, e: ElementId) -> f64 {
        self.weights[e.index()]
    }
}

impl Objective for ModularObjective {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        s.iter().map(|e| self.weights[e.index()]).sum()
    }

    fn gain(&self, e: ElementId, _s: &ElementSet) -> f64 {
        self.weights[e.index()]
    }
}
