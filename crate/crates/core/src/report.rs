use std::collections::BTreeMap;
use std::fmt;

/// The bound family a [`BoundReport`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// `-E_Y log E_X 1(X~Y)`.
    Baseline,
    /// Baseline plus the column-normalized adjacency correction.
    Adjacency,
    /// Alternating maximization of the dual objective.
    Iterative,
    /// Lower bound through an explicit action model.
    ActionLower,
    /// Upper bound through adjacency between actions and input/output pairs.
    ActionUpper,
    DeletionLower,
    DeletionUpper,
    /// Boolean-function bound evaluated from the Fourier spectrum.
    FourierUpper,
    /// Boolean-function bound evaluated from agreement probabilities.
    AgreementUpper,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::Adjacency => "adjacency",
            Method::Iterative => "iterative",
            Method::ActionLower => "action-lower",
            Method::ActionUpper => "action-upper",
            Method::DeletionLower => "deletion-lower",
            Method::DeletionUpper => "deletion-upper",
            Method::FourierUpper => "fourier-upper",
            Method::AgreementUpper => "agreement-upper",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A bound value in bits together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub value_bits: f64,
    pub method: Method,
    pub iterations: usize,
    pub diagnostics: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(method: Method, value_bits: f64) -> Self {
        debug_assert!(value_bits.is_finite(), "{method} produced {value_bits}");
        BoundReport {
            value_bits,
            method,
            iterations: 0,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_diag(mut self, name: &str, value: f64) -> Self {
        self.diagnostics.insert(name.to_string(), value);
        self
    }

    pub fn diag(&self, name: &str) -> Option<f64> {
        self.diagnostics.get(name).copied()
    }
}
