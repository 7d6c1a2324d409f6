use crate::Int;
use std::time::Duration;

/// Which counting path produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Plain,
    Partite,
    Matching,
    Uniform,
    Dp,
    Brute,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Plain => "plain",
            Method::Partite => "partite",
            Method::Matching => "matching",
            Method::Uniform => "uniform",
            Method::Dp => "dp",
            Method::Brute => "brute",
        }
    }
}

/// One iteration of the divisor-pattern reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub index: usize,
    pub subtracted: Int,
}

/// The exact count plus diagnostics.
#[derive(Clone, Debug)]
pub struct CountReport {
    pub count: Int,
    /// Group order N = max(y) + 1 (1 for infeasible demands).
    pub modulus: usize,
    /// Truncation degree d = 1ᵀy.
    pub degree: u64,
    /// N^n, the factor dividing the scaled coefficients.
    pub scale: Int,
    pub method: Method,
    /// Scaled f̄ coefficients before reduction, when the method produces them.
    pub scaled_coeffs: Option<Vec<Int>>,
    pub trace: Vec<ReductionStep>,
    /// Number of outer sweep terms actually visited.
    pub sweep_terms: u128,
    /// Instrumented peak number of simultaneously live coefficient slots.
    pub peak_live_values: u64,
    /// DP table size, for the oracle.
    pub table_cells: Option<u128>,
    pub elapsed: Duration,
}

impl CountReport {
    pub fn new(count: Int, method: Method) -> Self {
        Self {
            count,
            modulus: 1,
            degree: 0,
            scale: Int::from(1),
            method,
            scaled_coeffs: None,
            trace: Vec::new(),
            sweep_terms: 0,
            peak_live_values: 0,
            table_cells: None,
            elapsed: Duration::ZERO,
        }
    }
}
