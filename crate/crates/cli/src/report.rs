//! Machine-readable reports.
//!
//! Field order is fixed by struct declaration order and every float goes
//! through [`Num`], so identical inputs give byte-identical output.

use serde::{Serialize, Serializer};

pub const REPORT_VERSION: u32 = 1;

/// Significant digits kept when printing floats.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits. Ties are broken by
/// the standard formatter, which rounds half to even.
pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("formatted float parses")
}

/// A float as it appears in a report: rounded, with non-finite values
/// written as `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round_significant(self.0))
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EntropyOut {
    pub report_version: u32,
    pub command: &'static str,
    pub pipeline: &'static str,
    pub order: Num,
    pub length: u64,
    pub dimension: usize,
    /// Entropy of the first `length` symbols, in bits.
    pub value: Num,
    pub per_symbol: Num,
    pub log2_collision_probability: Num,
    pub infinite: bool,
}

#[derive(Debug, Serialize)]
pub struct ComponentOut {
    pub id: usize,
    pub members: Vec<String>,
    pub radius: Num,
    pub reachable: bool,
    /// The component has an edge leaving it, so the process eventually
    /// exits it for good.
    pub transient: bool,
}

#[derive(Debug, Serialize)]
pub struct RateOut {
    pub report_version: u32,
    pub command: &'static str,
    pub pipeline: &'static str,
    pub order: Num,
    pub dimension: usize,
    /// Entropy rate in bits per symbol.
    pub value: Num,
    pub infinite: bool,
    pub rho_plus: Num,
    pub log2_rho_plus: Num,
    pub degenerate: bool,
    pub dominant_component: Option<usize>,
    pub dominant_transient: bool,
    pub components: Vec<ComponentOut>,
}

#[derive(Debug, Serialize)]
pub struct PolynomialOut {
    pub degree: usize,
    /// Ascending powers; the last coefficient is 1.
    pub coefficients: Vec<Num>,
}

#[derive(Debug, Serialize)]
pub struct ComponentsOut {
    pub report_version: u32,
    pub command: &'static str,
    pub pipeline: &'static str,
    pub order: Num,
    pub dimension: usize,
    pub nodes: Vec<String>,
    pub initial: Vec<Num>,
    /// Dense rows, present when the dimension is at most the polynomial cap.
    pub matrix: Option<Vec<Vec<Num>>>,
    pub components: Vec<ComponentOut>,
    pub condensation_edges: Vec<[usize; 2]>,
    pub reachable: Vec<usize>,
    pub rho_plus: Num,
    pub dominant_component: Option<usize>,
    pub characteristic_polynomial: Option<PolynomialOut>,
}

#[derive(Debug, Serialize)]
pub struct OracleOut {
    pub report_version: u32,
    pub command: &'static str,
    pub pipeline: &'static str,
    pub order: Num,
    pub length: u64,
    pub strings: u64,
    pub collision_probability: Num,
    pub entropy: Num,
    pub infinite: bool,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
