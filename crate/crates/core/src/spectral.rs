//! Spectral radii of irreducible blocks, the growth rate of `u^T A^n 1`,
//! an empirical probe of that growth, and characteristic polynomials.
//!
//! The growth rate of `u^T A^n 1` is the largest spectral radius among the
//! strongly connected components reachable from the support of `u`. No
//! positivity, irreducibility or aperiodicity of `A` is needed.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{associated_graph, strongly_connected_components, ComponentDecomposition};
use crate::matrix::NonnegMatrix;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;
pub const DEFAULT_POLYNOMIAL_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Absolute tolerance on the Perron root.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Perron root of an irreducible non-negative matrix (or of a 1×1 block).
///
/// Runs power iteration on `A + I`, which is primitive whenever `A` is
/// irreducible, so periodic blocks converge too. For a positive iterate
/// `x`, the Collatz–Wielandt ratios `min_i (Bx)_i / x_i` and
/// `max_i (Bx)_i / x_i` bracket `ρ(B)`; iteration stops once the bracket is
/// narrower than the tolerance.
pub fn spectral_radius_irreducible(a: &NonnegMatrix, opts: &SpectralOptions) -> Result<f64> {
    let n = a.dim();
    match n {
        0 => return Ok(0.0),
        1 => return Ok(a.get(0, 0)),
        _ => {}
    }
    let mut x = vec![1.0; n];
    for _ in 0..opts.max_iterations {
        let mut y = a.mul_vec(&x);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut top = 0.0f64;
        for (yi, &xi) in y.iter_mut().zip(&x) {
            *yi += xi;
            let r = *yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
            top = top.max(*yi);
        }
        if !(lo.is_finite() && hi.is_finite()) || top == 0.0 {
            break;
        }
        if hi - lo <= opts.tolerance {
            return Ok((0.5 * (lo + hi) - 1.0).max(0.0));
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / top;
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
    })
}

/// Growth data of `u^T A^n 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthAnalysis {
    pub decomposition: ComponentDecomposition,
    /// Perron root of each component, indexed by component id.
    pub component_radii: Vec<f64>,
    /// Components reachable from the support of `u`.
    pub reachable: BTreeSet<usize>,
    /// Largest radius over reachable components; 0 when none is positive.
    pub rho_plus: f64,
    /// Reachable component attaining `rho_plus` (lowest id on ties).
    pub dominant_component: Option<usize>,
    /// Set when no reachable component has positive radius, i.e. the
    /// weighted sums vanish eventually.
    pub degenerate: bool,
}

pub fn growth_rate(a: &NonnegMatrix, u: &[f64], opts: &SpectralOptions) -> Result<GrowthAnalysis> {
    if u.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            what: "weight vector",
            expected: a.dim(),
            found: u.len(),
        });
    }
    let decomposition = strongly_connected_components(&associated_graph(a)).with_reachable(u);
    let component_radii = decomposition
        .components
        .iter()
        .map(|nodes| spectral_radius_irreducible(&a.principal_submatrix(nodes), opts))
        .collect::<Result<Vec<_>>>()?;
    let reachable = decomposition.reachable.clone().unwrap_or_default();

    let mut rho_plus = 0.0;
    let mut dominant_component = None;
    for &c in &reachable {
        if component_radii[c] > rho_plus {
            rho_plus = component_radii[c];
            dominant_component = Some(c);
        }
    }
    Ok(GrowthAnalysis {
        decomposition,
        component_radii,
        reachable,
        rho_plus,
        degenerate: dominant_component.is_none(),
        dominant_component,
    })
}

/// Natural log of `u^T A^steps 1`, computed with per-step renormalization.
/// Returns `-inf` if the product vanishes.
pub(crate) fn log_weighted_power_sum(a: &NonnegMatrix, u: &[f64], steps: u64) -> f64 {
    let total: f64 = u.iter().sum();
    if total <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut w: Vec<f64> = u.iter().map(|v| v / total).collect();
    let mut next = vec![0.0; w.len()];
    let mut log_scale = total.ln();
    for _ in 0..steps {
        a.left_mul_into(&w, &mut next);
        let s: f64 = next.iter().sum();
        if s <= 0.0 {
            return f64::NEG_INFINITY;
        }
        log_scale += s.ln();
        for (wi, ni) in w.iter_mut().zip(&next) {
            *wi = ni / s;
        }
    }
    log_scale
}

/// `(u^T A^n 1)^(1/n)`, evaluated stably; 0 if the sum vanishes.
pub fn empirical_growth_probe(a: &NonnegMatrix, u: &[f64], n: u64) -> f64 {
    assert!(n >= 1, "probe length must be positive");
    let log_sum = log_weighted_power_sum(a, u, n);
    if log_sum == f64::NEG_INFINITY {
        return 0.0;
    }
    (log_sum / n as f64).exp()
}

/// Monic characteristic polynomial `det(λI − A)`; `coeffs[k]` multiplies
/// `λ^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicPolynomial {
    pub coeffs: Vec<f64>,
}

impl CharacteristicPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Faddeev–LeVerrier recurrence:
/// `M_k = A M_{k-1} + c_{n-k+1} I`, `c_{n-k} = -tr(A M_k) / k`.
pub fn characteristic_polynomial(a: &NonnegMatrix, cap: usize) -> Result<CharacteristicPolynomial> {
    let n = a.dim();
    if n > cap {
        return Err(Error::DimensionOverflow {
            requested: n as u128,
            cap,
        });
    }
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut m = vec![0.0; n * n];
    for k in 1..=n {
        // m <- A m + c_{n-k+1} I
        let mut am = vec![0.0; n * n];
        for (i, j, v) in a.entries() {
            let (dst, src) = (&mut am[i * n..(i + 1) * n], &m[j * n..(j + 1) * n]);
            for (d, s) in dst.iter_mut().zip(src) {
                *d += v * s;
            }
        }
        for i in 0..n {
            am[i * n + i] += coeffs[n - k + 1];
        }
        m = am;
        // tr(A m)
        let trace: f64 = a.entries().map(|(i, j, v)| v * m[j * n + i]).sum();
        coeffs[n - k] = -trace / k as f64;
    }
    Ok(CharacteristicPolynomial { coeffs })
}
