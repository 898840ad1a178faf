//! Rényi entropies and divergences of quasi-distributions.
//!
//! For orders `α = 2a/(2b−1)` with integers `a ≥ b ≥ 1`, `w^α = |w|^α` is
//! real for negative `w`, and `H_α(w) = (1−α)⁻¹ log Σ|w_i|^α` is Schur-concave
//! on quasi-distributions. Everything is evaluated in the log domain.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::parse_rational;
use crate::wigner::mana;

/// An admissible Rényi order `α = 2a/(2b − 1)`, `a ≥ b ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RenyiOrder {
    a: u32,
    b: u32,
}

impl RenyiOrder {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if b == 0 || a < b {
            return Err(Error::InadmissibleOrder(format!("a = {a}, b = {b}")));
        }
        Ok(RenyiOrder { a, b })
    }

    /// The order equal to the rational `num/den`, if admissible: in lowest
    /// terms the numerator must be even, the denominator odd, and `α > 1`.
    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        let bad = || Error::InadmissibleOrder(format!("{num}/{den}"));
        if den == 0 {
            return Err(bad());
        }
        let g = num_integer::gcd(num, den);
        let (p, q) = (num / g, den / g);
        if p % 2 != 0 || q % 2 == 0 || p <= q {
            return Err(bad());
        }
        let a = u32::try_from(p / 2).map_err(|_| bad())?;
        let b = u32::try_from((q + 1) / 2).map_err(|_| bad())?;
        Self::new(a, b)
    }

    /// Parses `"10"`, `"10/9"` or `"1.5"` (exactly) into an admissible order.
    pub fn parse(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        let bad = || Error::InadmissibleOrder(s.to_string());
        let num = u64::try_from(r.numer().clone()).map_err(|_| bad())?;
        let den = u64::try_from(r.denom().clone()).map_err(|_| bad())?;
        Self::from_ratio(num, den)
    }

    pub fn a(self) -> u32 {
        self.a
    }
    pub fn b(self) -> u32 {
        self.b
    }

    pub fn alpha(self) -> f64 {
        2.0 * f64::from(self.a) / (2.0 * f64::from(self.b) - 1.0)
    }

    /// `α − 1 = (2(a − b) + 1)/(2b − 1)`, computed without cancellation.
    pub fn alpha_minus_one(self) -> f64 {
        (2.0 * f64::from(self.a - self.b) + 1.0) / (2.0 * f64::from(self.b) - 1.0)
    }

    /// Whether both orders denote the same `α`.
    pub fn same_alpha(self, o: Self) -> bool {
        u64::from(self.a) * (2 * u64::from(o.b) - 1) == u64::from(o.a) * (2 * u64::from(self.b) - 1)
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = (2 * u64::from(self.a), 2 * u64::from(self.b) - 1);
        let g = num_integer::gcd(p, q);
        if q / g == 1 { write!(f, "{}", p / g) } else { write!(f, "{}/{}", p / g, q / g) }
    }
}

/// The default optimization grid: all `2a/(2b−1)` with `b ≤ a ≤ 12`, plus
/// `10` and `100/99`, without repeated values, sorted by `α`.
pub fn default_order_grid() -> Vec<RenyiOrder> {
    let mut out: Vec<RenyiOrder> = Vec::new();
    let extra = [RenyiOrder { a: 5, b: 1 }, RenyiOrder { a: 50, b: 50 }];
    for o in (1..=12).flat_map(|a| (1..=a).map(move |b| RenyiOrder { a, b })).chain(extra) {
        if !out.iter().any(|x| x.same_alpha(o)) {
            out.push(o);
        }
    }
    out.sort_by(|x, y| x.alpha().total_cmp(&y.alpha()));
    out
}

/// `ln Σ exp(x_i)` over finite entries; `−∞` for an empty sum.
pub fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln Σ |w_i|^α` for any real `α > 0`.
pub fn log_power_sum(w: &[f64], alpha: f64) -> f64 {
    log_sum_exp(w.iter().filter(|v| **v != 0.0).map(move |v| alpha * v.abs().ln()))
}

/// `H_α(w)` at an admissible order.
pub fn renyi_entropy(w: &[f64], order: RenyiOrder) -> f64 {
    -log_power_sum(w, order.alpha()) / order.alpha_minus_one()
}

/// `(1−α)⁻¹ ln Σ|w_i|^α` at an arbitrary real `α ≠ 1`. Only admissible
/// orders carry the monotonicity guarantees; arbitrary `α` is for plotting
/// and root finding.
pub fn renyi_entropy_alpha(w: &[f64], alpha: f64) -> f64 {
    log_power_sum(w, alpha) / (1.0 - alpha)
}

/// Bisection for a sign change of `α ↦ H_α(w)` on `[lo, hi]` (both `≠ 1`),
/// to absolute tolerance `tol`. `None` if the endpoints have the same sign.
pub fn entropy_zero_crossing(w: &[f64], lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (renyi_entropy_alpha(w, a), renyi_entropy_alpha(w, b));
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return None;
    }
    let neg_at_a = fa < 0.0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if (renyi_entropy_alpha(w, m) < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

fn check_reference(w: &[f64], r: &[f64]) -> Result<()> {
    if w.len() != r.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: r.len() });
    }
    match r.iter().position(|&x| x <= 0.0) {
        Some(i) => Err(Error::NonPositiveReference(i)),
        None => Ok(()),
    }
}

/// `D_α(w‖r) = (α−1)⁻¹ ln Σ |w_i|^α r_i^{1−α}`.
pub fn renyi_divergence(w: &[f64], r: &[f64], order: RenyiOrder) -> Result<f64> {
    check_reference(w, r)?;
    let alpha = order.alpha();
    let terms = w
        .iter()
        .zip(r)
        .filter(|(v, _)| **v != 0.0)
        .map(move |(v, ri)| alpha * v.abs().ln() + (1.0 - alpha) * ri.ln());
    Ok(log_sum_exp(terms) / order.alpha_minus_one())
}

/// `D_∞(w‖r) = ln max_i w_i/r_i`, the log of the Lorenz curve's first slope.
pub fn d_infinity(w: &[f64], r: &[f64]) -> Result<f64> {
    check_reference(w, r)?;
    Ok(w.iter().zip(r).map(|(v, ri)| v / ri).fold(f64::NEG_INFINITY, f64::max).ln())
}

/// One step of the mana-residue sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueStep {
    pub b: u32,
    /// `ε_b = 2b/(2b−1) − 1 = 1/(2b−1)`.
    pub eps: f64,
    /// `−ε_b H_{1+ε_b}(w) = ln Σ|w_i|^{1+ε_b}`.
    pub value: f64,
    /// `mana(w) − value`.
    pub gap: f64,
}

/// Residue of `H_α` at the pole `α = 1`, approached along admissible orders.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManaResidue {
    pub mana: f64,
    pub steps: Vec<ResidueStep>,
}

impl ManaResidue {
    pub fn last(&self) -> &ResidueStep {
        self.steps.last().expect("b_max >= 1")
    }
}

/// Evaluates `−ε H_{1+ε}(w)` for `ε_b = 1/(2b − 1)`, `b = 1..=b_max`; the
/// sequence tends to `mana(w) = ln Σ|w_i|`.
pub fn mana_residue(w: &[f64], b_max: u32) -> ManaResidue {
    let m = mana(w);
    let steps = (1..=b_max.max(1))
        .map(|b| {
            let order = RenyiOrder { a: b, b };
            let eps = order.alpha_minus_one();
            let value = log_power_sum(w, order.alpha());
            ResidueStep { b, eps, value, gap: m - value }
        })
        .collect();
    ManaResidue { mana: m, steps }
}

/// Searches the orders `α = 2b/(2b−1)` for `b = 1, 2, 4, …, 2^30` (so `α`
/// descends towards 1) and returns the first with `H_α(w) < 0`. Any
/// quasi-distribution with negative entries has one close enough to 1; no
/// probability distribution has any.
pub fn negative_entropy_witness(w: &[f64]) -> Option<RenyiOrder> {
    (0..=30).map(|k| RenyiOrder { a: 1 << k, b: 1 << k }).find(|&o| renyi_entropy(w, o) < 0.0)
}
