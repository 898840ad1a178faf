//! Upper bounds on the distillation rate `R = m/n` for
//! `ρ_S(ε)^{⊗n} → ρ_S(ε')^{⊗m}` and related conversions.
//!
//! Every bound is a ratio `numerator/denominator` of monotones. A
//! non-positive denominator means the monotone places no constraint: the
//! result carries rate `+∞` and the [`BoundFlag::Unbounded`] flag. A
//! non-positive numerator means no copies can be distilled: the rate is
//! clamped to 0 with [`BoundFlag::NoDistillation`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::copies::{noisy_strange_exact, noisy_strange_log, pairs_power, Noise, PairList, PairValue};
use crate::entropy::{renyi_divergence, renyi_entropy, RenyiOrder};
use crate::error::{domain, Error, Result};
use crate::majorization::curve_dominates;
use crate::scalar::Scalar;
use crate::thermal::{ln_partition, StabilizerSpectrum, ThermalContext};
use crate::wigner::mana;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    UnitalInf,
    Mana,
    Numeric,
    Renyi,
    Thermal,
    ThermalNoProcessing,
    Divergence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFlag {
    /// The bound is non-positive: no output copies are possible.
    NoDistillation,
    /// The denominator is non-positive: the monotone gives no constraint.
    Unbounded,
}

/// A rate bound with its inputs and supporting data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub method: BoundMethod,
    pub params: BTreeMap<String, Value>,
    /// Non-negative, or `+∞` when [`BoundFlag::Unbounded`] (serialized as `null`).
    pub rate: f64,
    pub flags: Vec<BoundFlag>,
    pub diagnostics: Option<Value>,
}

impl BoundResult {
    fn ratio(method: BoundMethod, params: BTreeMap<String, Value>, num: f64, den: f64) -> Self {
        let (rate, flags) = if den <= 0.0 {
            (f64::INFINITY, vec![BoundFlag::Unbounded])
        } else if num <= 0.0 {
            (0.0, vec![BoundFlag::NoDistillation])
        } else {
            (num / den, vec![])
        };
        BoundResult { method, params, rate, flags, diagnostics: Some(json!({ "numerator": num, "denominator": den })) }
    }

    pub fn is_unbounded(&self) -> bool {
        self.flags.contains(&BoundFlag::Unbounded)
    }

    pub fn no_distillation(&self) -> bool {
        self.flags.contains(&BoundFlag::NoDistillation)
    }

    fn with_diagnostic(mut self, key: &str, v: Value) -> Self {
        if let Some(Value::Object(m)) = &mut self.diagnostics {
            m.insert(key.to_string(), v);
        }
        self
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_pair(eps: f64, eps_prime: f64, max: f64, inclusive: bool) -> Result<()> {
    let upper_ok = if inclusive { eps <= max } else { eps < max };
    if !(eps_prime >= 0.0 && eps_prime <= eps && upper_ok) {
        let rel = if inclusive { "≤" } else { "<" };
        return Err(domain(format!("need 0 ≤ ε' ≤ ε {rel} {max}, got ε = {eps}, ε' = {eps_prime}")));
    }
    Ok(())
}

/// `R∞ = log(3 − 4ε)/log(3 − 4ε')`, from the first elbow of the unital
/// Lorenz curves.
///
/// The first elbow is set by the negative entry only while `ε ≤ 3/7`; past
/// that the positive entries dominate and this closed form is no longer an
/// upper bound (it reaches 0 at `ε = 1/2` although distillation is still
/// allowed). [`bound_numeric`] uses [`first_elbow_rate`] instead.
pub fn bound_unital_inf(eps: f64, eps_prime: f64) -> Result<BoundResult> {
    check_pair(eps, eps_prime, 0.75, false)?;
    let p = params(&[("eps", json!(eps)), ("eps_prime", json!(eps_prime))]);
    Ok(BoundResult::ratio(BoundMethod::UnitalInf, p, (3.0 - 4.0 * eps).ln(), (3.0 - 4.0 * eps_prime).ln()))
}

/// Asymptotic first-elbow rate `log(9 w⋆(ε))/log(9 w⋆(ε'))`, where `w⋆` is the
/// largest modulus among the Wigner entries of the noisy Strange state. Equal
/// to [`bound_unital_inf`] for `ε, ε' ≤ 3/7` and a valid upper bound on all of
/// `[0, 3/4)`.
pub fn first_elbow_rate(eps: f64, eps_prime: f64) -> Result<f64> {
    check_pair(eps, eps_prime, 0.75, false)?;
    let top = |e: f64| (3.0 - 4.0 * e).max(1.5 - 0.5 * e);
    Ok(top(eps).ln() / top(eps_prime).ln())
}

/// Mana ratio `M(w_in)/M(w_out)` of two single-copy quasi-distributions.
pub fn bound_mana(w_in: &[f64], w_out: &[f64]) -> Result<BoundResult> {
    let p = params(&[("input_len", json!(w_in.len())), ("output_len", json!(w_out.len()))]);
    Ok(BoundResult::ratio(BoundMethod::Mana, p, mana(w_in), mana(w_out)))
}

/// Mana bound for noisy Strange states: `1 + log(1 − 8ε/15)/log(5/3)` at `ε' = 0`.
pub fn bound_mana_strange(eps: f64, eps_prime: f64) -> Result<BoundResult> {
    check_pair(eps, eps_prime, 0.75, false)?;
    let (w_in, _) = noisy_strange_log(eps)?;
    let (w_out, _) = noisy_strange_log(eps_prime)?;
    let mut r = bound_mana(w_in.values(), w_out.values())?;
    r.params = params(&[("eps", json!(eps)), ("eps_prime", json!(eps_prime))]);
    Ok(r)
}

/// Arithmetic used by [`bound_numeric_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Rational,
    LogFloat,
}

/// Full-majorization bound `m⋆/n`, in exact arithmetic when both noise
/// levels are exact and log-float arithmetic otherwise.
pub fn bound_numeric(eps: &Noise, eps_prime: &Noise, n: usize) -> Result<BoundResult> {
    let precision = if eps.is_exact() && eps_prime.is_exact() { Precision::Rational } else { Precision::LogFloat };
    bound_numeric_with(eps, eps_prime, n, precision)
}

/// `m⋆/n`, where `m⋆` is the largest `m` for which the Lorenz curve of
/// `ρ_S(ε)^{⊗n}` dominates that of `ρ_S(ε')^{⊗m}` (uniform references).
///
/// The search descends from `⌊n R + 1⌋` with `R` from [`first_elbow_rate`]
/// (equal to `R∞` for `ε ≤ 3/7`): any `m` above it already violates the
/// first-elbow constraint, which is one of the majorization conditions.
pub fn bound_numeric_with(eps: &Noise, eps_prime: &Noise, n: usize, precision: Precision) -> Result<BoundResult> {
    if n == 0 {
        return Err(domain("need n >= 1 input copies"));
    }
    let (e, ep) = (eps.to_f64(), eps_prime.to_f64());
    let rate = first_elbow_rate(e, ep)?;
    let ceiling = if rate.is_finite() { (n as f64 * rate + 1.0).floor() as usize } else { 0 };
    let (m_star, checked) = match precision {
        Precision::Rational => {
            let to_exact = |x: &Noise| match x {
                Noise::Exact(r) => Ok(r.clone()),
                Noise::Float(f) => BigRational::from_float(*f).ok_or_else(|| domain("noise is not finite")),
            };
            let (_, a) = noisy_strange_exact(&to_exact(eps)?)?;
            let (_, b) = noisy_strange_exact(&to_exact(eps_prime)?)?;
            search_m(&a, &b, n, ceiling)?
        }
        Precision::LogFloat => {
            let (_, a) = noisy_strange_log(e)?;
            let (_, b) = noisy_strange_log(ep)?;
            search_m(&a, &b, n, ceiling)?
        }
    };
    let p = params(&[("eps", json!(eps.to_string())), ("eps_prime", json!(eps_prime.to_string())), ("n", json!(n))]);
    let mut r = BoundResult::ratio(BoundMethod::Numeric, p, m_star as f64, n as f64);
    r.diagnostics = Some(json!({
        "m_star": m_star,
        "m_ceiling": ceiling,
        "precision": precision,
        "checked": checked,
    }));
    Ok(r)
}

fn search_m<V: PairValue>(a: &PairList<V>, b: &PairList<V>, n: usize, ceiling: usize) -> Result<(usize, Vec<usize>)> {
    let input = pairs_power(a, n)?.lorenz();
    let tol = <V::Coord as Scalar>::dominance_tolerance();
    let mut checked = Vec::new();
    for m in (1..=ceiling).rev() {
        checked.push(m);
        let output = pairs_power(b, m)?.lorenz();
        if curve_dominates(&input, &output, &tol) {
            return Ok((m, checked));
        }
    }
    // Zero output copies is always reachable (trace out everything).
    Ok((0, checked))
}

fn strange_vector(eps: f64) -> Result<Vec<f64>> {
    Ok(noisy_strange_log(eps)?.0.into_values())
}

/// Rényi bound `R_α = (2 log d − H_α(w_in))/(2 log d − H_α(w_out))` for
/// single-copy quasi-distributions on the same phase space.
pub fn bound_renyi_vectors(w_in: &[f64], w_out: &[f64], order: RenyiOrder) -> Result<BoundResult> {
    let log_points_in = (w_in.len() as f64).ln();
    let log_points_out = (w_out.len() as f64).ln();
    let (h_in, h_out) = (renyi_entropy(w_in, order), renyi_entropy(w_out, order));
    let p = params(&[("alpha", json!(order.alpha())), ("order", json!(order.to_string()))]);
    Ok(BoundResult::ratio(BoundMethod::Renyi, p, log_points_in - h_in, log_points_out - h_out)
        .with_diagnostic("h_in", json!(h_in))
        .with_diagnostic("h_out", json!(h_out)))
}

/// Rényi bound for noisy Strange states at one admissible order.
pub fn bound_renyi(eps: f64, eps_prime: f64, order: RenyiOrder) -> Result<BoundResult> {
    check_pair(eps, eps_prime, 0.75, false)?;
    let mut r = bound_renyi_vectors(&strange_vector(eps)?, &strange_vector(eps_prime)?, order)?;
    r.params.insert("eps".into(), json!(eps));
    r.params.insert("eps_prime".into(), json!(eps_prime));
    Ok(r)
}

/// Minimum of [`bound_renyi`] over a grid of orders; the argmin is reported
/// in `params.alpha` / `params.order`.
pub fn bound_renyi_optimized(eps: f64, eps_prime: f64, orders: &[RenyiOrder]) -> Result<BoundResult> {
    if orders.is_empty() {
        return Err(domain("order grid is empty"));
    }
    let all = orders.iter().map(|&o| bound_renyi(eps, eps_prime, o)).collect::<Result<Vec<_>>>()?;
    let best = all.iter().min_by(|a, b| a.rate.total_cmp(&b.rate)).expect("non-empty").clone();
    let grid: Vec<Value> = all.iter().map(|r| json!({ "order": r.params["order"], "rate": r.rate })).collect();
    Ok(best.with_diagnostic("grid", Value::Array(grid)))
}

/// Free-energy bound
/// `[ln(1 − 4ε/3) + β(φ − F)] / [ln(1 − 4ε'/3) + β'(φ' − F')]`.
///
/// Each side uses its own context's `β(φ − F)`; the two β coincide in the
/// intended use. At `β = 0` this reduces to [`bound_unital_inf`].
pub fn bound_thermal(eps: f64, eps_prime: f64, ctx_in: &ThermalContext, ctx_out: &ThermalContext) -> Result<BoundResult> {
    check_pair(eps, eps_prime, 3.0 / 7.0, true)?;
    for c in [ctx_in, ctx_out] {
        if c.energies.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: c.energies.len() });
        }
    }
    let num = (1.0 - 4.0 * eps / 3.0).ln() + ctx_in.beta_phi_minus_f();
    let den = (1.0 - 4.0 * eps_prime / 3.0).ln() + ctx_out.beta_phi_minus_f();
    let p = params(&[
        ("eps", json!(eps)),
        ("eps_prime", json!(eps_prime)),
        ("beta", json!(ctx_in.beta)),
        ("beta_prime", json!(ctx_out.beta)),
    ]);
    Ok(BoundResult::ratio(BoundMethod::Thermal, p, num, den)
        .with_diagnostic("phi", json!(ctx_in.phi))
        .with_diagnostic("phi_prime", json!(ctx_out.phi))
        .with_diagnostic("beta_free_energy", json!(ctx_in.beta_free_energy))
        .with_diagnostic("beta_free_energy_prime", json!(ctx_out.beta_free_energy)))
}

/// Which branch of the no-processing bound a noise level falls in.
fn no_processing_term(eps: f64, beta: f64, spec: &StabilizerSpectrum) -> (f64, bool) {
    let beta_f = -ln_partition(&spec.energies, beta);
    let low = eps <= spec.eps_star(beta) && beta <= spec.beta_star();
    if low {
        ((1.0 - 4.0 * eps / 3.0).ln() + beta * spec.e_s - beta_f, true)
    } else {
        ((0.5 - eps / 6.0).ln() + beta * spec.e_max - beta_f, false)
    }
}

/// Thermal bound when the magic states may not be Clifford pre- or
/// post-processed. Each side uses `ln(1 − 4ε/3) + β(E_s − F)` below its
/// threshold error `ε⋆(β)` and `ln(1/2 − ε/6) + β(E_max − F)` above it.
pub fn bound_thermal_no_processing(
    eps: f64,
    eps_prime: f64,
    beta: f64,
    spec_in: &StabilizerSpectrum,
    spec_out: &StabilizerSpectrum,
) -> Result<BoundResult> {
    check_pair(eps, eps_prime, 3.0 / 7.0, true)?;
    if !beta.is_finite() || beta < 0.0 {
        return Err(domain(format!("inverse temperature must be finite and non-negative, got {beta}")));
    }
    let (num, low_in) = no_processing_term(eps, beta, spec_in);
    let (den, low_out) = no_processing_term(eps_prime, beta, spec_out);
    let p = params(&[("eps", json!(eps)), ("eps_prime", json!(eps_prime)), ("beta", json!(beta))]);
    let label = |low: bool| if low { "low_error" } else { "high_error" };
    let finite_or_null = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
    Ok(BoundResult::ratio(BoundMethod::ThermalNoProcessing, p, num, den)
        .with_diagnostic("case_in", json!(label(low_in)))
        .with_diagnostic("case_out", json!(label(low_out)))
        .with_diagnostic("eps_star", json!(spec_in.eps_star(beta)))
        .with_diagnostic("eps_star_prime", json!(spec_out.eps_star(beta)))
        .with_diagnostic("beta_star", finite_or_null(spec_in.beta_star()))
        .with_diagnostic("beta_star_prime", finite_or_null(spec_out.beta_star())))
}

/// General divergence bound `D_α(w_in‖r_in)/D_α(w_out‖r_out)`, with the
/// output side taken as uncorrelated copies.
pub fn bound_divergence(w_in: &[f64], r_in: &[f64], w_out: &[f64], r_out: &[f64], order: RenyiOrder) -> Result<BoundResult> {
    let num = renyi_divergence(w_in, r_in, order)?;
    let den = renyi_divergence(w_out, r_out, order)?;
    let p = params(&[("alpha", json!(order.alpha())), ("order", json!(order.to_string()))]);
    Ok(BoundResult::ratio(BoundMethod::Divergence, p, num, den))
}
