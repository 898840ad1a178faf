//! Figure recipes. Each maps to a fixed column schema; rows are computed in
//! parallel and emitted in grid order.

use rayon::prelude::*;
use serde_json::{json, Value};

use qudit_magic::bounds::{
    bound_mana_strange, bound_numeric, bound_renyi, bound_thermal, bound_thermal_no_processing, bound_unital_inf,
};
use qudit_magic::copies::{noisy_strange_log, Noise};
use qudit_magic::entropy::{entropy_zero_crossing, renyi_entropy_alpha, RenyiOrder};
use qudit_magic::thermal::{a12_mix, thermal_state, StabilizerSpectrum, ThermalContext};
use qudit_magic::{ComplexMatrix, Error};

use crate::config::ExactValue;
use crate::error::CliError;
use crate::output::{LogBase, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig3a,
    Fig3b,
    Fig4,
    SuppEntropyContour,
}

impl std::str::FromStr for FigureId {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "fig1" => Ok(FigureId::Fig1),
            "fig3a" => Ok(FigureId::Fig3a),
            "fig3b" => Ok(FigureId::Fig3b),
            "fig4" => Ok(FigureId::Fig4),
            "supp-entropy-contour" | "supp_entropy_contour" => Ok(FigureId::SuppEntropyContour),
            _ => Err(CliError::Parse(format!(
                "unknown figure {s:?} (fig1, fig3a, fig3b, fig4, supp-entropy-contour)"
            ))),
        }
    }
}

impl FigureId {
    pub fn file_stem(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4 => "fig4",
            FigureId::SuppEntropyContour => "supp_entropy_contour",
        }
    }

    /// Default grids, as grid strings.
    pub fn default_grid(self, key: &str) -> &'static str {
        match (self, key) {
            (FigureId::Fig1, "eps_grid") => "0:0.42:0.01",
            (FigureId::Fig3a | FigureId::Fig3b, "eps_grid") => "0:0.42:0.01",
            (FigureId::Fig3a | FigureId::Fig3b, "beta_grid") => "0:2:0.05",
            (FigureId::Fig4, "p_grid" | "q_grid") => "0:1:0.05",
            (FigureId::SuppEntropyContour, "alpha_grid") => "1.02:4:0.02",
            (FigureId::SuppEntropyContour, "eps_grid") => "0:0.7:0.05",
            _ => "0",
        }
    }
}

/// `eps, R_inf, R_mana, R_10, R_num_<n>` at fixed `ε'`.
pub fn fig1(eps_grid: &[ExactValue], eps_prime: &ExactValue, n: usize) -> Result<(Table, Value), CliError> {
    let num_col = format!("R_num_{n}");
    let mut t = Table::new(&["eps", "R_inf", "R_mana", "R_10", &num_col]);
    let ten = RenyiOrder::new(5, 1)?;
    let ep = eps_prime.to_f64();
    t.rows = eps_grid
        .par_iter()
        .map(|e| -> Result<Vec<f64>, CliError> {
            let x = e.to_f64();
            Ok(vec![
                x,
                bound_unital_inf(x, ep)?.rate,
                bound_mana_strange(x, ep)?.rate,
                bound_renyi(x, ep, ten)?.rate,
                bound_numeric(&Noise::Exact(e.value.clone()), &Noise::Exact(eps_prime.value.clone()), n)?.rate,
            ])
        })
        .collect::<Result<_, _>>()?;
    Ok((t, json!({ "figure": "fig1", "eps_prime": ep, "n": n, "renyi_order": ten.to_string(), "r_inf_valid_for_eps_up_to": "3/7" })))
}

/// No Clifford processing: `beta, eps, R, eps_star, beta_star`.
pub fn fig3a(
    beta_grid: &[ExactValue],
    eps_grid: &[ExactValue],
    eps_prime: &ExactValue,
    h: &ComplexMatrix,
    h_prime: &ComplexMatrix,
) -> Result<(Table, Value), CliError> {
    let spec = StabilizerSpectrum::from_hamiltonian(h)?;
    let spec_prime = StabilizerSpectrum::from_hamiltonian(h_prime)?;
    let ep = eps_prime.to_f64();
    let mut t = Table::new(&["beta", "eps", "R", "eps_star", "beta_star"]);
    let cells: Vec<(f64, f64)> = grid2(beta_grid, eps_grid);
    t.rows = cells
        .par_iter()
        .map(|&(b, e)| -> Result<Vec<f64>, CliError> {
            let r = bound_thermal_no_processing(e, ep, b, &spec, &spec_prime)?;
            Ok(vec![b, e, r.rate, spec.eps_star(b), spec.beta_star()])
        })
        .collect::<Result<_, _>>()?;
    Ok((t, json!({ "figure": "fig3a", "eps_prime": ep, "clifford_processing": false })))
}

/// With Clifford processing: `beta, eps, R`.
pub fn fig3b(
    beta_grid: &[ExactValue],
    eps_grid: &[ExactValue],
    eps_prime: &ExactValue,
    h: &ComplexMatrix,
    h_prime: &ComplexMatrix,
) -> Result<(Table, Value), CliError> {
    let ep = eps_prime.to_f64();
    let contexts: Vec<Option<(ThermalContext, ThermalContext)>> = beta_grid
        .par_iter()
        .map(|b| -> Result<_, CliError> {
            let b = b.to_f64();
            match (thermal_state(h, b), thermal_state(h_prime, b)) {
                (Ok((_, c)), Ok((_, c2))) => Ok(Some((c, c2))),
                (Err(Error::NotInterior(_)), _) | (_, Err(Error::NotInterior(_))) => Ok(None),
                (Err(e), _) | (_, Err(e)) => Err(e.into()),
            }
        })
        .collect::<Result<_, _>>()?;
    let mut t = Table::new(&["beta", "eps", "R"]);
    let cells: Vec<(usize, usize)> =
        (0..beta_grid.len()).flat_map(|i| (0..eps_grid.len()).map(move |j| (i, j))).collect();
    t.rows = cells
        .par_iter()
        .map(|&(i, j)| -> Result<Vec<f64>, CliError> {
            let (b, e) = (beta_grid[i].to_f64(), eps_grid[j].to_f64());
            let rate = match &contexts[i] {
                Some((c, c2)) => bound_thermal(e, ep, c, c2)?.rate,
                None => f64::NAN,
            };
            Ok(vec![b, e, rate])
        })
        .collect::<Result<_, _>>()?;
    Ok((t, json!({ "figure": "fig3b", "eps_prime": ep, "clifford_processing": true })))
}

/// Output Hamiltonian `(1−p−q)A_0 + pA_(1,2) + q·diag(0,1,2)`: `p, q, R`.
/// `R` is NaN where the output Gibbs state is not interior.
pub fn fig4(
    p_grid: &[ExactValue],
    q_grid: &[ExactValue],
    eps: &ExactValue,
    eps_prime: &ExactValue,
    beta: &ExactValue,
    h: &ComplexMatrix,
) -> Result<(Table, Value), CliError> {
    let (e, ep, b) = (eps.to_f64(), eps_prime.to_f64(), beta.to_f64());
    let (_, ctx_in) = thermal_state(h, b)?;
    let mut t = Table::new(&["p", "q", "R"]);
    t.rows = grid2(p_grid, q_grid)
        .par_iter()
        .map(|&(p, q)| -> Result<Vec<f64>, CliError> {
            let rate = match thermal_state(&a12_mix(p, q), b) {
                Ok((_, ctx_out)) => bound_thermal(e, ep, &ctx_in, &ctx_out)?.rate,
                Err(Error::NotInterior(_)) => f64::NAN,
                Err(err) => return Err(err.into()),
            };
            Ok(vec![p, q, rate])
        })
        .collect::<Result<_, _>>()?;
    Ok((t, json!({ "figure": "fig4", "eps": e, "eps_prime": ep, "beta": b })))
}

/// `alpha, eps, H_alpha, zero_contour`: `H_α` of the noisy Strange state and,
/// per `ε`, the order where it crosses zero.
pub fn supp_entropy_contour(
    alpha_grid: &[ExactValue],
    eps_grid: &[ExactValue],
    log_base: LogBase,
) -> Result<(Table, Value), CliError> {
    let roots: Vec<f64> = eps_grid
        .par_iter()
        .map(|e| -> Result<f64, CliError> {
            let w = noisy_strange_log(e.to_f64())?.0.into_values();
            Ok(entropy_zero_crossing(&w, 1.0 + 1e-9, 64.0, 1e-13).unwrap_or(f64::NAN))
        })
        .collect::<Result<_, _>>()?;
    let cells: Vec<(usize, usize)> =
        (0..alpha_grid.len()).flat_map(|i| (0..eps_grid.len()).map(move |j| (i, j))).collect();
    let mut t = Table::new(&["alpha", "eps", "H_alpha", "zero_contour"]);
    t.rows = cells
        .par_iter()
        .map(|&(i, j)| -> Result<Vec<f64>, CliError> {
            let (a, e) = (alpha_grid[i].to_f64(), eps_grid[j].to_f64());
            let w = noisy_strange_log(e)?.0.into_values();
            let h = if a == 1.0 { f64::NAN } else { log_base.convert(renyi_entropy_alpha(&w, a)) };
            Ok(vec![a, e, h, roots[j]])
        })
        .collect::<Result<_, _>>()?;
    Ok((t, json!({ "figure": "supp_entropy_contour", "log_base": log_base.name() })))
}

fn grid2(outer: &[ExactValue], inner: &[ExactValue]) -> Vec<(f64, f64)> {
    outer.iter().flat_map(|a| inner.iter().map(move |b| (a.to_f64(), b.to_f64()))).collect()
}
