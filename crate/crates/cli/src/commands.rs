//! Single-evaluation subcommands: `wigner`, `lorenz`, `bound`.

use std::path::Path;

use serde_json::{json, Value};

use qudit_magic::bounds::{
    bound_mana_strange, bound_numeric, bound_renyi, bound_renyi_optimized, bound_thermal, bound_thermal_no_processing,
    bound_unital_inf, BoundResult,
};
use qudit_magic::copies::{noisy_strange_exact, noisy_strange_wigner_exact, pairs_from_vectors, pairs_power, Noise};
use qudit_magic::scalar::ratio_to_f64;
use qudit_magic::entropy::{default_order_grid, RenyiOrder};
use qudit_magic::majorization::LorenzCurve;
use qudit_magic::thermal::{thermal_state, StabilizerSpectrum};
use qudit_magic::wigner::{hermiticity_defect, wigner_of_state};
use qudit_magic::{states, BigRational, Complex64, ComplexMatrix, PhaseSpace, PrimeDim};

use crate::config::{parse_density_matrix, ExactValue};
use crate::error::CliError;
use crate::output::{csv_footer, fmt_f64, to_json_string, Format, LogBase, Table};

const STATE_TOL: f64 = 1e-9;

/// A state spec: `strange`, `mixed`, `basis:K`, or `file:PATH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateSpec {
    Strange,
    Mixed,
    Basis(usize),
    File(String),
}

impl std::str::FromStr for StateSpec {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        match s {
            "strange" => Ok(StateSpec::Strange),
            "mixed" => Ok(StateSpec::Mixed),
            _ => {
                if let Some(k) = s.strip_prefix("basis:") {
                    k.parse().map(StateSpec::Basis).map_err(|e| CliError::Parse(format!("basis index {k:?}: {e}")))
                } else if let Some(p) = s.strip_prefix("file:") {
                    Ok(StateSpec::File(p.to_string()))
                } else {
                    Err(CliError::Parse(format!("unknown state {s:?} (strange, mixed, basis:K, file:PATH)")))
                }
            }
        }
    }
}

/// Builds `(1 − ε)ρ + ε 𝟙/D` and checks it is a density matrix.
pub fn load_state(spec: &StateSpec, d: PrimeDim, eps: f64) -> Result<(ComplexMatrix, usize), CliError> {
    let dd = d.get() as usize;
    let rho = match spec {
        StateSpec::Strange if dd == 3 => states::strange_state(),
        StateSpec::Strange => return Err(CliError::Domain("the Strange state is a qutrit state (d = 3)".into())),
        StateSpec::Mixed => states::maximally_mixed(d, 1),
        StateSpec::Basis(k) if *k < dd => states::basis_state(d, *k),
        StateSpec::Basis(k) => return Err(CliError::Domain(format!("basis index {k} ≥ d = {dd}"))),
        StateSpec::File(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{p}: {e}")))?;
            parse_density_matrix(&text)?
        }
    };
    let dim = rho.nrows();
    let mut n = 0;
    let mut m = 1;
    while m < dim {
        m *= dd;
        n += 1;
    }
    if m != dim || n == 0 {
        return Err(CliError::Domain(format!("matrix size {dim} is not a positive power of d = {dd}")));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(CliError::Domain(format!("noise ε = {eps} must lie in [0, 1]")));
    }
    let rho = rho * Complex64::new(1.0 - eps, 0.0)
        + ComplexMatrix::identity(dim, dim) * Complex64::new(eps / dim as f64, 0.0);
    check_density_matrix(&rho)?;
    Ok((rho, n))
}

fn check_density_matrix(rho: &ComplexMatrix) -> Result<(), CliError> {
    let herm = hermiticity_defect(rho);
    if herm > STATE_TOL {
        return Err(CliError::Domain(format!("invalid density matrix: not Hermitian (deviation {herm:e})")));
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
        return Err(CliError::Domain(format!("invalid density matrix: trace {tr}")));
    }
    let sym = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let min = sym.symmetric_eigenvalues().min();
    if min < -STATE_TOL {
        return Err(CliError::Domain(format!("invalid density matrix: eigenvalue {min:e}")));
    }
    Ok(())
}

/// Table of `W_ρ(z)` with a negativity footer.
pub fn cmd_wigner(spec: &StateSpec, d: PrimeDim, eps: &ExactValue, format: Format, base: LogBase) -> Result<String, CliError> {
    let (rho, n) = load_state(spec, d, eps.to_f64())?;
    let w = wigner_of_state(&rho, d)?;
    let space = PhaseSpace::new(d, n)?;
    let (values, sn, mana) = if let (StateSpec::Strange, 3) = (spec, d.get()) {
        // The Strange family is known in closed form; print correctly rounded values.
        let exact = noisy_strange_wigner_exact(&eps.value)?;
        let zero = BigRational::from_integer(0.into());
        let sn: BigRational = exact.iter().filter(|x| **x < zero).map(|x| -x).sum();
        let values: Vec<f64> = exact.iter().map(ratio_to_f64).collect();
        let mana = (1.0 + 2.0 * ratio_to_f64(&sn)).ln();
        (values, ratio_to_f64(&sn), mana)
    } else {
        (w.values().to_vec(), w.sum_negativity(), w.mana())
    };
    let mana = base.convert(mana);
    Ok(match format {
        Format::Csv => {
            let mut header: Vec<String> = (1..=n).map(|i| format!("q_{i}")).collect();
            header.extend((1..=n).map(|i| format!("p_{i}")));
            header.push("value".into());
            let mut s = header.join(",");
            s.push('\n');
            for (z, v) in space.points().zip(&values) {
                let coords: Vec<String> = z.q().iter().chain(z.p()).map(|c| c.to_string()).collect();
                s.push_str(&format!("{},{}\n", coords.join(","), fmt_f64(*v)));
            }
            csv_footer(&mut s, &[("sum_negativity", fmt_f64(sn)), ("mana", fmt_f64(mana)), ("log_base", base.name().into())]);
            s
        }
        Format::Json => {
            let points: Vec<Value> = space
                .points()
                .zip(&values)
                .map(|(z, v)| json!({ "q": z.q(), "p": z.p(), "value": v }))
                .collect();
            to_json_string(&json!({
                "d": d.get(),
                "n": n,
                "points": points,
                "sum_negativity": sn,
                "mana": mana,
                "log_base": base.name(),
            }))
        }
    })
}

/// Reference distribution for `lorenz`.
#[derive(Clone, Debug)]
pub enum Reference {
    Uniform,
    Thermal { beta: f64, hamiltonian: ComplexMatrix },
}

/// Lorenz curve of `n` copies of the (noisy) state against the reference.
pub fn lorenz_curve(spec: &StateSpec, d: PrimeDim, eps: &ExactValue, n: usize, reference: &Reference) -> Result<LorenzCurve<f64>, CliError> {
    if n == 0 {
        return Err(CliError::Domain("need n ≥ 1 copies".into()));
    }
    // Exact path for the Strange family against the uniform reference.
    if let (StateSpec::Strange, Reference::Uniform, 3) = (spec, reference, d.get()) {
        let (_, single) = noisy_strange_exact(&eps.value)?;
        return Ok(pairs_power(&single, n)?.lorenz().to_f64());
    }
    let (rho, n_state) = load_state(spec, d, eps.to_f64())?;
    let w = wigner_of_state(&rho, d)?.into_values();
    let r = match reference {
        Reference::Uniform => vec![1.0 / w.len() as f64; w.len()],
        Reference::Thermal { beta, hamiltonian } => {
            if n_state != 1 || hamiltonian.nrows() != d.get() as usize {
                return Err(CliError::Domain("thermal references are single-qudit; use a single-qudit state".into()));
            }
            thermal_state(hamiltonian, *beta)?.1.wigner.into_values()
        }
    };
    let single = pairs_from_vectors(d, &w, &r)?;
    Ok(pairs_power(&single, n)?.lorenz())
}

pub fn render_curve(curve: &LorenzCurve<f64>, format: Format, metadata: Value) -> String {
    let mut t = Table::new(&["x", "L"]);
    t.rows = curve.points().iter().map(|(x, y)| vec![*x, *y]).collect();
    t.render(format, metadata)
}

/// File name for one `(n, ε)` Lorenz curve.
pub fn lorenz_file_name(n: usize, eps: &ExactValue, format: Format) -> String {
    let tag: String = eps.text.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' }).collect();
    format!("lorenz_n{n}_eps{tag}.{}", format.extension())
}

/// Bound methods exposed by `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Unital,
    Mana,
    Numeric,
    Renyi,
    RenyiOptimized,
    Thermal,
    NoProcessing,
}

impl std::str::FromStr for Method {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "unital" => Method::Unital,
            "mana" => Method::Mana,
            "numeric" => Method::Numeric,
            "renyi" => Method::Renyi,
            "renyi-optimized" | "renyi_optimized" => Method::RenyiOptimized,
            "thermal" => Method::Thermal,
            "no-processing" | "no_processing" => Method::NoProcessing,
            _ => {
                return Err(CliError::Parse(format!(
                    "unknown method {s:?} (unital, mana, numeric, renyi, renyi-optimized, thermal, no-processing)"
                )))
            }
        })
    }
}

/// Fully resolved parameters for `bound`.
#[derive(Clone, Debug)]
pub struct BoundParams {
    pub eps: ExactValue,
    pub eps_prime: ExactValue,
    pub n: usize,
    pub order: RenyiOrder,
    pub orders: Option<Vec<RenyiOrder>>,
    pub beta: f64,
    pub beta_prime: f64,
    pub hamiltonian: ComplexMatrix,
    pub hamiltonian_prime: ComplexMatrix,
}

pub fn cmd_bound(method: Method, p: &BoundParams) -> Result<BoundResult, CliError> {
    let (e, ep) = (p.eps.to_f64(), p.eps_prime.to_f64());
    Ok(match method {
        Method::Unital => bound_unital_inf(e, ep)?,
        Method::Mana => bound_mana_strange(e, ep)?,
        Method::Numeric => bound_numeric(&Noise::Exact(p.eps.value.clone()), &Noise::Exact(p.eps_prime.value.clone()), p.n)?,
        Method::Renyi => bound_renyi(e, ep, p.order)?,
        Method::RenyiOptimized => {
            let grid = p.orders.clone().unwrap_or_else(default_order_grid);
            bound_renyi_optimized(e, ep, &grid)?
        }
        Method::Thermal => {
            let (_, c) = thermal_state(&p.hamiltonian, p.beta)?;
            let (_, c2) = thermal_state(&p.hamiltonian_prime, p.beta_prime)?;
            bound_thermal(e, ep, &c, &c2)?
        }
        Method::NoProcessing => {
            if p.beta != p.beta_prime {
                return Err(CliError::Domain("the no-processing bound uses one temperature; beta_prime must equal beta".into()));
            }
            let s = StabilizerSpectrum::from_hamiltonian(&p.hamiltonian)?;
            let s2 = StabilizerSpectrum::from_hamiltonian(&p.hamiltonian_prime)?;
            bound_thermal_no_processing(e, ep, p.beta, &s, &s2)?
        }
    })
}

pub fn render_bound(r: &BoundResult) -> String {
    to_json_string(&serde_json::to_value(r).expect("bound results serialize"))
}

/// Parses a comma-separated list of orders such as `2,10/9,4/3`.
pub fn parse_orders(s: &str) -> Result<Vec<RenyiOrder>, CliError> {
    s.split(',').map(|t| Ok(RenyiOrder::parse(t.trim())?)).collect()
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    if dir.as_os_str() != "-" {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strange_wigner_table() {
        let csv = cmd_wigner(&StateSpec::Strange, PrimeDim::QUTRIT, &ExactValue::parse("0").unwrap(), Format::Csv, LogBase::E).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "q_1,p_1,value");
        assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 10);
        assert!(lines[1].starts_with("0,0,-3.33333333333333"));
    }

    #[test]
    fn single_copy_curve_has_three_points() {
        let eps = ExactValue::parse("0").unwrap();
        let c = lorenz_curve(&StateSpec::Strange, PrimeDim::QUTRIT, &eps, 1, &Reference::Uniform).unwrap();
        assert_eq!(c.points().len(), 3);
        assert!((c.points()[1].0 - 8.0 / 9.0).abs() < 1e-15 && (c.points()[1].1 - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_states_are_domain_errors() {
        assert_eq!(load_state(&StateSpec::Strange, PrimeDim::new(5).unwrap(), 0.0).unwrap_err().exit_code(), 2);
        assert_eq!("basis:x".parse::<StateSpec>().unwrap_err().exit_code(), 3);
    }

    #[test]
    fn file_names() {
        assert_eq!(lorenz_file_name(4, &ExactValue::parse("1/10").unwrap(), Format::Csv), "lorenz_n4_eps1_10.csv");
    }
}
