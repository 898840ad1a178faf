//! Gibbs states, the thermal context of the free-energy bound, and the
//! Hamiltonian presets used in the temperature-dependent sweeps.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::phase_space::{ComplexMatrix, PhasePoint, PhaseSpace, PrimeDim};
use crate::wigner::{hermiticity_defect, wigner_of_state, QuasiDistribution, NORM_TOL};

/// Width of the window in which Wigner values count as tied for the minimum.
const TIE_TOL: f64 = 1e-12;

/// Everything the free-energy bound needs to know about `τ = e^{−βH}/Z`.
///
/// The products `βF = −ln Z` and `βφ = −ln ζ` are stored directly so that the
/// `β → 0` limit stays finite; `F` itself diverges there.
#[derive(Clone, Debug, Serialize)]
pub struct ThermalContext {
    pub beta: f64,
    /// Eigenvalues of `H`, ascending.
    pub energies: Vec<f64>,
    /// Matching eigenvectors as columns.
    #[serde(skip)]
    pub eigenvectors: ComplexMatrix,
    /// `−ln Z`.
    pub beta_free_energy: f64,
    /// `F = −β⁻¹ ln Z` (`−∞` at `β = 0`).
    pub free_energy: f64,
    /// Lexicographically first minimizer of `W_τ`.
    pub z_star: PhasePoint,
    /// `min_z W_τ(z)`.
    pub w_min: f64,
    /// `α_k = ⟨E_k|A_{z⋆}|E_k⟩`.
    pub alpha: Vec<f64>,
    /// `ζ = Σ_k α_k e^{−βE_k}`; may underflow for large `β`, see `ln_zeta`.
    pub zeta: f64,
    pub ln_zeta: f64,
    /// `−ln ζ`.
    pub beta_phi: f64,
    /// `φ = −β⁻¹ ln ζ`, or its limit `Σ α_k E_k` at `β = 0`.
    pub phi: f64,
    /// Wigner function of the Gibbs state.
    #[serde(skip)]
    pub wigner: QuasiDistribution,
}

impl ThermalContext {
    /// `β(φ − F) = ln Z − ln ζ = −ln(d · min W_τ)`.
    pub fn beta_phi_minus_f(&self) -> f64 {
        self.beta_phi - self.beta_free_energy
    }
}

/// `ln Σ_k c_k e^{−βE_k}`, shifted by the smallest energy for stability.
/// Returns `None` if the sum is not positive.
fn ln_weighted_partition(energies: &[f64], coeffs: Option<&[f64]>, beta: f64) -> Option<f64> {
    let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let s: f64 = energies.iter().enumerate().map(|(k, e)| coeffs.map_or(1.0, |c| c[k]) * (-beta * (e - e0)).exp()).sum();
    (s > 0.0).then(|| -beta * e0 + s.ln())
}

/// `ln Z(β)` for a spectrum.
pub fn ln_partition(energies: &[f64], beta: f64) -> f64 {
    ln_weighted_partition(energies, None, beta).expect("positive terms")
}

/// Gibbs state of a single-qudit Hamiltonian and its thermal context.
///
/// Fails with [`Error::NotInterior`] when `W_τ` touches zero or `ζ ≤ 0`, where
/// the magic free energy is undefined.
pub fn thermal_state(h: &ComplexMatrix, beta: f64) -> Result<(ComplexMatrix, ThermalContext)> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(domain(format!("inverse temperature must be finite and non-negative, got {beta}")));
    }
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.nrows(), found: h.ncols() });
    }
    let d = PrimeDim::new(h.nrows() as u32)?;
    let herm = hermiticity_defect(h);
    if herm > NORM_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let eig = ((h + h.adjoint()) * Complex64::new(0.5, 0.0)).symmetric_eigen();
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(h.nrows(), h.nrows(), |i, j| eig.eigenvectors[(i, order[j])]);

    let ln_z = ln_partition(&energies, beta);
    let mut tau = ComplexMatrix::zeros(h.nrows(), h.nrows());
    for (k, e) in energies.iter().enumerate() {
        let p = (-beta * e - ln_z).exp();
        let v = eigenvectors.column(k);
        tau += &v * v.adjoint() * Complex64::new(p, 0.0);
    }
    let wigner = wigner_of_state(&tau, d)?;
    let w_min = wigner.values().iter().cloned().fold(f64::INFINITY, f64::min);
    if w_min <= 0.0 {
        return Err(Error::NotInterior(format!("min W_τ = {w_min:e}")));
    }
    let star = wigner.values().iter().position(|&w| w <= w_min + TIE_TOL).expect("minimum exists");
    let space = PhaseSpace::new(d, 1)?;
    let z_star = space.point(star);
    let a = space.phase_point_operator(&z_star)?;
    let alpha: Vec<f64> = (0..energies.len())
        .map(|k| {
            let v = eigenvectors.column(k);
            (v.adjoint() * &a * v)[(0, 0)].re
        })
        .collect();
    let ln_zeta = ln_weighted_partition(&energies, Some(&alpha), beta)
        .ok_or_else(|| Error::NotInterior("ζ ≤ 0".into()))?;
    let phi = if beta > 0.0 { -ln_zeta / beta } else { alpha.iter().zip(&energies).map(|(a, e)| a * e).sum() };
    let free_energy = if beta > 0.0 { -ln_z / beta } else { f64::NEG_INFINITY };
    let ctx = ThermalContext {
        beta,
        energies,
        eigenvectors,
        beta_free_energy: -ln_z,
        free_energy,
        z_star,
        w_min,
        alpha,
        zeta: ln_zeta.exp(),
        ln_zeta,
        beta_phi: -ln_zeta,
        phi,
        wigner,
    };
    Ok((tau, ctx))
}

/// Spectrum data of a Hamiltonian with a stabilizer eigenbasis, as used by
/// the bound without Clifford pre/post-processing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerSpectrum {
    pub energies: Vec<f64>,
    /// Energy of the eigenstate whose Wigner support contains the origin,
    /// where the Strange state has its negative value.
    pub e_s: f64,
    pub e_max: f64,
}

impl StabilizerSpectrum {
    /// For a Hamiltonian diagonal in the computational basis: `|k⟩` is
    /// supported on the line `q = k`, so `E_s = E_0`.
    pub fn computational(energies: &[f64]) -> Result<Self> {
        if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) {
            return Err(domain("energies must be finite and non-empty"));
        }
        let e_max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(StabilizerSpectrum { energies: energies.to_vec(), e_s: energies[0], e_max })
    }

    /// Diagonalizes `h` and identifies `E_s`; fails if the eigenbasis is not
    /// a stabilizer basis (non-degenerate spectrum required).
    pub fn from_hamiltonian(h: &ComplexMatrix) -> Result<Self> {
        let d = PrimeDim::new(h.nrows() as u32)?;
        let herm = hermiticity_defect(h);
        if herm > NORM_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let eig = ((h + h.adjoint()) * Complex64::new(0.5, 0.0)).symmetric_eigen();
        let energies: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        for (i, a) in energies.iter().enumerate() {
            if energies[..i].iter().any(|b| (a - b).abs() < 1e-9) {
                return Err(domain("degenerate spectrum: the eigenbasis is not unique"));
            }
        }
        let third = 1.0 / f64::from(d.get());
        let mut e_s = None;
        for (k, e) in energies.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let w = wigner_of_state(&(&v * v.adjoint()), d)?;
            if w.values().iter().any(|x| x.abs() > 1e-8 && (x - third).abs() > 1e-8) {
                return Err(domain("eigenbasis is not a stabilizer basis"));
            }
            if w.values()[0] > 0.5 * third {
                e_s = Some(*e);
            }
        }
        let e_max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(StabilizerSpectrum { e_s: e_s.expect("some eigenstate covers the origin"), energies, e_max })
    }

    /// `β⋆ = ln 2 / (E_max − E_s)`; infinite when `E_max = E_s`.
    pub fn beta_star(&self) -> f64 {
        let gap = self.e_max - self.e_s;
        if gap <= 0.0 { f64::INFINITY } else { std::f64::consts::LN_2 / gap }
    }

    /// Threshold error `ε⋆(β) = 3 − 9/(4 − 2^{β/β⋆ − 1})` for `β ≤ β⋆`,
    /// else 0. Written as `(6 − 3c)/(8 − c)` with `c = e^{β(E_max − E_s)}`.
    pub fn eps_star(&self, beta: f64) -> f64 {
        let bs = self.beta_star();
        if beta > bs {
            return 0.0;
        }
        let c = (beta * (self.e_max - self.e_s)).exp();
        ((6.0 - 3.0 * c) / (8.0 - c)).max(0.0)
    }
}

/// `diag(0, 1, 2)`.
pub fn diag012() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0.into(), 1.0.into(), 2.0.into()]))
}

/// The qutrit phase-point operator `A_z` used as a Hamiltonian.
pub fn phase_point_hamiltonian(q: i64, p: i64) -> ComplexMatrix {
    let d = PrimeDim::QUTRIT;
    PhaseSpace::new(d, 1).expect("qutrit").phase_point_operator(&PhasePoint::single(d, q, p)).expect("valid point")
}

/// `(1 − p − q) A_0 + p A_(1,2) + q diag(0,1,2)`.
pub fn a12_mix(p: f64, q: f64) -> ComplexMatrix {
    phase_point_hamiltonian(0, 0) * Complex64::new(1.0 - p - q, 0.0)
        + phase_point_hamiltonian(1, 2) * Complex64::new(p, 0.0)
        + diag012() * Complex64::new(q, 0.0)
}

/// A 3×3 Hermitian from 18 reals, row-major with real and imaginary parts
/// interleaved.
pub fn hamiltonian_from_reals(x: &[f64]) -> Result<ComplexMatrix> {
    if x.len() != 18 {
        return Err(Error::DimensionMismatch { expected: 18, found: x.len() });
    }
    let h = ComplexMatrix::from_fn(3, 3, |i, j| Complex64::new(x[2 * (3 * i + j)], x[2 * (3 * i + j) + 1]));
    let herm = hermiticity_defect(&h);
    if herm > NORM_TOL {
        return Err(Error::NotHermitian(herm));
    }
    Ok(h)
}
