//! Named states, stabilizer states and standard channels (as Choi matrices).

use num_complex::Complex64;

use crate::phase_space::{ComplexMatrix, PhasePoint, PhaseSpace, PrimeDim};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector, normalized.
pub fn projector(psi: &[Complex64]) -> ComplexMatrix {
    let v = nalgebra::DVector::from_column_slice(psi);
    let v = &v / c(v.norm());
    &v * v.adjoint()
}

/// Computational basis state `|k⟩⟨k|` of one qudit.
pub fn basis_state(d: PrimeDim, k: usize) -> ComplexMatrix {
    let dd = d.get() as usize;
    let mut m = ComplexMatrix::zeros(dd, dd);
    m[(k % dd, k % dd)] = c(1.0);
    m
}

/// `𝟙/d^n`.
pub fn maximally_mixed(d: PrimeDim, n: usize) -> ComplexMatrix {
    let dim = (d.get() as usize).pow(n as u32);
    ComplexMatrix::identity(dim, dim) / c(dim as f64)
}

/// The qutrit Strange state `(|1⟩ − |2⟩)/√2`, whose Wigner function has the
/// single negative value `−1/3` at the origin.
///
/// With the parity-centred phase-point operators used here, `(|1⟩ + |2⟩)/√2`
/// carries the same spectrum of Wigner values but places `+1/3` at the origin
/// and two negative entries elsewhere; the relative minus sign puts the
/// negativity on a single point.
pub fn strange_state() -> ComplexMatrix {
    projector(&[c(0.0), c(1.0), c(-1.0)])
}

/// `ρ_S(ε) = (1−ε)|S⟩⟨S| + ε𝟙/3`.
pub fn noisy_strange_state(eps: f64) -> ComplexMatrix {
    strange_state() * c(1.0 - eps) + maximally_mixed(PrimeDim::QUTRIT, 1) * c(eps)
}

/// The `d(d+1)` single-qudit pure stabilizer states, as projectors: the
/// eigenstates of `Z` and of `D_(1,p)` for every `p`.
pub fn stabilizer_states(d: PrimeDim) -> Vec<ComplexMatrix> {
    let dd = d.get() as usize;
    let space = PhaseSpace::new(d, 1).expect("single qudit");
    let omega = |k: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % dd) as f64 / dd as f64);
    let mut out: Vec<ComplexMatrix> = (0..dd).map(|k| basis_state(d, k)).collect();
    for p in 0..dd {
        let g = space.displacement_operator(&PhasePoint::single(d, 1, p as i64)).expect("valid point");
        for j in 0..dd {
            // Spectral projector (1/d) Σ_m (ω^{-j} D)^m; D has order d.
            let mut proj = ComplexMatrix::zeros(dd, dd);
            let mut power = ComplexMatrix::identity(dd, dd);
            for m in 0..dd {
                proj += &power * omega((dd - j) * m % dd);
                power = &power * &g;
            }
            out.push(proj / c(dd as f64));
        }
    }
    out
}

/// Choi state `J = Σ_K (𝟙 ⊗ K)|φ⁺⟩⟨φ⁺|(𝟙 ⊗ K†)` of the channel with Kraus
/// operators `kraus` (each `d_out × d_in`), with `|φ⁺⟩ = d_in^{-1/2} Σ_k |kk⟩`.
pub fn choi_from_kraus(kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let (db, da) = kraus[0].shape();
    let mut j = ComplexMatrix::zeros(da * db, da * db);
    let s = c(1.0 / (da as f64).sqrt());
    for k in kraus {
        let v = nalgebra::DVector::from_fn(da * db, |idx, _| k[(idx % db, idx / db)] * s);
        j += &v * v.adjoint();
    }
    j
}

/// Choi state of `ρ ↦ UρU†`.
pub fn choi_of_unitary(u: &ComplexMatrix) -> ComplexMatrix {
    choi_from_kraus(std::slice::from_ref(u))
}

/// Choi state of the map sending every input on `n_in` qudits to the
/// maximally mixed state on `n_out` qudits: `𝟙/(d_A d_B)`.
pub fn completely_depolarizing_choi(d: PrimeDim, n_in: usize, n_out: usize) -> ComplexMatrix {
    maximally_mixed(d, n_in + n_out)
}

/// Choi state of the depolarizing channel `ρ ↦ (1−ε)ρ + ε tr[ρ] 𝟙/d`.
pub fn depolarizing_choi(d: PrimeDim, eps: f64) -> ComplexMatrix {
    choi_of_unitary(&ComplexMatrix::identity(d.get() as usize, d.get() as usize)) * c(1.0 - eps)
        + completely_depolarizing_choi(d, 1, 1) * c(eps)
}

/// The qutrit Fourier gate `|j⟩ ↦ 3^{-1/2} Σ_k ω^{jk}|k⟩`, a Clifford unitary.
pub fn qutrit_fourier() -> ComplexMatrix {
    let w = |k: usize| Complex64::from_polar(1.0 / 3f64.sqrt(), 2.0 * std::f64::consts::PI * (k % 3) as f64 / 3.0);
    ComplexMatrix::from_fn(3, 3, |k, j| w(j * k))
}

/// The non-Clifford qutrit phase gate `diag(1, e^{2πi/9}, e^{−2πi/9})`.
pub fn qutrit_t_gate() -> ComplexMatrix {
    let a = 2.0 * std::f64::consts::PI / 9.0;
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(1.0),
        Complex64::from_polar(1.0, a),
        Complex64::from_polar(1.0, -a),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wigner::wigner_of_state;

    #[test]
    fn stabilizer_states_are_pure_and_distinct() {
        for dd in [3, 5] {
            let d = PrimeDim::new(dd).unwrap();
            let st = stabilizer_states(d);
            assert_eq!(st.len(), (dd * (dd + 1)) as usize);
            for (i, s) in st.iter().enumerate() {
                assert!((s.trace().re - 1.0).abs() < 1e-12);
                assert!((s * s - s).norm() < 1e-12);
                for t in &st[..i] {
                    assert!((s - t).norm() > 0.5);
                }
                let w = wigner_of_state(s, d).unwrap();
                assert!(w.is_free(1e-12));
            }
        }
    }

    #[test]
    fn choi_of_identity_is_maximally_entangled() {
        let j = choi_of_unitary(&ComplexMatrix::identity(3, 3));
        assert!((j.trace().re - 1.0).abs() < 1e-15);
        assert!((&j * &j - &j).norm() < 1e-14);
        assert!((j[(0, 4)].re - 1.0 / 3.0).abs() < 1e-15);
    }
}
