//! Wigner representation of states and channels.
//!
//! `W_ρ(z) = d^{-n} tr[A_z ρ]`, and a channel `E` with Choi state
//! `J = (id ⊗ E)|φ⁺⟩⟨φ⁺|` is represented by the real matrix
//! `W_E(y|z) = d_A² W_J(z̄ ⊕ y)`, where `z̄` negates the momenta of `z`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{ComplexMatrix, PhasePoint, PhaseSpace, PrimeDim};

/// Normalization slack for Wigner vectors and density matrices.
pub const NORM_TOL: f64 = 1e-10;
/// Eigenvalue floor and trace slack accepted for Choi states.
pub const CHOI_TOL: f64 = 1e-8;

/// A real quasi-probability vector over the `d^{2n}` phase-space points, in
/// the canonical point order of [`PhaseSpace::index`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiDistribution {
    d: PrimeDim,
    n: usize,
    values: Vec<f64>,
}

impl QuasiDistribution {
    /// Validates length, normalization and the `|W(z)| ≤ d^{-n}` bound that
    /// every physical Wigner function obeys.
    pub fn new(d: PrimeDim, n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoSubsystems);
        }
        let hd = d.get().pow(n as u32) as usize;
        if values.len() != hd * hd {
            return Err(Error::DimensionMismatch { expected: hd * hd, found: values.len() });
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(total));
        }
        let bound = 1.0 / hd as f64;
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| v.abs() > bound + NORM_TOL) {
            return Err(Error::OutOfRange { index, value, bound });
        }
        Ok(QuasiDistribution { d, n, values })
    }

    /// The uniform distribution, Wigner function of the maximally mixed state.
    pub fn uniform(d: PrimeDim, n: usize) -> Self {
        let len = (d.get() as usize).pow(2 * n as u32);
        QuasiDistribution { d, n, values: vec![1.0 / len as f64; len] }
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a phase point.
    pub fn get(&self, z: &PhasePoint) -> Result<f64> {
        let s = PhaseSpace::with_max_dim(self.d, self.n, usize::MAX)?;
        Ok(self.values[s.index(z)?])
    }

    pub fn sum_negativity(&self) -> f64 {
        sum_negativity(&self.values)
    }
    pub fn mana(&self) -> f64 {
        mana(&self.values)
    }
    pub fn is_free(&self, tol: f64) -> bool {
        is_free(&self.values, tol)
    }

    /// Wigner function of the product state `ρ_self ⊗ ρ_other`, which is the
    /// pointwise product over `z_A ⊕ z_B`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d.get() as usize, found: other.d.get() as usize });
        }
        let values = tensor_values(self.d, self.n, &self.values, other.n, &other.values);
        Ok(QuasiDistribution { d: self.d, n: self.n + other.n, values })
    }

    /// Convex (or affine) combination `p·self + (1−p)·other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| p * a + (1.0 - p) * b).collect();
        QuasiDistribution::new(self.d, self.n, values)
    }
}

/// Index of `z_A ⊕ z_B` given the canonical indices of `z_A` (on `n_a`
/// qudits) and `z_B` (on `n_b` qudits).
pub fn concat_index(d: PrimeDim, n_a: usize, ia: usize, n_b: usize, ib: usize) -> usize {
    let d = d.get() as usize;
    let ha = d.pow(n_a as u32);
    let hb = d.pow(n_b as u32);
    let (qa, pa) = (ia / ha, ia % ha);
    let (qb, pb) = (ib / hb, ib % hb);
    (qa * hb + qb) * ha * hb + pa * hb + pb
}

fn tensor_values(d: PrimeDim, n_a: usize, a: &[f64], n_b: usize, b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() * b.len()];
    for (ia, &va) in a.iter().enumerate() {
        for (ib, &vb) in b.iter().enumerate() {
            out[concat_index(d, n_a, ia, n_b, ib)] = va * vb;
        }
    }
    out
}

/// Number of qudits `n` with `d^n = dim`.
fn qudit_count(d: PrimeDim, dim: usize) -> Result<usize> {
    let dd = d.get() as usize;
    let mut n = 0;
    let mut acc = 1usize;
    while acc < dim {
        acc *= dd;
        n += 1;
    }
    if acc != dim || n == 0 {
        return Err(Error::DimensionMismatch { expected: acc, found: dim });
    }
    Ok(n)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Wigner values of an arbitrary square operator, without any state checks.
/// Returns `d^{-n} tr[A_z M]` as complex numbers.
pub fn wigner_values_raw(space: &PhaseSpace, m: &ComplexMatrix) -> Vec<Complex64> {
    let scale = 1.0 / space.hilbert_dim() as f64;
    (0..space.num_points()).map(|i| space.trace_with(i, m) * scale).collect()
}

fn real_parts(raw: Vec<Complex64>) -> Result<Vec<f64>> {
    raw.into_iter()
        .map(|c| if c.im.abs() > NORM_TOL { Err(Error::ComplexWignerValue(c.im)) } else { Ok(c.re) })
        .collect()
}

/// Wigner distribution of a density matrix on `n` qudits of dimension `d`
/// (`n` is inferred from the matrix size).
///
/// The caller is responsible for positivity; Hermiticity and unit trace are
/// checked to `1e-10`.
pub fn wigner_of_state(rho: &ComplexMatrix, d: PrimeDim) -> Result<QuasiDistribution> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch { expected: rho.nrows(), found: rho.ncols() });
    }
    let n = qudit_count(d, rho.nrows())?;
    let herm = hermiticity_defect(rho);
    if herm > NORM_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
        return Err(Error::NotNormalized(tr.re));
    }
    let space = PhaseSpace::with_max_dim(d, n, usize::MAX)?;
    let values = real_parts(wigner_values_raw(&space, rho))?;
    QuasiDistribution::new(d, n, values)
}

/// Reconstructs `ρ = Σ_z W(z) A_z`.
pub fn state_from_wigner(w: &QuasiDistribution) -> ComplexMatrix {
    let space = PhaseSpace::with_max_dim(w.d, w.n, usize::MAX).expect("validated distribution");
    let d = w.d.get() as usize;
    let dim = space.hilbert_dim();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for (idx, &value) in w.values.iter().enumerate() {
        if value == 0.0 {
            continue;
        }
        let z = space.point(idx);
        // Expand the tensor-product monomial row by row.
        for row in 0..dim {
            let mut col = 0;
            let mut ph = Complex64::new(value, 0.0);
            let mut rest = row;
            let mut digits = vec![0; w.n];
            for k in (0..w.n).rev() {
                digits[k] = rest % d;
                rest /= d;
            }
            for (k, &i) in digits.iter().enumerate() {
                let m = space.local_monomial(z.q()[k], z.p()[k]);
                col = col * d + m.col[i];
                ph *= m.phase[i];
            }
            rho[(row, col)] += ph;
        }
    }
    rho
}

/// Sum of the magnitudes of the negative entries.
pub fn sum_negativity(w: &[f64]) -> f64 {
    w.iter().filter(|v| **v < 0.0).map(|v| -v).sum()
}

/// Mana `log(2·sn + 1) = log Σ|w_i|` (natural log).
pub fn mana(w: &[f64]) -> f64 {
    (2.0 * sum_negativity(w) + 1.0).ln()
}

/// Whether every entry is at least `-tol`.
pub fn is_free(w: &[f64], tol: f64) -> bool {
    w.iter().all(|&v| v >= -tol)
}

/// Wigner representation `W(y|z)` of a channel from `n_in` to `n_out` qudits:
/// rows are output points `y`, columns input points `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelWigner {
    d: PrimeDim,
    n_in: usize,
    n_out: usize,
    matrix: DMatrix<f64>,
}

impl ChannelWigner {
    /// Wraps a matrix, checking shape, column sums and the entry bound
    /// `|W(y|z)| ≤ d^{n_in}/d^{n_out}`.
    pub fn from_matrix(d: PrimeDim, n_in: usize, n_out: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let dd = d.get() as usize;
        let (rows, cols) = (dd.pow(2 * n_out as u32), dd.pow(2 * n_in as u32));
        if matrix.nrows() != rows {
            return Err(Error::DimensionMismatch { expected: rows, found: matrix.nrows() });
        }
        if matrix.ncols() != cols {
            return Err(Error::DimensionMismatch { expected: cols, found: matrix.ncols() });
        }
        for c in 0..cols {
            let s: f64 = matrix.column(c).sum();
            if (s - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(s));
            }
        }
        let bound = dd.pow(n_in as u32) as f64 / dd.pow(n_out as u32) as f64;
        if let Some((index, value)) = matrix.iter().enumerate().find(|(_, v)| v.abs() > bound + NORM_TOL) {
            return Err(Error::OutOfRange { index, value: *value, bound });
        }
        Ok(ChannelWigner { d, n_in, n_out, matrix })
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }
    pub fn n_in(&self) -> usize {
        self.n_in
    }
    pub fn n_out(&self) -> usize {
        self.n_out
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Wigner representation of the channel whose Choi state on `A ⊗ B`
/// (input copy leftmost) is `choi`.
pub fn wigner_of_channel(choi: &ComplexMatrix, d: PrimeDim, n_in: usize, n_out: usize) -> Result<ChannelWigner> {
    let dd = d.get() as usize;
    let (da, db) = (dd.pow(n_in as u32), dd.pow(n_out as u32));
    if choi.nrows() != da * db || choi.ncols() != da * db {
        return Err(Error::DimensionMismatch { expected: da * db, found: choi.nrows() });
    }
    check_choi(choi, da, db)?;
    let space = PhaseSpace::with_max_dim(d, n_in + n_out, usize::MAX)?;
    let w_j = real_parts(wigner_values_raw(&space, choi))?;
    let space_in = PhaseSpace::with_max_dim(d, n_in, usize::MAX)?;
    let scale = (da * da) as f64;
    let mut m = DMatrix::<f64>::zeros(db * db, da * da);
    for iz in 0..da * da {
        let zbar = space_in.index(&space_in.point(iz).time_reversed())?;
        for iy in 0..db * db {
            m[(iy, iz)] = scale * w_j[concat_index(d, n_in, zbar, n_out, iy)];
        }
    }
    ChannelWigner::from_matrix(d, n_in, n_out, m)
}

fn check_choi(j: &ComplexMatrix, da: usize, db: usize) -> Result<()> {
    let herm = hermiticity_defect(j);
    if herm > CHOI_TOL {
        return Err(Error::NotCptp(format!("Choi matrix not Hermitian (deviation {herm:e})")));
    }
    let tr = j.trace();
    if (tr.re - 1.0).abs() > CHOI_TOL {
        return Err(Error::NotCptp(format!("Choi trace {} ≠ 1", tr.re)));
    }
    // Trace preservation: tr_B J = 𝟙/d_A.
    for a in 0..da {
        for a2 in 0..da {
            let s: Complex64 = (0..db).map(|b| j[(a * db + b, a2 * db + b)]).sum();
            let target = if a == a2 { 1.0 / da as f64 } else { 0.0 };
            if (s - target).norm() > CHOI_TOL {
                return Err(Error::NotCptp("partial trace over the output is not maximally mixed".into()));
            }
        }
    }
    let sym = (j + j.adjoint()) * Complex64::new(0.5, 0.0);
    let min = sym.symmetric_eigenvalues().min();
    if min < -CHOI_TOL {
        return Err(Error::NotCptp(format!("Choi matrix has eigenvalue {min:e}")));
    }
    Ok(())
}

/// `W_{E(ρ)}(y) = Σ_z W_E(y|z) W_ρ(z)`.
pub fn apply_channel(we: &ChannelWigner, w: &QuasiDistribution) -> Result<QuasiDistribution> {
    if we.d != w.d || we.n_in != w.n {
        return Err(Error::DimensionMismatch { expected: we.matrix.ncols(), found: w.len() });
    }
    let v = &we.matrix * nalgebra::DVector::from_column_slice(&w.values);
    QuasiDistribution::new(we.d, we.n_out, v.iter().copied().collect())
}

/// Whether all entries are `≥ −tol` and every column sums to 1 within `tol`.
pub fn is_stochastic(we: &ChannelWigner, tol: f64) -> bool {
    we.matrix.iter().all(|&v| v >= -tol) && we.matrix.column_iter().all(|c| (c.sum() - 1.0).abs() <= tol)
}
