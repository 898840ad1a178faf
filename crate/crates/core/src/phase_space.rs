//! Discrete phase space of `n` qudits of odd prime dimension `d`.
//!
//! Points are `z = (q_1, …, q_n, p_1, …, p_n)` with entries in `Z_d`. The
//! displacement operators are `D_(q,p) = τ^{qp} X^q Z^p` with `ω = e^{2πi/d}`
//! and `τ = −e^{iπ/d} = ω^{(d+1)/2}`, and the phase-point operators are
//!
//! ```text
//! A_z = d^{-n} Σ_y ω^{η(z,y)} D_y,     η(z,y) = q_y·p_z − p_y·q_z  (mod d).
//! ```
//!
//! Every `A_z` is a monomial matrix (one non-zero entry per row), which is what
//! makes Wigner transforms cheap: see [`PhaseSpace::trace_with`].

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix in the computational basis.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Default cap on the Hilbert-space dimension `d^n`: six qutrits.
pub const DEFAULT_MAX_DIM: usize = 729;

/// An odd prime local dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeDim(u32);

impl PrimeDim {
    pub const QUTRIT: PrimeDim = PrimeDim(3);

    pub fn new(d: u32) -> Result<Self> {
        if d < 3 || d % 2 == 0 || (3..).step_by(2).take_while(|k| k * k <= d).any(|k| d % k == 0) {
            return Err(Error::NotOddPrime(d));
        }
        Ok(PrimeDim(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub(crate) fn us(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u32> for PrimeDim {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        PrimeDim::new(d)
    }
}

impl From<PrimeDim> for u32 {
    fn from(d: PrimeDim) -> u32 {
        d.0
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A point `(q, p)` of the phase space `Z_d^{2n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhasePoint {
    d: PrimeDim,
    q: Vec<u32>,
    p: Vec<u32>,
}

impl PhasePoint {
    /// Builds a point, reducing every coordinate mod `d`.
    pub fn new(d: PrimeDim, q: &[i64], p: &[i64]) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::NoSubsystems);
        }
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: q.len(), found: p.len() });
        }
        let m = i64::from(d.get());
        let red = |v: &[i64]| v.iter().map(|x| x.rem_euclid(m) as u32).collect();
        Ok(PhasePoint { d, q: red(q), p: red(p) })
    }

    /// Single-qudit point `(q, p)`.
    pub fn single(d: PrimeDim, q: i64, p: i64) -> Self {
        Self::new(d, &[q], &[p]).expect("one subsystem")
    }

    /// The origin of an `n`-qudit phase space.
    pub fn origin(d: PrimeDim, n: usize) -> Self {
        PhasePoint { d, q: vec![0; n], p: vec![0; n] }
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }
    pub fn n(&self) -> usize {
        self.q.len()
    }
    pub fn q(&self) -> &[u32] {
        &self.q
    }
    pub fn p(&self) -> &[u32] {
        &self.p
    }

    /// Negates the momenta: the time-reversed point `z̄ = (q, −p)`.
    pub fn time_reversed(&self) -> Self {
        let d = self.d.get();
        PhasePoint { d: self.d, q: self.q.clone(), p: self.p.iter().map(|&x| (d - x) % d).collect() }
    }

    /// Componentwise sum mod `d`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let d = self.d.get();
        let s = |a: &[u32], b: &[u32]| a.iter().zip(b).map(|(x, y)| (x + y) % d).collect();
        Ok(PhasePoint { d: self.d, q: s(&self.q, &other.q), p: s(&self.p, &other.p) })
    }

    /// Concatenation `z ⊕ y` of points on two subsystem blocks.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d.us(), found: other.d.us() });
        }
        let mut q = self.q.clone();
        q.extend_from_slice(&other.q);
        let mut p = self.p.clone();
        p.extend_from_slice(&other.p);
        Ok(PhasePoint { d: self.d, q, p })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d.us(), found: other.d.us() });
        }
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        Ok(())
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.q.iter().chain(&self.p).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The symplectic form `η(z, y) = q_y·p_z − p_y·q_z mod d`.
pub fn symplectic_product(z: &PhasePoint, y: &PhasePoint) -> Result<u32> {
    z.check_same(y)?;
    let d = u64::from(z.d.get());
    let mut acc = 0u64;
    for k in 0..z.n() {
        let qp = u64::from(y.q[k]) * u64::from(z.p[k]) % d;
        let pq = u64::from(y.p[k]) * u64::from(z.q[k]) % d;
        acc = (acc + qp + d - pq) % d;
    }
    Ok(acc as u32)
}

/// Powers `ω^k`, `k = 0..d`, computed once from `cos`/`sin` so that every phase
/// used downstream is an exactly repeated d-th root of unity.
#[derive(Clone, Debug)]
struct Roots {
    d: u64,
    pow: Vec<Complex64>,
}

impl Roots {
    fn new(d: PrimeDim) -> Self {
        let dd = d.get();
        let pow = (0..dd)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(dd)))
            .collect();
        Roots { d: u64::from(dd), pow }
    }

    /// `ω^k` for any integer exponent.
    fn omega(&self, k: i64) -> Complex64 {
        self.pow[k.rem_euclid(self.d as i64) as usize]
    }

    /// `τ^k` with `τ = ω^{(d+1)/2}`.
    fn tau(&self, k: i64) -> Complex64 {
        let half = ((self.d + 1) / 2) as i64;
        self.omega((k.rem_euclid(self.d as i64)) * half)
    }
}

/// A monomial matrix: row `i` has the single entry `phase[i]` in column `col[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub col: Vec<usize>,
    pub phase: Vec<Complex64>,
}

impl Monomial {
    fn from_dense(m: &ComplexMatrix) -> Self {
        let mut col = Vec::with_capacity(m.nrows());
        let mut phase = Vec::with_capacity(m.nrows());
        for i in 0..m.nrows() {
            let (j, v) = (0..m.ncols())
                .map(|j| (j, m[(i, j)]))
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .expect("non-empty row");
            col.push(j);
            phase.push(v);
        }
        Monomial { col, phase }
    }
}

/// The phase space of `n` qudits of dimension `d`, with cached single-qudit
/// operators.
#[derive(Clone, Debug)]
pub struct PhaseSpace {
    d: PrimeDim,
    n: usize,
    roots: Roots,
    /// Single-qudit `A_(q,p)` in monomial form, indexed by `q·d + p`.
    local: Vec<Monomial>,
}

impl PhaseSpace {
    /// Phase space for `n` qudits with the default size cap.
    pub fn new(d: PrimeDim, n: usize) -> Result<Self> {
        Self::with_max_dim(d, n, DEFAULT_MAX_DIM)
    }

    /// Phase space with an explicit cap on `d^n`.
    pub fn with_max_dim(d: PrimeDim, n: usize, max_dim: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoSubsystems);
        }
        let dim = (d.us()).checked_pow(n as u32).unwrap_or(usize::MAX);
        if dim > max_dim {
            return Err(Error::TooLarge { dim, max: max_dim });
        }
        let roots = Roots::new(d);
        let mut space = PhaseSpace { d, n, roots, local: Vec::new() };
        space.local = (0..d.us() * d.us())
            .map(|i| {
                let z = PhasePoint::single(d, (i / d.us()) as i64, (i % d.us()) as i64);
                Monomial::from_dense(&space.single_phase_point_by_sum(&z))
            })
            .collect();
        Ok(space)
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }
    pub fn n(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension `d^n`.
    pub fn hilbert_dim(&self) -> usize {
        self.d.us().pow(self.n as u32)
    }

    /// Number of phase-space points `d^{2n}`.
    pub fn num_points(&self) -> usize {
        self.hilbert_dim() * self.hilbert_dim()
    }

    /// Index of `z` in the canonical order: big-endian over `(q_1, …, q_n, p_1, …, p_n)`.
    pub fn index(&self, z: &PhasePoint) -> Result<usize> {
        self.check(z)?;
        let d = self.d.us();
        Ok(z.q.iter().chain(&z.p).fold(0, |acc, &v| acc * d + v as usize))
    }

    /// Inverse of [`PhaseSpace::index`].
    pub fn point(&self, mut idx: usize) -> PhasePoint {
        let d = self.d.us();
        let mut coords = vec![0u32; 2 * self.n];
        for c in coords.iter_mut().rev() {
            *c = (idx % d) as u32;
            idx /= d;
        }
        let p = coords.split_off(self.n);
        PhasePoint { d: self.d, q: coords, p }
    }

    /// All points in canonical order.
    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.num_points()).map(|i| self.point(i))
    }

    fn check(&self, z: &PhasePoint) -> Result<()> {
        if z.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d.us(), found: z.d.us() });
        }
        if z.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: z.n() });
        }
        Ok(())
    }

    fn single_displacement(&self, q: u32, p: u32) -> ComplexMatrix {
        let d = self.d.us();
        let tau = self.roots.tau(i64::from(q) * i64::from(p));
        let mut m = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            m[((k + q as usize) % d, k)] = tau * self.roots.omega(i64::from(p) * k as i64);
        }
        m
    }

    /// Displacement operator `D_z`, the tensor product of the single-qudit
    /// `τ^{q_k p_k} X^{q_k} Z^{p_k}` (subsystem 1 leftmost).
    pub fn displacement_operator(&self, z: &PhasePoint) -> Result<ComplexMatrix> {
        self.check(z)?;
        Ok(self.kron_all((0..self.n).map(|k| self.single_displacement(z.q[k], z.p[k]))))
    }

    fn single_phase_point_by_sum(&self, z: &PhasePoint) -> ComplexMatrix {
        let d = self.d.us();
        let mut acc = ComplexMatrix::zeros(d, d);
        for q in 0..d as u32 {
            for p in 0..d as u32 {
                let y = PhasePoint { d: self.d, q: vec![q], p: vec![p] };
                let eta = symplectic_product(z, &y).expect("same space");
                acc += self.single_displacement(q, p) * self.roots.omega(i64::from(eta));
            }
        }
        acc / Complex64::from(d as f64)
    }

    /// Phase-point operator `A_z` as a dense matrix, assembled as the tensor
    /// product of single-qudit operators.
    pub fn phase_point_operator(&self, z: &PhasePoint) -> Result<ComplexMatrix> {
        self.check(z)?;
        let d = self.d.us();
        Ok(self.kron_all((0..self.n).map(|k| {
            let mono = &self.local[z.q[k] as usize * d + z.p[k] as usize];
            let mut m = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                m[(i, mono.col[i])] = mono.phase[i];
            }
            m
        })))
    }

    /// Phase-point operator evaluated straight from the defining sum over all
    /// `d^{2n}` displacements. Slow; meant for cross-checks.
    pub fn phase_point_operator_by_sum(&self, z: &PhasePoint) -> Result<ComplexMatrix> {
        self.check(z)?;
        let dim = self.hilbert_dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for y in self.points() {
            let eta = symplectic_product(z, &y)?;
            acc += self.displacement_operator(&y)? * self.roots.omega(i64::from(eta));
        }
        Ok(acc / Complex64::from(dim as f64))
    }

    /// Monomial form of the single-qudit operator `A_(q,p)`.
    pub fn local_monomial(&self, q: u32, p: u32) -> &Monomial {
        &self.local[(q as usize % self.d.us()) * self.d.us() + p as usize % self.d.us()]
    }

    /// `tr[A_z M]` for the point with canonical index `z_idx`, in `O(d^n)`.
    pub fn trace_with(&self, z_idx: usize, m: &ComplexMatrix) -> Complex64 {
        let d = self.d.us();
        let z = self.point(z_idx);
        let locals: Vec<&Monomial> = (0..self.n).map(|k| &self.local[z.q[k] as usize * d + z.p[k] as usize]).collect();
        let mut sum = Complex64::new(0.0, 0.0);
        // Depth-first walk over the row multi-index, accumulating the column
        // index and the product of local phases.
        let mut stack: Vec<(usize, usize, usize, Complex64)> = vec![(0, 0, 0, Complex64::new(1.0, 0.0))];
        while let Some((level, row, col, ph)) = stack.pop() {
            if level == self.n {
                // A[row, col] · M[col, row]
                sum += ph * m[(col, row)];
                continue;
            }
            let loc = locals[level];
            for i in 0..d {
                stack.push((level + 1, row * d + i, col * d + loc.col[i], ph * loc.phase[i]));
            }
        }
        sum
    }

    fn kron_all(&self, mats: impl Iterator<Item = ComplexMatrix>) -> ComplexMatrix {
        mats.reduce(|acc, m| acc.kronecker(&m)).expect("n >= 1")
    }
}
