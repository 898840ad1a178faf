//! n-copy machinery for distributions with few distinct values.
//!
//! A [`PairList`] stores the distinct `(value, reference)` pairs of a
//! distribution together with their multiplicities, so `ρ^{⊗n}` costs a
//! multinomial expansion instead of `d^{2n}` storage. Values are either exact
//! rationals or sign-tracked logarithms ([`SignedLog`]), which survive
//! `v(ε)^n` underflow for `n` in the hundreds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::majorization::LorenzCurve;
use crate::phase_space::PrimeDim;
use crate::scalar::{binomial, ln_abs_ratio, ln_biguint, parse_rational, Scalar};
use crate::wigner::QuasiDistribution;

/// Relative tolerance (as a difference of logarithms) for merging float values.
pub const LOG_MERGE_TOL: f64 = 1e-12;

/// A real number stored as `sign · exp(ln_abs)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignedLog {
    pub sign: i8,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, ln_abs: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1, ln_abs: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog { sign: if x < 0.0 { -1 } else { 1 }, ln_abs: x.abs().ln() }
        }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        let (sign, ln_abs) = ln_abs_ratio(r);
        SignedLog { sign, ln_abs }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.ln_abs.exp()
    }

    pub fn mul(self, o: Self) -> Self {
        if self.sign == 0 || o.sign == 0 {
            return Self::ZERO;
        }
        SignedLog { sign: self.sign * o.sign, ln_abs: self.ln_abs + o.ln_abs }
    }

    pub fn powi(self, k: u32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && k % 2 == 1 { -1 } else { 1 };
        SignedLog { sign, ln_abs: self.ln_abs * f64::from(k) }
    }

    /// Total order on the represented reals.
    pub fn cmp_value(&self, o: &Self) -> Ordering {
        match self.sign.cmp(&o.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.ln_abs.total_cmp(&o.ln_abs),
                _ => o.ln_abs.total_cmp(&self.ln_abs),
            },
            ord => ord,
        }
    }
}

impl fmt::Display for SignedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.ln_abs),
        }
    }
}

/// Value type of a [`PairList`]: exact rationals or [`SignedLog`] floats.
pub trait PairValue: Clone + fmt::Debug + Send + Sync {
    /// Coordinate field of the resulting Lorenz curves.
    type Coord: Scalar;

    fn one() -> Self;
    fn product(&self, o: &Self) -> Self;
    fn power(&self, k: u32) -> Self;
    /// Total order on values.
    fn cmp_value(&self, o: &Self) -> Ordering;
    /// Whether two values should be merged into one pair.
    fn same(&self, o: &Self) -> bool;
    /// Compares `w1/r1` with `w2/r2` for positive `r`.
    fn cmp_ratio(w1: &Self, r1: &Self, w2: &Self, r2: &Self) -> Ordering;
    /// `m · self` as a curve coordinate.
    fn scaled(&self, m: &BigUint) -> Self::Coord;
    fn to_f64(&self) -> f64;
    fn is_negative(&self) -> bool;
}

impl PairValue for BigRational {
    type Coord = BigRational;

    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn product(&self, o: &Self) -> Self {
        self * o
    }
    fn power(&self, k: u32) -> Self {
        Scalar::powi(self, k)
    }
    fn cmp_value(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn same(&self, o: &Self) -> bool {
        self == o
    }
    fn cmp_ratio(w1: &Self, r1: &Self, w2: &Self, r2: &Self) -> Ordering {
        (w1 * r2).cmp(&(w2 * r1))
    }
    fn scaled(&self, m: &BigUint) -> BigRational {
        self * BigRational::from_integer(BigInt::from(m.clone()))
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl PairValue for SignedLog {
    type Coord = f64;

    fn one() -> Self {
        SignedLog::ONE
    }
    fn product(&self, o: &Self) -> Self {
        self.mul(*o)
    }
    fn power(&self, k: u32) -> Self {
        self.powi(k)
    }
    fn cmp_value(&self, o: &Self) -> Ordering {
        SignedLog::cmp_value(self, o)
    }
    fn same(&self, o: &Self) -> bool {
        self.sign == o.sign && (self.sign == 0 || (self.ln_abs - o.ln_abs).abs() <= LOG_MERGE_TOL)
    }
    fn cmp_ratio(w1: &Self, r1: &Self, w2: &Self, r2: &Self) -> Ordering {
        let a = SignedLog { sign: w1.sign, ln_abs: w1.ln_abs - r1.ln_abs };
        let b = SignedLog { sign: w2.sign, ln_abs: w2.ln_abs - r2.ln_abs };
        a.cmp_value(&b)
    }
    fn scaled(&self, m: &BigUint) -> f64 {
        if self.sign == 0 || m.is_zero() {
            return 0.0;
        }
        f64::from(self.sign) * (self.ln_abs + ln_biguint(m)).exp()
    }
    fn to_f64(&self) -> f64 {
        SignedLog::to_f64(*self)
    }
    fn is_negative(&self) -> bool {
        self.sign < 0
    }
}

/// One class of equal components: value `w`, reference value `r`, and how
/// many phase-space points carry them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pair<V> {
    pub value: V,
    pub reference: V,
    pub multiplicity: BigUint,
}

/// Compressed `(value, reference, multiplicity)` form of a referenced
/// quasi-distribution on `n` qudits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairList<V> {
    d: PrimeDim,
    n: usize,
    pairs: Vec<Pair<V>>,
}

impl<V: PairValue> PairList<V> {
    /// Builds a list, merging equal `(value, reference)` classes and checking
    /// that multiplicities add to `d^{2n}`.
    pub fn new(d: PrimeDim, n: usize, pairs: Vec<Pair<V>>) -> Result<Self> {
        let total: BigUint = pairs.iter().map(|p| &p.multiplicity).sum();
        let expect = num_traits::pow(BigUint::from(d.get()), 2 * n);
        if total != expect {
            return Err(Error::Domain(format!("multiplicities sum to {total}, expected {expect}")));
        }
        Ok(PairList { d, n, pairs: merge(pairs) })
    }

    /// Attaches the uniform reference `d^{-2n}` to a list of `(value, multiplicity)`.
    pub fn with_uniform_reference(d: PrimeDim, n: usize, values: Vec<(V, BigUint)>, uniform: V) -> Result<Self> {
        let pairs = values
            .into_iter()
            .map(|(value, multiplicity)| Pair { value, reference: uniform.clone(), multiplicity })
            .collect();
        Self::new(d, n, pairs)
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn pairs(&self) -> &[Pair<V>] {
        &self.pairs
    }

    /// `Σ m·w` (should be 1).
    pub fn total_weight(&self) -> V::Coord {
        self.pairs.iter().fold(V::Coord::zero(), |acc, p| acc + p.value.scaled(&p.multiplicity))
    }

    /// `Σ m·r` (should be 1).
    pub fn total_reference(&self) -> V::Coord {
        self.pairs.iter().fold(V::Coord::zero(), |acc, p| acc + p.reference.scaled(&p.multiplicity))
    }

    /// Sum of `m·|w|` over negative classes.
    pub fn sum_negativity(&self) -> V::Coord {
        self.pairs
            .iter()
            .filter(|p| p.value.is_negative())
            .fold(V::Coord::zero(), |acc, p| acc - p.value.scaled(&p.multiplicity))
    }

    /// Lorenz curve of the values relative to the reference. Classes with
    /// equal ratio share one segment; the last vertex is `(Σ m r, Σ m w)`.
    pub fn lorenz(&self) -> LorenzCurve<V::Coord> {
        let mut order: Vec<&Pair<V>> = self.pairs.iter().collect();
        order.sort_by(|a, b| V::cmp_ratio(&b.value, &b.reference, &a.value, &a.reference));
        let mut pts = vec![(V::Coord::zero(), V::Coord::zero())];
        let (mut x, mut y) = (V::Coord::zero(), V::Coord::zero());
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j < order.len() && V::cmp_ratio(&order[j].value, &order[j].reference, &order[i].value, &order[i].reference) == Ordering::Equal {
                x = x + order[j].reference.scaled(&order[j].multiplicity);
                y = y + order[j].value.scaled(&order[j].multiplicity);
                j += 1;
            }
            pts.push((x.clone(), y.clone()));
            i = j;
        }
        // Float sums can repeat an abscissa once increments fall below an ulp
        // (or underflow to zero).
        pts.dedup_by(|later, earlier| later.0 <= earlier.0);
        let last = pts.len() - 1;
        if last == 0 {
            pts.push((V::Coord::one(), V::Coord::one()));
        } else {
            // The list is normalized; pin the endpoint exactly.
            pts[last] = (V::Coord::one(), V::Coord::one());
        }
        LorenzCurve::from_points(pts).expect("abscissae increase")
    }
}

fn merge<V: PairValue>(mut pairs: Vec<Pair<V>>) -> Vec<Pair<V>> {
    pairs.retain(|p| !p.multiplicity.is_zero());
    pairs.sort_by(|a, b| a.value.cmp_value(&b.value).then_with(|| a.reference.cmp_value(&b.reference)));
    let mut out: Vec<Pair<V>> = Vec::with_capacity(pairs.len());
    for p in pairs {
        match out.last_mut() {
            Some(last) if last.value.same(&p.value) && last.reference.same(&p.reference) => {
                last.multiplicity += p.multiplicity;
            }
            _ => out.push(p),
        }
    }
    out
}

/// Tensor product: all cross products, multiplicities multiplied.
pub fn pairs_product<V: PairValue>(a: &PairList<V>, b: &PairList<V>) -> Result<PairList<V>> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch { expected: a.d.get() as usize, found: b.d.get() as usize });
    }
    let mut pairs = Vec::with_capacity(a.pairs.len() * b.pairs.len());
    for x in &a.pairs {
        for y in &b.pairs {
            pairs.push(Pair {
                value: x.value.product(&y.value),
                reference: x.reference.product(&y.reference),
                multiplicity: &x.multiplicity * &y.multiplicity,
            });
        }
    }
    Ok(PairList { d: a.d, n: a.n + b.n, pairs: merge(pairs) })
}

/// `n`-th tensor power by multinomial expansion over the compositions
/// `q_1 + … + q_D = n`: value `Π w_i^{q_i}`, multiplicity
/// `n!/(q_1!…q_D!) Π m_i^{q_i}`.
pub fn pairs_power<V: PairValue>(a: &PairList<V>, n: usize) -> Result<PairList<V>> {
    if n == 0 {
        return Err(domain("tensor power needs n >= 1"));
    }
    let k = a.pairs.len();
    let fact: Vec<BigUint> = std::iter::once(BigUint::one())
        .chain((1..=n).scan(BigUint::one(), |f, i| {
            *f *= BigUint::from(i);
            Some(f.clone())
        }))
        .collect();
    // Powers of every class value, reference and multiplicity, reused across compositions.
    let vpow: Vec<Vec<V>> = a.pairs.iter().map(|p| (0..=n).map(|e| p.value.power(e as u32)).collect()).collect();
    let rpow: Vec<Vec<V>> = a.pairs.iter().map(|p| (0..=n).map(|e| p.reference.power(e as u32)).collect()).collect();
    let mpow: Vec<Vec<BigUint>> =
        a.pairs.iter().map(|p| (0..=n).map(|e| num_traits::pow(p.multiplicity.clone(), e)).collect()).collect();
    let mut out = Vec::new();
    let mut comp = vec![0usize; k];
    compositions(n, 0, &mut comp, &mut |q| {
        let mut value = V::one();
        let mut reference = V::one();
        let mut mult = fact[n].clone();
        for (i, &qi) in q.iter().enumerate() {
            if qi == 0 {
                continue;
            }
            value = value.product(&vpow[i][qi]);
            reference = reference.product(&rpow[i][qi]);
            mult = mult * &mpow[i][qi] / &fact[qi];
        }
        out.push(Pair { value, reference, multiplicity: mult });
    });
    Ok(PairList { d: a.d, n: a.n * n, pairs: merge(out) })
}

fn compositions(remaining: usize, slot: usize, comp: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if slot + 1 == comp.len() {
        comp[slot] = remaining;
        f(comp);
        return;
    }
    for v in 0..=remaining {
        comp[slot] = v;
        compositions(remaining - v, slot + 1, comp, f);
    }
}

/// A noise parameter kept exact when it was given as a rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Noise {
    Exact(BigRational),
    Float(f64),
}

impl Noise {
    /// Parses `"0.1"` or `"1/10"` exactly.
    pub fn parse(s: &str) -> Result<Self> {
        parse_rational(s).map(Noise::Exact)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Noise::Exact(r) => Scalar::to_f64(r),
            Noise::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Noise::Exact(_))
    }
}

impl From<f64> for Noise {
    fn from(x: f64) -> Self {
        Noise::Float(x)
    }
}

impl From<BigRational> for Noise {
    fn from(r: BigRational) -> Self {
        Noise::Exact(r)
    }
}

impl fmt::Display for Noise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Noise::Exact(r) => write!(f, "{r}"),
            Noise::Float(x) => write!(f, "{x}"),
        }
    }
}

fn check_noise<T: Scalar>(eps: &T) -> Result<()> {
    if eps.is_negative() || *eps >= T::from_ratio(3, 4) {
        return Err(domain(format!("noise ε = {} must lie in [0, 3/4)", eps.to_f64())));
    }
    Ok(())
}

/// `(v(ε), u(ε)) = (1/3 − 4ε/9, 1/6 − ε/18)`: the magnitude of the negative
/// Wigner value of `ρ_S(ε)` and the common value at the other eight points.
pub fn strange_components<T: Scalar>(eps: &T) -> Result<(T, T)> {
    check_noise(eps)?;
    let v = T::from_ratio(1, 3) - T::from_ratio(4, 9) * eps.clone();
    let u = T::from_ratio(1, 6) - T::from_ratio(1, 18) * eps.clone();
    Ok((v, u))
}

fn strange_wigner(v: f64, u: f64) -> Result<QuasiDistribution> {
    let mut values = vec![u; 9];
    values[0] = -v;
    QuasiDistribution::new(PrimeDim::QUTRIT, 1, values)
}

/// Noisy Strange state in exact arithmetic: its Wigner vector and the pair
/// list `{(−v, 1), (u, 8)}` against the uniform reference `1/9`.
pub fn noisy_strange_exact(eps: &BigRational) -> Result<(QuasiDistribution, PairList<BigRational>)> {
    let (v, u) = strange_components(eps)?;
    let w = strange_wigner(Scalar::to_f64(&v), Scalar::to_f64(&u))?;
    let pl = PairList::with_uniform_reference(
        PrimeDim::QUTRIT,
        1,
        vec![(-v, BigUint::one()), (u, BigUint::from(8u8))],
        BigRational::from_ratio(1, 9),
    )?;
    Ok((w, pl))
}

/// Noisy Strange state with log-domain float values.
pub fn noisy_strange_log(eps: f64) -> Result<(QuasiDistribution, PairList<SignedLog>)> {
    let (v, u) = strange_components(&eps)?;
    let w = strange_wigner(v, u)?;
    let pl = PairList::with_uniform_reference(
        PrimeDim::QUTRIT,
        1,
        vec![(SignedLog::from_f64(-v), BigUint::one()), (SignedLog::from_f64(u), BigUint::from(8u8))],
        SignedLog::from_f64(1.0 / 9.0),
    )?;
    Ok((w, pl))
}

/// The exact Wigner vector of `ρ_S(ε)` in canonical point order.
pub fn noisy_strange_wigner_exact(eps: &BigRational) -> Result<Vec<BigRational>> {
    let (v, u) = strange_components(eps)?;
    let mut w = vec![u; 9];
    w[0] = -v;
    Ok(w)
}

/// `Φ₊(m; n, p) = Σ_{ℓ=0}^{m/2} C(n, 2ℓ) p^{2ℓ} (1−p)^{n−2ℓ}`, `m` even.
pub fn phi_plus<T: Scalar>(m: usize, n: usize, p: &T) -> Result<T> {
    if m % 2 != 0 {
        return Err(Error::Parity(format!("Φ₊ needs an even upper index, got {m}")));
    }
    partial_binomial(m, n, p, 0)
}

/// `Φ₋(m; n, p) = Σ_{ℓ=0}^{(m−1)/2} C(n, 2ℓ+1) p^{2ℓ+1} (1−p)^{n−2ℓ−1}`, `m` odd.
pub fn phi_minus<T: Scalar>(m: usize, n: usize, p: &T) -> Result<T> {
    if m % 2 != 1 {
        return Err(Error::Parity(format!("Φ₋ needs an odd upper index, got {m}")));
    }
    partial_binomial(m, n, p, 1)
}

fn partial_binomial<T: Scalar>(m: usize, n: usize, p: &T, start: usize) -> Result<T> {
    if m > n {
        return Err(domain(format!("upper index {m} exceeds n = {n}")));
    }
    if p.is_negative() || *p > T::one() {
        return Err(domain("probability outside [0, 1]"));
    }
    let q = T::one() - p.clone();
    Ok((start..=m).step_by(2).fold(T::zero(), |acc, k| {
        acc + T::from_biguint(&binomial(n as u64, k as u64)) * p.powi(k as u32) * q.powi((n - k) as u32)
    }))
}

/// Closed-form Lorenz curve of `ρ_S(ε)^{⊗n}` against the uniform reference:
/// `n + 2` vertices, `n` of them interior.
///
/// Positive classes come first (largest ratio first), then the negative ones
/// from least to most negative. With `s = 5/3 − 8ε/9`, `p_hi = (12 − 4ε)/(15 − 8ε)`
/// and `p_lo = (3 − 4ε)/(15 − 8ε)`:
///
/// * `ε < 3/7` (`v > u`): positive classes have `k ≡ n (mod 2)` factors `u`,
///   ordered by increasing `k`; vertex `x` is a `Φ(k; n, 8/9)` and `L` is
///   `s^n Φ(k; n, p_hi)`. Negative classes have an odd number `j` of `v`
///   factors in increasing `j`, stepping by `Φ₋(j; n, 1/9)` and
///   `−s^n Φ₋(j; n, p_lo)` after the peak.
/// * `ε ≥ 3/7`: the roles of `u` and `v` swap; positive classes have an even
///   number of `v` factors, negative classes run over increasing `u` counts.
pub fn strange_elbows_unital<T: Scalar>(n: usize, eps: &T) -> Result<LorenzCurve<T>> {
    if n == 0 {
        return Err(domain("need at least one copy"));
    }
    check_noise(eps)?;
    let r = |a: i64, b: i64| T::from_ratio(a, b);
    let fifteen = r(15, 1) - r(8, 1) * eps.clone();
    let p_hi = (r(12, 1) - r(4, 1) * eps.clone()) / fifteen.clone();
    let p_lo = (r(3, 1) - r(4, 1) * eps.clone()) / fifteen;
    let s_n = (r(5, 3) - r(8, 9) * eps.clone()).powi(n as u32);
    let phi = |m: usize, p: &T| -> Result<T> { if m % 2 == 0 { phi_plus(m, n, p) } else { phi_minus(m, n, p) } };
    let (px, pl, nx, nl) = if *eps < r(3, 7) {
        (r(8, 9), p_hi, r(1, 9), p_lo)
    } else {
        (r(1, 9), p_lo, r(8, 9), p_hi)
    };
    // Counts of the dominant factor in positive classes: same parity as n when
    // v dominates (u-count ≡ n), even when u dominates (v-count even).
    let first_pos = if *eps < r(3, 7) { n % 2 } else { 0 };
    let mut pts = vec![(T::zero(), T::zero())];
    for k in (first_pos..=n).step_by(2) {
        pts.push((phi(k, &px)?, s_n.clone() * phi(k, &pl)?));
    }
    let (x_peak, l_peak) = pts.last().expect("at least one positive class").clone();
    // Negative classes: counts of the other parity, increasing.
    let first_neg = if *eps < r(3, 7) { 1 } else { 1 - n % 2 };
    for j in (first_neg..=n).step_by(2) {
        pts.push((x_peak.clone() + phi(j, &nx)?, l_peak.clone() - s_n.clone() * phi(j, &nl)?));
    }
    LorenzCurve::from_points(pts)
}

/// Peak `(x⋆, L⋆) = (1/2 + (7/9)^n/2, 1/2 + ((15 − 8ε)/9)^n/2)` of the
/// n-copy noisy Strange curve.
pub fn strange_peak<T: Scalar>(n: usize, eps: &T) -> Result<(T, T)> {
    check_noise(eps)?;
    let half = T::from_ratio(1, 2);
    let x = half.clone() + half.clone() * T::from_ratio(7, 9).powi(n as u32);
    let l = half.clone() + half * ((T::from_i64(15) - T::from_i64(8) * eps.clone()) / T::from_i64(9)).powi(n as u32);
    Ok((x, l))
}

/// Converts an exact pair list to log-float form.
pub fn to_log(pl: &PairList<BigRational>) -> PairList<SignedLog> {
    PairList {
        d: pl.d,
        n: pl.n,
        pairs: pl
            .pairs
            .iter()
            .map(|p| Pair {
                value: SignedLog::from_ratio(&p.value),
                reference: SignedLog::from_ratio(&p.reference),
                multiplicity: p.multiplicity.clone(),
            })
            .collect(),
    }
}

/// Pair list for an arbitrary single-copy quasi-distribution against a
/// positive reference, merging equal `(w, r)` classes.
pub fn pairs_from_vectors(d: PrimeDim, w: &[f64], r: &[f64]) -> Result<PairList<SignedLog>> {
    if w.len() != r.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: r.len() });
    }
    let dd = d.get() as usize;
    let mut n = 0;
    let mut size = 1usize;
    while size < w.len() {
        size *= dd * dd;
        n += 1;
    }
    if size != w.len() || n == 0 {
        return Err(Error::DimensionMismatch { expected: size, found: w.len() });
    }
    if let Some(i) = r.iter().position(|&x| x <= 0.0) {
        return Err(Error::NonPositiveReference(i));
    }
    let pairs = w
        .iter()
        .zip(r)
        .map(|(&a, &b)| Pair { value: SignedLog::from_f64(a), reference: SignedLog::from_f64(b), multiplicity: BigUint::one() })
        .collect();
    PairList::new(d, n, pairs)
}

/// Multiplicity of a class as `u64`, if it fits.
pub fn multiplicity_u64(p: &Pair<impl PairValue>) -> Option<u64> {
    p.multiplicity.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn classes(pl: &PairList<BigRational>) -> Vec<(BigRational, u64)> {
        pl.pairs().iter().map(|p| (p.value.clone(), multiplicity_u64(p).unwrap())).collect()
    }

    #[test]
    fn single_copy_lists() {
        let (_, pl) = noisy_strange_exact(&q(0, 1)).unwrap();
        assert_eq!(classes(&pl), vec![(q(-1, 3), 1), (q(1, 6), 8)]);
        let (w, pl) = noisy_strange_exact(&q(1, 10)).unwrap();
        assert_eq!(classes(&pl), vec![(q(-13, 45), 1), (q(29, 180), 8)]);
        assert!((w.values()[0] + 0.288_888_888_888_888_9).abs() < 1e-15);
        assert!(noisy_strange_exact(&q(3, 4)).is_err());
        assert!(noisy_strange_exact(&q(-1, 100)).is_err());
        assert!(noisy_strange_log(0.75).is_err());
    }

    #[test]
    fn product_with_uniform() {
        let (_, s) = noisy_strange_exact(&q(0, 1)).unwrap();
        let u = PairList::with_uniform_reference(PrimeDim::QUTRIT, 1, vec![(q(1, 9), BigUint::from(9u8))], q(1, 9)).unwrap();
        let p = pairs_product(&s, &u).unwrap();
        assert_eq!(classes(&p), vec![(q(-1, 27), 9), (q(1, 54), 72)]);
        assert_eq!(p.total_weight(), q(1, 1));
    }

    #[test]
    fn strange_squared() {
        let (_, s) = noisy_strange_exact(&q(0, 1)).unwrap();
        let p = pairs_product(&s, &s).unwrap();
        assert_eq!(classes(&p), vec![(q(-1, 18), 16), (q(1, 36), 64), (q(1, 9), 1)]);
        assert_eq!(pairs_power(&s, 2).unwrap(), p);
        assert_eq!(pairs_power(&s, 1).unwrap(), s);
    }

    #[test]
    fn power_normalization_up_to_64() {
        let (_, s) = noisy_strange_exact(&q(1, 10)).unwrap();
        for n in [1, 2, 7, 20, 64] {
            let p = pairs_power(&s, n).unwrap();
            assert_eq!(p.total_weight(), q(1, 1), "n = {n}");
            assert_eq!(p.total_reference(), q(1, 1));
            assert_eq!(p.pairs().len(), n + 1);
        }
    }

    #[test]
    fn table_one_components() {
        // n even: classes with 2i factors of u carry value u^{2i} v^{n-2i}
        // and multiplicity 8^{2i} C(n, 2i).
        let eps = q(1, 10);
        let (v, u) = strange_components(&eps).unwrap();
        let n = 6;
        let (_, s) = noisy_strange_exact(&eps).unwrap();
        let p = pairs_power(&s, n).unwrap();
        for i in 0..=n / 2 {
            let value = Scalar::powi(&u, 2 * i as u32) * Scalar::powi(&v, (n - 2 * i) as u32);
            let m = num_traits::pow(BigUint::from(8u8), 2 * i) * binomial(n as u64, 2 * i as u64);
            assert!(p.pairs().iter().any(|c| c.value == value && c.multiplicity == m), "i = {i}");
        }
    }

    #[test]
    fn phi_identities() {
        let p = q(2, 7);
        for n in 1..8 {
            assert_eq!(phi_plus(0, n, &p).unwrap(), Scalar::powi(&q(5, 7), n as u32));
            if n % 2 == 0 {
                assert_eq!(phi_plus(n, n, &p).unwrap() + phi_minus(n - 1, n, &p).unwrap(), q(1, 1));
            } else {
                assert_eq!(phi_plus(n - 1, n, &p).unwrap() + phi_minus(n, n, &p).unwrap(), q(1, 1));
            }
        }
        assert_eq!(phi_minus(1, 2, &p).unwrap(), q(2, 1) * &p * (q(1, 1) - &p));
        assert!(matches!(phi_plus(1, 3, &p), Err(Error::Parity(_))));
        assert!(matches!(phi_minus(2, 3, &p), Err(Error::Parity(_))));
        assert!(phi_plus(4, 3, &p).is_err());
    }

    #[test]
    fn closed_form_single_copy() {
        let c = strange_elbows_unital(1, &q(0, 1)).unwrap();
        assert_eq!(c.points(), &[(q(0, 1), q(0, 1)), (q(8, 9), q(4, 3)), (q(1, 1), q(1, 1))]);
    }

    #[test]
    fn closed_form_matches_expansion_in_all_regimes() {
        for eps in [q(0, 1), q(1, 10), q(2, 5), q(3, 7), q(1, 2), q(7, 10)] {
            let (_, s) = noisy_strange_exact(&eps).unwrap();
            for n in 1..=9 {
                let closed = strange_elbows_unital(n, &eps).unwrap();
                let expanded = pairs_power(&s, n).unwrap().lorenz();
                assert!(closed.approx_eq(&expanded, &BigRational::zero()), "n = {n}, ε = {eps}");
                assert_eq!(closed.interior_elbows().len(), n);
                assert_eq!(closed.peak(), strange_peak(n, &eps).unwrap());
            }
        }
    }

    #[test]
    fn log_mode_tracks_exact_mode() {
        let eps = q(1, 10);
        let (_, s) = noisy_strange_exact(&eps).unwrap();
        let exact = pairs_power(&s, 12).unwrap();
        let logged = pairs_power(&to_log(&s), 12).unwrap();
        assert_eq!(logged.pairs().len(), exact.pairs().len());
        let peak = Scalar::to_f64(&exact.lorenz().peak().1);
        assert!(logged.lorenz().approx_eq(&exact.lorenz().to_f64(), &(1e-12 * peak)));
    }

    #[test]
    fn log_mode_survives_underflow() {
        let (_, s) = noisy_strange_log(0.1).unwrap();
        let p = pairs_power(&s, 400).unwrap();
        assert_eq!(p.pairs().len(), 401);
        let c = p.lorenz();
        let (x, l) = strange_peak(400, &0.1).unwrap();
        let (px, pl) = c.peak();
        // Near the peak L ≈ 1e79, so increments below one ulp of L blur
        // which vertex is highest; the height itself stays accurate.
        assert!((pl / l - 1.0).abs() < 1e-12);
        assert!((px - x).abs() < 1e-6);
    }

    #[test]
    fn signed_log_order() {
        let vals = [-3.0, -0.5, 0.0, 0.25, 2.0];
        for a in vals {
            for b in vals {
                assert_eq!(SignedLog::from_f64(a).cmp_value(&SignedLog::from_f64(b)), a.partial_cmp(&b).unwrap());
            }
        }
        assert!((SignedLog::from_f64(-2.0).powi(3).to_f64() + 8.0).abs() < 1e-14);
    }
}
