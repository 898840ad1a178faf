//! Relative majorization of quasi-distributions via Lorenz curves.
//!
//! For a pair `(w, r)` with `r > 0`, sort indices by `w_i/r_i` (largest
//! first) and join the cumulative points `(Σ r, Σ w)`. The result is concave,
//! starts at `(0,0)`, ends at `(1,1)`, and peaks at `1 + sn(w)`. Then
//! `(w, r) ≻ (w', r')` exactly when the first curve lies on or above the
//! second, and it is enough to compare at the second curve's elbows.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A quasi-distribution `w` together with a strictly positive reference `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferencedPair<T> {
    w: Vec<T>,
    r: Vec<T>,
}

impl<T: Scalar> ReferencedPair<T> {
    /// Checks equal non-zero lengths, `r_i > 0`, and `Σw = Σr = 1` (exactly
    /// for rationals, within `1e-10` for floats).
    pub fn new(w: Vec<T>, r: Vec<T>) -> Result<Self> {
        if w.len() != r.len() {
            return Err(Error::DimensionMismatch { expected: w.len(), found: r.len() });
        }
        if w.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(i) = r.iter().position(|x| !x.is_positive()) {
            return Err(Error::NonPositiveReference(i));
        }
        let tol = T::normalization_tolerance();
        for v in [&w, &r] {
            let s = v.iter().fold(T::zero(), |a, b| a + b.clone());
            if (s.clone() - T::one()).abs() > tol {
                return Err(Error::NotNormalized(s.to_f64()));
            }
        }
        Ok(ReferencedPair { w, r })
    }

    /// `w` against the uniform reference of the same length.
    pub fn uniform(w: Vec<T>) -> Result<Self> {
        let n = w.len() as i64;
        let r = vec![T::from_ratio(1, n.max(1)); w.len()];
        Self::new(w, r)
    }

    pub fn w(&self) -> &[T] {
        &self.w
    }
    pub fn r(&self) -> &[T] {
        &self.r
    }
    pub fn len(&self) -> usize {
        self.w.len()
    }
    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Piecewise-linear Lorenz curve, stored as its vertices from `(0,0)` to `(1,1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LorenzCurve<T> {
    points: Vec<(T, T)>,
}

impl<T: Scalar> LorenzCurve<T> {
    /// Builds a curve from vertices. `x` must start at 0 and be strictly
    /// increasing; concavity is not enforced here (see [`LorenzCurve::is_concave`]).
    pub fn from_points(points: Vec<(T, T)>) -> Result<Self> {
        if points.len() < 2 || !points[0].0.is_zero() || !points[0].1.is_zero() {
            return Err(Error::Domain("a Lorenz curve starts at (0,0) and has at least two vertices".into()));
        }
        if points.windows(2).any(|p| p[1].0 <= p[0].0) {
            return Err(Error::Domain("Lorenz abscissae must be strictly increasing".into()));
        }
        Ok(LorenzCurve { points })
    }

    /// All vertices including the endpoints.
    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    /// Vertices strictly between the endpoints.
    pub fn interior_elbows(&self) -> &[(T, T)] {
        &self.points[1..self.points.len() - 1]
    }

    /// Value at `x` by linear interpolation; clamps outside `[0, x_max]`.
    pub fn evaluate(&self, x: &T) -> T {
        let pts = &self.points;
        if *x <= pts[0].0 {
            return pts[0].1.clone();
        }
        let last = pts.len() - 1;
        if *x >= pts[last].0 {
            return pts[last].1.clone();
        }
        // First vertex with abscissa >= x.
        let k = pts.partition_point(|p| p.0 < *x);
        let (x0, y0) = &pts[k - 1];
        let (x1, y1) = &pts[k];
        if *x == *x1 {
            return y1.clone();
        }
        y0.clone() + (y1.clone() - y0.clone()) * (x.clone() - x0.clone()) / (x1.clone() - x0.clone())
    }

    /// The highest vertex `(x⋆, L⋆)` (the leftmost one on ties).
    pub fn peak(&self) -> (T, T) {
        let mut best = &self.points[0];
        for p in &self.points[1..] {
            if p.1 > best.1 {
                best = p;
            }
        }
        best.clone()
    }

    /// Segment slopes, left to right.
    pub fn slopes(&self) -> Vec<T> {
        self.points
            .windows(2)
            .map(|p| (p[1].1.clone() - p[0].1.clone()) / (p[1].0.clone() - p[0].0.clone()))
            .collect()
    }

    /// Whether slopes are non-increasing up to `tol`.
    pub fn is_concave(&self, tol: &T) -> bool {
        self.slopes().windows(2).all(|s| s[1] <= s[0].clone() + tol.clone())
    }

    /// Whether both curves agree as functions within `tol`, checked at the
    /// union of their vertices.
    pub fn approx_eq(&self, other: &Self, tol: &T) -> bool {
        self.points.iter().chain(&other.points).all(|(x, _)| (self.evaluate(x) - other.evaluate(x)).abs() <= *tol)
    }

    /// Converts coordinates to `f64`.
    pub fn to_f64(&self) -> LorenzCurve<f64> {
        LorenzCurve { points: self.points.iter().map(|(x, y)| (x.to_f64(), y.to_f64())).collect() }
    }
}

/// Sorts `(w_i, r_i)` by ratio, largest first, and accumulates. Equal-ratio
/// runs collapse to one segment. No normalization is assumed.
fn cumulative_points<T: Scalar>(w: &[T], r: &[T]) -> Vec<(T, T)> {
    let mut items: Vec<(T, &T, &T)> = w.iter().zip(r).map(|(a, b)| (a.clone() / b.clone(), a, b)).collect();
    items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    let mut pts = vec![(T::zero(), T::zero())];
    let (mut x, mut y) = (T::zero(), T::zero());
    let mut i = 0;
    while i < items.len() {
        let ratio = &items[i].0;
        let mut j = i;
        while j < items.len() && items[j].0 == *ratio {
            x = x + items[j].2.clone();
            y = y + items[j].1.clone();
            j += 1;
        }
        pts.push((x.clone(), y.clone()));
        i = j;
    }
    pts
}

/// Lorenz curve of `w` relative to `r`.
///
/// The final vertex is pinned to `(1, 1)`: the pair is normalized, so the
/// cumulative sums there differ from 1 by at most the normalization slack.
pub fn lorenz_curve<T: Scalar>(pair: &ReferencedPair<T>) -> LorenzCurve<T> {
    let mut pts = cumulative_points(&pair.w, &pair.r);
    let last = pts.len() - 1;
    pts[last] = (T::one(), T::one());
    // Float rounding can repeat an abscissa or leave one a hair above 1.
    pts.dedup_by(|later, earlier| later.0 <= earlier.0);
    if pts.len() == 1 {
        pts.push((T::one(), T::one()));
    }
    let last = pts.len() - 1;
    pts[last] = (T::one(), T::one());
    LorenzCurve { points: pts }
}

/// `true` iff `a(x) ≥ b(x) − tol` on `[0, 1]`. Because `a` is concave and `b`
/// piecewise linear, checking at `b`'s vertices suffices.
pub fn curve_dominates<T: Scalar>(a: &LorenzCurve<T>, b: &LorenzCurve<T>, tol: &T) -> bool {
    b.points.iter().all(|(x, y)| a.evaluate(x) >= y.clone() - tol.clone())
}

/// `(w, r) ≻ (w', r')`: some stochastic matrix maps `w ↦ w'` and `r ↦ r'`.
/// The two pairs may have different lengths.
pub fn relative_majorizes<T: Scalar>(input: &ReferencedPair<T>, output: &ReferencedPair<T>, tol: &T) -> bool {
    curve_dominates(&lorenz_curve(input), &lorenz_curve(output), tol)
}

/// The L1 form of relative majorization: `Σ|w_i − r_i t| ≥ Σ|w'_j − r'_j t|`
/// for every real `t`.
///
/// Both sides are convex and piecewise linear in `t` with kinks at the ratios
/// `w_i/r_i` and `w'_j/r'_j`, and both equal `|t − 1|`-like lines of the same
/// slope (`±1`) beyond the extreme kinks. The difference is therefore
/// piecewise linear with kinks only at those ratios and constant outside
/// them, so testing the kinks plus one point on each side covers all of `ℝ`.
pub fn l1_criterion<T: Scalar>(input: &ReferencedPair<T>, output: &ReferencedPair<T>, tol: &T) -> bool {
    let ratios = |p: &ReferencedPair<T>| -> Vec<T> { p.w.iter().zip(&p.r).map(|(a, b)| a.clone() / b.clone()).collect() };
    let mut ts = ratios(input);
    ts.extend(ratios(output));
    let lo = ts.iter().cloned().fold(ts[0].clone(), |a, b| if b < a { b } else { a }) - T::one();
    let hi = ts.iter().cloned().fold(ts[0].clone(), T::max_of) + T::one();
    ts.push(lo);
    ts.push(hi);
    let l1 = |p: &ReferencedPair<T>, t: &T| -> T {
        p.w.iter().zip(&p.r).fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone() * t.clone()).abs())
    };
    ts.iter().all(|t| l1(input, t) >= l1(output, t) - tol.clone())
}

/// Area of `{(x, y) : 1 ≤ y ≤ L(x)}`, exact for piecewise-linear curves.
pub fn area_monotone<T: Scalar>(c: &LorenzCurve<T>) -> T {
    let one = T::one();
    let half = T::from_ratio(1, 2);
    let mut area = T::zero();
    for seg in c.points.windows(2) {
        let (x0, y0) = (&seg[0].0, seg[0].1.clone() - one.clone());
        let (x1, y1) = (&seg[1].0, seg[1].1.clone() - one.clone());
        let dx = x1.clone() - x0.clone();
        match (y0 >= T::zero(), y1 >= T::zero()) {
            (true, true) => area = area + dx * (y0 + y1) * half.clone(),
            (false, false) => {}
            // Crossing: keep the triangle on the positive side.
            (true, false) => {
                let frac = y0.clone() / (y0.clone() - y1);
                area = area + dx * frac * y0 * half.clone();
            }
            (false, true) => {
                let frac = y1.clone() / (y1.clone() - y0);
                area = area + dx * frac * y1 * half.clone();
            }
        }
    }
    area
}

/// The embedding `Γ_a`: replaces each `w_i` by `a_i` copies of `w_i/a_i`.
pub fn gamma_embed<T: Scalar>(w: &[T], a: &[u64]) -> Result<Vec<T>> {
    if w.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: a.len() });
    }
    if a.contains(&0) {
        return Err(Error::Domain("embedding multiplicities must be positive".into()));
    }
    let mut out = Vec::with_capacity(a.iter().sum::<u64>() as usize);
    for (wi, &ai) in w.iter().zip(a) {
        let v = wi.clone() / T::from_i64(ai as i64);
        out.extend(std::iter::repeat_n(v, ai as usize));
    }
    Ok(out)
}

/// Checks `L_{aw+br|r}(x) = a·L_{w|r}(x) + b·x` at every vertex of both sides,
/// within `tol`. Requires `a > 0` (so the ratio order is unchanged).
pub fn lorenz_linearity_check<T: Scalar>(w: &[T], r: &[T], a: &T, b: &T, tol: &T) -> Result<bool> {
    if !a.is_positive() {
        return Err(Error::Domain("linearity requires a > 0".into()));
    }
    if w.len() != r.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: r.len() });
    }
    if let Some(i) = r.iter().position(|x| !x.is_positive()) {
        return Err(Error::NonPositiveReference(i));
    }
    let mixed: Vec<T> = w.iter().zip(r).map(|(wi, ri)| a.clone() * wi.clone() + b.clone() * ri.clone()).collect();
    let lhs = LorenzCurve { points: cumulative_points(&mixed, r) };
    let base = LorenzCurve { points: cumulative_points(w, r) };
    let xs: Vec<&T> = lhs.points.iter().chain(&base.points).map(|p| &p.0).collect();
    Ok(xs.into_iter().all(|x| {
        let rhs = a.clone() * base.evaluate(x) + b.clone() * x.clone();
        (lhs.evaluate(x) - rhs).abs() <= *tol
    }))
}
