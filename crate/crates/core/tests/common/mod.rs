//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use qudit_magic::{states, Complex64, ComplexMatrix, PrimeDim};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Linear feasibility: is there a column-stochastic A with A w = w', A r = r'?
// ---------------------------------------------------------------------------

/// Decides feasibility of `{x ≥ 0 : M x = b}` exactly, by phase-I simplex
/// with Bland's rule on a dense rational tableau.
pub fn feasible(m: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let rows = m.len();
    let cols = m[0].len();
    // Tableau columns: original vars, one artificial per row, then rhs.
    let width = cols + rows + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..cols {
            row[j] = if flip { -m[i][j].clone() } else { m[i][j].clone() };
        }
        row[cols + i] = BigRational::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // Objective row: minimize Σ artificials, expressed in non-basic variables.
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..cols {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    loop {
        let z = &t[rows];
        let Some(enter) = (0..cols + rows).find(|&j| z[j].is_negative()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => match ratio.cmp(lr) {
                        Ordering::Less => true,
                        Ordering::Equal => basis[i] < basis[*li],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else { break };
        let pivot = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        basis[p] = enter;
    }
    t[rows][width - 1].is_zero()
}

/// Existence of a stochastic `A` (`len(w') × len(w)`) with `A w = w'`, `A r = r'`.
pub fn stochastic_map_exists(w: &[BigRational], r: &[BigRational], w2: &[BigRational], r2: &[BigRational]) -> bool {
    let (k, m) = (w.len(), w2.len());
    let var = |i: usize, j: usize| i * k + j;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..m {
        let mut a = vec![BigRational::zero(); m * k];
        let mut c = vec![BigRational::zero(); m * k];
        for j in 0..k {
            a[var(i, j)] = w[j].clone();
            c[var(i, j)] = r[j].clone();
        }
        rows.push(a);
        rhs.push(w2[i].clone());
        rows.push(c);
        rhs.push(r2[i].clone());
    }
    for j in 0..k {
        let mut s = vec![BigRational::zero(); m * k];
        for i in 0..m {
            s[var(i, j)] = BigRational::one();
        }
        rows.push(s);
        rhs.push(BigRational::one());
    }
    feasible(&rows, &rhs)
}

// ---------------------------------------------------------------------------
// Random rational instances
// ---------------------------------------------------------------------------

/// Random probability vector with entries `c_i / Σc`, `c_i ∈ 1..=9`.
pub fn random_prob(rng: &mut impl Rng, k: usize) -> Vec<BigRational> {
    let c: Vec<i64> = (0..k).map(|_| rng.random_range(1..=9)).collect();
    let s: i64 = c.iter().sum();
    c.into_iter().map(|x| q(x, s)).collect()
}

/// Random normalized quasi-distribution with some negative entries.
pub fn random_quasi(rng: &mut impl Rng, k: usize) -> Vec<BigRational> {
    loop {
        let c: Vec<i64> = (0..k).map(|_| rng.random_range(-4..=9)).collect();
        let s: i64 = c.iter().sum();
        if s > 0 {
            return c.into_iter().map(|x| q(x, s)).collect();
        }
    }
}

/// Random column-stochastic rational matrix with strictly positive entries.
pub fn random_stochastic(rng: &mut impl Rng, rows: usize, cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = vec![vec![BigRational::zero(); cols]; rows];
    for j in 0..cols {
        let col = random_prob(rng, rows);
        for i in 0..rows {
            a[i][j] = col[i].clone();
        }
    }
    a
}

pub fn apply(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().zip(v).fold(BigRational::zero(), |s, (x, y)| s + x * y)).collect()
}

// ---------------------------------------------------------------------------
// Brute-force n-copy Lorenz curve of the noisy Strange state
// ---------------------------------------------------------------------------

/// Elbows of the Lorenz curve of the full `9^n` Wigner vector of
/// `ρ_S(ε)^{⊗n}` against the uniform reference, by explicit Kronecker
/// products in scaled integer arithmetic.
pub fn brute_force_strange_curve(eps: &BigRational, n: usize) -> Vec<(BigRational, BigRational)> {
    let v = q(1, 3) - q(4, 9) * eps;
    let u = q(1, 6) - q(1, 18) * eps;
    let den = num_integer::lcm(v.denom().clone(), u.denom().clone());
    let to_int = |x: &BigRational| -> i128 { i128::try_from(x.numer() * (&den / x.denom())).unwrap() };
    let (vi, ui) = (to_int(&v), to_int(&u));
    let single: Vec<i128> = std::iter::once(-vi).chain(std::iter::repeat_n(ui, 8)).collect();
    let mut full = vec![1i128];
    for _ in 0..n {
        full = full.iter().flat_map(|a| single.iter().map(move |b| a * b)).collect();
    }
    full.sort_unstable_by(|a, b| b.cmp(a));
    let total = BigInt::from(9u32).pow(n as u32);
    let scale = BigInt::from(den.clone()).pow(n as u32);
    let mut out = vec![(BigRational::zero(), BigRational::zero())];
    let (mut count, mut sum) = (0u64, 0i128);
    let mut i = 0;
    while i < full.len() {
        let mut j = i;
        while j < full.len() && full[j] == full[i] {
            count += 1;
            sum += full[j];
            j += 1;
        }
        out.push((
            BigRational::new(BigInt::from(count), total.clone()),
            BigRational::new(BigInt::from(sum), scale.clone()),
        ));
        i = j;
    }
    out
}

// ---------------------------------------------------------------------------
// Random states and maps
// ---------------------------------------------------------------------------

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box–Muller
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Random pure state of dimension `dim`.
pub fn random_pure(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let psi: Vec<Complex64> = (0..dim).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
    states::projector(&psi)
}

/// Matrix of independent standard complex Gaussians.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

/// Random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ginibre(rng, dim, dim).qr().q()
}

/// Random mixed state `G G† / tr` from a Ginibre matrix of the given rank.
pub fn random_mixed(rng: &mut impl Rng, dim: usize, rank: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, rank);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Random convex mixture of single-qudit stabilizer states.
pub fn random_free(rng: &mut impl Rng, d: PrimeDim) -> ComplexMatrix {
    let stab = states::stabilizer_states(d);
    let weights: Vec<f64> = (0..stab.len()).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let dim = d.get() as usize;
    stab.iter().zip(&weights).fold(ComplexMatrix::zeros(dim, dim), |acc, (s, w)| acc + s * Complex64::new(w / total, 0.0))
}

/// Random bistochastic matrix: a convex mixture of `terms` random permutations.
pub fn random_bistochastic(rng: &mut impl Rng, k: usize, terms: usize) -> DMatrix<f64> {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut m = DMatrix::zeros(k, k);
    for w in weights {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(rng);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] += w / total;
        }
    }
    m
}

/// Random mixture of phase-space translations `z ↦ z + a` on one qutrit:
/// a stochastic map that fixes the uniform distribution.
pub fn random_displacement_mixture(rng: &mut impl Rng, terms: usize) -> DMatrix<f64> {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut m = DMatrix::zeros(9, 9);
    for w in weights {
        let (aq, ap) = (rng.random_range(0..3usize), rng.random_range(0..3usize));
        for z in 0..9 {
            let (zq, zp) = (z / 3, z % 3);
            let y = ((zq + aq) % 3) * 3 + (zp + ap) % 3;
            m[(y, z)] += w / total;
        }
    }
    m
}

pub fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * nalgebra::DVector::from_column_slice(v)).iter().copied().collect()
}
