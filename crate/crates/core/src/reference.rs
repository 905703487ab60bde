//! Brute-force ground truth: exact CVP, successive minima, and the uSVP
//! promise check, by exhaustive enumeration.
//!
//! This enumerator is deliberately written independently of the one in
//! [`crate::svp`]: it walks exact integer intervals in ascending order
//! (interval endpoints from integer square roots) instead of zig-zagging
//! around centers, so the two can cross-validate each other. The only shared
//! machinery is LLL preprocessing, and that is re-verified here on every use
//! through the HNF lattice-equality check, which neither enumerator touches.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::hnf::lattices_equal;
use crate::lattice::{LatticeBasis, LatticeVector};
use crate::linalg::{gram_schmidt_data, inner_product, norm_sq, perp_component, RatVector};
use crate::lll::{lll_with_transform, LllParams};
use crate::rational::{floor_sqrt, round_half_down, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffBoundStrategy {
    /// Exact per-level intervals from Gram–Schmidt norms.
    GramSchmidtPruned,
    /// Exhaustive coefficient box [-k, k]^n. Only sound when the caller
    /// knows the answer lies inside; used for desk-scale spot checks.
    FixedBox(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_dim: usize,
    pub strategy: CoeffBoundStrategy,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_dim: 10, strategy: CoeffBoundStrategy::GramSchmidtPruned }
    }
}

impl EnumerationBudget {
    pub fn fixed_box(k: u32) -> Self {
        EnumerationBudget { max_dim: 10, strategy: CoeffBoundStrategy::FixedBox(k) }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n > self.max_dim {
            return Err(Error::DimensionOverLimit { dim: n, limit: self.max_dim });
        }
        Ok(())
    }
}

/// The exact closest lattice vector to t. Ties break to the
/// lexicographically smallest coefficient vector.
pub fn brute_cvp(basis: &LatticeBasis, t: &RatVector, budget: &EnumerationBudget) -> Result<LatticeVector> {
    budget.check_dim(basis.n())?;
    if t.dim() != basis.m() {
        return Err(Error::DimensionMismatch { expected: basis.m(), got: t.dim() });
    }
    let minimizers = match budget.strategy {
        CoeffBoundStrategy::GramSchmidtPruned => closest_minimizers(basis, t)?,
        CoeffBoundStrategy::FixedBox(k) => box_minimizers(basis, t, k),
    };
    let best = minimizers
        .into_iter()
        .min_by(|a, b| lex_compare(a, b))
        .expect("at least one lattice vector");
    Ok(LatticeVector::new(basis, best))
}

/// Exact squared distance d(t, L)^2.
pub fn brute_distance_sq(basis: &LatticeBasis, t: &RatVector, budget: &EnumerationBudget) -> Result<Rational> {
    Ok(brute_cvp(basis, t, budget)?.dist_sq(t))
}

/// Exact squared successive minima (lambda_1^2, ..., lambda_n^2), via
/// enumeration of short vectors and greedy independence filtering.
pub fn successive_minima(basis: &LatticeBasis, budget: &EnumerationBudget) -> Result<Vec<Rational>> {
    budget.check_dim(basis.n())?;
    let n = basis.n();
    match budget.strategy {
        CoeffBoundStrategy::GramSchmidtPruned => {
            let reduced = checked_reduction(basis)?;
            let col_norms: Vec<Rational> =
                reduced.basis.matrix().columns().iter().map(norm_sq).collect();
            let cap = col_norms.iter().max().unwrap().clone();
            let mut radius = col_norms.iter().min().unwrap().clone();
            loop {
                let mut short = enumerate_ball(&reduced.basis, &radius)?;
                if let Some(minima) = greedy_minima(n, &reduced.basis, &mut short) {
                    return Ok(minima);
                }
                debug_assert!(radius < cap);
                radius = (&radius * Rational::from_integer(BigInt::from(4))).min(cap.clone());
            }
        }
        CoeffBoundStrategy::FixedBox(k) => {
            let mut short: Vec<(Vec<BigInt>, Rational)> = Vec::new();
            for coeffs in box_iter(n, k) {
                if coeffs.iter().all(Zero::is_zero) {
                    continue;
                }
                let v = basis.matrix().mul_int_vector(&coeffs);
                short.push((coeffs, norm_sq(&v)));
            }
            greedy_minima(n, basis, &mut short)
                .ok_or_else(|| Error::InvalidParameter("fixed box too small for all minima".into()))
        }
    }
}

/// True iff lambda_2^2 >= gamma^2 lambda_1^2 (vacuously true for n = 1).
pub fn verify_usvp_promise(basis: &LatticeBasis, gamma: &Rational, budget: &EnumerationBudget) -> Result<bool> {
    if basis.n() == 1 {
        return Ok(true);
    }
    let minima = successive_minima(basis, budget)?;
    Ok(minima[1] >= gamma * gamma * &minima[0])
}

struct CheckedReduction {
    basis: LatticeBasis,
    transform: Vec<Vec<BigInt>>,
}

/// LLL preprocessing whose lattice-preservation is re-proven via HNF before
/// anything downstream trusts it.
fn checked_reduction(basis: &LatticeBasis) -> Result<CheckedReduction> {
    let out = lll_with_transform(basis, &LllParams::default())?;
    if !lattices_equal(basis, &out.basis)? {
        // This would mean LLL broke its own contract; refuse to continue.
        return Err(Error::InvalidParameter(
            "internal check failed: reduction changed the lattice".into(),
        ));
    }
    Ok(CheckedReduction { basis: out.basis, transform: out.transform })
}

fn to_original(red: &CheckedReduction, x: &[BigInt]) -> Vec<BigInt> {
    let n = red.transform[0].len();
    let mut out = vec![BigInt::zero(); n];
    for (xi, col) in x.iter().zip(&red.transform) {
        if xi.is_zero() {
            continue;
        }
        for (acc, c) in out.iter_mut().zip(col) {
            *acc += xi * c;
        }
    }
    out
}

fn lex_compare(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.cmp(y);
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// All coefficient-vector minimizers of ||Bx - t||, in original-basis
/// coefficients.
fn closest_minimizers(basis: &LatticeBasis, t: &RatVector) -> Result<Vec<Vec<BigInt>>> {
    let red = checked_reduction(basis)?;
    let gs = gram_schmidt_data(red.basis.matrix())?;
    let n = red.basis.n();

    // Per-level targets tau_j = <t, g_j>/||g_j||^2; the off-span residue is a
    // constant shared by every candidate and can be ignored while searching.
    let mut tau = Vec::with_capacity(n);
    for j in 0..n {
        tau.push(inner_product(t, &gs.ortho[j])? / &gs.norms_sq[j]);
    }

    // Babai start for the initial in-span budget, written out locally so this
    // module does not depend on the production decoder.
    let mut x0 = vec![BigInt::zero(); n];
    for j in (0..n).rev() {
        let mut c = tau[j].clone();
        for i in (j + 1)..n {
            c -= &gs.mu[i][j] * Rational::from_integer(x0[i].clone());
        }
        x0[j] = round_half_down(&c);
    }
    let mut d0 = Rational::zero();
    for j in 0..n {
        let mut y = Rational::from_integer(x0[j].clone()) - &tau[j];
        for i in (j + 1)..n {
            y += &gs.mu[i][j] * Rational::from_integer(x0[i].clone());
        }
        d0 += &y * &y * &gs.norms_sq[j];
    }

    // The budget is inclusive, so the Babai vector itself is rediscovered by
    // the search and the minimizer list is never empty.
    let mut state = IntervalSearch {
        mu: &gs.mu,
        norms_sq: &gs.norms_sq,
        tau: Some(&tau),
        budget: d0,
        shrink: true,
        skip_zero: false,
        found: Vec::new(),
    };
    let mut x = vec![BigInt::zero(); n];
    state.descend(n as isize - 1, &mut x, &Rational::zero());
    Ok(state.found.into_iter().map(|(xr, _)| to_original(&red, &xr)).collect())
}

fn box_minimizers(basis: &LatticeBasis, t: &RatVector, k: u32) -> Vec<Vec<BigInt>> {
    let mut best: Option<Rational> = None;
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for coeffs in box_iter(basis.n(), k) {
        let v = basis.matrix().mul_int_vector(&coeffs);
        let d = norm_sq(&v.sub(t));
        match &best {
            Some(b) if d > *b => {}
            Some(b) if d == *b => out.push(coeffs),
            _ => {
                best = Some(d);
                out = vec![coeffs];
            }
        }
    }
    out
}

/// All nonzero vectors of the (already reduced) basis with norm^2 <= radius,
/// as (reduced coeffs, norm^2).
fn enumerate_ball(reduced: &LatticeBasis, radius_sq: &Rational) -> Result<Vec<(Vec<BigInt>, Rational)>> {
    let gs = gram_schmidt_data(reduced.matrix())?;
    let mut state = IntervalSearch {
        mu: &gs.mu,
        norms_sq: &gs.norms_sq,
        tau: None,
        budget: radius_sq.clone(),
        shrink: false,
        skip_zero: true,
        found: Vec::new(),
    };
    let mut x = vec![BigInt::zero(); reduced.n()];
    state.descend(reduced.n() as isize - 1, &mut x, &Rational::zero());
    Ok(state.found)
}

/// Greedy minima extraction: sort candidates by norm, keep the first n that
/// stay linearly independent. `None` when the radius was too small.
fn greedy_minima(
    n: usize,
    basis_for_coords: &LatticeBasis,
    short: &mut Vec<(Vec<BigInt>, Rational)>,
) -> Option<Vec<Rational>> {
    short.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| lex_compare(&a.0, &b.0)));
    let mut picked_ortho: Vec<RatVector> = Vec::new();
    let mut minima = Vec::new();
    for (coeffs, nsq) in short.iter() {
        if minima.len() == n {
            break;
        }
        let v = basis_for_coords.matrix().mul_int_vector(coeffs);
        let mut p = v.clone();
        for o in &picked_ortho {
            p = perp_component(&p, o).expect("picked vectors are nonzero");
        }
        if !p.is_zero() {
            picked_ortho.push(p);
            minima.push(nsq.clone());
        }
    }
    if minima.len() == n {
        Some(minima)
    } else {
        None
    }
}

fn box_iter(n: usize, k: u32) -> impl Iterator<Item = Vec<BigInt>> {
    let width = 2 * k as i64 + 1;
    let total = (width as u128).pow(n as u32);
    (0..total).map(move |idx| {
        let mut rem = idx;
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            let digit = (rem % width as u128) as i64 - k as i64;
            rem /= width as u128;
            coeffs.push(BigInt::from(digit));
        }
        coeffs
    })
}

/// Ascending-interval depth-first search; the counterpart of the zig-zag
/// searcher in `svp`, sharing none of its traversal logic.
struct IntervalSearch<'a> {
    mu: &'a [Vec<Rational>],
    norms_sq: &'a [Rational],
    tau: Option<&'a [Rational]>,
    budget: Rational,
    shrink: bool,
    skip_zero: bool,
    found: Vec<(Vec<BigInt>, Rational)>,
}

impl IntervalSearch<'_> {
    fn descend(&mut self, level: isize, x: &mut Vec<BigInt>, partial: &Rational) {
        if level < 0 {
            if self.skip_zero && x.iter().all(Zero::is_zero) {
                return;
            }
            if self.shrink {
                if *partial < self.budget {
                    self.budget = partial.clone();
                    self.found.clear();
                    self.found.push((x.clone(), partial.clone()));
                } else if *partial == self.budget {
                    self.found.push((x.clone(), partial.clone()));
                }
            } else {
                self.found.push((x.clone(), partial.clone()));
            }
            return;
        }
        let j = level as usize;
        let mut center = match self.tau {
            Some(tau) => tau[j].clone(),
            None => Rational::zero(),
        };
        for i in (j + 1)..self.mu.len() {
            if !x[i].is_zero() {
                center -= &self.mu[i][j] * Rational::from_integer(x[i].clone());
            }
        }
        let w = &self.norms_sq[j];
        let slack = &self.budget - partial;
        if slack.is_negative() {
            return;
        }
        let (lo, hi) = interval(&center, &(slack / w));
        let mut val = lo;
        while val <= hi {
            let diff = Rational::from_integer(val.clone()) - &center;
            let contribution = &diff * &diff * w;
            let total = partial + &contribution;
            // Budget may have shrunk since the interval was computed.
            if total <= self.budget {
                x[j] = val.clone();
                self.descend(level - 1, x, &total);
                x[j] = BigInt::zero();
            }
            val += BigInt::from(1);
        }
    }
}

/// Exact integer interval { k : (k - c)^2 <= T } = [ceil(c - sqrt(T)), floor(c + sqrt(T))].
fn interval(c: &Rational, t: &Rational) -> (BigInt, BigInt) {
    debug_assert!(!t.is_negative());
    let s_est = floor_sqrt(t); // floor(sqrt(T)): within 1 of the true root
    let admissible_hi = |k: &BigInt| {
        let d = Rational::from_integer(k.clone()) - c;
        !d.is_positive() || &d * &d <= *t
    };
    let admissible_lo = |k: &BigInt| {
        let d = c - Rational::from_integer(k.clone());
        !d.is_positive() || &d * &d <= *t
    };
    let mut hi = c.floor().to_integer() + &s_est + BigInt::from(2);
    while !admissible_hi(&hi) {
        hi -= BigInt::from(1);
    }
    let mut lo = c.ceil().to_integer() - &s_est - BigInt::from(2);
    while !admissible_lo(&lo) {
        lo += BigInt::from(1);
    }
    (lo, hi)
}
