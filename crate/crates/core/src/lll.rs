//! Exact-arithmetic LLL reduction.
//!
//! Used both to control representation size along the reduction recursion
//! and as one concrete approximate SVP oracle. Everything is over rationals;
//! the size-reduction and Lovász conditions are checked with exact
//! comparisons on squared norms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::LatticeBasis;
use crate::linalg::{gram_schmidt_data, inner_product, RatMatrix, RatVector};
use crate::rational::{ratio, round_half_down, Rational};
use crate::{Error, Result};

/// Lovász parameter, 1/4 < delta < 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LllParams {
    delta: Rational,
}

impl LllParams {
    pub fn new(delta: Rational) -> Result<Self> {
        if delta <= ratio(1, 4) || delta >= ratio(1, 1) {
            return Err(Error::InvalidParameter(format!(
                "delta must satisfy 1/4 < delta < 1, got {delta}"
            )));
        }
        Ok(LllParams { delta })
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }
}

impl Default for LllParams {
    /// The classic 3/4, which gives the 2^((n-1)/2) first-vector factor.
    fn default() -> Self {
        LllParams { delta: ratio(3, 4) }
    }
}

/// LLL-reduced basis plus the unimodular transform: output = input * U.
pub struct LllOutput {
    pub basis: LatticeBasis,
    /// Column j holds the input-basis coefficients of output column j.
    pub transform: Vec<Vec<BigInt>>,
}

/// LLL reduction. The output generates the same lattice, is size-reduced
/// (|mu_ij| <= 1/2) and satisfies the Lovász condition for the given delta.
pub fn lll(basis: &LatticeBasis, params: &LllParams) -> Result<LatticeBasis> {
    Ok(lll_with_transform(basis, params)?.basis)
}

pub fn lll_with_transform(basis: &LatticeBasis, params: &LllParams) -> Result<LllOutput> {
    let n = basis.n();
    let mut state = LllState {
        cols: basis.matrix().columns().to_vec(),
        transform: (0..n)
            .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect(),
        gso: Vec::with_capacity(n),
        norms: Vec::with_capacity(n),
        mu: vec![vec![Rational::zero(); n]; n],
    };
    state.extend_gso(0)?;

    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            state.extend_gso(k)?;
        }
        state.size_reduce(k, k - 1);
        let mu = state.mu[k][k - 1].clone();
        let lhs = &state.norms[k];
        let rhs = (params.delta() - &mu * &mu) * &state.norms[k - 1];
        if *lhs < rhs {
            state.swap_step(k, kmax);
            k = k.max(2) - 1;
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                state.size_reduce(k, l);
            }
            k += 1;
        }
    }

    Ok(LllOutput {
        basis: LatticeBasis::new(RatMatrix::new(state.cols))?,
        transform: state.transform,
    })
}

/// Incrementally maintained reduction state: basis columns, the unimodular
/// transform, and Gram–Schmidt data (orthogonal vectors, squared norms, mu),
/// updated in place by size-reduction and swap steps.
struct LllState {
    cols: Vec<RatVector>,
    transform: Vec<Vec<BigInt>>,
    gso: Vec<RatVector>,
    norms: Vec<Rational>,
    mu: Vec<Vec<Rational>>,
}

impl LllState {
    /// Compute gso/mu/norm for column k from the already-final earlier ones.
    fn extend_gso(&mut self, k: usize) -> Result<()> {
        let mut v = self.cols[k].clone();
        for j in 0..k {
            let c = inner_product(&self.cols[k], &self.gso[j])? / &self.norms[j];
            v = v.sub(&self.gso[j].scale(&c));
            self.mu[k][j] = c;
        }
        if v.is_zero() {
            return Err(crate::Error::DependentColumns);
        }
        self.norms.push(crate::linalg::norm_sq(&v));
        self.gso.push(v);
        Ok(())
    }

    /// b_k -= round(mu_kl) * b_l, with the matching mu-row update.
    fn size_reduce(&mut self, k: usize, l: usize) {
        let r = round_half_down(&self.mu[k][l]);
        if r.is_zero() {
            return;
        }
        self.cols[k] = self.cols[k].sub(&self.cols[l].scale_int(&r));
        let ul = self.transform[l].clone();
        for (a, b) in self.transform[k].iter_mut().zip(&ul) {
            *a -= &r * b;
        }
        let rq = Rational::from_integer(r);
        for j in 0..l {
            let adj = &self.mu[l][j] * &rq;
            self.mu[k][j] -= adj;
        }
        self.mu[k][l] -= rq;
    }

    /// Exchange columns k-1 and k, updating gso/mu/norms in place
    /// (full-rank case of the classic bookkeeping).
    fn swap_step(&mut self, k: usize, kmax: usize) {
        self.cols.swap(k, k - 1);
        self.transform.swap(k, k - 1);
        for j in 0..k.saturating_sub(1) {
            let tmp = self.mu[k][j].clone();
            self.mu[k][j] = self.mu[k - 1][j].clone();
            self.mu[k - 1][j] = tmp;
        }
        let tmu = self.mu[k][k - 1].clone();
        let tb = &self.norms[k] + &tmu * &tmu * &self.norms[k - 1];
        // tb is the squared norm of the new (k-1)-th orthogonal vector;
        // independence keeps it positive.
        let t = &self.norms[k - 1] / &tb;
        self.mu[k][k - 1] = &tmu * &t;

        let b_prev = self.gso[k - 1].clone();
        let new_prev = self.gso[k].add(&b_prev.scale(&tmu));
        let ratio = &self.norms[k] / &tb;
        let new_cur = b_prev.scale(&ratio).sub(&self.gso[k].scale(&self.mu[k][k - 1]));
        self.gso[k - 1] = new_prev;
        self.gso[k] = new_cur;

        self.norms[k] = &self.norms[k] * &t;
        self.norms[k - 1] = tb;

        for i in (k + 1)..=kmax {
            let t_val = self.mu[i][k].clone();
            self.mu[i][k] = &self.mu[i][k - 1] - &tmu * &t_val;
            self.mu[i][k - 1] = &t_val + &self.mu[k][k - 1] * &self.mu[i][k];
        }
    }
}

/// Exact size-reduction check: |mu_ij| <= 1/2 for all j < i.
pub fn is_size_reduced(basis: &LatticeBasis) -> Result<bool> {
    let gs = gram_schmidt_data(basis.matrix())?;
    let half = ratio(1, 2);
    for row in &gs.mu {
        for mu in row {
            if mu.abs() > half {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact Lovász check: delta * ||g_{k-1}||^2 <= ||g_k||^2 + mu^2 ||g_{k-1}||^2.
pub fn satisfies_lovasz(basis: &LatticeBasis, params: &LllParams) -> Result<bool> {
    let gs = gram_schmidt_data(basis.matrix())?;
    for k in 1..basis.n() {
        let mu = &gs.mu[k][k - 1];
        let lhs = params.delta() * &gs.norms_sq[k - 1];
        let rhs = &gs.norms_sq[k] + mu * mu * &gs.norms_sq[k - 1];
        if lhs > rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
