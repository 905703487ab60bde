//! Bounded-distance decoding through the embedding trick: append the target
//! as an extra basis column with a scale entry alpha, so that (under the BDD
//! promise) the decoding error becomes a unique shortest vector of the
//! embedded lattice and one oracle call recovers the closest vector exactly.
//!
//! The true distance is unknown, so a geometric grid of alpha values is
//! tried, starting from a rational upper bound derived from nearest-plane
//! decoding; the closest candidate over all trials wins. Exactness under the
//! promise is an empirically tested property of this workaround, enforced by
//! the acceptance suite rather than derived here.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::{nearest_plane, LatticeBasis, LatticeVector};
use crate::linalg::{matrix_max_bits, vector_max_bits, RatMatrix, RatVector};
use crate::lll::{lll_with_transform, LllParams};
use crate::rational::{ratio, sqrt_upper_bound, Rational};
use crate::svp::{oracle_query, OracleSpec, SvpOracleResult};
use crate::{Error, Result};

/// The (m+1) x (n+1) embedded basis of a decoding instance: columns
/// (b_i, 0) plus the final column (t, alpha).
#[derive(Debug, Clone)]
pub struct EmbeddedBasis {
    base: LatticeBasis,
    alpha: Rational,
    source_basis: LatticeBasis,
    source_target: RatVector,
}

impl EmbeddedBasis {
    pub fn base(&self) -> &LatticeBasis {
        &self.base
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn source_basis(&self) -> &LatticeBasis {
        &self.source_basis
    }

    pub fn source_target(&self) -> &RatVector {
        &self.source_target
    }
}

/// Outcome of a decoding attempt. The candidate is always a lattice vector;
/// `promise_certified` records whether it came out of an embedding vector of
/// the expected (+-1 last coefficient) shape.
#[derive(Debug, Clone)]
pub struct BddOutcome {
    pub candidate: LatticeVector,
    pub promise_certified: bool,
}

/// Build the embedded basis for target t and scale alpha > 0.
pub fn embed(basis: &LatticeBasis, t: &RatVector, alpha: &Rational) -> Result<EmbeddedBasis> {
    if !alpha.is_positive() {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if t.dim() != basis.m() {
        return Err(Error::DimensionMismatch { expected: basis.m(), got: t.dim() });
    }
    let mut cols: Vec<RatVector> = Vec::with_capacity(basis.n() + 1);
    for col in basis.matrix().columns() {
        let mut entries = col.entries().to_vec();
        entries.push(Rational::zero());
        cols.push(RatVector::new(entries));
    }
    let mut entries = t.entries().to_vec();
    entries.push(alpha.clone());
    cols.push(RatVector::new(entries));
    Ok(EmbeddedBasis {
        base: LatticeBasis::new(RatMatrix::new(cols))?,
        alpha: alpha.clone(),
        source_basis: basis.clone(),
        source_target: t.clone(),
    })
}

/// Recover a decoding candidate from an oracle answer on the embedded basis.
///
/// Total by design: when the answer does not have the certified shape (last
/// embedded coefficient +-1), the candidate falls back to nearest-plane
/// decoding on the LLL-reduced source basis.
pub fn extract_bdd_solution(embedded: &EmbeddedBasis, w: &SvpOracleResult) -> Result<BddOutcome> {
    if let Some(candidate) = certified_candidate(embedded, &w.vector) {
        return Ok(BddOutcome { candidate, promise_certified: true });
    }
    let fallback = reduced_nearest_plane(&embedded.source_basis, &embedded.source_target)?;
    Ok(BddOutcome { candidate: fallback, promise_certified: false })
}

/// When w = (Bx + a*t, a*alpha) with a = +-1, the decoding candidate is
/// -a * Bx, whose distance to t equals ||first m coordinates of w||.
fn certified_candidate(embedded: &EmbeddedBasis, w: &LatticeVector) -> Option<LatticeVector> {
    let n = embedded.source_basis.n();
    let a = &w.coeffs()[n];
    if a.abs() != BigInt::one() {
        return None;
    }
    let coeffs: Vec<BigInt> = w.coeffs()[..n].iter().map(|x| -(a * x)).collect();
    Some(LatticeVector::new(&embedded.source_basis, coeffs))
}

/// Solve BDD with the given oracle: nearest-plane estimate, geometric
/// alpha grid, one embedding + oracle call per trial, best candidate wins.
/// The promise d(t, L) <= lambda_1/(2 gamma) is not checked; outside it the
/// result is just some lattice vector.
pub fn solve_bdd(basis: &LatticeBasis, t: &RatVector, spec: &OracleSpec) -> Result<BddOutcome> {
    Ok(solve_bdd_instrumented(basis, t, spec)?.outcome)
}

pub(crate) struct BddRun {
    pub outcome: BddOutcome,
    /// Largest numerator/denominator bit size seen across embedded bases,
    /// oracle answers and candidates.
    pub max_bits: u64,
}

pub(crate) fn solve_bdd_instrumented(
    basis: &LatticeBasis,
    t: &RatVector,
    spec: &OracleSpec,
) -> Result<BddRun> {
    let mut max_bits = vector_max_bits(t).max(matrix_max_bits(basis.matrix()));

    let fallback = reduced_nearest_plane(basis, t)?;
    max_bits = max_bits.max(vector_max_bits(fallback.coords()));
    let d_est_sq = fallback.dist_sq(t);
    if d_est_sq.is_zero() {
        // t is itself a lattice point; alpha = 0 would be degenerate.
        return Ok(BddRun {
            outcome: BddOutcome { candidate: fallback, promise_certified: true },
            max_bits,
        });
    }

    // Rational upper bound r with d_est <= r <= 2 d_est, then the grid
    // r, r*(2/3), r*(2/3)^2, ... reaches below any true distance the
    // nearest-plane bound allows, stepping finely enough that some trial
    // lands within a factor 3/2 of it. The trial count covers the 2x start
    // slack and the nearest-plane quality factor with margin.
    let r = sqrt_upper_bound(&d_est_sq);
    let n = basis.n();
    let trials = (6 * n).div_ceil(7) + 4;
    let step = ratio(2, 3);

    let mut best: Option<(Rational, BddOutcome)> = None;
    let mut alpha = r;
    for _ in 0..=trials {
        let embedded = embed(basis, t, &alpha)?;
        max_bits = max_bits.max(matrix_max_bits(embedded.base.matrix()));
        let w = oracle_query(spec, &embedded.base)?;
        max_bits = max_bits.max(vector_max_bits(w.vector.coords()));
        if let Some(candidate) = certified_candidate(&embedded, &w.vector) {
            max_bits = max_bits.max(vector_max_bits(candidate.coords()));
            let d = candidate.dist_sq(t);
            let better = match &best {
                None => true,
                Some((bd, _)) => d < *bd,
            };
            if better {
                best = Some((d, BddOutcome { candidate, promise_certified: true }));
            }
        }
        alpha = &alpha * &step;
    }

    let outcome = match best {
        Some((d, outcome)) if d <= d_est_sq => outcome,
        _ => BddOutcome { candidate: fallback, promise_certified: false },
    };
    Ok(BddRun { outcome, max_bits })
}

/// Nearest-plane decoding on the LLL-reduced basis, mapped back to the
/// caller's basis coefficients.
fn reduced_nearest_plane(basis: &LatticeBasis, t: &RatVector) -> Result<LatticeVector> {
    let out = lll_with_transform(basis, &LllParams::default())?;
    let decoded = nearest_plane(&out.basis, t)?;
    let mut coeffs = vec![BigInt::zero(); basis.n()];
    for (c, col) in decoded.coeffs().iter().zip(&out.transform) {
        if c.is_zero() {
            continue;
        }
        for (acc, u) in coeffs.iter_mut().zip(col) {
            *acc += c * u;
        }
    }
    let v = LatticeVector::new(basis, coeffs);
    debug_assert_eq!(v.coords(), decoded.coords());
    Ok(v)
}
