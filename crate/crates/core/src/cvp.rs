//! The recursive approximate closest-vector solver driven by an approximate
//! shortest-vector oracle.
//!
//! Per level: decode under the BDD promise (candidate z1), query the oracle
//! for a short vector v, rebuild a basis starting at v, LLL the remainder,
//! project everything orthogonally to v, recurse one dimension down, lift the
//! recursive answer back (candidate z2), and keep whichever candidate is
//! closer. The achieved distance is within gamma^4 * n times the true squared
//! distance; with an exact oracle that specializes to the classic sqrt(n)
//! factor. Every level is traced, including bit-size statistics supporting
//! the polynomial-representation claims.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bdd::solve_bdd_instrumented;
use crate::lattice::{complete_basis, project_basis_perp, lift_candidate, LatticeBasis, LatticeVector};
use crate::linalg::{
    inner_product, matrix_max_bits, norm_sq, perp_component, vector_max_bits, RatMatrix, RatVector,
};
use crate::lll::{lll_with_transform, LllParams};
use crate::rational::{ceil_log2_sqrt, format_rational, round_half_down, Rational};
use crate::svp::{oracle_query, OracleSpec};
use crate::{Error, Result};

/// A closest-vector instance: basis, rational target, oracle choice.
#[derive(Debug, Clone)]
pub struct CvpInstance {
    pub basis: LatticeBasis,
    pub target: RatVector,
    pub oracle: OracleSpec,
}

impl CvpInstance {
    pub fn new(basis: LatticeBasis, target: RatVector, oracle: OracleSpec) -> Result<Self> {
        if target.dim() != basis.m() {
            return Err(Error::DimensionMismatch { expected: basis.m(), got: target.dim() });
        }
        Ok(CvpInstance { basis, target, oracle })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Bdd,
    Recurse,
    Base,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Bdd => write!(f, "bdd"),
            Branch::Recurse => write!(f, "recurse"),
            Branch::Base => write!(f, "base"),
        }
    }
}

/// One recursion level. For the one-dimensional base case the "oracle
/// vector" slot carries the squared norm of the only basis vector.
#[derive(Debug, Clone)]
pub struct LevelRecord {
    pub dim: usize,
    pub branch: Branch,
    pub oracle_vector_norm_sq: Rational,
    pub z1_dist_sq: Option<Rational>,
    pub z2_dist_sq: Option<Rational>,
    pub max_entry_bits: u64,
}

/// Full per-level trace plus the input-size parameter
/// M = max(n, ceil(log2 max_i ||b_i||)) of the integerized top-level basis.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub levels: Vec<LevelRecord>,
    pub m_param: u64,
}

impl ReductionTrace {
    /// Line-oriented serialization, one record per level.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, level) in self.levels.iter().enumerate() {
            let opt = |d: &Option<Rational>| match d {
                Some(x) => format_rational(x),
                None => "-".to_string(),
            };
            out.push_str(&format!(
                "level={} dim={} branch={} vnorm2={} z1d2={} z2d2={} bits={}\n",
                k,
                level.dim,
                level.branch,
                format_rational(&level.oracle_vector_norm_sq),
                opt(&level.z1_dist_sq),
                opt(&level.z2_dist_sq),
                level.max_entry_bits,
            ));
        }
        out
    }
}

/// Solver output. `dist_sq_achieved` is exactly ||answer - target||^2 and the
/// guarantee is dist_sq_achieved <= bound_factor_sq * d(t, L)^2 with
/// bound_factor_sq = gamma^4 * n.
#[derive(Debug, Clone)]
pub struct CvpResult {
    pub answer: LatticeVector,
    pub dist_sq_achieved: Rational,
    pub bound_factor_sq: Rational,
    pub trace: ReductionTrace,
}

/// Closest multiple of a single basis vector: a = round(<t,b1>/<b1,b1>),
/// exact half-integer ties toward minus infinity.
pub fn cvp_base_case(b1: &RatVector, t: &RatVector) -> Result<LatticeVector> {
    if b1.is_zero() {
        return Err(Error::ZeroVector);
    }
    let basis = LatticeBasis::new(RatMatrix::new(vec![b1.clone()]))?;
    let a = round_half_down(&(inner_product(t, b1)? / norm_sq(b1)));
    Ok(LatticeVector::new(&basis, vec![a]))
}

/// Run the full reduction on an instance.
pub fn cvp_solve(inst: &CvpInstance) -> Result<CvpResult> {
    let n = inst.basis.n();

    // Top-level scaling to an integer basis; the target is scaled the same
    // way and the resulting coefficients are valid for the original basis.
    let mut scale = BigInt::one();
    for col in inst.basis.matrix().columns() {
        for e in col.entries() {
            scale = scale.lcm(e.denom());
        }
    }
    let scale_q = Rational::from_integer(scale.clone());
    let scaled_basis = if scale.is_one() {
        inst.basis.clone()
    } else {
        LatticeBasis::new(RatMatrix::new(
            inst.basis.matrix().columns().iter().map(|c| c.scale(&scale_q)).collect(),
        ))?
    };
    let scaled_target = if scale.is_one() { inst.target.clone() } else { inst.target.scale(&scale_q) };

    let max_norm_sq = scaled_basis
        .matrix()
        .columns()
        .iter()
        .map(norm_sq)
        .max()
        .expect("nonempty basis");
    debug_assert!(max_norm_sq.is_integer());
    let m_param = (n as u64).max(ceil_log2_sqrt(&max_norm_sq.to_integer()));

    let (answer_scaled, levels) = solve_level(&scaled_basis, &scaled_target, &inst.oracle)?;

    let answer = LatticeVector::new(&inst.basis, answer_scaled.coeffs().to_vec());
    let dist_sq_achieved = answer.dist_sq(&inst.target);
    let bound_factor_sq = inst.oracle.gamma_fourth(n) * Rational::from_integer(BigInt::from(n));
    Ok(CvpResult {
        answer,
        dist_sq_achieved,
        bound_factor_sq,
        trace: ReductionTrace { levels, m_param },
    })
}

fn solve_level(
    basis: &LatticeBasis,
    t: &RatVector,
    oracle: &OracleSpec,
) -> Result<(LatticeVector, Vec<LevelRecord>)> {
    let n = basis.n();
    let mut bits = matrix_max_bits(basis.matrix()).max(vector_max_bits(t));

    if n == 1 {
        let b1 = basis.column(0);
        let a = round_half_down(&(inner_product(t, b1)? / norm_sq(b1)));
        let z = LatticeVector::new(basis, vec![a]);
        bits = bits.max(vector_max_bits(z.coords()));
        let record = LevelRecord {
            dim: 1,
            branch: Branch::Base,
            oracle_vector_norm_sq: norm_sq(b1),
            z1_dist_sq: None,
            z2_dist_sq: None,
            max_entry_bits: bits,
        };
        return Ok((z, vec![record]));
    }

    // z1: decode under the BDD promise.
    let bdd_run = solve_bdd_instrumented(basis, t, oracle)?;
    let z1 = bdd_run.outcome.candidate;
    bits = bits.max(bdd_run.max_bits);

    // v: the oracle's short elementary vector.
    let short = oracle_query(oracle, basis)?;
    let v = short.vector;
    bits = bits.max(vector_max_bits(v.coords()));

    // Rebuild a basis starting at v, LLL-reduce the completion to keep its
    // representation small.
    let completion = complete_basis(&v, basis)?;
    let completion_matrix = RatMatrix::new(completion.iter().map(|b| b.coords().clone()).collect());
    let reduced = lll_with_transform(&LatticeBasis::new(completion_matrix)?, &LllParams::default())?;
    let rest: Vec<LatticeVector> = reduced
        .transform
        .iter()
        .map(|col| {
            let mut coeffs = vec![BigInt::zero(); n];
            for (c, b) in col.iter().zip(&completion) {
                if c.is_zero() {
                    continue;
                }
                for (acc, bc) in coeffs.iter_mut().zip(b.coeffs()) {
                    *acc += c * bc;
                }
            }
            LatticeVector::new(basis, coeffs)
        })
        .collect();
    for b in &rest {
        bits = bits.max(vector_max_bits(b.coords()));
    }

    // Project basis and target orthogonally to v; recurse in dimension n-1.
    let proj_basis = project_basis_perp(&rest, v.coords())?;
    let t_perp = perp_component(t, v.coords())?;
    bits = bits.max(matrix_max_bits(proj_basis.matrix())).max(vector_max_bits(&t_perp));

    let (z_proj, sub_levels) = solve_level(&proj_basis, &t_perp, oracle)?;

    // Lift the projected answer back into the full lattice.
    let z2 = lift_candidate(basis, &v, &rest, z_proj.coords(), t)?;
    bits = bits.max(vector_max_bits(z1.coords())).max(vector_max_bits(z2.coords()));

    let d1 = z1.dist_sq(t);
    let d2 = z2.dist_sq(t);
    let (winner, branch) = if d1 <= d2 { (z1, Branch::Bdd) } else { (z2, Branch::Recurse) };

    let record = LevelRecord {
        dim: n,
        branch,
        oracle_vector_norm_sq: v.norm_sq(),
        z1_dist_sq: Some(d1),
        z2_dist_sq: Some(d2),
        max_entry_bits: bits,
    };
    let mut levels = vec![record];
    levels.extend(sub_levels);
    Ok((winner, levels))
}

/// Maximum bit length over all numerators and denominators of all vectors
/// recorded at all levels of a completed trace.
pub fn collect_bit_stats(trace: &ReductionTrace) -> u64 {
    trace.levels.iter().map(|l| l.max_entry_bits).max().unwrap_or(0)
}
