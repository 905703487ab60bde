//! The pluggable approximate shortest-vector oracle, with three backends:
//! exact enumeration, LLL's first vector, and an adversarial oracle that
//! returns the *longest* admissible elementary vector to stress worst-case
//! guarantees.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{is_elementary, make_elementary, LatticeBasis, LatticeVector};
use crate::linalg::{gram_schmidt_data, GramSchmidt};
use crate::lll::{lll_with_transform, LllParams};
use crate::rational::{format_rational, parse_rational, round_half_down, Rational};
use crate::{Error, Result};

/// Dimension cap for exact enumeration.
pub const DEFAULT_ENUM_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Exact,
    Lll,
    Adversarial,
}

/// Which oracle to use and with what declared quality.
///
/// Quality is carried as gamma^2: the LLL oracle's declared gamma is
/// 2^((n-1)/2), which is irrational for even n-1, while its square is exact.
/// Every bound in the toolkit is checked on squared quantities anyway.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSpec {
    pub kind: OracleKind,
    gamma: Rational,
    pub seed: u64,
}

impl OracleSpec {
    pub fn exact() -> Self {
        OracleSpec { kind: OracleKind::Exact, gamma: Rational::one(), seed: 0 }
    }

    pub fn lll() -> Self {
        OracleSpec { kind: OracleKind::Lll, gamma: Rational::one(), seed: 0 }
    }

    pub fn adversarial(gamma: Rational, seed: u64) -> Result<Self> {
        if gamma < Rational::one() {
            return Err(Error::InvalidParameter(format!("gamma must be >= 1, got {gamma}")));
        }
        Ok(OracleSpec { kind: OracleKind::Adversarial, gamma, seed })
    }

    /// Declared gamma^2 when querying an n-dimensional basis.
    pub fn gamma_sq(&self, n: usize) -> Rational {
        match self.kind {
            OracleKind::Exact => Rational::one(),
            OracleKind::Lll => Rational::from_integer(BigInt::one() << (n - 1)),
            OracleKind::Adversarial => &self.gamma * &self.gamma,
        }
    }

    /// Declared gamma^4 (the Theorem-style bound factor is gamma^4 * n).
    pub fn gamma_fourth(&self, n: usize) -> Rational {
        let g2 = self.gamma_sq(n);
        &g2 * &g2
    }

    /// CLI form: `exact`, `lll`, or `adversarial:<gamma>:<seed>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(OracleSpec::exact()),
            "lll" => Ok(OracleSpec::lll()),
            _ => {
                let rest = s
                    .strip_prefix("adversarial:")
                    .ok_or_else(|| Error::Parse(format!("unknown oracle spec {s:?}")))?;
                let (gamma_s, seed_s) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse("adversarial oracle needs <gamma>:<seed>".into()))?;
                let gamma = parse_rational(gamma_s)?;
                let seed = seed_s
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad oracle seed {seed_s:?}: {e}")))?;
                OracleSpec::adversarial(gamma, seed)
            }
        }
    }
}

impl std::fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            OracleKind::Exact => write!(f, "exact"),
            OracleKind::Lll => write!(f, "lll"),
            OracleKind::Adversarial => {
                write!(f, "adversarial:{}:{}", format_rational(&self.gamma), self.seed)
            }
        }
    }
}

/// An oracle answer: a nonzero elementary lattice vector together with the
/// declared quality bound it came with (squared).
#[derive(Debug, Clone)]
pub struct SvpOracleResult {
    pub vector: LatticeVector,
    pub gamma_sq: Rational,
}

/// Query the oracle on a basis. The answer is always nonzero, elementary,
/// and (for an honest backend) of squared norm at most gamma^2 lambda_1^2.
pub fn oracle_query(spec: &OracleSpec, basis: &LatticeBasis) -> Result<SvpOracleResult> {
    let n = basis.n();
    let gamma_sq = spec.gamma_sq(n);
    match spec.kind {
        OracleKind::Exact => {
            let v = enumerate_shortest(basis)?;
            Ok(SvpOracleResult { vector: make_elementary(basis, &v)?, gamma_sq })
        }
        OracleKind::Lll => {
            let out = lll_with_transform(basis, &LllParams::default())?;
            let coeffs: Vec<BigInt> = out.transform[0].clone();
            let v = LatticeVector::new(basis, coeffs);
            Ok(SvpOracleResult { vector: make_elementary(basis, &v)?, gamma_sq })
        }
        OracleKind::Adversarial => {
            // "gamma < 2^n" is assumed by the bit-size analysis; enforce it.
            let four_n = Rational::from_integer(BigInt::one() << (2 * n));
            if gamma_sq >= four_n {
                return Err(Error::InvalidParameter(format!(
                    "adversarial gamma {} too large for dimension {n} (needs gamma < 2^n)",
                    format_rational(&spec.gamma)
                )));
            }
            let reduced = reduce_for_search(basis)?;
            let lambda1_sq = shortest_vector(basis, &reduced)?.norm_sq();
            let budget = &gamma_sq * lambda1_sq;
            let all = vectors_within(basis, &reduced, &budget);
            let mut longest: Vec<LatticeVector> = Vec::new();
            let mut best = Rational::zero();
            for v in all {
                if !is_elementary(&v) {
                    continue;
                }
                let nsq = v.norm_sq();
                if nsq > best {
                    best = nsq;
                    longest = vec![v];
                } else if nsq == best {
                    longest.push(v);
                }
            }
            debug_assert!(!longest.is_empty());
            longest.sort_by(|a, b| compare_coeff_keys(a.coeffs(), b.coeffs()));
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let pick = rng.gen_range(0..longest.len());
            Ok(SvpOracleResult { vector: longest[pick].clone(), gamma_sq })
        }
    }
}

/// A vector achieving lambda_1 exactly, by depth-first enumeration over
/// integer coefficients with Gram–Schmidt pruning on an LLL-preprocessed
/// basis.
///
/// Deterministic tie handling: minimizers are sign-normalized so the first
/// nonzero coefficient is positive, then the winner is the one whose
/// coefficient tuple is smallest reading from the last coordinate down,
/// comparing entries by absolute value with negatives after positives.
pub fn enumerate_shortest(basis: &LatticeBasis) -> Result<LatticeVector> {
    let reduced = reduce_for_search(basis)?;
    shortest_vector(basis, &reduced)
}

/// All nonzero lattice vectors with squared norm <= radius_sq, as vectors of
/// the given basis.
pub fn enumerate_within(basis: &LatticeBasis, radius_sq: &Rational) -> Result<Vec<LatticeVector>> {
    let reduced = reduce_for_search(basis)?;
    Ok(vectors_within(basis, &reduced, radius_sq))
}

struct ReducedForSearch {
    out: crate::lll::LllOutput,
    gs: GramSchmidt,
}

fn reduce_for_search(basis: &LatticeBasis) -> Result<ReducedForSearch> {
    let n = basis.n();
    if n > DEFAULT_ENUM_LIMIT {
        return Err(Error::DimensionOverLimit { dim: n, limit: DEFAULT_ENUM_LIMIT });
    }
    let out = lll_with_transform(basis, &LllParams::default())?;
    let gs = gram_schmidt_data(out.basis.matrix())?;
    Ok(ReducedForSearch { out, gs })
}

fn shortest_vector(basis: &LatticeBasis, reduced: &ReducedForSearch) -> Result<LatticeVector> {
    let n = basis.n();
    let initial = reduced
        .out
        .basis
        .matrix()
        .columns()
        .iter()
        .map(crate::linalg::norm_sq)
        .min()
        .expect("nonempty basis");

    let mut search = Search {
        gs: &reduced.gs,
        budget: initial,
        shrink: true,
        found: Vec::new(),
        target: None,
    };
    let mut x = vec![BigInt::zero(); n];
    search.dfs(n as isize - 1, &mut x, &Rational::zero());

    let mut best: Option<Vec<BigInt>> = None;
    for (red_coeffs, _) in &search.found {
        let orig = apply_transform(&reduced.out.transform, red_coeffs);
        let orig = sign_normalize(orig);
        best = Some(match best {
            None => orig,
            Some(cur) => {
                if compare_coeff_keys(&orig, &cur) == std::cmp::Ordering::Less {
                    orig
                } else {
                    cur
                }
            }
        });
    }
    Ok(LatticeVector::new(basis, best.expect("shortest vector exists")))
}

fn vectors_within(
    basis: &LatticeBasis,
    reduced: &ReducedForSearch,
    radius_sq: &Rational,
) -> Vec<LatticeVector> {
    let n = basis.n();
    let mut search = Search {
        gs: &reduced.gs,
        budget: radius_sq.clone(),
        shrink: false,
        found: Vec::new(),
        target: None,
    };
    let mut x = vec![BigInt::zero(); n];
    search.dfs(n as isize - 1, &mut x, &Rational::zero());
    search
        .found
        .into_iter()
        .map(|(red_coeffs, _)| {
            LatticeVector::new(basis, apply_transform(&reduced.out.transform, &red_coeffs))
        })
        .collect()
}

fn apply_transform(transform: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    let n = transform[0].len();
    let mut out = vec![BigInt::zero(); n];
    for (xi, col) in x.iter().zip(transform) {
        if xi.is_zero() {
            continue;
        }
        for (acc, c) in out.iter_mut().zip(col) {
            *acc += xi * c;
        }
    }
    out
}

fn sign_normalize(mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = coeffs.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    coeffs
}

/// Compare coefficient tuples from the last coordinate down, by (|x|, sign).
pub(crate) fn compare_coeff_keys(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        let ord = x
            .abs()
            .cmp(&y.abs())
            .then_with(|| x.is_negative().cmp(&y.is_negative()));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Depth-first zig-zag enumeration over Gram–Schmidt level contributions.
///
/// `target` shifts each level's center (None for SVP around the origin).
/// With `shrink` the budget follows the best complete value and all
/// minimizers are retained; otherwise everything within the fixed budget is
/// collected.
struct Search<'a> {
    gs: &'a GramSchmidt,
    budget: Rational,
    shrink: bool,
    found: Vec<(Vec<BigInt>, Rational)>,
    target: Option<Vec<Rational>>,
}

impl Search<'_> {
    fn dfs(&mut self, level: isize, x: &mut Vec<BigInt>, partial: &Rational) {
        if level < 0 {
            if x.iter().all(Zero::is_zero) && self.target.is_none() {
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
        // Center of the parabola in x_j given the choices above.
        let mut center = match &self.target {
            Some(tau) => tau[j].clone(),
            None => Rational::zero(),
        };
        for i in (j + 1)..self.gs.mu.len() {
            if !x[i].is_zero() {
                center -= &self.gs.mu[i][j] * Rational::from_integer(x[i].clone());
            }
        }
        let w = &self.gs.norms_sq[j];

        let start = round_half_down(&center);
        let mut up_next = start.clone();
        let mut down_next = &start - BigInt::one();
        let mut up_alive = true;
        let mut down_alive = true;
        let mut turn_up = true;
        // Zig-zag outward from the rounded center. On each side the
        // contribution is monotone in the step count, so a side dies the
        // first time it over-runs the budget.
        while up_alive || down_alive {
            let take_up = if up_alive && down_alive { turn_up } else { up_alive };
            let val = if take_up { up_next.clone() } else { down_next.clone() };
            let diff = Rational::from_integer(val.clone()) - &center;
            let contribution = &diff * &diff * w;
            let total = partial + &contribution;
            if total > self.budget {
                if take_up {
                    up_alive = false;
                } else {
                    down_alive = false;
                }
            } else {
                x[j] = val;
                self.dfs(level - 1, x, &total);
                x[j] = BigInt::zero();
                if take_up {
                    up_next += BigInt::one();
                } else {
                    down_next -= BigInt::one();
                }
            }
            turn_up = !take_up;
        }
    }
}
