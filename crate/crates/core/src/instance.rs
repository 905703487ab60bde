//! Instance files and the random instance generator.
//!
//! The file format is line-oriented text with exact rational literals only —
//! bit-exactness is load-bearing for the representation-size checks, so
//! decimals never appear. Output is canonical (gcd-reduced literals, fixed
//! field order), which makes generation byte-reproducible from a seed.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{is_member, LatticeBasis, LatticeVector};
use crate::linalg::{norm_sq, RatMatrix, RatVector};
use crate::rational::{
    format_rational, is_perfect_square, isqrt, parse_rational, sqrt_lower_bound, Rational,
};
use crate::reference::{brute_cvp, EnumerationBudget};
use crate::svp::enumerate_shortest;
use crate::{Error, Result};

pub const FORMAT_HEADER: &str = "latk-instance-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Uniform,
    PlantedBdd,
    PlantedCvp,
}

impl GeneratorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GeneratorKind::Uniform => "uniform",
            GeneratorKind::PlantedBdd => "planted-bdd",
            GeneratorKind::PlantedCvp => "planted-cvp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GeneratorKind::Uniform),
            "planted-bdd" => Ok(GeneratorKind::PlantedBdd),
            "planted-cvp" => Ok(GeneratorKind::PlantedCvp),
            _ => Err(Error::Parse(format!("unknown generator kind {s:?}"))),
        }
    }
}

/// A parsed instance file. The planted answer, when present, is always a
/// lattice member (checked at parse time).
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub kind: GeneratorKind,
    pub seed: u64,
    pub basis: LatticeBasis,
    pub target: Option<RatVector>,
    pub gamma: Rational,
    pub planted: Option<RatVector>,
}

impl InstanceFile {
    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn m(&self) -> usize {
        self.basis.m()
    }

    /// Canonical text form; `parse` inverts this exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_HEADER);
        out.push('\n');
        out.push_str(&format!("kind {}\n", self.kind.as_str()));
        out.push_str(&format!("seed {}\n", self.seed));
        out.push_str(&format!("n {}\n", self.n()));
        out.push_str(&format!("m {}\n", self.m()));
        out.push_str(&format!("gamma {}\n", format_rational(&self.gamma)));
        for col in self.basis.matrix().columns() {
            out.push_str(&format!("column {}\n", col.to_literals()));
        }
        if let Some(t) = &self.target {
            out.push_str(&format!("target {}\n", t.to_literals()));
        }
        if let Some(p) = &self.planted {
            out.push_str(&format!("planted {}\n", p.to_literals()));
        }
        out
    }

    pub fn parse(text: &str) -> Result<InstanceFile> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
        if header != FORMAT_HEADER {
            return Err(Error::Parse(format!("unexpected header {header:?}")));
        }

        let mut kind = None;
        let mut seed = None;
        let mut n = None;
        let mut m = None;
        let mut gamma = None;
        let mut columns: Vec<RatVector> = Vec::new();
        let mut target = None;
        let mut planted = None;

        for line in lines {
            let (key, rest) = line.split_once(char::is_whitespace).ok_or_else(|| {
                Error::Parse(format!("malformed line {line:?}"))
            })?;
            match key {
                "kind" => kind = Some(GeneratorKind::parse(rest.trim())?),
                "seed" => {
                    seed = Some(rest.trim().parse::<u64>().map_err(|e| {
                        Error::Parse(format!("bad seed {rest:?}: {e}"))
                    })?)
                }
                "n" => {
                    n = Some(rest.trim().parse::<usize>().map_err(|e| {
                        Error::Parse(format!("bad n {rest:?}: {e}"))
                    })?)
                }
                "m" => {
                    m = Some(rest.trim().parse::<usize>().map_err(|e| {
                        Error::Parse(format!("bad m {rest:?}: {e}"))
                    })?)
                }
                "gamma" => gamma = Some(parse_rational(rest)?),
                "column" => columns.push(parse_vector(rest)?),
                "target" => target = Some(parse_vector(rest)?),
                "planted" => planted = Some(parse_vector(rest)?),
                _ => return Err(Error::Parse(format!("unknown field {key:?}"))),
            }
        }

        let kind = kind.ok_or_else(|| Error::Parse("missing kind".into()))?;
        let seed = seed.ok_or_else(|| Error::Parse("missing seed".into()))?;
        let n = n.ok_or_else(|| Error::Parse("missing n".into()))?;
        let m = m.ok_or_else(|| Error::Parse("missing m".into()))?;
        let gamma = gamma.ok_or_else(|| Error::Parse("missing gamma".into()))?;
        if gamma < Rational::one() {
            return Err(Error::Parse(format!("gamma must be >= 1, got {gamma}")));
        }
        if columns.len() != n {
            return Err(Error::Parse(format!("expected {n} columns, found {}", columns.len())));
        }
        if columns.iter().any(|c| c.dim() != m) {
            return Err(Error::Parse("column dimension differs from m".into()));
        }
        let basis = LatticeBasis::new(RatMatrix::new(columns))
            .map_err(|e| Error::Parse(format!("invalid basis: {e}")))?;
        if let Some(t) = &target {
            if t.dim() != m {
                return Err(Error::Parse("target dimension differs from m".into()));
            }
        }
        if let Some(p) = &planted {
            if p.dim() != m {
                return Err(Error::Parse("planted dimension differs from m".into()));
            }
            if is_member(&basis, p).map_err(|e| Error::Parse(e.to_string()))?.is_none() {
                return Err(Error::Parse("planted answer is not a lattice member".into()));
            }
        }
        Ok(InstanceFile { kind, seed, basis, target, gamma, planted })
    }
}

fn parse_vector(s: &str) -> Result<RatVector> {
    let entries = s
        .split_whitespace()
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    Ok(RatVector::new(entries))
}

/// What to generate.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub m: usize,
    pub entry_bits: u32,
    pub seed: u64,
    pub gamma: Rational,
    /// Fraction of lambda_1/(2 gamma) used for the planted-bdd offset length.
    pub bdd_slack: Rational,
}

impl GeneratorSpec {
    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > self.m {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= n <= m, got n={} m={}",
                self.n, self.m
            )));
        }
        if self.entry_bits == 0 || self.entry_bits > 16 {
            return Err(Error::InvalidParameter("entry_bits must be in 1..=16".into()));
        }
        if self.gamma < Rational::one() {
            return Err(Error::InvalidParameter("gamma must be >= 1".into()));
        }
        if self.kind == GeneratorKind::PlantedBdd
            && (!self.bdd_slack.is_positive() || self.bdd_slack >= Rational::one())
        {
            return Err(Error::InvalidParameter("bdd_slack must be in (0, 1)".into()));
        }
        if self.kind != GeneratorKind::Uniform && self.n > 10 {
            return Err(Error::InvalidParameter(
                "planted instances need brute-force verification (n <= 10)".into(),
            ));
        }
        Ok(())
    }
}

/// Deterministic generation: the same spec always produces the same bytes.
pub fn generate(spec: &GeneratorSpec) -> Result<InstanceFile> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let basis = random_basis(&mut rng, spec);

    match spec.kind {
        GeneratorKind::Uniform => {
            let point = random_lattice_point(&mut rng, &basis);
            let offset = random_rational_vector(&mut rng, spec.m, spec.entry_bits);
            let target = point.coords().add(&offset);
            Ok(InstanceFile {
                kind: spec.kind,
                seed: spec.seed,
                basis,
                target: Some(target),
                gamma: spec.gamma.clone(),
                planted: None,
            })
        }
        GeneratorKind::PlantedCvp => {
            let point = random_lattice_point(&mut rng, &basis);
            let offset = random_rational_vector(&mut rng, spec.m, spec.entry_bits);
            let target = point.coords().add(&offset);
            let answer = brute_cvp(&basis, &target, &EnumerationBudget::default())?;
            Ok(InstanceFile {
                kind: spec.kind,
                seed: spec.seed,
                basis,
                target: Some(target),
                gamma: spec.gamma.clone(),
                planted: Some(answer.coords().clone()),
            })
        }
        GeneratorKind::PlantedBdd => {
            let lambda1_sq = enumerate_shortest(&basis)?.norm_sq();
            // ||e||^2 aimed at (slack * lambda_1 / (2 gamma))^2, realized as
            // an exactly rational length c so that the true distance is
            // representable (the embedding checks need alpha = d exactly).
            let target_len_sq = &spec.bdd_slack * &spec.bdd_slack * &lambda1_sq
                / (Rational::from_integer(BigInt::from(4)) * &spec.gamma * &spec.gamma);
            let direction = square_norm_direction(&mut rng, spec.m);
            let dir_len = isqrt(&norm_sq(&direction).to_integer());
            let c = sqrt_lower_bound(&target_len_sq);
            if c.is_zero() {
                return Err(Error::InvalidParameter(
                    "bdd_slack too small to represent the offset".into(),
                ));
            }
            let e = direction.scale(&(c.clone() / Rational::from_integer(dir_len)));
            debug_assert!(norm_sq(&e) <= target_len_sq);
            let point = random_lattice_point(&mut rng, &basis);
            let target = point.coords().add(&e);
            // The offset is shorter than lambda_1/2, so the planted point is
            // the unique closest vector; confirm via the reference oracle.
            let check = brute_cvp(&basis, &target, &EnumerationBudget::default())?;
            if check.coords() != point.coords() {
                return Err(Error::InvalidParameter(
                    "internal check failed: planted point is not the closest vector".into(),
                ));
            }
            Ok(InstanceFile {
                kind: spec.kind,
                seed: spec.seed,
                basis,
                target: Some(target),
                gamma: spec.gamma.clone(),
                planted: Some(point.coords().clone()),
            })
        }
    }
}

fn random_basis(rng: &mut ChaCha8Rng, spec: &GeneratorSpec) -> LatticeBasis {
    let bound = 1i64 << spec.entry_bits;
    loop {
        let cols: Vec<RatVector> = (0..spec.n)
            .map(|_| {
                RatVector::new(
                    (0..spec.m)
                        .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
                        .collect(),
                )
            })
            .collect();
        if let Ok(basis) = LatticeBasis::new(RatMatrix::new(cols)) {
            return basis;
        }
    }
}

fn random_lattice_point(rng: &mut ChaCha8Rng, basis: &LatticeBasis) -> LatticeVector {
    let coeffs: Vec<BigInt> = (0..basis.n()).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
    LatticeVector::new(basis, coeffs)
}

fn random_rational_vector(rng: &mut ChaCha8Rng, m: usize, entry_bits: u32) -> RatVector {
    let bound = 1i64 << entry_bits;
    RatVector::new(
        (0..m)
            .map(|_| {
                let num = rng.gen_range(-bound..=bound);
                let den = rng.gen_range(1..=bound);
                Rational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect(),
    )
}

/// A nonzero integer direction whose squared norm is a perfect square, so
/// scaling to an exact rational length is possible. Falls back to an axis
/// vector when rejection sampling runs long.
fn square_norm_direction(rng: &mut ChaCha8Rng, m: usize) -> RatVector {
    for _ in 0..64 {
        let entries: Vec<i64> = (0..m).map(|_| rng.gen_range(-4i64..=4)).collect();
        if entries.iter().all(|&e| e == 0) {
            continue;
        }
        let nsq: i64 = entries.iter().map(|e| e * e).sum();
        if is_perfect_square(&BigInt::from(nsq)) {
            return RatVector::from_i64(&entries);
        }
    }
    let axis = rng.gen_range(0..m);
    let mut entries = vec![0i64; m];
    entries[axis] = 1;
    RatVector::from_i64(&entries)
}
