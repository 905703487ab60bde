//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line with the population it covered. Everything is checked with
//! exact rational comparisons against brute-force ground truth — zero
//! tolerated violations throughout.

use std::sync::OnceLock;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latk_core::bdd::{embed, solve_bdd};
use latk_core::cvp::{collect_bit_stats, cvp_solve, CvpInstance};
use latk_core::hnf::lattices_equal;
use latk_core::instance::{generate, GeneratorKind, GeneratorSpec, InstanceFile};
use latk_core::lattice::{
    complete_basis, is_member, make_elementary, project_basis_perp, LatticeBasis, LatticeVector,
};
use latk_core::linalg::{norm_sq, RatMatrix, RatVector};
use latk_core::lll::{is_size_reduced, lll, satisfies_lovasz, LllParams};
use latk_core::rational::{exact_sqrt, ratio, Rational};
use latk_core::reference::{brute_cvp, successive_minima, EnumerationBudget};
use latk_core::svp::{enumerate_shortest, enumerate_within, OracleSpec};

struct Case {
    instance: InstanceFile,
    target: RatVector,
    /// Brute-force d(t, L)^2.
    d_sq: Rational,
}

/// Shared corpus for the Theorem-bound criteria: 200 instances, n in 2..=6,
/// uniform and planted-cvp kinds, entry sizes up to 8 bits.
fn theorem_corpus() -> &'static Vec<Case> {
    static CORPUS: OnceLock<Vec<Case>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut cases = Vec::new();
        let budget = EnumerationBudget::default();
        for n in 2..=6usize {
            for i in 0..40usize {
                let kind = if i % 2 == 0 { GeneratorKind::Uniform } else { GeneratorKind::PlantedCvp };
                let spec = GeneratorSpec {
                    kind,
                    n,
                    m: if i % 5 == 3 { n + 1 } else { n },
                    entry_bits: [3, 5, 8][i % 3],
                    seed: 10_000 + (n as u64) * 100 + i as u64,
                    gamma: ratio(1, 1),
                    bdd_slack: ratio(1, 2),
                };
                let instance = generate(&spec).expect("generation succeeds");
                let target = instance.target.clone().expect("generated instances have targets");
                let d_sq = brute_cvp(&instance.basis, &target, &budget)
                    .expect("brute CVP in budget")
                    .dist_sq(&target);
                cases.push(Case { instance, target, d_sq });
            }
        }
        assert_eq!(cases.len(), 200);
        cases
    })
}

struct BddCase {
    instance: InstanceFile,
    target: RatVector,
    planted: RatVector,
    gamma: Rational,
    oracle: OracleSpec,
}

/// 216 planted-bdd instances: n in 2..=5, slack in {1/4, 1/2, 9/10},
/// gamma in {1, 2}, nine seeds each. gamma = 1 instances are solved with the
/// exact oracle, gamma = 2 instances with the adversarial oracle at gamma 2.
fn bdd_corpus() -> &'static Vec<BddCase> {
    static CORPUS: OnceLock<Vec<BddCase>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut cases = Vec::new();
        for n in 2..=5usize {
            for (si, slack) in [ratio(1, 4), ratio(1, 2), ratio(9, 10)].into_iter().enumerate() {
                for (gi, gamma) in [ratio(1, 1), ratio(2, 1)].into_iter().enumerate() {
                    for rep in 0..9usize {
                        let seed = 40_000
                            + (n as u64) * 1000
                            + (si as u64) * 100
                            + (gi as u64) * 10
                            + rep as u64;
                        let spec = GeneratorSpec {
                            kind: GeneratorKind::PlantedBdd,
                            n,
                            m: n,
                            entry_bits: [3, 4, 5][rep % 3],
                            seed,
                            gamma: gamma.clone(),
                            bdd_slack: slack.clone(),
                        };
                        let instance = generate(&spec).expect("generation succeeds");
                        let target = instance.target.clone().unwrap();
                        let planted = instance.planted.clone().unwrap();
                        let oracle = if gamma == ratio(1, 1) {
                            OracleSpec::exact()
                        } else {
                            OracleSpec::adversarial(gamma.clone(), seed).unwrap()
                        };
                        cases.push(BddCase {
                            instance,
                            target,
                            planted,
                            gamma: gamma.clone(),
                            oracle,
                        });
                    }
                }
            }
        }
        assert_eq!(cases.len(), 216);
        cases
    })
}

fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load_corpus_instances() -> Vec<(String, InstanceFile)> {
    let dir = corpus_dir();
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .expect("corpus directory present")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".lat"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let text = std::fs::read_to_string(dir.join(&name)).unwrap();
            let inst = InstanceFile::parse(&text).expect("corpus instance parses");
            (name, inst)
        })
        .collect()
}

/// Criterion 1: with the exact oracle (gamma = 1), the solver's squared
/// distance is at most n times the true squared distance on every instance.
#[test]
fn criterion_01_theorem_bound_exact_oracle() {
    let mut checked = 0usize;
    for case in theorem_corpus() {
        let inst = CvpInstance::new(
            case.instance.basis.clone(),
            case.target.clone(),
            OracleSpec::exact(),
        )
        .unwrap();
        let res = cvp_solve(&inst).unwrap();
        let n = case.instance.n();
        let bound = Rational::from_integer(BigInt::from(n)) * &case.d_sq;
        assert!(
            res.dist_sq_achieved <= bound,
            "bound violated on seed {}: {} > {}",
            case.instance.seed,
            res.dist_sq_achieved,
            bound
        );
        assert!(res.dist_sq_achieved >= case.d_sq, "answer beats the optimum?!");
        assert!(is_member(&case.instance.basis, res.answer.coords()).unwrap().is_some());
        checked += 1;
    }
    eprintln!("criterion 1: PASS — ||z-t||^2 <= n d^2 on {checked} instances, exact oracle");
}

/// Criterion 2: with approximate oracles (adversarial gamma 3/2 and 2, LLL at
/// its declared quality), the squared distance is at most gamma^4 n d^2.
#[test]
fn criterion_02_theorem_bound_approximate_oracles() {
    fn adv32(seed: u64) -> OracleSpec {
        OracleSpec::adversarial(ratio(3, 2), seed).unwrap()
    }
    fn adv2(seed: u64) -> OracleSpec {
        OracleSpec::adversarial(ratio(2, 1), seed).unwrap()
    }
    fn lll_oracle(_seed: u64) -> OracleSpec {
        OracleSpec::lll()
    }
    let mut checked = 0usize;
    for (label, make_oracle) in [
        ("adversarial:3/2", adv32 as fn(u64) -> OracleSpec),
        ("adversarial:2", adv2 as fn(u64) -> OracleSpec),
        ("lll", lll_oracle as fn(u64) -> OracleSpec),
    ] {
        for case in theorem_corpus() {
            let oracle = make_oracle(case.instance.seed);
            let n = case.instance.n();
            let bound_factor =
                oracle.gamma_fourth(n) * Rational::from_integer(BigInt::from(n));
            let inst = CvpInstance::new(case.instance.basis.clone(), case.target.clone(), oracle)
                .unwrap();
            let res = cvp_solve(&inst).unwrap();
            assert_eq!(res.bound_factor_sq, bound_factor);
            let bound = bound_factor * &case.d_sq;
            assert!(
                res.dist_sq_achieved <= bound,
                "{label} bound violated on seed {}",
                case.instance.seed
            );
            checked += 1;
        }
    }
    eprintln!(
        "criterion 2: PASS — gamma^4 n d^2 bound on {checked} instance-oracle runs \
         (adversarial 3/2, adversarial 2, lll)"
    );
}

/// Criterion 3: on planted BDD instances the decoder is exact: its candidate
/// sits at exactly the brute-force distance.
#[test]
fn criterion_03_bdd_exactness() {
    let budget = EnumerationBudget::default();
    let mut checked = 0usize;
    for case in bdd_corpus() {
        let out = solve_bdd(&case.instance.basis, &case.target, &case.oracle).unwrap();
        let d_sq = brute_cvp(&case.instance.basis, &case.target, &budget)
            .unwrap()
            .dist_sq(&case.target);
        let planted_d_sq = norm_sq(&case.target.sub(&case.planted));
        assert_eq!(d_sq, planted_d_sq, "planted point drifted from optimality");
        assert_eq!(
            out.candidate.dist_sq(&case.target),
            d_sq,
            "BDD inexact on seed {} (gamma {})",
            case.instance.seed,
            case.gamma
        );
        checked += 1;
    }
    eprintln!(
        "criterion 3: PASS — exact decoding distance on {checked} planted instances \
         (slack 1/4, 1/2, 9/10; gamma 1 and 2)"
    );
}

/// Criterion 4: embedding with alpha = the true distance makes the error
/// vector the unique (up to sign) shortest vector, of squared norm 2 alpha^2,
/// and the instance is gamma-unique.
#[test]
fn criterion_04_embedding_uniqueness() {
    let budget = EnumerationBudget::default();
    let mut checked = 0usize;
    for case in bdd_corpus().iter().filter(|c| c.instance.n() <= 4) {
        if checked >= 54 {
            break;
        }
        let d_sq = norm_sq(&case.target.sub(&case.planted));
        let alpha = exact_sqrt(&d_sq).expect("planted distances are exactly rational");
        let embedded = embed(&case.instance.basis, &case.target, &alpha).unwrap();

        let minima = successive_minima(embedded.base(), &budget).unwrap();
        let two_alpha_sq = ratio(2, 1) * &alpha * &alpha;
        assert_eq!(minima[0], two_alpha_sq, "lambda_1 of the embedding is sqrt(2) alpha");
        let g_sq = &case.gamma * &case.gamma;
        assert!(minima[1] >= &g_sq * &minima[0], "embedded instance not gamma-unique");

        // The only vectors achieving lambda_1 are +-(planted - t, -alpha).
        let mut expected_entries: Vec<Rational> = case
            .planted
            .sub(&case.target)
            .entries()
            .to_vec();
        expected_entries.push(-alpha.clone());
        let expected = RatVector::new(expected_entries);
        let shortest = enumerate_within(embedded.base(), &two_alpha_sq).unwrap();
        assert_eq!(shortest.len(), 2, "shortest vector of the embedding is unique up to sign");
        for v in shortest {
            assert!(
                v.coords() == &expected || v.coords() == &expected.neg(),
                "unexpected embedded shortest vector"
            );
        }
        checked += 1;
    }
    assert!(checked >= 50);
    eprintln!("criterion 4: PASS — gamma-unique embedding with shortest (t_dagger - t, -alpha) on {checked} instances");
}

/// Criterion 5: projecting a lattice orthogonally to an elementary vector
/// interlaces the successive minima: lambda_i(proj) <= lambda_{i+1}(orig).
#[test]
fn criterion_05_projected_minima_interlace() {
    let budget = EnumerationBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut checked = 0usize;
    while checked < 100 {
        let n = rng.gen_range(2..=5usize);
        let spec = GeneratorSpec {
            kind: GeneratorKind::Uniform,
            n,
            m: n,
            entry_bits: 3,
            seed: rng.gen(),
            gamma: ratio(1, 1),
            bdd_slack: ratio(1, 2),
        };
        let basis = generate(&spec).unwrap().basis;
        let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-3i64..=3)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let v = make_elementary(&basis, &basis.vector_i64(&coeffs)).unwrap();
        let rest = complete_basis(&v, &basis).unwrap();
        let projected = project_basis_perp(&rest, v.coords()).unwrap();
        let original = successive_minima(&basis, &budget).unwrap();
        let proj = successive_minima(&projected, &budget).unwrap();
        for i in 0..proj.len() {
            assert!(
                proj[i] <= original[i + 1],
                "interlacing failed at i={} (n={n})",
                i + 1
            );
        }
        checked += 1;
    }
    eprintln!("criterion 5: PASS — lambda_i(proj)^2 <= lambda_(i+1)(orig)^2 on {checked} (basis, v) pairs");
}

/// Criterion 6: completing an elementary vector to a basis preserves the
/// lattice exactly.
#[test]
fn criterion_06_basis_completion_preserves_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(888);
    let mut checked = 0usize;
    while checked < 100 {
        let n = rng.gen_range(2..=5usize);
        let spec = GeneratorSpec {
            kind: GeneratorKind::Uniform,
            n,
            m: if checked % 3 == 0 { n + 1 } else { n },
            entry_bits: 4,
            seed: rng.gen(),
            gamma: ratio(1, 1),
            bdd_slack: ratio(1, 2),
        };
        let basis = generate(&spec).unwrap().basis;
        let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-4i64..=4)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let v = make_elementary(&basis, &basis.vector_i64(&coeffs)).unwrap();
        let rest = complete_basis(&v, &basis).unwrap();
        let mut cols = vec![v.coords().clone()];
        cols.extend(rest.iter().map(|b| b.coords().clone()));
        let rebuilt = LatticeBasis::new(RatMatrix::new(cols)).unwrap();
        assert!(lattices_equal(&rebuilt, &basis).unwrap(), "lattice changed by completion");
        checked += 1;
    }
    eprintln!("criterion 6: PASS — completion keeps the lattice on {checked} (basis, v) pairs");
}

/// Criterion 7: every LLL output is size-reduced, satisfies the Lovász
/// condition, and its first vector is within 2^(n-1) of lambda_1^2.
#[test]
fn criterion_07_lll_contract() {
    let budget = EnumerationBudget::default();
    let params = LllParams::default();
    let mut checked = 0usize;
    for case in theorem_corpus() {
        let reduced = lll(&case.instance.basis, &params).unwrap();
        assert!(lattices_equal(&case.instance.basis, &reduced).unwrap());
        assert!(is_size_reduced(&reduced).unwrap());
        assert!(satisfies_lovasz(&reduced, &params).unwrap());
        let lambda1_sq = successive_minima(&case.instance.basis, &budget).unwrap()[0].clone();
        let factor = Rational::from_integer(BigInt::from(1) << (case.instance.n() - 1));
        assert!(
            norm_sq(reduced.column(0)) <= factor * lambda1_sq,
            "first-vector bound violated on seed {}",
            case.instance.seed
        );
        checked += 1;
    }
    eprintln!("criterion 7: PASS — size reduction, Lovász, 2^(n-1) first-vector bound on {checked} bases");
}

/// Criterion 8: on the fixed regression corpus, every vector the solver
/// generates fits in 64 M^2 bits (the polynomial-representation gate).
#[test]
fn criterion_08_bit_size_gate() {
    let mut checked = 0usize;
    for (name, inst) in load_corpus_instances() {
        let target = inst.target.clone().expect("corpus instances carry targets");
        let cvp_inst =
            CvpInstance::new(inst.basis.clone(), target, OracleSpec::exact()).unwrap();
        let res = cvp_solve(&cvp_inst).unwrap();
        let bits = collect_bit_stats(&res.trace);
        let gate = 64 * res.trace.m_param * res.trace.m_param;
        assert!(bits <= gate, "{name}: bit gate exceeded ({bits} > {gate})");
        checked += 1;
    }
    assert!(checked >= 16);
    eprintln!("criterion 8: PASS — max entry bits <= 64 M^2 on all {checked} corpus instances");
}

/// Criterion 9: identical inputs produce byte-identical outputs and traces.
#[test]
fn criterion_09_determinism() {
    let bin = env!("CARGO_BIN_EXE_latk");
    let dir = tempfile::tempdir().unwrap();
    let run = |suffix: &str| -> (String, Vec<u8>, Vec<u8>, String) {
        let inst = dir.path().join(format!("inst_{suffix}.lat"));
        let trace = dir.path().join(format!("trace_{suffix}.txt"));
        let gen_out = std::process::Command::new(bin)
            .args([
                "gen", "--kind", "planted-cvp", "--n", "4", "--entry-bits", "5", "--seed", "424242",
                "--out",
            ])
            .arg(&inst)
            .output()
            .unwrap();
        assert!(gen_out.status.success());
        let cvp_out = std::process::Command::new(bin)
            .args(["cvp", "--oracle", "adversarial:2:9", "--instance"])
            .arg(&inst)
            .arg("--emit-trace")
            .arg(&trace)
            .output()
            .unwrap();
        assert!(cvp_out.status.success(), "{}", String::from_utf8_lossy(&cvp_out.stderr));
        (
            String::from_utf8(gen_out.stdout).unwrap(),
            std::fs::read(&inst).unwrap(),
            std::fs::read(&trace).unwrap(),
            String::from_utf8(cvp_out.stdout).unwrap(),
        )
    };
    let (_, inst_a, trace_a, stdout_a) = run("a");
    let (_, inst_b, trace_b, stdout_b) = run("b");
    assert_eq!(inst_a, inst_b, "generated instances differ between runs");
    assert_eq!(trace_a, trace_b, "traces differ between runs");
    assert_eq!(stdout_a, stdout_b, "solver output differs between runs");
    eprintln!("criterion 9: PASS — byte-identical instance, trace, and solver output across two runs");
}

/// Criterion 10: the two independent enumerations agree on lambda_1^2 for
/// every corpus instance.
#[test]
fn criterion_10_cross_oracle_consistency() {
    let budget = EnumerationBudget::default();
    let mut checked = 0usize;
    for (name, inst) in load_corpus_instances() {
        if inst.n() > 6 {
            continue;
        }
        let lambda1_enum = enumerate_shortest(&inst.basis).unwrap().norm_sq();
        let minima = successive_minima(&inst.basis, &budget).unwrap();
        assert_eq!(lambda1_enum, minima[0], "{name}: lambda_1 disagreement");
        checked += 1;
    }
    assert!(checked >= 16);
    eprintln!("criterion 10: PASS — zig-zag and interval enumerations agree on lambda_1^2 for {checked} corpus instances");
}

/// Module-level invariant from the decoder: exactness also holds with the
/// LLL oracle and at gamma = 3/2, on a smaller planted population.
#[test]
fn bdd_exactness_all_oracle_kinds() {
    let budget = EnumerationBudget::default();
    let mut checked = 0usize;
    for n in 2..=4usize {
        for (si, slack) in [ratio(1, 4), ratio(1, 2)].into_iter().enumerate() {
            for rep in 0..4u64 {
                for (oi, (gamma, oracle)) in [
                    (ratio(3, 2), OracleSpec::adversarial(ratio(3, 2), rep).unwrap()),
                    (ratio(2, 1), OracleSpec::adversarial(ratio(2, 1), rep).unwrap()),
                    (
                        Rational::from_integer(BigInt::from(1) << ((n - 1) / 2)),
                        OracleSpec::lll(),
                    ),
                ]
                .into_iter()
                .enumerate()
                {
                    // For the LLL oracle the declared quality is
                    // 2^((n-1)/2); plant against its squared value to keep
                    // the promise honest without needing irrational gamma.
                    let gamma = if oi == 2 && n % 2 == 0 {
                        // round the irrational declared gamma up to the next
                        // rational: a stricter promise, still valid
                        Rational::from_integer(BigInt::from(1) << (n / 2))
                    } else {
                        gamma
                    };
                    let spec = GeneratorSpec {
                        kind: GeneratorKind::PlantedBdd,
                        n,
                        m: n,
                        entry_bits: 3,
                        seed: 90_000 + (n as u64) * 100 + (si as u64) * 10 + rep,
                        gamma: gamma.clone(),
                        bdd_slack: slack.clone(),
                    };
                    let inst = generate(&spec).unwrap();
                    let target = inst.target.clone().unwrap();
                    let out = solve_bdd(&inst.basis, &target, &oracle).unwrap();
                    let d_sq = brute_cvp(&inst.basis, &target, &budget).unwrap().dist_sq(&target);
                    assert_eq!(
                        out.candidate.dist_sq(&target),
                        d_sq,
                        "inexact for oracle {oracle} (n={n}, slack {slack}, seed {})",
                        spec.seed,
                    );
                    checked += 1;
                }
            }
        }
    }
    eprintln!("bdd invariant: PASS — exact decoding across all three oracle kinds on {checked} instances");
}

/// Case-1 exactness of the full solver: when the target is within the BDD
/// promise radius, the recursion's output is an exact closest vector, not
/// just within the bound.
#[test]
fn cvp_case1_exactness_under_promise() {
    let budget = EnumerationBudget::default();
    let mut checked = 0usize;
    for case in bdd_corpus().iter().step_by(4) {
        let inst = CvpInstance::new(
            case.instance.basis.clone(),
            case.target.clone(),
            case.oracle.clone(),
        )
        .unwrap();
        let res = cvp_solve(&inst).unwrap();
        let d_sq = brute_cvp(&case.instance.basis, &case.target, &budget)
            .unwrap()
            .dist_sq(&case.target);
        assert_eq!(
            res.dist_sq_achieved, d_sq,
            "solver inexact under the promise (seed {})",
            case.instance.seed
        );
        checked += 1;
    }
    eprintln!("solver invariant: PASS — exact answers under the decoding promise on {checked} instances");
}

/// Membership invariant: every solver answer is in the lattice, and the
/// achieved distance field matches the answer exactly.
#[test]
fn solver_answers_are_members_with_exact_distances() {
    for case in theorem_corpus().iter().take(40) {
        let inst = CvpInstance::new(
            case.instance.basis.clone(),
            case.target.clone(),
            OracleSpec::exact(),
        )
        .unwrap();
        let res = cvp_solve(&inst).unwrap();
        let coeffs = is_member(&case.instance.basis, res.answer.coords()).unwrap().unwrap();
        let rebuilt = LatticeVector::new(&case.instance.basis, coeffs);
        assert_eq!(rebuilt.coords(), res.answer.coords());
        assert_eq!(res.dist_sq_achieved, res.answer.dist_sq(&case.target));
        // Trace shape: dims strictly decreasing by one down to the base case.
        let dims: Vec<usize> = res.trace.levels.iter().map(|l| l.dim).collect();
        let expect: Vec<usize> = (1..=case.instance.n()).rev().collect();
        assert_eq!(dims, expect);
    }
    eprintln!("solver invariant: PASS — membership, exact distances, full recursion traces");
}
