//! Acceptance criteria, one line per criterion.
//!
//! Run with `cargo test --test acceptance`. Every criterion is exact (100%
//! agreement); the only tolerances are the wall-clock limits below.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use qsym::breaker::{
    augment_instance, encode_existential_cnf, encode_universal_dnf, lex_leader_formula, universal_lex_leader_formula,
    verify_breaker, verify_universal_breaker, Augmentation, Conjunction, Disjunction, EncodeOptions, Selection,
};
use qsym::detect::{detect_symmetries, DetectOptions};
use qsym::formula::{Formula, Var};
use qsym::generate::{gen_kbkf, random_signed_permutation};
use qsym::group::{group_closure, is_syntactic_symmetry, SignedPermutation, SymmetryCheck};
use qsym::qdimacs::{Clause, Prefix, QbfInstance, Quantifier};
use qsym::strategy::{
    common_path, count_strategies, enumerate_strategies, qbf_truth_capped, semantic_orbits, truth_by_strategies,
    OrbitCaps, Role, StrategyTree,
};
use rand::Rng;

const CRITERION_LIMIT: Duration = Duration::from_secs(120);
const ORACLE_AGREEMENT_LIMIT: Duration = Duration::from_secs(60);
const SUITE_LIMIT: Duration = Duration::from_secs(600);
const STRATEGY_LIMIT: u64 = 1 << 12;
// the augmented instances carry auxiliary variables on top of n <= 10
const EXTENDED_TRUTH_CAP: usize = 128;

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
    note: String,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

type Criterion = fn() -> Tally;

fn truth(prefix: &Prefix, matrix: &(impl qsym::formula::Matrix + ?Sized)) -> bool {
    qbf_truth_capped(prefix, matrix, EXTENDED_TRUTH_CAP).expect("oracle within cap")
}

fn oracle_agreement() -> Tally {
    let mut t = Tally::default();
    let mut skipped = 0;
    for seed in 0..500u64 {
        let n = 1 + (seed % 6) as usize;
        let m = 1 + (seed % 8) as usize;
        let len = 1 + (seed % 3) as usize;
        let blocks = 1 + ((seed / 6) % 4) as usize;
        let r = common::random(seed, n, m, len, blocks, seed % 3 == 0);
        let p = r.instance.prefix();
        let limit = BigUint::from(STRATEGY_LIMIT);
        if count_strategies(p, Role::Existential) > limit || count_strategies(p, Role::Universal) > limit {
            skipped += 1;
            continue;
        }
        let recursive = truth(p, r.instance.matrix());
        let by_strategies = truth_by_strategies(p, r.instance.matrix(), STRATEGY_LIMIT);
        t.check(by_strategies.as_ref().ok() == Some(&recursive), || {
            format!("seed {seed}: recursive {recursive}, strategies {by_strategies:?}")
        });
    }
    t.note = format!("{skipped} of 500 instances above 2^12 strategies");
    t
}

fn truth_preservation() -> Tally {
    let mut t = Tally::default();
    let mut rng = common::rng(2);
    for seed in 0..200u64 {
        let n = 1 + (seed % 12) as usize;
        let r = common::random(
            1000 + seed,
            n,
            1 + rng.gen_range(0..2 * n),
            3,
            1 + (seed % 4) as usize,
            false,
        );
        let g = random_signed_permutation(r.instance.prefix(), &mut rng);
        let image = common::image_instance(&r.instance, &g);
        let (a, b) = (
            truth(r.instance.prefix(), r.instance.matrix()),
            truth(image.prefix(), image.matrix()),
        );
        t.check(a == b, || format!("seed {seed}, g = {g}: {a} vs {b}"));
    }
    t
}

struct Corpus {
    instance: QbfInstance,
    generators: Vec<SignedPermutation>,
}

fn symmetric_corpus() -> Vec<Corpus> {
    (0..200u64)
        .map(|seed| {
            let n = 3 + (seed % 8) as usize;
            let r = common::random(5000 + seed, n, 2 * n, 3, 1 + (seed % 4) as usize, true);
            let detection = detect_symmetries(&r.instance, DetectOptions::default());
            assert!(detection.complete);
            Corpus {
                instance: r.instance,
                generators: detection.generators,
            }
        })
        .collect()
}

fn breaker_truth_theorems() -> Tally {
    let mut t = Tally::default();
    for (k, c) in symmetric_corpus().iter().enumerate() {
        let (p, phi) = (c.instance.prefix(), c.instance.matrix());
        let expected = truth(p, phi);
        let psi_e = lex_leader_formula(p, &c.generators, Selection::Generators)
            .unwrap()
            .formula();
        let psi_a = universal_lex_leader_formula(p, &c.generators, Selection::Generators)
            .unwrap()
            .formula();
        let cnf = encode_existential_cnf(p, &c.generators, EncodeOptions::default()).unwrap();
        let dnf_options = EncodeOptions {
            first_aux: Some(cnf.next_free_var()),
            ..EncodeOptions::default()
        };
        let dnf = encode_universal_dnf(p, &c.generators, dnf_options).unwrap();
        let combined = augment_instance(
            &c.instance,
            Augmentation::Combined {
                exists: &cnf,
                forall: &dnf,
            },
        )
        .unwrap();
        let ext = combined.instance.prefix();

        let results = [
            ("phi & psi_e", truth(p, &Conjunction(phi, &psi_e))),
            ("phi | psi_a", truth(p, &Disjunction(phi, &psi_a))),
            (
                "(phi | psi_a) & psi_e",
                truth(p, &Conjunction(Disjunction(phi, &psi_a), &psi_e)),
            ),
            (
                "clauses",
                augment_instance(&c.instance, Augmentation::ConjoinCnf(&cnf))
                    .unwrap()
                    .truth(EXTENDED_TRUTH_CAP)
                    .unwrap(),
            ),
            (
                "cubes",
                augment_instance(&c.instance, Augmentation::AttachDnf(&dnf))
                    .unwrap()
                    .truth(EXTENDED_TRUTH_CAP)
                    .unwrap(),
            ),
            ("(phi & C) | D", combined.truth(EXTENDED_TRUTH_CAP).unwrap()),
            (
                "(phi | D) & C",
                truth(
                    ext,
                    &Conjunction(Disjunction(phi, dnf.cubes.as_slice()), cnf.clauses.as_slice()),
                ),
            ),
        ];
        for (name, got) in results {
            t.check(got == expected, || {
                format!("instance {k}, {name}: {got}, expected {expected}")
            });
        }
    }
    t
}

fn breaker_polarity() -> Tally {
    let mut t = Tally::default();
    let mut corpus = symmetric_corpus();
    for n in 1..=4 {
        let instance = gen_kbkf(n).unwrap();
        let generators = detect_symmetries(&instance, DetectOptions::default()).generators;
        corpus.push(Corpus { instance, generators });
    }
    for (k, c) in corpus.iter().enumerate() {
        let p = c.instance.prefix();
        let psi_e = lex_leader_formula(p, &c.generators, Selection::Generators).unwrap();
        let psi_a = universal_lex_leader_formula(p, &c.generators, Selection::Generators).unwrap();
        t.check(truth(p, &psi_e), || format!("instance {k}: P.psi_e is false"));
        t.check(!truth(p, &psi_a), || format!("instance {k}: P.psi_a is true"));
        let cnf = encode_existential_cnf(p, &c.generators, EncodeOptions::default()).unwrap();
        let dnf = encode_universal_dnf(p, &c.generators, EncodeOptions::default()).unwrap();
        t.check(truth(&cnf.extended_prefix, cnf.clauses.as_slice()), || {
            format!("instance {k}: encoded P.psi_e is false")
        });
        t.check(!truth(&dnf.extended_prefix, dnf.cubes.as_slice()), || {
            format!("instance {k}: encoded P.psi_a is true")
        });
    }
    t.note = format!("{} instances including KBKF t = 1..4", corpus.len());
    t
}

fn duality() -> Tally {
    let mut t = Tally::default();
    let mut rng = common::rng(5);
    let caps = OrbitCaps {
        strategies: STRATEGY_LIMIT,
        group: 10_000,
    };
    let (mut pass, mut fail) = (0, 0);
    for k in 0..100 {
        let n = rng.gen_range(1..=4);
        let prefix = common::random_prefix(&mut rng, n);
        let generators: Vec<SignedPermutation> = (0..rng.gen_range(1..=2))
            .map(|_| random_signed_permutation(&prefix, &mut rng))
            .collect();
        let lex = lex_leader_formula(&prefix, &generators, Selection::Generators)
            .unwrap()
            .formula();
        let m = rng.gen_range(1..=3);
        let other = Formula::cnf(common::random_cnf(&mut rng, n, m).iter().map(Clause::lits));
        let flipped = prefix.flipped();
        for (label, psi) in [("lex-leader", lex), ("random", other)] {
            let e = verify_breaker(&prefix, &generators, &psi, caps).unwrap().passed();
            let u = verify_universal_breaker(&flipped, &generators, &Formula::negate(psi.clone()), caps)
                .unwrap()
                .passed();
            t.check(e == u, || {
                format!("prefix {k} ({prefix}), {label}: existential {e}, universal {u}")
            });
            if label == "lex-leader" {
                t.check(e, || {
                    format!("prefix {k} ({prefix}): lex-leader breaker leaves an orbit uncovered")
                });
            }
            if e {
                pass += 1;
            } else {
                fail += 1;
            }
        }
    }
    t.note = format!("{pass} breakers, {fail} non-breakers");
    if fail == 0 {
        t.failures.push("no non-breaker was sampled".into());
    }
    t
}

fn example_orbits() -> Tally {
    let mut t = Tally::default();
    let prefix = Prefix::from_ids(&[(Quantifier::Forall, &[1]), (Quantifier::Exists, &[2, 3])]).unwrap();
    let f = SignedPermutation::parse_cycle_notation("(2 3)").unwrap();
    let g = SignedPermutation::parse_cycle_notation("(-2)(-3)").unwrap();
    let orbits = semantic_orbits(
        &prefix,
        Role::Existential,
        &[f.clone(), g.clone()],
        OrbitCaps::default(),
    )
    .unwrap();
    t.check(orbits.len() == 4, || format!("{} orbits", orbits.len()));
    // labels are [y at x=F, y at x=T, z at x=F, z at x=T] = [alpha, gamma, beta, delta]
    let key = |s: &StrategyTree| {
        let l = s.labels();
        (l[0] == l[2], l[1] == l[3])
    };
    let mut keys = HashSet::new();
    for k in 0..orbits.len() {
        let members: Vec<&StrategyTree> = orbits.members(k).collect();
        let first = key(members[0]);
        t.check(members.iter().all(|s| key(s) == first), || {
            format!("orbit {k} mixes keys")
        });
        t.check(members.iter().any(|s| !s.labels()[0] && !s.labels()[1]), || {
            format!("orbit {k} has no member with alpha = gamma = false")
        });
        keys.insert(first);
    }
    t.check(keys.len() == 4, || {
        "orbit keys are not the four (alpha=beta, gamma=delta) classes".into()
    });
    let not_y = Formula::lit(Var::new(2).unwrap().negative());
    let report = verify_breaker(&prefix, &[f, g], &not_y, OrbitCaps::default()).unwrap();
    t.check(report.passed() && report.orbits == 4, || {
        format!("not-y coverage: {report:?}")
    });
    t
}

fn strategy_counts() -> Tally {
    let mut t = Tally::default();
    let prefix = Prefix::from_ids(&[(Quantifier::Forall, &[1]), (Quantifier::Exists, &[2])]).unwrap();
    for (role, expected) in [(Role::Existential, 4u32), (Role::Universal, 2)] {
        let count = count_strategies(&prefix, role);
        let listed = enumerate_strategies(&prefix, role, 1 << 20).unwrap().count();
        t.check(count == BigUint::from(expected), || format!("{role:?}: count {count}"));
        t.check(listed == expected as usize, || format!("{role:?}: enumerated {listed}"));
    }
    t
}

fn common_paths() -> Tally {
    let mut t = Tally::default();
    let mut rng = common::rng(8);
    for k in 0..1000 {
        let n = rng.gen_range(1..=4);
        let prefix = common::random_prefix(&mut rng, n);
        let mut random_tree = |role| {
            let slots = qsym::strategy::strategy_bits(&prefix, role);
            let slots = u32::try_from(slots).unwrap() as usize;
            StrategyTree::from_labels(&prefix, role, (0..slots).map(|_| rng.gen_bool(0.5)).collect()).unwrap()
        };
        let s = random_tree(Role::Existential);
        let u = random_tree(Role::Universal);
        let sigma = common_path(&s, &u).unwrap();
        let in_s = s.paths().any(|p| p == sigma);
        let in_u = u.paths().any(|p| p == sigma);
        t.check(in_s && in_u, || {
            format!("pair {k} on {prefix}: {sigma} in s {in_s}, in t {in_u}")
        });
    }
    t
}

fn detection() -> Tally {
    let mut t = Tally::default();
    let mut complete_cases = 0;
    for seed in 0..300u64 {
        let small = seed < 150;
        let n = if small {
            1 + (seed % 6) as usize
        } else {
            3 + (seed % 10) as usize
        };
        let m = if small { 1 + (seed % 6) as usize } else { 2 * n };
        let r = common::random(
            9000 + seed,
            n,
            m,
            1 + (seed % 3) as usize,
            1 + (seed % 3) as usize,
            seed % 2 == 0,
        );
        let d = detect_symmetries(&r.instance, DetectOptions::default());
        for g in &d.generators {
            let sound = g.check_blocks(r.instance.prefix()).is_ok()
                && is_syntactic_symmetry(g, &r.instance, SymmetryCheck::ClauseMultiset).unwrap();
            t.check(sound, || format!("seed {seed}: {g} is not a symmetry"));
        }
        if let Some(g) = &r.planted {
            let n = r.instance.prefix().max_var() as usize;
            let gens: Vec<Vec<usize>> = d.generators.iter().map(|h| common::literal_points(h, n)).collect();
            let chain = common::StabilizerChain::new(2 * n, &gens);
            t.check(chain.contains(&common::literal_points(g, n)), || {
                format!("seed {seed}: planted {g} not in detected group")
            });
        }
        if small && r.instance.matrix().len() <= 6 {
            complete_cases += 1;
            let detected: HashSet<SignedPermutation> =
                group_closure(&d.generators, 1 << 20).unwrap().into_iter().collect();
            let brute = common::brute_force_group(&r.instance);
            t.check(d.complete && detected == brute, || {
                format!(
                    "seed {seed}: detected group {} elements, brute force {}",
                    detected.len(),
                    brute.len()
                )
            });
        }
    }
    t.note = format!("{complete_cases} instances checked against brute force");
    t
}

fn kbkf() -> Tally {
    let mut t = Tally::default();
    for n in 1..=4 {
        let instance = gen_kbkf(n).unwrap();
        let p = instance.prefix();
        t.check(!truth(p, instance.matrix()), || format!("KBKF {n} is true"));
        let gens = detect_symmetries(&instance, DetectOptions::default()).generators;
        t.check(!gens.is_empty(), || format!("KBKF {n}: no generator detected"));
        let cnf = encode_existential_cnf(p, &gens, EncodeOptions::default()).unwrap();
        let augmented = augment_instance(&instance, Augmentation::ConjoinCnf(&cnf)).unwrap();
        t.check(!augmented.truth(EXTENDED_TRUTH_CAP).unwrap(), || {
            format!("KBKF {n}: augmented instance is true")
        });
        let psi = lex_leader_formula(p, &gens, Selection::Generators).unwrap();
        t.check(!truth(p, &Conjunction(instance.matrix(), &psi)), || {
            format!("KBKF {n}: phi & psi is true")
        });
    }
    t
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, Criterion, Duration); 10] = [
        (
            1,
            "recursive truth agrees with strategy semantics",
            oracle_agreement,
            ORACLE_AGREEMENT_LIMIT,
        ),
        (2, "admissible maps preserve truth", truth_preservation, CRITERION_LIMIT),
        (
            3,
            "breakers preserve truth (formula and encoded)",
            breaker_truth_theorems,
            CRITERION_LIMIT,
        ),
        (4, "P.psi_e true and P.psi_a false", breaker_polarity, CRITERION_LIMIT),
        (5, "existential/universal breaker duality", duality, CRITERION_LIMIT),
        (
            6,
            "four semantic orbits covered by not-y",
            example_orbits,
            CRITERION_LIMIT,
        ),
        (
            7,
            "strategy counts for forall x1 exists x2",
            strategy_counts,
            CRITERION_LIMIT,
        ),
        (8, "common path lies on both strategies", common_paths, CRITERION_LIMIT),
        (
            9,
            "detection sound and complete on small instances",
            detection,
            CRITERION_LIMIT,
        ),
        (
            10,
            "KBKF false, symmetric, falsity kept by breaker",
            kbkf,
            CRITERION_LIMIT,
        ),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let tally = run();
        let elapsed = start.elapsed();
        let ok = tally.failures.is_empty() && tally.checked > 0 && elapsed <= limit;
        failed += usize::from(!ok);
        let note = if tally.note.is_empty() {
            String::new()
        } else {
            format!("; {}", tally.note)
        };
        println!(
            "[{}] criterion {id:>2}: {name}: {}/{} checks ({:.1}s, limit {}s{note})",
            if ok { "PASS" } else { "FAIL" },
            tally.checked - tally.failures.len(),
            tally.checked,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        for f in tally.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    let total = suite.elapsed();
    let suite_ok = total <= SUITE_LIMIT;
    println!(
        "[{}] suite: {:.1}s (limit {}s)",
        if suite_ok { "PASS" } else { "FAIL" },
        total.as_secs_f64(),
        SUITE_LIMIT.as_secs()
    );
    if failed == 0 && suite_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
