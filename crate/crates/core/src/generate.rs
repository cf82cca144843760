//! Instance generators: the KBKF family and seeded random QBFs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Lit, Var};
use crate::group::SignedPermutation;
use crate::qdimacs::{Clause, Prefix, QbfInstance, Quantifier, QuantifierBlock};

fn var(id: u32) -> Var {
    Var::new(id).expect("ids start at 1")
}

/// The KBKF formula with `t` universal variables (Kleine Büning, Karpinski
/// and Flögel, 1995).
///
/// ```text
/// ∃d0 d1 e1 ∀x1 ∃d2 e2 ∀x2 … ∃dt et ∀xt ∃f1 … ft
///   ¬d0
///   d0 ∨ ¬d1 ∨ ¬e1
///   dj ∨ xj ∨ ¬d(j+1) ∨ ¬e(j+1),  ej ∨ ¬xj ∨ ¬d(j+1) ∨ ¬e(j+1)   (j < t)
///   dt ∨ xt ∨ ¬f1 ∨ … ∨ ¬ft,      et ∨ ¬xt ∨ ¬f1 ∨ … ∨ ¬ft
///   xj ∨ fj,  ¬xj ∨ fj
/// ```
///
/// Variables are numbered d0, then (dj, ej, xj) for each j, then the f's,
/// for `4t + 1` in total. The instance is false, and swapping dj with ej
/// while negating xj is a symmetry for every j.
pub fn gen_kbkf(t: usize) -> Result<QbfInstance> {
    if t == 0 {
        return Err(Error::Infeasible("KBKF needs at least one universal variable".into()));
    }
    let t32 = t as u32;
    let d = |j: u32| if j == 0 { var(1) } else { var(3 * j - 1) };
    let e = |j: u32| var(3 * j);
    let x = |j: u32| var(3 * j + 1);
    let f = |j: u32| var(3 * t32 + 1 + j);

    let mut blocks = vec![QuantifierBlock::new(Quantifier::Exists, vec![d(0), d(1), e(1)])];
    for j in 1..=t32 {
        if j > 1 {
            blocks.push(QuantifierBlock::new(Quantifier::Exists, vec![d(j), e(j)]));
        }
        blocks.push(QuantifierBlock::new(Quantifier::Forall, vec![x(j)]));
    }
    blocks.push(QuantifierBlock::new(Quantifier::Exists, (1..=t32).map(f).collect()));
    let prefix = Prefix::new(blocks)?;

    let mut clauses = vec![
        Clause::new([d(0).negative()]),
        Clause::new([d(0).positive(), d(1).negative(), e(1).negative()]),
    ];
    for j in 1..=t32 {
        let rest: Vec<Lit> = if j < t32 {
            vec![d(j + 1).negative(), e(j + 1).negative()]
        } else {
            (1..=t32).map(|i| f(i).negative()).collect()
        };
        clauses.push(Clause::new(
            [d(j).positive(), x(j).positive()].into_iter().chain(rest.clone()),
        ));
        clauses.push(Clause::new([e(j).positive(), x(j).negative()].into_iter().chain(rest)));
    }
    for j in 1..=t32 {
        clauses.push(Clause::new([x(j).positive(), f(j).positive()]));
        clauses.push(Clause::new([x(j).negative(), f(j).positive()]));
    }
    let mut instance = QbfInstance::new(prefix, clauses)?;
    instance.meta.comments.push(format!("KBKF instance, t = {t}"));
    Ok(instance)
}

/// The symmetry of [`gen_kbkf`] at level `j` (1-based): swap `dj` and `ej`
/// and negate `xj`.
pub fn kbkf_symmetry(j: usize) -> SignedPermutation {
    let j = j as u32;
    let (d, e, x) = (var(3 * j - 1), var(3 * j), var(3 * j + 1));
    SignedPermutation::from_pairs(&[(d, e.positive()), (e, d.positive()), (x, x.negative())])
        .expect("valid permutation")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockPattern {
    /// `count` blocks of near-equal size with alternating quantifiers.
    Alternating { first: Quantifier, count: usize },
    /// Explicit block sizes, consecutive variables per block.
    Sizes(Vec<(Quantifier, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomQbfParams {
    pub seed: u64,
    pub num_vars: usize,
    /// With planting, the actual count is at most this: clauses are added
    /// in whole orbits and an orbit that does not fit is skipped.
    pub num_clauses: usize,
    pub clause_len: usize,
    pub blocks: BlockPattern,
    pub plant_symmetry: bool,
}

impl RandomQbfParams {
    pub fn new(seed: u64, num_vars: usize, num_clauses: usize) -> Self {
        RandomQbfParams {
            seed,
            num_vars,
            num_clauses,
            clause_len: 3.min(num_vars.max(1)),
            blocks: BlockPattern::Alternating {
                first: Quantifier::Forall,
                count: 2,
            },
            plant_symmetry: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomQbf {
    pub instance: QbfInstance,
    /// The planted symmetry, when one was requested.
    pub planted: Option<SignedPermutation>,
}

fn build_prefix(n: usize, pattern: &BlockPattern) -> Result<Prefix> {
    let sizes: Vec<(Quantifier, usize)> = match pattern {
        BlockPattern::Alternating { first, count } => {
            let count = (*count).clamp(1, n.max(1));
            let mut q = *first;
            (0..count)
                .map(|i| {
                    let size = n / count + usize::from(i < n % count);
                    let out = (q, size);
                    q = q.flip();
                    out
                })
                .collect()
        }
        BlockPattern::Sizes(sizes) => {
            let total: usize = sizes.iter().map(|s| s.1).sum();
            if total != n {
                return Err(Error::Infeasible(format!("block sizes sum to {total}, expected {n}")));
            }
            sizes.clone()
        }
    };
    let mut next = 1u32;
    let blocks = sizes.into_iter().map(|(q, size)| {
        let vars = (next..next + size as u32).map(var).collect();
        next += size as u32;
        QuantifierBlock::new(q, vars)
    });
    Prefix::new(blocks)
}

/// A random block-respecting signed permutation: a shuffle inside each
/// block and a random sign per variable. Never the identity unless the
/// prefix is empty.
pub fn random_signed_permutation(prefix: &Prefix, rng: &mut impl Rng) -> SignedPermutation {
    if prefix.is_empty() {
        return SignedPermutation::identity();
    }
    loop {
        let mut pairs = Vec::new();
        for block in prefix.blocks() {
            let mut images = block.vars.clone();
            images.shuffle(rng);
            for (&x, &y) in block.vars.iter().zip(&images) {
                pairs.push((x, Lit::new(y, rng.gen_bool(0.5))));
            }
        }
        let g = SignedPermutation::from_pairs(&pairs).expect("shuffle is a bijection");
        if !g.is_identity() {
            return g;
        }
    }
}

fn random_clause(vars: &[Var], len: usize, rng: &mut impl Rng) -> Clause {
    let picked: Vec<&Var> = vars.choose_multiple(rng, len).collect();
    Clause::new(picked.into_iter().map(|&v| Lit::new(v, rng.gen_bool(0.5))))
}

/// A seeded random instance; equal parameters give identical output.
pub fn gen_random_qbf(params: &RandomQbfParams) -> Result<RandomQbf> {
    let n = params.num_vars;
    if params.num_clauses > 0 && (params.clause_len == 0 || params.clause_len > n) {
        return Err(Error::Infeasible(format!(
            "clauses of length {} over {n} variables",
            params.clause_len
        )));
    }
    let prefix = build_prefix(n, &params.blocks)?;
    let vars = prefix.vars();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut clauses: Vec<Clause> = Vec::new();
    let mut seen: HashSet<Clause> = HashSet::new();
    let planted = params
        .plant_symmetry
        .then(|| random_signed_permutation(&prefix, &mut rng));

    let attempts = 50 * params.num_clauses + 50;
    for _ in 0..attempts {
        if clauses.len() >= params.num_clauses {
            break;
        }
        let c = random_clause(&vars, params.clause_len, &mut rng);
        let orbit = match &planted {
            None => vec![c],
            Some(g) => {
                let mut orbit = vec![c.clone()];
                let mut next = g.apply_to_clause(&c);
                while next.sorted() != c.sorted() {
                    orbit.push(next.clone());
                    next = g.apply_to_clause(&next);
                }
                orbit
            }
        };
        if seen.contains(&orbit[0].sorted()) || clauses.len() + orbit.len() > params.num_clauses {
            continue;
        }
        for c in orbit {
            seen.insert(c.sorted());
            clauses.push(c);
        }
    }
    let mut instance = QbfInstance::new(prefix, clauses)?;
    instance.meta.comments.push(format!(
        "random instance seed={} n={} m={} k={}{}",
        params.seed,
        n,
        params.num_clauses,
        params.clause_len,
        if planted.is_some() { " planted" } else { "" }
    ));
    Ok(RandomQbf { instance, planted })
}
