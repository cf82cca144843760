#![allow(dead_code)]

use std::collections::HashSet;

use qsym::formula::{Lit, Var};
use qsym::generate::{gen_random_qbf, BlockPattern, RandomQbf, RandomQbfParams};
use qsym::group::SignedPermutation;
use qsym::qdimacs::{Clause, Prefix, QbfInstance, Quantifier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random(seed: u64, n: usize, m: usize, len: usize, blocks: usize, plant: bool) -> RandomQbf {
    let first = if seed.is_multiple_of(2) {
        Quantifier::Forall
    } else {
        Quantifier::Exists
    };
    let params = RandomQbfParams {
        seed,
        num_vars: n,
        num_clauses: m,
        clause_len: len.min(n).max(1),
        blocks: BlockPattern::Alternating { first, count: blocks },
        plant_symmetry: plant,
    };
    gen_random_qbf(&params).expect("feasible parameters")
}

/// A random prefix over variables `1..=n`.
pub fn random_prefix(rng: &mut impl Rng, n: usize) -> Prefix {
    let seq = (1..=n as u32).map(|i| {
        let q = if rng.gen_bool(0.5) {
            Quantifier::Exists
        } else {
            Quantifier::Forall
        };
        (q, Var::new(i).unwrap())
    });
    Prefix::from_sequence(seq).unwrap()
}

pub fn random_cnf(rng: &mut impl Rng, n: usize, m: usize) -> Vec<Clause> {
    (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=n.min(3));
            Clause::new((0..len).map(|_| Lit::new(Var::new(rng.gen_range(1..=n as u32)).unwrap(), rng.gen_bool(0.5))))
        })
        .collect()
}

pub fn image_instance(instance: &QbfInstance, g: &SignedPermutation) -> QbfInstance {
    let clauses = instance.matrix().iter().map(|c| g.apply_to_clause(c));
    QbfInstance::new(instance.prefix().clone(), clauses).unwrap()
}

fn permutations(items: &[Var]) -> Vec<Vec<Var>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every block-respecting signed permutation that maps the clause multiset
/// onto itself, by exhaustive enumeration.
pub fn brute_force_group(instance: &QbfInstance) -> HashSet<SignedPermutation> {
    let original = instance.sorted_matrix();
    let mut candidates: Vec<Vec<(Var, Lit)>> = vec![Vec::new()];
    for block in instance.prefix().blocks() {
        let mut block_maps = Vec::new();
        for perm in permutations(&block.vars) {
            for signs in 0u32..(1 << block.vars.len()) {
                let map: Vec<(Var, Lit)> = block
                    .vars
                    .iter()
                    .zip(&perm)
                    .enumerate()
                    .map(|(k, (&x, &y))| (x, Lit::new(y, signs >> k & 1 == 0)))
                    .collect();
                block_maps.push(map);
            }
        }
        candidates = candidates
            .iter()
            .flat_map(|c| {
                block_maps.iter().map(move |m| {
                    let mut c = c.clone();
                    c.extend_from_slice(m);
                    c
                })
            })
            .collect();
    }
    candidates
        .into_iter()
        .map(|pairs| SignedPermutation::from_pairs(&pairs).unwrap())
        .filter(|g| {
            let mut image: Vec<Clause> = instance
                .matrix()
                .iter()
                .map(|c| g.apply_to_clause(c).sorted())
                .collect();
            image.sort();
            image == original
        })
        .collect()
}

/// A signed permutation as a permutation of the `2n` literal points, where
/// literal `x` is point `2(x-1)` and `¬x` is point `2(x-1)+1`.
pub fn literal_points(g: &SignedPermutation, n: usize) -> Vec<usize> {
    let point = |l: Lit| 2 * (l.to_dimacs().unsigned_abs() as usize - 1) + usize::from(!l.is_positive());
    (0..2 * n)
        .map(|p| {
            let lit = Lit::from_dimacs(if p % 2 == 0 {
                (p / 2 + 1) as i32
            } else {
                -((p / 2 + 1) as i32)
            })
            .unwrap();
            point(g.image_lit(lit))
        })
        .collect()
}

struct Level {
    base: usize,
    gens: Vec<Vec<usize>>,
    transversal: Vec<Option<Vec<usize>>>,
}

/// Stabilizer chain built by deterministic Schreier-Sims. Permutations are
/// image arrays; products apply the left factor first.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

fn then(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&x| b[x]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

impl StabilizerChain {
    pub fn new(degree: usize, gens: &[Vec<usize>]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            chain.insert(0, g.clone());
        }
        chain
    }

    fn sift(&self, from: usize, mut g: Vec<usize>) -> (Vec<usize>, usize) {
        for (j, level) in self.levels.iter().enumerate().skip(from) {
            match &level.transversal[g[level.base]] {
                Some(t) => g = then(&g, &inverse(t)),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    fn insert(&mut self, from: usize, g: Vec<usize>) {
        let (h, j) = self.sift(from, g);
        let Some(moved) = (0..self.degree).find(|&p| h[p] != p) else {
            return;
        };
        if j == self.levels.len() {
            self.levels.push(Level {
                base: moved,
                gens: Vec::new(),
                transversal: Vec::new(),
            });
        }
        // h fixes the base points of levels from..j, so it lies in each of
        // those stabilizers
        for i in from..=j {
            self.levels[i].gens.push(h.clone());
        }
        for i in (from..=j).rev() {
            for sg in self.rebuild(i) {
                self.insert(i + 1, sg);
            }
        }
    }

    /// Recomputes the transversal of level `i` and returns its Schreier
    /// generators.
    fn rebuild(&mut self, i: usize) -> Vec<Vec<usize>> {
        let level = &mut self.levels[i];
        let mut transversal = vec![None; self.degree];
        transversal[level.base] = Some((0..self.degree).collect::<Vec<_>>());
        let mut queue = vec![level.base];
        while let Some(p) = queue.pop() {
            let tp = transversal[p].clone().unwrap();
            for s in &level.gens {
                if transversal[s[p]].is_none() {
                    transversal[s[p]] = Some(then(&tp, s));
                    queue.push(s[p]);
                }
            }
        }
        let mut schreier = Vec::new();
        for p in 0..self.degree {
            if let Some(tp) = &transversal[p] {
                for s in &level.gens {
                    let back = inverse(transversal[s[p]].as_ref().unwrap());
                    schreier.push(then(&then(tp, s), &back));
                }
            }
        }
        level.transversal = transversal;
        schreier
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.transversal.iter().flatten().count() as u128)
            .product()
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        let (h, _) = self.sift(0, g.to_vec());
        h.iter().enumerate().all(|(p, &q)| p == q)
    }
}
