//! Strategy trees, their enumeration and evaluation, and a recursive truth
//! oracle.
//!
//! A strategy is stored as one label per (owner variable, opponent history)
//! slot. The history of an owner variable is the assignment of the opponent
//! variables quantified before it, read as a binary number with the earliest
//! opponent variable as most significant bit. Slots are ordered by level and
//! then by history, which is breadth-first order on the tree.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Matrix, Var};
use crate::group::{group_closure, SignedPermutation, DEFAULT_GROUP_CAP};
use crate::qdimacs::{Prefix, Quantifier};

pub const DEFAULT_STRATEGY_CAP: u64 = 1 << 20;
pub const DEFAULT_TRUTH_CAP: usize = 24;

// trees with more label slots than this are never materialized
const MAX_SLOTS: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Role {
    Existential,
    Universal,
}

impl Role {
    pub fn owner(self) -> Quantifier {
        match self {
            Role::Existential => Quantifier::Exists,
            Role::Universal => Quantifier::Forall,
        }
    }

    pub fn dual(self) -> Role {
        match self {
            Role::Existential => Role::Universal,
            Role::Universal => Role::Existential,
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct Level {
    var: Var,
    // opponent variables quantified before `var`
    history_len: usize,
    offset: usize,
}

/// Everything about a tree that depends only on (prefix, role).
#[derive(Debug, PartialEq, Eq)]
struct Shape {
    prefix: Prefix,
    role: Role,
    levels: Vec<Level>,
    level_of: HashMap<Var, usize>,
    opponents: Vec<Var>,
    slots: usize,
}

impl Shape {
    fn new(prefix: &Prefix, role: Role) -> Result<Arc<Shape>> {
        let mut levels = Vec::new();
        let mut opponents = Vec::new();
        let mut slots = 0usize;
        for (q, var) in prefix.iter() {
            if q == role.owner() {
                let width = 1usize
                    .checked_shl(opponents.len() as u32)
                    .filter(|w| slots + w <= MAX_SLOTS)
                    .ok_or_else(|| Error::cap("strategy tree size", "too large", MAX_SLOTS))?;
                levels.push(Level {
                    var,
                    history_len: opponents.len(),
                    offset: slots,
                });
                slots += width;
            } else {
                opponents.push(var);
            }
        }
        let level_of = levels.iter().enumerate().map(|(i, l)| (l.var, i)).collect();
        Ok(Arc::new(Shape {
            prefix: prefix.clone(),
            role,
            levels,
            level_of,
            opponents,
            slots,
        }))
    }

    fn history(&self, level: &Level, sigma: &Assignment) -> Result<usize> {
        let mut h = 0usize;
        for &v in &self.opponents[..level.history_len] {
            h = (h << 1) | sigma.get(v)? as usize;
        }
        Ok(h)
    }
}

/// Σ over owner variables of 2^(opponent variables quantified before it):
/// the number of label slots, so `count_strategies = 2^strategy_bits`.
pub fn strategy_bits(prefix: &Prefix, role: Role) -> BigUint {
    let mut opponents = 0u32;
    let mut bits = BigUint::from(0u32);
    for (q, _) in prefix.iter() {
        if q == role.owner() {
            bits += BigUint::from(1u32) << opponents;
        } else {
            opponents += 1;
        }
    }
    bits
}

/// Number of strategies for `role`.
///
/// Panics if the count has more than `u32::MAX` bits, which needs more
/// than 31 opponent variables in front of one owner variable.
pub fn count_strategies(prefix: &Prefix, role: Role) -> BigUint {
    let bits = u32::try_from(strategy_bits(prefix, role)).expect("strategy count too large to represent");
    BigUint::from(1u32) << bits
}

fn enumeration_bits(prefix: &Prefix, role: Role, cap: u64) -> Result<u32> {
    let bits = strategy_bits(prefix, role);
    let count_fits = u32::try_from(&bits).ok().filter(|&b| b < 64 && (1u64 << b) <= cap);
    count_fits.ok_or_else(|| {
        let count = match u32::try_from(&bits) {
            Ok(b) if b <= 256 => (BigUint::from(1u32) << b).to_string(),
            _ => format!("2^{bits}"),
        };
        Error::cap("strategy count", count, cap)
    })
}

/// An existential or universal strategy for a prefix.
#[derive(Clone, PartialEq, Eq)]
pub struct StrategyTree {
    shape: Arc<Shape>,
    labels: Vec<bool>,
}

impl StrategyTree {
    /// Builds a tree from its labels in slot order.
    pub fn from_labels(prefix: &Prefix, role: Role, labels: Vec<bool>) -> Result<Self> {
        let shape = Shape::new(prefix, role)?;
        if labels.len() != shape.slots {
            return Err(Error::ShapeMismatch(format!(
                "expected {} labels, got {}",
                shape.slots,
                labels.len()
            )));
        }
        Ok(StrategyTree { shape, labels })
    }

    /// Builds a tree from a policy: `choose(var, history)` gives the owner's
    /// value for `var` after the opponent moves in `history`.
    pub fn from_fn(prefix: &Prefix, role: Role, mut choose: impl FnMut(Var, &Assignment) -> bool) -> Result<Self> {
        let shape = Shape::new(prefix, role)?;
        let mut labels = Vec::with_capacity(shape.slots);
        for level in &shape.levels {
            let vars = &shape.opponents[..level.history_len];
            for h in 0..(1u64 << level.history_len) {
                labels.push(choose(level.var, &Assignment::from_bits(vars, h)));
            }
        }
        Ok(StrategyTree { shape, labels })
    }

    pub fn prefix(&self) -> &Prefix {
        &self.shape.prefix
    }

    pub fn role(&self) -> Role {
        self.shape.role
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    /// The owner's move at `var` given the opponent moves recorded in `sigma`.
    pub fn choice(&self, var: Var, sigma: &Assignment) -> Result<bool> {
        let &i = self
            .shape
            .level_of
            .get(&var)
            .ok_or_else(|| Error::ShapeMismatch(format!("{var} is not an owner variable")))?;
        let level = &self.shape.levels[i];
        Ok(self.labels[level.offset + self.shape.history(level, sigma)?])
    }

    pub fn path_count(&self) -> u64 {
        1u64.checked_shl(self.shape.opponents.len() as u32).unwrap_or(u64::MAX)
    }

    /// The path taken when the opponent plays `opponent_bits` (earliest
    /// opponent variable most significant).
    pub fn path(&self, opponent_bits: u64) -> Assignment {
        let shape = &*self.shape;
        let k = shape.opponents.len();
        let mut sigma = Assignment::from_bits(&shape.opponents, opponent_bits);
        for level in &shape.levels {
            let h = if level.history_len == 0 {
                0
            } else {
                (opponent_bits >> (k - level.history_len)) as usize
            };
            sigma.set(level.var, self.labels[level.offset + h]);
        }
        sigma
    }

    /// All paths, as total assignments, in opponent-bits order.
    pub fn paths(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.path_count()).map(|b| self.path(b))
    }

    fn check_prefix(&self, prefix: &Prefix) -> Result<()> {
        if &self.shape.prefix != prefix {
            return Err(Error::ShapeMismatch("strategy was built for another prefix".into()));
        }
        Ok(())
    }
}

impl fmt::Debug for StrategyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StrategyTree({:?}, {self})", self.shape.role)
    }
}

impl fmt::Display for StrategyTree {
    /// `x2:01 x3:1` lists each owner variable with its labels by history.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, level) in self.shape.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:", level.var)?;
            let width = 1usize << level.history_len;
            for &b in &self.labels[level.offset..level.offset + width] {
                f.write_str(if b { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// Iterator over all strategies in lexicographic slot order, first slot most
/// significant.
#[derive(Debug)]
pub struct Strategies {
    shape: Arc<Shape>,
    next: u64,
    end: u64,
}

impl Iterator for Strategies {
    type Item = StrategyTree;

    fn next(&mut self) -> Option<StrategyTree> {
        if self.next >= self.end {
            return None;
        }
        let i = self.next;
        self.next += 1;
        let n = self.shape.slots;
        let labels = (0..n).map(|slot| (i >> (n - 1 - slot)) & 1 == 1).collect();
        Some(StrategyTree {
            shape: Arc::clone(&self.shape),
            labels,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.end - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for Strategies {}

/// Streams every strategy exactly once. Fails when there are more than
/// `cap` of them.
pub fn enumerate_strategies(prefix: &Prefix, role: Role, cap: u64) -> Result<Strategies> {
    let bits = enumeration_bits(prefix, role, cap)?;
    let shape = Shape::new(prefix, role)?;
    Ok(Strategies {
        shape,
        next: 0,
        end: 1u64 << bits,
    })
}

/// `[P.φ]_s`: the conjunction over paths for existential strategies and
/// the disjunction for universal ones.
pub fn strategy_value<M: Matrix + ?Sized>(prefix: &Prefix, matrix: &M, s: &StrategyTree) -> Result<bool> {
    s.check_prefix(prefix)?;
    let want = s.role() == Role::Universal;
    for sigma in s.paths() {
        if matrix.value(&sigma)? == want {
            return Ok(want);
        }
    }
    Ok(!want)
}

/// The single assignment that is a path of both `s` and `t`.
pub fn common_path(s: &StrategyTree, t: &StrategyTree) -> Result<Assignment> {
    if s.role() != Role::Existential || t.role() != Role::Universal {
        return Err(Error::ShapeMismatch(
            "expected an existential and a universal strategy".into(),
        ));
    }
    t.check_prefix(s.prefix())?;
    let mut sigma = Assignment::new();
    for (q, var) in s.prefix().iter() {
        let value = match q {
            Quantifier::Exists => s.choice(var, &sigma)?,
            Quantifier::Forall => t.choice(var, &sigma)?,
        };
        sigma.set(var, value);
    }
    Ok(sigma)
}

/// Truth of `P.φ` by recursive expansion with the default variable cap.
pub fn qbf_truth<M: Matrix + ?Sized>(prefix: &Prefix, matrix: &M) -> Result<bool> {
    qbf_truth_capped(prefix, matrix, DEFAULT_TRUTH_CAP)
}

/// Truth of `P.φ`. Subtrees are cut as soon as the partial assignment
/// decides the matrix, so CNFs with many auxiliary variables stay cheap in
/// practice even past the cap's worst case.
pub fn qbf_truth_capped<M: Matrix + ?Sized>(prefix: &Prefix, matrix: &M, cap: usize) -> Result<bool> {
    if prefix.len() > cap {
        return Err(Error::cap("variable count", prefix.len(), cap));
    }
    let order: Vec<(Quantifier, Var)> = prefix.iter().collect();
    let mut sigma = Assignment::new();
    expand(&order, matrix, &mut sigma)
}

fn expand<M: Matrix + ?Sized>(order: &[(Quantifier, Var)], matrix: &M, sigma: &mut Assignment) -> Result<bool> {
    if let Some(b) = matrix.partial_value(sigma) {
        return Ok(b);
    }
    let Some((&(q, var), rest)) = order.split_first() else {
        return matrix.value(sigma);
    };
    if !matrix.mentions(var, sigma) {
        sigma.set(var, false);
        let b = expand(rest, matrix, sigma)?;
        sigma.unset(var);
        return Ok(b);
    }
    let mut result = q == Quantifier::Forall;
    for value in [false, true] {
        sigma.set(var, value);
        let b = expand(rest, matrix, sigma)?;
        if b != result {
            result = b;
            break;
        }
    }
    sigma.unset(var);
    Ok(result)
}

/// Truth of `P.φ` read off the strategies: some existential strategy wins.
/// Also checks that this agrees with "no universal strategy wins" and
/// reports a validation error if it does not.
pub fn truth_by_strategies<M: Matrix + ?Sized>(prefix: &Prefix, matrix: &M, cap: u64) -> Result<bool> {
    let mut exists_wins = false;
    for s in enumerate_strategies(prefix, Role::Existential, cap)? {
        if strategy_value(prefix, matrix, &s)? {
            exists_wins = true;
            break;
        }
    }
    let mut forall_wins = false;
    for t in enumerate_strategies(prefix, Role::Universal, cap)? {
        if !strategy_value(prefix, matrix, &t)? {
            forall_wins = true;
            break;
        }
    }
    if exists_wins == forall_wins {
        return Err(Error::Validation(
            "existential and universal strategy semantics disagree".into(),
        ));
    }
    Ok(exists_wins)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitCaps {
    pub strategies: u64,
    pub group: usize,
}

impl Default for OrbitCaps {
    fn default() -> Self {
        OrbitCaps {
            strategies: DEFAULT_STRATEGY_CAP,
            group: DEFAULT_GROUP_CAP,
        }
    }
}

/// Strategies partitioned into semantic orbits.
#[derive(Clone, Debug)]
pub struct SemanticOrbits {
    pub strategies: Vec<StrategyTree>,
    /// Indices into `strategies`; orbits ordered by their first member.
    pub orbits: Vec<Vec<usize>>,
}

impl SemanticOrbits {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn members(&self, orbit: usize) -> impl Iterator<Item = &StrategyTree> + '_ {
        self.orbits[orbit].iter().map(move |&i| &self.strategies[i])
    }
}

/// Partitions the strategies of `role` under the group generated by
/// `generators`: `s ~ s'` when every path of either one is mapped onto a
/// path of the other by some group element.
///
/// A path `σ` of `s'` has such an element exactly when the assignment orbit
/// of `σ` meets the paths of `s`, so two strategies are related iff their
/// paths meet the same assignment orbits. The relation is therefore already
/// an equivalence and no transitive closure is needed.
pub fn semantic_orbits(
    prefix: &Prefix,
    role: Role,
    generators: &[SignedPermutation],
    caps: OrbitCaps,
) -> Result<SemanticOrbits> {
    for g in generators {
        g.check_blocks(prefix)?;
    }
    // only for the size check; orbits come from the generators directly
    group_closure(generators, caps.group)?;
    let strategies: Vec<StrategyTree> = enumerate_strategies(prefix, role, caps.strategies)?.collect();
    let vars = prefix.vars();
    let orbit_id = assignment_orbits(&vars, generators)?;

    let mut classes: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for (i, s) in strategies.iter().enumerate() {
        let mut key: Vec<u32> = s.paths().map(|p| orbit_id[p.to_bits(&vars) as usize]).collect();
        key.sort_unstable();
        key.dedup();
        let next = orbits.len();
        let c = *classes.entry(key).or_insert(next);
        if c == next {
            orbits.push(Vec::new());
        }
        orbits[c].push(i);
    }
    Ok(SemanticOrbits { strategies, orbits })
}

// Orbit id of every total assignment over `vars` (as bits), by union-find.
fn assignment_orbits(vars: &[Var], generators: &[SignedPermutation]) -> Result<Vec<u32>> {
    let n = vars.len();
    if n > 26 {
        return Err(Error::cap("variable count for assignment orbits", n, 26));
    }
    let position: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<u32> = (0..(1u32 << n)).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for g in generators {
        // bit of position i in g(σ) is bit src[i] of σ, xor flip[i]
        let mut src = vec![0usize; n];
        let mut flip = 0u64;
        for (i, &v) in vars.iter().enumerate() {
            let l = g.image(v);
            src[i] = position[&l.var()];
            if !l.is_positive() {
                flip |= 1 << (n - 1 - i);
            }
        }
        for bits in 0..(1u64 << n) {
            let mut image = flip;
            for (i, &j) in src.iter().enumerate() {
                image ^= ((bits >> (n - 1 - j)) & 1) << (n - 1 - i);
            }
            let (a, b) = (find(&mut parent, bits as u32), find(&mut parent, image as u32));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    Ok((0..(1u32 << n)).map(|x| find(&mut parent, x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::qdimacs::Quantifier::{Exists, Forall};

    fn v(id: u32) -> Var {
        Var::new(id).unwrap()
    }

    fn iff12() -> Formula {
        Formula::iff(Formula::var(v(1)), Formula::var(v(2)))
    }

    #[test]
    fn counts_for_small_prefixes() {
        let p = Prefix::from_ids(&[(Forall, &[1]), (Exists, &[2])]).unwrap();
        assert_eq!(count_strategies(&p, Role::Existential), BigUint::from(4u32));
        assert_eq!(count_strategies(&p, Role::Universal), BigUint::from(2u32));
        let e = Prefix::from_ids(&[(Exists, &[1])]).unwrap();
        assert_eq!(count_strategies(&e, Role::Universal), BigUint::from(1u32));
        assert_eq!(enumerate_strategies(&e, Role::Existential, 16).unwrap().count(), 2);
        assert_eq!(enumerate_strategies(&p, Role::Existential, 16).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_cap() {
        let p = Prefix::from_ids(&[(Forall, &[1, 2, 3, 4, 5]), (Exists, &[6])]).unwrap();
        let err = enumerate_strategies(&p, Role::Existential, 1 << 20).unwrap_err();
        assert!(err.is_cap_exceeded());
        assert!(err.to_string().contains("4294967296"));
    }

    #[test]
    fn copy_strategy_wins() {
        let p = Prefix::from_ids(&[(Forall, &[1]), (Exists, &[2])]).unwrap();
        let copy = StrategyTree::from_fn(&p, Role::Existential, |_, h| h.value(v(1)).unwrap()).unwrap();
        assert!(strategy_value(&p, &iff12(), &copy).unwrap());
        let top = StrategyTree::from_fn(&p, Role::Existential, |_, _| true).unwrap();
        assert!(!strategy_value(&p, &iff12(), &top).unwrap());
        let other = Prefix::from_ids(&[(Exists, &[1, 2])]).unwrap();
        assert!(strategy_value(&other, &iff12(), &top).is_err());
    }

    #[test]
    fn truth_examples() {
        let p = Prefix::from_ids(&[(Forall, &[1]), (Exists, &[2])]).unwrap();
        assert!(qbf_truth(&p, &iff12()).unwrap());
        let q = Prefix::from_ids(&[(Exists, &[1]), (Forall, &[2])]).unwrap();
        assert!(!qbf_truth(&q, &iff12()).unwrap());
        assert!(qbf_truth(&Prefix::default(), &Formula::top()).unwrap());
        assert!(truth_by_strategies(&p, &iff12(), 1 << 12).unwrap());
        assert!(!truth_by_strategies(&q, &iff12(), 1 << 12).unwrap());
    }

    #[test]
    fn common_path_examples() {
        let p = Prefix::from_ids(&[(Forall, &[1]), (Exists, &[2])]).unwrap();
        let copy = StrategyTree::from_fn(&p, Role::Existential, |_, h| h.value(v(1)).unwrap()).unwrap();
        let bottom = StrategyTree::from_fn(&p, Role::Universal, |_, _| false).unwrap();
        assert_eq!(
            common_path(&copy, &bottom).unwrap(),
            Assignment::from_pairs([(v(1), false), (v(2), false)])
        );
    }

    #[test]
    fn example_orbits() {
        let p = Prefix::from_ids(&[(Forall, &[1]), (Exists, &[2, 3])]).unwrap();
        let swap = SignedPermutation::parse_cycle_notation("(2 3)").unwrap();
        let neg = SignedPermutation::parse_cycle_notation("(-2)(-3)").unwrap();
        let orbits = semantic_orbits(&p, Role::Existential, &[swap, neg], OrbitCaps::default()).unwrap();
        assert_eq!(orbits.len(), 4);
        assert!(orbits.orbits.iter().all(|o| o.len() == 4));
        let trivial = semantic_orbits(&p, Role::Existential, &[], OrbitCaps::default()).unwrap();
        assert_eq!(trivial.len(), 16);
    }
}
