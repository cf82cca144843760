//! Lex-leader symmetry breakers and their clause/cube encodings.
//!
//! For a generator `g` the existential breaker is
//!
//! ```text
//! ⋀_{i : Q_i = ∃} ( ⋀_{j<i} (x_j ↔ g(x_j)) ) → (x_i → g(x_i))
//! ```
//!
//! with variables in prefix order. The universal breaker for `P` is the
//! negation of the existential breaker for the flipped prefix.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Lit, Matrix, Var};
use crate::group::{group_closure, SignedPermutation};
use crate::qdimacs::{Clause, Cube, DnfSidecar, Prefix, QbfInstance, Quantifier};
use crate::strategy::{semantic_orbits, strategy_value, OrbitCaps, Role};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Polarity {
    Existential,
    Universal,
}

/// Which group elements get a conjunct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Selection {
    /// The generators as given.
    #[default]
    Generators,
    /// Every product of at most `max_len` generators.
    Products { max_len: usize },
    /// The whole generated group, if it has at most `cap` elements.
    Group { cap: usize },
}

/// Non-identity elements picked by `selection`, without repeats, in
/// first-found order.
pub fn select_elements(generators: &[SignedPermutation], selection: Selection) -> Result<Vec<SignedPermutation>> {
    let candidates: Vec<SignedPermutation> = match selection {
        Selection::Generators => generators.to_vec(),
        Selection::Products { max_len } => {
            let mut all = Vec::new();
            let mut layer = vec![SignedPermutation::identity()];
            let mut seen = HashSet::new();
            for _ in 0..max_len {
                let mut next = Vec::new();
                for w in &layer {
                    for g in generators {
                        let p = w.compose(g);
                        if seen.insert(p.clone()) {
                            next.push(p.clone());
                            all.push(p);
                        }
                    }
                }
                layer = next;
            }
            all
        }
        Selection::Group { cap } => group_closure(generators, cap)?,
    };
    let mut seen = HashSet::new();
    Ok(candidates
        .into_iter()
        .filter(|g| !g.is_identity() && seen.insert(g.clone()))
        .collect())
}

/// A breaker as a formula over the prefix variables, one part per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakerFormula {
    pub polarity: Polarity,
    /// Conjuncts (existential) or disjuncts (universal), with the element
    /// each one was built from.
    pub parts: Vec<(SignedPermutation, Formula)>,
}

impl BreakerFormula {
    pub fn formula(&self) -> Formula {
        let parts = self.parts.iter().map(|(_, f)| f.clone());
        match self.polarity {
            Polarity::Existential if self.parts.is_empty() => Formula::top(),
            Polarity::Universal if self.parts.is_empty() => Formula::bottom(),
            Polarity::Existential => Formula::all(parts),
            Polarity::Universal => Formula::any(parts),
        }
    }
}

impl Matrix for BreakerFormula {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        let want = self.polarity == Polarity::Universal;
        for (_, f) in &self.parts {
            if f.evaluate(sigma)? == want {
                return Ok(want);
            }
        }
        Ok(!want)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        self.formula().partial_evaluate(sigma)
    }
}

fn lex_leader_part(prefix: &Prefix, g: &SignedPermutation) -> Formula {
    let mut conjuncts = Vec::new();
    let mut equal_so_far: Vec<Formula> = Vec::new();
    for (q, x) in prefix.iter() {
        let gx = g.image(x);
        // positions fixed by g contribute x -> x and x <-> x, both true
        if gx == x.positive() {
            continue;
        }
        if q == Quantifier::Exists {
            let step = Formula::implies(Formula::var(x), Formula::lit(gx));
            conjuncts.push(Formula::implies(Formula::all(equal_so_far.clone()), step));
        }
        equal_so_far.push(Formula::iff(Formula::var(x), Formula::lit(gx)));
    }
    Formula::all(conjuncts)
}

/// The existential lex-leader breaker for the selected elements.
pub fn lex_leader_formula(
    prefix: &Prefix,
    generators: &[SignedPermutation],
    selection: Selection,
) -> Result<BreakerFormula> {
    for g in generators {
        g.check_blocks(prefix)?;
    }
    let parts = select_elements(generators, selection)?
        .into_iter()
        .map(|g| {
            let f = lex_leader_part(prefix, &g);
            (g, f)
        })
        .collect();
    Ok(BreakerFormula {
        polarity: Polarity::Existential,
        parts,
    })
}

/// The universal breaker: the negated existential breaker of the flipped
/// prefix.
pub fn universal_lex_leader_formula(
    prefix: &Prefix,
    generators: &[SignedPermutation],
    selection: Selection,
) -> Result<BreakerFormula> {
    let dual = lex_leader_formula(&prefix.flipped(), generators, selection)?;
    let parts = dual.parts.into_iter().map(|(g, f)| (g, Formula::negate(f))).collect();
    Ok(BreakerFormula {
        polarity: Polarity::Universal,
        parts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeOptions {
    pub selection: Selection,
    /// Skip positions the element maps to themselves.
    pub compress_identity: bool,
    /// First id for auxiliary variables; defaults to one past the prefix.
    pub first_aux: Option<u32>,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            selection: Selection::Generators,
            compress_identity: true,
            first_aux: None,
        }
    }
}

/// An auxiliary variable and where it goes in the prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuxVar {
    pub var: Var,
    pub quantifier: Quantifier,
    /// Placed right after the block of this variable; `None` means in
    /// front of the whole prefix.
    pub anchor: Option<Var>,
    /// Index of the element in the selected list.
    pub element: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedBreaker {
    pub polarity: Polarity,
    pub base_prefix: Prefix,
    pub elements: Vec<SignedPermutation>,
    pub aux: Vec<AuxVar>,
    /// Existential encodings only.
    pub clauses: Vec<Clause>,
    /// Universal encodings only.
    pub cubes: Vec<Cube>,
    pub extended_prefix: Prefix,
}

impl EncodedBreaker {
    pub fn next_free_var(&self) -> u32 {
        self.extended_prefix.max_var() + 1
    }
}

fn extend_prefix(base: &Prefix, aux: &[AuxVar]) -> Result<Prefix> {
    let mut prefix = base.clone();
    for a in aux {
        prefix = prefix.insert_after(a.anchor, a.var, a.quantifier)?;
    }
    Ok(prefix)
}

fn fresh(next: &mut u32) -> Result<Var> {
    let v = Var::new(*next).ok_or_else(|| Error::Validation("auxiliary variable ids overflow".into()))?;
    *next += 1;
    Ok(v)
}

/// Clause encoding of the existential breaker.
///
/// Per element `g`: a unit `y_0`, then walking the considered positions in
/// prefix order, `¬y ∨ ¬x ∨ g(x)` at existential positions, and a new `y`
/// defined from the previous one by a clause pair that depends on the
/// quantifier of `x`. Positions after the last existential one produce
/// nothing. Tautologies and repeated clauses are dropped.
pub fn encode_existential_cnf(
    prefix: &Prefix,
    generators: &[SignedPermutation],
    options: EncodeOptions,
) -> Result<EncodedBreaker> {
    for g in generators {
        g.check_blocks(prefix)?;
    }
    let elements = select_elements(generators, options.selection)?;
    let mut next = options.first_aux.unwrap_or(prefix.max_var() + 1);
    if next <= prefix.max_var() {
        return Err(Error::Validation(format!(
            "auxiliary ids must start above {}",
            prefix.max_var()
        )));
    }
    let mut aux = Vec::new();
    let mut clauses = Vec::new();
    let mut seen = HashSet::new();
    let mut emit = |lits: Vec<Lit>, clauses: &mut Vec<Clause>| {
        let c = Clause::new(lits);
        if !c.is_tautology() && seen.insert(c.sorted()) {
            clauses.push(c);
        }
    };
    for (e, g) in elements.iter().enumerate() {
        let positions: Vec<(Quantifier, Var)> = prefix
            .iter()
            .filter(|&(_, x)| !options.compress_identity || g.image(x) != x.positive())
            .collect();
        let Some(last) = positions.iter().rposition(|&(q, _)| q == Quantifier::Exists) else {
            continue;
        };
        let y0 = fresh(&mut next)?;
        aux.push(AuxVar {
            var: y0,
            quantifier: Quantifier::Exists,
            anchor: None,
            element: e,
        });
        emit(vec![y0.positive()], &mut clauses);
        let mut cur = y0;
        for (p, &(q, x)) in positions[..=last].iter().enumerate() {
            let gx = g.image(x);
            if q == Quantifier::Exists {
                emit(vec![cur.negative(), x.negative(), gx], &mut clauses);
            }
            if p == last {
                break;
            }
            let y = fresh(&mut next)?;
            aux.push(AuxVar {
                var: y,
                quantifier: Quantifier::Exists,
                anchor: Some(x),
                element: e,
            });
            match q {
                Quantifier::Exists => {
                    emit(vec![y.positive(), cur.negative(), x.negative()], &mut clauses);
                    emit(vec![y.positive(), cur.negative(), gx], &mut clauses);
                }
                Quantifier::Forall => {
                    emit(vec![y.positive(), cur.negative(), x.negative(), !gx], &mut clauses);
                    emit(vec![y.positive(), cur.negative(), x.positive(), gx], &mut clauses);
                }
            }
            cur = y;
        }
    }
    let extended_prefix = extend_prefix(prefix, &aux)?;
    Ok(EncodedBreaker {
        polarity: Polarity::Existential,
        base_prefix: prefix.clone(),
        elements,
        aux,
        clauses,
        cubes: Vec::new(),
        extended_prefix,
    })
}

/// Cube encoding of the universal breaker: the clause encoding for the
/// flipped prefix, negated clause by clause, with universal auxiliaries.
pub fn encode_universal_dnf(
    prefix: &Prefix,
    generators: &[SignedPermutation],
    options: EncodeOptions,
) -> Result<EncodedBreaker> {
    let dual = encode_existential_cnf(&prefix.flipped(), generators, options)?;
    let aux: Vec<AuxVar> = dual
        .aux
        .iter()
        .map(|a| AuxVar {
            quantifier: Quantifier::Forall,
            ..*a
        })
        .collect();
    let extended_prefix = extend_prefix(prefix, &aux)?;
    Ok(EncodedBreaker {
        polarity: Polarity::Universal,
        base_prefix: prefix.clone(),
        elements: dual.elements,
        aux,
        clauses: Vec::new(),
        cubes: dual.clauses.iter().map(Clause::negated).collect(),
        extended_prefix,
    })
}

/// How an encoding is attached to an instance.
#[derive(Clone, Copy, Debug)]
pub enum Augmentation<'a> {
    /// Append the clauses of an existential encoding.
    ConjoinCnf(&'a EncodedBreaker),
    /// Keep the matrix and emit the cubes of a universal encoding as a
    /// sidecar.
    AttachDnf(&'a EncodedBreaker),
    /// Both at once; the two encodings must use disjoint auxiliaries.
    Combined {
        exists: &'a EncodedBreaker,
        forall: &'a EncodedBreaker,
    },
}

/// An augmented instance. With a sidecar, the matrix denotes
/// `clauses ∨ cubes`, the usual reading for solvers that keep both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmented {
    pub instance: QbfInstance,
    pub dnf: Option<DnfSidecar>,
}

impl Augmented {
    pub fn matrix(&self) -> Disjunction<&[Clause], &[Cube]> {
        let cubes: &[Cube] = self.dnf.as_ref().map(|d| d.cubes.as_slice()).unwrap_or(&[]);
        Disjunction(self.instance.matrix(), cubes)
    }

    pub fn truth(&self, cap: usize) -> Result<bool> {
        crate::strategy::qbf_truth_capped(self.instance.prefix(), &self.matrix(), cap)
    }
}

fn check_encoding(instance: &QbfInstance, e: &EncodedBreaker, polarity: Polarity) -> Result<()> {
    if &e.base_prefix != instance.prefix() {
        return Err(Error::PrefixMismatch);
    }
    if e.polarity != polarity {
        return Err(Error::Validation(format!("expected a {polarity:?} encoding")));
    }
    Ok(())
}

pub fn augment_instance(instance: &QbfInstance, mode: Augmentation<'_>) -> Result<Augmented> {
    let mut clauses = instance.matrix().to_vec();
    let (prefix, cubes) = match mode {
        Augmentation::ConjoinCnf(e) => {
            check_encoding(instance, e, Polarity::Existential)?;
            clauses.extend(e.clauses.iter().cloned());
            (e.extended_prefix.clone(), None)
        }
        Augmentation::AttachDnf(e) => {
            check_encoding(instance, e, Polarity::Universal)?;
            (e.extended_prefix.clone(), Some(e.cubes.clone()))
        }
        Augmentation::Combined { exists, forall } => {
            check_encoding(instance, exists, Polarity::Existential)?;
            check_encoding(instance, forall, Polarity::Universal)?;
            let ids: HashSet<Var> = exists.aux.iter().map(|a| a.var).collect();
            if forall.aux.iter().any(|a| ids.contains(&a.var)) {
                return Err(Error::Validation("the two encodings share auxiliary variables".into()));
            }
            clauses.extend(exists.clauses.iter().cloned());
            let all: Vec<AuxVar> = exists.aux.iter().chain(&forall.aux).copied().collect();
            (extend_prefix(instance.prefix(), &all)?, Some(forall.cubes.clone()))
        }
    };
    let mut augmented = QbfInstance::new(prefix.clone(), clauses)?;
    augmented.meta.comments = instance.meta.comments.clone();
    let dnf = cubes.map(|cubes| DnfSidecar { prefix, cubes });
    Ok(Augmented {
        instance: augmented,
        dnf,
    })
}

/// `A ∨ B` as a matrix.
#[derive(Clone, Copy, Debug)]
pub struct Disjunction<A, B>(pub A, pub B);

/// `A ∧ B` as a matrix.
#[derive(Clone, Copy, Debug)]
pub struct Conjunction<A, B>(pub A, pub B);

impl<A: Matrix, B: Matrix> Matrix for Disjunction<A, B> {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        Ok(self.0.value(sigma)? || self.1.value(sigma)?)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        match (self.0.partial_value(sigma), self.1.partial_value(sigma)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        }
    }

    fn mentions(&self, var: Var, sigma: &Assignment) -> bool {
        (self.0.partial_value(sigma).is_none() && self.0.mentions(var, sigma))
            || (self.1.partial_value(sigma).is_none() && self.1.mentions(var, sigma))
    }
}

impl<A: Matrix, B: Matrix> Matrix for Conjunction<A, B> {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        Ok(self.0.value(sigma)? && self.1.value(sigma)?)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        match (self.0.partial_value(sigma), self.1.partial_value(sigma)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        }
    }

    fn mentions(&self, var: Var, sigma: &Assignment) -> bool {
        (self.0.partial_value(sigma).is_none() && self.0.mentions(var, sigma))
            || (self.1.partial_value(sigma).is_none() && self.1.mentions(var, sigma))
    }
}

/// Orbit coverage of a candidate breaker.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BreakerReport {
    pub role: Role,
    pub orbits: usize,
    /// Orbits without a member of the required value.
    pub uncovered: Vec<usize>,
}

impl BreakerReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty()
    }
}

fn coverage<M: Matrix + ?Sized>(
    prefix: &Prefix,
    generators: &[SignedPermutation],
    psi: &M,
    role: Role,
    caps: OrbitCaps,
) -> Result<BreakerReport> {
    let orbits = semantic_orbits(prefix, role, generators, caps)?;
    let want = role == Role::Existential;
    let mut uncovered = Vec::new();
    for (k, _) in orbits.orbits.iter().enumerate() {
        let mut hit = false;
        for s in orbits.members(k) {
            if strategy_value(prefix, psi, s)? == want {
                hit = true;
                break;
            }
        }
        if !hit {
            uncovered.push(k);
        }
    }
    Ok(BreakerReport {
        role,
        orbits: orbits.len(),
        uncovered,
    })
}

/// Checks that every orbit of existential strategies has a member `s` with
/// `[P.ψ]_s = ⊤`.
pub fn verify_breaker<M: Matrix + ?Sized>(
    prefix: &Prefix,
    generators: &[SignedPermutation],
    psi: &M,
    caps: OrbitCaps,
) -> Result<BreakerReport> {
    coverage(prefix, generators, psi, Role::Existential, caps)
}

/// Checks that every orbit of universal strategies has a member `t` with
/// `[P.ψ]_t = ⊥`.
pub fn verify_universal_breaker<M: Matrix + ?Sized>(
    prefix: &Prefix,
    generators: &[SignedPermutation],
    psi: &M,
    caps: OrbitCaps,
) -> Result<BreakerReport> {
    coverage(prefix, generators, psi, Role::Universal, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::equivalent;
    use crate::qdimacs::Quantifier::{Exists, Forall};
    use crate::strategy::qbf_truth;

    fn v(id: u32) -> Var {
        Var::new(id).unwrap()
    }

    fn cyc(s: &str) -> SignedPermutation {
        SignedPermutation::parse_cycle_notation(s).unwrap()
    }

    fn example_prefix() -> Prefix {
        Prefix::from_ids(&[(Forall, &[1]), (Exists, &[2, 3])]).unwrap()
    }

    /// The breaker with every position spelled out, fixed ones included.
    fn unreduced(prefix: &Prefix, gens: &[SignedPermutation]) -> Formula {
        Formula::all(gens.iter().map(|g| {
            let vars = prefix.vars();
            Formula::all(
                prefix
                    .iter()
                    .enumerate()
                    .filter(|(_, (q, _))| *q == Exists)
                    .map(|(i, (_, x))| {
                        let equal = Formula::all(
                            vars[..i]
                                .iter()
                                .map(|&y| Formula::iff(Formula::var(y), Formula::lit(g.image(y)))),
                        );
                        Formula::implies(equal, Formula::implies(Formula::var(x), Formula::lit(g.image(x))))
                    }),
            )
        }))
    }

    #[test]
    fn skipping_fixed_positions_keeps_the_formula() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5u32);
            let p = Prefix::from_sequence((1..=n).map(|i| (if rng.gen_bool(0.5) { Exists } else { Forall }, v(i))))
                .unwrap();
            let gens: Vec<SignedPermutation> = (0..rng.gen_range(1..=3))
                .map(|_| crate::generate::random_signed_permutation(&p, &mut rng))
                .collect();
            let psi = lex_leader_formula(&p, &gens, Selection::Generators).unwrap().formula();
            assert!(
                equivalent(&psi, &unreduced(&p, &gens), &p.vars(), 20).unwrap(),
                "{p} {gens:?}"
            );
        }
    }

    #[test]
    fn swap_breaker_simplifies() {
        let p = example_prefix();
        let psi = lex_leader_formula(&p, &[cyc("(2 3)")], Selection::Generators).unwrap();
        let expected = Formula::or2(Formula::lit(v(2).negative()), Formula::var(v(3)));
        assert!(equivalent(&psi.formula(), &expected, &p.vars(), 20).unwrap());
    }

    #[test]
    fn swap_and_negation_breaker() {
        let p = example_prefix();
        let gens = [cyc("(2 3)"), cyc("(-2)(-3)")];
        let psi = lex_leader_formula(&p, &gens, Selection::Generators).unwrap().formula();
        let expected = Formula::and2(
            Formula::lit(v(2).negative()),
            Formula::or2(Formula::lit(v(2).negative()), Formula::var(v(3))),
        );
        assert!(equivalent(&psi, &expected, &p.vars(), 20).unwrap());
        let matrix = Formula::iff(Formula::var(v(2)), Formula::var(v(3)));
        let report = verify_breaker(&p, &gens, &psi, OrbitCaps::default()).unwrap();
        assert_eq!(report.orbits, 4);
        assert!(report.passed());
        assert!(qbf_truth(&p, &psi).unwrap());
        assert!(qbf_truth(&p, &Formula::and2(matrix, psi)).unwrap());
    }

    #[test]
    fn empty_generators() {
        let p = example_prefix();
        let psi = lex_leader_formula(&p, &[], Selection::Generators).unwrap();
        assert_eq!(psi.formula(), Formula::top());
        let u = universal_lex_leader_formula(&p, &[], Selection::Generators).unwrap();
        assert_eq!(u.formula(), Formula::bottom());
        let e = encode_universal_dnf(&p, &[], EncodeOptions::default()).unwrap();
        assert!(e.cubes.is_empty());
    }

    #[test]
    fn clause_counts() {
        let p = example_prefix();
        let full = EncodeOptions {
            compress_identity: false,
            ..EncodeOptions::default()
        };
        let e = encode_existential_cnf(&p, &[cyc("(2 3)")], full).unwrap();
        assert_eq!(e.clauses.len(), 7);
        assert_eq!(e.aux.len(), 3);
        let compressed = encode_existential_cnf(&p, &[cyc("(2 3)")], EncodeOptions::default()).unwrap();
        assert_eq!(compressed.clauses.len(), 5);
        let id = encode_existential_cnf(&p, &[SignedPermutation::identity()], full).unwrap();
        assert!(id.clauses.is_empty() && id.aux.is_empty());
    }

    #[test]
    fn universal_cubes_mirror_flipped_clauses() {
        let p = example_prefix();
        let gens = [cyc("(2 3)"), cyc("(-1)")];
        let u = encode_universal_dnf(&p, &gens, EncodeOptions::default()).unwrap();
        let e = encode_existential_cnf(&p.flipped(), &gens, EncodeOptions::default()).unwrap();
        assert_eq!(u.cubes.len(), e.clauses.len());
        assert_eq!(u.extended_prefix.flipped(), e.extended_prefix);
    }

    #[test]
    fn augmentation_checks_prefix() {
        let p = example_prefix();
        let other = Prefix::from_ids(&[(Exists, &[1, 2, 3])]).unwrap();
        let e = encode_existential_cnf(&other, &[cyc("(2 3)")], EncodeOptions::default()).unwrap();
        let i = QbfInstance::new(p, [Clause::from_dimacs(&[2, 3])]).unwrap();
        assert!(matches!(
            augment_instance(&i, Augmentation::ConjoinCnf(&e)),
            Err(Error::PrefixMismatch)
        ));
    }
}
