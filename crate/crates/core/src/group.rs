//! Admissible maps and the groups they generate.
//!
//! [`SignedPermutation`] maps every variable to a literal and is what
//! detection and breaking work with. [`AdmissibleMap`] maps variables to
//! arbitrary formulas and is only used for verification.
//!
//! The action on assignments is `g(σ)(x) = [g(x)]_σ`. With composition read
//! as `(g ∘ h)(x) = g(h(x))` this is contravariant:
//! `(g ∘ h)(σ) = h(g(σ))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Lit, Var};
use crate::qdimacs::{Clause, Prefix, QbfInstance};

/// Default cap on the number of group elements materialized by closures.
pub const DEFAULT_GROUP_CAP: usize = 10_000;
/// Default variable cap for exhaustive admissibility/symmetry checks.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 16;

/// A bijection from variables to literals.
///
/// Variables beyond the stored images are fixed points, so the identity is
/// the empty permutation and equality does not depend on the variable count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    // images[i] is the image of variable i + 1; trailing fixed points trimmed
    images: Vec<Lit>,
}

impl SignedPermutation {
    pub fn identity() -> Self {
        SignedPermutation { images: Vec::new() }
    }

    /// Builds a permutation from the images of variables `1..=images.len()`.
    pub fn from_images(images: Vec<Lit>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for (i, l) in images.iter().enumerate() {
            let j = l.var().index();
            if j >= images.len() || seen[j] {
                return Err(Error::Validation(format!(
                    "images do not form a bijection (variable {} maps to {})",
                    i + 1,
                    l
                )));
            }
            seen[j] = true;
        }
        let mut p = SignedPermutation { images };
        p.trim();
        Ok(p)
    }

    /// Builds a permutation from explicit `variable -> literal` pairs; unlisted
    /// variables are fixed.
    pub fn from_pairs(pairs: &[(Var, Lit)]) -> Result<Self> {
        let n = pairs
            .iter()
            .flat_map(|(v, l)| [v.id(), l.var().id()])
            .max()
            .unwrap_or(0) as usize;
        let mut images: Vec<Lit> = (0..n).map(|i| Var::from_index(i).positive()).collect();
        let mut assigned = vec![false; n];
        for &(v, l) in pairs {
            if assigned[v.index()] {
                return Err(Error::Validation(format!("variable {} mapped twice", v.id())));
            }
            assigned[v.index()] = true;
            images[v.index()] = l;
        }
        SignedPermutation::from_images(images)
    }

    /// Shorthand over DIMACS ids: `&[(2, 3), (3, 2)]` swaps variables 2 and 3.
    pub fn from_dimacs_pairs(pairs: &[(u32, i32)]) -> Result<Self> {
        let converted = pairs
            .iter()
            .map(|&(v, l)| match (Var::new(v), Lit::from_dimacs(l)) {
                (Some(v), Some(l)) => Ok((v, l)),
                _ => Err(Error::Validation(format!("invalid pair ({v}, {l})"))),
            })
            .collect::<Result<Vec<_>>>()?;
        SignedPermutation::from_pairs(&converted)
    }

    fn trim(&mut self) {
        while let Some(&last) = self.images.last() {
            if last == Var::from_index(self.images.len() - 1).positive() {
                self.images.pop();
            } else {
                break;
            }
        }
    }

    /// Number of variables covered by the stored images.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, var: Var) -> Lit {
        self.images.get(var.index()).copied().unwrap_or_else(|| var.positive())
    }

    pub fn image_lit(&self, lit: Lit) -> Lit {
        let l = self.image(lit.var());
        if lit.is_positive() {
            l
        } else {
            !l
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    /// Variables not mapped to themselves (positively).
    pub fn support(&self) -> Vec<Var> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, l)| **l != Var::from_index(*i).positive())
            .map(|(i, _)| Var::from_index(i))
            .collect()
    }

    /// `self ∘ other`: apply `other` first, then `self`, as maps on formulas.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let n = self.images.len().max(other.images.len());
        let images = (0..n)
            .map(|i| self.image_lit(other.image(Var::from_index(i))))
            .collect();
        let mut p = SignedPermutation { images };
        p.trim();
        p
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut images: Vec<Lit> = (0..self.images.len()).map(|i| Var::from_index(i).positive()).collect();
        for (i, &l) in self.images.iter().enumerate() {
            let x = Var::from_index(i);
            images[l.var().index()] = Lit::new(x, l.is_positive());
        }
        let mut p = SignedPermutation { images };
        p.trim();
        p
    }

    /// `g(σ)(x) = [g(x)]_σ` for every variable in the domain of `sigma`.
    pub fn apply_to_assignment(&self, sigma: &Assignment) -> Result<Assignment> {
        let mut out = Assignment::new();
        for var in sigma.domain() {
            let l = self.image(var);
            out.set(var, l.eval(sigma.get(l.var())?));
        }
        Ok(out)
    }

    pub fn apply_to_clause(&self, clause: &Clause) -> Clause {
        clause.map_lits(|l| self.image_lit(l))
    }

    pub fn apply_to_formula(&self, phi: &Formula) -> Formula {
        phi.map_vars(&mut |v| Some(Formula::lit(self.image(v))))
    }

    /// Checks the block condition against `prefix`: every moved variable and
    /// its image are quantified and share a quantifier block.
    pub fn check_blocks(&self, prefix: &Prefix) -> Result<()> {
        for x in self.support() {
            let y = self.image(x).var();
            if !prefix.contains(x) {
                return Err(Error::Inadmissible(format!("variable {} is not quantified", x.id())));
            }
            if !prefix.same_block(x, y) {
                return Err(Error::Inadmissible(format!(
                    "variable {} is mapped into another quantifier block (to {})",
                    x.id(),
                    self.image(x)
                )));
            }
        }
        Ok(())
    }

    /// Order of the element in its cyclic group.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut g = self.clone();
        while !g.is_identity() {
            g = g.compose(self);
            k += 1;
        }
        k
    }

    /// Cycle notation. Each entry is the signed image of the preceding
    /// entry's variable; the first entry is the image of the last. Positive
    /// fixed points are omitted, `(-5)` negates variable 5, and the identity
    /// is written `()`.
    pub fn to_cycle_notation(&self) -> String {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i].var().index();
            }
            if cycle.len() == 1 && self.images[start].is_positive() {
                continue;
            }
            out.push('(');
            for (k, &i) in cycle.iter().enumerate() {
                let prev = cycle[(k + cycle.len() - 1) % cycle.len()];
                let sign = if self.images[prev].is_positive() { "" } else { "-" };
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(&format!("{sign}{}", i + 1));
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    pub fn parse_cycle_notation(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Validation(format!("invalid cycle notation `{text}`: {msg}"));
        let mut pairs: Vec<(Var, Lit)> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let entries = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i32>()
                        .ok()
                        .and_then(Lit::from_dimacs)
                        .ok_or_else(|| bad("bad entry"))
                })
                .collect::<Result<Vec<Lit>>>()?;
            for k in 0..entries.len() {
                let next = entries[(k + 1) % entries.len()];
                pairs.push((entries[k].var(), next));
            }
            rest = body[close + 1..].trim_start();
        }
        SignedPermutation::from_pairs(&pairs)
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPermutation{}", self.to_cycle_notation())
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_notation())
    }
}

/// Parses a generator file: one permutation per line in cycle notation.
/// Blank lines and lines starting with `c` or `#` are skipped.
pub fn parse_generators(text: &str) -> Result<Vec<SignedPermutation>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with('c'))
        .map(SignedPermutation::parse_cycle_notation)
        .collect()
}

pub fn format_generators(generators: &[SignedPermutation]) -> String {
    generators
        .iter()
        .map(|g| format!("{}\n", g.to_cycle_notation()))
        .collect()
}

/// Generators together with the prefix they are admissible for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    prefix: Prefix,
    generators: Vec<SignedPermutation>,
}

impl GeneratorSet {
    pub fn new(prefix: Prefix, generators: Vec<SignedPermutation>) -> Result<Self> {
        for g in &generators {
            g.check_blocks(&prefix)?;
        }
        Ok(GeneratorSet { prefix, generators })
    }

    pub fn prefix(&self) -> &Prefix {
        &self.prefix
    }

    pub fn generators(&self) -> &[SignedPermutation] {
        &self.generators
    }

    pub fn closure(&self, cap: usize) -> Result<Vec<SignedPermutation>> {
        group_closure(&self.generators, cap)
    }
}

/// All elements of the group generated by `generators`, identity first, in
/// breadth-first order of word length.
pub fn group_closure(generators: &[SignedPermutation], cap: usize) -> Result<Vec<SignedPermutation>> {
    let mut seen: HashSet<SignedPermutation> = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    let id = SignedPermutation::identity();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        elements.push(g.clone());
        for h in generators {
            let gh = g.compose(h);
            if seen.insert(gh.clone()) {
                if seen.len() > cap {
                    return Err(Error::cap("group size", format!("more than {cap}"), cap));
                }
                queue.push_back(gh);
            }
        }
    }
    Ok(elements)
}

/// `{ g(σ) : g ∈ ⟨generators⟩ }`, in first-reached order.
pub fn orbit_of_assignment(
    generators: &[SignedPermutation],
    sigma: &Assignment,
    cap: usize,
) -> Result<Vec<Assignment>> {
    let group = group_closure(generators, cap)?;
    let mut seen = HashSet::new();
    let mut orbit = Vec::new();
    for g in &group {
        let image = g.apply_to_assignment(sigma)?;
        if seen.insert(image.clone()) {
            orbit.push(image);
        }
    }
    Ok(orbit)
}

/// Plain-text syntactic symmetry test modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryCheck {
    /// The image of the clause multiset equals the clause multiset.
    ClauseMultiset,
    /// Clause multiset first, then truth-table equivalence of the matrix
    /// and its image over at most `cap` variables.
    Exhaustive { cap: usize },
}

/// Whether `g` is a syntactic symmetry of `instance`. The clause-multiset
/// test is sufficient but not necessary.
pub fn is_syntactic_symmetry(g: &SignedPermutation, instance: &QbfInstance, check: SymmetryCheck) -> Result<bool> {
    g.check_blocks(instance.prefix())?;
    let original = instance.sorted_matrix();
    let mut image: Vec<Clause> = instance
        .matrix()
        .iter()
        .map(|c| g.apply_to_clause(c).sorted())
        .collect();
    image.sort();
    if image == original {
        return Ok(true);
    }
    match check {
        SymmetryCheck::ClauseMultiset => Ok(false),
        SymmetryCheck::Exhaustive { cap } => {
            let phi = instance.matrix_formula();
            let g_phi = g.apply_to_formula(&phi);
            crate::formula::equivalent(&phi, &g_phi, &instance.prefix().vars(), cap)
        }
    }
}

/// A map from variables to formulas, extended homomorphically to formulas.
/// Variables without an explicit image are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleMap {
    images: HashMap<Var, Formula>,
}

/// Why a map fails to be admissible for a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The image of `var` mentions `foreign`, which is unquantified or in a
    /// different quantifier block.
    ForeignVariable { var: Var, foreign: Var },
    /// Two assignments have the same image, so the map is not invertible.
    NotBijective { first: Assignment, second: Assignment },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ForeignVariable { var, foreign } => {
                write!(f, "image of {var} mentions {foreign} outside its quantifier block")
            }
            Violation::NotBijective { first, second } => {
                write!(f, "{first} and {second} have the same image")
            }
        }
    }
}

impl Violation {
    /// 1 for the evaluation-compatibility condition, 2 for the block condition.
    pub fn condition(&self) -> u8 {
        match self {
            Violation::NotBijective { .. } => 1,
            Violation::ForeignVariable { .. } => 2,
        }
    }
}

impl AdmissibleMap {
    pub fn new(images: impl IntoIterator<Item = (Var, Formula)>) -> Self {
        AdmissibleMap {
            images: images.into_iter().collect(),
        }
    }

    pub fn image(&self, var: Var) -> Formula {
        self.images.get(&var).cloned().unwrap_or(Formula::Var(var))
    }

    pub fn apply_to_formula(&self, phi: &Formula) -> Formula {
        phi.map_vars(&mut |v| self.images.get(&v).cloned())
    }

    /// `f(σ)(x) = [f(x)]_σ` over the domain of `sigma`.
    pub fn apply_to_assignment(&self, sigma: &Assignment) -> Result<Assignment> {
        let mut out = Assignment::new();
        for var in sigma.domain() {
            out.set(var, self.image(var).evaluate(sigma)?);
        }
        Ok(out)
    }

    /// Checks both admissibility conditions against `prefix`. The block
    /// condition is syntactic; compatibility with evaluation is verified by
    /// checking that `σ ↦ f(σ)` is a bijection on all total assignments,
    /// which requires `|X| ≤ cap`.
    pub fn check_admissible(&self, prefix: &Prefix, cap: usize) -> Result<Vec<Violation>> {
        let vars = prefix.vars();
        if vars.len() > cap || vars.len() > 30 {
            return Err(Error::cap(
                "variable count for admissibility check",
                vars.len(),
                cap.min(30),
            ));
        }
        let mut violations = Vec::new();
        let mut keys: Vec<&Var> = self.images.keys().collect();
        keys.sort();
        for &var in keys {
            for foreign in self.images[&var].vars() {
                if !prefix.same_block(var, foreign) {
                    violations.push(Violation::ForeignVariable { var, foreign });
                }
            }
        }
        if violations
            .iter()
            .any(|v| matches!(v, Violation::ForeignVariable { foreign, .. } if !prefix.contains(*foreign)))
        {
            // evaluation would hit unbound variables
            return Ok(violations);
        }
        let mut preimage: HashMap<u64, u64> = HashMap::new();
        for bits in 0..(1u64 << vars.len()) {
            let sigma = Assignment::from_bits(&vars, bits);
            let image = self.apply_to_assignment(&sigma)?.to_bits(&vars);
            if let Some(&other) = preimage.get(&image) {
                violations.push(Violation::NotBijective {
                    first: Assignment::from_bits(&vars, other),
                    second: sigma,
                });
                break;
            }
            preimage.insert(image, bits);
        }
        Ok(violations)
    }
}

impl From<&SignedPermutation> for AdmissibleMap {
    fn from(g: &SignedPermutation) -> Self {
        AdmissibleMap::new((0..g.degree()).map(|i| {
            let v = Var::from_index(i);
            (v, Formula::lit(g.image(v)))
        }))
    }
}
