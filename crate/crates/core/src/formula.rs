//! Boolean formulas over a finite variable set, assignments, evaluation,
//! partial substitution and truth-table equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::num::{NonZeroI32, NonZeroU32};
use std::ops::Not;

use crate::error::{Error, Result};

/// Default variable cap for [`equivalent`].
pub const DEFAULT_EQUIVALENCE_CAP: usize = 20;

/// A propositional variable, numbered from 1 as in QDIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(NonZeroU32);

impl Var {
    /// Returns `None` for 0 and for ids that do not fit a DIMACS literal.
    pub fn new(id: u32) -> Option<Var> {
        if id > i32::MAX as u32 {
            return None;
        }
        NonZeroU32::new(id).map(Var)
    }

    pub fn id(self) -> u32 {
        self.0.get()
    }

    pub(crate) fn index(self) -> usize {
        self.0.get() as usize - 1
    }

    pub(crate) fn from_index(index: usize) -> Var {
        Var::new(index as u32 + 1).expect("variable index out of range")
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A signed variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit(NonZeroI32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        let id = var.id() as i32;
        let raw = if positive { id } else { -id };
        Lit(NonZeroI32::new(raw).expect("variable ids are nonzero"))
    }

    /// Parses a DIMACS-style signed integer; 0 is not a literal.
    pub fn from_dimacs(value: i32) -> Option<Lit> {
        if value == i32::MIN {
            return None;
        }
        NonZeroI32::new(value).map(Lit)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0.get()
    }

    pub fn var(self) -> Var {
        Var::new(self.0.get().unsigned_abs()).expect("literal magnitude is a valid variable")
    }

    pub fn is_positive(self) -> bool {
        self.0.get() > 0
    }

    /// Truth value of the literal when its variable takes `value`.
    pub fn eval(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(NonZeroI32::new(-self.0.get()).expect("negation of nonzero is nonzero"))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Literals order by variable first, positive before negative.
impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var(), !self.is_positive()).cmp(&(other.var(), !other.is_positive()))
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A (possibly partial) assignment of truth values with an explicit domain.
///
/// Values are stored densely by variable id; unset slots are outside the
/// domain. Trailing unset slots are trimmed so that equal assignments compare
/// equal regardless of how they were built.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, bool)>) -> Self {
        let mut sigma = Assignment::new();
        for (var, value) in pairs {
            sigma.set(var, value);
        }
        sigma
    }

    /// Builds a total assignment over `vars` from the bits of `bits`; the
    /// first variable reads the most significant of the `vars.len()` bits.
    pub fn from_bits(vars: &[Var], bits: u64) -> Self {
        let n = vars.len();
        Assignment::from_pairs(
            vars.iter()
                .enumerate()
                .map(|(i, &v)| (v, (bits >> (n - 1 - i)) & 1 == 1)),
        )
    }

    /// Inverse of [`Assignment::from_bits`]. Variables outside the domain read as 0.
    pub fn to_bits(&self, vars: &[Var]) -> u64 {
        vars.iter()
            .fold(0u64, |acc, &v| (acc << 1) | u64::from(self.value(v) == Some(true)))
    }

    pub fn set(&mut self, var: Var, value: bool) {
        let i = var.index();
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn unset(&mut self, var: Var) {
        let i = var.index();
        if i < self.values.len() {
            self.values[i] = None;
            while matches!(self.values.last(), Some(None)) {
                self.values.pop();
            }
        }
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.values.get(var.index()).copied().flatten()
    }

    /// Lookup that treats a variable outside the domain as an error.
    pub fn get(&self, var: Var) -> Result<bool> {
        self.value(var).ok_or(Error::UnboundVariable(var))
    }

    pub fn contains(&self, var: Var) -> bool {
        self.value(var).is_some()
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_some())
            .map(|(i, _)| Var::from_index(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| (Var::from_index(i), b)))
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.value(lit.var()).map(|b| lit.eval(b))
    }

    /// Restriction to the given variables.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Assignment {
        Assignment::from_pairs(vars.into_iter().filter_map(|&v| self.value(v).map(|b| (v, b))))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (var, value)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", var, if value { "T" } else { "F" })?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Iff,
    Implies,
    Xor,
}

impl BinaryOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BinaryOp::And => a && b,
            BinaryOp::Or => a || b,
            BinaryOp::Iff => a == b,
            BinaryOp::Implies => !a || b,
            BinaryOp::Xor => a != b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::And => "&",
            BinaryOp::Or => "|",
            BinaryOp::Iff => "<->",
            BinaryOp::Implies => "->",
            BinaryOp::Xor => "^",
        }
    }
}

/// An immutable Boolean formula tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(Var),
    Not(Box<Formula>),
    Binary(BinaryOp, Box<Formula>, Box<Formula>),
    /// n-ary conjunction; empty means true.
    And(Vec<Formula>),
    /// n-ary disjunction; empty means false.
    Or(Vec<Formula>),
}

impl Formula {
    pub fn top() -> Formula {
        Formula::Const(true)
    }

    pub fn bottom() -> Formula {
        Formula::Const(false)
    }

    pub fn var(var: Var) -> Formula {
        Formula::Var(var)
    }

    pub fn lit(lit: Lit) -> Formula {
        if lit.is_positive() {
            Formula::Var(lit.var())
        } else {
            Formula::Not(Box::new(Formula::Var(lit.var())))
        }
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn binary(op: BinaryOp, a: Formula, b: Formula) -> Formula {
        Formula::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::binary(BinaryOp::Iff, a, b)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::binary(BinaryOp::Implies, a, b)
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::binary(BinaryOp::Xor, a, b)
    }

    pub fn and2(a: Formula, b: Formula) -> Formula {
        Formula::binary(BinaryOp::And, a, b)
    }

    pub fn or2(a: Formula, b: Formula) -> Formula {
        Formula::binary(BinaryOp::Or, a, b)
    }

    pub fn all(children: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::And(children.into_iter().collect())
    }

    pub fn any(children: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::Or(children.into_iter().collect())
    }

    /// Conjunction of disjunctions of literals.
    pub fn cnf<'a, C>(clauses: impl IntoIterator<Item = C>) -> Formula
    where
        C: IntoIterator<Item = &'a Lit>,
    {
        Formula::all(
            clauses
                .into_iter()
                .map(|c| Formula::any(c.into_iter().map(|&l| Formula::lit(l)))),
        )
    }

    /// Disjunction of conjunctions of literals.
    pub fn dnf<'a, C>(cubes: impl IntoIterator<Item = C>) -> Formula
    where
        C: IntoIterator<Item = &'a Lit>,
    {
        Formula::any(
            cubes
                .into_iter()
                .map(|c| Formula::all(c.into_iter().map(|&l| Formula::lit(l)))),
        )
    }

    /// Variables occurring in the formula.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(v) => {
                out.insert(*v);
            }
            Formula::Not(a) => a.collect_vars(out),
            Formula::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Truth value under a total assignment.
    pub fn evaluate(&self, sigma: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => sigma.get(*v)?,
            Formula::Not(a) => !a.evaluate(sigma)?,
            Formula::Binary(op, a, b) => op.apply(a.evaluate(sigma)?, b.evaluate(sigma)?),
            Formula::And(cs) => {
                for c in cs {
                    if !c.evaluate(sigma)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(cs) => {
                for c in cs {
                    if c.evaluate(sigma)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Three-valued (Kleene) evaluation under a partial assignment. A
    /// `Some` result holds for every extension of `sigma`.
    pub fn partial_evaluate(&self, sigma: &Assignment) -> Option<bool> {
        match self {
            Formula::Const(b) => Some(*b),
            Formula::Var(v) => sigma.value(*v),
            Formula::Not(a) => a.partial_evaluate(sigma).map(|b| !b),
            Formula::Binary(op, a, b) => {
                let x = a.partial_evaluate(sigma);
                let y = b.partial_evaluate(sigma);
                match (op, x, y) {
                    (_, Some(x), Some(y)) => Some(op.apply(x, y)),
                    (BinaryOp::And, Some(false), _) | (BinaryOp::And, _, Some(false)) => Some(false),
                    (BinaryOp::Or, Some(true), _) | (BinaryOp::Or, _, Some(true)) => Some(true),
                    (BinaryOp::Implies, Some(false), _) | (BinaryOp::Implies, _, Some(true)) => Some(true),
                    _ => None,
                }
            }
            Formula::And(cs) => {
                let mut known = true;
                for c in cs {
                    match c.partial_evaluate(sigma) {
                        Some(false) => return Some(false),
                        Some(true) => {}
                        None => known = false,
                    }
                }
                known.then_some(true)
            }
            Formula::Or(cs) => {
                let mut known = true;
                for c in cs {
                    match c.partial_evaluate(sigma) {
                        Some(true) => return Some(true),
                        Some(false) => {}
                        None => known = false,
                    }
                }
                known.then_some(false)
            }
        }
    }

    /// Replaces every variable in the domain of `partial` by its value and
    /// folds constants, so that no variable of the domain survives.
    pub fn substitute(&self, partial: &Assignment) -> Formula {
        self.map_vars(&mut |v| partial.value(v).map(Formula::Const))
    }

    /// Simultaneous substitution: each variable for which `f` returns
    /// `Some` is replaced, then constants are folded.
    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Option<Formula>) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Var(v) => f(*v).unwrap_or(Formula::Var(*v)),
            Formula::Not(a) => fold_not(a.map_vars(f)),
            Formula::Binary(op, a, b) => fold_binary(*op, a.map_vars(f), b.map_vars(f)),
            Formula::And(cs) => fold_nary(true, cs.iter().map(|c| c.map_vars(f))),
            Formula::Or(cs) => fold_nary(false, cs.iter().map(|c| c.map_vars(f))),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::Binary(_, a, b) => 1 + a.size() + b.size(),
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::size).sum::<usize>(),
        }
    }
}

fn fold_not(a: Formula) -> Formula {
    match a {
        Formula::Const(b) => Formula::Const(!b),
        other => Formula::negate(other),
    }
}

fn fold_binary(op: BinaryOp, a: Formula, b: Formula) -> Formula {
    use Formula::Const;
    match (op, &a, &b) {
        (_, Const(x), Const(y)) => Const(op.apply(*x, *y)),
        (BinaryOp::And, Const(false), _) | (BinaryOp::And, _, Const(false)) => Const(false),
        (BinaryOp::And, Const(true), _) => b,
        (BinaryOp::And, _, Const(true)) => a,
        (BinaryOp::Or, Const(true), _) | (BinaryOp::Or, _, Const(true)) => Const(true),
        (BinaryOp::Or, Const(false), _) => b,
        (BinaryOp::Or, _, Const(false)) => a,
        (BinaryOp::Implies, Const(false), _) | (BinaryOp::Implies, _, Const(true)) => Const(true),
        (BinaryOp::Implies, Const(true), _) => b,
        (BinaryOp::Implies, _, Const(false)) => fold_not(a),
        (BinaryOp::Iff, Const(true), _) => b,
        (BinaryOp::Iff, _, Const(true)) => a,
        (BinaryOp::Iff, Const(false), _) => fold_not(b),
        (BinaryOp::Iff, _, Const(false)) => fold_not(a),
        (BinaryOp::Xor, Const(false), _) => b,
        (BinaryOp::Xor, _, Const(false)) => a,
        (BinaryOp::Xor, Const(true), _) => fold_not(b),
        (BinaryOp::Xor, _, Const(true)) => fold_not(a),
        _ => Formula::binary(op, a, b),
    }
}

fn fold_nary(conjunction: bool, children: impl Iterator<Item = Formula>) -> Formula {
    let mut kept = Vec::new();
    for c in children {
        match c {
            // absorbing element
            Formula::Const(b) if b != conjunction => return Formula::Const(b),
            Formula::Const(_) => {}
            other => kept.push(other),
        }
    }
    match kept.len() {
        0 => Formula::Const(conjunction),
        1 => kept.pop().expect("one element"),
        _ if conjunction => Formula::And(kept),
        _ => Formula::Or(kept),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(true) => write!(f, "T"),
            Formula::Const(false) => write!(f, "F"),
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Formula::And(cs) | Formula::Or(cs) => {
                let (sym, empty) = match self {
                    Formula::And(_) => (" & ", "T"),
                    _ => (" | ", "F"),
                };
                if cs.is_empty() {
                    return write!(f, "{empty}");
                }
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sym}")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Anything that can serve as the matrix of a QBF.
pub trait Matrix {
    /// Value under an assignment covering all matrix variables.
    fn value(&self, sigma: &Assignment) -> Result<bool>;

    /// Kleene value under a partial assignment; `None` when undetermined.
    fn partial_value(&self, sigma: &Assignment) -> Option<bool>;

    /// False only if the value under every extension of `sigma` is
    /// independent of `var`. The default never claims independence.
    fn mentions(&self, _var: Var, _sigma: &Assignment) -> bool {
        true
    }
}

impl Matrix for Formula {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        self.evaluate(sigma)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        self.partial_evaluate(sigma)
    }
}

impl<M: Matrix + ?Sized> Matrix for &M {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        (**self).value(sigma)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        (**self).partial_value(sigma)
    }

    fn mentions(&self, var: Var, sigma: &Assignment) -> bool {
        (**self).mentions(var, sigma)
    }
}

/// Truth-table equivalence over `vars`. Both formulas must only mention
/// variables from `vars`; otherwise evaluation reports the unbound variable.
pub fn equivalent(phi: &Formula, psi: &Formula, vars: &[Var], cap: usize) -> Result<bool> {
    if vars.len() > cap || vars.len() > 63 {
        return Err(Error::cap("equivalence variable count", vars.len(), cap.min(63)));
    }
    for bits in 0..(1u64 << vars.len()) {
        let sigma = Assignment::from_bits(vars, bits);
        if phi.evaluate(&sigma)? != psi.evaluate(&sigma)? {
            return Ok(false);
        }
    }
    Ok(true)
}
