//! QBF instances in prenex CNF: quantifier prefixes, clauses and cubes, and
//! the QDIMACS reader/writer plus the DNF sidecar format.
//!
//! The DNF sidecar mirrors QDIMACS: a `p dnf <vars> <cubes>` header, the
//! quantifier lines, then one cube per line terminated by `0`. Every line,
//! including the last, ends with `\n`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::io::Read;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Lit, Matrix, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn flip(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    fn letter(self) -> char {
        match self {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantifierBlock {
    pub quantifier: Quantifier,
    pub vars: Vec<Var>,
}

impl QuantifierBlock {
    pub fn new(quantifier: Quantifier, vars: Vec<Var>) -> Self {
        QuantifierBlock { quantifier, vars }
    }
}

/// A quantifier prefix. Blocks are maximal: adjacent blocks always carry
/// different quantifiers, and every variable occurs exactly once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Prefix {
    blocks: Vec<QuantifierBlock>,
    // block index per variable index, derived from `blocks`
    block_of: Vec<Option<usize>>,
}

impl Prefix {
    /// Merges same-quantifier neighbours and drops empty blocks. Fails if a
    /// variable is quantified twice.
    pub fn new(blocks: impl IntoIterator<Item = QuantifierBlock>) -> Result<Prefix> {
        let mut merged: Vec<QuantifierBlock> = Vec::new();
        for block in blocks {
            if block.vars.is_empty() {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.quantifier == block.quantifier => last.vars.extend(block.vars),
                _ => merged.push(block),
            }
        }
        let mut block_of = Vec::new();
        for (b, block) in merged.iter().enumerate() {
            for &v in &block.vars {
                let i = v.index();
                if block_of.len() <= i {
                    block_of.resize(i + 1, None);
                }
                if block_of[i].is_some() {
                    return Err(Error::Validation(format!("variable {} is quantified twice", v.id())));
                }
                block_of[i] = Some(b);
            }
        }
        Ok(Prefix {
            blocks: merged,
            block_of,
        })
    }

    pub fn from_sequence(seq: impl IntoIterator<Item = (Quantifier, Var)>) -> Result<Prefix> {
        Prefix::new(seq.into_iter().map(|(q, v)| QuantifierBlock::new(q, vec![v])))
    }

    /// Shorthand for tests and examples: `[(Forall, &[1]), (Exists, &[2, 3])]`.
    pub fn from_ids(blocks: &[(Quantifier, &[u32])]) -> Result<Prefix> {
        let mut out = Vec::with_capacity(blocks.len());
        for (q, ids) in blocks {
            let vars = ids
                .iter()
                .map(|&id| Var::new(id).ok_or_else(|| Error::Validation(format!("invalid variable id {id}"))))
                .collect::<Result<Vec<_>>>()?;
            out.push(QuantifierBlock::new(*q, vars));
        }
        Prefix::new(out)
    }

    pub fn blocks(&self) -> &[QuantifierBlock] {
        &self.blocks
    }

    /// Number of quantified variables.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.vars.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Variables in prefix order.
    pub fn vars(&self) -> Vec<Var> {
        self.iter().map(|(_, v)| v).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Quantifier, Var)> + '_ {
        self.blocks
            .iter()
            .flat_map(|b| b.vars.iter().map(move |&v| (b.quantifier, v)))
    }

    pub fn block_index(&self, var: Var) -> Option<usize> {
        self.block_of.get(var.index()).copied().flatten()
    }

    pub fn quantifier(&self, var: Var) -> Option<Quantifier> {
        self.block_index(var).map(|b| self.blocks[b].quantifier)
    }

    pub fn contains(&self, var: Var) -> bool {
        self.block_index(var).is_some()
    }

    pub fn same_block(&self, a: Var, b: Var) -> bool {
        match (self.block_index(a), self.block_index(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// Largest variable id in the prefix, 0 when empty.
    pub fn max_var(&self) -> u32 {
        self.iter().map(|(_, v)| v.id()).max().unwrap_or(0)
    }

    /// Same variables, every quantifier exchanged.
    pub fn flipped(&self) -> Prefix {
        Prefix {
            blocks: self
                .blocks
                .iter()
                .map(|b| QuantifierBlock::new(b.quantifier.flip(), b.vars.clone()))
                .collect(),
            block_of: self.block_of.clone(),
        }
    }

    /// Inserts `var`, quantified by `quantifier`, directly behind the block
    /// containing `anchor` (or in front of everything when `anchor` is
    /// `None`). When the neighbouring block already has that quantifier the
    /// variable joins it.
    pub fn insert_after(&self, anchor: Option<Var>, var: Var, quantifier: Quantifier) -> Result<Prefix> {
        let mut blocks = self.blocks.clone();
        match anchor {
            None => match blocks.first_mut() {
                Some(first) if first.quantifier == quantifier => first.vars.insert(0, var),
                _ => blocks.insert(0, QuantifierBlock::new(quantifier, vec![var])),
            },
            Some(anchor) => {
                let b = self
                    .block_index(anchor)
                    .ok_or_else(|| Error::Validation(format!("anchor variable {} is not quantified", anchor.id())))?;
                if blocks[b].quantifier == quantifier {
                    blocks[b].vars.push(var);
                } else if b + 1 < blocks.len() {
                    // alternation guarantees the next block has `quantifier`
                    blocks[b + 1].vars.insert(0, var);
                } else {
                    blocks.push(QuantifierBlock::new(quantifier, vec![var]));
                }
            }
        }
        Prefix::new(blocks)
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sym = match block.quantifier {
                Quantifier::Exists => 'E',
                Quantifier::Forall => 'A',
            };
            write!(f, "{sym}")?;
            for v in &block.vars {
                write!(f, " {}", v.id())?;
            }
        }
        Ok(())
    }
}

fn dedup_lits(lits: impl IntoIterator<Item = Lit>) -> (Vec<Lit>, bool) {
    let mut out: Vec<Lit> = Vec::new();
    let mut complementary = false;
    for l in lits {
        if out.contains(&l) {
            continue;
        }
        if out.contains(&!l) {
            complementary = true;
        }
        out.push(l);
    }
    (out, complementary)
}

/// A disjunction of literals. Duplicate literals are removed on
/// construction; a clause holding a complementary pair is a tautology.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        Clause {
            lits: dedup_lits(lits).0,
        }
    }

    pub fn from_dimacs(values: &[i32]) -> Clause {
        Clause::new(values.iter().filter_map(|&x| Lit::from_dimacs(x)))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|l| self.lits.contains(&!*l))
    }

    /// Literals in canonical order, for set-style comparisons.
    pub fn sorted(&self) -> Clause {
        let mut lits = self.lits.clone();
        lits.sort();
        Clause { lits }
    }

    pub fn map_lits(&self, f: impl FnMut(Lit) -> Lit) -> Clause {
        Clause::new(self.lits.iter().copied().map(f))
    }

    /// The cube that is the negation of this clause.
    pub fn negated(&self) -> Cube {
        Cube::new(self.lits.iter().map(|&l| !l))
    }

    fn partial(&self, sigma: &Assignment) -> Option<bool> {
        let mut undetermined = false;
        for &l in &self.lits {
            match sigma.lit_value(l) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => undetermined = true,
            }
        }
        (!undetermined).then_some(false)
    }
}

/// A conjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    lits: Vec<Lit>,
}

impl Cube {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Cube {
        Cube {
            lits: dedup_lits(lits).0,
        }
    }

    pub fn from_dimacs(values: &[i32]) -> Cube {
        Cube::new(values.iter().filter_map(|&x| Lit::from_dimacs(x)))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// A cube with a complementary pair can never be satisfied.
    pub fn is_contradiction(&self) -> bool {
        self.lits.iter().any(|l| self.lits.contains(&!*l))
    }

    pub fn negated(&self) -> Clause {
        Clause::new(self.lits.iter().map(|&l| !l))
    }

    fn partial(&self, sigma: &Assignment) -> Option<bool> {
        let mut undetermined = false;
        for &l in &self.lits {
            match sigma.lit_value(l) {
                Some(false) => return Some(false),
                Some(true) => {}
                None => undetermined = true,
            }
        }
        (!undetermined).then_some(true)
    }
}

impl Matrix for [Clause] {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        for c in self {
            let mut sat = false;
            for &l in &c.lits {
                if l.eval(sigma.get(l.var())?) {
                    sat = true;
                    break;
                }
            }
            if !sat {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        let mut undetermined = false;
        for c in self {
            match c.partial(sigma) {
                Some(false) => return Some(false),
                Some(true) => {}
                None => undetermined = true,
            }
        }
        (!undetermined).then_some(true)
    }

    fn mentions(&self, var: Var, sigma: &Assignment) -> bool {
        self.iter()
            .any(|c| c.lits.iter().any(|l| l.var() == var) && c.partial(sigma).is_none())
    }
}

impl Matrix for [Cube] {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        for c in self {
            let mut all = true;
            for &l in &c.lits {
                if !l.eval(sigma.get(l.var())?) {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        let mut undetermined = false;
        for c in self {
            match c.partial(sigma) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => undetermined = true,
            }
        }
        (!undetermined).then_some(false)
    }

    fn mentions(&self, var: Var, sigma: &Assignment) -> bool {
        self.iter()
            .any(|c| c.lits.iter().any(|l| l.var() == var) && c.partial(sigma).is_none())
    }
}

/// Non-structural information carried alongside an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub comments: Vec<String>,
    /// Matrix variables that were missing from the prefix and got bound by
    /// a synthetic outermost existential block.
    pub free_vars: Vec<Var>,
    pub warnings: Vec<String>,
}

/// A closed QBF in prenex CNF.
#[derive(Clone, Debug)]
pub struct QbfInstance {
    num_vars: u32,
    prefix: Prefix,
    matrix: Vec<Clause>,
    pub meta: Metadata,
}

/// Structural equality: variable count, prefix, matrix and comments.
/// Free-variable flags and parser warnings are not compared.
impl PartialEq for QbfInstance {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars
            && self.prefix == other.prefix
            && self.matrix == other.matrix
            && self.meta.comments == other.meta.comments
    }
}

impl Eq for QbfInstance {}

impl QbfInstance {
    /// Builds a closed instance. Tautological clauses are dropped; a matrix
    /// variable missing from the prefix is an error.
    pub fn new(prefix: Prefix, clauses: impl IntoIterator<Item = Clause>) -> Result<QbfInstance> {
        let matrix: Vec<Clause> = clauses.into_iter().filter(|c| !c.is_tautology()).collect();
        for c in &matrix {
            for l in c.lits() {
                if !prefix.contains(l.var()) {
                    return Err(Error::Validation(format!(
                        "matrix variable {} is not quantified",
                        l.var().id()
                    )));
                }
            }
        }
        let num_vars = prefix.max_var();
        Ok(QbfInstance {
            num_vars,
            prefix,
            matrix,
            meta: Metadata::default(),
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Raises the declared variable count (as a QDIMACS header would).
    pub fn with_num_vars(mut self, num_vars: u32) -> Self {
        self.num_vars = self.num_vars.max(num_vars);
        self
    }

    pub fn prefix(&self) -> &Prefix {
        &self.prefix
    }

    pub fn matrix(&self) -> &[Clause] {
        &self.matrix
    }

    /// Quantified variables that do not occur in the matrix.
    pub fn unused_vars(&self) -> Vec<Var> {
        let used: BTreeSet<Var> = self
            .matrix
            .iter()
            .flat_map(|c| c.lits().iter().map(|l| l.var()))
            .collect();
        self.prefix.vars().into_iter().filter(|v| !used.contains(v)).collect()
    }

    /// The matrix as a formula tree.
    pub fn matrix_formula(&self) -> Formula {
        Formula::cnf(self.matrix.iter().map(|c| c.lits()))
    }

    /// Clauses in canonical order, each with sorted literals.
    pub fn sorted_matrix(&self) -> Vec<Clause> {
        let mut m: Vec<Clause> = self.matrix.iter().map(Clause::sorted).collect();
        m.sort();
        m
    }
}

impl Matrix for QbfInstance {
    fn value(&self, sigma: &Assignment) -> Result<bool> {
        self.matrix.as_slice().value(sigma)
    }

    fn partial_value(&self, sigma: &Assignment) -> Option<bool> {
        self.matrix.as_slice().partial_value(sigma)
    }

    fn mentions(&self, var: Var, sigma: &Assignment) -> bool {
        self.matrix.as_slice().mentions(var, sigma)
    }
}

/// A DNF attached to a prefix: the cube half of a CNF/DNF pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfSidecar {
    pub prefix: Prefix,
    pub cubes: Vec<Cube>,
}

impl DnfSidecar {
    pub fn to_text(&self) -> Result<String> {
        serialize_dnf(&self.prefix, &self.cubes)
    }

    pub fn formula(&self) -> Formula {
        Formula::dnf(self.cubes.iter().map(|c| c.lits()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Cnf,
    Dnf,
}

struct Raw {
    num_vars: u32,
    declared: usize,
    blocks: Vec<QuantifierBlock>,
    rows: Vec<Vec<Lit>>,
    comments: Vec<String>,
    warnings: Vec<String>,
}

fn parse_raw(text: &str, kind: Kind) -> Result<Raw> {
    let mut header: Option<(u32, usize)> = None;
    let mut blocks = Vec::new();
    let mut rows: Vec<Vec<Lit>> = Vec::new();
    let mut comments = Vec::new();
    let mut warnings = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut pending_open = false;
    let mut max_seen = 0u32;
    let expected = match kind {
        Kind::Cnf => "cnf",
        Kind::Dnf => "dnf",
    };

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        // tokens with their 1-based column
        let tokens: Vec<(usize, &str)> = trimmed
            .split_whitespace()
            .map(|tok| (tok.as_ptr() as usize - line.as_ptr() as usize + 1, tok))
            .collect();
        let first = tokens[0].1;
        match first {
            "c" => {
                let body = trimmed[1..].strip_prefix(' ').unwrap_or(&trimmed[1..]);
                comments.push(body.to_string());
                continue;
            }
            "p" => {
                if header.is_some() {
                    return Err(Error::syntax(lineno, indent + 1, "duplicate problem line"));
                }
                if tokens.len() != 4 || tokens[1].1 != expected {
                    return Err(Error::syntax(
                        lineno,
                        indent + 1,
                        format!(
                            "expected `p {expected} <vars> <{}>`",
                            if kind == Kind::Cnf { "clauses" } else { "cubes" }
                        ),
                    ));
                }
                let nv = tokens[2].1.parse::<u32>().map_err(|_| {
                    Error::syntax(lineno, tokens[2].0, format!("invalid variable count `{}`", tokens[2].1))
                })?;
                let nc = tokens[3]
                    .1
                    .parse::<usize>()
                    .map_err(|_| Error::syntax(lineno, tokens[3].0, format!("invalid count `{}`", tokens[3].1)))?;
                header = Some((nv, nc));
                continue;
            }
            _ => {}
        }
        let Some((nv, _)) = header else {
            return Err(Error::syntax(lineno, indent + 1, "data before the problem line"));
        };
        let quantifier = match first {
            "a" => Some(Quantifier::Forall),
            "e" => Some(Quantifier::Exists),
            _ => None,
        };
        if let Some(q) = quantifier {
            if !rows.is_empty() || pending_open {
                return Err(Error::syntax(lineno, indent + 1, "quantifier line after matrix rows"));
            }
            let mut vars = Vec::new();
            let mut terminated = false;
            for &(col, tok) in &tokens[1..] {
                if terminated {
                    return Err(Error::syntax(lineno, col, "token after terminating 0"));
                }
                let value: i64 = tok
                    .parse()
                    .map_err(|_| Error::syntax(lineno, col, format!("invalid variable `{tok}`")))?;
                if value == 0 {
                    terminated = true;
                    continue;
                }
                if value < 0 || value > i32::MAX as i64 {
                    return Err(Error::syntax(lineno, col, format!("invalid variable `{tok}`")));
                }
                let var = Var::new(value as u32).expect("positive");
                if var.id() > nv {
                    warnings.push(format!(
                        "line {lineno}: variable {value} exceeds the declared count {nv}"
                    ));
                }
                max_seen = max_seen.max(var.id());
                vars.push(var);
            }
            if !terminated {
                return Err(Error::syntax(
                    lineno,
                    line.len() + 1,
                    "quantifier line is not terminated by 0",
                ));
            }
            blocks.push(QuantifierBlock::new(q, vars));
            continue;
        }
        for &(col, tok) in &tokens {
            if tok == "-0" || tok == "+0" {
                return Err(Error::syntax(lineno, col, "variable 0 inside a clause"));
            }
            let value: i64 = tok
                .parse()
                .map_err(|_| Error::syntax(lineno, col, format!("invalid literal `{tok}`")))?;
            if value == 0 {
                rows.push(std::mem::take(&mut pending));
                pending_open = false;
                continue;
            }
            if value.unsigned_abs() > i32::MAX as u64 {
                return Err(Error::syntax(lineno, col, format!("literal `{tok}` out of range")));
            }
            let lit = Lit::from_dimacs(value as i32).expect("nonzero in range");
            if lit.var().id() > nv {
                warnings.push(format!(
                    "line {lineno}: variable {} exceeds the declared count {nv}",
                    lit.var().id()
                ));
            }
            max_seen = max_seen.max(lit.var().id());
            pending.push(lit);
            pending_open = true;
        }
    }
    let Some((nv, declared)) = header else {
        return Err(Error::syntax(1, 1, "missing problem line"));
    };
    if pending_open {
        warnings.push("last row is not terminated by 0".to_string());
        rows.push(pending);
    }
    if rows.len() != declared {
        warnings.push(format!("header declares {declared} rows, found {}", rows.len()));
    }
    Ok(Raw {
        num_vars: nv.max(max_seen),
        declared,
        blocks,
        rows,
        comments,
        warnings,
    })
}

/// Parses QDIMACS text into a normalized instance.
///
/// Same-quantifier neighbour blocks are merged, duplicate literals removed
/// and tautological clauses dropped. Matrix variables missing from the
/// prefix are bound by an outermost existential block and listed in
/// `meta.free_vars`. A header/clause count mismatch only produces a warning.
pub fn parse_qdimacs(text: &str) -> Result<QbfInstance> {
    let raw = parse_raw(text, Kind::Cnf)?;
    let _ = raw.declared;
    let mut quantified: BTreeSet<Var> = BTreeSet::new();
    for b in &raw.blocks {
        for &v in &b.vars {
            if !quantified.insert(v) {
                return Err(Error::Validation(format!("variable {} is quantified twice", v.id())));
            }
        }
    }
    let free: BTreeSet<Var> = raw
        .rows
        .iter()
        .flatten()
        .map(|l| l.var())
        .filter(|v| !quantified.contains(v))
        .collect();
    let mut blocks = raw.blocks;
    if !free.is_empty() {
        blocks.insert(
            0,
            QuantifierBlock::new(Quantifier::Exists, free.iter().copied().collect()),
        );
    }
    let prefix = Prefix::new(blocks)?;
    let clauses = raw.rows.into_iter().map(Clause::new);
    let mut instance = QbfInstance::new(prefix, clauses)?.with_num_vars(raw.num_vars);
    let mut warnings = raw.warnings;
    if !free.is_empty() {
        warnings.push(format!(
            "free variables bound existentially: {}",
            free.iter().map(|v| v.id().to_string()).collect::<Vec<_>>().join(" ")
        ));
    }
    instance.meta = Metadata {
        comments: raw.comments,
        free_vars: free.into_iter().collect(),
        warnings,
    };
    Ok(instance)
}

pub fn read_qdimacs(mut reader: impl Read) -> Result<QbfInstance> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_qdimacs(&text)
}

fn write_prefix(out: &mut String, prefix: &Prefix) {
    for block in prefix.blocks() {
        out.push(block.quantifier.letter());
        for v in &block.vars {
            let _ = write!(out, " {}", v.id());
        }
        out.push_str(" 0\n");
    }
}

fn write_row(out: &mut String, lits: &[Lit]) {
    for l in lits {
        let _ = write!(out, "{} ", l.to_dimacs());
    }
    out.push_str("0\n");
}

/// Writes normalized QDIMACS. Output depends only on the instance value.
pub fn serialize_qdimacs(instance: &QbfInstance) -> String {
    let mut out = String::new();
    for c in &instance.meta.comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", instance.num_vars, instance.matrix.len());
    write_prefix(&mut out, &instance.prefix);
    for c in &instance.matrix {
        write_row(&mut out, c.lits());
    }
    out
}

/// Writes the DNF sidecar format; every cube variable must be quantified.
pub fn serialize_dnf(prefix: &Prefix, cubes: &[Cube]) -> Result<String> {
    let mut max_var = prefix.max_var();
    for cube in cubes {
        for l in cube.lits() {
            if !prefix.contains(l.var()) {
                return Err(Error::Validation(format!(
                    "cube variable {} is not quantified",
                    l.var().id()
                )));
            }
            max_var = max_var.max(l.var().id());
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "p dnf {} {}", max_var, cubes.len());
    write_prefix(&mut out, prefix);
    for cube in cubes {
        write_row(&mut out, cube.lits());
    }
    Ok(out)
}

/// Reads the DNF sidecar format back.
pub fn parse_dnf(text: &str) -> Result<DnfSidecar> {
    let raw = parse_raw(text, Kind::Dnf)?;
    let prefix = Prefix::new(raw.blocks)?;
    let cubes: Vec<Cube> = raw.rows.into_iter().map(Cube::new).collect();
    for cube in &cubes {
        for l in cube.lits() {
            if !prefix.contains(l.var()) {
                return Err(Error::Validation(format!(
                    "cube variable {} is not quantified",
                    l.var().id()
                )));
            }
        }
    }
    Ok(DnfSidecar { prefix, cubes })
}
