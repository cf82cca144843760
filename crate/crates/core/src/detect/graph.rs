use std::collections::HashMap;

use crate::formula::{Lit, Var};
use crate::qdimacs::QbfInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Literal(Lit),
    /// Index into the instance matrix.
    Clause(usize),
}

/// Simple undirected graph with integer vertex colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    colors: Vec<u32>,
    adjacency: Vec<Vec<usize>>,
    kinds: Vec<Vertex>,
    edges: usize,
}

impl ColoredGraph {
    pub fn new(colors: Vec<u32>, kinds: Vec<Vertex>) -> Self {
        assert_eq!(colors.len(), kinds.len());
        let adjacency = vec![Vec::new(); colors.len()];
        ColoredGraph {
            colors,
            adjacency,
            kinds,
            edges: 0,
        }
    }

    /// Adds `{a, b}` unless present or a loop. Returns whether it was added.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        match self.adjacency[a].binary_search(&b) {
            Ok(_) => false,
            Err(i) => {
                self.adjacency[a].insert(i, b);
                let j = self.adjacency[b].binary_search(&a).unwrap_err();
                self.adjacency[b].insert(j, a);
                self.edges += 1;
                true
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn kind(&self, v: usize) -> Vertex {
        self.kinds[v]
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// True when `perm` (vertex `v` goes to `perm[v]`) preserves colors and
    /// adjacency.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.vertex_count() {
            return false;
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        (0..perm.len()).all(|v| {
            self.colors[v] == self.colors[perm[v]]
                && self.adjacency[v].len() == self.adjacency[perm[v]].len()
                && self.adjacency[v].iter().all(|&w| self.has_edge(perm[v], perm[w]))
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GraphOptions {
    /// Encode binary clauses as a direct edge between their literals
    /// instead of a clause vertex.
    pub collapse_binary: bool,
}

/// The literal/clause incidence graph of an instance.
#[derive(Clone, Debug)]
pub struct SymmetryGraph {
    pub graph: ColoredGraph,
    literal_vertex: HashMap<Lit, usize>,
}

impl SymmetryGraph {
    pub fn literal_vertex(&self, lit: Lit) -> Option<usize> {
        self.literal_vertex.get(&lit).copied()
    }
}

/// Two vertices per quantified variable joined by an edge, colored by
/// quantifier block, plus one vertex per clause joined to its literals.
/// Clause vertices share a color no block uses.
pub fn build_symmetry_graph(instance: &QbfInstance, options: GraphOptions) -> SymmetryGraph {
    let prefix = instance.prefix();
    let vars: Vec<Var> = prefix.vars();
    let clause_color = prefix.blocks().len() as u32;

    let mut colors = Vec::new();
    let mut kinds = Vec::new();
    let mut literal_vertex = HashMap::new();
    for &v in &vars {
        let block = prefix.block_index(v).expect("prefix variable") as u32;
        for lit in [v.positive(), v.negative()] {
            literal_vertex.insert(lit, kinds.len());
            colors.push(block);
            kinds.push(Vertex::Literal(lit));
        }
    }
    let mut clause_vertices = Vec::new();
    for (i, clause) in instance.matrix().iter().enumerate() {
        if options.collapse_binary && clause.len() == 2 {
            continue;
        }
        clause_vertices.push((kinds.len(), i));
        colors.push(clause_color);
        kinds.push(Vertex::Clause(i));
    }

    let mut graph = ColoredGraph::new(colors, kinds);
    for &v in &vars {
        graph.add_edge(literal_vertex[&v.positive()], literal_vertex[&v.negative()]);
    }
    if options.collapse_binary {
        for clause in instance.matrix().iter().filter(|c| c.len() == 2) {
            let l = clause.lits();
            graph.add_edge(literal_vertex[&l[0]], literal_vertex[&l[1]]);
        }
    }
    for (vertex, i) in clause_vertices {
        for lit in instance.matrix()[i].lits() {
            graph.add_edge(vertex, literal_vertex[lit]);
        }
    }
    SymmetryGraph { graph, literal_vertex }
}
