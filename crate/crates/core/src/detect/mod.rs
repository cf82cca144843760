//! Symmetry detection through automorphisms of the literal/clause graph.

mod graph;
mod search;

pub use graph::{build_symmetry_graph, ColoredGraph, GraphOptions, SymmetryGraph, Vertex};
pub use search::{color_partition, find_automorphisms, refine, AutomorphismSearch, Partition, DEFAULT_BUDGET};

use crate::formula::Lit;
use crate::group::{is_syntactic_symmetry, SignedPermutation, SymmetryCheck};
use crate::qdimacs::QbfInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectOptions {
    pub graph: GraphOptions,
    pub budget: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            graph: GraphOptions::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Detection {
    pub generators: Vec<SignedPermutation>,
    /// False when the search budget ran out; generators are still sound.
    pub complete: bool,
    pub warnings: Vec<String>,
    pub nodes: usize,
}

/// Converts vertex permutations of `graph` to signed permutations.
///
/// A permutation must send the two literal vertices of each variable to the
/// two literal vertices of one variable; others are dropped with a warning.
/// Results that are the identity on literals are dropped silently, and every
/// kept result is checked to be a syntactic symmetry of `instance`.
pub fn to_signed_permutations(
    perms: &[Vec<usize>],
    graph: &SymmetryGraph,
    instance: &QbfInstance,
) -> (Vec<SignedPermutation>, Vec<String>) {
    let mut out: Vec<SignedPermutation> = Vec::new();
    let mut warnings = Vec::new();
    let vars = instance.prefix().vars();
    'perms: for (k, perm) in perms.iter().enumerate() {
        let mut pairs = Vec::with_capacity(vars.len());
        for &x in &vars {
            let image_of = |lit: Lit| match graph.graph.kind(perm[graph.literal_vertex(lit).unwrap()]) {
                Vertex::Literal(l) => Some(l),
                Vertex::Clause(_) => None,
            };
            match (image_of(x.positive()), image_of(x.negative())) {
                (Some(p), Some(n)) if n == !p => pairs.push((x, p)),
                _ => {
                    warnings.push(format!(
                        "discarded automorphism {k}: literals of {x} do not map to one variable"
                    ));
                    continue 'perms;
                }
            }
        }
        let g = match SignedPermutation::from_pairs(&pairs) {
            Ok(g) => g,
            Err(e) => {
                warnings.push(format!("discarded automorphism {k}: {e}"));
                continue;
            }
        };
        if g.is_identity() || out.contains(&g) {
            continue;
        }
        match is_syntactic_symmetry(&g, instance, SymmetryCheck::ClauseMultiset) {
            Ok(true) => out.push(g),
            Ok(false) => warnings.push(format!("discarded {g}: not a symmetry of the clause multiset")),
            Err(e) => warnings.push(format!("discarded {g}: {e}")),
        }
    }
    (out, warnings)
}

/// Builds the graph, searches it, and converts the result.
pub fn detect_symmetries(instance: &QbfInstance, options: DetectOptions) -> Detection {
    let graph = build_symmetry_graph(instance, options.graph);
    let search = find_automorphisms(&graph.graph, options.budget);
    let (generators, warnings) = to_signed_permutations(&search.generators, &graph, instance);
    Detection {
        generators,
        complete: search.complete,
        warnings,
        nodes: search.nodes,
    }
}
