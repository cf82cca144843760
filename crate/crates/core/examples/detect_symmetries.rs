//! Syntactic symmetry detection through colored graph automorphisms.

use std::error::Error;

use qsym::detect::{build_symmetry_graph, detect_symmetries, DetectOptions, GraphOptions};
use qsym::group::{group_closure, is_syntactic_symmetry, SymmetryCheck};
use qsym::qdimacs::parse_qdimacs;

const INSTANCE: &str = "c (x <-> a) & (y <-> b)
p cnf 4 4
a 1 2 0
e 3 4 0
-1 3 0
1 -3 0
-2 4 0
2 -4 0
";

pub fn run() -> Result<(), Box<dyn Error>> {
    let instance = parse_qdimacs(INSTANCE)?;
    let graph = build_symmetry_graph(&instance, GraphOptions::default());
    println!(
        "graph: {} vertices, {} edges",
        graph.graph.vertex_count(),
        graph.graph.edge_count()
    );
    let collapsed = build_symmetry_graph(&instance, GraphOptions { collapse_binary: true });
    println!(
        "with binary clauses as edges: {} vertices, {} edges",
        collapsed.graph.vertex_count(),
        collapsed.graph.edge_count()
    );

    let detection = detect_symmetries(&instance, DetectOptions::default());
    println!("complete: {}, search nodes: {}", detection.complete, detection.nodes);
    for g in &detection.generators {
        let ok = is_syntactic_symmetry(g, &instance, SymmetryCheck::ClauseMultiset)?;
        println!("  {g}  symmetry: {ok}");
    }
    let group = group_closure(&detection.generators, 1000)?;
    println!("group order {}", group.len());

    let tight = detect_symmetries(
        &instance,
        DetectOptions {
            budget: 1,
            ..DetectOptions::default()
        },
    );
    println!(
        "budget 1: complete {}, {} generators",
        tight.complete,
        tight.generators.len()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
