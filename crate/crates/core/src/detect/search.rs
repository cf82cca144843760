//! Individualization/refinement search for graph automorphisms.
//!
//! The first path down the search tree fixes a reference leaf. Every other
//! branch is searched for a leaf that differs from the reference by an
//! automorphism. Branches at a level are skipped when the generators found
//! so far already map the first-path vertex onto them.

use super::graph::ColoredGraph;

/// Ordered partition of the vertex set.
pub type Partition = Vec<Vec<usize>>;

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismSearch {
    /// Vertex permutations, `perm[v]` is the image of `v`. Never the identity.
    pub generators: Vec<Vec<usize>>,
    /// False when the node budget ran out before the tree was covered.
    pub complete: bool,
    pub nodes: usize,
}

/// Partition by color, cells ordered by color value.
pub fn color_partition(graph: &ColoredGraph) -> Partition {
    let mut by_color: Vec<(u32, usize)> = (0..graph.vertex_count()).map(|v| (graph.color(v), v)).collect();
    by_color.sort_unstable();
    let mut cells: Partition = Vec::new();
    let mut last = None;
    for (c, v) in by_color {
        if last != Some(c) {
            cells.push(Vec::new());
            last = Some(c);
        }
        cells.last_mut().unwrap().push(v);
    }
    cells
}

/// Equitable refinement: cells are split by the multiset of neighbouring
/// cells until nothing changes. Sub-cells replace their parent in place,
/// ordered by that multiset, so the result is isomorphism invariant.
pub fn refine(graph: &ColoredGraph, partition: &Partition) -> Partition {
    let mut cells = partition.clone();
    let mut cell_of = vec![0usize; graph.vertex_count()];
    loop {
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut next: Partition = Vec::with_capacity(cells.len());
        let mut split = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut sig: Vec<usize> = graph.neighbors(v).iter().map(|&w| cell_of[w]).collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let start = next.len();
            for (i, (sig, v)) in keyed.iter().enumerate() {
                if i == 0 || *sig != keyed[i - 1].0 {
                    next.push(Vec::new());
                }
                next.last_mut().unwrap().push(*v);
            }
            split |= next.len() - start > 1;
        }
        cells = next;
        if !split {
            return cells;
        }
    }
}

fn individualize(partition: &Partition, cell: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(partition.len() + 1);
    out.extend_from_slice(&partition[..cell]);
    out.push(vec![v]);
    out.push(partition[cell].iter().copied().filter(|&w| w != v).collect());
    out.extend_from_slice(&partition[cell + 1..]);
    out
}

fn target_cell(partition: &Partition) -> Option<usize> {
    partition.iter().position(|c| c.len() > 1)
}

fn shape(partition: &Partition) -> Vec<usize> {
    partition.iter().map(Vec::len).collect()
}

struct Searcher<'a> {
    graph: &'a ColoredGraph,
    budget: usize,
    nodes: usize,
    // shapes along the first path, by depth
    reference_shapes: Vec<Vec<usize>>,
    reference_leaf: Vec<usize>,
    generators: Vec<Vec<usize>>,
}

impl Searcher<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.budget
    }

    /// Depth-first search below `partition` (at `depth`) for a leaf
    /// equivalent to the reference leaf. `None` means the budget ran out.
    fn find_equivalent(&mut self, partition: Partition, depth: usize) -> Option<Option<Vec<usize>>> {
        if self.reference_shapes.get(depth) != Some(&shape(&partition)) {
            return Some(None);
        }
        let Some(t) = target_cell(&partition) else {
            let leaf: Vec<usize> = partition.iter().map(|c| c[0]).collect();
            let mut perm = vec![0; leaf.len()];
            for (i, &v) in self.reference_leaf.iter().enumerate() {
                perm[v] = leaf[i];
            }
            return Some(self.graph.is_automorphism(&perm).then_some(perm));
        };
        for &w in &partition[t] {
            if !self.tick() {
                return None;
            }
            let child = refine(self.graph, &individualize(&partition, t, w));
            if let Some(found) = self.find_equivalent(child, depth + 1)? {
                return Some(Some(found));
            }
        }
        Some(None)
    }
}

struct Orbits(Vec<usize>);

impl Orbits {
    fn new(n: usize, generators: &[Vec<usize>]) -> Self {
        let mut o = Orbits((0..n).collect());
        for g in generators {
            o.add(g);
        }
        o
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn add(&mut self, g: &[usize]) {
        for (v, &w) in g.iter().enumerate() {
            let (a, b) = (self.find(v), self.find(w));
            if a != b {
                self.0[a.max(b)] = a.min(b);
            }
        }
    }
}

/// Searches for a generating set of the automorphism group of `graph`,
/// expanding at most `budget` search nodes.
pub fn find_automorphisms(graph: &ColoredGraph, budget: usize) -> AutomorphismSearch {
    let n = graph.vertex_count();
    let root = refine(graph, &color_partition(graph));

    // first path
    let mut path: Vec<(Partition, usize)> = Vec::new();
    let mut current = root;
    let mut shapes = Vec::new();
    let mut nodes = 1;
    while let Some(t) = target_cell(&current) {
        shapes.push(shape(&current));
        let v = current[t][0];
        let child = refine(graph, &individualize(&current, t, v));
        path.push((current, t));
        current = child;
        nodes += 1;
    }
    shapes.push(shape(&current));
    let leaf: Vec<usize> = current.iter().map(|c| c[0]).collect();

    let mut s = Searcher {
        graph,
        budget,
        nodes,
        reference_shapes: shapes,
        reference_leaf: leaf,
        generators: Vec::new(),
    };
    let mut complete = true;
    'levels: for depth in (0..path.len()).rev() {
        let (partition, t) = &path[depth];
        let first = partition[*t][0];
        let mut orbits = Orbits::new(n, &s.generators);
        for &w in &partition[*t][1..] {
            if orbits.find(w) == orbits.find(first) {
                continue;
            }
            if !s.tick() {
                complete = false;
                break 'levels;
            }
            let child = refine(graph, &individualize(partition, *t, w));
            match s.find_equivalent(child, depth + 1) {
                None => {
                    complete = false;
                    break 'levels;
                }
                Some(Some(g)) => {
                    orbits.add(&g);
                    s.generators.push(g);
                }
                Some(None) => {}
            }
        }
    }
    AutomorphismSearch {
        generators: s.generators,
        complete,
        nodes: s.nodes,
    }
}
