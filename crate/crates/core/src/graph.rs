//! Associated graph of a non-negative matrix, its strongly connected
//! components, the condensation DAG, and the set of components reachable
//! from the support of a weight vector.

use std::collections::BTreeSet;

use crate::matrix::NonnegMatrix;

/// Directed graph with an edge `i -> j` iff `A[i, j] > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    adjacency: Vec<Vec<usize>>,
}

impl DiGraph {
    pub fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        DiGraph { adjacency }
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(&j)
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }
}

pub fn associated_graph(a: &NonnegMatrix) -> DiGraph {
    DiGraph {
        adjacency: (0..a.dim())
            .map(|i| a.row(i).filter(|&(_, v)| v > 0.0).map(|(j, _)| j).collect())
            .collect(),
    }
}

/// SCC partition in topological order: every condensation edge `(a, b)`
/// has `a < b`. Nodes inside a component are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub dag_edges: BTreeSet<(usize, usize)>,
    /// Components reachable from a source support, once computed.
    pub reachable: Option<BTreeSet<usize>>,
}

impl ComponentDecomposition {
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Condensation DAG as a graph over component ids.
    pub fn condensation(&self) -> DiGraph {
        let mut adjacency = vec![Vec::new(); self.components.len()];
        for &(a, b) in &self.dag_edges {
            adjacency[a].push(b);
        }
        DiGraph { adjacency }
    }

    /// Sets `reachable` from the support of `u` and returns it.
    pub fn with_reachable(mut self, u: &[f64]) -> Self {
        self.reachable = Some(reachable_components(&self, u));
        self
    }
}

/// Tarjan's algorithm, iterative so deep chains do not overflow the stack.
pub fn strongly_connected_components(graph: &DiGraph) -> ComponentDecomposition {
    const UNVISITED: usize = usize::MAX;
    let n = graph.num_nodes();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    // Tarjan emits components sink-first
    let mut reverse_topo: Vec<Vec<usize>> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if let Some(&w) = graph.successors(v).get(*edge) {
                *edge += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                reverse_topo.push(component);
            }
        }
    }

    reverse_topo.reverse();
    let components = reverse_topo;
    let mut component_of = vec![0; n];
    for (c, nodes) in components.iter().enumerate() {
        for &v in nodes {
            component_of[v] = c;
        }
    }
    let mut dag_edges = BTreeSet::new();
    for v in 0..n {
        for &w in graph.successors(v) {
            let (a, b) = (component_of[v], component_of[w]);
            if a != b {
                debug_assert!(a < b, "condensation edge against topological order");
                dag_edges.insert((a, b));
            }
        }
    }
    ComponentDecomposition {
        component_of,
        components,
        dag_edges,
        reachable: None,
    }
}

/// Components reachable (including by zero-length paths) from nodes `i`
/// with `u[i] > 0`.
pub fn reachable_components(decomp: &ComponentDecomposition, u: &[f64]) -> BTreeSet<usize> {
    assert_eq!(u.len(), decomp.component_of.len(), "weight vector length");
    let mut hit = vec![false; decomp.num_components()];
    for (i, &w) in u.iter().enumerate() {
        if w > 0.0 {
            hit[decomp.component_of[i]] = true;
        }
    }
    // edges go forward in topological order, so one sweep suffices
    for &(a, b) in &decomp.dag_edges {
        if hit[a] {
            hit[b] = true;
        }
    }
    (0..hit.len()).filter(|&c| hit[c]).collect()
}

/// Principal submatrix on `nodes` (sorted into index order).
pub fn component_submatrix(a: &NonnegMatrix, nodes: &[usize]) -> NonnegMatrix {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    a.principal_submatrix(&sorted)
}
