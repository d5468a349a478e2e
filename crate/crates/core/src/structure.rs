//! Strongly connected components, the condensation DAG, upstream
//! subnetworks and per-component periods.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, MultiGraph, NodeId, Subgraph};

/// Partition of the node set into strongly connected components.
///
/// Components are numbered in a topological order of the condensation:
/// an edge between distinct components always goes from a lower to a
/// higher index. Ties are broken by the smallest node index in each
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Node sets, each sorted by index.
    pub components: Vec<Vec<NodeId>>,
    pub component_of: Vec<usize>,
    pub condensation_edges: BTreeSet<(usize, usize)>,
    pub topo_order: Vec<usize>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// A component is trivial when it is a single node without a self-loop.
    pub fn is_trivial(&self, g: &MultiGraph, component: usize) -> bool {
        let nodes = &self.components[component];
        nodes.len() == 1 && !g.has_self_loop(nodes[0])
    }

    pub fn periods(&self, g: &MultiGraph) -> Vec<SccPeriod> {
        (0..self.len())
            .map(|c| SccPeriod {
                component: c,
                h: period_of_component(g, &self.components[c]),
            })
            .collect()
    }

    /// Components that have an edge into `component`.
    pub fn predecessors(&self, component: usize) -> impl Iterator<Item = usize> + '_ {
        self.condensation_edges
            .iter()
            .filter(move |&&(_, t)| t == component)
            .map(|&(s, _)| s)
    }
}

/// Tarjan's algorithm, iterative so that long chains do not overflow the
/// call stack.
fn tarjan(g: &MultiGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // (node, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(NodeId(v));
            if *pos < succ.len() {
                let w = succ[*pos].0;
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

pub fn scc_decompose(g: &MultiGraph) -> SccDecomposition {
    let raw = tarjan(g);
    let k = raw.len();
    let mut raw_of = vec![0usize; g.node_count()];
    for (c, comp) in raw.iter().enumerate() {
        for &v in comp {
            raw_of[v] = c;
        }
    }
    let mut raw_edges = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (raw_of[e.source.0], raw_of[e.target.0]);
        if a != b {
            raw_edges.insert((a, b));
        }
    }

    // Kahn's algorithm, always releasing the ready component with the
    // smallest minimum node index.
    let mut indegree = vec![0usize; k];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in &raw_edges {
        indegree[b] += 1;
        out[a].push(b);
    }
    let key = |c: usize| raw[c][0];
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indegree[c] == 0)
        .map(|c| Reverse((key(c), c)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &d in &out[c] {
            indegree[d] -= 1;
            if indegree[d] == 0 {
                ready.push(Reverse((key(d), d)));
            }
        }
    }
    debug_assert_eq!(order.len(), k, "condensation must be acyclic");

    let mut renumber = vec![0usize; k];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let components: Vec<Vec<NodeId>> = order
        .iter()
        .map(|&c| raw[c].iter().map(|&v| NodeId(v)).collect())
        .collect();
    let component_of = raw_of.iter().map(|&c| renumber[c]).collect();
    let condensation_edges = raw_edges.into_iter().map(|(a, b)| (renumber[a], renumber[b])).collect();
    SccDecomposition {
        components,
        component_of,
        condensation_edges,
        topo_order: (0..k).collect(),
    }
}

/// Reverse-reachability closure of a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpstreamSet {
    pub root: NodeId,
    /// Sorted parent node ids.
    pub nodes: Vec<NodeId>,
    pub subgraph: Subgraph,
    /// Parent components contained in the set, in topological order.
    pub scc_chain: Vec<usize>,
}

impl UpstreamSet {
    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }
}

/// Nodes with a walk to `root`, including `root` itself, sorted by index.
pub fn upstream_nodes(g: &MultiGraph, root: NodeId) -> Result<Vec<NodeId>> {
    g.check_node(root)?;
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::from([root.0]);
    seen[root.0] = true;
    while let Some(v) = queue.pop_front() {
        for &(u, _) in g.predecessors(NodeId(v)) {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    Ok((0..g.node_count()).filter(|&v| seen[v]).map(NodeId).collect())
}

/// Upstream subnetwork of `root`, reusing an existing decomposition of `g`.
pub fn upstream_with(g: &MultiGraph, scc: &SccDecomposition, root: NodeId) -> Result<UpstreamSet> {
    let nodes = upstream_nodes(g, root)?;
    let subgraph = induced_subgraph(g, &nodes)?;
    let chain: BTreeSet<usize> = nodes.iter().map(|v| scc.component_of[v.0]).collect();
    Ok(UpstreamSet {
        root,
        nodes,
        subgraph,
        scc_chain: chain.into_iter().collect(),
    })
}

pub fn upstream(g: &MultiGraph, root: NodeId) -> Result<UpstreamSet> {
    upstream_with(g, &scc_decompose(g), root)
}

/// Period of a strongly connected component; `h = 0` marks a single node
/// without a self-loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SccPeriod {
    pub component: usize,
    pub h: u64,
}

/// Period of the strongly connected node set `nodes`.
///
/// Levels are assigned by BFS inside the set; the period is the gcd of
/// `level(u) + 1 - level(v)` over all internal edges `u -> v`.
pub fn scc_period(g: &MultiGraph, nodes: &[NodeId]) -> Result<u64> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("empty node set".into()));
    }
    for &v in nodes {
        g.check_node(v)?;
    }
    let mut inside = vec![false; g.node_count()];
    for &v in nodes {
        inside[v.0] = true;
    }
    let reach = |forward: bool| -> usize {
        let mut seen = vec![false; g.node_count()];
        let mut queue = VecDeque::from([nodes[0].0]);
        seen[nodes[0].0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            let nbrs = if forward {
                g.successors(NodeId(v))
            } else {
                g.predecessors(NodeId(v))
            };
            for &(w, _) in nbrs {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    };
    let distinct: BTreeSet<NodeId> = nodes.iter().copied().collect();
    if reach(true) != distinct.len() || reach(false) != distinct.len() {
        return Err(Error::NotStronglyConnected);
    }
    Ok(period_of_component(g, nodes))
}

fn period_of_component(g: &MultiGraph, nodes: &[NodeId]) -> u64 {
    let n = g.node_count();
    let mut inside = vec![false; n];
    for &v in nodes {
        inside[v.0] = true;
    }
    let mut level = vec![i64::MIN; n];
    let start = nodes[0].0;
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in g.successors(NodeId(v)) {
            if inside[w] && level[w] == i64::MIN {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut h: i64 = 0;
    for &v in nodes {
        for &(w, _) in g.successors(v) {
            if inside[w] {
                h = h.gcd(&(level[v.0] + 1 - level[w]));
            }
        }
    }
    h.unsigned_abs()
}

/// Node order grouping the upstream set by component, components in
/// topological order. Under this order the subgraph's adjacency matrix is
/// block upper triangular with irreducible (or trivial) diagonal blocks.
pub fn block_triangular_order(u: &UpstreamSet, scc: &SccDecomposition) -> Vec<NodeId> {
    u.scc_chain
        .iter()
        .flat_map(|&c| scc.components[c].iter().copied())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::walks::walk_counts;
    use proptest::prelude::*;

    fn ids(v: &[usize]) -> Vec<NodeId> {
        v.iter().map(|&k| NodeId(k)).collect()
    }

    fn left() -> MultiGraph {
        parse_edge_list("1 1\n1 2\n2 1\n2 3\n3 3 2").unwrap()
    }

    fn right() -> MultiGraph {
        parse_edge_list("1 1 2\n1 3\n2 2\n2 3\n3 2").unwrap()
    }

    fn six_node() -> MultiGraph {
        crate::fixtures::six_node()
    }

    #[test]
    fn left_network_components() {
        let scc = scc_decompose(&left());
        assert_eq!(scc.components, vec![ids(&[0, 1]), ids(&[2])]);
        assert_eq!(scc.condensation_edges, BTreeSet::from([(0, 1)]));
    }

    #[test]
    fn three_node_feedforward_has_singletons() {
        let g = parse_edge_list("1 1 2\n2 2\n3 1\n3 2").unwrap();
        let scc = scc_decompose(&g);
        assert_eq!(scc.len(), 3);
        assert!(scc.components.iter().all(|c| c.len() == 1));
        // node 3 feeds both others, so it comes first
        assert_eq!(scc.components[0], ids(&[2]));
    }

    #[test]
    fn chain_condensation_is_the_chain() {
        let g = parse_edge_list("1 2\n2 3").unwrap();
        let scc = scc_decompose(&g);
        assert_eq!(scc.components, vec![ids(&[0]), ids(&[1]), ids(&[2])]);
        assert_eq!(scc.condensation_edges, BTreeSet::from([(0, 1), (1, 2)]));
        assert!((0..3).all(|c| scc.is_trivial(&g, c)));
    }

    #[test]
    fn upstream_examples() {
        let g = left();
        let u3 = upstream(&g, NodeId(2)).unwrap();
        assert_eq!(u3.nodes, ids(&[0, 1, 2]));
        let u1 = upstream(&g, NodeId(0)).unwrap();
        assert_eq!(u1.nodes, ids(&[0, 1]));

        let r = right();
        let u = upstream(&r, NodeId(0)).unwrap();
        assert_eq!(u.nodes, ids(&[0]));
        assert_eq!(u.subgraph.graph.adjacency_matrix().rows(), vec![vec![2]]);

        let iso = parse_edge_list("a\nb c").unwrap();
        assert_eq!(upstream(&iso, NodeId(0)).unwrap().nodes, ids(&[0]));
        assert!(upstream(&iso, NodeId(9)).is_err());
    }

    #[test]
    fn periods() {
        let cycle = parse_edge_list("1 2\n2 3\n3 4\n4 5\n5 1").unwrap();
        assert_eq!(scc_period(&cycle, &ids(&[0, 1, 2, 3, 4])).unwrap(), 5);
        let fib = parse_edge_list("1 2\n2 1\n2 2").unwrap();
        assert_eq!(scc_period(&fib, &ids(&[0, 1])).unwrap(), 1);
        let g = six_node();
        let all: Vec<NodeId> = g.nodes().collect();
        assert_eq!(scc_period(&g, &all).unwrap(), 3);
        let single = parse_edge_list("a\nb b 4").unwrap();
        assert_eq!(scc_period(&single, &ids(&[0])).unwrap(), 0);
        assert_eq!(scc_period(&single, &ids(&[1])).unwrap(), 1);
        assert_eq!(
            scc_period(&parse_edge_list("1 2").unwrap(), &ids(&[0, 1])),
            Err(Error::NotStronglyConnected)
        );
    }

    #[test]
    fn natural_order_is_block_triangular_for_left_network() {
        let g = left();
        let scc = scc_decompose(&g);
        let u = upstream_with(&g, &scc, NodeId(2)).unwrap();
        assert_eq!(block_triangular_order(&u, &scc), ids(&[0, 1, 2]));
    }

    #[test]
    fn linked_cycles_order_source_first() {
        // sink cycle listed first in the file so the natural order is wrong
        let g = parse_edge_list("5 6\n6 7\n7 8\n8 5\n1 2\n2 3\n3 4\n4 1\n4 5").unwrap();
        let scc = scc_decompose(&g);
        let sink = g.node("5").unwrap();
        let u = upstream_with(&g, &scc, sink).unwrap();
        let order = block_triangular_order(&u, &scc);
        let labels: Vec<&str> = order.iter().map(|&v| g.label(v)).collect();
        assert_eq!(labels, ["1", "2", "3", "4", "5", "6", "7", "8"]);
    }

    // --- property checks against brute force -----------------------------

    fn arb_graph(max_n: usize) -> impl Strategy<Value = MultiGraph> {
        (1usize..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, 1u64..=2), 0..=2 * n)
                .prop_map(move |edges| MultiGraph::new((0..n).map(|k| k.to_string()).collect(), edges).unwrap())
        })
    }

    fn has_walk(g: &MultiGraph, from: usize, to: usize, max_len: usize) -> bool {
        let mut frontier = vec![from];
        for _ in 0..=max_len {
            if frontier.contains(&to) {
                return true;
            }
            let mut next: Vec<usize> = frontier
                .iter()
                .flat_map(|&v| g.successors(NodeId(v)).iter().map(|&(w, _)| w))
                .collect();
            next.sort_unstable();
            next.dedup();
            frontier = next;
        }
        false
    }

    fn simple_cycle_gcd(g: &MultiGraph, nodes: &[NodeId]) -> u64 {
        // enumerate simple cycles by DFS from each start node, only visiting
        // nodes with larger index than the start
        let inside: BTreeSet<usize> = nodes.iter().map(|v| v.0).collect();
        let mut gcd = 0u64;
        fn dfs(
            g: &MultiGraph,
            inside: &BTreeSet<usize>,
            start: usize,
            v: usize,
            depth: u64,
            on_path: &mut Vec<bool>,
            gcd: &mut u64,
        ) {
            for &(w, _) in g.successors(NodeId(v)) {
                if !inside.contains(&w) || w < start {
                    continue;
                }
                if w == start {
                    *gcd = gcd.gcd(&(depth + 1));
                } else if !on_path[w] {
                    on_path[w] = true;
                    dfs(g, inside, start, w, depth + 1, on_path, gcd);
                    on_path[w] = false;
                }
            }
        }
        for &s in &inside {
            let mut on_path = vec![false; g.node_count()];
            on_path[s] = true;
            dfs(g, &inside, s, s, 0, &mut on_path, &mut gcd);
        }
        gcd
    }

    proptest! {
        #[test]
        fn decomposition_is_a_feedforward_partition(g in arb_graph(9)) {
            let scc = scc_decompose(&g);
            let mut seen = vec![0; g.node_count()];
            for (c, comp) in scc.components.iter().enumerate() {
                for v in comp {
                    seen[v.0] += 1;
                    prop_assert_eq!(scc.component_of[v.0], c);
                }
            }
            prop_assert!(seen.iter().all(|&k| k == 1));
            for e in g.edges() {
                let (a, b) = (scc.component_of[e.source.0], scc.component_of[e.target.0]);
                prop_assert!(a <= b);
            }
            for comp in &scc.components {
                for &u in comp {
                    for &v in comp {
                        prop_assert!(has_walk(&g, u.0, v.0, g.node_count()));
                    }
                }
            }
        }

        #[test]
        fn upstream_matches_reachability(g in arb_graph(8)) {
            let scc = scc_decompose(&g);
            for i in g.nodes() {
                let u = upstream_with(&g, &scc, i).unwrap();
                for j in g.nodes() {
                    prop_assert_eq!(u.contains(j), has_walk(&g, j.0, i.0, g.node_count()));
                }
                // every component of the subgraph is a component of the parent
                let sub_scc = scc_decompose(&u.subgraph.graph);
                prop_assert_eq!(sub_scc.len(), u.scc_chain.len());
                for comp in &sub_scc.components {
                    let parent: Vec<NodeId> = comp.iter().map(|v| u.subgraph.original[v.0]).collect();
                    prop_assert!(scc.components.contains(&parent));
                }
                // walk counts agree on the parent and the upstream subgraph
                let root = u.subgraph.local(i).unwrap();
                prop_assert_eq!(
                    walk_counts(&g, i, 10).unwrap().counts,
                    walk_counts(&u.subgraph.graph, root, 10).unwrap().counts
                );
            }
        }

        #[test]
        fn bfs_period_matches_cycle_gcd(g in arb_graph(8)) {
            let scc = scc_decompose(&g);
            for comp in &scc.components {
                prop_assert_eq!(scc_period(&g, comp).unwrap(), simple_cycle_gcd(&g, comp));
            }
        }

        #[test]
        fn block_order_zeroes_lower_blocks(g in arb_graph(8)) {
            let scc = scc_decompose(&g);
            for i in g.nodes() {
                let u = upstream_with(&g, &scc, i).unwrap();
                let order = block_triangular_order(&u, &scc);
                prop_assert_eq!(order.len(), u.nodes.len());
                let m = g.adjacency_matrix();
                for (a, &x) in order.iter().enumerate() {
                    for &y in &order[..a] {
                        if scc.component_of[x.0] != scc.component_of[y.0] {
                            prop_assert_eq!(m.get(x.0, y.0), 0);
                        }
                    }
                }
            }
        }
    }
}
