//! Finite directed multigraphs, their edge-list text format and exact
//! adjacency matrices.
//!
//! Nodes are indexed densely in order of first appearance. Parallel edges
//! are merged into a single edge carrying a multiplicity; self-loops are
//! allowed.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Dense node index into a [`MultiGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub multiplicity: u64,
}

/// Immutable directed multigraph.
///
/// Edges are stored once per ordered `(source, target)` pair, sorted by
/// `(source, target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<(usize, u64)>>,
    incoming: Vec<Vec<(usize, u64)>>,
}

impl MultiGraph {
    /// Builds a graph from a label table and `(source, target, multiplicity)`
    /// triples. Duplicate pairs are summed.
    pub fn new<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (k, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!("bad label {label:?}")));
            }
            if index.insert(label.clone(), k).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate label {label:?}")));
            }
        }
        let mut merged: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (s, t, m) in edges {
            if s >= n {
                return Err(Error::UnknownNode(format!("#{s}")));
            }
            if t >= n {
                return Err(Error::UnknownNode(format!("#{t}")));
            }
            if m == 0 {
                return Err(Error::InvalidArgument("multiplicity must be positive".into()));
            }
            *merged.entry((s, t)).or_insert(0) += m;
        }
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((s, t), m)| {
                outgoing[s].push((t, m));
                incoming[t].push((s, m));
                Edge {
                    source: NodeId(s),
                    target: NodeId(t),
                    multiplicity: m,
                }
            })
            .collect();
        Ok(Self {
            labels,
            index,
            edges,
            outgoing,
            incoming,
        })
    }

    /// Graph whose adjacency matrix is `rows`, with labels `1..=n`.
    pub fn from_matrix(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        let labels = (1..=n).map(|k| k.to_string()).collect();
        let edges = rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(move |(j, &m)| (i, j, m))
        });
        Self::new(labels, edges)
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), std::iter::empty()).expect("empty graph is valid")
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Merged edges, sorted by `(source, target)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Total number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.iter().map(|e| e.multiplicity).sum()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.0]
    }

    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.index
            .get(label)
            .map(|&k| NodeId(k))
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node.0 < self.node_count() {
            Ok(())
        } else {
            Err(Error::UnknownNode(node.to_string()))
        }
    }

    /// `(target, multiplicity)` pairs for the edges leaving `node`.
    pub fn successors(&self, node: NodeId) -> &[(usize, u64)] {
        &self.outgoing[node.0]
    }

    /// `(source, multiplicity)` pairs for the edges entering `node`.
    pub fn predecessors(&self, node: NodeId) -> &[(usize, u64)] {
        &self.incoming[node.0]
    }

    pub fn multiplicity(&self, source: NodeId, target: NodeId) -> u64 {
        self.outgoing[source.0]
            .iter()
            .find(|(t, _)| *t == target.0)
            .map_or(0, |&(_, m)| m)
    }

    pub fn has_self_loop(&self, node: NodeId) -> bool {
        self.multiplicity(node, node) > 0
    }

    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        adjacency_matrix(self)
    }

    /// Same graph relabelled so that node indices follow lexicographic label
    /// order.
    pub fn with_sorted_labels(&self) -> MultiGraph {
        let mut order: Vec<usize> = (0..self.node_count()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let labels = order.iter().map(|&k| self.labels[k].clone()).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| (new_index[e.source.0], new_index[e.target.0], e.multiplicity));
        MultiGraph::new(labels, edges).expect("relabelling preserves validity")
    }

    /// Canonical edge-list text: every node declared in index order, then
    /// one line per merged edge with explicit multiplicity.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for label in &self.labels {
            out.push_str(label);
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&format!(
                "{} {} {}\n",
                self.labels[e.source.0], self.labels[e.target.0], e.multiplicity
            ));
        }
        out
    }
}

/// Dense exact adjacency matrix; entry `(i, j)` counts edges `i -> j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl AdjacencyMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            m.entries[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> AdjacencyMatrix {
        let k = indices.len();
        let mut m = Self::zeros(k);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                m.entries[a * k + b] = self.get(i, j);
            }
        }
        m
    }

    pub fn as_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&x| x as f64).collect())
            .collect()
    }
}

pub fn adjacency_matrix(g: &MultiGraph) -> AdjacencyMatrix {
    let n = g.node_count();
    let mut m = AdjacencyMatrix::zeros(n);
    for e in g.edges() {
        m.entries[e.source.0 * n + e.target.0] = e.multiplicity;
    }
    m
}

/// Parses the whitespace-separated edge-list format.
///
/// Each non-blank line is `src dst [multiplicity]`; a line holding a single
/// label declares a node without adding edges. `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<MultiGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str| -> usize {
        if let Some(&k) = index.get(label) {
            return k;
        }
        labels.push(label.to_string());
        index.insert(label.to_string(), labels.len() - 1);
        labels.len() - 1
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [label] => {
                intern(label);
            }
            [src, dst] => {
                let (s, t) = (intern(src), intern(dst));
                edges.push((s, t, 1));
            }
            [src, dst, mult] => {
                let m: i128 = mult.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("multiplicity {mult:?} is not an integer"),
                })?;
                if m <= 0 {
                    return Err(Error::Parse {
                        line,
                        message: format!("multiplicity must be positive, got {m}"),
                    });
                }
                let m = u64::try_from(m).map_err(|_| Error::Parse {
                    line,
                    message: format!("multiplicity {m} is too large"),
                })?;
                let (s, t) = (intern(src), intern(dst));
                edges.push((s, t, m));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `src dst [multiplicity]`, got {} tokens", tokens.len()),
                })
            }
        }
    }
    MultiGraph::new(labels, edges)
}

/// A subgraph together with the map from its node indices back to the
/// parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: MultiGraph,
    /// `original[k]` is the parent node behind subgraph node `k`.
    pub original: Vec<NodeId>,
}

impl Subgraph {
    pub fn local(&self, parent: NodeId) -> Option<NodeId> {
        self.original.binary_search(&parent).ok().map(NodeId)
    }
}

/// Subgraph induced by `nodes`: keeps exactly the edges with both endpoints
/// in the set. Nodes keep their relative order and labels.
pub fn induced_subgraph(g: &MultiGraph, nodes: &[NodeId]) -> Result<Subgraph> {
    let n = g.node_count();
    let mut keep = vec![false; n];
    for &v in nodes {
        g.check_node(v)?;
        keep[v.0] = true;
    }
    let original: Vec<NodeId> = (0..n).filter(|&k| keep[k]).map(NodeId).collect();
    let mut local = vec![usize::MAX; n];
    for (k, v) in original.iter().enumerate() {
        local[v.0] = k;
    }
    let labels = original.iter().map(|&v| g.label(v).to_string()).collect();
    let edges = g
        .edges()
        .iter()
        .filter(|e| keep[e.source.0] && keep[e.target.0])
        .map(|e| (local[e.source.0], local[e.target.0], e.multiplicity));
    Ok(Subgraph {
        graph: MultiGraph::new(labels, edges)?,
        original,
    })
}

/// True iff the graph has no directed cycle (self-loops included), i.e. its
/// adjacency matrix is nilpotent.
pub fn is_acyclic(g: &MultiGraph) -> bool {
    let n = g.node_count();
    let mut indegree: Vec<usize> = (0..n).map(|v| g.incoming[v].len()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        removed += 1;
        for &(t, _) in &g.outgoing[v] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    removed == n
}
