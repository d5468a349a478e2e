//! Exact walk counts `a_i(l)`, input trees, and successive-ratio
//! diagnostics.
//!
//! `a_i(l)` is the number of walks of length `l` that end at node `i`, i.e.
//! entry `i` of `u A^l` where `u` is the all-ones row vector. The trivial
//! walk makes `a_i(0) = 1` for every node.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};

/// Default cap on enumerated walks or tree nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCountSeries {
    pub node: NodeId,
    /// `counts[l] = a_node(l)` for `l = 0..=L`.
    pub counts: Vec<BigUint>,
}

impl WalkCountSeries {
    pub fn max_len(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    /// Natural logarithm of every entry (`-inf` for zeros).
    pub fn ln_counts(&self) -> Vec<f64> {
        self.counts.iter().map(ln_biguint).collect()
    }
}

/// Natural logarithm of an arbitrary-precision integer, `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// One step `x -> x A` of the row-vector recurrence.
fn step(g: &MultiGraph, x: &[BigUint]) -> Vec<BigUint> {
    g.nodes()
        .map(|j| {
            g.predecessors(j)
                .iter()
                .fold(BigUint::zero(), |acc, &(k, m)| acc + &x[k] * m)
        })
        .collect()
}

/// Walk counts for every node at once; `result[i].counts[l] = a_i(l)`.
pub fn walk_counts_all(g: &MultiGraph, max_len: usize) -> Vec<WalkCountSeries> {
    let n = g.node_count();
    let mut series: Vec<WalkCountSeries> = g
        .nodes()
        .map(|node| WalkCountSeries {
            node,
            counts: Vec::with_capacity(max_len + 1),
        })
        .collect();
    let mut x = vec![BigUint::from(1u32); n];
    for l in 0..=max_len {
        for (s, v) in series.iter_mut().zip(&x) {
            s.counts.push(v.clone());
        }
        if l < max_len {
            x = step(g, &x);
        }
    }
    series
}

/// Exact `a_i(0..=max_len)` via iterated row-vector products.
pub fn walk_counts(g: &MultiGraph, i: NodeId, max_len: usize) -> Result<WalkCountSeries> {
    g.check_node(i)?;
    let mut x = vec![BigUint::from(1u32); g.node_count()];
    let mut counts = Vec::with_capacity(max_len + 1);
    counts.push(x[i.0].clone());
    for _ in 0..max_len {
        x = step(g, &x);
        counts.push(x[i.0].clone());
    }
    Ok(WalkCountSeries { node: i, counts })
}

/// Counts walks ending at `i` by explicitly enumerating them backwards,
/// one distinct edge per unit of multiplicity. Independent of the matrix
/// route; used as an oracle.
pub fn brute_force_walk_count(g: &MultiGraph, i: NodeId, max_len: usize, budget: u64) -> Result<WalkCountSeries> {
    g.check_node(i)?;
    // in_edges[v] lists one source per parallel edge into v
    let in_edges: Vec<Vec<usize>> = g
        .nodes()
        .map(|v| {
            g.edges()
                .iter()
                .filter(|e| e.target == v)
                .flat_map(|e| std::iter::repeat_n(e.source.0, e.multiplicity as usize))
                .collect()
        })
        .collect();
    let mut counts = vec![0u64; max_len + 1];
    let mut visited = 0u64;
    let mut stack = vec![(i.0, 0usize)];
    while let Some((v, depth)) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        counts[depth] += 1;
        if depth < max_len {
            stack.extend(in_edges[v].iter().map(|&u| (u, depth + 1)));
        }
    }
    Ok(WalkCountSeries {
        node: i,
        counts: counts.into_iter().map(BigUint::from).collect(),
    })
}

/// Parallel edge `source -> target`, `copy` distinguishing units of
/// multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeUse {
    pub source: usize,
    pub target: usize,
    pub copy: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub node: usize,
    pub parent: Option<usize>,
    pub edge: Option<EdgeUse>,
}

/// Input tree of a node truncated at a given depth. Tree nodes at level
/// `l` are in bijection with walks of length `l` ending at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputTree {
    pub root: NodeId,
    pub depth: usize,
    /// Arena of tree nodes; `levels` index into it.
    pub nodes: Vec<TreeNode>,
    pub levels: Vec<Vec<usize>>,
}

impl InputTree {
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn children(&self, tree_node: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.parent == Some(tree_node))
            .map(|(k, _)| k)
    }
}

pub fn input_tree(g: &MultiGraph, i: NodeId, depth: usize, budget: u64) -> Result<InputTree> {
    g.check_node(i)?;
    let mut nodes = vec![TreeNode {
        node: i.0,
        parent: None,
        edge: None,
    }];
    let mut levels = vec![vec![0usize]];
    for _ in 0..depth {
        let prev = levels.last().expect("level 0 exists");
        let mut next = Vec::new();
        for &t in prev {
            let v = nodes[t].node;
            for &(u, m) in g.predecessors(NodeId(v)) {
                for copy in 0..m {
                    if nodes.len() as u64 >= budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                    nodes.push(TreeNode {
                        node: u,
                        parent: Some(t),
                        edge: Some(EdgeUse {
                            source: u,
                            target: v,
                            copy,
                        }),
                    });
                    next.push(nodes.len() - 1);
                }
            }
        }
        levels.push(next);
    }
    Ok(InputTree {
        root: i,
        depth,
        nodes,
        levels,
    })
}

/// Long-run behaviour of `a(l+1)/a(l)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RatioVerdict {
    Converges {
        value: f64,
    },
    /// Each residue class mod `period` converges; the whole sequence does not.
    Oscillates {
        period: usize,
        limits: Vec<f64>,
    },
    /// Fewer than three nonzero tail entries.
    Degenerate,
    /// Enough data, but no candidate period settles within tolerance.
    Undetermined,
}

impl std::fmt::Display for RatioVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RatioVerdict::Converges { value } => write!(f, "converges to {value:.9}"),
            RatioVerdict::Oscillates { period, limits } => {
                let limits: Vec<String> = limits.iter().map(|x| format!("{x:.9}")).collect();
                write!(f, "oscillates with period {period}, limits [{}]", limits.join(", "))
            }
            RatioVerdict::Degenerate => f.write_str("degenerate (too few nonzero counts)"),
            RatioVerdict::Undetermined => f.write_str("undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSequence {
    /// `ratios[k] = a(l_k + 1) / a(l_k)` over the nonzero tail, exact.
    pub ratios: Vec<BigRational>,
    /// Index `l` of the first ratio.
    pub offset: usize,
    pub verdict: RatioVerdict,
}

pub const MAX_RATIO_PERIOD: usize = 12;
pub const RATIO_TOLERANCE: f64 = 1e-6;
const RATIO_WINDOW: usize = 5;

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn settled(values: &[f64]) -> bool {
    if values.len() < RATIO_WINDOW {
        return false;
    }
    let tail = &values[values.len() - RATIO_WINDOW..];
    let last = tail[RATIO_WINDOW - 1];
    tail.iter()
        .all(|&v| (v - last).abs() <= RATIO_TOLERANCE * last.abs().max(f64::MIN_POSITIVE))
}

/// Successive ratios of the series and a convergence verdict.
///
/// Candidate periods `p = 1..=12` are tried in order; residue class `s`
/// of the ratio sequence settles when its last five entries agree to a
/// relative `1e-6`.
pub fn ratio_sequence(series: &WalkCountSeries) -> RatioSequence {
    let counts = &series.counts;
    // the tail starting after the last zero
    let start = counts.iter().rposition(Zero::is_zero).map_or(0, |k| k + 1);
    let tail = &counts[start.min(counts.len())..];
    if tail.len() < 3 {
        return RatioSequence {
            ratios: Vec::new(),
            offset: start,
            verdict: RatioVerdict::Degenerate,
        };
    }
    let ratios: Vec<BigRational> = tail
        .windows(2)
        .map(|w| BigRational::new(BigInt::from(w[1].clone()), BigInt::from(w[0].clone())))
        .collect();
    let values: Vec<f64> = ratios.iter().map(ratio_f64).collect();

    let mut verdict = RatioVerdict::Undetermined;
    for p in 1..=MAX_RATIO_PERIOD {
        if values.len() < p * RATIO_WINDOW {
            break;
        }
        // align residues to l mod p
        let classes: Vec<Vec<f64>> = (0..p)
            .map(|s| {
                values
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| (start + k) % p == s)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        if classes.iter().all(|c| settled(c)) {
            let limits: Vec<f64> = classes.iter().map(|c| *c.last().expect("settled")).collect();
            verdict = if p == 1 {
                RatioVerdict::Converges { value: limits[0] }
            } else {
                RatioVerdict::Oscillates { period: p, limits }
            };
            break;
        }
    }
    RatioSequence {
        ratios,
        offset: start,
        verdict,
    }
}

/// `a_i(L)^(1/L)` at the last available length, via logarithms; 0 when the
/// final count is zero.
pub fn empirical_branching_ratio(series: &WalkCountSeries) -> f64 {
    let l = series.max_len();
    let last = &series.counts[l];
    if last.is_zero() || l == 0 {
        return 0.0;
    }
    (ln_biguint(last) / l as f64).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn fib() -> MultiGraph {
        parse_edge_list("1 2\n2 1\n2 2").unwrap()
    }

    fn six_node() -> MultiGraph {
        crate::fixtures::six_node()
    }

    #[test]
    fn fibonacci_counts() {
        let s = walk_counts(&fib(), NodeId(0), 5).unwrap();
        assert_eq!(s.counts, big(&[1, 1, 2, 3, 5, 8]));
        let b = brute_force_walk_count(&fib(), NodeId(1), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.counts, big(&[1, 2, 3, 5, 8]));
    }

    #[test]
    fn six_node_counts() {
        let g = six_node();
        let s1 = walk_counts(&g, NodeId(0), 9).unwrap();
        assert_eq!(s1.counts, big(&[1, 1, 2, 2, 2, 4, 4, 4, 8, 8]));
        // the sequence 1,2,2,2,4,... belongs to node 3
        let s3 = walk_counts(&g, NodeId(2), 9).unwrap();
        assert_eq!(s3.counts, big(&[1, 2, 2, 2, 4, 4, 4, 8, 8, 8]));
    }

    #[test]
    fn isolated_node_counts() {
        let g = parse_edge_list("a\nb c").unwrap();
        assert_eq!(walk_counts(&g, NodeId(0), 3).unwrap().counts, big(&[1, 0, 0, 0]));
        assert!(walk_counts(&g, NodeId(5), 3).is_err());
    }

    #[test]
    fn all_nodes_agree_with_single_node() {
        let g = six_node();
        let all = walk_counts_all(&g, 12);
        for s in &all {
            assert_eq!(s, &walk_counts(&g, s.node, 12).unwrap());
        }
    }

    #[test]
    fn brute_force_alpha_beta() {
        // a_1(l) = 2^l + 3 l 2^(l-1)
        let g = parse_edge_list("1 1 2\n2 1 3\n2 2 2").unwrap();
        let b = brute_force_walk_count(&g, NodeId(0), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.counts, big(&[1, 5, 16, 44]));
        assert_eq!(walk_counts(&g, NodeId(0), 3).unwrap().counts, b.counts);
        let zero = brute_force_walk_count(&g, NodeId(1), 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(zero.counts, big(&[1]));
    }

    #[test]
    fn brute_force_budget_is_an_error() {
        let g = parse_edge_list("1 1 10").unwrap();
        assert_eq!(
            brute_force_walk_count(&g, NodeId(0), 6, 1000),
            Err(Error::BudgetExceeded { budget: 1000 })
        );
        assert!(input_tree(&g, NodeId(0), 6, 1000).is_err());
    }

    #[test]
    fn input_tree_levels() {
        let t = input_tree(&fib(), NodeId(0), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 1, 2, 3, 5]);
        assert_eq!(t.children(0).count(), 1);

        let chain = parse_edge_list("1 2\n2 3").unwrap();
        let t = input_tree(&chain, NodeId(2), 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 1, 1, 0, 0, 0]);

        let cycle = parse_edge_list("1 1").unwrap();
        let t = input_tree(&cycle, NodeId(0), 7, DEFAULT_BUDGET).unwrap();
        assert!(t.level_sizes().iter().all(|&k| k == 1));
    }

    #[test]
    fn input_tree_expands_multiplicity() {
        let g = parse_edge_list("a b 3").unwrap();
        let t = input_tree(&g, NodeId(1), 1, DEFAULT_BUDGET).unwrap();
        let copies: Vec<u64> = t.levels[1].iter().map(|&k| t.nodes[k].edge.unwrap().copy).collect();
        assert_eq!(copies, vec![0, 1, 2]);
    }

    #[test]
    fn ratio_verdicts() {
        let g = six_node();
        let r = ratio_sequence(&walk_counts(&g, NodeId(2), 60).unwrap());
        let first: Vec<f64> = r.ratios.iter().take(6).map(ratio_f64).collect();
        assert_eq!(first, vec![2.0, 1.0, 1.0, 2.0, 1.0, 1.0]);
        match r.verdict {
            RatioVerdict::Oscillates { period, ref limits } => {
                assert_eq!(period, 3);
                assert_eq!(limits, &vec![2.0, 1.0, 1.0]);
            }
            ref v => panic!("unexpected verdict {v:?}"),
        }

        let r = ratio_sequence(&walk_counts(&fib(), NodeId(0), 80).unwrap());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        match r.verdict {
            RatioVerdict::Converges { value } => assert!((value - phi).abs() < 1e-9),
            ref v => panic!("unexpected verdict {v:?}"),
        }

        let ab = parse_edge_list("1 1 2\n2 1 3\n2 2 2").unwrap();
        let r = ratio_sequence(&walk_counts(&ab, NodeId(0), 4000).unwrap());
        match r.verdict {
            RatioVerdict::Converges { value } => assert!((value - 2.0).abs() < 1e-3),
            ref v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn ratio_degenerate_cases() {
        let chain = parse_edge_list("1 2\n2 3").unwrap();
        let r = ratio_sequence(&walk_counts(&chain, NodeId(2), 20).unwrap());
        assert_eq!(r.verdict, RatioVerdict::Degenerate);
        let short = parse_edge_list("1 1").unwrap();
        let r = ratio_sequence(&walk_counts(&short, NodeId(0), 1).unwrap());
        assert_eq!(r.verdict, RatioVerdict::Degenerate);
    }

    #[test]
    fn empirical_ratio() {
        let chain = parse_edge_list("1 2\n2 3").unwrap();
        assert_eq!(
            empirical_branching_ratio(&walk_counts(&chain, NodeId(2), 10).unwrap()),
            0.0
        );

        let e = empirical_branching_ratio(&walk_counts(&six_node(), NodeId(0), 300).unwrap());
        assert!((e - 2f64.cbrt()).abs() < 1e-2);

        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let e = empirical_branching_ratio(&walk_counts(&fib(), NodeId(0), 200).unwrap());
        assert!((e - phi).abs() < 1e-2);
    }

    #[test]
    fn big_logarithm() {
        let x = BigUint::from(2u32).pow(5000);
        assert!((ln_biguint(&x) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(ln_biguint(&BigUint::zero()), f64::NEG_INFINITY);
    }
}
