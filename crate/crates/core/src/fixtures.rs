//! Reference networks with known walk-count behaviour, used by the tests,
//! the acceptance suite and the shipped `.edges` files.

use crate::graph::{parse_edge_list, MultiGraph};

/// Declares nodes `1..=n` first so indices follow the numeric labels.
fn parse(n: usize, edges: &str) -> MultiGraph {
    let mut text: String = (1..=n).map(|k| format!("{k}\n")).collect();
    text.push_str(edges);
    parse_edge_list(&text).expect("fixture text is valid")
}

/// Two nodes: `1 -> 2`, `2 -> 1` and a self-loop at 2. `a_1(l) = F_l`.
pub fn fibonacci() -> MultiGraph {
    parse(2, "1 2\n2 1\n2 2\n")
}

/// Strongly connected six-node graph of period 3 with `rho = 2^(1/3)`.
pub fn six_node() -> MultiGraph {
    parse(6, "1 2\n2 3\n2 6\n3 4\n4 5\n5 3\n5 6\n6 1\n")
}

/// Node 1 with `alpha` self-loops fed by node 2 through `beta` edges; node 2
/// carries `alpha` self-loops.
pub fn alpha_beta(alpha: u64, beta: u64) -> MultiGraph {
    parse(2, &format!("1 1 {alpha}\n2 1 {beta}\n2 2 {alpha}\n"))
}

/// Fibonacci circuit `{1, 2}` feeding node 3, which has two self-loops.
pub fn upstream_left() -> MultiGraph {
    parse(3, "1 1\n1 2\n2 1\n2 3\n3 3 2\n")
}

/// Node 1 with two self-loops feeding the Fibonacci circuit `{2, 3}`.
pub fn upstream_right() -> MultiGraph {
    parse(3, "1 1 2\n1 3\n2 2\n2 3\n3 2\n")
}

/// Three singleton components with branching ratios 2, 1 and 0.
pub fn three_node_feedforward() -> MultiGraph {
    parse(3, "1 1 2\n2 2\n3 1\n3 2\n")
}

/// Source 4-cycle `1 -> 2 -> 3 -> 4 -> 1` linked by `4 -> 5` to the sink
/// 4-cycle `5 -> 6 -> 7 -> 8 -> 5`.
pub fn linked_four_cycles() -> MultiGraph {
    parse(8, "1 2\n2 3\n3 4\n4 1\n4 5\n5 6\n6 7\n7 8\n8 5\n")
}

/// Cycle on nodes `1..=n` whose edge from node `k+1` to node `k` has
/// multiplicity `m[k-1]` (node `n+1` is node 1).
pub fn polycycle(m: &[u64]) -> MultiGraph {
    let n = m.len();
    let edges: String = (1..=n).map(|k| format!("{} {} {}\n", k % n + 1, k, m[k - 1])).collect();
    parse(n, &edges)
}

/// Simple directed `n`-cycle `1 -> 2 -> ... -> n -> 1`.
pub fn cycle(n: usize) -> MultiGraph {
    let edges: String = (1..=n).map(|k| format!("{} {}\n", k, k % n + 1)).collect();
    parse(n, &edges)
}

/// Directed path `1 -> 2 -> ... -> n`.
pub fn chain(n: usize) -> MultiGraph {
    let edges: String = (1..n).map(|k| format!("{} {}\n", k, k + 1)).collect();
    parse(n, &edges)
}
