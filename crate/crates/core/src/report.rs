//! Command front end: requests, report assembly and rendering to text,
//! JSON and CSV.
//!
//! JSON output goes through `serde_json::Value`, whose maps are ordered by
//! key, so reports are key-sorted and byte-identical across runs.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::asymptotics::{
    critical_modulus, fit_asymptotics, sandwich_check, AsymptoticProfile, BranchingRatioReport, GraphAnalysis,
    SandwichCheck,
};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};
use crate::spectral::{cesaro_deviation, spectrum_small_seeded, DEFAULT_SEED, RHO_TIE_TOLERANCE, SPECTRUM_MAX_SIZE};
use crate::walks::{
    input_tree, ln_biguint, ratio_sequence, walk_counts_all, InputTree, RatioVerdict, WalkCountSeries, DEFAULT_BUDGET,
};

pub const DEFAULT_MAX_LEN: usize = 240;
pub const DEFAULT_DEPTH: usize = 6;
/// Cesaro average length reported by the spectrum command.
pub const CESARO_K: usize = 1000;
/// Peripheral-eigenvalue modulus tolerance.
pub const PERIPHERAL_TOLERANCE: f64 = 1e-6;
const HEAD: usize = 10;
const TAIL: usize = 5;

pub(crate) fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub(crate) fn serialize_complex<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Analyze,
    Walks,
    Tree,
    Spectrum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeSelector {
    All,
    Labels(Vec<String>),
}

impl NodeSelector {
    /// `all` or a comma-separated label list.
    pub fn parse(s: &str) -> Self {
        if s == "all" {
            NodeSelector::All
        } else {
            NodeSelector::Labels(s.split(',').map(str::to_string).filter(|l| !l.is_empty()).collect())
        }
    }

    pub fn resolve(&self, g: &MultiGraph) -> Result<Vec<NodeId>> {
        match self {
            NodeSelector::All => Ok(g.nodes().collect()),
            NodeSelector::Labels(labels) => labels.iter().map(|l| g.node(l)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub command: Command,
    pub graph_path: Option<PathBuf>,
    pub nodes: NodeSelector,
    pub max_len: usize,
    pub depth: usize,
    pub format: OutputFormat,
    pub sort_labels: bool,
    pub tolerance: f64,
    pub seed: u64,
    pub budget: u64,
}

impl AnalysisRequest {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            graph_path: None,
            nodes: NodeSelector::All,
            max_len: DEFAULT_MAX_LEN,
            depth: DEFAULT_DEPTH,
            format: OutputFormat::Text,
            sort_labels: false,
            tolerance: RHO_TIE_TOLERANCE,
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: u64,
    pub distinct_edges: usize,
    pub sccs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameters {
    pub max_len: usize,
    pub depth: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeReport {
    pub label: String,
    pub index: usize,
    pub component: usize,
    pub branching_ratio: BranchingRatioReport,
    pub profile: Option<AsymptoticProfile>,
    pub sandwich: Option<SandwichCheck>,
    pub ratio_verdict: RatioVerdict,
    pub walks_head: Vec<String>,
    pub walks_tail: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkReport {
    pub label: String,
    pub index: usize,
    pub counts: Vec<String>,
    /// `a(l) / a(l-1)`; `None` at `l = 0` or after a zero.
    pub ratios: Vec<Option<f64>>,
    /// `a(l)^(1/l)`; `None` at `l = 0`.
    pub roots: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeJson {
    pub node: String,
    pub children: Vec<TreeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeReport {
    pub label: String,
    pub depth: usize,
    pub level_sizes: Vec<usize>,
    /// First level that is empty, when the tree is finite within `depth`.
    pub empty_from: Option<usize>,
    pub root: TreeJson,
    #[serde(skip)]
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub component: usize,
    pub nodes: Vec<String>,
    pub size: usize,
    pub period: u64,
    pub trivial: bool,
    pub rho: f64,
    pub left_vector: Vec<f64>,
    pub right_vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub eigenvalues: Option<Vec<[f64; 2]>>,
    pub peripheral_count: Option<usize>,
    pub cesaro_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: Command,
    pub graph: GraphSummary,
    pub parameters: Parameters,
    pub nodes: Vec<NodeReport>,
    pub walks: Vec<WalkReport>,
    pub trees: Vec<TreeReport>,
    pub components: Vec<ComponentReport>,
}

impl Report {
    fn empty(g: &MultiGraph, req: &AnalysisRequest, sccs: usize) -> Self {
        Self {
            tool: ToolInfo {
                name: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            command: req.command,
            graph: GraphSummary {
                nodes: g.node_count(),
                edges: g.edge_count(),
                distinct_edges: g.edges().len(),
                sccs,
            },
            parameters: Parameters {
                max_len: req.max_len,
                depth: req.depth,
                tolerance: req.tolerance,
                seed: req.seed,
                budget: req.budget,
            },
            nodes: Vec::new(),
            walks: Vec::new(),
            trees: Vec::new(),
            components: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is serialisable");
        let mut s = serde_json::to_string_pretty(&value).expect("value is serialisable");
        s.push('\n');
        s
    }
}

fn head_tail(series: &WalkCountSeries) -> (Vec<String>, Vec<String>) {
    let c = &series.counts;
    let head = c.iter().take(HEAD).map(BigUint::to_string).collect();
    let tail = c[c.len().saturating_sub(TAIL)..]
        .iter()
        .map(BigUint::to_string)
        .collect();
    (head, tail)
}

pub fn cmd_analyze(g: &MultiGraph, req: &AnalysisRequest) -> Result<Report> {
    let analysis = GraphAnalysis::with_tolerance(g, req.tolerance)?;
    let mut report = Report::empty(g, req, analysis.scc.len());
    let selected = req.nodes.resolve(g)?;
    let all_series = walk_counts_all(g, req.max_len);
    for i in selected {
        let series = &all_series[i.0];
        let br = analysis.branching_ratio_with_series(i, series)?;
        let mut notes = Vec::new();
        let (profile, sandwich) = if br.delta > 0.0 {
            let modulus = critical_modulus(&br)?;
            let degree = analysis.degree_bound(i, &br.critical_sccs)?;
            let profile = match fit_asymptotics(series, br.delta, modulus, degree) {
                Ok(p) => Some(p),
                Err(Error::InsufficientData(msg)) => {
                    notes.push(format!("asymptotic fit skipped: {msg}"));
                    None
                }
                Err(e) => return Err(e),
            };
            (profile, Some(sandwich_check(series, br.delta, degree)))
        } else {
            notes.push("acyclic upstream: walk counts vanish eventually".into());
            (None, None)
        };
        let (walks_head, walks_tail) = head_tail(series);
        report.nodes.push(NodeReport {
            label: g.label(i).to_string(),
            index: i.0,
            component: analysis.scc.component_of[i.0],
            branching_ratio: br,
            profile,
            sandwich,
            ratio_verdict: ratio_sequence(series).verdict,
            walks_head,
            walks_tail,
            notes,
        });
    }
    Ok(report)
}

pub fn walk_report(g: &MultiGraph, series: &WalkCountSeries) -> WalkReport {
    let c = &series.counts;
    let logs: Vec<f64> = c.iter().map(ln_biguint).collect();
    let ratios = (0..c.len())
        .map(|l| {
            if l == 0 || c[l - 1].is_zero() {
                None
            } else {
                Some((logs[l] - logs[l - 1]).exp())
            }
        })
        .collect();
    let roots = (0..c.len())
        .map(|l| {
            (l > 0).then(|| {
                if c[l].is_zero() {
                    0.0
                } else {
                    (logs[l] / l as f64).exp()
                }
            })
        })
        .collect();
    WalkReport {
        label: g.label(series.node).to_string(),
        index: series.node.0,
        counts: c.iter().map(BigUint::to_string).collect(),
        ratios,
        roots,
    }
}

pub fn cmd_walks(g: &MultiGraph, req: &AnalysisRequest) -> Result<Report> {
    let selected = req.nodes.resolve(g)?;
    let mut report = Report::empty(g, req, crate::structure::scc_decompose(g).len());
    let all = walk_counts_all(g, req.max_len);
    report.walks = selected.iter().map(|i| walk_report(g, &all[i.0])).collect();
    Ok(report)
}

fn child_lists(tree: &InputTree) -> Vec<Vec<usize>> {
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); tree.nodes.len()];
    for (k, t) in tree.nodes.iter().enumerate() {
        if let Some(p) = t.parent {
            kids[p].push(k);
        }
    }
    kids
}

fn tree_json(g: &MultiGraph, tree: &InputTree, kids: &[Vec<usize>], t: usize) -> TreeJson {
    TreeJson {
        node: g.label(NodeId(tree.nodes[t].node)).to_string(),
        children: kids[t].iter().map(|&c| tree_json(g, tree, kids, c)).collect(),
    }
}

fn tree_lines(g: &MultiGraph, tree: &InputTree, kids: &[Vec<usize>]) -> Vec<String> {
    let mut lines = Vec::new();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((t, level)) = stack.pop() {
        let node = &tree.nodes[t];
        let mut line = format!("{}{}", "  ".repeat(level), g.label(NodeId(node.node)));
        if let Some(e) = node.edge {
            if g.multiplicity(NodeId(e.source), NodeId(e.target)) > 1 {
                let _ = write!(line, " [copy {}]", e.copy + 1);
            }
        }
        lines.push(line);
        stack.extend(kids[t].iter().rev().map(|&c| (c, level + 1)));
    }
    lines
}

pub fn cmd_tree(g: &MultiGraph, req: &AnalysisRequest) -> Result<Report> {
    let selected = req.nodes.resolve(g)?;
    let mut report = Report::empty(g, req, crate::structure::scc_decompose(g).len());
    for i in selected {
        let tree = input_tree(g, i, req.depth, req.budget)?;
        let sizes = tree.level_sizes();
        let kids = child_lists(&tree);
        report.trees.push(TreeReport {
            label: g.label(i).to_string(),
            depth: req.depth,
            empty_from: sizes.iter().position(|&k| k == 0),
            level_sizes: sizes,
            root: tree_json(g, &tree, &kids, 0),
            lines: tree_lines(g, &tree, &kids),
        });
    }
    Ok(report)
}

pub fn cmd_spectrum(g: &MultiGraph, req: &AnalysisRequest) -> Result<Report> {
    let analysis = GraphAnalysis::with_tolerance(g, req.tolerance)?;
    let mut report = Report::empty(g, req, analysis.scc.len());
    for comp in &analysis.components {
        let size = comp.nodes.len();
        let small = size <= SPECTRUM_MAX_SIZE;
        let (eigenvalues, peripheral_count) = if small {
            let s = spectrum_small_seeded(&comp.matrix, req.seed)?;
            let peri = if comp.is_trivial() {
                0
            } else {
                s.peripheral(comp.rho(), PERIPHERAL_TOLERANCE).len()
            };
            (Some(s.eigenvalues.iter().map(|z| [z.re, z.im]).collect()), Some(peri))
        } else {
            (None, None)
        };
        let cesaro = if small && !comp.is_trivial() {
            Some(cesaro_deviation(&comp.matrix, &comp.perron, CESARO_K)?)
        } else {
            None
        };
        report.components.push(ComponentReport {
            component: comp.component,
            nodes: comp.nodes.iter().map(|&v| g.label(NodeId(v)).to_string()).collect(),
            size,
            period: comp.period,
            trivial: comp.is_trivial(),
            rho: comp.rho(),
            left_vector: comp.perron.v.clone(),
            right_vector: comp.perron.w.clone(),
            iterations: comp.perron.iterations,
            residual: comp.perron.residual,
            eigenvalues,
            peripheral_count,
            cesaro_deviation: cesaro,
        });
    }
    Ok(report)
}

pub fn run(g: &MultiGraph, req: &AnalysisRequest) -> Result<Report> {
    match req.command {
        Command::Analyze => cmd_analyze(g, req),
        Command::Walks => cmd_walks(g, req),
        Command::Tree => cmd_tree(g, req),
        Command::Spectrum => cmd_spectrum(g, req),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v}"))
}

pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Text => render_text(report),
    }
}

pub const ANALYZE_CSV_HEADER: &str = "node,delta,g,empirical,agreement,degree_bound,sandwich_pass";
pub const WALKS_CSV_HEADER: &str = "l,count,ratio,root,node";
pub const TREE_CSV_HEADER: &str = "level,size,node";
pub const SPECTRUM_CSV_HEADER: &str = "component,size,period,rho,peripheral";

fn render_csv(report: &Report) -> String {
    let mut out = String::new();
    match report.command {
        Command::Analyze => {
            out.push_str(ANALYZE_CSV_HEADER);
            out.push('\n');
            for n in &report.nodes {
                let br = &n.branching_ratio;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    n.label,
                    br.delta,
                    br.g.map_or_else(String::new, |g| g.to_string()),
                    br.empirical_estimate,
                    br.agreement,
                    n.profile
                        .as_ref()
                        .map_or_else(String::new, |p| p.degree_bound.to_string()),
                    n.sandwich.as_ref().map_or_else(String::new, |s| s.pass.to_string()),
                );
            }
        }
        Command::Walks => {
            out.push_str(WALKS_CSV_HEADER);
            out.push('\n');
            for w in &report.walks {
                for (l, count) in w.counts.iter().enumerate() {
                    let _ = writeln!(out, "{l},{count},{},{},{}", opt(w.ratios[l]), opt(w.roots[l]), w.label);
                }
            }
        }
        Command::Tree => {
            out.push_str(TREE_CSV_HEADER);
            out.push('\n');
            for t in &report.trees {
                for (l, size) in t.level_sizes.iter().enumerate() {
                    let _ = writeln!(out, "{l},{size},{}", t.label);
                }
            }
        }
        Command::Spectrum => {
            out.push_str(SPECTRUM_CSV_HEADER);
            out.push('\n');
            for c in &report.components {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.component,
                    c.size,
                    c.period,
                    c.rho,
                    c.peripheral_count.map_or_else(String::new, |p| p.to_string())
                );
            }
        }
    }
    out
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let gs = &report.graph;
    let _ = writeln!(
        out,
        "graph: {} nodes, {} edges ({} distinct), {} SCCs",
        gs.nodes, gs.edges, gs.distinct_edges, gs.sccs
    );
    match report.command {
        Command::Analyze => {
            if report.nodes.is_empty() {
                out.push_str("no nodes\n");
            }
            for n in &report.nodes {
                let br = &n.branching_ratio;
                let _ = writeln!(out, "node {} (component {})", n.label, n.component);
                let _ = writeln!(out, "  delta        {:.12}", br.delta);
                let _ = writeln!(
                    out,
                    "  empirical    {:.6} (|diff| {:.3e})",
                    br.empirical_estimate, br.agreement
                );
                let _ = writeln!(out, "  critical     {:?}", br.critical_sccs);
                if let Some(g) = br.g {
                    let _ = writeln!(out, "  modulus g    {g}");
                }
                if let Some(p) = &n.profile {
                    let _ = writeln!(out, "  degree bound {}", p.degree_bound);
                    for f in &p.residue_fits {
                        let coeffs: Vec<String> = f.coefficients.iter().map(|c| format!("{c:.6e}")).collect();
                        let _ = writeln!(
                            out,
                            "  R_{}(l)       [{}] (rms {:.2e})",
                            f.residue,
                            coeffs.join(", "),
                            f.residual
                        );
                    }
                }
                if let Some(s) = &n.sandwich {
                    let _ = writeln!(
                        out,
                        "  sandwich     {} (c = {}, r = {}, window {:?})",
                        if s.pass { "pass" } else { "fail" },
                        s.lower.map_or_else(|| "-".into(), |c| c.to_string()),
                        s.exponent.map_or_else(|| "-".into(), |r| r.to_string()),
                        s.window
                    );
                }
                let _ = writeln!(out, "  ratios       {}", n.ratio_verdict);
                let _ = writeln!(out, "  a(0..)       {}", n.walks_head.join(" "));
                for note in &n.notes {
                    let _ = writeln!(out, "  note: {note}");
                }
            }
        }
        Command::Walks => {
            for w in &report.walks {
                let _ = writeln!(out, "node {}", w.label);
                for (l, count) in w.counts.iter().enumerate() {
                    let _ = writeln!(out, "  {l:>4}  {count}");
                }
            }
        }
        Command::Tree => {
            for t in &report.trees {
                let _ = writeln!(out, "input tree of {} (depth {})", t.label, t.depth);
                for line in &t.lines {
                    let _ = writeln!(out, "  {line}");
                }
                let _ = writeln!(out, "level sizes: {:?}", t.level_sizes);
                if let Some(e) = t.empty_from {
                    let _ = writeln!(out, "levels {e}..{} are empty (finite input tree)", t.depth);
                }
            }
        }
        Command::Spectrum => {
            for c in &report.components {
                let _ = writeln!(
                    out,
                    "component {} {:?}: size {}, period {}, rho {:.12}",
                    c.component, c.nodes, c.size, c.period, c.rho
                );
                if let Some(ev) = &c.eigenvalues {
                    let shown: Vec<String> = ev.iter().map(|[re, im]| format!("{re:.6}{im:+.6}i")).collect();
                    let _ = writeln!(out, "  eigenvalues  {}", shown.join(" "));
                }
                if let Some(p) = c.peripheral_count {
                    let _ = writeln!(out, "  peripheral   {p}");
                }
                if let Some(d) = c.cesaro_deviation {
                    let _ = writeln!(out, "  cesaro(k={CESARO_K}) deviation {d:.3e}");
                }
            }
        }
    }
    out
}
