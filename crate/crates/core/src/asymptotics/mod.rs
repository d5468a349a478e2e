//! Branching ratios and the growth laws of walk counts.
//!
//! The branching ratio of node `i` is the largest Perron eigenvalue among
//! the strongly connected components upstream of `i`. Components attaining
//! it are *critical*; the lcm `g` of their periods is the modulus of the
//! per-residue growth law `a_i(l) ~ R_{l mod g}(l) * rho^l`.

mod fit;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, MultiGraph, NodeId};
use crate::spectral::{perron, rho_equal, PerronData, RHO_TIE_TOLERANCE};
use crate::structure::{scc_decompose, upstream_nodes, SccDecomposition, UpstreamSet};
use crate::walks::{empirical_branching_ratio, ln_biguint, walk_counts, WalkCountSeries};

pub use fit::polyfit;

/// Walk length used for the empirical cross-check of `delta`.
pub const EMPIRICAL_LENGTH: usize = 200;
pub const FIT_BURN_IN: usize = 20;
pub const FIT_MIN_WINDOW: usize = 60;
/// Coefficients below this fraction of the largest (in the normalised
/// basis) are ignored when reading off a fit's effective degree.
pub const FIT_TRIM: f64 = 1e-6;

/// Spectral data of one component of the parent graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSpectrum {
    pub component: usize,
    pub nodes: Vec<usize>,
    /// 0 for a trivial component.
    pub period: u64,
    pub perron: PerronData,
    #[serde(skip)]
    pub matrix: AdjacencyMatrix,
}

impl ComponentSpectrum {
    pub fn rho(&self) -> f64 {
        self.perron.rho
    }

    pub fn is_trivial(&self) -> bool {
        self.period == 0
    }
}

/// Decomposition plus per-component Perron data, computed once per graph.
#[derive(Debug, Clone)]
pub struct GraphAnalysis<'g> {
    pub graph: &'g MultiGraph,
    pub scc: SccDecomposition,
    pub components: Vec<ComponentSpectrum>,
    pub tie_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchingRatioReport {
    pub node: usize,
    pub delta: f64,
    pub upstream_sccs: Vec<usize>,
    pub critical_sccs: Vec<usize>,
    /// lcm of the critical periods; `None` when `delta = 0`.
    pub g: Option<u64>,
    pub method: String,
    pub empirical_estimate: f64,
    pub agreement: f64,
}

impl<'g> GraphAnalysis<'g> {
    pub fn new(graph: &'g MultiGraph) -> Result<Self> {
        Self::with_tolerance(graph, RHO_TIE_TOLERANCE)
    }

    pub fn with_tolerance(graph: &'g MultiGraph, tie_tolerance: f64) -> Result<Self> {
        let scc = scc_decompose(graph);
        let full = graph.adjacency_matrix();
        let periods = scc.periods(graph);
        let components = scc
            .components
            .iter()
            .zip(periods)
            .map(|(nodes, period)| {
                let idx: Vec<usize> = nodes.iter().map(|v| v.0).collect();
                let matrix = full.submatrix(&idx);
                let trivial = period.h == 0;
                Ok(ComponentSpectrum {
                    component: period.component,
                    nodes: idx,
                    period: period.h,
                    perron: perron(&matrix, !trivial)?,
                    matrix,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            graph,
            scc,
            components,
            tie_tolerance,
        })
    }

    /// Components upstream of `i`, in topological order.
    pub fn upstream_components(&self, i: NodeId) -> Result<Vec<usize>> {
        let nodes = upstream_nodes(self.graph, i)?;
        let mut comps: Vec<usize> = nodes.iter().map(|v| self.scc.component_of[v.0]).collect();
        comps.sort_unstable();
        comps.dedup();
        Ok(comps)
    }

    /// Upstream components whose Perron eigenvalue ties the maximum.
    /// Empty when every upstream component is trivial.
    pub fn critical_components(&self, upstream: &[usize]) -> (f64, Vec<usize>) {
        let Some(&top) = upstream
            .iter()
            .max_by(|&&a, &&b| self.components[a].rho().total_cmp(&self.components[b].rho()))
        else {
            return (0.0, Vec::new());
        };
        let best = &self.components[top];
        if best.rho() == 0.0 {
            return (0.0, Vec::new());
        }
        let critical = upstream
            .iter()
            .copied()
            .filter(|&c| {
                let other = &self.components[c];
                c == top
                    || (!other.is_trivial()
                        && rho_equal(&best.matrix, best.rho(), &other.matrix, other.rho(), self.tie_tolerance))
            })
            .collect();
        (best.rho(), critical)
    }

    pub fn modulus(&self, critical: &[usize]) -> Option<u64> {
        if critical.is_empty() {
            return None;
        }
        Some(
            critical
                .iter()
                .fold(1u64, |acc, &c| acc.lcm(&self.components[c].period)),
        )
    }

    /// Branching ratio of `i` from the spectral route, with the empirical
    /// `a_i(L)^(1/L)` estimate for comparison.
    pub fn branching_ratio(&self, i: NodeId) -> Result<BranchingRatioReport> {
        let series = walk_counts(self.graph, i, EMPIRICAL_LENGTH)?;
        self.branching_ratio_with_series(i, &series)
    }

    pub fn branching_ratio_with_series(&self, i: NodeId, series: &WalkCountSeries) -> Result<BranchingRatioReport> {
        let upstream = self.upstream_components(i)?;
        let (delta, critical) = self.critical_components(&upstream);
        let empirical = empirical_branching_ratio(series);
        Ok(BranchingRatioReport {
            node: i.0,
            delta,
            g: self.modulus(&critical),
            upstream_sccs: upstream,
            critical_sccs: critical,
            method: "spectral".into(),
            empirical_estimate: empirical,
            agreement: (delta - empirical).abs(),
        })
    }

    /// Longest chain of critical components, minus one, along directed
    /// paths of the condensation inside the upstream set of `i`.
    pub fn degree_bound(&self, i: NodeId, critical: &[usize]) -> Result<usize> {
        let upstream = self.upstream_components(i)?;
        Ok(chain_degree(&self.scc, &upstream, critical))
    }

    /// Full asymptotic profile of `i` from a series of the given length.
    pub fn profile(&self, i: NodeId, max_len: usize) -> Result<AsymptoticProfile> {
        let series = walk_counts(self.graph, i, max_len)?;
        let report = self.branching_ratio_with_series(i, &series)?;
        let g = critical_modulus(&report)?;
        let d = self.degree_bound(i, &report.critical_sccs)?;
        fit_asymptotics(&series, report.delta, g, d)
    }
}

fn chain_degree(scc: &SccDecomposition, upstream: &[usize], critical: &[usize]) -> usize {
    // components are numbered topologically, so ascending order is a valid
    // processing order
    let mut best = vec![0usize; scc.len()];
    let mut longest = 0;
    for &c in upstream {
        let own = usize::from(critical.contains(&c));
        let from_pred = scc
            .predecessors(c)
            .filter(|p| upstream.binary_search(p).is_ok())
            .map(|p| best[p])
            .max()
            .unwrap_or(0);
        best[c] = own + from_pred;
        longest = longest.max(best[c]);
    }
    longest.saturating_sub(1)
}

pub fn branching_ratio(g: &MultiGraph, i: NodeId) -> Result<BranchingRatioReport> {
    GraphAnalysis::new(g)?.branching_ratio(i)
}

/// lcm of the critical periods of a report.
pub fn critical_modulus(report: &BranchingRatioReport) -> Result<u64> {
    if report.delta <= 0.0 {
        return Err(Error::ZeroRho);
    }
    report.g.ok_or(Error::ZeroRho)
}

/// Degree bound for an upstream set given its critical components (parent
/// numbering).
pub fn degree_bound(u: &UpstreamSet, scc: &SccDecomposition, critical: &[usize]) -> usize {
    chain_degree(scc, &u.scc_chain, critical)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueFit {
    pub residue: u64,
    /// Coefficients of `R_s(l)` in powers of `l`, lowest first.
    pub coefficients: Vec<f64>,
    /// Same fit in powers of `t = l / L`.
    pub normalized_coefficients: Vec<f64>,
    /// Root-mean-square residual of `a(l) / rho^l`.
    pub residual: f64,
    pub points: usize,
}

impl ResidueFit {
    /// Degree after dropping terms that are negligible over the window.
    pub fn effective_degree(&self) -> usize {
        let big = self.normalized_coefficients.iter().map(|c| c.abs()).fold(0.0, f64::max);
        self.normalized_coefficients
            .iter()
            .rposition(|c| c.abs() > FIT_TRIM * big)
            .unwrap_or(0)
    }

    pub fn leading(&self) -> f64 {
        self.coefficients[self.effective_degree()]
    }

    pub fn eval(&self, l: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * l + c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticProfile {
    pub node: usize,
    pub rho: f64,
    pub g: u64,
    pub degree_bound: usize,
    pub window: (usize, usize),
    pub residue_fits: Vec<ResidueFit>,
}

impl AsymptoticProfile {
    /// Every residue polynomial has a positive leading term.
    pub fn eventually_positive(&self) -> bool {
        self.residue_fits.iter().all(|f| f.leading() > 0.0)
    }
}

/// Fits `a(l) / rho^l` by a polynomial of degree `degree` separately on each
/// residue class `l mod g` over the tail of the series.
///
/// The window is the last `max(3 g (D+1), 60)` entries after a burn-in of
/// 20. The quotient is formed in log space so large counts never overflow.
pub fn fit_asymptotics(series: &WalkCountSeries, rho: f64, g: u64, degree: usize) -> Result<AsymptoticProfile> {
    if rho <= 0.0 {
        return Err(Error::ZeroRho);
    }
    if g == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let gu = g as usize;
    let len = series.counts.len();
    let required = gu * (degree + 2) * 3;
    if len < required {
        return Err(Error::InsufficientData(format!(
            "{len} entries, need at least {required}"
        )));
    }
    let window = (3 * gu * (degree + 1)).max(FIT_MIN_WINDOW);
    let mut start = len.saturating_sub(window);
    if start < FIT_BURN_IN {
        start = FIT_BURN_IN.min(len - required);
    }
    let last = len - 1;
    let scale = last.max(1) as f64;
    let ln_rho = rho.ln();

    let residue_fits = (0..gu)
        .map(|s| {
            let (ts, ys): (Vec<f64>, Vec<f64>) = (start..len)
                .filter(|l| l % gu == s)
                .map(|l| {
                    let y = (ln_biguint(&series.counts[l]) - l as f64 * ln_rho).exp();
                    (l as f64 / scale, y)
                })
                .unzip();
            let (normalized, residual) = polyfit(&ts, &ys, degree).ok_or_else(|| {
                Error::InsufficientData(format!("residue {s}: {} points for degree {degree}", ts.len()))
            })?;
            let coefficients = normalized
                .iter()
                .enumerate()
                .map(|(k, c)| c / scale.powi(k as i32))
                .collect();
            Ok(ResidueFit {
                residue: s as u64,
                coefficients,
                normalized_coefficients: normalized,
                residual,
                points: ts.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(AsymptoticProfile {
        node: series.node.0,
        rho,
        g,
        degree_bound: degree,
        window: (start, last),
        residue_fits,
    })
}

/// Witnesses for `c delta^l <= a(l) <= l^r delta^l` on a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichCheck {
    pub node: usize,
    pub delta: f64,
    pub exponent: Option<u32>,
    pub lower: Option<f64>,
    pub window: (usize, usize),
    pub pass: bool,
}

pub const SANDWICH_START: usize = 3;
const SANDWICH_SLACK: f64 = 1e-9;
const SANDWICH_MAX_HALVINGS: i32 = 64;

/// Searches the largest `c = 2^-k` and smallest `r in 0..=degree+2` for which
/// the sandwich holds on `[3, L]`. A zero `delta` is a failed check.
pub fn sandwich_check(series: &WalkCountSeries, delta: f64, degree: usize) -> SandwichCheck {
    let last = series.max_len();
    let mut check = SandwichCheck {
        node: series.node.0,
        delta,
        exponent: None,
        lower: None,
        window: (SANDWICH_START, last),
        pass: false,
    };
    if delta <= 0.0 || last < SANDWICH_START {
        return check;
    }
    let ln_delta = delta.ln();
    // excess[l] = ln a(l) - l ln delta
    let excess: Vec<(f64, f64)> = (SANDWICH_START..=last)
        .map(|l| {
            let ln_a = ln_biguint(&series.counts[l]);
            (l as f64, ln_a - l as f64 * ln_delta)
        })
        .collect();
    let slack = |x: f64| SANDWICH_SLACK * x.abs().max(1.0);

    check.exponent =
        (0..=(degree as u32 + 2)).find(|&r| excess.iter().all(|&(l, e)| e <= f64::from(r) * l.ln() + slack(e)));
    let min_excess = excess.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    if min_excess.is_finite() {
        check.lower = (0..=SANDWICH_MAX_HALVINGS)
            .map(|k| 2f64.powi(-k))
            .find(|c| c.ln() <= min_excess + slack(min_excess));
    }
    check.pass = check.exponent.is_some() && check.lower.is_some();
    check
}
