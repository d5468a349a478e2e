//! Laws checked over the seeded random corpus against routes that do not
//! share code with the library's own pipeline.

mod common;

use branchtool::asymptotics::{sandwich_check, GraphAnalysis};
use branchtool::fixtures;
use branchtool::graph::induced_subgraph;
use branchtool::spectral::{characteristic_polynomial, spectrum_small, IntPoly};
use branchtool::structure::{scc_decompose, upstream_nodes};
use branchtool::walks::{ln_biguint, walk_counts};
use branchtool::{is_acyclic, AdjacencyMatrix, MultiGraph};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

fn mat_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn big_rows(m: &AdjacencyMatrix) -> Vec<Vec<BigUint>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigUint::from).collect())
        .collect()
}

/// gcd of the lengths `l <= n` with `tr(B^l) > 0`, which is the period of
/// an irreducible block since every simple cycle has length at most `n`.
fn trace_period(block: &AdjacencyMatrix) -> u64 {
    let b = big_rows(block);
    let mut power = b.clone();
    let mut h = 0u64;
    for l in 1..=block.size() as u64 {
        if (0..block.size()).any(|i| !power[i][i].is_zero()) {
            h = h.gcd(&l);
        }
        power = mat_mul(&power, &b);
    }
    h
}

fn for_each_graph(mut f: impl FnMut(usize, &MultiGraph)) {
    for (k, g) in common::corpus().iter().enumerate() {
        f(k, g);
    }
}

#[test]
fn delta_is_the_spectral_radius_of_the_upstream_matrix() {
    for_each_graph(|k, g| {
        let analysis = GraphAnalysis::new(g).unwrap();
        for i in g.nodes() {
            let delta = analysis.branching_ratio(i).unwrap().delta;
            let up = upstream_nodes(g, i).unwrap();
            let sub = induced_subgraph(g, &up).unwrap();
            let radius = spectrum_small(&sub.graph.adjacency_matrix()).unwrap().spectral_radius();
            assert!(
                (delta - radius).abs() < 1e-6,
                "graph {k} node {}: delta {delta} vs upstream radius {radius}",
                i.0
            );
        }
    });
}

#[test]
fn characteristic_polynomial_factors_over_components() {
    for_each_graph(|k, g| {
        let full = g.adjacency_matrix();
        let scc = scc_decompose(g);
        let product = scc.components.iter().fold(IntPoly::one(), |acc, comp| {
            let idx: Vec<usize> = comp.iter().map(|v| v.0).collect();
            acc.mul(&characteristic_polynomial(&full.submatrix(&idx)))
        });
        assert_eq!(characteristic_polynomial(&full), product, "graph {k}");
    });
}

#[test]
fn periods_match_closed_walk_lengths() {
    for_each_graph(|k, g| {
        let full = g.adjacency_matrix();
        let scc = scc_decompose(g);
        for (comp, period) in scc.components.iter().zip(scc.periods(g)) {
            let idx: Vec<usize> = comp.iter().map(|v| v.0).collect();
            assert_eq!(
                period.h,
                trace_period(&full.submatrix(&idx)),
                "graph {k} component {idx:?}"
            );
        }
    });
}

#[test]
fn acyclic_graphs_have_zero_branching_ratios() {
    let mut acyclic = 0;
    for_each_graph(|k, g| {
        let analysis = GraphAnalysis::new(g).unwrap();
        let all_zero = g.nodes().all(|i| analysis.branching_ratio(i).unwrap().delta == 0.0);
        assert_eq!(is_acyclic(g), all_zero, "graph {k}");
        if all_zero {
            acyclic += 1;
            let n = g.node_count();
            for i in g.nodes() {
                let s = walk_counts(g, i, n).unwrap();
                assert!(s.counts[n].is_zero(), "graph {k}: a_{}({n}) nonzero", i.0);
            }
        }
    });
    assert!(acyclic > 0, "corpus should contain acyclic graphs");
}

#[test]
fn sandwich_witnesses_bound_the_counts() {
    for_each_graph(|k, g| {
        let analysis = GraphAnalysis::new(g).unwrap();
        for i in g.nodes() {
            let report = analysis.branching_ratio(i).unwrap();
            if report.delta == 0.0 {
                continue;
            }
            let d = analysis.degree_bound(i, &report.critical_sccs).unwrap();
            let series = walk_counts(g, i, 120).unwrap();
            let check = sandwich_check(&series, report.delta, d);
            let excess: Vec<(f64, f64)> = (check.window.0..=check.window.1)
                .map(|l| (l as f64, ln_biguint(&series.counts[l]) - l as f64 * report.delta.ln()))
                .collect();
            // counts never vanish once delta > 0, so a lower constant exists
            let c = check
                .lower
                .unwrap_or_else(|| panic!("graph {k} node {}: no lower constant", i.0));
            assert!(
                excess.iter().all(|&(_, e)| c.ln() <= e + 1e-9),
                "graph {k} node {}",
                i.0
            );
            if let Some(r) = check.exponent {
                assert!(excess
                    .iter()
                    .all(|&(l, e)| e <= f64::from(r) * l.ln() + 1e-9 * e.abs().max(1.0)));
            }
            // l^(D+2) delta^l dominates the tail
            let r = (d + 2) as f64;
            assert!(
                excess
                    .iter()
                    .filter(|&&(l, _)| l >= 60.0)
                    .all(|&(l, e)| e <= r * l.ln()),
                "graph {k} node {}",
                i.0
            );
        }
    });
}

#[test]
fn sandwich_passes_on_fixtures() {
    for g in [
        fixtures::fibonacci(),
        fixtures::six_node(),
        fixtures::upstream_left(),
        fixtures::alpha_beta(2, 3),
    ] {
        let analysis = GraphAnalysis::new(&g).unwrap();
        for i in g.nodes() {
            let report = analysis.branching_ratio(i).unwrap();
            let d = analysis.degree_bound(i, &report.critical_sccs).unwrap();
            let check = sandwich_check(&walk_counts(&g, i, 300).unwrap(), report.delta, d);
            assert!(check.pass, "{check:?}");
        }
    }
}

/// 200 random graphs with n <= 7, multiplicities <= 2 and at least one cycle.
fn cyclic_corpus() -> Vec<MultiGraph> {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(common::CORPUS_SEED + 1);
    let mut out = Vec::new();
    while out.len() < 200 {
        let g = common::random_graph(&mut rng, 7, 2, 0.3);
        if !is_acyclic(&g) {
            out.push(g);
        }
    }
    out
}

/// |delta - a(L)^(1/L)| <= 0.05 at L = 200 for every node with delta >= 1.
///
/// Since a(L) ~ C L^D delta^L, this estimate carries a factor
/// (C L^D)^(1/L); at L = 200 that alone is 1.027 for D = 1, so the bound
/// cannot hold for nodes downstream of chained critical components (or with
/// large C) once delta is about 2. Kept as stated; see
/// `two_length_estimate_tracks_delta` for the estimate that does converge.
#[test]
fn empirical_estimate_tracks_delta() {
    let mut violations = Vec::new();
    for (k, g) in cyclic_corpus().iter().enumerate() {
        let analysis = GraphAnalysis::new(g).unwrap();
        for i in g.nodes() {
            let report = analysis.branching_ratio(i).unwrap();
            if report.delta >= 1.0 && report.agreement > 0.05 {
                let d = analysis.degree_bound(i, &report.critical_sccs).unwrap();
                violations.push(format!(
                    "graph {k} node {}: delta {:.6}, estimate {:.6}, D = {d}",
                    i.0, report.delta, report.empirical_estimate
                ));
            }
        }
    }
    assert!(
        violations.is_empty(),
        "{} violations:\n{}",
        violations.len(),
        violations.join("\n")
    );
}

#[test]
fn two_length_estimate_tracks_delta() {
    const L: usize = 200;
    for (k, g) in cyclic_corpus().iter().enumerate() {
        let analysis = GraphAnalysis::new(g).unwrap();
        for i in g.nodes() {
            let delta = analysis.branching_ratio(i).unwrap().delta;
            if delta < 1.0 {
                continue;
            }
            // (a(2L) / a(L))^(1/L) cancels C and leaves 2^(D/L)
            let s = walk_counts(g, i, 2 * L).unwrap();
            let estimate = ((ln_biguint(&s.counts[2 * L]) - ln_biguint(&s.counts[L])) / L as f64).exp();
            assert!(
                (estimate - delta).abs() <= 0.05,
                "graph {k} node {}: {estimate} vs {delta}",
                i.0
            );
        }
    }
}

#[test]
fn fits_match_closed_forms() {
    // 6-node graph: a_1(l) = 2^floor((l+1)/3) gives R = (1, 2^(-1/3), 2^(1/3))
    let g = fixtures::six_node();
    let profile = GraphAnalysis::new(&g)
        .unwrap()
        .profile(g.node("1").unwrap(), 240)
        .unwrap();
    for (fit, e) in profile.residue_fits.iter().zip([0.0, -1.0, 1.0]) {
        let want = 2f64.powf(e / 3.0);
        assert!((fit.coefficients[0] / want - 1.0).abs() < 1e-4, "{fit:?}");
    }
    // a_2(l) = 2^floor(l/3), so R_s = 2^(-s/3)
    let profile = GraphAnalysis::new(&g)
        .unwrap()
        .profile(g.node("2").unwrap(), 240)
        .unwrap();
    for fit in &profile.residue_fits {
        let want = 2f64.powf(-(fit.residue as f64) / 3.0);
        assert!((fit.coefficients[0] / want - 1.0).abs() < 1e-4, "{fit:?}");
    }
    // alpha/beta: a_1(l) / alpha^l = 1 + (beta / alpha) l
    let g = fixtures::alpha_beta(3, 5);
    let profile = GraphAnalysis::new(&g)
        .unwrap()
        .profile(g.node("1").unwrap(), 240)
        .unwrap();
    let c = &profile.residue_fits[0].coefficients;
    assert!(
        (c[0] - 1.0).abs() < 1e-4 && (c[1] / (5.0 / 3.0) - 1.0).abs() < 1e-4,
        "{c:?}"
    );
}

#[test]
fn irreducible_constants_differ_by_node_factors() {
    let g = fixtures::fibonacci();
    let analysis = GraphAnalysis::new(&g).unwrap();
    let c: Vec<f64> = g
        .nodes()
        .map(|i| {
            let p = analysis.profile(i, 240).unwrap();
            assert_eq!(p.residue_fits.len(), 1);
            assert_eq!(p.residue_fits[0].coefficients.len(), 1);
            p.residue_fits[0].coefficients[0]
        })
        .collect();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((c[1] / c[0] - phi).abs() < 1e-9, "{c:?}");
}

#[test]
fn fitted_profiles_are_eventually_positive() {
    for_each_graph(|k, g| {
        let analysis = GraphAnalysis::new(g).unwrap();
        for i in g.nodes() {
            if analysis.branching_ratio(i).unwrap().delta == 0.0 {
                continue;
            }
            let profile = analysis.profile(i, 240).unwrap();
            assert!(profile.eventually_positive(), "graph {k} node {}: {profile:?}", i.0);
        }
    });
}

#[test]
fn cesaro_deviation_shrinks_on_irreducible_fixtures() {
    use branchtool::spectral::{cesaro_deviation, perron};
    for g in [
        fixtures::fibonacci(),
        fixtures::six_node(),
        fixtures::polycycle(&[2, 3]),
        fixtures::polycycle(&[1, 2, 5]),
        fixtures::cycle(2),
        fixtures::cycle(5),
    ] {
        let block = g.adjacency_matrix();
        let pd = perron(&block, true).unwrap();
        let dev: Vec<f64> = [100, 1_000, 10_000]
            .iter()
            .map(|&k| cesaro_deviation(&block, &pd, k).unwrap())
            .collect();
        assert!(dev[0] >= dev[1] && dev[1] >= dev[2], "{dev:?}");
        // O(1/k): each tenfold step in k cuts the deviation roughly tenfold
        let c = 100.0 * dev[0];
        assert!(dev[1] <= 2.0 * c / 1e3 && dev[2] <= 2.0 * c / 1e4, "{dev:?}");
    }
}
