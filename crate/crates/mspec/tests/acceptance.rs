//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

mod common;

use std::time::Instant;

use common::*;
use rand::prelude::*;

use mspec::bottleneck::solve_bottleneck;
use mspec::domain::{solve_domain, DomainSolution, PowerDomain};
use mspec::fptas::{
    build_discretized, fast_copy_count, fptas_copy_count, normalize_cut, solve_fast_fptas_run,
    solve_fptas, solve_integer, solve_uniform,
};
use mspec::instance::{is_feasible_cut, Instance, PowerAssignment};
use mspec::mincut::min_vertex_cut;
use mspec::oracle::{oracle_enum_integer, oracle_opt};

const TOL: f64 = 1e-9;

#[test]
fn criterion_1_oracle_cross_validation() {
    let started = Instant::now();
    let mut rng = rng(101);
    let mut failures = Vec::new();
    for case in 0..500 {
        let inst = random_integer_instance(&mut rng, 5, 5);
        let (opt, witness, _) = oracle_opt(&inst).unwrap();
        let enumerated = oracle_enum_integer(&inst, 1_000_000).unwrap();
        if opt != enumerated {
            failures.push(format!(
                "case {case}: partition oracle {opt} vs enumeration {enumerated} on {}",
                inst.to_json()
            ));
        }
        if (witness.total() - opt).abs() > TOL {
            failures.push(format!("case {case}: witness total drifts from OPT"));
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed > 60.0 {
        failures.push(format!("suite took {elapsed:.1} s, over the 60 s budget"));
    }
    report_criterion(
        1,
        "oracle_opt equals oracle_enum_integer exactly on 500 integer instances",
        failures,
    );
}

#[test]
fn criterion_2_fptas_guarantee() {
    let mut rng = rng(102);
    let mut failures = Vec::new();
    for case in 0..200 {
        let inst = random_real_instance(&mut rng, 6, 10.0);
        let (opt, _, _) = oracle_opt(&inst).unwrap();
        for eps in [0.1, 0.25, 0.5] {
            let result = solve_fptas(&inst, eps).unwrap();
            if !is_feasible_cut(&inst, &result.assignment)
                .unwrap()
                .is_feasible()
            {
                failures.push(format!("case {case} eps {eps}: infeasible output"));
                continue;
            }
            if result.objective < opt - TOL || result.objective > (1.0 + eps) * opt + TOL {
                failures.push(format!(
                    "case {case} eps {eps}: objective {} outside [{opt}, {}] on {}",
                    result.objective,
                    (1.0 + eps) * opt,
                    inst.to_json()
                ));
            }
        }
    }
    report_criterion(
        2,
        "solve_fptas feasible and within [OPT, (1+eps) OPT] on 200 instances x 3 eps",
        failures,
    );
}

#[test]
fn criterion_3_fast_fptas_guarantee() {
    let mut rng = rng(103);
    let mut failures = Vec::new();
    for case in 0..200 {
        let inst = random_real_instance(&mut rng, 6, 10.0);
        let (opt, _, _) = oracle_opt(&inst).unwrap();
        for eps in [0.1, 0.25, 0.5] {
            let run = solve_fast_fptas_run(&inst, eps, &Default::default()).unwrap();
            if !is_feasible_cut(&inst, &run.result.assignment)
                .unwrap()
                .is_feasible()
            {
                failures.push(format!("case {case} eps {eps}: infeasible output"));
                continue;
            }
            if run.result.objective < opt - TOL || run.result.objective > (1.0 + eps) * opt + TOL {
                failures.push(format!(
                    "case {case} eps {eps}: objective {} outside [{opt}, {}]",
                    run.result.objective,
                    (1.0 + eps) * opt
                ));
            }
            if run.z < opt - TOL || run.z > 2.0 * opt + TOL {
                failures.push(format!(
                    "case {case} eps {eps}: Z {} outside [OPT, 2 OPT] = [{opt}, {}]",
                    run.z,
                    2.0 * opt
                ));
            }
        }
    }
    report_criterion(
        3,
        "solve_fast_fptas within the band and OPT <= Z <= 2 OPT on every instance",
        failures,
    );
}

#[test]
fn criterion_4_bottleneck() {
    let mut rng = rng(104);
    let mut failures = Vec::new();
    for case in 0..500 {
        let inst = random_real_instance(&mut rng, 6, 10.0);
        let result = solve_bottleneck(&inst).unwrap();
        let scanned = scan_bottleneck(&inst);
        if result.p_star != scanned {
            failures.push(format!(
                "case {case}: binary search {} vs linear scan {scanned}",
                result.p_star
            ));
        }
        let tight = result.p_star == 0.0
            || (0..inst.edge_count()).any(|i| requirement_of(&inst, i) == result.p_star);
        if !tight {
            failures.push(format!(
                "case {case}: p* {} is not an edge power requirement",
                result.p_star
            ));
        }
        let (opt, _, _) = oracle_opt(&inst).unwrap();
        let n = inst.vertex_count() as f64;
        if result.p_star > opt + TOL || opt > n * result.p_star + TOL {
            failures.push(format!(
                "case {case}: sandwich p* <= OPT <= n p* violated: p*={}, OPT={opt}, n={n}",
                result.p_star
            ));
        }
    }
    report_criterion(
        4,
        "bottleneck matches the threshold scan, is tight, and sandwiches OPT on 500 instances",
        failures,
    );
}

#[test]
fn criterion_5_exact_solvers() {
    let mut rng = rng(105);
    let mut failures = Vec::new();
    for case in 0..150 {
        let inst = random_integer_instance(&mut rng, 6, 6);
        let result = solve_integer(&inst).unwrap();
        let (opt, _, _) = oracle_opt(&inst).unwrap();
        if result.objective != opt {
            failures.push(format!(
                "integer case {case}: {} vs oracle {opt} on {}",
                result.objective,
                inst.to_json()
            ));
        }
        if !is_feasible_cut(&inst, &result.assignment)
            .unwrap()
            .is_feasible()
        {
            failures.push(format!("integer case {case}: infeasible output"));
        }
        if let Ok(enumerated) = oracle_enum_integer(&inst, 1_000_000) {
            if result.objective != enumerated {
                failures.push(format!(
                    "integer case {case}: {} vs enumeration {enumerated}",
                    result.objective
                ));
            }
        }
    }
    for case in 0..150 {
        let weight = *[1.0, 2.5, 3.25].choose(&mut rng).unwrap();
        let inst = random_uniform_instance(&mut rng, 8, weight);
        let result = solve_uniform(&inst).unwrap();
        let (opt, _, _) = oracle_opt(&inst).unwrap();
        if (result.objective - opt).abs() > TOL {
            failures.push(format!(
                "uniform case {case}: {} vs oracle {opt} on {}",
                result.objective,
                inst.to_json()
            ));
        }
        if !is_feasible_cut(&inst, &result.assignment)
            .unwrap()
            .is_feasible()
        {
            failures.push(format!("uniform case {case}: infeasible output"));
        }
    }
    report_criterion(
        5,
        "solve_integer and solve_uniform match the oracle exactly and certify feasible",
        failures,
    );
}

#[test]
fn criterion_6_domain_solver() {
    let mut rng = rng(106);
    let mut failures = Vec::new();
    for case in 0..200 {
        let inst = random_real_instance(&mut rng, 5, 8.0);
        let n = inst.vertex_count();
        let lists: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            0.0
                        } else {
                            rng.gen_range(0.0..8.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let domain = PowerDomain::new(
            inst.vertex_names()
                .iter()
                .cloned()
                .zip(lists.iter().cloned())
                .collect(),
        )
        .unwrap();
        let sorted: Vec<Vec<f64>> = inst
            .vertex_names()
            .iter()
            .map(|name| domain.get(name).unwrap().to_vec())
            .collect();

        // Cartesian enumeration ground truth.
        let mut idx = vec![0usize; n];
        let mut expected: Option<f64> = None;
        'outer: loop {
            let values: Vec<f64> = (0..n).map(|v| sorted[v][idx[v]]).collect();
            let pa = PowerAssignment::from_values(&inst, &values).unwrap();
            if is_feasible_cut(&inst, &pa).unwrap().is_feasible() {
                let total: f64 = values.iter().sum();
                if expected.is_none_or(|b| total < b) {
                    expected = Some(total);
                }
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'outer;
                }
                idx[pos] += 1;
                if idx[pos] < sorted[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }

        match (solve_domain(&inst, &domain).unwrap(), expected) {
            (DomainSolution::Feasible(result), Some(best)) => {
                if (result.objective - best).abs() > TOL {
                    failures.push(format!(
                        "case {case}: solver {} vs enumeration {best}",
                        result.objective
                    ));
                }
            }
            (DomainSolution::Infeasible, None) => {}
            (solution, expected) => failures.push(format!(
                "case {case}: feasibility mismatch (solver feasible: {}, enumeration: {})",
                solution.is_feasible(),
                expected.is_some()
            )),
        }
    }
    report_criterion(
        6,
        "domain solver equals cartesian enumeration on 200 instances with 3-value domains",
        failures,
    );
}

#[test]
fn criterion_7_structural_claims() {
    let mut rng = rng(107);
    let mut failures = Vec::new();
    for case in 0..60 {
        let inst = random_real_instance(&mut rng, 5, 10.0);
        let n = inst.vertex_count();
        let copies = rng.gen_range(1..=(500 / n.max(1)));
        let alpha = rng.gen_range(0.05..3.0);
        let dg = build_discretized(&inst, alpha, copies).unwrap();
        assert!(dg.total_copies() <= 500);

        // Neighbourhood nesting, exhaustively per vertex.
        let mut adjacency: Vec<std::collections::BTreeSet<usize>> =
            vec![Default::default(); dg.total_copies() + 2];
        let id = |node: mspec::mincut::CutNode| match node {
            mspec::mincut::CutNode::Inner(i) => i,
            mspec::mincut::CutNode::Source => dg.total_copies(),
            mspec::mincut::CutNode::Sink => dg.total_copies() + 1,
        };
        for &(a, b) in dg.graph.edges() {
            adjacency[id(a)].insert(id(b));
            adjacency[id(b)].insert(id(a));
        }
        for v in 0..n {
            for i in 1..copies {
                let lower = &adjacency[dg.inner_index(v, i - 1)];
                let upper = &adjacency[dg.inner_index(v, i)];
                if !lower.is_superset(upper) {
                    failures.push(format!(
                        "case {case}: nesting violated at vertex {v} copy {i}"
                    ));
                }
            }
        }

        // Prefix normalization keeps size and separation, also on scrambled
        // and padded separators.
        let min_cut = min_vertex_cut(&dg.graph).unwrap().cut;
        let base: Vec<(usize, usize)> = min_cut.iter().map(|&i| dg.copy_of(i)).collect();
        let mut candidates = vec![base.clone()];
        for _ in 0..4 {
            let mut padded = base.clone();
            for v in 0..n {
                for i in 0..copies {
                    if rng.gen_bool(0.15) && !padded.contains(&(v, i)) {
                        padded.push((v, i));
                    }
                }
            }
            candidates.push(padded);
        }
        for cut in candidates {
            if !dg.is_separator(&cut) {
                failures.push(format!("case {case}: candidate separator is not one"));
                continue;
            }
            let normalized = normalize_cut(&dg, &cut);
            if normalized.len() > cut.len() {
                failures.push(format!("case {case}: normalization grew the cut"));
            }
            if !dg.is_separator(&normalized) {
                failures.push(format!("case {case}: normalization broke separation"));
            }
        }
    }
    report_criterion(
        7,
        "neighbourhood nesting and prefix normalization verified on every small copy graph",
        failures,
    );
}

#[test]
fn criterion_8_barrier_pipeline() {
    use mspec::barrier::{min_shrinkage, reduce_disks, Disk, DiskConfig, Rect, ShrinkMode};
    let mut failures = Vec::new();

    let cfg = DiskConfig::new(
        Rect {
            x0: 0.0,
            y0: 0.0,
            x1: 3.0,
            y1: 2.0,
        },
        vec![
            Disk {
                x: 0.8,
                y: 1.0,
                r: 1.0,
            },
            Disk {
                x: 2.2,
                y: 1.0,
                r: 1.0,
            },
        ],
    )
    .unwrap();
    let reduced = reduce_disks(&cfg).instance;
    let mut weights: Vec<f64> = reduced.edges().iter().map(|e| e.weight).collect();
    weights.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (got, want) in weights.iter().zip([0.2, 0.2, 0.6]) {
        if (got - want).abs() > TOL {
            failures.push(format!("reduced weight {got} differs from {want}"));
        }
    }
    let shrink = min_shrinkage(&cfg, 0.1, ShrinkMode::Fptas).unwrap();
    if shrink.objective < 0.2 - TOL || shrink.objective > 0.22 + TOL {
        failures.push(format!(
            "two-disk objective {} outside [0.2, 0.22]",
            shrink.objective
        ));
    }

    let mut rng = rng(108);
    for case in 0..40 {
        let rect = Rect {
            x0: 0.0,
            y0: 0.0,
            x1: 6.0,
            y1: 3.0,
        };
        let disks: Vec<Disk> = (0..5)
            .map(|_| Disk {
                x: rng.gen_range(0.0..6.0),
                y: rng.gen_range(0.0..3.0),
                r: rng.gen_range(0.5..1.5),
            })
            .collect();
        let cfg = DiskConfig::new(rect, disks).unwrap();

        let (dx, dy) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let moved = DiskConfig::new(
            Rect {
                x0: rect.x0 + dx,
                y0: rect.y0 + dy,
                x1: rect.x1 + dx,
                y1: rect.y1 + dy,
            },
            cfg.disks
                .iter()
                .map(|d| Disk {
                    x: d.x + dx,
                    y: d.y + dy,
                    r: d.r,
                })
                .collect(),
        )
        .unwrap();
        let original = reduce_disks(&cfg).instance;
        let translated = reduce_disks(&moved).instance;
        if original.edge_count() != translated.edge_count() {
            failures.push(format!("case {case}: translation changed the edge set"));
        } else {
            for (a, b) in original.edges().iter().zip(translated.edges()) {
                if (a.weight - b.weight).abs() > TOL {
                    failures.push(format!(
                        "case {case}: translation moved a weight by {}",
                        (a.weight - b.weight).abs()
                    ));
                    break;
                }
            }
        }

        let mirrored = DiskConfig::new(
            rect,
            cfg.disks
                .iter()
                .map(|d| Disk {
                    x: rect.x0 + rect.x1 - d.x,
                    y: d.y,
                    r: d.r,
                })
                .collect(),
        )
        .unwrap();
        let a = min_shrinkage(&cfg, 0.25, ShrinkMode::Fptas).unwrap();
        let b = min_shrinkage(&mirrored, 0.25, ShrinkMode::Fptas).unwrap();
        if (a.objective - b.objective).abs() > TOL {
            failures.push(format!(
                "case {case}: mirror changed the objective by {}",
                (a.objective - b.objective).abs()
            ));
        }
    }
    report_criterion(
        8,
        "two-disk worked example, translation invariance, and mirror symmetry",
        failures,
    );
}

#[test]
fn criterion_9_scale() {
    let mut failures = Vec::new();

    // Strictly fewer copies for the fast scheme across the whole grid.
    for n in 3..=40 {
        for step in 1..=20 {
            let eps = step as f64 * 0.05;
            let fast = fast_copy_count(n, eps).unwrap();
            let plain = fptas_copy_count(n, eps).unwrap();
            if fast >= plain {
                failures.push(format!("n={n} eps={eps}: fast {fast} !< plain {plain}"));
            }
        }
    }

    // A mid-size instance solves fast enough.
    let mut rng = rng(109);
    let n = 30;
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut nodes = vec!["s".to_string(), "t".to_string()];
    nodes.extend(names.iter().cloned());
    let mut pairs = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i] == "s" && nodes[j] == "t" {
                continue;
            }
            pairs.push((i, j));
        }
    }
    pairs.shuffle(&mut rng);
    let edges: Vec<(String, String, f64)> = pairs
        .into_iter()
        .take(100)
        .map(|(i, j)| (nodes[i].clone(), nodes[j].clone(), rng.gen_range(0.0..10.0)))
        .collect();
    let inst = Instance::new(names, &edges).unwrap();
    assert_eq!(inst.edge_count(), 100);

    let started = Instant::now();
    let run = solve_fast_fptas_run(&inst, 0.25, &Default::default()).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion 9 detail: n=30 m=100 eps=0.25 solved in {elapsed:.2} s \
         ({} copies, {} copy-graph edges, objective {})",
        run.copies, run.stats.discretized_edges, run.result.objective
    );
    if elapsed > 60.0 {
        failures.push(format!(
            "fast solve took {elapsed:.1} s, over the 60 s budget"
        ));
    }
    if !is_feasible_cut(&inst, &run.result.assignment)
        .unwrap()
        .is_feasible()
    {
        failures.push("fast solve output infeasible".to_string());
    }

    report_criterion(
        9,
        "fast scheme uses strictly fewer copies and solves n=30, m=100 within a minute",
        failures,
    );
}
