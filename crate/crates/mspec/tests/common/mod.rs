//! Shared helpers for the integration suites.

#![allow(dead_code)]

use mspec::instance::{is_feasible_cut, Instance, Node, PowerAssignment};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(vertices: &[&str], edges: &[(&str, &str, f64)]) -> Instance {
    Instance::new(vertices.iter().map(|s| s.to_string()).collect(), edges).unwrap()
}

pub fn path_345() -> Instance {
    instance(
        &["u", "v"],
        &[("s", "u", 3.0), ("u", "v", 4.0), ("v", "t", 5.0)],
    )
}

pub fn random_instance_with(
    rng: &mut ChaCha8Rng,
    n_max: usize,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> Instance {
    let n = rng.gen_range(1..=n_max);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut nodes = vec!["s".to_string(), "t".to_string()];
    nodes.extend(names.iter().cloned());
    let p = rng.gen_range(0.3..0.9);
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if (nodes[i] == "s" && nodes[j] == "t") || !rng.gen_bool(p) {
                continue;
            }
            edges.push((nodes[i].clone(), nodes[j].clone(), weight(rng)));
        }
    }
    Instance::new(names, &edges).unwrap()
}

pub fn random_integer_instance(rng: &mut ChaCha8Rng, n_max: usize, w_max: u64) -> Instance {
    random_instance_with(rng, n_max, |rng| rng.gen_range(0..=w_max) as f64)
}

pub fn random_real_instance(rng: &mut ChaCha8Rng, n_max: usize, w_max: f64) -> Instance {
    random_instance_with(rng, n_max, |rng| {
        if rng.gen_bool(0.05) {
            0.0
        } else {
            rng.gen_range(0.0..w_max)
        }
    })
}

/// Uniform positive weight with occasional zero-weight edges mixed in.
pub fn random_uniform_instance(rng: &mut ChaCha8Rng, n_max: usize, weight: f64) -> Instance {
    random_instance_with(
        rng,
        n_max,
        |rng| {
            if rng.gen_bool(0.1) {
                0.0
            } else {
                weight
            }
        },
    )
}

/// Per-edge uniform-power threshold, recomputed from scratch.
pub fn requirement_of(inst: &Instance, edge_index: usize) -> f64 {
    let e = &inst.edges()[edge_index];
    match (e.u.is_terminal(), e.v.is_terminal()) {
        (false, false) => e.weight / 2.0,
        (true, true) => 0.0,
        _ => e.weight,
    }
}

/// Independent bottleneck oracle: ascending linear scan over all candidate
/// thresholds, testing each with the uniform assignment and the feasibility
/// checker.
pub fn scan_bottleneck(inst: &Instance) -> f64 {
    let mut thresholds = vec![0.0];
    for i in 0..inst.edge_count() {
        thresholds.push(requirement_of(inst, i));
    }
    thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    thresholds.dedup();
    for p in thresholds {
        let uniform = PowerAssignment::from_values(inst, &vec![p; inst.vertex_count()]).unwrap();
        if is_feasible_cut(inst, &uniform).unwrap().is_feasible() {
            return p;
        }
    }
    unreachable!("removing every edge disconnects the terminals");
}

/// Terminal-free node check helper for witness paths.
pub fn is_internal(node: Node) -> bool {
    !node.is_terminal()
}

/// Prints the acceptance verdict line and panics with the collected details
/// on failure.
pub fn report_criterion(number: u32, description: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {number}: PASS - {description}");
    } else {
        println!("criterion {number}: FAIL - {description}");
        for f in failures.iter().take(10) {
            println!("  {f}");
        }
        panic!(
            "criterion {number} failed with {} violation(s)",
            failures.len()
        );
    }
}
