//! Exact solver for the bottleneck variant: the minimum uniform power whose
//! induced removals disconnect s and t. Besides being useful on its own it
//! supplies the scale parameter for the approximation schemes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Edge, EdgeRecord, Instance, SearchOutcome};

/// Outcome of the bottleneck solve; `p_star` is the power requirement of some
/// edge, or 0, and assigning it uniformly to all of `V` disconnects s and t.
#[derive(Debug, Clone, Serialize)]
pub struct BottleneckResult {
    pub p_star: f64,
    pub removed_edges: Vec<EdgeRecord>,
}

/// Per-edge threshold at which a uniform power removes it: half the weight
/// for internal edges, the full weight for terminal edges.
pub fn power_requirement(edge: &Edge) -> f64 {
    match (edge.u.is_terminal(), edge.v.is_terminal()) {
        (false, false) => edge.weight / 2.0,
        (true, true) => 0.0, // only weight-0 terminal-terminal edges exist
        _ => edge.weight,
    }
}

/// Minimum `p` such that deleting all edges with requirement `<= p`
/// disconnects s and t, found by binary search over the sorted requirements.
pub fn solve_bottleneck(inst: &Instance) -> Result<BottleneckResult> {
    solve_bottleneck_by(inst, power_requirement)
}

/// Bottleneck search with a custom per-edge requirement, as used by the
/// vertex-cost pipeline (requirements in power-cost units).
pub(crate) fn solve_bottleneck_by(
    inst: &Instance,
    requirement: impl Fn(&Edge) -> f64,
) -> Result<BottleneckResult> {
    let reqs: Vec<f64> = inst.edges().iter().map(&requirement).collect();
    let mut thresholds: Vec<f64> = Vec::with_capacity(reqs.len() + 1);
    thresholds.push(0.0);
    thresholds.extend(reqs.iter().copied());
    thresholds.sort_by(|a, b| a.partial_cmp(b).expect("finite requirements"));
    thresholds.dedup();

    let disconnects = |p: f64| -> bool {
        matches!(
            inst.search_after_removal(|i, _| reqs[i] > p),
            SearchOutcome::Disconnected { .. }
        )
    };

    if !disconnects(*thresholds.last().expect("at least the zero threshold")) {
        // Only reachable when s and t share an unremovable edge, which
        // instance validation already excludes.
        return Err(Error::InfeasibleInstance);
    }

    // The predicate is monotone false -> true over thresholds.
    let mut lo = 0usize;
    let mut hi = thresholds.len() - 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if disconnects(thresholds[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let p_star = thresholds[lo];
    let removed_edges = inst
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| reqs[i] <= p_star)
        .map(|(_, e)| inst.record(e))
        .collect();
    Ok(BottleneckResult {
        p_star,
        removed_edges,
    })
}
