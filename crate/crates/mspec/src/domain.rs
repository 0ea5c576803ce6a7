//! Exact solver for per-vertex finite power domains, and the discrete
//! restriction (powers limited to incident edge weights) built on it.
//!
//! Vertex `v` with allowed values `d_0 < d_1 < ... < d_c` becomes `c + 1`
//! copies where copy `i` costs the gap `d_{i+1} - d_i` and the last copy is
//! uncuttable. A minimum-cost vertex cut then reads out as the assignment
//! `p_v = d_k` for `k` cut copies of `v`; forced minimum payments (domains
//! not containing zero) are priced in because the edge rule compares the
//! original domain values.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fptas::{SolveOptions, SolverStats};
use crate::instance::{Instance, Node, PowerAssignment, SolveResult};
use crate::mincut::{min_cost_vertex_cut, CutGraph, CutNode};

/// Per-vertex sorted sets of allowed power values.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDomain {
    values: BTreeMap<String, Vec<f64>>,
}

impl PowerDomain {
    /// Validates, sorts, and deduplicates the per-vertex value lists.
    pub fn new(raw: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (vertex, mut list) in raw {
            if list.is_empty() {
                return Err(Error::EmptyDomain(vertex));
            }
            for &value in &list {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::InvalidDomainValue { vertex, value });
                }
            }
            list.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
            list.dedup();
            values.insert(vertex, list);
        }
        Ok(PowerDomain { values })
    }

    /// Parses the JSON form `{"u": [0, 1, 2.5]}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, Vec<f64>> =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        PowerDomain::new(raw)
    }

    pub fn get(&self, vertex: &str) -> Option<&[f64]> {
        self.values.get(vertex).map(|v| v.as_slice())
    }

    /// The discrete restriction: each vertex may take power zero or the
    /// weight of one of its incident edges (terminal edges included).
    pub fn from_incident_weights(inst: &Instance) -> Self {
        let mut values: BTreeMap<String, Vec<f64>> = inst
            .vertex_names()
            .iter()
            .map(|name| (name.clone(), vec![0.0]))
            .collect();
        for e in inst.edges() {
            for node in [e.u, e.v] {
                if let Node::Vertex(i) = node {
                    values
                        .get_mut(&inst.vertex_names()[i])
                        .expect("vertex present")
                        .push(e.weight);
                }
            }
        }
        PowerDomain::new(values).expect("weights are finite and non-negative")
    }
}

/// Outcome of a domain-restricted solve.
#[derive(Debug)]
pub enum DomainSolution {
    Feasible(SolveResult),
    /// No value choice disconnects s and t.
    Infeasible,
}

impl DomainSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, DomainSolution::Feasible(_))
    }
}

#[derive(Debug)]
pub struct DomainRun {
    pub solution: DomainSolution,
    pub stats: SolverStats,
}

#[derive(Debug)]
pub struct DiscreteRun {
    pub result: SolveResult,
    pub stats: SolverStats,
}

/// Minimum `sum p_v` over assignments with `p_v` in its domain that
/// disconnect s and t; reports infeasibility when no such assignment exists.
pub fn solve_domain(inst: &Instance, domain: &PowerDomain) -> Result<DomainSolution> {
    Ok(solve_domain_run(inst, domain, &SolveOptions::default())?.solution)
}

pub fn solve_domain_run(
    inst: &Instance,
    domain: &PowerDomain,
    opts: &SolveOptions,
) -> Result<DomainRun> {
    let n = inst.vertex_count();
    let mut lists: Vec<&[f64]> = Vec::with_capacity(n);
    for name in inst.vertex_names() {
        lists.push(
            domain
                .get(name)
                .ok_or_else(|| Error::MissingDomain(name.clone()))?,
        );
    }

    let total: u128 = lists.iter().map(|l| l.len() as u128).sum();
    if total > opts.copy_cap as u128 {
        return Err(Error::CopyCapExceeded {
            needed: total,
            cap: opts.copy_cap,
        });
    }

    let mut offsets = Vec::with_capacity(n);
    let mut costs = Vec::with_capacity(total as usize);
    for list in &lists {
        offsets.push(costs.len());
        for i in 0..list.len() {
            if i + 1 < list.len() {
                costs.push(list[i + 1] - list[i]);
            } else {
                costs.push(f64::INFINITY);
            }
        }
    }
    let mut graph = CutGraph::with_costs(costs);

    for e in inst.edges() {
        match (e.u, e.v) {
            (Node::Vertex(u), Node::Vertex(v)) => {
                let (du, dv) = (lists[u], lists[v]);
                let mut hi = dv.len();
                for (i, &x) in du.iter().enumerate() {
                    while hi > 0 && x + dv[hi - 1] >= e.weight {
                        hi -= 1;
                    }
                    if hi == 0 {
                        break;
                    }
                    for j in 0..hi {
                        graph.add_edge(
                            CutNode::Inner(offsets[u] + i),
                            CutNode::Inner(offsets[v] + j),
                        );
                    }
                }
            }
            (Node::Vertex(u), terminal) | (terminal, Node::Vertex(u)) => {
                let end = if terminal == Node::S {
                    CutNode::Source
                } else {
                    CutNode::Sink
                };
                for (i, &x) in lists[u].iter().enumerate() {
                    if x < e.weight {
                        graph.add_edge(end, CutNode::Inner(offsets[u] + i));
                    } else {
                        break;
                    }
                }
            }
            // Terminal-terminal edges have weight zero; always removed.
            _ => {}
        }
    }

    let sol = min_cost_vertex_cut(&graph)?;
    let stats = SolverStats {
        discretized_vertices: graph.inner_count() + 2,
        discretized_edges: graph.edges().len(),
        flow_phases: sol.phases,
        guarded_rerun: false,
    };
    if sol.cost.is_infinite() {
        return Ok(DomainRun {
            solution: DomainSolution::Infeasible,
            stats,
        });
    }

    // Per-vertex cut indices must form a prefix; the readout depends on it.
    let mut counts = vec![0usize; n];
    let mut max_index = vec![0usize; n];
    for &inner in &sol.cut {
        let v = match offsets.binary_search(&inner) {
            Ok(exact) => exact,
            Err(after) => after - 1,
        };
        counts[v] += 1;
        max_index[v] = max_index[v].max(inner - offsets[v]);
    }
    for v in 0..n {
        assert!(
            counts[v] == 0 || max_index[v] == counts[v] - 1,
            "minimum-cost cut must be a per-vertex prefix"
        );
        assert!(counts[v] < lists[v].len(), "the last copy is uncuttable");
    }

    let values: Vec<f64> = (0..n).map(|v| lists[v][counts[v]]).collect();
    let assignment = PowerAssignment::from_values(inst, &values)?;
    let result = SolveResult::from_assignment(inst, assignment)?;
    let paid: f64 = (0..n).map(|v| lists[v][0]).sum::<f64>() + sol.cost;
    debug_assert!(
        (result.objective - paid).abs() <= 1e-9 * (1.0 + result.objective.abs()),
        "objective must equal cut cost plus forced minimum payments"
    );
    Ok(DomainRun {
        solution: DomainSolution::Feasible(result),
        stats,
    })
}

/// Exact optimum of the discrete restriction; its value `Z` satisfies
/// `Z/2 <= OPT <= Z`.
pub fn solve_discrete(inst: &Instance) -> Result<SolveResult> {
    Ok(solve_discrete_with(inst, &SolveOptions::default())?.result)
}

pub fn solve_discrete_with(inst: &Instance, opts: &SolveOptions) -> Result<DiscreteRun> {
    let domain = PowerDomain::from_incident_weights(inst);
    let run = solve_domain_run(inst, &domain, opts)?;
    match run.solution {
        DomainSolution::Feasible(result) => Ok(DiscreteRun {
            result,
            stats: run.stats,
        }),
        // Unreachable for validated instances: assigning every vertex its
        // maximum incident weight removes every edge.
        DomainSolution::Infeasible => Err(Error::InfeasibleInstance),
    }
}
