//! Approximation schemes and exact variants built on the discretized
//! vertex-copy graph.
//!
//! Each vertex of `V` is replaced by copies representing one power quantum
//! each; cutting the first `k` copies of a vertex encodes assigning it `k`
//! quanta. A minimum s-t vertex cut of the copy graph then rounds to a
//! power assignment whose total is within the scheme's error budget.

use num::{BigInt, BigRational, ToPrimitive};
use serde::Serialize;

use crate::bottleneck::{solve_bottleneck, solve_bottleneck_by};
use crate::domain::solve_discrete_with;
use crate::error::{Error, Result};
use crate::instance::{is_feasible_cut, Edge, Instance, Node, PowerAssignment, SolveResult};
use crate::mincut::{min_cost_vertex_cut, min_vertex_cut, CutGraph, CutNode, CutSolution};

/// Default cap on the total number of vertex copies in one discretized graph.
pub const DEFAULT_COPY_CAP: u64 = 5_000_000;

/// Knobs shared by the solvers that build discretized graphs.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub copy_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            copy_cap: DEFAULT_COPY_CAP,
        }
    }
}

/// The vertex-copy graph plus its scaling metadata. Copy `i` of a vertex
/// carries power `i * step`, where the step is uniform in the plain case and
/// divided by the vertex cost in the costed case.
#[derive(Debug, Clone)]
pub struct DiscretizedGraph {
    pub alpha: f64,
    names: Vec<String>,
    copies: Vec<usize>,
    steps: Vec<f64>,
    offsets: Vec<usize>,
    pub graph: CutGraph,
    guarded: bool,
}

impl DiscretizedGraph {
    /// Copy count per vertex (guard copies excluded).
    pub fn copies(&self) -> &[usize] {
        &self.copies
    }

    /// Power represented by one copy of vertex `v`.
    pub fn step(&self, v: usize) -> f64 {
        self.steps[v]
    }

    pub fn total_copies(&self) -> usize {
        self.graph.inner_count()
    }

    /// Inner index of copy `i` of vertex `v`.
    pub fn inner_index(&self, v: usize, i: usize) -> usize {
        debug_assert!(i < self.copies[v] + usize::from(self.guarded));
        self.offsets[v] + i
    }

    /// Maps an inner index back to `(vertex, copy)`.
    pub fn copy_of(&self, inner: usize) -> (usize, usize) {
        let v = match self.offsets.binary_search(&inner) {
            Ok(exact) => exact,
            Err(after) => after - 1,
        };
        (v, inner - self.offsets[v])
    }

    /// True when removing the given copies disconnects s from t in the
    /// discretized graph.
    pub fn is_separator(&self, cut: &[(usize, usize)]) -> bool {
        let inner: Vec<usize> = cut.iter().map(|&(v, i)| self.inner_index(v, i)).collect();
        self.graph.separates(&inner)
    }
}

/// Builds the discretized graph with `copies_per_vertex` copies of every
/// vertex, all representing power `alpha`. The edge rule is strict:
/// `(u(i), v(j))` is present iff `i*alpha + j*alpha < w`, and `(u(i), x)` for
/// a terminal `x` iff `i*alpha < w`.
pub fn build_discretized(
    inst: &Instance,
    alpha: f64,
    copies_per_vertex: usize,
) -> Result<DiscretizedGraph> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    assert!(copies_per_vertex >= 1, "at least one copy per vertex");
    let steps = vec![alpha; inst.vertex_count()];
    Ok(build(inst, alpha, copies_per_vertex, steps, false))
}

/// Shared construction. With `guarded` set, every vertex gets one extra copy
/// that the cut solver may never take; this pins the discretized problem to
/// cuts that have a power-assignment meaning.
fn build(
    inst: &Instance,
    alpha: f64,
    copies_per_vertex: usize,
    steps: Vec<f64>,
    guarded: bool,
) -> DiscretizedGraph {
    let n = inst.vertex_count();
    let per_vertex = copies_per_vertex + usize::from(guarded);
    let mut offsets = Vec::with_capacity(n);
    for v in 0..n {
        offsets.push(v * per_vertex);
    }
    let mut graph = if guarded {
        let mut costs = vec![1.0; n * per_vertex];
        for v in 0..n {
            costs[offsets[v] + copies_per_vertex] = f64::INFINITY;
        }
        CutGraph::with_costs(costs)
    } else {
        CutGraph::unit(n * per_vertex)
    };

    for edge in inst.edges() {
        match (edge.u, edge.v) {
            (Node::Vertex(u), Node::Vertex(v)) => {
                let (su, sv) = (steps[u], steps[v]);
                let w = edge.weight;
                let within = |i: usize, j: usize| (i as f64) * su + (j as f64) * sv < w;
                for i in 0..per_vertex {
                    // Rows form a staircase: the largest admissible j per row.
                    let remaining = w - (i as f64) * su;
                    let mut count = if remaining <= 0.0 {
                        0
                    } else {
                        ((remaining / sv).ceil() as usize).min(per_vertex)
                    };
                    while count > 0 && !within(i, count - 1) {
                        count -= 1;
                    }
                    while count < per_vertex && within(i, count) {
                        count += 1;
                    }
                    if count == 0 {
                        break;
                    }
                    for j in 0..count {
                        graph.add_edge(
                            CutNode::Inner(offsets[u] + i),
                            CutNode::Inner(offsets[v] + j),
                        );
                    }
                }
            }
            (Node::Vertex(u), terminal) | (terminal, Node::Vertex(u)) => {
                let su = steps[u];
                let end = if terminal == Node::S {
                    CutNode::Source
                } else {
                    CutNode::Sink
                };
                for i in 0..per_vertex {
                    if (i as f64) * su < edge.weight {
                        graph.add_edge(end, CutNode::Inner(offsets[u] + i));
                    } else {
                        break;
                    }
                }
            }
            // Terminal-terminal edges have weight zero and are removed by
            // every assignment; they never appear in the copy graph.
            _ => {}
        }
    }

    DiscretizedGraph {
        alpha,
        names: inst.vertex_names().to_vec(),
        copies: vec![copies_per_vertex; n],
        steps,
        offsets,
        graph,
        guarded,
    }
}

/// Replaces the copies of each vertex in the cut by the same number of
/// lowest-index copies. Neighbourhood nesting makes the prefix version a
/// separator of the same size whenever the input is one.
pub fn normalize_cut(dg: &DiscretizedGraph, cut: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut counts = vec![0usize; dg.copies.len()];
    for &(v, _) in cut {
        counts[v] += 1;
    }
    let mut normalized = Vec::with_capacity(cut.len());
    for (v, &k) in counts.iter().enumerate() {
        for i in 0..k {
            normalized.push((v, i));
        }
    }
    normalized
}

/// Prefix-normalizes a separator of the discretized graph and reads the
/// powers off the per-vertex copy counts.
pub fn extract_powers(dg: &DiscretizedGraph, cut: &[(usize, usize)]) -> Result<PowerAssignment> {
    if !dg.is_separator(cut) {
        return Err(Error::NotASeparator);
    }
    let normalized = normalize_cut(dg, cut);
    debug_assert!(dg.is_separator(&normalized));
    let mut counts = vec![0usize; dg.copies.len()];
    for &(v, _) in &normalized {
        counts[v] += 1;
    }
    PowerAssignment::new(
        counts
            .iter()
            .enumerate()
            .map(|(v, &k)| (dg.names[v].clone(), (k as f64) * dg.steps[v]))
            .collect(),
    )
}

/// Copy counts of the normalized cut, the raw material for the power readout.
fn cut_counts(dg: &DiscretizedGraph, cut: &[usize]) -> Vec<usize> {
    let mut counts = vec![0usize; dg.copies.len()];
    for &inner in cut {
        let (v, _) = dg.copy_of(inner);
        counts[v] += 1;
    }
    counts
}

/// Statistics from one discretized solve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolverStats {
    pub discretized_vertices: usize,
    pub discretized_edges: usize,
    pub flow_phases: usize,
    /// Set when the rare guarded rerun was needed (see `run_pipeline`).
    pub guarded_rerun: bool,
}

/// Plain FPTAS run with the derived parameters echoed.
#[derive(Debug)]
pub struct FptasRun {
    pub result: SolveResult,
    pub p_star: f64,
    pub alpha: f64,
    pub copies: u64,
    pub stats: SolverStats,
}

/// Fast FPTAS run; `z` is the discrete 2-approximation value.
#[derive(Debug)]
pub struct FastRun {
    pub result: SolveResult,
    pub z: f64,
    pub alpha: f64,
    pub copies: u64,
    pub stats: SolverStats,
}

/// Costed FPTAS run; the bottleneck is searched in power-cost units.
#[derive(Debug)]
pub struct CostedRun {
    pub result: SolveResult,
    pub cost_bottleneck: f64,
    pub alpha: f64,
    pub copies: u64,
    pub stats: SolverStats,
}

/// Exact integer-weight run.
#[derive(Debug)]
pub struct IntegerRun {
    pub result: SolveResult,
    pub max_weight: u64,
    pub stats: SolverStats,
}

/// Exact uniform-weight run; powers are multiples of the common weight.
#[derive(Debug)]
pub struct UniformRun {
    pub result: SolveResult,
    pub weight: f64,
    pub stats: SolverStats,
}

fn empty_stats() -> SolverStats {
    SolverStats {
        discretized_vertices: 0,
        discretized_edges: 0,
        flow_phases: 0,
        guarded_rerun: false,
    }
}

/// Exact `ceil(numerator / eps)` with eps treated as the positive rational
/// its floating-point bits denote.
fn exact_copy_count(numerator: u128, eps: f64) -> Result<BigInt> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidEpsilon(eps));
    }
    let eps = BigRational::from_float(eps).expect("finite floats are rational");
    let numerator = BigRational::from_integer(BigInt::from(numerator));
    Ok((numerator / eps).ceil().to_integer())
}

/// Copy count `ceil(n^2 / eps)` used by the plain and costed schemes.
pub fn fptas_copy_count(n: usize, eps: f64) -> Result<BigInt> {
    exact_copy_count((n as u128) * (n as u128), eps)
}

/// Copy count `ceil(2n / eps)` used by the fast scheme.
pub fn fast_copy_count(n: usize, eps: f64) -> Result<BigInt> {
    exact_copy_count(2 * n as u128, eps)
}

fn admit_copies(n: usize, per_vertex: &BigInt, cap: u64) -> Result<u64> {
    let needed = per_vertex * BigInt::from(n);
    if needed > BigInt::from(cap) {
        return Err(Error::CopyCapExceeded {
            needed: needed.to_u128().unwrap_or(u128::MAX),
            cap,
        });
    }
    Ok(per_vertex.to_u64().expect("bounded by the cap"))
}

/// Nudges a power step up by ulps until the top of the ladder covers the
/// scheme's power budget under the same floating-point comparison the edge
/// rule and the feasibility checker use. In real arithmetic the chosen copy
/// count already guarantees coverage; rounding in the step computation can
/// lose it by an ulp, which would leave the highest rung unable to remove an
/// edge weighing exactly the budget.
fn raise_to_cover(step: f64, copies: u64, budget: f64) -> f64 {
    let mut step = step;
    while (copies as f64) * step < budget {
        step = step.next_up();
    }
    step
}

/// `a * b` rounded toward positive infinity, via the exact fma residual.
fn mul_round_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// `a / b` rounded toward positive infinity for positive operands.
fn div_round_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.mul_add(b, -a) < 0.0 {
        q.next_up()
    } else {
        q
    }
}

/// Shared Algorithm-style pipeline: build the copy graph, take a minimum
/// vertex cut, prefix-normalize, and read off the powers.
///
/// In the rare corner where the minimum cut takes every copy of some vertex,
/// the readout can lose feasibility (removing a whole vertex from the copy
/// graph has no power meaning). The rerun adds one uncuttable guard copy per
/// vertex, which restores the correspondence without affecting the bound:
/// the rounded optimal assignment never needs a guard copy.
fn run_pipeline(
    inst: &Instance,
    alpha: f64,
    copies: u64,
    steps: Vec<f64>,
    objective_costs: Option<&[f64]>,
) -> Result<(SolveResult, SolverStats)> {
    let dg = build(inst, alpha, copies as usize, steps.clone(), false);
    let stats_for = |dg: &DiscretizedGraph, sol: &CutSolution, rerun: bool| SolverStats {
        discretized_vertices: dg.total_copies() + 2,
        discretized_edges: dg.graph.edges().len(),
        flow_phases: sol.phases,
        guarded_rerun: rerun,
    };

    let sol = min_vertex_cut(&dg.graph)?;
    let assignment = readout(inst, &dg, &sol.cut);
    if is_feasible_cut(inst, &assignment)?.is_feasible() {
        let stats = stats_for(&dg, &sol, false);
        let result = package(inst, assignment, objective_costs, alpha, sol.cut.len())?;
        return Ok((result, stats));
    }

    let dg = build(inst, alpha, copies as usize, steps, true);
    let sol = min_cost_vertex_cut(&dg.graph)?;
    assert!(
        sol.cost.is_finite(),
        "a guarded cut always exists for feasible instances"
    );
    let assignment = readout(inst, &dg, &sol.cut);
    assert!(
        is_feasible_cut(inst, &assignment)?.is_feasible(),
        "guarded readout is always feasible"
    );
    let stats = stats_for(&dg, &sol, true);
    let result = package(inst, assignment, objective_costs, alpha, sol.cut.len())?;
    Ok((result, stats))
}

fn readout(inst: &Instance, dg: &DiscretizedGraph, cut: &[usize]) -> PowerAssignment {
    let counts = cut_counts(dg, cut);
    let values: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(v, &k)| (k as f64) * dg.steps[v])
        .collect();
    PowerAssignment::from_values(inst, &values).expect("non-negative by construction")
}

fn package(
    inst: &Instance,
    assignment: PowerAssignment,
    objective_costs: Option<&[f64]>,
    alpha: f64,
    cut_size: usize,
) -> Result<SolveResult> {
    let result = match objective_costs {
        None => SolveResult::from_assignment(inst, assignment)?,
        Some(costs) => SolveResult::from_assignment_costed(inst, assignment, costs)?,
    };
    debug_assert!(
        (result.objective - alpha * cut_size as f64).abs() <= 1e-9 * (1.0 + result.objective),
        "objective must account for alpha * |cut|"
    );
    Ok(result)
}

fn zero_result(inst: &Instance) -> Result<SolveResult> {
    SolveResult::from_assignment(inst, PowerAssignment::zero(inst))
}

/// (1+eps)-approximation with `alpha = eps * p* / n` and `ceil(n^2/eps)`
/// copies per vertex. Short-circuits to the all-zero assignment when the
/// bottleneck power is zero.
pub fn solve_fptas(inst: &Instance, eps: f64) -> Result<SolveResult> {
    Ok(solve_fptas_run(inst, eps, &SolveOptions::default())?.result)
}

pub fn solve_fptas_run(inst: &Instance, eps: f64, opts: &SolveOptions) -> Result<FptasRun> {
    let n = inst.vertex_count();
    let p_star = solve_bottleneck(inst)?.p_star;
    if p_star == 0.0 {
        return Ok(FptasRun {
            result: zero_result(inst)?,
            p_star,
            alpha: 0.0,
            copies: 0,
            stats: empty_stats(),
        });
    }
    let copies = admit_copies(n, &fptas_copy_count(n, eps)?, opts.copy_cap)?;
    // The ladder must dominate the real-arithmetic budget n * p*.
    let budget = mul_round_up(n as f64, p_star);
    let alpha = raise_to_cover(eps * p_star / n as f64, copies, budget);
    let (result, stats) = run_pipeline(inst, alpha, copies, vec![alpha; n], None)?;
    Ok(FptasRun {
        result,
        p_star,
        alpha,
        copies,
        stats,
    })
}

/// (1+eps)-approximation seeded by the discrete 2-approximation `Z`:
/// `alpha = eps * Z / (2n)` with only `ceil(2n/eps)` copies per vertex.
pub fn solve_fast_fptas(inst: &Instance, eps: f64) -> Result<SolveResult> {
    Ok(solve_fast_fptas_run(inst, eps, &SolveOptions::default())?.result)
}

pub fn solve_fast_fptas_run(inst: &Instance, eps: f64, opts: &SolveOptions) -> Result<FastRun> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidEpsilon(eps));
    }
    let n = inst.vertex_count();
    let z = solve_discrete_with(inst, opts)?.result.objective;
    if z == 0.0 {
        return Ok(FastRun {
            result: zero_result(inst)?,
            z,
            alpha: 0.0,
            copies: 0,
            stats: empty_stats(),
        });
    }
    let copies = admit_copies(n, &fast_copy_count(n, eps)?, opts.copy_cap)?;
    let alpha = raise_to_cover(eps * z / (2.0 * n as f64), copies, z);
    let (result, stats) = run_pipeline(inst, alpha, copies, vec![alpha; n], None)?;
    Ok(FastRun {
        result,
        z,
        alpha,
        copies,
        stats,
    })
}

/// (1+eps)-approximation for the vertex-cost objective `sum c_v p_v`. The
/// bottleneck is searched over power-costs and each copy of `v` represents
/// power `alpha / c_v`, contributing `alpha` to the objective.
pub fn solve_costed_fptas(
    inst: &Instance,
    costs: &std::collections::BTreeMap<String, f64>,
    eps: f64,
) -> Result<SolveResult> {
    Ok(solve_costed_fptas_run(inst, costs, eps, &SolveOptions::default())?.result)
}

pub fn solve_costed_fptas_run(
    inst: &Instance,
    costs: &std::collections::BTreeMap<String, f64>,
    eps: f64,
    opts: &SolveOptions,
) -> Result<CostedRun> {
    let n = inst.vertex_count();
    let mut cost_vec = Vec::with_capacity(n);
    for name in inst.vertex_names() {
        let &c = costs
            .get(name)
            .ok_or_else(|| Error::MissingCost(name.clone()))?;
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::NonPositiveCost {
                vertex: name.clone(),
                cost: c,
            });
        }
        cost_vec.push(c);
    }

    // Uniform power-cost q means p_v = q / c_v; the requirement below is the
    // least q removing the edge.
    let cost_of = |node: crate::instance::Node| match node {
        crate::instance::Node::Vertex(i) => Some(cost_vec[i]),
        _ => None,
    };
    let requirement = |e: &Edge| match (cost_of(e.u), cost_of(e.v)) {
        (Some(cu), Some(cv)) => e.weight * cu * cv / (cu + cv),
        (Some(cu), None) | (None, Some(cu)) => e.weight * cu,
        (None, None) => 0.0,
    };
    let q_star = solve_bottleneck_by(inst, requirement)?.p_star;
    if q_star == 0.0 {
        return Ok(CostedRun {
            result: SolveResult::from_assignment_costed(
                inst,
                PowerAssignment::zero(inst),
                &cost_vec,
            )?,
            cost_bottleneck: q_star,
            alpha: 0.0,
            copies: 0,
            stats: empty_stats(),
        });
    }
    let copies = admit_copies(n, &fptas_copy_count(n, eps)?, opts.copy_cap)?;
    let alpha = eps * q_star / n as f64;
    // Per-vertex ladders must dominate the real-arithmetic budget n q* / c_v.
    let steps: Vec<f64> = cost_vec
        .iter()
        .map(|&c| {
            let budget = div_round_up(mul_round_up(n as f64, q_star), c);
            raise_to_cover(alpha / c, copies, budget)
        })
        .collect();
    let (result, stats) = run_pipeline(inst, alpha, copies, steps, Some(&cost_vec))?;
    Ok(CostedRun {
        result,
        cost_bottleneck: q_star,
        alpha,
        copies,
        stats,
    })
}

/// Exact solver for integral weights: `W + 1` copies per vertex at quantum 1.
pub fn solve_integer(inst: &Instance) -> Result<SolveResult> {
    Ok(solve_integer_run(inst, &SolveOptions::default())?.result)
}

pub fn solve_integer_run(inst: &Instance, opts: &SolveOptions) -> Result<IntegerRun> {
    let mut w_max = 0u64;
    for e in inst.edges() {
        if e.weight.fract() != 0.0 {
            return Err(Error::FractionalWeight(e.weight));
        }
        w_max = w_max.max(e.weight as u64);
    }
    let n = inst.vertex_count();
    if n == 0 {
        return Ok(IntegerRun {
            result: zero_result(inst)?,
            max_weight: w_max,
            stats: empty_stats(),
        });
    }
    let copies = admit_copies(n, &BigInt::from(w_max + 1), opts.copy_cap)?;
    let (result, stats) = run_pipeline(inst, 1.0, copies, vec![1.0; n], None)?;
    Ok(IntegerRun {
        result,
        max_weight: w_max,
        stats,
    })
}

/// Exact solver for uniform positive weights; scales them to 1, runs the
/// integer solver, and scales the powers back, so every power is 0 or `w`.
pub fn solve_uniform(inst: &Instance) -> Result<SolveResult> {
    Ok(solve_uniform_run(inst, &SolveOptions::default())?.result)
}

pub fn solve_uniform_run(inst: &Instance, opts: &SolveOptions) -> Result<UniformRun> {
    let mut weight = None;
    for e in inst.edges() {
        if e.weight == 0.0 {
            continue;
        }
        match weight {
            None => weight = Some(e.weight),
            Some(w) if w == e.weight => {}
            Some(w) => return Err(Error::NonUniformWeights(w, e.weight)),
        }
    }
    let Some(weight) = weight else {
        // Only zero-weight edges: the zero assignment already cuts.
        return Ok(UniformRun {
            result: zero_result(inst)?,
            weight: 0.0,
            stats: empty_stats(),
        });
    };

    let scaled_edges: Vec<(String, String, f64)> = inst
        .edges()
        .iter()
        .map(|e| {
            let r = inst.record(e);
            (r.u, r.v, r.w / weight)
        })
        .collect();
    let scaled = Instance::new(inst.vertex_names().to_vec(), &scaled_edges)?;
    let run = solve_integer_run(&scaled, opts)?;
    let values: Vec<f64> = run
        .result
        .assignment
        .values_for(&scaled)?
        .into_iter()
        .map(|p| p * weight)
        .collect();
    let assignment = PowerAssignment::from_values(inst, &values)?;
    Ok(UniformRun {
        result: SolveResult::from_assignment(inst, assignment)?,
        weight,
        stats: run.stats,
    })
}
