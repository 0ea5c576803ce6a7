//! Brute-force ground truth for the optimum at desk scale.
//!
//! The optimum equals the minimum, over all vertex bipartitions with s and t
//! separated, of the maximum-weight degree-constrained subset of the crossing
//! edges: each vertex of V may be used at most once while the terminals are
//! unconstrained (their power is pinned to zero, so each terminal edge is an
//! independent unary constraint). The witnessing power assignment is the
//! matching-dual minimum weighted vertex cover of the crossing set.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{is_feasible_cut, EdgeRecord, Instance, Node, PowerAssignment};

/// Default cap on the number of intermediate vertices.
pub const DEFAULT_ORACLE_CAP: usize = 12;

const TOL: f64 = 1e-9;

/// Optimal bipartition with its crossing set, cover values, and the matching
/// weight the cover is dual to.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionCertificate {
    pub s_side: Vec<String>,
    pub t_side: Vec<String>,
    pub crossing_edges: Vec<EdgeRecord>,
    pub cover: BTreeMap<String, f64>,
    pub matching_weight: f64,
}

/// Exact optimum by exhaustive bipartition enumeration (default cap).
pub fn oracle_opt(inst: &Instance) -> Result<(f64, PowerAssignment, PartitionCertificate)> {
    oracle_opt_with_cap(inst, DEFAULT_ORACLE_CAP)
}

pub fn oracle_opt_with_cap(
    inst: &Instance,
    cap: usize,
) -> Result<(f64, PowerAssignment, PartitionCertificate)> {
    let n = inst.vertex_count();
    if n > cap {
        return Err(Error::OracleOverCap { n, cap });
    }

    let mut best: Option<(f64, u32)> = None;
    for mask in 0u32..(1u32 << n) {
        let weight = best_selection(&crossing_items(inst, mask)).0;
        if best.is_none_or(|(w, _)| weight < w - TOL) {
            best = Some((weight, mask));
        }
    }
    let (opt, mask) = best.expect("at least one bipartition");

    let items = crossing_items(inst, mask);
    let (weight, chosen) = best_selection(&items);
    debug_assert!((weight - opt).abs() <= TOL);
    let mut cover_values = cover_from_selection(inst, &items, &chosen);
    enforce_exact_activation(inst, mask, &mut cover_values);

    let assignment = PowerAssignment::from_values(inst, &cover_values)?;
    let verdict = is_feasible_cut(inst, &assignment)?;
    assert!(
        verdict.is_feasible(),
        "oracle witness must cut the instance"
    );
    assert!(
        (assignment.total() - opt).abs() <= TOL * (1.0 + opt.abs()),
        "cover total {} must equal the matching weight {opt}",
        assignment.total()
    );

    let t_bit = |i: usize| mask & (1 << i) != 0;
    let certificate = PartitionCertificate {
        s_side: (0..n)
            .filter(|&i| !t_bit(i))
            .map(|i| inst.vertex_names()[i].clone())
            .collect(),
        t_side: (0..n)
            .filter(|&i| t_bit(i))
            .map(|i| inst.vertex_names()[i].clone())
            .collect(),
        crossing_edges: inst
            .edges()
            .iter()
            .filter(|e| {
                let side = |node: Node| match node {
                    Node::S => false,
                    Node::T => true,
                    Node::Vertex(i) => t_bit(i),
                };
                side(e.u) != side(e.v)
            })
            .map(|e| inst.record(e))
            .collect(),
        cover: inst
            .vertex_names()
            .iter()
            .cloned()
            .zip(cover_values.iter().copied())
            .collect(),
        matching_weight: opt,
    };
    Ok((opt, assignment, certificate))
}

/// Raises cover values by ulps where rounding in the alternating-sum
/// arithmetic left a crossing constraint short of the exact activation
/// comparison. Raising a power never un-removes an edge, so a single
/// ascending sweep suffices; the total moves by at most a few ulps.
fn enforce_exact_activation(inst: &Instance, mask: u32, values: &mut [f64]) {
    let t_side = |node: Node| match node {
        Node::S => false,
        Node::T => true,
        Node::Vertex(i) => mask & (1 << i) != 0,
    };
    for _ in 0..4 {
        let mut changed = false;
        for e in inst.edges() {
            if t_side(e.u) == t_side(e.v) {
                continue;
            }
            match (e.u, e.v) {
                (Node::Vertex(a), Node::Vertex(b)) => {
                    if values[a] + values[b] < e.weight {
                        let need = e.weight - values[b];
                        if need > values[a] {
                            values[a] = need;
                        }
                        while values[a] + values[b] < e.weight {
                            values[a] = values[a].next_up();
                        }
                        changed = true;
                    }
                }
                (Node::Vertex(v), _) | (_, Node::Vertex(v)) if values[v] < e.weight => {
                    values[v] = e.weight;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
}

/// One crossing edge viewed as a selectable item: an internal edge consumes
/// both endpoints, a terminal edge only its V endpoint.
#[derive(Debug, Clone, Copy)]
enum Item {
    /// Internal crossing edge, endpoints stored as (s-side, t-side).
    Internal {
        s_vert: usize,
        t_vert: usize,
        weight: f64,
    },
    /// Terminal crossing edge: a unary bonus on one vertex.
    Bonus { vert: usize, weight: f64 },
}

impl Item {
    fn weight(&self) -> f64 {
        match *self {
            Item::Internal { weight, .. } | Item::Bonus { weight, .. } => weight,
        }
    }
}

/// Positive-weight crossing edges for the bipartition encoded by `mask`
/// (bit i set = vertex i on the t side). Weight-0 edges impose no constraint
/// and carry no selection weight.
fn crossing_items(inst: &Instance, mask: u32) -> Vec<Item> {
    let t_side = |node: Node| match node {
        Node::S => false,
        Node::T => true,
        Node::Vertex(i) => mask & (1 << i) != 0,
    };
    let mut items = Vec::new();
    for e in inst.edges() {
        if e.weight <= 0.0 || t_side(e.u) == t_side(e.v) {
            continue;
        }
        match (e.u, e.v) {
            (Node::Vertex(a), Node::Vertex(b)) => {
                let (s_vert, t_vert) = if t_side(Node::Vertex(a)) {
                    (b, a)
                } else {
                    (a, b)
                };
                items.push(Item::Internal {
                    s_vert,
                    t_vert,
                    weight: e.weight,
                });
            }
            (Node::Vertex(v), _) | (_, Node::Vertex(v)) => {
                items.push(Item::Bonus {
                    vert: v,
                    weight: e.weight,
                });
            }
            _ => unreachable!("positive terminal-terminal edges are rejected at parse"),
        }
    }
    items
}

/// Exhaustive take/skip search over the crossing items, each vertex of V used
/// at most once, maximizing total weight. Returns the weight and the chosen
/// item indices.
fn best_selection(items: &[Item]) -> (f64, Vec<usize>) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].weight().partial_cmp(&items[a].weight()).unwrap());
    let mut suffix = vec![0.0; items.len() + 1];
    for i in (0..items.len()).rev() {
        suffix[i] = suffix[i + 1] + items[order[i]].weight();
    }

    struct Search<'a> {
        items: &'a [Item],
        order: &'a [usize],
        suffix: &'a [f64],
        best: f64,
        best_set: Vec<usize>,
        current: Vec<usize>,
    }
    impl Search<'_> {
        fn run(&mut self, pos: usize, used: u32, acc: f64) {
            if acc > self.best {
                self.best = acc;
                self.best_set = self.current.clone();
            }
            if pos == self.order.len() || acc + self.suffix[pos] <= self.best {
                return;
            }
            let idx = self.order[pos];
            let usable = match self.items[idx] {
                Item::Internal { s_vert, t_vert, .. } => {
                    used & (1 << s_vert) == 0 && used & (1 << t_vert) == 0
                }
                Item::Bonus { vert, .. } => used & (1 << vert) == 0,
            };
            if usable {
                let occupied = match self.items[idx] {
                    Item::Internal { s_vert, t_vert, .. } => (1 << s_vert) | (1 << t_vert),
                    Item::Bonus { vert, .. } => 1 << vert,
                };
                self.current.push(idx);
                self.run(pos + 1, used | occupied, acc + self.items[idx].weight());
                self.current.pop();
            }
            self.run(pos + 1, used, acc);
        }
    }

    let mut search = Search {
        items,
        order: &order,
        suffix: &suffix,
        best: 0.0,
        best_set: Vec::new(),
        current: Vec::new(),
    };
    search.run(0, 0, 0.0);
    (search.best, search.best_set)
}

/// Minimum-cover values dual to an optimal selection.
///
/// Complementary slackness pins unselected vertices to zero and bonused
/// vertices to their terminal weight, and makes every matched internal edge
/// tight. The remaining freedom is the split of each matched edge; because
/// crossing edges run between the two sides, every residual constraint is a
/// difference constraint on the splits and shortest paths settle them.
fn cover_from_selection(inst: &Instance, items: &[Item], chosen: &[usize]) -> Vec<f64> {
    #[derive(Clone, Copy)]
    enum Role {
        Fixed(f64),
        /// y = delta of matched edge k (s-side endpoint).
        Split(usize),
        /// y = weight - delta of matched edge k (t-side endpoint).
        CoSplit(usize, f64),
    }

    let n = inst.vertex_count();
    let mut role = vec![Role::Fixed(0.0); n];
    let mut matched = Vec::new();
    for &c in chosen {
        match items[c] {
            Item::Bonus { vert, weight } => role[vert] = Role::Fixed(weight),
            Item::Internal {
                s_vert,
                t_vert,
                weight,
            } => {
                let k = matched.len();
                role[s_vert] = Role::Split(k);
                role[t_vert] = Role::CoSplit(k, weight);
                matched.push(weight);
            }
        }
    }

    // Difference constraints over the splits; node `m` is the zero anchor.
    // An edge (a -> b, c) encodes delta_b <= delta_a + c.
    let m = matched.len();
    let mut constraints: Vec<(usize, usize, f64)> = Vec::new();
    for (k, &w) in matched.iter().enumerate() {
        constraints.push((m, k, w)); // delta_k <= w
        constraints.push((k, m, 0.0)); // delta_k >= 0
    }
    let is_chosen = |i: usize| chosen.contains(&i);
    for (i, item) in items.iter().enumerate() {
        if is_chosen(i) {
            continue;
        }
        match *item {
            Item::Internal {
                s_vert,
                t_vert,
                weight,
            } => {
                match (role[s_vert], role[t_vert]) {
                    (Role::Fixed(a), Role::Fixed(b)) => {
                        assert!(a + b >= weight - TOL, "selection was not optimal");
                    }
                    (Role::Split(k), Role::Fixed(b)) => {
                        constraints.push((k, m, -(weight - b))); // delta_k >= weight - b
                    }
                    (Role::Fixed(a), Role::CoSplit(k, wk)) => {
                        constraints.push((m, k, wk - weight + a)); // delta_k <= wk - weight + a
                    }
                    (Role::Split(i), Role::CoSplit(j, wj)) => {
                        constraints.push((i, j, wj - weight)); // delta_j <= delta_i + wj - weight
                    }
                    _ => unreachable!("s-side vertices never take a co-split role"),
                }
            }
            Item::Bonus { vert, weight } => match role[vert] {
                Role::Fixed(a) => assert!(a >= weight - TOL, "selection was not optimal"),
                Role::Split(k) => constraints.push((k, m, -weight)), // delta_k >= weight
                Role::CoSplit(k, wk) => constraints.push((m, k, wk - weight)),
            },
        }
    }

    // Bellman-Ford from the anchor.
    let mut dist = vec![f64::INFINITY; m + 1];
    dist[m] = 0.0;
    for _ in 0..=m + 1 {
        let mut changed = false;
        for &(a, b, c) in &constraints {
            if dist[a].is_finite() && dist[a] + c < dist[b] - 1e-15 {
                dist[b] = dist[a] + c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for &(a, b, c) in &constraints {
        assert!(
            dist[a] + c >= dist[b] - TOL,
            "cover split system must be feasible"
        );
    }
    assert!(dist[m].abs() <= TOL, "anchor must stay at zero");

    let cover: Vec<f64> = (0..n)
        .map(|v| match role[v] {
            Role::Fixed(x) => x,
            Role::Split(k) => dist[k].max(0.0),
            Role::CoSplit(k, wk) => (wk - dist[k]).max(0.0),
        })
        .collect();
    for item in items {
        let covered = match *item {
            Item::Internal {
                s_vert,
                t_vert,
                weight,
            } => cover[s_vert] + cover[t_vert] >= weight - TOL,
            Item::Bonus { vert, weight } => cover[vert] >= weight - TOL,
        };
        assert!(covered, "constructed cover violates a crossing constraint");
    }
    cover
}

/// Minimum power sum over all integer vectors in {0..W}^n that pass the
/// feasibility check. Cross-validates `oracle_opt` on integer instances.
pub fn oracle_enum_integer(inst: &Instance, limit: u64) -> Result<f64> {
    let n = inst.vertex_count();
    let mut w_max = 0u64;
    for e in inst.edges() {
        if e.weight.fract() != 0.0 {
            return Err(Error::FractionalWeight(e.weight));
        }
        w_max = w_max.max(e.weight as u64);
    }
    let vectors = (w_max as u128 + 1).pow(n as u32);
    if vectors > limit as u128 {
        return Err(Error::EnumerationBudget { vectors, limit });
    }

    let mut best = f64::INFINITY;
    let mut vector = vec![0u64; n];
    loop {
        let total: u64 = vector.iter().sum();
        if (total as f64) < best {
            let values: Vec<f64> = vector.iter().map(|&x| x as f64).collect();
            let pa = PowerAssignment::from_values(inst, &values)?;
            if is_feasible_cut(inst, &pa)?.is_feasible() {
                best = total as f64;
            }
        }
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == n {
                return if best.is_finite() {
                    Ok(best)
                } else {
                    Err(Error::InfeasibleInstance)
                };
            }
            if vector[pos] < w_max {
                vector[pos] += 1;
                break;
            }
            vector[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact optimum of the vertex-cost variant (objective `sum c_v p_v`) by
/// bipartition enumeration with each crossing cover solved exactly: optimal
/// cover values lie on chains of tight constraints rooted at a pinned value,
/// so candidate values are enumerated along simple alternating paths and the
/// smaller side is searched exhaustively.
pub fn oracle_opt_costed(
    inst: &Instance,
    costs: &[f64],
    cap: usize,
) -> Result<(f64, PowerAssignment)> {
    let n = inst.vertex_count();
    if n > cap {
        return Err(Error::OracleOverCap { n, cap });
    }
    assert_eq!(costs.len(), n);
    assert!(
        costs.iter().all(|&c| c > 0.0),
        "vertex costs must be positive"
    );

    let mut best: Option<(f64, u32, Vec<f64>)> = None;
    for mask in 0u32..(1u32 << n) {
        let (value, cover) = costed_partition_cover(inst, costs, mask);
        if best.as_ref().is_none_or(|&(v, _, _)| value < v - TOL) {
            best = Some((value, mask, cover));
        }
    }
    let (opt, mask, mut cover) = best.expect("at least one bipartition");
    enforce_exact_activation(inst, mask, &mut cover);
    let assignment = PowerAssignment::from_values(inst, &cover)?;
    assert!(
        is_feasible_cut(inst, &assignment)?.is_feasible(),
        "costed oracle witness must cut the instance"
    );
    Ok((opt, assignment))
}

fn costed_partition_cover(inst: &Instance, costs: &[f64], mask: u32) -> (f64, Vec<f64>) {
    let n = inst.vertex_count();
    let t_side = |node: Node| match node {
        Node::S => false,
        Node::T => true,
        Node::Vertex(i) => mask & (1 << i) != 0,
    };

    // Unary lower bounds and internal crossing edges.
    let mut unary = vec![0.0f64; n];
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    for e in inst.edges() {
        if e.weight <= 0.0 || t_side(e.u) == t_side(e.v) {
            continue;
        }
        match (e.u, e.v) {
            (Node::Vertex(a), Node::Vertex(b)) => pairs.push((a, b, e.weight)),
            (Node::Vertex(v), _) | (_, Node::Vertex(v)) => unary[v] = f64::max(unary[v], e.weight),
            _ => {}
        }
    }

    let touched: Vec<usize> = (0..n)
        .filter(|&v| unary[v] > 0.0 || pairs.iter().any(|&(a, b, _)| a == v || b == v))
        .collect();
    if touched.is_empty() {
        return (0.0, vec![0.0; n]);
    }

    let side_a: Vec<usize>;
    let side_b: Vec<usize>;
    {
        let (sa, sb): (Vec<usize>, Vec<usize>) =
            touched.iter().partition(|&&v| !t_side(Node::Vertex(v)));
        if sa.len() <= sb.len() {
            side_a = sa;
            side_b = sb;
        } else {
            side_a = sb;
            side_b = sa;
        }
    }

    // Candidate values along simple tight chains, clamped to what an optimal
    // cover can use.
    let cap_value: Vec<f64> = (0..n)
        .map(|v| {
            let mut cap = unary[v];
            for &(a, b, w) in &pairs {
                if a == v || b == v {
                    cap = cap.max(w);
                }
            }
            cap
        })
        .collect();
    let mut candidates: Vec<Vec<f64>> = vec![Vec::new(); n];
    fn record(cands: &mut [Vec<f64>], v: usize, x: f64) -> bool {
        if cands[v].iter().any(|&y| (y - x).abs() <= 1e-12) {
            return false;
        }
        cands[v].push(x);
        true
    }
    #[allow(clippy::too_many_arguments)]
    fn chase(
        cands: &mut [Vec<f64>],
        pairs: &[(usize, usize, f64)],
        cap_value: &[f64],
        v: usize,
        x: f64,
        visited: &mut Vec<bool>,
    ) {
        record(cands, v, x);
        visited[v] = true;
        for &(a, b, w) in pairs {
            let (from, to) = if a == v {
                (a, b)
            } else if b == v {
                (b, a)
            } else {
                continue;
            };
            let _ = from;
            let y = w - x;
            if !visited[to] && y >= -1e-12 && y <= cap_value[to] + 1e-12 {
                chase(cands, pairs, cap_value, to, y.max(0.0), visited);
            }
        }
        visited[v] = false;
    }
    for &v in &touched {
        for seed in [0.0, unary[v]] {
            let mut visited = vec![false; n];
            chase(&mut candidates, &pairs, &cap_value, v, seed, &mut visited);
        }
    }

    // Enumerate the smaller side; the other side is closed-form minimal.
    let mut best_value = f64::INFINITY;
    let mut best_cover = vec![0.0; n];
    let mut tuple: Vec<usize> = vec![0; side_a.len()];
    'tuples: loop {
        let mut y = vec![0.0f64; n];
        let mut ok = true;
        for (slot, &v) in side_a.iter().enumerate() {
            let x = candidates[v][tuple[slot]];
            if x < unary[v] - 1e-12 {
                ok = false;
                break;
            }
            y[v] = x;
        }
        if ok {
            for &v in &side_b {
                let mut need = unary[v];
                for &(a, b, w) in &pairs {
                    let other = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    need = need.max(w - y[other]);
                }
                y[v] = need.max(0.0);
            }
            let value: f64 = (0..n).map(|v| costs[v] * y[v]).sum();
            if value < best_value {
                best_value = value;
                best_cover = y;
            }
        }
        // Advance the tuple odometer.
        for slot in 0..side_a.len() {
            tuple[slot] += 1;
            if tuple[slot] < candidates[side_a[slot]].len() {
                continue 'tuples;
            }
            tuple[slot] = 0;
        }
        break;
    }
    (best_value, best_cover)
}
