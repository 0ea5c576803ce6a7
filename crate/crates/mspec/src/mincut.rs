//! Minimum s-t vertex cuts via blocking-flow max-flow.
//!
//! Vertex cuts are reduced to edge cuts by vertex splitting: each inner
//! vertex becomes an in-node -> out-node arc carrying the vertex capacity,
//! while original edges become arcs of effectively infinite capacity. The
//! "infinite" capacity is realized as (total finite vertex cost + 1), which
//! safely dominates any finite vertex-cut cost.

use crate::error::{Error, Result};

/// Node of a cut graph: the designated source, the designated sink, or an
/// inner vertex by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutNode {
    Source,
    Sink,
    Inner(usize),
}

/// Undirected graph with per-vertex non-negative costs (infinity allowed)
/// and designated source and sink. Source and sink are never members of a
/// returned cut.
#[derive(Debug, Clone)]
pub struct CutGraph {
    costs: Vec<f64>,
    edges: Vec<(CutNode, CutNode)>,
}

impl CutGraph {
    /// Graph with `inner_count` unit-cost vertices and no edges yet.
    pub fn unit(inner_count: usize) -> Self {
        CutGraph {
            costs: vec![1.0; inner_count],
            edges: Vec::new(),
        }
    }

    /// Graph whose vertex costs are given; `f64::INFINITY` marks vertices
    /// that may never be cut.
    pub fn with_costs(costs: Vec<f64>) -> Self {
        assert!(
            costs.iter().all(|&c| c >= 0.0),
            "vertex costs must be non-negative"
        );
        CutGraph {
            costs,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, a: CutNode, b: CutNode) {
        if let CutNode::Inner(i) = a {
            debug_assert!(i < self.costs.len());
        }
        if let CutNode::Inner(i) = b {
            debug_assert!(i < self.costs.len());
        }
        self.edges.push((a, b));
    }

    pub fn inner_count(&self) -> usize {
        self.costs.len()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn edges(&self) -> &[(CutNode, CutNode)] {
        &self.edges
    }

    /// True when removing the inner vertices in `removed` disconnects the
    /// source from the sink.
    pub fn separates(&self, removed: &[usize]) -> bool {
        let n = self.costs.len();
        let mut dead = vec![false; n];
        for &i in removed {
            dead[i] = true;
        }
        let id = |node: CutNode| match node {
            CutNode::Inner(i) => i,
            CutNode::Source => n,
            CutNode::Sink => n + 1,
        };
        let mut adj = vec![Vec::new(); n + 2];
        for &(a, b) in &self.edges {
            adj[id(a)].push(id(b));
            adj[id(b)].push(id(a));
        }
        let mut seen = vec![false; n + 2];
        let mut queue = std::collections::VecDeque::new();
        seen[n] = true;
        queue.push_back(n);
        while let Some(x) = queue.pop_front() {
            if x == n + 1 {
                return false;
            }
            for &y in &adj[x] {
                if !seen[y] && (y >= n || !dead[y]) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        true
    }
}

/// Result of a vertex-cut solve. `cost` is `f64::INFINITY` (with an empty
/// cut) when every separator contains an infinite-cost vertex.
#[derive(Debug, Clone)]
pub struct CutSolution {
    pub cut: Vec<usize>,
    pub cost: f64,
    pub max_flow: f64,
    pub phases: usize,
}

/// Minimum-cardinality set of inner vertices whose removal disconnects the
/// source from the sink. All vertex costs must be 1.
pub fn min_vertex_cut(graph: &CutGraph) -> Result<CutSolution> {
    debug_assert!(graph.costs.iter().all(|&c| c == 1.0));
    solve(graph, &vec![1.0; graph.inner_count()])
}

/// Minimum total-cost separator; costs may include `f64::INFINITY`.
pub fn min_cost_vertex_cut(graph: &CutGraph) -> Result<CutSolution> {
    solve(graph, &graph.costs)
}

fn solve(graph: &CutGraph, costs: &[f64]) -> Result<CutSolution> {
    let n = graph.inner_count();
    let finite_total: f64 = costs.iter().filter(|c| c.is_finite()).sum();
    let big = finite_total + 1.0;

    let mut net = FlowNetwork::new(2 * n + 2);
    let source = 2 * n;
    let sink = 2 * n + 1;
    for (i, &c) in costs.iter().enumerate() {
        net.add_arc(2 * i, 2 * i + 1, if c.is_finite() { c } else { big });
    }
    for &(a, b) in &graph.edges {
        match (a, b) {
            (CutNode::Source, CutNode::Sink) | (CutNode::Sink, CutNode::Source) => {
                return Err(Error::DirectSourceSink);
            }
            (CutNode::Source, CutNode::Inner(i)) | (CutNode::Inner(i), CutNode::Source) => {
                net.add_arc(source, 2 * i, big);
            }
            (CutNode::Sink, CutNode::Inner(i)) | (CutNode::Inner(i), CutNode::Sink) => {
                net.add_arc(2 * i + 1, sink, big);
            }
            (CutNode::Inner(i), CutNode::Inner(j)) => {
                debug_assert_ne!(i, j);
                net.add_arc(2 * i + 1, 2 * j, big);
                net.add_arc(2 * j + 1, 2 * i, big);
            }
            (CutNode::Source, CutNode::Source) | (CutNode::Sink, CutNode::Sink) => {
                unreachable!("self-loop on a terminal")
            }
        }
    }

    let (max_flow, phases) = net.max_flow(source, sink);
    if max_flow >= big - 0.5 {
        return Ok(CutSolution {
            cut: Vec::new(),
            cost: f64::INFINITY,
            max_flow,
            phases,
        });
    }

    // Source-side-minimal cut: vertices whose in-node is residual-reachable
    // but whose out-node is not.
    let reach = net.residual_reachable(source);
    let cut: Vec<usize> = (0..n)
        .filter(|&i| reach[2 * i] && !reach[2 * i + 1])
        .collect();
    let cost = cut.iter().map(|&i| costs[i]).sum();
    Ok(CutSolution {
        cut,
        cost,
        max_flow,
        phases,
    })
}

struct Arc {
    to: u32,
    cap: f64,
}

/// Dinitz blocking-flow max-flow; arc `i`'s reverse is `i ^ 1`.
struct FlowNetwork {
    adj: Vec<Vec<u32>>,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            arcs: Vec::new(),
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        let id = self.arcs.len() as u32;
        self.arcs.push(Arc { to: to as u32, cap });
        self.arcs.push(Arc {
            to: from as u32,
            cap: 0.0,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [i32]) -> bool {
        level.fill(-1);
        level[s] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a as usize];
                let v = arc.to as usize;
                if arc.cap > 0.0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level[t] >= 0
    }

    /// Returns (flow value, number of phases).
    fn max_flow(&mut self, s: usize, t: usize) -> (f64, usize) {
        let nodes = self.adj.len();
        let mut total = 0.0;
        let mut phases = 0;
        let mut level = vec![-1i32; nodes];
        while self.bfs(s, t, &mut level) {
            phases += 1;
            let mut ptr = vec![0usize; nodes];
            let mut path: Vec<u32> = Vec::new();
            let mut cur = s;
            loop {
                if cur == t {
                    let mut bottleneck = f64::INFINITY;
                    for &a in &path {
                        bottleneck = bottleneck.min(self.arcs[a as usize].cap);
                    }
                    for &a in &path {
                        self.arcs[a as usize].cap -= bottleneck;
                        self.arcs[(a ^ 1) as usize].cap += bottleneck;
                    }
                    total += bottleneck;
                    let first_saturated = path
                        .iter()
                        .position(|&a| self.arcs[a as usize].cap <= 0.0)
                        .expect("the bottleneck arc saturates");
                    path.truncate(first_saturated);
                    cur = match path.last() {
                        Some(&a) => self.arcs[a as usize].to as usize,
                        None => s,
                    };
                    continue;
                }
                let mut advanced = false;
                while ptr[cur] < self.adj[cur].len() {
                    let a = self.adj[cur][ptr[cur]];
                    let arc = &self.arcs[a as usize];
                    if arc.cap > 0.0 && level[arc.to as usize] == level[cur] + 1 {
                        path.push(a);
                        cur = arc.to as usize;
                        advanced = true;
                        break;
                    }
                    ptr[cur] += 1;
                }
                if advanced {
                    continue;
                }
                level[cur] = -1;
                match path.pop() {
                    Some(a) => {
                        let tail = match path.last() {
                            Some(&p) => self.arcs[p as usize].to as usize,
                            None => s,
                        };
                        debug_assert_eq!(self.arcs[(a ^ 1) as usize].to as usize, tail);
                        ptr[tail] += 1;
                        cur = tail;
                    }
                    None => break,
                }
            }
        }
        (total, phases)
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a as usize];
                let v = arc.to as usize;
                if arc.cap > 0.0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}
