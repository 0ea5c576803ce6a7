//! Instance representation, validation, serialization, and the feasibility
//! checker every solver depends on.
//!
//! An instance is an undirected edge-weighted graph over the intermediate
//! vertex set `V` plus the two terminals `s` and `t`. A power assignment maps
//! each vertex of `V` to a non-negative power (the terminals are pinned to
//! zero), and an edge is removed once the powers at its endpoints sum to at
//! least its weight. The assignment is a feasible cut when the removals
//! disconnect `s` from `t`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier reserved for the source terminal in serialized documents.
pub const SOURCE_NAME: &str = "s";
/// Identifier reserved for the sink terminal in serialized documents.
pub const SINK_NAME: &str = "t";

/// Graph node: one of the two terminals or an intermediate vertex by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    S,
    T,
    Vertex(usize),
}

impl Node {
    pub fn is_terminal(self) -> bool {
        matches!(self, Node::S | Node::T)
    }
}

/// Undirected weighted edge between two nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: Node,
    pub v: Node,
    pub weight: f64,
}

impl Edge {
    /// The endpoint other than `node`; panics if `node` is not an endpoint.
    pub fn other(&self, node: Node) -> Node {
        if self.u == node {
            self.v
        } else {
            assert_eq!(self.v, node);
            self.u
        }
    }
}

/// Edge with endpoint names resolved, as used in JSON documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub w: f64,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
}

/// A validated MSPEC instance.
///
/// Invariants enforced at construction: finite non-negative weights, no
/// self-loops, no positive-weight edge joining `s` directly to `t` (such an
/// instance is infeasible since `p_s = p_t = 0`), and at most one edge per
/// unordered vertex pair (parallel edges collapse to the minimum weight).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    names: Vec<String>,
    edges: Vec<Edge>,
}

impl Instance {
    /// Builds a validated instance from vertex names and named edges.
    /// `"s"` and `"t"` denote the terminals and are reserved.
    pub fn new<S: AsRef<str>>(vertices: Vec<String>, edges: &[(S, S, f64)]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, name) in vertices.iter().enumerate() {
            if name == SOURCE_NAME || name == SINK_NAME {
                return Err(Error::ReservedIdentifier(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let resolve = |name: &str| -> Result<Node> {
            match name {
                SOURCE_NAME => Ok(Node::S),
                SINK_NAME => Ok(Node::T),
                other => index
                    .get(other)
                    .map(|&i| Node::Vertex(i))
                    .ok_or_else(|| Error::UnknownEndpoint(other.to_string())),
            }
        };

        let mut resolved: Vec<Edge> = Vec::with_capacity(edges.len());
        let mut slot: BTreeMap<(Node, Node), usize> = BTreeMap::new();
        for (u, v, w) in edges {
            let (u, v, w) = (u.as_ref(), v.as_ref(), *w);
            let a = resolve(u)?;
            let b = resolve(v)?;
            if a == b {
                return Err(Error::SelfLoop(u.to_string()));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight {
                    u: u.to_string(),
                    v: v.to_string(),
                    weight: w,
                });
            }
            if a.is_terminal() && b.is_terminal() && w > 0.0 {
                // p_s = p_t = 0 can never remove it.
                return Err(Error::InfeasibleInstance);
            }
            let key = if a <= b { (a, b) } else { (b, a) };
            match slot.get(&key) {
                Some(&i) => {
                    // Only the cheapest constraint binds.
                    if w < resolved[i].weight {
                        resolved[i].weight = w;
                    }
                }
                None => {
                    slot.insert(key, resolved.len());
                    resolved.push(Edge {
                        u: a,
                        v: b,
                        weight: w,
                    });
                }
            }
        }
        Ok(Instance {
            names: vertices,
            edges: resolved,
        })
    }

    /// Parses the JSON instance format:
    /// `{"vertices": ["u"], "edges": [{"u":"s","v":"u","w":3.0}]}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let edges: Vec<(String, String, f64)> =
            doc.edges.into_iter().map(|e| (e.u, e.v, e.w)).collect();
        Instance::new(doc.vertices, &edges)
    }

    /// Serializes to the JSON instance format; `parse_json` round-trips it
    /// edge-for-edge with exact weight equality.
    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            vertices: self.names.clone(),
            edges: self.edges.iter().map(|e| self.record(e)).collect(),
        };
        serde_json::to_string(&doc).expect("instance serialization cannot fail")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_name(&self, node: Node) -> &str {
        match node {
            Node::S => SOURCE_NAME,
            Node::T => SINK_NAME,
            Node::Vertex(i) => &self.names[i],
        }
    }

    /// Resolves an edge to its named record form.
    pub fn record(&self, edge: &Edge) -> EdgeRecord {
        EdgeRecord {
            u: self.node_name(edge.u).to_string(),
            v: self.node_name(edge.v).to_string(),
            w: edge.weight,
        }
    }

    pub(crate) fn node_id(&self, node: Node) -> usize {
        match node {
            Node::Vertex(i) => i,
            Node::S => self.names.len(),
            Node::T => self.names.len() + 1,
        }
    }

    /// Adjacency lists over `V ∪ {s, t}`; entries are `(edge index, other end)`.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, Node)>> {
        let mut adj = vec![Vec::new(); self.names.len() + 2];
        for (i, e) in self.edges.iter().enumerate() {
            adj[self.node_id(e.u)].push((i, e.v));
            adj[self.node_id(e.v)].push((i, e.u));
        }
        adj
    }

    /// BFS from `s` over the edges for which `keep` is true. Returns the
    /// removed-edge indices on disconnection, or an `s`-`t` path while
    /// connected.
    pub(crate) fn search_after_removal(
        &self,
        keep: impl Fn(usize, &Edge) -> bool,
    ) -> SearchOutcome {
        let adj = self.adjacency();
        let total = self.names.len() + 2;
        let start = self.node_id(Node::S);
        let goal = self.node_id(Node::T);
        let mut parent: Vec<Option<(usize, Node)>> = vec![None; total];
        let mut seen = vec![false; total];
        let mut queue = std::collections::VecDeque::new();
        seen[start] = true;
        queue.push_back(Node::S);
        while let Some(node) = queue.pop_front() {
            if self.node_id(node) == goal {
                let mut path = vec![Node::T];
                let mut cur = Node::T;
                while cur != Node::S {
                    let (_, prev) = parent[self.node_id(cur)].expect("path parent");
                    path.push(prev);
                    cur = prev;
                }
                path.reverse();
                return SearchOutcome::Connected { path };
            }
            for &(ei, next) in &adj[self.node_id(node)] {
                if !keep(ei, &self.edges[ei]) {
                    continue;
                }
                let id = self.node_id(next);
                if !seen[id] {
                    seen[id] = true;
                    parent[id] = Some((ei, node));
                    queue.push_back(next);
                }
            }
        }
        let removed = (0..self.edges.len())
            .filter(|&i| !keep(i, &self.edges[i]))
            .collect();
        SearchOutcome::Disconnected { removed }
    }
}

pub(crate) enum SearchOutcome {
    Disconnected { removed: Vec<usize> },
    Connected { path: Vec<Node> },
}

/// Non-negative power per intermediate vertex; `s` and `t` implicitly 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAssignment {
    powers: BTreeMap<String, f64>,
}

impl PowerAssignment {
    pub fn new(powers: BTreeMap<String, f64>) -> Result<Self> {
        for (vertex, &power) in &powers {
            if !power.is_finite() || power < 0.0 {
                return Err(Error::NegativePower {
                    vertex: vertex.clone(),
                    power,
                });
            }
        }
        Ok(PowerAssignment { powers })
    }

    /// All-zero assignment on the instance vertex set.
    pub fn zero(inst: &Instance) -> Self {
        PowerAssignment {
            powers: inst
                .vertex_names()
                .iter()
                .map(|n| (n.clone(), 0.0))
                .collect(),
        }
    }

    /// Builds an assignment from values aligned with `inst.vertex_names()`.
    pub fn from_values(inst: &Instance, values: &[f64]) -> Result<Self> {
        if values.len() != inst.vertex_count() {
            return Err(Error::MismatchedVertices);
        }
        PowerAssignment::new(
            inst.vertex_names()
                .iter()
                .cloned()
                .zip(values.iter().copied())
                .collect(),
        )
    }

    /// Values aligned with `inst.vertex_names()`; errors when the assignment
    /// is not defined on exactly the instance vertex set.
    pub fn values_for(&self, inst: &Instance) -> Result<Vec<f64>> {
        if self.powers.len() != inst.vertex_count() {
            return Err(Error::MismatchedVertices);
        }
        inst.vertex_names()
            .iter()
            .map(|name| {
                self.powers
                    .get(name)
                    .copied()
                    .ok_or(Error::MismatchedVertices)
            })
            .collect()
    }

    pub fn get(&self, vertex: &str) -> Option<f64> {
        self.powers.get(vertex).copied()
    }

    pub fn total(&self) -> f64 {
        self.powers.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, f64)> {
        self.powers.iter().map(|(k, &v)| (k, v))
    }

    /// Parses the JSON form `{"powers": {"u": 3.0}}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            powers: BTreeMap<String, f64>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        PowerAssignment::new(doc.powers)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            powers: &'a BTreeMap<String, f64>,
        }
        serde_json::to_string(&Doc {
            powers: &self.powers,
        })
        .expect("serialization cannot fail")
    }
}

impl fmt::Display for PowerAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, value) in &self.powers {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{name}={value}")?;
            first = false;
        }
        Ok(())
    }
}

/// Outcome of the feasibility check, with a witness either way.
#[derive(Debug, Clone, PartialEq)]
pub enum CutVerdict {
    /// The assignment disconnects `s` from `t`; carries the removed edge
    /// indices.
    Disconnected { removed_edges: Vec<usize> },
    /// `s` and `t` stay connected; carries a surviving `s`-`t` path.
    Connected { path: Vec<Node> },
}

impl CutVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CutVerdict::Disconnected { .. })
    }
}

/// Removes every edge `(u, v)` with `p_u + p_v >= w_uv` (terminal powers are
/// zero, comparisons are exact) and reports whether `s` and `t` end up in
/// different components.
pub fn is_feasible_cut(inst: &Instance, assignment: &PowerAssignment) -> Result<CutVerdict> {
    let values = assignment.values_for(inst)?;
    let power = |node: Node| match node {
        Node::Vertex(i) => values[i],
        _ => 0.0,
    };
    match inst.search_after_removal(|_, e| power(e.u) + power(e.v) < e.weight) {
        SearchOutcome::Disconnected { removed } => Ok(CutVerdict::Disconnected {
            removed_edges: removed,
        }),
        SearchOutcome::Connected { path } => Ok(CutVerdict::Connected { path }),
    }
}

/// Solver output: the assignment, its objective, and the removed edges
/// witnessing disconnection.
#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub assignment: PowerAssignment,
    pub objective: f64,
    pub cut_edges: Vec<EdgeRecord>,
}

impl SolveResult {
    /// Packages a feasible assignment; the objective is the recomputed power
    /// sum and `cut_edges` is exactly the removed edge set.
    pub fn from_assignment(inst: &Instance, assignment: PowerAssignment) -> Result<Self> {
        Self::build(inst, assignment, None)
    }

    /// Costed variant: the objective is `sum c_v * p_v` with `costs` aligned
    /// to the instance vertex order.
    pub fn from_assignment_costed(
        inst: &Instance,
        assignment: PowerAssignment,
        costs: &[f64],
    ) -> Result<Self> {
        Self::build(inst, assignment, Some(costs))
    }

    fn build(inst: &Instance, assignment: PowerAssignment, costs: Option<&[f64]>) -> Result<Self> {
        let removed = match is_feasible_cut(inst, &assignment)? {
            CutVerdict::Disconnected { removed_edges } => removed_edges,
            CutVerdict::Connected { .. } => return Err(Error::NotASeparator),
        };
        let values = assignment.values_for(inst)?;
        let objective = match costs {
            None => values.iter().sum(),
            Some(c) => values.iter().zip(c).map(|(p, c)| p * c).sum(),
        };
        let cut_edges = removed
            .into_iter()
            .map(|i| inst.record(&inst.edges()[i]))
            .collect();
        Ok(SolveResult {
            assignment,
            objective,
            cut_edges,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization cannot fail")
    }
}
