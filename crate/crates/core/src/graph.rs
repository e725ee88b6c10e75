//! Finite directed graphs, paths and cylinder sets.
//!
//! Vertices and edges are addressed by dense indices in declaration order.
//! Every enumeration in this crate (partitions, preimages, witnesses) walks
//! edges in that order, which is what makes reports reproducible.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::point::BoundaryPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Name {
    Vertex(VertexId),
    Edge(EdgeId),
}

/// A finite directed graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    src: Vec<VertexId>,
    dst: Vec<VertexId>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    names: HashMap<String, Name>,
    forced: Vec<Option<BoundaryPoint>>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_names == other.vertex_names
            && self.edge_names == other.edge_names
            && self.src == other.src
            && self.dst == other.dst
    }
}

impl Eq for DirectedGraph {}

/// Incremental construction with the same checks as the file parser.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertex_names: Vec<String>,
    edges: Vec<(String, String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, name: &str) -> Self {
        self.vertex_names.push(name.to_string());
        self
    }

    pub fn edge(mut self, name: &str, src: &str, dst: &str) -> Self {
        self.edges
            .push((name.to_string(), src.to_string(), dst.to_string()));
        self
    }

    pub fn build(self) -> Result<DirectedGraph> {
        let mut text = String::new();
        for v in &self.vertex_names {
            text.push_str(&format!("vertex {v}\n"));
        }
        for (e, s, d) in &self.edges {
            text.push_str(&format!("edge {e} {s} {d}\n"));
        }
        parse_graph(&text)
    }
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-based graph format: `vertex <id>` and `edge <id> <src> <dst>`,
/// `#` starting a comment.
pub fn parse_graph(text: &str) -> Result<DirectedGraph> {
    let mut vertex_names = Vec::new();
    let mut edge_names = Vec::new();
    let mut src = Vec::new();
    let mut dst = Vec::new();
    let mut names: HashMap<String, Name> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        for w in &words[1..] {
            if !valid_id(w) {
                return Err(Error::Syntax {
                    line,
                    message: format!("`{w}` is not a valid id"),
                });
            }
        }
        match words[0] {
            "vertex" => {
                if words.len() != 2 {
                    return Err(Error::Syntax {
                        line,
                        message: "expected `vertex <id>`".into(),
                    });
                }
                let name = words[1].to_string();
                if names.contains_key(&name) {
                    return Err(Error::DuplicateId { line, name });
                }
                names.insert(name.clone(), Name::Vertex(VertexId(vertex_names.len())));
                vertex_names.push(name);
            }
            "edge" => {
                if words.len() != 4 {
                    return Err(Error::Syntax {
                        line,
                        message: "expected `edge <id> <src> <dst>`".into(),
                    });
                }
                let name = words[1].to_string();
                if names.contains_key(&name) {
                    return Err(Error::DuplicateId { line, name });
                }
                let endpoint = |w: &str| match names.get(w) {
                    Some(Name::Vertex(v)) => Ok(*v),
                    _ => Err(Error::Dangling {
                        line,
                        kind: "vertex",
                        name: w.to_string(),
                    }),
                };
                let s = endpoint(words[2])?;
                let d = endpoint(words[3])?;
                names.insert(name.clone(), Name::Edge(EdgeId(edge_names.len())));
                edge_names.push(name);
                src.push(s);
                dst.push(d);
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }

    Ok(DirectedGraph::assemble(vertex_names, edge_names, src, dst, names))
}

impl DirectedGraph {
    fn assemble(
        vertex_names: Vec<String>,
        edge_names: Vec<String>,
        src: Vec<VertexId>,
        dst: Vec<VertexId>,
        names: HashMap<String, Name>,
    ) -> Self {
        let n = vertex_names.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, (s, d)) in src.iter().zip(&dst).enumerate() {
            out[s.0].push(EdgeId(i));
            inc[d.0].push(EdgeId(i));
        }
        let mut g = DirectedGraph {
            vertex_names,
            edge_names,
            src,
            dst,
            out,
            inc,
            names,
            forced: Vec::new(),
        };
        g.forced = (0..n).map(|v| g.compute_forced(VertexId(v))).collect();
        g
    }

    // The unique boundary path leaving `v`, if there is exactly one.
    fn compute_forced(&self, v: VertexId) -> Option<BoundaryPoint> {
        let mut seen: Vec<VertexId> = vec![v];
        let mut edges = Vec::new();
        let mut at = v;
        loop {
            match self.out[at.0].as_slice() {
                [] => return Some(BoundaryPoint::Finite(Path::from_parts(v, edges))),
                [e] => {
                    edges.push(*e);
                    at = self.dst[e.0];
                    if let Some(pos) = seen.iter().position(|&u| u == at) {
                        let cycle = edges.split_off(pos);
                        let prefix = Path::from_parts(v, edges);
                        return Some(BoundaryPoint::lasso_unchecked(prefix, cycle));
                    }
                    seen.push(at);
                }
                _ => return None,
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count()).map(EdgeId)
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.src[e.0]
    }

    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.dst[e.0]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v.0]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.inc[v.0]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out[v.0].is_empty()
    }

    /// Vertices emitting no edge; for finite graphs these are the singular vertices.
    pub fn sinks(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_sink(v)).collect()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        match self.names.get(name) {
            Some(Name::Vertex(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        match self.names.get(name) {
            Some(Name::Edge(e)) => Some(*e),
            _ => None,
        }
    }

    /// The only boundary path starting at `v`, when `Z(v)` is a singleton.
    pub fn forced_tail(&self, v: VertexId) -> Option<&BoundaryPoint> {
        self.forced[v.0].as_ref()
    }

    /// Checks composability of a raw edge sequence starting at `start`.
    pub fn path(&self, start: VertexId, edges: Vec<EdgeId>) -> Result<Path> {
        if start.0 >= self.vertex_count() {
            return Err(Error::GraphMismatch);
        }
        let mut at = start;
        for (i, e) in edges.iter().enumerate() {
            if e.0 >= self.edge_count() {
                return Err(Error::GraphMismatch);
            }
            if self.src(*e) != at {
                return Err(Error::NotComposable { position: i });
            }
            at = self.dst(*e);
        }
        Ok(Path { start, edges })
    }

    /// Path through the given edges; the start vertex is the source of the first edge.
    pub fn edge_path(&self, edges: &[EdgeId]) -> Result<Path> {
        let first = edges.first().ok_or(Error::NotComposable { position: 0 })?;
        if first.0 >= self.edge_count() {
            return Err(Error::GraphMismatch);
        }
        self.path(self.src(*first), edges.to_vec())
    }

    pub fn contains_path(&self, p: &Path) -> bool {
        self.path(p.start, p.edges.clone()).is_ok()
    }

    /// Number of edges of the longest path, or `None` when the graph has a cycle.
    pub fn longest_path(&self) -> Option<usize> {
        // Kahn on reversed topological order.
        let n = self.vertex_count();
        let mut outdeg: Vec<usize> = (0..n).map(|v| self.out[v].len()).collect();
        let mut longest = vec![0usize; n];
        let mut ready: Vec<VertexId> = self.vertices().filter(|&v| outdeg[v.0] == 0).collect();
        let mut done = 0;
        while let Some(v) = ready.pop() {
            done += 1;
            for e in self.in_edges(v) {
                let u = self.src(*e);
                longest[u.0] = longest[u.0].max(longest[v.0] + 1);
                outdeg[u.0] -= 1;
                if outdeg[u.0] == 0 {
                    ready.push(u);
                }
            }
        }
        (done == n).then(|| longest.into_iter().max().unwrap_or(0))
    }

    /// Some vertex lying on a cycle, if any.
    pub fn vertex_on_cycle(&self) -> Option<VertexId> {
        if self.longest_path().is_some() {
            return None;
        }
        // Strip sinks repeatedly; whatever remains reaches a cycle, so walk until a repeat.
        let n = self.vertex_count();
        let mut outdeg: Vec<usize> = (0..n).map(|v| self.out[v].len()).collect();
        let mut removed = vec![false; n];
        let mut ready: Vec<usize> = (0..n).filter(|&v| outdeg[v] == 0).collect();
        while let Some(v) = ready.pop() {
            removed[v] = true;
            for e in &self.inc[v] {
                let u = self.src[e.0].0;
                outdeg[u] -= 1;
                if outdeg[u] == 0 {
                    ready.push(u);
                }
            }
        }
        let mut at = (0..n).find(|&v| !removed[v])?;
        let mut seen = vec![false; n];
        while !seen[at] {
            seen[at] = true;
            let e = self.out[at].iter().find(|e| !removed[self.dst[e.0].0])?;
            at = self.dst[e.0].0;
        }
        Some(VertexId(at))
    }

    /// All paths of exactly `len` edges starting at `v`, in lexicographic edge order.
    pub fn paths_from(&self, v: VertexId, len: usize) -> Vec<Path> {
        let mut acc = Vec::new();
        let mut stack = Vec::new();
        self.extend_paths(v, v, len, &mut stack, &mut |p| acc.push(p));
        acc
    }

    fn extend_paths(
        &self,
        start: VertexId,
        at: VertexId,
        remaining: usize,
        stack: &mut Vec<EdgeId>,
        emit: &mut dyn FnMut(Path),
    ) {
        if remaining == 0 {
            emit(Path::from_parts(start, stack.clone()));
            return;
        }
        for &e in self.out_edges(at) {
            stack.push(e);
            self.extend_paths(start, self.dst(e), remaining - 1, stack, emit);
            stack.pop();
        }
    }

    /// All paths of length at most `depth`, shortest first.
    pub fn paths_up_to(&self, depth: usize) -> Vec<Path> {
        let mut acc = Vec::new();
        for len in 0..=depth {
            for v in self.vertices() {
                acc.extend(self.paths_from(v, len));
            }
        }
        acc
    }

    /// Closed paths of length `len` based anywhere.
    pub fn closed_paths(&self, len: usize) -> Vec<Path> {
        self.vertices()
            .flat_map(|v| self.paths_from(v, len))
            .filter(|p| p.end(self) == p.start)
            .collect()
    }

    /// Disjoint cylinders covering the boundary-path space: every `Z(mu)` with
    /// `|mu| = depth` plus the singletons of boundary paths shorter than `depth`.
    pub fn cylinder_partition(&self, depth: usize) -> Vec<Cylinder> {
        let mut acc = Vec::new();
        for v in self.vertices() {
            let mut stack = Vec::new();
            self.partition_from(v, v, depth, &mut stack, &mut acc);
        }
        acc
    }

    fn partition_from(
        &self,
        start: VertexId,
        at: VertexId,
        remaining: usize,
        stack: &mut Vec<EdgeId>,
        acc: &mut Vec<Cylinder>,
    ) {
        if remaining == 0 || self.is_sink(at) {
            acc.push(Cylinder::new(Path::from_parts(start, stack.clone())));
            return;
        }
        for &e in self.out_edges(at) {
            stack.push(e);
            self.partition_from(start, self.dst(e), remaining - 1, stack, acc);
            stack.pop();
        }
    }

    /// Graph file text that reproduces this graph.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in self.vertices() {
            s.push_str(&format!("vertex {}\n", self.vertex_name(v)));
        }
        for e in self.edges() {
            s.push_str(&format!(
                "edge {} {} {}\n",
                self.edge_name(e),
                self.vertex_name(self.src(e)),
                self.vertex_name(self.dst(e))
            ));
        }
        s
    }

    /// `e1.e2` for paths, `@v` for a bare vertex.
    pub fn path_literal(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            format!("@{}", self.vertex_name(p.start))
        } else {
            self.edges_literal(&p.edges)
        }
    }

    pub(crate) fn edges_literal(&self, edges: &[EdgeId]) -> String {
        edges
            .iter()
            .map(|e| self.edge_name(*e))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses `e1.e2.e3` or `@v`.
    pub fn parse_path(&self, literal: &str) -> Result<Path> {
        let lit = literal.trim();
        let bad = |message: &str| Error::Literal {
            literal: lit.to_string(),
            message: message.to_string(),
        };
        if let Some(v) = lit.strip_prefix('@') {
            let v = self.vertex_by_name(v).ok_or_else(|| bad("unknown vertex"))?;
            return Ok(Path::from_parts(v, Vec::new()));
        }
        if lit.is_empty() {
            return Err(bad("empty path"));
        }
        let edges = self.parse_edge_list(lit)?;
        self.edge_path(&edges).map_err(|e| bad(&e.to_string()))
    }

    pub(crate) fn parse_edge_list(&self, lit: &str) -> Result<Vec<EdgeId>> {
        lit.split('.')
            .map(|w| {
                self.edge_by_name(w.trim()).ok_or_else(|| Error::Literal {
                    literal: lit.to_string(),
                    message: format!("unknown edge `{w}`"),
                })
            })
            .collect()
    }
}

/// A finite path, possibly of length zero (a bare vertex).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub(crate) start: VertexId,
    pub(crate) edges: Vec<EdgeId>,
}

impl Path {
    pub(crate) fn from_parts(start: VertexId, edges: Vec<EdgeId>) -> Self {
        Path { start, edges }
    }

    pub fn vertex(v: VertexId) -> Self {
        Path {
            start: v,
            edges: Vec::new(),
        }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, g: &DirectedGraph) -> VertexId {
        self.edges.last().map_or(self.start, |e| g.dst(*e))
    }

    /// `self` followed by `e`; caller guarantees composability.
    pub(crate) fn pushed(&self, e: EdgeId) -> Path {
        let mut edges = self.edges.clone();
        edges.push(e);
        Path {
            start: self.start,
            edges,
        }
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.start == other.start && other.edges.starts_with(&self.edges)
    }
}

/// The clopen set `Z(mu)` of boundary points extending `mu`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder {
    base: Path,
}

impl Cylinder {
    pub fn new(base: Path) -> Self {
        Cylinder { base }
    }

    pub fn base(&self) -> &Path {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, x: &BoundaryPoint) -> bool {
        x.start() == self.base.start && x.begins_with(&self.base.edges)
    }

    pub fn is_subset_of(&self, other: &Cylinder) -> bool {
        other.base.is_prefix_of(&self.base)
    }

    pub fn is_disjoint_from(&self, other: &Cylinder) -> bool {
        !self.is_subset_of(other) && !other.is_subset_of(self)
    }

    /// Some point of the cylinder: follow first out-edges until a sink or a repeat.
    pub fn representative(&self, g: &DirectedGraph) -> BoundaryPoint {
        let mut edges = self.base.edges.clone();
        let mut at = self.base.end(g);
        let mut seen = vec![(at, edges.len())];
        loop {
            match g.out_edges(at).first() {
                None => return BoundaryPoint::Finite(Path::from_parts(self.base.start, edges)),
                Some(&e) => {
                    edges.push(e);
                    at = g.dst(e);
                    if let Some(&(_, pos)) = seen.iter().find(|(u, _)| *u == at) {
                        let cycle = edges.split_off(pos);
                        return BoundaryPoint::lasso_unchecked(
                            Path::from_parts(self.base.start, edges),
                            cycle,
                        );
                    }
                    seen.push((at, edges.len()));
                }
            }
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}
