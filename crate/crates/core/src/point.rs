//! Exact boundary points: finite paths to sinks and eventually periodic lassos.

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, EdgeId, Path, VertexId};

/// A point of the boundary-path space with a finite description.
///
/// Lassos are kept canonical (primitive cycle, shortest prefix), so derived
/// equality is point equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryPoint {
    /// A path ending at a sink; a bare sink has no edges.
    Finite(Path),
    /// `prefix . cycle^w`; `cycle` is the edge sequence right after the prefix.
    Lasso { prefix: Path, cycle: Vec<EdgeId> },
}

fn primitive_root(cycle: &[EdgeId]) -> &[EdgeId] {
    let n = cycle.len();
    for d in 1..n {
        if n % d == 0 && (d..n).all(|i| cycle[i] == cycle[i - d]) {
            return &cycle[..d];
        }
    }
    cycle
}

impl BoundaryPoint {
    /// Canonicalizes without composability checks; callers guarantee a valid lasso.
    pub(crate) fn lasso_unchecked(prefix: Path, cycle: Vec<EdgeId>) -> Self {
        let mut cycle = primitive_root(&cycle).to_vec();
        let mut prefix = prefix;
        while let (Some(&p), Some(&c)) = (prefix.edges.last(), cycle.last()) {
            if p != c {
                break;
            }
            prefix.edges.pop();
            cycle.rotate_right(1);
        }
        BoundaryPoint::Lasso { prefix, cycle }
    }

    /// Validates and canonicalizes `prefix . cycle^w`.
    pub fn lasso(g: &DirectedGraph, prefix: &Path, cycle: &[EdgeId]) -> Result<Self> {
        if !g.contains_path(prefix) {
            return Err(Error::GraphMismatch);
        }
        let end = prefix.end(g);
        if cycle.is_empty() {
            return Err(Error::BadCycle);
        }
        let c = g.path(end, cycle.to_vec()).map_err(|e| match e {
            Error::NotComposable { position } => Error::NotComposable {
                position: prefix.len() + position,
            },
            Error::GraphMismatch => Error::GraphMismatch,
            _ => Error::BadCycle,
        })?;
        if c.end(g) != end {
            return Err(Error::BadCycle);
        }
        Ok(Self::lasso_unchecked(prefix.clone(), cycle.to_vec()))
    }

    /// A finite boundary path; its terminal vertex must be a sink.
    pub fn finite(g: &DirectedGraph, path: Path) -> Result<Self> {
        if !g.contains_path(&path) {
            return Err(Error::GraphMismatch);
        }
        let end = path.end(g);
        if !g.is_sink(end) {
            return Err(Error::NotASink {
                vertex: g.vertex_name(end).to_string(),
            });
        }
        Ok(BoundaryPoint::Finite(path))
    }

    pub fn start(&self) -> VertexId {
        match self {
            BoundaryPoint::Finite(p) => p.start,
            BoundaryPoint::Lasso { prefix, .. } => prefix.start,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BoundaryPoint::Finite(_))
    }

    /// Number of edges, `None` for infinite points.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            BoundaryPoint::Finite(p) => Some(p.len()),
            BoundaryPoint::Lasso { .. } => None,
        }
    }

    /// `|prefix| + |cycle|` for lassos, the edge count for finite points.
    pub fn description_length(&self) -> usize {
        match self {
            BoundaryPoint::Finite(p) => p.len(),
            BoundaryPoint::Lasso { prefix, cycle } => prefix.len() + cycle.len(),
        }
    }

    /// The `i`-th edge of the expansion.
    pub fn symbol(&self, i: usize) -> Option<EdgeId> {
        match self {
            BoundaryPoint::Finite(p) => p.edges.get(i).copied(),
            BoundaryPoint::Lasso { prefix, cycle } => Some(if i < prefix.len() {
                prefix.edges[i]
            } else {
                cycle[(i - prefix.len()) % cycle.len()]
            }),
        }
    }

    /// The first `n` edges, fewer for short finite points.
    pub fn expand(&self, n: usize) -> Vec<EdgeId> {
        (0..n).map_while(|i| self.symbol(i)).collect()
    }

    pub fn begins_with(&self, edges: &[EdgeId]) -> bool {
        edges
            .iter()
            .enumerate()
            .all(|(i, e)| self.symbol(i) == Some(*e))
    }

    /// The prefix path of length `n`, if the point has that many edges.
    pub fn prefix_path(&self, n: usize) -> Option<Path> {
        let edges = self.expand(n);
        (edges.len() == n).then(|| Path::from_parts(self.start(), edges))
    }

    /// Whether `sigma^k` is defined at this point.
    pub fn in_dom(&self, k: usize) -> bool {
        self.finite_len().map_or(true, |l| l >= k)
    }

    /// `sigma^k`; errors when the point has fewer than `k` edges.
    pub fn shift(&self, g: &DirectedGraph, k: usize) -> Result<Self> {
        match self {
            BoundaryPoint::Finite(p) => {
                if p.len() < k {
                    return Err(Error::Domain { required: k });
                }
                let start = if k == 0 { p.start } else { g.dst(p.edges[k - 1]) };
                Ok(BoundaryPoint::Finite(Path::from_parts(
                    start,
                    p.edges[k..].to_vec(),
                )))
            }
            BoundaryPoint::Lasso { prefix, cycle } => {
                if k <= prefix.len() {
                    let start = if k == 0 {
                        prefix.start
                    } else {
                        g.dst(prefix.edges[k - 1])
                    };
                    return Ok(BoundaryPoint::Lasso {
                        prefix: Path::from_parts(start, prefix.edges[k..].to_vec()),
                        cycle: cycle.clone(),
                    });
                }
                let mut c = cycle.clone();
                c.rotate_left((k - prefix.len()) % cycle.len());
                Ok(BoundaryPoint::Lasso {
                    prefix: Path::vertex(g.src(c[0])),
                    cycle: c,
                })
            }
        }
    }

    /// `e . self`; the caller guarantees `dst(e)` is the start of `self`.
    pub(crate) fn prepend(&self, g: &DirectedGraph, e: EdgeId) -> Self {
        self.prepend_path(g, &[e])
    }

    /// `edges . self`, canonicalized.
    pub(crate) fn prepend_path(&self, g: &DirectedGraph, edges: &[EdgeId]) -> Self {
        if edges.is_empty() {
            return self.clone();
        }
        let start = g.src(edges[0]);
        match self {
            BoundaryPoint::Finite(p) => {
                let mut all = edges.to_vec();
                all.extend_from_slice(&p.edges);
                BoundaryPoint::Finite(Path::from_parts(start, all))
            }
            BoundaryPoint::Lasso { prefix, cycle } => {
                let mut all = edges.to_vec();
                all.extend_from_slice(&prefix.edges);
                Self::lasso_unchecked(Path::from_parts(start, all), cycle.clone())
            }
        }
    }

    /// Checked concatenation of a path and a point starting where it ends.
    pub fn after_path(&self, g: &DirectedGraph, path: &Path) -> Result<Self> {
        if path.end(g) != self.start() {
            return Err(Error::NotComposable {
                position: path.len(),
            });
        }
        Ok(self.prepend_path(g, &path.edges))
    }
}

/// Every boundary point with description length at most `max_len`, sorted.
pub fn enumerate_points(g: &DirectedGraph, max_len: usize) -> Vec<BoundaryPoint> {
    let mut acc = std::collections::BTreeSet::new();
    for p in g.paths_up_to(max_len) {
        if g.is_sink(p.end(g)) {
            acc.insert(BoundaryPoint::Finite(p.clone()));
        }
        for split in 0..p.len() {
            let prefix = Path::from_parts(p.start(), p.edges()[..split].to_vec());
            if prefix.end(g) == p.end(g) {
                acc.insert(BoundaryPoint::lasso_unchecked(
                    prefix,
                    p.edges()[split..].to_vec(),
                ));
            }
        }
    }
    acc.into_iter().collect()
}

/// A random point: a walk of `1..=max_walk` edges from a random vertex, closed
/// at its last repeated vertex, or continued until a repeat or a sink.
/// `None` for the empty graph.
pub fn random_point<R: rand::Rng + ?Sized>(
    g: &DirectedGraph,
    rng: &mut R,
    max_walk: usize,
) -> Option<BoundaryPoint> {
    if g.vertex_count() == 0 {
        return None;
    }
    let start = VertexId(rng.gen_range(0..g.vertex_count()));
    let target = rng.gen_range(1..=max_walk.max(1));
    let mut edges: Vec<EdgeId> = Vec::new();
    let mut visits: Vec<VertexId> = vec![start];
    let mut at = start;
    loop {
        let out = g.out_edges(at);
        if out.is_empty() {
            return Some(BoundaryPoint::Finite(Path::from_parts(start, edges)));
        }
        let e = out[rng.gen_range(0..out.len())];
        edges.push(e);
        at = g.dst(e);
        visits.push(at);
        if edges.len() >= target {
            if let Some(i) = visits[..visits.len() - 1].iter().rposition(|&u| u == at) {
                let cycle = edges.split_off(i);
                return Some(BoundaryPoint::lasso_unchecked(
                    Path::from_parts(start, edges),
                    cycle,
                ));
            }
        }
    }
}

impl DirectedGraph {
    /// Canonical literal: `e1.e2@v`, `@v`, or `e1.(c1.c2)^w`.
    pub fn point_literal(&self, x: &BoundaryPoint) -> String {
        match x {
            BoundaryPoint::Finite(p) => {
                let end = self.vertex_name(p.end(self));
                if p.is_empty() {
                    format!("@{end}")
                } else {
                    format!("{}@{end}", self.edges_literal(&p.edges))
                }
            }
            BoundaryPoint::Lasso { prefix, cycle } => {
                let c = format!("({})^w", self.edges_literal(cycle));
                if prefix.is_empty() {
                    c
                } else {
                    format!("{}.{c}", self.edges_literal(&prefix.edges))
                }
            }
        }
    }

    /// Parses a point literal. A finite path without `@v` must end at a sink.
    pub fn parse_point(&self, literal: &str) -> Result<BoundaryPoint> {
        let lit = literal.trim();
        let bad = |message: String| Error::Literal {
            literal: lit.to_string(),
            message,
        };
        if let Some(open) = lit.find('(') {
            let body = lit[open + 1..]
                .strip_suffix(")^w")
                .or_else(|| lit[open + 1..].strip_suffix(")^ω"))
                .ok_or_else(|| bad("lasso must end with `)^w`".into()))?;
            let cycle = self.parse_edge_list(body)?;
            let head = &lit[..open];
            let prefix = if head.is_empty() {
                Path::vertex(self.src(cycle[0]))
            } else {
                let head = head
                    .strip_suffix('.')
                    .ok_or_else(|| bad("expected `.` before `(`".into()))?;
                let edges = self.parse_edge_list(head)?;
                self.edge_path(&edges).map_err(|e| bad(e.to_string()))?
            };
            return BoundaryPoint::lasso(self, &prefix, &cycle).map_err(|e| bad(e.to_string()));
        }
        let (path_part, marker) = match lit.find('@') {
            Some(at) => (&lit[..at], Some(&lit[at + 1..])),
            None => (lit, None),
        };
        let path = if path_part.is_empty() {
            let name = marker.ok_or_else(|| bad("empty literal".into()))?;
            let v = self
                .vertex_by_name(name)
                .ok_or_else(|| bad(format!("unknown vertex `{name}`")))?;
            Path::vertex(v)
        } else {
            let edges = self.parse_edge_list(path_part)?;
            let p = self.edge_path(&edges).map_err(|e| bad(e.to_string()))?;
            if let Some(name) = marker {
                if self.vertex_by_name(name) != Some(p.end(self)) {
                    return Err(bad(format!("path does not end at `{name}`")));
                }
            }
            p
        };
        BoundaryPoint::finite(self, path).map_err(|e| bad(e.to_string()))
    }
}
