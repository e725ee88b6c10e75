//! The partial shift on the boundary-path space of a finite graph.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Cylinder, DirectedGraph, Path};
use crate::point::BoundaryPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PeriodicityReport {
    Aperiodic,
    Periodic { p: usize },
    EventuallyPeriodic { n: usize, p: usize },
}

/// `(boundary path space, sigma)` for a finite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DRSystem {
    graph: DirectedGraph,
}

impl DRSystem {
    pub fn new(graph: DirectedGraph) -> Self {
        DRSystem { graph }
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn shift(&self, x: &BoundaryPoint, k: usize) -> Result<BoundaryPoint> {
        x.shift(&self.graph, k)
    }

    /// `sigma^{-1}(x)`, one point per edge entering the start of `x`.
    pub fn preimages(&self, x: &BoundaryPoint) -> Vec<BoundaryPoint> {
        self.graph
            .in_edges(x.start())
            .iter()
            .map(|&e| x.prepend(&self.graph, e))
            .collect()
    }

    /// Lexicographically least `(k, l)` with `sigma^k(x) = sigma^l(y)`.
    pub fn same_orbit(&self, x: &BoundaryPoint, y: &BoundaryPoint) -> Option<(usize, usize)> {
        let bound = self.orbit_bound(x, y);
        let ys: Vec<Option<BoundaryPoint>> =
            (0..=bound).map(|l| self.shift(y, l).ok()).collect();
        for k in 0..=bound {
            let Ok(xk) = self.shift(x, k) else { break };
            if let Some(l) = ys.iter().position(|yl| yl.as_ref() == Some(&xk)) {
                return Some((k, l));
            }
        }
        None
    }

    /// Search bound used by `same_orbit`.
    pub fn orbit_bound(&self, x: &BoundaryPoint, y: &BoundaryPoint) -> usize {
        x.description_length() + y.description_length() + self.graph.edge_count()
    }

    pub fn periodicity(&self, x: &BoundaryPoint) -> PeriodicityReport {
        match x {
            BoundaryPoint::Finite(_) => PeriodicityReport::Aperiodic,
            BoundaryPoint::Lasso { prefix, cycle } if prefix.is_empty() => {
                PeriodicityReport::Periodic { p: cycle.len() }
            }
            BoundaryPoint::Lasso { prefix, cycle } => PeriodicityReport::EventuallyPeriodic {
                n: prefix.len(),
                p: cycle.len(),
            },
        }
    }

    /// Condition L: every cycle has an exit. A cycle without exit is exactly a
    /// walk along out-degree-one vertices returning to its start.
    pub fn is_topologically_free(&self) -> bool {
        self.exitless_cycle().is_none()
    }

    /// A cycle without an exit, as a path from one of its vertices.
    pub fn exitless_cycle(&self) -> Option<Path> {
        let g = &self.graph;
        for v in g.vertices() {
            let mut at = v;
            let mut edges = Vec::new();
            for _ in 0..g.vertex_count() {
                let [e] = g.out_edges(at) else { break };
                edges.push(*e);
                at = g.dst(*e);
                if at == v {
                    return Some(Path::from_parts(v, edges));
                }
            }
        }
        None
    }

    /// Number of points with `sigma^p(x) = x`, as the trace of the p-th power
    /// of the vertex adjacency matrix.
    pub fn periodic_count(&self, p: usize) -> Result<u128> {
        let g = &self.graph;
        let n = g.vertex_count();
        let mut a = vec![vec![0u128; n]; n];
        for e in g.edges() {
            a[g.src(e).0][g.dst(e).0] += 1;
        }
        let mut power: Vec<Vec<u128>> = (0..n)
            .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
            .collect();
        for _ in 0..p {
            let mut next = vec![vec![0u128; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let t = power[i][k]
                            .checked_mul(a[k][j])
                            .ok_or(Error::Overflow("periodic_count"))?;
                        next[i][j] = next[i][j]
                            .checked_add(t)
                            .ok_or(Error::Overflow("periodic_count"))?;
                    }
                }
            }
            power = next;
        }
        (0..n).try_fold(0u128, |acc, i| {
            acc.checked_add(power[i][i])
                .ok_or(Error::Overflow("periodic_count"))
        })
    }

    /// The same count by listing the distinct points `c^w` for closed paths `c`.
    pub fn periodic_count_enumerated(&self, p: usize) -> usize {
        let g = &self.graph;
        let points: BTreeSet<BoundaryPoint> = g
            .closed_paths(p)
            .into_iter()
            .map(|c| BoundaryPoint::lasso_unchecked(Path::vertex(c.start()), c.edges().to_vec()))
            .collect();
        points.len()
    }

    /// `dom(sigma)` as the union of edge cylinders.
    pub fn dom_cylinders(&self) -> Vec<Cylinder> {
        self.graph
            .edges()
            .map(|e| Cylinder::new(Path::from_parts(self.graph.src(e), vec![e])))
            .collect()
    }

    /// `ran(sigma)` as the union of vertex cylinders of vertices receiving an edge.
    pub fn ran_cylinders(&self) -> Vec<Cylinder> {
        self.graph
            .vertices()
            .filter(|&v| !self.graph.in_edges(v).is_empty())
            .map(|v| Cylinder::new(Path::vertex(v)))
            .collect()
    }

    /// Every finite boundary point, or `None` when the graph has a cycle.
    pub fn finite_points(&self) -> Option<Vec<BoundaryPoint>> {
        let depth = self.graph.longest_path()?;
        Some(
            self.graph
                .cylinder_partition(depth)
                .into_iter()
                .map(|c| BoundaryPoint::Finite(c.base().clone()))
                .collect(),
        )
    }
}
