#![allow(dead_code)]

use drsys::funcspace::LocallyConstantFn;
use drsys::groupoid::GroupoidElement;
use drsys::point::random_point;
use drsys::{BoundaryPoint, DRSystem, DirectedGraph, Path, VertexId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random path of exactly `len` edges ending at `end`, if one exists.
pub fn path_into(g: &DirectedGraph, rng: &mut ChaCha8Rng, end: VertexId, len: usize) -> Option<Path> {
    let mut edges = Vec::new();
    let mut at = end;
    for _ in 0..len {
        let inc = g.in_edges(at);
        if inc.is_empty() {
            return None;
        }
        let e = inc[rng.gen_range(0..inc.len())];
        edges.push(e);
        at = g.src(e);
    }
    edges.reverse();
    Some(g.path(at, edges).expect("walk is a path"))
}

pub fn point(g: &DirectedGraph, rng: &mut ChaCha8Rng) -> BoundaryPoint {
    random_point(g, rng, 6).expect("nonempty graph")
}

/// Points `mu_i . z` for a common tail `z`, with the lengths `|mu_i|`.
pub fn cofinal_points(
    g: &DirectedGraph,
    rng: &mut ChaCha8Rng,
    count: usize,
    max_len: usize,
) -> Vec<(BoundaryPoint, usize)> {
    let z = point(g, rng);
    let mut out = Vec::new();
    for _ in 0..count {
        let len = rng.gen_range(0..=max_len);
        match path_into(g, rng, z.start(), len) {
            Some(p) => out.push((z.after_path(g, &p).expect("composable"), len)),
            None => out.push((z.clone(), 0)),
        }
    }
    out
}

pub fn element(sys: &DRSystem, rng: &mut ChaCha8Rng) -> GroupoidElement {
    let pts = cofinal_points(sys.graph(), rng, 2, 3);
    let (x, m) = pts[0].clone();
    let (y, n) = pts[1].clone();
    GroupoidElement::new(sys, x, m, n, y).expect("shared tail")
}

/// Elements `(x, y)`, `(y, w)` that compose.
pub fn composable_pair(sys: &DRSystem, rng: &mut ChaCha8Rng) -> (GroupoidElement, GroupoidElement) {
    let pts = cofinal_points(sys.graph(), rng, 3, 3);
    let (x, l) = pts[0].clone();
    let (y, m) = pts[1].clone();
    let (w, n) = pts[2].clone();
    (
        GroupoidElement::new(sys, x, l, m, y.clone()).expect("shared tail"),
        GroupoidElement::new(sys, y, m, n, w).expect("shared tail"),
    )
}

/// An integer function with random values on the cylinders of depth `depth`.
pub fn int_fn(g: &DirectedGraph, rng: &mut ChaCha8Rng, depth: usize) -> LocallyConstantFn<i64> {
    let pieces = g
        .cylinder_partition(depth)
        .into_iter()
        .map(|c| (c.base().clone(), rng.gen_range(-3..=3)))
        .collect();
    LocallyConstantFn::from_pieces(g, pieces).expect("partition is disjoint")
}
