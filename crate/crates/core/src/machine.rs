//! Sequential machines reading boundary points, and an exact equivalence
//! check for pairs of them.
//!
//! A machine reads the edges of an input point one at a time. Each step emits
//! at most one output edge, or halts with the whole remaining output. At a
//! sink the machine supplies the remaining output as a point.

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, EdgeId, Path, VertexId};
use crate::point::BoundaryPoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Out<S> {
    Emit(Option<EdgeId>, S),
    /// The rest of the output, starting where the emitted edges end.
    Halt(BoundaryPoint),
}

pub trait Machine {
    type State: Clone + Eq + Hash + Debug;

    fn input(&self) -> &DirectedGraph;
    fn output(&self) -> &DirectedGraph;
    fn initial(&self) -> Self::State;
    fn step(&self, s: &Self::State, e: EdgeId) -> Result<Out<Self::State>>;
    fn finish(&self, s: &Self::State, sink: VertexId) -> Result<BoundaryPoint>;

    /// Runs the machine on `x` starting in state `s`.
    fn apply_from(&self, s: Self::State, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        let mut out: Vec<EdgeId> = Vec::new();
        let mut s = s;
        let (prefix, cycle) = match x {
            BoundaryPoint::Finite(p) => (p, None),
            BoundaryPoint::Lasso { prefix, cycle } => (prefix, Some(cycle)),
        };
        for &e in prefix.edges() {
            match self.step(&s, e)? {
                Out::Emit(o, next) => {
                    out.extend(o);
                    s = next;
                }
                Out::Halt(rest) => return self.join(&out, &rest),
            }
        }
        let Some(cycle) = cycle else {
            let rest = self.finish(&s, prefix.end(self.input()))?;
            return self.join(&out, &rest);
        };
        let mut seen: HashMap<Self::State, usize> = HashMap::new();
        loop {
            if let Some(&pos) = seen.get(&s) {
                let block = out.split_off(pos);
                return self.close_lasso(out, block);
            }
            seen.insert(s.clone(), out.len());
            for &e in cycle {
                match self.step(&s, e)? {
                    Out::Emit(o, next) => {
                        out.extend(o);
                        s = next;
                    }
                    Out::Halt(rest) => return self.join(&out, &rest),
                }
            }
        }
    }

    #[doc(hidden)]
    fn join(&self, out: &[EdgeId], rest: &BoundaryPoint) -> Result<BoundaryPoint> {
        let g = self.output();
        if out.is_empty() {
            return Ok(rest.clone());
        }
        let path = g
            .edge_path(out)
            .map_err(|e| Error::Validity(format!("emitted edges: {e}")))?;
        rest.after_path(g, &path)
            .map_err(|_| Error::Validity("output point does not continue the emitted path".into()))
    }

    #[doc(hidden)]
    fn close_lasso(&self, prefix: Vec<EdgeId>, block: Vec<EdgeId>) -> Result<BoundaryPoint> {
        let g = self.output();
        if block.is_empty() {
            return Err(Error::Validity("a cycle of the input produces no output".into()));
        }
        let start = prefix.first().or(block.first()).map(|e| g.src(*e)).expect("nonempty");
        let mut all = prefix.clone();
        all.extend_from_slice(&block);
        all.extend_from_slice(&block[..1]);
        g.path(start, all)
            .map_err(|e| Error::Validity(format!("emitted edges: {e}")))?;
        Ok(BoundaryPoint::lasso_unchecked(
            Path::from_parts(start, prefix),
            block,
        ))
    }
}

/// The identity map of a graph's boundary-path space.
#[derive(Debug, Clone)]
pub struct Identity<'a> {
    graph: &'a DirectedGraph,
}

impl<'a> Identity<'a> {
    pub fn new(graph: &'a DirectedGraph) -> Self {
        Identity { graph }
    }
}

impl Machine for Identity<'_> {
    type State = ();

    fn input(&self) -> &DirectedGraph {
        self.graph
    }
    fn output(&self) -> &DirectedGraph {
        self.graph
    }
    fn initial(&self) {}
    fn step(&self, _: &(), e: EdgeId) -> Result<Out<()>> {
        Ok(Out::Emit(Some(e), ()))
    }
    fn finish(&self, _: &(), sink: VertexId) -> Result<BoundaryPoint> {
        Ok(BoundaryPoint::Finite(Path::vertex(sink)))
    }
}

/// `second o first`.
#[derive(Debug, Clone)]
pub struct Composite<'a, A, B> {
    first: &'a A,
    second: &'a B,
}

impl<'a, A: Machine, B: Machine> Composite<'a, A, B> {
    pub fn new(first: &'a A, second: &'a B) -> Self {
        Composite { first, second }
    }
}

impl<A: Machine, B: Machine> Machine for Composite<'_, A, B> {
    type State = (A::State, B::State);

    fn input(&self) -> &DirectedGraph {
        self.first.input()
    }
    fn output(&self) -> &DirectedGraph {
        self.second.output()
    }
    fn initial(&self) -> Self::State {
        (self.first.initial(), self.second.initial())
    }
    fn step(&self, s: &Self::State, e: EdgeId) -> Result<Out<Self::State>> {
        Ok(match self.first.step(&s.0, e)? {
            Out::Emit(None, na) => Out::Emit(None, (na, s.1.clone())),
            Out::Emit(Some(f), na) => match self.second.step(&s.1, f)? {
                Out::Emit(o, nb) => Out::Emit(o, (na, nb)),
                Out::Halt(rest) => Out::Halt(rest),
            },
            Out::Halt(mid) => Out::Halt(self.second.apply_from(s.1.clone(), &mid)?),
        })
    }
    fn finish(&self, s: &Self::State, sink: VertexId) -> Result<BoundaryPoint> {
        let mid = self.first.finish(&s.0, sink)?;
        self.second.apply_from(s.1.clone(), &mid)
    }
}

/// One side of a comparison: a machine started in a given state, with the
/// first `skip` output edges discarded.
pub struct Side<'m, M: Machine> {
    pub machine: &'m M,
    pub state: M::State,
    pub skip: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// The outputs agree on every input; `configs` is the size of the explored product.
    Equal { configs: usize },
    /// Outputs differ on the cylinder of `input`; `point` is a concrete
    /// input where they differ when one was computed.
    Differ {
        input: Path,
        point: Option<BoundaryPoint>,
    },
    /// The output lag exceeded the configured bound.
    Inconclusive { configs: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Config<SA, SB> {
    sa: SA,
    sb: SB,
    v: VertexId,
    buf_a: Vec<EdgeId>,
    buf_b: Vec<EdgeId>,
    skip_a: usize,
    skip_b: usize,
}

/// Output of one side on a concrete input, after skipping and prepending its buffer.
fn concrete<M: Machine>(
    m: &M,
    s: &M::State,
    x: &BoundaryPoint,
    buf: &[EdgeId],
    skip: usize,
) -> Result<Option<BoundaryPoint>> {
    let y = m.apply_from(s.clone(), x)?;
    let g = m.output();
    let Ok(y) = y.shift(g, skip) else {
        return Ok(None);
    };
    if buf.is_empty() {
        return Ok(Some(y));
    }
    Ok(Some(m.join(buf, &y)?))
}

/// Decides whether two machines over the same input graph produce the same
/// output on every boundary point starting at one of `starts`.
///
/// Outputs that are undefined after skipping count as different. At vertices
/// with a unique continuation the outputs are computed concretely. A halt
/// into a vertex with several continuations is reported as a difference: the
/// halting side is constant on a cylinder with more than one point.
pub fn compare<A: Machine, B: Machine>(
    a: Side<'_, A>,
    b: Side<'_, B>,
    starts: &[VertexId],
    lag_bound: usize,
) -> Result<Comparison> {
    let g = a.machine.input();
    type Key<A, B> = Config<<A as Machine>::State, <B as Machine>::State>;
    let mut parent: HashMap<Key<A, B>, Option<(Key<A, B>, EdgeId)>> = HashMap::new();
    let mut queue: VecDeque<Key<A, B>> = VecDeque::new();
    for &v in starts {
        let c = Config {
            sa: a.state.clone(),
            sb: b.state.clone(),
            v,
            buf_a: Vec::new(),
            buf_b: Vec::new(),
            skip_a: a.skip,
            skip_b: b.skip,
        };
        if !parent.contains_key(&c) {
            parent.insert(c.clone(), None);
            queue.push_back(c);
        }
    }

    let path_to = |parent: &HashMap<Key<A, B>, Option<(Key<A, B>, EdgeId)>>, c: &Key<A, B>| {
        let mut edges = Vec::new();
        let mut at = c.clone();
        while let Some(Some((prev, e))) = parent.get(&at) {
            edges.push(*e);
            at = prev.clone();
        }
        edges.reverse();
        Path::from_parts(at.v, edges)
    };

    let same_concrete = |c: &Key<A, B>, x: &BoundaryPoint| -> Result<bool> {
        let pa = concrete(a.machine, &c.sa, x, &c.buf_a, c.skip_a)?;
        let pb = concrete(b.machine, &c.sb, x, &c.buf_b, c.skip_b)?;
        Ok(pa.is_some() && pa == pb)
    };

    while let Some(c) = queue.pop_front() {
        if let Some(tail) = g.forced_tail(c.v) {
            if !same_concrete(&c, tail)? {
                let input = path_to(&parent, &c);
                let point = tail.after_path(g, &input)?;
                return Ok(Comparison::Differ {
                    input,
                    point: Some(point),
                });
            }
            continue;
        }
        for &e in g.out_edges(c.v) {
            let w = g.dst(e);
            if let Some(tail) = g.forced_tail(w) {
                let x = tail.prepend(g, e);
                if !same_concrete(&c, &x)? {
                    let input = path_to(&parent, &c);
                    let point = x.after_path(g, &input)?;
                    return Ok(Comparison::Differ {
                        input: input.pushed(e),
                        point: Some(point),
                    });
                }
                continue;
            }
            let differ = |parent: &HashMap<_, _>| {
                Ok(Comparison::Differ {
                    input: path_to(parent, &c).pushed(e),
                    point: None,
                })
            };
            let (Out::Emit(oa, na), Out::Emit(ob, nb)) =
                (a.machine.step(&c.sa, e)?, b.machine.step(&c.sb, e)?)
            else {
                return differ(&parent);
            };
            let mut next = Config {
                sa: na,
                sb: nb,
                v: w,
                buf_a: c.buf_a.clone(),
                buf_b: c.buf_b.clone(),
                skip_a: c.skip_a,
                skip_b: c.skip_b,
            };
            if let Some(f) = oa {
                if next.skip_a > 0 {
                    next.skip_a -= 1;
                } else {
                    next.buf_a.push(f);
                }
            }
            if let Some(f) = ob {
                if next.skip_b > 0 {
                    next.skip_b -= 1;
                } else {
                    next.buf_b.push(f);
                }
            }
            let common = next.buf_a.len().min(next.buf_b.len());
            if next.buf_a[..common] != next.buf_b[..common] {
                return differ(&parent);
            }
            next.buf_a.drain(..common);
            next.buf_b.drain(..common);
            if next.buf_a.len().max(next.buf_b.len()) > lag_bound {
                return Ok(Comparison::Inconclusive {
                    configs: parent.len(),
                });
            }
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((c.clone(), e)));
                queue.push_back(next);
            }
        }
    }
    Ok(Comparison::Equal {
        configs: parent.len(),
    })
}
