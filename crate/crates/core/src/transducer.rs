//! Finite transducers between boundary-path spaces.
//!
//! Text format, one directive per line (`#` comments):
//!
//! ```text
//! state <id> [initial]
//! map <state> <E-edge> <F-edge | -> <next-state>
//! halt <state> <E-edge> <F-point>
//! sinkmap <state> <E-vertex> <F-point>
//! ```
//!
//! `-` emits nothing; it is only allowed before the first output edge, which
//! lets block codes with anticipation be written as delayed machines. `halt`
//! ends the output with a point and is only allowed where the rest of the
//! input is forced. `sinkmap` gives the remaining output when the input ends
//! at a sink.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::funcspace::PointMap;
use crate::graph::{DirectedGraph, EdgeId, VertexId};
use crate::machine::{Machine, Out};
use crate::point::BoundaryPoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Emit { out: Option<EdgeId>, next: usize },
    Halt(BoundaryPoint),
}

/// A structurally valid transducer from `source` to `target`.
#[derive(Debug, Clone)]
pub struct Transducer {
    source: DirectedGraph,
    target: DirectedGraph,
    states: Vec<String>,
    initial: usize,
    steps: BTreeMap<(usize, EdgeId), Step>,
    sink_out: BTreeMap<(usize, VertexId), BoundaryPoint>,
    delay: usize,
    reachable: usize,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

impl Transducer {
    pub fn parse(text: &str, source: &DirectedGraph, target: &DirectedGraph) -> Result<Self> {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, w)| !w.is_empty())
            .collect();

        let mut states: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut initial: Option<usize> = None;
        for (line, w) in &lines {
            if w[0] != "state" {
                continue;
            }
            let (name, init) = match w.as_slice() {
                [_, name] => (*name, false),
                [_, name, "initial"] => (*name, true),
                _ => return Err(syntax(*line, "expected `state <id> [initial]`")),
            };
            if index.contains_key(name) {
                return Err(Error::DuplicateId {
                    line: *line,
                    name: name.to_string(),
                });
            }
            index.insert(name.to_string(), states.len());
            if init {
                if initial.is_some() {
                    return Err(syntax(*line, "more than one initial state"));
                }
                initial = Some(states.len());
            }
            states.push(name.to_string());
        }
        if states.is_empty() {
            return Err(syntax(1, "no states declared"));
        }

        let state = |line: usize, name: &str| {
            index.get(name).copied().ok_or_else(|| Error::Dangling {
                line,
                kind: "state",
                name: name.to_string(),
            })
        };
        let e_edge = |line: usize, name: &str| {
            source.edge_by_name(name).ok_or_else(|| Error::Dangling {
                line,
                kind: "source edge",
                name: name.to_string(),
            })
        };
        let point = |line: usize, lit: &str| {
            target
                .parse_point(lit)
                .map_err(|e| syntax(line, e.to_string()))
        };

        let mut steps = BTreeMap::new();
        let mut sink_out = BTreeMap::new();
        for (line, w) in &lines {
            let line = *line;
            match w[0] {
                "state" => {}
                "map" => {
                    let [_, q, e, f, next] = w.as_slice() else {
                        return Err(syntax(line, "expected `map <state> <edge> <edge|-> <next>`"));
                    };
                    let out = if *f == "-" {
                        None
                    } else {
                        Some(target.edge_by_name(f).ok_or_else(|| Error::Dangling {
                            line,
                            kind: "target edge",
                            name: f.to_string(),
                        })?)
                    };
                    let key = (state(line, q)?, e_edge(line, e)?);
                    let step = Step::Emit {
                        out,
                        next: state(line, next)?,
                    };
                    if steps.insert(key, step).is_some() {
                        return Err(syntax(line, format!("duplicate transition for `{q}` on `{e}`")));
                    }
                }
                "halt" => {
                    let [_, q, e, p] = w.as_slice() else {
                        return Err(syntax(line, "expected `halt <state> <edge> <point>`"));
                    };
                    let key = (state(line, q)?, e_edge(line, e)?);
                    if steps.insert(key, Step::Halt(point(line, p)?)).is_some() {
                        return Err(syntax(line, format!("duplicate transition for `{q}` on `{e}`")));
                    }
                }
                "sinkmap" => {
                    let [_, q, v, p] = w.as_slice() else {
                        return Err(syntax(line, "expected `sinkmap <state> <vertex> <point>`"));
                    };
                    let vid = source.vertex_by_name(v).ok_or_else(|| Error::Dangling {
                        line,
                        kind: "source vertex",
                        name: v.to_string(),
                    })?;
                    if !source.is_sink(vid) {
                        return Err(syntax(line, format!("`{v}` is not a sink")));
                    }
                    if sink_out.insert((state(line, q)?, vid), point(line, p)?).is_some() {
                        return Err(syntax(line, format!("duplicate sinkmap for `{q}` at `{v}`")));
                    }
                }
                other => return Err(syntax(line, format!("unknown directive `{other}`"))),
            }
        }
        Self::new(
            source.clone(),
            target.clone(),
            states,
            initial.unwrap_or(0),
            steps,
            sink_out,
        )
    }

    /// Builds and validates a transducer.
    pub fn new(
        source: DirectedGraph,
        target: DirectedGraph,
        states: Vec<String>,
        initial: usize,
        steps: BTreeMap<(usize, EdgeId), Step>,
        sink_out: BTreeMap<(usize, VertexId), BoundaryPoint>,
    ) -> Result<Self> {
        let mut t = Transducer {
            source,
            target,
            states,
            initial,
            steps,
            sink_out,
            delay: 0,
            reachable: 0,
        };
        t.validate()?;
        Ok(t)
    }

    /// The identity transducer of a graph.
    pub fn identity(g: &DirectedGraph) -> Self {
        let steps = g
            .edges()
            .map(|e| ((0, e), Step::Emit { out: Some(e), next: 0 }))
            .collect();
        let sink_out = g
            .sinks()
            .into_iter()
            .map(|s| ((0, s), BoundaryPoint::Finite(crate::graph::Path::vertex(s))))
            .collect();
        Self::new(g.clone(), g.clone(), vec!["q".into()], 0, steps, sink_out)
            .expect("identity is valid")
    }

    // Explores (state, input vertex, last output vertex) from every start vertex.
    fn validate(&mut self) -> Result<()> {
        type Cfg = (usize, VertexId, Option<VertexId>);
        let (src, tgt) = (&self.source, &self.target);
        let name = |q: usize| self.states[q].as_str();
        if self.initial >= self.states.len() {
            return Err(Error::Validity("initial state out of range".into()));
        }
        let mut seen: HashSet<Cfg> = HashSet::new();
        let mut stack: Vec<Cfg> = Vec::new();
        let mut silent: HashMap<Cfg, Vec<Cfg>> = HashMap::new();
        for v in src.vertices() {
            let c = (self.initial, v, None);
            if seen.insert(c) {
                stack.push(c);
            }
        }
        let continues = |p: &BoundaryPoint, at: Option<VertexId>| at.map_or(true, |a| p.start() == a);
        while let Some((q, v, at)) = stack.pop() {
            if src.is_sink(v) {
                let p = self.sink_out.get(&(q, v)).ok_or_else(|| {
                    Error::Validity(format!(
                        "no sinkmap for state `{}` at sink `{}`",
                        name(q),
                        src.vertex_name(v)
                    ))
                })?;
                if !continues(p, at) {
                    return Err(Error::Validity(format!(
                        "sinkmap for `{}` at `{}` does not continue the output",
                        name(q),
                        src.vertex_name(v)
                    )));
                }
            }
            for &e in src.out_edges(v) {
                let step = self.steps.get(&(q, e)).ok_or_else(|| {
                    Error::Validity(format!(
                        "no transition for state `{}` on `{}`",
                        name(q),
                        src.edge_name(e)
                    ))
                })?;
                let next = match step {
                    Step::Emit { out: Some(f), next } => {
                        if at.is_some_and(|a| tgt.src(*f) != a) {
                            return Err(Error::Validity(format!(
                                "state `{}` on `{}` emits `{}` which does not follow the output so far",
                                name(q),
                                src.edge_name(e),
                                tgt.edge_name(*f)
                            )));
                        }
                        (*next, src.dst(e), Some(tgt.dst(*f)))
                    }
                    Step::Emit { out: None, next } => {
                        if at.is_some() {
                            return Err(Error::Validity(format!(
                                "state `{}` on `{}` is silent after output has started",
                                name(q),
                                src.edge_name(e)
                            )));
                        }
                        let n = (*next, src.dst(e), None);
                        silent.entry((q, v, at)).or_default().push(n);
                        n
                    }
                    Step::Halt(p) => {
                        if src.forced_tail(src.dst(e)).is_none() {
                            return Err(Error::Validity(format!(
                                "state `{}` halts on `{}` but the input continues in more than one way",
                                name(q),
                                src.edge_name(e)
                            )));
                        }
                        if !continues(p, at) {
                            return Err(Error::Validity(format!(
                                "halt of `{}` on `{}` does not continue the output",
                                name(q),
                                src.edge_name(e)
                            )));
                        }
                        continue;
                    }
                };
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        self.reachable = seen.len();
        self.delay = longest_silent_chain(&silent)?;
        Ok(())
    }

    pub fn source(&self) -> &DirectedGraph {
        &self.source
    }

    pub fn target(&self) -> &DirectedGraph {
        &self.target
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn initial_state(&self) -> usize {
        self.initial
    }

    /// Longest run of silent steps from any start.
    pub fn delay(&self) -> usize {
        self.delay
    }

    /// Number of reachable (state, input vertex, output vertex) configurations.
    pub fn reachable_configs(&self) -> usize {
        self.reachable
    }

    pub fn transition(&self, q: usize, e: EdgeId) -> Option<&Step> {
        self.steps.get(&(q, e))
    }

    pub fn apply(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        if x.start().0 >= self.source.vertex_count() {
            return Err(Error::GraphMismatch);
        }
        self.apply_from(self.initial, x)
    }

    /// Inverts a machine that emits exactly one edge per step, never halts,
    /// is injective on edges in each state and sends sinks to bare sinks.
    pub fn invert_letterwise(&self) -> Option<Self> {
        let mut steps = BTreeMap::new();
        for (&(q, e), step) in &self.steps {
            let Step::Emit { out: Some(f), next } = step else {
                return None;
            };
            if steps
                .insert((q, *f), Step::Emit { out: Some(e), next: *next })
                .is_some()
            {
                return None;
            }
        }
        let mut sink_out = BTreeMap::new();
        for (&(q, s), p) in &self.sink_out {
            let BoundaryPoint::Finite(path) = p else {
                return None;
            };
            if !path.is_empty() {
                return None;
            }
            let back = BoundaryPoint::Finite(crate::graph::Path::vertex(s));
            if sink_out.insert((q, path.start()), back).is_some() {
                return None;
            }
        }
        Self::new(
            self.target.clone(),
            self.source.clone(),
            self.states.clone(),
            self.initial,
            steps,
            sink_out,
        )
        .ok()
    }

    /// Text form accepted by [`Transducer::parse`].
    pub fn to_text(&self) -> String {
        let (src, tgt) = (&self.source, &self.target);
        let mut s = String::new();
        for (q, name) in self.states.iter().enumerate() {
            if q == self.initial {
                s.push_str(&format!("state {name} initial\n"));
            } else {
                s.push_str(&format!("state {name}\n"));
            }
        }
        for (&(q, e), step) in &self.steps {
            match step {
                Step::Emit { out, next } => s.push_str(&format!(
                    "map {} {} {} {}\n",
                    self.states[q],
                    src.edge_name(e),
                    out.map_or("-", |f| tgt.edge_name(f)),
                    self.states[*next]
                )),
                Step::Halt(p) => s.push_str(&format!(
                    "halt {} {} {}\n",
                    self.states[q],
                    src.edge_name(e),
                    tgt.point_literal(p)
                )),
            }
        }
        for (&(q, v), p) in &self.sink_out {
            s.push_str(&format!(
                "sinkmap {} {} {}\n",
                self.states[q],
                src.vertex_name(v),
                tgt.point_literal(p)
            ));
        }
        s
    }
}

fn longest_silent_chain<C: Copy + Eq + std::hash::Hash>(edges: &HashMap<C, Vec<C>>) -> Result<usize> {
    // Depth-first longest path with cycle detection.
    fn visit<C: Copy + Eq + std::hash::Hash>(
        c: C,
        edges: &HashMap<C, Vec<C>>,
        memo: &mut HashMap<C, usize>,
        active: &mut HashSet<C>,
    ) -> Result<usize> {
        if let Some(&d) = memo.get(&c) {
            return Ok(d);
        }
        if !active.insert(c) {
            return Err(Error::Validity("a cycle of silent transitions".into()));
        }
        let mut best = 0;
        for &n in edges.get(&c).map(Vec::as_slice).unwrap_or(&[]) {
            best = best.max(1 + visit(n, edges, memo, active)?);
        }
        active.remove(&c);
        memo.insert(c, best);
        Ok(best)
    }
    let mut memo = HashMap::new();
    let mut active = HashSet::new();
    let mut best = 0;
    for &c in edges.keys() {
        best = best.max(visit(c, edges, &mut memo, &mut active)?);
    }
    Ok(best)
}

impl Machine for Transducer {
    type State = usize;

    fn input(&self) -> &DirectedGraph {
        &self.source
    }
    fn output(&self) -> &DirectedGraph {
        &self.target
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn step(&self, s: &usize, e: EdgeId) -> Result<Out<usize>> {
        match self.steps.get(&(*s, e)) {
            Some(Step::Emit { out, next }) => Ok(Out::Emit(*out, *next)),
            Some(Step::Halt(p)) => Ok(Out::Halt(p.clone())),
            None => Err(Error::Validity(format!(
                "no transition for state `{}` on `{}`",
                self.states[*s],
                self.source.edge_name(e)
            ))),
        }
    }
    fn finish(&self, s: &usize, sink: VertexId) -> Result<BoundaryPoint> {
        self.sink_out.get(&(*s, sink)).cloned().ok_or_else(|| {
            Error::Validity(format!(
                "no sinkmap for state `{}` at `{}`",
                self.states[*s],
                self.source.vertex_name(sink)
            ))
        })
    }
}

impl PointMap for Transducer {
    fn apply(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        Transducer::apply(self, x)
    }
    fn lookahead(&self) -> usize {
        self.delay
    }
}
