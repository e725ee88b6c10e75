//! Locally constant functions on the boundary-path space and the operators
//! `sigma^*`, `sigma_*` and pullback along a homeomorphism.
//!
//! A function is stored in its coarsest cylinder form: a cylinder `Z(mu)` is
//! a piece iff the function is constant on it but not on its parent. This
//! makes structural equality coincide with pointwise equality.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Cylinder, DirectedGraph, Path};
use crate::point::BoundaryPoint;

/// Coefficient ring for locally constant functions.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn render(&self) -> String;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(n: i64) -> Self {
        n
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Rational64 {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational64::from_integer(n)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Float tolerance for complex-valued functions.
pub const COMPLEX_TOLERANCE: f64 = 1e-9;

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).norm() <= COMPLEX_TOLERANCE
    }
    fn render(&self) -> String {
        if self.im >= 0.0 {
            format!("{}+{}i", self.re, self.im)
        } else {
            format!("{}{}i", self.re, self.im)
        }
    }
}

/// A map between boundary-path spaces that can be evaluated on points and
/// whose first `n` output symbols depend on at most `n + lookahead()` input symbols.
pub trait PointMap {
    fn apply(&self, x: &BoundaryPoint) -> Result<BoundaryPoint>;
    fn lookahead(&self) -> usize;
}

/// A finitely supported locally constant function, zero off its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantFn<S> {
    pieces: BTreeMap<Path, S>,
}

impl<S: Scalar> Default for LocallyConstantFn<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> LocallyConstantFn<S> {
    pub fn zero() -> Self {
        LocallyConstantFn {
            pieces: BTreeMap::new(),
        }
    }

    pub fn constant(g: &DirectedGraph, s: S) -> Self {
        let cells = g.vertices().map(|v| (Path::vertex(v), s.clone())).collect();
        Self::normalized(g, cells, 0)
    }

    pub fn indicator(g: &DirectedGraph, base: &Path) -> Self {
        Self::normalized(g, vec![(base.clone(), S::one())], base.len())
    }

    /// Builds a function from disjoint cylinder pieces.
    pub fn from_pieces(g: &DirectedGraph, pieces: Vec<(Path, S)>) -> Result<Self> {
        for (i, (p, _)) in pieces.iter().enumerate() {
            if !g.contains_path(p) {
                return Err(Error::GraphMismatch);
            }
            for (q, _) in &pieces[..i] {
                if p.is_prefix_of(q) || q.is_prefix_of(p) {
                    return Err(Error::Overlap {
                        first: g.path_literal(q),
                        second: g.path_literal(p),
                    });
                }
            }
        }
        Ok(Self::sum_of_terms(g, pieces))
    }

    /// `sum_i s_i 1_{Z(mu_i)}`; cylinders may overlap.
    pub fn sum_of_terms(g: &DirectedGraph, terms: Vec<(Path, S)>) -> Self {
        let depth = terms.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
        let cells = g
            .cylinder_partition(depth)
            .into_iter()
            .map(|c| {
                let v = terms
                    .iter()
                    .filter(|(p, _)| p.is_prefix_of(c.base()))
                    .fold(S::zero(), |acc, (_, s)| acc + s.clone());
                (c.base().clone(), v)
            })
            .collect();
        Self::normalized(g, cells, depth)
    }

    // `cells` is a full partition of depth `depth` (missing cells read as zero).
    fn normalized(g: &DirectedGraph, cells: Vec<(Path, S)>, depth: usize) -> Self {
        let mut map: BTreeMap<Path, S> = BTreeMap::new();
        for c in g.cylinder_partition(depth) {
            map.insert(c.base().clone(), S::zero());
        }
        for (p, s) in cells {
            if p.len() == depth || g.is_sink(p.end(g)) {
                map.insert(p, s);
            } else {
                for c in g.cylinder_partition(depth) {
                    if p.is_prefix_of(c.base()) {
                        map.insert(c.base().clone(), s.clone());
                    }
                }
            }
        }
        for level in (1..=depth).rev() {
            let parents: Vec<Path> = map
                .keys()
                .filter(|p| p.len() == level)
                .map(|p| Path::from_parts(p.start(), p.edges()[..level - 1].to_vec()))
                .collect();
            let mut done = std::collections::BTreeSet::new();
            for parent in parents {
                if !done.insert(parent.clone()) {
                    continue;
                }
                let children: Vec<Path> = g
                    .out_edges(parent.end(g))
                    .iter()
                    .map(|&e| parent.pushed(e))
                    .collect();
                let first = match map.get(&children[0]) {
                    Some(v) => v.clone(),
                    None => continue,
                };
                if children.iter().all(|c| map.get(c) == Some(&first)) {
                    for c in &children {
                        map.remove(c);
                    }
                    map.insert(parent, first);
                }
            }
        }
        map.retain(|_, s| !s.is_zero());
        LocallyConstantFn { pieces: map }
    }

    /// Pieces of the coarsest representation, in path order.
    pub fn pieces(&self) -> impl Iterator<Item = (&Path, &S)> {
        self.pieces.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Length of the longest piece base.
    pub fn depth(&self) -> usize {
        self.pieces.keys().map(Path::len).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &BoundaryPoint) -> S {
        for len in 0..=self.depth() {
            let Some(p) = x.prefix_path(len) else { break };
            if let Some(s) = self.pieces.get(&p) {
                return s.clone();
            }
        }
        S::zero()
    }

    /// Values on every cell of `cylinder_partition(depth)`, zeros included.
    pub fn dense(&self, g: &DirectedGraph, depth: usize) -> Vec<(Cylinder, S)> {
        let depth = depth.max(self.depth());
        g.cylinder_partition(depth)
            .into_iter()
            .map(|c| {
                let base = c.base();
                let v = (0..=base.len())
                    .find_map(|len| {
                        self.pieces
                            .get(&Path::from_parts(base.start(), base.edges()[..len].to_vec()))
                    })
                    .cloned()
                    .unwrap_or_else(S::zero);
                (c, v)
            })
            .collect()
    }

    /// Rewrites both functions over one shared partition.
    pub fn refine(
        g: &DirectedGraph,
        f: &Self,
        h: &Self,
    ) -> (Vec<(Cylinder, S)>, Vec<(Cylinder, S)>) {
        let depth = f.depth().max(h.depth());
        (f.dense(g, depth), h.dense(g, depth))
    }

    pub fn zip_with(&self, g: &DirectedGraph, other: &Self, op: impl Fn(&S, &S) -> S) -> Self {
        let (a, b) = Self::refine(g, self, other);
        let depth = self.depth().max(other.depth());
        let cells = a
            .into_iter()
            .zip(b)
            .map(|((c, x), (_, y))| (c.base().clone(), op(&x, &y)))
            .collect();
        Self::normalized(g, cells, depth)
    }

    pub fn map_values(&self, g: &DirectedGraph, op: impl Fn(&S) -> S) -> Self {
        let depth = self.depth();
        let cells = self
            .dense(g, depth)
            .into_iter()
            .map(|(c, s)| (c.base().clone(), op(&s)))
            .collect();
        Self::normalized(g, cells, depth)
    }

    pub fn add(&self, g: &DirectedGraph, other: &Self) -> Self {
        self.zip_with(g, other, |x, y| x.clone() + y.clone())
    }

    pub fn sub(&self, g: &DirectedGraph, other: &Self) -> Self {
        self.zip_with(g, other, |x, y| x.clone() - y.clone())
    }

    pub fn mul(&self, g: &DirectedGraph, other: &Self) -> Self {
        self.zip_with(g, other, |x, y| x.clone() * y.clone())
    }

    pub fn scale(&self, g: &DirectedGraph, s: &S) -> Self {
        self.map_values(g, |x| x.clone() * s.clone())
    }

    pub fn conj(&self, g: &DirectedGraph) -> Self {
        self.map_values(g, S::conj)
    }

    /// Pointwise comparison with the scalar tolerance.
    pub fn approx_eq(&self, g: &DirectedGraph, other: &Self) -> bool {
        let (a, b) = Self::refine(g, self, other);
        a.iter().zip(&b).all(|((_, x), (_, y))| x.approx_eq(y))
    }

    /// First partition cell where the two functions differ.
    pub fn first_difference(&self, g: &DirectedGraph, other: &Self) -> Option<Cylinder> {
        let (a, b) = Self::refine(g, self, other);
        a.into_iter()
            .zip(b)
            .find(|((_, x), (_, y))| !x.approx_eq(y))
            .map(|((c, _), _)| c)
    }

    /// Whether the support avoids the bare sink points.
    pub fn supported_in_dom(&self, g: &DirectedGraph) -> bool {
        self.support_violation(g).is_none()
    }

    fn support_violation(&self, g: &DirectedGraph) -> Option<&Path> {
        self.pieces
            .keys()
            .find(|p| p.is_empty() && g.is_sink(p.start()))
    }

    /// `x -> f(sigma(x))` on `dom(sigma)`: each piece `Z(mu)` becomes the pieces `Z(e mu)`.
    pub fn sigma_upper_star(&self, g: &DirectedGraph) -> Self {
        let terms: Vec<(Path, S)> = self
            .pieces
            .iter()
            .flat_map(|(mu, s)| {
                g.in_edges(mu.start()).iter().map(move |&e| {
                    let mut edges = vec![e];
                    edges.extend_from_slice(mu.edges());
                    (Path::from_parts(g.src(e), edges), s.clone())
                })
            })
            .collect();
        Self::from_disjoint_terms(g, terms)
    }

    fn from_disjoint_terms(g: &DirectedGraph, terms: Vec<(Path, S)>) -> Self {
        let depth = terms.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
        Self::normalized(g, terms, depth)
    }

    /// `x -> sum over sigma(z) = x of f(z)`; the support must avoid bare sinks.
    pub fn sigma_lower_star(&self, g: &DirectedGraph) -> Result<Self> {
        if let Some(p) = self.support_violation(g) {
            return Err(Error::Support {
                cylinder: g.path_literal(p),
            });
        }
        let mut terms = Vec::new();
        for (mu, s) in &self.pieces {
            if mu.is_empty() {
                for &e in g.out_edges(mu.start()) {
                    terms.push((Path::vertex(g.dst(e)), s.clone()));
                }
            } else {
                let start = g.dst(mu.edges()[0]);
                terms.push((Path::from_parts(start, mu.edges()[1..].to_vec()), s.clone()));
            }
        }
        Ok(Self::sum_of_terms(g, terms))
    }

    /// `f o map`, a function on the domain graph `g` of `map`.
    pub fn compose(&self, g: &DirectedGraph, map: &dyn PointMap) -> Result<Self> {
        let depth = self.depth() + map.lookahead() + 1;
        let cells = g
            .cylinder_partition(depth)
            .into_iter()
            .map(|c| {
                let y = map.apply(&c.representative(g))?;
                Ok((c.base().clone(), self.evaluate(&y)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::normalized(g, cells, depth))
    }

    /// Piece list for reports.
    pub fn describe(&self, g: &DirectedGraph) -> Vec<FnPiece> {
        self.pieces
            .iter()
            .map(|(p, s)| FnPiece {
                cylinder: g.path_literal(p),
                value: s.render(),
            })
            .collect()
    }
}

impl LocallyConstantFn<i64> {
    /// `f^(k)(x) = sum_{i<k} f(sigma^i x)`.
    pub fn iterated(&self, g: &DirectedGraph, k: usize, x: &BoundaryPoint) -> Result<i64> {
        if !x.in_dom(k) {
            return Err(Error::Domain { required: k });
        }
        let mut total = 0i64;
        for i in 0..k {
            total = total
                .checked_add(self.evaluate(&x.shift(g, i)?))
                .ok_or(Error::Overflow("f_iterated"))?;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FnPiece {
    pub cylinder: String,
    pub value: String,
}

/// A parsed function file; the scalar kind is the most general value present.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyFn {
    Integer(LocallyConstantFn<i64>),
    Rational(LocallyConstantFn<Rational64>),
    Complex(LocallyConstantFn<Complex64>),
}

impl AnyFn {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyFn::Integer(_) => "integer",
            AnyFn::Rational(_) => "rational",
            AnyFn::Complex(_) => "complex",
        }
    }

    pub fn describe(&self, g: &DirectedGraph) -> Vec<FnPiece> {
        match self {
            AnyFn::Integer(f) => f.describe(g),
            AnyFn::Rational(f) => f.describe(g),
            AnyFn::Complex(f) => f.describe(g),
        }
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let body = s.strip_suffix('i')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().ok()?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}

enum RawValue {
    Int(i64),
    Rat(Rational64),
    Complex(Complex64),
}

fn parse_value(s: &str) -> Option<RawValue> {
    if let Ok(n) = s.parse::<i64>() {
        return Some(RawValue::Int(n));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = p.parse::<i64>().ok()?;
        let q = q.parse::<i64>().ok()?;
        return (q != 0).then(|| RawValue::Rat(Rational64::new(p, q)));
    }
    if s.ends_with('i') {
        return parse_complex(s).map(RawValue::Complex);
    }
    s.parse::<f64>()
        .ok()
        .map(|re| RawValue::Complex(Complex64::new(re, 0.0)))
}

/// Parses `cyl <literal> <value>` lines. Lasso literals are rejected: a single
/// infinite point is not open.
pub fn parse_function(g: &DirectedGraph, text: &str) -> Result<AnyFn> {
    let mut entries: Vec<(Path, RawValue, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.len() != 3 || words[0] != "cyl" {
            return Err(Error::Syntax {
                line,
                message: "expected `cyl <literal> <value>`".into(),
            });
        }
        entries.push((parse_cylinder_literal(g, words[1], line)?, {
            parse_value(words[2]).ok_or_else(|| Error::Syntax {
                line,
                message: format!("bad value `{}`", words[2]),
            })?
        }, line));
    }
    let complex = entries.iter().any(|(_, v, _)| matches!(v, RawValue::Complex(_)));
    let rational = entries.iter().any(|(_, v, _)| matches!(v, RawValue::Rat(_)));
    let check = |pieces: &[(Path, ())], idx: usize, line: usize| -> Result<()> {
        let p = &pieces[idx].0;
        for (q, _) in &pieces[..idx] {
            if p.is_prefix_of(q) || q.is_prefix_of(p) {
                return Err(Error::Syntax {
                    line,
                    message: Error::Overlap {
                        first: g.path_literal(q),
                        second: g.path_literal(p),
                    }
                    .to_string(),
                });
            }
        }
        Ok(())
    };
    let shapes: Vec<(Path, ())> = entries.iter().map(|(p, _, _)| (p.clone(), ())).collect();
    for (idx, (_, _, line)) in entries.iter().enumerate() {
        check(&shapes, idx, *line)?;
    }
    let pieces = entries.into_iter().map(|(p, v, _)| (p, v));
    Ok(if complex {
        AnyFn::Complex(LocallyConstantFn::sum_of_terms(
            g,
            pieces
                .map(|(p, v)| {
                    let c = match v {
                        RawValue::Int(n) => Complex64::new(n as f64, 0.0),
                        RawValue::Rat(r) => Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0),
                        RawValue::Complex(c) => c,
                    };
                    (p, c)
                })
                .collect(),
        ))
    } else if rational {
        AnyFn::Rational(LocallyConstantFn::sum_of_terms(
            g,
            pieces
                .map(|(p, v)| {
                    let r = match v {
                        RawValue::Int(n) => Rational64::from_integer(n),
                        RawValue::Rat(r) => r,
                        RawValue::Complex(_) => unreachable!(),
                    };
                    (p, r)
                })
                .collect(),
        ))
    } else {
        AnyFn::Integer(LocallyConstantFn::sum_of_terms(
            g,
            pieces
                .map(|(p, v)| match v {
                    RawValue::Int(n) => (p, n),
                    _ => unreachable!(),
                })
                .collect(),
        ))
    })
}

fn parse_cylinder_literal(g: &DirectedGraph, lit: &str, line: usize) -> Result<Path> {
    if lit.contains('(') {
        return Err(Error::Syntax {
            line,
            message: format!("`{lit}`: a lasso point is not a clopen set"),
        });
    }
    let at_line = |e: Error| Error::Syntax {
        line,
        message: e.to_string(),
    };
    if lit.starts_with('@') || !lit.contains('@') {
        return g.parse_path(lit).map_err(at_line);
    }
    match g.parse_point(lit).map_err(at_line)? {
        BoundaryPoint::Finite(p) => Ok(p),
        BoundaryPoint::Lasso { .. } => unreachable!(),
    }
}

/// Parses a weights file: integer function blocks introduced by `weight` lines.
/// Lines before the first `weight` form an unnamed first block.
pub fn parse_weights(g: &DirectedGraph, text: &str) -> Result<Vec<(String, LocallyConstantFn<i64>)>> {
    // (name, body, file line of the body's first line minus one)
    let mut blocks: Vec<(String, String, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut words = content.split_whitespace();
        if words.next() == Some("weight") {
            let name = words
                .next()
                .map_or_else(|| format!("w{}", blocks.len()), str::to_string);
            blocks.push((name, String::new(), i + 1));
            continue;
        }
        if blocks.is_empty() {
            if content.is_empty() {
                continue;
            }
            blocks.push(("w0".to_string(), String::new(), i));
        }
        let body = &mut blocks.last_mut().expect("block opened above").1;
        body.push_str(raw);
        body.push('\n');
    }
    blocks
        .into_iter()
        .map(|(name, body, offset)| {
            let shift = |e: Error| match e {
                Error::Syntax { line, message } => Error::Syntax {
                    line: line + offset,
                    message,
                },
                other => other,
            };
            match parse_function(g, &body).map_err(shift)? {
                AnyFn::Integer(f) => Ok((name, f)),
                _ => Err(Error::Syntax {
                    line: offset.max(1),
                    message: format!("weight `{name}` must be integer-valued"),
                }),
            }
        })
        .collect()
}

/// Failure of one of the pullback identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackWitness {
    /// `forward` checks `f -> f o h^{-1}`, `backward` its inverse.
    pub direction: &'static str,
    pub f: String,
    pub g: Option<String>,
    /// A point of the image space where the two sides differ.
    pub point: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropSigmaReport {
    /// `phi(sigma^*(f) g) = sigma^*(phi(f)) phi(g)` on all indicator pairs.
    pub cond_upper: bool,
    /// `phi(1_dom) = 1_dom` and `phi o sigma_* = sigma_* o phi` on all indicators in `dom(sigma)`.
    pub cond_lower: bool,
    pub witness_upper: Option<PullbackWitness>,
    pub witness_lower: Option<PullbackWitness>,
    pub depth: usize,
    /// Indicator functions per side: cylinders of depth `<= depth`.
    pub family_size: usize,
}

fn witness_at(
    to: &DirectedGraph,
    direction: &'static str,
    f: String,
    g: Option<String>,
    lhs: &LocallyConstantFn<i64>,
    rhs: &LocallyConstantFn<i64>,
) -> PullbackWitness {
    let cell = lhs.first_difference(to, rhs).expect("functions differ");
    PullbackWitness {
        direction,
        f,
        g,
        point: to.point_literal(&cell.representative(to)),
    }
}

fn dom_indicator(g: &DirectedGraph) -> LocallyConstantFn<i64> {
    LocallyConstantFn::sum_of_terms(
        g,
        g.edges()
            .map(|e| (Path::from_parts(g.src(e), vec![e]), 1))
            .collect(),
    )
}

/// Both pullback characterisations of conjugacy on the indicator family of
/// cylinders of depth `<= depth`, checked for `h` and for `h^{-1}`.
pub fn check_prop_sigma(
    h: &crate::homcheck::Homeomorphism,
    depth: usize,
) -> Result<PropSigmaReport> {
    let mut report = PropSigmaReport {
        cond_upper: true,
        cond_lower: true,
        witness_upper: None,
        witness_lower: None,
        depth,
        family_size: h.source().paths_up_to(depth).len(),
    };
    let inverse = h.inverse();
    for (map, direction) in [(h, "forward"), (&inverse, "backward")] {
        let (from, to) = (map.source(), map.target());
        let family: Vec<(Path, LocallyConstantFn<i64>)> = from
            .paths_up_to(depth)
            .into_iter()
            .map(|p| {
                let f = LocallyConstantFn::indicator(from, &p);
                (p, f)
            })
            .collect();
        let pushed: Vec<LocallyConstantFn<i64>> = family
            .iter()
            .map(|(_, f)| map.push(f))
            .collect::<Result<_>>()?;

        if report.cond_upper {
            'upper: for (i, (pf, f)) in family.iter().enumerate() {
                let up = f.sigma_upper_star(from);
                let shifted = pushed[i].sigma_upper_star(to);
                for (j, (pg, g)) in family.iter().enumerate() {
                    let lhs = map.push(&up.mul(from, g))?;
                    let rhs = shifted.mul(to, &pushed[j]);
                    if lhs != rhs {
                        report.cond_upper = false;
                        report.witness_upper = Some(witness_at(
                            to,
                            direction,
                            format!("cyl {}", from.path_literal(pf)),
                            Some(format!("cyl {}", from.path_literal(pg))),
                            &lhs,
                            &rhs,
                        ));
                        break 'upper;
                    }
                }
            }
        }

        if report.cond_lower {
            let lhs = map.push(&dom_indicator(from))?;
            let rhs = dom_indicator(to);
            if lhs != rhs {
                report.cond_lower = false;
                report.witness_lower = Some(witness_at(
                    to,
                    direction,
                    "1_dom".into(),
                    None,
                    &lhs,
                    &rhs,
                ));
                continue;
            }
            for (i, (pf, f)) in family.iter().enumerate() {
                if !f.supported_in_dom(from) {
                    continue;
                }
                let lhs = map.push(&f.sigma_lower_star(from)?)?;
                let rhs = pushed[i].sigma_lower_star(to)?;
                if lhs != rhs {
                    report.cond_lower = false;
                    report.witness_lower = Some(witness_at(
                        to,
                        direction,
                        format!("cyl {}", from.path_literal(pf)),
                        None,
                        &lhs,
                        &rhs,
                    ));
                    break;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn o2() -> DirectedGraph {
        parse_graph("vertex v\nedge a v v\nedge b v v\n").unwrap()
    }

    fn p2() -> DirectedGraph {
        parse_graph("vertex u\nvertex w\nedge f u w\n").unwrap()
    }

    fn ind(g: &DirectedGraph, lit: &str) -> LocallyConstantFn<i64> {
        LocallyConstantFn::indicator(g, &g.parse_path(lit).unwrap())
    }

    #[test]
    fn evaluation() {
        let g = o2();
        let za = ind(&g, "a");
        assert_eq!(za.evaluate(&g.parse_point("(a.b)^w").unwrap()), 1);
        assert_eq!(za.evaluate(&g.parse_point("(b.a)^w").unwrap()), 0);
        let f = LocallyConstantFn::from_pieces(
            &g,
            vec![(g.parse_path("a.a").unwrap(), 2), (g.parse_path("a.b").unwrap(), 3)],
        )
        .unwrap();
        assert_eq!(f.evaluate(&g.parse_point("a.(b)^w").unwrap()), 3);
    }

    #[test]
    fn normal_form_merges_siblings() {
        let g = o2();
        let f = ind(&g, "a.a").add(&g, &ind(&g, "a.b"));
        assert_eq!(f, ind(&g, "a"));
        let one = ind(&g, "a").add(&g, &ind(&g, "b"));
        assert_eq!(one, LocallyConstantFn::constant(&g, 1));
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let g = o2();
        let err = LocallyConstantFn::from_pieces(
            &g,
            vec![(g.parse_path("a").unwrap(), 1), (g.parse_path("a.b").unwrap(), 1)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Overlap { .. }));
    }

    #[test]
    fn refine_to_common_partition() {
        let g = o2();
        let f = ind(&g, "a");
        let h = ind(&g, "a.b").add(&g, &ind(&g, "b.a"));
        let (rf, rh) = LocallyConstantFn::refine(&g, &f, &h);
        assert_eq!(rf.len(), 4);
        assert!(rf.iter().zip(&rh).all(|(x, y)| x.0 == y.0));
        for (c, v) in &rf {
            assert_eq!(*v, f.evaluate(&c.representative(&g)));
        }
        let z = LocallyConstantFn::<i64>::zero();
        let (rz, rh) = LocallyConstantFn::refine(&g, &z, &h);
        assert!(rz.iter().all(|(_, v)| *v == 0));
        assert_eq!(rh.len(), 4);
    }

    #[test]
    fn upper_star_examples() {
        let g = p2();
        assert_eq!(ind(&g, "@w").sigma_upper_star(&g), ind(&g, "f"));
        let g = o2();
        let expected = ind(&g, "a.a").add(&g, &ind(&g, "b.a"));
        assert_eq!(ind(&g, "a").sigma_upper_star(&g), expected);
        assert!(LocallyConstantFn::<i64>::zero().sigma_upper_star(&g).is_zero());
    }

    #[test]
    fn lower_star_examples() {
        let g = o2();
        assert_eq!(
            ind(&g, "a").sigma_lower_star(&g).unwrap(),
            LocallyConstantFn::constant(&g, 1)
        );
        let g = p2();
        assert_eq!(ind(&g, "f").sigma_lower_star(&g).unwrap(), ind(&g, "@w"));
        assert!(matches!(
            ind(&g, "@w").sigma_lower_star(&g),
            Err(Error::Support { .. })
        ));
        assert!(LocallyConstantFn::<i64>::zero()
            .sigma_lower_star(&g)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn vertex_piece_on_non_sink_is_in_dom() {
        let g = p2();
        assert_eq!(ind(&g, "@u").sigma_lower_star(&g).unwrap(), ind(&g, "@w"));
    }

    #[test]
    fn iterated_sums() {
        let g = o2();
        let x = g.parse_point("(a.b)^w").unwrap();
        assert_eq!(ind(&g, "a").iterated(&g, 3, &x).unwrap(), 2);
        assert_eq!(ind(&g, "a").iterated(&g, 0, &x).unwrap(), 0);
        let one = LocallyConstantFn::constant(&g, 1i64);
        assert_eq!(one.iterated(&g, 7, &x).unwrap(), 7);
    }

    #[test]
    fn function_files() {
        let g = o2();
        let f = parse_function(&g, "cyl a 2\ncyl b.a 3\n").unwrap();
        assert_eq!(f.kind(), "integer");
        let f = parse_function(&g, "cyl a 1/2\n").unwrap();
        assert_eq!(f.kind(), "rational");
        let AnyFn::Complex(c) = parse_function(&g, "cyl a 1.5-2i\ncyl b i\n").unwrap() else {
            panic!()
        };
        let x = g.parse_point("(a)^w").unwrap();
        assert!(c.evaluate(&x).approx_eq(&Complex64::new(1.5, -2.0)));
        assert!(matches!(
            parse_function(&g, "cyl (a)^w 1\n"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_function(&g, "cyl a 1\ncyl a.b 1\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        let p = p2();
        assert!(parse_function(&p, "cyl f@w 1\ncyl @w 2\n").is_ok());
    }

    fn homeo(text: &str, inv: &str, e: &DirectedGraph, f: &DirectedGraph) -> crate::homcheck::Homeomorphism {
        use crate::transducer::Transducer;
        crate::homcheck::Homeomorphism::new(
            Transducer::parse(text, e, f).unwrap(),
            Transducer::parse(inv, f, e).unwrap(),
        )
        .unwrap()
    }

    const SWAP: &str = "state q initial\nmap q a b q\nmap q b a q\n";
    const FIRST_SWAP: &str =
        "state s initial\nstate t\nmap s a b t\nmap s b a t\nmap t a a t\nmap t b b t\n";

    #[test]
    fn pullback_examples() {
        let g = o2();
        let id = homeo("state q initial\nmap q a a q\nmap q b b q\n", "state q initial\nmap q a a q\nmap q b b q\n", &g, &g);
        assert_eq!(id.push(&ind(&g, "a")).unwrap(), ind(&g, "a"));
        let swap = homeo(SWAP, SWAP, &g, &g);
        assert_eq!(swap.push(&ind(&g, "a")).unwrap(), ind(&g, "b"));
        let fs = homeo(FIRST_SWAP, FIRST_SWAP, &g, &g);
        assert_eq!(fs.push(&ind(&g, "a.a")).unwrap(), ind(&g, "b.a"));
    }

    #[test]
    fn prop_sigma_examples() {
        let g = o2();
        let r = check_prop_sigma(&homeo(SWAP, SWAP, &g, &g), 2).unwrap();
        assert!(r.cond_upper && r.cond_lower);
        let r = check_prop_sigma(&homeo(FIRST_SWAP, FIRST_SWAP, &g, &g), 2).unwrap();
        assert!(!r.cond_upper && !r.cond_lower);
        assert!(r.witness_upper.is_some() && r.witness_lower.is_some());
        let pt = parse_graph("vertex v\n").unwrap();
        let lp = parse_graph("vertex v\nedge e v v\n").unwrap();
        let h = homeo("state q initial\nsinkmap q v (e)^w\n", "state q initial\nhalt q e @v\n", &pt, &lp);
        let r = check_prop_sigma(&h, 1).unwrap();
        assert!(!r.cond_upper && !r.cond_lower);
        assert_eq!(r.witness_lower.unwrap().f, "1_dom");
    }

    #[test]
    fn weights_files() {
        let g = o2();
        let ws = parse_weights(&g, "weight one\ncyl @v 1\nweight\ncyl a 1\n").unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[0].0, "one");
        assert_eq!(ws[1].1, ind(&g, "a"));
        assert!(parse_weights(&g, "weight\ncyl a 1/2\n").is_err());
    }
}
