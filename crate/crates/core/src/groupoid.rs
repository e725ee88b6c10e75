//! The Deaconu-Renault groupoid: elements `(x, m - n, y)` with
//! `sigma^m(x) = sigma^n(y)`, integer cocycles `c_f`, and the isomorphism
//! induced by a (degree preserving) homeomorphism.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::LocallyConstantFn;
use crate::graph::{DirectedGraph, Path};
use crate::homcheck::{check_conjugacy, uniform_eventual_bound, Homeomorphism};
use crate::point::{enumerate_points, BoundaryPoint};
use crate::system::DRSystem;

/// Integer-valued weight functions; cocycles take values in the integers.
pub type IntegerWeight = LocallyConstantFn<i64>;

/// `(x, m - n, y)` stored with its least witness `(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupoidElement {
    x: BoundaryPoint,
    y: BoundaryPoint,
    m: usize,
    n: usize,
}

impl GroupoidElement {
    /// Checks `sigma^m(x) = sigma^n(y)` and normalizes the witness.
    pub fn new(
        sys: &DRSystem,
        x: BoundaryPoint,
        m: usize,
        n: usize,
        y: BoundaryPoint,
    ) -> Result<Self> {
        let g = sys.graph();
        let (sx, sy) = (x.shift(g, m)?, y.shift(g, n)?);
        if sx != sy {
            return Err(Error::Witness { m, n });
        }
        let (mut m, mut n) = (m, n);
        while m > 0 && n > 0 && x.shift(g, m - 1)? == y.shift(g, n - 1)? {
            m -= 1;
            n -= 1;
        }
        Ok(GroupoidElement { x, y, m, n })
    }

    pub fn unit(x: BoundaryPoint) -> Self {
        GroupoidElement {
            y: x.clone(),
            x,
            m: 0,
            n: 0,
        }
    }

    /// The range `r(g) = x`.
    pub fn range(&self) -> &BoundaryPoint {
        &self.x
    }

    /// The source `s(g) = y`.
    pub fn source(&self) -> &BoundaryPoint {
        &self.y
    }

    pub fn degree(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    pub fn witness(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn is_unit(&self) -> bool {
        self.m == self.n && self.x == self.y
    }

    pub fn inverse(&self) -> Self {
        GroupoidElement {
            x: self.y.clone(),
            y: self.x.clone(),
            m: self.n,
            n: self.m,
        }
    }

    /// `(x, p, y)(y, q, z) = (x, p + q, z)`.
    pub fn compose(&self, sys: &DRSystem, other: &Self) -> Result<Self> {
        if self.y != other.x {
            return Err(Error::NotComposableElements);
        }
        let t = self.n.max(other.m);
        Self::new(
            sys,
            self.x.clone(),
            self.m + t - self.n,
            other.n + t - other.m,
            other.y.clone(),
        )
    }

    /// `(x-literal, p, y-literal; m, n)`.
    pub fn literal(&self, g: &DirectedGraph) -> String {
        format!(
            "({}, {}, {}; {}, {})",
            g.point_literal(&self.x),
            self.degree(),
            g.point_literal(&self.y),
            self.m,
            self.n
        )
    }
}

/// `c_f(x, m - n, y) = f^(m)(x) - f^(n)(y)` using the stored witness.
pub fn cocycle_eval(sys: &DRSystem, f: &IntegerWeight, g: &GroupoidElement) -> Result<i64> {
    let v = cocycle_eval_with(sys, f, g, g.m, g.n)?;
    if cfg!(debug_assertions) && g.x.in_dom(g.m + 1) && g.y.in_dom(g.n + 1) {
        debug_assert_eq!(cocycle_eval_with(sys, f, g, g.m + 1, g.n + 1)?, v);
    }
    Ok(v)
}

/// The cocycle evaluated through an explicit witness, which must be valid.
pub fn cocycle_eval_with(
    sys: &DRSystem,
    f: &IntegerWeight,
    g: &GroupoidElement,
    m: usize,
    n: usize,
) -> Result<i64> {
    let gr = sys.graph();
    if m as i64 - n as i64 != g.degree() || g.x.shift(gr, m)? != g.y.shift(gr, n)? {
        return Err(Error::Witness { m, n });
    }
    let a = f.iterated(gr, m, &g.x)?;
    let b = f.iterated(gr, n, &g.y)?;
    a.checked_sub(b).ok_or(Error::Overflow("cocycle"))
}

/// `psi(x, p, y) = (h(x), p, h(y))` for a verified conjugacy `h`.
#[derive(Debug, Clone)]
pub struct InducedIso {
    h: Homeomorphism,
    source: DRSystem,
    target: DRSystem,
}

impl InducedIso {
    /// Fails with `NotConjugacy` unless `h` passes the conjugacy check at `depth`.
    pub fn new(h: Homeomorphism, depth: usize, seed: u64) -> Result<Self> {
        let verdict = check_conjugacy(h.forward(), h.backward(), depth, seed)?;
        if !verdict.is_conjugacy {
            let condition = verdict
                .failing_condition
                .map_or_else(|| "check".to_string(), |c| format!("{c:?}"));
            return Err(Error::NotConjugacy(format!(
                "{condition} fails at {}",
                verdict.witness.unwrap_or_default()
            )));
        }
        Ok(InducedIso {
            source: DRSystem::new(h.source().clone()),
            target: DRSystem::new(h.target().clone()),
            h,
        })
    }

    pub fn homeomorphism(&self) -> &Homeomorphism {
        &self.h
    }

    pub fn apply(&self, g: &GroupoidElement) -> Result<GroupoidElement> {
        let _ = &self.source;
        GroupoidElement::new(
            &self.target,
            self.h.apply(&g.x)?,
            g.m,
            g.n,
            self.h.apply(&g.y)?,
        )
    }
}

/// `psi(x, p, y) = (h(x), p, h(y))` for a homeomorphism that is an eventual
/// conjugacy in both directions with uniform lags.
#[derive(Debug, Clone)]
pub struct DegreePreservingIso {
    h: Homeomorphism,
    source: DRSystem,
    target: DRSystem,
    lag: usize,
    inverse_lag: usize,
}

impl DegreePreservingIso {
    pub fn new(h: Homeomorphism) -> Result<Self> {
        let lag = uniform_eventual_bound(h.forward())?.ok_or(Error::NotDegreePreserving)?;
        let inverse_lag = uniform_eventual_bound(h.backward())?.ok_or(Error::NotDegreePreserving)?;
        Ok(DegreePreservingIso {
            source: DRSystem::new(h.source().clone()),
            target: DRSystem::new(h.target().clone()),
            h,
            lag,
            inverse_lag,
        })
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn inverse_lag(&self) -> usize {
        self.inverse_lag
    }

    pub fn homeomorphism(&self) -> &Homeomorphism {
        &self.h
    }

    pub fn source(&self) -> &DRSystem {
        &self.source
    }

    pub fn target(&self) -> &DRSystem {
        &self.target
    }

    /// `sigma^{m+K}(h x) = sigma^K(h sigma^m x) = sigma^{n+K}(h y)`.
    pub fn apply(&self, g: &GroupoidElement) -> Result<GroupoidElement> {
        GroupoidElement::new(
            &self.target,
            self.h.apply(&g.x)?,
            g.m + self.lag,
            g.n + self.lag,
            self.h.apply(&g.y)?,
        )
    }

    /// Both sides of the intertwining relation at the generator `(x, 1, sigma x)`.
    pub fn generator_sides(&self, g: &IntegerWeight, x: &BoundaryPoint) -> Result<(i64, i64)> {
        let gr = self.source.graph();
        let gen = GroupoidElement::new(&self.source, x.clone(), 1, 0, x.shift(gr, 1)?)?;
        let pulled = self.h.pull(g)?;
        let lhs = cocycle_eval(&self.source, &pulled, &gen)?;
        let rhs = cocycle_eval(&self.target, g, &self.apply(&gen)?)?;
        Ok((lhs, rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntertwineReport {
    pub ok: bool,
    /// First weight `g` (a target cylinder indicator) violating the relation.
    pub witness_g: Option<String>,
    /// A source cylinder on which the two sides differ.
    pub witness_cylinder: Option<String>,
    pub depth: usize,
    pub lag: usize,
    pub weights_checked: usize,
    /// Only generators `(x, 1, sigma x)` and units are checked; they generate the groupoid.
    pub generators: &'static str,
}

fn dom_indicator(g: &DirectedGraph) -> IntegerWeight {
    LocallyConstantFn::sum_of_terms(
        g,
        g.edges()
            .map(|e| (Path::from_parts(g.src(e), vec![e]), 1))
            .collect(),
    )
}

/// `c_{g o h}(x, 1, sigma x) = c_g(psi(x, 1, sigma x))` for every `x` in
/// `dom(sigma)` and every target cylinder indicator `g` of depth `<= depth`.
///
/// With `K` the lag, the right side is computed through the witness
/// `(K + 1, K)` as a function of `x`:
/// `sum_{i<=K} (sigma^*)^i g o h - sum_{j<K} sigma^*((sigma^*)^j g o h)`.
pub fn intertwine_check(iso: &DegreePreservingIso, depth: usize) -> Result<IntertwineReport> {
    let (e, f) = (iso.source.graph(), iso.target.graph());
    let h = &iso.h;
    let k = iso.lag;
    let dom = dom_indicator(e);
    let family = f.paths_up_to(depth);
    let mut report = IntertwineReport {
        ok: true,
        witness_g: None,
        witness_cylinder: None,
        depth,
        lag: k,
        weights_checked: 0,
        generators: "(x, 1, sigma x) and units",
    };
    for base in &family {
        report.weights_checked += 1;
        let g = LocallyConstantFn::indicator(f, base);
        let lhs = h.pull(&g)?.mul(e, &dom);
        let mut powers = vec![g.clone()];
        for _ in 0..k {
            let next = powers.last().expect("nonempty").sigma_upper_star(f);
            powers.push(next);
        }
        let mut rhs = IntegerWeight::zero();
        for (i, gi) in powers.iter().enumerate() {
            let pulled = h.pull(gi)?;
            rhs = rhs.add(e, &pulled);
            if i < k {
                rhs = rhs.sub(e, &pulled.sigma_upper_star(e));
            }
        }
        let rhs = rhs.mul(e, &dom);
        if lhs != rhs {
            let cell = lhs.first_difference(e, &rhs).expect("differ");
            report.ok = false;
            report.witness_g = Some(format!("cyl {}", f.path_literal(base)));
            report.witness_cylinder = Some(e.path_literal(cell.base()));
            break;
        }
    }
    Ok(report)
}

/// Counts of points per cylinder agree for every cylinder of depth `<= depth`.
pub fn separating_check(
    a: &[BoundaryPoint],
    b: &[BoundaryPoint],
    depth: usize,
) -> bool {
    separating_witness(a, b, depth).is_none()
}

/// A cylinder whose indicator has different sums over `a` and `b`, shortest first.
///
/// `1_{Z(mu)}(x) = 1` iff `mu` is a prefix of `x`, so the sums are prefix counts.
pub fn separating_witness(
    a: &[BoundaryPoint],
    b: &[BoundaryPoint],
    depth: usize,
) -> Option<Path> {
    let counts = |pts: &[BoundaryPoint], sign: i64, acc: &mut BTreeMap<(usize, Path), i64>| {
        for x in pts {
            let len = x.finite_len().map_or(depth, |n| n.min(depth));
            for k in 0..=len {
                let p = x.prefix_path(k).expect("k is within the point");
                *acc.entry((k, p)).or_insert(0) += sign;
            }
        }
    };
    let mut acc = BTreeMap::new();
    counts(a, 1, &mut acc);
    counts(b, -1, &mut acc);
    acc.into_iter().find(|(_, c)| *c != 0).map(|((_, p), _)| p)
}

/// A depth at which indicator sums decide multiset equality. Two distinct
/// lassos agree on fewer than `max(|p1|, |p2|) + |c1| + |c2|` symbols, and a
/// finite point is the only point in the cylinder of its own path.
pub fn separating_depth(points: &[BoundaryPoint]) -> usize {
    let (mut prefix, mut cycle, mut finite) = (0, 0, 0);
    for x in points {
        match x {
            BoundaryPoint::Finite(p) => finite = finite.max(p.len()),
            BoundaryPoint::Lasso { prefix: p, cycle: c } => {
                prefix = prefix.max(p.len());
                cycle = cycle.max(c.len());
            }
        }
    }
    finite.max(prefix + 2 * cycle)
}

/// An indicator `f` of depth `<= depth` with `f^(k)(x) != f^(l)(y)`.
pub fn orbit_separating_indicator(
    sys: &DRSystem,
    x: &BoundaryPoint,
    k: usize,
    y: &BoundaryPoint,
    l: usize,
    depth: usize,
) -> Result<Option<Path>> {
    let g = sys.graph();
    for p in g.paths_up_to(depth) {
        let f = IntegerWeight::indicator(g, &p);
        if f.iterated(g, k, x)? != f.iterated(g, l, y)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotropyReport {
    pub trivial_interior: bool,
    pub condition_l: bool,
    /// Independent answer from enumerating a finite boundary space.
    pub enumerated: Option<bool>,
    pub witness: Option<String>,
}

/// Whether the interior of the isotropy is just the unit space.
///
/// Decided by Condition L. An exitless cycle `c` makes `c^w` an isolated
/// point, so `(c^w, |c|, c^w)` has the open neighbourhood
/// `Z({c^w}, |c|, 0, {c^w})` inside the isotropy. When the boundary space is
/// finite every point is isolated and the answer is recomputed by listing the
/// points: interior isotropy is trivial iff no point is eventually periodic.
pub fn isotropy_interior_trivial(sys: &DRSystem) -> Result<IsotropyReport> {
    let g = sys.graph();
    let condition_l = sys.is_topologically_free();
    let witness = match sys.exitless_cycle() {
        Some(c) => {
            let x = BoundaryPoint::lasso_unchecked(Path::vertex(c.start()), c.edges().to_vec());
            let el = GroupoidElement::new(sys, x.clone(), c.len(), 0, x)?;
            Some(el.literal(g))
        }
        None => None,
    };
    let enumerated = if g.longest_path().is_some() {
        Some(crate::cstar::FiniteGroupoid::build(sys)?.is_principal())
    } else if boundary_is_finite(g) {
        let pts = enumerate_points(g, 2 * g.vertex_count() + 1);
        Some(pts.iter().all(BoundaryPoint::is_finite))
    } else {
        None
    };
    Ok(IsotropyReport {
        trivial_interior: condition_l,
        condition_l,
        enumerated,
        witness,
    })
}

/// The boundary space is finite iff no cycle has an exit.
fn boundary_is_finite(g: &DirectedGraph) -> bool {
    g.vertices()
        .filter(|&v| on_cycle(g, v))
        .all(|v| g.out_edges(v).len() == 1)
}

fn on_cycle(g: &DirectedGraph, v: crate::graph::VertexId) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack: Vec<_> = g.out_edges(v).iter().map(|&e| g.dst(e)).collect();
    while let Some(w) = stack.pop() {
        if w == v {
            return true;
        }
        if !std::mem::replace(&mut seen[w.0], true) {
            stack.extend(g.out_edges(w).iter().map(|&e| g.dst(e)));
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::point::random_point;
    use crate::transducer::Transducer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const O2: &str = "vertex v\nedge a v v\nedge b v v\n";
    const LOOP: &str = "vertex v\nedge e v v\n";
    const P2: &str = "vertex u\nvertex w\nedge f u w\n";
    const SWAP: &str = "state q initial\nmap q a b q\nmap q b a q\n";
    const FIRST_SWAP: &str =
        "state s initial\nstate t\nmap s a b t\nmap s b a t\nmap t a a t\nmap t b b t\n";

    fn sys(text: &str) -> DRSystem {
        DRSystem::new(parse_graph(text).unwrap())
    }

    fn pt(s: &DRSystem, lit: &str) -> BoundaryPoint {
        s.graph().parse_point(lit).unwrap()
    }

    fn homeo(fwd: &str, bwd: &str) -> Homeomorphism {
        let g = parse_graph(O2).unwrap();
        Homeomorphism::new(
            Transducer::parse(fwd, &g, &g).unwrap(),
            Transducer::parse(bwd, &g, &g).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn element_examples() {
        let s = sys(O2);
        let x = pt(&s, "(a.b)^w");
        let u = GroupoidElement::new(&s, x.clone(), 1, 1, x.clone()).unwrap();
        assert_eq!(u, GroupoidElement::unit(x));
        let g = GroupoidElement::new(&s, pt(&s, "a.(b)^w"), 1, 0, pt(&s, "(b)^w")).unwrap();
        assert_eq!(g.degree(), 1);
        assert_eq!(g.literal(s.graph()), "(a.(b)^w, 1, (b)^w; 1, 0)");
        assert_eq!(
            GroupoidElement::new(&s, pt(&s, "(a)^w"), 1, 1, pt(&s, "(b)^w")),
            Err(Error::Witness { m: 1, n: 1 })
        );
        // a non-minimal witness is normalized away
        let h = GroupoidElement::new(&s, pt(&s, "a.(b)^w"), 4, 3, pt(&s, "(b)^w")).unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn composition_examples() {
        let s = sys(O2);
        let g = GroupoidElement::new(&s, pt(&s, "a.(b)^w"), 1, 0, pt(&s, "(b)^w")).unwrap();
        let r = GroupoidElement::unit(pt(&s, "a.(b)^w"));
        assert_eq!(g.compose(&s, &g.inverse()).unwrap(), r);
        let unit_b = GroupoidElement::unit(pt(&s, "(b)^w"));
        assert_eq!(g.compose(&s, &unit_b).unwrap(), g);
        let first = GroupoidElement::new(&s, pt(&s, "a.a.(b)^w"), 1, 0, pt(&s, "a.(b)^w")).unwrap();
        let both = first.compose(&s, &g).unwrap();
        assert_eq!(both.degree(), 2);
        assert_eq!(both.source(), &pt(&s, "(b)^w"));
        assert_eq!(g.compose(&s, &first), Err(Error::NotComposableElements));
    }

    #[test]
    fn cocycle_examples() {
        let s = sys(O2);
        let gr = s.graph();
        let za = IntegerWeight::indicator(gr, &gr.parse_path("a").unwrap());
        assert_eq!(za.iterated(gr, 3, &pt(&s, "(a.b)^w")).unwrap(), 2);
        let g = GroupoidElement::new(&s, pt(&s, "a.(b)^w"), 1, 0, pt(&s, "(b)^w")).unwrap();
        assert_eq!(cocycle_eval(&s, &IntegerWeight::constant(gr, 1), &g).unwrap(), 1);
        assert_eq!(cocycle_eval(&s, &za, &g).unwrap(), 1);
        assert_eq!(cocycle_eval(&s, &za, &GroupoidElement::unit(pt(&s, "(a)^w"))).unwrap(), 0);
        assert_eq!(
            cocycle_eval_with(&s, &za, &g, 2, 1),
            cocycle_eval(&s, &za, &g)
        );
    }

    #[test]
    fn induced_iso_examples() {
        let s = sys(O2);
        let psi = InducedIso::new(homeo(SWAP, SWAP), 3, 0).unwrap();
        let g = GroupoidElement::new(&s, pt(&s, "a.(b)^w"), 1, 0, pt(&s, "(b)^w")).unwrap();
        let img = psi.apply(&g).unwrap();
        assert_eq!(img.range(), &pt(&s, "b.(a)^w"));
        assert_eq!(img.source(), &pt(&s, "(a)^w"));
        assert_eq!(img.degree(), 1);
        let inv = "state s initial\nstate t\nmap s a b t\nmap s b a t\nmap t a a t\nmap t b b t\n";
        assert!(matches!(
            InducedIso::new(homeo(FIRST_SWAP, inv), 3, 0),
            Err(Error::NotConjugacy(_))
        ));
    }

    #[test]
    fn intertwining_positive_and_negative() {
        let swap = DegreePreservingIso::new(homeo(SWAP, SWAP)).unwrap();
        assert_eq!(swap.lag(), 0);
        let rep = intertwine_check(&swap, 3).unwrap();
        assert!(rep.ok, "{rep:?}");

        let first = DegreePreservingIso::new(homeo(FIRST_SWAP, FIRST_SWAP)).unwrap();
        assert_eq!(first.lag(), 1);
        let rep = intertwine_check(&first, 1).unwrap();
        assert!(!rep.ok);
        assert_eq!(rep.witness_g.as_deref(), Some("cyl a"));

        let id = homeo("state q\nmap q a a q\nmap q b b q\n", "state q\nmap q a a q\nmap q b b q\n");
        assert!(intertwine_check(&DegreePreservingIso::new(id).unwrap(), 3).unwrap().ok);
    }

    #[test]
    fn function_level_check_matches_pointwise_cocycles() {
        let g = parse_graph(O2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (fwd, ok) in [(SWAP, true), (FIRST_SWAP, false)] {
            let iso = DegreePreservingIso::new(homeo(fwd, fwd)).unwrap();
            let mut violated = false;
            for base in g.paths_up_to(2) {
                let w = IntegerWeight::indicator(&g, &base);
                for _ in 0..20 {
                    let x = random_point(&g, &mut rng, 6).unwrap();
                    let (l, r) = iso.generator_sides(&w, &x).unwrap();
                    violated |= l != r;
                }
            }
            assert_eq!(violated, !ok);
            assert_eq!(intertwine_check(&iso, 2).unwrap().ok, ok);
        }
    }

    #[test]
    fn separating_examples() {
        let s = sys(O2);
        let g = s.graph();
        let (a, b) = (pt(&s, "(a)^w"), pt(&s, "(b)^w"));
        assert!(separating_check(&[a.clone(), b.clone()], &[b, a.clone()], 3));
        assert!(!separating_check(&[a.clone(), a.clone()], &[a], 1));
        let (ab, ba) = (pt(&s, "(a.b)^w"), pt(&s, "(b.a)^w"));
        assert!(!separating_check(&[ab.clone()], &[ba.clone()], 2));
        assert_eq!(
            separating_witness(&[ab], &[ba], 2).map(|p| g.path_literal(&p)),
            Some("a".to_string())
        );
    }

    /// Distinct lassos can agree past their description length:
    /// `(a.b)^w` and `(a.b.a)^w` share their first three symbols.
    #[test]
    fn description_length_does_not_always_separate() {
        let s = sys(O2);
        let (x, y) = (pt(&s, "(a.b)^w"), pt(&s, "(a.b.a)^w"));
        let depth = x.description_length().max(y.description_length());
        assert_eq!(depth, 3);
        assert!(separating_check(&[x.clone()], &[y.clone()], depth));
        let pts = [x.clone(), y.clone()];
        assert!(!separating_check(&[x], &[y], separating_depth(&pts)));
    }

    #[test]
    fn orbit_indicators_separate_shift_coincidences() {
        let s = sys(O2);
        let g = s.graph();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let z = random_point(g, &mut rng, 4).unwrap();
            let (k, l) = (rng.gen_range(0..4), rng.gen_range(0..4));
            let word = |rng: &mut ChaCha8Rng, n| -> Vec<_> {
                (0..n).map(|_| g.edge_by_name(["a", "b"][rng.gen_range(0..2)]).unwrap()).collect()
            };
            let x = z.prepend_path(g, &word(&mut rng, k));
            let y = z.prepend_path(g, &word(&mut rng, l));
            if x == y && k == l {
                continue;
            }
            let depth = x.description_length().max(y.description_length());
            let found = orbit_separating_indicator(&s, &x, k, &y, l, depth).unwrap();
            assert!(found.is_some(), "{x:?} {k} {y:?} {l}");
        }
    }

    #[test]
    fn isotropy_examples() {
        let r = isotropy_interior_trivial(&sys(O2)).unwrap();
        assert!(r.trivial_interior && r.enumerated.is_none());
        let r = isotropy_interior_trivial(&sys(LOOP)).unwrap();
        assert!(!r.trivial_interior);
        assert_eq!(r.enumerated, Some(false));
        assert_eq!(r.witness.as_deref(), Some("((e)^w, 1, (e)^w; 1, 0)"));
        let r = isotropy_interior_trivial(&sys(P2)).unwrap();
        assert!(r.trivial_interior);
        assert_eq!(r.enumerated, Some(true));
    }
}
