//! The convolution algebra of a finite (acyclic) groupoid, weighted gauge
//! actions, and the isomorphism induced by a conjugacy.
//!
//! Coefficients are complex floats compared at [`TOLERANCE`]; cocycle values
//! stay exact integers.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::groupoid::{cocycle_eval, GroupoidElement, InducedIso, IntegerWeight};
use crate::homcheck::Homeomorphism;
use crate::point::BoundaryPoint;
use crate::system::DRSystem;

pub const TOLERANCE: f64 = 1e-9;
const UNIMODULAR_TOLERANCE: f64 = 1e-12;

/// Every element of the groupoid of an acyclic graph, with its tables.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    sys: DRSystem,
    elements: Vec<GroupoidElement>,
    index: HashMap<GroupoidElement, usize>,
    units: Vec<usize>,
    inverse: Vec<usize>,
    /// `left[i]` lists `(j, k)` with `elements[i] * elements[j] = elements[k]`.
    left: Vec<Vec<(usize, usize)>>,
    orbits: Vec<(VertexId, Vec<BoundaryPoint>)>,
}

fn terminal_sink(g: &DirectedGraph, x: &BoundaryPoint) -> VertexId {
    let len = x.finite_len().expect("finite point");
    x.shift(g, len).expect("in domain").start()
}

impl FiniteGroupoid {
    /// Enumerates `(x, |x| - |y|, y)` for finite points ending at the same sink.
    pub fn build(sys: &DRSystem) -> Result<Self> {
        let g = sys.graph();
        let points = sys.finite_points().ok_or_else(|| Error::NotAcyclic {
            vertex: g
                .vertex_on_cycle()
                .map(|v| g.vertex_name(v).to_string())
                .unwrap_or_default(),
        })?;
        let mut by_sink: BTreeMap<VertexId, Vec<BoundaryPoint>> = BTreeMap::new();
        for x in points {
            by_sink.entry(terminal_sink(g, &x)).or_default().push(x);
        }
        let orbits: Vec<_> = by_sink.into_iter().collect();

        let mut elements = Vec::new();
        let mut offsets = Vec::new();
        for (_, orbit) in &orbits {
            offsets.push(elements.len());
            for x in orbit {
                for y in orbit {
                    let (m, n) = (x.finite_len().unwrap_or(0), y.finite_len().unwrap_or(0));
                    elements.push(GroupoidElement::new(sys, x.clone(), m, n, y.clone())?);
                }
            }
        }
        let index: HashMap<_, _> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let lookup = |e: &GroupoidElement| {
            index
                .get(e)
                .copied()
                .ok_or_else(|| Error::Validity("groupoid is not closed".into()))
        };

        let mut units = Vec::new();
        let mut inverse = vec![0; elements.len()];
        let mut left = vec![Vec::new(); elements.len()];
        for ((_, orbit), &off) in orbits.iter().zip(&offsets) {
            let s = orbit.len();
            let at = |a: usize, b: usize| off + a * s + b;
            for a in 0..s {
                units.push(at(a, a));
                for b in 0..s {
                    let el = &elements[at(a, b)];
                    inverse[at(a, b)] = lookup(&el.inverse())?;
                    for c in 0..s {
                        let prod = el.compose(sys, &elements[at(b, c)])?;
                        left[at(a, b)].push((at(b, c), lookup(&prod)?));
                    }
                }
            }
        }
        let gr = FiniteGroupoid {
            sys: sys.clone(),
            elements,
            index,
            units,
            inverse,
            left,
            orbits,
        };
        gr.check_associative()?;
        Ok(gr)
    }

    fn product(&self, i: usize, j: usize) -> Option<usize> {
        self.left[i].iter().find(|&&(b, _)| b == j).map(|&(_, k)| k)
    }

    fn check_associative(&self) -> Result<()> {
        for i in 0..self.len() {
            for &(j, ij) in &self.left[i] {
                for &(k, ij_k) in &self.left[ij] {
                    let jk = self.product(j, k);
                    if jk.and_then(|jk| self.product(i, jk)) != Some(ij_k) {
                        return Err(Error::Validity("composition is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn system(&self) -> &DRSystem {
        &self.sys
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupoidElement] {
        &self.elements
    }

    pub fn index_of(&self, e: &GroupoidElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// All `(i, j, k)` with `elements[i] * elements[j] = elements[k]`.
    pub fn products(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.left
            .iter()
            .enumerate()
            .flat_map(|(i, v)| v.iter().map(move |&(j, k)| (i, j, k)))
    }

    pub fn point_count(&self) -> usize {
        self.units.len()
    }

    pub fn is_principal(&self) -> bool {
        self.elements
            .iter()
            .all(|e| e.range() != e.source() || e.is_unit())
    }

    pub fn literal(&self, i: usize) -> String {
        self.elements[i].literal(self.sys.graph())
    }

    /// `c_f` on every element, in element order.
    pub fn cocycle_values(&self, f: &IntegerWeight) -> Result<Vec<i64>> {
        self.elements
            .iter()
            .map(|e| cocycle_eval(&self.sys, f, e))
            .collect()
    }
}

/// A complex function on a finite groupoid, one coefficient per element.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvElement {
    coeffs: Vec<Complex64>,
}

impl ConvElement {
    pub fn zero(gr: &FiniteGroupoid) -> Self {
        ConvElement {
            coeffs: vec![Complex64::new(0.0, 0.0); gr.len()],
        }
    }

    pub fn delta(gr: &FiniteGroupoid, i: usize) -> Self {
        let mut z = Self::zero(gr);
        z.coeffs[i] = Complex64::new(1.0, 0.0);
        z
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        ConvElement { coeffs }
    }

    pub fn random(gr: &FiniteGroupoid, rng: &mut impl Rng) -> Self {
        ConvElement {
            coeffs: (0..gr.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.coeffs.len(), other)?;
        Ok(ConvElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ConvElement {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_dim(self.coeffs.len(), other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.distance(other).is_ok_and(|d| d < TOLERANCE)
    }
}

fn check_dim(expected: usize, x: &ConvElement) -> Result<()> {
    if x.coeffs.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: x.coeffs.len(),
        });
    }
    Ok(())
}

/// `(xi * eta)(g) = sum_{g1 g2 = g} xi(g1) eta(g2)`.
pub fn convolve(gr: &FiniteGroupoid, xi: &ConvElement, eta: &ConvElement) -> Result<ConvElement> {
    check_dim(gr.len(), xi)?;
    check_dim(gr.len(), eta)?;
    let mut out = ConvElement::zero(gr);
    for (i, a) in xi.coeffs.iter().enumerate() {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for &(j, k) in &gr.left[i] {
            out.coeffs[k] += a * eta.coeffs[j];
        }
    }
    Ok(out)
}

/// `xi^*(g) = conj(xi(g^-1))`.
pub fn star(gr: &FiniteGroupoid, xi: &ConvElement) -> Result<ConvElement> {
    check_dim(gr.len(), xi)?;
    Ok(ConvElement {
        coeffs: (0..gr.len()).map(|i| xi.coeffs[gr.inverse[i]].conj()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub sink: String,
    /// The orbit, as point literals.
    pub points: Vec<String>,
    pub size: usize,
    /// `matrix_units[a][b]` is the element index of `e_{x_a x_b}`.
    pub matrix_units: Vec<Vec<usize>>,
}

/// One block of matrix units per orbit, with `e_xy e_zw = [y = z] e_xw`
/// checked by convolution.
pub fn block_decomposition(gr: &FiniteGroupoid) -> Result<Vec<Block>> {
    if !gr.is_principal() {
        return Err(Error::NonPrincipal);
    }
    let g = gr.sys.graph();
    let mut blocks = Vec::new();
    for (sink, orbit) in &gr.orbits {
        let units: Vec<Vec<usize>> = orbit
            .iter()
            .map(|x| {
                orbit
                    .iter()
                    .map(|y| {
                        let m = x.finite_len().unwrap_or(0);
                        let n = y.finite_len().unwrap_or(0);
                        let e = GroupoidElement::new(&gr.sys, x.clone(), m, n, y.clone())?;
                        gr.index_of(&e)
                            .ok_or_else(|| Error::Validity("missing matrix unit".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let s = orbit.len();
        let deltas: Vec<Vec<ConvElement>> = units
            .iter()
            .map(|row| row.iter().map(|&i| ConvElement::delta(gr, i)).collect())
            .collect();
        for (a, b, c, d) in (0..s).flat_map(|a| {
            (0..s).flat_map(move |b| (0..s).flat_map(move |c| (0..s).map(move |d| (a, b, c, d))))
        }) {
            let prod = convolve(gr, &deltas[a][b], &deltas[c][d])?;
            let expected = if b == c {
                deltas[a][d].clone()
            } else {
                ConvElement::zero(gr)
            };
            if !prod.approx_eq(&expected) {
                return Err(Error::Validity("matrix unit relation fails".into()));
            }
        }
        blocks.push(Block {
            sink: g.vertex_name(*sink).to_string(),
            points: orbit.iter().map(|x| g.point_literal(x)).collect(),
            size: s,
            matrix_units: units,
        });
    }
    let dim: usize = blocks.iter().map(|b| b.size * b.size).sum();
    if dim != gr.len() {
        return Err(Error::Validity("blocks do not span the algebra".into()));
    }
    Ok(blocks)
}

fn check_unimodular(z: Complex64) -> Result<()> {
    let modulus = z.norm();
    if (modulus - 1.0).abs() > UNIMODULAR_TOLERANCE {
        return Err(Error::NotUnimodular { modulus });
    }
    Ok(())
}

/// Scales coefficient `i` by `z^{values[i]}`.
pub fn gauge(values: &[i64], z: Complex64, xi: &ConvElement) -> Result<ConvElement> {
    check_unimodular(z)?;
    check_dim(values.len(), xi)?;
    Ok(ConvElement {
        coeffs: xi
            .coeffs
            .iter()
            .zip(values)
            .map(|(a, &c)| a * z.powi(c as i32))
            .collect(),
    })
}

/// The weighted action `gamma^{f}_z`.
pub fn weighted_action(
    gr: &FiniteGroupoid,
    f: &IntegerWeight,
    z: Complex64,
    xi: &ConvElement,
) -> Result<ConvElement> {
    check_unimodular(z)?;
    gauge(&gr.cocycle_values(f)?, z, xi)
}

/// The eight 8th roots of unity followed by `extra` seeded random points of the circle.
pub fn circle_samples(extra: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..8)
        .map(|k| Complex64::from_polar(1.0, PI * k as f64 / 4.0))
        .chain((0..extra).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))))
        .collect()
}

/// The indicators of all paths of length `<= depth`.
pub fn indicator_family(g: &DirectedGraph, depth: usize) -> Vec<IntegerWeight> {
    g.paths_up_to(depth)
        .iter()
        .map(|p| IntegerWeight::indicator(g, p))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    /// Literals of the elements spanning the fixed-point subspace.
    pub basis: Vec<String>,
    pub dimension: usize,
    pub algebra_dimension: usize,
    pub unit_count: usize,
    pub is_diagonal: bool,
    pub weights: usize,
    /// Largest `|c_f(g)|`; samples number at least `2 * max_degree + 1`.
    pub max_degree: u64,
    pub samples: usize,
    pub max_residual: f64,
    /// The numerically fixed coordinates coincide with the exact ones.
    pub numeric_agrees: bool,
}

/// `{xi : gamma^f_z(xi) = xi for all f and sampled z}`, exactly as the span of
/// `delta_g` with `c_f(g) = 0` for all `f`, and numerically through the action.
pub fn fixed_point_intersection(
    gr: &FiniteGroupoid,
    weights: &[IntegerWeight],
    seed: u64,
) -> Result<FixedPointReport> {
    let values: Vec<Vec<i64>> = weights
        .iter()
        .map(|f| gr.cocycle_values(f))
        .collect::<Result<_>>()?;
    let exact: Vec<usize> = (0..gr.len())
        .filter(|&i| values.iter().all(|v| v[i] == 0))
        .collect();
    let max_degree = values
        .iter()
        .flatten()
        .map(|c| c.unsigned_abs())
        .max()
        .unwrap_or(0);
    let extra = 2usize.max((2 * max_degree as usize + 1).saturating_sub(8));
    let samples = circle_samples(extra, seed);

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let xi = ConvElement::random(gr, &mut rng);
    let mut fixed = vec![true; gr.len()];
    let mut max_residual: f64 = 0.0;
    for v in &values {
        for &z in &samples {
            let moved = gauge(v, z, &xi)?;
            for i in 0..gr.len() {
                let d = (moved.coeffs[i] - xi.coeffs[i]).norm();
                if d > TOLERANCE * xi.coeffs[i].norm().max(1.0) {
                    fixed[i] = false;
                }
            }
            for &i in &exact {
                max_residual = max_residual.max((moved.coeffs[i] - xi.coeffs[i]).norm());
            }
        }
    }
    let numeric: Vec<usize> = (0..gr.len()).filter(|&i| fixed[i]).collect();
    let mut units = gr.units.clone();
    units.sort_unstable();
    Ok(FixedPointReport {
        basis: exact.iter().map(|&i| gr.literal(i)).collect(),
        dimension: exact.len(),
        algebra_dimension: gr.len(),
        unit_count: units.len(),
        is_diagonal: exact == units,
        weights: weights.len(),
        max_degree,
        samples: samples.len(),
        max_residual,
        numeric_agrees: numeric == exact,
    })
}

/// The coefficient permutation `phi(xi) = xi o psi^-1` induced by a point
/// bijection `h` through its legs, `(x, p, y) -> (h x, |h x| - |h y|, h y)`.
#[derive(Debug, Clone)]
pub struct LegMap {
    h: Homeomorphism,
    source: FiniteGroupoid,
    target: FiniteGroupoid,
    /// `None` when `h x` and `h y` lie in different orbits.
    perm: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarIsoCheck {
    pub bijective: bool,
    pub units_to_units: bool,
    pub products_preserved: bool,
    pub involution_preserved: bool,
    /// `phi(f) = f o h^-1` on point indicators of the diagonal.
    pub diagonal_preserved: bool,
    pub numeric_residual: f64,
}

impl StarIsoCheck {
    pub fn ok(&self) -> bool {
        self.bijective
            && self.units_to_units
            && self.products_preserved
            && self.involution_preserved
            && self.diagonal_preserved
            && self.numeric_residual < TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntertwiningReport {
    pub ok: bool,
    pub depth: usize,
    pub weights_checked: usize,
    pub samples: usize,
    pub max_residual: f64,
    pub undefined_legs: usize,
    /// Worst weight `g` (target cylinder) and sample `z` as `[re, im]`.
    pub witness_g: Option<String>,
    pub witness_z: Option<[f64; 2]>,
}

impl LegMap {
    pub fn new(h: Homeomorphism) -> Result<Self> {
        let source = FiniteGroupoid::build(&DRSystem::new(h.source().clone()))?;
        let target = FiniteGroupoid::build(&DRSystem::new(h.target().clone()))?;
        let mut perm = Vec::with_capacity(source.len());
        for e in &source.elements {
            let (x, y) = (h.apply(e.range())?, h.apply(e.source())?);
            let (m, n) = (x.finite_len().unwrap_or(0), y.finite_len().unwrap_or(0));
            perm.push(
                GroupoidElement::new(&target.sys, x, m, n, y)
                    .ok()
                    .and_then(|el| target.index_of(&el)),
            );
        }
        Ok(LegMap {
            h,
            source,
            target,
            perm,
        })
    }

    pub fn source(&self) -> &FiniteGroupoid {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroupoid {
        &self.target
    }

    pub fn apply(&self, xi: &ConvElement) -> Result<ConvElement> {
        check_dim(self.source.len(), xi)?;
        let mut out = ConvElement::zero(&self.target);
        for (i, p) in self.perm.iter().enumerate() {
            if let Some(k) = p {
                out.coeffs[*k] = xi.coeffs[i];
            }
        }
        Ok(out)
    }

    /// Structural and sampled numeric *-isomorphism checks.
    pub fn check_star_iso(&self, seed: u64) -> Result<StarIsoCheck> {
        let (src, tgt) = (&self.source, &self.target);
        let images: HashSet<usize> = self.perm.iter().flatten().copied().collect();
        let bijective = src.len() == tgt.len()
            && self.perm.iter().all(Option::is_some)
            && images.len() == tgt.len();
        if !bijective {
            return Ok(StarIsoCheck {
                bijective,
                units_to_units: false,
                products_preserved: false,
                involution_preserved: false,
                diagonal_preserved: false,
                numeric_residual: f64::INFINITY,
            });
        }
        let p = |i: usize| self.perm[i].expect("bijective");
        let target_units: HashSet<usize> = tgt.units.iter().copied().collect();
        let units_to_units = src.units.iter().all(|&u| target_units.contains(&p(u)));
        let target_products: HashSet<(usize, usize, usize)> = tgt.products().collect();
        let products_preserved = src.products().count() == target_products.len()
            && src
                .products()
                .all(|(i, j, k)| target_products.contains(&(p(i), p(j), p(k))));
        let involution_preserved = (0..src.len()).all(|i| p(src.inverse[i]) == tgt.inverse[p(i)]);

        let (e, f) = (src.sys.graph(), tgt.sys.graph());
        let mut diagonal_preserved = true;
        for &u in &src.units {
            let x = src.elements[u].range();
            let hx = self.h.apply(x)?;
            let pushed = self.h.push(&IntegerWeight::indicator(e, &finite_path(x)))?;
            let expected = IntegerWeight::indicator(f, &finite_path(&hx));
            let image = tgt.elements[p(u)].range();
            diagonal_preserved &= pushed == expected && *image == hx;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut numeric_residual: f64 = 0.0;
        for _ in 0..3 {
            let xi = ConvElement::random(src, &mut rng);
            let eta = ConvElement::random(src, &mut rng);
            let lhs = self.apply(&convolve(src, &xi, &eta)?)?;
            let rhs = convolve(tgt, &self.apply(&xi)?, &self.apply(&eta)?)?;
            numeric_residual = numeric_residual.max(lhs.distance(&rhs)?);
            let lhs = self.apply(&star(src, &xi)?)?;
            let rhs = star(tgt, &self.apply(&xi)?)?;
            numeric_residual = numeric_residual.max(lhs.distance(&rhs)?);
        }
        Ok(StarIsoCheck {
            bijective,
            units_to_units,
            products_preserved,
            involution_preserved,
            diagonal_preserved,
            numeric_residual,
        })
    }

    /// `phi o gamma^{g o h}_z = gamma^{g}_z o phi` for target cylinder
    /// indicators `g` of depth `<= depth`, at the 8th roots of unity and two
    /// random points of the circle.
    pub fn verify_intertwining(&self, depth: usize, seed: u64) -> Result<IntertwiningReport> {
        let (src, tgt) = (&self.source, &self.target);
        let f = tgt.sys.graph();
        let samples = circle_samples(2, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let xi = ConvElement::random(src, &mut rng);
        let undefined_legs = self.perm.iter().filter(|p| p.is_none()).count();
        let mut report = IntertwiningReport {
            ok: true,
            depth,
            weights_checked: 0,
            samples: samples.len(),
            max_residual: 0.0,
            undefined_legs,
            witness_g: None,
            witness_z: None,
        };
        let image = self.apply(&xi)?;
        for base in f.paths_up_to(depth) {
            report.weights_checked += 1;
            let g = IntegerWeight::indicator(f, &base);
            let pulled = src.cocycle_values(&self.h.pull(&g)?)?;
            let direct = tgt.cocycle_values(&g)?;
            for &z in &samples {
                let lhs = self.apply(&gauge(&pulled, z, &xi)?)?;
                let rhs = gauge(&direct, z, &image)?;
                let mut d = lhs.distance(&rhs)?;
                if undefined_legs > 0 {
                    d = d.max(1.0);
                }
                if d > report.max_residual {
                    report.max_residual = d;
                    report.witness_g = Some(format!("cyl {}", f.path_literal(&base)));
                    report.witness_z = Some([z.re, z.im]);
                }
            }
        }
        report.ok = report.max_residual < TOLERANCE;
        if report.ok {
            report.witness_g = None;
            report.witness_z = None;
        }
        Ok(report)
    }
}

fn finite_path(x: &BoundaryPoint) -> crate::graph::Path {
    match x {
        BoundaryPoint::Finite(p) => p.clone(),
        BoundaryPoint::Lasso { .. } => unreachable!("acyclic graphs have no lassos"),
    }
}

/// The *-isomorphism `phi(xi) = xi o psi^-1` for a verified conjugacy
/// between acyclic graphs.
pub fn induced_star_iso(h: Homeomorphism, depth: usize, seed: u64) -> Result<LegMap> {
    for g in [h.source(), h.target()] {
        if let Some(v) = g.vertex_on_cycle() {
            return Err(Error::NotAcyclic {
                vertex: g.vertex_name(v).to_string(),
            });
        }
    }
    let psi = InducedIso::new(h.clone(), depth, seed)?;
    let map = LegMap::new(h)?;
    for (i, e) in map.source.elements.iter().enumerate() {
        let image = psi.apply(e)?;
        if map.perm[i] != map.target.index_of(&image) {
            return Err(Error::Validity("leg map disagrees with the induced isomorphism".into()));
        }
    }
    Ok(map)
}
