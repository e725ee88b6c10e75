//! Verified homeomorphisms and the conjugacy decision.
//!
//! Two independent routes decide whether a homeomorphism `h` is a conjugacy:
//! domain preservation plus `h o sigma = sigma o h`, decided exactly on
//! product machines; and preimage set equalities, checked pointwise on an
//! enumerated and random point sample and as exact cylinder identities.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{LocallyConstantFn, PointMap};
use crate::graph::{DirectedGraph, VertexId};
use crate::machine::{compare, Comparison, Composite, Identity, Machine, Out, Side};
use crate::point::{enumerate_points, random_point, BoundaryPoint};
use crate::system::DRSystem;
use crate::transducer::Transducer;

/// A transducer pair whose composites were verified to be identities.
#[derive(Debug, Clone)]
pub struct Homeomorphism {
    forward: Transducer,
    backward: Transducer,
    certificate: usize,
}

/// Why a candidate pair is not a homeomorphism, or its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    /// Size of the explored product state sets.
    Verified { certificate: usize },
    Failed { reason: String },
}

fn lag_bound(a: &Transducer, b: &Transducer) -> usize {
    2 * (a.delay() + b.delay()) + 8
}

/// Checks that `backward o forward` and `forward o backward` are identities.
pub fn verify_homeomorphism(forward: &Transducer, backward: &Transducer) -> Result<Verification> {
    if forward.source() != backward.target() || forward.target() != backward.source() {
        return Err(Error::GraphMismatch);
    }
    let mut certificate = 0;
    for (first, second, side) in [(forward, backward, "source"), (backward, forward, "target")] {
        let g = first.source();
        let comp = Composite::new(first, second);
        let id = Identity::new(g);
        let starts: Vec<VertexId> = g.vertices().collect();
        let outcome = compare(
            Side {
                machine: &comp,
                state: comp.initial(),
                skip: 0,
            },
            Side {
                machine: &id,
                state: (),
                skip: 0,
            },
            &starts,
            lag_bound(first, second),
        )?;
        match outcome {
            Comparison::Equal { configs } => certificate += configs,
            Comparison::Differ { input, point } => {
                let at = match point {
                    Some(p) => format!("point `{}`", g.point_literal(&p)),
                    None => format!("cylinder `{}`", g.path_literal(&input)),
                };
                return Ok(Verification::Failed {
                    reason: format!("round trip on the {side} graph is not the identity at {at}"),
                });
            }
            Comparison::Inconclusive { .. } => {
                return Ok(Verification::Failed {
                    reason: format!("round trip on the {side} graph lags beyond the search bound"),
                })
            }
        }
    }
    Ok(Verification::Verified { certificate })
}

impl Homeomorphism {
    pub fn new(forward: Transducer, backward: Transducer) -> Result<Self> {
        match verify_homeomorphism(&forward, &backward)? {
            Verification::Verified { certificate } => Ok(Homeomorphism {
                forward,
                backward,
                certificate,
            }),
            Verification::Failed { reason } => Err(Error::Unverified(reason)),
        }
    }

    pub fn forward(&self) -> &Transducer {
        &self.forward
    }

    pub fn backward(&self) -> &Transducer {
        &self.backward
    }

    pub fn source(&self) -> &DirectedGraph {
        self.forward.source()
    }

    pub fn target(&self) -> &DirectedGraph {
        self.forward.target()
    }

    pub fn certificate(&self) -> usize {
        self.certificate
    }

    pub fn apply(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.forward.apply(x)
    }

    pub fn apply_inverse(&self, y: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.backward.apply(y)
    }

    /// The same homeomorphism read backwards.
    pub fn inverse(&self) -> Homeomorphism {
        Homeomorphism {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            certificate: self.certificate,
        }
    }

    /// `f -> f o h^{-1}`, functions on the source to functions on the target.
    pub fn push<S: crate::funcspace::Scalar>(
        &self,
        f: &LocallyConstantFn<S>,
    ) -> Result<LocallyConstantFn<S>> {
        f.compose(self.target(), &self.backward)
    }

    /// `g -> g o h`, functions on the target to functions on the source.
    pub fn pull<S: crate::funcspace::Scalar>(
        &self,
        g: &LocallyConstantFn<S>,
    ) -> Result<LocallyConstantFn<S>> {
        g.compose(self.source(), &self.forward)
    }
}

impl PointMap for Homeomorphism {
    fn apply(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.forward.apply(x)
    }
    fn lookahead(&self) -> usize {
        self.forward.delay()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    NotHomeomorphism,
    Dom,
    Commute,
    PreimageSetEquality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyVerdict {
    pub is_homeomorphism: bool,
    pub is_conjugacy: bool,
    pub failing_condition: Option<Condition>,
    pub witness: Option<String>,
    /// Least uniform `K` with `sigma^{K+1} o h = sigma^K o h o sigma` on `dom(sigma)`.
    pub eventual_k_bound: Option<usize>,
    /// Largest `K` tried for `eventual_k_bound`.
    pub eventual_search_bound: usize,
    pub homeomorphism_certificate: Option<usize>,
    pub homeomorphism_failure: Option<String>,
    /// Verdict of domain preservation plus commutation.
    pub route_domain_commute: Option<bool>,
    /// Verdict of the preimage set equalities.
    pub route_preimage: Option<bool>,
    pub routes_agree: bool,
    pub depth: usize,
    pub sample_points: usize,
}

/// Points whose image under `h` or `h^{-1}` misses the bare sinks, or `None`.
pub fn dom_violation(h: &Homeomorphism) -> Result<Option<String>> {
    for (map, from, to) in [
        (h.forward(), h.source(), h.target()),
        (h.backward(), h.target(), h.source()),
    ] {
        for s in from.sinks() {
            let x = BoundaryPoint::Finite(crate::graph::Path::vertex(s));
            let y = map.apply(&x)?;
            if !matches!(&y, BoundaryPoint::Finite(p) if p.is_empty()) {
                return Ok(Some(format!(
                    "{} -> {}",
                    from.point_literal(&x),
                    to.point_literal(&y)
                )));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommuteOutcome {
    Holds { configs: usize },
    /// A cylinder (or point) of the source where the identity fails.
    Fails { witness: String },
    Inconclusive,
}

/// Decides `sigma^{k+1}(h(x)) = sigma^k(h(sigma(x)))` for every `x` in `dom(sigma)`.
pub fn commute_with_lag(t: &Transducer, k: usize) -> Result<CommuteOutcome> {
    let g = t.source();
    let fg = t.target();
    let q0 = t.initial_state();
    let mut configs = 0;
    let both = |a: Result<BoundaryPoint>, b: Result<BoundaryPoint>| match (a, b) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    for e in g.edges() {
        let w = g.dst(e);
        if let Some(tail) = g.forced_tail(w) {
            let x = tail.prepend(g, e);
            let lhs = t.apply(&x)?.shift(fg, k + 1);
            let rhs = t.apply(tail)?.shift(fg, k);
            if !both(lhs, rhs) {
                return Ok(CommuteOutcome::Fails {
                    witness: g.point_literal(&x),
                });
            }
            continue;
        }
        let Out::Emit(o, n) = t.step(&q0, e)? else {
            unreachable!("validated transducers halt only into forced vertices")
        };
        let outcome = compare(
            Side {
                machine: t,
                state: n,
                skip: k + usize::from(o.is_none()),
            },
            Side {
                machine: t,
                state: q0,
                skip: k,
            },
            &[w],
            lag_bound(t, t) + k,
        )?;
        match outcome {
            Comparison::Equal { configs: c } => configs += c,
            Comparison::Differ { input, point } => {
                let witness = match point {
                    Some(p) => g.point_literal(&p.prepend(g, e)),
                    None => {
                        let mut edges = vec![e];
                        edges.extend_from_slice(input.edges());
                        g.path_literal(&g.edge_path(&edges)?)
                    }
                };
                return Ok(CommuteOutcome::Fails { witness });
            }
            Comparison::Inconclusive { .. } => return Ok(CommuteOutcome::Inconclusive),
        }
    }
    Ok(CommuteOutcome::Holds { configs })
}

/// Search cap for the uniform eventual bound.
pub fn eventual_search_bound(t: &Transducer) -> usize {
    let q = t.state_count();
    q * q * t.source().vertex_count() + q + 2
}

/// Least `K` for which `commute_with_lag(t, K)` holds, searched up to
/// [`eventual_search_bound`].
pub fn uniform_eventual_bound(t: &Transducer) -> Result<Option<usize>> {
    for k in 0..=eventual_search_bound(t) {
        if let CommuteOutcome::Holds { .. } = commute_with_lag(t, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Least `k` with `sigma^{k+1}(h(x)) = sigma^k(h(sigma(x)))`, searched up to
/// `states * description_length(x) + edges`.
pub fn eventual_k(t: &Transducer, x: &BoundaryPoint) -> Result<usize> {
    let g = t.source();
    let fg = t.target();
    let sx = x.shift(g, 1)?;
    let hx = t.apply(x)?;
    let hsx = t.apply(&sx)?;
    let bound = t.state_count() * x.description_length() + g.edge_count();
    for k in 0..=bound {
        if let (Ok(a), Ok(b)) = (hx.shift(fg, k + 1), hsx.shift(fg, k)) {
            if a == b {
                return Ok(k);
            }
        }
    }
    Err(Error::NotEventuallyConjugate {
        point: g.point_literal(x),
        bound,
    })
}

/// Pointwise check of `h(sigma^{-1}(x)) = sigma^{-1}(h(x))` in one direction.
fn preimage_violation(
    map: &Transducer,
    from: &DRSystem,
    to: &DRSystem,
    points: &[BoundaryPoint],
) -> Result<Option<String>> {
    for x in points {
        let lhs: BTreeSet<BoundaryPoint> = from
            .preimages(x)
            .iter()
            .map(|z| map.apply(z))
            .collect::<Result<_>>()?;
        let rhs: BTreeSet<BoundaryPoint> = to.preimages(&map.apply(x)?).into_iter().collect();
        if lhs != rhs {
            return Ok(Some(from.graph().point_literal(x)));
        }
    }
    Ok(None)
}

/// Cylinder form: `h(sigma^{-1}(U)) = sigma^{-1}(h(U))` for cylinders of depth `<= depth`.
fn cylinder_preimage_violation(h: &Homeomorphism, depth: usize) -> Result<Option<String>> {
    for (hh, from, to) in [
        (h.clone(), h.source(), h.target()),
        (h.inverse(), h.target(), h.source()),
    ] {
        for u in from.paths_up_to(depth) {
            let one = LocallyConstantFn::<i64>::indicator(from, &u);
            let lhs = hh.push(&one.sigma_upper_star(from))?;
            let rhs = hh.push(&one)?.sigma_upper_star(to);
            if lhs != rhs {
                return Ok(Some(format!("cyl {}", from.path_literal(&u))));
            }
        }
    }
    Ok(None)
}

/// Sample for the pointwise route: all points of description length
/// `<= depth + 2` plus `extra` seeded random points.
pub fn sample_points(g: &DirectedGraph, depth: usize, extra: usize, seed: u64) -> Vec<BoundaryPoint> {
    let mut set: BTreeSet<BoundaryPoint> = enumerate_points(g, depth + 2).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        if let Some(x) = random_point(g, &mut rng, 3 * depth + 6) {
            set.insert(x);
        }
    }
    set.into_iter().collect()
}

/// Runs both routes on a candidate pair.
pub fn check_conjugacy(
    forward: &Transducer,
    backward: &Transducer,
    depth: usize,
    seed: u64,
) -> Result<ConjugacyVerdict> {
    let mut verdict = ConjugacyVerdict {
        is_homeomorphism: false,
        is_conjugacy: false,
        failing_condition: None,
        witness: None,
        eventual_k_bound: None,
        eventual_search_bound: eventual_search_bound(forward),
        homeomorphism_certificate: None,
        homeomorphism_failure: None,
        route_domain_commute: None,
        route_preimage: None,
        routes_agree: true,
        depth,
        sample_points: 0,
    };
    let h = match verify_homeomorphism(forward, backward)? {
        Verification::Verified { certificate } => Homeomorphism {
            forward: forward.clone(),
            backward: backward.clone(),
            certificate,
        },
        Verification::Failed { reason } => {
            verdict.failing_condition = Some(Condition::NotHomeomorphism);
            verdict.witness = Some(reason.clone());
            verdict.homeomorphism_failure = Some(reason);
            return Ok(verdict);
        }
    };
    verdict.is_homeomorphism = true;
    verdict.homeomorphism_certificate = Some(h.certificate);

    let dom = dom_violation(&h)?;
    let commute = match commute_with_lag(forward, 0)? {
        CommuteOutcome::Holds { .. } => None,
        CommuteOutcome::Fails { witness } => Some(witness),
        CommuteOutcome::Inconclusive => Some("search bound exceeded".to_string()),
    };
    let route2 = dom.is_none() && commute.is_none();

    let sys_e = DRSystem::new(h.source().clone());
    let sys_f = DRSystem::new(h.target().clone());
    let pts_e = sample_points(h.source(), depth, 64, seed);
    let pts_f = sample_points(h.target(), depth, 64, seed.wrapping_add(1));
    verdict.sample_points = pts_e.len() + pts_f.len();
    let pre = match preimage_violation(forward, &sys_e, &sys_f, &pts_e)? {
        Some(w) => Some(w),
        None => preimage_violation(backward, &sys_f, &sys_e, &pts_f)?,
    };
    let pre = match pre {
        Some(w) => Some(w),
        None => cylinder_preimage_violation(&h, depth)?,
    };
    let route3 = pre.is_none();

    verdict.route_domain_commute = Some(route2);
    verdict.route_preimage = Some(route3);
    verdict.routes_agree = route2 == route3;
    verdict.is_conjugacy = route2;
    verdict.eventual_k_bound = uniform_eventual_bound(forward)?;
    if let Some(w) = dom {
        verdict.failing_condition = Some(Condition::Dom);
        verdict.witness = Some(w);
    } else if let Some(w) = commute {
        verdict.failing_condition = Some(Condition::Commute);
        verdict.witness = Some(w);
    } else if let Some(w) = pre {
        verdict.failing_condition = Some(Condition::PreimageSetEquality);
        verdict.witness = Some(w);
    }
    Ok(verdict)
}
