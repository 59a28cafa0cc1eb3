//! E u = u in Ω and Σ_{Q ∈ 𝒲₃} φ_Q π_{Q*}u outside, for the unit disc.

use std::collections::BTreeMap;

use aop_core::classify::fdn;
use aop_core::nullspace::{AffineField, KernelProjector, PolyField, Quadrature, SmoothField, TaylorConfig};
use aop_core::opcore::multiindex::multi_indices_up_to;
use aop_core::opcore::{MultiIndex, Operator};
use aop_core::opcore::RealPoly;
use aop_lab::poincare::Sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{decompose, Domain, Role, WhitneyConfig, WhitneyDecomposition};
use crate::jet::Jet;
use crate::partition::{PartitionOfUnity, HALO};
use crate::reflect::{reflect, ReflectionMap};
use crate::WhitneyError;

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionConfig {
    pub whitney: WhitneyConfig,
    pub half_width: f64,
    /// Midpoint nodes per axis of the reference cube for the L² projection.
    pub cube_nodes: usize,
    /// Polar resolution of the averaged Taylor weight ball.
    pub taylor_resolution: usize,
}

impl ExtensionConfig {
    pub fn new(cap: i32) -> Self {
        Self { whitney: WhitneyConfig::new(cap), half_width: 4.0, cube_nodes: 12, taylor_resolution: 16 }
    }
}

/// Decompositions of the disc and its exterior with the reflection between them.
pub struct Geometry {
    pub inner: WhitneyDecomposition,
    pub outer: WhitneyDecomposition,
    pub map: ReflectionMap,
}

impl Geometry {
    pub fn new(cfg: &ExtensionConfig) -> Result<Self, WhitneyError> {
        let inner = decompose(Domain::Disc { radius: 1.0 }, &cfg.whitney)?;
        let outer = decompose(Domain::Exterior { radius: 1.0, half_width: cfg.half_width }, &cfg.whitney)?;
        let map = reflect(&outer, &inner)?;
        Ok(Self { inner, outer, map })
    }
}

/// π on [−½, ½]² with the inscribed weight ball, transported to each Q* by dilation.
pub struct CubeProjector {
    reference: KernelProjector,
}

impl CubeProjector {
    pub fn new(op: &Operator, cfg: &ExtensionConfig) -> Result<Self, WhitneyError> {
        let c = fdn(op);
        if c.truth() != Some(true) {
            return Err(aop_core::nullspace::ProjectionError::NotCElliptic(c.to_string()).into());
        }
        if op.n() != 2 {
            return Err(WhitneyError::Parameter("extension is planar".into()));
        }
        let domain = Quadrature::box_midpoint(&[-0.5, -0.5], &[0.5, 0.5], cfg.cube_nodes);
        let taylor = TaylorConfig::new(vec![0.0, 0.0], 0.5, op.order().saturating_sub(1))
            .with_resolution(cfg.taylor_resolution);
        Ok(Self { reference: KernelProjector::new(op, domain, taylor)? })
    }

    /// π_S u for the square with the given center and side.
    pub fn project(&self, u: &dyn SmoothField, center: [f64; 2], side: f64) -> Result<PolyField, WhitneyError> {
        let local = AffineField { inner: u, center: center.to_vec(), scale: side };
        Ok(self.reference.apply(&local)?.unmap(&center, side))
    }
}

pub struct Extension<'a> {
    geometry: &'a Geometry,
    u: &'a dyn SmoothField,
    partition: PartitionOfUnity<'a>,
    /// π_{Q*}u per interior target cube.
    pieces: BTreeMap<usize, PolyField>,
    /// ∂^α p / α! per piece and component, |α| ≤ TABLE_ORDER, in jet slot order.
    tables: BTreeMap<usize, Vec<Vec<(usize, usize, RealPoly)>>>,
    /// Largest degree among the pieces.
    degree: u32,
    /// Monomial coefficients per piece and component over `multi_indices_up_to(2, degree)`.
    dense: BTreeMap<usize, Vec<Vec<f64>>>,
}

const TABLE_ORDER: u32 = 2;

impl<'a> Extension<'a> {
    pub fn new(geometry: &'a Geometry, projector: &CubeProjector, u: &'a dyn SmoothField) -> Result<Self, WhitneyError> {
        let mut targets: Vec<usize> = geometry.map.pairs.iter().map(|&(_, s)| s).collect();
        targets.sort_unstable();
        targets.dedup();
        let pieces: Result<Vec<(usize, PolyField)>, WhitneyError> = targets
            .par_iter()
            .map(|&s| {
                let c = &geometry.inner.cubes[s];
                projector.project(u, c.center(), c.side()).map(|p| (s, p))
            })
            .collect();
        let pieces: BTreeMap<usize, PolyField> = pieces?.into_iter().collect();
        let monos = multi_indices_up_to(2, TABLE_ORDER);
        let tables = pieces
            .iter()
            .map(|(&s, p)| {
                let t = p
                    .0
                    .iter()
                    .map(|c| {
                        monos
                            .iter()
                            .map(|m| {
                                let e = m.exps();
                                (e[0] as usize, e[1] as usize, c.partial(m).scale(1.0 / factorial2(e)))
                            })
                            .collect()
                    })
                    .collect();
                (s, t)
            })
            .collect();
        let degree = pieces.values().flat_map(|p| p.0.iter().filter_map(RealPoly::degree)).max().unwrap_or(0);
        let all = multi_indices_up_to(2, degree);
        let dense = pieces
            .iter()
            .map(|(&s, p)| (s, p.0.iter().map(|c| all.iter().map(|m| c.coefficient(m)).collect()).collect()))
            .collect();
        Ok(Self { geometry, u, partition: PartitionOfUnity::new(&geometry.outer), pieces, tables, degree, dense })
    }

    pub fn piece(&self, q: usize) -> &PolyField {
        &self.pieces[&self.geometry.map.target(q).expect("small cube is mapped")]
    }

    /// Per-component jets of E u at a point outside the disc.
    fn exterior_jets(&self, x: &[f64], order: usize) -> Vec<Jet> {
        self.combine(&self.partition.phis(x, order), x, order)
    }

    /// Σ φ_Q p_Q from precomputed φ jets at x.
    pub fn combine(&self, phis: &[(usize, Jet)], x: &[f64], order: usize) -> Vec<Jet> {
        let mut out = vec![Jet::zero(order); self.u.dim()];
        for (q, phi) in phis {
            let target = self.geometry.map.target(*q).expect("small cube is mapped");
            for (c, o) in out.iter_mut().enumerate() {
                let mut pj = Jet::zero(order);
                if order as u32 <= TABLE_ORDER {
                    for (a, b, poly) in &self.tables[&target][c] {
                        if a + b <= order {
                            pj.set_coefficient(*a, *b, poly.eval(x));
                        }
                    }
                } else {
                    for m in multi_indices_up_to(2, order as u32) {
                        let e = m.exps();
                        let v = self.pieces[&target].0[c].partial(&m).eval(x) / factorial2(e);
                        pj.set_coefficient(e[0] as usize, e[1] as usize, v);
                    }
                }
                o.add_assign(&phi.mul(&pj));
            }
        }
        out
    }

    pub fn inside(&self, x: &[f64]) -> bool {
        x[0].hypot(x[1]) < 1.0
    }
}

impl SmoothField for Extension<'_> {
    fn nvars(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        self.u.dim()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        if self.inside(x) {
            return self.u.value(x);
        }
        self.exterior_jets(x, 0).iter().map(Jet::value).collect()
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        if self.inside(x) {
            return self.u.derivative(alpha, x);
        }
        Some(self.exterior_jets(x, alpha.order() as usize).iter().map(|j| j.derivative(alpha)).collect())
    }
}

fn factorial2(e: &[u32]) -> f64 {
    e.iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product()
}

/// ‖u‖₁ + ‖𝔸u‖₁ over a quadrature rule.
pub fn operator_norm_l1(op: &Operator, u: &dyn SmoothField, rule: &Quadrature) -> f64 {
    let terms = op.float_terms();
    rule.iter()
        .map(|(x, w)| {
            let v = u.value(x);
            let mut au = vec![0.0; op.dim_w()];
            for (alpha, a) in &terms {
                let d = u.derivative(alpha, x).expect("analytic derivatives");
                for (r, o) in au.iter_mut().enumerate() {
                    *o += (0..op.dim_v()).map(|c| a[(r, c)] * d[c]).sum::<f64>();
                }
            }
            let n = |z: &[f64]| z.iter().map(|t| t * t).sum::<f64>().sqrt();
            w * (n(&v) + n(&au))
        })
        .sum()
}

/// Gauss nodes per interval of the collar rule, and on the taper intervals of cubes outside 𝒲₃.
///
/// Outside ⋃𝒲₃ the partition sum is a step composed with steps, which Gauss rules resolve slowly.
pub const COLLAR_GAUSS: (usize, usize) = (6, 32);

/// Exterior cubes meeting the support of E u: 𝒲₃ and its neighbours.
pub fn collar_cubes(geometry: &Geometry) -> Vec<usize> {
    let outer = &geometry.outer;
    (0..outer.len())
        .filter(|&k| {
            outer.roles[k] == Role::SmallExterior
                || outer.neighbors[k].iter().any(|&o| outer.roles[o] == Role::SmallExterior)
        })
        .collect()
}

/// Tensor Gauss rule on cube k, split per axis where a neighbouring θ_Q starts or stops ramping.
///
/// Between breakpoints the partition is smooth on the scale of the interval.
pub fn cube_rule(outer: &WhitneyDecomposition, k: usize, (nodes, taper): (usize, usize)) -> (Vec<[f64; 2]>, Vec<f64>) {
    let cube = outer.cubes[k];
    let (lo, hi) = (cube.lo(), cube.hi());
    let mut cuts: [Vec<f64>; 2] = [vec![lo[0], hi[0]], vec![lo[1], hi[1]]];
    let mut widest: f64 = 0.0;
    for &j in outer.neighbors[k].iter().filter(|&&j| outer.roles[j] == Role::SmallExterior) {
        let q = outer.cubes[j];
        let w = (HALO - 1.0) * 0.5 * q.side();
        widest = widest.max(w);
        let (a, b) = (q.lo(), q.hi());
        for (axis, cut) in cuts.iter_mut().enumerate() {
            for t in [a[axis] - w, a[axis], b[axis], b[axis] + w] {
                if t > lo[axis] && t < hi[axis] {
                    cut.push(t);
                }
            }
        }
    }
    let gauss = gauss_quad::GaussLegendre::new(nodes.try_into().expect("positive"));
    let fine = gauss_quad::GaussLegendre::new(taper.try_into().expect("positive"));
    let tapers = outer.roles[k] != Role::SmallExterior;
    let axis_nodes = |cut: &mut Vec<f64>, lo: f64, hi: f64| {
        cut.sort_by(f64::total_cmp);
        cut.dedup();
        let band = widest * (1.0 + 1e-9);
        let mut out = Vec::new();
        for w in cut.windows(2) {
            let (m, r) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            // the taper runs inward from the edges of the cube
            let edge = w[1] <= lo + band || w[0] >= hi - band;
            let rule = if tapers && edge { &fine } else { &gauss };
            out.extend(rule.iter().map(|(t, wt)| (m + r * t, r * wt)));
        }
        out
    };
    let [cx, cy] = &mut cuts;
    let (xs, ys) = (axis_nodes(cx, lo[0], hi[0]), axis_nodes(cy, lo[1], hi[1]));
    let mut points = Vec::with_capacity(xs.len() * ys.len());
    let mut weights = Vec::with_capacity(xs.len() * ys.len());
    for &(x, wx) in &xs {
        for &(y, wy) in &ys {
            points.push([x, y]);
            weights.push(wx * wy);
        }
    }
    (points, weights)
}

/// ‖E u‖₁ + ‖𝔸 E u‖₁ outside ⋃𝒲₁ for several extensions over one geometry.
///
/// Per node the products φ_Q · x^m are formed once as jets; each field then only needs
/// its monomial coefficients.
pub fn collar_norms(op: &Operator, extensions: &[Extension], geometry: &Geometry, nodes: (usize, usize)) -> Vec<f64> {
    let order = op.order() as usize;
    let outer = &geometry.outer;
    let partition = PartitionOfUnity::new(outer);
    let degree = extensions.iter().map(|e| e.degree).max().unwrap_or(0);
    let monos: Vec<[u32; 2]> = multi_indices_up_to(2, degree).iter().map(|m| [m.exps()[0], m.exps()[1]]).collect();
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    // (jet slot, α!, matrix) per term of 𝔸
    let (dim_v, dim_w) = (op.dim_v(), op.dim_w());
    let terms: Vec<(usize, f64, Vec<f64>)> = op
        .float_terms()
        .into_iter()
        .map(|(alpha, a)| {
            let e = alpha.exps();
            let rows = (0..dim_w).flat_map(|r| (0..dim_v).map(move |c| (r, c))).map(|rc| a[rc]).collect();
            (Jet::slot(e[0] as usize, e[1] as usize), fact(e[0]) * fact(e[1]), rows)
        })
        .collect();
    let slots = Jet::zero(order).coefficients().len();
    let zero = || vec![0.0; extensions.len()];
    collar_cubes(geometry)
        .par_iter()
        .map(|&k| {
            let (points, weights) = cube_rule(outer, k, nodes);
            let mut cands = outer.neighbors[k].clone();
            cands.push(k);
            let mut acc = zero();
            let mut jet = vec![0.0; dim_v * slots];
            for (x, w) in points.iter().zip(&weights) {
                let phis = partition.phis_among(x, order, &cands);
                if phis.is_empty() {
                    continue;
                }
                let basis: Vec<Jet> = monos.iter().map(|&m| Jet::monomial(order, m, x)).collect();
                let products: Vec<(usize, Vec<Jet>)> = phis
                    .iter()
                    .map(|(q, phi)| {
                        let target = geometry.map.target(*q).expect("small cube is mapped");
                        (target, basis.iter().map(|b| phi.mul(b)).collect())
                    })
                    .collect();
                for (e, slot) in extensions.iter().zip(acc.iter_mut()) {
                    jet.iter_mut().for_each(|v| *v = 0.0);
                    for (target, prods) in &products {
                        for (c, coeffs) in e.dense[target].iter().enumerate() {
                            let out = &mut jet[c * slots..(c + 1) * slots];
                            for (cm, g) in coeffs.iter().zip(prods) {
                                if *cm != 0.0 {
                                    for (o, v) in out.iter_mut().zip(g.coefficients()) {
                                        *o += cm * v;
                                    }
                                }
                            }
                        }
                    }
                    let value: f64 = (0..dim_v).map(|c| jet[c * slots].powi(2)).sum::<f64>().sqrt();
                    let mut au = 0.0;
                    for r in 0..dim_w {
                        let mut t = 0.0;
                        for (s, f, a) in &terms {
                            for c in 0..dim_v {
                                t += a[r * dim_v + c] * f * jet[c * slots + s];
                            }
                        }
                        au += t * t;
                    }
                    *slot += w * (value + au.sqrt());
                }
            }
            acc
        })
        .reduce(zero, |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessRow {
    pub cap: i32,
    pub small_cubes: usize,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessReport {
    pub experiment: &'static str,
    pub rows: Vec<BoundednessRow>,
    /// max over consecutive caps of |r_{c+1} − r_c| / r_c for the max ratio.
    pub max_relative_change: f64,
    pub stable: bool,
}

/// ‖E u‖_{W^{𝔸,1}(box)} / ‖u‖_{W^{𝔸,1}(disc)} at each cap.
pub fn boundedness(
    op: &Operator,
    fields: &[&dyn SmoothField],
    caps: &[i32],
    tolerance: f64,
) -> Result<BoundednessReport, WhitneyError> {
    let disc = Quadrature::disc_polar([0.0, 0.0], 1.0, 96, 96);
    let inside: Vec<f64> = fields.iter().map(|u| operator_norm_l1(op, *u, &disc)).collect();
    let mut rows = Vec::new();
    for &cap in caps {
        let cfg = ExtensionConfig::new(cap);
        let geometry = Geometry::new(&cfg)?;
        let projector = CubeProjector::new(op, &cfg)?;
        let extensions =
            fields.iter().map(|u| Extension::new(&geometry, &projector, *u)).collect::<Result<Vec<_>, _>>()?;
        let outside = collar_norms(op, &extensions, &geometry, COLLAR_GAUSS);
        let ratios: Vec<f64> = inside.iter().zip(&outside).map(|(i, o)| (i + o) / i).collect();
        let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
        rows.push(BoundednessRow { cap, small_cubes: geometry.outer.small().len(), ratios, max_ratio });
    }
    let max_relative_change = rows
        .windows(2)
        .map(|w| (w[1].max_ratio - w[0].max_ratio).abs() / w[0].max_ratio)
        .fold(0.0, f64::max);
    Ok(BoundednessReport { experiment: "extend", rows, stable: max_relative_change <= tolerance, max_relative_change })
}

/// Σ cᵢ uᵢ.
pub struct Combination<'a>(pub Vec<(f64, &'a dyn SmoothField)>);

impl SmoothField for Combination<'_> {
    fn nvars(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        self.0[0].1.dim()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (c, u) in &self.0 {
            for (o, v) in out.iter_mut().zip(u.value(x)) {
                *o += c * v;
            }
        }
        out
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        for (c, u) in &self.0 {
            for (o, v) in out.iter_mut().zip(u.derivative(alpha, x)?) {
                *o += c * v;
            }
        }
        Some(out)
    }
}

/// Random points of the closed cubes of 𝒲₃, `per_cube` each.
pub fn collar_points(geometry: &Geometry, per_cube: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for q in geometry.outer.small() {
        let c = geometry.outer.cubes[q];
        let (ctr, s) = (c.center(), c.side());
        for _ in 0..per_cube {
            out.push([ctr[0] + s * rng.gen_range(-0.5..=0.5), ctr[1] + s * rng.gen_range(-0.5..=0.5)]);
        }
    }
    out
}

/// max |E u − u| over the points, relative to max |u| there.
pub fn reproduction_error(e: &Extension, u: &dyn SmoothField, points: &[[f64; 2]]) -> f64 {
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for x in points {
        let (a, b) = (e.value(x), u.value(x));
        for (p, q) in a.iter().zip(&b) {
            err = err.max((p - q).abs());
            scale = scale.max(q.abs());
        }
    }
    err / scale.max(1.0)
}

/// max |E(au + bv) − aE u − bE v| over the points, relative to the largest value.
pub fn linearity_error(
    geometry: &Geometry,
    projector: &CubeProjector,
    (a, u): (f64, &dyn SmoothField),
    (b, v): (f64, &dyn SmoothField),
    points: &[[f64; 2]],
) -> Result<f64, WhitneyError> {
    let w = Combination(vec![(a, u), (b, v)]);
    let (eu, ev, ew) =
        (Extension::new(geometry, projector, u)?, Extension::new(geometry, projector, v)?, Extension::new(geometry, projector, &w)?);
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for x in points {
        let (pu, pv, pw) = (eu.value(x), ev.value(x), ew.value(x));
        for c in 0..pw.len() {
            err = err.max((pw[c] - a * pu[c] - b * pv[c]).abs());
            scale = scale.max(pw[c].abs()).max(pu[c].abs()).max(pv[c].abs());
        }
    }
    Ok(err / scale.max(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessConfig {
    pub caps: Vec<i32>,
    pub tolerance: f64,
    pub random_fields: usize,
    pub max_degree: u32,
    pub seed: u64,
}

impl Default for BoundednessConfig {
    fn default() -> Self {
        Self { caps: vec![7, 8, 9], tolerance: 0.25, random_fields: 20, max_degree: 4, seed: 0 }
    }
}

/// u_i = x_{i mod 2}²; for ℰ this is (x₁², x₂²).
pub fn quadratic_field(dim: usize) -> PolyField {
    PolyField(
        (0..dim)
            .map(|i| {
                let mut e = vec![0, 0];
                e[i % 2] = 2;
                RealPoly::from_terms(2, [(MultiIndex::new(e), 1.0)])
            })
            .collect(),
    )
}

/// The quadratic field followed by random polynomials of degree ≤ max_degree plus Gaussian bumps.
pub fn boundedness_experiment(op: &Operator, cfg: &BoundednessConfig) -> Result<BoundednessReport, WhitneyError> {
    let quad = quadratic_field(op.dim_v());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random: Vec<Sample> =
        (0..cfg.random_fields).map(|_| Sample::random_with_degree(op.dim_v(), cfg.max_degree, &mut rng)).collect();
    let mut fields: Vec<&dyn SmoothField> = vec![&quad];
    fields.extend(random.iter().map(|s| s as &dyn SmoothField));
    boundedness(op, &fields, &cfg.caps, cfg.tolerance)
}
