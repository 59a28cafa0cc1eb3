//! Maximal dyadic cubes Q with 2√n ℓ(Q) < d(x) ≤ 4√n ℓ(Q) for some x ∈ Q ∩ Ω, where d is the
//! distance to the circle. Such cubes satisfy √n ℓ(Q) ≤ dist(Q, ∂Ω) ≤ 4√n ℓ(Q).

use std::collections::HashMap;

use serde::Serialize;

use crate::cube::{Contact, DyadicCube};
use crate::WhitneyError;

const SQRT_N: f64 = std::f64::consts::SQRT_2;
const N: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// Open disc of the given radius about 0.
    Disc { radius: f64 },
    /// [−h, h]² minus the closed disc; the box edges are a truncation, not a boundary.
    Exterior { radius: f64, half_width: f64 },
}

impl Domain {
    pub fn radius(&self) -> f64 {
        match *self {
            Domain::Disc { radius } | Domain::Exterior { radius, .. } => radius,
        }
    }

    /// Range of the distance to the circle over Q ∩ Ω, or `None` if Q misses Ω.
    pub fn distance_range(&self, q: &DyadicCube) -> Option<(f64, f64)> {
        let (a, b) = q.norm_range();
        let r = self.radius();
        match self {
            Domain::Disc { .. } => (a < r).then(|| ((r - b).max(0.0), r - a)),
            Domain::Exterior { .. } => (b > r).then(|| ((a - r).max(0.0), b - r)),
        }
    }

    /// The closed cube lies in Ω.
    pub fn contains_cube(&self, q: &DyadicCube) -> bool {
        let (a, b) = q.norm_range();
        let r = self.radius();
        match self {
            Domain::Disc { .. } => b < r,
            Domain::Exterior { .. } => a > r,
        }
    }

    /// dist(Q, ∂Ω) for a cube inside Ω.
    pub fn boundary_distance(&self, q: &DyadicCube) -> f64 {
        let (a, b) = q.norm_range();
        let r = self.radius();
        match self {
            Domain::Disc { .. } => r - b,
            Domain::Exterior { .. } => a - r,
        }
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        let s = x[0].hypot(x[1]);
        match *self {
            Domain::Disc { radius } => s < radius,
            Domain::Exterior { radius, half_width } => s > radius && x[0].abs() <= half_width && x[1].abs() <= half_width,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WhitneyConfig {
    pub cap: i32,
    pub epsilon: f64,
    pub delta: f64,
}

impl WhitneyConfig {
    pub fn new(cap: i32) -> Self {
        Self { cap, epsilon: 0.5, delta: 0.5 }
    }

    /// εδ/(16n), the side length bound of the small exterior cubes.
    pub fn small_side(&self) -> f64 {
        self.epsilon * self.delta / (16.0 * N)
    }

    /// Coarsest level whose cubes are small.
    pub fn small_level(&self) -> i32 {
        (1.0 / self.small_side()).log2().ceil() as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Interior,
    Exterior,
    SmallExterior,
}

#[derive(Clone, Debug)]
pub struct WhitneyDecomposition {
    pub domain: Domain,
    pub config: WhitneyConfig,
    pub cubes: Vec<DyadicCube>,
    pub roles: Vec<Role>,
    /// Touching pairs (closed squares meet), each list sorted.
    pub neighbors: Vec<Vec<usize>>,
    /// Cubes at the cap that would have needed further subdivision.
    pub truncated: usize,
    index: HashMap<DyadicCube, usize>,
}

/// Root cubes tile [−4, 4]² (or the bounding box) at level 0.
const ROOT_LEVEL: i32 = 0;

pub fn decompose(domain: Domain, config: &WhitneyConfig) -> Result<WhitneyDecomposition, WhitneyError> {
    if config.cap > 12 {
        return Err(WhitneyError::CapTooLarge(config.cap));
    }
    if !(config.epsilon > 0.0 && config.delta > 0.0) {
        return Err(WhitneyError::Parameter("ε and δ must be positive".into()));
    }
    let needed = config.small_level();
    if config.cap < needed {
        return Err(WhitneyError::CapTooSmall { cap: config.cap, side: config.small_side(), needed });
    }
    let r = domain.radius();
    if !(r > 0.0) {
        return Err(WhitneyError::Parameter("radius must be positive".into()));
    }
    let half = match domain {
        Domain::Disc { .. } => r.ceil(),
        Domain::Exterior { half_width, .. } => {
            if half_width < 3.0 * r {
                return Err(WhitneyError::BoxTooSmall { half_width, radius: r });
            }
            if half_width.fract() != 0.0 {
                return Err(WhitneyError::Parameter("box half-width must be an integer".into()));
            }
            half_width
        }
    };
    let h = half as i64;
    let mut cubes = Vec::new();
    let mut truncated = 0;
    let mut stack: Vec<DyadicCube> = Vec::new();
    for i in (-h..h).rev() {
        for j in (-h..h).rev() {
            stack.push(DyadicCube::new(ROOT_LEVEL, i, j));
        }
    }
    while let Some(q) = stack.pop() {
        let Some((dlo, dhi)) = domain.distance_range(&q) else { continue };
        let l = q.side();
        if dhi > 2.0 * SQRT_N * l && dlo <= 4.0 * SQRT_N * l {
            cubes.push(q);
        } else if dlo > 4.0 * SQRT_N * l {
            // only a coarser cube could hold these points
            return Err(WhitneyError::Parameter(format!("root cubes too fine near {:?}", q.center())));
        } else if q.level == config.cap {
            truncated += 1;
        } else {
            for c in q.children().into_iter().rev() {
                stack.push(c);
            }
        }
    }
    cubes.sort();
    let small = config.small_side();
    let roles = cubes
        .iter()
        .map(|q| match domain {
            Domain::Disc { .. } => Role::Interior,
            Domain::Exterior { .. } if q.side() <= small => Role::SmallExterior,
            Domain::Exterior { .. } => Role::Exterior,
        })
        .collect();
    let index: HashMap<DyadicCube, usize> = cubes.iter().enumerate().map(|(k, q)| (*q, k)).collect();
    let mut dec = WhitneyDecomposition { domain, config: config.clone(), cubes, roles, neighbors: Vec::new(), truncated, index };
    dec.neighbors = (0..dec.cubes.len()).map(|k| dec.find_touching(&dec.cubes[k], Some(k))).collect();
    Ok(dec)
}

impl WhitneyDecomposition {
    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn index_of(&self, q: &DyadicCube) -> Option<usize> {
        self.index.get(q).copied()
    }

    pub fn max_level(&self) -> i32 {
        self.cubes.iter().map(|q| q.level).max().unwrap_or(ROOT_LEVEL)
    }

    /// Indices of 𝒲₃.
    pub fn small(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.roles[k] == Role::SmallExterior).collect()
    }

    /// Every decomposition cube whose closed square meets that of `q`, at any level.
    pub fn find_touching(&self, q: &DyadicCube, skip: Option<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        let top = self.max_level().max(q.level);
        for level in ROOT_LEVEL..=top {
            let (lo, hi) = if level <= q.level {
                let a = q.ancestor(level);
                ((a.i - 1, a.j - 1), (a.i + 1, a.j + 1))
            } else {
                let d = level - q.level;
                (((q.i << d) - 1, (q.j << d) - 1), (((q.i + 1) << d), ((q.j + 1) << d)))
            };
            let ring = level > q.level;
            for a in lo.0..=hi.0 {
                for b in lo.1..=hi.1 {
                    if ring && a > lo.0 && a < hi.0 && b > lo.1 && b < hi.1 {
                        // strictly inside q: only descendants, never touching from outside
                        continue;
                    }
                    let c = DyadicCube::new(level, a, b);
                    if let Some(&k) = self.index.get(&c) {
                        if Some(k) != skip && c.touches(q) {
                            out.push(k);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Cubes containing x (several only on shared boundaries).
    pub fn containing(&self, x: &[f64]) -> Vec<usize> {
        let mut out = Vec::new();
        for level in ROOT_LEVEL..=self.max_level() {
            let s = 2f64.powi(level);
            let (a, b) = ((x[0] * s).floor() as i64, (x[1] * s).floor() as i64);
            for da in -1..=0 {
                for db in -1..=0 {
                    if let Some(&k) = self.index.get(&DyadicCube::new(level, a + da, b + db)) {
                        if self.cubes[k].contains(x) {
                            out.push(k);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Cubes whose homothety λQ contains x, for λ < 3.
    pub fn dilates_containing(&self, lambda: f64, x: &[f64], filter: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut out = Vec::new();
        for level in ROOT_LEVEL..=self.max_level() {
            let s = 2f64.powi(level);
            let (a, b) = ((x[0] * s).floor() as i64, (x[1] * s).floor() as i64);
            for da in -1..=1 {
                for db in -1..=1 {
                    if let Some(&k) = self.index.get(&DyadicCube::new(level, a + da, b + db)) {
                        if filter(k) && self.cubes[k].dilate_contains(lambda, x) {
                            out.push(k);
                        }
                    }
                }
            }
        }
        out
    }

    /// Edge-sharing neighbors.
    pub fn edge_neighbors(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[k].iter().copied().filter(move |&o| self.cubes[k].contact(&self.cubes[o]) == Contact::Edge)
    }

    pub fn verify(&self) -> Violations {
        let mut v = Violations::default();
        for (k, q) in self.cubes.iter().enumerate() {
            // D2: dyadic cubes overlap only if one contains the other
            for level in ROOT_LEVEL..q.level {
                if self.index.contains_key(&q.ancestor(level)) {
                    v.d2.push((k, self.index[&q.ancestor(level)]));
                }
            }
            for &o in &self.neighbors[k] {
                if o < k {
                    continue;
                }
                let p = &self.cubes[o];
                if q.contact(p) == Contact::Overlap {
                    v.d2.push((k, o));
                }
                let (a, b) = (q.side(), p.side());
                if !(a / 4.0 <= b && b <= 4.0 * a) {
                    v.d1.push((k, o));
                }
            }
            let l = q.side();
            let d = self.domain.boundary_distance(q);
            if !self.domain.contains_cube(q) || !(l <= d && d <= 4.0 * SQRT_N * l) {
                v.d3.push(k);
            }
        }
        v
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Violations {
    pub d1: Vec<(usize, usize)>,
    pub d2: Vec<(usize, usize)>,
    pub d3: Vec<usize>,
}

impl Violations {
    pub fn is_empty(&self) -> bool {
        self.d1.is_empty() && self.d2.is_empty() && self.d3.is_empty()
    }
}

/// One cube in the JSON dump.
#[derive(Clone, Debug, Serialize)]
pub struct CubeRecord {
    pub level: i32,
    pub i: i64,
    pub j: i64,
    pub role: Role,
    pub reflected_to: Option<DyadicCube>,
}

impl WhitneyDecomposition {
    pub fn records(&self, reflected: impl Fn(usize) -> Option<DyadicCube>) -> Vec<CubeRecord> {
        self.cubes
            .iter()
            .enumerate()
            .map(|(k, q)| CubeRecord { level: q.level, i: q.i, j: q.j, role: self.roles[k], reflected_to: reflected(k) })
            .collect()
    }
}
