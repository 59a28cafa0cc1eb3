use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::cube::DyadicCube;
use crate::decompose::WhitneyDecomposition;
use crate::WhitneyError;

/// Q ↦ Q* from the small exterior cubes to interior cubes.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectionMap {
    /// (index in the exterior decomposition, index in the interior decomposition).
    pub pairs: Vec<(usize, usize)>,
    /// max dist(Q, Q*)/ℓ(Q).
    pub distance_constant: f64,
    /// Largest number of Q with the same Q*.
    pub max_multiplicity: usize,
    /// Pairs violating ℓ(Q) ≤ ℓ(Q*) ≤ 4ℓ(Q); empty by construction.
    pub r1_violations: Vec<(usize, usize)>,
    #[serde(skip)]
    lookup: HashMap<usize, usize>,
}

impl ReflectionMap {
    pub fn target(&self, q: usize) -> Option<usize> {
        self.lookup.get(&q).copied()
    }

    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &(_, s) in &self.pairs {
            *m.entry(s).or_insert(0) += 1;
        }
        m
    }
}

/// For each Q ∈ 𝒲₃ the nearest S ∈ 𝒲₁ with ℓ(Q) ≤ ℓ(S) ≤ 4ℓ(Q), ties to the lowest index.
pub fn reflect(outer: &WhitneyDecomposition, inner: &WhitneyDecomposition) -> Result<ReflectionMap, WhitneyError> {
    let mut pairs = Vec::new();
    let mut distance_constant: f64 = 0.0;
    for q in outer.small() {
        let cube = &outer.cubes[q];
        let (d, s) = nearest(inner, cube).ok_or(WhitneyError::NoReflection(*cube))?;
        distance_constant = distance_constant.max(d / cube.side());
        pairs.push((q, s));
    }
    let r1_violations = pairs
        .iter()
        .copied()
        .filter(|&(q, s)| {
            let (a, b) = (outer.cubes[q].side(), inner.cubes[s].side());
            !(a <= b && b <= 4.0 * a)
        })
        .collect();
    let lookup: HashMap<usize, usize> = pairs.iter().copied().collect();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &(_, s) in &pairs {
        *counts.entry(s).or_insert(0) += 1;
    }
    Ok(ReflectionMap {
        max_multiplicity: counts.values().copied().max().unwrap_or(0),
        pairs,
        distance_constant,
        r1_violations,
        lookup,
    })
}

/// Nearest cube of `inner` with level in ℓ(Q)−2..=ℓ(Q), visiting index rings outward.
///
/// A cube in ring r around the ancestor cell lies at distance ≥ (r − 1)·side, so the
/// search stops once that bound exceeds the best distance found.
fn nearest(inner: &WhitneyDecomposition, cube: &DyadicCube) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    let reach = inner.domain.radius().ceil() as i64 + 1;
    for level in cube.level - 2..=cube.level {
        let a = cube.ancestor(level);
        let side = 2f64.powi(-level);
        let limit = reach << (level.max(0) + 1);
        for r in 0..=limit {
            if best.is_some_and(|(bd, _)| (r - 1) as f64 * side > bd) {
                break;
            }
            for (x, y) in ring(a.i, a.j, r) {
                if let Some(k) = inner.index_of(&DyadicCube::new(level, x, y)) {
                    let d = cube.distance(&inner.cubes[k]);
                    if best.is_none_or(|(bd, bk)| d < bd || (d == bd && k < bk)) {
                        best = Some((d, k));
                    }
                }
            }
        }
    }
    best
}

fn ring(i: i64, j: i64, r: i64) -> Vec<(i64, i64)> {
    if r == 0 {
        return vec![(i, j)];
    }
    let mut out = Vec::with_capacity(8 * r as usize);
    for t in -r..=r {
        out.push((i + t, j - r));
        out.push((i + t, j + r));
    }
    for t in 1 - r..r {
        out.push((i - r, j + t));
        out.push((i + r, j + t));
    }
    out
}

/// Shortest edge-connected chain in 𝒲₁ from Q₁* to Q₂*.
pub fn chain(
    map: &ReflectionMap,
    outer: &WhitneyDecomposition,
    inner: &WhitneyDecomposition,
    q1: usize,
    q2: usize,
) -> Result<Vec<usize>, WhitneyError> {
    if q1 != q2 && !outer.cubes[q1].touches(&outer.cubes[q2]) {
        return Err(WhitneyError::NotAdjacent(q1, q2));
    }
    let missing = |q: usize| WhitneyError::NoReflection(outer.cubes[q]);
    let a = map.target(q1).ok_or_else(|| missing(q1))?;
    let b = map.target(q2).ok_or_else(|| missing(q2))?;
    bfs(inner, a, b).ok_or(WhitneyError::Disconnected(a, b))
}

fn bfs(dec: &WhitneyDecomposition, a: usize, b: usize) -> Option<Vec<usize>> {
    if a == b {
        return Some(vec![a]);
    }
    let mut prev: HashMap<usize, usize> = HashMap::new();
    prev.insert(a, a);
    let mut queue = VecDeque::from([a]);
    while let Some(k) = queue.pop_front() {
        for o in dec.edge_neighbors(k) {
            if prev.contains_key(&o) {
                continue;
            }
            prev.insert(o, k);
            if o == b {
                let mut path = vec![b];
                let mut cur = b;
                while cur != a {
                    cur = prev[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(o);
        }
    }
    None
}

/// Chain lengths over all touching pairs in 𝒲₃.
#[derive(Clone, Debug, Serialize)]
pub struct ChainStatistics {
    pub pairs: usize,
    pub max_length: usize,
    /// histogram[m] = number of pairs whose chain has m cubes.
    pub histogram: Vec<usize>,
}

pub fn chain_statistics(
    map: &ReflectionMap,
    outer: &WhitneyDecomposition,
    inner: &WhitneyDecomposition,
) -> Result<ChainStatistics, WhitneyError> {
    let mut histogram = Vec::new();
    let mut pairs = 0;
    for q1 in outer.small() {
        for &q2 in &outer.neighbors[q1] {
            if q2 <= q1 || map.target(q2).is_none() {
                continue;
            }
            let c = chain(map, outer, inner, q1, q2)?;
            if histogram.len() <= c.len() {
                histogram.resize(c.len() + 1, 0);
            }
            histogram[c.len()] += 1;
            pairs += 1;
        }
    }
    Ok(ChainStatistics { pairs, max_length: histogram.len().saturating_sub(1), histogram })
}
