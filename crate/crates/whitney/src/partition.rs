//! φ_Q = θ_Q / M(Θ) for Q ∈ 𝒲₃, Θ = Σ_{𝒲₃} θ.
//!
//! θ_Q is a plateau bump equal to 1 on Q and supported in (17/16)Q. M is a smooth maximum of
//! t and 1 that equals t for t ≥ 1 and 1 for t ≤ 1/2. Since Θ ≥ 1 on ⋃𝒲₃ the φ_Q sum to one
//! there, and outside Σφ_Q = Θ/M(Θ) tapers with the bumps.

use std::collections::BTreeMap;

use aop_core::opcore::MultiIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decompose::{Role, WhitneyDecomposition};
use crate::jet::{smooth_step, square_plateau, Jet};

pub const HALO: f64 = 17.0 / 16.0;

/// t + (1 − t) step(2(1 − t)) below 1, t above: ≥ max(t, 1/2) and ≥ t.
pub fn smooth_max_one(t: &Jet) -> Jet {
    if t.value() >= 1.0 {
        return t.clone();
    }
    let one_minus = t.scale(-1.0).offset(1.0);
    t.add(&one_minus.mul(&smooth_step(&one_minus.scale(2.0))))
}

pub struct PartitionOfUnity<'a> {
    dec: &'a WhitneyDecomposition,
}

impl<'a> PartitionOfUnity<'a> {
    pub fn new(dec: &'a WhitneyDecomposition) -> Self {
        Self { dec }
    }

    pub fn decomposition(&self) -> &WhitneyDecomposition {
        self.dec
    }

    fn theta(&self, q: usize, x: &[f64], order: usize) -> Jet {
        let c = &self.dec.cubes[q];
        let h = 0.5 * c.side();
        square_plateau(x, c.center(), h, HALO * h, order)
    }

    /// Small cubes Q with x ∈ (17/16)Q.
    pub fn active(&self, x: &[f64]) -> Vec<usize> {
        self.dec.dilates_containing(HALO, x, |k| self.dec.roles[k] == Role::SmallExterior)
    }

    /// Jets of every nonzero φ_Q at x.
    pub fn phis(&self, x: &[f64], order: usize) -> Vec<(usize, Jet)> {
        self.phis_among(x, order, &self.active(x))
    }

    /// As `phis`, given every cube that could meet x: those containing it and their neighbours.
    ///
    /// Sufficient because (17/16)Q only reaches cubes touching Q.
    pub fn phis_among(&self, x: &[f64], order: usize, cands: &[usize]) -> Vec<(usize, Jet)> {
        let dec = self.dec;
        let thetas: Vec<(usize, Jet)> = cands
            .iter()
            .filter(|&&q| dec.roles[q] == Role::SmallExterior && dec.cubes[q].dilate_contains(HALO, x))
            .map(|&q| (q, self.theta(q, x, order)))
            .filter(|(_, j)| !j.is_zero())
            .collect();
        let mut total = Jet::zero(order);
        for (_, j) in &thetas {
            total.add_assign(j);
        }
        if thetas.is_empty() {
            return Vec::new();
        }
        let f = smooth_max_one(&total).recip();
        thetas.into_iter().map(|(q, j)| (q, j.mul(&f))).collect()
    }

    pub fn phi(&self, q: usize, x: &[f64], order: usize) -> Jet {
        self.phis(x, order).into_iter().find(|(k, _)| *k == q).map_or_else(|| Jet::zero(order), |(_, j)| j)
    }

    /// Σ_{Q ∈ 𝒲₃} φ_Q(x).
    pub fn total(&self, x: &[f64]) -> f64 {
        self.phis(x, 0).iter().map(|(_, j)| j.value()).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub samples: usize,
    /// max |Σφ_Q − 1| on ⋃𝒲₃.
    pub sum_error: f64,
    pub min_phi: f64,
    pub max_phi: f64,
    /// Samples of 1.25Q outside (17/16)Q where φ_Q ≠ 0.
    pub support_violations: usize,
    pub support_samples: usize,
}

impl PartitionReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.sum_error <= tol && self.min_phi >= 0.0 && self.max_phi <= 1.0 + tol && self.support_violations == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeBound {
    pub level: i32,
    /// C_l = max |∇^l φ_Q| ℓ(Q)^l over the samples, l = 0..=order.
    pub constants: Vec<f64>,
    pub samples: usize,
}

/// Frobenius norm of ∇^l counting every ordered tuple of directions.
pub fn tensor_norm(j: &Jet, l: usize) -> f64 {
    let fact = |k: usize| (1..=k).map(|t| t as f64).product::<f64>();
    (0..=l)
        .map(|b| {
            let d = j.derivative(&MultiIndex::new(vec![(l - b) as u32, b as u32]));
            fact(l) / (fact(l - b) * fact(b)) * d * d
        })
        .sum::<f64>()
        .sqrt()
}

impl PartitionOfUnity<'_> {
    /// P1 on `per_cube` random points of every Q ∈ 𝒲₃ and P2 on as many points of 1.25Q.
    pub fn check(&self, per_cube: usize, seed: u64) -> PartitionReport {
        let dec = self.dec;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut sum_error, mut min_phi, mut max_phi) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
        let (mut samples, mut support_samples, mut support_violations) = (0, 0, 0);
        for q in dec.small() {
            let c = dec.cubes[q];
            let (ctr, s) = (c.center(), c.side());
            for _ in 0..per_cube {
                let x = [ctr[0] + s * rng.gen_range(-0.5..=0.5), ctr[1] + s * rng.gen_range(-0.5..=0.5)];
                let phis = self.phis(&x, 0);
                let total: f64 = phis.iter().map(|(_, j)| j.value()).sum();
                sum_error = sum_error.max((total - 1.0).abs());
                for (_, j) in &phis {
                    min_phi = min_phi.min(j.value());
                    max_phi = max_phi.max(j.value());
                }
                samples += 1;

                let y = [ctr[0] + s * rng.gen_range(-0.625..0.625), ctr[1] + s * rng.gen_range(-0.625..0.625)];
                let v = self.phi(q, &y, 0).value();
                if !c.dilate_contains(HALO, &y) {
                    if v != 0.0 {
                        support_violations += 1;
                    }
                    support_samples += 1;
                }
            }
        }
        PartitionReport { samples, sum_error, min_phi, max_phi, support_violations, support_samples }
    }

    /// P3: `per_class` samples in (17/16)Q for random Q of each level of 𝒲₃.
    pub fn derivative_bounds(&self, order: usize, per_class: usize, seed: u64) -> Vec<DerivativeBound> {
        let dec = self.dec;
        let mut by_level: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for q in dec.small() {
            by_level.entry(dec.cubes[q].level).or_default().push(q);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        by_level
            .into_iter()
            .map(|(level, qs)| {
                let mut constants = vec![0.0f64; order + 1];
                for _ in 0..per_class {
                    let q = qs[rng.gen_range(0..qs.len())];
                    let c = dec.cubes[q];
                    let (ctr, s) = (c.center(), c.side());
                    let h = 0.5 * HALO * s;
                    let x = [ctr[0] + rng.gen_range(-h..h), ctr[1] + rng.gen_range(-h..h)];
                    let j = self.phi(q, &x, order);
                    for (l, cl) in constants.iter_mut().enumerate() {
                        *cl = cl.max(tensor_norm(&j, l) * s.powi(l as i32));
                    }
                }
                DerivativeBound { level, constants, samples: per_class }
            })
            .collect()
    }
}
