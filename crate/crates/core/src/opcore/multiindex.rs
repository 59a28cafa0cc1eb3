use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector α ∈ ℕⁿ. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn factorial(&self) -> u64 {
        self.0.iter().map(|&a| (1..=a as u64).product::<u64>()).product()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` if componentwise nonnegative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Falling factorial Π βᵢ!/(βᵢ−αᵢ)!, i.e. the coefficient of ∂^α x^β.
    pub fn falling_factorial(beta: &Self, alpha: &Self) -> u64 {
        beta.0
            .iter()
            .zip(&alpha.0)
            .map(|(&b, &a)| ((b - a + 1)..=b).map(u64::from).product::<u64>())
            .product()
    }

    /// Π C(αᵢ, γᵢ).
    pub fn binomial(alpha: &Self, gamma: &Self) -> u64 {
        alpha
            .0
            .iter()
            .zip(&gamma.0)
            .map(|(&a, &g)| binom(a as u64, g as u64))
            .product()
    }

    /// ξ^α for any scalar with multiplication.
    pub fn power<T: Clone + std::ops::Mul<Output = T>>(&self, xi: &[T], one: T) -> T {
        let mut acc = one;
        for (x, &a) in xi.iter().zip(&self.0) {
            for _ in 0..a {
                acc = acc * x.clone();
            }
        }
        acc
    }

    pub fn power_f64(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.0).map(|(v, &a)| v.powi(a as i32)).product()
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// All α with |α| = d, in increasing graded-lex order.
pub fn multi_indices_of_order(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fill(&mut out, &mut cur, 0, d);
    out.sort();
    out
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for a in 0..=left {
        cur[pos] = a;
        fill(out, cur, pos + 1, left - a);
    }
    cur[pos] = 0;
}

/// All α with |α| ≤ d, in increasing graded-lex order.
pub fn multi_indices_up_to(n: usize, d: u32) -> Vec<MultiIndex> {
    (0..=d).flat_map(|k| multi_indices_of_order(n, k)).collect()
}
