//! Buchberger's algorithm over ℚ in graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exactla::matrix::RationalMatrix;
use crate::opcore::multiindex::MultiIndex;
use crate::opcore::poly::Polynomial;
use crate::opcore::scalar::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
struct Mono(Vec<u32>);

impl Mono {
    fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
    fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }
    fn lcm(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }
    fn div(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
    fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    fn coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }
    fn pure_power_var(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.0.len()).filter(|&i| self.0[i] > 0).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            for i in (0..self.0.len()).rev() {
                if self.0[i] != o.0[i] {
                    // smaller exponent in the last differing variable is larger
                    return o.0[i].cmp(&self.0[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

type GPoly = BTreeMap<Mono, Rational>;

fn leading(p: &GPoly) -> Option<(&Mono, &Rational)> {
    p.last_key_value()
}

fn make_monic(p: &mut GPoly) {
    if let Some((_, lc)) = leading(p) {
        let inv = Rational::one() / lc;
        for c in p.values_mut() {
            *c *= &inv;
        }
    }
}

/// p −= c·m·g
fn sub_scaled(p: &mut GPoly, g: &GPoly, c: &Rational, m: &Mono) {
    for (gm, gc) in g {
        let key = gm.mul(m);
        let delta = c * gc;
        match p.get_mut(&key) {
            Some(v) => {
                *v -= delta;
                if v.is_zero() {
                    p.remove(&key);
                }
            }
            None => {
                p.insert(key, -delta);
            }
        }
    }
}

/// Full normal form of `f` modulo monic `basis`.
fn normal_form(f: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut p = f.clone();
    let mut r = GPoly::new();
    while let Some((lm, lc)) = p.last_key_value().map(|(m, c)| (m.clone(), c.clone())) {
        let div = basis.iter().find(|g| leading(g).is_some_and(|(gm, _)| gm.divides(&lm)));
        match div {
            Some(g) => {
                let q = lm.div(leading(g).unwrap().0);
                sub_scaled(&mut p, g, &lc, &q);
            }
            None => {
                p.remove(&lm);
                r.insert(lm, lc);
            }
        }
    }
    r
}

fn s_poly(f: &GPoly, g: &GPoly) -> GPoly {
    let (fm, _) = leading(f).unwrap();
    let (gm, _) = leading(g).unwrap();
    let l = fm.lcm(gm);
    let mut out = GPoly::new();
    sub_scaled(&mut out, f, &-Rational::one(), &l.div(fm));
    sub_scaled(&mut out, g, &Rational::one(), &l.div(gm));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroebnerStatus {
    /// Every variable has a pure power among the leading monomials.
    ZeroDimensional,
    /// A full basis was computed and some variable has no pure power.
    PositiveDimensional,
    /// The S-polynomial budget ran out first.
    CapExceeded,
}

#[derive(Clone, Debug)]
pub struct GroebnerResult {
    pub status: GroebnerStatus,
    pub basis: Vec<Polynomial>,
    pub s_polynomials: usize,
}

#[derive(Clone, Debug)]
pub struct GroebnerOptions {
    pub cap: usize,
    pub stop_at_pure_powers: bool,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        Self { cap: 10_000, stop_at_pure_powers: true }
    }
}

fn to_gpoly(p: &Polynomial) -> GPoly {
    p.terms().map(|(m, c)| (Mono(m.0.clone()), c.clone())).collect()
}

fn from_gpoly(n: usize, g: &GPoly) -> Polynomial {
    Polynomial::from_terms(n, g.iter().map(|(m, c)| (MultiIndex(m.0.clone()), c.clone())))
}

fn all_pure_powers(basis: &[GPoly], n: usize) -> bool {
    let mut seen = vec![false; n];
    for g in basis {
        if let Some(v) = leading(g).and_then(|(m, _)| m.pure_power_var()) {
            seen[v] = true;
        }
        if leading(g).is_some_and(|(m, _)| m.degree() == 0) {
            return true;
        }
    }
    seen.iter().all(|&s| s)
}

/// Reduce generators of one common degree to an echelon basis with distinct leading monomials.
pub fn linear_interreduce(gens: &[Polynomial]) -> Vec<Polynomial> {
    let nz: Vec<&Polynomial> = gens.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nz.first() else { return Vec::new() };
    let n = first.nvars();
    let mut monos: Vec<Mono> = nz.iter().flat_map(|p| p.terms().map(|(m, _)| Mono(m.0.clone()))).collect();
    monos.sort();
    monos.dedup();
    monos.reverse();
    let mat = RationalMatrix::from_fn(nz.len(), monos.len(), |i, j| nz[i].coefficient(&MultiIndex(monos[j].0.clone())));
    let rr = mat.rref();
    (0..rr.rank())
        .map(|i| {
            Polynomial::from_terms(
                n,
                (0..monos.len())
                    .filter(|&j| !rr.matrix.get(i, j).is_zero())
                    .map(|j| (MultiIndex(monos[j].0.clone()), rr.matrix.get(i, j).clone())),
            )
        })
        .collect()
}

pub fn groebner(gens: &[Polynomial], opts: &GroebnerOptions) -> GroebnerResult {
    let n = gens.first().map_or(0, Polynomial::nvars);
    let mut basis: Vec<GPoly> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let mut g = to_gpoly(p);
            make_monic(&mut g);
            g
        })
        .collect();
    let finish = |basis: &[GPoly], status, s| GroebnerResult {
        status,
        basis: basis.iter().map(|g| from_gpoly(n, g)).collect(),
        s_polynomials: s,
    };
    if opts.stop_at_pure_powers && all_pure_powers(&basis, n) {
        return finish(&basis, GroebnerStatus::ZeroDimensional, 0);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done = 0usize;
    while !pairs.is_empty() {
        if done >= opts.cap {
            return finish(&basis, GroebnerStatus::CapExceeded, done);
        }
        let lcm_of = |&(i, j): &(usize, usize)| leading(&basis[i]).unwrap().0.lcm(leading(&basis[j]).unwrap().0);
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                lcm_of(&pairs[a]).degree().cmp(&lcm_of(&pairs[b]).degree()).then(pairs[a].cmp(&pairs[b]))
            })
            .unwrap();
        let (i, j) = pairs.remove(pick);
        let (mi, mj) = (leading(&basis[i]).unwrap().0.clone(), leading(&basis[j]).unwrap().0.clone());
        if mi.coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let pending = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        let chain = (0..basis.len()).any(|k| {
            k != i && k != j && leading(&basis[k]).unwrap().0.divides(&l) && !pending(i, k) && !pending(j, k)
        });
        if chain {
            continue;
        }
        done += 1;
        let mut h = normal_form(&s_poly(&basis[i], &basis[j]), &basis);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        let new = basis.len();
        basis.push(h);
        for k in 0..new {
            pairs.push((k, new));
        }
        if opts.stop_at_pure_powers && all_pure_powers(&basis, n) {
            return finish(&basis, GroebnerStatus::ZeroDimensional, done);
        }
    }
    let status = if all_pure_powers(&basis, n) {
        GroebnerStatus::ZeroDimensional
    } else {
        GroebnerStatus::PositiveDimensional
    };
    finish(&basis, status, done)
}

/// Normal form of `f` modulo a previously computed basis (for tests).
pub fn reduce(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let gb: Vec<GPoly> = basis
        .iter()
        .map(|p| {
            let mut g = to_gpoly(p);
            make_monic(&mut g);
            g
        })
        .collect();
    from_gpoly(f.nvars(), &normal_form(&to_gpoly(f), &gb))
}
