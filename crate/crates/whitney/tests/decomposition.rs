use aop_whitney::reflect::chain_statistics;
use aop_whitney::{chain, decompose, reflect, Contact, Domain, DyadicCube, Role, WhitneyConfig, WhitneyError};
use proptest::prelude::*;

fn disc(cap: i32) -> aop_whitney::WhitneyDecomposition {
    decompose(Domain::Disc { radius: 1.0 }, &WhitneyConfig::new(cap)).unwrap()
}

fn exterior(cap: i32) -> aop_whitney::WhitneyDecomposition {
    decompose(Domain::Exterior { radius: 1.0, half_width: 4.0 }, &WhitneyConfig::new(cap)).unwrap()
}

/// min over a fine grid of the closed square of | |x| − 1 |.
fn sampled_boundary_distance(q: &DyadicCube) -> f64 {
    let (lo, s) = (q.lo(), q.side());
    let m = 40;
    let mut best = f64::INFINITY;
    for a in 0..=m {
        for b in 0..=m {
            let x = [lo[0] + s * a as f64 / m as f64, lo[1] + s * b as f64 / m as f64];
            best = best.min((x[0].hypot(x[1]) - 1.0).abs());
        }
    }
    best
}

#[test]
fn disc_satisfies_whitney_properties_at_cap_8() {
    let d = disc(8);
    let v = d.verify();
    assert!(v.is_empty(), "{v:?}");
    assert!(d.roles.iter().all(|r| *r == Role::Interior));
    assert!(d.truncated > 0);
}

#[test]
fn exterior_satisfies_whitney_properties_at_cap_8() {
    let d = exterior(8);
    let v = d.verify();
    assert!(v.is_empty(), "{v:?}");
    let small = d.small();
    assert!(!small.is_empty());
    // εδ/(16n) with ε = δ = 1/2, n = 2
    for &k in &small {
        assert!(d.cubes[k].side() <= 0.25 / 32.0);
    }
    for (k, q) in d.cubes.iter().enumerate() {
        assert_eq!(d.roles[k] == Role::SmallExterior, q.side() <= 1.0 / 128.0);
    }
}

#[test]
fn boundary_distance_agrees_with_sampling() {
    for d in [disc(7), exterior(7)] {
        for q in d.cubes.iter().step_by(37) {
            let exact = d.domain.boundary_distance(q);
            let sampled = sampled_boundary_distance(q);
            // the grid overestimates by at most half a grid diagonal
            assert!(exact <= sampled + 1e-12 && sampled <= exact + q.side() / 40.0, "{q:?}: {exact} vs {sampled}");
            let l = q.side();
            assert!(l <= sampled + 1e-12 && sampled <= 4.0 * 2f64.sqrt() * l + l / 40.0);
        }
    }
}

#[test]
fn random_points_lie_in_at_most_one_open_cube() {
    let d = exterior(7);
    let mut hits = vec![0usize; 500];
    for (p, h) in hits.iter_mut().enumerate() {
        let t = p as f64 * 0.7548776662;
        let x = [4.0 * (2.0 * (t.fract()) - 1.0), 4.0 * (2.0 * ((p as f64 * 0.5698402910).fract()) - 1.0)];
        for q in &d.cubes {
            let (lo, hi) = (q.lo(), q.hi());
            if (0..2).all(|a| lo[a] < x[a] && x[a] < hi[a]) {
                *h += 1;
            }
        }
    }
    assert!(hits.iter().all(|&h| h <= 1));
}

#[test]
fn covered_area_accounts_for_the_box() {
    let d = exterior(8);
    let area: f64 = d.cubes.iter().map(|q| q.side() * q.side()).sum();
    let exterior_area = 64.0 - std::f64::consts::PI;
    // only the band of truncated cubes next to the circle is missing
    let band = d.truncated as f64 * 2f64.powi(-16);
    assert!(area <= exterior_area);
    assert!(exterior_area - area <= band + 1e-12, "{area} {exterior_area} {band}");
}

#[test]
fn coarse_caps_are_rejected() {
    let err = decompose(Domain::Disc { radius: 1.0 }, &WhitneyConfig::new(2)).unwrap_err();
    assert!(matches!(err, WhitneyError::CapTooSmall { cap: 2, needed: 7, .. }));
    assert!(matches!(
        decompose(Domain::Disc { radius: 1.0 }, &WhitneyConfig::new(13)),
        Err(WhitneyError::CapTooLarge(13))
    ));
    assert!(matches!(
        decompose(Domain::Exterior { radius: 1.0, half_width: 2.0 }, &WhitneyConfig::new(8)),
        Err(WhitneyError::BoxTooSmall { .. })
    ));
}

#[test]
fn reflection_is_total_and_satisfies_r1_r2() {
    let (outer, inner) = (exterior(8), disc(8));
    let map = reflect(&outer, &inner).unwrap();
    assert_eq!(map.pairs.len(), outer.small().len());
    assert!(map.r1_violations.is_empty());
    for &(q, s) in &map.pairs {
        let (a, b) = (outer.cubes[q].side(), inner.cubes[s].side());
        assert!(a <= b && b <= 4.0 * a);
        assert!(outer.cubes[q].distance(&inner.cubes[s]) <= map.distance_constant * a + 1e-15);
    }
    assert!(map.distance_constant <= 8.0, "C = {}", map.distance_constant);
    assert!(map.max_multiplicity <= 16, "multiplicity {}", map.max_multiplicity);
    assert_eq!(map.multiplicities().values().copied().max(), Some(map.max_multiplicity));
}

#[test]
fn reflection_matches_brute_force_search() {
    let (outer, inner) = (exterior(7), disc(7));
    let map = reflect(&outer, &inner).unwrap();
    for &(q, s) in map.pairs.iter().step_by(23) {
        let cube = outer.cubes[q];
        let best = inner
            .cubes
            .iter()
            .enumerate()
            .filter(|(_, c)| cube.side() <= c.side() && c.side() <= 4.0 * cube.side())
            .map(|(k, c)| (cube.distance(c), k))
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        assert_eq!(best.1, s);
    }
}

#[test]
fn cube_on_the_axis_reflects_across_the_circle() {
    let (outer, inner) = (exterior(8), disc(8));
    let map = reflect(&outer, &inner).unwrap();
    // smallest exterior cube meeting the positive x-axis
    let q = outer
        .small()
        .into_iter()
        .filter(|&k| outer.cubes[k].lo()[1] == 0.0 && outer.cubes[k].lo()[0] > 0.0)
        .min_by(|&a, &b| outer.cubes[a].lo()[0].total_cmp(&outer.cubes[b].lo()[0]))
        .unwrap();
    let s = map.target(q).unwrap();
    let (c, l) = (inner.cubes[s].center(), outer.cubes[q].side());
    assert!(c[0] < 1.0 && c[0] > 0.9 && c[1].abs() < 8.0 * l);
    assert!(outer.cubes[q].distance(&inner.cubes[s]) <= 8.0 * l);
}

#[test]
fn chains_connect_reflected_neighbours() {
    let (outer, inner) = (exterior(8), disc(8));
    let map = reflect(&outer, &inner).unwrap();
    let small = outer.small();
    let q = small[small.len() / 3];
    assert_eq!(chain(&map, &outer, &inner, q, q).unwrap(), vec![map.target(q).unwrap()]);
    let mut checked = 0;
    for &q1 in &small {
        for &q2 in &outer.neighbors[q1] {
            if outer.roles[q2] != Role::SmallExterior {
                continue;
            }
            let c = chain(&map, &outer, &inner, q1, q2).unwrap();
            assert_eq!(c.first(), map.target(q1).as_ref());
            assert_eq!(c.last(), map.target(q2).as_ref());
            for w in c.windows(2) {
                assert_eq!(inner.cubes[w[0]].contact(&inner.cubes[w[1]]), Contact::Edge);
            }
            let (s1, s2) = (inner.cubes[c[0]], inner.cubes[*c.last().unwrap()]);
            if outer.cubes[q1].side() == outer.cubes[q2].side() && s1.touches(&s2) {
                assert!(c.len() <= 3);
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
    let far = small.iter().copied().find(|&k| !outer.cubes[k].touches(&outer.cubes[q])).unwrap();
    assert!(matches!(chain(&map, &outer, &inner, q, far), Err(WhitneyError::NotAdjacent(..))));
}

#[test]
fn chain_lengths_are_bounded_at_cap_8() {
    let (outer, inner) = (exterior(8), disc(8));
    let map = reflect(&outer, &inner).unwrap();
    let stats = chain_statistics(&map, &outer, &inner).unwrap();
    assert_eq!(stats.histogram.iter().sum::<usize>(), stats.pairs);
    assert!(stats.max_length >= 1 && stats.max_length <= 16, "{stats:?}");
}

#[test]
fn dump_lists_every_cube_with_its_reflection() {
    let (outer, inner) = (exterior(7), disc(7));
    let map = reflect(&outer, &inner).unwrap();
    let records = outer.records(|k| map.target(k).map(|s| inner.cubes[s]));
    let json = serde_json::to_value(&records).unwrap();
    let list = json.as_array().unwrap();
    assert_eq!(list.len(), outer.len());
    let first_small = list.iter().find(|r| r["role"] == "small_exterior").unwrap();
    assert!(first_small["reflected_to"]["level"].is_i64());
    for key in ["level", "i", "j", "role", "reflected_to"] {
        assert!(list[0].get(key).is_some(), "{key}");
    }
    assert!(list.iter().filter(|r| r["role"] == "exterior").all(|r| r["reflected_to"].is_null()));
}

proptest! {
    #[test]
    fn contact_is_symmetric(l1 in 0i32..6, l2 in 0i32..6, i1 in -40i64..40, j1 in -40i64..40, i2 in -40i64..40, j2 in -40i64..40) {
        let (a, b) = (DyadicCube::new(l1, i1, j1), DyadicCube::new(l2, i2, j2));
        prop_assert_eq!(a.contact(&b), b.contact(&a));
        prop_assert_eq!(a.touches(&b), a.distance(&b) == 0.0);
        prop_assert!((a.distance(&b) - b.distance(&a)).abs() == 0.0);
    }

    #[test]
    fn ancestors_contain_descendants(level in 1i32..10, i in -500i64..500, j in -500i64..500, up in 1i32..10) {
        let q = DyadicCube::new(level, i, j);
        let a = q.ancestor((level - up).max(0));
        prop_assert_eq!(a.contact(&q), Contact::Overlap);
        prop_assert!(a.contains(&q.center()));
        prop_assert!(q.children().iter().all(|c| c.parent() == q));
    }
}
