use h2tiles_core::arith::{divisors, sigma};
use h2tiles_core::counting::{
    a_height_primitive, a_primitive, a_total, b_primitive, component_count,
    moebius_route_weighted, ComponentKind,
};
use h2tiles_core::surfaces::{
    classify_type, enumerate_all, is_height_primitive, is_primitive, period_lattice,
    reduce_primitive, weierstrass, LatticeHNF,
};
use h2tiles_core::{Rational, Surface, SurfaceType};

fn count(n: u64, pred: impl Fn(&Surface) -> bool) -> u64 {
    enumerate_all(n).unwrap().iter().filter(|s| pred(s)).count() as u64
}

fn ty(s: &Surface) -> SurfaceType {
    classify_type(s).unwrap()
}

#[test]
fn type_counts_match_closed_forms() {
    for n in (3..=21).step_by(2) {
        let all = enumerate_all(n).unwrap();
        let (mut pa, mut pb, mut ta, mut hpa) = (0, 0, 0, 0);
        for s in &all {
            let t = ty(s);
            let lam = period_lattice(s);
            match (lam == LatticeHNF::UNIT, t) {
                (true, SurfaceType::A) => pa += 1,
                (true, SurfaceType::B) => pb += 1,
                _ => {}
            }
            if t == SurfaceType::A {
                ta += 1;
                if lam.h == 1 {
                    hpa += 1;
                }
            }
        }
        assert_eq!(pa, a_primitive(n).unwrap(), "n={n}");
        assert_eq!(pb, b_primitive(n).unwrap(), "n={n}");
        assert_eq!(Rational::from_integer(ta), a_total(n), "n={n}");
        assert_eq!(hpa, a_height_primitive(n).unwrap(), "n={n}");
    }
}

#[test]
fn components_match_brute_force() {
    use ComponentKind::*;
    for n in (3..=21).step_by(2) {
        let prim: Vec<Surface> = enumerate_all(n).unwrap().into_iter().filter(is_primitive).collect();
        let two = |s: &Surface| match s {
            Surface::TwoCyl(c) => Some(*c),
            _ => None,
        };
        let one_a = prim.iter().filter(|s| s.cylinders() == 1 && ty(s) == SurfaceType::A).count();
        let two_total = prim.iter().filter_map(two).count();
        let odd_a = prim
            .iter()
            .filter(|s| two(s).is_some_and(|c| c.h[0] % 2 == 1 && c.h[1] % 2 == 1) && ty(s) == SurfaceType::A)
            .count();
        let mixed_a = prim
            .iter()
            .filter(|s| {
                two(s).is_some_and(|c| (c.h[0] % 2 == 0 || c.h[1] % 2 == 0) && (c.u[0] % 2 == 0 || c.u[1] % 2 == 0))
                    && ty(s) == SurfaceType::A
            })
            .count();
        let even_height = prim
            .iter()
            .filter(|s| two(s).is_some_and(|c| c.h[0] % 2 == 0 || c.h[1] % 2 == 0))
            .count();
        assert_eq!(component_count(OneCylA, n).unwrap() as usize, one_a, "n={n}");
        assert_eq!(component_count(TwoCylTotal, n).unwrap() as usize, two_total, "n={n}");
        assert_eq!(component_count(TwoCylOddHeightsA, n).unwrap() as usize, odd_a, "n={n}");
        assert_eq!(component_count(TwoCylMixedA, n).unwrap() as usize, mixed_a, "n={n}");
        assert_eq!(component_count(TwoCylEvenHeight, n).unwrap() as usize, even_height, "n={n}");
    }
}

#[test]
fn lattice_cardinality_identities() {
    for n in (3..=21).step_by(2) {
        let total = count(n, |_| true);
        let mut by_primitive = 0;
        let mut by_height_primitive = 0;
        for d in divisors(n) {
            let m = n / d;
            if m < 3 {
                continue;
            }
            by_primitive += sigma(1, d as i64) as u64 * count(m, is_primitive);
            by_height_primitive += count(m, is_height_primitive);
        }
        assert_eq!(total, by_primitive, "n={n}");
        assert_eq!(total, by_height_primitive, "n={n}");
    }
}

#[test]
fn reduction_groups_by_area() {
    let all = enumerate_all(9).unwrap();
    let mut per_area = std::collections::BTreeMap::new();
    for s in &all {
        let (r, _) = reduce_primitive(s);
        *per_area.entry(r.area()).or_insert(0u64) += 1;
    }
    for (&m, &c) in &per_area {
        assert_eq!(c, sigma(1, (9 / m) as i64) as u64 * count(m, is_primitive), "area {m}");
    }
}

#[test]
fn weighted_moebius_route_matches_brute_force() {
    for n in (3..=21).step_by(2) {
        assert_eq!(moebius_route_weighted(n).unwrap(), count(n, |s| is_primitive(s) && ty(s) == SurfaceType::A) as i128);
    }
}

#[test]
fn parity_rules_on_height_primitive() {
    for n in (3..=15).step_by(2) {
        for s in enumerate_all(n).unwrap().iter().filter(|s| is_height_primitive(s)) {
            match s {
                Surface::OneCyl(c) => {
                    let even = c.l.iter().filter(|&&x| x % 2 == 0).count();
                    let expected = if even == 0 { SurfaceType::A } else { SurfaceType::B };
                    assert_eq!(ty(s), expected, "{s:?}");
                }
                Surface::TwoCyl(c) => {
                    if c.h[0] % 2 == 1 && c.h[1] % 2 == 1 {
                        assert_eq!(ty(s), SurfaceType::A, "{s:?}");
                    }
                    if c.u[0] % 2 == 1 && c.u[1] % 2 == 1 {
                        assert_eq!(ty(s), SurfaceType::B, "{s:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn mixed_parity_twists_split_evenly() {
    for n in (3..=15).step_by(2) {
        let mut cells = std::collections::BTreeMap::new();
        for s in enumerate_all(n).unwrap().iter().filter(|s| is_height_primitive(s)) {
            if let Surface::TwoCyl(c) = s {
                let heights_mixed = c.h[0] % 2 == 0 || c.h[1] % 2 == 0;
                let widths_mixed = c.u[0] % 2 == 0 || c.u[1] % 2 == 0;
                if heights_mixed && widths_mixed {
                    let e = cells.entry((c.h, c.u)).or_insert((0u64, 0u64));
                    match ty(s) {
                        SurfaceType::A => e.0 += 1,
                        SurfaceType::B => e.1 += 1,
                    }
                }
            }
        }
        for (cell, (a, b)) in cells {
            assert_eq!(a, b, "n={n} cell {cell:?}");
        }
    }
}

#[test]
fn type_is_preserved_by_reduction() {
    for n in (3..=15).step_by(2) {
        for s in enumerate_all(n).unwrap() {
            let (r, _) = reduce_primitive(&s);
            assert_eq!(ty(&s), ty(&r), "{s:?}");
        }
    }
}

#[test]
fn six_weierstrass_points_everywhere() {
    for n in 3..=13 {
        for s in enumerate_all(n).unwrap() {
            let w = weierstrass(&s).unwrap();
            assert_eq!(w.points().len(), 6, "{s:?}");
            if n % 2 == 1 {
                assert!(matches!(w.integer_count(), 1 | 3), "{s:?}");
            }
        }
    }
}
