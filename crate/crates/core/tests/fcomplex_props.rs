mod common;

use proptest::prelude::*;
use surgery_hfk::fcomplex::{mapping_cone, ChainMap, Complex, ComplexBuilder, ConeGen, Label};
use surgery_hfk::surgery::{build_cone, ConeSpec};
use surgery_hfk::{builtin, TestDomain};

use common::{coef, dense_homology};

/// A complex with `pairs` acyclic pairs and `singles` cycles, written in a
/// basis scrambled by the listed elementary row operations.
fn scrambled(pairs: usize, singles: usize, ops: &[(usize, usize)]) -> (Complex<usize>, usize) {
    let n = 2 * pairs + singles;
    let mut d = vec![vec![false; n]; n];
    for p in 0..pairs {
        d[2 * p][2 * p + 1] = true;
    }
    let ops: Vec<(usize, usize)> = ops
        .iter()
        .filter(|(a, b)| n > 0 && a % n != b % n)
        .map(|(a, b)| (a % n, b % n))
        .collect();
    // D' = A D A^{-1}, A the product of the row operations.
    for &(i, j) in &ops {
        // left multiply by E: row i += row j
        let row_j = d[j].clone();
        for (a, b) in d[i].iter_mut().zip(&row_j) {
            *a ^= *b;
        }
        // right multiply by E^{-1} = E: column j += column i
        for row in d.iter_mut() {
            let v = row[i];
            row[j] ^= v;
        }
    }
    let mut b = ComplexBuilder::new();
    for g in 0..n {
        b.add_generator(g, Label::new(0, (0, 0)));
    }
    for (s, row) in d.iter().enumerate() {
        for (t, &bit) in row.iter().enumerate() {
            if bit {
                b.add_arrow(s, t);
            }
        }
    }
    (b.build().unwrap(), singles)
}

fn arrows_of<G: Ord + Clone + std::fmt::Debug>(c: &Complex<G>) -> Vec<(G, G)> {
    c.arrows().map(|(a, b)| (a.clone(), b.clone())).collect()
}

proptest! {
    #[test]
    fn homology_of_scrambled_complexes(
        pairs in 0usize..5,
        singles in 0usize..5,
        ops in prop::collection::vec((0usize..20, 0usize..20), 0..30),
    ) {
        let (c, expected) = scrambled(pairs, singles, &ops);
        prop_assert!(c.d_squared_check().is_ok());
        prop_assert_eq!(c.homology_rank().unwrap(), expected);
        prop_assert_eq!(dense_homology(c.generators(), &arrows_of(&c)), expected);
    }

    #[test]
    fn cone_of_zero_adds_and_cone_of_identity_vanishes(
        p1 in 0usize..4, s1 in 0usize..4, ops1 in prop::collection::vec((0usize..20, 0usize..20), 0..20),
        p2 in 0usize..4, s2 in 0usize..4, ops2 in prop::collection::vec((0usize..20, 0usize..20), 0..20),
    ) {
        let (a, ra) = scrambled(p1, s1, &ops1);
        let (b, rb) = scrambled(p2, s2, &ops2);
        let zero = mapping_cone(&a, &b, &ChainMap::new()).unwrap();
        prop_assert!(zero.d_squared_check().is_ok());
        prop_assert_eq!(zero.homology_rank().unwrap(), ra + rb);

        let mut id = ChainMap::new();
        for g in a.generators() {
            id.add(*g, *g);
        }
        let cone = mapping_cone(&a, &a, &id).unwrap();
        prop_assert!(cone.d_squared_check().is_ok());
        prop_assert_eq!(cone.homology_rank().unwrap(), 0);
        prop_assert_eq!(id.induced_rank(&a, &a).unwrap(), ra);
    }

    #[test]
    fn nested_box_restrictions(
        i0 in -3i64..=0, i1 in 0i64..=3, j0 in -3i64..=0, j1 in 0i64..=3,
        a0 in -3i64..=0, a1 in 0i64..=3, b0 in -3i64..=0, b1 in 0i64..=3,
        s in -3i64..4,
    ) {
        let k = builtin("trefoil-rh").unwrap();
        let c = coef(2, 1);
        let outer = TestDomain::Box { i0: -3, i1: 3, j0: -3, j1: 3 };
        let p1 = TestDomain::Box { i0, i1, j0, j1 };
        let p2 = TestDomain::Box { i0: a0, i1: a1, j0: b0, j1: b1 };
        let meet = TestDomain::Box { i0: i0.max(a0), i1: i1.min(a1), j0: j0.max(b0), j1: j1.min(b1) };
        let full = build_cone(&ConeSpec::new(&k, c, s, outer).with_bound(6)).unwrap().complex;
        let once = full.induced_subquotient(|_, l| meet.contains(l.gi)).unwrap();
        let twice = full
            .induced_subquotient(|_, l| p1.contains(l.gi))
            .unwrap()
            .induced_subquotient(|_, l| p2.contains(l.gi))
            .unwrap();
        prop_assert_eq!(once.generators(), twice.generators());
        prop_assert_eq!(arrows_of(&once), arrows_of(&twice));
        // Restricting a bigger cone agrees with building at the smaller domain.
        let direct = build_cone(&ConeSpec::new(&k, c, s, meet).with_bound(6)).unwrap().complex;
        prop_assert_eq!(once.generators(), direct.generators());
        prop_assert_eq!(arrows_of(&once), arrows_of(&direct));
    }
}

#[test]
fn keep_everything_is_identity() {
    let (c, _) = scrambled(2, 1, &[(0, 3), (4, 1), (2, 0)]);
    let s = c.induced_subquotient(|_, _| true).unwrap();
    assert_eq!(s.generators(), c.generators());
    assert_eq!(arrows_of(&s), arrows_of(&c));
}

#[test]
fn three_chain_with_middle_removed() {
    let mut b = ComplexBuilder::new();
    for g in ["x", "y", "z"] {
        b.add_generator(g, Label::new(0, (0, 0)));
    }
    b.add_arrow("x", "y");
    b.add_arrow("y", "z");
    let c = b.build().unwrap();
    assert_eq!(c.d_squared_check().violations, vec![("x", "z")]);
    assert!(c.homology_rank().is_err());
    assert!(c.induced_subquotient(|g, _| *g != "y").is_ok());
    // The full chain itself is not a complex, so neither is keeping it all.
    assert!(c.induced_subquotient(|_, _| true).is_err());
}

#[test]
fn non_convex_keep_set_is_rejected() {
    // w -> x -> z and w -> y -> z, labelled by a square of filtration levels.
    let mut b = ComplexBuilder::new().filtered(true);
    for (g, gi) in [("w", (1, 1)), ("x", (1, 0)), ("y", (0, 1)), ("z", (0, 0))] {
        b.add_generator(g, Label::new(0, gi));
    }
    for (s, t) in [("w", "x"), ("w", "y"), ("x", "z"), ("y", "z")] {
        b.add_arrow(s, t);
    }
    let c = b.build().unwrap();
    assert_eq!(c.homology_rank().unwrap(), 0);
    let keep = TestDomain::Finite([(1, 1), (1, 0), (0, 0)].into_iter().collect());
    assert!(!keep.validate());
    assert!(c.induced_subquotient(|_, l| keep.contains(l.gi)).is_err());
    let convex = TestDomain::Finite([(1, 1), (1, 0)].into_iter().collect());
    assert!(convex.validate());
    assert_eq!(
        c.induced_subquotient(|_, l| convex.contains(l.gi))
            .unwrap()
            .homology_rank()
            .unwrap(),
        0
    );
}

#[test]
fn cone_generators_are_tagged() {
    let (a, _) = scrambled(0, 1, &[]);
    let cone = mapping_cone(&a, &a, &ChainMap::new()).unwrap();
    assert_eq!(cone.generators(), &[ConeGen::Source(0), ConeGen::Target(0)]);
}
