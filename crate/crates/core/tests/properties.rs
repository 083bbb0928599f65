use std::collections::BTreeSet;

use okounkov_core::linalg::{int, ratio};
use okounkov_core::okounkov::enumerate_semigroup;
use okounkov_core::poly::CurveParam;
use okounkov_core::*;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(prop::collection::vec(small_rational(), cols), rows)
        .prop_map(|r| QMatrix::from_rows(r).unwrap())
}

fn points(dim: usize, max: usize) -> impl Strategy<Value = Vec<QVector>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 1..=max)
        .prop_map(|ps| ps.iter().map(|p| QVector::from_ints(p).unwrap()).collect())
}

fn ternary_form(degree: u32) -> impl Strategy<Value = MultiPoly> {
    let monos: Vec<Vec<u32>> =
        (0..=degree).flat_map(|a| (0..=degree - a).map(move |b| vec![a, b, degree - a - b])).collect();
    prop::collection::vec(-3i64..=3, monos.len())
        .prop_map(move |cs| MultiPoly::from_terms(3, monos.iter().cloned().zip(cs.into_iter().map(int))))
}

/// Vertices by brute force: a point is a vertex iff it is not in the hull of
/// the other distinct points.
fn redundancy_vertices(pts: &[QVector]) -> BTreeSet<QVector> {
    let distinct: Vec<QVector> = pts.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if distinct.len() == 1 {
        return distinct.into_iter().collect();
    }
    distinct
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<QVector> =
                distinct.iter().enumerate().filter(|(j, _)| j != i).map(|(_, q)| q.clone()).collect();
            !in_convex_hull(p, &others).unwrap().is_inside()
        })
        .map(|(_, p)| p.clone())
        .collect()
}

proptest! {
    #[test]
    fn gauss_solve_satisfies_consistent_systems(a in matrix(3, 4), x in prop::collection::vec(small_rational(), 4)) {
        let b = QVector::new(a.mul_vec(&x).unwrap()).unwrap();
        let sol = gauss_solve(&a, &b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(sol.coords()).unwrap(), b.into_coords());
    }

    #[test]
    fn rank_is_transpose_invariant(a in matrix(3, 5)) {
        prop_assert_eq!(rank(&a), rank(&a.transpose()));
    }

    #[test]
    fn hull_certificates_verify(gens in points(3, 6), q in prop::collection::vec(small_rational(), 3)) {
        let p = QVector::new(q).unwrap();
        let res = in_convex_hull(&p, &gens).unwrap();
        prop_assert!(res.verify(&p, &gens));
    }

    #[test]
    fn generators_are_inside_their_hull(gens in points(2, 6), pick in 0usize..6) {
        let p = gens[pick % gens.len()].clone();
        prop_assert!(in_convex_hull(&p, &gens).unwrap().is_inside());
    }

    #[test]
    fn hull_matches_redundancy_oracle(pts in points(3, 8)) {
        let hull = convex_hull(&pts).unwrap();
        let got: BTreeSet<QVector> = hull.vertices().iter().cloned().collect();
        prop_assert_eq!(got, redundancy_vertices(&pts));
    }

    #[test]
    fn hull_is_idempotent(pts in points(3, 8)) {
        let once = convex_hull(&pts).unwrap();
        let twice = convex_hull(once.vertices()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn hull_is_monotone(pts in points(2, 6), extra in points(2, 3)) {
        let small = convex_hull(&pts).unwrap();
        let all: Vec<QVector> = pts.iter().chain(&extra).cloned().collect();
        let big = convex_hull(&all).unwrap();
        prop_assert!(contains(&big, &small).unwrap());
    }

    #[test]
    fn volume_scales_by_power_of_dimension(pts in points(3, 7), c in 1i64..=4, q in 1i64..=3) {
        let p = convex_hull(&pts).unwrap();
        let c = ratio(c, q);
        let scaled = scale(&p, &c).unwrap();
        let factor = &c * &c * &c;
        prop_assert_eq!(volume(&scaled), volume(&p) * factor);
    }

    #[test]
    fn exact_division_inverts_multiplication(f in ternary_form(2), g in ternary_form(1)) {
        prop_assume!(!g.is_zero());
        let fg = multiply(&f, &g);
        prop_assert_eq!(exact_divide(&fg, &g).unwrap(), Some(f));
    }

    #[test]
    fn max_power_strips_exactly(h in ternary_form(2), e in 0u32..=3) {
        prop_assume!(!h.is_zero());
        let xi = MultiPoly::parse("z0 z2 - z1^2", 3).unwrap();
        let f = multiply(&h, &xi.pow(e));
        let (k, rest) = max_power_dividing(&f, &xi).unwrap();
        prop_assert!(k >= e);
        prop_assert_eq!(multiply(&rest, &xi.pow(k)), f);
        prop_assert_eq!(exact_divide(&rest, &xi).unwrap(), None);
    }

    #[test]
    fn pullback_is_a_ring_morphism(f in ternary_form(2), g in ternary_form(2)) {
        let c = CurveParam::parse(&["u^2", "u t", "t^2"]).unwrap();
        let pf = pullback(&f, &c).unwrap();
        let pg = pullback(&g, &c).unwrap();
        prop_assert_eq!(pullback(&multiply(&f, &g), &c).unwrap(), multiply(&pf, &pg));
        prop_assert_eq!(pullback(&f.add(&g), &c).unwrap(), pf.add(&pg));
    }

    #[test]
    fn base_point_order_is_additive(f in ternary_form(2), g in ternary_form(1)) {
        let c = CurveParam::parse(&["u^2", "u t", "t^2"]).unwrap();
        let pf = pullback(&f, &c).unwrap();
        let pg = pullback(&g, &c).unwrap();
        prop_assume!(!pf.is_zero() && !pg.is_zero());
        let both = order_at_base_point(&multiply(&pf, &pg)).unwrap();
        prop_assert_eq!(both, order_at_base_point(&pf).unwrap() + order_at_base_point(&pg).unwrap());
    }

    #[test]
    fn basis_size_is_hilbert_dim(n in 1usize..=3, d in 1u32..=3, k in 1u32..=3) {
        let m = Model::projective(n, d).unwrap();
        prop_assert_eq!(basis_of_level(&m, k).unwrap().len() as u64, hilbert_dim(&m, k).unwrap());
        let line = Model::projective(n, 1).unwrap();
        prop_assert_eq!(hilbert_dim(&m, k).unwrap(), hilbert_dim(&line, d * k).unwrap());
    }
}

#[test]
fn semigroup_levels_are_closed_under_addition() {
    let cases = vec![
        (Model::projective(2, 1).unwrap(), FlagSpec::coordinate(vec![1, 2, 0])),
        (Model::projective(2, 2).unwrap(), FlagSpec::curve("z0 z2 - z1^2", &["u^2", "u t", "t^2"]).unwrap()),
        (
            Model::toric(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap(),
            FlagSpec::toric_vertex(vec![0, 0], vec![vec![1, 0], vec![0, 1]]),
        ),
    ];
    for (m, f) in cases {
        let sample = enumerate_semigroup(&m, &f, 4).unwrap();
        for k1 in 1..=2u32 {
            for k2 in k1..=4 - k1 {
                for a in &sample.levels[&k1] {
                    for b in &sample.levels[&k2] {
                        let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        assert!(sample.contains(k1 + k2, &sum), "{f}: {a:?} + {b:?}");
                    }
                }
            }
        }
    }
}
