use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use sumsetlab::bounded_solve::{positive_solution, small_kernel_vector, IntegerMatrix};
use sumsetlab::khovanskii::{alternating_max_sum, khovanskii_poly_general, khovanskii_poly_simplex, khovanskii_thresholds, validate_useless_family};
use sumsetlab::lattice::quotient_group;
use sumsetlab::minimal::{b_minimal_decomposition, b_minimal_elements, minimal_useless_auto, unif_le};
use sumsetlab::polytope::{cone_of, convex_hull, normalized_volume};
use sumsetlab::structure::{base_vertex, interior_margin, verify_a_plus, verify_structure};
use sumsetlab::sumset::{exceptional_set, min_rep_length, sumset};
use sumsetlab::{IntegerLattice, LatticePoint, PointSet};

fn pt(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(vec![x, y])
}

fn planar_set(coord: i64, max_len: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec((0..=coord, 0..=coord), 2..=max_len)
        .prop_map(|v| PointSet::new(2, v.into_iter().map(|(x, y)| pt(x, y)).collect()).unwrap())
        .prop_filter("at least two points", |a| a.len() >= 2)
}

fn line_set() -> impl Strategy<Value = PointSet> {
    prop::collection::btree_set(1i64..=9, 1..=3).prop_map(|s| {
        let mut v: Vec<i64> = s.into_iter().collect();
        v.push(0);
        PointSet::from_ints(&v)
    })
}

/// Set with the origin as a vertex of its hull.
fn based(a: &PointSet) -> PointSet {
    a.translate(&base_vertex(a).unwrap().checked_neg().unwrap()).unwrap()
}

/// `{0, v1, v2}` with a nonzero determinant plus some lattice points of the triangle.
fn planar_simplex() -> impl Strategy<Value = (PointSet, PointSet)> {
    ((-3i64..=3, -3i64..=3), (-3i64..=3, -3i64..=3), prop::collection::vec(any::<prop::sample::Index>(), 0..=2))
        .prop_filter("nondegenerate", |((a, b), (c, d), _)| a * d - b * c != 0)
        .prop_map(|((a, b), (c, d), picks)| {
            let verts = PointSet::new(2, vec![pt(0, 0), pt(a, b), pt(c, d)]).unwrap();
            let inside = convex_hull(&verts).unwrap().lattice_points(&IntegerLattice::full(2), &pt(0, 0)).unwrap();
            let mut pts = verts.points().to_vec();
            pts.extend(picks.iter().map(|i| inside.points()[i.index(inside.len())].clone()));
            (PointSet::new(2, pts).unwrap(), PointSet::new(2, vec![pt(a, b), pt(c, d)]).unwrap())
        })
}

fn minor_gcd(gens: &[(i64, i64)]) -> i64 {
    let mut g = 0i64;
    for (i, p) in gens.iter().enumerate() {
        for q in &gens[i + 1..] {
            g = g.gcd(&(p.0 * q.1 - p.1 * q.0));
        }
    }
    g
}

fn det2(rows: &[Vec<BigInt>]) -> BigInt {
    (&rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0]).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hnf_spans_the_generators(gens in prop::collection::vec((-6i64..=6, -6i64..=6), 1..=4)) {
        let points: Vec<LatticePoint> = gens.iter().map(|&(x, y)| pt(x, y)).collect();
        let lat = IntegerLattice::span(2, &points).unwrap();
        for p in &points {
            prop_assert!(lat.contains(p));
        }
        let g = minor_gcd(&gens);
        if g != 0 {
            prop_assert_eq!(lat.rank(), 2);
            prop_assert_eq!(det2(lat.basis()), BigInt::from(g.abs()));
        } else {
            prop_assert!(lat.rank() <= 1);
        }
    }

    #[test]
    fn quotient_order_is_determinant_ratio(
        gens in prop::collection::vec((-5i64..=5, -5i64..=5), 2..=3),
        m in ((-3i64..=3, -3i64..=3), (-3i64..=3, -3i64..=3)),
    ) {
        let ((a, b), (c, d)) = m;
        let det_m = a * d - b * c;
        prop_assume!(minor_gcd(&gens) != 0 && det_m != 0);
        let sup = IntegerLattice::span(2, &gens.iter().map(|&(x, y)| pt(x, y)).collect::<Vec<_>>()).unwrap();
        let basis = sup.basis_points().unwrap();
        let comb = |s: i64, t: i64| basis[0].checked_scale(s).unwrap().checked_add(&basis[1].checked_scale(t).unwrap()).unwrap();
        let sub = IntegerLattice::span(2, &[comb(a, b), comb(c, d)]).unwrap();
        let q = quotient_group(&sup, &sub).unwrap();
        prop_assert_eq!(q.order(), det_m.unsigned_abs());
        prop_assert_eq!(BigInt::from(q.order()) * det2(sup.basis()), det2(sub.basis()));
    }

    #[test]
    fn projection_is_additive(
        gens in prop::collection::vec((-5i64..=5, -5i64..=5), 2..=3),
        v in (-20i64..=20, -20i64..=20),
        w in (-20i64..=20, -20i64..=20),
    ) {
        prop_assume!(minor_gcd(&gens) != 0);
        let sub = IntegerLattice::span(2, &gens.iter().map(|&(x, y)| pt(x, y)).collect::<Vec<_>>()).unwrap();
        let g = quotient_group(&IntegerLattice::full(2), &sub).unwrap();
        let (v, w) = (pt(v.0, v.1), pt(w.0, w.1));
        let lhs = g.project(&v.checked_add(&w).unwrap()).unwrap();
        let rhs = g.add(&g.project(&v).unwrap(), &g.project(&w).unwrap());
        prop_assert_eq!(lhs, rhs);
        for gen in &gens {
            prop_assert_eq!(g.project(&pt(gen.0, gen.1)).unwrap(), g.zero());
        }
    }

    #[test]
    fn hull_facets(a in planar_set(5, 6)) {
        let hull = convex_hull(&a).unwrap();
        prop_assert!(hull.facet_bound_holds(a.len()));
        let again = convex_hull(&hull.vertices).unwrap();
        prop_assert_eq!(&again.facets, &hull.facets);
        for p in a.iter() {
            prop_assert!(hull.facets.iter().all(|f| f.satisfied_by(p)));
            prop_assert!(hull.equations.iter().all(|e| p.dot(e.normal.coords()) == e.value as i128));
        }
        let shifted = based(&a);
        let cone = cone_of(&shifted).unwrap();
        for p in shifted.iter() {
            prop_assert!(cone.facets.iter().all(|f| p.dot(f.coords()) >= 0));
            prop_assert!(cone.contains(p));
        }
    }

    #[test]
    fn sumsets_nest_when_origin_present(a in planar_set(4, 5)) {
        let a = based(&a);
        let mut prev = sumset(&a, 1).unwrap();
        for n in 2..=4 {
            let next = sumset(&a, n).unwrap();
            prop_assert!(prev.is_subset(&next));
            prev = next;
        }
    }

    #[test]
    fn sumset_inside_structure_rhs(a in planar_set(4, 5)) {
        for n in 1..=4 {
            let v = verify_structure(&a, n).unwrap();
            prop_assert!(v.inclusion, "N = {}: {:?}", n, v.witness);
        }
    }

    #[test]
    fn min_rep_length_is_minimal(a in planar_set(3, 4)) {
        let sets: Vec<PointSet> = (1..=3).map(|n| sumset(&a, n).unwrap()).collect();
        for v in sets[2].iter() {
            let n = min_rep_length(&a, v, 3).unwrap().expect("reachable");
            if n == 0 {
                prop_assert!(v.is_zero());
                continue;
            }
            prop_assert!(sets[n - 1].contains(v));
            for smaller in &sets[..n - 1] {
                prop_assert!(!smaller.contains(v));
            }
        }
    }

    #[test]
    fn exceptional_set_restricts(a in planar_set(4, 4)) {
        let a = based(&a);
        let hull = convex_hull(&a).unwrap();
        let small = hull.scaled(2).unwrap();
        let big = hull.scaled(3).unwrap();
        let e_small = exceptional_set(&a, &small).unwrap();
        let e_big = exceptional_set(&a, &big).unwrap();
        prop_assert_eq!(e_big.filter(|x| small.contains(x)), e_small);
    }

    #[test]
    fn b_minimal_translation_invariance((a, b) in planar_simplex()) {
        let fam = b_minimal_elements(&a, &b, 0).unwrap();
        prop_assert!(fam.complete);
        let k = fam.k_value().unwrap();
        for v in b.iter() {
            let moved = a.reflect_about(v).unwrap();
            let b_moved = b.reflect_about(v).unwrap().union(&PointSet::new(2, vec![v.clone()]).unwrap()).unwrap().filter(|p| !p.is_zero());
            let other = b_minimal_elements(&moved, &b_moved, 0).unwrap();
            prop_assert_eq!(other.k_value().unwrap(), k);
            let mut want: Vec<(LatticePoint, usize)> = fam
                .elements
                .iter()
                .map(|(u, n)| (v.checked_scale(*n as i64).unwrap().checked_sub(u).unwrap(), *n))
                .collect();
            want.sort_by(|x, y| (x.1, &x.0).cmp(&(y.1, &y.0)));
            prop_assert_eq!(&other.elements, &want);
        }
    }

    #[test]
    fn b_minimal_decomposition_matches((a, b) in planar_simplex()) {
        let fam = b_minimal_elements(&a, &b, 0).unwrap();
        for n in 1..=5 {
            prop_assert_eq!(b_minimal_decomposition(&fam, n).unwrap(), sumset(&a, n).unwrap());
        }
    }

    #[test]
    fn simplex_polynomial_properties((a, _) in planar_simplex()) {
        let sp = khovanskii_poly_simplex(&a).unwrap();
        for n in -5..=20 {
            prop_assert!(sp.polynomial.eval_integer(n).is_some(), "not integral at {}", n);
        }
        if sp.invariant_factors.is_empty() && a.lattice().unwrap().full_rank_determinant() == Some(BigInt::from(1)) {
            let vol = BigRational::new(normalized_volume(&a).unwrap(), BigInt::from(2));
            prop_assert_eq!(sp.polynomial.coefficient(2), vol);
        }
    }

    #[test]
    fn interior_margin_below_constant(a in planar_set(3, 4)) {
        let m = interior_margin(&a, 3).unwrap();
        let ka = khovanskii_thresholds(&a).unwrap().get("k_a").unwrap().value.clone().unwrap();
        prop_assert!(m.margin <= BigRational::from_integer(ka));
    }

    #[test]
    fn a_plus_decomposition(a in planar_set(3, 5), bound in 4i128..=12) {
        let check = verify_a_plus(&based(&a), bound).unwrap();
        prop_assert!(check.holds, "{:?}", check.witness);
    }

    #[test]
    fn kernel_vectors_substitute(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 1..=3)) {
        prop_assume!(rows.iter().flatten().any(|&x| x != 0));
        let mat = IntegerMatrix::new(rows).unwrap();
        let x = small_kernel_vector(&mat).unwrap();
        prop_assert!(!x.is_zero());
        prop_assert!(mat.apply(&x.to_big()).iter().all(Zero::is_zero));
    }

    #[test]
    fn positive_solutions_substitute(
        rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 5), 1..=3),
        witness in prop::collection::vec(1i64..=40, 5),
    ) {
        prop_assume!(rows.iter().flatten().any(|&x| x != 0));
        let mat = IntegerMatrix::new(rows).unwrap();
        let w = LatticePoint::new(witness);
        let b: Vec<i64> = mat.apply(&w.to_big()).iter().map(|v| i64::try_from(v).unwrap()).collect();
        let s = positive_solution(&mat, &LatticePoint::new(b.clone()), &w).unwrap();
        prop_assert!(s.solution.coords().iter().all(|&c| c > 0));
        prop_assert_eq!(mat.apply(&s.solution.to_big()), LatticePoint::new(b).to_big());
        prop_assert!(s.within_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn min_max_identity(a in prop::collection::vec(-50i64..=50, 1..=10)) {
        let min = *a.iter().min().unwrap();
        prop_assert_eq!(alternating_max_sum(&a).unwrap(), BigInt::from(-min));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn useless_family_is_a_tight_antichain(a in line_set()) {
        let fam = minimal_useless_auto(&a, 2, 24).unwrap();
        prop_assert!(fam.certified);
        let members = &fam.minimal_useless;
        for (i, x) in members.iter().enumerate() {
            for (j, y) in members.iter().enumerate() {
                prop_assert!(i == j || !unif_le(x, y), "{:?} <= {:?}", x, y);
            }
        }
        let full = khovanskii_poly_general(&fam).unwrap();
        for i in 0..members.len() {
            let mut reduced = fam.clone();
            reduced.minimal_useless.remove(i);
            prop_assert!(!validate_useless_family(&reduced).unwrap());
            let poly = khovanskii_poly_general(&reduced).unwrap();
            let window = (1..=fam.ell() as u64 * (fam.cap_used + 1) + 3).map(BigInt::from);
            prop_assert!(window.clone().any(|n| poly.binomial.eval(&n) != full.binomial.eval(&n)));
        }
    }
}
