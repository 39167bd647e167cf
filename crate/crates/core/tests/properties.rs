use proptest::prelude::*;
use sharbly::antisym::AntisymChain;
use sharbly::cosharbly::{epsilon, is_flipon, is_flipon_by_rank, OrientedSectionSimplex};
use sharbly::exactq::q;
use sharbly::polytope::{
    is_valid_triangulation, placing_triangulation, supported_flips, apply_flip, PointConfiguration,
    Triangulation,
};
use sharbly::sharbly::{canonicalize_int, ChainTerm, SharblyChain};
use sharbly::voronoi::GroupElement;
use sharbly::IVec;

fn nonzero_vec(n: usize) -> impl Strategy<Value = IVec> {
    prop::collection::vec(-3i64..=3, n).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn vectors(n: usize, m: usize) -> impl Strategy<Value = Vec<IVec>> {
    prop::collection::vec(nonzero_vec(n), m)
}

/// Products of elementary matrices, so always in `SL_n(Z)`.
fn group_element(n: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut g = GroupElement::identity(n);
        for (i, j, a) in ops {
            if i == j {
                continue;
            }
            let mut rows: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
            rows[i][j] = a;
            g = g.mul(&GroupElement::new(rows).unwrap());
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sharbly_boundary_squares_to_zero(vs in vectors(3, 6), c in -4i64..=4) {
        let mut z = SharblyChain::new();
        z.add_vectors(&vs, q(c)).unwrap();
        prop_assert!(z.boundary().unwrap().boundary().unwrap().is_empty());
    }

    #[test]
    fn label_boundary_squares_to_zero(t in prop::collection::btree_set(0usize..9, 4..7)) {
        let c = AntisymChain::from_tuple(t.into_iter().collect(), q(1));
        prop_assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn cone_boundary_formula(t in prop::collection::btree_set(0usize..8, 3..6)) {
        // d(x * c) = c - x * dc
        let c = AntisymChain::from_tuple(t.into_iter().collect(), q(1));
        let x = 100usize;
        let mut rhs = c.clone();
        rhs.sub(&c.boundary().cone(&x));
        prop_assert_eq!(c.cone(&x).boundary(), rhs);
    }

    #[test]
    fn chain_json_round_trip(vs in vectors(2, 3), ws in vectors(2, 3), a in -5i64..=5, b in 1i64..=5) {
        let mut z = SharblyChain::new();
        z.add_vectors(&vs, q(a)).unwrap();
        z.add_vectors(&ws, sharbly::exactq::qf(a, b)).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        let back: SharblyChain = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(&back, &z);
        let terms: Vec<ChainTerm> = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(SharblyChain::from_terms(&terms).unwrap(), z);
    }

    #[test]
    fn transposition_negates(vs in vectors(3, 6), i in 0usize..6, j in 0usize..6) {
        prop_assume!(i != j);
        let mut ws = vs.clone();
        ws.swap(i, j);
        match (canonicalize_int(&vs).unwrap(), canonicalize_int(&ws).unwrap()) {
            (Some((s, b)), Some((t, c))) => {
                prop_assert_eq!(b, c);
                prop_assert_eq!(s, -t);
            }
            (None, None) => {}
            _ => prop_assert!(false, "zero status changed"),
        }
    }

    #[test]
    fn epsilon_is_alternating(vs in vectors(2, 3), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let a = OrientedSectionSimplex::from_vectors(&vs).unwrap();
        let mut ws = vs.clone();
        ws.swap(i, j);
        let b = OrientedSectionSimplex::from_vectors(&ws).unwrap();
        prop_assert_eq!(epsilon(&a.points).unwrap(), -epsilon(&b.points).unwrap());
    }

    #[test]
    fn flipon_is_invariant(vs in vectors(3, 6), g in group_element(3), k in 1i64..=4, i in 0usize..6) {
        let f = is_flipon(&vs).unwrap();
        prop_assert_eq!(f, is_flipon_by_rank(&vs));
        let moved: Vec<IVec> = vs.iter().map(|v| g.apply(v)).collect();
        prop_assert_eq!(is_flipon(&moved).unwrap(), f);
        let mut scaled = vs.clone();
        scaled[i] = scaled[i].iter().map(|x| -k * x).collect();
        prop_assert_eq!(is_flipon(&scaled).unwrap(), f);
    }

    #[test]
    fn action_commutes_with_boundary(vs in vectors(3, 5), g in group_element(3)) {
        let mut z = SharblyChain::new();
        z.add_vectors(&vs, q(1)).unwrap();
        prop_assert_eq!(z.act(&g).boundary().unwrap(), z.boundary().unwrap().act(&g));
    }

    #[test]
    fn flips_keep_triangulations_valid(
        pts in prop::collection::btree_set((-4i64..=4, -4i64..=4), 4..8),
        order in 0usize..8,
    ) {
        let pts: Vec<IVec> = pts.into_iter().map(|(a, b)| vec![a, b]).collect();
        let cfg = PointConfiguration::from_int(&pts).unwrap();
        prop_assume!(cfg.is_full_dimensional());
        let mut labels: Vec<usize> = (0..pts.len()).collect();
        labels.rotate_left(order % pts.len());
        let (t, _) = placing_triangulation(&cfg, &labels).unwrap();
        prop_assert!(is_valid_triangulation(&cfg, &t));
        for f in supported_flips(&cfg, &t).unwrap() {
            let u = apply_flip(&cfg, &t, &f).unwrap();
            prop_assert!(is_valid_triangulation(&cfg, &u));
            prop_assert_eq!(apply_flip(&cfg, &u, &f.reversed()).unwrap(), t.clone());
        }
        let s = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Triangulation>(&s).unwrap(), t);
        let s = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(serde_json::from_str::<PointConfiguration>(&s).unwrap(), cfg);
    }
}

#[test]
fn cycle_and_certificate_round_trip() {
    use sharbly::cert::{check, CertificateFile};
    use sharbly::cycle::{build_zG, verify_boundary_zero, CycleChain};
    let z = build_zG(3).unwrap();
    let back: CycleChain = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
    assert_eq!(back, z);
    let c = CertificateFile::boundary(&verify_boundary_zero(&z).unwrap()).unwrap();
    let back = CertificateFile::from_json(&c.to_json().unwrap()).unwrap();
    assert_eq!(back, c);
    assert!(check(&back).valid());
}
