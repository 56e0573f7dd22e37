use hts_core::affine::{apply_gl2, Mat2, RationalLambda};
use hts_core::cylinder::{cylinder_decomposition, Direction, DEFAULT_MAX_CROSSINGS};
use hts_core::examples::*;
use hts_core::flowlab::*;
use hts_core::normal_form::js_normal_form;
use hts_core::pillowcase::*;
use hts_core::q::{q, qi, Q};
use hts_core::scmap::{cross_ratio, normalize, RealPoint};
use hts_core::shear::{compose, shear_cylinders, verify_twist_identity};
use hts_core::surface::HalfTranslationSurface;
use num_complex::Complex64;
use proptest::prelude::*;

fn rat(lo: i64, hi: i64) -> impl Strategy<Value = Q> {
    (lo..=hi, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn pos() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn below_one() -> impl Strategy<Value = Q> {
    (2i64..=9).prop_flat_map(|d| (1..d).prop_map(move |n| q(n, d)))
}

fn lam() -> impl Strategy<Value = RationalLambda> {
    (rat(-6, 6), pos()).prop_map(|(re, im)| RationalLambda::new(re, im).unwrap())
}

fn matrix() -> impl Strategy<Value = Mat2> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
        .prop_filter("det > 0", |(a, b, c, d)| a * d - b * c > 0)
        .prop_map(|(a, b, c, d)| Mat2::new(qi(a), qi(b), qi(c), qi(d)).unwrap())
}

fn l_params() -> impl Strategy<Value = LPillowParams> {
    (pos(), pos(), below_one()).prop_map(|(h1, h2, qq)| LPillowParams::new(h1, h2, qq).unwrap())
}

fn surfaces() -> impl Strategy<Value = HalfTranslationSurface> {
    prop_oneof![
        l_params().prop_map(|p| make_l_pillowcase(&p).unwrap()),
        (pos(), pos(), pos(), pos(), rat(0, 6)).prop_map(|(a, b, c, h, t)| one_cylinder_tripod(a, b, c, h, t)),
        (pos(), pos()).prop_map(|(w, h)| rectangle_pillowcase(w, h)),
        Just(three_square_l()),
        Just(genus_two_three_cylinders()),
    ]
}

fn same_polygons(a: &HalfTranslationSurface, b: &HalfTranslationSurface) -> bool {
    a.polygons().iter().zip(b.polygons()).all(|(p, r)| p.vertices() == r.vertices())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn gauss_bonnet(s in surfaces(), m in matrix()) {
        for x in [s.clone(), apply_gl2(&s, &m).unwrap()] {
            let st = x.stratum();
            prop_assert_eq!(st.order_sum() as i64, 4 * st.genus as i64 - 4);
        }
    }

    #[test]
    fn linear_action(s in surfaces(), a in matrix(), b in matrix()) {
        let two = apply_gl2(&apply_gl2(&s, &b).unwrap(), &a).unwrap();
        let one = apply_gl2(&s, &a.mul(&b)).unwrap();
        prop_assert!(same_polygons(&two, &one));
        prop_assert_eq!(one.area(), s.area() * a.mul(&b).det());
        prop_assert_eq!(one.stratum(), s.stratum());
    }

    #[test]
    fn area_of_cylinders(s in surfaces()) {
        let d = cylinder_decomposition(&s, Direction::horizontal(), DEFAULT_MAX_CROSSINGS).js().unwrap();
        let total = d.cylinders.iter().fold(qi(0), |acc, c| acc + c.area());
        prop_assert_eq!(total, s.area());
    }

    #[test]
    fn shear_composition(p in l_params(), l1 in lam(), l2 in lam(), m1 in lam(), m2 in lam()) {
        let s = make_l_pillowcase(&p).unwrap();
        let (l, m) = (vec![l1, l2], vec![m1, m2]);
        let two = shear_cylinders(&shear_cylinders(&s, &m).unwrap(), &l).unwrap();
        let one = shear_cylinders(&s, &compose(&l, &m)).unwrap();
        prop_assert_eq!(js_normal_form(&two).unwrap(), js_normal_form(&one).unwrap());
        prop_assert_eq!(two.stratum(), s.stratum());
    }

    #[test]
    fn twist_identity(l in proptest::collection::vec(lam(), 3), j in 0usize..3) {
        prop_assert!(verify_twist_identity(&genus_two_three_cylinders(), j, &l).unwrap());
    }

    #[test]
    fn to_l_round_trip(p in l_params(), a in rat(-6, 6), b in rat(-6, 6), k in 1i64..4) {
        let l = make_l_pillowcase(&p).unwrap();
        let one = Q::from_integer(1.into());
        let pre = shear_cylinders(&l, &[RationalLambda::new(a, one.clone()).unwrap(), RationalLambda::new(b, one).unwrap()]).unwrap();
        let pre = apply_gl2(&pre, &Mat2::new(qi(k), qi(0), qi(0), qi(k)).unwrap()).unwrap();
        let t = shear_to_l(&pre).unwrap();
        prop_assert_eq!(&t.params, &p);
        prop_assert_eq!(apply_to_l(&pre, &t).unwrap(), js_normal_form(&l).unwrap());
    }

    #[test]
    fn cover_degree(p in l_params(), skip in 0usize..5) {
        let l = make_l_pillowcase(&p).unwrap();
        let sing = l.singularities();
        let poles: Vec<usize> = (0..sing.len()).filter(|&i| sing[i].order == -1).collect();
        let branch: Vec<usize> = poles.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
        let c = branched_double_cover(&l, &branch).unwrap();
        prop_assert_eq!(c.area(), l.area() * qi(2));
        prop_assert_eq!(c.genus(), 1);
        prop_assert_eq!(c.stratum().orders, vec![-1, -1, 1, 1]);
    }

    #[test]
    fn flow_is_an_action(a in 0.05f64..0.95, s in -50.0f64..50.0, t in -50.0f64..50.0) {
        let g = DiagonalFixingMap::geometric_mean(vec![a, 1.0 - a]).unwrap();
        prop_assert_eq!(flow(&flow(&g, s), t), flow(&g, s + t));
        let l = DiagonalFixingMap::linear(vec![a, 1.0 - a]).unwrap();
        prop_assert_eq!(flow(&l, t), l);
    }

    #[test]
    fn diagonal_fixed(a in 0.05f64..0.95, re in -10.0f64..10.0, im in 0.01f64..10.0, t in -20.0f64..20.0) {
        let g = flow(&DiagonalFixingMap::geometric_mean(vec![a, 1.0 - a]).unwrap(), t);
        let z = Complex64::new(re, im);
        let v = g.eval(&[z, z]).unwrap();
        prop_assert!((v - z).norm() < 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn schwarz_pick_random(a in 0.05f64..0.95, seed in 0u64..1000) {
        let g = DiagonalFixingMap::geometric_mean(vec![a, 1.0 - a]).unwrap();
        prop_assert!(schwarz_pick_check(&g, 50, seed) <= 1e-12);
    }

    #[test]
    fn cross_ratio_invariance(xs in proptest::collection::vec(-10.0f64..10.0, 5), a in 0.1f64..5.0, b in -5.0f64..5.0) {
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        prop_assume!(xs.windows(2).all(|w| w[1] - w[0] > 1e-3));
        let p: Vec<RealPoint> = xs.iter().map(|&x| RealPoint::Finite(x)).collect();
        let r: Vec<RealPoint> = xs.iter().map(|&x| RealPoint::Finite(a * x + b)).collect();
        let x1 = normalize(p[0], p[1], p[2], p[3]);
        let x2 = normalize(r[0], r[1], r[2], r[3]);
        prop_assert!((x1 - x2).abs() < 1e-10 * (1.0 + x1.abs()));
        let c1 = cross_ratio(p[0], p[1], p[3], p[4]);
        let inv: Vec<RealPoint> = xs.iter().map(|&x| RealPoint::Finite(-1.0 / (x - 20.0))).collect();
        let c2 = cross_ratio(inv[0], inv[1], inv[3], inv[4]);
        prop_assert!((c1 - c2).abs() < 1e-10 * (1.0 + c1.abs()));
    }
}
