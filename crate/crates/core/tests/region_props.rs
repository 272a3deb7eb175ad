use proptest::prelude::*;
use vlab::gen::Gen;
use vlab::Region;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boolean_algebra_pointwise(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let a = g.region(&space, 3);
        let b = g.region(&space, 3);
        let u = a.union(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        let d = a.difference(&b).unwrap();
        let c = a.complement();
        for _ in 0..30 {
            let x = g.point(&space);
            let (ia, ib) = (a.contains(&x), b.contains(&x));
            prop_assert_eq!(u.contains(&x), ia || ib);
            prop_assert_eq!(i.contains(&x), ia && ib);
            prop_assert_eq!(d.contains(&x), ia && !ib);
            prop_assert_eq!(c.contains(&x), !ia);
        }
        prop_assert_eq!(c.complement(), a.clone());
        prop_assert_eq!(u.complement(), c.intersect(&b.complement()).unwrap());
    }

    #[test]
    fn topology_laws(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let a = g.region(&space, 3);
        let int_a = a.interior();
        let cl_a = a.closure();
        prop_assert!(int_a.is_open() && cl_a.is_closed());
        prop_assert!(int_a.is_subset(&a).unwrap() && a.is_subset(&cl_a).unwrap());
        prop_assert_eq!(int_a.interior(), int_a.clone());
        prop_assert_eq!(cl_a.closure(), cl_a.clone());
        prop_assert_eq!(cl_a.clone(), a.complement().interior().complement());
        prop_assert_eq!(a.boundary(), cl_a.difference(&int_a).unwrap());
        let r = a.regularization();
        prop_assert!(r.is_regular_open());
        prop_assert_eq!(r.regularization(), r.clone());
        prop_assert_eq!(a.is_clopen(), a.is_open() && a.is_closed());
        for ci in 0..space.len() {
            prop_assert!(Region::components(&space, &[ci]).is_clopen());
        }
    }

    #[test]
    fn regular_open_join(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let a = g.regular_open_region(&space, 3);
        let b = g.regular_open_region(&space, 3);
        let j = a.ro_join(&b).unwrap();
        prop_assert!(j.is_regular_open());
        prop_assert!(a.is_subset(&j).unwrap() && b.is_subset(&j).unwrap());
        let m = a.intersect(&b).unwrap();
        prop_assert!(m.is_regular_open());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let a = g.region(&space, 4);
        prop_assert_eq!(Region::from_json(&space, &a.to_json()).unwrap(), a.clone());
        let text = a.to_string();
        if space.len() == 1 {
            prop_assert_eq!(Region::parse(&space, &text).unwrap(), a);
        }
    }
}
