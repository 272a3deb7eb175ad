use proptest::prelude::*;
use vlab::gen::Gen;
use vlab::rational::{int, zero};
use vlab::{PLFun, PlOp, Rational};

/// Linear interpolation straight from the breakpoint lists.
fn oracle(f: &PLFun, x: &Rational) -> Rational {
    let space = f.space();
    let ci = space.locate(x).expect("point of the space");
    let pts = f.breakpoints(ci);
    if pts.len() == 1 {
        return pts[0].1.clone();
    }
    for w in pts.windows(2) {
        let ((x0, v0), (x1, v1)) = (&w[0], &w[1]);
        if x0 <= x && x <= x1 {
            return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
        }
    }
    unreachable!("{x} not covered")
}

fn expected(op: PlOp, a: &Rational, b: &Rational, c: &Rational) -> Rational {
    match op {
        PlOp::Add => a + b,
        PlOp::Sub => a - b,
        PlOp::Scale => c * a,
        PlOp::Join => a.clone().max(b.clone()),
        PlOp::Meet => a.clone().min(b.clone()),
        PlOp::Abs => a.clone().max(-a.clone()),
        PlOp::PosPart => a.clone().max(zero()),
        PlOp::NegPart => (-a.clone()).max(zero()),
    }
}

const OPS: [PlOp; 8] = [
    PlOp::Add,
    PlOp::Sub,
    PlOp::Scale,
    PlOp::Join,
    PlOp::Meet,
    PlOp::Abs,
    PlOp::PosPart,
    PlOp::NegPart,
];

fn canonical(f: &PLFun) -> bool {
    (0..f.space().len()).all(|ci| {
        f.breakpoints(ci).windows(3).all(|w| {
            let s0 = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            let s1 = (&w[2].1 - &w[1].1) / (&w[2].0 - &w[1].0);
            s0 != s1
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ops_match_pointwise_oracle(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let f = g.pl(&space, 4, 3);
        let h = g.pl(&space, 4, 3);
        let c = g.value(2);
        for op in OPS {
            let args: Vec<&PLFun> = if op.arity() == 2 { vec![&f, &h] } else { vec![&f] };
            let out = op.apply(&args, Some(&c)).unwrap();
            prop_assert!(canonical(&out));
            for _ in 0..20 {
                let x = g.point(&space);
                prop_assert_eq!(oracle(&out, &x), expected(op, &oracle(&f, &x), &oracle(&h, &x), &c));
            }
        }
    }

    #[test]
    fn lattice_identities(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let f = g.pl(&space, 4, 3);
        let h = g.pl(&space, 4, 3);
        prop_assert_eq!(f.pos_part().sub(&f.neg_part()).unwrap(), f.clone());
        prop_assert_eq!(f.pos_part().add(&f.neg_part()).unwrap(), f.abs());
        prop_assert_eq!(f.join(&h).unwrap().add(&f.meet(&h).unwrap()).unwrap(), f.add(&h).unwrap());
        prop_assert!(f.pos_part().disjoint(&f.neg_part()).unwrap());
        prop_assert!(f.meet(&h).unwrap().le(&f).unwrap());
        prop_assert!(f.le(&f.join(&h).unwrap()).unwrap());
        prop_assert_eq!(f.scale(&int(0)), PLFun::zero(&space));
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let f = g.pl(&space, 5, 4);
        let text = serde_json::to_string(&f).unwrap();
        let back: PLFun = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn support_and_levels(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let f = g.pl(&space, 4, 3);
        let supp = f.support();
        prop_assert!(supp.is_open());
        prop_assert_eq!(supp.union(&f.kernel()).unwrap(), vlab::Region::full(&space));
        for _ in 0..20 {
            let x = g.point(&space);
            prop_assert_eq!(supp.contains(&x), oracle(&f, &x) != zero());
        }
    }

    #[test]
    fn riesz_split_bounds(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let g1 = g.nonneg_pl(&space, 3, 3);
        let g2 = g.nonneg_pl(&space, 3, 3);
        let f = g.nonneg_pl(&space, 3, 3).meet(&g1.add(&g2).unwrap()).unwrap();
        let (a, b) = f.riesz_split(&g1, &g2).unwrap();
        prop_assert_eq!(a.add(&b).unwrap(), f);
        prop_assert!(a.is_nonneg() && b.is_nonneg());
        prop_assert!(a.le(&g1).unwrap() && b.le(&g2).unwrap());
    }

    #[test]
    fn ratio_bound_is_least(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let e = g.nonneg_pl(&space, 3, 3);
        let f = g.nonneg_pl(&space, 3, 3).meet(&e.scale(&int(3))).unwrap();
        let r = f.ratio_bound(&e).unwrap().expect("f ≤ 3e");
        prop_assert!(f.le(&e.scale(&r)).unwrap());
        prop_assert!(r <= int(3));
        if r > zero() {
            let smaller = &r * Rational::new(99.into(), 100.into());
            prop_assert!(!f.le(&e.scale(&smaller)).unwrap());
        }
    }
}
