use proptest::prelude::*;
use vlab::gen::Gen;
use vlab::ideals::{relative_disjoint_complement, BandStatus, IdealSpec, MemberVerdict, Sublattice, DEFAULT_CUTOFF};
use vlab::report::{Certificate, Report};
use vlab::{PLFun, Region};

fn member(h: &IdealSpec, f: &PLFun) -> MemberVerdict {
    h.member(Sublattice::Full, f, DEFAULT_CUTOFF).unwrap().verdict
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn region_ideal_membership_is_support_inclusion(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let s = g.open_region(&space, 3);
        let h = IdealSpec::region(s.clone());
        let f = g.pl(&space, 4, 3);
        let m = h.member(Sublattice::Full, &f, DEFAULT_CUTOFF).unwrap();
        let inside = f.support().is_subset(&s).unwrap();
        prop_assert_eq!(m.verdict == MemberVerdict::In, inside);
        let ev = m.evidence(&h, Sublattice::Full, &f, DEFAULT_CUTOFF).unwrap();
        let rep = Report::from_certificates("member", serde_json::Value::Null, vec![Certificate::new("m", "m", ev)], serde_json::Value::Null);
        prop_assert!(rep.passed() && rep.recheck().ok());
    }

    #[test]
    fn principal_ideal_is_support_ideal(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let e = g.pl(&space, 3, 3);
        let h = IdealSpec::principal(e.clone()).unwrap();
        let f = g.pl(&space, 3, 3);
        let expect = if f.support().is_subset(&e.support()).unwrap() { MemberVerdict::In } else { MemberVerdict::Out };
        prop_assert_eq!(member(&h, &f), expect);
        prop_assert_eq!(member(&h, &e.abs()), MemberVerdict::In);
    }

    #[test]
    fn sums_and_intersections(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let a = IdealSpec::region(g.open_region(&space, 2));
        let b = IdealSpec::region(g.open_region(&space, 2));
        let f = g.pl(&space, 3, 2);
        let sum = IdealSpec::sum(a.clone(), b.clone());
        let meet = IdealSpec::intersection(a.clone(), b.clone());
        let in_sum = f.support().is_subset(&a.support().union(&b.support()).unwrap()).unwrap();
        prop_assert_eq!(member(&sum, &f) == MemberVerdict::In, in_sum);
        let both = member(&a, &f) == MemberVerdict::In && member(&b, &f) == MemberVerdict::In;
        prop_assert_eq!(member(&meet, &f) == MemberVerdict::In, both);
    }

    #[test]
    fn disjoint_complement_laws(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let h = IdealSpec::region(g.open_region(&space, 3));
        let d1 = h.disjoint_complement();
        let d2 = d1.disjoint_complement();
        let d3 = d2.disjoint_complement();
        prop_assert_eq!(d3.support(), d1.support());
        prop_assert_eq!(h.band_generated().support().interior(), d2.support());
        prop_assert!(h.support().intersect(&d1.support()).unwrap().is_empty());
        prop_assert!(h.support().union(&d1.support()).unwrap().is_dense());
        prop_assert_ne!(d2.band_status(DEFAULT_CUTOFF), BandStatus::NotBand);
    }

    #[test]
    fn relative_complement(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let e = IdealSpec::region(g.open_region(&space, 3));
        let j = IdealSpec::region(g.open_region(&space, 3));
        let lhs = relative_disjoint_complement(&e, &j);
        let rhs = IdealSpec::intersection(e.clone(), j.disjoint_complement());
        prop_assert_eq!(lhs.support(), rhs.support());
    }

    #[test]
    fn projection_bands_split(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let h = IdealSpec::region(g.clopen_region(&space));
        prop_assert_eq!(h.band_status(DEFAULT_CUTOFF), BandStatus::ProjectionBand);
        let f = g.pl(&space, 4, 3);
        let (p, q) = h.band_projection(&f, DEFAULT_CUTOFF).unwrap();
        prop_assert_eq!(p.add(&q).unwrap(), f);
        prop_assert_eq!(member(&h, &p), MemberVerdict::In);
        prop_assert_eq!(member(&h.disjoint_complement(), &q), MemberVerdict::In);
    }

    #[test]
    fn principal_identities(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let space = g.space();
        let e = g.nonneg_pl(&space, 3, 2);
        let f = g.nonneg_pl(&space, 3, 2);
        let rep = vlab::ideals::principal_identities_check(&e, &f, 4, seed).unwrap();
        prop_assert!(rep.passed());
        prop_assert!(rep.recheck().ok());
    }
}

#[test]
fn staged_exhaustion_is_not_a_band() {
    let space = vlab::Space::interval(vlab::rational::int(0), vlab::rational::int(1)).unwrap();
    let u = Region::parse(&space, "(0,1]").unwrap();
    let h = IdealSpec::SequenceGenerated(vlab::seq::IncreasingSeqRule::exhaustion(&u).unwrap());
    assert!(h.is_staged());
    assert_eq!(h.band_status(DEFAULT_CUTOFF), BandStatus::NotBand);
    assert_eq!(h.support(), u);
    let one = PLFun::constant(&space, vlab::rational::int(1));
    assert_ne!(member(&h, &one), MemberVerdict::In);
    assert_eq!(member(&h, &vlab::ideals::tplus(&space).sub(&PLFun::constant(&space, vlab::rational::rat(1, 2))).unwrap().pos_part()), MemberVerdict::In);
}
