use vlab::finlat::{FinLattice, FinPoset, DEFAULT_DOWNSET_LIMIT};

fn brute_pseudo(l: &FinLattice, p: usize) -> usize {
    let bot = l.bottom();
    let disjoint: Vec<usize> = (0..l.len()).filter(|&q| l.meet(p, q) == bot).collect();
    *disjoint
        .iter()
        .find(|&&q| disjoint.iter().all(|&r| l.leq(r, q)))
        .expect("distributive lattices have pseudo-complements")
}

#[test]
fn downset_lattices_of_small_posets() {
    for n in 0..=4 {
        for p in FinPoset::all_up_to_iso(n) {
            let l = FinLattice::downsets_of(&p, DEFAULT_DOWNSET_LIMIT).unwrap();
            assert!(l.is_distributive());
            for a in 0..l.len() {
                assert_eq!(l.pseudo_complement(a).unwrap(), brute_pseudo(&l, a));
            }
            let rep = l.glivenko_check().unwrap();
            assert!(rep.passed() && rep.recheck().ok());
            let rep = l.ideal_lattice_check().unwrap();
            assert!(rep.passed() && rep.recheck().ok());
        }
    }
}

#[test]
fn poset_counts() {
    let counts: Vec<usize> = (0..=5).map(|n| FinPoset::all_up_to_iso(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
}

#[test]
fn divisor_lattices() {
    for m in 1..=60u64 {
        let l = FinLattice::divisors(m).unwrap();
        assert!(l.is_distributive());
        for a in 0..l.len() {
            let d: u64 = l.label(a).parse().unwrap();
            let star: u64 = l.label(l.pseudo_complement(a).unwrap()).parse().unwrap();
            let expect = (1..=m).filter(|q| m % q == 0 && gcd(*q, d) == 1).max().unwrap();
            assert_eq!(star, expect, "m={m} d={d}");
        }
    }
}

#[test]
fn boolean_skeleton_is_everything() {
    for k in 0..=4 {
        let l = FinLattice::boolean(k).unwrap();
        assert_eq!(l.skeleton().unwrap().len(), 1 << k);
        assert_eq!(l.complemented().unwrap().len(), 1 << k);
    }
    let c = FinLattice::chain(5).unwrap();
    assert_eq!(c.skeleton().unwrap().len(), 2);
}

#[test]
fn nondistributive_witnesses() {
    for l in [FinLattice::n5(), FinLattice::m3()] {
        let (p, q, r) = l.distributivity_witness().unwrap();
        assert_ne!(l.meet(p, l.join(q, r)), l.join(l.meet(p, q), l.meet(p, r)));
        assert!(!l.distributive_report().passed());
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
