//! Urysohn-type constructions, cover splitting and the telescoping
//! approximation along an increasing sequence.
//!
//! Each construction has a matching `*_certificate` function that checks the
//! postconditions of an output independently of how it was produced.

use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ideals::{IdealSpec, MemberVerdict, Sublattice};
use crate::pl::PLFun;
use crate::rational::{int, RatStr, Rational};
use crate::region::{Piece, Region};
use crate::report::{Certificate, Evidence, RegionPred, Report};
use crate::seq::IncreasingSeqRule;

fn require_nonneg(f: &PLFun) -> Result<()> {
    if f.is_nonneg() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated("f must be nonnegative".into()))
    }
}

/// Minimum of `f` over a nonempty region's closure.
fn min_on(f: &PLFun, k: &Region) -> Option<Rational> {
    let cl = k.closure();
    let mut best: Option<Rational> = None;
    let mut see = |v: Rational| {
        best = Some(match best.take() {
            Some(b) => b.min(v),
            None => v,
        })
    };
    for (ci, p) in cl.iter() {
        see(f.eval_in(ci, &p.lo));
        see(f.eval_in(ci, &p.hi));
        for (x, v) in f.breakpoints(ci) {
            if *x > p.lo && *x < p.hi {
                see(v.clone());
            }
        }
    }
    best
}

/// `e` with `0 ≤ e ≤ f`, `e = f` on `k` and support inside `u`.
pub fn coincide_vanish(f: &PLFun, k: &Region, u: &Region) -> Result<PLFun> {
    require_nonneg(f)?;
    if !k.is_closed() {
        return Err(Error::NotClosed(k.to_string()));
    }
    if !u.is_open() {
        return Err(Error::NotOpen(u.to_string()));
    }
    if !k.is_subset(u)? {
        return Err(Error::KNotInsideU);
    }
    if u.is_empty() {
        return Ok(PLFun::zero(f.space()));
    }
    let m = f.sup_norm_on(u)?;
    if m.is_zero() {
        return Ok(PLFun::zero(f.space()));
    }
    let b = PLFun::bump_for(u, Some(k))?;
    f.meet(&b.scale(&m))
}

pub fn coincide_vanish_evidence(f: &PLFun, k: &Region, u: &Region, e: &PLFun) -> Result<Vec<Evidence>> {
    Ok(vec![
        Evidence::le(&PLFun::zero(f.space()), e)?,
        Evidence::le(e, f)?,
        Evidence::support_within(&f.sub(e)?, &k.complement())?,
        Evidence::support_within(e, u)?,
        Evidence::region_has(k, RegionPred::Closed),
        Evidence::region_has(u, RegionPred::Open),
    ])
}

/// `coincide_vanish(f, k, X \ l)` for disjoint closed `k` and `l`.
pub fn separate_compacts(f: &PLFun, k: &Region, l: &Region) -> Result<PLFun> {
    if !l.is_closed() {
        return Err(Error::NotClosed(l.to_string()));
    }
    if !k.intersect(l)?.is_empty() {
        return Err(Error::RegionsIntersect);
    }
    coincide_vanish(f, k, &l.complement())
}

/// `(g, h)` with `g + h = f`, both in `[0, f]`, `supp g ⊆ u`, `supp h ⊆ v`.
pub fn split_cover(f: &PLFun, u: &Region, v: &Region) -> Result<(PLFun, PLFun)> {
    require_nonneg(f)?;
    for r in [u, v] {
        if !r.is_open() {
            return Err(Error::NotOpen(r.to_string()));
        }
    }
    if !f.support().is_subset(&u.union(v)?)? {
        return Err(Error::CoverViolated);
    }
    let bu = PLFun::bump_for(u, None)?;
    let bv = PLFun::bump_for(v, None)?;
    let n = f
        .ratio_bound(&bu.add(&bv)?)?
        .expect("a function is dominated by any bump carrying its support");
    f.riesz_split(&bu.scale(&n), &bv.scale(&n))
}

pub fn split_cover_evidence(f: &PLFun, u: &Region, v: &Region, g: &PLFun, h: &PLFun) -> Result<Vec<Evidence>> {
    let zero = PLFun::zero(f.space());
    Ok(vec![
        Evidence::sum_eq(&[g, h], f)?,
        Evidence::le(&zero, g)?,
        Evidence::le(&zero, h)?,
        Evidence::le(g, f)?,
        Evidence::le(h, f)?,
        Evidence::support_within(g, u)?,
        Evidence::support_within(h, v)?,
    ])
}

/// An open `W` with `k ⊆ W` and `cl W ⊆ s`: the points closer to `k` than
/// half the distance from `k` to the complement of `s`.
pub fn midpoint_expansion(k: &Region, s: &Region) -> Result<Region> {
    if !k.is_subset(s)? {
        return Err(Error::KNotInsideSupport);
    }
    let space = k.space();
    let dk = match PLFun::distance_to(&k.closure()) {
        None => return Ok(Region::empty(space)),
        Some(d) => d,
    };
    let rest = s.complement();
    let reach = match PLFun::distance_to(&rest) {
        None => return Ok(Region::full(space)),
        Some(d) => min_on(&d, k).expect("k is nonempty"),
    };
    Ok(dk.neg().strict_superlevel(&-(reach / int(2))))
}

/// `h ∈ H` with `0 ≤ h ≤ f` and `h = f` on the closed `k ⊆ supp H`.
pub fn ideal_coincide(h: &IdealSpec, k: &Region, f: &PLFun) -> Result<PLFun> {
    require_nonneg(f)?;
    if !k.is_closed() {
        return Err(Error::NotClosed(k.to_string()));
    }
    if k.is_empty() {
        return Ok(PLFun::zero(f.space()));
    }
    let w = midpoint_expansion(k, &h.support())?;
    coincide_vanish(f, k, &w)
}

pub fn ideal_coincide_certificate(h: &IdealSpec, k: &Region, f: &PLFun, out: &PLFun, cutoff: usize) -> Result<Certificate> {
    let mut ev = vec![
        Evidence::le(&PLFun::zero(f.space()), out)?,
        Evidence::le(out, f)?,
        Evidence::support_within(&f.sub(out)?, &k.complement())?,
    ];
    let m = h.member(Sublattice::Full, out, cutoff)?;
    ev.extend(m.evidence(h, Sublattice::Full, out, cutoff)?);
    ev.push(Evidence::same_verdict(m.verdict, MemberVerdict::In));
    Ok(Certificate::new("ideal_coincide", "h lies in H ∩ [0, f] and coincides with f on K", ev))
}

/// An open nonempty `V ⊆ u` and `e ∈ [0, f]` with support in `u` and
/// `e = f` on `V`.
pub fn order_dense_urysohn(f: &PLFun, u: &Region) -> Result<(Region, PLFun)> {
    require_nonneg(f)?;
    if !u.is_open() {
        return Err(Error::NotOpen(u.to_string()));
    }
    if u.is_empty() {
        return Err(Error::NoWitnessRegion);
    }
    let space = f.space().clone();
    let w = u.intersect(&f.support())?;
    let (_, p) = match w.iter().next() {
        None => return Ok((u.clone(), PLFun::zero(&space))),
        Some(first) => first,
    };
    let (v, k) = if p.is_point() {
        let pt = Region::from_pieces(&space, vec![p.clone()])?;
        (pt.clone(), pt)
    } else {
        let q = (&p.hi - &p.lo) / int(4);
        let (a, b) = (&p.lo + &q, &p.hi - &q);
        (
            Region::from_pieces(&space, vec![Piece::open(a.clone(), b.clone())])?,
            Region::from_pieces(&space, vec![Piece::closed(a, b)])?,
        )
    };
    let e = coincide_vanish(f, &k, u)?;
    Ok((v, e))
}

pub fn order_dense_evidence(f: &PLFun, u: &Region, v: &Region, e: &PLFun) -> Result<Vec<Evidence>> {
    Ok(vec![
        Evidence::region_has(v, RegionPred::Open),
        Evidence::region_has(v, RegionPred::Nonempty),
        Evidence::region_subset(v, u)?,
        Evidence::le(&PLFun::zero(f.space()), e)?,
        Evidence::le(e, f)?,
        Evidence::support_within(e, u)?,
        Evidence::support_within(&f.sub(e)?, &v.complement())?,
    ])
}

pub struct Abvg {
    /// `f_1, ..., f_N`.
    pub parts: Vec<PLFun>,
    /// `g_1, ..., g_N` with `g_n = f_1 + ... + f_n`.
    pub partial_sums: Vec<PLFun>,
    /// `K_1, ..., K_{N+1}`.
    pub compacts: Vec<Region>,
    pub report: Report,
}

/// The telescoping disjoint approximation of `f` along `h_n`.
///
/// With `K_n = {h_n ≥ e/n}`, `f_n` coincides with `f - g_{n-1}` on `K_n`
/// and vanishes outside `{h_{n+1} > e/(n+1)}`, an open set inside `K_{n+1}`.
/// The strict inclusion needs `e > 0` everywhere.
pub fn abvg(f: &PLFun, seq: &IncreasingSeqRule, e_unit: &PLFun, n_terms: usize) -> Result<Abvg> {
    require_nonneg(f)?;
    if n_terms == 0 {
        return Err(Error::PreconditionViolated("N must be at least 1".into()));
    }
    if **seq.space() != **f.space() || **e_unit.space() != **f.space() {
        return Err(Error::SpaceMismatch);
    }
    if e_unit.min_value() <= Rational::zero() {
        return Err(Error::PreconditionViolated("e_unit must be strictly positive".into()));
    }
    seq.validate(n_terms + 1)?;
    let level = |n: usize| -> PLFun {
        seq.nth(n)
            .sub(&e_unit.scale(&(Rational::one() / int(n as i64))))
            .expect("same space")
    };
    let compacts: Vec<Region> = (1..=n_terms + 1)
        .map(|n| level(n).superlevel(&Rational::zero()))
        .collect();
    let mut parts = Vec::with_capacity(n_terms);
    let mut partial_sums = Vec::with_capacity(n_terms);
    let mut g = PLFun::zero(f.space());
    for n in 1..=n_terms {
        let rest = f.sub(&g)?;
        let u = level(n + 1).strict_superlevel(&Rational::zero());
        let fn_ = coincide_vanish(&rest, &compacts[n - 1], &u)?;
        g = g.add(&fn_)?;
        parts.push(fn_);
        partial_sums.push(g.clone());
    }
    let report = abvg_report(f, seq, e_unit, &parts, &partial_sums, &compacts)?;
    Ok(Abvg {
        parts,
        partial_sums,
        compacts,
        report,
    })
}

fn abvg_report(
    f: &PLFun,
    seq: &IncreasingSeqRule,
    e_unit: &PLFun,
    parts: &[PLFun],
    sums: &[PLFun],
    compacts: &[Region],
) -> Result<Report> {
    let n_terms = parts.len();
    let zero = PLFun::zero(f.space());
    let mut a = Vec::new();
    for n in 0..n_terms {
        for m in n + 2..n_terms {
            a.push(Evidence::disjoint(&parts[n], &parts[m])?);
        }
    }
    let mut b = Vec::new();
    let mut c = Vec::new();
    for n in 0..n_terms {
        let rest = f.sub(&sums[n])?;
        for part in &parts[..n] {
            b.push(Evidence::disjoint(&rest, part)?);
        }
        let idx = int(n as i64 + 1);
        let slack = f
            .sub(&seq.nth(n + 1))?
            .pos_part()
            .add(&e_unit.scale(&(Rational::one() / idx)))?;
        c.push(Evidence::le(&zero, &rest)?);
        c.push(Evidence::le(&rest, &slack)?);
    }
    let g_n = &sums[n_terms - 1];
    let k_n = &compacts[n_terms - 1];
    let bounds = [
        g_n.clone(),
        g_n.add(e_unit)?,
        g_n.join(f)?,
        g_n.add(&seq.nth(n_terms))?,
    ];
    let mut d = Vec::new();
    for bound in &bounds {
        d.push(Evidence::le(g_n, bound)?);
        d.push(Evidence::support_within(&f.sub(bound)?.pos_part(), &k_n.complement())?);
    }
    let mut structure = Vec::new();
    for n in 0..n_terms {
        let level = seq
            .nth(n + 1)
            .sub(&e_unit.scale(&(Rational::one() / int(n as i64 + 1))))?;
        structure.push(Evidence::region_eq(&level.superlevel(&Rational::zero()), &compacts[n]));
        structure.push(Evidence::sum_eq(&parts[..=n].iter().collect::<Vec<_>>(), &sums[n])?);
    }
    let certs = vec![
        Certificate::new("separated_disjoint", "f_n ⊥ f_m whenever |m - n| > 1", a),
        Certificate::new("remainder_disjoint", "f - g_n ⊥ f_m for m < n", b),
        Certificate::new("remainder_bound", "0 ≤ f - g_n ≤ (f - h_n)⁺ + e/n", c),
        Certificate::new("beyond_last", "for the tested g ≥ g_N, (f - g)⁺ vanishes on K_N", d),
        Certificate::new("construction", "K_n = {h_n ≥ e/n} and g_n = f_1 + ... + f_n", structure),
    ];
    Ok(Report::from_certificates(
        "abvg",
        json!({ "f": f, "seq": seq, "e_unit": e_unit, "n": n_terms }),
        certs,
        json!({
            "parts": parts,
            "compacts": compacts,
            "breakpoints": parts.iter().map(PLFun::breakpoint_count).collect::<Vec<_>>(),
            "last_sum_norm": RatStr(sums[n_terms - 1].sup_norm()),
        }),
    ))
}
