//! Checkers for the projection-band characterizations and the named
//! counterexamples, built on parametric witness families.
//!
//! # Disjoint bump families and order bounds
//!
//! A family accumulating at `p` has bump `n` supported at distance
//! `d_n = d0·rⁿ` from `p` with peak `a_n = a0·sⁿ`. If `p ∉ S = supp H`, every
//! `h ∈ H` vanishes at `p` and, being piecewise linear, satisfies
//! `h(x) ≤ L·|x - p|` near `p` for some `L`. Dominating bump `n` at its peak
//! then needs `a_n ≤ L·(d_n + w_n/2) < 2L·d_n`, so a bound in `H` forces
//! `a_n/d_n = (a0/d0)(s/r)ⁿ` to stay bounded, i.e. `s ≤ r`. Conversely for
//! `s ≤ r` the wedge `min(a0, (a0/d0)|x - p|)`, cut off inside the piece of
//! `S` carrying the family, lies in `H` and dominates every bump, because
//! bump `n` stays below `a_n ≤ a0·rⁿ = (a0/d0)·d_n` and starts at distance
//! `d_n`. If `p ∈ S` the plateau `a0` around `p` is already in `H`.

use std::sync::Arc;

use num_traits::{pow, One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gen::Gen;
use crate::ideals::{BandStatus, IdealSpec, MemberVerdict, Sublattice, DEFAULT_CUTOFF};
use crate::pl::PLFun;
use crate::rational::{int, RatStr, Rational};
use crate::region::{Piece, Region};
use crate::report::{Certificate, Cmp, Evidence, RegionPred, Report};
use crate::seq::{RegionSequence, Side};
use crate::space::Space;

/// Bumps checked exactly against a bound.
pub const PREFIX: usize = 16;
/// Breakpoint budget of the bounded search.
pub const SEARCH_BREAKPOINTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BumpFamily {
    pub p: Rational,
    pub dir: Side,
    pub d0: Rational,
    pub r: Rational,
    pub a0: Rational,
    pub s: Rational,
}

impl BumpFamily {
    pub fn new(p: Rational, dir: Side, d0: Rational, r: Rational, a0: Rational, s: Rational) -> Result<BumpFamily> {
        let zero = Rational::zero();
        let one = Rational::one();
        if d0 <= zero || a0 <= zero {
            return Err(Error::InvalidFamily("d0 and a0 must be positive".into()));
        }
        if r <= zero || r >= one {
            return Err(Error::InvalidFamily("r must lie in (0,1)".into()));
        }
        if s <= zero || s > one {
            return Err(Error::InvalidFamily("s must lie in (0,1]".into()));
        }
        Ok(BumpFamily { p, dir, d0, r, a0, s })
    }

    fn at(&self, t: &Rational) -> Rational {
        match self.dir {
            Side::Right => &self.p + t,
            Side::Left => &self.p - t,
        }
    }

    pub fn distance(&self, n: usize) -> Rational {
        &self.d0 * pow(self.r.clone(), n)
    }

    pub fn width(&self, n: usize) -> Rational {
        self.distance(n) * (Rational::one() - &self.r) / int(2)
    }

    pub fn height(&self, n: usize) -> Rational {
        &self.a0 * pow(self.s.clone(), n)
    }

    /// Distance from `p` to the peak of bump `n`.
    pub fn peak_distance(&self, n: usize) -> Rational {
        self.distance(n) + self.width(n) / int(2)
    }

    pub fn peak(&self, n: usize) -> Rational {
        self.at(&self.peak_distance(n))
    }

    /// `d0 + w0`, the far end of the family.
    pub fn reach(&self) -> Rational {
        self.distance(0) + self.width(0)
    }

    /// The open interval between `p` and the far end.
    pub fn span(&self, space: &Arc<Space>) -> Region {
        let far = self.at(&self.reach());
        let (lo, hi) = if far > self.p { (self.p.clone(), far) } else { (far, self.p.clone()) };
        Region::open_interval_clipped(space, &lo, &hi)
    }

    fn check_space(&self, space: &Space) -> Result<()> {
        let far = self.at(&self.reach());
        match (space.locate(&self.p), space.locate(&far)) {
            (Some(a), Some(b)) if a == b => Ok(()),
            _ => Err(Error::InvalidFamily("the family leaves the component of p".into())),
        }
    }

    pub fn bump_nth(&self, space: &Arc<Space>, n: usize) -> Result<PLFun> {
        self.check_space(space)?;
        let near = self.distance(n);
        let far = &near + self.width(n);
        let mut nodes = vec![
            (self.at(&near), Rational::zero()),
            (self.peak(n), self.height(n)),
            (self.at(&far), Rational::zero()),
        ];
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        PLFun::from_nodes(space, &nodes)
    }

    pub fn describe(&self) -> Value {
        json!({
            "p": RatStr(self.p.clone()),
            "dir": self.dir,
            "d0": RatStr(self.d0.clone()),
            "r": RatStr(self.r.clone()),
            "a0": RatStr(self.a0.clone()),
            "s": RatStr(self.s.clone()),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundVerdict {
    Bound(PLFun),
    Unbounded,
}

fn region_support(h: &IdealSpec) -> Result<Region> {
    match h {
        IdealSpec::RegionIdeal(_) => Ok(h.support()),
        other => Err(Error::UnsupportedIdealShape(format!("expected a region ideal, got {other}"))),
    }
}

/// The piece of `s` containing the family's span.
fn carrier(fam: &BumpFamily, s: &Region) -> Result<Piece> {
    let mid = fam.at(&(fam.reach() / int(2)));
    s.iter()
        .map(|(_, p)| p)
        .find(|p| p.contains(&mid))
        .cloned()
        .ok_or(Error::FamilyNotInIdeal)
}

/// `min(cap, slope·|x - p|)` on the carrier piece, held at `cap` from the
/// first peak on and ramped to the open far end of the piece.
fn wedge(fam: &BumpFamily, space: &Arc<Space>, piece: &Piece, slope: Option<&Rational>) -> Result<PLFun> {
    let a0 = fam.a0.clone();
    let zero = Rational::zero();
    let (near, near_closed, far, far_closed) = match fam.dir {
        Side::Right => (&piece.lo, piece.lo_closed, &piece.hi, piece.hi_closed),
        Side::Left => (&piece.hi, piece.hi_closed, &piece.lo, piece.lo_closed),
    };
    let end_value = |closed: bool| if closed { a0.clone() } else { zero.clone() };
    let mut nodes = Vec::new();
    match slope {
        None => {
            if *near != fam.p {
                nodes.push((near.clone(), end_value(near_closed)));
            }
            nodes.push((fam.p.clone(), a0.clone()));
        }
        Some(l) => {
            nodes.push((fam.p.clone(), zero.clone()));
            let t = &a0 / l;
            if t < fam.peak_distance(0) {
                nodes.push((fam.at(&t), a0.clone()));
            }
        }
    }
    let top = fam.peak(0);
    let top_value = match slope {
        Some(l) if &a0 / l > fam.peak_distance(0) => l * fam.peak_distance(0),
        _ => a0.clone(),
    };
    nodes.push((top, top_value));
    nodes.push((far.clone(), end_value(far_closed)));
    nodes.sort_by(|a, b| a.0.cmp(&b.0));
    nodes.dedup_by(|a, b| a.0 == b.0);
    PLFun::from_nodes(space, &nodes)
}

/// Decides whether the family is order bounded in the region ideal `h`.
pub fn bound_in_ideal(fam: &BumpFamily, h: &IdealSpec) -> Result<BoundVerdict> {
    let s = region_support(h)?;
    let space = s.space().clone();
    fam.check_space(&space)?;
    if !fam.span(&space).is_subset(&s)? {
        return Err(Error::FamilyNotInIdeal);
    }
    if s.contains(&fam.p) {
        let piece = carrier(fam, &s)?;
        return Ok(BoundVerdict::Bound(wedge(fam, &space, &piece, None)?));
    }
    if fam.s <= fam.r {
        let piece = carrier(fam, &s)?;
        let slope = &fam.a0 / &fam.d0;
        return Ok(BoundVerdict::Bound(wedge(fam, &space, &piece, Some(&slope))?));
    }
    Ok(BoundVerdict::Unbounded)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub slope_cap: RatStr,
    /// First bump whose peak exceeds `slope_cap·distance`, which no
    /// admissible bound reaches.
    pub obstruction: Option<usize>,
    pub candidates: usize,
    pub dominators: usize,
}

/// `2·(a0/d0)·max(s/r, 1)⁵`.
pub fn slope_cap(fam: &BumpFamily) -> Rational {
    let q = (&fam.s / &fam.r).max(Rational::one());
    int(2) * &fam.a0 / &fam.d0 * pow(q, 5)
}

/// Searches candidate bounds vanishing at `p` with slopes up to the cap:
/// wedges of slope `cap·k/8`, checked exactly on the first
/// `SEARCH_BREAKPOINTS` bumps, plus the peak obstruction that rules out
/// every bound in the class.
pub fn bounded_search(fam: &BumpFamily, h: &IdealSpec) -> Result<(SearchOutcome, Vec<Evidence>)> {
    let s = region_support(h)?;
    let space = s.space().clone();
    let piece = carrier(fam, &s)?;
    let cap = slope_cap(fam);
    let mut evidence = Vec::new();
    let obstruction = (0..SEARCH_BREAKPOINTS).find(|&n| fam.height(n) > &cap * fam.peak_distance(n));
    if let Some(n) = obstruction {
        let bump = fam.bump_nth(&space, n)?;
        evidence.push(Evidence::value_at(&bump, &fam.peak(n), &fam.height(n))?);
        evidence.push(Evidence::compare(&fam.height(n), Cmp::Gt, &(&cap * fam.peak_distance(n))));
    }
    let bumps: Vec<PLFun> = (0..SEARCH_BREAKPOINTS)
        .map(|n| fam.bump_nth(&space, n))
        .collect::<Result<_>>()?;
    let mut dominators = 0;
    for k in 1..=8 {
        let slope = &cap * Rational::new(k.into(), 8.into());
        let cand = wedge(fam, &space, &piece, Some(&slope))?;
        let mut fails = None;
        for (n, b) in bumps.iter().enumerate() {
            if !b.le(&cand)? {
                fails = Some(n);
                break;
            }
        }
        match fails {
            None => dominators += 1,
            Some(_) => {
                if let Some(n) = obstruction {
                    let v = cand.eval(&fam.peak(n))?;
                    evidence.push(Evidence::value_at(&cand, &fam.peak(n), &v)?);
                    evidence.push(Evidence::compare(&v, Cmp::Lt, &fam.height(n)));
                }
            }
        }
    }
    Ok((
        SearchOutcome {
            slope_cap: RatStr(cap),
            obstruction,
            candidates: 8,
            dominators,
        },
        evidence,
    ))
}

fn point_region(space: &Arc<Space>, x: &Rational) -> Result<Region> {
    Region::interval(space, x.clone(), x.clone(), true, true)
}

/// Anchors for families inside `s`: each boundary point with `s` on one
/// side, plus one point of `s` itself.
fn anchors(s: &Region) -> Vec<(Rational, Side, Rational)> {
    let mut out = Vec::new();
    for (_, p) in s.iter() {
        if p.is_point() {
            continue;
        }
        let half = (&p.hi - &p.lo) / int(2);
        if !p.lo_closed {
            out.push((p.lo.clone(), Side::Right, half.clone()));
        }
        if !p.hi_closed {
            out.push((p.hi.clone(), Side::Left, half.clone()));
        }
    }
    if let Some((_, p)) = s.iter().find(|(_, p)| !p.is_point()) {
        let (x, d) = if p.lo_closed {
            (p.lo.clone(), (&p.hi - &p.lo) / int(2))
        } else {
            let m = (&p.lo + &p.hi) / int(2);
            let d = (&p.hi - &m) / int(2);
            (m, d)
        };
        out.push((x, Side::Right, d));
    }
    out
}

pub fn parse_grid(text: &str) -> Result<Vec<(Rational, Rational)>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|pair| {
            let (r, s) = pair
                .split_once(':')
                .ok_or_else(|| Error::ParseRational(pair.to_string()))?;
            Ok((crate::rational::parse_rational(r.trim())?, crate::rational::parse_rational(s.trim())?))
        })
        .collect()
}

pub fn default_grid() -> Vec<(Rational, Rational)> {
    parse_grid("1/2:1,1/2:1/2,3/4:1/2").expect("valid grid")
}

/// Compares the band status of a region ideal with order-boundedness of
/// disjoint bump families in it.
pub fn theorem_main_check(h: &IdealSpec, grid: &[(Rational, Rational)]) -> Result<Report> {
    let s = region_support(h)?;
    let space = s.space().clone();
    let (status, status_ev) = h.band_status_evidence(DEFAULT_CUTOFF);
    let mut certs = vec![Certificate::new("band_status", &format!("H is {status}"), status_ev)];
    let mut cases = Vec::new();
    let mut unbounded = 0;
    let mut conclusive = true;
    for (p, dir, d0) in anchors(&s) {
        for (r, sr) in grid {
            let fam = BumpFamily::new(p.clone(), dir, d0.clone(), r.clone(), int(1), sr.clone())?;
            let mut ev = Vec::new();
            for n in 0..PREFIX {
                ev.push(Evidence::support_within(&fam.bump_nth(&space, n)?, &s)?);
            }
            let pt = point_region(&space, &p)?;
            let (claim, verdict, search) = match bound_in_ideal(&fam, h)? {
                BoundVerdict::Bound(w) => {
                    let m = h.member(Sublattice::Full, &w, DEFAULT_CUTOFF)?;
                    ev.extend(m.evidence(h, Sublattice::Full, &w, DEFAULT_CUTOFF)?);
                    ev.push(Evidence::same_verdict(m.verdict, MemberVerdict::In));
                    for n in 0..PREFIX {
                        ev.push(Evidence::le(&fam.bump_nth(&space, n)?, &w)?);
                    }
                    if s.contains(&p) {
                        ev.push(Evidence::region_subset(&pt, &s)?);
                    } else {
                        ev.push(Evidence::compare(&fam.s, Cmp::Le, &fam.r));
                    }
                    ("the family has an upper bound in H", "bound", Value::Null)
                }
                BoundVerdict::Unbounded => {
                    unbounded += 1;
                    ev.push(Evidence::region_subset(&pt, &s.complement())?);
                    ev.push(Evidence::compare(&fam.s, Cmp::Gt, &fam.r));
                    let (outcome, search_ev) = bounded_search(&fam, h)?;
                    conclusive &= outcome.obstruction.is_some() && outcome.dominators == 0;
                    ev.extend(search_ev);
                    ("no upper bound of the family lies in H", "unbounded", json!(outcome))
                }
            };
            let name = format!("family_{}", cases.len());
            certs.push(Certificate::new(&name, claim, ev).with_detail(json!({ "family": fam.describe() })));
            cases.push(json!({ "family": fam.describe(), "verdict": verdict, "search": search }));
        }
    }
    let projection = status == BandStatus::ProjectionBand;
    let consistent = conclusive && projection == (unbounded == 0);
    let verdict = if !conclusive {
        "inconclusive"
    } else if consistent {
        "consistent"
    } else {
        "inconsistent"
    };
    let grid_json: Vec<Value> = grid.iter().map(|(r, s)| json!([RatStr(r.clone()), RatStr(s.clone())])).collect();
    Ok(Report::answer(
        "check main",
        json!({ "ideal": h, "grid": grid_json }),
        certs,
        consistent,
        json!({ "band_status": status, "verdict": verdict, "unbounded": unbounded, "cases": cases }),
    ))
}

/// Infinite-meet distributivity at a region ideal: a failure witness when
/// `H` is not a projection band, otherwise sampled finite families.
pub fn infd_witness(h: &IdealSpec, families: usize, seed: u64) -> Result<Report> {
    let s = region_support(h)?;
    if h.band_status(DEFAULT_CUTOFF) == BandStatus::ProjectionBand {
        return confirm_distributive(h, &s, families, seed);
    }
    let space = s.space().clone();
    let p = s.boundary_points().into_iter().next().expect("an open non-clopen set has a boundary");
    let right = s.iter().find(|(_, q)| q.lo == p && !q.lo_closed && !q.is_point()).map(|(_, q)| q.clone());
    let (keep, reach) = match right {
        Some(q) => (Side::Left, &q.hi - &q.lo),
        None => {
            let q = s
                .iter()
                .find(|(_, q)| q.hi == p && !q.hi_closed)
                .map(|(_, q)| q.clone())
                .expect("the support accumulates at p from one side");
            (Side::Right, &q.hi - &q.lo)
        }
    };
    let seq = RegionSequence::new(&space, p.clone(), int(1), keep)?;
    let limit = seq.intersection();
    let one = PLFun::constant(&space, int(1));
    let f = if s.union(&limit)? == Region::full(&space) {
        one
    } else {
        let rho = reach.min(int(1));
        PLFun::from_nodes(
            &space,
            &[(&p - &rho, Rational::zero()), (p.clone(), int(1)), (&p + &rho, Rational::zero())]
                .into_iter()
                .filter(|(x, _)| space.locate(x) == space.locate(&p))
                .collect::<Vec<_>>(),
        )?
    };
    let mut certs = Vec::new();
    for n in 1..=DEFAULT_CUTOFF {
        let jn = IdealSpec::region(seq.nth(n));
        let sum = IdealSpec::sum(h.clone(), jn.clone());
        let m = sum.member(Sublattice::Full, &f, DEFAULT_CUTOFF)?;
        let mut ev = m.evidence(&sum, Sublattice::Full, &f, DEFAULT_CUTOFF)?;
        ev.push(Evidence::same_verdict(m.verdict, MemberVerdict::In));
        ev.push(Evidence::region_subset(&limit, &seq.nth(n))?);
        certs.push(Certificate::new(&format!("stage_{n}"), "f ∈ H + J_n", ev));
    }
    let lim_ideal = IdealSpec::sum(h.clone(), IdealSpec::region(limit.clone()));
    let m = lim_ideal.member(Sublattice::Full, &f, DEFAULT_CUTOFF)?;
    let mut ev = m.evidence(&lim_ideal, Sublattice::Full, &f, DEFAULT_CUTOFF)?;
    ev.push(Evidence::same_verdict(m.verdict, MemberVerdict::Out));
    ev.push(Evidence::escapes_at(&f, &p, &s.union(&limit.interior())?)?);
    certs.push(Certificate::new("limit", "f ∉ H + ⋂ J_n", ev));
    Ok(Report::from_certificates(
        "check infd",
        json!({ "ideal": h }),
        certs,
        json!({
            "kind": "witness",
            "point": RatStr(p),
            "sequence": seq.describe(),
            "stages": DEFAULT_CUTOFF,
            "f": f,
            "limit": limit,
        }),
    ))
}

fn confirm_distributive(h: &IdealSpec, s: &Region, families: usize, seed: u64) -> Result<Report> {
    let space = s.space().clone();
    let mut gen = Gen::new(seed);
    let mut ev = Vec::new();
    for _ in 0..families {
        let k = 1 + gen.below(3);
        let js: Vec<IdealSpec> = (0..k).map(|_| IdealSpec::region(gen.open_region(&space, 3))).collect();
        let meet_of_sums = js[1..].iter().fold(IdealSpec::sum(h.clone(), js[0].clone()), |acc, j| {
            IdealSpec::intersection(acc, IdealSpec::sum(h.clone(), j.clone()))
        });
        let meet = js[1..].iter().fold(js[0].clone(), |acc, j| IdealSpec::intersection(acc, j.clone()));
        let sum_of_meet = IdealSpec::sum(h.clone(), meet);
        ev.push(Evidence::region_eq(&meet_of_sums.support(), &sum_of_meet.support()));
        let u = gen.open_region(&space, 3);
        let g = gen.nonneg_pl(&space, 4, 3).meet(&PLFun::bump_for(&u, None)?)?;
        let ml = meet_of_sums.member(Sublattice::Full, &g, DEFAULT_CUTOFF)?;
        let mr = sum_of_meet.member(Sublattice::Full, &g, DEFAULT_CUTOFF)?;
        ev.extend(ml.evidence(&meet_of_sums, Sublattice::Full, &g, DEFAULT_CUTOFF)?);
        ev.extend(mr.evidence(&sum_of_meet, Sublattice::Full, &g, DEFAULT_CUTOFF)?);
        ev.push(Evidence::same_verdict(ml.verdict, mr.verdict));
    }
    let certs = vec![
        Certificate::new("projection_band", "H is a projection band", vec![Evidence::region_has(s, RegionPred::Clopen)]),
        Certificate::new(
            "finite_families",
            "⋂ (H + J_i) = H + ⋂ J_i for the sampled finite families",
            ev,
        ),
    ];
    Ok(Report::from_certificates(
        "check infd",
        json!({ "ideal": h, "families": families, "seed": seed }),
        certs,
        json!({ "kind": "confirmed_distributive", "families": families }),
    ))
}

/// `|t|` on `[-1, 1]` lies in `E([-1,0) ∪ (0,1])` but not in
/// `E([-1,0)) + E((0,1])` formed inside the even-near-zero sublattice.
pub fn njo_counterexample() -> Result<Report> {
    let space = Space::interval(int(-1), int(1))?;
    let t = PLFun::identity(&space);
    let abs = t.abs();
    let enz = Sublattice::EvenNearZero;
    let left = Region::parse(&space, "[-1,0)")?;
    let right = Region::parse(&space, "(0,1]")?;
    let union = IdealSpec::region(left.union(&right)?);
    let sum = IdealSpec::sum(IdealSpec::region(left.clone()), IdealSpec::region(right.clone()));

    let c1 = Certificate::new("in_sublattice", "|t| is even near 0", vec![Evidence::in_sublattice(enz, &abs)?]);

    let m = union.member(enz, &abs, DEFAULT_CUTOFF)?;
    let mut ev = m.evidence(&union, enz, &abs, DEFAULT_CUTOFF)?;
    ev.push(Evidence::same_verdict(m.verdict, MemberVerdict::In));
    let c2 = Certificate::new("in_union_ideal", "|t| ∈ E([-1,0) ∪ (0,1])", ev);

    let m = sum.member(enz, &abs, DEFAULT_CUTOFF)?;
    let mut ev = m.evidence(&sum, enz, &abs, DEFAULT_CUTOFF)?;
    ev.push(Evidence::same_verdict(m.verdict, MemberVerdict::Out));
    ev.push(Evidence::outside_sublattice(enz, &t.neg().pos_part())?);
    let full = sum.member(Sublattice::Full, &abs, DEFAULT_CUTOFF)?;
    ev.extend(full.evidence(&sum, Sublattice::Full, &abs, DEFAULT_CUTOFF)?);
    ev.push(Evidence::same_verdict(full.verdict, MemberVerdict::In));
    let c3 = Certificate::new(
        "forced_split",
        "the only split of |t| is ((-t)⁺, t⁺), which decomposes |t| in the full lattice but leaves the even-near-zero sublattice",
        ev,
    );

    let nodes: Vec<(Rational, Rational)> = ["-3/4:0", "-1/2:1", "-1/4:0", "1/4:0", "1/2:1", "3/4:0"]
        .iter()
        .map(|s| {
            let (x, v) = s.split_once(':').expect("node");
            (crate::rational::parse_rational(x).expect("x"), crate::rational::parse_rational(v).expect("v"))
        })
        .collect();
    let tents = PLFun::from_nodes(&space, &nodes)?;
    let contrast = sum.member(enz, &tents, DEFAULT_CUTOFF)?;
    Ok(Report::from_certificates(
        "check njo",
        json!({ "space": &*space, "f": abs }),
        vec![c1, c2, c3],
        json!({
            "full": full.verdict,
            "even_near_zero": m.verdict,
            "contrast": { "f": tents, "even_near_zero": contrast.verdict },
        }),
    ))
}

/// Band status of `I_e` against a direct test of self-majorization.
pub fn self_majorizing_report(e: &PLFun, samples: usize, seed: u64, cutoff: usize) -> Result<Report> {
    let e = e.abs();
    let space = e.space().clone();
    let h = IdealSpec::principal(e.clone())?;
    let (status, status_ev) = h.band_status_evidence(cutoff);
    let mut gen = Gen::new(seed);
    let mut tests = vec![PLFun::constant(&space, int(1))];
    tests.extend((0..samples).map(|_| gen.nonneg_pl(&space, 4, 3)));
    let checkpoints: Vec<usize> = (0..)
        .map(|k| 1usize << k)
        .take_while(|&n| n <= cutoff)
        .chain(std::iter::once(cutoff))
        .collect();
    let mut ev = Vec::new();
    let mut bounded_all = true;
    let mut rows = Vec::new();
    for f in &tests {
        let big_r = f.ratio_sup_on_support(&e)?;
        bounded_all &= big_r.is_some();
        let mut seen = Vec::new();
        for &n in &checkpoints {
            let cut = f.meet(&e.scale(&int(n as i64)))?;
            let rn = cut.ratio_bound(&e)?.expect("f ∧ n·e is dominated by n·e");
            let expect = match &big_r {
                Some(b) => b.clone().min(int(n as i64)),
                None => int(n as i64),
            };
            ev.push(Evidence::ratio_bound(&cut, &e, &rn)?);
            ev.push(Evidence::compare(&rn, Cmp::Eq, &expect));
            seen.push(RatStr(rn));
        }
        rows.push(json!({ "sup_ratio": big_r.map(RatStr), "r_n": seen }));
    }
    let projection = status == BandStatus::ProjectionBand;
    let consistent = bounded_all == projection;
    let certs = vec![
        Certificate::new("band_status", &format!("I_e is {status}"), status_ev),
        Certificate::new(
            "direct_test",
            "the least R with f ∧ n·e ≤ R·e equals min(n, sup f/e) for every tested f",
            ev,
        ),
    ];
    Ok(Report::answer(
        "check selfmaj",
        json!({ "e": e, "samples": samples, "seed": seed, "cutoff": cutoff }),
        certs,
        consistent,
        json!({
            "band_status": status,
            "self_majorizing": bounded_all,
            "verdict": if consistent { "consistent" } else { "inconsistent" },
            "tests": rows,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn unit() -> Arc<Space> {
        Space::interval(int(-1), int(1)).unwrap()
    }

    #[test]
    fn bump_geometry() {
        let s = unit();
        let fam = BumpFamily::new(int(0), Side::Right, rat(1, 2), rat(1, 2), int(1), int(1)).unwrap();
        let b0 = fam.bump_nth(&s, 0).unwrap();
        assert_eq!(b0.support(), Region::parse(&s, "(1/2,5/8)").unwrap());
        assert_eq!(b0.max_value(), int(1));
        let half = BumpFamily::new(int(0), Side::Left, rat(1, 2), rat(1, 2), int(1), rat(1, 2)).unwrap();
        assert_eq!(half.bump_nth(&s, 3).unwrap().max_value(), rat(1, 8));
        assert!(half.bump_nth(&s, 3).unwrap().support().is_subset(&Region::parse(&s, "[-1,0)").unwrap()).unwrap());
        let b2 = fam.bump_nth(&s, 2).unwrap();
        let b5 = fam.bump_nth(&s, 5).unwrap();
        assert!(b2.meet(&b5).unwrap().is_zero());
    }

    #[test]
    fn bounds_in_half_open_ideal() {
        let s = unit();
        let h = IdealSpec::region(Region::parse(&s, "(0,1]").unwrap());
        let steep = BumpFamily::new(int(0), Side::Right, rat(1, 2), rat(1, 2), int(1), int(1)).unwrap();
        assert_eq!(bound_in_ideal(&steep, &h).unwrap(), BoundVerdict::Unbounded);
        let (out, _) = bounded_search(&steep, &h).unwrap();
        assert!(out.obstruction.is_some());
        assert_eq!(out.dominators, 0);
        let mild = BumpFamily::new(int(0), Side::Right, rat(1, 2), rat(1, 2), int(1), rat(1, 2)).unwrap();
        match bound_in_ideal(&mild, &h).unwrap() {
            BoundVerdict::Bound(w) => {
                for n in 0..30 {
                    assert!(mild.bump_nth(&s, n).unwrap().le(&w).unwrap());
                }
                assert_eq!(h.member(Sublattice::Full, &w, 8).unwrap().verdict, MemberVerdict::In);
            }
            other => panic!("{other:?}"),
        }
        let full = IdealSpec::full(&s);
        assert!(matches!(bound_in_ideal(&steep, &full).unwrap(), BoundVerdict::Bound(_)));
        let small = IdealSpec::region(Region::parse(&s, "(0,1/2)").unwrap());
        assert_eq!(bound_in_ideal(&steep, &small), Err(Error::FamilyNotInIdeal));
    }

    #[test]
    fn main_check_examples() {
        let s = unit();
        let h = IdealSpec::region(Region::parse(&s, "(0,1]").unwrap());
        let rep = theorem_main_check(&h, &default_grid()).unwrap();
        assert!(rep.passed(), "{}", rep.to_json_string());
        assert!(rep.recheck().ok());
        let two = Space::new(vec![(int(-1), int(0)), (int(1), int(2))]).unwrap();
        let c = IdealSpec::region(Region::components(&two, &[1]));
        let rep = theorem_main_check(&c, &default_grid()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.verdict.result["unbounded"], json!(0));
        assert!(theorem_main_check(&IdealSpec::full(&s), &default_grid()).unwrap().passed());
    }

    #[test]
    fn infd_examples() {
        let s = unit();
        let h = IdealSpec::region(Region::parse(&s, "(0,1]").unwrap());
        let rep = infd_witness(&h, 10, 1).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.verdict.result["kind"], json!("witness"));
        assert_eq!(rep.certificates.len(), DEFAULT_CUTOFF + 1);
        let two = Space::new(vec![(int(-1), int(0)), (int(1), int(2))]).unwrap();
        let c = IdealSpec::region(Region::components(&two, &[0]));
        let rep = infd_witness(&c, 10, 1).unwrap();
        assert!(rep.passed() && rep.recheck().ok());
        assert!(matches!(
            infd_witness(&IdealSpec::principal(PLFun::identity(&s)).unwrap(), 1, 1),
            Err(Error::UnsupportedIdealShape(_))
        ));
    }

    #[test]
    fn njo_report_passes() {
        let rep = njo_counterexample().unwrap();
        assert_eq!(rep.certificates.len(), 3);
        assert!(rep.passed(), "{}", rep.to_json_string());
        assert!(rep.recheck().ok());
        assert_eq!(rep.verdict.result["contrast"]["even_near_zero"], json!("In"));
    }

    #[test]
    fn self_majorizing_examples() {
        let s = unit();
        let t = PLFun::identity(&s);
        for (e, status, sm) in [
            (t.pos_part(), "BandOnly", false),
            (PLFun::constant(&s, int(1)), "ProjectionBand", true),
            (t.clone(), "NotBand", false),
        ] {
            let rep = self_majorizing_report(&e, 5, 2, 16).unwrap();
            assert!(rep.passed());
            assert_eq!(rep.verdict.result["band_status"], json!(status));
            assert_eq!(rep.verdict.result["self_majorizing"], json!(sm));
        }
    }
}
