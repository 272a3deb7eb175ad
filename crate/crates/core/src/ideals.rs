//! Symbolic ideals of the piecewise-linear lattice and of its sublattices.
//!
//! Every ideal here is a union of an increasing chain of support-determined
//! ideals `E(S_1) ⊆ E(S_2) ⊆ ...`. For most shapes the chain is constant;
//! only sequence-generated ideals grow, which is why their membership is
//! searched stage by stage up to a cutoff.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::Gen;
use crate::pl::{PLFun, PLFunJson};
use crate::rational::{int, RatStr, Rational};
use crate::region::{Piece, Region, RegionJson};
use crate::report::{Certificate, Evidence, RegionPred, Report};
use crate::seq::{IncreasingSeqRule, SeqRuleJson};
use crate::space::Space;
use crate::urysohn;

pub const DEFAULT_CUTOFF: usize = 64;

/// The ambient sublattice in which ideals are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sublattice {
    Full,
    /// Functions on `[-c, c]` that are even on a punctured neighbourhood of 0.
    EvenNearZero,
}

impl Sublattice {
    pub fn parse(name: &str) -> Option<Sublattice> {
        match name {
            "full" => Some(Sublattice::Full),
            "even-near-zero" | "even_near_zero" | "enz" => Some(Sublattice::EvenNearZero),
            _ => None,
        }
    }

    pub fn check_space(self, space: &Space) -> Result<()> {
        match self {
            Sublattice::Full => Ok(()),
            Sublattice::EvenNearZero => space
                .symmetric_radius()
                .map(|_| ())
                .ok_or(Error::InvalidSublattice),
        }
    }

    pub fn contains(self, f: &PLFun) -> Result<bool> {
        self.check_space(f.space())?;
        Ok(match self {
            Sublattice::Full => true,
            Sublattice::EvenNearZero => even_near_zero(f),
        })
    }

    pub fn require(self, f: &PLFun) -> Result<()> {
        if self.contains(f)? {
            Ok(())
        } else {
            Err(Error::NotInSublattice)
        }
    }

    /// A member `g` with `0 ≤ g ≤ 1`, `g(x) = 1` and `g = 0` on the closed
    /// set `c`, which must avoid `x`.
    pub fn separating(self, x: &Rational, c: &Region) -> Result<PLFun> {
        let space = c.space().clone();
        self.check_space(&space)?;
        if !c.is_closed() {
            return Err(Error::NotClosed(c.to_string()));
        }
        if c.contains(x) {
            return Err(Error::PreconditionViolated(format!("{x} lies in {c}")));
        }
        let pt = Region::interval(&space, x.clone(), x.clone(), true, true)?;
        let open = c.complement();
        match self {
            Sublattice::Full => PLFun::bump_for(&open, Some(&pt)),
            Sublattice::EvenNearZero if !x.is_zero() => {
                let half = x.abs() / int(2);
                let u = open.intersect(&Region::ball(&space, x, &half))?;
                PLFun::bump_for(&u, Some(&pt))
            }
            Sublattice::EvenNearZero => {
                let c_rad = space.symmetric_radius().expect("checked").clone();
                let reach = PLFun::distance_to(c)
                    .map(|d| d.eval_in(0, x))
                    .unwrap_or_else(|| c_rad.clone());
                let r = reach.min(c_rad) / int(2);
                PLFun::from_nodes(
                    &space,
                    &[(-r.clone(), Rational::zero()), (int(0), int(1)), (r, Rational::zero())],
                )
            }
        }
    }
}

trait AbsValue {
    fn abs(&self) -> Self;
}

impl AbsValue for Rational {
    fn abs(&self) -> Rational {
        num_traits::Signed::abs(self)
    }
}

fn even_near_zero(f: &PLFun) -> bool {
    let pts = f.breakpoints(0);
    let zero = Rational::zero();
    let r = pts.iter().find(|(x, _)| *x > zero).map(|(x, _)| x.clone());
    let l = pts.iter().rev().find(|(x, _)| *x < zero).map(|(x, _)| -x.clone());
    match (r, l) {
        (Some(r), Some(l)) => {
            let d = r.min(l);
            f.eval_in(0, &d) == f.eval_in(0, &-d.clone())
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealSpec {
    /// `I_e`, the ideal generated by `e ≥ 0`.
    Principal(PLFun),
    /// `E(A)`: members with support inside the interior of `A`.
    RegionIdeal(Region),
    Sum(Box<IdealSpec>, Box<IdealSpec>),
    Intersection(Box<IdealSpec>, Box<IdealSpec>),
    DisjComp(Box<IdealSpec>),
    /// The ideal generated by an increasing sequence.
    SequenceGenerated(IncreasingSeqRule),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandStatus {
    NotBand,
    BandOnly,
    ProjectionBand,
}

impl fmt::Display for BandStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemberVerdict {
    In,
    Out,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub verdict: MemberVerdict,
    pub certificate: MemberCert,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MemberCert {
    /// `|f| ≤ bound · e`.
    RatioBound { bound: RatStr },
    /// `supp f ⊆ within`.
    SupportInclusion { support: Region, within: Region },
    /// `f(point) ≠ 0` with `point` outside the ideal's support.
    Escape { point: RatStr, value: RatStr, within: Region },
    /// `|f| ≤ bound · h_stage`.
    Stage { stage: usize, bound: RatStr },
    /// No stage up to the cutoff contains `supp f`.
    CutoffExhausted { cutoff: usize, point: RatStr, stage_support: Region },
    /// `f = first + second` with the parts in the two summands.
    Split {
        stage: usize,
        first: PLFun,
        second: PLFun,
        first_cert: Box<Membership>,
        second_cert: Box<Membership>,
    },
    /// The summand supports are disjoint, so the split is forced, and the
    /// listed parts fall outside the sublattice.
    ForcedSplit {
        first: PLFun,
        second: PLFun,
        first_region: Region,
        second_region: Region,
        outside: Vec<usize>,
    },
    Both { first: Box<Membership>, second: Box<Membership> },
    /// Overlapping summand supports in a proper sublattice.
    Overlap { overlap: Region },
}

fn combine(a: MemberVerdict, b: MemberVerdict) -> MemberVerdict {
    use MemberVerdict::*;
    match (a, b) {
        (Out, _) | (_, Out) => Out,
        (Unsupported, _) | (_, Unsupported) => Unsupported,
        _ => In,
    }
}

fn escape(f: &PLFun, within: &Region) -> Result<Membership> {
    let x = f
        .support()
        .point_outside(within)?
        .expect("support is not contained");
    Ok(Membership {
        verdict: MemberVerdict::Out,
        certificate: MemberCert::Escape {
            value: RatStr(f.eval(&x)?),
            point: RatStr(x),
            within: within.clone(),
        },
    })
}

fn by_support(f: &PLFun, within: &Region) -> Result<Membership> {
    let support = f.support();
    if support.is_subset(within)? {
        Ok(Membership {
            verdict: MemberVerdict::In,
            certificate: MemberCert::SupportInclusion {
                support,
                within: within.clone(),
            },
        })
    } else {
        escape(f, within)
    }
}

/// Splits a signed `f` with `supp f ⊆ u ∪ v` into parts supported in `u`
/// and `v`, by splitting the positive and negative parts separately.
pub fn split_signed(f: &PLFun, u: &Region, v: &Region) -> Result<(PLFun, PLFun)> {
    let (g1, h1) = urysohn::split_cover(&f.pos_part(), u, v)?;
    let (g2, h2) = urysohn::split_cover(&f.neg_part(), u, v)?;
    Ok((g1.sub(&g2)?, h1.sub(&h2)?))
}

impl IdealSpec {
    /// The ideal generated by `e`, which is the one generated by `|e|`.
    pub fn principal(e: PLFun) -> Result<IdealSpec> {
        Ok(IdealSpec::Principal(e.abs()))
    }

    pub fn region(a: Region) -> IdealSpec {
        IdealSpec::RegionIdeal(a)
    }

    pub fn sum(a: IdealSpec, b: IdealSpec) -> IdealSpec {
        IdealSpec::Sum(Box::new(a), Box::new(b))
    }

    pub fn intersection(a: IdealSpec, b: IdealSpec) -> IdealSpec {
        IdealSpec::Intersection(Box::new(a), Box::new(b))
    }

    pub fn disj_comp(a: IdealSpec) -> IdealSpec {
        IdealSpec::DisjComp(Box::new(a))
    }

    pub fn full(space: &Arc<Space>) -> IdealSpec {
        IdealSpec::RegionIdeal(Region::full(space))
    }

    pub fn zero(space: &Arc<Space>) -> IdealSpec {
        IdealSpec::RegionIdeal(Region::empty(space))
    }

    pub fn space(&self) -> &Arc<Space> {
        match self {
            IdealSpec::Principal(e) => e.space(),
            IdealSpec::RegionIdeal(a) => a.space(),
            IdealSpec::Sum(a, _) | IdealSpec::Intersection(a, _) => a.space(),
            IdealSpec::DisjComp(a) => a.space(),
            IdealSpec::SequenceGenerated(rule) => rule.space(),
        }
    }

    /// Checks that all parts live on one space.
    pub fn validate(&self) -> Result<()> {
        let space = self.space().clone();
        self.check_on(&space)
    }

    fn check_on(&self, space: &Arc<Space>) -> Result<()> {
        let same = |s: &Arc<Space>| {
            if **s == **space {
                Ok(())
            } else {
                Err(Error::SpaceMismatch)
            }
        };
        match self {
            IdealSpec::Principal(e) => {
                same(e.space())?;
                if !e.is_nonneg() {
                    return Err(Error::PreconditionViolated(
                        "a principal generator must be nonnegative".into(),
                    ));
                }
                Ok(())
            }
            IdealSpec::RegionIdeal(a) => same(a.space()),
            IdealSpec::Sum(a, b) | IdealSpec::Intersection(a, b) => {
                a.check_on(space)?;
                b.check_on(space)
            }
            IdealSpec::DisjComp(a) => a.check_on(space),
            IdealSpec::SequenceGenerated(rule) => same(rule.space()),
        }
    }

    /// The union of the supports of all members.
    pub fn support(&self) -> Region {
        match self {
            IdealSpec::Principal(e) => e.support(),
            IdealSpec::RegionIdeal(a) => a.interior(),
            IdealSpec::Sum(a, b) => a.support().union(&b.support()).expect("same space"),
            IdealSpec::Intersection(a, b) => {
                a.support().intersect(&b.support()).expect("same space")
            }
            IdealSpec::DisjComp(a) => a.support().closure().complement(),
            IdealSpec::SequenceGenerated(rule) => rule.limit_support(),
        }
    }

    /// `S_n`: the ideal is the increasing union of `E(S_n)`.
    pub fn stage_support(&self, n: usize) -> Region {
        match self {
            IdealSpec::Sum(a, b) => a
                .stage_support(n)
                .union(&b.stage_support(n))
                .expect("same space"),
            IdealSpec::Intersection(a, b) => a
                .stage_support(n)
                .intersect(&b.stage_support(n))
                .expect("same space"),
            IdealSpec::SequenceGenerated(rule) => rule.stage_support(n),
            _ => self.support(),
        }
    }

    /// Whether the stage chain can grow at all.
    pub fn is_staged(&self) -> bool {
        match self {
            IdealSpec::Sum(a, b) | IdealSpec::Intersection(a, b) => a.is_staged() || b.is_staged(),
            IdealSpec::SequenceGenerated(rule) => !rule.attains_limit(),
            _ => false,
        }
    }

    /// The least stage, up to `cutoff`, at which the ideal already equals
    /// `E(support)`.
    pub fn determined_stage(&self, cutoff: usize) -> Option<usize> {
        if !self.is_staged() {
            return Some(1);
        }
        let full = self.support();
        (1..=cutoff).find(|&n| self.stage_support(n) == full)
    }

    /// The region `S` with `H = E(S)`, when the ideal is support-determined.
    pub fn canonical_region(&self, cutoff: usize) -> Option<Region> {
        self.determined_stage(cutoff).map(|_| self.support())
    }

    pub fn disjoint_complement(&self) -> IdealSpec {
        IdealSpec::RegionIdeal(self.support().closure().complement())
    }

    pub fn band_generated(&self) -> IdealSpec {
        IdealSpec::RegionIdeal(self.support().closure())
    }

    pub fn band_status(&self, cutoff: usize) -> BandStatus {
        if self.determined_stage(cutoff).is_none() {
            return BandStatus::NotBand;
        }
        let s = self.support();
        if s.is_clopen() {
            BandStatus::ProjectionBand
        } else if s.is_regular_open() {
            BandStatus::BandOnly
        } else {
            BandStatus::NotBand
        }
    }

    /// The band status together with the region facts that decide it.
    pub fn band_status_evidence(&self, cutoff: usize) -> (BandStatus, Vec<Evidence>) {
        let status = self.band_status(cutoff);
        let s = self.support();
        let ev = if self.determined_stage(cutoff).is_none() {
            let gap = s.difference(&self.stage_support(cutoff)).expect("same space");
            vec![Evidence::region_has(&gap, RegionPred::Nonempty)]
        } else {
            match status {
                BandStatus::ProjectionBand => vec![Evidence::region_has(&s, RegionPred::Clopen)],
                BandStatus::BandOnly => vec![
                    Evidence::region_has(&s, RegionPred::RegularOpen),
                    Evidence::region_has(&s.boundary(), RegionPred::Nonempty),
                ],
                BandStatus::NotBand => vec![Evidence::region_has(
                    &s.regularization().difference(&s).expect("same space"),
                    RegionPred::Nonempty,
                )],
            }
        };
        (status, ev)
    }

    pub fn band_status_report(&self, cutoff: usize) -> Report {
        let (status, ev) = self.band_status_evidence(cutoff);
        let claim = format!("{self} is {status}");
        Report::from_certificates(
            "ideal band-status",
            serde_json::json!({ "ideal": self, "cutoff": cutoff }),
            vec![Certificate::new("band_status", &claim, ev)],
            serde_json::json!(status),
        )
    }

    /// `(Pf, f - Pf)` for a projection band `H`.
    pub fn band_projection(&self, f: &PLFun, cutoff: usize) -> Result<(PLFun, PLFun)> {
        if **f.space() != **self.space() {
            return Err(Error::SpaceMismatch);
        }
        if self.band_status(cutoff) != BandStatus::ProjectionBand {
            return Err(Error::NotProjectionBand);
        }
        let pf = f.mask(&self.support())?;
        let rest = f.sub(&pf)?;
        Ok((pf, rest))
    }

    pub fn order_dense_status(&self) -> bool {
        self.support().is_dense()
    }

    /// Some `g ∈ H` with `0 < g ≤ f`, for `f > 0` in the sublattice.
    pub fn order_dense_witness(&self, sub: Sublattice, f: &PLFun, cutoff: usize) -> Result<PLFun> {
        if !f.is_nonneg() || f.is_zero() {
            return Err(Error::PreconditionViolated("f must be positive".into()));
        }
        sub.require(f)?;
        if !self.order_dense_status() {
            return Err(Error::NotOrderDense);
        }
        let space = f.space().clone();
        let supp = f.support();
        let stages = if self.is_staged() { cutoff } else { 1 };
        let w = (1..=stages)
            .map(|n| supp.intersect(&self.stage_support(n)).expect("same space"))
            .find(|w| !w.is_empty())
            .ok_or_else(|| Error::SizeLimit(format!("no stage up to {cutoff} meets supp f")))?;
        let (_, p) = w.iter().next().expect("nonempty");
        let window = if p.is_point() {
            Region::from_pieces(&space, vec![p.clone()])?
        } else {
            let zero = Rational::zero();
            let (mut lo, mut hi) = (p.lo.clone(), p.hi.clone());
            if lo < zero && hi > zero {
                if hi >= -lo.clone() {
                    lo = zero;
                } else {
                    hi = zero;
                }
            }
            let q = (&hi - &lo) / int(4);
            Region::from_pieces(&space, vec![Piece::open(&lo + &q, &hi - &q)])?
        };
        let bump = PLFun::bump_for(&window, None)?;
        f.meet(&bump)
    }

    /// Membership of `f` in this ideal, formed inside `sub`.
    pub fn member(&self, sub: Sublattice, f: &PLFun, cutoff: usize) -> Result<Membership> {
        if **f.space() != **self.space() {
            return Err(Error::SpaceMismatch);
        }
        sub.require(f)?;
        self.member_in(sub, f, cutoff)
    }

    fn member_in(&self, sub: Sublattice, f: &PLFun, cutoff: usize) -> Result<Membership> {
        match self {
            IdealSpec::Principal(e) => match f.ratio_bound(e)? {
                Some(b) => Ok(Membership {
                    verdict: MemberVerdict::In,
                    certificate: MemberCert::RatioBound { bound: RatStr(b) },
                }),
                None => escape(f, &e.support()),
            },
            IdealSpec::RegionIdeal(_) | IdealSpec::DisjComp(_) => by_support(f, &self.support()),
            IdealSpec::Intersection(a, b) => {
                let ma = a.member_in(sub, f, cutoff)?;
                let mb = b.member_in(sub, f, cutoff)?;
                Ok(Membership {
                    verdict: combine(ma.verdict, mb.verdict),
                    certificate: MemberCert::Both {
                        first: Box::new(ma),
                        second: Box::new(mb),
                    },
                })
            }
            IdealSpec::SequenceGenerated(rule) => {
                let limit = rule.limit_support();
                if !f.support().is_subset(&limit)? {
                    return escape(f, &limit);
                }
                for n in 1..=cutoff {
                    if let Some(b) = f.ratio_bound(&rule.nth(n))? {
                        return Ok(Membership {
                            verdict: MemberVerdict::In,
                            certificate: MemberCert::Stage {
                                stage: n,
                                bound: RatStr(b),
                            },
                        });
                    }
                }
                let last = rule.stage_support(cutoff);
                let x = f.support().point_outside(&last)?.expect("not contained");
                Ok(Membership {
                    verdict: MemberVerdict::Out,
                    certificate: MemberCert::CutoffExhausted {
                        cutoff,
                        point: RatStr(x),
                        stage_support: last,
                    },
                })
            }
            IdealSpec::Sum(a, b) => match sub {
                Sublattice::Full => self.sum_member_full(a, b, f, cutoff),
                Sublattice::EvenNearZero => self.sum_member_forced(sub, a, b, f, cutoff),
            },
        }
    }

    fn sum_member_full(
        &self,
        a: &IdealSpec,
        b: &IdealSpec,
        f: &PLFun,
        cutoff: usize,
    ) -> Result<Membership> {
        let limit = self.support();
        if !f.support().is_subset(&limit)? {
            return escape(f, &limit);
        }
        let stages = if self.is_staged() { cutoff } else { 1 };
        let supp = f.support();
        for n in 1..=stages {
            let (u, v) = (a.stage_support(n), b.stage_support(n));
            if supp.is_subset(&u.union(&v)?)? {
                let (g, h) = split_signed(f, &u, &v)?;
                let mg = a.member_in(Sublattice::Full, &g, cutoff)?;
                let mh = b.member_in(Sublattice::Full, &h, cutoff)?;
                return Ok(Membership {
                    verdict: combine(mg.verdict, mh.verdict),
                    certificate: MemberCert::Split {
                        stage: n,
                        first: g,
                        second: h,
                        first_cert: Box::new(mg),
                        second_cert: Box::new(mh),
                    },
                });
            }
        }
        let last = self.stage_support(stages);
        let x = supp.point_outside(&last)?.expect("not contained");
        Ok(Membership {
            verdict: MemberVerdict::Out,
            certificate: MemberCert::CutoffExhausted {
                cutoff,
                point: RatStr(x),
                stage_support: last,
            },
        })
    }

    fn sum_member_forced(
        &self,
        sub: Sublattice,
        a: &IdealSpec,
        b: &IdealSpec,
        f: &PLFun,
        cutoff: usize,
    ) -> Result<Membership> {
        let (u, v) = (a.support(), b.support());
        let limit = u.union(&v)?;
        if !f.support().is_subset(&limit)? {
            return escape(f, &limit);
        }
        let overlap = u.intersect(&v)?;
        if !overlap.is_empty() {
            return Ok(Membership {
                verdict: MemberVerdict::Unsupported,
                certificate: MemberCert::Overlap { overlap },
            });
        }
        let g = f.mask(&u)?;
        let h = f.sub(&g)?;
        let outside: Vec<usize> = [&g, &h]
            .iter()
            .enumerate()
            .filter(|(_, p)| !sub.contains(p).unwrap_or(false))
            .map(|(i, _)| i)
            .collect();
        if !outside.is_empty() {
            return Ok(Membership {
                verdict: MemberVerdict::Out,
                certificate: MemberCert::ForcedSplit {
                    first: g,
                    second: h,
                    first_region: u,
                    second_region: v,
                    outside,
                },
            });
        }
        let mg = a.member_in(sub, &g, cutoff)?;
        let mh = b.member_in(sub, &h, cutoff)?;
        Ok(Membership {
            verdict: combine(mg.verdict, mh.verdict),
            certificate: MemberCert::Split {
                stage: 1,
                first: g,
                second: h,
                first_cert: Box::new(mg),
                second_cert: Box::new(mh),
            },
        })
    }

    pub fn to_json(&self) -> IdealJson {
        match self {
            IdealSpec::Principal(e) => IdealJson::Principal { e: e.to_json() },
            IdealSpec::RegionIdeal(a) => IdealJson::RegionIdeal { region: a.to_json() },
            IdealSpec::Sum(a, b) => IdealJson::Sum {
                left: Box::new(a.to_json()),
                right: Box::new(b.to_json()),
            },
            IdealSpec::Intersection(a, b) => IdealJson::Intersection {
                left: Box::new(a.to_json()),
                right: Box::new(b.to_json()),
            },
            IdealSpec::DisjComp(a) => IdealJson::DisjComp {
                inner: Box::new(a.to_json()),
            },
            IdealSpec::SequenceGenerated(rule) => IdealJson::SequenceGenerated {
                rule: rule.to_json(),
            },
        }
    }

    pub fn from_json(space: &Arc<Space>, raw: &IdealJson) -> Result<IdealSpec> {
        let spec = match raw {
            IdealJson::Principal { e } => IdealSpec::principal(PLFun::from_json_on(space, e)?)?,
            IdealJson::RegionIdeal { region } => {
                IdealSpec::RegionIdeal(Region::from_json(space, region)?)
            }
            IdealJson::Sum { left, right } => IdealSpec::sum(
                IdealSpec::from_json(space, left)?,
                IdealSpec::from_json(space, right)?,
            ),
            IdealJson::Intersection { left, right } => IdealSpec::intersection(
                IdealSpec::from_json(space, left)?,
                IdealSpec::from_json(space, right)?,
            ),
            IdealJson::DisjComp { inner } => {
                IdealSpec::disj_comp(IdealSpec::from_json(space, inner)?)
            }
            IdealJson::SequenceGenerated { rule } => {
                IdealSpec::SequenceGenerated(IncreasingSeqRule::from_json(space, rule)?)
            }
        };
        Ok(spec)
    }
}

impl Serialize for IdealSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSpec::Principal(e) => write!(f, "I({e})"),
            IdealSpec::RegionIdeal(a) => write!(f, "E({a})"),
            IdealSpec::Sum(a, b) => write!(f, "({a} + {b})"),
            IdealSpec::Intersection(a, b) => write!(f, "({a} ∩ {b})"),
            IdealSpec::DisjComp(a) => write!(f, "{a}^d"),
            IdealSpec::SequenceGenerated(rule) => match rule {
                IncreasingSeqRule::Exhaustion { region } => write!(f, "seq(exhaust {region})"),
                IncreasingSeqRule::Multiples { e } => write!(f, "seq(n·{e})"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdealJson {
    Principal { e: PLFunJson },
    RegionIdeal { region: RegionJson },
    Sum { left: Box<IdealJson>, right: Box<IdealJson> },
    Intersection { left: Box<IdealJson>, right: Box<IdealJson> },
    DisjComp { inner: Box<IdealJson> },
    SequenceGenerated { rule: SeqRuleJson },
}

impl Membership {
    /// Atomic facts establishing the verdict for `f` in `h`.
    pub fn evidence(&self, h: &IdealSpec, sub: Sublattice, f: &PLFun, cutoff: usize) -> Result<Vec<Evidence>> {
        let mut out = Vec::new();
        self.collect(h, sub, f, cutoff, &mut out)?;
        Ok(out)
    }

    fn collect(&self, h: &IdealSpec, sub: Sublattice, f: &PLFun, cutoff: usize, out: &mut Vec<Evidence>) -> Result<()> {
        match (&self.certificate, h) {
            (MemberCert::RatioBound { bound }, IdealSpec::Principal(e)) => {
                out.push(Evidence::ratio_bound(f, e, &bound.0)?);
            }
            (MemberCert::SupportInclusion { within, .. }, _) => {
                out.push(Evidence::support_within(f, within)?);
                out.push(support_formula(h, within));
            }
            (MemberCert::Escape { point, within, .. }, _) => {
                out.push(Evidence::escapes_at(f, &point.0, within)?);
                out.push(support_formula(h, within));
            }
            (MemberCert::Stage { stage, bound }, IdealSpec::SequenceGenerated(rule)) => {
                out.push(Evidence::ratio_bound(f, &rule.nth(*stage), &bound.0)?);
            }
            (MemberCert::CutoffExhausted { point, stage_support, .. }, _) => {
                out.push(Evidence::escapes_at(f, &point.0, stage_support)?);
                out.push(Evidence::region_eq(&h.stage_support(cutoff), stage_support));
            }
            (
                MemberCert::Split {
                    first,
                    second,
                    first_cert,
                    second_cert,
                    ..
                },
                IdealSpec::Sum(a, b),
            ) => {
                out.push(Evidence::sum_eq(&[first, second], f)?);
                first_cert.collect(a, sub, first, cutoff, out)?;
                second_cert.collect(b, sub, second, cutoff, out)?;
            }
            (
                MemberCert::ForcedSplit {
                    first,
                    second,
                    first_region,
                    second_region,
                    outside,
                },
                IdealSpec::Sum(a, b),
            ) => {
                out.push(Evidence::sum_eq(&[first, second], f)?);
                out.push(Evidence::region_has(&first_region.intersect(second_region)?, RegionPred::Empty));
                out.push(Evidence::region_eq(&a.support(), first_region));
                out.push(Evidence::region_eq(&b.support(), second_region));
                out.push(Evidence::support_within(first, first_region)?);
                out.push(Evidence::support_within(second, second_region)?);
                for &i in outside {
                    let part = if i == 0 { first } else { second };
                    out.push(Evidence::outside_sublattice(sub, part)?);
                }
            }
            (MemberCert::Both { first, second }, IdealSpec::Intersection(a, b)) => {
                first.collect(a, sub, f, cutoff, out)?;
                second.collect(b, sub, f, cutoff, out)?;
            }
            (MemberCert::Overlap { .. }, _) => {}
            _ => {
                return Err(Error::PreconditionViolated(
                    "certificate does not match the ideal".into(),
                ))
            }
        }
        Ok(())
    }
}

/// Ties a region used in a certificate to the ideal it came from.
fn support_formula(h: &IdealSpec, within: &Region) -> Evidence {
    match h {
        IdealSpec::RegionIdeal(a) => Evidence::region_eq(&a.interior(), within),
        IdealSpec::Principal(e) => Evidence::support_equals(e, within),
        _ => Evidence::region_eq(&h.support(), within),
    }
}

/// Checks `I_{e∨f} = I_e + I_f` and `I_{e∧f} = I_e ∩ I_f`, at the level of
/// supports and by membership of random test functions.
pub fn principal_identities_check(e: &PLFun, f: &PLFun, samples: usize, seed: u64) -> Result<Report> {
    let join = e.join(f)?;
    let meet = e.meet(f)?;
    let (se, sf) = (e.support(), f.support());
    let mut certs = vec![
        Certificate::new(
            "join_support",
            "supp(e ∨ f) = supp e ∪ supp f",
            vec![Evidence::support_equals(&join, &se.union(&sf)?)],
        ),
        Certificate::new(
            "meet_support",
            "supp(e ∧ f) = supp e ∩ supp f",
            vec![Evidence::support_equals(&meet, &se.intersect(&sf)?)],
        ),
    ];
    let pe = IdealSpec::principal(e.clone())?;
    let pf = IdealSpec::principal(f.clone())?;
    let pairs = [
        ("join_membership", "I(e ∨ f) and I(e) + I(f) have the same members", IdealSpec::principal(join)?, IdealSpec::sum(pe.clone(), pf.clone())),
        ("meet_membership", "I(e ∧ f) and I(e) ∩ I(f) have the same members", IdealSpec::principal(meet)?, IdealSpec::intersection(pe, pf)),
    ];
    let space = e.space().clone();
    let mut gen = Gen::new(seed);
    let tests: Vec<PLFun> = (0..samples)
        .map(|_| {
            let u = gen.open_region(&space, 3);
            let g = gen.pl(&space, 4, 3);
            let b = PLFun::bump_for(&u, None).expect("open region");
            g.abs().meet(&b).expect("same space")
        })
        .collect();
    for (name, claim, lhs, rhs) in pairs {
        let mut evidence = Vec::new();
        let mut agree = 0;
        let mut counterexample = serde_json::Value::Null;
        for g in &tests {
            let ml = lhs.member(Sublattice::Full, g, DEFAULT_CUTOFF)?;
            let mr = rhs.member(Sublattice::Full, g, DEFAULT_CUTOFF)?;
            if ml.verdict == mr.verdict {
                agree += 1;
            } else if counterexample.is_null() {
                counterexample = serde_json::json!({ "g": g, "lhs": ml.verdict, "rhs": mr.verdict });
            }
            evidence.extend(ml.evidence(&lhs, Sublattice::Full, g, DEFAULT_CUTOFF)?);
            evidence.extend(mr.evidence(&rhs, Sublattice::Full, g, DEFAULT_CUTOFF)?);
            evidence.push(Evidence::same_verdict(ml.verdict, mr.verdict));
        }
        certs.push(Certificate::new(name, claim, evidence).with_detail(serde_json::json!({
            "samples": tests.len(),
            "agreements": agree,
            "counterexample": counterexample,
        })));
    }
    Ok(Report::from_certificates(
        "check principal",
        serde_json::json!({ "e": e, "f": f, "samples": samples, "seed": seed }),
        certs,
        serde_json::Value::Null,
    ))
}

/// `(E' ∩ J)^d` taken inside `E'`, which is `E' ∩ (E' ∩ J)^d`.
pub fn relative_disjoint_complement(within: &IdealSpec, j: &IdealSpec) -> IdealSpec {
    IdealSpec::intersection(
        within.clone(),
        IdealSpec::intersection(within.clone(), j.clone()).disjoint_complement(),
    )
}

/// Supports of `t⁺`-style catalog functions used in several places.
pub fn tplus(space: &Arc<Space>) -> PLFun {
    PLFun::identity(space).pos_part()
}
