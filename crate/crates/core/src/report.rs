//! Reports and self-contained, recheckable evidence.
//!
//! Every certificate carries a list of atomic [`Evidence`] facts. Each fact
//! records the data it speaks about and whether it held when the report was
//! produced. [`Report::recheck`] evaluates every fact again from that data
//! alone, without repeating the construction that produced it.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ideals::{MemberVerdict, Sublattice};
use crate::pl::{PLFun, PLFunJson};
use crate::rational::{RatStr, Rational};
use crate::region::{Region, RegionJson};
use crate::space::Space;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionPred {
    Open,
    Closed,
    Clopen,
    RegularOpen,
    Dense,
    Empty,
    Nonempty,
}

impl RegionPred {
    pub fn eval(self, r: &Region) -> bool {
        match self {
            RegionPred::Open => r.is_open(),
            RegionPred::Closed => r.is_closed(),
            RegionPred::Clopen => r.is_clopen(),
            RegionPred::RegularOpen => r.is_regular_open(),
            RegionPred::Dense => r.is_dense(),
            RegionPred::Empty => r.is_empty(),
            RegionPred::Nonempty => !r.is_empty(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Gt,
    Ge,
}

impl Cmp {
    pub fn eval(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Eq => a == b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
        }
    }
}

/// Facts about the finite lattice recorded in a report's inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum LatticeFact {
    IsLattice,
    MissingBound { a: usize, b: usize, which: String },
    Distributive,
    DistributivityFails { p: usize, q: usize, r: usize },
    PseudoComplement { p: usize, pstar: usize },
    /// `elements` are exactly the fixed points of `p ↦ p**`, and they form
    /// a Boolean algebra under `∧` and `(p* ∧ q*)*`.
    Skeleton { elements: Vec<usize> },
    /// `elements` are exactly the complemented elements, closed under `∧`,
    /// `∨`, with the De Morgan laws for `*`.
    Complemented { elements: Vec<usize> },
    /// The pseudo-complement identities, including the relative ones on
    /// every interval `[0, r]`.
    GlivenkoIdentities,
    /// The lattice has exactly `count` ideals, all principal, and the ideal
    /// lattice operations are elementwise joins and intersections.
    IdealLattice { count: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Evidence {
    /// `lhs ≤ rhs` pointwise.
    Le { lhs: PLFunJson, rhs: PLFunJson, holds: bool },
    Equal { lhs: PLFunJson, rhs: PLFunJson, holds: bool },
    /// `Σ parts = total`.
    SumEq { parts: Vec<PLFunJson>, total: PLFunJson, holds: bool },
    /// `|a| ∧ |b| = 0`.
    Disjoint { a: PLFunJson, b: PLFunJson, holds: bool },
    ValueAt { f: PLFunJson, x: RatStr, value: RatStr, holds: bool },
    SupportWithin { f: PLFunJson, region: RegionJson, holds: bool },
    SupportEquals { f: PLFunJson, region: RegionJson, holds: bool },
    RegionSubset { space: Space, a: RegionJson, b: RegionJson, holds: bool },
    RegionEq { space: Space, a: RegionJson, b: RegionJson, holds: bool },
    RegionHas { space: Space, region: RegionJson, pred: RegionPred, holds: bool },
    /// `f(x) ≠ 0` while `x ∉ region`, so `supp f ⊄ region`.
    EscapesAt { f: PLFunJson, x: RatStr, region: RegionJson, holds: bool },
    /// `|f| ≤ bound · e`.
    RatioBound { f: PLFunJson, e: PLFunJson, bound: RatStr, holds: bool },
    InSublattice { sublattice: Sublattice, f: PLFunJson, holds: bool },
    OutsideSublattice { sublattice: Sublattice, f: PLFunJson, holds: bool },
    Compare { lhs: RatStr, cmp: Cmp, rhs: RatStr, holds: bool },
    /// Two membership verdicts, each established by its own evidence,
    /// coincide.
    SameVerdict { lhs: MemberVerdict, rhs: MemberVerdict, holds: bool },
    Lattice { fact: LatticeFact, holds: bool },
}

fn fun(raw: &PLFunJson) -> Result<PLFun> {
    PLFun::from_json(raw)
}

fn region_on(space: &Arc<Space>, raw: &RegionJson) -> Result<Region> {
    Region::from_json(space, raw)
}

impl Evidence {
    pub fn le(lhs: &PLFun, rhs: &PLFun) -> Result<Evidence> {
        Ok(Evidence::Le {
            holds: lhs.le(rhs)?,
            lhs: lhs.to_json(),
            rhs: rhs.to_json(),
        })
    }

    pub fn equal(lhs: &PLFun, rhs: &PLFun) -> Evidence {
        Evidence::Equal {
            holds: lhs == rhs,
            lhs: lhs.to_json(),
            rhs: rhs.to_json(),
        }
    }

    pub fn sum_eq(parts: &[&PLFun], total: &PLFun) -> Result<Evidence> {
        let mut acc = PLFun::zero(total.space());
        for p in parts {
            acc = acc.add(p)?;
        }
        Ok(Evidence::SumEq {
            holds: acc == *total,
            parts: parts.iter().map(|p| p.to_json()).collect(),
            total: total.to_json(),
        })
    }

    pub fn disjoint(a: &PLFun, b: &PLFun) -> Result<Evidence> {
        Ok(Evidence::Disjoint {
            holds: a.disjoint(b)?,
            a: a.to_json(),
            b: b.to_json(),
        })
    }

    pub fn value_at(f: &PLFun, x: &Rational, value: &Rational) -> Result<Evidence> {
        Ok(Evidence::ValueAt {
            holds: f.eval(x)? == *value,
            f: f.to_json(),
            x: RatStr(x.clone()),
            value: RatStr(value.clone()),
        })
    }

    pub fn support_within(f: &PLFun, region: &Region) -> Result<Evidence> {
        Ok(Evidence::SupportWithin {
            holds: f.support().is_subset(region)?,
            f: f.to_json(),
            region: region.to_json(),
        })
    }

    pub fn support_equals(f: &PLFun, region: &Region) -> Evidence {
        Evidence::SupportEquals {
            holds: f.support() == *region,
            f: f.to_json(),
            region: region.to_json(),
        }
    }

    pub fn region_subset(a: &Region, b: &Region) -> Result<Evidence> {
        Ok(Evidence::RegionSubset {
            holds: a.is_subset(b)?,
            space: (**a.space()).clone(),
            a: a.to_json(),
            b: b.to_json(),
        })
    }

    pub fn region_eq(a: &Region, b: &Region) -> Evidence {
        Evidence::RegionEq {
            holds: a == b,
            space: (**a.space()).clone(),
            a: a.to_json(),
            b: b.to_json(),
        }
    }

    pub fn region_has(region: &Region, pred: RegionPred) -> Evidence {
        Evidence::RegionHas {
            holds: pred.eval(region),
            space: (**region.space()).clone(),
            region: region.to_json(),
            pred,
        }
    }

    pub fn escapes_at(f: &PLFun, x: &Rational, region: &Region) -> Result<Evidence> {
        Ok(Evidence::EscapesAt {
            holds: !f.eval(x)?.is_zero() && !region.contains(x),
            f: f.to_json(),
            x: RatStr(x.clone()),
            region: region.to_json(),
        })
    }

    pub fn ratio_bound(f: &PLFun, e: &PLFun, bound: &Rational) -> Result<Evidence> {
        Ok(Evidence::RatioBound {
            holds: f.abs().le(&e.scale(bound))?,
            f: f.to_json(),
            e: e.to_json(),
            bound: RatStr(bound.clone()),
        })
    }

    pub fn in_sublattice(sublattice: Sublattice, f: &PLFun) -> Result<Evidence> {
        Ok(Evidence::InSublattice {
            holds: sublattice.contains(f)?,
            sublattice,
            f: f.to_json(),
        })
    }

    pub fn outside_sublattice(sublattice: Sublattice, f: &PLFun) -> Result<Evidence> {
        Ok(Evidence::OutsideSublattice {
            holds: !sublattice.contains(f)?,
            sublattice,
            f: f.to_json(),
        })
    }

    pub fn compare(lhs: &Rational, cmp: Cmp, rhs: &Rational) -> Evidence {
        Evidence::Compare {
            holds: cmp.eval(lhs, rhs),
            lhs: RatStr(lhs.clone()),
            cmp,
            rhs: RatStr(rhs.clone()),
        }
    }

    pub fn same_verdict(lhs: MemberVerdict, rhs: MemberVerdict) -> Evidence {
        Evidence::SameVerdict {
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }

    pub fn lattice(fact: LatticeFact, holds: bool) -> Evidence {
        Evidence::Lattice { fact, holds }
    }

    pub fn holds(&self) -> bool {
        match self {
            Evidence::Le { holds, .. }
            | Evidence::Equal { holds, .. }
            | Evidence::SumEq { holds, .. }
            | Evidence::Disjoint { holds, .. }
            | Evidence::ValueAt { holds, .. }
            | Evidence::SupportWithin { holds, .. }
            | Evidence::SupportEquals { holds, .. }
            | Evidence::RegionSubset { holds, .. }
            | Evidence::RegionEq { holds, .. }
            | Evidence::RegionHas { holds, .. }
            | Evidence::EscapesAt { holds, .. }
            | Evidence::RatioBound { holds, .. }
            | Evidence::InSublattice { holds, .. }
            | Evidence::OutsideSublattice { holds, .. }
            | Evidence::Compare { holds, .. }
            | Evidence::SameVerdict { holds, .. }
            | Evidence::Lattice { holds, .. } => *holds,
        }
    }

    /// Evaluates the fact again from its recorded data.
    pub fn evaluate(&self, leq: Option<&[Vec<bool>]>) -> Result<bool> {
        Ok(match self {
            Evidence::Le { lhs, rhs, .. } => fun(lhs)?.le(&fun(rhs)?)?,
            Evidence::Equal { lhs, rhs, .. } => fun(lhs)? == fun(rhs)?,
            Evidence::SumEq { parts, total, .. } => {
                let total = fun(total)?;
                let mut acc = PLFun::zero(total.space());
                for p in parts {
                    acc = acc.add(&PLFun::from_json_on(total.space(), p)?)?;
                }
                acc == total
            }
            Evidence::Disjoint { a, b, .. } => fun(a)?.disjoint(&fun(b)?)?,
            Evidence::ValueAt { f, x, value, .. } => fun(f)?.eval(&x.0)? == value.0,
            Evidence::SupportWithin { f, region, .. } => {
                let f = fun(f)?;
                f.support().is_subset(&region_on(f.space(), region)?)?
            }
            Evidence::SupportEquals { f, region, .. } => {
                let f = fun(f)?;
                f.support() == region_on(f.space(), region)?
            }
            Evidence::RegionSubset { space, a, b, .. } => {
                let s = Arc::new(space.clone());
                region_on(&s, a)?.is_subset(&region_on(&s, b)?)?
            }
            Evidence::RegionEq { space, a, b, .. } => {
                let s = Arc::new(space.clone());
                region_on(&s, a)? == region_on(&s, b)?
            }
            Evidence::RegionHas {
                space, region, pred, ..
            } => pred.eval(&region_on(&Arc::new(space.clone()), region)?),
            Evidence::EscapesAt { f, x, region, .. } => {
                let f = fun(f)?;
                !f.eval(&x.0)?.is_zero() && !region_on(f.space(), region)?.contains(&x.0)
            }
            Evidence::RatioBound { f, e, bound, .. } => {
                let f = fun(f)?;
                let e = PLFun::from_json_on(f.space(), e)?;
                f.abs().le(&e.scale(&bound.0))?
            }
            Evidence::InSublattice { sublattice, f, .. } => sublattice.contains(&fun(f)?)?,
            Evidence::OutsideSublattice { sublattice, f, .. } => !sublattice.contains(&fun(f)?)?,
            Evidence::Compare { lhs, cmp, rhs, .. } => cmp.eval(&lhs.0, &rhs.0),
            Evidence::SameVerdict { lhs, rhs, .. } => lhs == rhs,
            Evidence::Lattice { fact, .. } => {
                let leq = leq.ok_or_else(|| {
                    Error::Json("lattice evidence needs inputs.lattice.leq".into())
                })?;
                crate::finlat::recheck_fact(leq, fact)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub claim: String,
    pub passed: bool,
    pub evidence: Vec<Evidence>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Certificate {
    pub fn new(name: &str, claim: &str, evidence: Vec<Evidence>) -> Certificate {
        Certificate {
            name: name.to_string(),
            claim: claim.to_string(),
            passed: evidence.iter().all(Evidence::holds),
            evidence,
            detail: Value::Null,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Certificate {
        self.detail = detail;
        self
    }

    /// A certificate whose outcome is decided by the caller, for checks that
    /// carry their data only as detail.
    pub fn decided(name: &str, claim: &str, passed: bool, detail: Value) -> Certificate {
        Certificate {
            name: name.to_string(),
            claim: claim.to_string(),
            passed,
            evidence: Vec::new(),
            detail,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// False when the certificates establish a negative answer, such as a
    /// non-membership; the status is then `fail` even though they all pass.
    #[serde(default = "yes")]
    pub affirmative: bool,
    pub result: Value,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub certificates: Vec<Certificate>,
    pub verdict: Verdict,
    pub timings: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecheckOutcome {
    pub certificates: usize,
    pub evidence: usize,
    pub mismatches: Vec<String>,
    pub verdict_matches: bool,
}

impl RecheckOutcome {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.verdict_matches
    }
}

impl Report {
    /// A report whose verdict passes iff every certificate passed.
    pub fn from_certificates(command: &str, inputs: Value, certificates: Vec<Certificate>, result: Value) -> Report {
        Report::answer(command, inputs, certificates, true, result)
    }

    /// A report answering a yes/no question: the verdict passes iff every
    /// certificate passed and the established answer is `affirmative`.
    pub fn answer(command: &str, inputs: Value, certificates: Vec<Certificate>, affirmative: bool, result: Value) -> Report {
        let status = if affirmative && certificates.iter().all(|c| c.passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            command: command.to_string(),
            inputs,
            certificates,
            verdict: Verdict {
                status,
                affirmative,
                result,
            },
            timings: Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.status == Status::Pass
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Evaluates every evidence item again and checks that the recorded
    /// outcomes, certificate flags and verdict are consistent with it.
    pub fn recheck(&self) -> RecheckOutcome {
        let leq: Option<Vec<Vec<bool>>> = self
            .inputs
            .get("lattice")
            .and_then(|l| l.get("leq"))
            .and_then(|v| serde_json::from_value(v.clone()).ok());
        let mut mismatches = Vec::new();
        let mut evidence = 0;
        for (ci, cert) in self.certificates.iter().enumerate() {
            let mut all = true;
            for (ei, ev) in cert.evidence.iter().enumerate() {
                evidence += 1;
                match ev.evaluate(leq.as_deref()) {
                    Ok(v) => {
                        if v != ev.holds() {
                            mismatches.push(format!(
                                "certificate {ci} ({}) evidence {ei}: recorded {}, recomputed {v}",
                                cert.name,
                                ev.holds()
                            ));
                        }
                        all &= v;
                    }
                    Err(e) => {
                        mismatches.push(format!(
                            "certificate {ci} ({}) evidence {ei}: {e}",
                            cert.name
                        ));
                        all = false;
                    }
                }
            }
            if !cert.evidence.is_empty() && all != cert.passed {
                mismatches.push(format!(
                    "certificate {ci} ({}) is marked {} but its evidence says {all}",
                    cert.name, cert.passed
                ));
            }
        }
        let all_passed = self.certificates.iter().all(|c| c.passed);
        let verdict_matches =
            (self.verdict.status == Status::Pass) == (all_passed && self.verdict.affirmative);
        RecheckOutcome {
            certificates: self.certificates.len(),
            evidence,
            mismatches,
            verdict_matches,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn evidence_round_trips_and_rechecks() {
        let s = Space::interval(int(-1), int(1)).unwrap();
        let t = PLFun::identity(&s);
        let cert = Certificate::new(
            "split",
            "the parts add up",
            vec![
                Evidence::sum_eq(&[&t.pos_part(), &t.neg_part().neg()], &t).unwrap(),
                Evidence::disjoint(&t.pos_part(), &t.neg_part()).unwrap(),
                Evidence::escapes_at(&t, &int(1), &Region::parse(&s, "[-1,0]").unwrap()).unwrap(),
            ],
        );
        assert!(cert.passed);
        let report = Report::from_certificates("test", Value::Null, vec![cert], Value::Null);
        let text = report.to_json_string();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert!(back.recheck().ok());
    }

    #[test]
    fn tampered_evidence_is_detected() {
        let s = Space::interval(int(0), int(1)).unwrap();
        let one = PLFun::constant(&s, int(1));
        let mut ev = Evidence::le(&one, &one.scale(&int(2))).unwrap();
        if let Evidence::Le { holds, .. } = &mut ev {
            *holds = false;
        }
        let cert = Certificate::new("le", "one is below two", vec![ev]);
        let report = Report::from_certificates("test", Value::Null, vec![cert], Value::Null);
        let out = report.recheck();
        assert!(!out.ok());
        assert_eq!(out.mismatches.len(), 2);
    }
}
