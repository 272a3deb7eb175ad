//! Catalog sequences: increasing generators and monotone region families.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::{PLFun, PLFunJson};
use crate::rational::{int, RatStr, Rational};
use crate::region::{Region, RegionJson};
use crate::space::Space;

/// An increasing sequence `h_1 ≤ h_2 ≤ ...` of nonnegative functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IncreasingSeqRule {
    /// `h_n = min(1, max(0, n(n+1)(d - 1/(n+1))))` where `d` is the distance
    /// to the complement of the open region `u`. The supports exhaust `u`.
    Exhaustion { region: Region },
    /// `h_n = n·e`; every stage has the support of `e`.
    Multiples { e: PLFun },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SeqRuleJson {
    Exhaustion { region: RegionJson },
    Multiples { e: PLFunJson },
}

impl IncreasingSeqRule {
    pub fn exhaustion(u: &Region) -> Result<IncreasingSeqRule> {
        if !u.is_open() {
            return Err(Error::InvalidSequenceRule(format!(
                "exhaustion needs an open region, got {u}"
            )));
        }
        Ok(IncreasingSeqRule::Exhaustion { region: u.clone() })
    }

    pub fn multiples(e: PLFun) -> Result<IncreasingSeqRule> {
        if !e.is_nonneg() {
            return Err(Error::InvalidSequenceRule(
                "multiples needs a nonnegative generator".into(),
            ));
        }
        Ok(IncreasingSeqRule::Multiples { e })
    }

    pub fn space(&self) -> &Arc<Space> {
        match self {
            IncreasingSeqRule::Exhaustion { region } => region.space(),
            IncreasingSeqRule::Multiples { e } => e.space(),
        }
    }

    /// The `n`-th term, `n ≥ 1`.
    pub fn nth(&self, n: usize) -> PLFun {
        let n = n.max(1) as i64;
        match self {
            IncreasingSeqRule::Exhaustion { region } => {
                let space = region.space();
                match PLFun::distance_to(&region.complement()) {
                    None => PLFun::constant(space, Rational::one()),
                    Some(d) => {
                        let shifted = d
                            .sub(&PLFun::constant(space, Rational::one() / int(n + 1)))
                            .expect("same space");
                        shifted
                            .scale(&int(n * (n + 1)))
                            .pos_part()
                            .meet(&PLFun::constant(space, Rational::one()))
                            .expect("same space")
                    }
                }
            }
            IncreasingSeqRule::Multiples { e } => e.scale(&int(n)),
        }
    }

    pub fn stage_support(&self, n: usize) -> Region {
        self.nth(n).support()
    }

    /// The union of all stage supports.
    pub fn limit_support(&self) -> Region {
        match self {
            IncreasingSeqRule::Exhaustion { region } => region.clone(),
            IncreasingSeqRule::Multiples { e } => e.support(),
        }
    }

    /// Whether some stage support already equals the limit.
    pub fn attains_limit(&self) -> bool {
        match self {
            IncreasingSeqRule::Exhaustion { region } => region.is_clopen(),
            IncreasingSeqRule::Multiples { .. } => true,
        }
    }

    /// Checks monotonicity and support containment for the first `upto`
    /// terms.
    pub fn validate(&self, upto: usize) -> Result<()> {
        let limit = self.limit_support();
        let mut prev = self.nth(1);
        for n in 1..=upto {
            let cur = self.nth(n);
            if !cur.is_nonneg() {
                return Err(Error::InvalidSequenceRule(format!("term {n} is not nonnegative")));
            }
            if n > 1 && !prev.le(&cur)? {
                return Err(Error::InvalidSequenceRule(format!("term {n} is below term {}", n - 1)));
            }
            if !cur.support().is_subset(&limit)? {
                return Err(Error::InvalidSequenceRule(format!(
                    "support of term {n} leaves the declared limit"
                )));
            }
            prev = cur;
        }
        Ok(())
    }

    pub fn to_json(&self) -> SeqRuleJson {
        match self {
            IncreasingSeqRule::Exhaustion { region } => SeqRuleJson::Exhaustion {
                region: region.to_json(),
            },
            IncreasingSeqRule::Multiples { e } => SeqRuleJson::Multiples { e: e.to_json() },
        }
    }

    pub fn from_json(space: &Arc<Space>, raw: &SeqRuleJson) -> Result<IncreasingSeqRule> {
        match raw {
            SeqRuleJson::Exhaustion { region } => {
                IncreasingSeqRule::exhaustion(&Region::from_json(space, region)?)
            }
            SeqRuleJson::Multiples { e } => {
                IncreasingSeqRule::multiples(PLFun::from_json_on(space, e)?)
            }
        }
    }
}

impl Serialize for IncreasingSeqRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A decreasing family of open regions with known intersection.
///
/// Keeping the left side gives `X ∩ (-∞, cut + step/n)`, shrinking to
/// `X ∩ (-∞, cut]`; keeping the right side mirrors it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSequence {
    space: Arc<Space>,
    cut: Rational,
    step: Rational,
    keep: Side,
}

impl RegionSequence {
    pub fn new(space: &Arc<Space>, cut: Rational, step: Rational, keep: Side) -> Result<RegionSequence> {
        if step <= Rational::zero() {
            return Err(Error::InvalidSequenceRule("step must be positive".into()));
        }
        Ok(RegionSequence {
            space: space.clone(),
            cut,
            step,
            keep,
        })
    }

    pub fn cut(&self) -> &Rational {
        &self.cut
    }

    pub fn keep(&self) -> Side {
        self.keep
    }

    fn far(&self) -> (Rational, Rational) {
        let comps = self.space.components();
        (&comps[0].0 - int(1), &comps[comps.len() - 1].1 + int(1))
    }

    pub fn nth(&self, n: usize) -> Region {
        let d = &self.step / int(n.max(1) as i64);
        let (lo, hi) = self.far();
        match self.keep {
            Side::Left => Region::open_interval_clipped(&self.space, &lo, &(&self.cut + d)),
            Side::Right => Region::open_interval_clipped(&self.space, &(&self.cut - d), &hi),
        }
    }

    /// The intersection of all terms.
    pub fn intersection(&self) -> Region {
        let (lo, hi) = self.far();
        let open = match self.keep {
            Side::Left => Region::open_interval_clipped(&self.space, &lo, &self.cut),
            Side::Right => Region::open_interval_clipped(&self.space, &self.cut, &hi),
        };
        if self.space.contains(&self.cut) {
            let pt = Region::interval(&self.space, self.cut.clone(), self.cut.clone(), true, true)
                .expect("point of the space");
            open.union(&pt).expect("same space")
        } else {
            open
        }
    }

    /// Checks that the first `upto` terms decrease and contain the
    /// intersection.
    pub fn validate(&self, upto: usize) -> Result<()> {
        let lim = self.intersection();
        for n in 1..=upto {
            let cur = self.nth(n);
            if !self.nth(n + 1).is_subset(&cur)? || !lim.is_subset(&cur)? {
                return Err(Error::InvalidSequenceRule(format!("term {n} breaks monotonicity")));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "cut": RatStr(self.cut.clone()),
            "step": RatStr(self.step.clone()),
            "keep": self.keep,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn unit() -> Arc<Space> {
        Space::interval(int(-1), int(1)).unwrap()
    }

    #[test]
    fn exhaustion_of_half_open_interval() {
        let s = unit();
        let rule = IncreasingSeqRule::exhaustion(&Region::parse(&s, "(0,1]").unwrap()).unwrap();
        let h3 = rule.nth(3);
        assert_eq!(h3.eval(&rat(1, 4)).unwrap(), int(0));
        assert_eq!(h3.eval(&rat(1, 3)).unwrap(), int(1));
        assert_eq!(h3.eval(&rat(7, 24)).unwrap(), rat(1, 2));
        assert_eq!(rule.stage_support(3), Region::parse(&s, "(1/4,1]").unwrap());
        rule.validate(20).unwrap();
        assert!(!rule.attains_limit());
    }

    #[test]
    fn exhaustion_rejects_non_open() {
        let s = unit();
        assert!(IncreasingSeqRule::exhaustion(&Region::parse(&s, "[0,1]").unwrap()).is_err());
    }

    #[test]
    fn shrinking_neighbourhoods() {
        let s = unit();
        let seq = RegionSequence::new(&s, int(0), int(1), Side::Left).unwrap();
        assert_eq!(seq.nth(4), Region::parse(&s, "[-1,1/4)").unwrap());
        assert_eq!(seq.intersection(), Region::parse(&s, "[-1,0]").unwrap());
        assert_eq!(seq.intersection().interior(), Region::parse(&s, "[-1,0)").unwrap());
        seq.validate(64).unwrap();
        let right = RegionSequence::new(&s, int(0), int(1), Side::Right).unwrap();
        assert_eq!(right.intersection(), Region::parse(&s, "[0,1]").unwrap());
    }
}
