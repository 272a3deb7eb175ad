//! Tents, exact ratio bounds and the Riesz split.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pl::PLFun;
use crate::rational::{midpoint, Rational};
use crate::region::{Piece, Region};
use crate::space::Space;

impl PLFun {
    /// A function with `0 ≤ e ≤ 1` and support exactly `u`, equal to 1 on `k`.
    ///
    /// Each piece of `u` carries a tent peaking at its midpoint, or a
    /// trapezoid that is flat over the part of `cl k` inside the piece. An end
    /// of a piece that is closed (a component endpoint) keeps the value 1.
    pub fn bump_for(u: &Region, k: Option<&Region>) -> Result<PLFun> {
        if !u.is_open() {
            return Err(Error::NotOpen(u.to_string()));
        }
        let space = u.space().clone();
        let kc = match k {
            Some(k) => {
                if **k.space() != *space {
                    return Err(Error::SpaceMismatch);
                }
                let kc = k.closure();
                if !kc.is_subset(u)? {
                    return Err(Error::KNotInsideU);
                }
                Some(kc)
            }
            None => None,
        };
        let one = Rational::one();
        let mut nodes = Vec::new();
        for (ci, p) in u.iter() {
            if p.is_point() {
                nodes.push((p.lo.clone(), one.clone()));
                continue;
            }
            let flat = kc.as_ref().and_then(|kc| {
                let inside: Vec<&Piece> = kc
                    .pieces(ci)
                    .iter()
                    .filter(|q| p.contains(&q.lo))
                    .collect();
                Some((inside.first()?.lo.clone(), inside.last()?.hi.clone()))
            });
            let (f_lo, f_hi) = match (flat, p.lo_closed, p.hi_closed) {
                (Some(f), _, _) => f,
                (None, true, true) => (p.lo.clone(), p.hi.clone()),
                (None, true, false) => (p.lo.clone(), p.lo.clone()),
                (None, false, true) => (p.hi.clone(), p.hi.clone()),
                (None, false, false) => {
                    let m = midpoint(&p.lo, &p.hi);
                    (m.clone(), m)
                }
            };
            let lo_val = if p.lo_closed { one.clone() } else { Rational::zero() };
            let hi_val = if p.hi_closed { one.clone() } else { Rational::zero() };
            nodes.push((p.lo.clone(), lo_val));
            nodes.push((f_lo, one.clone()));
            nodes.push((f_hi, one.clone()));
            nodes.push((p.hi.clone(), hi_val));
        }
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        // neighbouring open pieces may share an endpoint, both with value 0
        nodes.dedup();
        PLFun::from_nodes(&space, &nodes)
    }

    /// Distance to a closed region, `+∞` handled by returning `None` when the
    /// region is empty.
    pub fn distance_to(c: &Region) -> Option<PLFun> {
        let space = c.space().clone();
        let mut best: Option<PLFun> = None;
        for (_, q) in c.iter() {
            let d = distance_to_interval(&space, &q.lo, &q.hi);
            best = Some(match best {
                None => d,
                Some(b) => b.meet(&d).expect("same space"),
            });
        }
        best
    }

    /// Least `n ≥ 0` with `|self| ≤ n·e`, if any.
    ///
    /// On each segment of the merged grid both `|f|` and `e` are affine, so
    /// `|f|/e` is monotone there and its supremum is an endpoint value or, at
    /// a zero of `e`, the quotient of one-sided slopes.
    pub fn ratio_bound(&self, e: &PLFun) -> Result<Option<Rational>> {
        if !e.is_nonneg() {
            return Err(Error::PreconditionViolated("e must be nonnegative".into()));
        }
        ratio_sup(&self.abs(), e, true)
    }

    /// `sup |f|/e` over the support of `e`, ignoring where `e` vanishes;
    /// `None` if the quotient is unbounded there.
    pub fn ratio_sup_on_support(&self, e: &PLFun) -> Result<Option<Rational>> {
        if !e.is_nonneg() {
            return Err(Error::PreconditionViolated("e must be nonnegative".into()));
        }
        ratio_sup(&self.abs(), e, false)
    }

    /// `(f ∧ g1, f - f ∧ g1)` for `0 ≤ f ≤ g1 + g2`.
    pub fn riesz_split(&self, g1: &PLFun, g2: &PLFun) -> Result<(PLFun, PLFun)> {
        if !g1.is_nonneg() || !g2.is_nonneg() {
            return Err(Error::PreconditionViolated("bounds must be nonnegative".into()));
        }
        if !self.is_nonneg() {
            return Err(Error::PreconditionViolated("f must be nonnegative".into()));
        }
        if !self.le(&g1.add(g2)?)? {
            return Err(Error::PreconditionViolated("f exceeds g1 + g2".into()));
        }
        let f1 = self.meet(g1)?;
        let f2 = self.sub(&f1)?;
        Ok((f1, f2))
    }
}

fn distance_to_interval(space: &Arc<Space>, lo: &Rational, hi: &Rational) -> PLFun {
    let comps = space
        .components()
        .iter()
        .map(|(a, b)| {
            let mut xs = vec![a.clone(), b.clone()];
            for x in [lo, hi] {
                if x > a && x < b {
                    xs.push(x.clone());
                }
            }
            xs.sort();
            xs.dedup();
            xs.into_iter()
                .map(|x| {
                    let d = if &x < lo {
                        lo - &x
                    } else if &x > hi {
                        &x - hi
                    } else {
                        Rational::zero()
                    };
                    (x, d)
                })
                .collect()
        })
        .collect();
    PLFun::new(space, comps).expect("valid breakpoints")
}

fn ratio_sup(f: &PLFun, e: &PLFun, require_inclusion: bool) -> Result<Option<Rational>> {
    // `f` is nonnegative here
    if **f.space() != **e.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut best = Rational::zero();
    for ci in 0..f.space().len() {
        let mut grid = Vec::new();
        for (x, _) in f.breakpoints(ci).iter().chain(e.breakpoints(ci)) {
            grid.push(x.clone());
        }
        grid.sort();
        grid.dedup();
        let fv: Vec<Rational> = grid.iter().map(|x| f.eval_in(ci, x)).collect();
        let ev: Vec<Rational> = grid.iter().map(|x| e.eval_in(ci, x)).collect();
        for k in 0..grid.len() {
            if ev[k].is_positive() {
                best = best.max(&fv[k] / &ev[k]);
            } else if fv[k].is_positive() {
                let near_support = (k > 0 && ev[k - 1].is_positive())
                    || (k + 1 < grid.len() && ev[k + 1].is_positive());
                if require_inclusion || near_support {
                    return Ok(None);
                }
            }
        }
        for k in 0..grid.len().saturating_sub(1) {
            let (e0, e1) = (&ev[k], &ev[k + 1]);
            let (f0, f1) = (&fv[k], &fv[k + 1]);
            if e0.is_zero() && e1.is_zero() {
                if require_inclusion && (f0.is_positive() || f1.is_positive()) {
                    return Ok(None);
                }
                continue;
            }
            // e vanishes at exactly one end: the limit is the slope quotient
            if e0.is_zero() && f0.is_zero() {
                best = best.max(f1 / e1);
            }
            if e1.is_zero() && f1.is_zero() {
                best = best.max(f0 / e0);
            }
        }
    }
    Ok(Some(best))
}
