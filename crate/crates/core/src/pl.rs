//! Continuous piecewise-linear functions with rational breakpoints.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{midpoint, RatStr, Rational};
use crate::region::{Profile, Region};
use crate::space::Space;

/// A continuous function on a [`Space`], affine between consecutive
/// breakpoints of each component.
///
/// Canonical form: per component the breakpoints strictly increase from
/// the left endpoint to the right endpoint, and no interior breakpoint is
/// collinear with its neighbours. Structural equality is therefore
/// equality of functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLFun {
    space: Arc<Space>,
    comps: Vec<Vec<(Rational, Rational)>>,
}

fn interpolate(x0: &Rational, v0: &Rational, x1: &Rational, v1: &Rational, x: &Rational) -> Rational {
    v0 + (v1 - v0) * (x - x0) / (x1 - x0)
}

fn canonical(mut pts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    if pts.len() <= 2 {
        return pts;
    }
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(pts.len());
    let last = pts.pop().expect("nonempty");
    for p in pts {
        if out.len() >= 2 {
            let (x0, v0) = &out[out.len() - 2];
            let (x1, v1) = &out[out.len() - 1];
            if (v1 - v0) * (&p.0 - x1) == (&p.1 - v1) * (x1 - x0) {
                out.pop();
            }
        }
        out.push(p);
    }
    if out.len() >= 2 {
        let (x0, v0) = &out[out.len() - 2];
        let (x1, v1) = &out[out.len() - 1];
        if (v1 - v0) * (&last.0 - x1) == (&last.1 - v1) * (x1 - x0) {
            out.pop();
        }
    }
    out.push(last);
    out
}

impl PLFun {
    /// Builds a function from per-component breakpoint lists.
    pub fn new(space: &Arc<Space>, comps: Vec<Vec<(Rational, Rational)>>) -> Result<PLFun> {
        if comps.len() != space.len() {
            return Err(Error::InvalidFunction(format!(
                "expected {} components, found {}",
                space.len(),
                comps.len()
            )));
        }
        let mut out = Vec::with_capacity(comps.len());
        for (ci, pts) in comps.into_iter().enumerate() {
            let (a, b) = space.component(ci);
            let (first, last) = match (pts.first(), pts.last()) {
                (Some(f), Some(l)) => (f, l),
                _ => {
                    return Err(Error::InvalidFunction(format!(
                        "component {ci} has no breakpoints"
                    )))
                }
            };
            if first.0 != *a || last.0 != *b {
                return Err(Error::InvalidFunction(format!(
                    "component {ci}: breakpoints must start at {a} and end at {b}"
                )));
            }
            if a == b && pts.len() != 1 {
                return Err(Error::InvalidFunction(format!(
                    "component {ci} is a single point and takes a single value"
                )));
            }
            if let Some(k) = pts.windows(2).position(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidFunction(format!(
                    "component {ci}: breakpoints {k} and {} are not strictly increasing",
                    k + 1
                )));
            }
            out.push(canonical(pts));
        }
        Ok(PLFun {
            space: space.clone(),
            comps: out,
        })
    }

    /// Builds a function from breakpoints alone; the space is read off the
    /// first and last breakpoint of every component.
    pub fn from_breakpoints(comps: Vec<Vec<(Rational, Rational)>>) -> Result<PLFun> {
        let mut ends = Vec::with_capacity(comps.len());
        for (ci, pts) in comps.iter().enumerate() {
            match (pts.first(), pts.last()) {
                (Some(f), Some(l)) => ends.push((f.0.clone(), l.0.clone())),
                _ => {
                    return Err(Error::InvalidFunction(format!(
                        "component {ci} has no breakpoints"
                    )))
                }
            }
        }
        let space = Space::new(ends)?;
        PLFun::new(&space, comps)
    }

    /// The function through `nodes`, taking the value 0 at any component
    /// endpoint not listed and interpolating between nodes.
    pub fn from_nodes(space: &Arc<Space>, nodes: &[(Rational, Rational)]) -> Result<PLFun> {
        let mut per: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); space.len()];
        for (x, v) in nodes {
            let ci = space
                .locate(x)
                .ok_or_else(|| Error::PointOutsideSpace(x.to_string()))?;
            per[ci].push((x.clone(), v.clone()));
        }
        for (ci, pts) in per.iter_mut().enumerate() {
            let (a, b) = space.component(ci);
            pts.sort_by(|p, q| p.0.cmp(&q.0));
            let mut dedup: Vec<(Rational, Rational)> = Vec::with_capacity(pts.len() + 2);
            for p in pts.drain(..) {
                match dedup.last() {
                    Some(l) if l.0 == p.0 => {
                        if l.1 != p.1 {
                            return Err(Error::InvalidFunction(format!(
                                "conflicting values at {}",
                                p.0
                            )));
                        }
                    }
                    _ => dedup.push(p),
                }
            }
            if dedup.first().map(|p| &p.0) != Some(a) {
                dedup.insert(0, (a.clone(), Rational::zero()));
            }
            if dedup.last().map(|p| &p.0) != Some(b) {
                dedup.push((b.clone(), Rational::zero()));
            }
            *pts = dedup;
        }
        PLFun::new(space, per)
    }

    pub fn zero(space: &Arc<Space>) -> PLFun {
        PLFun::constant(space, Rational::zero())
    }

    pub fn constant(space: &Arc<Space>, c: Rational) -> PLFun {
        let comps = space
            .components()
            .iter()
            .map(|(a, b)| {
                if a == b {
                    vec![(a.clone(), c.clone())]
                } else {
                    vec![(a.clone(), c.clone()), (b.clone(), c.clone())]
                }
            })
            .collect();
        PLFun {
            space: space.clone(),
            comps,
        }
    }

    pub fn identity(space: &Arc<Space>) -> PLFun {
        let comps = space
            .components()
            .iter()
            .map(|(a, b)| {
                if a == b {
                    vec![(a.clone(), a.clone())]
                } else {
                    vec![(a.clone(), a.clone()), (b.clone(), b.clone())]
                }
            })
            .collect();
        PLFun {
            space: space.clone(),
            comps,
        }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn breakpoints(&self, component: usize) -> &[(Rational, Rational)] {
        &self.comps[component]
    }

    pub fn breakpoint_count(&self) -> usize {
        self.comps.iter().map(Vec::len).sum()
    }

    fn same_space(&self, other: &PLFun) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub(crate) fn eval_in(&self, ci: usize, x: &Rational) -> Rational {
        let pts = &self.comps[ci];
        let j = pts.partition_point(|(bx, _)| bx <= x);
        if j == 0 {
            return pts[0].1.clone();
        }
        if j == pts.len() {
            return pts[j - 1].1.clone();
        }
        let (x0, v0) = &pts[j - 1];
        if x0 == x {
            return v0.clone();
        }
        let (x1, v1) = &pts[j];
        interpolate(x0, v0, x1, v1, x)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let ci = self
            .space
            .locate(x)
            .ok_or_else(|| Error::PointOutsideSpace(x.to_string()))?;
        Ok(self.eval_in(ci, x))
    }

    /// Values at the sorted points `xs` of component `ci`.
    fn values_on(&self, ci: usize, xs: &[Rational]) -> Vec<Rational> {
        let pts = &self.comps[ci];
        let mut j = 0;
        xs.iter()
            .map(|x| {
                while j + 1 < pts.len() && pts[j + 1].0 <= *x {
                    j += 1;
                }
                if pts[j].0 == *x || j + 1 == pts.len() {
                    pts[j].1.clone()
                } else {
                    let (x0, v0) = &pts[j];
                    let (x1, v1) = &pts[j + 1];
                    interpolate(x0, v0, x1, v1, x)
                }
            })
            .collect()
    }

    fn merged_grid(&self, other: &PLFun, ci: usize) -> Vec<Rational> {
        let mut xs: Vec<Rational> = self.comps[ci]
            .iter()
            .chain(other.comps[ci].iter())
            .map(|(x, _)| x.clone())
            .collect();
        xs.sort();
        xs.dedup();
        xs
    }

    fn combine(
        &self,
        other: &PLFun,
        crossings: bool,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<PLFun> {
        self.same_space(other)?;
        let mut comps = Vec::with_capacity(self.comps.len());
        for ci in 0..self.comps.len() {
            let xs = self.merged_grid(other, ci);
            let fv = self.values_on(ci, &xs);
            let gv = other.values_on(ci, &xs);
            let mut pts = Vec::with_capacity(xs.len() * 2);
            for k in 0..xs.len() {
                pts.push((xs[k].clone(), op(&fv[k], &gv[k])));
                if crossings && k + 1 < xs.len() {
                    let d0 = &fv[k] - &gv[k];
                    let d1 = &fv[k + 1] - &gv[k + 1];
                    if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                        let t = &xs[k] + (&xs[k + 1] - &xs[k]) * &d0 / (&d0 - &d1);
                        let ft = interpolate(&xs[k], &fv[k], &xs[k + 1], &fv[k + 1], &t);
                        let gt = interpolate(&xs[k], &gv[k], &xs[k + 1], &gv[k + 1], &t);
                        pts.push((t, op(&ft, &gt)));
                    }
                }
            }
            comps.push(canonical(pts));
        }
        Ok(PLFun {
            space: self.space.clone(),
            comps,
        })
    }

    fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> PLFun {
        let comps = self
            .comps
            .iter()
            .map(|pts| canonical(pts.iter().map(|(x, v)| (x.clone(), f(v))).collect()))
            .collect();
        PLFun {
            space: self.space.clone(),
            comps,
        }
    }

    pub fn add(&self, other: &PLFun) -> Result<PLFun> {
        self.combine(other, false, |a, b| a + b)
    }

    pub fn sub(&self, other: &PLFun) -> Result<PLFun> {
        self.combine(other, false, |a, b| a - b)
    }

    pub fn join(&self, other: &PLFun) -> Result<PLFun> {
        self.combine(other, true, |a, b| a.max(b).clone())
    }

    pub fn meet(&self, other: &PLFun) -> Result<PLFun> {
        self.combine(other, true, |a, b| a.min(b).clone())
    }

    pub fn scale(&self, c: &Rational) -> PLFun {
        self.map_values(|v| v * c)
    }

    pub fn neg(&self) -> PLFun {
        self.map_values(|v| -v)
    }

    pub fn abs(&self) -> PLFun {
        self.join(&self.neg()).expect("same space")
    }

    pub fn pos_part(&self) -> PLFun {
        self.join(&PLFun::zero(&self.space)).expect("same space")
    }

    /// `f⁻ = (-f)⁺`, so that `f = f⁺ - f⁻`.
    pub fn neg_part(&self) -> PLFun {
        self.neg().pos_part()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(|(_, v)| v.is_zero())
    }

    pub fn is_nonneg(&self) -> bool {
        self.comps.iter().flatten().all(|(_, v)| !v.is_negative())
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &PLFun) -> Result<bool> {
        Ok(other.sub(self)?.is_nonneg())
    }

    /// `|self| ∧ |other| = 0`.
    pub fn disjoint(&self, other: &PLFun) -> Result<bool> {
        Ok(self.abs().meet(&other.abs())?.is_zero())
    }

    pub fn max_value(&self) -> Rational {
        self.comps
            .iter()
            .flatten()
            .map(|(_, v)| v)
            .max()
            .expect("nonempty")
            .clone()
    }

    pub fn min_value(&self) -> Rational {
        self.comps
            .iter()
            .flatten()
            .map(|(_, v)| v)
            .min()
            .expect("nonempty")
            .clone()
    }

    pub fn sup_norm(&self) -> Rational {
        self.comps
            .iter()
            .flatten()
            .map(|(_, v)| v.abs())
            .max()
            .expect("nonempty")
    }

    /// The region where the sign of `f` satisfies `accept`.
    ///
    /// Zero crossings are added to the grid, so the sign is constant on each
    /// open gap and can be read at the gap midpoint.
    pub fn sign_region(&self, accept: impl Fn(Ordering) -> bool) -> Region {
        let sign = |v: &Rational| v.cmp(&Rational::zero());
        let profiles = self
            .comps
            .iter()
            .map(|pts| {
                let mut grid = Vec::with_capacity(pts.len() * 2);
                let mut vals = Vec::with_capacity(pts.len() * 2);
                for k in 0..pts.len() {
                    grid.push(pts[k].0.clone());
                    vals.push(pts[k].1.clone());
                    if k + 1 < pts.len() {
                        let (x0, v0) = &pts[k];
                        let (x1, v1) = &pts[k + 1];
                        if (v0.is_positive() && v1.is_negative()) || (v0.is_negative() && v1.is_positive()) {
                            grid.push(x0 + (x1 - x0) * v0 / (v0 - v1));
                            vals.push(Rational::zero());
                        }
                    }
                }
                let points = vals.iter().map(|v| accept(sign(v))).collect();
                let gaps = vals
                    .windows(2)
                    .map(|w| accept(sign(&midpoint(&w[0], &w[1]))))
                    .collect();
                Profile { grid, points, gaps }
            })
            .collect();
        Region::from_profiles(&self.space, profiles)
    }

    /// `{x : f(x) ≠ 0}`, an open region.
    pub fn support(&self) -> Region {
        self.sign_region(|o| o != Ordering::Equal)
    }

    /// `{x : f(x) = 0}`, a closed region.
    pub fn kernel(&self) -> Region {
        self.sign_region(|o| o == Ordering::Equal)
    }

    /// `{x : f(x) ≥ c}`.
    pub fn superlevel(&self, c: &Rational) -> Region {
        self.map_values(|v| v - c).sign_region(|o| o != Ordering::Less)
    }

    /// `{x : f(x) > c}`.
    pub fn strict_superlevel(&self, c: &Rational) -> Region {
        self.map_values(|v| v - c).sign_region(|o| o == Ordering::Greater)
    }

    /// `sup_{x ∈ R} |f(x)|`, which equals the maximum over the closure.
    pub fn sup_norm_on(&self, region: &Region) -> Result<Rational> {
        if **region.space() != *self.space {
            return Err(Error::SpaceMismatch);
        }
        if region.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let cl = region.closure();
        let mut best = Rational::zero();
        for (ci, p) in cl.iter() {
            for x in [&p.lo, &p.hi] {
                best = best.max(self.eval_in(ci, x).abs());
            }
            for (x, v) in &self.comps[ci] {
                if *x > p.lo && *x < p.hi {
                    best = best.max(v.abs());
                }
            }
        }
        Ok(best)
    }

    /// The function equal to `f` on `region` and 0 elsewhere. Requires `f`
    /// to vanish on the boundary of `region`, which makes the result
    /// continuous.
    pub fn mask(&self, region: &Region) -> Result<PLFun> {
        if **region.space() != *self.space {
            return Err(Error::SpaceMismatch);
        }
        for x in region.boundary_points() {
            if !self.eval(&x)?.is_zero() {
                return Err(Error::PreconditionViolated(format!(
                    "function does not vanish at boundary point {x}"
                )));
            }
        }
        let mut comps = Vec::with_capacity(self.comps.len());
        for ci in 0..self.comps.len() {
            let mut xs: Vec<Rational> = self.comps[ci].iter().map(|(x, _)| x.clone()).collect();
            for p in region.pieces(ci) {
                xs.push(p.lo.clone());
                xs.push(p.hi.clone());
            }
            xs.sort();
            xs.dedup();
            let vals = self.values_on(ci, &xs);
            let pts = xs
                .into_iter()
                .zip(vals)
                .map(|(x, v)| {
                    let keep = region.pieces(ci).iter().any(|p| p.contains(&x));
                    (x, if keep { v } else { Rational::zero() })
                })
                .collect();
            comps.push(canonical(pts));
        }
        Ok(PLFun {
            space: self.space.clone(),
            comps,
        })
    }

    /// Slope of the segment starting at `x`, if `x` is not a right endpoint.
    pub fn right_slope(&self, x: &Rational) -> Option<Rational> {
        let ci = self.space.locate(x)?;
        let pts = &self.comps[ci];
        let j = pts.partition_point(|(bx, _)| bx <= x);
        if j == 0 || j == pts.len() {
            return None;
        }
        let (x0, v0) = &pts[j - 1];
        let (x1, v1) = &pts[j];
        Some((v1 - v0) / (x1 - x0))
    }

    /// Slope of the segment ending at `x`, if `x` is not a left endpoint.
    pub fn left_slope(&self, x: &Rational) -> Option<Rational> {
        let ci = self.space.locate(x)?;
        let pts = &self.comps[ci];
        let j = pts.partition_point(|(bx, _)| bx < x);
        if j == 0 {
            return None;
        }
        let (x0, v0) = &pts[j - 1];
        let (x1, v1) = pts.get(j).expect("x lies inside the component");
        Some((v1 - v0) / (x1 - x0))
    }

    pub fn to_json(&self) -> PLFunJson {
        self.comps
            .iter()
            .map(|pts| {
                pts.iter()
                    .map(|(x, v)| [RatStr(x.clone()), RatStr(v.clone())])
                    .collect()
            })
            .collect()
    }

    pub fn from_json(raw: &PLFunJson) -> Result<PLFun> {
        PLFun::from_breakpoints(
            raw.iter()
                .map(|pts| pts.iter().map(|[x, v]| (x.0.clone(), v.0.clone())).collect())
                .collect(),
        )
    }

    /// Parses the JSON form and checks that it lives on `space`.
    pub fn from_json_on(space: &Arc<Space>, raw: &PLFunJson) -> Result<PLFun> {
        let f = PLFun::from_json(raw)?;
        if *f.space != **space {
            return Err(Error::SpaceMismatch);
        }
        Ok(PLFun {
            space: space.clone(),
            comps: f.comps,
        })
    }
}

/// Wire form: one list of `[x, value]` pairs per component.
pub type PLFunJson = Vec<Vec<[RatStr; 2]>>;

impl Serialize for PLFun {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLFun {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PLFunJson::deserialize(d)?;
        PLFun::from_json(&raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PLFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ci, pts) in self.comps.iter().enumerate() {
            if ci > 0 {
                write!(f, " | ")?;
            }
            write!(f, "[")?;
            for (k, (x, v)) in pts.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}↦{v}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Lattice and linear operations, addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlOp {
    Add,
    Sub,
    Scale,
    Join,
    Meet,
    Abs,
    PosPart,
    NegPart,
}

impl PlOp {
    pub fn parse(name: &str) -> Option<PlOp> {
        Some(match name {
            "add" => PlOp::Add,
            "sub" => PlOp::Sub,
            "scale" => PlOp::Scale,
            "join" => PlOp::Join,
            "meet" => PlOp::Meet,
            "abs" => PlOp::Abs,
            "pos_part" | "pos" => PlOp::PosPart,
            "neg_part" | "neg" => PlOp::NegPart,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            PlOp::Add | PlOp::Sub | PlOp::Join | PlOp::Meet => 2,
            _ => 1,
        }
    }

    pub fn apply(self, args: &[&PLFun], scalar: Option<&Rational>) -> Result<PLFun> {
        if args.len() != self.arity() {
            return Err(Error::PreconditionViolated(format!(
                "{self:?} takes {} operand(s), got {}",
                self.arity(),
                args.len()
            )));
        }
        match self {
            PlOp::Add => args[0].add(args[1]),
            PlOp::Sub => args[0].sub(args[1]),
            PlOp::Join => args[0].join(args[1]),
            PlOp::Meet => args[0].meet(args[1]),
            PlOp::Scale => scalar
                .map(|c| args[0].scale(c))
                .ok_or_else(|| Error::PreconditionViolated("scale needs a scalar".into())),
            PlOp::Abs => Ok(args[0].abs()),
            PlOp::PosPart => Ok(args[0].pos_part()),
            PlOp::NegPart => Ok(args[0].neg_part()),
        }
    }
}
