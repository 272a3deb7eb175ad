//! Finite unions of subintervals of a [`Space`] and their relative topology.
//!
//! Internally every operation goes through a *profile* of a component: a
//! sorted grid of critical points containing the component endpoints and
//! all piece endpoints, with one membership bit per grid point and one per
//! open gap between consecutive grid points. Any finite union of intervals
//! is constant on each open gap, so profiles represent regions exactly,
//! and the Boolean and topological operations become bitwise rules.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{midpoint, parse_rational, RatStr, Rational};
use crate::space::Space;

/// One interval of a region. A single point is `[x,x]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Piece {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Piece {
        Piece {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Piece {
        Piece::new(lo, hi, true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Piece {
        Piece::new(lo, hi, false, false)
    }

    pub fn point(x: Rational) -> Piece {
        Piece::new(x.clone(), x, true, true)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi && !self.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Profile {
    pub grid: Vec<Rational>,
    pub points: Vec<bool>,
    pub gaps: Vec<bool>,
}

impl Profile {
    /// Maximal runs of members in the sequence point, gap, point, ...
    fn pieces(&self) -> Vec<Piece> {
        let n = self.grid.len();
        let total = 2 * n - 1;
        let member = |k: usize| {
            if k.is_multiple_of(2) {
                self.points[k / 2]
            } else {
                self.gaps[k / 2]
            }
        };
        let mut out = Vec::new();
        let mut k = 0;
        while k < total {
            if !member(k) {
                k += 1;
                continue;
            }
            let start = k;
            while k + 1 < total && member(k + 1) {
                k += 1;
            }
            let end = k;
            let (lo, lo_closed) = if start % 2 == 0 {
                (self.grid[start / 2].clone(), true)
            } else {
                (self.grid[start / 2].clone(), false)
            };
            let (hi, hi_closed) = if end % 2 == 0 {
                (self.grid[end / 2].clone(), true)
            } else {
                (self.grid[end / 2 + 1].clone(), false)
            };
            out.push(Piece::new(lo, hi, lo_closed, hi_closed));
            k += 1;
        }
        out
    }
}

/// A finite union of intervals inside a [`Space`], kept in canonical form:
/// per component, sorted pieces that neither overlap nor touch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    space: Arc<Space>,
    parts: Vec<Vec<Piece>>,
}

impl Region {
    pub fn empty(space: &Arc<Space>) -> Region {
        Region {
            space: space.clone(),
            parts: vec![Vec::new(); space.len()],
        }
    }

    pub fn full(space: &Arc<Space>) -> Region {
        let parts = space
            .components()
            .iter()
            .map(|(a, b)| vec![Piece::closed(a.clone(), b.clone())])
            .collect();
        Region {
            space: space.clone(),
            parts,
        }
    }

    /// The union of `pieces`; each piece must lie inside one component.
    pub fn from_pieces(space: &Arc<Space>, pieces: Vec<Piece>) -> Result<Region> {
        let mut raw: Vec<Vec<Piece>> = vec![Vec::new(); space.len()];
        for (k, p) in pieces.into_iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            let ci = space.locate(&p.lo).filter(|&ci| space.locate(&p.hi) == Some(ci));
            match ci {
                Some(ci) => raw[ci].push(p),
                None => {
                    return Err(Error::InvalidRegion(format!(
                        "piece {k} ({p}) does not lie inside a single component of {space}"
                    )))
                }
            }
        }
        let probe = Region {
            space: space.clone(),
            parts: raw,
        };
        let parts = (0..space.len())
            .map(|ci| probe.profile(ci, &[]).pieces())
            .collect();
        Ok(Region {
            space: space.clone(),
            parts,
        })
    }

    pub fn interval(
        space: &Arc<Space>,
        lo: Rational,
        hi: Rational,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<Region> {
        Region::from_pieces(space, vec![Piece::new(lo, hi, lo_closed, hi_closed)])
    }

    /// The relatively open set `(lo, hi) ∩ space`.
    pub fn open_interval_clipped(space: &Arc<Space>, lo: &Rational, hi: &Rational) -> Region {
        let mut pieces = Vec::new();
        for (a, b) in space.components() {
            if hi <= a || lo >= b {
                continue;
            }
            let (l, lc) = if lo < a { (a.clone(), true) } else { (lo.clone(), false) };
            let (h, hc) = if hi > b { (b.clone(), true) } else { (hi.clone(), false) };
            pieces.push(Piece::new(l, h, lc, hc));
        }
        Region::from_pieces(space, pieces).expect("clipped pieces lie in components")
    }

    /// Open ball `(c - r, c + r) ∩ space`.
    pub fn ball(space: &Arc<Space>, center: &Rational, radius: &Rational) -> Region {
        Region::open_interval_clipped(space, &(center - radius), &(center + radius))
    }

    /// The union of the components with the given indices.
    pub fn components(space: &Arc<Space>, indices: &[usize]) -> Region {
        let mut r = Region::empty(space);
        for &i in indices {
            let (a, b) = space.component(i);
            r.parts[i] = vec![Piece::closed(a.clone(), b.clone())];
        }
        r
    }

    /// Parses notation such as `[-1,0) ∪ (0,1]`, `{1/2}` or `∅`.
    /// Pieces may also be separated by `u` or `U`.
    pub fn parse(space: &Arc<Space>, text: &str) -> Result<Region> {
        let err = |m: String| Error::InvalidRegion(m);
        let t = text.trim();
        if t.is_empty() || t == "∅" || t == "empty" {
            return Ok(Region::empty(space));
        }
        let mut pieces = Vec::new();
        for tok in t.split(['∪', 'u', 'U']) {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(err(format!("empty piece in {text:?}")));
            }
            if let Some(inner) = tok.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
                pieces.push(Piece::point(parse_rational(inner)?));
                continue;
            }
            let lo_closed = match tok.chars().next() {
                Some('[') => true,
                Some('(') => false,
                _ => return Err(err(format!("piece {tok:?} must start with '[' or '('"))),
            };
            let hi_closed = match tok.chars().last() {
                Some(']') => true,
                Some(')') => false,
                _ => return Err(err(format!("piece {tok:?} must end with ']' or ')'"))),
            };
            let body = &tok[1..tok.len() - 1];
            let (l, h) = body
                .split_once(',')
                .ok_or_else(|| err(format!("piece {tok:?} needs two endpoints")))?;
            pieces.push(Piece::new(
                parse_rational(l)?,
                parse_rational(h)?,
                lo_closed,
                hi_closed,
            ));
        }
        Region::from_pieces(space, pieces)
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn pieces(&self, component: usize) -> &[Piece] {
        &self.parts[component]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Piece)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(ci, ps)| ps.iter().map(move |p| (ci, p)))
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self.space.locate(x) {
            Some(ci) => self.parts[ci].iter().any(|p| p.contains(x)),
            None => false,
        }
    }

    fn check_same(&self, other: &Region) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn grid(&self, ci: usize, extra: &[&Region]) -> Vec<Rational> {
        let (a, b) = self.space.component(ci);
        let mut g = vec![a.clone(), b.clone()];
        for r in std::iter::once(self).chain(extra.iter().copied()) {
            for p in &r.parts[ci] {
                g.push(p.lo.clone());
                g.push(p.hi.clone());
            }
        }
        g.sort();
        g.dedup();
        g
    }

    fn profile_on(&self, ci: usize, grid: &[Rational]) -> Profile {
        let inside = |x: &Rational| self.parts[ci].iter().any(|p| p.contains(x));
        let points = grid.iter().map(inside).collect();
        let gaps = grid
            .windows(2)
            .map(|w| inside(&midpoint(&w[0], &w[1])))
            .collect();
        Profile {
            grid: grid.to_vec(),
            points,
            gaps,
        }
    }

    pub(crate) fn profile(&self, ci: usize, extra: &[&Region]) -> Profile {
        let g = self.grid(ci, extra);
        self.profile_on(ci, &g)
    }

    /// Rebuilds a region from one profile per component.
    pub(crate) fn from_profiles(space: &Arc<Space>, profiles: Vec<Profile>) -> Region {
        Region {
            space: space.clone(),
            parts: profiles.iter().map(Profile::pieces).collect(),
        }
    }

    fn combine(&self, other: &Region, op: impl Fn(bool, bool) -> bool) -> Result<Region> {
        self.check_same(other)?;
        let profiles = (0..self.space.len())
            .map(|ci| {
                let g = self.grid(ci, &[other]);
                let mut p = self.profile_on(ci, &g);
                let q = other.profile_on(ci, &g);
                for (x, y) in p.points.iter_mut().zip(&q.points) {
                    *x = op(*x, *y);
                }
                for (x, y) in p.gaps.iter_mut().zip(&q.gaps) {
                    *x = op(*x, *y);
                }
                p
            })
            .collect();
        Ok(Region::from_profiles(&self.space, profiles))
    }

    fn transform(&self, f: impl Fn(&Profile) -> Profile) -> Region {
        let profiles = (0..self.space.len())
            .map(|ci| f(&self.profile(ci, &[])))
            .collect();
        Region::from_profiles(&self.space, profiles)
    }

    pub fn union(&self, other: &Region) -> Result<Region> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Region) -> Result<Region> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Region) -> Result<Region> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Region {
        self.transform(|p| Profile {
            grid: p.grid.clone(),
            points: p.points.iter().map(|b| !b).collect(),
            gaps: p.gaps.iter().map(|b| !b).collect(),
        })
    }

    /// Interior relative to the space; component endpoints have one-sided
    /// neighbourhoods and isolated points are open.
    pub fn interior(&self) -> Region {
        self.transform(|p| {
            let last = p.grid.len() - 1;
            let points = (0..=last)
                .map(|i| {
                    p.points[i]
                        && (i == 0 || p.gaps[i - 1])
                        && (i == last || p.gaps[i])
                })
                .collect();
            Profile {
                grid: p.grid.clone(),
                points,
                gaps: p.gaps.clone(),
            }
        })
    }

    pub fn closure(&self) -> Region {
        self.transform(|p| {
            let last = p.grid.len() - 1;
            let points = (0..=last)
                .map(|i| {
                    p.points[i]
                        || (i > 0 && p.gaps[i - 1])
                        || (i < last && p.gaps[i])
                })
                .collect();
            Profile {
                grid: p.grid.clone(),
                points,
                gaps: p.gaps.clone(),
            }
        })
    }

    /// `closure \ interior`.
    pub fn boundary(&self) -> Region {
        self.closure()
            .difference(&self.interior())
            .expect("same space")
    }

    /// The boundary as a list of points; a finite union of intervals has a
    /// finite boundary.
    pub fn boundary_points(&self) -> Vec<Rational> {
        self.boundary()
            .iter()
            .map(|(_, p)| {
                debug_assert!(p.is_point());
                p.lo.clone()
            })
            .collect()
    }

    pub fn is_subset(&self, other: &Region) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_open(&self) -> bool {
        self.interior() == *self
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    /// Clopen sets are exactly the unions of full components.
    pub fn is_clopen(&self) -> bool {
        self.is_open() && self.is_closed()
    }

    pub fn is_regular_open(&self) -> bool {
        self.closure().interior() == *self
    }

    pub fn is_dense(&self) -> bool {
        self.closure() == Region::full(&self.space)
    }

    /// `int cl R`, the smallest regularly open set containing an open `R`.
    pub fn regularization(&self) -> Region {
        self.closure().interior()
    }

    /// Join in the Boolean algebra of regularly open sets.
    pub fn ro_join(&self, other: &Region) -> Result<Region> {
        self.check_same(other)?;
        for r in [self, other] {
            if !r.is_regular_open() {
                return Err(Error::NotRegularOpen(r.to_string()));
            }
        }
        Ok(self.union(other)?.regularization())
    }

    /// Some point of the region, preferring interior points of pieces.
    pub fn sample_point(&self) -> Option<Rational> {
        self.iter().next().map(|(_, p)| {
            if p.is_point() {
                p.lo.clone()
            } else {
                midpoint(&p.lo, &p.hi)
            }
        })
    }

    /// A point in `self \ other`, if any.
    pub fn point_outside(&self, other: &Region) -> Result<Option<Rational>> {
        Ok(self.difference(other)?.sample_point())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        for (k, (_, p)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Wire form of a piece: `{lo, hi, lo_closed, hi_closed}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PieceJson {
    pub lo: RatStr,
    pub hi: RatStr,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

/// Wire form of a region: one list of pieces per component.
pub type RegionJson = Vec<Vec<PieceJson>>;

impl Region {
    pub fn to_json(&self) -> RegionJson {
        self.parts
            .iter()
            .map(|ps| {
                ps.iter()
                    .map(|p| PieceJson {
                        lo: RatStr(p.lo.clone()),
                        hi: RatStr(p.hi.clone()),
                        lo_closed: p.lo_closed,
                        hi_closed: p.hi_closed,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_json(space: &Arc<Space>, raw: &RegionJson) -> Result<Region> {
        if raw.len() != space.len() {
            return Err(Error::InvalidRegion(format!(
                "expected {} component lists, found {}",
                space.len(),
                raw.len()
            )));
        }
        let mut pieces = Vec::new();
        for (ci, ps) in raw.iter().enumerate() {
            let (a, b) = space.component(ci);
            for (k, p) in ps.iter().enumerate() {
                if p.lo.0 < *a || p.hi.0 > *b {
                    return Err(Error::InvalidRegion(format!(
                        "component {ci}, piece {k}: [{},{}] leaves [{a},{b}]",
                        p.lo, p.hi
                    )));
                }
                pieces.push(Piece::new(p.lo.0.clone(), p.hi.0.clone(), p.lo_closed, p.hi_closed));
            }
        }
        Region::from_pieces(space, pieces)
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn unit() -> Arc<Space> {
        Space::interval(int(-1), int(1)).unwrap()
    }

    fn r(s: &Arc<Space>, t: &str) -> Region {
        Region::parse(s, t).unwrap()
    }

    #[test]
    fn touching_pieces_merge() {
        let s = unit();
        assert_eq!(r(&s, "(0,1/2] u (1/2,1]"), r(&s, "(0,1]"));
        assert_eq!(r(&s, "(0,1/2) u [1/2,1]"), r(&s, "(0,1]"));
        // both open at 1/2: the point stays out
        assert_eq!(r(&s, "(0,1/2) u (1/2,1)").iter().count(), 2);
        assert_eq!(r(&s, "(0,1/2) u {1/2} u (1/2,1)"), r(&s, "(0,1)"));
        assert_eq!(r(&s, "(0,0) u [1,1)"), Region::empty(&s));
    }

    #[test]
    fn closure_interior_complement() {
        let s = unit();
        let u = r(&s, "(0,1]");
        assert_eq!(u.closure(), r(&s, "[0,1]"));
        assert_eq!(u.closure().interior(), u);
        assert_eq!(u.complement(), r(&s, "[-1,0]"));
        assert_eq!(r(&s, "{0}").interior(), Region::empty(&s));
        assert_eq!(r(&s, "[-1,0) u (0,1]").closure(), Region::full(&s));
    }

    #[test]
    fn isolated_points_are_open() {
        let s = Space::new(vec![(int(0), int(0)), (int(1), int(2))]).unwrap();
        let p = r(&s, "{0}");
        assert!(p.is_open() && p.is_closed() && p.is_clopen());
    }

    #[test]
    fn predicates() {
        let s = unit();
        let u = r(&s, "(0,1]");
        assert!(u.is_regular_open());
        assert!(!u.is_clopen());
        assert!(!r(&s, "[-1,0) u (0,1]").is_regular_open());
        assert!(r(&s, "[-1,0) u (0,1]").is_dense());
        let two = Space::new(vec![(int(-1), int(0)), (int(1), int(2))]).unwrap();
        assert!(r(&two, "[-1,0]").is_clopen());
    }

    #[test]
    fn ro_join_examples() {
        let s = unit();
        assert_eq!(
            r(&s, "[-1,0)").ro_join(&r(&s, "(0,1]")).unwrap(),
            Region::full(&s)
        );
        let u = r(&s, "(0,1]");
        assert_eq!(u.ro_join(&Region::empty(&s)).unwrap(), u);
        let z = Space::interval(int(0), int(1)).unwrap();
        assert!(!r(&z, "(0,1/2)").is_regular_open());
        let w = Space::interval(int(-1), int(2)).unwrap();
        assert_eq!(
            r(&w, "(0,1/2)").ro_join(&r(&w, "(1/2,1)")).unwrap(),
            r(&w, "(0,1)")
        );
        assert!(matches!(
            r(&s, "[-1,0) u (0,1]").ro_join(&u),
            Err(Error::NotRegularOpen(_))
        ));
    }

    #[test]
    fn rejects_pieces_outside_components() {
        let two = Space::new(vec![(int(-1), int(0)), (int(1), int(2))]).unwrap();
        assert!(Region::parse(&two, "[-1/2,3/2]").is_err());
        assert!(Region::parse(&two, "[3,4]").is_err());
    }

    #[test]
    fn clipped_balls() {
        let s = unit();
        assert_eq!(Region::ball(&s, &int(0), &int(1)), r(&s, "(-1,1)"));
        assert_eq!(Region::ball(&s, &int(0), &int(2)), Region::full(&s));
        assert_eq!(Region::ball(&s, &rat(3, 4), &rat(1, 2)), r(&s, "(1/4,1]"));
    }

    #[test]
    fn json_round_trip() {
        let s = unit();
        let u = r(&s, "[-1,-1/2) u {0} u (1/2,1]");
        let back = Region::from_json(&s, &u.to_json()).unwrap();
        assert_eq!(back, u);
        let text = serde_json::to_string(&u).unwrap();
        let raw: RegionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Region::from_json(&s, &raw).unwrap(), u);
    }

    #[test]
    fn boundary_points_of_open_sets() {
        let s = unit();
        assert_eq!(r(&s, "(0,1]").boundary_points(), vec![int(0)]);
        assert_eq!(r(&s, "(-1/2,0) u (0,1/2)").boundary_points(), vec![rat(-1, 2), int(0), rat(1, 2)]);
        assert!(Region::full(&s).boundary_points().is_empty());
    }
}
