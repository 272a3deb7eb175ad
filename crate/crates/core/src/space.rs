//! Compact ambient spaces: finitely many disjoint closed rational intervals.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{RatStr, Rational};

/// A compact space `[a_0,b_0] ∪ ... ∪ [a_k,b_k]` with `b_i < a_{i+1}`.
///
/// Components with `a_i = b_i` are isolated points. Every component is
/// clopen, so the clopen sets are exactly the unions of components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    components: Vec<(Rational, Rational)>,
}

impl Space {
    pub fn new(components: Vec<(Rational, Rational)>) -> Result<Arc<Space>> {
        if components.is_empty() {
            return Err(Error::InvalidSpace("at least one component is required".into()));
        }
        for (i, (a, b)) in components.iter().enumerate() {
            if a > b {
                return Err(Error::InvalidSpace(format!(
                    "component {i}: left endpoint {a} exceeds right endpoint {b}"
                )));
            }
            if i > 0 && components[i - 1].1 >= *a {
                return Err(Error::InvalidSpace(format!(
                    "components {} and {i} are not separated",
                    i - 1
                )));
            }
        }
        Ok(Arc::new(Space { components }))
    }

    pub fn interval(a: Rational, b: Rational) -> Result<Arc<Space>> {
        Space::new(vec![(a, b)])
    }

    pub fn components(&self) -> &[(Rational, Rational)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, i: usize) -> (&Rational, &Rational) {
        let (a, b) = &self.components[i];
        (a, b)
    }

    pub fn is_degenerate(&self, i: usize) -> bool {
        self.components[i].0 == self.components[i].1
    }

    /// Index of the component containing `x`.
    pub fn locate(&self, x: &Rational) -> Option<usize> {
        let i = self.components.partition_point(|(_, b)| b < x);
        match self.components.get(i) {
            Some((a, _)) if a <= x => Some(i),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.locate(x).is_some()
    }

    /// A single symmetric component `[-c, c]` with `c > 0`.
    pub fn symmetric_radius(&self) -> Option<&Rational> {
        match self.components.as_slice() {
            [(a, b)] if *a == -b.clone() && *b > num_traits::Zero::zero() => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{a},{b}]")?;
        }
        Ok(())
    }
}

impl Serialize for Space {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<[RatStr; 2]> = self
            .components
            .iter()
            .map(|(a, b)| [RatStr(a.clone()), RatStr(b.clone())])
            .collect();
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Space {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<[RatStr; 2]> = Vec::deserialize(d)?;
        let comps = raw.into_iter().map(|[a, b]| (a.0, b.0)).collect();
        Space::new(comps)
            .map(|s| (*s).clone())
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn rejects_overlap_and_empty() {
        assert!(Space::new(vec![]).is_err());
        assert!(Space::new(vec![(int(0), int(1)), (int(1), int(2))]).is_err());
        assert!(Space::new(vec![(int(1), int(0))]).is_err());
        assert!(Space::new(vec![(int(0), int(0)), (int(1), int(2))]).is_ok());
    }

    #[test]
    fn locate_points() {
        let s = Space::new(vec![(int(-1), int(0)), (int(1), int(2))]).unwrap();
        assert_eq!(s.locate(&rat(-1, 2)), Some(0));
        assert_eq!(s.locate(&int(0)), Some(0));
        assert_eq!(s.locate(&rat(1, 2)), None);
        assert_eq!(s.locate(&int(2)), Some(1));
        assert_eq!(s.locate(&int(3)), None);
    }

    #[test]
    fn json_schema() {
        let s = Space::new(vec![(int(-1), int(0)), (rat(1, 2), int(2))]).unwrap();
        let j = serde_json::to_string(&*s).unwrap();
        assert_eq!(j, r#"[["-1","0"],["1/2","2"]]"#);
        let back: Space = serde_json::from_str(&j).unwrap();
        assert_eq!(back, *s);
        assert!(serde_json::from_str::<Space>(r#"[["1","0"]]"#).is_err());
    }
}
