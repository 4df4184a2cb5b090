//! Rational intervals with independently open or closed endpoints.
//!
//! An interval is either empty (one canonical value), a degenerate point
//! `[v, v]`, or a set with `lo < hi`. Constructors canonicalize: any
//! candidate describing the empty set collapses to the canonical empty, so
//! structural equality is set equality for single intervals.

use crate::rat::{self, midpoint, rat_string, Rat};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    #[serde(with = "rat_string")]
    lo: Rat,
    #[serde(with = "rat_string")]
    hi: Rat,
    lo_open: bool,
    hi_open: bool,
}

impl Interval {
    /// Canonicalizing constructor: anything denoting the empty set becomes
    /// the canonical empty interval `(0, 0)`.
    pub fn new(lo: Rat, hi: Rat, lo_open: bool, hi_open: bool) -> Interval {
        match lo.cmp(&hi) {
            Ordering::Greater => Interval::empty(),
            Ordering::Equal if lo_open || hi_open => Interval::empty(),
            _ => Interval {
                lo,
                hi,
                lo_open,
                hi_open,
            },
        }
    }

    pub fn empty() -> Interval {
        Interval {
            lo: Rat::zero(),
            hi: Rat::zero(),
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn open(lo: Rat, hi: Rat) -> Interval {
        Interval::new(lo, hi, true, true)
    }

    pub fn closed(lo: Rat, hi: Rat) -> Interval {
        Interval::new(lo, hi, false, false)
    }

    pub fn point(v: Rat) -> Interval {
        Interval::new(v.clone(), v, false, false)
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn lo_open(&self) -> bool {
        self.lo_open
    }

    pub fn hi_open(&self) -> bool {
        self.hi_open
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && self.lo_open
    }

    /// Degenerate single point `[v, v]`.
    pub fn is_point(&self) -> bool {
        self.lo == self.hi && !self.lo_open
    }

    pub fn is_open_interval(&self) -> bool {
        self.is_empty() || (self.lo_open && self.hi_open)
    }

    pub fn member(&self, p: &Rat) -> bool {
        if self.is_empty() {
            return false;
        }
        let above = match p.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => !self.lo_open,
            Ordering::Less => false,
        };
        let below = match p.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => !self.hi_open,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn closure(&self) -> Interval {
        if self.is_empty() {
            Interval::empty()
        } else {
            Interval::closed(self.lo.clone(), self.hi.clone())
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Interval::empty();
        }
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_open),
            Ordering::Less => (other.lo.clone(), other.lo_open),
            Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_open),
            Ordering::Greater => (other.hi.clone(), other.hi_open),
            Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        Interval::new(lo, hi, lo_open, hi_open)
    }

    /// `self` minus `other` as (left remainder, right remainder).
    pub fn subtract(&self, other: &Interval) -> (Interval, Interval) {
        if self.is_empty() {
            return (Interval::empty(), Interval::empty());
        }
        if other.is_empty() || self.intersect(other).is_empty() {
            return (self.clone(), Interval::empty());
        }
        let left = Interval::new(
            self.lo.clone(),
            other.lo.clone(),
            self.lo_open,
            !other.lo_open,
        );
        let right = Interval::new(
            other.hi.clone(),
            self.hi.clone(),
            !other.hi_open,
            self.hi_open,
        );
        (left, right)
    }

    /// Set containment `other` inside `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        if other.is_empty() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        let lo_ok = match self.lo.cmp(&other.lo) {
            Ordering::Less => true,
            Ordering::Equal => !self.lo_open || other.lo_open,
            Ordering::Greater => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            Ordering::Greater => true,
            Ordering::Equal => !self.hi_open || other.hi_open,
            Ordering::Less => false,
        };
        lo_ok && hi_ok
    }

    /// Union when the two intervals overlap or touch without a gap;
    /// `None` when the union is not a single interval.
    pub fn try_merge(&self, other: &Interval) -> Option<Interval> {
        if self.is_empty() {
            return Some(other.clone());
        }
        if other.is_empty() {
            return Some(self.clone());
        }
        let (a, b) = if (self.lo.clone(), self.lo_open) <= (other.lo.clone(), other.lo_open) {
            (self, other)
        } else {
            (other, self)
        };
        let connected = match a.hi.cmp(&b.lo) {
            Ordering::Greater => true,
            Ordering::Equal => !(a.hi_open && b.lo_open),
            Ordering::Less => false,
        };
        if !connected {
            return None;
        }
        let (hi, hi_open) = match a.hi.cmp(&b.hi) {
            Ordering::Greater => (a.hi.clone(), a.hi_open),
            Ordering::Less => (b.hi.clone(), b.hi_open),
            Ordering::Equal => (a.hi.clone(), a.hi_open && b.hi_open),
        };
        Some(Interval::new(a.lo.clone(), hi, a.lo_open, hi_open))
    }

    /// A rational representative: the point itself when degenerate,
    /// otherwise the midpoint.
    pub fn sample(&self) -> Rat {
        debug_assert!(!self.is_empty());
        if self.is_point() {
            self.lo.clone()
        } else {
            midpoint(&self.lo, &self.hi)
        }
    }

    pub fn width(&self) -> Rat {
        if self.is_empty() {
            Rat::zero()
        } else {
            &self.hi - &self.lo
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            rat::format_rat(&self.lo),
            rat::format_rat(&self.hi),
            if self.hi_open { ')' } else { ']' },
        )
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Interval, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "rat_string")]
            lo: Rat,
            #[serde(with = "rat_string")]
            hi: Rat,
            lo_open: bool,
            hi_open: bool,
        }
        let raw = Raw::deserialize(de)?;
        Ok(Interval::new(raw.lo, raw.hi, raw.lo_open, raw.hi_open))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn oi(a: i64, b: i64) -> Interval {
        Interval::open(rat_int(a), rat_int(b))
    }

    fn ci(a: i64, b: i64) -> Interval {
        Interval::closed(rat_int(a), rat_int(b))
    }

    #[test]
    fn empty_is_canonical() {
        assert_eq!(Interval::open(rat_int(1), rat_int(1)), Interval::empty());
        assert_eq!(Interval::open(rat_int(3), rat_int(1)), Interval::empty());
        assert_eq!(
            Interval::new(rat_int(2), rat_int(2), false, true),
            Interval::empty()
        );
        assert!(Interval::empty().is_empty());
        assert!(!Interval::point(rat_int(2)).is_empty());
    }

    #[test]
    fn membership_respects_flags() {
        let half_open = Interval::new(rat_int(0), rat_int(1), false, true);
        assert!(half_open.member(&rat_int(0)));
        assert!(!half_open.member(&rat_int(1)));
        assert!(half_open.member(&rat(1, 2)));
        assert!(!half_open.member(&rat(3, 2)));
        assert!(Interval::point(rat_int(1)).member(&rat_int(1)));
    }

    #[test]
    fn closure_of_empty_stays_empty() {
        assert_eq!(Interval::empty().closure(), Interval::empty());
        assert_eq!(oi(0, 1).closure(), ci(0, 1));
    }

    #[test]
    fn intersection_tightens_flags() {
        let a = Interval::new(rat_int(0), rat_int(2), false, true);
        let b = Interval::new(rat_int(0), rat_int(2), true, false);
        assert_eq!(a.intersect(&b), oi(0, 2).intersect(&ci(0, 2)));
        assert_eq!(a.intersect(&b), Interval::new(rat_int(0), rat_int(2), true, true));
        assert_eq!(oi(0, 1).intersect(&oi(1, 2)), Interval::empty());
        assert_eq!(ci(0, 1).intersect(&ci(1, 2)), Interval::point(rat_int(1)));
    }

    #[test]
    fn subtraction_splits() {
        let (l, r) = ci(0, 3).subtract(&oi(1, 2));
        assert_eq!(l, ci(0, 1));
        assert_eq!(r, ci(2, 3));
        let (l, r) = oi(0, 3).subtract(&ci(1, 2));
        assert_eq!(l, oi(0, 1));
        assert_eq!(r, oi(2, 3));
        let (l, r) = oi(0, 1).subtract(&oi(0, 1));
        assert!(l.is_empty() && r.is_empty());
        let (l, r) = ci(1, 1).subtract(&oi(0, 2));
        assert!(l.is_empty() && r.is_empty());
    }

    #[test]
    fn merge_uses_endpoint_flags() {
        // (0,1] u (1,2) joins; (0,1) u (1,2) leaves a pinhole.
        let a = Interval::new(rat_int(0), rat_int(1), true, false);
        assert_eq!(a.try_merge(&oi(1, 2)), Some(oi(0, 2)));
        assert_eq!(oi(0, 1).try_merge(&oi(1, 2)), None);
        assert_eq!(
            oi(0, 1).try_merge(&Interval::point(rat_int(1))),
            Some(Interval::new(rat_int(0), rat_int(1), true, false))
        );
        assert_eq!(oi(0, 3).try_merge(&oi(1, 2)), Some(oi(0, 3)));
    }

    #[test]
    fn containment_is_exact_at_endpoints() {
        assert!(ci(0, 1).contains_interval(&oi(0, 1)));
        assert!(!oi(0, 1).contains_interval(&ci(0, 1)));
        assert!(oi(0, 1).contains_interval(&Interval::empty()));
        assert!(!Interval::empty().contains_interval(&Interval::point(rat_int(0))));
    }

    #[test]
    fn json_round_trip() {
        let i = Interval::new(rat(-1, 2), rat(3, 4), true, false);
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, r#"{"lo":"-1/2","hi":"3/4","lo_open":true,"hi_open":false}"#);
        let back: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, i);
        // Deserialization canonicalizes empties.
        let e: Interval =
            serde_json::from_str(r#"{"lo":"5","hi":"5","lo_open":true,"hi_open":true}"#).unwrap();
        assert_eq!(e, Interval::empty());
    }
}
