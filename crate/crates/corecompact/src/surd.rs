//! Exact arithmetic for numbers of the form `a + b*sqrt(2)`.
//!
//! Refutations of the way-below relation on rational traces puncture covers
//! at an irrational point. That point must be comparable against rationals
//! exactly (by squaring) and approximable by nested rational bounds (via the
//! Pell convergents of sqrt(2)), both of which this type provides.

use crate::rat::{midpoint, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// The value `a + b*sqrt(2)`. Irrational exactly when `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    a: Rat,
    b: Rat,
}

impl Surd {
    pub fn new(a: Rat, b: Rat) -> Surd {
        Surd { a, b }
    }

    pub fn sqrt2() -> Surd {
        Surd::new(Rat::zero(), Rat::one())
    }

    /// The canonical irrational strictly between `lo` and `hi`:
    /// `lo + (hi - lo) * (sqrt(2) - 1)`. Lands at sqrt(2) itself for
    /// bounds (1, 2).
    pub fn pinned_between(lo: &Rat, hi: &Rat) -> Surd {
        assert!(lo < hi, "pinned_between requires lo < hi");
        let width = hi - lo;
        Surd::new(lo - &width, width)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Sign of the value, decided exactly: when `a` and `b` disagree in
    /// sign, comparing `a^2` with `2 b^2` settles which term dominates.
    pub fn sign(&self) -> Ordering {
        let sa = if self.a.is_zero() {
            Ordering::Equal
        } else if self.a.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        let sb = if self.b.is_zero() {
            Ordering::Equal
        } else if self.b.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                // a and -b*sqrt(2) have the same sign as a; compare squares.
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * Rat::from_integer(2.into());
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => unreachable!("sqrt(2) is irrational"),
                }
            }
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rat(&self, q: &Rat) -> Ordering {
        Surd::new(&self.a - q, self.b.clone()).sign()
    }

    /// Nested rational bounds `(lo, hi)` with `lo < value < hi`, tightening
    /// as `level` grows; width at level k is at most `3 |b| / 2^k` and
    /// shrinks strictly. Requires an irrational value.
    pub fn bounds(&self, level: u32) -> (Rat, Rat) {
        assert!(!self.b.is_zero(), "bounds of a rational are itself");
        // Pell recurrence p' = p + 2q, q' = p + q: p/q alternates around
        // sqrt(2) and consecutive terms bracket it ever tighter.
        let mut p = Rat::one();
        let mut q = Rat::one();
        let mut below = Rat::one();
        let mut above = Rat::new(3.into(), 2.into());
        for _ in 0..2 * (level as usize + 1) {
            let np = &p + &q + &q;
            let nq = &p + &q;
            p = np;
            q = nq;
            let c = &p / &q;
            if (&c * &c) < Rat::from_integer(2.into()) {
                below = c;
            } else {
                above = c;
            }
        }
        let (r1, r2) = (&self.a + &self.b * &below, &self.a + &self.b * &above);
        if r1 < r2 {
            (r1, r2)
        } else {
            (r2, r1)
        }
    }

    /// A rational within `max_width` of the value, together with the bound
    /// interval certifying it.
    pub fn rational_near(&self, max_width: &Rat) -> (Rat, (Rat, Rat)) {
        assert!(max_width.is_positive());
        let mut level = 0;
        loop {
            let (lo, hi) = self.bounds(level);
            if &hi - &lo <= *max_width {
                return (midpoint(&lo, &hi), (lo, hi));
            }
            level += 1;
        }
    }
}
