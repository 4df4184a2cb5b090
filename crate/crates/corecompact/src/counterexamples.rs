//! A wedge of countably many pointed circles, rational radii, and the set
//! `A` whose stage slices are closed while `A` itself fails to be closed in
//! the product topology: the gap between the colimit-of-products topology
//! and the product-of-colimits topology, witnessed with exact arithmetic.
//!
//! Stage `n` is the wedge of circles `1..=n` glued at a basepoint; a point
//! is a circle index with an angle `theta` in `[0,1)`. The slice `A_n`
//! collects pairs `(r, theta)` on circle `n` with
//! `pi/n <= r <= pi/n + max(theta, 1-theta)`. Both comparisons pit a
//! rational against a multiple of pi, so nested rational brackets around pi
//! ([`PiBounds`]) decide them exactly after finitely many refinements.
//!
//! [`stage_separation_witness`] certifies the radius `3/n` around the point
//! `(0, basepoint)` as free of `A` on every stage, while
//! [`product_limit_witness`] lands a member of `A` inside any basic product
//! neighborhood of that same point. Circles are indexed from 1 here so the
//! slice formula never divides by zero; reports carry the shift explicitly.

use crate::rat::{fract, midpoint, rat, rat_int, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CounterexampleError {
    #[error("k_max must be at least 1")]
    KMaxZero,
    #[error("circle index 0 is the basepoint convention, not a circle")]
    CircleIndexZero,
    #[error("delta must be positive")]
    DeltaNotPositive,
    #[error("arc widths must be positive")]
    ArcNotPositive,
    #[error("a produced witness failed its own membership check")]
    SelfCheckFailed,
}

/// A point of the wedge: circle `circle_index` at angle `theta` in `[0,1)`.
/// Angle 0 is the shared basepoint on every circle; its canonical
/// representation is `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgePoint {
    pub circle_index: u64,
    #[serde(with = "crate::rat::rat_string")]
    pub theta: Rat,
}

impl WedgePoint {
    /// Angle reduced mod 1. The circle index is kept as given, so a
    /// basepoint query can still name the circle whose slice it probes.
    pub fn new(circle_index: u64, theta: Rat) -> WedgePoint {
        WedgePoint {
            circle_index,
            theta: fract(&theta),
        }
    }

    pub fn basepoint() -> WedgePoint {
        WedgePoint {
            circle_index: 0,
            theta: rat_int(0),
        }
    }

    pub fn is_basepoint(&self) -> bool {
        self.theta.is_zero()
    }

    /// The canonical representative: every angle-0 point is `(0, 0)`.
    pub fn canonical(&self) -> WedgePoint {
        if self.is_basepoint() {
            WedgePoint::basepoint()
        } else {
            self.clone()
        }
    }
}

/// A radius paired with a wedge point, the argument of [`a_membership`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASetQuery {
    #[serde(with = "crate::rat::rat_string")]
    pub r: Rat,
    pub point: WedgePoint,
}

/// Leading continued-fraction terms of pi. The bracket at level `L` is the
/// convergent pair `(c_{2L+2}, c_{2L+3})`: even convergents lie below pi,
/// odd ones above, and consecutive pairs nest strictly.
const PI_CF: [u64; 34] = [
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1, 84, 2, 1, 1, 15, 3, 13, 1,
    4, 2, 6, 6, 99,
];

const MAX_CF_LEVEL: u64 = ((PI_CF.len() - 4) / 2) as u64;

fn cf_bracket(level: u64) -> (Rat, Rat) {
    let top = (2 * level + 3) as usize;
    debug_assert!(top < PI_CF.len());
    let mut h = (BigInt::from(1), BigInt::from(0));
    let mut k = (BigInt::from(0), BigInt::from(1));
    let mut lo = None;
    for (i, &a) in PI_CF.iter().enumerate().take(top + 1) {
        let a = BigInt::from(a);
        h = (&a * &h.0 + &h.1, h.0);
        k = (&a * &k.0 + &k.1, k.0);
        if i == top - 1 {
            lo = Some(Rat::new(h.0.clone(), k.0.clone()));
        }
    }
    (lo.expect("top >= 1"), Rat::new(h.0, k.0))
}

/// Bracket of `arctan(x)` from two consecutive alternating partial sums.
fn arctan_bracket(x: &Rat, terms: usize) -> (Rat, Rat) {
    let x2 = x * x;
    let mut power = x.clone();
    let mut sum = Rat::zero();
    let mut last = Rat::zero();
    for i in 0..=terms + 1 {
        let term = &power / rat_int(2 * i as i64 + 1);
        last = sum.clone();
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &x2;
    }
    if sum <= last {
        (sum, last)
    } else {
        (last, sum)
    }
}

/// Machin's identity `pi = 16 arctan(1/5) - 4 arctan(1/239)` as a bracket;
/// the fallback once the convergent table is exhausted.
fn machin_bracket(terms: usize) -> (Rat, Rat) {
    let (a_lo, a_hi) = arctan_bracket(&rat(1, 5), terms);
    let (b_lo, b_hi) = arctan_bracket(&rat(1, 239), terms);
    (
        rat_int(16) * a_lo - rat_int(4) * b_hi,
        rat_int(16) * a_hi - rat_int(4) * b_lo,
    )
}

/// A rational bracket `lo < pi < hi`, refinable without bound. Brackets are
/// strictly nested and strictly shrink with the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiBounds {
    lo: Rat,
    hi: Rat,
    level: u64,
}

impl PiBounds {
    /// Level 0: `333/106 < pi < 355/113`.
    pub fn seed() -> PiBounds {
        let (lo, hi) = cf_bracket(0);
        PiBounds { lo, hi, level: 0 }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn refine(&mut self) {
        let next = self.level + 1;
        if next <= MAX_CF_LEVEL {
            let (lo, hi) = cf_bracket(next);
            debug_assert!(lo > self.lo && hi < self.hi);
            self.lo = lo;
            self.hi = hi;
        } else {
            // The series bracket at a fixed term count can be wider than a
            // deep convergent bracket; grow the count until intersecting
            // strictly shrinks the width.
            let width = self.width();
            let mut terms = 8 * (next as usize + 1);
            loop {
                let (mut lo, mut hi) = machin_bracket(terms);
                if lo < self.lo {
                    lo = self.lo.clone();
                }
                if hi > self.hi {
                    hi = self.hi.clone();
                }
                if &hi - &lo < width {
                    self.lo = lo;
                    self.hi = hi;
                    break;
                }
                terms += 8;
            }
        }
        self.level = next;
    }

    /// Whether `pi < t`, refining until the bracket excludes `t`.
    /// Terminates because `t` is rational and pi is not.
    fn less_than(&mut self, t: &Rat) -> bool {
        loop {
            if *t >= self.hi {
                return true;
            }
            if *t <= self.lo {
                return false;
            }
            self.refine();
        }
    }
}

impl Default for PiBounds {
    fn default() -> PiBounds {
        PiBounds::seed()
    }
}

/// Whether the query lies in the slice `A_n` of its circle `n`:
/// `pi/n <= r <= pi/n + max(theta, 1-theta)`. Both bounds compare a
/// rational with `pi`, so equality never occurs and refinement decides
/// strictly. At the basepoint `max(theta, 1-theta)` is 1.
pub fn a_membership(q: &ASetQuery, pi: &mut PiBounds) -> Result<bool, CounterexampleError> {
    let n = q.point.circle_index;
    if n == 0 {
        return Err(CounterexampleError::CircleIndexZero);
    }
    let n = Rat::from_integer(BigInt::from(n));
    let reach = {
        let one_minus = rat_int(1) - &q.point.theta;
        q.point.theta.clone().max(one_minus)
    };
    let lower = pi.less_than(&(&q.r * &n));
    let upper = !pi.less_than(&((&q.r - reach) * &n));
    Ok(lower && upper)
}

/// The radius `3/n` around `(0, basepoint)` together with its evidence: the
/// analytic separation `3 < pi` and a probe sweep that found no member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    /// Number of circles in the stage.
    pub stage: u64,
    #[serde(with = "crate::rat::rat_string")]
    pub radius: Rat,
    pub probes_checked: usize,
}

const SEPARATION_PROBES: usize = 50;

/// No point of `A` meets `(-3/n, 3/n) x (wedge of circles 1..=n)`: every
/// member on circle `i <= n` has `r >= pi/i >= pi/n > 3/n`. The bound
/// `3 < pi` is checked against the bracket, and a deterministic grid of
/// rational probes inside the neighborhood is swept through
/// [`a_membership`] as corroborating evidence.
pub fn stage_separation_witness(
    n: u64,
    pi: &mut PiBounds,
) -> Result<SeparationWitness, CounterexampleError> {
    if n == 0 {
        return Err(CounterexampleError::CircleIndexZero);
    }
    assert!(
        *pi.lo() > rat_int(3),
        "the level-0 bracket already separates 3 from pi"
    );
    let radius = rat(3, 1) / Rat::from_integer(BigInt::from(n));
    for j in 0..SEPARATION_PROBES {
        let circle = 1 + (j as u64 % n);
        let theta = rat(j as i64 % 5, 5);
        let r = &radius * rat(2 * j as i64 - 49, 50);
        let q = ASetQuery {
            r,
            point: WedgePoint::new(circle, theta),
        };
        if a_membership(&q, pi)? {
            return Err(CounterexampleError::SelfCheckFailed);
        }
    }
    Ok(SeparationWitness {
        stage: n,
        radius,
        probes_checked: SEPARATION_PROBES,
    })
}

/// A member of `A` inside the basic product neighborhood
/// `(-delta, delta) x V`, where `V` holds an arc of width `arc(n)` around
/// the basepoint on circle `n`. The witness takes the smallest `n` with
/// `pi/n < delta` and the basepoint angle, which lies in every arc; its
/// radius is the midpoint of the admissible rational window. Membership is
/// re-verified before returning.
pub fn product_limit_witness(
    delta: &Rat,
    arc: impl Fn(u64) -> Rat,
    pi: &mut PiBounds,
) -> Result<ASetQuery, CounterexampleError> {
    if !delta.is_positive() {
        return Err(CounterexampleError::DeltaNotPositive);
    }
    // Smallest n with pi/n < delta, i.e. n = floor(pi/delta) + 1; the
    // bracket decides the floor once both ends agree.
    let n = loop {
        let lo = (pi.lo() / delta).floor().to_integer();
        let hi = (pi.hi() / delta).floor().to_integer();
        if lo == hi {
            break (lo + BigInt::from(1))
                .to_u64()
                .expect("stage index fits in 64 bits");
        }
        pi.refine();
    };
    if !arc(n).is_positive() {
        return Err(CounterexampleError::ArcNotPositive);
    }
    let n_rat = Rat::from_integer(BigInt::from(n));
    while &(pi.hi() / &n_rat) >= delta {
        pi.refine();
    }
    let window_lo = pi.hi() / &n_rat;
    let cap = delta.clone().min(pi.lo() / &n_rat + rat_int(1));
    let q = ASetQuery {
        r: midpoint(&window_lo, &cap),
        point: WedgePoint::new(n, rat_int(0)),
    };
    if !a_membership(&q, pi)? {
        return Err(CounterexampleError::SelfCheckFailed);
    }
    Ok(q)
}

/// One product-limit witness per `k = 1..=k_max` at `delta = 1/k`: members
/// of `A` arbitrarily close to `(0, basepoint)` in the product topology.
/// The radii strictly decrease with `k`.
pub fn not_closed_demo(
    k_max: u64,
    pi: &mut PiBounds,
) -> Result<Vec<ASetQuery>, CounterexampleError> {
    if k_max == 0 {
        return Err(CounterexampleError::KMaxZero);
    }
    let arc = |_: u64| rat(1, 8);
    let mut out: Vec<ASetQuery> = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let delta = rat(1, k as i64);
        let w = product_limit_witness(&delta, arc, pi)?;
        if let Some(prev) = out.last() {
            debug_assert!(w.r < prev.r);
        }
        out.push(w);
    }
    Ok(out)
}

/// The two halves of the demonstration in one report: per-stage separations
/// (no member near the critical point stagewise) and product-limit
/// witnesses (members arbitrarily close to it in the product topology).
/// `index_shift` records that circles are numbered from 1 here; subtract it
/// to recover 0-based circle labels.
#[derive(Clone, Debug, Serialize)]
pub struct HamckeReport {
    pub schema: &'static str,
    pub index_shift: u64,
    pub separations: Vec<SeparationWitness>,
    pub limit_witnesses: Vec<ASetQuery>,
}

pub fn hamcke_report(k_max: u64) -> Result<HamckeReport, CounterexampleError> {
    let mut pi = PiBounds::seed();
    let mut separations = Vec::with_capacity(k_max as usize);
    for n in 1..=k_max {
        separations.push(stage_separation_witness(n, &mut pi)?);
    }
    Ok(HamckeReport {
        schema: "hamcke/1",
        index_shift: 1,
        separations,
        limit_witnesses: not_closed_demo(k_max, &mut pi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_bracket_is_the_classic_pair() {
        let pi = PiBounds::seed();
        assert_eq!(*pi.lo(), rat(333, 106));
        assert_eq!(*pi.hi(), rat(355, 113));
        assert_eq!(pi.level(), 0);
    }

    #[test]
    fn refinement_nests_strictly_past_the_table() {
        let mut pi = PiBounds::seed();
        for _ in 0..MAX_CF_LEVEL + 4 {
            let (lo, hi, w) = (pi.lo().clone(), pi.hi().clone(), pi.width());
            pi.refine();
            assert!(*pi.lo() >= lo && *pi.hi() <= hi);
            assert!(pi.width() < w);
            assert!(pi.lo() < pi.hi());
        }
        assert_eq!(pi.level(), MAX_CF_LEVEL + 4);
    }

    #[test]
    fn convergent_table_matches_the_series() {
        let (m_lo, m_hi) = machin_bracket(60);
        assert!(m_lo < m_hi);
        for level in 0..=MAX_CF_LEVEL {
            let (lo, hi) = cf_bracket(level);
            assert!(lo < m_lo, "low convergent out of place at level {level}");
            assert!(m_hi < hi, "high convergent out of place at level {level}");
        }
    }

    #[test]
    fn membership_examples() {
        let mut pi = PiBounds::seed();
        let q = |r: Rat, n: u64, theta: Rat| ASetQuery {
            r,
            point: WedgePoint::new(n, theta),
        };
        assert!(!a_membership(&q(rat_int(0), 3, rat(1, 4)), &mut pi).unwrap());
        assert!(a_membership(&q(rat(1, 2), 10, rat_int(0)), &mut pi).unwrap());
        assert!(!a_membership(&q(rat(1, 3), 1, rat(1, 2)), &mut pi).unwrap());
        assert_eq!(
            a_membership(&q(rat_int(1), 0, rat_int(0)), &mut pi),
            Err(CounterexampleError::CircleIndexZero)
        );
    }

    #[test]
    fn membership_is_level_independent() {
        let queries = [
            (rat(22, 7), 1, rat_int(0)),
            (rat(333, 106), 1, rat(1, 2)),
            (rat(355, 113), 1, rat(1, 2)),
            (rat(45, 100), 7, rat(2, 3)),
            (rat(1, 2), 6, rat(9, 10)),
        ];
        for (r, n, theta) in queries {
            let q = ASetQuery {
                r,
                point: WedgePoint::new(n, theta),
            };
            let mut shallow = PiBounds::seed();
            let mut deep = PiBounds::seed();
            for _ in 0..3 {
                deep.refine();
            }
            assert_eq!(
                a_membership(&q, &mut shallow).unwrap(),
                a_membership(&q, &mut deep).unwrap()
            );
        }
    }

    #[test]
    fn wedge_points_reduce_and_canonicalize() {
        let p = WedgePoint::new(2, rat(7, 3));
        assert_eq!(p.theta, rat(1, 3));
        assert_eq!(p.circle_index, 2);
        let neg = WedgePoint::new(2, rat(-1, 4));
        assert_eq!(neg.theta, rat(3, 4));
        let base_on_circle = WedgePoint::new(5, rat_int(1));
        assert!(base_on_circle.is_basepoint());
        assert_eq!(base_on_circle.circle_index, 5);
        assert_eq!(base_on_circle.canonical(), WedgePoint::basepoint());
    }

    #[test]
    fn separation_witnesses() {
        let mut pi = PiBounds::seed();
        let w1 = stage_separation_witness(1, &mut pi).unwrap();
        assert_eq!(w1.radius, rat_int(3));
        assert_eq!(w1.probes_checked, 50);
        let w7 = stage_separation_witness(7, &mut pi).unwrap();
        assert_eq!(w7.radius, rat(3, 7));
        assert_eq!(
            stage_separation_witness(0, &mut pi),
            Err(CounterexampleError::CircleIndexZero)
        );
    }

    #[test]
    fn radius_four_admits_a_member() {
        // With radius 4 instead of 3/n the separation fails: 7/2 lies
        // between pi and pi + 1, so (7/2, basepoint of circle 1) is in A_1.
        let mut pi = PiBounds::seed();
        let q = ASetQuery {
            r: rat(7, 2),
            point: WedgePoint::new(1, rat_int(0)),
        };
        assert!(a_membership(&q, &mut pi).unwrap());
    }

    #[test]
    fn limit_witness_frozen_values() {
        let arc = |_: u64| rat(1, 8);
        let mut pi = PiBounds::seed();
        let w4 = product_limit_witness(&rat_int(4), arc, &mut pi).unwrap();
        assert_eq!(w4.point.circle_index, 1);
        assert_eq!(w4.r, rat(807, 226));

        let mut pi = PiBounds::seed();
        let wh = product_limit_witness(&rat(1, 2), arc, &mut pi).unwrap();
        assert_eq!(wh.point.circle_index, 7);
        assert_eq!(wh.r, rat(1501, 3164));
        assert!(wh.r < rat(1, 2));

        let mut pi = PiBounds::seed();
        let wm = product_limit_witness(&rat(1, 1000), arc, &mut pi).unwrap();
        assert_eq!(wm.point.circle_index, 3142);
        assert!(wm.r < rat(1, 1000));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let mut pi = PiBounds::seed();
        assert_eq!(
            product_limit_witness(&rat_int(0), |_| rat(1, 8), &mut pi),
            Err(CounterexampleError::DeltaNotPositive)
        );
        assert_eq!(
            product_limit_witness(&rat_int(1), |_| rat_int(0), &mut pi),
            Err(CounterexampleError::ArcNotPositive)
        );
        assert_eq!(
            not_closed_demo(0, &mut pi),
            Err(CounterexampleError::KMaxZero)
        );
    }

    #[test]
    fn demo_radii_strictly_decrease() {
        let mut pi = PiBounds::seed();
        let demo = not_closed_demo(3, &mut pi).unwrap();
        assert_eq!(demo.len(), 3);
        for (k, w) in demo.iter().enumerate() {
            assert!(w.r < rat(1, k as i64 + 1));
        }
        for pair in demo.windows(2) {
            assert!(pair[1].r < pair[0].r);
        }
    }

    #[test]
    fn report_shape() {
        let report = hamcke_report(2).unwrap();
        assert_eq!(report.schema, "hamcke/1");
        assert_eq!(report.index_shift, 1);
        assert_eq!(report.separations.len(), 2);
        assert_eq!(report.limit_witnesses.len(), 2);
        let json: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(json["schema"], "hamcke/1");
        assert_eq!(json["separations"][1]["radius"], "3/2");
        // delta = 1 needs the first circle with pi/n < 1, which is n = 4
        assert_eq!(json["limit_witnesses"][0]["point"]["circle_index"], 4);
    }
}
