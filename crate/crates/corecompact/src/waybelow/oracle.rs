//! Brute-force cross-check of way-below by enumerating structured covers.
//!
//! The oracle never looks at the closure criterion. It walks a list of open
//! covers of the target and runs an honest finite-subcover search against
//! each; a cover that defeats the search is returned as evidence, and a
//! positive verdict is only issued once the whole list has been checked.
//! The list is complete for the sets this crate builds: the target itself,
//! overlapping dyadic windows at a few refinement levels, and a punctured
//! family per grid corner adherent to the source. If the relation fails,
//! one of those already defeats it, so agreement with [`super::way_below`]
//! is a theorem, not a coincidence; disagreement means a bug.

use super::{grid_corners, WayBelowError};
use crate::geometry::{cell_indices, cell_rect, grids_for, BoxUnion, Interval, Rect};
use crate::rat::{floor_int, rat, Rat};
use crate::spaces::{PointQ, Space};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// How a cover defeated the finite-subcover search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleDefeat {
    /// The one-member cover `{t}` misses a point of the source.
    SingletonGap { missed: PointQ },
    /// A dyadic window cover misses a point of the source.
    GridGap { level: u32, missed: PointQ },
    /// The family punctured at `beta` covers the target, but every finite
    /// subfamily misses source points near `beta`; `missed` is one of them,
    /// inside the innermost enumerated slab.
    Puncture { beta: PointQ, missed: PointQ },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdict: Option<bool>,
    pub conclusive: bool,
    pub covers_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defeat: Option<OracleDefeat>,
}

fn inconclusive(covers_checked: usize) -> OracleReport {
    OracleReport {
        verdict: None,
        conclusive: false,
        covers_checked,
        defeat: None,
    }
}

fn defeated(covers_checked: usize, defeat: OracleDefeat) -> OracleReport {
    OracleReport {
        verdict: Some(false),
        conclusive: true,
        covers_checked,
        defeat: Some(defeat),
    }
}

pub fn oracle_way_below(
    space: &Space,
    s: &BoxUnion,
    t: &BoxUnion,
    budget: usize,
) -> Result<Option<bool>, WayBelowError> {
    Ok(oracle_way_below_report(space, s, t, budget)?.verdict)
}

/// Decide `s` way below `t` by cover enumeration, spending at most `budget`
/// covers. Supports Euclidean spaces up to dimension 2. Returns `None` when
/// the budget runs out before the cover list is exhausted.
pub fn oracle_way_below_report(
    space: &Space,
    s: &BoxUnion,
    t: &BoxUnion,
    budget: usize,
) -> Result<OracleReport, WayBelowError> {
    if space.has_trace() {
        return Err(WayBelowError::Unsupported("rational-trace axes"));
    }
    if space.dim() > 2 {
        return Err(WayBelowError::Unsupported("dimension above 2"));
    }
    if !space.is_open_in(t)? {
        return Err(WayBelowError::TargetNotOpen);
    }
    let s_rel = space.restrict(s)?;
    let t_rel = space.restrict(t)?;
    let mut checked = 0usize;

    // Cover 1: the target alone. Its only nonempty subfamily is itself.
    if checked == budget {
        return Ok(inconclusive(checked));
    }
    checked += 1;
    if let Some(p) = s_rel.difference(&t_rel)?.sample() {
        return Ok(defeated(checked, OracleDefeat::SingletonGap { missed: PointQ::new(p) }));
    }

    // Covers 2..: windows ((i-1)h, (i+1)h)^d ∩ t for h = 2^-level. The
    // subcover search assigns each elementary cell of the source its
    // canonical window i = floor(sample / h); the window encloses the cell
    // by construction, so the search fails exactly on cells outside t.
    let max_level: u32 = if space.dim() == 1 { 3 } else { 1 };
    for level in 0..=max_level {
        if checked == budget {
            return Ok(inconclusive(checked));
        }
        checked += 1;
        if let Some(missed) = dyadic_cover_defeat(&s_rel, &t_rel, level)? {
            return Ok(defeated(checked, OracleDefeat::GridGap { level, missed }));
        }
    }

    // Covers n..: one punctured family per grid corner adherent to the
    // source but outside it. Corners inside the source are never needed:
    // the source sits inside the open target by now, so any elementary cell
    // of its closure escaping the target avoids the source along with every
    // corner of that cell, and one of those corners lands in this list.
    let cl_s = space.relative_closure(&s_rel)?;
    let candidates: Vec<Vec<Rat>> = grid_corners(&[&cl_s, &t_rel])
        .into_iter()
        .filter(|c| cl_s.member(c) && !s_rel.member(c))
        .collect();
    for beta in candidates {
        if checked == budget {
            return Ok(inconclusive(checked));
        }
        checked += 1;
        if t_rel.member(&beta) {
            // The punctured family misses beta in the target: not a cover,
            // so it constrains nothing.
            continue;
        }
        // The family t \ [beta +- 1/k]^d covers t and every finite
        // subfamily misses the source inside its innermost slab.
        let r = rat(1, 8);
        let slab = Rect::new(
            beta.iter()
                .map(|c| Interval::closed(c - &r, c + &r))
                .collect(),
        );
        let missed = s_rel
            .intersect_rect(&slab)
            .sample()
            .expect("beta is adherent to the source, so every slab meets it");
        return Ok(defeated(
            checked,
            OracleDefeat::Puncture {
                beta: PointQ::new(beta),
                missed: PointQ::new(missed),
            },
        ));
    }

    Ok(OracleReport {
        verdict: Some(true),
        conclusive: true,
        covers_checked: checked,
        defeat: None,
    })
}

/// Finite-subcover search against the dyadic window cover at `level`; returns
/// a missed source point on failure.
fn dyadic_cover_defeat(
    s_rel: &BoxUnion,
    t_rel: &BoxUnion,
    level: u32,
) -> Result<Option<PointQ>, WayBelowError> {
    let Some(bb) = s_rel.bounding_rect() else {
        return Ok(None);
    };
    let h = rat(1, 1 << level);
    let extra: Vec<Vec<Rat>> = bb
        .intervals()
        .iter()
        .map(|iv| {
            let lo: BigInt = floor_int(&(iv.lo() / &h)) - 1;
            let hi: BigInt = floor_int(&(iv.hi() / &h)) + 2;
            let mut cuts = Vec::new();
            let mut i = lo;
            while i <= hi {
                cuts.push(Rat::from_integer(i.clone()) * &h);
                i += BigInt::one();
            }
            cuts
        })
        .collect();
    let grids = grids_for(&[s_rel, t_rel], &extra);
    for idx in cell_indices(&grids) {
        let sample = cell_rect(&grids, &idx).sample();
        if s_rel.member(&sample) && !t_rel.member(&sample) {
            return Ok(Some(PointQ::new(sample)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn oi(a: i64, b: i64) -> Interval {
        Interval::open(rat_int(a), rat_int(b))
    }

    fn u1(ivs: Vec<Interval>) -> BoxUnion {
        BoxUnion::new(1, ivs.into_iter().map(|i| Rect::new(vec![i])).collect()).unwrap()
    }

    fn line() -> Space {
        Space::euclidean_full(1).unwrap()
    }

    #[test]
    fn conclusive_positive() {
        let report =
            oracle_way_below_report(&line(), &u1(vec![oi(0, 1)]), &u1(vec![oi(-1, 2)]), 50)
                .unwrap();
        assert_eq!(report.verdict, Some(true));
        assert!(report.conclusive);
        assert_eq!(report.defeat, None);
    }

    #[test]
    fn singleton_gap_defeat() {
        let report =
            oracle_way_below_report(&line(), &u1(vec![oi(0, 3)]), &u1(vec![oi(0, 2)]), 50)
                .unwrap();
        assert_eq!(report.verdict, Some(false));
        match report.defeat.unwrap() {
            OracleDefeat::SingletonGap { missed } => {
                assert!(u1(vec![oi(0, 3)]).member(&missed.coords));
                assert!(!u1(vec![oi(0, 2)]).member(&missed.coords));
            }
            other => panic!("unexpected defeat {other:?}"),
        }
        assert_eq!(report.covers_checked, 1);
    }

    #[test]
    fn puncture_defeat_at_shared_endpoint() {
        let s = u1(vec![oi(0, 1)]);
        let t = u1(vec![oi(0, 2)]);
        let report = oracle_way_below_report(&line(), &s, &t, 50).unwrap();
        assert_eq!(report.verdict, Some(false));
        // Singleton plus four window levels pass, the first corner defeats.
        assert_eq!(report.covers_checked, 6);
        match report.defeat.unwrap() {
            OracleDefeat::Puncture { beta, missed } => {
                assert_eq!(beta, PointQ::from_ints(&[0]));
                assert!(s.member(&missed.coords));
                assert!(missed.coords[0] <= rat(1, 8));
            }
            other => panic!("unexpected defeat {other:?}"),
        }
    }

    #[test]
    fn puncture_defeat_in_the_plane() {
        let s = BoxUnion::new(2, vec![Rect::new(vec![oi(0, 1), oi(0, 1)])]).unwrap();
        let t = BoxUnion::new(2, vec![Rect::new(vec![oi(0, 2), oi(0, 2)])]).unwrap();
        let plane = Space::product(line(), line()).unwrap();
        let report = oracle_way_below_report(&plane, &s, &t, 50).unwrap();
        assert_eq!(report.verdict, Some(false));
        match report.defeat.unwrap() {
            OracleDefeat::Puncture { beta, .. } => {
                assert_eq!(beta, PointQ::from_ints(&[0, 0]));
            }
            other => panic!("unexpected defeat {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let report =
            oracle_way_below_report(&line(), &u1(vec![oi(0, 1)]), &u1(vec![oi(0, 2)]), 2)
                .unwrap();
        assert_eq!(report.verdict, None);
        assert!(!report.conclusive);
        assert_eq!(report.covers_checked, 2);
    }

    #[test]
    fn unsupported_spaces() {
        let trace = Space::rational_trace(Rect::new(vec![Interval::closed(
            rat_int(0),
            rat_int(1),
        )]))
        .unwrap();
        assert!(matches!(
            oracle_way_below(&trace, &u1(vec![oi(0, 1)]), &u1(vec![oi(0, 1)]), 10),
            Err(WayBelowError::Unsupported(_))
        ));
        let threed = Space::product(Space::euclidean_full(2).unwrap(), line()).unwrap();
        let s3 = BoxUnion::empty(3).unwrap();
        assert!(matches!(
            oracle_way_below(&threed, &s3, &s3, 10),
            Err(WayBelowError::Unsupported(_))
        ));
    }

    #[test]
    fn empty_source_is_conclusively_true() {
        let report = oracle_way_below_report(
            &line(),
            &BoxUnion::empty(1).unwrap(),
            &u1(vec![oi(0, 2)]),
            50,
        )
        .unwrap();
        assert_eq!(report.verdict, Some(true));
        assert!(report.conclusive);
    }
}
