//! The way-below relation, decided with machine-checkable evidence.
//!
//! `S` is way below `T` when every open cover of `T` has a finite subfamily
//! covering `S`. On the carriers of this crate the relation collapses to a
//! closure criterion (relative closure of `S` contained in `T`), which is
//! what [`way_below`] decides; the cover-based definition survives in two
//! places that keep the criterion honest:
//!
//! * every negative verdict ships a [`CoverFamily`] that a third party can
//!   check with [`verify_refutation`], and
//! * [`oracle::oracle_way_below`] re-decides instances by enumerating
//!   structured covers, never consulting the criterion.
//!
//! Positive verdicts carry a [`SubcoverSelector`], a value that picks a
//! finite covering subfamily out of any open cover presented to it.

pub mod oracle;

pub use oracle::{oracle_way_below, oracle_way_below_report, OracleDefeat, OracleReport};

use crate::geometry::{cell_indices, cell_rect, grids_for, BoxUnion, GeometryError, Interval, Rect};
use crate::rat::{midpoint, rat, Rat};
use crate::spaces::{PointQ, Space, SpaceError};
use crate::surd::Surd;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use thiserror::Error;

/// Subfamily enumeration is exponential in the prefix length.
pub const K_MAX_CAP: usize = 16;

/// Length of the explicit prefix generated for punctured-cover refutations.
const PUNCTURE_PREFIX: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WayBelowError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("the target set is not open in the ambient space")]
    TargetNotOpen,
    #[error("the neighborhood is not open in the ambient space")]
    NeighborhoodNotOpen,
    #[error("the point does not lie in the open set")]
    PointNotInOpen,
    #[error("rational-trace spaces are not core-compact; way_below produces the refutation")]
    NonCoreCompact,
    #[error("unsupported space: {0}")]
    Unsupported(&'static str),
    #[error("k_max {k_max} exceeds the subfamily enumeration cap {cap}")]
    KMaxTooLarge { k_max: usize, cap: usize },
    #[error("cover family member {index} is not open in the space")]
    MemberNotOpen { index: usize },
    #[error("the cover does not cover the target")]
    FamilyDoesNotCover,
}

/// Positive evidence: a deterministic recipe that, handed the members of any
/// open cover of the target, selects a finite subfamily covering the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubcoverSelector {
    /// The source is empty; the empty subfamily covers it.
    Empty,
    /// The relative closure of the source. Quasi-compact (closed and bounded
    /// inside the carrier), so a cell sweep against any cover terminates.
    CompactCore { core: BoxUnion },
}

impl SubcoverSelector {
    /// Select indices of a finite subfamily of `members` covering the
    /// source the selector was issued for. Fails only if `members` is not
    /// actually a cover of the target.
    pub fn select(&self, members: &[BoxUnion]) -> Result<Vec<usize>, WayBelowError> {
        let core = match self {
            SubcoverSelector::Empty => return Ok(Vec::new()),
            SubcoverSelector::CompactCore { core } => core,
        };
        let mut inputs: Vec<&BoxUnion> = vec![core];
        inputs.extend(members.iter());
        let grids = grids_for(&inputs, &[]);
        let mut chosen = BTreeSet::new();
        for idx in cell_indices(&grids) {
            let sample = cell_rect(&grids, &idx).sample();
            if !core.member(&sample) {
                continue;
            }
            match members.iter().position(|m| m.member(&sample)) {
                Some(i) => {
                    chosen.insert(i);
                }
                None => return Err(WayBelowError::FamilyDoesNotCover),
            }
        }
        Ok(chosen.into_iter().collect())
    }
}

/// Negative evidence: an open cover of the target none of whose finite
/// subfamilies covers the source. The `Finite` kind lists the first members
/// of an implied ascending family; `ShrinkingAround` denotes the family
/// `T \ [alpha - 1/k, alpha + 1/k]` on one axis, for k >= 1, where alpha is
/// the irrational pinned strictly between `alpha_lo` and `alpha_hi` by
/// [`Surd::pinned_between`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverFamily {
    Finite {
        members: Vec<BoxUnion>,
    },
    ShrinkingAround {
        #[serde(with = "crate::rat::rat_string")]
        alpha_lo: Rat,
        #[serde(with = "crate::rat::rat_string")]
        alpha_hi: Rat,
        axis: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WayBelowVerdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SubcoverSelector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<CoverFamily>,
}

impl WayBelowVerdict {
    fn held(certificate: SubcoverSelector) -> WayBelowVerdict {
        WayBelowVerdict {
            holds: true,
            certificate: Some(certificate),
            refutation: None,
        }
    }

    fn refuted(refutation: CoverFamily) -> WayBelowVerdict {
        WayBelowVerdict {
            holds: false,
            certificate: None,
            refutation: Some(refutation),
        }
    }
}

/// The closed box `[beta - 1/k, beta + 1/k]^d` around a puncture point.
fn slab_around(beta: &[Rat], k: usize) -> Rect {
    let r = rat(1, k as i64);
    Rect::new(
        beta.iter()
            .map(|c| Interval::closed(c - &r, c + &r))
            .collect(),
    )
}

/// First `PUNCTURE_PREFIX` members of the cover `t \ [beta +- 1/k]^d`.
fn punctured_prefix(t_rel: &BoxUnion, beta: &[Rat]) -> Result<Vec<BoxUnion>, GeometryError> {
    (1..=PUNCTURE_PREFIX)
        .map(|k| {
            let slab = BoxUnion::from_rect(slab_around(beta, k))?;
            Ok(t_rel.difference(&slab)?.normalize())
        })
        .collect()
}

/// All grid corners (products of per-axis cut coordinates) of the combined
/// grid of `unions`, in lexicographic order.
fn grid_corners(unions: &[&BoxUnion]) -> Vec<Vec<Rat>> {
    let grids = grids_for(unions, &[]);
    let mut corners: Vec<Vec<Rat>> = vec![Vec::new()];
    for g in &grids {
        let mut next = Vec::with_capacity(corners.len() * g.cuts().len());
        for prefix in &corners {
            for cut in g.cuts() {
                let mut c = prefix.clone();
                c.push(cut.clone());
                next.push(c);
            }
        }
        corners = next;
    }
    corners
}

/// Decide `s` way below `t` in `space`, with a certificate or refutation.
///
/// The decision: empty `s` holds; `s` escaping `t` is refuted by the
/// one-member cover `{t}`; positive extent along a rational-trace axis is
/// refuted by a cover shrinking around a pinned irrational; otherwise the
/// relation holds exactly when the relative closure of `s` lies inside `t`,
/// and a failure of that containment is refuted by a cover punctured at a
/// grid corner of the escaping region. Corners suffice: a missing
/// elementary cell keeps its corners inside the closure, and an open `t`
/// containing a corner of a cell would contain the cell.
pub fn way_below(
    space: &Space,
    s: &BoxUnion,
    t: &BoxUnion,
) -> Result<WayBelowVerdict, WayBelowError> {
    if !space.is_open_in(t)? {
        return Err(WayBelowError::TargetNotOpen);
    }
    let s_rel = space.restrict(s)?;
    let t_rel = space.restrict(t)?;

    if s_rel.is_empty() {
        return Ok(WayBelowVerdict::held(SubcoverSelector::Empty));
    }

    if !t_rel.contains(&s_rel)? {
        return Ok(WayBelowVerdict::refuted(CoverFamily::Finite {
            members: vec![t_rel],
        }));
    }

    for axis in space.trace_axes() {
        if let Some(b) = s_rel.rects().iter().find(|b| !b.interval(axis).is_point()) {
            let iv = b.interval(axis);
            return Ok(WayBelowVerdict::refuted(CoverFamily::ShrinkingAround {
                alpha_lo: iv.lo().clone(),
                alpha_hi: iv.hi().clone(),
                axis,
            }));
        }
    }

    let core = space.relative_closure(&s_rel)?;
    if t_rel.contains(&core)? {
        return Ok(WayBelowVerdict::held(SubcoverSelector::CompactCore { core }));
    }

    let beta = grid_corners(&[&core, &t_rel])
        .into_iter()
        .find(|c| core.member(c) && !t_rel.member(c))
        .expect("a cell of the closure escapes t, so one of its corners does");
    Ok(WayBelowVerdict::refuted(CoverFamily::Finite {
        members: punctured_prefix(&t_rel, &beta)?,
    }))
}

/// An open `v` with `x ∈ v` and `v` way below `u`, on a core-compact space.
///
/// Construction: collect the axis cuts of `u`, the carrier, and `x`; grow a
/// box around `x` one axis at a time, always taking the widest grid-aligned
/// interval (ties broken toward smaller endpoints, carrier-edge closed faces
/// preferred) keeping the box inside `u`; then halve every open face toward
/// `x`. Halving puts the closure strictly inside the chosen box, hence
/// inside `u`. Openness of `u` guarantees every axis admits at least the
/// two-atom interval around `x`, so the sweep never gets stuck.
pub fn core_compact_witness(
    space: &Space,
    x: &PointQ,
    u: &BoxUnion,
) -> Result<BoxUnion, WayBelowError> {
    if space.has_trace() {
        return Err(WayBelowError::NonCoreCompact);
    }
    if !space.is_open_in(u)? {
        return Err(WayBelowError::NeighborhoodNotOpen);
    }
    let u_rel = space.restrict(u)?;
    if !space.carrier_member(&x.coords)? || !u_rel.member(&x.coords) {
        return Err(WayBelowError::PointNotInOpen);
    }

    let carriers = space.axis_carriers();
    let extra: Vec<Vec<Rat>> = carriers
        .iter()
        .zip(&x.coords)
        .map(|(c, xi)| {
            let mut cuts = vec![xi.clone()];
            if let Some(iv) = c {
                cuts.push(iv.lo().clone());
                cuts.push(iv.hi().clone());
            }
            cuts
        })
        .collect();
    let grids = grids_for(&[&u_rel], &extra);

    let mut chosen: Vec<Interval> = x.coords.iter().map(|c| Interval::point(c.clone())).collect();
    for axis in 0..space.dim() {
        let cuts = grids[axis].cuts();
        let xi = &x.coords[axis];
        let edge_lo = carriers[axis].as_ref().map(Interval::lo);
        let edge_hi = carriers[axis].as_ref().map(Interval::hi);
        let mut candidates: Vec<Interval> = Vec::new();
        for (i, lo) in cuts.iter().enumerate() {
            for hi in &cuts[i + 1..] {
                let lo_closed = edge_lo == Some(lo);
                let hi_closed = edge_hi == Some(hi);
                for (lc, hc) in [(true, true), (true, false), (false, true), (false, false)] {
                    if (lc && !lo_closed) || (hc && !hi_closed) {
                        continue;
                    }
                    let iv = Interval::new(lo.clone(), hi.clone(), !lc, !hc);
                    if iv.member(xi) {
                        candidates.push(iv);
                    }
                }
            }
        }
        candidates.sort_by(|a, b| {
            b.width()
                .cmp(&a.width())
                .then_with(|| a.lo().cmp(b.lo()))
                .then_with(|| a.lo_open().cmp(&b.lo_open()))
                .then_with(|| a.hi_open().cmp(&b.hi_open()))
        });
        let mut found = false;
        for cand in candidates {
            let mut trial = chosen.clone();
            trial[axis] = cand.clone();
            let trial_box = BoxUnion::from_rect(Rect::new(trial))?;
            if u_rel.contains(&trial_box)? {
                chosen[axis] = cand;
                found = true;
                break;
            }
        }
        debug_assert!(found, "an open set admits a grid neighborhood on every axis");
        if !found {
            return Err(WayBelowError::PointNotInOpen);
        }
    }

    let halved: Vec<Interval> = chosen
        .iter()
        .zip(&x.coords)
        .map(|(iv, xi)| {
            let lo = if iv.lo_open() { midpoint(iv.lo(), xi) } else { iv.lo().clone() };
            let hi = if iv.hi_open() { midpoint(xi, iv.hi()) } else { iv.hi().clone() };
            Interval::new(lo, hi, iv.lo_open(), iv.hi_open())
        })
        .collect();
    Ok(BoxUnion::from_rect(Rect::new(halved))?)
}

/// One subfamily's evidence of failure: the member indices and a rational
/// point of the source missed by their union.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissedPoint {
    pub subfamily: Vec<usize>,
    pub missed: PointQ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationReport {
    pub valid: bool,
    pub members_checked: usize,
    pub subfamilies_checked: usize,
    pub exhibits: Vec<MissedPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl RefutationReport {
    fn invalid(members_checked: usize, failure: &str) -> RefutationReport {
        RefutationReport {
            valid: false,
            members_checked,
            subfamilies_checked: 0,
            exhibits: Vec::new(),
            failure: Some(failure.to_string()),
        }
    }
}

/// Check that `family` refutes `s` way below `t`: its first `k_max` members
/// must be open, lie inside `t`, ascend, and every nonempty subfamily must
/// miss a rational point of `s`, which the report exhibits.
pub fn verify_refutation(
    space: &Space,
    s: &BoxUnion,
    t: &BoxUnion,
    family: &CoverFamily,
    k_max: usize,
) -> Result<bool, WayBelowError> {
    Ok(verify_refutation_report(space, s, t, family, k_max)?.valid)
}

pub fn verify_refutation_report(
    space: &Space,
    s: &BoxUnion,
    t: &BoxUnion,
    family: &CoverFamily,
    k_max: usize,
) -> Result<RefutationReport, WayBelowError> {
    if k_max > K_MAX_CAP {
        return Err(WayBelowError::KMaxTooLarge { k_max, cap: K_MAX_CAP });
    }
    if !space.is_open_in(t)? {
        return Err(WayBelowError::TargetNotOpen);
    }
    let s_rel = space.restrict(s)?;
    let t_rel = space.restrict(t)?;
    if k_max == 0 {
        return Ok(RefutationReport {
            valid: true,
            members_checked: 0,
            subfamilies_checked: 0,
            exhibits: Vec::new(),
            failure: None,
        });
    }
    match family {
        CoverFamily::Finite { members } => {
            let k = k_max.min(members.len());
            for (i, m) in members[..k].iter().enumerate() {
                if !space.is_open_in(m)? {
                    return Err(WayBelowError::MemberNotOpen { index: i });
                }
            }
            let rel: Vec<BoxUnion> = members[..k]
                .iter()
                .map(|m| space.restrict(m))
                .collect::<Result<_, _>>()?;
            for m in &rel {
                if !t_rel.contains(m)? {
                    return Ok(RefutationReport::invalid(k, "a member escapes the target"));
                }
            }
            for i in 0..k.saturating_sub(1) {
                if !rel[i + 1].contains(&rel[i])? {
                    return Ok(RefutationReport::invalid(k, "members do not ascend"));
                }
            }
            let mut exhibits = Vec::new();
            let mut subfamilies = 0usize;
            for mask in 1u32..(1u32 << k) {
                subfamilies += 1;
                let subfamily: Vec<usize> =
                    (0..k).filter(|i| mask & (1 << i) != 0).collect();
                let mut union = BoxUnion::empty(t_rel.dim())?;
                for &i in &subfamily {
                    union = union.union_with(&rel[i])?;
                }
                match s_rel.difference(&union.normalize())?.sample() {
                    Some(p) => exhibits.push(MissedPoint {
                        subfamily,
                        missed: PointQ::new(p),
                    }),
                    None => {
                        let mut report =
                            RefutationReport::invalid(k, "a subfamily covers the source");
                        report.subfamilies_checked = subfamilies;
                        return Ok(report);
                    }
                }
            }
            Ok(RefutationReport {
                valid: true,
                members_checked: k,
                subfamilies_checked: subfamilies,
                exhibits,
                failure: None,
            })
        }
        CoverFamily::ShrinkingAround { alpha_lo, alpha_hi, axis } => {
            // Members t \ [alpha - 1/k, alpha + 1/k] are open restrictions of
            // Euclidean opens, sit inside t, and ascend as the slabs shrink.
            // They cover every rational point of t because alpha is
            // irrational, which is exactly why the axis must carry the trace
            // topology: in a Euclidean space the family would miss real
            // points of t and not be a cover at all.
            if *axis >= space.dim() {
                return Ok(RefutationReport::invalid(0, "axis out of range"));
            }
            if !space.trace_axes().contains(axis) {
                return Ok(RefutationReport::invalid(
                    0,
                    "axis does not carry the trace topology",
                ));
            }
            if alpha_lo >= alpha_hi {
                return Ok(RefutationReport::invalid(0, "empty pin interval"));
            }
            let alpha = Surd::pinned_between(alpha_lo, alpha_hi);
            let host = s_rel.rects().iter().find(|b| {
                let iv = b.interval(*axis);
                alpha.cmp_rat(iv.lo()) == Ordering::Greater
                    && alpha.cmp_rat(iv.hi()) == Ordering::Less
            });
            let Some(host) = host else {
                return Ok(RefutationReport::invalid(
                    0,
                    "pinned point is not interior to the source on the axis",
                ));
            };
            let iv = host.interval(*axis);
            // For each possible largest index k, a rational of s within 1/k
            // of alpha; the union of any subfamily with largest index k is
            // t minus the k-th slab and misses that rational.
            let mut near: Vec<Rat> = Vec::with_capacity(k_max);
            for k in 1..=k_max {
                let cap = rat(1, k as i64);
                let mut level = 0;
                let q = loop {
                    let (lo, hi) = alpha.bounds(level);
                    if &hi - &lo <= cap && &lo > iv.lo() && &hi < iv.hi() {
                        break midpoint(&lo, &hi);
                    }
                    level += 1;
                };
                near.push(q);
            }
            let mut exhibits = Vec::new();
            let mut subfamilies = 0usize;
            for mask in 1u32..(1u32 << k_max) {
                subfamilies += 1;
                let subfamily: Vec<usize> =
                    (0..k_max).filter(|i| mask & (1 << i) != 0).collect();
                let largest = *subfamily.last().expect("mask is nonempty");
                let coords: Vec<Rat> = host
                    .intervals()
                    .iter()
                    .enumerate()
                    .map(|(a, hiv)| if a == *axis { near[largest].clone() } else { hiv.sample() })
                    .collect();
                debug_assert!(s_rel.member(&coords));
                exhibits.push(MissedPoint {
                    subfamily,
                    missed: PointQ::new(coords),
                });
            }
            Ok(RefutationReport {
                valid: true,
                members_checked: k_max,
                subfamilies_checked: subfamilies,
                exhibits,
                failure: None,
            })
        }
    }
}
