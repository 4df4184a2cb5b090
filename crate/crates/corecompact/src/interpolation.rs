//! Interpolation between a product and an open set sitting way above it.
//!
//! Given `s x t` way below `w`, [`interpolate`] produces open `u_s ⊇ s` and
//! `v_t ⊇ t` with `u_s x v_t` still way below `w`, in two passes over a
//! finite basis. The basis consists of grid-aligned relatively-open
//! rectangles `A x B` whose closure sits inside `w`; the grid collects the
//! coordinate cuts of the inputs and the carriers plus `level` rounds of
//! midpoint insertion. Pass 1 walks the elementary cells of `s`: each cell
//! gets the minimal grid-aligned open box `A` around its closure and a
//! greedy family of right factors `B` covering the closure of `t`. Pass 2
//! greedily picks cells whose `A` boxes cover the closure of `s`; the
//! output is the union of the picked `A`s against the intersection of the
//! picked right-factor unions.
//!
//! Taking `A` minimal loses nothing: shrinking a left factor only enlarges
//! the set of right factors whose product closure still fits in `w`.
//!
//! Every step is recorded in an [`InterpolationTrace`] that replays to the
//! same output bit for bit.

use crate::geometry::{
    cell_indices, cell_rect, AxisGrid, BoxUnion, GeometryError, Interval, Rect,
};
use crate::rat::{midpoint, rat_int, Rat};
use crate::spaces::{product_open, Space, SpaceError};
use crate::waybelow::{way_below, CoverFamily, WayBelowError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Refinement levels tried before giving up.
pub const DEFAULT_MAX_REFINE: u32 = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterpolationError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    WayBelow(#[from] WayBelowError),
    #[error("rational-trace factors are not supported")]
    UnsupportedSpace,
    #[error("the product of the inputs is not way below w")]
    PreconditionFailed { refutation: CoverFamily },
    #[error("no basis cover found within {levels} refinement levels")]
    Inconclusive { levels: u32 },
    #[error("trace records are incomplete")]
    MalformedTrace,
}

/// One left-cell's pass-1 record: the cell, its left factor `A`, the greedy
/// right factors in selection order, and their union.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub cell: Rect,
    pub left: Rect,
    pub rights: Vec<Rect>,
    pub v_c: BoxUnion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondPass {
    pub selected: Vec<usize>,
    pub u_s: BoxUnion,
    pub v_t: BoxUnion,
    /// Set when an empty input side short-circuits both passes.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationTrace {
    #[serde(with = "crate::rat::rat_grid_string")]
    pub x_cuts: Vec<Vec<Rat>>,
    #[serde(with = "crate::rat::rat_grid_string")]
    pub y_cuts: Vec<Vec<Rat>>,
    pub level: u32,
    pub per_cell: Vec<CellRecord>,
    pub second_pass: SecondPass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpolation {
    pub u_s: BoxUnion,
    pub v_t: BoxUnion,
    pub trace: InterpolationTrace,
}

pub fn interpolate(
    x_space: &Space,
    y_space: &Space,
    s: &BoxUnion,
    t: &BoxUnion,
    w: &BoxUnion,
) -> Result<Interpolation, InterpolationError> {
    interpolate_with(x_space, y_space, s, t, w, DEFAULT_MAX_REFINE)
}

pub fn interpolate_with(
    x_space: &Space,
    y_space: &Space,
    s: &BoxUnion,
    t: &BoxUnion,
    w: &BoxUnion,
    max_refine: u32,
) -> Result<Interpolation, InterpolationError> {
    if x_space.has_trace() || y_space.has_trace() {
        return Err(InterpolationError::UnsupportedSpace);
    }
    let product = Space::product(x_space.clone(), y_space.clone())?;
    let verdict = way_below(&product, &product_open(s, t)?, w)?;
    if !verdict.holds {
        return Err(InterpolationError::PreconditionFailed {
            refutation: verdict.refutation.expect("negative verdicts carry a refutation"),
        });
    }

    let dx = x_space.dim();
    let dy = y_space.dim();
    let s_rel = x_space.restrict(s)?;
    let t_rel = y_space.restrict(t)?;
    let w_rel = product.restrict(w)?;

    if s_rel.is_empty() || t_rel.is_empty() {
        let u_s = if s_rel.is_empty() {
            BoxUnion::empty(dx)?
        } else {
            padded_open(x_space, &s_rel)?
        };
        let v_t = if t_rel.is_empty() {
            BoxUnion::empty(dy)?
        } else {
            padded_open(y_space, &t_rel)?
        };
        let trace = InterpolationTrace {
            x_cuts: Vec::new(),
            y_cuts: Vec::new(),
            level: 0,
            per_cell: Vec::new(),
            second_pass: SecondPass {
                selected: Vec::new(),
                u_s: u_s.clone(),
                v_t: v_t.clone(),
                degenerate: true,
            },
        };
        return Ok(Interpolation { u_s, v_t, trace });
    }

    let cl_s = x_space.relative_closure(&s_rel)?;
    let cl_t = y_space.relative_closure(&t_rel)?;
    let x_carriers = x_space.axis_carriers();
    let y_carriers = y_space.axis_carriers();

    'level: for level in 1..=max_refine {
        let x_cuts = factor_cuts(x_space, &s_rel, &w_rel, 0, level);
        let y_cuts = factor_cuts(y_space, &t_rel, &w_rel, dx, level);
        let x_grids: Vec<AxisGrid> = x_cuts.iter().cloned().map(AxisGrid::new).collect();
        let y_grids: Vec<AxisGrid> = y_cuts.iter().cloned().map(AxisGrid::new).collect();
        let b_rects = lex_products(
            &(0..dy)
                .map(|a| axis_candidates(&y_cuts[a], y_carriers[a].as_ref()))
                .collect::<Vec<_>>(),
        );

        let mut per_cell: Vec<CellRecord> = Vec::new();
        for idx in cell_indices(&x_grids) {
            let cell = cell_rect(&x_grids, &idx);
            if !s_rel.member(&cell.sample()) {
                continue;
            }
            let left = enclosing_open(&cell, &x_cuts, &x_carriers);
            let sect = right_sections(&left.closure(), &w_rel, &y_grids)?;
            let Some(rights) = cover_target(&sect, &cl_t, &b_rects)? else {
                continue 'level;
            };
            let v_c = fold_union_rects(dy, &rights)?;
            per_cell.push(CellRecord { cell, left, rights, v_c });
        }

        // Pass 2: the left factors together contain the closure of every
        // cell, hence the closure of s, so the greedy sweep always finishes.
        let mut remaining = cl_s.clone();
        let mut selected: Vec<usize> = Vec::new();
        for (i, rec) in per_cell.iter().enumerate() {
            if remaining.is_empty() {
                break;
            }
            let a_union = BoxUnion::from_rect(rec.left.clone())?;
            if remaining.intersect(&a_union)?.is_empty() {
                continue;
            }
            remaining = remaining.difference(&a_union)?.normalize();
            selected.push(i);
        }
        debug_assert!(remaining.is_empty());

        let u_s = assemble_u_s(&per_cell, &selected, dx)?;
        let v_t = assemble_v_t(&per_cell, &selected, dy)?;
        #[cfg(debug_assertions)]
        {
            let check = way_below(&product, &product_open(&u_s, &v_t)?, w)?;
            debug_assert!(check.holds, "every selected rectangle's closure sits in w");
        }
        let trace = InterpolationTrace {
            x_cuts,
            y_cuts,
            level,
            per_cell,
            second_pass: SecondPass {
                selected,
                u_s: u_s.clone(),
                v_t: v_t.clone(),
                degenerate: false,
            },
        };
        return Ok(Interpolation { u_s, v_t, trace });
    }
    Err(InterpolationError::Inconclusive { levels: max_refine })
}

/// Recompute `(u_s, v_t)` from the records alone: selected indices, left
/// factors, right factors. Shares no state with the search.
pub fn replay_trace(trace: &InterpolationTrace) -> Result<(BoxUnion, BoxUnion), InterpolationError> {
    if trace.second_pass.degenerate {
        return Ok((trace.second_pass.u_s.clone(), trace.second_pass.v_t.clone()));
    }
    let first = trace.per_cell.first().ok_or(InterpolationError::MalformedTrace)?;
    let dx = first.left.dim();
    let dy = first
        .rights
        .first()
        .ok_or(InterpolationError::MalformedTrace)?
        .dim();
    if trace
        .second_pass
        .selected
        .iter()
        .any(|&i| i >= trace.per_cell.len())
    {
        return Err(InterpolationError::MalformedTrace);
    }
    let u_s = assemble_u_s(&trace.per_cell, &trace.second_pass.selected, dx)?;
    let v_t = assemble_v_t(&trace.per_cell, &trace.second_pass.selected, dy)?;
    Ok((u_s, v_t))
}

fn fold_union_rects(dim: usize, rects: &[Rect]) -> Result<BoxUnion, GeometryError> {
    let mut out = BoxUnion::empty(dim)?;
    for r in rects {
        out = out.union_with(&BoxUnion::from_rect(r.clone())?)?;
    }
    Ok(out.normalize())
}

fn assemble_u_s(
    per_cell: &[CellRecord],
    selected: &[usize],
    dim: usize,
) -> Result<BoxUnion, GeometryError> {
    let lefts: Vec<Rect> = selected.iter().map(|&i| per_cell[i].left.clone()).collect();
    fold_union_rects(dim, &lefts)
}

fn assemble_v_t(
    per_cell: &[CellRecord],
    selected: &[usize],
    dim: usize,
) -> Result<BoxUnion, GeometryError> {
    let mut out: Option<BoxUnion> = None;
    for &i in selected {
        let v_c = fold_union_rects(dim, &per_cell[i].rights)?;
        out = Some(match out {
            None => v_c,
            Some(acc) => acc.intersect(&v_c)?.normalize(),
        });
    }
    match out {
        Some(v) => Ok(v),
        None => Ok(BoxUnion::empty(dim)?),
    }
}

/// Integer-padded open box around a nonempty set, clipped to the carrier:
/// the open superset used when the opposite side is empty.
fn padded_open(space: &Space, rel: &BoxUnion) -> Result<BoxUnion, InterpolationError> {
    let bb = rel.bounding_rect().expect("side checked nonempty");
    let padded = Rect::new(
        bb.intervals()
            .iter()
            .map(|iv| Interval::open(iv.lo() - rat_int(1), iv.hi() + rat_int(1)))
            .collect(),
    );
    Ok(space.restrict(&BoxUnion::from_rect(padded)?)?)
}

/// Per-axis cuts for one factor: the factor set's endpoints, the matching
/// slice of every `w` box, the carrier faces, then `level` rounds of
/// midpoint insertion.
fn factor_cuts(
    space: &Space,
    own: &BoxUnion,
    w_rel: &BoxUnion,
    w_offset: usize,
    level: u32,
) -> Vec<Vec<Rat>> {
    let dim = space.dim();
    let mut sets: Vec<BTreeSet<Rat>> = vec![BTreeSet::new(); dim];
    for b in own.rects().iter().filter(|b| !b.is_empty()) {
        for (a, iv) in b.intervals().iter().enumerate() {
            sets[a].insert(iv.lo().clone());
            sets[a].insert(iv.hi().clone());
        }
    }
    for b in w_rel.rects().iter().filter(|b| !b.is_empty()) {
        for (a, set) in sets.iter_mut().enumerate() {
            let iv = b.interval(w_offset + a);
            set.insert(iv.lo().clone());
            set.insert(iv.hi().clone());
        }
    }
    for (a, c) in space.axis_carriers().iter().enumerate() {
        if let Some(iv) = c {
            sets[a].insert(iv.lo().clone());
            sets[a].insert(iv.hi().clone());
        }
    }
    sets.into_iter()
        .map(|s| refine_cuts(s.into_iter().collect(), level))
        .collect()
}

/// `level` rounds of midpoint insertion between consecutive cuts.
fn refine_cuts(mut cuts: Vec<Rat>, level: u32) -> Vec<Rat> {
    for _ in 0..level {
        let mut next = Vec::with_capacity(cuts.len() * 2);
        for pair in cuts.windows(2) {
            next.push(pair[0].clone());
            next.push(midpoint(&pair[0], &pair[1]));
        }
        if let Some(last) = cuts.last() {
            next.push(last.clone());
        }
        cuts = next;
    }
    cuts
}

/// Minimal grid-aligned relatively-open box containing the closure of
/// `cell`: one cut beyond the closure on each side, or a closed face where
/// the closure already touches the carrier.
fn enclosing_open(cell: &Rect, cuts: &[Vec<Rat>], carriers: &[Option<Interval>]) -> Rect {
    Rect::new(
        cell.intervals()
            .iter()
            .enumerate()
            .map(|(a, atom)| {
                let cl = atom.closure();
                let prev = cuts[a].iter().rev().find(|c| *c < cl.lo());
                let next = cuts[a].iter().find(|c| *c > cl.hi());
                let (lo, lo_open) = match prev {
                    Some(c) => (c.clone(), true),
                    None => {
                        debug_assert_eq!(
                            carriers[a].as_ref().map(Interval::lo),
                            Some(cl.lo()),
                            "no cut below the closure only happens at the carrier face"
                        );
                        (cl.lo().clone(), false)
                    }
                };
                let (hi, hi_open) = match next {
                    Some(c) => (c.clone(), true),
                    None => {
                        debug_assert_eq!(
                            carriers[a].as_ref().map(Interval::hi),
                            Some(cl.hi()),
                            "no cut above the closure only happens at the carrier face"
                        );
                        (cl.hi().clone(), false)
                    }
                };
                Interval::new(lo, hi, lo_open, hi_open)
            })
            .collect(),
    )
}

/// Grid-aligned relatively-open intervals on one axis, endpoints at cuts,
/// closed faces only at carrier edges; ordered lo ascending, hi descending
/// so the greedy pass prefers wide factors.
fn axis_candidates(cuts: &[Rat], carrier: Option<&Interval>) -> Vec<Interval> {
    let mut out = Vec::new();
    for i in 0..cuts.len() {
        for j in (i + 1..cuts.len()).rev() {
            let lo_closed = carrier.is_some_and(|c| c.lo() == &cuts[i]);
            let hi_closed = carrier.is_some_and(|c| c.hi() == &cuts[j]);
            out.push(Interval::new(
                cuts[i].clone(),
                cuts[j].clone(),
                !lo_closed,
                !hi_closed,
            ));
        }
    }
    out
}

fn lex_products(per_axis: &[Vec<Interval>]) -> Vec<Rect> {
    let mut out: Vec<Vec<Interval>> = vec![Vec::new()];
    for axis in per_axis {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for iv in axis {
                let mut v = prefix.clone();
                v.push(iv.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(Rect::new).collect()
}

/// The y-region available to right factors for a given closed left factor:
/// the union of closed grid atoms whose product with `a_cl` sits in `w`.
/// A candidate `B` is valid exactly when its closure fits in this region.
fn right_sections(
    a_cl: &Rect,
    w_rel: &BoxUnion,
    y_grids: &[AxisGrid],
) -> Result<BoxUnion, GeometryError> {
    let dy = y_grids.len();
    let mut passing: Vec<Rect> = Vec::new();
    for idx in cell_indices(y_grids) {
        let ycell = cell_rect(y_grids, &idx).closure();
        let probe = BoxUnion::from_rect(a_cl.product(&ycell))?;
        if w_rel.contains(&probe)? {
            passing.push(ycell);
        }
    }
    Ok(BoxUnion::new(dy, passing)?.normalize())
}

/// Greedy smallest-index-first cover of `cl_t` by valid right factors.
fn cover_target(
    sect: &BoxUnion,
    cl_t: &BoxUnion,
    b_rects: &[Rect],
) -> Result<Option<Vec<Rect>>, GeometryError> {
    let mut remaining = cl_t.clone();
    let mut rights = Vec::new();
    for b in b_rects {
        if remaining.is_empty() {
            break;
        }
        if b.is_empty() || !sect.contains(&BoxUnion::from_rect(b.closure())?)? {
            continue;
        }
        let b_union = BoxUnion::from_rect(b.clone())?;
        if remaining.intersect(&b_union)?.is_empty() {
            continue;
        }
        remaining = remaining.difference(&b_union)?.normalize();
        rights.push(b.clone());
    }
    Ok(if remaining.is_empty() { Some(rights) } else { None })
}
