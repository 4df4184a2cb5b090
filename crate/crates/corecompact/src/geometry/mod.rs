//! Finite unions of rational boxes and their exact set operations.
//!
//! `BoxUnion` is the workhorse representation for every open or arbitrary
//! set the crate manipulates. All operations are exact: membership,
//! containment, difference, intersection, closure, and the elementary cell
//! decomposition all reduce to rational endpoint comparisons. Dimension is
//! capped at [`MAX_DIM`] because cell decomposition is exponential in it.

mod cells;
mod interval;
mod rect;

pub use cells::{cell_indices, cell_rect, elementary_cells, grids_for, AxisGrid};
pub use interval::Interval;
pub use rect::Rect;

use crate::rat::Rat;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

/// Cell decomposition is exponential in dimension; higher dimensions are
/// rejected up front.
pub const MAX_DIM: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} outside supported range 1..={MAX_DIM}")]
    DimensionOutOfRange { dim: usize },
}

/// A finite union of boxes in a fixed dimension. The dimension is explicit
/// so empty unions still know their ambient space.
///
/// Canonical form (produced by [`BoxUnion::normalize`]) is pairwise disjoint,
/// with maximal interval merging in dimension 1 and a sorted box order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoxUnion {
    dim: usize,
    boxes: Vec<Rect>,
}

impl BoxUnion {
    pub fn new(dim: usize, boxes: Vec<Rect>) -> Result<BoxUnion, GeometryError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(GeometryError::DimensionOutOfRange { dim });
        }
        for b in &boxes {
            if b.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: b.dim(),
                });
            }
        }
        Ok(BoxUnion { dim, boxes })
    }

    pub fn empty(dim: usize) -> Result<BoxUnion, GeometryError> {
        BoxUnion::new(dim, Vec::new())
    }

    pub fn from_rect(b: Rect) -> Result<BoxUnion, GeometryError> {
        let dim = b.dim();
        BoxUnion::new(dim, vec![b])
    }

    /// Internal constructor for values already known to be well formed.
    pub(crate) fn raw(dim: usize, boxes: Vec<Rect>) -> BoxUnion {
        debug_assert!(dim >= 1 && dim <= MAX_DIM);
        debug_assert!(boxes.iter().all(|b| b.dim() == dim));
        BoxUnion { dim, boxes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rects(&self) -> &[Rect] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.iter().all(Rect::is_empty)
    }

    pub fn member(&self, p: &[Rat]) -> bool {
        debug_assert_eq!(p.len(), self.dim);
        self.boxes.iter().any(|b| b.member(p))
    }

    fn check_dim(&self, other: &BoxUnion) -> Result<(), GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Canonical form with the same point set: pairwise-disjoint boxes,
    /// maximal merging in dimension 1, sorted order. Idempotent.
    pub fn normalize(&self) -> BoxUnion {
        let live: Vec<&Rect> = self.boxes.iter().filter(|b| !b.is_empty()).collect();
        let mut out: Vec<Rect> = Vec::new();
        if self.dim == 1 {
            let mut intervals: Vec<Interval> =
                live.iter().map(|b| b.interval(0).clone()).collect();
            intervals.sort();
            let mut merged: Vec<Interval> = Vec::new();
            for iv in intervals {
                match merged.last_mut() {
                    Some(last) => match last.try_merge(&iv) {
                        Some(m) => *last = m,
                        None => merged.push(iv),
                    },
                    None => merged.push(iv),
                }
            }
            out = merged.into_iter().map(|i| Rect::new(vec![i])).collect();
        } else {
            for b in live {
                let mut fragments = vec![b.clone()];
                for placed in &out {
                    let mut next = Vec::new();
                    for f in fragments {
                        next.extend(f.subtract(placed));
                    }
                    fragments = next;
                    if fragments.is_empty() {
                        break;
                    }
                }
                out.extend(fragments);
            }
            out.sort();
        }
        BoxUnion::raw(self.dim, out)
    }

    /// Topological closure: every endpoint flag set to closed. Contains the
    /// input and is idempotent.
    pub fn closure(&self) -> BoxUnion {
        let closed: Vec<Rect> = self
            .boxes
            .iter()
            .filter(|b| !b.is_empty())
            .map(Rect::closure)
            .collect();
        BoxUnion::raw(self.dim, closed).normalize()
    }

    /// Exact set containment: `self` contains every point of `inner`.
    /// Decided by carving `inner` along `self`'s faces and checking the
    /// remainder is empty.
    pub fn contains(&self, inner: &BoxUnion) -> Result<bool, GeometryError> {
        self.check_dim(inner)?;
        Ok(inner.difference(self)?.is_empty())
    }

    /// `self` minus `other`, exact.
    pub fn difference(&self, other: &BoxUnion) -> Result<BoxUnion, GeometryError> {
        self.check_dim(other)?;
        let mut remaining: Vec<Rect> =
            self.boxes.iter().filter(|b| !b.is_empty()).cloned().collect();
        for cut in other.boxes.iter().filter(|b| !b.is_empty()) {
            let mut next = Vec::new();
            for r in remaining {
                next.extend(r.subtract(cut));
            }
            remaining = next;
            if remaining.is_empty() {
                break;
            }
        }
        Ok(BoxUnion::raw(self.dim, remaining))
    }

    pub fn intersect(&self, other: &BoxUnion) -> Result<BoxUnion, GeometryError> {
        self.check_dim(other)?;
        let mut out = Vec::new();
        for a in self.boxes.iter().filter(|b| !b.is_empty()) {
            for b in other.boxes.iter().filter(|b| !b.is_empty()) {
                let i = a.intersect(b);
                if !i.is_empty() {
                    out.push(i);
                }
            }
        }
        Ok(BoxUnion::raw(self.dim, out))
    }

    pub fn union_with(&self, other: &BoxUnion) -> Result<BoxUnion, GeometryError> {
        self.check_dim(other)?;
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Ok(BoxUnion::raw(self.dim, boxes))
    }

    /// Intersection with a single box, kept cheap for carrier restriction.
    pub fn intersect_rect(&self, r: &Rect) -> BoxUnion {
        debug_assert_eq!(r.dim(), self.dim);
        let out: Vec<Rect> = self
            .boxes
            .iter()
            .map(|b| b.intersect(r))
            .filter(|b| !b.is_empty())
            .collect();
        BoxUnion::raw(self.dim, out)
    }

    /// Smallest closed box containing the union, `None` when empty.
    pub fn bounding_rect(&self) -> Option<Rect> {
        let mut live = self.boxes.iter().filter(|b| !b.is_empty());
        let first = live.next()?;
        let mut lo: Vec<Rat> = first.intervals().iter().map(|i| i.lo().clone()).collect();
        let mut hi: Vec<Rat> = first.intervals().iter().map(|i| i.hi().clone()).collect();
        for b in live {
            for (axis, iv) in b.intervals().iter().enumerate() {
                if iv.lo() < &lo[axis] {
                    lo[axis] = iv.lo().clone();
                }
                if iv.hi() > &hi[axis] {
                    hi[axis] = iv.hi().clone();
                }
            }
        }
        Some(Rect::new(
            lo.into_iter()
                .zip(hi)
                .map(|(l, h)| Interval::closed(l, h))
                .collect(),
        ))
    }

    /// A deterministic rational sample point, `None` when empty.
    pub fn sample(&self) -> Option<Vec<Rat>> {
        let cells = elementary_cells(&[self]).ok()?;
        cells.first().map(Rect::sample)
    }
}

impl<'de> Deserialize<'de> for BoxUnion {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<BoxUnion, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            boxes: Vec<Rect>,
        }
        let raw = Raw::deserialize(de)?;
        BoxUnion::new(raw.dim, raw.boxes).map_err(serde::de::Error::custom)
    }
}
