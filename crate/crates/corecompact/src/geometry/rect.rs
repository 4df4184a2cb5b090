//! Axis-aligned boxes: finite products of intervals.

use super::interval::Interval;
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A box in `d` dimensions, one interval per axis. The box is empty exactly
/// when some factor is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rect {
    dims: Vec<Interval>,
}

impl Rect {
    pub fn new(dims: Vec<Interval>) -> Rect {
        Rect { dims }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.dims
    }

    pub fn interval(&self, axis: usize) -> &Interval {
        &self.dims[axis]
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().any(Interval::is_empty)
    }

    pub fn member(&self, p: &[Rat]) -> bool {
        debug_assert_eq!(p.len(), self.dims.len());
        self.dims.iter().zip(p).all(|(iv, x)| iv.member(x))
    }

    pub fn closure(&self) -> Rect {
        Rect::new(self.dims.iter().map(Interval::closure).collect())
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        debug_assert_eq!(self.dim(), other.dim());
        Rect::new(
            self.dims
                .iter()
                .zip(&other.dims)
                .map(|(a, b)| a.intersect(b))
                .collect(),
        )
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        if other.is_empty() {
            return true;
        }
        self.dims
            .iter()
            .zip(&other.dims)
            .all(|(a, b)| a.contains_interval(b))
    }

    /// `self` minus `other`, as pairwise-disjoint pieces. Splits axis by
    /// axis: the part of the current axis outside `other` goes whole, the
    /// part inside recurses into later axes.
    pub fn subtract(&self, other: &Rect) -> Vec<Rect> {
        debug_assert_eq!(self.dim(), other.dim());
        if self.is_empty() {
            return Vec::new();
        }
        if self.intersect(other).is_empty() {
            return vec![self.clone()];
        }
        let mut pieces = Vec::new();
        let mut inside_prefix: Vec<Interval> = Vec::with_capacity(self.dim());
        for axis in 0..self.dim() {
            let mine = &self.dims[axis];
            let theirs = &other.dims[axis];
            let (left, right) = mine.subtract(theirs);
            for part in [left, right] {
                if part.is_empty() {
                    continue;
                }
                let mut dims = inside_prefix.clone();
                dims.push(part);
                dims.extend_from_slice(&self.dims[axis + 1..]);
                pieces.push(Rect::new(dims));
            }
            inside_prefix.push(mine.intersect(theirs));
        }
        pieces.retain(|r| !r.is_empty());
        pieces
    }

    /// Cartesian product: concatenates the axes.
    pub fn product(&self, other: &Rect) -> Rect {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Rect::new(dims)
    }

    /// A rational point inside the box, coordinatewise representative.
    pub fn sample(&self) -> Vec<Rat> {
        debug_assert!(!self.is_empty());
        self.dims.iter().map(Interval::sample).collect()
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Rect {
        Rect::new(self.dims[range].to_vec())
    }

    pub fn is_open_rect(&self) -> bool {
        self.dims.iter().all(Interval::is_open_interval)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}
