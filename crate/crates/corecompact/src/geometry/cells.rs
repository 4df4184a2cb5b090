//! Elementary cell decomposition.
//!
//! Collecting every interval endpoint of the inputs along each axis cuts the
//! ambient space into a grid of atoms: degenerate points `[c, c]` at the cuts
//! and open gaps `(c_i, c_{i+1})` between consecutive cuts. A cell is a
//! product of atoms. Because every input face lies on a cut, each cell lies
//! entirely inside or entirely outside each input, so one rational sample
//! point per cell decides membership exactly. Cells act as the finite
//! stand-ins for points everywhere a cover or witness has to be selected.

use super::{BoxUnion, GeometryError, Interval, Rect};
use crate::rat::Rat;
use std::collections::BTreeSet;

/// Sorted cut coordinates for one axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisGrid {
    cuts: Vec<Rat>,
}

impl AxisGrid {
    pub fn new(mut cuts: Vec<Rat>) -> AxisGrid {
        cuts.sort();
        cuts.dedup();
        AxisGrid { cuts }
    }

    pub fn from_set(cuts: BTreeSet<Rat>) -> AxisGrid {
        AxisGrid {
            cuts: cuts.into_iter().collect(),
        }
    }

    pub fn cuts(&self) -> &[Rat] {
        &self.cuts
    }

    /// Atoms are indexed `0..2m-1` for `m` cuts: even index `2i` is the point
    /// `[c_i, c_i]`, odd index `2i+1` is the gap `(c_i, c_{i+1})`.
    pub fn atom_count(&self) -> usize {
        match self.cuts.len() {
            0 => 0,
            m => 2 * m - 1,
        }
    }

    pub fn atom(&self, idx: usize) -> Interval {
        if idx % 2 == 0 {
            Interval::point(self.cuts[idx / 2].clone())
        } else {
            Interval::open(self.cuts[idx / 2].clone(), self.cuts[idx / 2 + 1].clone())
        }
    }

    /// Neighbor atom indices of a point atom; `None` marks the unbounded
    /// region beyond the first or last cut.
    pub fn left_of(&self, idx: usize) -> Option<usize> {
        idx.checked_sub(1)
    }

    pub fn right_of(&self, idx: usize) -> Option<usize> {
        if idx + 1 < self.atom_count() {
            Some(idx + 1)
        } else {
            None
        }
    }

    /// Index of the atom containing `x`, if `x` lies within the cut range.
    pub fn locate(&self, x: &Rat) -> Option<usize> {
        if self.cuts.is_empty() {
            return None;
        }
        match self.cuts.binary_search(x) {
            Ok(i) => Some(2 * i),
            Err(0) => None,
            Err(i) if i == self.cuts.len() => None,
            Err(i) => Some(2 * (i - 1) + 1),
        }
    }
}

/// Grids induced by the given unions, one per axis, with optional extra cuts
/// (carrier faces, probe coordinates) merged in.
pub fn grids_for(unions: &[&BoxUnion], extra: &[Vec<Rat>]) -> Vec<AxisGrid> {
    let dim = unions
        .first()
        .map(|u| u.dim())
        .or_else(|| Some(extra.len()).filter(|n| *n > 0))
        .unwrap_or(0);
    let mut sets: Vec<BTreeSet<Rat>> = vec![BTreeSet::new(); dim];
    for u in unions {
        for b in u.rects() {
            if b.is_empty() {
                continue;
            }
            for (axis, iv) in b.intervals().iter().enumerate() {
                sets[axis].insert(iv.lo().clone());
                sets[axis].insert(iv.hi().clone());
            }
        }
    }
    for (axis, cuts) in extra.iter().enumerate() {
        for c in cuts {
            sets[axis].insert(c.clone());
        }
    }
    sets.into_iter().map(AxisGrid::from_set).collect()
}

/// Enumerates atom index vectors in lexicographic order.
pub fn cell_indices(grids: &[AxisGrid]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if grids.iter().any(|g| g.atom_count() == 0) {
        return out;
    }
    let mut idx = vec![0usize; grids.len()];
    loop {
        out.push(idx.clone());
        let mut axis = grids.len();
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < grids[axis].atom_count() {
                break;
            }
            idx[axis] = 0;
        }
    }
}

pub fn cell_rect(grids: &[AxisGrid], idx: &[usize]) -> Rect {
    Rect::new(
        grids
            .iter()
            .zip(idx)
            .map(|(g, i)| g.atom(*i))
            .collect(),
    )
}

/// The cells induced by the combined coordinate cuts of `unions`, restricted
/// to those meeting at least one input. The returned cells are pairwise
/// disjoint and partition the union of all inputs.
pub fn elementary_cells(unions: &[&BoxUnion]) -> Result<Vec<Rect>, GeometryError> {
    let dim = match unions.first() {
        Some(u) => u.dim(),
        None => return Ok(Vec::new()),
    };
    for u in unions {
        if u.dim() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: u.dim(),
            });
        }
    }
    let grids = grids_for(unions, &[]);
    let mut cells = Vec::new();
    for idx in cell_indices(&grids) {
        let cell = cell_rect(&grids, &idx);
        let sample = cell.sample();
        if unions.iter().any(|u| u.member(&sample)) {
            cells.push(cell);
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn union1(intervals: Vec<Interval>) -> BoxUnion {
        BoxUnion::new(1, intervals.into_iter().map(|i| Rect::new(vec![i])).collect()).unwrap()
    }

    #[test]
    fn overlapping_intervals_decompose() {
        // Inputs (0,2) and (1,3) must split at every endpoint.
        let a = union1(vec![Interval::open(rat_int(0), rat_int(2))]);
        let b = union1(vec![Interval::open(rat_int(1), rat_int(3))]);
        let cells = elementary_cells(&[&a, &b]).unwrap();
        let expected = vec![
            Rect::new(vec![Interval::open(rat_int(0), rat_int(1))]),
            Rect::new(vec![Interval::point(rat_int(1))]),
            Rect::new(vec![Interval::open(rat_int(1), rat_int(2))]),
            Rect::new(vec![Interval::point(rat_int(2))]),
            Rect::new(vec![Interval::open(rat_int(2), rat_int(3))]),
        ];
        assert_eq!(cells, expected);
    }

    #[test]
    fn empty_inputs_have_no_cells() {
        let e = BoxUnion::empty(1).unwrap();
        assert!(elementary_cells(&[&e]).unwrap().is_empty());
        assert!(elementary_cells(&[]).unwrap().is_empty());
    }

    #[test]
    fn cells_partition_the_inputs() {
        let a = union1(vec![
            Interval::closed(rat_int(0), rat_int(2)),
            Interval::point(rat_int(4)),
        ]);
        let b = union1(vec![Interval::new(rat_int(1), rat_int(3), true, false)]);
        let cells = elementary_cells(&[&a, &b]).unwrap();
        // Disjoint, and each entirely inside or outside each input.
        for (i, c) in cells.iter().enumerate() {
            for d in cells.iter().skip(i + 1) {
                assert!(c.intersect(d).is_empty());
            }
            let s = c.sample();
            let in_a = a.member(&s);
            let in_b = b.member(&s);
            assert!(in_a || in_b);
            // Probe endpoints too: the whole cell matches its sample.
            for p in [c.closure().sample()] {
                if c.member(&p) {
                    assert_eq!(a.member(&p), in_a);
                    assert_eq!(b.member(&p), in_b);
                }
            }
        }
        // Every probe point of the inputs lies in some cell.
        for probe in [rat_int(0), rat(1, 2), rat_int(1), rat(5, 2), rat_int(3), rat_int(4)] {
            let pv = vec![probe.clone()];
            if a.member(&pv) || b.member(&pv) {
                assert!(cells.iter().any(|c| c.member(&pv)), "uncovered {probe}");
            }
        }
    }

    #[test]
    fn locate_finds_atoms() {
        let g = AxisGrid::new(vec![rat_int(0), rat_int(1), rat_int(3)]);
        assert_eq!(g.atom_count(), 5);
        assert_eq!(g.locate(&rat_int(0)), Some(0));
        assert_eq!(g.locate(&rat(1, 2)), Some(1));
        assert_eq!(g.locate(&rat_int(1)), Some(2));
        assert_eq!(g.locate(&rat_int(2)), Some(3));
        assert_eq!(g.locate(&rat_int(3)), Some(4));
        assert_eq!(g.locate(&rat_int(4)), None);
        assert_eq!(g.locate(&rat(-1, 2)), None);
    }
}
