//! Ambient spaces: full Euclidean space, closed-box subspaces, rational
//! traces, and binary products.
//!
//! A `BoxUnion` never carries a topology by itself; a [`Space`] supplies it.
//! The same union can be open in one space and not in another (a box with a
//! closed face is open relative to a carrier whose boundary it sits on). All
//! openness questions are answered exactly through complement closure, and
//! rational traces share the Euclidean decision because every box here has
//! rational endpoints, so rational points are dense in every representable
//! set and its complement.

use crate::geometry::{BoxUnion, GeometryError, Interval, Rect, MAX_DIM};
use crate::rat::{self, Rat};
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("carrier must be a nonempty box with every face closed")]
    CarrierNotClosedBox,
    #[error("dimension mismatch: space has dimension {space_dim}, value has {value_dim}")]
    DimensionMismatch { space_dim: usize, value_dim: usize },
    #[error("operation requires a product space")]
    NotProduct,
}

/// A rational point, the probe currency of every space here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointQ {
    #[serde(with = "rat::rat_vec_string")]
    pub coords: Vec<Rat>,
}

impl PointQ {
    pub fn new(coords: Vec<Rat>) -> PointQ {
        PointQ { coords }
    }

    pub fn from_ints(coords: &[i64]) -> PointQ {
        PointQ {
            coords: coords.iter().map(|&c| rat::rat_int(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Carrier descriptor. `EuclideanBox` and `RationalTrace` carriers are
/// restricted to nonempty boxes with every face closed: relative closure and
/// the quasi-compactness of closed bounded sets both lean on that.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawSpace")]
pub enum Space {
    EuclideanFull {
        dim: usize,
    },
    EuclideanBox {
        carrier: Rect,
    },
    RationalTrace {
        carrier: Rect,
    },
    Product {
        left: Box<Space>,
        right: Box<Space>,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawSpace {
    EuclideanFull { dim: usize },
    EuclideanBox { carrier: Rect },
    RationalTrace { carrier: Rect },
    Product { left: Box<RawSpace>, right: Box<RawSpace> },
}

impl TryFrom<RawSpace> for Space {
    type Error = SpaceError;

    fn try_from(raw: RawSpace) -> Result<Space, SpaceError> {
        match raw {
            RawSpace::EuclideanFull { dim } => Space::euclidean_full(dim),
            RawSpace::EuclideanBox { carrier } => Space::euclidean_box(carrier),
            RawSpace::RationalTrace { carrier } => Space::rational_trace(carrier),
            RawSpace::Product { left, right } => {
                Space::product(Space::try_from(*left)?, Space::try_from(*right)?)
            }
        }
    }
}

fn check_carrier(carrier: &Rect) -> Result<(), SpaceError> {
    let dim = carrier.dim();
    if dim == 0 || dim > MAX_DIM {
        return Err(GeometryError::DimensionOutOfRange { dim }.into());
    }
    if carrier.is_empty() {
        return Err(SpaceError::CarrierNotClosedBox);
    }
    for iv in carrier.intervals() {
        if iv.lo_open() || iv.hi_open() {
            return Err(SpaceError::CarrierNotClosedBox);
        }
    }
    Ok(())
}

impl Space {
    pub fn euclidean_full(dim: usize) -> Result<Space, SpaceError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(GeometryError::DimensionOutOfRange { dim }.into());
        }
        Ok(Space::EuclideanFull { dim })
    }

    pub fn euclidean_box(carrier: Rect) -> Result<Space, SpaceError> {
        check_carrier(&carrier)?;
        Ok(Space::EuclideanBox { carrier })
    }

    pub fn rational_trace(carrier: Rect) -> Result<Space, SpaceError> {
        check_carrier(&carrier)?;
        Ok(Space::RationalTrace { carrier })
    }

    pub fn product(left: Space, right: Space) -> Result<Space, SpaceError> {
        let dim = left.dim() + right.dim();
        if dim > MAX_DIM {
            return Err(GeometryError::DimensionOutOfRange { dim }.into());
        }
        Ok(Space::Product {
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::EuclideanFull { dim } => *dim,
            Space::EuclideanBox { carrier } | Space::RationalTrace { carrier } => carrier.dim(),
            Space::Product { left, right } => left.dim() + right.dim(),
        }
    }

    /// Per-axis carrier bound; `None` on axes extending over all of the line.
    pub fn axis_carriers(&self) -> Vec<Option<Interval>> {
        match self {
            Space::EuclideanFull { dim } => vec![None; *dim],
            Space::EuclideanBox { carrier } | Space::RationalTrace { carrier } => {
                carrier.intervals().iter().cloned().map(Some).collect()
            }
            Space::Product { left, right } => {
                let mut out = left.axis_carriers();
                out.extend(right.axis_carriers());
                out
            }
        }
    }

    /// Axes on which the space carries the rational trace topology.
    pub fn trace_axes(&self) -> Vec<usize> {
        fn collect(space: &Space, offset: usize, out: &mut Vec<usize>) {
            match space {
                Space::EuclideanFull { .. } | Space::EuclideanBox { .. } => {}
                Space::RationalTrace { carrier } => {
                    out.extend(offset..offset + carrier.dim());
                }
                Space::Product { left, right } => {
                    collect(left, offset, out);
                    collect(right, offset + left.dim(), out);
                }
            }
        }
        let mut out = Vec::new();
        collect(self, 0, &mut out);
        out
    }

    pub fn has_trace(&self) -> bool {
        !self.trace_axes().is_empty()
    }

    fn check_dim(&self, value_dim: usize) -> Result<(), SpaceError> {
        if self.dim() != value_dim {
            return Err(SpaceError::DimensionMismatch {
                space_dim: self.dim(),
                value_dim,
            });
        }
        Ok(())
    }

    pub fn carrier_member(&self, p: &[Rat]) -> Result<bool, SpaceError> {
        self.check_dim(p.len())?;
        Ok(self
            .axis_carriers()
            .iter()
            .zip(p)
            .all(|(c, x)| c.as_ref().map_or(true, |iv| iv.member(x))))
    }

    /// `u` clipped to the carrier and normalized. The canonical form every
    /// openness and closure computation starts from.
    pub fn restrict(&self, u: &BoxUnion) -> Result<BoxUnion, SpaceError> {
        self.check_dim(u.dim())?;
        let carriers = self.axis_carriers();
        let boxes: Vec<Rect> = u
            .rects()
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| {
                Rect::new(
                    b.intervals()
                        .iter()
                        .zip(&carriers)
                        .map(|(iv, c)| match c {
                            Some(ci) => iv.intersect(ci),
                            None => iv.clone(),
                        })
                        .collect(),
                )
            })
            .filter(|b| !b.is_empty())
            .collect();
        Ok(BoxUnion::new(u.dim(), boxes)?.normalize())
    }

    /// Closure of `u` taken relative to the carrier.
    pub fn relative_closure(&self, u: &BoxUnion) -> Result<BoxUnion, SpaceError> {
        self.restrict(&u.closure())
    }

    /// A closed box whose interior (relative to the carrier) swallows `u` on
    /// unbounded axes and that equals the carrier on bounded ones. Openness
    /// of `u` relative to the carrier equals openness relative to this box.
    fn enclosing_rect(&self, u: &BoxUnion) -> Rect {
        let carriers = self.axis_carriers();
        let bounding = u.bounding_rect();
        Rect::new(
            carriers
                .iter()
                .enumerate()
                .map(|(axis, c)| match c {
                    Some(iv) => iv.clone(),
                    None => {
                        let pad = Rat::one();
                        match &bounding {
                            Some(b) => Interval::closed(
                                b.interval(axis).lo() - &pad,
                                b.interval(axis).hi() + &pad,
                            ),
                            None => Interval::closed(-pad.clone(), pad),
                        }
                    }
                })
                .collect(),
        )
    }

    /// Exact subspace-topology openness of `u ∩ carrier`.
    ///
    /// `u` is open in the carrier iff no point of it lies in the closure of
    /// the carrier's complementary part, so the check is one difference, one
    /// closure, and one intersection. Rational traces reuse the verdict:
    /// with rational endpoints everywhere, rational points are dense in both
    /// the set and its complement, so openness transfers in both directions.
    pub fn is_open_in(&self, u: &BoxUnion) -> Result<bool, SpaceError> {
        let u = self.restrict(u)?;
        if u.is_empty() {
            return Ok(true);
        }
        let enclosing = BoxUnion::from_rect(self.enclosing_rect(&u))?;
        let complement = enclosing.difference(&u)?;
        let touching = complement.closure().intersect(&u)?;
        Ok(touching.is_empty())
    }

    pub fn left(&self) -> Result<&Space, SpaceError> {
        match self {
            Space::Product { left, .. } => Ok(left),
            _ => Err(SpaceError::NotProduct),
        }
    }

    pub fn right(&self) -> Result<&Space, SpaceError> {
        match self {
            Space::Product { right, .. } => Ok(right),
            _ => Err(SpaceError::NotProduct),
        }
    }

    /// Coordinate projection of an open set of a product space. For box
    /// unions the projection is just the per-box factor slice.
    pub fn project(&self, w: &BoxUnion, side: Side) -> Result<BoxUnion, SpaceError> {
        let (left, _) = match self {
            Space::Product { left, right } => (left, right),
            _ => return Err(SpaceError::NotProduct),
        };
        self.check_dim(w.dim())?;
        let range = match side {
            Side::Left => 0..left.dim(),
            Side::Right => left.dim()..self.dim(),
        };
        let dim = range.len();
        let boxes: Vec<Rect> = w
            .rects()
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| b.slice(range.clone()))
            .collect();
        Ok(BoxUnion::new(dim, boxes)?.normalize())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// All pairwise box products of `u` and `v`: the rectangle `u × v`.
pub fn product_open(u: &BoxUnion, v: &BoxUnion) -> Result<BoxUnion, GeometryError> {
    let dim = u.dim() + v.dim();
    if dim > MAX_DIM {
        return Err(GeometryError::DimensionOutOfRange { dim });
    }
    let mut boxes = Vec::new();
    for a in u.rects().iter().filter(|b| !b.is_empty()) {
        for b in v.rects().iter().filter(|b| !b.is_empty()) {
            boxes.push(a.product(b));
        }
    }
    Ok(BoxUnion::new(dim, boxes).expect("dimension checked above"))
}
