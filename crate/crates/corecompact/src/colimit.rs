//! Stage-indexed sequences of spaces, their colimit opens, and ascending
//! chains of way-below neighborhoods, all truncated at a finite depth.
//!
//! A sequence is generated by a closed-form rule, so carrier nesting is a
//! property of the rule and never needs unbounded enumeration. Colimit
//! opens are likewise rule-generated stage families. [`check_open_at`]
//! decides the openness criterion for ascending stage families: every stage
//! value open in its stage and each extending the previous one; the union
//! truncated at the checked depth then traces to an open set on every lower
//! stage, which the checker verifies literally. Families arising as traces
//! of one open set additionally satisfy `stage_open(m) =
//! stage_open(n) ∩ carrier(m)`; [`chain_union`] produces exactly such
//! families.
//!
//! [`build_chain`] runs the inductive construction: a core-compactness
//! witness at stage 0, then one interpolation per stage. Its precondition
//! at each step is discharged by the previous stage, because the closure of
//! `u_n x v_n` lies inside the stage-`n` open, which the next stage's open
//! extends.

use crate::geometry::{BoxUnion, GeometryError, Interval, Rect, MAX_DIM};
use crate::interpolation::{interpolate, replay_trace, InterpolationError, InterpolationTrace};
use crate::rat::{floor_int, Rat};
use crate::spaces::{product_open, PointQ, Space, SpaceError};
use crate::waybelow::{core_compact_witness, way_below, WayBelowError, WayBelowVerdict};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Guard on materialized staircase squares per stage.
const STAIRCASE_SQUARE_CAP: i64 = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColimitError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    WayBelow(#[from] WayBelowError),
    #[error("interpolation failed at stage {stage}: {source}")]
    Interpolation {
        stage: u64,
        source: InterpolationError,
    },
    #[error("stage {p} exceeds the truncation depth {max}")]
    DepthExceeded { p: u64, max: u64 },
    #[error("chain holds {found} stages, depth {depth} needs {expected}")]
    ChainLengthMismatch {
        depth: u64,
        expected: usize,
        found: usize,
    },
    #[error("chain is not ascending at stage {stage}")]
    NotAscending { stage: u64 },
    #[error("family is not open at stage {stage}")]
    NotOpenAtStage { stage: u64 },
    #[error("the point does not lie in the base stage open")]
    PointOutsideBase,
    #[error("invalid rule: {0}")]
    RuleInvalid(&'static str),
}

/// `base + slope * n` evaluated at stage indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    #[serde(with = "crate::rat::rat_string")]
    pub base: Rat,
    #[serde(with = "crate::rat::rat_string")]
    pub slope: Rat,
}

impl Affine {
    pub fn new(base: Rat, slope: Rat) -> Affine {
        Affine { base, slope }
    }

    pub fn at(&self, n: u64) -> Rat {
        &self.base + &self.slope * Rat::from_integer(BigInt::from(n))
    }

    fn shifted(&self, k: u64) -> Affine {
        Affine {
            base: self.at(k),
            slope: self.slope.clone(),
        }
    }
}

/// One axis of a growing closed box: `[lo(n), hi(n)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisGrowth {
    pub lo: Affine,
    pub hi: Affine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StageRule {
    /// Every stage is the same space.
    Fixed { space: Space },
    /// Stage n is the closed box `[lo(n), hi(n)]` per axis; lo slopes must
    /// be nonpositive and hi slopes nonnegative so carriers nest.
    GrowingBox { axes: Vec<AxisGrowth> },
    /// Stage n is the product of the factor stages.
    ProductOf {
        left: Box<StageRule>,
        right: Box<StageRule>,
    },
}

impl StageRule {
    fn dim(&self) -> Result<usize, ColimitError> {
        match self {
            StageRule::Fixed { space } => Ok(space.dim()),
            StageRule::GrowingBox { axes } => {
                if axes.is_empty() || axes.len() > MAX_DIM {
                    return Err(ColimitError::RuleInvalid("axis count out of range"));
                }
                Ok(axes.len())
            }
            StageRule::ProductOf { left, right } => {
                let d = left.dim()? + right.dim()?;
                if d > MAX_DIM {
                    return Err(ColimitError::RuleInvalid("product dimension above the cap"));
                }
                Ok(d)
            }
        }
    }

    /// Carrier nesting is structural: fixed spaces never move, growing
    /// boxes only widen, products nest factorwise.
    fn validate(&self) -> Result<(), ColimitError> {
        self.dim()?;
        match self {
            StageRule::Fixed { .. } => Ok(()),
            StageRule::GrowingBox { axes } => {
                for a in axes {
                    if a.lo.slope.is_positive() {
                        return Err(ColimitError::RuleInvalid("lower face must not rise"));
                    }
                    if a.hi.slope.is_negative() {
                        return Err(ColimitError::RuleInvalid("upper face must not fall"));
                    }
                    if a.lo.base > a.hi.base {
                        return Err(ColimitError::RuleInvalid("empty base box"));
                    }
                }
                Ok(())
            }
            StageRule::ProductOf { left, right } => {
                left.validate()?;
                right.validate()
            }
        }
    }

    fn space_at(&self, n: u64) -> Result<Space, ColimitError> {
        match self {
            StageRule::Fixed { space } => Ok(space.clone()),
            StageRule::GrowingBox { axes } => {
                let rect = Rect::new(
                    axes.iter()
                        .map(|a| Interval::closed(a.lo.at(n), a.hi.at(n)))
                        .collect(),
                );
                Ok(Space::euclidean_box(rect)?)
            }
            StageRule::ProductOf { left, right } => {
                Ok(Space::product(left.space_at(n)?, right.space_at(n)?)?)
            }
        }
    }

    fn shifted(&self, k: u64) -> StageRule {
        match self {
            StageRule::Fixed { space } => StageRule::Fixed { space: space.clone() },
            StageRule::GrowingBox { axes } => StageRule::GrowingBox {
                axes: axes
                    .iter()
                    .map(|a| AxisGrowth {
                        lo: a.lo.shifted(k),
                        hi: a.hi.shifted(k),
                    })
                    .collect(),
            },
            StageRule::ProductOf { left, right } => StageRule::ProductOf {
                left: Box::new(left.shifted(k)),
                right: Box::new(right.shifted(k)),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AscendingSequence {
    rule: StageRule,
    max_depth: u64,
}

impl AscendingSequence {
    pub fn new(rule: StageRule, max_depth: u64) -> Result<AscendingSequence, ColimitError> {
        rule.validate()?;
        Ok(AscendingSequence { rule, max_depth })
    }

    pub fn rule(&self) -> &StageRule {
        &self.rule
    }

    pub fn max_depth(&self) -> u64 {
        self.max_depth
    }

    pub fn dim(&self) -> usize {
        self.rule.dim().expect("validated at construction")
    }

    pub fn stage(&self, n: u64) -> Result<Space, ColimitError> {
        if n > self.max_depth {
            return Err(ColimitError::DepthExceeded {
                p: n,
                max: self.max_depth,
            });
        }
        self.rule.space_at(n)
    }

    /// Re-index stages by `n -> n + k`, consuming `k` levels of depth.
    pub fn shifted(&self, k: u64) -> Result<AscendingSequence, ColimitError> {
        if k > self.max_depth {
            return Err(ColimitError::DepthExceeded {
                p: k,
                max: self.max_depth,
            });
        }
        Ok(AscendingSequence {
            rule: self.rule.shifted(k),
            max_depth: self.max_depth - k,
        })
    }

    pub fn product(
        a: &AscendingSequence,
        b: &AscendingSequence,
    ) -> Result<AscendingSequence, ColimitError> {
        AscendingSequence::new(
            StageRule::ProductOf {
                left: Box::new(a.rule.clone()),
                right: Box::new(b.rule.clone()),
            },
            a.max_depth.min(b.max_depth),
        )
    }
}

impl<'de> Deserialize<'de> for AscendingSequence {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<AscendingSequence, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rule: StageRule,
            max_depth: u64,
        }
        let raw = Raw::deserialize(de)?;
        AscendingSequence::new(raw.rule, raw.max_depth).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpenRule {
    /// The same value at every stage, clipped to the stage carrier.
    Constant { value: BoxUnion },
    /// One box `[lo(n), hi(n)]` per stage with fixed face flags.
    AffineBox {
        axes: Vec<AxisGrowth>,
        lo_closed: Vec<bool>,
        hi_closed: Vec<bool>,
    },
    /// The whole stage carrier; requires bounded stages.
    FullCarrier,
    /// The union of open squares `(k, k+2)^2` over integers `k`, clipped to
    /// the stage carrier: a staircase neighborhood of the plane diagonal.
    Staircase,
    /// Explicit per-stage values.
    Stages { stages: Vec<BoxUnion> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColimitOpen {
    pub rule: OpenRule,
}

impl ColimitOpen {
    pub fn new(rule: OpenRule) -> ColimitOpen {
        ColimitOpen { rule }
    }

    /// The stage-`n` value, clipped to the stage carrier and normalized.
    pub fn stage_open(&self, seq: &AscendingSequence, n: u64) -> Result<BoxUnion, ColimitError> {
        let space = seq.stage(n)?;
        let raw = match &self.rule {
            OpenRule::Constant { value } => value.clone(),
            OpenRule::AffineBox {
                axes,
                lo_closed,
                hi_closed,
            } => {
                if axes.len() != space.dim()
                    || lo_closed.len() != axes.len()
                    || hi_closed.len() != axes.len()
                {
                    return Err(ColimitError::RuleInvalid("axis lists disagree"));
                }
                let rect = Rect::new(
                    axes.iter()
                        .enumerate()
                        .map(|(a, g)| {
                            Interval::new(g.lo.at(n), g.hi.at(n), !lo_closed[a], !hi_closed[a])
                        })
                        .collect(),
                );
                BoxUnion::from_rect(rect)?
            }
            OpenRule::FullCarrier => carrier_union(&space)?,
            OpenRule::Staircase => staircase(&space)?,
            OpenRule::Stages { stages } => stages
                .get(n as usize)
                .cloned()
                .ok_or(ColimitError::DepthExceeded {
                    p: n,
                    max: stages.len().saturating_sub(1) as u64,
                })?,
        };
        Ok(space.restrict(&raw)?)
    }

    pub fn shifted(&self, k: u64) -> ColimitOpen {
        let rule = match &self.rule {
            OpenRule::Constant { value } => OpenRule::Constant { value: value.clone() },
            OpenRule::AffineBox {
                axes,
                lo_closed,
                hi_closed,
            } => OpenRule::AffineBox {
                axes: axes
                    .iter()
                    .map(|a| AxisGrowth {
                        lo: a.lo.shifted(k),
                        hi: a.hi.shifted(k),
                    })
                    .collect(),
                lo_closed: lo_closed.clone(),
                hi_closed: hi_closed.clone(),
            },
            OpenRule::FullCarrier => OpenRule::FullCarrier,
            OpenRule::Staircase => OpenRule::Staircase,
            OpenRule::Stages { stages } => OpenRule::Stages {
                stages: stages.get(k as usize..).unwrap_or(&[]).to_vec(),
            },
        };
        ColimitOpen { rule }
    }
}

fn carrier_union(space: &Space) -> Result<BoxUnion, ColimitError> {
    let mut dims = Vec::with_capacity(space.dim());
    for c in space.axis_carriers() {
        match c {
            Some(iv) => dims.push(iv),
            None => {
                return Err(ColimitError::RuleInvalid(
                    "full carrier of an unbounded space",
                ))
            }
        }
    }
    Ok(BoxUnion::from_rect(Rect::new(dims))?)
}

fn staircase(space: &Space) -> Result<BoxUnion, ColimitError> {
    if space.dim() != 2 {
        return Err(ColimitError::RuleInvalid("staircase needs two axes"));
    }
    let carriers = space.axis_carriers();
    let mut lo = None;
    let mut hi = None;
    for c in &carriers {
        let Some(iv) = c else {
            return Err(ColimitError::RuleInvalid("staircase needs bounded stages"));
        };
        lo = Some(lo.map_or(iv.lo().clone(), |l: Rat| l.min(iv.lo().clone())));
        hi = Some(hi.map_or(iv.hi().clone(), |h: Rat| h.max(iv.hi().clone())));
    }
    let (lo, hi) = (lo.expect("two axes"), hi.expect("two axes"));
    let k_min = floor_int(&lo) - BigInt::from(2);
    let k_max = floor_int(&hi) + BigInt::one();
    if &k_max - &k_min > BigInt::from(STAIRCASE_SQUARE_CAP) {
        return Err(ColimitError::RuleInvalid("staircase stage is too wide"));
    }
    let mut boxes = Vec::new();
    let mut k = k_min;
    while k <= k_max {
        let a = Rat::from_integer(k.clone());
        let b = Rat::from_integer(&k + BigInt::from(2));
        boxes.push(Rect::new(vec![
            Interval::open(a.clone(), b.clone()),
            Interval::open(a, b),
        ]));
        k += BigInt::one();
    }
    Ok(BoxUnion::new(2, boxes)?)
}

/// The openness criterion for an ascending stage family, truncated at `p`:
/// every stage value up to `p` open in its stage, each extending the
/// previous, and the truncated union tracing to an open set on every stage
/// up to `p`. The last condition follows from the first two on nested
/// carriers but is checked literally.
pub fn check_open_at(
    seq: &AscendingSequence,
    fam: &ColimitOpen,
    p: u64,
) -> Result<bool, ColimitError> {
    if p > seq.max_depth() {
        return Err(ColimitError::DepthExceeded {
            p,
            max: seq.max_depth(),
        });
    }
    let mut opens = Vec::with_capacity(p as usize + 1);
    for n in 0..=p {
        let space = seq.stage(n)?;
        let o = fam.stage_open(seq, n)?;
        if !space.is_open_in(&o)? {
            return Ok(false);
        }
        if let Some(prev) = opens.last() {
            if !o.contains(prev)? {
                return Ok(false);
            }
        }
        opens.push(o);
    }
    let union = opens.last().cloned().expect("at least stage 0");
    for n in 0..=p {
        let space = seq.stage(n)?;
        if !space.is_open_in(&space.restrict(&union)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The colimit open denoted by an ascending chain: its stage-`p` value is
/// the union of the chain tails clipped to the stage-`p` carrier.
pub fn chain_union(
    seq: &AscendingSequence,
    chain: &[BoxUnion],
    depth: u64,
) -> Result<ColimitOpen, ColimitError> {
    let expected = depth as usize + 1;
    if chain.len() < expected {
        return Err(ColimitError::ChainLengthMismatch {
            depth,
            expected,
            found: chain.len(),
        });
    }
    let mut rel = Vec::with_capacity(expected);
    for (n, c) in chain[..expected].iter().enumerate() {
        let space = seq.stage(n as u64)?;
        if !space.is_open_in(c)? {
            return Err(ColimitError::NotOpenAtStage { stage: n as u64 });
        }
        rel.push(space.restrict(c)?);
    }
    for n in 0..expected - 1 {
        if !rel[n + 1].contains(&rel[n])? {
            return Err(ColimitError::NotAscending { stage: n as u64 + 1 });
        }
    }
    let mut stages = Vec::with_capacity(expected);
    for p in 0..expected {
        let space = seq.stage(p as u64)?;
        let mut acc = BoxUnion::empty(space.dim())?;
        for tail in rel[p..].iter() {
            acc = acc.union_with(&space.restrict(tail)?)?;
        }
        stages.push(acc.normalize());
    }
    let fam = ColimitOpen::new(OpenRule::Stages { stages });
    for p in 0..=depth {
        if !check_open_at(seq, &fam, p)? {
            return Err(ColimitError::NotOpenAtStage { stage: p });
        }
    }
    Ok(fam)
}

/// Per-stage evidence: the recomputable way-below verdict and, from stage 1
/// on, the interpolation trace that produced the stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEvidence {
    pub verdict: WayBelowVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<InterpolationTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainWitness {
    pub u_chain: Vec<BoxUnion>,
    pub v_chain: Vec<BoxUnion>,
    pub evidence: Vec<StageEvidence>,
    pub point: (PointQ, PointQ),
    pub depth: u64,
}

impl ChainWitness {
    /// Recheck every invariant against the sequences and the target family.
    pub fn verify(
        &self,
        seq_x: &AscendingSequence,
        seq_y: &AscendingSequence,
        w: &ColimitOpen,
    ) -> Result<bool, ColimitError> {
        let expected = self.depth as usize + 1;
        if self.u_chain.len() != expected
            || self.v_chain.len() != expected
            || self.evidence.len() != expected
        {
            return Ok(false);
        }
        let product_seq = AscendingSequence::product(seq_x, seq_y)?;
        for n in 0..expected {
            let stage = n as u64;
            if !self.u_chain[n].member(&self.point.0.coords)
                || !self.v_chain[n].member(&self.point.1.coords)
            {
                return Ok(false);
            }
            if n + 1 < expected
                && (!self.u_chain[n + 1].contains(&self.u_chain[n])?
                    || !self.v_chain[n + 1].contains(&self.v_chain[n])?)
            {
                return Ok(false);
            }
            let product = product_seq.stage(stage)?;
            let w_n = w.stage_open(&product_seq, stage)?;
            let verdict = way_below(
                &product,
                &product_open(&self.u_chain[n], &self.v_chain[n])?,
                &w_n,
            )?;
            if !verdict.holds || verdict != self.evidence[n].verdict {
                return Ok(false);
            }
            match (&self.evidence[n].trace, n) {
                (None, 0) => {}
                (Some(trace), _) if n > 0 => {
                    let (u, v) = replay_trace(trace)
                        .map_err(|e| ColimitError::Interpolation { stage, source: e })?;
                    if u != self.u_chain[n] || v != self.v_chain[n] {
                        return Ok(false);
                    }
                }
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

/// The inductive chain construction at a point of the base stage open:
/// a core-compactness witness at stage 0, then an interpolation per stage.
pub fn build_chain(
    seq_x: &AscendingSequence,
    seq_y: &AscendingSequence,
    w: &ColimitOpen,
    x: &PointQ,
    y: &PointQ,
    depth: u64,
) -> Result<ChainWitness, ColimitError> {
    let product_seq = AscendingSequence::product(seq_x, seq_y)?;
    if depth > product_seq.max_depth() {
        return Err(ColimitError::DepthExceeded {
            p: depth,
            max: product_seq.max_depth(),
        });
    }
    for p in 0..=depth {
        if !check_open_at(&product_seq, w, p)? {
            return Err(ColimitError::NotOpenAtStage { stage: p });
        }
    }
    let dx = seq_x.dim();
    let xy = PointQ::new(
        x.coords
            .iter()
            .chain(&y.coords)
            .cloned()
            .collect(),
    );
    let w_0 = w.stage_open(&product_seq, 0)?;
    if !w_0.member(&xy.coords) {
        return Err(ColimitError::PointOutsideBase);
    }

    let product_0 = product_seq.stage(0)?;
    let base = core_compact_witness(&product_0, &xy, &w_0)?;
    let base_rect = match base.rects() {
        [r] => r.clone(),
        _ => unreachable!("the witness is a single box"),
    };
    let mut u_chain = vec![BoxUnion::from_rect(base_rect.slice(0..dx))?];
    let mut v_chain = vec![BoxUnion::from_rect(base_rect.slice(dx..base_rect.dim()))?];
    let verdict_0 = way_below(
        &product_0,
        &product_open(&u_chain[0], &v_chain[0])?,
        &w_0,
    )?;
    debug_assert!(verdict_0.holds);
    let mut evidence = vec![StageEvidence {
        verdict: verdict_0,
        trace: None,
    }];

    for n in 1..=depth {
        let x_space = seq_x.stage(n)?;
        let y_space = seq_y.stage(n)?;
        let w_n = w.stage_open(&product_seq, n)?;
        let step = interpolate(
            &x_space,
            &y_space,
            &u_chain[n as usize - 1],
            &v_chain[n as usize - 1],
            &w_n,
        )
        .map_err(|e| ColimitError::Interpolation { stage: n, source: e })?;
        let product_n = product_seq.stage(n)?;
        let verdict = way_below(
            &product_n,
            &product_open(&step.u_s, &step.v_t)?,
            &w_n,
        )?;
        debug_assert!(verdict.holds);
        u_chain.push(step.u_s);
        v_chain.push(step.v_t);
        evidence.push(StageEvidence {
            verdict,
            trace: Some(step.trace),
        });
    }

    Ok(ChainWitness {
        u_chain,
        v_chain,
        evidence,
        point: (x.clone(), y.clone()),
        depth,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeOutcome {
    /// The probe never enters the stage opens, so there is nothing to show.
    Skipped { index: usize },
    Passed { index: usize, first_stage: u64 },
    Failed { index: usize, stage: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub depth: u64,
    pub outcomes: Vec<ProbeOutcome>,
    pub all_passed: bool,
}

/// For each probe inside some stage open, re-index the sequences at the
/// probe's first stage, build the chain there, and confirm the two chain
/// unions give a product neighborhood of the probe inside `w` at every
/// remaining stage.
pub fn rectangle_cover_check(
    seq_x: &AscendingSequence,
    seq_y: &AscendingSequence,
    w: &ColimitOpen,
    probes: &[(PointQ, PointQ)],
    depth: u64,
) -> Result<CoverReport, ColimitError> {
    let product_seq = AscendingSequence::product(seq_x, seq_y)?;
    for p in 0..=depth {
        if !check_open_at(&product_seq, w, p)? {
            return Err(ColimitError::NotOpenAtStage { stage: p });
        }
    }
    let mut outcomes = Vec::with_capacity(probes.len());
    let mut all_passed = true;
    for (index, (x, y)) in probes.iter().enumerate() {
        let xy: Vec<Rat> = x.coords.iter().chain(&y.coords).cloned().collect();
        let mut first_stage = None;
        for k in 0..=depth {
            if w.stage_open(&product_seq, k)?.member(&xy) {
                first_stage = Some(k);
                break;
            }
        }
        let Some(k) = first_stage else {
            outcomes.push(ProbeOutcome::Skipped { index });
            continue;
        };
        let sx = seq_x.shifted(k)?;
        let sy = seq_y.shifted(k)?;
        let w_shift = w.shifted(k);
        let local_depth = depth - k;
        let witness = build_chain(&sx, &sy, &w_shift, x, y, local_depth)?;
        let u_fam = chain_union(&sx, &witness.u_chain, local_depth)?;
        let v_fam = chain_union(&sy, &witness.v_chain, local_depth)?;
        let shifted_product = AscendingSequence::product(&sx, &sy)?;
        let mut failed_at = None;
        for p in 0..=local_depth {
            let u_p = u_fam.stage_open(&sx, p)?;
            let v_p = v_fam.stage_open(&sy, p)?;
            let w_p = w_shift.stage_open(&shifted_product, p)?;
            let product = product_open(&u_p, &v_p)?;
            let inside = w_p.contains(&product)?;
            let holds_point = u_p.member(&x.coords) && v_p.member(&y.coords);
            if !inside || !holds_point {
                failed_at = Some(p);
                break;
            }
        }
        match failed_at {
            Some(stage) => {
                all_passed = false;
                outcomes.push(ProbeOutcome::Failed { index, stage });
            }
            None => outcomes.push(ProbeOutcome::Passed {
                index,
                first_stage: k,
            }),
        }
    }
    Ok(CoverReport {
        depth,
        outcomes,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn growing_line() -> AscendingSequence {
        // stage n carries [-n-1, n+1]
        AscendingSequence::new(
            StageRule::GrowingBox {
                axes: vec![AxisGrowth {
                    lo: Affine::new(rat_int(-1), rat_int(-1)),
                    hi: Affine::new(rat_int(1), rat_int(1)),
                }],
            },
            16,
        )
        .unwrap()
    }

    fn full_line_seq() -> AscendingSequence {
        AscendingSequence::new(
            StageRule::Fixed {
                space: Space::euclidean_full(1).unwrap(),
            },
            16,
        )
        .unwrap()
    }

    fn symmetric_open() -> ColimitOpen {
        // stage n value (-n, n)
        ColimitOpen::new(OpenRule::AffineBox {
            axes: vec![AxisGrowth {
                lo: Affine::new(rat_int(0), rat_int(-1)),
                hi: Affine::new(rat_int(0), rat_int(1)),
            }],
            lo_closed: vec![false],
            hi_closed: vec![false],
        })
    }

    #[test]
    fn constant_empty_family_is_open() {
        let fam = ColimitOpen::new(OpenRule::Constant {
            value: BoxUnion::empty(1).unwrap(),
        });
        assert!(check_open_at(&growing_line(), &fam, 5).unwrap());
    }

    #[test]
    fn symmetric_family_is_open_at_depth_five() {
        assert!(check_open_at(&growing_line(), &symmetric_open(), 5).unwrap());
    }

    #[test]
    fn half_open_family_fails_above_zero() {
        // stage n value [0, n): not open on the full line for n >= 1
        let fam = ColimitOpen::new(OpenRule::AffineBox {
            axes: vec![AxisGrowth {
                lo: Affine::new(rat_int(0), rat_int(0)),
                hi: Affine::new(rat_int(0), rat_int(1)),
            }],
            lo_closed: vec![true],
            hi_closed: vec![false],
        });
        let seq = full_line_seq();
        assert!(check_open_at(&seq, &fam, 0).unwrap());
        for p in 1..=5 {
            assert!(!check_open_at(&seq, &fam, p).unwrap());
        }
    }

    #[test]
    fn depth_guard() {
        assert_eq!(
            check_open_at(&growing_line(), &symmetric_open(), 17).unwrap_err(),
            ColimitError::DepthExceeded { p: 17, max: 16 }
        );
    }

    #[test]
    fn chain_union_evaluates_the_tail_union() {
        let seq = growing_line();
        // chain(n) = (-1 + 1/(n+2), 1 - 1/(n+2))
        let chain: Vec<BoxUnion> = (0..=8)
            .map(|n| {
                let eps = rat(1, n + 2);
                BoxUnion::from_rect(Rect::new(vec![Interval::open(
                    rat_int(-1) + eps.clone(),
                    rat_int(1) - eps,
                )]))
                .unwrap()
            })
            .collect();
        let fam = chain_union(&seq, &chain, 8).unwrap();
        let expected = BoxUnion::from_rect(Rect::new(vec![Interval::open(
            rat(-9, 10),
            rat(9, 10),
        )]))
        .unwrap();
        for p in 0..=8 {
            assert_eq!(fam.stage_open(&seq, p).unwrap(), expected);
        }
    }

    #[test]
    fn chain_union_rejects_bad_chains() {
        let seq = growing_line();
        let big = BoxUnion::from_rect(Rect::new(vec![Interval::open(rat_int(-1), rat_int(1))]))
            .unwrap();
        let small =
            BoxUnion::from_rect(Rect::new(vec![Interval::open(rat_int(0), rat(1, 2))])).unwrap();
        assert_eq!(
            chain_union(&seq, &[big.clone(), small.clone()], 1).unwrap_err(),
            ColimitError::NotAscending { stage: 1 }
        );
        assert_eq!(
            chain_union(&seq, &[big.clone()], 1).unwrap_err(),
            ColimitError::ChainLengthMismatch {
                depth: 1,
                expected: 2,
                found: 1
            }
        );
        let closed =
            BoxUnion::from_rect(Rect::new(vec![Interval::closed(rat(0, 1), rat(1, 2))])).unwrap();
        assert_eq!(
            chain_union(&seq, &[closed.clone(), closed], 1).unwrap_err(),
            ColimitError::NotOpenAtStage { stage: 0 }
        );
    }

    #[test]
    fn empty_chain_unions_to_the_empty_family() {
        let seq = growing_line();
        let chain = vec![BoxUnion::empty(1).unwrap(); 4];
        let fam = chain_union(&seq, &chain, 3).unwrap();
        for p in 0..=3 {
            assert!(fam.stage_open(&seq, p).unwrap().is_empty());
        }
    }

    #[test]
    fn full_product_chain() {
        let seq = growing_line();
        let w = ColimitOpen::new(OpenRule::FullCarrier);
        let witness = build_chain(
            &seq,
            &seq,
            &w,
            &PointQ::from_ints(&[0]),
            &PointQ::from_ints(&[0]),
            8,
        )
        .unwrap();
        assert!(witness.verify(&seq, &seq, &w).unwrap());
        for n in 0..8usize {
            assert!(witness.u_chain[n + 1]
                .contains(&witness.u_chain[n])
                .unwrap());
        }
    }

    #[test]
    fn staircase_chain_stays_inside_the_strip() {
        let seq = growing_line();
        let w = ColimitOpen::new(OpenRule::Staircase);
        let witness = build_chain(
            &seq,
            &seq,
            &w,
            &PointQ::from_ints(&[0]),
            &PointQ::from_ints(&[0]),
            8,
        )
        .unwrap();
        assert!(witness.verify(&seq, &seq, &w).unwrap());
        let product_seq = AscendingSequence::product(&seq, &seq).unwrap();
        let w_8 = w.stage_open(&product_seq, 8).unwrap();
        let product = product_open(&witness.u_chain[8], &witness.v_chain[8]).unwrap();
        assert!(w_8.contains(&product).unwrap());
    }

    #[test]
    fn point_outside_base_errors() {
        let seq = growing_line();
        let w = ColimitOpen::new(OpenRule::Staircase);
        assert_eq!(
            build_chain(
                &seq,
                &seq,
                &w,
                &PointQ::from_ints(&[0]),
                &PointQ::from_ints(&[5]),
                4
            )
            .unwrap_err(),
            ColimitError::PointOutsideBase
        );
    }

    #[test]
    fn cover_check_on_the_staircase() {
        let seq = growing_line();
        let w = ColimitOpen::new(OpenRule::Staircase);
        let probes = vec![
            (PointQ::from_ints(&[0]), PointQ::from_ints(&[0])),
            (PointQ::new(vec![rat(5, 2)]), PointQ::from_ints(&[3])),
            (PointQ::from_ints(&[0]), PointQ::from_ints(&[40])),
        ];
        let report = rectangle_cover_check(&seq, &seq, &w, &probes, 8).unwrap();
        assert!(report.all_passed);
        assert_eq!(report.outcomes.len(), 3);
        assert!(matches!(
            report.outcomes[0],
            ProbeOutcome::Passed { first_stage: 0, .. }
        ));
        assert!(matches!(
            report.outcomes[1],
            ProbeOutcome::Passed { first_stage, .. } if first_stage > 0
        ));
        assert!(matches!(report.outcomes[2], ProbeOutcome::Skipped { .. }));
    }

    #[test]
    fn witness_is_deterministic() {
        let seq = growing_line();
        let w = ColimitOpen::new(OpenRule::Staircase);
        let run = || {
            serde_json::to_string(
                &build_chain(
                    &seq,
                    &seq,
                    &w,
                    &PointQ::from_ints(&[0]),
                    &PointQ::from_ints(&[0]),
                    6,
                )
                .unwrap(),
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn sequences_validate_rules() {
        let bad = AscendingSequence::new(
            StageRule::GrowingBox {
                axes: vec![AxisGrowth {
                    lo: Affine::new(rat_int(0), rat_int(1)),
                    hi: Affine::new(rat_int(1), rat_int(1)),
                }],
            },
            4,
        );
        assert_eq!(
            bad.unwrap_err(),
            ColimitError::RuleInvalid("lower face must not rise")
        );
        let seq = growing_line();
        let shifted = seq.shifted(3).unwrap();
        assert_eq!(shifted.max_depth(), 13);
        let s0 = shifted.stage(0).unwrap();
        assert_eq!(s0, seq.stage(3).unwrap());
        let json = serde_json::to_string(&seq).unwrap();
        let back: AscendingSequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, seq);
    }
}
