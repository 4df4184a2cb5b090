//! The randomized law battery: every algebraic law the way-below decision,
//! the interpolation step, and the chain construction promise, run against
//! seeded generators and reported as machine-readable pass/fail records.
//!
//! Instances are constructive: targets are small unions of open boxes and
//! sources are boxes shrunk strictly inside them, so the expected verdict is
//! known by construction and the deciders are exercised against it. All
//! randomness flows from one counter-based stream per law, derived from the
//! configured seed and the law name, so a report is a pure function of its
//! `RunConfig`.

use crate::colimit::{
    build_chain, chain_union, check_open_at, Affine, AscendingSequence, AxisGrowth, ColimitOpen,
    OpenRule, StageRule,
};
use crate::geometry::{BoxUnion, Interval, Rect};
use crate::interpolation::{interpolate, replay_trace};
use crate::rat::{midpoint, rat, rat_int, Rat};
use crate::rng::DetRng;
use crate::spaces::{product_open, PointQ, Side, Space};
use crate::waybelow::{core_compact_witness, way_below};
use crate::waybelow::oracle::oracle_way_below;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub case_count: usize,
    pub depth: u64,
    pub oracle_budget: usize,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            seed: 0,
            case_count: 200,
            depth: 8,
            oracle_budget: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub schema: String,
    pub seed: u64,
    pub case_count: usize,
    pub laws: Vec<LawResult>,
    pub all_passed: bool,
}

/// The six monotonicity/basis/product laws of the way-below relation.
pub const WAY_BELOW_LAWS: [&str; 6] = [
    "waybelow.right_monotone",
    "waybelow.left_monotone",
    "waybelow.finite_union",
    "waybelow.basis",
    "waybelow.projection_image",
    "waybelow.product_core_compact",
];

pub const ALL_LAWS: [&str; 15] = [
    "waybelow.right_monotone",
    "waybelow.left_monotone",
    "waybelow.finite_union",
    "waybelow.basis",
    "waybelow.projection_image",
    "waybelow.product_core_compact",
    "waybelow.oracle_agreement",
    "interpolation.trace_replay",
    "interpolation.idempotent",
    "interpolation.contains_inputs",
    "interpolation.lemma_conclusion",
    "colimit.chain_invariants",
    "colimit.union_open",
    "colimit.stage0_reduction",
    "colimit.determinism",
];

/// Chain-building laws are capped here: one case costs a full depth-`N`
/// chain of interpolations, and fifty chains already exercise every rule
/// combination the generator can produce.
const CHAIN_LAW_CASES: usize = 50;

fn fnv(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn drive(
    name: &str,
    cases: usize,
    cfg: &RunConfig,
    mut body: impl FnMut(&mut DetRng, usize) -> Result<(), Value>,
) -> LawResult {
    let mut master = DetRng::new(cfg.seed ^ fnv(name));
    for case in 0..cases {
        let mut rng = master.fork(case as u64);
        if let Err(detail) = body(&mut rng, case) {
            return LawResult {
                name: name.to_string(),
                cases,
                passed: false,
                counterexample: Some(json!({ "case": case, "detail": detail })),
                detail: None,
            };
        }
    }
    LawResult {
        name: name.to_string(),
        cases,
        passed: true,
        counterexample: None,
        detail: None,
    }
}

fn err<E: std::fmt::Display>(e: E) -> Value {
    json!(e.to_string())
}

/// Run every law, or only those named in `filter`, under one config.
pub fn run_laws(cfg: &RunConfig, filter: Option<&[&str]>) -> PropertyReport {
    let mut laws = Vec::new();
    for name in ALL_LAWS {
        if let Some(wanted) = filter {
            if !wanted.contains(&name) {
                continue;
            }
        }
        laws.push(run_one_law(name, cfg));
    }
    let all_passed = laws.iter().all(|l| l.passed);
    PropertyReport {
        schema: "properties/1".to_string(),
        seed: cfg.seed,
        case_count: cfg.case_count,
        laws,
        all_passed,
    }
}

pub fn run_properties(cfg: &RunConfig) -> PropertyReport {
    run_laws(cfg, None)
}

fn run_one_law(name: &str, cfg: &RunConfig) -> LawResult {
    let chain_cases = cfg.case_count.min(CHAIN_LAW_CASES);
    match name {
        "waybelow.right_monotone" => drive(name, cfg.case_count, cfg, |rng, case| {
            let d = 1 + case % 2;
            let space = Space::euclidean_full(d).map_err(err)?;
            let t = target_union(rng, d).map_err(err)?;
            let s = shrink_union(&t, 4).map_err(err)?;
            let premise = way_below(&space, &s, &t).map_err(err)?;
            if !premise.holds {
                return Err(json!({ "reason": "premise refuted", "s": s, "t": t }));
            }
            let q = pad_union(&t).map_err(err)?;
            if !q.contains(&t).map_err(err)? {
                return Err(json!("padding lost the target"));
            }
            let conclusion = way_below(&space, &s, &q).map_err(err)?;
            if conclusion.holds {
                Ok(())
            } else {
                Err(json!({ "reason": "monotone step refuted", "s": s, "q": q }))
            }
        }),
        "waybelow.left_monotone" => drive(name, cfg.case_count, cfg, |rng, case| {
            let d = 1 + case % 2;
            let space = Space::euclidean_full(d).map_err(err)?;
            let t = target_union(rng, d).map_err(err)?;
            let s = shrink_union(&t, 4).map_err(err)?;
            let r = shrink_union(&s, 4).map_err(err)?;
            if !s.contains(&r).map_err(err)? {
                return Err(json!("shrink is not contained"));
            }
            let premise = way_below(&space, &s, &t).map_err(err)?;
            let conclusion = way_below(&space, &r, &t).map_err(err)?;
            if premise.holds && !conclusion.holds {
                Err(json!({ "reason": "smaller source refuted", "r": r, "t": t }))
            } else {
                Ok(())
            }
        }),
        "waybelow.finite_union" => drive(name, cfg.case_count, cfg, |rng, case| {
            let d = 1 + case % 2;
            let space = Space::euclidean_full(d).map_err(err)?;
            let t = target_union(rng, d).map_err(err)?;
            let mut parts = Vec::new();
            for margin in [3, 4, 8] {
                let s = shrink_union(&t, margin).map_err(err)?;
                if !way_below(&space, &s, &t).map_err(err)?.holds {
                    return Err(json!({ "reason": "premise refuted", "s": s }));
                }
                parts.push(s);
            }
            let mut folded = parts[0].clone();
            for p in &parts[1..] {
                folded = folded.union_with(p).map_err(err)?;
            }
            if way_below(&space, &folded, &t).map_err(err)?.holds {
                Ok(())
            } else {
                Err(json!({ "reason": "union refuted", "union": folded, "t": t }))
            }
        }),
        "waybelow.basis" => drive(name, cfg.case_count, cfg, |rng, case| {
            let d = 1 + case % 2;
            let space = Space::euclidean_full(d).map_err(err)?;
            let w = target_union(rng, d).map_err(err)?;
            for cell in crate::geometry::elementary_cells(&[&w]).map_err(err)? {
                let sample = cell.sample();
                if !w.member(&sample) {
                    continue;
                }
                let u = core_compact_witness(&space, &PointQ::new(sample.clone()), &w)
                    .map_err(err)?;
                if !u.member(&sample) {
                    return Err(json!({ "reason": "basis box misses its point", "u": u }));
                }
                if !way_below(&space, &u, &w).map_err(err)?.holds {
                    return Err(json!({ "reason": "basis box not way below", "u": u, "w": w }));
                }
            }
            Ok(())
        }),
        "waybelow.projection_image" => drive(name, cfg.case_count, cfg, |rng, _| {
            let left = Space::euclidean_full(1).map_err(err)?;
            let product = Space::product(left.clone(), left.clone()).map_err(err)?;
            let wx = target_union(rng, 1).map_err(err)?;
            let wy = target_union(rng, 1).map_err(err)?;
            let s = shrink_union(&wx, 4).map_err(err)?;
            let t = shrink_union(&wy, 4).map_err(err)?;
            let st = product_open(&s, &t).map_err(err)?;
            let w = product_open(&wx, &wy).map_err(err)?;
            if !way_below(&product, &st, &w).map_err(err)?.holds {
                return Err(json!({ "reason": "premise refuted", "st": st, "w": w }));
            }
            let s_img = product.project(&st, Side::Left).map_err(err)?;
            let w_img = product.project(&w, Side::Left).map_err(err)?;
            if way_below(&left, &s_img, &w_img).map_err(err)?.holds {
                Ok(())
            } else {
                Err(json!({ "reason": "projection refuted", "s": s_img, "w": w_img }))
            }
        }),
        "waybelow.product_core_compact" => drive(name, cfg.case_count, cfg, |rng, _| {
            let factor = |rng: &mut DetRng| -> Result<Space, Value> {
                if rng.chance(1, 3) {
                    Space::euclidean_box(Rect::new(vec![Interval::closed(
                        rat_int(-10),
                        rat_int(10),
                    )]))
                    .map_err(err)
                } else {
                    Space::euclidean_full(1).map_err(err)
                }
            };
            let space = Space::product(factor(rng)?, factor(rng)?).map_err(err)?;
            let raw = target_union(rng, 2).map_err(err)?;
            let u = space.restrict(&raw).map_err(err)?;
            let Some(sample) = u.sample() else {
                return Ok(()); // carrier missed the boxes; vacuous
            };
            let v = core_compact_witness(&space, &PointQ::new(sample.clone()), &u).map_err(err)?;
            if !v.member(&sample) {
                return Err(json!({ "reason": "witness misses its point", "v": v }));
            }
            if way_below(&space, &v, &u).map_err(err)?.holds {
                Ok(())
            } else {
                Err(json!({ "reason": "witness not way below", "v": v, "u": u }))
            }
        }),
        "waybelow.oracle_agreement" => {
            let mut conclusive = 0usize;
            let mut result = drive(name, cfg.case_count, cfg, |rng, case| {
                let d = 1 + case % 2;
                let space = Space::euclidean_full(d).map_err(err)?;
                let (s, t) = agreement_pair(rng, d, case).map_err(err)?;
                let verdict = way_below(&space, &s, &t).map_err(err)?;
                let report =
                    oracle_way_below(&space, &s, &t, cfg.oracle_budget).map_err(err)?;
                match report {
                    Some(flag) => {
                        conclusive += 1;
                        if flag == verdict.holds {
                            Ok(())
                        } else {
                            Err(json!({
                                "reason": "oracle disagrees",
                                "s": s,
                                "t": t,
                                "holds": verdict.holds,
                                "oracle": flag,
                            }))
                        }
                    }
                    None => Ok(()),
                }
            });
            result.detail = Some(json!({
                "conclusive": conclusive,
                "cases": result.cases,
            }));
            result
        }
        "interpolation.trace_replay" => drive(name, cfg.case_count, cfg, |rng, _| {
            let inst = lemma_instance(rng)?;
            let out = interpolate(&inst.x, &inst.y, &inst.s, &inst.t, &inst.w).map_err(err)?;
            let (u, v) = replay_trace(&out.trace).map_err(err)?;
            if u == out.u_s && v == out.v_t {
                Ok(())
            } else {
                Err(json!({ "reason": "replay diverged", "trace": out.trace }))
            }
        }),
        "interpolation.idempotent" => drive(name, cfg.case_count, cfg, |rng, _| {
            let inst = lemma_instance(rng)?;
            let out = interpolate(&inst.x, &inst.y, &inst.s, &inst.t, &inst.w).map_err(err)?;
            interpolate(&inst.x, &inst.y, &out.u_s, &out.v_t, &inst.w)
                .map(|_| ())
                .map_err(|e| json!({ "reason": "second pass failed", "error": e.to_string() }))
        }),
        "interpolation.contains_inputs" => drive(name, cfg.case_count, cfg, |rng, _| {
            let inst = lemma_instance(rng)?;
            let out = interpolate(&inst.x, &inst.y, &inst.s, &inst.t, &inst.w).map_err(err)?;
            if out.u_s.contains(&inst.s).map_err(err)? && out.v_t.contains(&inst.t).map_err(err)?
            {
                Ok(())
            } else {
                Err(json!({ "reason": "input lost", "u_s": out.u_s, "v_t": out.v_t }))
            }
        }),
        "interpolation.lemma_conclusion" => drive(name, cfg.case_count, cfg, |rng, _| {
            let inst = lemma_instance(rng)?;
            let out = interpolate(&inst.x, &inst.y, &inst.s, &inst.t, &inst.w).map_err(err)?;
            if !inst.x.is_open_in(&out.u_s).map_err(err)?
                || !inst.y.is_open_in(&out.v_t).map_err(err)?
            {
                return Err(json!({ "reason": "output not open" }));
            }
            let product = Space::product(inst.x.clone(), inst.y.clone()).map_err(err)?;
            let uv = product_open(&out.u_s, &out.v_t).map_err(err)?;
            if !way_below(&product, &uv, &inst.w).map_err(err)?.holds {
                return Err(json!({ "reason": "conclusion refuted", "uv": uv, "w": inst.w }));
            }
            if !out.u_s.contains(&inst.s).map_err(err)? || !out.v_t.contains(&inst.t).map_err(err)?
            {
                return Err(json!({ "reason": "input lost" }));
            }
            Ok(())
        }),
        "colimit.chain_invariants" => drive(name, chain_cases, cfg, |rng, _| {
            let inst = chain_instance(rng, cfg.depth)?;
            let witness = build_chain(&inst.x, &inst.y, &inst.w, &inst.px, &inst.py, cfg.depth)
                .map_err(err)?;
            if witness.verify(&inst.x, &inst.y, &inst.w).map_err(err)? {
                Ok(())
            } else {
                Err(json!({ "reason": "witness failed verification" }))
            }
        }),
        "colimit.union_open" => drive(name, chain_cases, cfg, |rng, _| {
            let inst = chain_instance(rng, cfg.depth)?;
            let witness = build_chain(&inst.x, &inst.y, &inst.w, &inst.px, &inst.py, cfg.depth)
                .map_err(err)?;
            let u_fam = chain_union(&inst.x, &witness.u_chain, cfg.depth).map_err(err)?;
            let v_fam = chain_union(&inst.y, &witness.v_chain, cfg.depth).map_err(err)?;
            for p in 0..=cfg.depth {
                if !check_open_at(&inst.x, &u_fam, p).map_err(err)?
                    || !check_open_at(&inst.y, &v_fam, p).map_err(err)?
                {
                    return Err(json!({ "reason": "union not open", "stage": p }));
                }
            }
            Ok(())
        }),
        "colimit.stage0_reduction" => drive(name, chain_cases, cfg, |rng, _| {
            let depth = cfg.depth.max(2);
            let inst = late_probe_instance(rng, depth)?;
            let product = AscendingSequence::product(&inst.x, &inst.y).map_err(err)?;
            let coords: Vec<Rat> = inst
                .px
                .coords
                .iter()
                .chain(&inst.py.coords)
                .cloned()
                .collect();
            let mut first = None;
            for k in 0..=depth {
                if inst.w.stage_open(&product, k).map_err(err)?.member(&coords) {
                    first = Some(k);
                    break;
                }
            }
            let Some(k) = first else {
                return Err(json!("probe never appears"));
            };
            if k == 0 {
                return Err(json!("probe appears at stage 0; generator drifted"));
            }
            let sx = inst.x.shifted(k).map_err(err)?;
            let sy = inst.y.shifted(k).map_err(err)?;
            let w = inst.w.shifted(k);
            let witness =
                build_chain(&sx, &sy, &w, &inst.px, &inst.py, depth - k).map_err(err)?;
            if witness.verify(&sx, &sy, &w).map_err(err)? {
                Ok(())
            } else {
                Err(json!({ "reason": "shifted witness failed verification" }))
            }
        }),
        "colimit.determinism" => drive(name, chain_cases, cfg, |rng, _| {
            let inst = chain_instance(rng, cfg.depth)?;
            let once = build_chain(&inst.x, &inst.y, &inst.w, &inst.px, &inst.py, cfg.depth)
                .map_err(err)?;
            let again = build_chain(&inst.x, &inst.y, &inst.w, &inst.px, &inst.py, cfg.depth)
                .map_err(err)?;
            let a = serde_json::to_string(&once).map_err(err)?;
            let b = serde_json::to_string(&again).map_err(err)?;
            if once == again && a == b {
                Ok(())
            } else {
                Err(json!({ "reason": "reruns diverged" }))
            }
        }),
        other => LawResult {
            name: other.to_string(),
            cases: 0,
            passed: false,
            counterexample: Some(json!("unknown law")),
            detail: None,
        },
    }
}

fn open_box(rng: &mut DetRng, d: usize) -> Rect {
    Rect::new(
        (0..d)
            .map(|_| {
                let lo = rng.rat_in(-8, 6, &[1, 2, 4]);
                let width = rng.rat_in(1, 5, &[1, 2]);
                Interval::open(lo.clone(), lo + width)
            })
            .collect(),
    )
}

fn target_union(rng: &mut DetRng, d: usize) -> Result<BoxUnion, crate::geometry::GeometryError> {
    let mut u = BoxUnion::from_rect(open_box(rng, d))?;
    if rng.chance(1, 2) {
        u = u.union_with(&BoxUnion::from_rect(open_box(rng, d))?)?;
    }
    Ok(u)
}

/// Each box pulled strictly inward by `1/margin` of its width per side;
/// the result's closure sits inside the original union.
fn shrink_union(
    u: &BoxUnion,
    margin: i64,
) -> Result<BoxUnion, crate::geometry::GeometryError> {
    let mut rects = Vec::new();
    for r in u.rects() {
        let dims = r
            .intervals()
            .iter()
            .map(|iv| {
                let w = iv.hi() - iv.lo();
                let inset = w / rat_int(margin);
                Interval::closed(iv.lo() + &inset, iv.hi() - &inset)
            })
            .collect();
        rects.push(Rect::new(dims));
    }
    Ok(BoxUnion::new(u.dim(), rects)?.normalize())
}

fn pad_union(u: &BoxUnion) -> Result<BoxUnion, crate::geometry::GeometryError> {
    let mut rects = Vec::new();
    for r in u.rects() {
        let dims = r
            .intervals()
            .iter()
            .map(|iv| {
                let w = iv.hi() - iv.lo();
                let pad = (w + rat_int(1)) / rat_int(4);
                Interval::open(iv.lo() - &pad, iv.hi() + &pad)
            })
            .collect();
        rects.push(Rect::new(dims));
    }
    Ok(BoxUnion::new(u.dim(), rects)?.normalize())
}

/// Pairs spanning the verdict space: shrunk-inside (holds), equal sets and
/// shared-face sets (refuted by closure escape), and outright escapees.
fn agreement_pair(
    rng: &mut DetRng,
    d: usize,
    case: usize,
) -> Result<(BoxUnion, BoxUnion), crate::geometry::GeometryError> {
    let t = target_union(rng, d)?;
    let s = match case % 4 {
        0 => shrink_union(&t, 4)?,
        1 => t.clone(),
        2 => {
            let outside = Rect::new(
                (0..d)
                    .map(|_| Interval::closed(rat_int(40), rat_int(41)))
                    .collect(),
            );
            shrink_union(&t, 4)?.union_with(&BoxUnion::from_rect(outside)?)?
        }
        _ => {
            // keep the first box, close its lower faces onto the boundary
            let r = t.rects()[0].clone();
            let dims = r
                .intervals()
                .iter()
                .map(|iv| {
                    let m = midpoint(iv.lo(), iv.hi());
                    Interval::new(iv.lo().clone(), m, false, false)
                })
                .collect();
            BoxUnion::from_rect(Rect::new(dims))?
        }
    };
    Ok((s, t))
}

struct LemmaInstance {
    x: Space,
    y: Space,
    s: BoxUnion,
    t: BoxUnion,
    w: BoxUnion,
}

/// `W` is a base open rectangle plus up to three more; `S`, `T` live well
/// inside the base, so `S x T` is way below `W` by construction.
fn lemma_instance(rng: &mut DetRng) -> Result<LemmaInstance, Value> {
    let x = Space::euclidean_full(1).map_err(err)?;
    let y = Space::euclidean_full(1).map_err(err)?;
    let base = Rect::new(vec![
        {
            let lo = rng.rat_in(-6, 0, &[1, 2]);
            Interval::open(lo.clone(), lo + rng.rat_in(2, 5, &[1]))
        },
        {
            let lo = rng.rat_in(-6, 0, &[1, 2]);
            Interval::open(lo.clone(), lo + rng.rat_in(2, 5, &[1]))
        },
    ]);
    let mut w = BoxUnion::from_rect(base.clone()).map_err(err)?;
    for _ in 0..rng.below(4) {
        w = w
            .union_with(&BoxUnion::from_rect(open_box(rng, 2)).map_err(err)?)
            .map_err(err)?;
    }
    let inner = shrink_union(&BoxUnion::from_rect(base).map_err(err)?, 4).map_err(err)?;
    let inner_rect = inner.rects()[0].clone();
    let s = BoxUnion::from_rect(inner_rect.slice(0..1)).map_err(err)?;
    let t = BoxUnion::from_rect(inner_rect.slice(1..2)).map_err(err)?;
    Ok(LemmaInstance { x, y, s, t, w })
}

struct ChainInstance {
    x: AscendingSequence,
    y: AscendingSequence,
    w: ColimitOpen,
    px: PointQ,
    py: PointQ,
}

fn growing_axis(rng: &mut DetRng) -> AxisGrowth {
    let slopes = [rat_int(0), rat_int(1), rat(1, 2)];
    let lo_slope = slopes[rng.below(3) as usize].clone();
    let hi_slope = slopes[rng.below(3) as usize].clone();
    AxisGrowth {
        lo: Affine::new(rng.rat_in(-4, -2, &[1, 2]), -lo_slope),
        hi: Affine::new(rng.rat_in(2, 4, &[1, 2]), hi_slope),
    }
}

fn chain_instance(rng: &mut DetRng, depth: u64) -> Result<ChainInstance, Value> {
    let seq = |rng: &mut DetRng| -> Result<AscendingSequence, Value> {
        AscendingSequence::new(
            StageRule::GrowingBox {
                axes: vec![growing_axis(rng)],
            },
            depth + 8,
        )
        .map_err(err)
    };
    let x = seq(rng)?;
    let y = seq(rng)?;
    let w = match rng.below(3) {
        0 => ColimitOpen::new(OpenRule::FullCarrier),
        1 => ColimitOpen::new(OpenRule::Staircase),
        _ => ColimitOpen::new(OpenRule::Constant {
            value: BoxUnion::from_rect(Rect::new(vec![
                Interval::open(rat_int(-20), rat_int(20)),
                Interval::open(rat_int(-20), rat_int(20)),
            ]))
            .map_err(err)?,
        }),
    };
    let product = AscendingSequence::product(&x, &y).map_err(err)?;
    let base = w.stage_open(&product, 0).map_err(err)?;
    let coords = base.sample().ok_or_else(|| json!("empty base stage"))?;
    Ok(ChainInstance {
        x,
        y,
        w,
        px: PointQ::new(coords[..1].to_vec()),
        py: PointQ::new(coords[1..].to_vec()),
    })
}

/// Unit-slope sequences and a probe pinned off the base carrier, so the
/// probe's first stage is strictly positive.
fn late_probe_instance(rng: &mut DetRng, depth: u64) -> Result<ChainInstance, Value> {
    let seq = || {
        AscendingSequence::new(
            StageRule::GrowingBox {
                axes: vec![AxisGrowth {
                    lo: Affine::new(rat_int(-1), rat_int(-1)),
                    hi: Affine::new(rat_int(1), rat_int(1)),
                }],
            },
            depth + 8,
        )
        .map_err(err)
    };
    let x = seq()?;
    let y = seq()?;
    let w = if rng.chance(1, 2) {
        ColimitOpen::new(OpenRule::FullCarrier)
    } else {
        ColimitOpen::new(OpenRule::Staircase)
    };
    let m = 1 + rng.below(depth.min(3)) as i64;
    let p = rat_int(m) + rat(1, 2);
    Ok(ChainInstance {
        x,
        y,
        w,
        px: PointQ::new(vec![p.clone()]),
        py: PointQ::new(vec![p]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(seed: u64, cases: usize) -> RunConfig {
        RunConfig {
            seed,
            case_count: cases,
            depth: 4,
            oracle_budget: 50,
        }
    }

    #[test]
    fn all_laws_pass_on_a_small_run() {
        let report = run_properties(&quick(0, 24));
        for law in &report.laws {
            assert!(law.passed, "{} failed: {:?}", law.name, law.counterexample);
        }
        assert!(report.all_passed);
        assert_eq!(report.laws.len(), ALL_LAWS.len());
    }

    #[test]
    fn seeds_vary_and_still_pass() {
        for seed in [1, 7, 1234] {
            let report = run_properties(&quick(seed, 8));
            assert!(report.all_passed, "seed {seed} failed");
        }
    }

    #[test]
    fn zero_cases_is_a_vacuous_pass() {
        let report = run_properties(&quick(3, 0));
        assert!(report.all_passed);
        for law in &report.laws {
            assert_eq!(law.cases, 0);
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = serde_json::to_string(&run_properties(&quick(5, 6))).unwrap();
        let b = serde_json::to_string(&run_properties(&quick(5, 6))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn filters_select_laws() {
        let report = run_laws(&quick(0, 4), Some(&WAY_BELOW_LAWS));
        assert_eq!(report.laws.len(), 6);
        assert!(report.all_passed);
        let names: Vec<&str> = report.laws.iter().map(|l| l.name.as_str()).collect();
        assert_eq!(names, WAY_BELOW_LAWS.to_vec());
    }

    #[test]
    fn oracle_law_reports_conclusive_counts() {
        let report = run_laws(&quick(0, 12), Some(&["waybelow.oracle_agreement"]));
        let law = &report.laws[0];
        assert!(law.passed);
        let detail = law.detail.as_ref().unwrap();
        assert!(detail["conclusive"].as_u64().unwrap() > 0);
    }

    #[test]
    fn report_json_shape() {
        let report = run_properties(&quick(0, 2));
        let v: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(v["schema"], "properties/1");
        assert_eq!(v["seed"], 0);
        assert!(v["laws"].as_array().unwrap().len() == 15);
    }
}
