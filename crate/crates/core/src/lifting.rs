//! Homogeneous subsequences in R^d by cell refinement and central projection.
//!
//! Starting from the first d-1 points as pivots, each refinement step takes
//! the earliest survivor as a new pivot `q` and splits the remaining survivors
//! by their sign vector against the hyperplanes spanned by `q` and every
//! (d-1)-subset of earlier pivots. The most populous class is kept. Afterwards
//! every d-tuple of pivots sees all later pivots on one common side.
//!
//! The pivots before the last one, `apex`, are split into those below and
//! above it (by last coordinate). The larger side is projected from `apex`
//! onto a horizontal hyperplane separating it from `apex`. A homogeneous
//! subsequence of the projection in R^(d-1), pulled back and extended by
//! `apex`, is homogeneous in R^d.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arrangements::SignVector;
use crate::classical::{monotone_extract, planar_homogeneous_extract};
use crate::error::{Error, Result};
use crate::geometry::{
    identity, positive_linear_transform, shared_coordinate, Degeneracy, GpStatus, Point,
    PointSequence, Rational, Sign,
};
use crate::limits::Limits;
use crate::order_type::{binomial, certify, Algorithm, ExtractionResult};

/// Pivots chosen so far and the points still eligible to become pivots.
/// Both hold sequence indices in increasing order, every survivor after
/// every pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementState {
    pub pivots: Vec<usize>,
    pub survivors: Vec<usize>,
}

impl RefinementState {
    /// The first d-1 points as pivots, the rest as survivors.
    pub fn seed(seq: &PointSequence) -> Result<Self> {
        let d = seq.dim();
        if seq.len() < d {
            return Err(Error::InsufficientInput {
                needed: d,
                got: seq.len(),
            });
        }
        Ok(RefinementState {
            pivots: (0..d - 1).collect(),
            survivors: (d - 1..seq.len()).collect(),
        })
    }
}

/// What one refinement step saw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    /// Number of pivots before the step.
    pub r: usize,
    /// Hyperplanes in the step's arrangement, `C(r, d-1)`.
    pub hyperplanes: usize,
    /// Survivors before the step, including the new pivot.
    pub survivors_before: usize,
    /// Distinct sign vectors among the classified survivors.
    pub realized_cells: usize,
    /// Survivors after the step.
    pub kept: usize,
    /// Sign vector of the kept class (empty when nothing was left to split).
    pub cell: SignVector,
}

/// One refinement step.
pub fn refine_step(
    seq: &PointSequence,
    state: &RefinementState,
) -> Result<(RefinementState, StepReport)> {
    let d = seq.dim();
    let r = state.pivots.len();
    if r + 1 < d {
        return Err(Error::invalid(format!(
            "refinement needs at least {} pivots, got {r}",
            d - 1
        )));
    }
    let (&q, rest) = state
        .survivors
        .split_first()
        .ok_or_else(|| Error::invalid("refinement needs a survivor"))?;
    let bases: Vec<Vec<usize>> = state.pivots.iter().copied().combinations(d - 1).collect();

    let vectors: Vec<SignVector> = rest
        .par_iter()
        .map(|&p| {
            bases
                .iter()
                .map(|base| {
                    let mut t = Vec::with_capacity(d + 1);
                    t.extend_from_slice(base);
                    t.push(q);
                    t.push(p);
                    seq.strict_orientation(&t)
                })
                .collect::<Result<Vec<_>>>()
                .map(SignVector)
        })
        .collect::<Result<_>>()?;

    let mut classes: BTreeMap<&SignVector, Vec<usize>> = BTreeMap::new();
    for (v, &p) in vectors.iter().zip(rest) {
        classes.entry(v).or_default().push(p);
    }
    // BTreeMap order is the tie-break order; keep the first of the largest.
    let (cell, kept) = classes
        .iter()
        .fold(
            None::<(&SignVector, &Vec<usize>)>,
            |best, (v, members)| match best {
                Some((_, b)) if b.len() >= members.len() => best,
                _ => Some((v, members)),
            },
        )
        .map(|(v, m)| ((*v).clone(), m.clone()))
        .unwrap_or((SignVector(Vec::new()), Vec::new()));

    let cells = classes.len();
    if cells > 0 && kept.len() * cells < rest.len() {
        return Err(Error::invariant(format!(
            "largest of {cells} cells holds {} of {} survivors",
            kept.len(),
            rest.len()
        )));
    }
    let mut pivots = state.pivots.clone();
    pivots.push(q);
    let report = StepReport {
        r,
        hyperplanes: bases.len(),
        survivors_before: state.survivors.len(),
        realized_cells: cells,
        kept: kept.len(),
        cell,
    };
    Ok((
        RefinementState {
            pivots,
            survivors: kept,
        },
        report,
    ))
}

/// Pivots and per-step reports of a full refinement.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub pivots: Vec<usize>,
    pub steps: Vec<StepReport>,
}

/// Refines until no survivors remain.
pub fn refine_all(seq: &PointSequence, limits: &Limits) -> Result<Refinement> {
    refine_all_observed(seq, limits, |_, _| {})
}

/// [`refine_all`], calling `observe` with the state after every step.
pub fn refine_all_observed<F>(
    seq: &PointSequence,
    limits: &Limits,
    mut observe: F,
) -> Result<Refinement>
where
    F: FnMut(&RefinementState, &StepReport),
{
    seq.require_not_degenerate()?;
    let mut state = RefinementState::seed(seq)?;
    let mut steps = Vec::new();
    while !state.survivors.is_empty() {
        let (next, report) = refine_step(seq, &state)?;
        observe(&next, &report);
        steps.push(report);
        state = next;
    }
    if state.pivots.len() <= limits.pivot_check_cap && !pivots_consistent(seq, &state.pivots, &[])?
    {
        return Err(Error::invariant(
            "refined pivots violate the common-side property",
        ));
    }
    Ok(Refinement {
        pivots: state.pivots,
        steps,
    })
}

/// Checks that for every d-tuple of `pivots`, all later pivots and all
/// `survivors` lie on one common side of it.
pub fn pivots_consistent(
    seq: &PointSequence,
    pivots: &[usize],
    survivors: &[usize],
) -> Result<bool> {
    let d = seq.dim();
    let mut t = Vec::with_capacity(d + 1);
    for pos in (0..pivots.len()).combinations(d) {
        let last = *pos.last().expect("d >= 1");
        let mut side: Option<Sign> = None;
        for &p in pivots[last + 1..].iter().chain(survivors) {
            t.clear();
            t.extend(pos.iter().map(|&i| pivots[i]));
            t.push(p);
            let s = seq.strict_orientation(&t)?;
            match side {
                None => side = Some(s),
                Some(prev) if prev != s => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Below => "below",
            Side::Above => "above",
        })
    }
}

/// Central projection of pivots from the last pivot.
#[derive(Debug, Clone)]
pub struct Projection {
    /// Projected points in R^(d-1), in the order of `preimage`.
    pub points: PointSequence,
    pub side: Side,
    /// Sequence index of each projected point.
    pub preimage: Vec<usize>,
    /// Sequence index of the projection centre (the last pivot).
    pub apex: usize,
    /// Last coordinate of the projection hyperplane.
    pub level: Rational,
    /// Shear applied to separate shared coordinates, if any was needed.
    pub shear: Option<Vec<Vec<Rational>>>,
}

impl Projection {
    /// Sequence indices of the projected positions `positions`, followed by
    /// the apex.
    pub fn pull_back(&self, positions: &[usize]) -> Vec<usize> {
        positions
            .iter()
            .map(|&p| self.preimage[p])
            .chain(std::iter::once(self.apex))
            .collect()
    }
}

/// Projects all pivots but the last from the last one.
///
/// The larger of the below/above sides is kept (below on ties). The
/// projection plane is `x_d = c` with `c` midway between the apex and the
/// nearest kept point; `q` maps to `apex + t (q - apex)` with
/// `t = (c - apex_d) / (q_d - apex_d)`, and the last coordinate is dropped.
pub fn project_through_last(
    seq: &PointSequence,
    pivots: &[usize],
    limits: &Limits,
) -> Result<Projection> {
    let d = seq.dim();
    if d < 2 {
        return Err(Error::invalid("projection needs dimension at least 2"));
    }
    if pivots.len() < d + 1 {
        return Err(Error::InsufficientInput {
            needed: d + 1,
            got: pivots.len(),
        });
    }
    let (&apex, rest) = pivots.split_last().expect("nonempty");
    let top = seq.point(apex);
    let h = top.height();
    let mut below = Vec::new();
    let mut above = Vec::new();
    for &q in rest {
        match seq.point(q).height().cmp(h) {
            Ordering::Less => below.push(q),
            Ordering::Greater => above.push(q),
            Ordering::Equal => {
                return Err(Error::DegenerateInput(Degeneracy::SharedCoordinate {
                    axis: d - 1,
                    first: q,
                    second: apex,
                }))
            }
        }
    }
    let (side, kept) = if below.len() >= above.len() {
        (Side::Below, below)
    } else {
        (Side::Above, above)
    };
    let heights = kept.iter().map(|&q| seq.point(q).height());
    let nearest = match side {
        Side::Below => heights.max(),
        Side::Above => heights.min(),
    }
    .expect("kept side is nonempty")
    .clone();
    let level = (h + &nearest) / Rational::from_integer(2.into());

    let points: Vec<Point> = kept
        .iter()
        .map(|&q| {
            let p = seq.point(q);
            let t = (&level - h) / (p.height() - h);
            Point::new(
                top.coords()[..d - 1]
                    .iter()
                    .zip(&p.coords()[..d - 1])
                    .map(|(a, x)| a + &t * (x - a))
                    .collect(),
            )
        })
        .collect();
    let projected = PointSequence::new(d - 1, points)?;
    let (projected, shear) = separate_coordinates(projected)?;

    let status =
        match crate::geometry::validate_general_position(&projected, limits.gp_exhaustive_cap) {
            GpStatus::Degenerate(Degeneracy::Hyperplane(w)) => {
                let mut orig: Vec<usize> = w.iter().map(|&i| kept[i]).chain([apex]).collect();
                orig.sort_unstable();
                return Err(Error::DegenerateInput(Degeneracy::Hyperplane(orig)));
            }
            GpStatus::Degenerate(other) => {
                return Err(Error::ProjectionRepair(format!(
                    "coordinates still shared: {other}"
                )))
            }
            s => s,
        };
    Ok(Projection {
        points: projected.with_status(status),
        side,
        preimage: kept,
        apex,
        level,
        shear,
    })
}

fn collisions(points: &[Vec<Rational>], axis: usize) -> usize {
    points.len()
        - points
            .iter()
            .map(|p| &p[axis])
            .collect::<HashSet<_>>()
            .len()
}

/// Makes every coordinate projection injective with a product of elementary
/// shears `x_i += lambda * x_j` (each of determinant 1), so orientations are
/// unchanged.
fn separate_coordinates(seq: PointSequence) -> Result<(PointSequence, Option<Vec<Vec<Rational>>>)> {
    if shared_coordinate(&seq).is_none() {
        return Ok((seq, None));
    }
    let d = seq.dim();
    let n = seq.len();
    if d == 1 {
        return Err(Error::ProjectionRepair(
            "two projected points coincide on a line".into(),
        ));
    }
    let mut coords: Vec<Vec<Rational>> = seq.points().iter().map(|p| p.coords().to_vec()).collect();
    let mut matrix = identity(d);
    // Each non-colliding pair rules out at most one lambda for a given axis
    // pair, so this range always contains a strictly improving shear.
    let max_lambda = (n * n + 2) as i64;
    for axis in 0..d {
        let mut current = collisions(&coords, axis);
        while current > 0 {
            let step = (0..d)
                .filter(|&j| j != axis)
                .flat_map(|j| (1..=max_lambda).map(move |l| (j, l)))
                .find_map(|(j, l)| {
                    let lambda = Rational::from_integer(l.into());
                    let moved: Vec<Vec<Rational>> = coords
                        .iter()
                        .map(|c| {
                            let mut c = c.clone();
                            c[axis] = &c[axis] + &lambda * &c[j];
                            c
                        })
                        .collect();
                    let after = collisions(&moved, axis);
                    (after < current).then_some((j, lambda, moved, after))
                });
            let (j, lambda, moved, after) = step.ok_or_else(|| {
                Error::ProjectionRepair(format!("no shear separates coordinate {}", axis + 1))
            })?;
            let row_j = matrix[j].clone();
            for (m, s) in matrix[axis].iter_mut().zip(&row_j) {
                *m += &lambda * s;
            }
            coords = moved;
            current = after;
        }
    }
    let origin = Point::new(vec![Rational::zero(); d]);
    let out = positive_linear_transform(&seq, &matrix, &origin)?;
    debug_assert!(out
        .points()
        .iter()
        .zip(&coords)
        .all(|(p, c)| p.coords() == c.as_slice()));
    Ok((out, Some(matrix)))
}

/// Best-effort homogeneous subsequence of `seq`, aiming for `target` points.
///
/// Dimension 1 uses [`monotone_extract`], dimension 2
/// [`planar_homogeneous_extract`], higher dimensions refine, project and
/// recurse with target `target - 1`. The result is always verified; it has
/// at least d+1 points whenever the input does, and at least `target` points
/// whenever the input meets [`guarantee_threshold`].
pub fn lifting_extract(
    seq: &PointSequence,
    target: usize,
    limits: &Limits,
) -> Result<ExtractionResult> {
    seq.require_not_degenerate()?;
    let d = seq.dim();
    if seq.len() < d + 1 {
        return Err(Error::InsufficientInput {
            needed: d + 1,
            got: seq.len(),
        });
    }
    let result = match d {
        1 => monotone_extract(&seq.values(), target)?,
        2 => planar_homogeneous_extract(seq, target)?,
        _ => {
            let refinement = refine_all(seq, limits)?;
            let lifted = if refinement.pivots.len() > d {
                let proj = project_through_last(seq, &refinement.pivots, limits)?;
                if proj.points.len() >= d {
                    let inner = lifting_extract(&proj.points, target.saturating_sub(1), limits)?;
                    Some(proj.pull_back(&inner.indices))
                } else {
                    None
                }
            } else {
                None
            };
            // Any d+1 points form a single tuple and are homogeneous.
            let indices = lifted.unwrap_or_else(|| (0..=d).collect());
            certify(seq, indices, None, Algorithm::Lifting)?
        }
    };
    if result.len() < target {
        if let Ok(BoundValue::Exact(t)) = guarantee_threshold(d, target, limits) {
            if BigUint::from(seq.len()) >= t {
                return Err(Error::invariant(format!(
                    "{} points meet the threshold {t} but only {} < {target} were extracted",
                    seq.len(),
                    result.len()
                )));
            }
        }
    }
    Ok(result)
}

/// Upper bound on the size forcing a homogeneous `n`-subsequence in R^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigUint),
    /// Exactly `2^exponent`.
    PowerOfTwo(BigUint),
    /// Too large to hold: an exponential tower of the given height with a
    /// top exponent linear in `target`.
    Tower {
        height: usize,
        target: usize,
    },
}

impl BoundValue {
    /// The exact value, if it is held exactly.
    pub fn to_biguint(&self) -> Option<BigUint> {
        match self {
            BoundValue::Exact(v) => Some(v.clone()),
            BoundValue::PowerOfTwo(e) => e.to_usize().map(|e| BigUint::one() << e),
            BoundValue::Tower { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, BoundValue::Tower { .. })
    }
}

impl PartialOrd for BoundValue {
    /// Numeric order where both values are exact; towers are incomparable.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (BoundValue::PowerOfTwo(a), BoundValue::PowerOfTwo(b)) => Some(a.cmp(b)),
            (BoundValue::Tower { .. }, _) | (_, BoundValue::Tower { .. }) => None,
            _ => Some(self.to_biguint()?.cmp(&other.to_biguint()?)),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::PowerOfTwo(e) => write!(f, "2^{e}"),
            BoundValue::Tower { height, target } => write!(f, "twr_{height}(O({target}))"),
        }
    }
}

/// Evaluates the recursive threshold: `(n-1)^2 + 1` in dimension 1, and
/// `2^ceil(4 d^2 M log2 M)` with `M` the threshold for `(d-1, n-1)` above.
///
/// The exponent is computed exactly as the least `E` with `2^E >= M^(4 d^2 M)`.
/// Values whose bit length exceeds `limits.bound_bit_cap` are returned as a
/// symbolic tower of height d.
pub fn guarantee_threshold(d: usize, n: usize, limits: &Limits) -> Result<BoundValue> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if n <= d {
        return Err(Error::invalid(format!(
            "target {n} must exceed the dimension {d}"
        )));
    }
    if d == 1 {
        let m = BigUint::from(n - 1);
        return Ok(BoundValue::Exact(&m * &m + 1u32));
    }
    let tower = BoundValue::Tower {
        height: d,
        target: n,
    };
    let cap = limits.bound_bit_cap;
    let k_factor = 4 * (d as u64) * (d as u64);
    let exponent = match guarantee_threshold(d - 1, n - 1, limits)? {
        BoundValue::Tower { .. } => return Ok(tower),
        BoundValue::PowerOfTwo(a) => {
            // M = 2^a, so M log2 M = a 2^a exactly.
            match a.to_u64().filter(|&a| a < 64) {
                Some(a) => BigUint::from(k_factor) * a << (a as usize),
                None => return Ok(tower),
            }
        }
        BoundValue::Exact(m) => {
            let k = BigUint::from(k_factor) * &m;
            let estimate = k.to_f64().unwrap_or(f64::INFINITY) * m.bits() as f64;
            if estimate > 2.0 * cap as f64 + 64.0 {
                return Ok(tower);
            }
            let power = m.pow(k.to_u32().expect("bounded by the estimate"));
            BigUint::from((power - 1u32).bits())
        }
    };
    if exponent > BigUint::from(cap) {
        return Ok(tower);
    }
    Ok(BoundValue::PowerOfTwo(exponent))
}

/// Number of hyperplanes in a refinement step with `r` pivots in R^d.
pub fn hyperplane_count(r: usize, d: usize) -> u128 {
    binomial(r as u128, (d - 1) as u128)
}
