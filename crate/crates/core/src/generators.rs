//! Input generators: the moment curve, extremal sets for the monotone and
//! cup/cap theorems, and seeded random sequences in general position.

use std::collections::HashSet;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::CupCapTable;
use crate::error::{Error, Result};
use crate::geometry::{
    int, orientation, shared_coordinate, validate_general_position, GpStatus, Point, PointSequence,
    Rational, Sign,
};
use crate::limits::Limits;
use crate::order_type::binomial;

/// Sequences above this size skip the exhaustive general-position check
/// after the cup/cap-free construction.
const CAPCUP_VALIDATION_CAP: usize = 300;

/// Candidate draws per point before [`gen_random`] gives up.
const MAX_ATTEMPTS: usize = 1000;

/// `n` points `(t, t^2, ..., t^d)` at `t = t_start + i * t_step`.
///
/// Any d+1 of them have a positive Vandermonde orientation, so only the
/// coordinate projections need checking.
pub fn gen_moment(
    d: usize,
    n: usize,
    t_start: &Rational,
    t_step: &Rational,
) -> Result<PointSequence> {
    if !t_step.is_positive() {
        return Err(Error::invalid("t-step must be positive"));
    }
    if d == 0 || n == 0 {
        return Err(Error::invalid("dimension and count must be at least 1"));
    }
    let points = (0..n)
        .map(|i| {
            let t = t_start + t_step * int(i as i64);
            let mut c = Vec::with_capacity(d);
            let mut x = t.clone();
            for _ in 0..d {
                c.push(x.clone());
                x *= &t;
            }
            Point::new(c)
        })
        .collect();
    let seq = PointSequence::new(d, points)?;
    // Even powers of t of mixed sign can collide.
    let status = match shared_coordinate(&seq) {
        Some(w) => GpStatus::Degenerate(w),
        None => GpStatus::Verified,
    };
    Ok(seq.with_status(status))
}

/// Length of the longest monotone subsequence, by the quadratic recurrence.
pub fn longest_monotone_dp(values: &[Rational]) -> usize {
    let n = values.len();
    let mut inc = vec![1usize; n];
    let mut dec = vec![1usize; n];
    for i in 0..n {
        for j in 0..i {
            if values[j] < values[i] {
                inc[i] = inc[i].max(inc[j] + 1);
            }
            if values[j] > values[i] {
                dec[i] = dec[i].max(dec[j] + 1);
            }
        }
    }
    inc.into_iter().chain(dec).max().unwrap_or(0)
}

/// `(n-1)^2` distinct values with no monotone subsequence of length `n`:
/// `n-1` blocks in decreasing order, each an increasing run of `n-1`.
pub fn gen_es_monotone(n: usize) -> Result<Vec<Rational>> {
    if n < 2 {
        return Err(Error::invalid("n must be at least 2"));
    }
    let m = (n - 1) as i64;
    let values: Vec<Rational> = (0..m)
        .rev()
        .flat_map(|b| (1..=m).map(move |k| int(b * m + k)))
        .collect();
    let longest = longest_monotone_dp(&values);
    if longest != n - 1 {
        return Err(Error::invariant(format!(
            "block construction has a monotone run of {longest}, expected {}",
            n - 1
        )));
    }
    Ok(values)
}

/// `C(2n-4, n-2)` planar points, x-increasing with integer coordinates,
/// containing no `n`-cup and no `n`-cap.
pub fn gen_es_capcup(n: usize) -> Result<PointSequence> {
    if n < 3 {
        return Err(Error::invalid("n must be at least 3"));
    }
    let pts = no_cup_cap(n, n);
    let expected = binomial(2 * n as u128 - 4, n as u128 - 2);
    if pts.len() as u128 != expected {
        return Err(Error::invariant(format!(
            "construction produced {} points, expected {expected}",
            pts.len()
        )));
    }
    let seq = PointSequence::new(
        2,
        pts.into_iter()
            .map(|(x, y)| Point::new(vec![x, y]))
            .collect(),
    )?;
    let status = if seq.len() <= CAPCUP_VALIDATION_CAP {
        validate_general_position(&seq, CAPCUP_VALIDATION_CAP)
    } else {
        match shared_coordinate(&seq) {
            Some(w) => GpStatus::Degenerate(w),
            None => GpStatus::Unverified,
        }
    };
    if let GpStatus::Degenerate(w) = status {
        return Err(Error::invariant(format!("construction is degenerate: {w}")));
    }
    let seq = seq.with_status(status);
    let table = CupCapTable::build(&seq)?;
    let (cup, cap) = (table.longest_cup().len(), table.longest_cap().len());
    if cup >= n || cap >= n {
        return Err(Error::invariant(format!(
            "construction has a {cup}-cup and a {cap}-cap, target {n}"
        )));
    }
    Ok(seq)
}

/// Points with no `a`-cup and no `b`-cap, translated to start at the origin.
///
/// A set without `(a-1)`-cups goes left of and below a set without
/// `(b-1)`-caps, with the gap steep enough that every connecting segment is
/// steeper than any segment inside either part.
fn no_cup_cap(a: usize, b: usize) -> Vec<(Rational, Rational)> {
    if a <= 2 || b <= 2 {
        return vec![(Rational::zero(), Rational::zero())];
    }
    let left = no_cup_cap(a - 1, b);
    let right = no_cup_cap(a, b - 1);
    let steepest = max_abs_slope(&left).max(max_abs_slope(&right));
    let width_left = left.iter().map(|p| &p.0).max().unwrap().clone();
    let width_right = right.iter().map(|p| &p.0).max().unwrap().clone();
    let height_left = left.iter().map(|p| &p.1).max().unwrap().clone();
    let dx = width_left + Rational::one();
    let dy = height_left + (steepest * (&dx + width_right)).ceil() + Rational::one();
    left.into_iter()
        .chain(right.into_iter().map(|(x, y)| (x + &dx, y + &dy)))
        .collect()
}

fn max_abs_slope(pts: &[(Rational, Rational)]) -> Rational {
    pts.iter()
        .tuple_combinations()
        .map(|(p, q)| ((&q.1 - &p.1) / (&q.0 - &p.0)).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// `count` points in R^d with integer coordinates drawn uniformly from
/// `[-bound, bound]`, reproducible from `seed`.
///
/// A candidate point is redrawn if it repeats a coordinate of an earlier
/// point, or, when `count <= limits.gp_exhaustive_cap`, if it lies on a
/// hyperplane through d earlier points. Larger outputs are left unverified
/// and degeneracies among them surface lazily.
pub fn gen_random(
    d: usize,
    count: usize,
    seed: u64,
    bound: u64,
    limits: &Limits,
) -> Result<PointSequence> {
    if d == 0 || count == 0 {
        return Err(Error::invalid("dimension and count must be at least 1"));
    }
    if bound == 0 {
        return Err(Error::invalid("bound must be at least 1"));
    }
    let bound = bound
        .to_i64()
        .ok_or_else(|| Error::invalid("bound is too large"))?;
    let exhaustive = count <= limits.gp_exhaustive_cap;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used: Vec<HashSet<i64>> = vec![HashSet::new(); d];
    let mut points: Vec<Point> = Vec::with_capacity(count);
    for i in 0..count {
        let mut accepted = None;
        for _ in 0..MAX_ATTEMPTS {
            let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-bound..=bound)).collect();
            if c.iter().zip(&used).any(|(x, u)| u.contains(x)) {
                continue;
            }
            let p = Point::from_ints(&c);
            if exhaustive && on_spanned_hyperplane(&points, &p, d)? {
                continue;
            }
            accepted = Some((c, p));
            break;
        }
        let (c, p) = accepted.ok_or_else(|| Error::RetriesExhausted {
            attempts: MAX_ATTEMPTS,
            reason: format!("no admissible point {i} in [-{bound}, {bound}]^{d}"),
        })?;
        for (x, u) in c.into_iter().zip(used.iter_mut()) {
            u.insert(x);
        }
        points.push(p);
    }
    let status = if exhaustive {
        GpStatus::Verified
    } else {
        GpStatus::Unverified
    };
    Ok(PointSequence::new(d, points)?.with_status(status))
}

fn on_spanned_hyperplane(points: &[Point], p: &Point, d: usize) -> Result<bool> {
    for base in points.iter().combinations(d) {
        let mut tuple = base;
        tuple.push(p);
        if orientation(&tuple)? == Sign::Zero {
            return Ok(true);
        }
    }
    Ok(false)
}
