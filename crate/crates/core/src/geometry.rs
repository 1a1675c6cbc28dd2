//! Exact rational points, the orientation predicate and general-position checks.
//!
//! Orientation of a (d+1)-tuple `(p_0, ..., p_d)` is the sign of the
//! determinant whose column `j` is `(1, p_j[0], ..., p_j[d-1])`. Determinants
//! are evaluated with fraction-free Bareiss elimination after every row has
//! been scaled to integers, first in checked `i128` and, on overflow, in
//! `BigInt`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Div, Neg};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds an integral [`Rational`].
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Builds `num / den`, reduced.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(v: &T) -> Sign {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-1",
            Sign::Zero => "0",
            Sign::Positive => "+1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> &Rational {
        &self.coords[axis]
    }

    /// The d-th (last) coordinate, which decides "above" and "below".
    pub fn height(&self) -> &Rational {
        self.coords
            .last()
            .expect("points have dimension at least 1")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coords.iter().format(" "))
    }
}

/// Why a sequence fails general position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Degeneracy {
    /// These d+1 points (sequence indices, increasing) lie on one hyperplane.
    Hyperplane(Vec<usize>),
    /// Two points share the coordinate on `axis` (0-based).
    SharedCoordinate {
        axis: usize,
        first: usize,
        second: usize,
    },
    /// Point `point` lies on hyperplane `plane`.
    OnHyperplane { point: usize, plane: usize },
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::Hyperplane(idx) => {
                write!(
                    f,
                    "points {{{}}} lie on a common hyperplane",
                    idx.iter().format(",")
                )
            }
            Degeneracy::SharedCoordinate {
                axis,
                first,
                second,
            } => write!(
                f,
                "points {first} and {second} share coordinate {}",
                axis + 1
            ),
            Degeneracy::OnHyperplane { point, plane } => {
                write!(f, "point {point} lies on hyperplane {plane}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GpStatus {
    Verified,
    Unverified,
    Degenerate(Degeneracy),
}

/// An index-ordered sequence of points in R^d.
#[derive(Debug, Clone)]
pub struct PointSequence {
    dim: usize,
    points: Vec<Point>,
    status: GpStatus,
}

impl PartialEq for PointSequence {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points
    }
}

impl Eq for PointSequence {}

impl PointSequence {
    /// Wraps `points` without checking general position.
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.dim() != dim) {
            return Err(Error::invalid(format!(
                "point {i} has dimension {}, expected {dim}",
                p.dim()
            )));
        }
        Ok(PointSequence {
            dim,
            points,
            status: GpStatus::Unverified,
        })
    }

    /// One-dimensional sequence from scalar values.
    pub fn from_values(values: &[Rational]) -> Self {
        PointSequence {
            dim: 1,
            points: values.iter().map(|v| Point::new(vec![v.clone()])).collect(),
            status: GpStatus::Unverified,
        }
    }

    pub fn from_int_rows(dim: usize, rows: &[&[i64]]) -> Result<Self> {
        PointSequence::new(dim, rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn status(&self) -> &GpStatus {
        &self.status
    }

    pub(crate) fn with_status(mut self, status: GpStatus) -> Self {
        self.status = status;
        self
    }

    /// Runs [`validate_general_position`] and records the outcome.
    pub fn verified(self, exhaustive_cap: usize) -> Self {
        let status = validate_general_position(&self, exhaustive_cap);
        self.with_status(status)
    }

    /// Fails if the sequence is known to be degenerate. Unverified sequences
    /// pass: their tuples are checked as they are evaluated.
    pub fn require_not_degenerate(&self) -> Result<()> {
        match &self.status {
            GpStatus::Degenerate(w) => Err(Error::DegenerateInput(w.clone())),
            _ => Ok(()),
        }
    }

    /// The subsequence at `indices`. General position is hereditary, so a
    /// verified status carries over.
    pub fn subsequence(&self, indices: &[usize]) -> PointSequence {
        let status = match self.status {
            GpStatus::Verified => GpStatus::Verified,
            _ => GpStatus::Unverified,
        };
        PointSequence {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            status,
        }
    }

    /// Orientation of the tuple at `indices` (in the given order), possibly zero.
    pub fn orientation_at(&self, indices: &[usize]) -> Result<Sign> {
        let pts: Vec<&Point> = indices.iter().map(|&i| &self.points[i]).collect();
        orientation(&pts)
    }

    /// Orientation of the tuple at `indices`; a zero determinant is reported
    /// as [`Error::DegenerateInput`] carrying the sorted tuple.
    pub fn strict_orientation(&self, indices: &[usize]) -> Result<Sign> {
        match self.orientation_at(indices)? {
            Sign::Zero => {
                let mut w = indices.to_vec();
                w.sort_unstable();
                Err(Error::DegenerateInput(Degeneracy::Hyperplane(w)))
            }
            s => Ok(s),
        }
    }

    /// Values of a one-dimensional sequence.
    pub fn values(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.coords[0].clone()).collect()
    }
}

/// Orientation of `d+1` points in R^d.
pub fn orientation(points: &[&Point]) -> Result<Sign> {
    let n = points.len();
    if n < 2 {
        return Err(Error::invalid("orientation needs at least two points"));
    }
    let d = n - 1;
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::invalid(format!(
            "orientation of {n} points needs dimension {d}, got a point of dimension {}",
            p.dim()
        )));
    }
    // Integer points skip the BigInt round trip.
    let small: Option<Vec<Vec<i128>>> = points
        .iter()
        .map(|p| {
            std::iter::once(Some(1))
                .chain(p.coords.iter().map(|x| {
                    if x.denom().is_one() {
                        x.numer().to_i128()
                    } else {
                        None
                    }
                }))
                .collect()
        })
        .collect();
    if let Some(det) = small.and_then(bareiss) {
        return Ok(Sign::of(&det));
    }
    // Rows are points; the transpose has the same determinant.
    let rows = points.iter().map(|p| {
        std::iter::once(Rational::one())
            .chain(p.coords.iter().cloned())
            .collect::<Vec<_>>()
    });
    Ok(Sign::of(&integer_determinant(&clear_denominators(rows).0)))
}

/// Exact determinant of a square rational matrix.
pub fn determinant(matrix: &[Vec<Rational>]) -> Result<Rational> {
    let n = matrix.len();
    if n == 0 || matrix.iter().any(|row| row.len() != n) {
        return Err(Error::invalid(
            "determinant needs a non-empty square matrix",
        ));
    }
    let (rows, scale) = clear_denominators(matrix.iter().cloned());
    Ok(Rational::new(integer_determinant(&rows), scale))
}

/// Scales every row by the lcm of its denominators. Returns the integer rows
/// and the product of the (positive) scale factors.
fn clear_denominators<I>(rows: I) -> (Vec<Vec<BigInt>>, BigInt)
where
    I: IntoIterator<Item = Vec<Rational>>,
{
    let mut scale = BigInt::one();
    let rows = rows
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let out = if l.is_one() {
                row.into_iter().map(|x| x.numer().clone()).collect()
            } else {
                row.into_iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect()
            };
            scale *= l;
            out
        })
        .collect();
    (rows, scale)
}

fn integer_determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(det) = small.and_then(bareiss) {
        return BigInt::from(det);
    }
    bareiss(rows.to_vec()).expect("BigInt arithmetic does not overflow")
}

/// Fraction-free Gaussian elimination. Returns `None` on arithmetic overflow.
fn bareiss<T>(mut m: Vec<Vec<T>>) -> Option<T>
where
    T: Clone + Zero + One + PartialEq + Neg<Output = T> + CheckedMul + CheckedSub + Div<Output = T>,
{
    let n = m.len();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Some(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(&m[k][k])?;
                let b = m[i][k].checked_mul(&m[k][j])?;
                m[i][j] = a.checked_sub(&b)? / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if negate { -det } else { det })
}

/// Checks general position: no d+1 points on a hyperplane and every coordinate
/// projection injective.
///
/// The hyperplane condition is checked over every (d+1)-subset only when
/// `seq.len() <= exhaustive_cap`; above the cap the coordinate condition is
/// still checked but the result is at best [`GpStatus::Unverified`].
pub fn validate_general_position(seq: &PointSequence, exhaustive_cap: usize) -> GpStatus {
    let exhaustive = seq.len() <= exhaustive_cap;
    if exhaustive {
        for tuple in (0..seq.len()).combinations(seq.dim + 1) {
            // Dimensions are consistent by construction.
            if seq
                .orientation_at(&tuple)
                .map(Sign::is_zero)
                .unwrap_or(true)
            {
                return GpStatus::Degenerate(Degeneracy::Hyperplane(tuple));
            }
        }
    }
    if let Some(w) = shared_coordinate(seq) {
        return GpStatus::Degenerate(w);
    }
    if exhaustive {
        GpStatus::Verified
    } else {
        GpStatus::Unverified
    }
}

/// First pair sharing a coordinate: lowest axis, then smallest second index.
pub(crate) fn shared_coordinate(seq: &PointSequence) -> Option<Degeneracy> {
    for axis in 0..seq.dim {
        let mut seen: HashMap<&Rational, usize> = HashMap::with_capacity(seq.len());
        for (j, p) in seq.points.iter().enumerate() {
            if let Some(&i) = seen.get(&p.coords[axis]) {
                return Some(Degeneracy::SharedCoordinate {
                    axis,
                    first: i,
                    second: j,
                });
            }
            seen.insert(&p.coords[axis], j);
        }
    }
    None
}

/// Applies `x -> matrix * x + shift` to every point.
///
/// The matrix must be nonsingular; the sign of its determinant is returned
/// alongside the image. Orientation of every tuple is multiplied by that sign.
pub fn affine_image(
    seq: &PointSequence,
    matrix: &[Vec<Rational>],
    shift: &Point,
) -> Result<(PointSequence, Sign)> {
    let d = seq.dim;
    if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
        return Err(Error::invalid(format!(
            "transform must be a {d}x{d} matrix"
        )));
    }
    if shift.dim() != d {
        return Err(Error::invalid(format!("shift must have dimension {d}")));
    }
    let det = Sign::of(&determinant(matrix)?);
    if det.is_zero() {
        return Err(Error::invalid("transform matrix is singular"));
    }
    let points = seq
        .points
        .iter()
        .map(|p| {
            Point::new(
                matrix
                    .iter()
                    .zip(&shift.coords)
                    .map(|(row, s)| {
                        row.iter()
                            .zip(&p.coords)
                            .fold(s.clone(), |acc, (a, x)| acc + a * x)
                    })
                    .collect(),
            )
        })
        .collect();
    let mut out = PointSequence {
        dim: d,
        points,
        status: GpStatus::Unverified,
    };
    // Nonsingular affine maps keep the hyperplane condition; only coordinate
    // distinctness needs a recheck.
    out.status = match &seq.status {
        GpStatus::Verified => match shared_coordinate(&out) {
            Some(w) => GpStatus::Degenerate(w),
            None => GpStatus::Verified,
        },
        GpStatus::Degenerate(Degeneracy::Hyperplane(w)) => {
            GpStatus::Degenerate(Degeneracy::Hyperplane(w.clone()))
        }
        _ => GpStatus::Unverified,
    };
    Ok((out, det))
}

/// Applies `x -> matrix * x + shift` for a matrix of positive determinant,
/// which leaves every orientation unchanged.
pub fn positive_linear_transform(
    seq: &PointSequence,
    matrix: &[Vec<Rational>],
    shift: &Point,
) -> Result<PointSequence> {
    let (out, det) = affine_image(seq, matrix, shift)?;
    if det != Sign::Positive {
        return Err(Error::invalid("transform determinant must be positive"));
    }
    Ok(out)
}

/// The d×d identity over rationals.
pub fn identity(d: usize) -> Vec<Vec<Rational>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}
