//! Sign vectors of points against hyperplane arrangements, and cell counts.
//!
//! A cell of an arrangement is identified with the sign vector shared by the
//! points inside it. An arrangement of `m` hyperplanes in R^d has at most
//! `sum_{i<=d} C(m, i)` cells, with equality for simple arrangements, and this
//! in turn is at most `m^d` once `m >= d >= 2`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{determinant, Degeneracy, Point, Rational, Sign};

/// Per-hyperplane signs of one point.
///
/// Ordered lexicographically with `+1 < -1`, the tie-break order used when
/// choosing between equally populated cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(pub Vec<Sign>);

fn rank(s: Sign) -> u8 {
    match s {
        Sign::Positive => 0,
        Sign::Negative => 1,
        Sign::Zero => 2,
    }
}

impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .map(|&s| rank(s))
            .cmp(other.0.iter().map(|&s| rank(s)))
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().format(","))
    }
}

/// Affine hyperplane `a . x + b = 0`, stored as `[a_1, ..., a_d, b]` and
/// scaled so the first nonzero coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    coeffs: Vec<Rational>,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::invalid("a hyperplane needs d + 1 >= 2 coefficients"));
        }
        let d = coeffs.len() - 1;
        let lead = coeffs[..d]
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| Error::invalid("hyperplane normal is zero"))?;
        Ok(Hyperplane {
            coeffs: coeffs.into_iter().map(|c| c / &lead).collect(),
        })
    }

    /// The hyperplane through `d` affinely independent points of R^d.
    pub fn through(points: &[&Point]) -> Result<Self> {
        let d = points.len();
        if d == 0 || points.iter().any(|p| p.dim() != d) {
            return Err(Error::invalid("need exactly d points of dimension d"));
        }
        // f(x) = det of rows (1, p_1), ..., (1, p_d), (1, x) is affine in x.
        let eval = |x: Vec<Rational>| -> Result<Rational> {
            let rows: Vec<Vec<Rational>> = points
                .iter()
                .map(|p| p.coords().to_vec())
                .chain(std::iter::once(x))
                .map(|r| std::iter::once(Rational::one()).chain(r).collect())
                .collect();
            determinant(&rows)
        };
        let origin = eval(vec![Rational::zero(); d])?;
        let mut coeffs = Vec::with_capacity(d + 1);
        for axis in 0..d {
            let mut e = vec![Rational::zero(); d];
            e[axis] = Rational::one();
            coeffs.push(eval(e)? - &origin);
        }
        coeffs.push(origin);
        Hyperplane::new(coeffs).map_err(|_| Error::invalid("points are affinely dependent"))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn side(&self, p: &Point) -> Sign {
        let d = self.dim();
        let v = self.coeffs[..d]
            .iter()
            .zip(p.coords())
            .fold(self.coeffs[d].clone(), |acc, (a, x)| acc + a * x);
        Sign::of(&v)
    }
}

/// Sign vector of every point, in input order.
pub fn classify(points: &[Point], planes: &[Hyperplane]) -> Result<Vec<SignVector>> {
    if let Some(i) = planes
        .iter()
        .position(|h| points.iter().any(|p| p.dim() != h.dim()))
    {
        return Err(Error::invalid(format!(
            "hyperplane {i} does not match point dimension"
        )));
    }
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            planes
                .iter()
                .enumerate()
                .map(|(j, h)| match h.side(p) {
                    Sign::Zero => Err(Error::DegenerateInput(Degeneracy::OnHyperplane {
                        point: i,
                        plane: j,
                    })),
                    s => Ok(s),
                })
                .collect::<Result<Vec<_>>>()
                .map(SignVector)
        })
        .collect()
}

/// Number of distinct sign vectors, i.e. of cells met by the points.
pub fn realized_cell_count(vectors: &[SignVector]) -> usize {
    vectors.iter().collect::<BTreeSet<_>>().len()
}

/// Cells of a simple arrangement of `m` hyperplanes in R^d:
/// `sum_{i=0}^{d} C(m, i)`.
pub fn simple_cell_count(m: u64, d: u64) -> BigUint {
    let mut total = BigUint::zero();
    let mut c = BigUint::one();
    for i in 0..=d.min(m) {
        total += &c;
        // C(m, i+1) = C(m, i) * (m - i) / (i + 1)
        c = c * (m - i) / (i + 1);
    }
    total
}

/// The `m^d` cell bound for `m >= d >= 2`.
pub fn cell_bound(m: u64, d: u64) -> BigUint {
    BigUint::from(m).pow(d as u32)
}
