//! Guaranteed extractors in dimensions one and two.
//!
//! * [`monotone_extract`]: longest monotone subsequence by patience sorting;
//!   `(n-1)^2 + 1` distinct values always contain a monotone run of `n`.
//! * [`cupcap_extract`]: longest cup or cap of an x-sorted planar sequence;
//!   `C(2n-4, n-2) + 1` points always contain an `n`-cup or an `n`-cap.
//! * [`planar_homogeneous_extract`]: the two composed, giving a homogeneous
//!   `n`-subsequence from `C(2n-4, n-2)^2 + 1` planar points.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{affine_image, Degeneracy, Point, PointSequence, Rational, Sign};
use crate::order_type::{binomial, certify, Algorithm, ExtractionResult};

/// `(n-1)^2 + 1`: length forcing a monotone subsequence of length `n`.
pub fn monotone_threshold(n: usize) -> u128 {
    let m = n.saturating_sub(1) as u128;
    m * m + 1
}

/// `C(2n-4, n-2) + 1`: size forcing an `n`-cup or `n`-cap (for `n >= 2`).
pub fn cupcap_threshold(n: usize) -> u128 {
    let n = n.max(2) as u128;
    binomial(2 * n - 4, n - 2).saturating_add(1)
}

/// `C(2n-4, n-2)^2 + 1`: size at which the planar pipeline guarantees `n`.
pub fn planar_threshold(n: usize) -> u128 {
    let c = cupcap_threshold(n) - 1;
    c.saturating_mul(c).saturating_add(1)
}

/// Indices of a longest chain under `less`, by patience sorting.
fn longest_chain(len: usize, less: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    // tails[k]: index ending the best chain of length k + 1 seen so far.
    let mut tails: Vec<usize> = Vec::new();
    let mut pred: Vec<Option<usize>> = vec![None; len];
    for i in 0..len {
        let pos = tails.partition_point(|&t| less(t, i));
        pred[i] = pos.checked_sub(1).map(|p| tails[p]);
        if pos == tails.len() {
            tails.push(i);
        } else {
            tails[pos] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(i);
        cur = pred[i];
    }
    out.reverse();
    out
}

/// Longest monotone subsequence of distinct values; increasing wins ties.
///
/// Sign is `+1` for increasing and `-1` for decreasing. When
/// `values.len() >= (target-1)^2 + 1` a result shorter than `target` is
/// reported as an internal invariant violation.
pub fn monotone_extract(values: &[Rational], target: usize) -> Result<ExtractionResult> {
    if values.len() < 2 {
        return Err(Error::InsufficientInput {
            needed: 2,
            got: values.len(),
        });
    }
    let mut seen = HashSet::with_capacity(values.len());
    if let Some((j, _)) = values.iter().enumerate().find(|(_, v)| !seen.insert(*v)) {
        let i = values.iter().position(|v| *v == values[j]).unwrap();
        return Err(Error::invalid(format!("values {i} and {j} are equal")));
    }
    let inc = longest_chain(values.len(), |a, b| values[a] < values[b]);
    let dec = longest_chain(values.len(), |a, b| values[a] > values[b]);
    let (indices, sign) = if inc.len() >= dec.len() {
        (inc, Sign::Positive)
    } else {
        (dec, Sign::Negative)
    };
    if (values.len() as u128) >= monotone_threshold(target) && indices.len() < target {
        return Err(Error::invariant(format!(
            "{} distinct values but longest monotone run is {} < {target}",
            values.len(),
            indices.len()
        )));
    }
    certify(
        &PointSequence::from_values(values),
        indices,
        Some(sign),
        Algorithm::Monotone,
    )
}

/// Edge-indexed dynamic programme for cups and caps.
///
/// For an edge `j -> i` (`j < i`) it stores the length of the longest cup
/// (resp. cap) ending with that edge and the vertex before `j`. A cup extends
/// across `k -> j -> i` iff `slope(k, j) < slope(j, i)`; sorting each vertex's
/// incoming and outgoing edges by slope turns the extension step into a merge,
/// so the table costs `O(N^2 log N)` slope comparisons.
#[derive(Debug, Clone)]
pub struct CupCapTable {
    n: usize,
    cup: Vec<u32>,
    cup_pred: Vec<u32>,
    cap: Vec<u32>,
    cap_pred: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl CupCapTable {
    /// Builds the table. The sequence must be planar with strictly
    /// increasing first coordinates; a collinear triple met on the way is
    /// reported as [`Error::DegenerateInput`].
    pub fn build(seq: &PointSequence) -> Result<Self> {
        if seq.dim() != 2 {
            return Err(Error::invalid("cups and caps need planar points"));
        }
        if let Some(i) =
            (1..seq.len()).find(|&i| seq.point(i - 1).coord(0) >= seq.point(i).coord(0))
        {
            return Err(Error::invalid(format!(
                "first coordinates must be strictly increasing (points {} and {i})",
                i - 1
            )));
        }
        let n = seq.len();
        let mut t = CupCapTable {
            n,
            cup: vec![0; n * n],
            cup_pred: vec![NONE; n * n],
            cap: vec![0; n * n],
            cap_pred: vec![NONE; n * n],
        };
        let slope = |a: &Point, b: &Point| -> Rational {
            (b.coord(1) - a.coord(1)) / (b.coord(0) - a.coord(0))
        };
        for j in 0..n {
            let pj = seq.point(j);
            let mut incoming: Vec<(Rational, usize)> =
                (0..j).map(|k| (slope(seq.point(k), pj), k)).collect();
            let mut outgoing: Vec<(Rational, usize)> =
                (j + 1..n).map(|i| (slope(pj, seq.point(i)), i)).collect();
            incoming.sort();
            outgoing.sort();
            if let Some(w) = incoming.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(collinear(w[0].1, w[1].1, j));
            }
            if let Some(w) = outgoing.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(collinear(j, w[0].1, w[1].1));
            }

            // Cups: ascending sweep over slopes below each outgoing slope.
            let mut best = (0u32, NONE);
            let mut it = incoming.iter().peekable();
            for (s_out, i) in &outgoing {
                while let Some((s_in, k)) = it.peek() {
                    match s_in.cmp(s_out) {
                        Ordering::Less => {
                            let len = t.cup[k * n + j];
                            if len > best.0 {
                                best = (len, *k as u32);
                            }
                            it.next();
                        }
                        Ordering::Equal => return Err(collinear(*k, j, *i)),
                        Ordering::Greater => break,
                    }
                }
                let e = j * n + i;
                t.cup[e] = if best.1 == NONE { 2 } else { best.0 + 1 };
                t.cup_pred[e] = best.1;
            }

            // Caps: descending sweep over slopes above each outgoing slope.
            let mut best = (0u32, NONE);
            let mut it = incoming.iter().rev().peekable();
            for (s_out, i) in outgoing.iter().rev() {
                while let Some((s_in, k)) = it.peek() {
                    match s_in.cmp(s_out) {
                        Ordering::Greater => {
                            let len = t.cap[k * n + j];
                            if len > best.0 {
                                best = (len, *k as u32);
                            }
                            it.next();
                        }
                        Ordering::Equal => return Err(collinear(*k, j, *i)),
                        Ordering::Less => break,
                    }
                }
                let e = j * n + i;
                t.cap[e] = if best.1 == NONE { 2 } else { best.0 + 1 };
                t.cap_pred[e] = best.1;
            }
        }
        Ok(t)
    }

    fn per_end(&self, table: &[u32]) -> Vec<usize> {
        (0..self.n)
            .map(|i| {
                (0..i)
                    .map(|j| table[j * self.n + i] as usize)
                    .max()
                    .unwrap_or(1)
            })
            .collect()
    }

    /// Length of the longest cup ending at each point.
    pub fn cup_len(&self) -> Vec<usize> {
        self.per_end(&self.cup)
    }

    /// Length of the longest cap ending at each point.
    pub fn cap_len(&self) -> Vec<usize> {
        self.per_end(&self.cap)
    }

    fn longest(&self, table: &[u32], pred: &[u32]) -> Vec<usize> {
        if self.n < 2 {
            return (0..self.n).collect();
        }
        let mut best = (0u32, 0usize, 1usize);
        for j in 0..self.n {
            for i in j + 1..self.n {
                let len = table[j * self.n + i];
                if len > best.0 {
                    best = (len, j, i);
                }
            }
        }
        let (_, mut j, mut i) = best;
        let mut out = vec![i];
        loop {
            out.push(j);
            let k = pred[j * self.n + i];
            if k == NONE {
                break;
            }
            i = j;
            j = k as usize;
        }
        out.reverse();
        out
    }

    /// A longest cup, as increasing indices.
    pub fn longest_cup(&self) -> Vec<usize> {
        self.longest(&self.cup, &self.cup_pred)
    }

    /// A longest cap, as increasing indices.
    pub fn longest_cap(&self) -> Vec<usize> {
        self.longest(&self.cap, &self.cap_pred)
    }
}

fn collinear(a: usize, b: usize, c: usize) -> Error {
    let mut w = vec![a, b, c];
    w.sort_unstable();
    Error::DegenerateInput(Degeneracy::Hyperplane(w))
}

/// Longest cup or cap (cup on ties) of an x-increasing planar sequence.
///
/// Every triple of a cup is counterclockwise (`+1`), every triple of a cap
/// clockwise (`-1`).
pub fn cupcap_extract(seq: &PointSequence, target: usize) -> Result<ExtractionResult> {
    seq.require_not_degenerate()?;
    let table = CupCapTable::build(seq)?;
    if seq.len() < 3 {
        return Err(Error::InsufficientInput {
            needed: 3,
            got: seq.len(),
        });
    }
    let cup = table.longest_cup();
    let cap = table.longest_cap();
    let (indices, sign) = if cup.len() >= cap.len() {
        (cup, Sign::Positive)
    } else {
        (cap, Sign::Negative)
    };
    if target >= 3 && (seq.len() as u128) >= cupcap_threshold(target) && indices.len() < target {
        return Err(Error::invariant(format!(
            "{} x-sorted points but longest cup/cap is {} < {target}",
            seq.len(),
            indices.len()
        )));
    }
    certify(seq, indices, Some(sign), Algorithm::CupCap)
}

/// Homogeneous subsequence of a planar sequence in its original order.
///
/// Stage one keeps a longest subsequence with monotone first coordinates.
/// If that run is x-decreasing it is reflected through `x -> -x` (which
/// negates every orientation) so that stage two, the cup/cap table, sees an
/// x-increasing input; the reported sign is negated back afterwards.
pub fn planar_homogeneous_extract(seq: &PointSequence, target: usize) -> Result<ExtractionResult> {
    if seq.dim() != 2 {
        return Err(Error::invalid("planar extraction needs dimension 2"));
    }
    seq.require_not_degenerate()?;
    if seq.len() < 3 {
        return Err(Error::InsufficientInput {
            needed: 3,
            got: seq.len(),
        });
    }
    let xs: Vec<Rational> = seq.points().iter().map(|p| p.coord(0).clone()).collect();
    let run = monotone_extract(
        &xs,
        cupcap_threshold(target).min(usize::MAX as u128) as usize,
    )?;
    let result = if run.len() < 3 {
        // Any three points are homogeneous.
        certify(seq, vec![0, 1, 2], None, Algorithm::Planar)?
    } else {
        let sub = seq.subsequence(&run.indices);
        let (sub, flip) = if run.sign == Sign::Negative {
            let reflect = vec![
                vec![-Rational::one(), Rational::zero()],
                vec![Rational::zero(), Rational::one()],
            ];
            affine_image(
                &sub,
                &reflect,
                &Point::new(vec![Rational::zero(), Rational::zero()]),
            )?
        } else {
            (sub, Sign::Positive)
        };
        let inner = cupcap_extract(&sub, target)?;
        let indices = inner.indices.iter().map(|&p| run.indices[p]).collect();
        certify(seq, indices, Some(inner.sign * flip), Algorithm::Planar)?
    };
    if target >= 3 && (seq.len() as u128) >= planar_threshold(target) && result.len() < target {
        return Err(Error::invariant(format!(
            "{} planar points but the pipeline found only {} < {target}",
            seq.len(),
            result.len()
        )));
    }
    Ok(result)
}
