//! Order-type signatures, homogeneity and the brute-force homogeneous oracle.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{PointSequence, Sign};
use crate::limits::Limits;

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The order type: the orientation of every strictly increasing
/// (d+1)-tuple of indices, stored in lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTypeSignature {
    dim: usize,
    n_points: usize,
    signs: Vec<Sign>,
}

impl OrderTypeSignature {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// `(tuple, sign)` pairs in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Sign)> + '_ {
        (0..self.n_points)
            .combinations(self.dim + 1)
            .zip(self.signs.iter().copied())
    }

    /// Sign of a strictly increasing tuple of length d+1.
    pub fn get(&self, tuple: &[usize]) -> Option<Sign> {
        if tuple.len() != self.dim + 1
            || tuple.windows(2).any(|w| w[0] >= w[1])
            || tuple.last().is_some_and(|&x| x >= self.n_points)
        {
            return None;
        }
        self.signs
            .get(combination_rank(self.n_points, tuple))
            .copied()
    }

    pub fn count(&self, sign: Sign) -> usize {
        self.signs.iter().filter(|&&s| s == sign).count()
    }

    /// The common sign if every entry agrees (`None` when empty or mixed).
    pub fn common_sign(&self) -> Option<Sign> {
        let first = *self.signs.first()?;
        self.signs.iter().all(|&s| s == first).then_some(first)
    }
}

/// Position of `tuple` among the k-subsets of `0..n` in lexicographic order.
fn combination_rank(n: usize, tuple: &[usize]) -> usize {
    let k = tuple.len();
    let mut rank = 0u128;
    let mut next = 0usize;
    for (i, &c) in tuple.iter().enumerate() {
        for v in next..c {
            rank += binomial((n - v - 1) as u128, (k - i - 1) as u128);
        }
        next = c + 1;
    }
    rank as usize
}

const CHUNK: usize = 1 << 14;

/// Computes the full order type of `seq`.
///
/// Tuples are evaluated in parallel chunks; the output and any reported
/// degeneracy (the lexicographically first zero tuple) do not depend on the
/// thread count.
pub fn signature(seq: &PointSequence, limits: &Limits) -> Result<OrderTypeSignature> {
    seq.require_not_degenerate()?;
    let k = seq.dim() + 1;
    let needed = binomial(seq.len() as u128, k as u128);
    if needed > limits.signature_budget {
        return Err(Error::BudgetExceeded {
            what: "order-type signature",
            needed,
            budget: limits.signature_budget,
        });
    }
    let mut signs = Vec::with_capacity(needed as usize);
    let mut tuples = (0..seq.len()).combinations(k);
    loop {
        let chunk: Vec<Vec<usize>> = tuples.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let evaluated: Vec<Result<Sign>> = chunk
            .par_iter()
            .map(|t| seq.strict_orientation(t))
            .collect();
        for s in evaluated {
            signs.push(s?);
        }
    }
    Ok(OrderTypeSignature {
        dim: seq.dim(),
        n_points: seq.len(),
        signs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous(Sign),
    /// The first tuple and the lexicographically first tuple disagreeing with
    /// it, both as original sequence indices.
    Mixed {
        first: (Vec<usize>, Sign),
        offending: (Vec<usize>, Sign),
    },
}

impl Homogeneity {
    pub fn sign(&self) -> Option<Sign> {
        match self {
            Homogeneity::Homogeneous(s) => Some(*s),
            Homogeneity::Mixed { .. } => None,
        }
    }
}

pub(crate) fn check_indices(seq: &PointSequence, indices: &[usize]) -> Result<()> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("indices must be strictly increasing"));
    }
    if let Some(&last) = indices.last() {
        if last >= seq.len() {
            return Err(Error::invalid(format!(
                "index {last} out of range for {} points",
                seq.len()
            )));
        }
    }
    Ok(())
}

/// Decides whether the subsequence at `indices` is order-type homogeneous.
///
/// Fewer than d+1 indices is an error rather than vacuously homogeneous.
pub fn is_homogeneous(seq: &PointSequence, indices: &[usize]) -> Result<Homogeneity> {
    check_indices(seq, indices)?;
    let k = seq.dim() + 1;
    if indices.len() < k {
        return Err(Error::invalid(format!(
            "homogeneity needs at least {k} indices in dimension {}, got {}",
            seq.dim(),
            indices.len()
        )));
    }
    let mut first: Option<(Vec<usize>, Sign)> = None;
    for tuple in indices.iter().copied().combinations(k) {
        let s = seq.strict_orientation(&tuple)?;
        match &first {
            None => first = Some((tuple, s)),
            Some((_, f)) if *f == s => {}
            Some(_) => {
                return Ok(Homogeneity::Mixed {
                    first: first.unwrap(),
                    offending: (tuple, s),
                })
            }
        }
    }
    Ok(Homogeneity::Homogeneous(
        first.expect("at least one tuple").1,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BruteForce,
    Monotone,
    CupCap,
    Planar,
    Lifting,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::BruteForce => "brute",
            Algorithm::Monotone => "monotone",
            Algorithm::CupCap => "cupcap",
            Algorithm::Planar => "planar",
            Algorithm::Lifting => "lifting",
        })
    }
}

/// A homogeneous subsequence found by one of the extractors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionResult {
    pub indices: Vec<usize>,
    pub sign: Sign,
    /// Every (d+1)-tuple was checked to have orientation `sign`.
    pub verified: bool,
    pub algorithm: Algorithm,
}

impl ExtractionResult {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Runs [`is_homogeneous`] on an extractor's output. A mixed result is a bug
/// in the extractor and surfaces as [`Error::InternalInvariantViolation`].
pub(crate) fn certify(
    seq: &PointSequence,
    indices: Vec<usize>,
    expected: Option<Sign>,
    algorithm: Algorithm,
) -> Result<ExtractionResult> {
    match is_homogeneous(seq, &indices)? {
        Homogeneity::Homogeneous(sign) => {
            if expected.is_some_and(|e| e != sign) {
                return Err(Error::invariant(format!(
                    "{algorithm} reported sign {} but the subsequence has sign {sign}",
                    expected.unwrap()
                )));
            }
            Ok(ExtractionResult {
                indices,
                sign,
                verified: true,
                algorithm,
            })
        }
        Homogeneity::Mixed { first, offending } => Err(Error::invariant(format!(
            "{algorithm} returned a non-homogeneous subsequence: {:?} has {} but {:?} has {}",
            first.0, first.1, offending.0, offending.1
        ))),
    }
}

/// Exact maximum homogeneous subsequence by branch and bound.
///
/// Among maximum sets the lexicographically smallest index list is returned.
pub fn brute_force_max_homogeneous(
    seq: &PointSequence,
    limits: &Limits,
) -> Result<ExtractionResult> {
    let n = seq.len();
    let k = seq.dim() + 1;
    if n > limits.brute_force_cap {
        return Err(Error::BudgetExceeded {
            what: "brute-force search",
            needed: n as u128,
            budget: limits.brute_force_cap as u128,
        });
    }
    if n < k {
        return Err(Error::InsufficientInput { needed: k, got: n });
    }
    let sig = signature(seq, limits)?;
    let search = BruteForce {
        sig: &sig,
        n,
        d: seq.dim(),
    };
    let best = [Sign::Positive, Sign::Negative]
        .into_iter()
        .filter_map(|s| search.best_for(s).map(|set| (set, s)))
        .min_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then_with(|| a.cmp(b)))
        .expect("any d+1 points are homogeneous");
    certify(seq, best.0, Some(best.1), Algorithm::BruteForce)
}

struct BruteForce<'a> {
    sig: &'a OrderTypeSignature,
    n: usize,
    d: usize,
}

impl BruteForce<'_> {
    fn best_for(&self, sign: Sign) -> Option<Vec<usize>> {
        let mut best = Vec::new();
        let mut current = Vec::with_capacity(self.n);
        self.dfs(0, sign, &mut current, &mut best);
        (best.len() > self.d).then_some(best)
    }

    // Pre-order over increasing index lists visits equal-length sets in
    // lexicographic order, so the first maximum found is the smallest.
    fn dfs(&self, start: usize, sign: Sign, current: &mut Vec<usize>, best: &mut Vec<usize>) {
        if current.len() > self.d && current.len() > best.len() {
            best.clone_from(current);
        }
        for j in start..self.n {
            if current.len() + (self.n - j) <= best.len().max(self.d) {
                break;
            }
            if self.extends(current, j, sign) {
                current.push(j);
                self.dfs(j + 1, sign, current, best);
                current.pop();
            }
        }
    }

    fn extends(&self, current: &[usize], j: usize, sign: Sign) -> bool {
        if current.len() < self.d {
            return true;
        }
        let mut tuple = Vec::with_capacity(self.d + 1);
        current.iter().copied().combinations(self.d).all(|t| {
            tuple.clear();
            tuple.extend_from_slice(&t);
            tuple.push(j);
            self.sig.get(&tuple) == Some(sign)
        })
    }
}
