//! Convex-position and cyclic-polytope checks by facet enumeration.
//!
//! Under general position every facet of the hull is a simplex spanned by d
//! of the points, so a d-subset is a facet exactly when all remaining points
//! lie strictly on one side of its hyperplane.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::{PointSequence, Sign};
use crate::limits::Limits;
use crate::order_type::check_indices;

/// Facets of the hull of the points at `indices`, as sorted position lists
/// into `indices` (not sequence indices).
pub fn facets(seq: &PointSequence, indices: &[usize], limits: &Limits) -> Result<Vec<Vec<usize>>> {
    check_indices(seq, indices)?;
    seq.require_not_degenerate()?;
    let d = seq.dim();
    let k = indices.len();
    if k < d + 1 {
        return Err(Error::invalid(format!(
            "hull checks need at least {} points, got {k}",
            d + 1
        )));
    }
    if k > limits.hull_max_points || d > limits.hull_max_dim {
        return Err(Error::BudgetExceeded {
            what: "facet enumeration",
            needed: k.max(d) as u128,
            budget: if k > limits.hull_max_points {
                limits.hull_max_points
            } else {
                limits.hull_max_dim
            } as u128,
        });
    }
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(d + 1);
    for face in (0..k).combinations(d) {
        let mut side: Option<Sign> = None;
        let mut is_facet = true;
        for p in (0..k).filter(|p| !face.contains(p)) {
            tuple.clear();
            tuple.extend(face.iter().map(|&f| indices[f]));
            tuple.push(indices[p]);
            let s = seq.strict_orientation(&tuple)?;
            match side {
                None => side = Some(s),
                Some(prev) if prev != s => {
                    is_facet = false;
                    break;
                }
                Some(_) => {}
            }
        }
        if is_facet {
            out.push(face);
        }
    }
    Ok(out)
}

/// True iff every selected point is a vertex of the hull of the selection.
pub fn convex_position_check(
    seq: &PointSequence,
    indices: &[usize],
    limits: &Limits,
) -> Result<bool> {
    let fs = facets(seq, indices, limits)?;
    let mut on_facet = vec![false; indices.len()];
    for f in &fs {
        for &p in f {
            on_facet[p] = true;
        }
    }
    Ok(on_facet.into_iter().all(|x| x))
}

/// Gale's evenness condition for a sorted d-subset `face` of `0..k`: any two
/// positions outside `face` are separated by an even number of its members.
pub fn gale_even(face: &[usize], k: usize) -> bool {
    let outside: Vec<usize> = (0..k).filter(|p| !face.contains(p)).collect();
    outside
        .iter()
        .tuple_combinations()
        .all(|(&i, &j)| face.iter().filter(|&&f| i < f && f < j).count() % 2 == 0)
}

/// The facets of the cyclic d-polytope with `k` vertices in index order.
pub fn cyclic_facets(k: usize, d: usize) -> Vec<Vec<usize>> {
    (0..k).combinations(d).filter(|f| gale_even(f, k)).collect()
}

/// True iff the hull of the selection, with vertices labelled in index order,
/// has exactly the facets of the cyclic polytope: every facet is Gale-even
/// and every Gale-even d-subset is a facet.
///
/// The Gale-even family is closed under reversing the labels, so the check
/// accepts the index order and its reverse alike.
pub fn cyclic_polytope_check(
    seq: &PointSequence,
    indices: &[usize],
    limits: &Limits,
) -> Result<bool> {
    let found: BTreeSet<Vec<usize>> = facets(seq, indices, limits)?.into_iter().collect();
    let expected: BTreeSet<Vec<usize>> = cyclic_facets(indices.len(), seq.dim())
        .into_iter()
        .collect();
    Ok(found == expected)
}
