//! Order types of point sequences in R^d and extraction of long
//! order-type homogeneous subsequences.
//!
//! A sequence is homogeneous when every (d+1)-tuple, taken in index order,
//! has the same orientation. All predicates are exact over rationals.
//!
//! ```
//! use ordertype_core::{gen_moment, int, lifting_extract, Limits, Sign};
//!
//! let seq = gen_moment(3, 6, &int(1), &int(1)).unwrap();
//! let found = lifting_extract(&seq, 6, &Limits::default()).unwrap();
//! assert_eq!(found.indices, vec![0, 1, 2, 3, 4, 5]);
//! assert_eq!(found.sign, Sign::Positive);
//! ```

pub mod arrangements;
pub mod classical;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod lifting;
pub mod limits;
pub mod order_type;
pub mod pointfile;
pub mod polytope;

pub use arrangements::{
    cell_bound, classify, realized_cell_count, simple_cell_count, Hyperplane, SignVector,
};
pub use classical::{
    cupcap_extract, cupcap_threshold, monotone_extract, monotone_threshold,
    planar_homogeneous_extract, planar_threshold, CupCapTable,
};
pub use error::{Error, Result};
pub use generators::{gen_es_capcup, gen_es_monotone, gen_moment, gen_random, longest_monotone_dp};
pub use geometry::{
    affine_image, int, orientation, positive_linear_transform, ratio, validate_general_position,
    Degeneracy, GpStatus, Point, PointSequence, Rational, Sign,
};
pub use lifting::{
    guarantee_threshold, lifting_extract, pivots_consistent, project_through_last, refine_all,
    refine_all_observed, refine_step, BoundValue, Projection, RefinementState, Side, StepReport,
};
pub use limits::Limits;
pub use order_type::{
    binomial, brute_force_max_homogeneous, is_homogeneous, signature, Algorithm, ExtractionResult,
    Homogeneity, OrderTypeSignature,
};
pub use polytope::{convex_position_check, cyclic_polytope_check, facets};
