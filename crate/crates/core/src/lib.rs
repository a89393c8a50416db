//! Exact arithmetic for positive definite binary quadratic forms of negative
//! discriminant: class groups and their genus structure, the lifting map from
//! discriminant `D` to `D p^2`, truncated theta-series expansions, and
//! machine verification of the dissection identities connecting the two
//! discriminants, down to the Lambert-series representation formulas for the
//! genera of discriminant -207.
//!
//! All computations are exact over checked 64-bit integers; identity checks
//! compare q-expansions coefficient by coefficient to an explicit truncation
//! order.

pub mod arith;
pub mod error;
pub mod forms;
pub mod genus;
pub mod identities;
pub mod lambert;
pub mod lift;
pub mod qseries;

pub use error::{Error, Result};
pub use forms::{
    class_number, compose, equivalent, principal_form, unit_w, validate_discriminant, ClassGroup,
    QuadForm,
};
pub use genus::{
    find_represented_coprime, genera, genus_label, genus_ratio, num_genera,
    predicted_genus_ratio, CharacterSystem, GenusLabel, GenusPartition,
};
pub use identities::{
    genus_slices, verify_genus_theorem, verify_main_theorem, verify_pp0, VerificationReport,
};
pub use lambert::{lambert_series, GenusSide, LambertDecomposition};
pub use lift::{lift_list, nonprimitive_tags, psi, psi_genus, psi_partition_check, PsiImage};
pub use qseries::{theta, theta_restricted, ResiduePairs, TruncatedSeries};
