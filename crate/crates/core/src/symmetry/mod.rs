//! Lie point symmetries of the principal equation: vector fields, their
//! prolongations, the determining equations and the Chazy correspondence.

mod bivariate;
mod chazy;
mod determining;
mod field;
mod prolong;

pub use bivariate::Jet2;
pub use chazy::{chazy_map_check, chazy_residual};
pub use determining::{determining_residuals, DeterminingResiduals};
pub use field::{
    max_field_difference, r_scaling, x1, x2, x3, Bracket, Combination, FnField, GaugeField,
    PointVectorField,
};
pub use prolong::{prolong, symmetry_residual, JetPoint};
