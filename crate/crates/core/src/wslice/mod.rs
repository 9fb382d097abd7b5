//! Finite W-superalgebras by Whittaker reduction and by quantum Darboux slices.

mod algebra;
mod catalog;
mod charts;
mod clifford;
mod compare;
mod grading;
mod slice;
mod span;
mod splitting;
mod whittaker;

pub use algebra::{load_algebra, parse_algebra, LieSuperalgebraData};
pub use catalog::{bundled_names, catalog_algebra, catalog_text, resolve_text, CATALOG_ENV};
pub use charts::{classical_chart, classical_limit_residuals, quantum_chart, ChartRun};
pub use clifford::{clifford_factorization, CliffordReport};
pub use compare::{compare_realizations, compare_with_lifts, perturbation_detected, Comparison};
pub use grading::{build_chi, check_goodness, dynkin_grading, ChiAndForm, GoodGrading, WSetup};
pub use slice::{bivector_at_chi, slice_chart, slice_image, slice_walgebra, SliceData};
pub use span::PolySpan;
pub use splitting::{pbw_monomials, reduce_mod_power, splitting_check, SplitFailure, SplittingReport};
pub use whittaker::{
    generated_span, generator_monomials, generator_products, whittaker_walgebra, MonomialEvaluator, WContext,
    WGenerator, WPresentation,
};
