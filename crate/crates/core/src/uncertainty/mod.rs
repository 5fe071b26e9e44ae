//! The admissible region of localization pairs: corner bounds from the
//! reflected filter pairs and polygon sandwiches from supporting lines.

mod corner;
mod sandwich;

pub use corner::{
    corner_bounds, gamma, in_w_gamma, Corner, CornerBounds, CornerCheck, GammaBound,
    MembershipVerdict, VACUOUS_TOL,
};
pub use sandwich::{
    adaptive_sandwich, algorithm1, eigenvector_scatter, random_direction, sample_admissible,
    sample_signals, support_line, top_eigenspace, uniform_angles, RangeApproximation,
    ScatterPoint, ScatterSource, SupportLine, TOP_EIGENSPACE_TOL,
};
