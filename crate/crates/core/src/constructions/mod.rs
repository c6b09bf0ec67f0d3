//! Coarse disjoint unions, almost-commutative spaces and slow-oscillation
//! diagnostics.

mod almost_commutative;
mod higson;
mod union;

pub use almost_commutative::{
    ac_assemble, ac_block, ac_prop_sandwich, ac_seminorm, corona_maps_check, ACSandwichReport, ACSpace, CoronaReport,
};
pub use higson::{decay_curve, slow_osc_multiplier_score, slow_osc_operator_score, slow_osc_score, DecayRow};
pub use union::{
    approx_unit, approx_unit_rational, covering_curve, covering_number_probe, union_seminorm, union_seminorm_scalar,
    CoveringPoint, UnionComponent, UnionSpace,
};
