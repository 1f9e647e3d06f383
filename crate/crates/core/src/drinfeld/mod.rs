//! The Drinfeld functors: `∨` on jet duals (`ξ̌ = h⁻¹ξ`), `′` on deformed
//! envelopes (`δ_n` membership), semiclassical limits on both sides and the
//! quantum-duality round trip.

mod prime;
mod roundtrip;
mod semiclassical;
mod vee;

pub use prime::{delta_n, hprime_basis, hprime_basis_defect, hprime_member, HPrimeBasis, Membership};
pub use roundtrip::{duality_roundtrip, duality_roundtrip_standard};
pub use semiclassical::{
    cobracket_report, poisson_defect, semiclassical_cobracket, semiclassical_consistency, semiclassical_dual_bracket,
    structure_difference, CobracketData,
};
pub use vee::{
    vee_build, vee_build_from, vee_semiclassical, GenKind, Laurent, LinearCombo, Relation, TensorCombo, VeeAlgebroid,
    VeeGen, Word,
};

#[cfg(test)]
mod tests;
