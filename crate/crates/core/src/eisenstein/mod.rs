//! Exact q-expansion layer: Dirichlet characters, Bernoulli special values,
//! Eisenstein series at non-positive points, formal operators, the
//! group-ring distribution constructions and the Euler factor.

pub mod characters;
pub mod euler;
pub mod forms;
pub mod qexp;
pub mod rankin;
pub mod special;

pub use characters::{DirichletCharacter, GammaCharacter};
pub use euler::{euler_factor, EulerCase, EulerFactor, EulerInputs};
pub use forms::{eisen_f_qexp, eisen_tilde_qexp, tilde_f_sides};
pub use qexp::{Coefficient, GroupRingElt, GroupRingSeries, QExpansion, QExpansionJson, QSeries, XPoly};
pub use rankin::{admissible_congruence_check, distribution_property_check, PhiFamily, RankinData};
pub use special::{bernoulli_poly, dirichlet_l_nonpositive, m_special_value, whittaker_poly, BernoulliPoly};
