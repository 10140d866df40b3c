//! Both sides of the period–area identity `2T = sign (k pi + area integral)`,
//! the classification that fixes `k` and the sign, and the analysis of
//! orbits near the triangular equilibria.

pub mod classify;
pub mod l4;
pub mod lemma;
pub mod quadrature;
pub mod theta;
pub mod verify;

pub use classify::{classify_about, classify_case, Classification, ClassifyError, EnclosedPrimaries, TheoremCase, TheoremId};
pub use l4::{l4_direction_analysis, L4Analysis, L4Error, L4Report, L4Verdict};
pub use lemma::{lemma22_limit_check, CircleAverage};
pub use quadrature::{AreaIntegral, EpsilonScale, QuadratureConfig, QuadratureError, SingularPoint};
pub use theta::{boundary_integral, reconstruct_theta, BoundaryIntegral, ThetaError, ThetaProfile};
pub use verify::{area_integral, lifted_area_integral, verify, VerificationReport, VerifyError};
