//! Divisors on coordinate spaces, curve germs, the explicit sheaf models
//! and their restrictions to curves.

mod curve;
mod divisor;
mod model;
mod restrict;

pub use curve::CurveGerm;
pub use divisor::{MonomialMap, QDivisor};
pub use model::{CCReport, CCTerm, GKPullback, KummerPushAS, Piece, SheafModel};
pub use restrict::{is_transversal, restrict_to_curve, restrict_to_curve_with};
