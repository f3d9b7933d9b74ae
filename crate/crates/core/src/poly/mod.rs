//! Integer polynomials, formal-degree resultants, and the curve models.

mod curve;
mod int;
pub mod resultant;

pub use curve::{FamilyCurve, WeierstrassQT};
pub use int::{HeightBound, IntPoly};
pub use resultant::{m_certificate, sylvester_resultant, DetRing};
