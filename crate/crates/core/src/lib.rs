//! Rate regions of the Gaussian interference channel with a cognitive relay.
//!
//! Two sources send independent messages to their own destinations while a
//! relay that knows both messages in advance helps. The crate evaluates
//! outer bounds, achievable regions and interference-regime classifiers for
//! the standard-form channel
//!
//! ```text
//! Y1 = h11 X1 + h12 X2 + h1c Xc + Z1
//! Y2 = h21 X1 + h22 X2 + h2c Xc + Z2
//! ```
//!
//! with unit input powers and unit noise variances. Regions are represented
//! by support-function samples ([`regions::Frontier`]), which makes inner and
//! outer bounds directly comparable.

pub mod cli;
pub mod error;
pub mod gauss;
pub mod inner;
pub mod io;
pub mod lp;
pub mod outer;
pub mod regimes;
pub mod regions;

pub use error::{Error, Result};
