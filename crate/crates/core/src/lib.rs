//! Exact distributional laws of Brownian motion indexed by the Brownian tree,
//! together with the machinery used to cross-check them: exact power series
//! over `Q` and `Q(sqrt 2)`, samplers for the limiting laws, a discrete
//! labeled-tree model, a spectrally positive stable path simulator, and a
//! reporting harness.

pub mod discretesnake;
pub mod error;
pub mod exactlaws;
pub mod harness;
pub mod levycsbp;
pub mod quad;
pub mod rng;
pub mod samplers;
pub mod series;

pub use error::{Error, Result};
pub use rng::RngStream;
