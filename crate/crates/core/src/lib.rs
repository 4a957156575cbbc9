//! Finite-subset spaces over circles, intervals and metric graphs: the
//! Hausdorff metric, sampled loops, explicit loop contractions with
//! certificates, and a Vietoris–Rips persistence check.

pub mod error;
pub mod homology;
pub mod io;
pub mod moves;
pub mod ran;
pub mod space;
pub mod tracks;

pub use error::{Error, Result};
