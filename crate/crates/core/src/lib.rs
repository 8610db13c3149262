//! Spectral classification of Brownian-type block operators
//! `T = [[V, E], [0, Q]]` of class Q.
//!
//! Every classifier reduces to a membership test on the finite Taylor
//! spectrum `σ(|Q|, |E|)`. The [`moments`] oracle and direct matrix
//! arithmetic on [`model::ShiftEmbedding`] provide independent checks.

pub mod dual;
pub mod error;
pub mod exec;
pub mod io;
pub mod jointspec;
pub mod linalg;
pub mod model;
pub mod moments;
pub mod pencils;
pub mod plot;
pub mod regions;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Exec;
pub use jointspec::{JointSpectrum, SpectralPoint};
pub use model::{AtomKind, AtomModel, PairModel, QAtom, ShiftEmbedding};
pub use regions::{classify, Membership, RegionId};
