//! Exact singularity bookkeeping for pairs `(X, Y + B)` given as log-resolution
//! data: discrepancies, klt/plt/lc verdicts, the different on `Y^nu`, the pole
//! divisor of the Ohsawa measure, and adjoint-ideal vanishing orders.

pub mod adjoint;
pub mod adjunction;
pub mod divisor;
pub mod error;
pub mod model;
pub mod ohsawa;
pub mod rational;
pub mod singularities;

pub use divisor::{PrimeId, QDivisor, Space};
pub use error::{Error, Result};
pub use model::{BoundarySpec, DivisorRecord, ImageCodim, Incidence, RecordKind, SncModel};
pub use rational::Rational;
pub use singularities::{PairClass, Verdict};
