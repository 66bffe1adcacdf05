//! Floating-point corroboration of the exact layer: Monte-Carlo shell
//! integrals for Ohsawa-type measures and integrability probes on Fermat
//! cones.

pub mod bump;
pub mod error;
pub mod fermat;
pub mod quadrature;
pub mod report;
pub mod sampler;
pub mod shell;

pub use bump::{BumpFunction, Extension};
pub use error::{NumericError, Result};
pub use fermat::{df_density_probe, fermat_probe, DfProbe, FermatProbe, Trend};
pub use sampler::Budget;
pub use shell::{
    extension_independence_check, limit_convergence_check, shell_estimates, shell_integral, ShellEstimate,
};
