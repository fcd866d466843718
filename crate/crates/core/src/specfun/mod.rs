//! Special functions used by every other module.
//!
//! Everything here works in double precision. Quantities that grow like
//! `exp(Θ(n))` are returned as [`SignedLog`]; sums that cancel badly can be
//! accumulated in [`DoubleDouble`].

mod bessel;
mod double_double;
mod erf;
mod gamma;
mod hermite;
mod hyp;
mod laguerre;
mod poly;
mod signed_log;

pub use bessel::bessel_i;
pub use double_double::DoubleDouble;
pub(crate) use double_double::{ComplexDD, PI_DD};
pub use erf::{erfc, erfcx, ln_erfc};
pub(crate) use gamma::lgam;
pub use gamma::{binomial_real, ln_binomial_int, ln_factorial, ln_gamma};
pub(crate) use hermite::hermite_psi_all_dd;
pub use hermite::{hermite_psi, hermite_psi_all};
pub use hyp::hyp1f1;
pub use laguerre::laguerre_general;
pub use poly::PolyCoeffs;
pub use signed_log::{log_sum, SignedLog};

/// Shared stopping rule for the power series in this module: a term counts
/// as negligible when it is below `1e-16` of the running sum, and the series
/// stops after three negligible terms in a row.
pub(crate) struct SeriesStop {
    quiet: u32,
}

impl SeriesStop {
    pub(crate) fn new() -> Self {
        SeriesStop { quiet: 0 }
    }

    pub(crate) fn done(&mut self, term: f64, sum: f64) -> bool {
        if term.abs() <= 1e-16 * sum.abs() {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= 3
    }
}
