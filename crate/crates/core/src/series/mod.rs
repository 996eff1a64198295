//! Series and integral identities around the quantile: the w/eta/h0
//! functions, the ratio integrals Y_c, the derivative series for psi and
//! q, the binomial sums and the hypergeometric form of the defining
//! equation.

mod binomial;
pub(crate) mod dd;
mod deriv;
mod hyper;
mod wfun;
mod ycurve;

pub use binomial::{sum1_check, sum2_check};
pub use deriv::{psi_prime_series, q_prime_series, SeriesDiagnostics};
pub use hyper::hyper1_check;
pub use wfun::{eta_eval, eta_integral_identity, find_rho, h0_eval, w_eval, WRootResult};
pub use ycurve::{y_value, y_value_t_form};

pub(crate) use deriv::psi_prime_at;
