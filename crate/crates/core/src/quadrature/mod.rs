//! Deterministic Gauss–Legendre integration, including log-domain
//! accumulation for integrands whose magnitude is `e^{Θ(n)}`.

mod integrate;
mod legendre;

pub use integrate::{
    integrate_jacobi_endpoints, integrate_log_domain, integrate_semi_infinite_gaussian,
    integrate_semi_infinite_gaussian_many, integrate_upper_halfplane, HalfPlaneBox,
    HalfPlaneIntegral, LogIntegral,
};
pub(crate) use legendre::gauss_legendre_dd;
pub use legendre::{gauss_legendre, QuadratureRule};
