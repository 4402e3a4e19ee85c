//! Dunkl kernel, generalized Bessel function and intertwining operator for
//! the symmetric group `S_n`, evaluated through Humbert `Φ₂` series and
//! Dirichlet-weighted simplex integrals, plus an identity verification suite.
//!
//! Modules, bottom up:
//!
//! - [`poly`]: exact rational polynomials, transpositions, Dunkl operators
//! - [`special`]: log-gamma, Pochhammer, `Φ₂⁽ⁿ⁾`, `F_D`, degenerate Heckman–Opdam
//! - [`quadrature`]: Gauss–Jacobi stick-breaking rules on the simplex
//! - [`dunkl`]: `E_κ(x, e_ℓ)`, `J_κ`, `V_κ` and the limit/shift checks
//! - [`verify`]: the identity suite and its JSON-lines reports
//! - [`cli`]: the `dunkl` command-line front end

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dunkl;
pub mod poly;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use dunkl::{
    bessel, bessel_by_symmetrization, dunkl_kernel, intertwine_monomial, intertwine_single, intertwine_symmetric,
    Accuracy, BesselSpec, DunklError, Evaluation, KernelQuery, Method,
};
pub use poly::{MultiPoly, Multiplicity, Rational, Transposition};
pub use quadrature::{dirichlet_moment, SimplexRule};
pub use special::{humbert_phi2, lauricella_fd, HumbertSpec, LauricellaSpec, SeriesParams, SeriesValue};
pub use verify::{run_suite, VerifyConfig, VerifyReport};
