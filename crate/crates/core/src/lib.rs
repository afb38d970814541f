//! Laplacian eigenbases on rectangles `(a1, b1) x (a2, b2)` assembled from
//! closed-form interval eigenproblems.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`domain`]: intervals, rectangles, boundary conditions and hypothesis checks.
//! * [`factor`]: Dirichlet, Neumann, Robin and Steklov eigenpairs on an interval.
//! * [`product`]: dyad bases `u_jk(x, y) = e_j(x) f_k(y)` ordered by `lambda_j + lambda_k`.
//! * [`verify`]: Gauss-Legendre quadrature, weak residuals, Gram matrices and
//!   Parseval checks.
//! * [`fem`]: a P1 / Q1 finite-element oracle with dense symmetric eigensolvers.
//! * [`trace`]: the harmonic (trace) block decomposition of `H^1` on a rectangle.
//! * [`solver`]: fast diagonalization for `-Δu + μu = f`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod domain;
pub mod error;
pub mod factor;
pub mod fem;
pub(crate) mod math;
pub mod product;
pub mod solver;
pub mod trace;
pub mod verify;

pub use domain::{
    validate_spec, BcKind, BoundaryCondition, ComboSpec, Eigenpair1D, Interval, ModeForm,
    NormConvention, RectangleDomain, ValidationReport, Violation, DEFAULT_WEIGHT_FLOOR,
};
pub use error::{Error, Result};
pub use factor::{
    dirichlet_modes, eval_mode, factor_modes, neumann_modes, robin_modes, steklov_modes,
    FactorBasis,
};
pub use product::{
    build_product_basis, dyad_eval, enumerate_pairs, two_param_pairs, DyadIndex, DyadValue,
    PairScaling, ProductBasis, Scaling, TwoParamFamily, TwoParamPair,
};
