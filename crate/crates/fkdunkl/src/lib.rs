//! Computer-algebra and verified-numerics engine for deformed Fomin–Kirillov
//! algebras and their operator representations.
//!
//! The crate has five primary modules plus support code:
//!
//! * [`scalars`] — complex special functions (Jacobi theta, Weierstrass ℘,
//!   theta quotients, Jacobi `sn`) and the coefficient families
//!   (elliptic / trigonometric / rational / multiparameter / zero) used as
//!   structure constants everywhere else.
//! * [`freealg`] — the free algebra on bracket generators `[ij]` over twisted
//!   scalar coefficients, the defining relation sets of the deformed
//!   Fomin–Kirillov algebra, and a degree-bounded ideal-membership engine
//!   (greedy head reduction with exact and sampled linear-algebra fallbacks).
//! * [`nichols`] — the Yetter–Drinfeld braiding on the reflection
//!   representation of a finite Coxeter group, braided symmetrizers, and
//!   exact Nichols-algebra rank/Hilbert-series computation.
//! * [`oprep`] — generalized divided-difference (Dunkl-type) operator
//!   representations: rational, trigonometric, elliptic, and hyperelliptic
//!   B₂ families, exact equivariant divided differences, functional-equation
//!   checks, and conjugation identities.
//! * [`dunkl`] — Dunkl elements, their commutativity, the cyclic word
//!   identities, deformed elementary symmetric polynomials, and the
//!   quantum-deformed Pieri rules (elliptic, equivariant, multiparameter).
//!
//! Support modules: [`rng`] (deterministic splittable PRNG and sample plans),
//! [`poly`] (exact multivariate polynomials and rational scalars over ℚ),
//! [`linalg`] (complex least squares, exact elimination, fraction-free rank),
//! [`roots`] (finite root systems A_{n−1}, B₂, G₂), and [`report`]
//! (serializable verdict types shared with the CLI).
//!
//! The crate is `no_std`-compatible (requires `alloc`).

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod dunkl;
pub mod freealg;
pub mod linalg;
pub mod nichols;
pub mod oprep;
pub mod poly;
pub mod report;
pub mod rng;
pub mod roots;
pub mod scalars;

/// Version string embedded in every JSON report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
