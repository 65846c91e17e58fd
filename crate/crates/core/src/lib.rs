//! 2-primary invariants of class groups of imaginary quadratic fields
//! `Q(√(-p₁⋯p_t))` with `p_i ≡ 1 (mod 4)` for `i < t` and `p_t ≡ 3 (mod 4)`.
//!
//! - [`gf2`]: dense linear algebra over GF(2).
//! - [`symbols`]: Jacobi, quartic and odd Hilbert symbols.
//! - [`quadform`]: quadratic forms over GF(2), their classification and the
//!   exhaustive oracles for isotropy index and bilinear nullities.
//! - [`redei`]: the Rédei matrix, `V₀`, the 8-rank pairing and its quadratic form.
//! - [`bqf`]: binary quadratic forms and the form class group, used as ground truth.

pub mod bqf;
pub mod gf2;
pub mod quadform;
pub mod redei;
pub mod symbols;

pub use gf2::{BitMatrix, BitVector, Gf2Error};
pub use quadform::{Classification, FormType, QuadForm, QuadFormError};
pub use redei::{eight_rank_report, four_rank, validate_field, Divisor, EightRankReport, FieldSpec};
pub use symbols::{xi, Sign};
