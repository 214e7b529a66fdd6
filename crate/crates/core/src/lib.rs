//! Exact character sums and hypergeometric functions over finite fields.
//!
//! The crate computes multiplicative characters, Jacobi and multiple-Jacobi
//! sums, Greene binomial and multinomial coefficients, Greene's `2F1` and
//! `n+1Fn`, and the Lauricella series `F_A^(n)` over `F_q` (Appell `F2` at
//! `n = 2`). All values live in `Q(ζ_{q-1})` and are compared exactly.
//!
//! ```
//! use ffhyper::{Ctx, SeriesParams, Route, lauricella_fa};
//!
//! let ctx = Ctx::new(5, 1).unwrap();
//! let p = SeriesParams::parse(&ctx, "chi1", "chi0,chi2", "chi1,chi3", "1,2").unwrap();
//! let direct = lauricella_fa(&ctx, &p, Route::Direct).unwrap();
//! let charsum = lauricella_fa(&ctx, &p, Route::Charsum).unwrap();
//! assert_eq!(direct, charsum);
//! ```

pub mod char_sums;
pub mod cli;
pub mod characters;
pub mod context;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod hypergeometric;
pub mod identities;
pub mod mirror;

pub use char_sums::{binom, jacobi, multi_jacobi, multi_jacobi_recursive, multinom, BinomialTable};
pub use characters::Character;
pub use context::Ctx;
pub use cyclotomic::{CycloCtx, CycloNum};
pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem, FieldId};
pub use hypergeometric::{
    appell_f2, appell_f2_point_sum, gauss_2f1, hyper_np1_fn, lauricella_fa, GaussRoute, Route,
    SeriesParams,
};
pub use identities::{Form, IdentityId, Instance, VerificationReport};
