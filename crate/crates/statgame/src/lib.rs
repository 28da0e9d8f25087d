//! Equilibria of two-player zero-sum guessing games between a sampler
//! (PI) and a sequence chooser (PII).
//!
//! * [`dist`]: game parameters, supports and exact hypergeometric pmfs.
//! * [`fisher`]: closed-form symmetric equilibrium of win/lose games.
//! * [`bayes`]: log-utility betting games and their controlled solvers.
//! * [`iso`]: isoelastic utility games and generalized entropies.
//! * [`limits`]: large-`N` asymptotics of Binomial games.
//! * [`oracle`]: brute-force enumeration and Nash certificates.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bayes;
pub mod dist;
pub mod error;
pub mod fisher;
pub mod iso;
pub mod limits;
pub mod numeric;
pub mod oracle;

pub use error::{Error, Result};
