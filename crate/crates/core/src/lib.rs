//! Asymptotic expansions of running sums of radix-rational sequences.
//!
//! A sequence is given by a linear representation (L, A_0..A_{B-1}, C):
//! u(n) = L·A_{w(n)}·C over the base-B digits of n. The crate evaluates the
//! running sums S_K(x) and 𝚺_N exactly, bounds the joint spectral radius of
//! the A_r, solves the dilation equations that give the periodic
//! coefficients, and assembles the asymptotic expansion of 𝚺_N.

pub mod error;
pub mod exactnum;
pub mod linrep;
pub mod spectral;
pub mod jsr;
pub mod dilation;
pub mod expansion;
pub mod harness;
pub mod io;
pub mod cli;
pub mod fixtures;

pub use error::{Error, Result};
