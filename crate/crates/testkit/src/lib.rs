//! Test support for the commenhance crates.
//!
//! [`oracle`] re-derives every quantity the library computes from a dense
//! adjacency matrix with the most literal algorithm available, sharing no
//! code with the library. [`fixtures`] builds the small graphs the tests
//! reason about by hand.

pub mod fixtures;
pub mod oracle;
