//! Brute-force reference implementations used by the test suites.
//!
//! Everything in this crate is written from first principles and kept free
//! of dependencies on the main crates, so that tests compare two
//! independent derivations rather than an implementation against itself.

pub mod curves;
