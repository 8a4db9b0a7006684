//! Shared fixtures for the integration suites. Each test binary uses a
//! subset, so unused items are expected.
#![allow(dead_code)]

pub mod reference;
pub mod tables;
pub mod universes;
