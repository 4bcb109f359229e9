//! Test oracles shared by the integration suites. Nothing here calls the
//! simplex under test.

#![allow(dead_code)]

pub mod basis;
pub mod instances;
