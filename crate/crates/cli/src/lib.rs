//! Text and JSON formats, a fixture corpus and randomized check suites on
//! top of `arthurlab`.

pub mod dot;
pub mod dsl;
pub mod fixtures;
pub mod gen;
pub mod json;
pub mod ops;
pub mod render;
pub mod suites;
