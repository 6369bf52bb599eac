//! Input parsing, JSON reports and the command-line driver.

pub mod cli;
pub mod parse;
pub mod report;
