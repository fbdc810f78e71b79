//! Command-line driver for `oscharm-core`: CSV tables, parallel drivers and
//! the acceptance criteria.

pub mod cli;
pub mod criteria;
pub mod input;
pub mod output;
pub mod par;
