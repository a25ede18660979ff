//! Exact arithmetic used by every other module.

pub mod fq;
pub mod int;
pub mod poly;
pub mod quad;
