//! Command-line front end over `qsigma-core`. Every command is a thin adapter:
//! printed numbers are exactly the library values.

pub mod app;
pub mod compare;
pub mod figure;
pub mod model;
pub mod output;
pub mod sweep;

pub use app::run;
