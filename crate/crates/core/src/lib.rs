pub mod abgroup;
pub mod arith;
pub mod error;
pub mod autenum;
pub mod cache;
pub mod construct;
pub mod esolve;
pub mod fingroup;
pub mod helpcmp;
pub mod lp;
pub mod matact;
pub mod quadfield;
pub mod sehgal;

pub use error::{Error, Result};
