pub mod cache;
pub mod classnumber;
pub mod ecurve;
pub mod error;
pub mod ffield;
pub mod identities;
pub mod kloosterman;
pub mod padic;
pub mod record;
pub mod suite;

pub use error::{Error, Result};
