//! Exact verification of strong Lefschetz properties for coinvariant and
//! relative coinvariant rings of finite reflection groups.

pub mod deform;
pub mod error;
pub mod lefschetz;
pub mod linalg;
pub mod polyring;
pub mod quotient;
pub mod rootsystem;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{FieldRef, Scalar};
