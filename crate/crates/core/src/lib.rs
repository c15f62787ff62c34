pub mod compalg;
pub mod context;
pub mod error;
pub mod exactnum;
pub mod freudenthal;
pub mod jet;
pub mod jordan;
pub mod linalg;
pub mod strata;
pub mod tancone;

pub use error::{Error, Result};
pub mod verify;
