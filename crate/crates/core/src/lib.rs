pub mod error;
pub mod perm;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tensor::{SuperDim, SuperTensor, Word};
pub mod ainf;
pub mod canon;
pub mod complex;
pub mod enumerate;
pub mod feynman;
pub mod form;
pub mod graph;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod tcft;
pub mod verify;
