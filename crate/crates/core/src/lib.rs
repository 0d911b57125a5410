//! Hierarchical shape/stride layouts and their algebra.
//!
//! A [`Layout`] maps hierarchical coordinates to offsets (integers),
//! coordinates (scaled basis elements) or XOR-linear offsets. The
//! [`algebra`] module provides coalesce, composition, complement, inverses,
//! divides and products; [`tensor`] pairs layouts with data; [`analysis`]
//! derives vector widths, offset locations and linear forms; [`oracle`] is a
//! brute-force reference used to check everything else.
//!
//! ```
//! use shapestride::{algebra, Layout};
//!
//! let a: Layout = "(4,6,8,10):(2,3,5,7)".parse().unwrap();
//! let b: Layout = "6:12".parse().unwrap();
//! assert_eq!(algebra::compose(&a, &b).unwrap().to_string(), "(2,3):(9,5)");
//! ```

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod error;
pub mod inttuple;
pub mod layout;
pub mod oracle;
pub mod stride;
pub mod tensor;
mod text;

pub use error::{Error, Result};
pub use inttuple::{IntTuple, Tuple};
pub use layout::{Layout, Mode, Tiler};
pub use stride::{Kind, Stride, StrideElem};
pub use tensor::{SliceCoord, Slot, Tensor};
