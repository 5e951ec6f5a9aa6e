#![allow(clippy::needless_range_loop)]

pub mod concordance;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod field;
pub mod jones;
pub mod kh;
pub mod lee;
pub mod linalg;
pub mod poly;
pub mod s;
pub mod satellite;
pub mod trace;
pub mod util;

pub use diagram::{Arc, Crossing, LinkDiagram};
pub use error::{Error, Result};
