pub mod corpus;
pub mod error;
pub mod fpoly;
pub mod geometry;
pub mod groebner;
pub mod ideal;
pub mod input;
pub mod module;
pub mod par;
pub mod pipeline;
pub mod poly;
pub mod report;
pub mod tower;

pub use error::{Error, Result};
