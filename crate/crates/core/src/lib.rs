//! Exact computations with the double shuffle Lie algebra `ds` and the
//! Kashiwara-Vergne Lie algebra `krv_2` in two generators.

pub mod dshuffle;
pub mod error;
pub mod group;
pub mod kv;
pub mod lie;
pub mod linalg;
pub mod mould;
pub mod par;
pub mod poly;
pub mod rational;
pub mod word;

pub use error::{Error, Result};
pub use poly::Poly;
pub use rational::Q;
pub use word::{Letter, PushOrbit, Word};
