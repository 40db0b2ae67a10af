//! Diameter hardness gadgets, certifying gap-diameter algorithms, additive
//! hopsets and diameter approximations, each paired with brute-force oracles.

pub mod approx;
pub mod certificates;
pub mod error;
pub mod graph;
pub mod hopsets;
pub mod ov;
pub mod reductions;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Direction, Distance, Graph};
