//! Stable, popular and dominant matchings in two-sided instances with strict
//! preferences.

pub mod cli;
pub mod elections;
pub mod error;
pub mod fixtures;
pub mod gale_shapley;
pub mod instance;
pub mod level_graph;
pub mod min_cost;
pub mod oracles;
pub mod popular_edge;
pub mod unstable_popular;
pub mod verify;

pub use error::{Error, InstanceError, Result};
pub use instance::{Edge, Instance, Man, Matching, Vertex, Woman};
