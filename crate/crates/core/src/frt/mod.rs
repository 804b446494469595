//! The iterated function system `fᵢ(x) = cPx + vᵢ` and its attractor.

mod address;
mod cloud;
mod params;

pub use address::{eval_address, Address};
pub use cloud::{
    bounding_ball, canonical_point_set, cell_diameter, generate_cloud, generate_cloud_with_budget, piece_ball,
    same_point_set, second_level_ifs, Ball, PointCloud, DEFAULT_MAX_POINTS,
};
pub use params::{apply_word, FrtParams};
