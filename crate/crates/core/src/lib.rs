//! Flat-kernel mean-shift clustering, deterministic and stochastic, with
//! purity-based external evaluation and Gaussian-mixture benchmark data.

pub mod cli;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod meanshift;
pub mod neighbors;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{centroid, euclidean_distance, Dataset, LabeledDataset, Point};
pub use meanshift::{cluster_deterministic, cluster_stochastic, merge_modes, ClusteringResult, RunConfig};
pub use neighbors::{NeighborIndex, Strategy};
