//! Depth-aware geometry for 3D object manipulation in images.
//!
//! The crate covers three jobs:
//!
//! * [`preview`]: lift masked objects to point clouds with a pinhole camera,
//!   move them in 3D and re-render a z-buffered preview of the edit.
//! * [`metrics`]: score edited images against ground truth with 2D, depth
//!   and 3D placement metrics, batch penalties for objects that went missing
//!   and normalized reports.
//! * [`pipeline`]: cut videos into camera-static clips by clustering camera
//!   tokens, pick the frame pair with the largest object motion and filter
//!   pairs by depth motion.
//!
//! File formats live in [`io`], shared types in [`geometry`]. The `manip3d`
//! binary exposes everything as subcommands.
//!
//! The `examples/` directory has one runnable program per capability:
//! `preview_render`, `evaluate_batch`, `metrics_tour`, `camera_clustering`,
//! `pair_selection` and `io_formats`.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod preview;

pub use error::{Error, Result};
