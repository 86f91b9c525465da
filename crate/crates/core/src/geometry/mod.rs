//! Camera model, pixel grids and point-cloud operations.

pub mod camera;
pub mod cloud;
pub mod raster;

pub use camera::{
    project_point, unproject_pixel, validate_rotation, CameraIntrinsics, CameraModel, CameraPose,
    Vec3,
};
pub use cloud::{
    bounding_box, displacement, representative_coordinate, scene_diagonal, translate_cloud,
    unproject_depth, unproject_masked, unproject_region, PointCloud,
};
pub use raster::{BinaryMask, DepthMap, Image, Rgb};
