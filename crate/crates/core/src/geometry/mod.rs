//! Camera model, rigid transforms, oriented boxes and RoI masks.

mod bbox;
mod camera;
mod mask;
mod transform;

pub use bbox::{
    box_frame, point_in_box, project_box_corners, BBox3D, BoxFrame, BoxRecord, BoxTrack,
};
pub use camera::{CalibrationRecord, Camera, Projection, NEAR_PLANE};
pub use mask::{
    convex_hull, polygon_area, polygon_centroid, rasterize_convex, roi_hull_from_box,
    roi_mask_from_box, square_crop_for_mask, CropWindow, Point2, DEFAULT_ENLARGE,
};
pub use transform::{
    is_rotation, normalize_angle, yaw_pitch_matrix, RigidTransform, RigidTransformRecord,
    ROTATION_TOL,
};
