//! Synthetic long-sequence track generator.
//!
//! Rigid sphere-shaped objects carry surface points. Dynamic objects drift,
//! slow down under damping and get a fresh random push when they fall below a
//! speed threshold. A pinhole camera moves between two points on a shell
//! around the origin. A point is visible when it projects into the frame and
//! no other object's sphere blocks the line of sight. The world is z-up with
//! the ground plane at `z = 0`.

mod camera;
mod config;
mod dynamics;
mod simulate;

pub use camera::{camera_pose, project_point, visibility_test, CameraPose, CameraRig, Projection, NEAR_PLANE};
pub use config::SceneConfig;
pub use dynamics::{step_dynamics, RigidObject};
pub use simulate::{simulate_scene, Scene};
