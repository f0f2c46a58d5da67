use std::f64::consts::TAU;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::SceneConfig;
use super::dynamics::RigidObject;
use crate::numeric::Sinusoid;

/// Depth below which a point counts as behind the camera.
pub const NEAR_PLANE: f64 = 1e-3;

/// Pinhole camera with OpenCV axes: x right, y down, z forward.
#[derive(Clone, Debug, PartialEq)]
pub struct CameraPose {
    pub position: Vector3<f64>,
    pub look_at: Vector3<f64>,
    pub up: Vector3<f64>,
    pub focal: f64,
    pub principal: [f64; 2],
    pub width: usize,
    pub height: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    /// `None` when the point is not in front of the camera.
    pub pixel: Option<[f64; 2]>,
    pub depth: f64,
    pub in_frustum: bool,
}

impl CameraPose {
    /// `(right, down, forward)` unit vectors in world coordinates.
    pub fn basis(&self) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
        let fwd = (self.look_at - self.position).normalize();
        let right = fwd
            .cross(&self.up)
            .try_normalize(1e-9)
            .or_else(|| fwd.cross(&Vector3::y()).try_normalize(1e-9))
            .unwrap_or_else(Vector3::x);
        (right, fwd.cross(&right), fwd)
    }

    pub fn project(&self, p: &Vector3<f64>) -> Projection {
        let (right, down, fwd) = self.basis();
        let d = p - self.position;
        let depth = d.dot(&fwd);
        if depth <= NEAR_PLANE {
            return Projection { pixel: None, depth, in_frustum: false };
        }
        let x = self.principal[0] + self.focal * d.dot(&right) / depth;
        let y = self.principal[1] + self.focal * d.dot(&down) / depth;
        let in_frustum = x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64;
        Projection { pixel: Some([x, y]), depth, in_frustum }
    }
}

pub fn project_point(pose: &CameraPose, p: &Vector3<f64>) -> Projection {
    pose.project(p)
}

fn segment_hits_sphere(a: &Vector3<f64>, b: &Vector3<f64>, center: &Vector3<f64>, radius: f64) -> bool {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let s = if len2 > 0.0 { ((center - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (a + ab * s - center).norm() < radius
}

/// In frustum and not blocked by any of `occluders` on the camera-to-point segment.
pub fn visibility_test<'a>(pose: &CameraPose, p: &Vector3<f64>, occluders: impl IntoIterator<Item = &'a RigidObject>) -> bool {
    pose.project(p).in_frustum && !occluders.into_iter().any(|o| segment_hits_sphere(&pose.position, p, &o.center, o.radius))
}

/// A smooth camera path: smoothstep between two endpoints plus sinusoidal
/// noise on the position, looking at a noisy point on the ground plane.
#[derive(Clone, Debug, PartialEq)]
pub struct CameraRig {
    pub start: Vector3<f64>,
    pub end: Vector3<f64>,
    pub position_noise: [Sinusoid; 3],
    pub look_center: Vector3<f64>,
    pub look_noise: [Sinusoid; 2],
    pub frames: usize,
    pub focal: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraRig {
    pub fn sample(cfg: &SceneConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let endpoint = |rng: &mut ChaCha8Rng| {
            let r = rng.gen_range(cfg.shell_radius[0]..=cfg.shell_radius[1]);
            let elev = rng.gen_range(cfg.camera_elevation[0]..=cfg.camera_elevation[1]);
            let az = rng.gen::<f64>() * TAU;
            Vector3::new(r * elev.cos() * az.cos(), r * elev.cos() * az.sin(), r * elev.sin())
        };
        let start = endpoint(&mut rng);
        let end = endpoint(&mut rng);
        let mut noise = |amp: f64, freq: f64| Sinusoid {
            amplitude: amp,
            frequency: rng.gen::<f64>() * freq,
            phase: rng.gen::<f64>() * TAU,
        };
        let (ca, cf) = (cfg.camera_noise_amplitude, cfg.camera_noise_frequency);
        let position_noise = [noise(ca, cf), noise(ca, cf), noise(ca, cf)];
        let (la, lf) = (cfg.look_at_noise_amplitude, cfg.look_at_noise_frequency);
        let look_noise = [noise(la, lf), noise(la, lf)];
        Self { start, end, position_noise, look_center: Vector3::zeros(), look_noise, ..Self::fixed(Vector3::zeros(), Vector3::zeros(), cfg) }
    }

    /// A camera that never moves.
    pub fn fixed(position: Vector3<f64>, look_at: Vector3<f64>, cfg: &SceneConfig) -> Self {
        Self {
            start: position,
            end: position,
            position_noise: [Sinusoid::zero(); 3],
            look_center: look_at,
            look_noise: [Sinusoid::zero(); 2],
            frames: cfg.frames,
            focal: cfg.focal,
            width: cfg.width,
            height: cfg.height,
        }
    }

    pub fn pose(&self, t: usize) -> CameraPose {
        let s = if self.frames > 1 { t as f64 / (self.frames - 1) as f64 } else { 0.0 };
        let w = s * s * (3.0 - 2.0 * s);
        let n = |s: &Sinusoid| s.at(t, self.frames);
        let noise = Vector3::new(n(&self.position_noise[0]), n(&self.position_noise[1]), n(&self.position_noise[2]));
        let position = self.start + (self.end - self.start) * w + noise;
        let look_at = self.look_center + Vector3::new(n(&self.look_noise[0]), n(&self.look_noise[1]), 0.0);
        CameraPose {
            position,
            look_at,
            up: Vector3::z(),
            focal: self.focal,
            principal: [self.width as f64 / 2.0, self.height as f64 / 2.0],
            width: self.width,
            height: self.height,
        }
    }
}

pub fn camera_pose(t: usize, cfg: &SceneConfig, seed: u64) -> CameraPose {
    CameraRig::sample(cfg, seed).pose(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forward_pose() -> CameraPose {
        CameraPose {
            position: Vector3::zeros(),
            look_at: Vector3::z(),
            up: -Vector3::y(),
            focal: 128.0,
            principal: [128.0, 128.0],
            width: 256,
            height: 256,
        }
    }

    fn ball(center: Vector3<f64>, radius: f64) -> RigidObject {
        RigidObject::fixed(center, radius, vec![])
    }

    #[test]
    fn pinhole_arithmetic() {
        let pose = forward_pose();
        let p = pose.project(&Vector3::new(0.0, 0.0, 5.0));
        assert_eq!((p.pixel, p.depth, p.in_frustum), (Some([128.0, 128.0]), 5.0, true));
        let p = pose.project(&Vector3::new(1.0, 0.0, 5.0));
        assert!((p.pixel.unwrap()[0] - 153.6).abs() < 1e-12);
        let p = pose.project(&Vector3::new(0.0, 1.0, 5.0));
        assert!(p.pixel.unwrap()[1] > 128.0);
        let p = pose.project(&Vector3::new(0.0, 0.0, -2.0));
        assert!(!p.in_frustum && p.pixel.is_none());
        assert!(!pose.project(&Vector3::new(100.0, 0.0, 5.0)).in_frustum);
    }

    #[test]
    fn occluder_segment_test() {
        let pose = forward_pose();
        let p = Vector3::new(0.0, 0.0, 6.0);
        assert!(visibility_test(&pose, &p, []));
        let mid = [ball(Vector3::new(0.0, 0.0, 3.0), 1.0)];
        assert!(!visibility_test(&pose, &p, &mid));
        let behind = [ball(Vector3::new(0.0, 0.0, 8.0), 1.0)];
        assert!(visibility_test(&pose, &p, &behind));
        let aside = [ball(Vector3::new(2.0, 0.0, 3.0), 1.0)];
        assert!(visibility_test(&pose, &p, &aside));
    }

    #[test]
    fn rig_endpoints_and_segment() {
        let cfg = SceneConfig { camera_noise_amplitude: 0.0, look_at_noise_amplitude: 0.0, frames: 50, ..SceneConfig::default() };
        let rig = CameraRig::sample(&cfg, 7);
        assert_eq!(rig.pose(0).position, rig.start);
        assert!((rig.pose(49).position - rig.end).norm() < 1e-12);
        let r = rig.start.norm();
        assert!((10.0..=14.0).contains(&r) && rig.start.z > 0.0);
        let dir = (rig.end - rig.start).normalize();
        for t in 0..50 {
            let off = rig.pose(t).position - rig.start;
            assert!(off.cross(&dir).norm() < 1e-9);
            assert!(off.dot(&dir) >= -1e-12 && off.norm() <= (rig.end - rig.start).norm() + 1e-9);
            assert_eq!(rig.pose(t).look_at, Vector3::zeros());
        }
        assert_eq!(camera_pose(13, &cfg, 7), rig.pose(13));
    }

    #[test]
    fn fixed_rig_is_constant_and_noise_is_applied() {
        let cfg = SceneConfig { frames: 10, ..SceneConfig::default() };
        let rig = CameraRig::fixed(Vector3::new(0.0, -10.0, 2.0), Vector3::new(0.0, 0.0, 2.0), &cfg);
        assert!((0..10).all(|t| rig.pose(t) == rig.pose(0)));
        let noisy = CameraRig::sample(&cfg, 1);
        let expected = noisy.start + Vector3::new(
            noisy.position_noise[0].at(0, 10),
            noisy.position_noise[1].at(0, 10),
            noisy.position_noise[2].at(0, 10),
        );
        assert_eq!(noisy.pose(0).position, expected);
        assert_eq!(noisy.pose(4).look_at.z, 0.0);
    }
}
