use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator settings. Count ranges are inclusive `[lo, hi]`; lengths are in
/// world units, times in seconds, angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub seed: u64,
    pub frames: usize,
    pub height: usize,
    pub width: usize,
    /// Focal length in pixels.
    pub focal: f64,
    /// Simulated time between frames.
    pub frame_dt: f64,
    pub static_objects: [usize; 2],
    pub dynamic_objects: [usize; 2],
    pub points_per_object: [usize; 2],
    pub world_min: [f64; 3],
    pub world_max: [f64; 3],
    pub occluder_radius: [f64; 2],
    /// Camera endpoints are drawn from this shell around the origin.
    pub shell_radius: [f64; 2],
    /// Elevation of the camera endpoints above the ground plane.
    pub camera_elevation: [f64; 2],
    pub camera_noise_amplitude: f64,
    /// Upper bound on the noise frequency, cycles per video.
    pub camera_noise_frequency: f64,
    pub look_at_noise_amplitude: f64,
    pub look_at_noise_frequency: f64,
    /// Speed below which a dynamic object is pushed again.
    pub min_speed: f64,
    pub bump_speed: [f64; 2],
    pub max_angular_speed: f64,
    /// Weight of the pull toward the origin in a push direction, in `[0, 1]`.
    pub origin_bias: f64,
    /// Exponential velocity decay rate per second.
    pub damping: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            frames: 1024,
            height: 256,
            width: 256,
            focal: 128.0,
            frame_dt: 1.0 / 24.0,
            static_objects: [10, 20],
            dynamic_objects: [1, 10],
            points_per_object: [2, 4],
            world_min: [-6.0, -6.0, 0.0],
            world_max: [6.0, 6.0, 4.0],
            occluder_radius: [0.3, 1.0],
            shell_radius: [10.0, 14.0],
            camera_elevation: [0.25, 1.0],
            camera_noise_amplitude: 0.5,
            camera_noise_frequency: 2.0,
            look_at_noise_amplitude: 1.0,
            look_at_noise_frequency: 2.0,
            min_speed: 0.5,
            bump_speed: [1.0, 3.0],
            max_angular_speed: 1.0,
            origin_bias: 0.3,
            damping: 0.3,
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(msg()))
    }
}

fn range_ok(r: [f64; 2]) -> bool {
    r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]
}

impl SceneConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.frames >= 1 && self.height >= 1 && self.width >= 1, || "frames, height and width must be positive".into())?;
        check(self.focal.is_finite() && self.focal > 0.0, || format!("focal must be positive, got {}", self.focal))?;
        check(self.frame_dt.is_finite() && self.frame_dt >= 0.0, || "frame_dt must be non-negative".into())?;
        for (name, r) in [("static_objects", self.static_objects), ("dynamic_objects", self.dynamic_objects), ("points_per_object", self.points_per_object)] {
            check(r[0] <= r[1], || format!("{name} range {r:?} is empty"))?;
        }
        check(self.points_per_object[0] >= 1, || "points_per_object must start at 1 or more".into())?;
        for k in 0..3 {
            check(self.world_min[k].is_finite() && self.world_max[k].is_finite() && self.world_min[k] < self.world_max[k], || {
                format!("world bounds {:?}..{:?} are empty", self.world_min, self.world_max)
            })?;
        }
        check(range_ok(self.occluder_radius) && self.occluder_radius[0] > 0.0, || format!("bad occluder_radius {:?}", self.occluder_radius))?;
        check(range_ok(self.shell_radius) && self.shell_radius[0] > 0.0 && self.shell_radius[0] < self.shell_radius[1], || {
            format!("shell_radius needs 0 < r_min < r_max, got {:?}", self.shell_radius)
        })?;
        let e = self.camera_elevation;
        check(range_ok(e) && e[0] >= 0.0 && e[1] < std::f64::consts::FRAC_PI_2, || format!("camera_elevation must lie in [0, pi/2), got {e:?}"))?;
        let nonneg = [
            self.camera_noise_amplitude,
            self.camera_noise_frequency,
            self.look_at_noise_amplitude,
            self.look_at_noise_frequency,
            self.min_speed,
            self.max_angular_speed,
            self.damping,
        ];
        check(nonneg.iter().all(|v| v.is_finite() && *v >= 0.0), || "noise, speed and damping settings must be non-negative".into())?;
        check(range_ok(self.bump_speed) && self.bump_speed[0] >= self.min_speed, || {
            format!("bump_speed {:?} must start at or above min_speed {}", self.bump_speed, self.min_speed)
        })?;
        check((0.0..=1.0).contains(&self.origin_bias), || format!("origin_bias must be in [0, 1], got {}", self.origin_bias))?;
        Ok(())
    }
}
