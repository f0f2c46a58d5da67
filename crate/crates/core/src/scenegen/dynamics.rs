use nalgebra::{Rotation3, Vector3};
use rand::Rng;
use rand_distr::{Distribution, UnitSphere};

use super::config::SceneConfig;

/// A sphere-shaped body carrying tracked points at fixed body-frame offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidObject {
    pub center: Vector3<f64>,
    pub velocity: Vector3<f64>,
    /// Axis times rate, radians per second.
    pub angular_velocity: Vector3<f64>,
    pub orientation: Rotation3<f64>,
    pub offsets: Vec<Vector3<f64>>,
    /// Occluder radius.
    pub radius: f64,
    pub dynamic: bool,
}

impl RigidObject {
    pub fn fixed(center: Vector3<f64>, radius: f64, offsets: Vec<Vector3<f64>>) -> Self {
        Self {
            center,
            velocity: Vector3::zeros(),
            angular_velocity: Vector3::zeros(),
            orientation: Rotation3::identity(),
            offsets,
            radius,
            dynamic: false,
        }
    }

    pub fn moving(center: Vector3<f64>, velocity: Vector3<f64>, radius: f64, offsets: Vec<Vector3<f64>>) -> Self {
        Self { velocity, dynamic: true, ..Self::fixed(center, radius, offsets) }
    }

    pub fn points(&self) -> impl Iterator<Item = Vector3<f64>> + '_ {
        self.offsets.iter().map(|o| self.center + self.orientation * o)
    }
}

pub(crate) fn unit(rng: &mut impl Rng) -> Vector3<f64> {
    Vector3::from(UnitSphere.sample(rng))
}

/// Fresh push: speed from `bump_speed`, direction mixing the pull toward the
/// origin with a random direction by `origin_bias`.
pub(crate) fn bump(obj: &mut RigidObject, cfg: &SceneConfig, rng: &mut impl Rng) {
    let speed = rng.gen_range(cfg.bump_speed[0]..=cfg.bump_speed[1]);
    let random = unit(rng);
    let toward = (-obj.center).try_normalize(1e-12).unwrap_or_else(Vector3::zeros);
    let beta = cfg.origin_bias;
    let dir = (toward * beta + random * (1.0 - beta)).try_normalize(1e-12).unwrap_or(random);
    obj.velocity = dir * speed;
    obj.angular_velocity = unit(rng) * (rng.gen::<f64>() * cfg.max_angular_speed);
}

fn reflect(obj: &mut RigidObject, lo: &[f64; 3], hi: &[f64; 3]) {
    for k in 0..3 {
        if obj.center[k] > hi[k] {
            obj.center[k] = 2.0 * hi[k] - obj.center[k];
            obj.velocity[k] = -obj.velocity[k].abs();
        } else if obj.center[k] < lo[k] {
            obj.center[k] = 2.0 * lo[k] - obj.center[k];
            obj.velocity[k] = obj.velocity[k].abs();
        }
        obj.center[k] = obj.center[k].clamp(lo[k], hi[k]);
    }
}

/// Advances dynamic objects by `dt`: integrate, reflect off the world bounds,
/// damp, then push any object slower than `min_speed`. Returns which objects
/// were pushed.
pub fn step_dynamics(objects: &mut [RigidObject], dt: f64, cfg: &SceneConfig, rng: &mut impl Rng) -> Vec<bool> {
    let mut bumped = vec![false; objects.len()];
    if dt == 0.0 {
        return bumped;
    }
    let decay = (-cfg.damping * dt).exp();
    for (obj, bumped) in objects.iter_mut().zip(&mut bumped) {
        if !obj.dynamic {
            continue;
        }
        obj.center += obj.velocity * dt;
        reflect(obj, &cfg.world_min, &cfg.world_max);
        obj.orientation = Rotation3::new(obj.angular_velocity * dt) * obj.orientation;
        obj.velocity *= decay;
        obj.angular_velocity *= decay;
        if obj.velocity.norm() < cfg.min_speed {
            bump(obj, cfg, rng);
            *bumped = true;
        }
    }
    bumped
}
