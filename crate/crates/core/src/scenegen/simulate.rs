use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::camera::{visibility_test, CameraRig};
use super::config::SceneConfig;
use super::dynamics::{bump, step_dynamics, unit, RigidObject};
use crate::error::Result;
use crate::tracks::{Query, Track, TrackSet, VideoDims};

/// Camera path plus initial object state.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub rig: CameraRig,
    pub objects: Vec<RigidObject>,
}

impl Scene {
    pub fn sample(cfg: &SceneConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let (lo, hi) = (Vector3::from(cfg.world_min), Vector3::from(cfg.world_max));
        let n_static = rng.gen_range(cfg.static_objects[0]..=cfg.static_objects[1]);
        let n_dynamic = rng.gen_range(cfg.dynamic_objects[0]..=cfg.dynamic_objects[1]);
        let mut objects = Vec::with_capacity(n_static + n_dynamic);
        for i in 0..n_static + n_dynamic {
            let radius = rng.gen_range(cfg.occluder_radius[0]..=cfg.occluder_radius[1]);
            let n_points = rng.gen_range(cfg.points_per_object[0]..=cfg.points_per_object[1]);
            let offsets = (0..n_points).map(|_| unit(&mut rng) * radius).collect();
            let mut center = lo.zip_map(&hi, |a, b| rng.gen_range(a..=b));
            if i < n_static {
                // resting on the floor
                center.z = (lo.z + radius).min(hi.z);
                objects.push(RigidObject::fixed(center, radius, offsets));
            } else {
                let mut obj = RigidObject::moving(center, Vector3::zeros(), radius, offsets);
                bump(&mut obj, cfg, &mut rng);
                objects.push(obj);
            }
        }
        Ok(Self { rig: CameraRig::sample(cfg, cfg.seed), objects })
    }

    /// Runs the scene for `cfg.frames` frames and records every object point.
    /// Points behind the camera hold their last projected position; tracks that
    /// are never visible are dropped. Queries sit at each track's first visible frame.
    pub fn run(mut self, cfg: &SceneConfig) -> Result<TrackSet> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(2);
        let n_points: usize = self.objects.iter().map(|o| o.offsets.len()).sum();
        let mut positions: Vec<Vec<Option<[f64; 2]>>> = vec![Vec::with_capacity(cfg.frames); n_points];
        let mut visibility: Vec<Vec<bool>> = vec![Vec::with_capacity(cfg.frames); n_points];
        for t in 0..cfg.frames {
            if t > 0 {
                step_dynamics(&mut self.objects, cfg.frame_dt, cfg, &mut rng);
            }
            let pose = self.rig.pose(t);
            let mut k = 0;
            for (i, obj) in self.objects.iter().enumerate() {
                for p in obj.points() {
                    let others = self.objects.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, o)| o);
                    positions[k].push(pose.project(&p).pixel);
                    visibility[k].push(visibility_test(&pose, &p, others));
                    k += 1;
                }
            }
        }
        let tracks = positions
            .into_iter()
            .zip(visibility)
            .enumerate()
            .filter_map(|(id, (pos, vis))| {
                let q = vis.iter().position(|&v| v)?;
                let mut last = pos.iter().flatten().next().copied()?;
                let positions: Vec<[f64; 2]> = pos
                    .into_iter()
                    .map(|p| {
                        last = p.unwrap_or(last);
                        last
                    })
                    .collect();
                let [x, y] = positions[q];
                Some(Track { id: id as u64, query: Query { t: q, x, y }, positions, visibility: vis })
            })
            .collect();
        TrackSet::new(VideoDims { frames: cfg.frames, height: cfg.height, width: cfg.width }, tracks)
    }
}

pub fn simulate_scene(cfg: &SceneConfig) -> Result<TrackSet> {
    Scene::sample(cfg)?.run(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{delta_avg, find_eligible_reappearances, survival_rate, EvalConfig};

    fn small() -> SceneConfig {
        SceneConfig { frames: 96, seed: 5, ..SceneConfig::default() }
    }

    #[test]
    fn deterministic_and_sound() {
        let a = simulate_scene(&small()).unwrap();
        let b = simulate_scene(&small()).unwrap();
        assert_eq!(a.to_json_string().unwrap(), b.to_json_string().unwrap());
        assert!(!a.tracks.is_empty());
        for tr in &a.tracks {
            assert!(tr.visibility[tr.query.t]);
            assert!(tr.visibility[..tr.query.t].iter().all(|v| !v));
            for (p, &v) in tr.positions.iter().zip(&tr.visibility) {
                assert!(p[0].is_finite() && p[1].is_finite());
                assert!(!v || a.video.contains(*p));
            }
        }
        let c = simulate_scene(&SceneConfig { seed: 6, ..small() }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn static_scene_is_constant() {
        let cfg = SceneConfig { frames: 30, ..SceneConfig::default() };
        let offsets = vec![Vector3::new(0.5, 0.0, 0.0), Vector3::new(0.0, 0.0, 0.5), Vector3::new(-0.3, -0.4, 0.0)];
        let scene = Scene {
            rig: CameraRig::fixed(Vector3::new(0.0, -10.0, 2.0), Vector3::new(0.0, 0.0, 1.0), &cfg),
            objects: vec![RigidObject::fixed(Vector3::new(0.0, 0.0, 1.0), 0.5, offsets)],
        };
        let ts = scene.run(&cfg).unwrap();
        assert_eq!(ts.tracks.len(), 3);
        for tr in &ts.tracks {
            assert!(tr.visibility.iter().all(|&v| v));
            assert!(tr.positions.iter().all(|p| *p == tr.positions[0]));
        }
        let eval = EvalConfig::default();
        assert_eq!(survival_rate(&ts, &ts, &eval).unwrap(), 1.0);
        assert_eq!(delta_avg(&ts, &ts, &eval).unwrap(), 1.0);
    }

    #[test]
    fn object_leaving_the_frustum_reappears() {
        let cfg = SceneConfig {
            frames: 240,
            damping: 0.0,
            min_speed: 0.0,
            world_min: [-30.0, -5.0, 0.0],
            world_max: [30.0, 5.0, 4.0],
            ..SceneConfig::default()
        };
        let scene = Scene {
            rig: CameraRig::fixed(Vector3::new(0.0, -10.0, 2.0), Vector3::new(0.0, 0.0, 2.0), &cfg),
            objects: vec![RigidObject::moving(Vector3::new(0.0, 0.0, 2.0), Vector3::new(12.0, 0.0, 0.0), 0.3, vec![Vector3::new(0.0, -0.3, 0.0)])],
        };
        let ts = scene.run(&cfg).unwrap();
        let tr = &ts.tracks[0];
        assert!(tr.visibility.iter().any(|v| !v));
        let events = find_eligible_reappearances(tr.id, &tr.visibility, tr.query.t);
        assert!(events.iter().any(|e| e.eligible && e.duration >= 16), "{events:?}");
    }
}
