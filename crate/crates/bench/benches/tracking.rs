use criterion::{criterion_group, criterion_main, Criterion};
use tapscan::augment::{roll_frame, sample_roll_params, Frame, Resample, RollConfig};
use tapscan::metrics::{evaluate, EvalConfig, DEFAULT_D_MINS};
use tapscan::scenegen::{simulate_scene, SceneConfig};

fn metrics(c: &mut Criterion) {
    let gt = simulate_scene(&SceneConfig { seed: 1, ..SceneConfig::default() }).unwrap();
    let cfg = EvalConfig::default();
    c.bench_function("evaluate/1024_frames", |b| {
        b.iter(|| evaluate(&[("v".to_string(), &gt, &gt)], &DEFAULT_D_MINS, &cfg).unwrap())
    });
}

fn generator(c: &mut Criterion) {
    let mut group = c.benchmark_group("scenegen");
    group.sample_size(10);
    group.bench_function("simulate/1024_frames", |b| b.iter(|| simulate_scene(&SceneConfig::default()).unwrap()));
    group.finish();
}

fn roll(c: &mut Criterion) {
    let params = sample_roll_params(2, &RollConfig::default(), 256, 256, 64).unwrap();
    let frame = Frame::new(256, 256, 3, (0..256 * 256 * 3).map(|i| (i % 255) as f32).collect()).unwrap();
    c.bench_function("roll_frame/256x256x3", |b| b.iter(|| roll_frame(&params, 17, &frame, Resample::Nearest)));
}

criterion_group!(benches, metrics, generator, roll);
criterion_main!(benches);
