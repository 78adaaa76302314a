use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use osdt::wallcross::{wallcross_epsilon, EpsilonTable};
use osdt::{calibrate_signs, Engine, RatFunc, SelfDualQuiver, SlopeFunction};
use osdt_bench::{kronecker, point};

fn engine(c: &mut Criterion) {
    let mut g = c.benchmark_group("engine");
    g.sample_size(10);
    for bound in [4u32, 6, 8] {
        let (q, s) = point(1);
        g.bench_with_input(BenchmarkId::new("point", bound), &bound, |b, &n| {
            b.iter(|| Engine::new(&q, s.clone(), n).unwrap())
        });
    }
    for bound in [3u32, 4, 5] {
        let (q, s) = kronecker(1, 1, 1);
        g.bench_with_input(BenchmarkId::new("kronecker", bound), &bound, |b, &n| {
            b.iter(|| Engine::new(&q, s.clone(), n).unwrap())
        });
    }
    g.finish();
}

fn table(c: &mut Criterion) {
    let (q, s) = kronecker(1, 1, -1);
    let e = Engine::new(&q, s, 5).unwrap();
    c.bench_function("table/kronecker/5", |b| b.iter(|| e.table().unwrap().to_json()));
}

fn wallcross(c: &mut Criterion) {
    let (q, plus) = kronecker(1, 1, 1);
    let minus = SlopeFunction::from_ints(&q, &[-1, 1]).unwrap();
    let forms = q.forms().unwrap();
    let mut g = c.benchmark_group("wallcross");
    g.sample_size(10);
    for bound in [3u32, 4, 5] {
        let t = EpsilonTable::from_engine(&Engine::new(&q, plus.clone(), bound).unwrap());
        g.bench_with_input(BenchmarkId::new("kronecker", bound), &t, |b, t| {
            b.iter(|| wallcross_epsilon(&forms, t, &plus, &minus).unwrap())
        });
    }
    g.finish();
}

fn calibration(c: &mut Criterion) {
    let mut g = c.benchmark_group("calibration");
    g.sample_size(10);
    g.bench_function("kronecker/4", |b| {
        b.iter(|| calibrate_signs(&SelfDualQuiver::a1_tilde(1, 1, -1), 4).unwrap())
    });
    g.finish();
}

fn arithmetic(c: &mut Criterion) {
    let x = RatFunc::q_pow(3) / (RatFunc::q_pow(4) - RatFunc::one());
    let y = RatFunc::q_pow(1) / (RatFunc::q_pow(2) + RatFunc::one());
    c.bench_function("ratfunc/mul_add", |b| b.iter(|| black_box(&x) * black_box(&y) + black_box(&x)));
}

criterion_group!(benches, engine, table, wallcross, calibration, arithmetic);
criterion_main!(benches);
