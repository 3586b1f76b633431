use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use oscbath::models::log_grid;
use oscbath::thermo::{self, free_energy};
use oscbath::{BathModel, Execution, OscillatorParams, ThermoOptions};

fn modes() -> Vec<Execution> {
    let mut m = vec![Execution::Sequential];
    if Execution::Parallel.is_parallel() {
        m.push(Execution::Parallel);
    }
    m
}

fn temperature_sweep(c: &mut Criterion) {
    let params = OscillatorParams::default();
    let thetas = log_grid(1e-3, 10.0, 64);
    let opts = ThermoOptions {
        cross_check: false,
        ..ThermoOptions::default()
    };
    let mut group = c.benchmark_group("sweep_64");
    group.sample_size(20);
    for bath in [BathModel::ohmic(0.1).unwrap(), BathModel::power_law(0.1, 0.5).unwrap()] {
        for exec in modes() {
            group.bench_with_input(BenchmarkId::new(bath.name(), format!("{exec:?}")), &exec, |b, &exec| {
                b.iter(|| thermo::sweep(&bath, &params, black_box(&thetas), &opts, exec))
            });
        }
    }
    group.finish();
}

// One hard point: tight tolerance and the numeric weight, so the panel
// batches inside the quadrature are large.
fn single_point(c: &mut Criterion) {
    let params = OscillatorParams::default();
    let bath = BathModel::power_law(1.0, -0.5).unwrap();
    let mut group = c.benchmark_group("single_point_numeric");
    group.sample_size(20);
    for exec in modes() {
        let mut opts = ThermoOptions {
            cross_check: false,
            path: oscbath::WeightPath::NumericDerivative,
            ..ThermoOptions::default()
        };
        opts.quad.rel_tol = 1e-12;
        opts.quad.exec = exec;
        group.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| free_energy(&bath, &params, black_box(0.01), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, temperature_sweep, single_point);
criterion_main!(benches);
