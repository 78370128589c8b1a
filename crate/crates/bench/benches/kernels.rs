//! Criterion benchmarks of the hot kernels: gate application on a
//! sector state, a dense gate matrix build, one Trotter step, an echo
//! Floquet round, and the noise overlap quadrature.

use criterion::{criterion_group, criterion_main, Criterion};
use fqp_bench::dense_state;
use fqp_core::echo::{DisorderPattern, FloquetSim, Propagator, Strategy};
use fqp_core::fock::FockBasis;
use fqp_core::gates::GateSpec;
use fqp_core::hamiltonian::SecondQuantizedHamiltonian;
use fqp_core::noise::{overlap_factor, TrapParams};
use fqp_core::trotter::trotter_step;
use std::hint::black_box;

fn bench_gates(c: &mut Criterion) {
    let state = dense_state(16, 8);
    let tunneling = GateSpec::Tunneling {
        i: 3,
        j: 11,
        theta: [0.7, 0.3, 0.2],
    };
    c.bench_function("tunneling_gate_L16_N8", |b| {
        b.iter(|| {
            let mut s = state.clone();
            tunneling.apply(&mut s).unwrap();
            black_box(s.amplitudes()[0])
        })
    });
    let pair = GateSpec::PairTunneling {
        i: 1,
        j: 5,
        k: 9,
        l: 13,
        theta: [0.4, 0.1],
    };
    c.bench_function("pair_tunneling_gate_L16_N8", |b| {
        b.iter(|| {
            let mut s = state.clone();
            pair.apply(&mut s).unwrap();
            black_box(s.amplitudes()[0])
        })
    });
}

fn bench_dense_unitary(c: &mut Criterion) {
    let basis = FockBasis::full(8).unwrap();
    let gate = GateSpec::Tunneling {
        i: 2,
        j: 6,
        theta: [0.7, 0.3, 0.2],
    };
    c.bench_function("dense_unitary_L8", |b| {
        b.iter(|| black_box(gate.dense_unitary(&basis).unwrap()[(0, 0)]))
    });
}

fn bench_trotter(c: &mut Criterion) {
    let (h, _) = SecondQuantizedHamiltonian::parse(
        "L 6\n1 0 1 0.7 0.3\n1 1 2 -0.5 0.1\n1 2 3 0.4 0\n1 3 4 0.2 0.2\n1 4 5 -0.6 0\n2 0 1 2 3 0.35 -0.15\n2 0 2 1 2 0.25 0.1\n2 0 1 1 0 0.6 0\n",
    )
    .unwrap();
    let state = dense_state(6, 3);
    let step = trotter_step(&h, 0.05).unwrap();
    c.bench_function("trotter_step_apply_L6_N3", |b| {
        b.iter(|| {
            let mut s = state.clone();
            step.apply(&mut s).unwrap();
            black_box(s.amplitudes()[0])
        })
    });
}

fn bench_echo(c: &mut Criterion) {
    let l = 100;
    let disorder = DisorderPattern::gaussian(l, 0.005, 3).unwrap();
    c.bench_function("floquet_round_L100_N20", |b| {
        let occupied: Vec<usize> = (0..20).map(|k| 5 * k).collect();
        let w = Propagator::occupied_columns(l, &occupied).unwrap();
        let mut sim =
            FloquetSim::new(1.0, 0.13, Strategy::CyclicShift, disorder.clone(), w).unwrap();
        b.iter(|| {
            sim.step();
            black_box(sim.round())
        })
    });
}

fn bench_noise(c: &mut Criterion) {
    let trap = TrapParams::default_lithium();
    c.bench_function("overlap_factor_quadrature", |b| {
        b.iter(|| black_box(overlap_factor(8e-9, 2e-8, &trap).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_gates,
    bench_dense_unitary,
    bench_trotter,
    bench_echo,
    bench_noise
);
criterion_main!(benches);
