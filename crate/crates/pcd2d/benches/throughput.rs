//! Throughput of the data-parallel inner loops. Bench IDs carry the
//! execution mode, so results from a default (`parallel`) run and a
//! `--no-default-features` (`sequential`) run land side by side in
//! `target/criterion` for comparison:
//!
//! ```bash
//! cargo bench -p pcd2d
//! cargo bench -p pcd2d --no-default-features
//! ```

use criterion::{criterion_group, criterion_main, Criterion};
use pcd2d::gf::Field;
use pcd2d::library::generate_library;
use pcd2d::mds::MdsCode;
use pcd2d::scheme::{place, run_round, DeliveryMode, SchemeParams};

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

fn bench_place(c: &mut Criterion) {
    let params = SchemeParams::new(6, 2, 6, 2).unwrap();
    let field = Field::for_block_length(params.coded_subfiles).unwrap();
    let code = MdsCode::new(params.subfiles, params.coded_subfiles, field).unwrap();
    let library = generate_library(1, 6, params.subfiles * 256, field);
    c.bench_function(&format!("place/{}/K6_S2_t2_B12288", mode()), |b| {
        b.iter(|| place(&params, &library, &code).unwrap())
    });
}

fn bench_round(c: &mut Criterion) {
    let params = SchemeParams::new(6, 2, 6, 2).unwrap();
    let field = Field::for_block_length(params.coded_subfiles).unwrap();
    let library = generate_library(1, 6, params.subfiles * 64, field);
    let nonselfish = [1, 2, 3, 6];
    let demands: Vec<usize> = (1..=6).collect();
    c.bench_function(&format!("run_round/{}/K6_S2_t2_B3072", mode()), |b| {
        b.iter(|| {
            run_round(
                &params,
                &library,
                &nonselfish,
                &demands,
                DeliveryMode::Independent,
                None,
            )
            .unwrap()
        })
    });
}

fn bench_mds_decode(c: &mut Criterion) {
    let field = Field::for_block_length(60).unwrap();
    let code = MdsCode::new(48, 60, field).unwrap();
    let file = generate_library(2, 1, 48 * 256, field).pop().unwrap();
    let info: Vec<Vec<_>> = file.chunks_exact(256).map(|c| c.to_vec()).collect();
    let coded = code.encode(&info).unwrap();
    // a non-systematic selection: every parity column plus trailing data
    let shares: Vec<(usize, Vec<_>)> = (13..=60).map(|p| (p, coded[p - 1].clone())).collect();
    c.bench_function(&format!("mds_decode/{}/60_48_B12288", mode()), |b| {
        b.iter(|| code.decode(&shares).unwrap())
    });
}

criterion_group!(benches, bench_place, bench_round, bench_mds_decode);
criterion_main!(benches);
