//! Exhaustive small-instance protocol verification: every selfish set, every
//! caching parameter, and every demand vector must decode for all users,
//! with the observed load matching the closed-form trade-off exactly.

use num::BigRational;
use pcd2d::combinat::subsets_of;
use pcd2d::gf::{Field, Symbol};
use pcd2d::library::generate_library;
use pcd2d::mds::MdsCode;
use pcd2d::rational::ratio;
use pcd2d::scheme::{
    decode_pool, deliver, place, run_round, DeliveryMode, SchemeParams, Transmission,
    TransmissionLog,
};
use pcd2d::tradeoff::{corner_point, reduced_corner_point};
use rayon::prelude::*;

fn demand_vectors(users: usize, files: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(files.pow(users as u32));
    let mut d = vec![1usize; users];
    loop {
        out.push(d.clone());
        let mut i = 0;
        loop {
            if i == users {
                return out;
            }
            if d[i] < files {
                d[i] += 1;
                break;
            }
            d[i] = 1;
            i += 1;
        }
    }
}

fn nonselfish_sets(users: usize, selfish: usize) -> Vec<Vec<usize>> {
    subsets_of(&(1..=users).collect::<Vec<_>>(), users - selfish)
}

/// One (K, S, t, nonselfish set) configuration, checked over every demand
/// vector with N = K.
fn check_config(users: usize, selfish: usize, t: usize, nonselfish: &[usize]) {
    let ctx = format!("K={users} S={selfish} t={t} nonselfish={nonselfish:?}");
    let params = SchemeParams::new(users, selfish, users, t).unwrap();
    let field = Field::for_block_length(params.coded_subfiles).unwrap();
    let code = MdsCode::new(params.subfiles, params.coded_subfiles, field).unwrap();
    let library = generate_library(
        (users * 100 + selfish * 10 + t) as u64,
        users,
        params.subfiles,
        field,
    );
    let caches = place(&params, &library, &code).unwrap();
    // placement is blind to selfish identities by signature; it must also be
    // deterministic, so the caches every configuration sees are identical
    assert_eq!(caches, place(&params, &library, &code).unwrap(), "{ctx}");

    let expected_count = params.total_transmissions();
    let expected_load = corner_point(users, selfish, users, t).unwrap().load;

    // the decode position set of each user is demand-independent; solve once
    let mut plans: Vec<Option<(Vec<usize>, pcd2d::mds::DecodePlan)>> = vec![None; users];

    for (round, demands) in demand_vectors(users, users).into_iter().enumerate() {
        let per_sender: Vec<Vec<Transmission>> = nonselfish
            .iter()
            .map(|&k| deliver(&params, &caches[k - 1], &demands).unwrap())
            .collect();
        if round == 0 {
            // transmissions computed in isolation equal a fresh standalone run
            for (i, &k) in nonselfish.iter().enumerate() {
                assert_eq!(
                    per_sender[i],
                    deliver(&params, &caches[k - 1], &demands).unwrap(),
                    "{ctx}"
                );
            }
            // and the orchestrated round agrees end to end
            let outcome = run_round(
                &params,
                &library,
                nonselfish,
                &demands,
                DeliveryMode::Independent,
                None,
            )
            .unwrap();
            assert_eq!(outcome.transmission_count, expected_count, "{ctx}");
            assert_eq!(outcome.observed_load, expected_load, "{ctx}");
        }
        let log = TransmissionLog::new(per_sender.into_iter().flatten().collect()).unwrap();
        assert_eq!(log.len(), expected_count, "{ctx}");
        assert_eq!(
            ratio(log.len() as u64, params.subfiles as u64),
            expected_load,
            "{ctx}"
        );

        for k in 1..=users {
            let mut pool =
                decode_pool(&params, &caches[k - 1], &log, nonselfish, &demands).unwrap();
            pool.sort_unstable_by_key(|e| e.0);
            pool.truncate(params.subfiles);
            let positions: Vec<usize> = pool.iter().map(|e| e.0).collect();
            if plans[k - 1].is_none() {
                let plan = code.decode_plan(&positions).unwrap();
                plans[k - 1] = Some((positions.clone(), plan));
            }
            let (expected_positions, plan) = plans[k - 1].as_ref().unwrap();
            assert_eq!(&positions, expected_positions, "{ctx} user={k}");
            let payloads: Vec<&[Symbol]> = pool.iter().map(|e| e.1.as_slice()).collect();
            let decoded = plan.apply(&payloads).unwrap().concat();
            assert_eq!(
                decoded,
                library[demands[k - 1] - 1],
                "{ctx} user={k} demands={demands:?}"
            );
        }
    }
}

fn all_configs(k_range: std::ops::RangeInclusive<usize>) -> Vec<(usize, usize, usize, Vec<usize>)> {
    let mut configs = Vec::new();
    for users in k_range {
        for selfish in 0..users {
            for t in 0..users {
                for set in nonselfish_sets(users, selfish) {
                    configs.push((users, selfish, t, set));
                }
            }
        }
    }
    configs
}

#[test]
fn universal_decodability_k_up_to_4() {
    all_configs(2..=4)
        .into_par_iter()
        .for_each(|(k, s, t, set)| check_config(k, s, t, &set));
}

#[test]
fn universal_decodability_k5() {
    all_configs(5..=5)
        .into_par_iter()
        .for_each(|(k, s, t, set)| check_config(k, s, t, &set));
}

/// Coordinated (reduced) delivery: every round still decodes for all users
/// and the observed load equals the reduced corner point exactly, including
/// the t = 0 special rule.
#[test]
fn coordinated_rounds_match_reduced_load() {
    all_configs(2..=4)
        .into_par_iter()
        .for_each(|(users, selfish, t, set)| {
            let ctx = format!("K={users} S={selfish} t={t} nonselfish={set:?}");
            let params = SchemeParams::new(users, selfish, users, t).unwrap();
            let field = Field::for_block_length(params.coded_subfiles).unwrap();
            let library = generate_library(17, users, params.subfiles, field);
            let expected: BigRational =
                reduced_corner_point(users, selfish, users, t).unwrap().load;
            for demands in demand_vectors(users, users) {
                let outcome = run_round(
                    &params,
                    &library,
                    &set,
                    &demands,
                    DeliveryMode::Coordinated,
                    None,
                )
                .unwrap_or_else(|e| panic!("{ctx} demands={demands:?}: {e}"));
                assert_eq!(outcome.observed_load, expected, "{ctx} demands={demands:?}");
            }
        });
}
