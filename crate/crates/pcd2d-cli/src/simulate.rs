//! End-to-end simulation: deterministic library generation, a round per
//! (transmitter set, demand vector) pair, per-user decode checks, and a
//! byte-reproducible report.

use std::fmt::Write as _;

use pcd2d::combinat::subsets_of;
use pcd2d::gf::Field;
use pcd2d::library::{generate_library, pad_to_multiple, stream_value};
use pcd2d::mds::MdsCode;
use pcd2d::rational::{decimal_string, ratio, rational_string};
use pcd2d::scheme::{place, DeliveryMode, SchemeParams};

use crate::config::{DemandSpec, FieldChoice, SelfishSpec, SimulateConfig};
use crate::driver::RoundDriver;
use crate::HarnessError;

const SIG_DIGITS: usize = 12;

/// Demand vectors drawn from the documented stream: entry `i` of sample `r`
/// is `1 + v(seed+1, r*K + i) mod N`.
pub fn random_demands(seed: u64, users: usize, files: usize, count: usize) -> Vec<Vec<usize>> {
    (0..count)
        .map(|r| {
            (0..users)
                .map(|i| {
                    1 + (stream_value(seed.wrapping_add(1), (r * users + i) as u64) % files as u64)
                        as usize
                })
                .collect()
        })
        .collect()
}

pub fn exhaustive_demands(users: usize, files: usize) -> Vec<Vec<usize>> {
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

fn set_string(set: &[usize]) -> String {
    let inner: Vec<String> = set.iter().map(|u| u.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn complement(users: usize, set: &[usize]) -> Vec<usize> {
    (1..=users).filter(|u| !set.contains(u)).collect()
}

#[derive(Debug)]
pub struct SimulateOutcome {
    pub report: String,
    pub rounds: usize,
}

pub fn cmd_simulate(cfg: &SimulateConfig) -> Result<SimulateOutcome, HarnessError> {
    let mut report = String::new();
    let mut total_rounds = 0usize;

    let selfish_sets: Vec<Vec<usize>> = match &cfg.selfish {
        SelfishSpec::Explicit(set) => {
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cfg.selfish_count || sorted.iter().any(|&u| u < 1 || u > cfg.users) {
                return Err(HarnessError::Validation(format!(
                    "--selfish {} must list S={} distinct users in 1..={}",
                    set_string(set),
                    cfg.selfish_count,
                    cfg.users
                )));
            }
            vec![sorted]
        }
        SelfishSpec::AllSubsets => {
            subsets_of(&(1..=cfg.users).collect::<Vec<_>>(), cfg.selfish_count)
        }
    };

    for &t in &cfg.t_values {
        let params = SchemeParams::new(cfg.users, cfg.selfish_count, cfg.files, t)
            .map_err(HarnessError::validation)?;
        let field = match cfg.field {
            FieldChoice::Auto => {
                Field::for_block_length(params.coded_subfiles).map_err(HarnessError::validation)?
            }
            FieldChoice::Order(order) => {
                let f = Field::new(order);
                f.check_block_length(params.coded_subfiles)
                    .map_err(HarnessError::validation)?;
                f
            }
        };
        let code = MdsCode::new(params.subfiles, params.coded_subfiles, field)
            .map_err(HarnessError::validation)?;

        let b_requested = match cfg.file_size {
            Some(0) => {
                return Err(HarnessError::Validation("--B must be positive".into()));
            }
            Some(b) => b,
            None => params.subfiles,
        };
        let original = generate_library(cfg.seed, cfg.files, b_requested, field);
        let library: Vec<Vec<_>> = original
            .iter()
            .map(|f| pad_to_multiple(f, params.subfiles))
            .collect();
        let b_padded = library[0].len();

        let demand_list: Vec<Vec<usize>> = match &cfg.demands {
            DemandSpec::Explicit(d) => {
                params
                    .validate_demands(d)
                    .map_err(HarnessError::validation)?;
                vec![d.clone()]
            }
            DemandSpec::Exhaustive => {
                let count = (cfg.files as u128).pow(cfg.users as u32);
                if count > 1_000_000 {
                    return Err(HarnessError::Validation(format!(
                        "exhaustive demands would need {count} rounds; use --demands random:<count>"
                    )));
                }
                exhaustive_demands(cfg.users, cfg.files)
            }
            DemandSpec::Random(count) => random_demands(cfg.seed, cfg.users, cfg.files, *count),
        };

        let mode_name = match cfg.mode {
            DeliveryMode::Independent => "independent",
            DeliveryMode::Coordinated => "coordinated",
        };
        writeln!(
            report,
            "config: K={} S={} N={} t={} B={} padded_B={} field=GF({}) seed={} mode={}",
            cfg.users,
            cfg.selfish_count,
            cfg.files,
            t,
            b_requested,
            b_padded,
            field.order(),
            cfg.seed,
            mode_name,
        )
        .unwrap();
        writeln!(
            report,
            "params: F={} coded={} decode_threshold={} cached_per_file={} per_sender_transmissions={} M={} ({})",
            params.subfiles,
            params.coded_subfiles,
            params.subfiles,
            params.cached_per_file,
            params.transmissions_per_user(),
            rational_string(&params.cache_size_files()),
            decimal_string(&params.cache_size_files(), SIG_DIGITS),
        )
        .unwrap();

        let caches = place(&params, &library, &code).map_err(HarnessError::failure)?;
        for selfish_set in &selfish_sets {
            let nonselfish = complement(cfg.users, selfish_set);
            let mut driver = RoundDriver::new(
                &params,
                &code,
                &caches,
                &library,
                nonselfish.clone(),
                cfg.mode,
            )
            .map_err(HarnessError::validation)?;
            let mut count = None;
            for demands in &demand_list {
                let outcome = driver.run(demands).map_err(|e| {
                    HarnessError::Failure(format!(
                        "K={} S={} N={} t={} seed={} selfish={} demands={:?}: {e}",
                        cfg.users,
                        cfg.selfish_count,
                        cfg.files,
                        t,
                        cfg.seed,
                        set_string(selfish_set),
                        demands
                    ))
                })?;
                if let Some(c) = count {
                    if c != outcome.transmission_count {
                        return Err(HarnessError::Failure(format!(
                            "transmission count changed across demands: {c} vs {}",
                            outcome.transmission_count
                        )));
                    }
                } else {
                    count = Some(outcome.transmission_count);
                }
            }
            let count = count.expect("at least one demand vector");
            total_rounds += demand_list.len();
            let load = ratio(count as u64, params.subfiles as u64);
            let demands_desc = match &cfg.demands {
                DemandSpec::Explicit(d) => format!(
                    "demands=({})",
                    d.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
                DemandSpec::Exhaustive => format!("demands=exhaustive[{}]", demand_list.len()),
                DemandSpec::Random(c) => format!("demands=random[{c}]"),
            };
            writeln!(
                report,
                "selfish={} nonselfish={} {}: rounds={} all {} users decoded, transmissions_per_round={} load={} ({})",
                set_string(selfish_set),
                set_string(&nonselfish),
                demands_desc,
                demand_list.len(),
                cfg.users,
                count,
                rational_string(&load),
                decimal_string(&load, SIG_DIGITS),
            )
            .unwrap();
        }
    }
    writeln!(report, "summary: rounds={total_rounds} failures=0").unwrap();
    Ok(SimulateOutcome {
        report,
        rounds: total_rounds,
    })
}
