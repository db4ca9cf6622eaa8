//! Trade-off and lower-bound sweeps serialized as CSV.
//!
//! The `tradeoff` sweep emits one row per caching parameter t followed by
//! envelope samples on a uniform memory grid (empty `t` column). Rationals
//! are printed both exactly (`p/q`) and as 12-significant-digit decimals, so
//! every numeric cell can be re-derived from the exact column.

use std::fmt::Write as _;

use num::BigRational;
use pcd2d::rational::{decimal_string, from_int, ratio, rational_string};
use pcd2d::scheme::DeliveryMode;
use pcd2d::tradeoff::{
    achievable_curve, corner_point, cut_set_lower_bound, cut_set_terms, min_feasible_memory,
    optimality_threshold, reduced_corner_point,
};

use crate::config::SweepConfig;
use crate::HarnessError;

const SIG_DIGITS: usize = 12;

pub const TRADEOFF_HEADER: &str = "t,M_rational,M_decimal,R_theorem1_rational,R_theorem1_decimal,R_remark1_rational,R_remark1_decimal,R_lowerbound_rational,R_lowerbound_decimal,argmax_s,optimal_flag";

pub const BOUND_HEADER: &str =
    "M_rational,M_decimal,R_lowerbound_rational,R_lowerbound_decimal,argmax_s,optimal_flag";

fn cell(r: &BigRational) -> String {
    format!("{},{}", rational_string(r), decimal_string(r, SIG_DIGITS))
}

/// Uniform `points`-point grid over `[lo, hi]`, exact rationals.
pub fn memory_grid(lo: &BigRational, hi: &BigRational, points: usize) -> Vec<BigRational> {
    (0..points)
        .map(|g| lo + (hi - lo) * ratio(g as u64, (points - 1) as u64))
        .collect()
}

pub fn cmd_tradeoff(cfg: &SweepConfig) -> Result<String, HarnessError> {
    let (k, s, n) = (cfg.users, cfg.selfish_count, cfg.files);
    let independent =
        achievable_curve(k, s, n, DeliveryMode::Independent).map_err(HarnessError::validation)?;
    let coordinated =
        achievable_curve(k, s, n, DeliveryMode::Coordinated).map_err(HarnessError::validation)?;
    let threshold = optimality_threshold(k, s, n).ok();

    let mut csv = String::new();
    writeln!(csv, "{TRADEOFF_HEADER}").unwrap();
    let push_row = |csv: &mut String,
                    t_label: &str,
                    m: &BigRational,
                    r_full: &BigRational,
                    r_reduced: &BigRational|
     -> Result<(), HarnessError> {
        let bound = cut_set_lower_bound(k, s, n, m).map_err(HarnessError::validation)?;
        let flag = threshold.as_ref().is_some_and(|th| m >= th);
        writeln!(
            csv,
            "{t_label},{},{},{},{},{},{flag}",
            cell(m),
            cell(r_full),
            cell(r_reduced),
            cell(&bound.load),
            bound.argmax_cut,
        )
        .unwrap();
        Ok(())
    };

    for t in 0..k {
        let full = corner_point(k, s, n, t).map_err(HarnessError::validation)?;
        let reduced = reduced_corner_point(k, s, n, t).map_err(HarnessError::validation)?;
        push_row(
            &mut csv,
            &t.to_string(),
            &full.memory,
            &full.load,
            &reduced.load,
        )?;
    }
    let lo = min_feasible_memory(k, s, n);
    let hi = from_int(n as u64);
    for m in memory_grid(&lo, &hi, cfg.grid_points) {
        let hull = independent.load_at(&m).map_err(HarnessError::validation)?;
        let hull_reduced = coordinated.load_at(&m).map_err(HarnessError::validation)?;
        push_row(&mut csv, "", &m, &hull, &hull_reduced)?;
    }
    Ok(csv)
}

pub fn cmd_bound(cfg: &SweepConfig, debug_family: bool) -> Result<(String, String), HarnessError> {
    let (k, s, n) = (cfg.users, cfg.selfish_count, cfg.files);
    let threshold = optimality_threshold(k, s, n).ok();
    let mut csv = String::new();
    match &threshold {
        Some(th) => writeln!(
            csv,
            "# optimality_threshold_M1 = {} = {}",
            rational_string(th),
            decimal_string(th, SIG_DIGITS)
        )
        .unwrap(),
        None => writeln!(csv, "# optimality_threshold_M1 = none (needs S <= K-2)").unwrap(),
    }
    writeln!(csv, "{BOUND_HEADER}").unwrap();

    let mut debug = String::new();
    let lo = min_feasible_memory(k, s, n);
    let hi = from_int(n as u64);
    if lo > hi {
        return Err(HarnessError::Validation(format!(
            "no feasible memory: N/(K-S) = {} exceeds N = {n}",
            rational_string(&lo)
        )));
    }
    for m in memory_grid(&lo, &hi, cfg.grid_points) {
        let bound = cut_set_lower_bound(k, s, n, &m).map_err(HarnessError::validation)?;
        let flag = threshold.as_ref().is_some_and(|th| &m >= th);
        writeln!(
            csv,
            "{},{},{},{flag}",
            cell(&m),
            cell(&bound.load),
            bound.argmax_cut
        )
        .unwrap();
        if debug_family {
            let terms = cut_set_terms(k, s, n, &m).map_err(HarnessError::validation)?;
            let listed: Vec<String> = terms
                .iter()
                .map(|(cut, v)| format!("s={cut}:{}", rational_string(v)))
                .collect();
            writeln!(debug, "M={}: {}", rational_string(&m), listed.join(" ")).unwrap();
        }
    }
    Ok((csv, debug))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(users: usize, selfish: usize, files: usize, grid_points: usize) -> SweepConfig {
        SweepConfig {
            users,
            selfish_count: selfish,
            files,
            grid_points,
        }
    }

    #[test]
    fn tradeoff_rows_carry_known_values() {
        let csv = cmd_tradeoff(&sweep(6, 2, 6, 10)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], TRADEOFF_HEADER);
        // t = 2 row: M = 15/4 = 3.75, R = 5/6
        let row: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(row[0], "2");
        assert_eq!(row[1], "15/4");
        assert_eq!(row[2], "3.75");
        assert_eq!(row[3], "5/6");
        assert_eq!(row[4], "0.833333333333");
        assert_eq!(row[10], "false");
        // t = 5 row: M = 6, R = 0, inside the optimal regime
        let row: Vec<&str> = lines[6].split(',').collect();
        assert_eq!(row[0], "5");
        assert_eq!(row[1], "6");
        assert_eq!(row[3], "0");
        assert_eq!(row[10], "true");
        // header + 6 corner rows + 10 grid rows
        assert_eq!(lines.len(), 17);
    }

    #[test]
    fn bound_csv_reports_threshold() {
        let (csv, debug) = cmd_bound(&sweep(6, 2, 6, 5), true).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "# optimality_threshold_M1 = 75/14 = 5.35714285714"
        );
        assert_eq!(lines[1], BOUND_HEADER);
        // last grid point is M = N with bound 0
        let last: Vec<&str> = lines.last().unwrap().split(',').collect();
        assert_eq!(last[0], "6");
        assert_eq!(last[2], "0");
        assert_eq!(last[5], "true");
        assert!(debug.lines().count() == 5);
    }

    #[test]
    fn single_transmitter_has_no_threshold() {
        let (csv, _) = cmd_bound(&sweep(4, 3, 4, 3), false).unwrap();
        assert!(csv.starts_with("# optimality_threshold_M1 = none"));
    }
}
