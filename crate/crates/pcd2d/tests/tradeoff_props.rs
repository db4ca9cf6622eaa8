//! Trade-off invariants on dense memory grids: the cut-set bound never
//! exceeds the achievable envelope, and in the high-memory regime the two
//! meet the closed-form optimal load exactly.

use num::BigRational;
use pcd2d::rational::{from_int, ratio};
use pcd2d::scheme::DeliveryMode;
use pcd2d::tradeoff::{
    achievable_curve, cut_set_lower_bound, optimal_load_high_memory, optimality_threshold,
};

fn grid(min: &BigRational, max: &BigRational, points: usize) -> Vec<BigRational> {
    (0..points)
        .map(|g| min + (max - min) * ratio(g as u64, (points - 1) as u64))
        .collect()
}

#[test]
fn bound_never_exceeds_envelope() {
    for users in 2..=10usize {
        for selfish in 0..users.saturating_sub(1) {
            let files = users;
            let curve = achievable_curve(users, selfish, files, DeliveryMode::Independent).unwrap();
            let reduced =
                achievable_curve(users, selfish, files, DeliveryMode::Coordinated).unwrap();
            for m in grid(curve.min_memory(), &from_int(files as u64), 50) {
                let hull = curve.load_at(&m).unwrap();
                let hull_reduced = reduced.load_at(&m).unwrap();
                let bound = cut_set_lower_bound(users, selfish, files, &m).unwrap();
                assert!(
                    bound.load <= hull,
                    "K={users} S={selfish} M={m}: bound {} > hull {}",
                    bound.load,
                    hull
                );
                assert!(bound.load <= hull_reduced, "K={users} S={selfish} M={m}");
                assert!(hull_reduced <= hull, "K={users} S={selfish} M={m}");
            }
        }
    }
}

#[test]
fn envelope_meets_bound_in_high_memory_regime() {
    for users in 2..=10usize {
        for selfish in 0..users.saturating_sub(1) {
            let files = users;
            let curve = achievable_curve(users, selfish, files, DeliveryMode::Independent).unwrap();
            let threshold = optimality_threshold(users, selfish, files).unwrap();
            for m in grid(&threshold, &from_int(files as u64), 25) {
                let hull = curve.load_at(&m).unwrap();
                let bound = cut_set_lower_bound(users, selfish, files, &m).unwrap();
                let closed = optimal_load_high_memory(users, selfish, files, &m).unwrap();
                assert_eq!(hull, closed, "K={users} S={selfish} M={m}");
                assert_eq!(bound.load, closed, "K={users} S={selfish} M={m}");
            }
        }
    }
}
