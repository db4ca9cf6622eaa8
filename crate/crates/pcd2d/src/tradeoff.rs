//! Exact-rational memory-load trade-off analysis.
//!
//! Corner points of the achievable region (one per caching parameter t, for
//! independent or coordinated delivery), their lower convex envelope via
//! memory sharing, the cut-set lower bound, and the high-memory regime where
//! the envelope meets the bound. All arithmetic is exact; decimals appear
//! only at the output boundary.
//!
//! The cut-set bound assumes a symmetric load, i.e. each of the K-S
//! transmitting users contributes an equal share of the total load.

use num::{BigRational, Signed, Zero};
use thiserror::Error;

use crate::combinat::binom;
use crate::rational::{from_int, ratio, rational_string};
use crate::scheme::{DeliveryMode, SchemeError, SchemeParams};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TradeoffError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("memory {memory} is outside the feasible range [{min}, {max}]")]
    InfeasibleMemory {
        memory: String,
        min: String,
        max: String,
    },
    #[error("memory {memory} is below the optimality threshold {threshold}")]
    BelowOptimalityRegime { memory: String, threshold: String },
    #[error("the optimality regime needs S <= K-2, got S={selfish}, K={users}")]
    NoOptimalityRegime { selfish: usize, users: usize },
}

/// What produced a trade-off point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// Achievable corner for caching parameter t, independent delivery.
    Corner { t: usize },
    /// Achievable corner for caching parameter t, coordinated delivery.
    ReducedCorner { t: usize },
    /// Memory-sharing combination of corners.
    Envelope,
    /// Cut-set lower bound evaluation.
    CutSet,
    /// High-memory optimal load.
    OptimalRegime,
}

/// An exact (memory, load) pair, in files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffPoint {
    pub memory: BigRational,
    pub load: BigRational,
    pub kind: PointKind,
}

fn validate_dims(users: usize, selfish: usize, files: usize) -> Result<(), TradeoffError> {
    SchemeParams::new(users, selfish, files, 0)?;
    Ok(())
}

/// Minimum feasible cache size N/(K-S): below it the non-selfish caches
/// cannot jointly hold the library.
pub fn min_feasible_memory(users: usize, selfish: usize, files: usize) -> BigRational {
    ratio(files as u64, (users - selfish) as u64)
}

/// Achievable corner point for caching parameter `t` under independent
/// delivery:
/// `M = N(t+1)(K-1) / ((K-S)(K-1) + tS)` and
/// `R = (K-S)(K-1)(K-t-1) / (((K-S)(K-1) + tS)(t+1))`.
pub fn corner_point(
    users: usize,
    selfish: usize,
    files: usize,
    t: usize,
) -> Result<TradeoffPoint, TradeoffError> {
    SchemeParams::new(users, selfish, files, t)?;
    let (k, s, n, ti) = (users as u64, selfish as u64, files as u64, t as u64);
    let denom = (k - s) * (k - 1) + ti * s;
    let memory = ratio(n * (ti + 1) * (k - 1), denom);
    let load = ratio((k - s) * (k - 1) * (k - ti - 1), denom * (ti + 1));
    Ok(TradeoffPoint {
        memory,
        load,
        kind: PointKind::Corner { t },
    })
}

/// Achievable corner point under coordinated delivery: same memory, but up
/// to `min((K-S)*C(S,t+1), C(K-2,t))` transmissions that only benefit
/// selfish users are dropped. For t = 0 the reduction is instead one
/// transmitter dropping its message to every selfish user, giving
/// `R = K - K/(K-S)`.
pub fn reduced_corner_point(
    users: usize,
    selfish: usize,
    files: usize,
    t: usize,
) -> Result<TradeoffPoint, TradeoffError> {
    let params = SchemeParams::new(users, selfish, files, t)?;
    let (k, s) = (users as u64, selfish as u64);
    let memory = corner_point(users, selfish, files, t)?.memory;
    let load = if t == 0 {
        ratio(k * (k - s - 1), k - s)
    } else {
        let skipped = ((k - s) * binom(s, t as i64 + 1)).min(binom(k - 2, t as i64));
        ratio(
            (k - s) * binom(k - 1, t as i64 + 1) - skipped,
            params.subfiles as u64,
        )
    };
    Ok(TradeoffPoint {
        memory,
        load,
        kind: PointKind::ReducedCorner { t },
    })
}

/// The achievable curve: corner points for every t plus their lower convex
/// envelope over `[N/(K-S), N]`.
#[derive(Debug, Clone)]
pub struct AchievableCurve {
    points: Vec<TradeoffPoint>,
    hull: Vec<(BigRational, BigRational)>,
}

impl AchievableCurve {
    pub fn corner_points(&self) -> &[TradeoffPoint] {
        &self.points
    }

    pub fn hull_vertices(&self) -> &[(BigRational, BigRational)] {
        &self.hull
    }

    pub fn min_memory(&self) -> &BigRational {
        &self.hull.first().expect("hull is never empty").0
    }

    pub fn max_memory(&self) -> &BigRational {
        &self.hull.last().expect("hull is never empty").0
    }

    /// Envelope load at memory `m`, by linear interpolation between hull
    /// vertices. Errors outside `[min_memory, max_memory]`.
    pub fn load_at(&self, m: &BigRational) -> Result<BigRational, TradeoffError> {
        if m < self.min_memory() || m > self.max_memory() {
            return Err(TradeoffError::InfeasibleMemory {
                memory: rational_string(m),
                min: rational_string(self.min_memory()),
                max: rational_string(self.max_memory()),
            });
        }
        let idx = self.hull.partition_point(|(x, _)| x <= m);
        if idx > 0 && &self.hull[idx - 1].0 == m {
            return Ok(self.hull[idx - 1].1.clone());
        }
        let (x0, y0) = &self.hull[idx - 1];
        let (x1, y1) = &self.hull[idx];
        Ok(y0 + (y1 - y0) * (m - x0) / (x1 - x0))
    }
}

/// Builds the achievable curve for all t in `0..=K-1`, using corner points
/// of the chosen delivery mode, and takes the lower convex envelope.
pub fn achievable_curve(
    users: usize,
    selfish: usize,
    files: usize,
    delivery: DeliveryMode,
) -> Result<AchievableCurve, TradeoffError> {
    validate_dims(users, selfish, files)?;
    let mut points = Vec::with_capacity(users);
    for t in 0..users {
        points.push(match delivery {
            DeliveryMode::Independent => corner_point(users, selfish, files, t)?,
            DeliveryMode::Coordinated => reduced_corner_point(users, selfish, files, t)?,
        });
    }

    // candidates sorted by memory, keeping only the best load per memory
    let mut cand: Vec<(BigRational, BigRational)> = points
        .iter()
        .map(|p| (p.memory.clone(), p.load.clone()))
        .collect();
    cand.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    cand.dedup_by(|next, kept| kept.0 == next.0);

    // monotone-chain lower hull; pop the middle vertex whenever it lies on
    // or above the chord of its neighbors
    let mut hull: Vec<(BigRational, BigRational)> = Vec::with_capacity(cand.len());
    for (x, y) in cand {
        while hull.len() >= 2 {
            let (ax, ay) = &hull[hull.len() - 2];
            let (bx, by) = &hull[hull.len() - 1];
            let above = (by - ay) * (&x - ax) >= (&y - ay) * (bx - ax);
            if above {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    Ok(AchievableCurve { points, hull })
}

/// Result of the cut-set lower bound: the bound value and the smallest cut
/// size attaining the maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSetBound {
    pub load: BigRational,
    pub argmax_cut: usize,
}

fn feasible_or_err(
    users: usize,
    selfish: usize,
    files: usize,
    memory: &BigRational,
) -> Result<(), TradeoffError> {
    let min = min_feasible_memory(users, selfish, files);
    let max = from_int(files as u64);
    if memory < &min || memory > &max {
        return Err(TradeoffError::InfeasibleMemory {
            memory: rational_string(memory),
            min: rational_string(&min),
            max: rational_string(&max),
        });
    }
    Ok(())
}

/// Per-cut values of the cut-set bound expression
/// `(N - cut*M) / ((max(K-S-cut, 1)/(K-S)) * ceil(N/cut))` for every cut
/// size in `1..=K-1`.
pub fn cut_set_terms(
    users: usize,
    selfish: usize,
    files: usize,
    memory: &BigRational,
) -> Result<Vec<(usize, BigRational)>, TradeoffError> {
    validate_dims(users, selfish, files)?;
    feasible_or_err(users, selfish, files, memory)?;
    let (k, s, n) = (users as u64, selfish as u64, files as u64);
    let mut terms = Vec::with_capacity(users - 1);
    for cut in 1..k {
        let numer = from_int(n) - from_int(cut) * memory;
        let denom = ratio((k - s).saturating_sub(cut).max(1), k - s) * from_int(n.div_ceil(cut));
        terms.push((cut as usize, numer / denom));
    }
    Ok(terms)
}

/// The intermediate bound family before maximizing out the number of
/// selfish users inside the cut: one value per (cut size, selfish overlap)
/// pair. Exposed for cross-checking the closed form.
pub fn cut_set_family(
    users: usize,
    selfish: usize,
    files: usize,
    memory: &BigRational,
) -> Result<Vec<(usize, usize, BigRational)>, TradeoffError> {
    validate_dims(users, selfish, files)?;
    feasible_or_err(users, selfish, files, memory)?;
    let (k, s, n) = (users as u64, selfish as u64, files as u64);
    let mut family = Vec::new();
    for cut in 1..k {
        let lo = cut.saturating_sub(k - s - 1);
        let hi = cut.min(s);
        for overlap in lo..=hi {
            let numer = from_int(n) - from_int(cut) * memory;
            let denom = ratio(k - s - (cut - overlap), k - s) * from_int(n.div_ceil(cut));
            family.push((cut as usize, overlap as usize, numer / denom));
        }
    }
    Ok(family)
}

/// Cut-set lower bound on the optimal load at memory `m`, clamped at zero:
/// the maximum of [`cut_set_terms`] over all cut sizes, with the smallest
/// maximizing cut reported.
pub fn cut_set_lower_bound(
    users: usize,
    selfish: usize,
    files: usize,
    memory: &BigRational,
) -> Result<CutSetBound, TradeoffError> {
    let terms = cut_set_terms(users, selfish, files, memory)?;
    let (argmax_cut, best) = terms
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("at least one cut size");
    let load = if best.is_negative() {
        BigRational::zero()
    } else {
        best
    };
    Ok(CutSetBound { load, argmax_cut })
}

/// Memory threshold `N / (1 + (K-S-1)/(K-1)^2)` above which the scheme is
/// optimal. Defined for S <= K-2.
pub fn optimality_threshold(
    users: usize,
    selfish: usize,
    files: usize,
) -> Result<BigRational, TradeoffError> {
    validate_dims(users, selfish, files)?;
    if selfish + 2 > users {
        return Err(TradeoffError::NoOptimalityRegime { selfish, users });
    }
    let (k, s, n) = (users as u64, selfish as u64, files as u64);
    let km1_sq = (k - 1) * (k - 1);
    Ok(ratio(n * km1_sq, km1_sq + (k - s - 1)))
}

/// Optimal load `(K-S)/(K-S-1) * (1 - M/N)` in the high-memory regime.
/// Errors below the threshold; use the achievable curve and the cut-set
/// bound there instead.
pub fn optimal_load_high_memory(
    users: usize,
    selfish: usize,
    files: usize,
    memory: &BigRational,
) -> Result<BigRational, TradeoffError> {
    let threshold = optimality_threshold(users, selfish, files)?;
    feasible_or_err(users, selfish, files, memory)?;
    if memory < &threshold {
        return Err(TradeoffError::BelowOptimalityRegime {
            memory: rational_string(memory),
            threshold: rational_string(&threshold),
        });
    }
    let (k, s, n) = (users as u64, selfish as u64, files as u64);
    Ok(ratio(k - s, k - s - 1) * (from_int(1) - memory / from_int(n)))
}

/// Whether memory `m` is feasible for the network, with the violated bound
/// named when it is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    BelowMinimum { min: BigRational },
    AboveLibrary { max: BigRational },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }

    pub fn reason(&self) -> Option<String> {
        match self {
            Feasibility::Feasible => None,
            Feasibility::BelowMinimum { min } => Some(format!(
                "below the minimum feasible memory N/(K-S) = {}",
                rational_string(min)
            )),
            Feasibility::AboveLibrary { max } => Some(format!(
                "above the library size N = {}",
                rational_string(max)
            )),
        }
    }
}

pub fn feasibility_check(
    users: usize,
    selfish: usize,
    files: usize,
    memory: &BigRational,
) -> Result<Feasibility, TradeoffError> {
    validate_dims(users, selfish, files)?;
    let min = min_feasible_memory(users, selfish, files);
    let max = from_int(files as u64);
    Ok(if memory < &min {
        Feasibility::BelowMinimum { min }
    } else if memory > &max {
        Feasibility::AboveLibrary { max }
    } else {
        Feasibility::Feasible
    })
}
