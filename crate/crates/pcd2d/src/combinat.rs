//! Binomial coefficients, lexicographic ranking/unranking of fixed-size
//! subsets, and the global coded-subfile index map.
//!
//! Users are numbered `1..=K`. A coded subfile is addressed either by a pair
//! `(owner, subset)` — where `subset` is a sorted t-subset of `[1..K]`
//! excluding `owner` — or by a single global index
//! `j = (owner-1)*C(K-1,t) + rank(subset)`, with `j` ranging over
//! `1..=K*C(K-1,t)`. Ranks and global indices are 1-based throughout.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatError {
    #[error("subset element {element} is out of range 1..={max}")]
    ElementOutOfRange { element: usize, max: usize },
    #[error("subset contains the excluded user {user}")]
    ContainsExcluded { user: usize },
    #[error("subset is not strictly increasing near element {element}")]
    NotStrictlyIncreasing { element: usize },
    #[error("user index {user} is out of range 1..={max}")]
    UserOutOfRange { user: usize, max: usize },
    #[error("rank {rank} is out of range 1..={max}")]
    RankOutOfRange { rank: u64, max: u64 },
    #[error("global index {index} is out of range 1..={max}")]
    IndexOutOfRange { index: u64, max: u64 },
}

/// Binomial coefficient C(n, i), with C(n, i) = 0 for i < 0 and for i > n.
///
/// The i > n extension makes degenerate counts such as C(S, t+1) with
/// t+1 > S evaluate to zero instead of erroring. Exact integer arithmetic;
/// panics if the result would overflow `u64` (never happens for n <= 64).
pub fn binom(n: u64, i: i64) -> u64 {
    if i < 0 || i as u64 > n {
        return 0;
    }
    let i = (i as u64).min(n - i as u64);
    let mut acc: u128 = 1;
    for d in 1..=i {
        acc = acc
            .checked_mul((n - i + d) as u128)
            .expect("binomial coefficient overflow");
        acc /= d as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflow")
}

/// The sorted ground set `[1..=k_total] \ {excluded}`.
pub fn ground_excluding(k_total: usize, excluded: usize) -> Vec<usize> {
    (1..=k_total).filter(|&u| u != excluded).collect()
}

/// All `size`-subsets of `ground` in lexicographic order (as sorted tuples).
///
/// `ground` must be strictly increasing. Returns an empty list when
/// `size > ground.len()`.
pub fn subsets_of(ground: &[usize], size: usize) -> Vec<Vec<usize>> {
    let n = ground.len();
    if size > n {
        return Vec::new();
    }
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::with_capacity(binom(n as u64, size as i64) as usize);
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| ground[i]).collect());
        // advance to the next index combination
        let mut i = size;
        while i > 0 && idx[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

fn validate_subset(k_total: usize, excluded: usize, subset: &[usize]) -> Result<(), CombinatError> {
    let mut prev = 0usize;
    for &e in subset {
        if e < 1 || e > k_total {
            return Err(CombinatError::ElementOutOfRange {
                element: e,
                max: k_total,
            });
        }
        if e == excluded {
            return Err(CombinatError::ContainsExcluded { user: e });
        }
        if e <= prev {
            return Err(CombinatError::NotStrictlyIncreasing { element: e });
        }
        prev = e;
    }
    Ok(())
}

fn validate_user(k_total: usize, user: usize) -> Result<(), CombinatError> {
    if user < 1 || user > k_total {
        return Err(CombinatError::UserOutOfRange { user, max: k_total });
    }
    Ok(())
}

/// 1-based lexicographic rank of `subset` among all |subset|-sized subsets of
/// `[1..=k_total] \ {excluded}`, subsets compared as sorted tuples.
pub fn rank_subset(
    k_total: usize,
    excluded: usize,
    subset: &[usize],
) -> Result<u64, CombinatError> {
    validate_user(k_total, excluded)?;
    validate_subset(k_total, excluded, subset)?;
    let m = (k_total - 1) as u64;
    let t = subset.len() as u64;
    // position of each element within the ground set, 1-based
    let pos = |e: usize| -> u64 {
        let p = e as u64;
        if e > excluded {
            p - 1
        } else {
            p
        }
    };
    let mut rank = 1u64;
    let mut prev = 0u64;
    for (i, &e) in subset.iter().enumerate() {
        let p = pos(e);
        let remaining = t - 1 - i as u64;
        for j in prev + 1..p {
            rank += binom(m - j, remaining as i64);
        }
        prev = p;
    }
    Ok(rank)
}

/// Inverse of [`rank_subset`]: the unique `size`-subset of
/// `[1..=k_total] \ {excluded}` with the given 1-based lexicographic rank.
pub fn unrank_subset(
    k_total: usize,
    excluded: usize,
    size: usize,
    rank: u64,
) -> Result<Vec<usize>, CombinatError> {
    validate_user(k_total, excluded)?;
    let m = (k_total - 1) as u64;
    let max = binom(m, size as i64);
    if rank < 1 || rank > max {
        return Err(CombinatError::RankOutOfRange { rank, max });
    }
    let ground = ground_excluding(k_total, excluded);
    let mut r = rank - 1;
    let mut out = Vec::with_capacity(size);
    let mut j = 1u64; // 1-based position within the ground set
    for i in 0..size {
        let remaining = (size - 1 - i) as i64;
        loop {
            let count = binom(m - j, remaining);
            if r < count {
                out.push(ground[(j - 1) as usize]);
                j += 1;
                break;
            }
            r -= count;
            j += 1;
        }
    }
    Ok(out)
}

/// Global coded-subfile index `j = (owner-1)*C(K-1,t) + rank(subset)`.
pub fn subfile_index(
    k_total: usize,
    t: usize,
    owner: usize,
    subset: &[usize],
) -> Result<u64, CombinatError> {
    validate_user(k_total, owner)?;
    debug_assert_eq!(subset.len(), t);
    let per_owner = binom((k_total - 1) as u64, t as i64);
    Ok((owner as u64 - 1) * per_owner + rank_subset(k_total, owner, subset)?)
}

/// Inverse of [`subfile_index`]: recovers the unique `(owner, subset)` pair.
pub fn subfile_index_inverse(
    k_total: usize,
    t: usize,
    index: u64,
) -> Result<(usize, Vec<usize>), CombinatError> {
    let per_owner = binom((k_total - 1) as u64, t as i64);
    let max = k_total as u64 * per_owner;
    if index < 1 || index > max {
        return Err(CombinatError::IndexOutOfRange { index, max });
    }
    let owner = ((index - 1) / per_owner) as usize + 1;
    let rank = (index - 1) % per_owner + 1;
    let subset = unrank_subset(k_total, owner, t, rank)?;
    Ok((owner, subset))
}
