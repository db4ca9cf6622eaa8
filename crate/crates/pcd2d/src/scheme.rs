//! The partially cooperative D2D coded caching protocol.
//!
//! A `(K, S, N)` network has `K` users, each caching `M` files out of a
//! library of `N`, of which `S` users request files but never transmit.
//! Placement fills every cache with MDS-coded subfiles using only the
//! *count* of selfish users; delivery is one coded XOR broadcast per
//! `(t+1)`-sized target set from each of the `K-S` transmitting users, each
//! computable from that user's own cache alone; decoding erasure-recovers
//! the demanded file from any `Q` distinct coded subfiles.
//!
//! Caches are immutable after placement, and delivery/decoding for distinct
//! users are independent, so rounds parallelize across users.

use std::collections::BTreeMap;

use num::BigRational;
use thiserror::Error;

use crate::combinat::{binom, ground_excluding, subfile_index, subsets_of, CombinatError};
use crate::gf::{Field, FieldError, FieldOrder, Symbol};
use crate::mds::{xor_into, MdsCode, MdsError};
use crate::par;
use crate::rational::ratio;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("need at least 2 users for a D2D network, got K={0}")]
    TooFewUsers(usize),
    #[error("need K <= N, got K={users}, N={files}")]
    MoreUsersThanFiles { users: usize, files: usize },
    #[error("need S <= K-1 so at least one user transmits, got S={selfish}, K={users}")]
    TooManySelfish { selfish: usize, users: usize },
    #[error("caching parameter t must be in 0..=K-1, got t={t} with K={users}")]
    CachingParamOutOfRange { t: usize, users: usize },
    #[error("library must contain exactly {expected} files, got {got}")]
    WrongFileCount { expected: usize, got: usize },
    #[error("file {file} has {got} symbols, expected {expected}")]
    UnequalFileLengths {
        file: usize,
        expected: usize,
        got: usize,
    },
    #[error("file size {size} is not divisible by the subpacketization {subfiles}")]
    FileSizeNotDivisible { size: usize, subfiles: usize },
    #[error(
        "code shape mismatch: the scheme needs a [{n_coded},{subfiles}] code, got [{code_n},{code_k}]"
    )]
    CodeShapeMismatch {
        n_coded: usize,
        subfiles: usize,
        code_n: usize,
        code_k: usize,
    },
    #[error("demand vector must have {expected} entries, got {got}")]
    WrongDemandCount { expected: usize, got: usize },
    #[error("demand {demand} of user {user} is out of range 1..={files}")]
    DemandOutOfRange {
        user: usize,
        demand: usize,
        files: usize,
    },
    #[error(
        "non-selfish set must be {expected} strictly increasing users in 1..={users}, got {got:?}"
    )]
    InvalidNonselfishSet {
        expected: usize,
        users: usize,
        got: Vec<usize>,
    },
    #[error("sender {sender} is not in the non-selfish set")]
    SenderNotTransmitting { sender: usize },
    #[error("cache of user {user} is missing coded subfile (file {file}, owner {owner}, subset {subset:?})")]
    MissingCacheEntry {
        user: usize,
        file: usize,
        owner: usize,
        subset: Vec<usize>,
    },
    #[error("duplicate transmission from sender {sender} for target set {targets:?}")]
    DuplicateTransmission { sender: usize, targets: Vec<usize> },
    #[error("user {user} gathered only {have} distinct coded subfiles, needs {need}")]
    DecodeFailure {
        user: usize,
        have: usize,
        need: usize,
    },
    #[error("user {user} decoded a file that differs from the library")]
    DecodedMismatch { user: usize },
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mds(#[from] MdsError),
}

/// Network and scheme parameters with all derived counts.
///
/// `subfiles` is both the subpacketization and the decode threshold: each
/// file splits into `F = (K-S)*C(K-1,t) + S*C(K-2,t-1)` subfiles, encoded
/// into `K*C(K-1,t)` coded subfiles, any `F` of which recover the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeParams {
    pub users: usize,
    pub selfish_users: usize,
    pub files: usize,
    pub t: usize,
    /// F: subfiles per file, also the decode threshold Q.
    pub subfiles: usize,
    /// Coded subfiles per file: K * C(K-1, t).
    pub coded_subfiles: usize,
    /// Q_z: coded subfiles of each file every user holds in cache.
    pub cached_per_file: usize,
    /// Coded subfiles of its demand a transmitting user extracts from
    /// delivery: (K-S-1) * C(K-2, t).
    pub delivered_nonselfish: usize,
    /// Coded subfiles of its demand a selfish user extracts from delivery:
    /// (K-S) * C(K-2, t).
    pub delivered_selfish: usize,
}

impl SchemeParams {
    pub fn new(
        users: usize,
        selfish_users: usize,
        files: usize,
        t: usize,
    ) -> Result<Self, SchemeError> {
        if users < 2 {
            return Err(SchemeError::TooFewUsers(users));
        }
        if users > files {
            return Err(SchemeError::MoreUsersThanFiles { users, files });
        }
        if selfish_users > users - 1 {
            return Err(SchemeError::TooManySelfish {
                selfish: selfish_users,
                users,
            });
        }
        if t > users - 1 {
            return Err(SchemeError::CachingParamOutOfRange { t, users });
        }
        let k = users as u64;
        let s = selfish_users as u64;
        let ti = t as i64;
        let per_owner = binom(k - 1, ti);
        let subfiles = ((k - s) * per_owner + s * binom(k - 2, ti - 1)) as usize;
        let coded_subfiles = (k * per_owner) as usize;
        let cached_per_file = (per_owner + (k - 1) * binom(k - 2, ti - 1)) as usize;
        let delivered_nonselfish = ((k - s - 1) * binom(k - 2, ti)) as usize;
        let delivered_selfish = ((k - s) * binom(k - 2, ti)) as usize;
        let params = SchemeParams {
            users,
            selfish_users,
            files,
            t,
            subfiles,
            coded_subfiles,
            cached_per_file,
            delivered_nonselfish,
            delivered_selfish,
        };
        // counting identities behind decodability
        assert_eq!(
            params.cached_per_file + params.delivered_nonselfish,
            params.subfiles
        );
        assert!(params.cached_per_file + params.delivered_selfish >= params.subfiles);
        Ok(params)
    }

    /// Coded transmissions each transmitting user makes: C(K-1, t+1).
    pub fn transmissions_per_user(&self) -> usize {
        binom((self.users - 1) as u64, self.t as i64 + 1) as usize
    }

    /// Total transmissions in an independent-delivery round.
    pub fn total_transmissions(&self) -> usize {
        (self.users - self.selfish_users) * self.transmissions_per_user()
    }

    /// Normalized cache size in files: N * Q_z / F.
    pub fn cache_size_files(&self) -> BigRational {
        ratio(
            (self.files * self.cached_per_file) as u64,
            self.subfiles as u64,
        )
    }

    pub fn validate_demands(&self, demands: &[usize]) -> Result<(), SchemeError> {
        if demands.len() != self.users {
            return Err(SchemeError::WrongDemandCount {
                expected: self.users,
                got: demands.len(),
            });
        }
        for (i, &d) in demands.iter().enumerate() {
            if d < 1 || d > self.files {
                return Err(SchemeError::DemandOutOfRange {
                    user: i + 1,
                    demand: d,
                    files: self.files,
                });
            }
        }
        Ok(())
    }

    /// Checks that `set` is a strictly increasing list of K-S users in 1..=K.
    pub fn validate_nonselfish(&self, set: &[usize]) -> Result<(), SchemeError> {
        let expected = self.users - self.selfish_users;
        let ok = set.len() == expected
            && set.windows(2).all(|w| w[0] < w[1])
            && set.iter().all(|&u| u >= 1 && u <= self.users);
        if !ok {
            return Err(SchemeError::InvalidNonselfishSet {
                expected,
                users: self.users,
                got: set.to_vec(),
            });
        }
        Ok(())
    }
}

/// Address of one coded subfile: file `n`, owner `k`, t-subset `T` of
/// `[1..K] \ {k}` (sorted). Maps to global position
/// `(k-1)*C(K-1,t) + rank(T)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodedSubfileId {
    pub file: usize,
    pub owner: usize,
    pub subset: Vec<usize>,
}

impl CodedSubfileId {
    /// 1-based global position of this coded subfile within its file's
    /// codeword.
    pub fn position(&self, params: &SchemeParams) -> Result<usize, CombinatError> {
        Ok(subfile_index(params.users, params.t, self.owner, &self.subset)? as usize)
    }
}

/// The cache contents of one user after placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheContents {
    user: usize,
    entries: BTreeMap<CodedSubfileId, Vec<Symbol>>,
}

impl CacheContents {
    pub fn user(&self) -> usize {
        self.user
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &CodedSubfileId) -> Option<&[Symbol]> {
        self.entries.get(id).map(|v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CodedSubfileId, &[Symbol])> {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Entries belonging to one file, in deterministic key order.
    pub fn file_entries(&self, file: usize) -> impl Iterator<Item = (&CodedSubfileId, &[Symbol])> {
        let lo = CodedSubfileId {
            file,
            owner: 0,
            subset: Vec::new(),
        };
        let hi = CodedSubfileId {
            file: file + 1,
            owner: 0,
            subset: Vec::new(),
        };
        self.entries.range(lo..hi).map(|(k, v)| (k, v.as_slice()))
    }

    /// Length of each cached payload in symbols (B / F).
    pub fn payload_len(&self) -> usize {
        self.entries.values().next().map_or(0, |v| v.len())
    }

    fn fetch(&self, id: CodedSubfileId) -> Result<&[Symbol], SchemeError> {
        match self.entries.get(&id) {
            Some(v) => Ok(v.as_slice()),
            None => Err(SchemeError::MissingCacheEntry {
                user: self.user,
                file: id.file,
                owner: id.owner,
                subset: id.subset,
            }),
        }
    }
}

/// One coded broadcast: the XOR over `s` in `targets` of the sender-owned
/// coded subfile of file `d_s` indexed by `targets \ {s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub sender: usize,
    pub targets: Vec<usize>,
    pub payload: Vec<Symbol>,
}

/// All transmissions of a round, addressable by `(sender, target set)`.
#[derive(Debug, Clone, Default)]
pub struct TransmissionLog {
    map: BTreeMap<(usize, Vec<usize>), Vec<Symbol>>,
}

impl TransmissionLog {
    pub fn new(transmissions: Vec<Transmission>) -> Result<Self, SchemeError> {
        let mut map = BTreeMap::new();
        for tx in transmissions {
            let key = (tx.sender, tx.targets);
            if map.contains_key(&key) {
                return Err(SchemeError::DuplicateTransmission {
                    sender: key.0,
                    targets: key.1,
                });
            }
            map.insert(key, tx.payload);
        }
        Ok(TransmissionLog { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, sender: usize, targets: &[usize]) -> Option<&[Symbol]> {
        self.map
            .get(&(sender, targets.to_vec()))
            .map(|v| v.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeliveryMode {
    /// Every transmitter sends all C(K-1, t+1) coded messages; no knowledge
    /// of selfish identities is needed to transmit.
    Independent,
    /// Reduced delivery: transmissions that only benefit selfish users are
    /// skipped up to the budget the selfish users' decode slack allows. This
    /// needs coordination: every transmitter must know the selfish set.
    Coordinated,
}

fn ground_excluding_pair(k_total: usize, a: usize, b: usize) -> Vec<usize> {
    (1..=k_total).filter(|&u| u != a && u != b).collect()
}

fn insert_sorted(mut v: Vec<usize>, x: usize) -> Vec<usize> {
    let pos = v.partition_point(|&e| e < x);
    v.insert(pos, x);
    v
}

/// Fills all K caches from the library. Takes only the selfish *count*
/// (inside `params`), never selfish identities, so the output is invariant
/// under which users later turn out selfish.
///
/// Cache of user k holds, for every file: all owner-k coded subfiles, plus
/// every other owner's coded subfiles whose index subset contains k.
pub fn place(
    params: &SchemeParams,
    library: &[Vec<Symbol>],
    code: &MdsCode,
) -> Result<Vec<CacheContents>, SchemeError> {
    if library.len() != params.files {
        return Err(SchemeError::WrongFileCount {
            expected: params.files,
            got: library.len(),
        });
    }
    let size = library[0].len();
    for (i, f) in library.iter().enumerate() {
        if f.len() != size {
            return Err(SchemeError::UnequalFileLengths {
                file: i + 1,
                expected: size,
                got: f.len(),
            });
        }
    }
    if !size.is_multiple_of(params.subfiles) {
        return Err(SchemeError::FileSizeNotDivisible {
            size,
            subfiles: params.subfiles,
        });
    }
    if code.k_info() != params.subfiles || code.n_coded() != params.coded_subfiles {
        return Err(SchemeError::CodeShapeMismatch {
            n_coded: params.coded_subfiles,
            subfiles: params.subfiles,
            code_n: code.n_coded(),
            code_k: code.k_info(),
        });
    }
    let sub_len = size / params.subfiles;

    // coded[n-1][j-1] = coded subfile j of file n
    let coded: Vec<Vec<Vec<Symbol>>> = par::try_map_indexed(params.files, |n0| {
        let info: Vec<Vec<Symbol>> = library[n0]
            .chunks_exact(sub_len)
            .map(|c| c.to_vec())
            .collect();
        code.encode(&info).map_err(SchemeError::from)
    })?;

    let k_total = params.users;
    let t = params.t;
    let caches = par::try_map_indexed(k_total, |k0| {
        let k = k0 + 1;
        // index slots are file-independent; enumerate them once
        let mut slots: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        for subset in subsets_of(&ground_excluding(k_total, k), t) {
            let j = subfile_index(k_total, t, k, &subset)? as usize;
            slots.push((k, subset, j));
        }
        if t >= 1 {
            for owner in 1..=k_total {
                if owner == k {
                    continue;
                }
                for partial in subsets_of(&ground_excluding_pair(k_total, owner, k), t - 1) {
                    let subset = insert_sorted(partial, k);
                    let j = subfile_index(k_total, t, owner, &subset)? as usize;
                    slots.push((owner, subset, j));
                }
            }
        }
        debug_assert_eq!(slots.len(), params.cached_per_file);
        let mut entries = BTreeMap::new();
        for n in 1..=params.files {
            for (owner, subset, j) in &slots {
                entries.insert(
                    CodedSubfileId {
                        file: n,
                        owner: *owner,
                        subset: subset.clone(),
                    },
                    coded[n - 1][j - 1].clone(),
                );
            }
        }
        Ok::<_, SchemeError>(CacheContents { user: k, entries })
    })?;
    Ok(caches)
}

fn build_payload(
    cache: &CacheContents,
    targets: &[usize],
    demands: &[usize],
    sub_len: usize,
) -> Result<Vec<Symbol>, SchemeError> {
    let sender = cache.user();
    let mut payload = vec![0 as Symbol; sub_len];
    for &s in targets {
        let subset: Vec<usize> = targets.iter().copied().filter(|&x| x != s).collect();
        let part = cache.fetch(CodedSubfileId {
            file: demands[s - 1],
            owner: sender,
            subset,
        })?;
        xor_into(&mut payload, part)?;
    }
    Ok(payload)
}

/// Independent delivery for one transmitting user: one coded message per
/// `(t+1)`-subset of the other users, in lexicographic target-set order.
/// Reads only this user's own cache and the demand vector.
pub fn deliver(
    params: &SchemeParams,
    cache: &CacheContents,
    demands: &[usize],
) -> Result<Vec<Transmission>, SchemeError> {
    params.validate_demands(demands)?;
    let sender = cache.user();
    let sub_len = cache.payload_len();
    let mut out = Vec::with_capacity(params.transmissions_per_user());
    for targets in subsets_of(&ground_excluding(params.users, sender), params.t + 1) {
        let payload = build_payload(cache, &targets, demands, sub_len)?;
        out.push(Transmission {
            sender,
            targets,
            payload,
        });
    }
    Ok(out)
}

/// Coordinated (reduced) delivery for one transmitting user.
///
/// For t >= 1 the lexicographically first `min((K-S)*C(S,t+1), C(K-2,t))`
/// transmissions across the round whose target set consists entirely of
/// selfish users are omitted (ordering: sender index, then target set). For
/// t = 0 the smallest transmitter instead omits its transmission to every
/// selfish user. Every transmitter derives its own share of the omission
/// budget from the shared non-selfish set, which is the coordination this
/// mode requires.
pub fn deliver_coordinated(
    params: &SchemeParams,
    cache: &CacheContents,
    demands: &[usize],
    nonselfish: &[usize],
) -> Result<Vec<Transmission>, SchemeError> {
    params.validate_demands(demands)?;
    params.validate_nonselfish(nonselfish)?;
    let sender = cache.user();
    if !nonselfish.contains(&sender) {
        return Err(SchemeError::SenderNotTransmitting { sender });
    }
    let sub_len = cache.payload_len();
    let is_selfish = |u: usize| nonselfish.binary_search(&u).is_err();

    let my_skip = if params.t == 0 {
        if sender == nonselfish[0] {
            params.selfish_users
        } else {
            0
        }
    } else {
        let per_sender = binom(params.selfish_users as u64, params.t as i64 + 1) as usize;
        let budget = ((params.users - params.selfish_users) * per_sender)
            .min(binom(params.users as u64 - 2, params.t as i64) as usize);
        let idx = nonselfish.iter().position(|&u| u == sender).unwrap();
        per_sender.min(budget.saturating_sub(idx * per_sender))
    };

    let mut skipped = 0usize;
    let mut out = Vec::new();
    for targets in subsets_of(&ground_excluding(params.users, sender), params.t + 1) {
        if skipped < my_skip && targets.iter().all(|&u| is_selfish(u)) {
            skipped += 1;
            continue;
        }
        let payload = build_payload(cache, &targets, demands, sub_len)?;
        out.push(Transmission {
            sender,
            targets,
            payload,
        });
    }
    Ok(out)
}

/// The coded subfiles of its demanded file one user can assemble: cached
/// ones directly, plus one peeled from each available transmission whose
/// target set contains the user. Returned as `(1-based global position,
/// payload)` pairs; positions are distinct by construction.
pub fn decode_pool(
    params: &SchemeParams,
    cache: &CacheContents,
    log: &TransmissionLog,
    nonselfish: &[usize],
    demands: &[usize],
) -> Result<Vec<(usize, Vec<Symbol>)>, SchemeError> {
    params.validate_demands(demands)?;
    params.validate_nonselfish(nonselfish)?;
    let user = cache.user();
    let wanted = demands[user - 1];

    let mut pool: Vec<(usize, Vec<Symbol>)> = Vec::new();
    for (id, payload) in cache.file_entries(wanted) {
        pool.push((id.position(params)?, payload.to_vec()));
    }
    for &sender in nonselfish {
        if sender == user {
            continue;
        }
        for subset in subsets_of(&ground_excluding_pair(params.users, user, sender), params.t) {
            let targets = insert_sorted(subset.clone(), user);
            let Some(tx) = log.get(sender, &targets) else {
                continue; // omitted in coordinated mode
            };
            let mut value = tx.to_vec();
            for &s in &targets {
                if s == user {
                    continue;
                }
                let side: Vec<usize> = targets.iter().copied().filter(|&x| x != s).collect();
                let part = cache.fetch(CodedSubfileId {
                    file: demands[s - 1],
                    owner: sender,
                    subset: side,
                })?;
                xor_into(&mut value, part)?;
            }
            pool.push((
                subfile_index(params.users, params.t, sender, &subset)? as usize,
                value,
            ));
        }
    }
    Ok(pool)
}

/// Decodes one user's demanded file from its cache plus the round's
/// transmissions. Pools coded subfiles, keeps the Q smallest global
/// positions, and erasure-decodes.
pub fn decode_user(
    params: &SchemeParams,
    cache: &CacheContents,
    log: &TransmissionLog,
    nonselfish: &[usize],
    demands: &[usize],
    code: &MdsCode,
) -> Result<Vec<Symbol>, SchemeError> {
    let mut pool = decode_pool(params, cache, log, nonselfish, demands)?;
    pool.sort_unstable_by_key(|e| e.0);
    pool.dedup_by(|a, b| a.0 == b.0);
    if pool.len() < params.subfiles {
        return Err(SchemeError::DecodeFailure {
            user: cache.user(),
            have: pool.len(),
            need: params.subfiles,
        });
    }
    pool.truncate(params.subfiles);
    let info = code.decode(&pool)?;
    Ok(info.concat())
}

/// Result of one placement + delivery + decode round.
#[derive(Debug, Clone)]
pub struct RoundOutcome {
    /// Decoded file payload per user, index k-1 for user k.
    pub decoded: Vec<Vec<Symbol>>,
    pub transmission_count: usize,
    /// Transmitted subfiles normalized to the file size: count / F.
    pub observed_load: BigRational,
}

/// Runs a full round: place, deliver from every non-selfish user
/// (independently), decode at all K users, and check every decoded file
/// against the library. Fails with the offending user on any mismatch.
pub fn run_round(
    params: &SchemeParams,
    library: &[Vec<Symbol>],
    nonselfish: &[usize],
    demands: &[usize],
    mode: DeliveryMode,
    field_order: Option<FieldOrder>,
) -> Result<RoundOutcome, SchemeError> {
    params.validate_nonselfish(nonselfish)?;
    params.validate_demands(demands)?;
    let field = match field_order {
        Some(order) => {
            let f = Field::new(order);
            f.check_block_length(params.coded_subfiles)?;
            f
        }
        None => Field::for_block_length(params.coded_subfiles)?,
    };
    let code = MdsCode::new(params.subfiles, params.coded_subfiles, field)?;
    let caches = place(params, library, &code)?;

    let per_sender: Vec<Vec<Transmission>> = par::try_map_indexed(nonselfish.len(), |i| {
        let cache = &caches[nonselfish[i] - 1];
        match mode {
            DeliveryMode::Independent => deliver(params, cache, demands),
            DeliveryMode::Coordinated => deliver_coordinated(params, cache, demands, nonselfish),
        }
    })?;
    let log = TransmissionLog::new(per_sender.into_iter().flatten().collect())?;
    let transmission_count = log.len();

    let decoded: Vec<Vec<Symbol>> = par::try_map_indexed(params.users, |k0| {
        let file = decode_user(params, &caches[k0], &log, nonselfish, demands, &code)?;
        if file != library[demands[k0] - 1] {
            return Err(SchemeError::DecodedMismatch { user: k0 + 1 });
        }
        Ok(file)
    })?;

    Ok(RoundOutcome {
        decoded,
        transmission_count,
        observed_load: ratio(transmission_count as u64, params.subfiles as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::generate_library;
    use crate::rational::ratio;

    fn setup(
        users: usize,
        selfish: usize,
        files: usize,
        t: usize,
    ) -> (SchemeParams, Vec<Vec<Symbol>>, MdsCode) {
        let params = SchemeParams::new(users, selfish, files, t).unwrap();
        let field = Field::for_block_length(params.coded_subfiles).unwrap();
        let code = MdsCode::new(params.subfiles, params.coded_subfiles, field).unwrap();
        let library = generate_library(9, files, params.subfiles, field);
        (params, library, code)
    }

    #[test]
    fn derived_counts_for_worked_example() {
        let p = SchemeParams::new(6, 2, 6, 2).unwrap();
        assert_eq!(p.subfiles, 48);
        assert_eq!(p.coded_subfiles, 60);
        assert_eq!(p.cached_per_file, 30);
        assert_eq!(p.delivered_nonselfish, 18);
        assert_eq!(p.delivered_selfish, 24);
        assert_eq!(p.transmissions_per_user(), 10);
        assert_eq!(p.total_transmissions(), 40);
        assert_eq!(p.cache_size_files(), ratio(15, 4));
    }

    #[test]
    fn derived_counts_small() {
        let p = SchemeParams::new(4, 2, 4, 1).unwrap();
        assert_eq!(p.subfiles, 8);
        assert_eq!(p.coded_subfiles, 12);
        assert_eq!(p.cached_per_file, 6);
    }

    #[test]
    fn full_caching_needs_no_transmissions() {
        let p = SchemeParams::new(5, 2, 5, 4).unwrap();
        assert_eq!(p.transmissions_per_user(), 0);
        assert_eq!(p.cache_size_files(), ratio(5, 1));
        assert_eq!(p.subfiles, p.coded_subfiles);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            SchemeParams::new(1, 0, 4, 0),
            Err(SchemeError::TooFewUsers(1))
        ));
        assert!(matches!(
            SchemeParams::new(5, 5, 5, 1),
            Err(SchemeError::TooManySelfish { .. })
        ));
        assert!(matches!(
            SchemeParams::new(5, 2, 4, 1),
            Err(SchemeError::MoreUsersThanFiles { .. })
        ));
        assert!(matches!(
            SchemeParams::new(5, 2, 5, 5),
            Err(SchemeError::CachingParamOutOfRange { .. })
        ));
    }

    #[test]
    fn counting_identity_holds_across_parameter_space() {
        for k in 2..=8 {
            for s in 0..k {
                for t in 0..k {
                    let p = SchemeParams::new(k, s, k, t).unwrap();
                    assert_eq!(p.cached_per_file + p.delivered_nonselfish, p.subfiles);
                    assert!(p.cached_per_file + p.delivered_selfish >= p.subfiles);
                }
            }
        }
    }

    #[test]
    fn placement_sizes_match_example() {
        let (params, library, code) = setup(6, 2, 6, 2);
        let caches = place(&params, &library, &code).unwrap();
        assert_eq!(caches.len(), 6);
        for cache in &caches {
            assert_eq!(cache.len(), 180);
        }
        // M = 6 * 30 / 48 = 15/4 files
        assert_eq!(ratio((6 * caches[0].len() / 6) as u64, 48), ratio(15, 4));
    }

    #[test]
    fn placement_t0_keeps_only_own_subfile() {
        let (params, library, code) = setup(4, 2, 4, 0);
        let caches = place(&params, &library, &code).unwrap();
        for cache in &caches {
            assert_eq!(cache.len(), params.files); // one entry per file
            for (id, _) in cache.iter() {
                assert_eq!(id.owner, cache.user());
                assert!(id.subset.is_empty());
            }
        }
        assert_eq!(params.cache_size_files(), ratio(2, 1)); // N/(K-S)
    }

    #[test]
    fn placement_full_replication_at_max_t() {
        let (params, library, code) = setup(4, 1, 4, 3);
        let caches = place(&params, &library, &code).unwrap();
        for cache in &caches {
            assert_eq!(cache.len(), params.files * params.coded_subfiles);
        }
    }

    #[test]
    fn placement_covers_every_position_with_multiplicity() {
        // position (k, T) lives in the owner's cache and in each cache of T
        let (params, library, code) = setup(5, 2, 5, 2);
        let caches = place(&params, &library, &code).unwrap();
        let mut count = vec![0usize; params.coded_subfiles];
        for cache in &caches {
            for (id, _) in cache.file_entries(1) {
                count[id.position(&params).unwrap() - 1] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == params.t + 1));
    }

    #[test]
    fn placement_rejects_indivisible_files() {
        let (params, _, code) = setup(4, 1, 4, 1);
        let field = code.field();
        let library = generate_library(1, 4, params.subfiles + 1, field);
        assert!(matches!(
            place(&params, &library, &code),
            Err(SchemeError::FileSizeNotDivisible { .. })
        ));
    }

    #[test]
    fn placement_rejects_wrong_code_shape() {
        let (params, library, code) = setup(4, 1, 4, 1);
        let other = MdsCode::new(3, 12, code.field()).unwrap();
        assert!(matches!(
            place(&params, &library, &other),
            Err(SchemeError::CodeShapeMismatch { .. })
        ));
    }

    #[test]
    fn delivery_payload_matches_example_transmission() {
        // user 2's transmission for targets {1,3,4} under d = (1,...,6)
        let (params, library, code) = setup(6, 2, 6, 2);
        let caches = place(&params, &library, &code).unwrap();
        let demands: Vec<usize> = (1..=6).collect();
        let txs = deliver(&params, &caches[1], &demands).unwrap();
        assert_eq!(txs.len(), 10);
        let tx = txs.iter().find(|tx| tx.targets == [1, 3, 4]).unwrap();

        let coded: Vec<Vec<Vec<Symbol>>> = library
            .iter()
            .map(|f| {
                let info: Vec<Vec<Symbol>> =
                    f.chunks_exact(f.len() / 48).map(|c| c.to_vec()).collect();
                code.encode(&info).unwrap()
            })
            .collect();
        let pos = |file: usize, subset: &[usize]| -> Vec<Symbol> {
            let j = subfile_index(6, 2, 2, subset).unwrap() as usize;
            coded[file - 1][j - 1].clone()
        };
        let mut expected = pos(1, &[3, 4]);
        xor_into(&mut expected, &pos(3, &[1, 4])).unwrap();
        xor_into(&mut expected, &pos(4, &[1, 3])).unwrap();
        assert_eq!(tx.payload, expected);
    }

    #[test]
    fn delivery_is_empty_at_max_t() {
        let (params, library, code) = setup(4, 1, 4, 3);
        let caches = place(&params, &library, &code).unwrap();
        let txs = deliver(&params, &caches[0], &[1, 2, 3, 4]).unwrap();
        assert!(txs.is_empty());
    }

    #[test]
    fn worked_example_round() {
        let (params, library, _) = setup(6, 2, 6, 2);
        let nonselfish = [1, 2, 3, 6];
        let demands: Vec<usize> = (1..=6).collect();
        let outcome = run_round(
            &params,
            &library,
            &nonselfish,
            &demands,
            DeliveryMode::Independent,
            None,
        )
        .unwrap();
        assert_eq!(outcome.transmission_count, 40);
        assert_eq!(outcome.observed_load, ratio(5, 6));
        for (k0, file) in outcome.decoded.iter().enumerate() {
            assert_eq!(file, &library[demands[k0] - 1]);
        }
    }

    #[test]
    fn pool_sizes_match_decodability_counts() {
        let (params, library, code) = setup(6, 2, 6, 2);
        let caches = place(&params, &library, &code).unwrap();
        let nonselfish = [1, 2, 3, 6];
        let demands: Vec<usize> = (1..=6).collect();
        let txs: Vec<Transmission> = nonselfish
            .iter()
            .flat_map(|&k| deliver(&params, &caches[k - 1], &demands).unwrap())
            .collect();
        let log = TransmissionLog::new(txs).unwrap();
        // non-selfish user 1: 30 cached + 18 delivered = Q = 48
        let pool = decode_pool(&params, &caches[0], &log, &nonselfish, &demands).unwrap();
        assert_eq!(pool.len(), 48);
        // selfish user 4: 30 cached + 24 delivered
        let pool = decode_pool(&params, &caches[3], &log, &nonselfish, &demands).unwrap();
        assert_eq!(pool.len(), 54);
    }

    #[test]
    fn decode_from_cache_alone_at_max_t() {
        let (params, library, _) = setup(4, 1, 4, 3);
        let outcome = run_round(
            &params,
            &library,
            &[1, 2, 4],
            &[4, 3, 2, 1],
            DeliveryMode::Independent,
            None,
        )
        .unwrap();
        assert_eq!(outcome.transmission_count, 0);
        assert_eq!(outcome.observed_load, ratio(0, 1));
    }

    #[test]
    fn decode_fails_when_transmitters_are_missing() {
        let (params, library, code) = setup(4, 1, 4, 1);
        let caches = place(&params, &library, &code).unwrap();
        let nonselfish = [1, 2, 3];
        let demands = [1, 2, 3, 4];
        // drop user 3's transmissions; user 1 has no decode slack and fails
        let txs: Vec<Transmission> = [1, 2]
            .iter()
            .flat_map(|&k| deliver(&params, &caches[k - 1], &demands).unwrap())
            .collect();
        let log = TransmissionLog::new(txs).unwrap();
        let err = decode_user(&params, &caches[0], &log, &nonselfish, &demands, &code).unwrap_err();
        assert_eq!(
            err,
            SchemeError::DecodeFailure {
                user: 1,
                have: 8,
                need: 10
            }
        );
    }

    #[test]
    fn coordinated_round_reduces_load() {
        // (6,4,6) t=2: budget min(2*C(4,3), C(4,2)) = 6 of 20 transmissions
        let (params, library, _) = setup(6, 4, 6, 2);
        let nonselfish = [2, 5];
        let demands: Vec<usize> = (1..=6).collect();
        let outcome = run_round(
            &params,
            &library,
            &nonselfish,
            &demands,
            DeliveryMode::Coordinated,
            None,
        )
        .unwrap();
        assert_eq!(params.subfiles, 36);
        assert_eq!(outcome.transmission_count, 14);
        assert_eq!(outcome.observed_load, ratio(14, 36));
    }

    #[test]
    fn coordinated_round_t0() {
        // t = 0: smallest transmitter drops its messages to the selfish users
        let (params, library, _) = setup(6, 2, 6, 0);
        let nonselfish = [1, 2, 3, 6];
        let demands = [6, 5, 4, 3, 2, 1];
        let outcome = run_round(
            &params,
            &library,
            &nonselfish,
            &demands,
            DeliveryMode::Coordinated,
            None,
        )
        .unwrap();
        assert_eq!(params.subfiles, 4);
        assert_eq!(outcome.transmission_count, 4 * 5 - 2);
        assert_eq!(outcome.observed_load, ratio(18, 4)); // K - K/(K-S) = 9/2
    }

    #[test]
    fn coordinated_equals_independent_when_budget_is_zero() {
        // (6,2,6) t=2: C(S, t+1) = C(2,3) = 0, nothing may be skipped
        let (params, library, _) = setup(6, 2, 6, 2);
        let nonselfish = [1, 2, 3, 6];
        let demands: Vec<usize> = (1..=6).collect();
        let a = run_round(
            &params,
            &library,
            &nonselfish,
            &demands,
            DeliveryMode::Independent,
            None,
        )
        .unwrap();
        let b = run_round(
            &params,
            &library,
            &nonselfish,
            &demands,
            DeliveryMode::Coordinated,
            None,
        )
        .unwrap();
        assert_eq!(a.transmission_count, b.transmission_count);
        assert_eq!(a.observed_load, b.observed_load);
    }

    #[test]
    fn invalid_round_inputs_are_rejected() {
        let (params, library, _) = setup(4, 1, 4, 1);
        let err = run_round(
            &params,
            &library,
            &[1, 2],
            &[1, 2, 3, 4],
            DeliveryMode::Independent,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::InvalidNonselfishSet { .. }));
        let err = run_round(
            &params,
            &library,
            &[1, 2, 3],
            &[1, 2, 3, 9],
            DeliveryMode::Independent,
            None,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            SchemeError::DemandOutOfRange {
                user: 4,
                demand: 9,
                files: 4
            }
        ));
        let err = run_round(
            &params,
            &library,
            &[1, 2, 3],
            &[1, 2, 3],
            DeliveryMode::Independent,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::WrongDemandCount { .. }));
    }

    #[test]
    fn explicit_field_override() {
        let (params, _, _) = setup(4, 1, 4, 1);
        let library = generate_library(3, 4, params.subfiles, Field::new(FieldOrder::Gf65536));
        let outcome = run_round(
            &params,
            &library,
            &[1, 2, 3],
            &[1, 2, 3, 4],
            DeliveryMode::Independent,
            Some(FieldOrder::Gf65536),
        )
        .unwrap();
        assert_eq!(outcome.observed_load, ratio(9, 10));
    }
}
