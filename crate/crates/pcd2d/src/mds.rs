//! Systematic MDS erasure code applied column-wise to subfile payloads.
//!
//! The generator starts from a `k_info x n_coded` Vandermonde matrix on the
//! first `n_coded` canonical field elements and is row-reduced so the first
//! `k_info` columns form the identity. Every `k_info`-column submatrix stays
//! invertible under that reduction, so the information word can be recovered
//! from any `k_info` coded positions. Construction is deterministic: the same
//! `(k_info, n_coded, field)` always yields the same matrix.

use crate::gf::{Field, FieldError, Symbol};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MdsError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid code dimensions: k_info={k_info}, n_coded={n_coded}")]
    InvalidDimensions { k_info: usize, n_coded: usize },
    #[error("expected {expected} information subfiles, got {got}")]
    WrongInfoCount { expected: usize, got: usize },
    #[error("ragged payloads: expected length {expected}, got {got}")]
    RaggedPayloads { expected: usize, got: usize },
    #[error("position {position} is out of range 1..={n_coded}")]
    PositionOutOfRange { position: usize, n_coded: usize },
    #[error("duplicate position {position}")]
    DuplicatePosition { position: usize },
    #[error(
        "insufficient shares: have {have} distinct positions, need {need} ({missing} missing)"
    )]
    InsufficientShares {
        have: usize,
        need: usize,
        missing: usize,
    },
    #[error("inconsistent share at position {position}")]
    InconsistentShare { position: usize },
    #[error("selected columns are singular (not an MDS generator?)")]
    SingularSubmatrix,
}

/// XOR of two equal-length payloads (field addition in characteristic 2).
pub fn xor_payloads(a: &[Symbol], b: &[Symbol]) -> Result<Vec<Symbol>, MdsError> {
    if a.len() != b.len() {
        return Err(MdsError::RaggedPayloads {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x ^ y).collect())
}

/// In-place XOR accumulate: `dst ^= src`.
pub fn xor_into(dst: &mut [Symbol], src: &[Symbol]) -> Result<(), MdsError> {
    if dst.len() != src.len() {
        return Err(MdsError::RaggedPayloads {
            expected: dst.len(),
            got: src.len(),
        });
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
    Ok(())
}

/// Gauss-Jordan inverse of a k x k row-major matrix. None if singular.
fn invert(field: Field, mat: &[Symbol], k: usize) -> Option<Vec<Symbol>> {
    let mut a = mat.to_vec();
    let mut inv = vec![0 as Symbol; k * k];
    for i in 0..k {
        inv[i * k + i] = 1;
    }
    for col in 0..k {
        let pivot = (col..k).find(|&r| a[r * k + col] != 0)?;
        if pivot != col {
            for j in 0..k {
                a.swap(col * k + j, pivot * k + j);
                inv.swap(col * k + j, pivot * k + j);
            }
        }
        let p_inv = field.inv(a[col * k + col])?;
        for j in 0..k {
            a[col * k + j] = field.mul(a[col * k + j], p_inv);
            inv[col * k + j] = field.mul(inv[col * k + j], p_inv);
        }
        for r in 0..k {
            if r == col {
                continue;
            }
            let factor = a[r * k + col];
            if factor == 0 {
                continue;
            }
            for j in 0..k {
                let t = field.mul(factor, a[col * k + j]);
                a[r * k + j] ^= t;
                let t = field.mul(factor, inv[col * k + j]);
                inv[r * k + j] ^= t;
            }
        }
    }
    Some(inv)
}

/// An `[n_coded, k_info]` systematic MDS code over a binary extension field.
#[derive(Debug, Clone)]
pub struct MdsCode {
    field: Field,
    k_info: usize,
    n_coded: usize,
    gen: Vec<Symbol>, // row-major k_info x n_coded
}

impl MdsCode {
    pub fn new(k_info: usize, n_coded: usize, field: Field) -> Result<Self, MdsError> {
        if k_info == 0 || k_info > n_coded {
            return Err(MdsError::InvalidDimensions { k_info, n_coded });
        }
        field.check_block_length(n_coded)?;

        // Vandermonde rows: row i holds x_j^i over the canonical points x_j.
        let mut vand = vec![0 as Symbol; k_info * n_coded];
        for j in 0..n_coded {
            let x = field.element(j);
            let mut p: Symbol = 1;
            for i in 0..k_info {
                vand[i * n_coded + j] = p;
                p = field.mul(p, x);
            }
        }

        // Row-reduce so the leading k_info columns become the identity.
        let mut lead = vec![0 as Symbol; k_info * k_info];
        for i in 0..k_info {
            for j in 0..k_info {
                lead[i * k_info + j] = vand[i * n_coded + j];
            }
        }
        let lead_inv = invert(field, &lead, k_info).ok_or(MdsError::SingularSubmatrix)?;
        let mut gen = vec![0 as Symbol; k_info * n_coded];
        for i in 0..k_info {
            for j in 0..n_coded {
                let mut acc: Symbol = 0;
                for l in 0..k_info {
                    acc ^= field.mul(lead_inv[i * k_info + l], vand[l * n_coded + j]);
                }
                gen[i * n_coded + j] = acc;
            }
        }
        Ok(MdsCode {
            field,
            k_info,
            n_coded,
            gen,
        })
    }

    pub fn k_info(&self) -> usize {
        self.k_info
    }

    pub fn n_coded(&self) -> usize {
        self.n_coded
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Generator entry at (row, col), both 0-based.
    pub fn generator_entry(&self, row: usize, col: usize) -> Symbol {
        self.gen[row * self.n_coded + col]
    }

    fn check_payload_len(&self, expected: usize, got: usize) -> Result<(), MdsError> {
        if expected != got {
            return Err(MdsError::RaggedPayloads { expected, got });
        }
        Ok(())
    }

    /// Encodes `k_info` equal-length subfiles into `n_coded` coded subfiles.
    /// The first `k_info` outputs equal the inputs (systematic form).
    pub fn encode(&self, info: &[Vec<Symbol>]) -> Result<Vec<Vec<Symbol>>, MdsError> {
        if info.len() != self.k_info {
            return Err(MdsError::WrongInfoCount {
                expected: self.k_info,
                got: info.len(),
            });
        }
        let len = info[0].len();
        for sub in info {
            self.check_payload_len(len, sub.len())?;
        }
        let mut out = Vec::with_capacity(self.n_coded);
        for sub in info {
            out.push(sub.clone());
        }
        for j in self.k_info..self.n_coded {
            out.push(self.column_payload(info, j));
        }
        Ok(out)
    }

    /// The coded payload at 0-based column `j` for the given information word.
    fn column_payload(&self, info: &[Vec<Symbol>], j: usize) -> Vec<Symbol> {
        let len = info[0].len();
        let mut acc = vec![0 as Symbol; len];
        for (i, sub) in info.iter().enumerate() {
            let c = self.gen[i * self.n_coded + j];
            if c == 0 {
                continue;
            }
            if c == 1 {
                for (a, &s) in acc.iter_mut().zip(sub) {
                    *a ^= s;
                }
            } else {
                for (a, &s) in acc.iter_mut().zip(sub) {
                    *a ^= self.field.mul(c, s);
                }
            }
        }
        acc
    }

    /// Precomputes the linear solve for a fixed set of exactly `k_info`
    /// distinct 1-based positions. The plan can then be applied to any
    /// payloads observed at those positions.
    pub fn decode_plan(&self, positions: &[usize]) -> Result<DecodePlan, MdsError> {
        if positions.len() != self.k_info {
            return Err(MdsError::InsufficientShares {
                have: positions.len().min(self.k_info),
                need: self.k_info,
                missing: self.k_info.saturating_sub(positions.len()),
            });
        }
        let mut seen = vec![false; self.n_coded];
        for &p in positions {
            if p < 1 || p > self.n_coded {
                return Err(MdsError::PositionOutOfRange {
                    position: p,
                    n_coded: self.n_coded,
                });
            }
            if seen[p - 1] {
                return Err(MdsError::DuplicatePosition { position: p });
            }
            seen[p - 1] = true;
        }
        let k = self.k_info;
        let mut sel = vec![0 as Symbol; k * k];
        for (c, &p) in positions.iter().enumerate() {
            for r in 0..k {
                sel[r * k + c] = self.gen[r * self.n_coded + (p - 1)];
            }
        }
        let inv = invert(self.field, &sel, k).ok_or(MdsError::SingularSubmatrix)?;
        Ok(DecodePlan {
            field: self.field,
            k_info: k,
            positions: positions.to_vec(),
            inv,
        })
    }

    /// Recovers the information subfiles from any `k_info` distinct coded
    /// positions. Shares are `(1-based position, payload)` pairs; when more
    /// than `k_info` distinct positions are supplied the smallest positions
    /// are used for the solve and every remaining share is checked for
    /// consistency against the recovered word.
    pub fn decode(&self, shares: &[(usize, Vec<Symbol>)]) -> Result<Vec<Vec<Symbol>>, MdsError> {
        if shares.is_empty() {
            return Err(MdsError::InsufficientShares {
                have: 0,
                need: self.k_info,
                missing: self.k_info,
            });
        }
        let len = shares[0].1.len();
        let mut by_pos: Vec<Option<&[Symbol]>> = vec![None; self.n_coded];
        for (p, payload) in shares {
            let p = *p;
            if p < 1 || p > self.n_coded {
                return Err(MdsError::PositionOutOfRange {
                    position: p,
                    n_coded: self.n_coded,
                });
            }
            self.check_payload_len(len, payload.len())?;
            match by_pos[p - 1] {
                None => by_pos[p - 1] = Some(payload),
                Some(existing) => {
                    if existing != payload.as_slice() {
                        return Err(MdsError::InconsistentShare { position: p });
                    }
                }
            }
        }
        let distinct: Vec<usize> = (1..=self.n_coded)
            .filter(|&p| by_pos[p - 1].is_some())
            .collect();
        if distinct.len() < self.k_info {
            return Err(MdsError::InsufficientShares {
                have: distinct.len(),
                need: self.k_info,
                missing: self.k_info - distinct.len(),
            });
        }
        let used = &distinct[..self.k_info];
        let plan = self.decode_plan(used)?;
        let payloads: Vec<&[Symbol]> = used.iter().map(|&p| by_pos[p - 1].unwrap()).collect();
        let info = plan.apply(&payloads)?;
        // every provided share must agree with the recovered word
        for &p in &distinct[self.k_info..] {
            let expected = self.column_payload(&info, p - 1);
            if expected.as_slice() != by_pos[p - 1].unwrap() {
                return Err(MdsError::InconsistentShare { position: p });
            }
        }
        Ok(info)
    }
}

/// Precomputed solve for one fixed set of coded positions.
#[derive(Debug, Clone)]
pub struct DecodePlan {
    field: Field,
    k_info: usize,
    positions: Vec<usize>,
    inv: Vec<Symbol>, // row-major k x k, information = observed * inv
}

impl DecodePlan {
    /// The 1-based positions this plan expects, in call order.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Applies the solve to payloads observed at `self.positions()`, in the
    /// same order, yielding the `k_info` information subfiles.
    pub fn apply(&self, payloads: &[&[Symbol]]) -> Result<Vec<Vec<Symbol>>, MdsError> {
        if payloads.len() != self.k_info {
            return Err(MdsError::WrongInfoCount {
                expected: self.k_info,
                got: payloads.len(),
            });
        }
        let len = payloads[0].len();
        for p in payloads {
            if p.len() != len {
                return Err(MdsError::RaggedPayloads {
                    expected: len,
                    got: p.len(),
                });
            }
        }
        let k = self.k_info;
        let mut out = vec![vec![0 as Symbol; len]; k];
        for (j, payload) in payloads.iter().enumerate() {
            for (i, dst) in out.iter_mut().enumerate() {
                let c = self.inv[j * k + i];
                if c == 0 {
                    continue;
                }
                if c == 1 {
                    for (d, &s) in dst.iter_mut().zip(*payload) {
                        *d ^= s;
                    }
                } else {
                    for (d, &s) in dst.iter_mut().zip(*payload) {
                        *d ^= self.field.mul(c, s);
                    }
                }
            }
        }
        Ok(out)
    }
}
