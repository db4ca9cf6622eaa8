//! Binary extension field arithmetic for GF(2^8) and GF(2^16).
//!
//! Multiplication is table-driven (log/antilog). Tables are generated once
//! per field from a fixed primitive polynomial, so encoded data is
//! bit-reproducible across platforms:
//!
//! * GF(2^8): `x^8 + x^4 + x^3 + x^2 + 1` (0x11D), generator `alpha = 2`.
//! * GF(2^16): `x^16 + x^12 + x^3 + x + 1` (0x1100B), generator `alpha = 2`.
//!
//! The canonical element enumeration used for MDS evaluation points is
//! `0, 1, alpha, alpha^2, ...` — i.e. `element(0) = 0` and
//! `element(i) = alpha^(i-1)` for `i >= 1`.

use std::sync::OnceLock;
use thiserror::Error;

/// One field element. GF(2^8) elements occupy the low byte.
pub type Symbol = u16;

pub const GF256_POLY: u32 = 0x11D;
pub const GF65536_POLY: u32 = 0x1100B;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error(
        "field of order {order} is too small for {needed} coded symbols; need order >= {needed}"
    )]
    FieldTooSmall { order: u32, needed: usize },
    #[error("no supported field has order >= {needed} (largest supported is 65536)")]
    NoSupportedField { needed: usize },
    #[error("unsupported field order {order}; supported orders are 256 and 65536")]
    UnsupportedOrder { order: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOrder {
    Gf256,
    Gf65536,
}

struct Tables {
    exp: Vec<u16>, // alpha^i for i in 0..2*(q-1), doubled to skip the mod
    log: Vec<u16>, // log[x] for x in 1..q; log[0] is a sentinel
}

fn build_tables(order: u32, poly: u32) -> Tables {
    let q = order as usize;
    let mut exp = vec![0u16; 2 * (q - 1)];
    let mut log = vec![0u16; q];
    let mut x: u32 = 1;
    for (i, e) in exp.iter_mut().take(q - 1).enumerate() {
        *e = x as u16;
        debug_assert!(i == 0 || log[x as usize] == 0, "generator is not primitive");
        log[x as usize] = i as u16;
        x <<= 1;
        if x & order != 0 {
            x ^= poly;
        }
    }
    debug_assert_eq!(x, 1, "generator cycle does not close at q-1");
    for i in 0..q - 1 {
        exp[q - 1 + i] = exp[i];
    }
    Tables { exp, log }
}

fn tables_256() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| build_tables(256, GF256_POLY))
}

fn tables_65536() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| build_tables(65536, GF65536_POLY))
}

/// A handle to one of the two supported fields. Cheap to copy; the backing
/// tables are built once per process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    order: FieldOrder,
}

impl Field {
    pub fn new(order: FieldOrder) -> Self {
        Field { order }
    }

    /// Field handle from a numeric order (256 or 65536).
    pub fn with_order(order: u32) -> Result<Self, FieldError> {
        match order {
            256 => Ok(Field::new(FieldOrder::Gf256)),
            65536 => Ok(Field::new(FieldOrder::Gf65536)),
            _ => Err(FieldError::UnsupportedOrder { order }),
        }
    }

    /// Smallest supported field for a code of `n_coded` symbols:
    /// GF(2^8) when `n_coded <= 255`, otherwise GF(2^16).
    pub fn for_block_length(n_coded: usize) -> Result<Self, FieldError> {
        if n_coded <= 255 {
            Ok(Field::new(FieldOrder::Gf256))
        } else if n_coded <= 65535 {
            Ok(Field::new(FieldOrder::Gf65536))
        } else {
            Err(FieldError::NoSupportedField { needed: n_coded })
        }
    }

    /// Rejects block lengths exceeding the number of available evaluation
    /// points.
    pub fn check_block_length(&self, n_coded: usize) -> Result<(), FieldError> {
        if n_coded as u64 > self.order() as u64 {
            return Err(FieldError::FieldTooSmall {
                order: self.order(),
                needed: n_coded,
            });
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        match self.order {
            FieldOrder::Gf256 => 256,
            FieldOrder::Gf65536 => 65536,
        }
    }

    pub fn bits(&self) -> u32 {
        match self.order {
            FieldOrder::Gf256 => 8,
            FieldOrder::Gf65536 => 16,
        }
    }

    /// Mask selecting the valid symbol bits for this field.
    pub fn symbol_mask(&self) -> u64 {
        self.order() as u64 - 1
    }

    fn tables(&self) -> &'static Tables {
        match self.order {
            FieldOrder::Gf256 => tables_256(),
            FieldOrder::Gf65536 => tables_65536(),
        }
    }

    /// Canonical evaluation-point enumeration: 0, 1, alpha, alpha^2, ...
    pub fn element(&self, i: usize) -> Symbol {
        debug_assert!((i as u64) < self.order() as u64);
        if i == 0 {
            0
        } else {
            self.tables().exp[i - 1]
        }
    }

    /// Addition is XOR in characteristic 2 (and so is subtraction).
    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = self.tables();
        t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self, a: Symbol) -> Option<Symbol> {
        if a == 0 {
            return None;
        }
        let t = self.tables();
        let q1 = self.order() as usize - 1;
        Some(t.exp[q1 - t.log[a as usize] as usize])
    }

    #[inline]
    pub fn div(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 {
            return 0;
        }
        let b_inv = self.inv(b).expect("division by zero");
        self.mul(a, b_inv)
    }
}
