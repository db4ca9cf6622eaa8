//! Round driver with demand-independent work hoisted out of the loop.
//!
//! Placement, the MDS code, and each user's decode position set depend only
//! on the configuration and the transmitter set, never on the demand
//! vector, so a driver solves each user's linear system once and replays
//! many demand vectors cheaply. Every round still checks each decoded file
//! byte-for-byte against the library.

use pcd2d::gf::Symbol;
use pcd2d::mds::{DecodePlan, MdsCode};
use pcd2d::scheme::{
    decode_pool, deliver, deliver_coordinated, CacheContents, DeliveryMode, SchemeError,
    SchemeParams, TransmissionLog,
};

pub struct RoundDriver<'a> {
    params: &'a SchemeParams,
    code: &'a MdsCode,
    caches: &'a [CacheContents],
    library: &'a [Vec<Symbol>],
    nonselfish: Vec<usize>,
    mode: DeliveryMode,
    plans: Vec<Option<(Vec<usize>, DecodePlan)>>,
}

#[derive(Debug, Clone, Copy)]
pub struct DriverOutcome {
    pub transmission_count: usize,
}

impl<'a> RoundDriver<'a> {
    pub fn new(
        params: &'a SchemeParams,
        code: &'a MdsCode,
        caches: &'a [CacheContents],
        library: &'a [Vec<Symbol>],
        nonselfish: Vec<usize>,
        mode: DeliveryMode,
    ) -> Result<Self, SchemeError> {
        params.validate_nonselfish(&nonselfish)?;
        Ok(RoundDriver {
            params,
            code,
            caches,
            library,
            nonselfish,
            mode,
            plans: vec![None; params.users],
        })
    }

    pub fn nonselfish(&self) -> &[usize] {
        &self.nonselfish
    }

    /// Runs one delivery + decode round for `demands` and verifies every
    /// user's decoded file against the library.
    pub fn run(&mut self, demands: &[usize]) -> Result<DriverOutcome, SchemeError> {
        let mut transmissions = Vec::with_capacity(self.params.total_transmissions());
        for &sender in &self.nonselfish {
            let cache = &self.caches[sender - 1];
            let txs = match self.mode {
                DeliveryMode::Independent => deliver(self.params, cache, demands)?,
                DeliveryMode::Coordinated => {
                    deliver_coordinated(self.params, cache, demands, &self.nonselfish)?
                }
            };
            transmissions.extend(txs);
        }
        let log = TransmissionLog::new(transmissions)?;
        let transmission_count = log.len();

        for user in 1..=self.params.users {
            let mut pool = decode_pool(
                self.params,
                &self.caches[user - 1],
                &log,
                &self.nonselfish,
                demands,
            )?;
            pool.sort_unstable_by_key(|e| e.0);
            if pool.len() < self.params.subfiles {
                return Err(SchemeError::DecodeFailure {
                    user,
                    have: pool.len(),
                    need: self.params.subfiles,
                });
            }
            pool.truncate(self.params.subfiles);
            let positions: Vec<usize> = pool.iter().map(|e| e.0).collect();
            if self.plans[user - 1].is_none() {
                let plan = self.code.decode_plan(&positions)?;
                self.plans[user - 1] = Some((positions.clone(), plan));
            }
            let (expected_positions, plan) = self.plans[user - 1].as_ref().unwrap();
            debug_assert_eq!(&positions, expected_positions);
            let payloads: Vec<&[Symbol]> = pool.iter().map(|e| e.1.as_slice()).collect();
            let decoded = plan.apply(&payloads)?.concat();
            if decoded != self.library[demands[user - 1] - 1] {
                return Err(SchemeError::DecodedMismatch { user });
            }
        }
        Ok(DriverOutcome { transmission_count })
    }
}
