//! Round-bound sweeps over connection sets.
//!
//! Every instance `Cay(Z_n, S)` is refined from its initial S-module to the
//! stable one and compared with `(offset + d(n)) * ceil(log2 n)`; with
//! cross-checking on, the generic 2-WL engine runs too and must agree on the
//! round count and on the final S-module.
//!
//! Connection sets are bitmasks over element indices: bit `i` set means
//! `i` is in `S`, so bit 0 is always clear.
//!
//! Sampled mode draws masks from a 64-bit multiplicative congruential
//! generator: `state_0 = 2 * seed + 1`, `state_{k+1} = state_k *
//! 0xd1342543de82ef95 mod 2^64`, and each draw advances the state once and
//! uses its top `n - 1` bits `r` as the mask `r << 1`. One generator serves
//! the whole n range, in ascending n; draws repeat until `count` distinct
//! masks are collected for that `n` (or all of them exist).

use std::collections::BTreeSet;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::CayleyGraph;
use crate::group::{ceil_log2, power_class_count, GroupSpec};
use crate::par::{self, Execution};
use crate::ring::{refine_to_stable, RefinementOperator};
use crate::wl::{induced_smodule, initial_pair_coloring, initial_smodule, wl2_stabilize_from};

pub const EXHAUSTIVE_LIMIT: usize = 20;
pub const SAMPLED_LIMIT: usize = 64;
pub const CSV_HEADER: &str = "n,mask,rounds_smodule,rounds_wl2,bound,d";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub mode: SweepMode,
    /// Also run the generic 2-WL engine on every instance.
    pub cross_check: bool,
    /// The bound is `(bound_offset + d(n)) * ceil(log2 n)`.
    pub bound_offset: usize,
    pub execution: Execution,
}

impl SweepConfig {
    pub fn exhaustive(n_min: usize, n_max: usize) -> Self {
        SweepConfig {
            n_min,
            n_max,
            mode: SweepMode::Exhaustive,
            cross_check: false,
            bound_offset: 2,
            execution: Execution::default(),
        }
    }

    pub fn sampled(n_min: usize, n_max: usize, seed: u64, count: usize) -> Self {
        SweepConfig {
            mode: SweepMode::Sampled { seed, count },
            ..SweepConfig::exhaustive(n_min, n_max)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_min > self.n_max {
            return Err(Error::Config(format!(
                "n range {}..={} must satisfy 2 <= min <= max",
                self.n_min, self.n_max
            )));
        }
        let limit = match self.mode {
            SweepMode::Exhaustive => EXHAUSTIVE_LIMIT,
            SweepMode::Sampled { .. } => SAMPLED_LIMIT,
        };
        if self.n_max > limit {
            return Err(Error::Config(format!("n = {} exceeds the limit {limit} for this mode", self.n_max)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    /// Lowercase hex, `0x` prefixed.
    pub mask: String,
    pub rounds_smodule: usize,
    pub rounds_wl2: Option<usize>,
    pub bound: usize,
    pub d: usize,
}

impl SweepRecord {
    pub fn mask_value(&self) -> u64 {
        u64::from_str_radix(&self.mask[2..], 16).expect("written by this module")
    }

    pub fn csv_row(&self) -> String {
        let wl2 = self.rounds_wl2.map_or(String::new(), |r| r.to_string());
        format!("{},{},{},{},{},{}", self.n, self.mask, self.rounds_smodule, wl2, self.bound, self.d)
    }
}

#[derive(Clone, Debug)]
pub struct Mcg {
    state: u64,
}

impl Mcg {
    pub const MULTIPLIER: u64 = 0xd134_2543_de82_ef95;

    pub fn new(seed: u64) -> Self {
        Mcg { state: seed << 1 | 1 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER);
        self.state
    }

    /// Top `bits` bits of the next state; `1 <= bits <= 64`.
    pub fn next_bits(&mut self, bits: u32) -> u64 {
        self.next_u64() >> (64 - bits)
    }
}

/// Masks that a sampled sweep visits for each `n`, ascending.
pub fn sampled_masks(n_min: usize, n_max: usize, seed: u64, count: usize) -> Vec<(usize, Vec<u64>)> {
    let mut rng = Mcg::new(seed);
    (n_min..=n_max)
        .map(|n| {
            let total = if n > 63 { u64::MAX } else { 1u64 << (n - 1) };
            let want = (count as u64).min(total) as usize;
            let mut seen = BTreeSet::new();
            while seen.len() < want {
                seen.insert(rng.next_bits(n as u32 - 1) << 1);
            }
            (n, seen.into_iter().collect())
        })
        .collect()
}

fn instances(cfg: &SweepConfig) -> Vec<(usize, u64)> {
    match cfg.mode {
        SweepMode::Exhaustive => (cfg.n_min..=cfg.n_max)
            .flat_map(|n| (0..1u64 << (n - 1)).map(move |r| (n, r << 1)))
            .collect(),
        SweepMode::Sampled { seed, count } => sampled_masks(cfg.n_min, cfg.n_max, seed, count)
            .into_iter()
            .flat_map(|(n, masks)| masks.into_iter().map(move |m| (n, m)))
            .collect(),
    }
}

/// Measures one instance over an arbitrary group. The bound uses `d(G)`,
/// the number of power-equivalence classes.
pub fn measure(spec: &GroupSpec, mask: u64, cross_check: bool, bound_offset: usize) -> Result<SweepRecord> {
    let cay = CayleyGraph::from_mask(spec.clone(), mask)?;
    let start = initial_smodule(spec, &cay.con);
    let algebraic = refine_to_stable(spec, &start, RefinementOperator::Full)?;
    let rounds_wl2 = if cross_check {
        let trace = wl2_stabilize_from(initial_pair_coloring(&cay.to_digraph()), Execution::Sequential);
        let generic = induced_smodule(&trace.final_state, spec)?;
        if trace.rounds != algebraic.rounds || generic != algebraic.final_state {
            return Err(Error::Violation(format!(
                "engines disagree on {}: 2-WL {} rounds -> {generic}, S-module {} rounds -> {}",
                cay.describe(),
                trace.rounds,
                algebraic.rounds,
                algebraic.final_state
            )));
        }
        Some(trace.rounds)
    } else {
        None
    };
    let d = power_class_count(spec);
    let bound = (bound_offset + d) * ceil_log2(spec.order()) as usize;
    Ok(SweepRecord {
        n: spec.order(),
        mask: format!("{mask:#x}"),
        rounds_smodule: algebraic.rounds,
        rounds_wl2,
        bound,
        d,
    })
}

fn check_bound(r: &SweepRecord) -> Result<()> {
    if r.rounds_smodule > r.bound {
        return Err(Error::Violation(format!(
            "bound violated at n={} mask={}: {} rounds > {}",
            r.n, r.mask, r.rounds_smodule, r.bound
        )));
    }
    Ok(())
}

/// One record per `(n, S)`, sorted by `(n, mask)`. Stops at the first
/// violation in that order, whatever the parallelism.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let specs: Vec<GroupSpec> = (0..=cfg.n_max)
        .map(|n| GroupSpec::cyclic(n.max(1)))
        .collect::<Result<_>>()?;
    let jobs = instances(cfg);
    let results = par::map(cfg.execution, &jobs, |&(n, mask)| {
        measure(&specs[n], mask, cfg.cross_check, cfg.bound_offset)
    });
    results
        .into_iter()
        .map(|r| r.and_then(|rec| check_bound(&rec).map(|()| rec)))
        .collect()
}

/// Every connection set of an arbitrary abelian group, sorted by mask.
pub fn run_group_sweep(spec: &GroupSpec, cross_check: bool, execution: Execution) -> Result<Vec<SweepRecord>> {
    let n = spec.order();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::SizeLimit {
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let masks: Vec<u64> = (0..1u64 << (n - 1)).map(|r| r << 1).collect();
    par::map(execution, &masks, |&m| measure(spec, m, cross_check, 2))
        .into_iter()
        .map(|r| r.and_then(|rec| check_bound(&rec).map(|()| rec)))
        .collect()
}

pub fn write_csv(records: &[SweepRecord], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn write_json(records: &[SweepRecord], out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, records)?;
    writeln!(out)
}
