//! Decentralized data shuffling.
//!
//! `K` workers (nodes `0..K`) each process `q` active units of `B` bits;
//! worker `k`'s units are `kq..(k+1)q`. After a shuffle `γ`, worker `k` must
//! obtain the units that were active at worker `γ(k)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bound::generic_bound;
use crate::instance::{BitClass, ExchangeInstance};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::rational::{self, Rational};
use crate::{InstanceError, ScenarioError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShufflingSpec {
    pub workers: usize,
    /// Active units per worker.
    pub active: usize,
    pub unit_bits: u64,
    /// Storage per worker, in units.
    pub storage_units: usize,
    /// For every unit, `(Z, bits)`: bits stored at exactly the workers `Z`.
    pub storage: Vec<BTreeMap<NodeSet, u64>>,
}

impl ShufflingSpec {
    pub fn units(&self) -> usize {
        self.workers * self.active
    }

    pub fn owner(&self, unit: usize) -> usize {
        unit / self.active
    }

    fn check_sizes(workers: usize, active: usize, storage_units: usize, unit_bits: u64) -> Result<(), ScenarioError> {
        if workers < 2 || workers > MAX_NODES || active == 0 || unit_bits == 0 {
            return Err(ScenarioError::InvalidSpec("need 2 <= K <= 62, q >= 1 and B >= 1".into()));
        }
        if storage_units < active || storage_units > workers * active {
            return Err(ScenarioError::InvalidSpec("storage must satisfy q <= M <= Kq".into()));
        }
        Ok(())
    }

    /// Per-unit splits sum to `B`, every bit is kept by the unit's owner,
    /// and no worker stores more than `M·B` bits.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        Self::check_sizes(self.workers, self.active, self.storage_units, self.unit_bits)?;
        if self.storage.len() != self.units() {
            return Err(ScenarioError::InvalidSpec(format!("expected {} unit storages", self.units())));
        }
        let mut used = vec![0u64; self.workers];
        let universe = NodeSet::full(self.workers);
        for (u, z) in self.storage.iter().enumerate() {
            if z.values().sum::<u64>() != self.unit_bits {
                return Err(ScenarioError::InvalidSpec(format!("unit {u} is not split into B bits")));
            }
            for (&set, &bits) in z {
                if !set.is_subset(universe) || !set.contains(self.owner(u)) {
                    return Err(ScenarioError::InvalidSpec(format!("unit {u} has bits its owner does not keep")));
                }
                for w in set.iter() {
                    used[w] += bits;
                }
            }
        }
        let cap = self.storage_units as u64 * self.unit_bits;
        if let Some(w) = used.iter().position(|&b| b > cap) {
            return Err(ScenarioError::InvalidSpec(format!("worker {w} stores more than M units")));
        }
        Ok(())
    }
}

fn collect(masks: &[NodeSet]) -> BTreeMap<NodeSet, u64> {
    let mut out = BTreeMap::new();
    for &m in masks {
        *out.entry(m).or_default() += 1;
    }
    out
}

/// Each unit in `C(K−1, t−1)` parts, part `T` kept by the owner and `T`,
/// with `t = M/q`.
pub fn symmetric_storage(workers: usize, active: usize, storage_units: usize, unit_bits: u64) -> Result<ShufflingSpec, ScenarioError> {
    ShufflingSpec::check_sizes(workers, active, storage_units, unit_bits)?;
    if storage_units % active != 0 {
        return Err(ScenarioError::NonIntegerT(format!("{storage_units}/{active}")));
    }
    let t = storage_units / active;
    let parts = rational::binomial_u64(workers as u64 - 1, t as u64 - 1);
    if unit_bits % parts != 0 {
        return Err(ScenarioError::Indivisible { parts, bits: unit_bits });
    }
    let storage = (0..workers * active)
        .map(|u| {
            let owner = u / active;
            NodeSet::full(workers)
                .without(owner)
                .subsets()
                .filter(|s| s.len() == t - 1)
                .map(|s| (s.with(owner), unit_bits / parts))
                .collect()
        })
        .collect();
    Ok(ShufflingSpec {
        workers,
        active,
        unit_bits,
        storage_units,
        storage,
    })
}

/// Every worker keeps its own units plus `(M−q)·B` further bits drawn
/// uniformly from the other workers' units.
pub fn random_storage(workers: usize, active: usize, storage_units: usize, unit_bits: u64, seed: u64) -> Result<ShufflingSpec, ScenarioError> {
    ShufflingSpec::check_sizes(workers, active, storage_units, unit_bits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = unit_bits as usize;
    let units = workers * active;
    let mut masks: Vec<Vec<NodeSet>> = (0..units).map(|u| vec![NodeSet::singleton(u / active); b]).collect();
    let foreign = (units - active) * b;
    let extra = (storage_units - active) * b;
    for w in 0..workers {
        for i in sample(&mut rng, foreign, extra.min(foreign)) {
            let slot = i / b;
            let unit = if slot < w * active { slot } else { slot + active };
            masks[unit][i % b].insert(w);
        }
    }
    Ok(ShufflingSpec {
        workers,
        active,
        unit_bits,
        storage_units,
        storage: masks.iter().map(|m| collect(m)).collect(),
    })
}

/// The cyclic shuffle `k ↦ (k + shift) mod K`.
pub fn cyclic_shuffle(workers: usize, shift: usize) -> Vec<usize> {
    (0..workers).map(|k| (k + shift) % workers).collect()
}

/// Worker `k` demands the units previously active at worker `shuffle[k]`.
pub fn shuffling_instance(spec: &ShufflingSpec, shuffle: &[usize]) -> Result<ExchangeInstance, ScenarioError> {
    spec.validate()?;
    let mut seen = NodeSet::EMPTY;
    for &s in shuffle {
        if s >= spec.workers || seen.contains(s) {
            return Err(ScenarioError::InvalidSpec(format!("{shuffle:?} is not a permutation of the workers")));
        }
        seen.insert(s);
    }
    if shuffle.len() != spec.workers {
        return Err(ScenarioError::InvalidSpec(format!("{shuffle:?} is not a permutation of the workers")));
    }
    let mut classes = Vec::new();
    for (k, &from) in shuffle.iter().enumerate() {
        for u in from * spec.active..(from + 1) * spec.active {
            for (&z, &bits) in &spec.storage[u] {
                let p = if z.contains(k) { NodeSet::EMPTY } else { NodeSet::singleton(k) };
                classes.push(BitClass::new(p, z, bits));
            }
        }
    }
    let instance = ExchangeInstance::new(spec.workers, false, classes).canonicalize();
    let report = instance.validate();
    if !report.is_ok() {
        return Err(InstanceError::Invalid(report).into());
    }
    Ok(instance)
}

/// Mean generic bound over the `K−1` nontrivial cyclic shuffles.
pub fn shuffle_average_bound(spec: &ShufflingSpec) -> Result<Rational, ScenarioError> {
    let mut total = Rational::zero();
    for shift in 1..spec.workers {
        total += generic_bound(&shuffling_instance(spec, &cyclic_shuffle(spec.workers, shift))?)?;
    }
    Ok(total / rational::uint(spec.workers as u64 - 1))
}

/// `(Kq/(K−1)) · ((K − M/q)/(M/q)) · B`.
pub fn shuffling_closed_form(workers: usize, active: usize, storage_units: usize, unit_bits: u64) -> Result<Rational, ScenarioError> {
    ShufflingSpec::check_sizes(workers, active, storage_units, unit_bits)?;
    let k = rational::uint(workers as u64);
    let q = rational::uint(active as u64);
    let ratio = rational::uint(storage_units as u64) / &q;
    Ok(&k * q / (&k - rational::int(1)) * (k - &ratio) / ratio * rational::uint(unit_bits))
}
