//! Coded distributed computing (MapReduce shuffle).
//!
//! `N` files are mapped on nodes `0..K`; each of `W` reduce functions needs
//! one `T`-bit intermediate value per file. With replication `s` every
//! `s`-subset of nodes reduces `W / C(K,s)` functions.

use num_traits::Zero;

use crate::bound::generic_bound;
use crate::instance::{BitClass, ExchangeInstance};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::rational::{self, Rational};
use crate::{InstanceError, ScenarioError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdcSpec {
    pub nodes: usize,
    /// Mapper set of each file.
    pub mappers: Vec<NodeSet>,
    pub reducers: u64,
    pub value_bits: u64,
    pub replication: usize,
}

impl CdcSpec {
    pub fn files(&self) -> usize {
        self.mappers.len()
    }

    /// Reduce functions assigned to each `s`-subset.
    pub fn per_subset(&self) -> Result<u64, ScenarioError> {
        let subsets = rational::binomial_u64(self.nodes as u64, self.replication as u64);
        if subsets == 0 || self.reducers % subsets != 0 {
            return Err(ScenarioError::Indivisible {
                parts: subsets,
                bits: self.reducers,
            });
        }
        Ok(self.reducers / subsets)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.nodes < 2 || self.nodes > MAX_NODES || self.mappers.is_empty() || self.value_bits == 0 {
            return Err(ScenarioError::InvalidSpec("need 2 <= K <= 62, N >= 1, T >= 1".into()));
        }
        if self.replication == 0 || self.replication > self.nodes {
            return Err(ScenarioError::InvalidSpec("need 1 <= s <= K".into()));
        }
        let universe = NodeSet::full(self.nodes);
        if let Some(f) = self.mappers.iter().position(|m| m.is_empty() || !m.is_subset(universe)) {
            return Err(ScenarioError::InvalidSpec(format!("file {} has no valid mapper set", f + 1)));
        }
        self.per_subset().map(|_| ())
    }

    /// `r = Σ|M_i| / N`.
    pub fn computation_load(&self) -> Rational {
        let total: usize = self.mappers.iter().map(|m| m.len()).sum();
        rational::ratio(total as i64, self.files() as i64)
    }

    /// `ã_j`: number of files mapped at exactly `j` nodes, for `j = 0..=K`.
    pub fn mapping_profile(&self) -> Vec<u64> {
        let mut a = vec![0u64; self.nodes + 1];
        for m in &self.mappers {
            a[m.len().min(self.nodes)] += 1;
        }
        a
    }
}

/// Every file mapped at `r` consecutive nodes, starting at a cyclically
/// advancing node.
pub fn cyclic_mapping(nodes: usize, files: usize, load: usize) -> Vec<NodeSet> {
    (0..files)
        .map(|f| (0..load.min(nodes)).map(|i| (f + i) % nodes).collect())
        .collect()
}

/// The shuffle: each intermediate value is demanded by its reducers that
/// did not map the file.
pub fn cdc_instance(spec: &CdcSpec) -> Result<ExchangeInstance, ScenarioError> {
    spec.validate()?;
    let per = spec.per_subset()?;
    let reducer_sets: Vec<NodeSet> = NodeSet::full(spec.nodes)
        .subsets()
        .filter(|s| s.len() == spec.replication)
        .collect();
    let mut classes = Vec::with_capacity(spec.files() * reducer_sets.len());
    for &q in &spec.mappers {
        for &r in &reducer_sets {
            classes.push(BitClass::new(r.difference(q), q, per * spec.value_bits));
        }
    }
    let instance = ExchangeInstance::new(spec.nodes, false, classes).canonicalize();
    let report = instance.validate();
    if !report.is_ok() {
        return Err(InstanceError::Invalid(report).into());
    }
    Ok(instance)
}

/// Generic bound of [`cdc_instance`] divided by `W N T`.
pub fn cdc_normalized_bound(spec: &CdcSpec) -> Result<Rational, ScenarioError> {
    let bound = generic_bound(&cdc_instance(spec)?)?;
    let scale = rational::uint(spec.reducers) * rational::uint(spec.files() as u64) * rational::uint(spec.value_bits);
    Ok(bound / scale)
}

/// `(1/r)(1 − r/K)`.
pub fn cdc_closed_form_s1(load: &Rational, nodes: usize) -> Result<Rational, ScenarioError> {
    if load.is_zero() {
        return Err(ScenarioError::Unbounded("r = 0".into()));
    }
    let k = rational::uint(nodes as u64);
    Ok((rational::int(1) - load / k) / load)
}

/// `(1/(KN)) Σ_j ((K−j)/j) ã_j`.
pub fn cdc_profile_bound_s1(profile: &[u64], nodes: usize, files: usize) -> Rational {
    let mut sum = Rational::zero();
    for (j, &a) in profile.iter().enumerate().skip(1) {
        sum += rational::ratio(nodes as i64 - j as i64, j as i64) * rational::uint(a);
    }
    sum / rational::uint((nodes * files) as u64)
}

/// `Σ_j (ã_j/N) Σ_l [C(K−j,l) C(j,s−l) / C(K,s)] · l/(l+j−1)`, `l` from
/// `max(0, s−j)` to `min(K−j, s)`. `l = 0` terms vanish and are skipped.
pub fn cdc_prop_bound(profile: &[u64], nodes: usize, replication: usize, files: usize) -> Rational {
    let k = nodes as u64;
    let s = replication as u64;
    let all = Rational::from_integer(rational::binomial(k, s));
    let mut total = Rational::zero();
    for (j, &a) in profile.iter().enumerate().skip(1) {
        if a == 0 {
            continue;
        }
        let j = j as u64;
        let mut inner = Rational::zero();
        let lo = s.saturating_sub(j).max(1);
        let hi = (k - j.min(k)).min(s);
        for l in lo..=hi {
            let ways = Rational::from_integer(rational::binomial(k - j, l) * rational::binomial(j, s - l));
            inner += ways / &all * rational::ratio(l as i64, (l + j - 1) as i64);
        }
        total += rational::ratio(a as i64, files as i64) * inner;
    }
    total
}
