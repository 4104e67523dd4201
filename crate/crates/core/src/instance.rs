//! The data-exchange instance model.
//!
//! Bits are never materialized. An instance stores one [`BitClass`] per
//! `(demanders, owners)` pattern together with the number of bits that share
//! it; every bound in this crate depends on those counts only.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::nodeset::{NodeSet, MAX_NODES};
use crate::rational::{self, Rational};
use crate::InstanceError;

/// Bits demanded by exactly `demanders` and stored at exactly `owners`.
///
/// `count` is normally a positive integer. Exact-fraction scenario outputs
/// use rational masses instead; every bound handles them transparently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitClass {
    pub demanders: NodeSet,
    pub owners: NodeSet,
    pub count: Rational,
}

impl BitClass {
    pub fn new(demanders: NodeSet, owners: NodeSet, count: u64) -> Self {
        BitClass {
            demanders,
            owners,
            count: rational::uint(count),
        }
    }

    pub fn with_mass(demanders: NodeSet, owners: NodeSet, count: Rational) -> Self {
        BitClass {
            demanders,
            owners,
            count,
        }
    }

    /// `(|P|, |Q|)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.demanders.len(), self.owners.len())
    }

    fn key(&self) -> (u64, u64) {
        (self.demanders.mask(), self.owners.mask())
    }
}

/// A data-exchange problem on `node_count` nodes.
///
/// When `centralized` is set, node 0 is a server that stores every bit and
/// demands none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeInstance {
    pub node_count: usize,
    pub centralized: bool,
    pub classes: Vec<BitClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    NodeCountOverCap,
    NodeOutOfRange,
    DemanderOwnsBit,
    DemandedBitStoredNowhere,
    NonPositiveCount,
    DuplicateClass,
    ServerDemands,
    ServerMissingBit,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::NodeCountOverCap => "node count exceeds 62",
            Rule::NodeOutOfRange => "node index out of range",
            Rule::DemanderOwnsBit => "demander owns bit",
            Rule::DemandedBitStoredNowhere => "demanded bit stored nowhere",
            Rule::NonPositiveCount => "count must be positive",
            Rule::DuplicateClass => "duplicate (P,Q) class",
            Rule::ServerDemands => "server demands a bit",
            Rule::ServerMissingBit => "server does not store bit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// `None` for instance-level problems.
    pub class_index: Option<usize>,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class_index {
            Some(i) => write!(f, "class {i}: {}", self.rule),
            None => write!(f, "instance: {}", self.rule),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: &Rule) -> bool {
        self.violations.iter().any(|v| &v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl ExchangeInstance {
    pub fn new(node_count: usize, centralized: bool, classes: Vec<BitClass>) -> Self {
        ExchangeInstance {
            node_count,
            centralized,
            classes,
        }
    }

    /// Checks every model invariant. Problems are returned as data.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut push = |class_index, rule| violations.push(Violation { class_index, rule });

        if self.node_count > MAX_NODES {
            push(None, Rule::NodeCountOverCap);
        }
        let universe = NodeSet::full(self.node_count.min(MAX_NODES));
        let mut seen = BTreeMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            let i = Some(i);
            if !c.demanders.union(c.owners).is_subset(universe) {
                push(i, Rule::NodeOutOfRange);
            }
            if !c.demanders.is_disjoint(c.owners) {
                push(i, Rule::DemanderOwnsBit);
            }
            if !c.demanders.is_empty() && c.owners.is_empty() {
                push(i, Rule::DemandedBitStoredNowhere);
            }
            if !c.count.is_positive() {
                push(i, Rule::NonPositiveCount);
            }
            if seen.insert(c.key(), ()).is_some() {
                push(i, Rule::DuplicateClass);
            }
            if self.centralized {
                if c.demanders.contains(0) {
                    push(i, Rule::ServerDemands);
                }
                if !c.owners.contains(0) {
                    push(i, Rule::ServerMissingBit);
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Merges classes with the same `(P,Q)` and sorts by `(P mask, Q mask)`.
    pub fn canonicalize(mut self) -> Self {
        let mut merged: BTreeMap<(u64, u64), BitClass> = BTreeMap::new();
        for c in self.classes.drain(..) {
            merged
                .entry(c.key())
                .and_modify(|e| e.count += &c.count)
                .or_insert(c);
        }
        self.classes = merged.into_values().filter(|c| !c.count.is_zero()).collect();
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.classes.windows(2).all(|w| w[0].key() < w[1].key())
    }

    /// `a_P^Q`, zero when the pattern is absent.
    pub fn count_of(&self, demanders: NodeSet, owners: NodeSet) -> Rational {
        self.classes
            .iter()
            .filter(|c| c.demanders == demanders && c.owners == owners)
            .map(|c| c.count.clone())
            .sum()
    }

    pub fn total_bits(&self) -> Rational {
        self.classes.iter().map(|c| c.count.clone()).sum()
    }

    /// Total count over classes with at least one demander.
    pub fn demanded_bits(&self) -> Rational {
        self.classes
            .iter()
            .filter(|c| !c.demanders.is_empty())
            .map(|c| c.count.clone())
            .sum()
    }

    pub fn has_integral_counts(&self) -> bool {
        self.classes.iter().all(|c| c.count.is_integer())
    }

    /// Expands classes back into one `(P,Q)` pair per bit. Integer counts only.
    pub fn disaggregate(&self) -> Result<Vec<(NodeSet, NodeSet)>, InstanceError> {
        let mut out = Vec::new();
        for c in &self.classes {
            let n = integral_count(&c.count)?;
            out.extend(std::iter::repeat_n((c.demanders, c.owners), n as usize));
        }
        Ok(out)
    }

    /// `n(p,q)`: total count per `(|P|, |Q|)`, classes with `P = ∅` excluded.
    pub fn profile(&self) -> DemandProfile {
        let mut table = BTreeMap::new();
        for c in self.classes.iter().filter(|c| !c.demanders.is_empty()) {
            *table.entry(c.shape()).or_insert_with(Rational::zero) += &c.count;
        }
        DemandProfile { table }
    }
}

pub(crate) fn integral_count(count: &Rational) -> Result<u64, InstanceError> {
    use num_traits::ToPrimitive;
    if !count.is_integer() {
        return Err(InstanceError::FractionalCount(rational::format_exact(count)));
    }
    count
        .to_integer()
        .to_u64()
        .ok_or_else(|| InstanceError::FractionalCount(rational::format_exact(count)))
}

/// Builds the canonical instance for a raw list of per-bit `(P, Q)` pairs.
pub fn aggregate(
    node_count: usize,
    centralized: bool,
    bits: &[(NodeSet, NodeSet)],
) -> Result<ExchangeInstance, InstanceError> {
    if node_count > MAX_NODES {
        return Err(InstanceError::TooManyNodes(node_count));
    }
    let universe = NodeSet::full(node_count);
    let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for &(p, q) in bits {
        if !p.union(q).is_subset(universe) {
            let node = p.union(q).difference(universe).min().unwrap_or(0);
            return Err(InstanceError::NodeOutOfRange { node, node_count });
        }
        if !p.is_disjoint(q) {
            return Err(InstanceError::DemanderOwnsBit);
        }
        *counts.entry((p.mask(), q.mask())).or_default() += 1;
    }
    let classes = counts
        .into_iter()
        .map(|((p, q), n)| BitClass::new(NodeSet::from_mask(p), NodeSet::from_mask(q), n))
        .collect();
    Ok(ExchangeInstance::new(node_count, centralized, classes))
}

/// The `n(p,q)` table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DemandProfile {
    pub table: BTreeMap<(usize, usize), Rational>,
}

impl DemandProfile {
    pub fn get(&self, p: usize, q: usize) -> Rational {
        self.table.get(&(p, q)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.table.values().cloned().sum()
    }
}

impl fmt::Display for DemandProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((p, q), n) in &self.table {
            writeln!(f, "n({p},{q}) = {}", rational::format_exact(n))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(nodes: &[usize]) -> NodeSet {
        NodeSet::from_nodes(nodes.iter().copied()).unwrap()
    }

    fn reciprocal() -> ExchangeInstance {
        ExchangeInstance::new(
            2,
            false,
            vec![
                BitClass::new(set(&[1]), set(&[0]), 1),
                BitClass::new(set(&[0]), set(&[1]), 1),
            ],
        )
    }

    #[test]
    fn minimal_exchange_is_valid() {
        assert!(reciprocal().validate().is_ok());
    }

    #[test]
    fn demander_owning_bit_is_flagged() {
        let inst = ExchangeInstance::new(2, false, vec![BitClass::new(set(&[0]), set(&[0]), 1)]);
        let report = inst.validate();
        assert_eq!(
            report.violations,
            vec![Violation {
                class_index: Some(0),
                rule: Rule::DemanderOwnsBit
            }]
        );
        assert_eq!(report.to_string(), "class 0: demander owns bit");
    }

    #[test]
    fn demanded_bit_stored_nowhere_is_flagged() {
        let inst = ExchangeInstance::new(3, false, vec![BitClass::new(set(&[2]), NodeSet::EMPTY, 1)]);
        assert!(inst.validate().has(&Rule::DemandedBitStoredNowhere));
    }

    #[test]
    fn centralized_rules() {
        let inst = ExchangeInstance::new(
            3,
            true,
            vec![
                BitClass::new(set(&[1]), set(&[2]), 1),
                BitClass::new(set(&[0]), set(&[1]), 1),
            ],
        );
        let r = inst.validate();
        assert!(r.has(&Rule::ServerMissingBit));
        assert!(r.has(&Rule::ServerDemands));
    }

    #[test]
    fn out_of_range_duplicates_and_counts() {
        let inst = ExchangeInstance::new(
            2,
            false,
            vec![
                BitClass::new(set(&[1]), set(&[5]), 1),
                BitClass::new(set(&[1]), set(&[0]), 1),
                BitClass::new(set(&[1]), set(&[0]), 0),
            ],
        );
        let r = inst.validate();
        assert!(r.has(&Rule::NodeOutOfRange));
        assert!(r.has(&Rule::DuplicateClass));
        assert!(r.has(&Rule::NonPositiveCount));
        let big = ExchangeInstance::new(63, false, vec![]);
        assert!(big.validate().has(&Rule::NodeCountOverCap));
    }

    #[test]
    fn aggregate_counts_multiplicities() {
        let bits = [
            (set(&[1]), set(&[2])),
            (set(&[1]), set(&[2])),
            (set(&[2]), set(&[1])),
        ];
        let inst = aggregate(3, false, &bits).unwrap();
        assert_eq!(inst.classes.len(), 2);
        assert_eq!(inst.count_of(set(&[1]), set(&[2])), rational::int(2));
        assert_eq!(inst.count_of(set(&[2]), set(&[1])), rational::int(1));
        assert!(inst.is_canonical());

        assert!(aggregate(3, false, &[]).unwrap().classes.is_empty());

        let ten = vec![(set(&[3]), set(&[1, 2])); 10];
        let inst = aggregate(4, false, &ten).unwrap();
        assert_eq!(inst.classes, vec![BitClass::new(set(&[3]), set(&[1, 2]), 10)]);
    }

    #[test]
    fn aggregate_errors() {
        assert!(matches!(
            aggregate(3, false, &[(set(&[3]), set(&[0]))]),
            Err(InstanceError::NodeOutOfRange { node: 3, .. })
        ));
        assert!(matches!(aggregate(63, false, &[]), Err(InstanceError::TooManyNodes(63))));
        assert!(matches!(
            aggregate(3, false, &[(set(&[1]), set(&[1]))]),
            Err(InstanceError::DemanderOwnsBit)
        ));
    }

    #[test]
    fn profiles() {
        assert_eq!(
            reciprocal().profile().table,
            BTreeMap::from([((1, 1), rational::int(2))])
        );
        let one = ExchangeInstance::new(4, false, vec![BitClass::new(set(&[3]), set(&[1, 2]), 5)]);
        assert_eq!(one.profile().table, BTreeMap::from([((1, 2), rational::int(5))]));
        let two = ExchangeInstance::new(
            4,
            false,
            vec![
                BitClass::new(set(&[1, 2]), set(&[3]), 4),
                BitClass::new(set(&[1]), set(&[2, 3]), 4),
                BitClass::new(NodeSet::EMPTY, set(&[3]), 9),
            ],
        );
        assert_eq!(
            two.profile().table,
            BTreeMap::from([((2, 1), rational::int(4)), ((1, 2), rational::int(4))])
        );
        assert_eq!(two.profile().total(), two.demanded_bits());
    }

    #[test]
    fn canonicalize_merges_and_sorts() {
        let inst = ExchangeInstance::new(
            3,
            false,
            vec![
                BitClass::new(set(&[2]), set(&[1]), 1),
                BitClass::new(set(&[1]), set(&[2]), 2),
                BitClass::new(set(&[2]), set(&[1]), 3),
            ],
        )
        .canonicalize();
        assert!(inst.is_canonical());
        assert_eq!(inst.count_of(set(&[2]), set(&[1])), rational::int(4));
    }
}
