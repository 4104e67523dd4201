use std::collections::BTreeMap;

use crate::instance::{integral_count, BitClass, ExchangeInstance};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::{BoundError, InstanceError};

/// `c_P^Q` bits: demanded by exactly the clients `P`, held as side
/// information by exactly the clients `Q`, and always stored at the server.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideInfoClass {
    pub demanders: NodeSet,
    pub side_info: NodeSet,
    pub count: u64,
}

/// Centralized (index-coding) view of a data-exchange problem.
///
/// Clients are numbered `1..=clients`; index 0 is the implicit server, so
/// node sets here use the same numbering as the centralized
/// [`ExchangeInstance`] they convert to and from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideInfoInstance {
    clients: usize,
    classes: Vec<SideInfoClass>,
}

impl SideInfoInstance {
    /// Canonicalizes `classes`: merges equal `(P,Q)` patterns, drops classes
    /// with no demanders or zero count, sorts by `(P mask, Q mask)`.
    pub fn new(clients: usize, classes: Vec<SideInfoClass>) -> Result<Self, InstanceError> {
        if clients + 1 > MAX_NODES {
            return Err(InstanceError::TooManyNodes(clients + 1));
        }
        let universe = NodeSet::full(clients + 1).without(0);
        let mut merged: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for c in classes {
            let all = c.demanders.union(c.side_info);
            if !all.is_subset(universe) {
                let node = all.difference(universe).min().unwrap_or(0);
                return Err(InstanceError::NodeOutOfRange {
                    node,
                    node_count: clients + 1,
                });
            }
            if !c.demanders.is_disjoint(c.side_info) {
                return Err(InstanceError::DemanderOwnsBit);
            }
            if c.demanders.is_empty() || c.count == 0 {
                continue;
            }
            *merged
                .entry((c.demanders.mask(), c.side_info.mask()))
                .or_default() += c.count;
        }
        let classes = merged
            .into_iter()
            .map(|((p, q), count)| SideInfoClass {
                demanders: NodeSet::from_mask(p),
                side_info: NodeSet::from_mask(q),
                count,
            })
            .collect();
        Ok(SideInfoInstance { clients, classes })
    }

    /// Convenience constructor from `(P, Q, count)` node lists.
    pub fn from_lists(clients: usize, classes: &[(&[usize], &[usize], u64)]) -> Result<Self, InstanceError> {
        let classes = classes
            .iter()
            .map(|(p, q, n)| {
                Ok(SideInfoClass {
                    demanders: NodeSet::from_nodes(p.iter().copied())
                        .ok_or(InstanceError::TooManyNodes(64))?,
                    side_info: NodeSet::from_nodes(q.iter().copied())
                        .ok_or(InstanceError::TooManyNodes(64))?,
                    count: *n,
                })
            })
            .collect::<Result<Vec<_>, InstanceError>>()?;
        Self::new(clients, classes)
    }

    /// Requires a valid, centralized instance with integral counts.
    pub fn from_exchange(instance: &ExchangeInstance) -> Result<Self, BoundError> {
        if !instance.centralized {
            return Err(BoundError::NotCentralized);
        }
        let report = instance.validate();
        if !report.is_ok() {
            return Err(BoundError::InvalidInstance(report));
        }
        let mut classes = Vec::with_capacity(instance.classes.len());
        for c in &instance.classes {
            let count = integral_count(&c.count)
                .map_err(|_| BoundError::FractionalCount(crate::rational::format_exact(&c.count)))?;
            classes.push(SideInfoClass {
                demanders: c.demanders,
                side_info: c.owners.without(0),
                count,
            });
        }
        let clients = instance.node_count.saturating_sub(1);
        Ok(Self::new(clients, classes).expect("validated centralized instances convert"))
    }

    pub fn to_exchange(&self) -> ExchangeInstance {
        let classes = self
            .classes
            .iter()
            .map(|c| BitClass::new(c.demanders, c.side_info.with(0), c.count))
            .collect();
        ExchangeInstance::new(self.clients + 1, true, classes).canonicalize()
    }

    pub fn clients(&self) -> usize {
        self.clients
    }

    pub fn classes(&self) -> &[SideInfoClass] {
        &self.classes
    }

    /// All client indices `{1, .., K}`.
    pub fn client_set(&self) -> NodeSet {
        NodeSet::full(self.clients + 1).without(0)
    }

    pub fn total_bits(&self) -> u64 {
        self.classes.iter().map(|c| c.count).sum()
    }

    pub fn is_unicast(&self) -> bool {
        self.classes.iter().all(|c| c.demanders.len() == 1)
    }

    /// `c_P^Q`.
    pub fn count(&self, demanders: NodeSet, side_info: NodeSet) -> u64 {
        self.classes
            .iter()
            .find(|c| c.demanders == demanders && c.side_info == side_info)
            .map_or(0, |c| c.count)
    }

    /// Unicast shorthand `c_k^Q`.
    pub fn unicast_count(&self, client: usize, side_info: NodeSet) -> u64 {
        self.count(NodeSet::singleton(client), side_info)
    }
}
