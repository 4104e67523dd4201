use std::collections::BTreeSet;

use crate::nodeset::NodeSet;
use crate::IndexCodingError;

use super::SideInfoInstance;

/// Outcome of the symmetric-side-information test on a unicast instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tightness {
    /// Every clique `S` has `c_k^{S∖k}` equal across `k ∈ S`.
    Tight,
    /// The smallest clique (by size, then mask) where two members differ.
    NotTight {
        clique: NodeSet,
        first: usize,
        first_count: u64,
        second: usize,
        second_count: u64,
    },
}

impl Tightness {
    pub fn is_tight(&self) -> bool {
        matches!(self, Tightness::Tight)
    }
}

/// Only cliques `{k} ∪ Q` for a present class can hold a nonzero count, so
/// those are the only ones checked.
pub fn tightness_check(instance: &SideInfoInstance) -> Result<Tightness, IndexCodingError> {
    if let Some(i) = instance.classes().iter().position(|c| c.demanders.len() != 1) {
        return Err(IndexCodingError::NotUnicast(i));
    }
    let cliques: BTreeSet<(usize, u64)> = instance
        .classes()
        .iter()
        .map(|c| c.demanders.union(c.side_info))
        .filter(|s| s.len() >= 2)
        .map(|s| (s.len(), s.mask()))
        .collect();
    for (_, mask) in cliques {
        let clique = NodeSet::from_mask(mask);
        let mut members = clique.iter().map(|k| (k, instance.unicast_count(k, clique.without(k))));
        let (first, first_count) = members.next().expect("cliques have two members");
        if let Some((second, second_count)) = members.find(|&(_, n)| n != first_count) {
            return Ok(Tightness::NotTight {
                clique,
                first,
                first_count,
                second,
                second_count,
            });
        }
    }
    Ok(Tightness::Tight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::centralized_bound;
    use crate::index_coding::alpha_exact;
    use crate::rational::uint;

    fn set(nodes: &[usize]) -> NodeSet {
        NodeSet::from_nodes(nodes.iter().copied()).unwrap()
    }

    #[test]
    fn reciprocal_pair_is_tight() {
        let inst = SideInfoInstance::from_lists(2, &[(&[1], &[2], 1), (&[2], &[1], 1)]).unwrap();
        assert_eq!(tightness_check(&inst).unwrap(), Tightness::Tight);
        assert_eq!(uint(alpha_exact(&inst).unwrap().alpha), centralized_bound(&inst));
    }

    #[test]
    fn cyclic_three_is_not_tight() {
        let inst = SideInfoInstance::from_lists(3, &[(&[1], &[2], 1), (&[2], &[3], 1), (&[3], &[1], 1)]).unwrap();
        assert_eq!(
            tightness_check(&inst).unwrap(),
            Tightness::NotTight {
                clique: set(&[1, 2]),
                first: 1,
                first_count: 1,
                second: 2,
                second_count: 0,
            }
        );
    }

    #[test]
    fn side_info_free_is_tight() {
        let inst = SideInfoInstance::from_lists(3, &[(&[1], &[], 4), (&[2], &[], 1)]).unwrap();
        assert!(tightness_check(&inst).unwrap().is_tight());
    }

    #[test]
    fn multicast_rejected() {
        let inst = SideInfoInstance::from_lists(3, &[(&[1, 2], &[3], 1)]).unwrap();
        assert!(matches!(tightness_check(&inst), Err(IndexCodingError::NotUnicast(0))));
    }
}
