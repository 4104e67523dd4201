//! Lower bounds on the communication load.
//!
//! - [`generic_bound`]: `Σ count · |P| / (|P| + |Q| − 1)` over all classes.
//! - [`profile_bound`]: the same sum evaluated from the `n(p,q)` table.
//! - [`centralized_bound`]: `Σ c_P^Q · |P| / (|P| + |Q|)` for a server-based
//!   instance, where `Q` counts only client-side copies.
//! - [`permutation_bound`]: for a client order `γ`, the number of bits whose
//!   first node of `P ∪ Q` along `γ` is a demander.

use std::collections::HashMap;

use num_traits::Zero;

use crate::index_coding::SideInfoInstance;
use crate::instance::{DemandProfile, ExchangeInstance};
use crate::nodeset::NodeSet;
use crate::rational::{self, Rational};
use crate::BoundError;

fn weight(p: usize, q_plus: usize) -> Rational {
    rational::ratio(p as i64, (p + q_plus) as i64)
}

/// Generic lower bound on any valid instance.
///
/// Centralized instances are accepted too: with the server counted in `Q`
/// the per-class weight coincides with [`centralized_bound`]'s.
pub fn generic_bound(instance: &ExchangeInstance) -> Result<Rational, BoundError> {
    let report = instance.validate();
    if !report.is_ok() {
        return Err(BoundError::InvalidInstance(report));
    }
    let mut total = Rational::zero();
    for c in &instance.classes {
        let (p, q) = c.shape();
        if p == 0 {
            continue;
        }
        total += weight(p, q - 1) * &c.count;
    }
    Ok(total)
}

pub fn profile_bound(profile: &DemandProfile) -> Rational {
    profile
        .table
        .iter()
        .filter(|((p, q), _)| *p > 0 && *q > 0)
        .map(|(&(p, q), n)| weight(p, q - 1) * n)
        .sum()
}

pub fn centralized_bound(instance: &SideInfoInstance) -> Rational {
    instance
        .classes()
        .iter()
        .map(|c| weight(c.demanders.len(), c.side_info.len()) * rational::uint(c.count))
        .sum()
}

/// An ordering `γ_1, .., γ_K` of the clients `1..=K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>, clients: usize) -> Result<Self, BoundError> {
        let mut seen = NodeSet::EMPTY;
        let ok = order.len() == clients
            && order.iter().all(|&v| {
                let fresh = (1..=clients).contains(&v) && !seen.contains(v);
                seen.insert(v.min(63));
                fresh
            });
        if ok {
            Ok(Permutation(order))
        } else {
            Err(BoundError::BadPermutation { clients, order })
        }
    }

    pub fn identity(clients: usize) -> Self {
        Permutation((1..=clients).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    /// Every permutation of `1..=clients` in lexicographic order.
    pub fn all(clients: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=clients).collect()),
        }
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        // Lexicographic successor.
        if let Some(i) = (1..nxt.len()).rev().find(|&i| nxt[i - 1] < nxt[i]) {
            let j = (i..nxt.len()).rev().find(|&j| nxt[j] > nxt[i - 1]).unwrap();
            nxt.swap(i - 1, j);
            nxt[i..].reverse();
            self.next = Some(nxt);
        }
        Some(Permutation(cur))
    }
}

fn check_permutation(instance: &SideInfoInstance, gamma: &Permutation) -> Result<(), BoundError> {
    Permutation::new(gamma.0.clone(), instance.clients()).map(|_| ())
}

/// Counts bits whose earliest node of `P ∪ Q` in `γ`-order belongs to `P`.
pub fn permutation_bound(instance: &SideInfoInstance, gamma: &Permutation) -> Result<u64, BoundError> {
    check_permutation(instance, gamma)?;
    let mut rank = vec![usize::MAX; instance.clients() + 1];
    for (pos, &v) in gamma.0.iter().enumerate() {
        rank[v] = pos;
    }
    let total = instance
        .classes()
        .iter()
        .filter(|c| {
            let first = c
                .demanders
                .union(c.side_info)
                .iter()
                .min_by_key(|&v| rank[v])
                .expect("classes have demanders");
            c.demanders.contains(first)
        })
        .map(|c| c.count)
        .sum();
    Ok(total)
}

/// The triple sum over positions `i`, demander sets `P ∋ γ_i` inside the
/// suffix `{γ_i, ..}`, and side-information sets `Q` inside `{γ_{i+1}, ..}`.
/// Exponential in `K`; kept as a cross-check of [`permutation_bound`].
pub fn permutation_bound_literal(
    instance: &SideInfoInstance,
    gamma: &Permutation,
) -> Result<u64, BoundError> {
    check_permutation(instance, gamma)?;
    let lookup: HashMap<(NodeSet, NodeSet), u64> = instance
        .classes()
        .iter()
        .map(|c| ((c.demanders, c.side_info), c.count))
        .collect();
    let order = gamma.order();
    let mut total = 0;
    for i in 0..order.len() {
        let head = order[i];
        let later: NodeSet = order[i + 1..].iter().copied().collect();
        for rest in later.subsets() {
            let p = rest.with(head);
            for q in later.difference(rest).subsets() {
                total += lookup.get(&(p, q)).copied().unwrap_or(0);
            }
        }
    }
    Ok(total)
}

/// `(1/K!) Σ_γ permutation_bound(γ)` by full enumeration.
pub fn average_permutation_bound(instance: &SideInfoInstance) -> Rational {
    let mut sum = 0u128;
    let mut n = 0u128;
    for gamma in Permutation::all(instance.clients()) {
        sum += permutation_bound(instance, &gamma).expect("generated permutations are valid") as u128;
        n += 1;
    }
    Rational::new(sum.into(), n.into())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::instance::BitClass;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn set(nodes: &[usize]) -> NodeSet {
        NodeSet::from_nodes(nodes.iter().copied()).unwrap()
    }

    fn cyclic(k: usize) -> SideInfoInstance {
        let classes: Vec<(Vec<usize>, Vec<usize>, u64)> =
            (1..=k).map(|i| (vec![i], vec![i % k + 1], 1)).collect();
        let refs: Vec<(&[usize], &[usize], u64)> =
            classes.iter().map(|(p, q, n)| (p.as_slice(), q.as_slice(), *n)).collect();
        SideInfoInstance::from_lists(k, &refs).unwrap()
    }

    #[test]
    fn generic_examples() {
        let base = ExchangeInstance::new(
            2,
            false,
            vec![
                BitClass::new(set(&[1]), set(&[0]), 1),
                BitClass::new(set(&[0]), set(&[1]), 1),
            ],
        );
        assert_eq!(generic_bound(&base).unwrap(), int(2));

        let one = ExchangeInstance::new(4, false, vec![BitClass::new(set(&[3]), set(&[1, 2]), 1)]);
        assert_eq!(generic_bound(&one).unwrap(), ratio(1, 2));

        let two = ExchangeInstance::new(
            4,
            false,
            vec![
                BitClass::new(set(&[1, 2]), set(&[3]), 4),
                BitClass::new(set(&[1]), set(&[2, 3]), 4),
            ],
        );
        assert_eq!(generic_bound(&two).unwrap(), int(6));
        assert_eq!(profile_bound(&two.profile()), int(6));
    }

    #[test]
    fn generic_rejects_invalid() {
        let bad = ExchangeInstance::new(2, false, vec![BitClass::new(set(&[0]), set(&[0]), 1)]);
        assert!(matches!(generic_bound(&bad), Err(BoundError::InvalidInstance(_))));
    }

    #[test]
    fn empty_demand_classes_contribute_nothing() {
        let inst = ExchangeInstance::new(
            3,
            false,
            vec![
                BitClass::new(NodeSet::EMPTY, set(&[1]), 7),
                BitClass::new(set(&[2]), set(&[1]), 1),
            ],
        );
        assert_eq!(generic_bound(&inst).unwrap(), int(1));
    }

    #[test]
    fn profile_examples() {
        let table = |entries: &[((usize, usize), i64)]| DemandProfile {
            table: entries.iter().map(|&(k, v)| (k, int(v))).collect(),
        };
        assert_eq!(profile_bound(&table(&[((1, 1), 2)])), int(2));
        assert_eq!(profile_bound(&table(&[((1, 2), 5)])), ratio(5, 2));
        assert_eq!(profile_bound(&table(&[((2, 1), 4), ((1, 2), 4)])), int(6));
    }

    #[test]
    fn centralized_examples() {
        let recip = SideInfoInstance::from_lists(2, &[(&[1], &[2], 1), (&[2], &[1], 1)]).unwrap();
        assert_eq!(centralized_bound(&recip), int(1));
        assert_eq!(centralized_bound(&cyclic(3)), ratio(3, 2));
        let uncoded = SideInfoInstance::from_lists(1, &[(&[1], &[], 7)]).unwrap();
        assert_eq!(centralized_bound(&uncoded), int(7));
        // The same bound through the generic form on the K+1 node instance.
        assert_eq!(generic_bound(&cyclic(3).to_exchange()).unwrap(), ratio(3, 2));
    }

    #[test]
    fn permutation_examples() {
        let recip = SideInfoInstance::from_lists(2, &[(&[1], &[2], 1), (&[2], &[1], 1)]).unwrap();
        assert_eq!(permutation_bound(&recip, &Permutation::identity(2)).unwrap(), 1);
        assert_eq!(permutation_bound(&cyclic(3), &Permutation::identity(3)).unwrap(), 2);
        assert_eq!(permutation_bound_literal(&cyclic(3), &Permutation::identity(3)).unwrap(), 2);
        let empty = SideInfoInstance::new(3, vec![]).unwrap();
        for g in Permutation::all(3) {
            assert_eq!(permutation_bound(&empty, &g).unwrap(), 0);
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 1, 2], 3).is_err());
        assert!(Permutation::new(vec![0, 1, 2], 3).is_err());
        assert!(Permutation::new(vec![1, 2], 3).is_err());
        assert!(Permutation::new(vec![3, 1, 2], 3).is_ok());
        assert!(permutation_bound(&cyclic(3), &Permutation(vec![1, 2])).is_err());
        assert_eq!(Permutation::all(4).count(), 24);
    }

    #[test]
    fn cyclic_average_is_three_halves() {
        assert_eq!(average_permutation_bound(&cyclic(3)), ratio(3, 2));
        let total: u64 = Permutation::all(3)
            .map(|g| permutation_bound(&cyclic(3), &g).unwrap())
            .sum();
        assert_eq!(total, 9);
    }

    pub(crate) fn arb_side_info(max_clients: usize, max_bits: u64) -> impl Strategy<Value = SideInfoInstance> {
        (1..=max_clients).prop_flat_map(move |k| {
            let full = (1u64 << k) - 1;
            prop::collection::vec((1..=full, 0..=full, 1..=max_bits.max(1)), 0..6).prop_map(move |raw| {
                let classes = raw
                    .into_iter()
                    .map(|(p, q, n)| crate::index_coding::SideInfoClass {
                        demanders: NodeSet::from_mask(p << 1),
                        side_info: NodeSet::from_mask((q & !p) << 1),
                        count: n,
                    })
                    .collect();
                SideInfoInstance::new(k, classes).unwrap()
            })
        })
    }

    fn arb_exchange() -> impl Strategy<Value = ExchangeInstance> {
        (2usize..6).prop_flat_map(|k| {
            let full = (1u64 << k) - 1;
            prop::collection::vec((1..=full, 1..=full, 1u64..20), 0..8).prop_map(move |raw| {
                let classes = raw
                    .into_iter()
                    .filter_map(|(p, q, n)| {
                        let q = q & !p;
                        (q != 0).then(|| BitClass::new(NodeSet::from_mask(p), NodeSet::from_mask(q), n))
                    })
                    .collect();
                ExchangeInstance::new(k, false, classes).canonicalize()
            })
        })
    }

    /// A class and a node outside its `P ∪ Q`, if any exists.
    fn free_slot(inst: &ExchangeInstance, pick: prop::sample::Index, slot: prop::sample::Index) -> Option<(usize, usize)> {
        if inst.classes.is_empty() {
            return None;
        }
        let i = pick.index(inst.classes.len());
        let c = &inst.classes[i];
        let free = NodeSet::full(inst.node_count).difference(c.demanders.union(c.owners));
        if free.is_empty() {
            return None;
        }
        Some((i, free.to_vec()[slot.index(free.len())]))
    }

    proptest! {
        #[test]
        fn per_bit_decomposition(inst in arb_exchange()) {
            let per_bit: Rational = inst
                .disaggregate()
                .unwrap()
                .into_iter()
                .filter(|(p, _)| !p.is_empty())
                .map(|(p, q)| ratio(p.len() as i64, (p.len() + q.len() - 1) as i64))
                .sum();
            prop_assert_eq!(&per_bit, &generic_bound(&inst).unwrap());
            prop_assert_eq!(&per_bit, &profile_bound(&inst.profile()));
        }

        #[test]
        fn enlarging_owners_never_increases(inst in arb_exchange(), pick in any::<prop::sample::Index>(), slot in any::<prop::sample::Index>()) {
            let Some((i, node)) = free_slot(&inst, pick, slot) else { return Ok(()); };
            let mut grown = inst.clone();
            grown.classes[i].owners.insert(node);
            let grown = grown.canonicalize();
            prop_assert!(generic_bound(&grown).unwrap() <= generic_bound(&inst).unwrap());
        }

        #[test]
        fn enlarging_demanders_never_decreases(inst in arb_exchange(), pick in any::<prop::sample::Index>(), slot in any::<prop::sample::Index>()) {
            let Some((i, node)) = free_slot(&inst, pick, slot) else { return Ok(()); };
            let mut grown = inst.clone();
            grown.classes[i].demanders.insert(node);
            let grown = grown.canonicalize();
            prop_assert!(generic_bound(&grown).unwrap() >= generic_bound(&inst).unwrap());
        }

        #[test]
        fn averaging_identity(inst in arb_side_info(5, 3)) {
            prop_assert_eq!(average_permutation_bound(&inst), centralized_bound(&inst));
        }

        #[test]
        fn literal_and_first_element_forms_agree(inst in arb_side_info(5, 3), seed in any::<u64>()) {
            let perms: Vec<_> = Permutation::all(inst.clients()).collect();
            let g = &perms[(seed % perms.len() as u64) as usize];
            prop_assert_eq!(
                permutation_bound(&inst, g).unwrap(),
                permutation_bound_literal(&inst, g).unwrap()
            );
        }
    }
}
