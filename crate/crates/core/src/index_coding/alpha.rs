//! The generalized independence number as a maximum over client orders.
//!
//! For an order `γ`, a bit is counted at position `i` when `γ_i` demands it
//! and no earlier node demands it or holds it. Summing per position gives
//! [`permutation_bound`](crate::bound::permutation_bound); `α` is its maximum.
//! The maximum is found by a DP over the set `R` of already-placed clients:
//!
//! ```text
//! value(R) = max_{v ∉ R} gain(R, v) + value(R ∪ {v})
//! gain(R, v) = Σ count over classes with v ∈ P and (P ∪ Q) ∩ R = ∅
//! ```

use crate::bound::{average_permutation_bound, centralized_bound, Permutation};
use crate::nodeset::NodeSet;
use crate::rational::Rational;
use crate::IndexCodingError;

use super::SideInfoInstance;

/// DP memory is `O(2^K)` words.
pub const ALPHA_CLIENT_CAP: usize = 24;

/// Full `K!` enumeration cap for [`alpha_is_average_check`].
pub const AVERAGE_CLIENT_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaResult {
    pub alpha: u64,
    /// A maximizing order; ties go to the lowest client index.
    pub permutation: Permutation,
}

/// Per-client lists of `(P ∪ Q, count)` for classes the client demands,
/// with client `i` at bit `i - 1`.
fn demand_lists(instance: &SideInfoInstance) -> Vec<Vec<(u64, u64)>> {
    let mut lists = vec![Vec::new(); instance.clients()];
    for c in instance.classes() {
        let span = c.demanders.union(c.side_info).shift_down(1).mask();
        for v in c.demanders.iter() {
            lists[v - 1].push((span, c.count));
        }
    }
    lists
}

/// `gain(R, v)` with `placed` and `client` in the instance's 1-based numbering.
pub fn gain(instance: &SideInfoInstance, placed: NodeSet, client: usize) -> u64 {
    instance
        .classes()
        .iter()
        .filter(|c| c.demanders.contains(client))
        .filter(|c| c.demanders.union(c.side_info).is_disjoint(placed))
        .map(|c| c.count)
        .sum()
}

pub fn alpha_exact(instance: &SideInfoInstance) -> Result<AlphaResult, IndexCodingError> {
    let k = instance.clients();
    if k > ALPHA_CLIENT_CAP {
        return Err(IndexCodingError::TooManyClients {
            clients: k,
            cap: ALPHA_CLIENT_CAP,
        });
    }
    let lists = demand_lists(instance);
    let full = (1u64 << k) - 1;
    let gain_of = |placed: u64, v: usize| -> u64 {
        lists[v]
            .iter()
            .filter(|(span, _)| span & placed == 0)
            .map(|(_, n)| n)
            .sum()
    };

    let mut value = vec![0u64; 1usize << k];
    for placed in (0..full).rev() {
        let mut best = 0;
        for v in 0..k {
            if placed >> v & 1 == 0 {
                best = best.max(gain_of(placed, v) + value[(placed | 1 << v) as usize]);
            }
        }
        value[placed as usize] = best;
    }

    let mut order = Vec::with_capacity(k);
    let mut placed = 0u64;
    while placed != full {
        let mut choice = None;
        let mut best = 0;
        for v in 0..k {
            if placed >> v & 1 == 0 {
                let score = gain_of(placed, v) + value[(placed | 1 << v) as usize];
                if choice.is_none() || score > best {
                    best = score;
                    choice = Some(v);
                }
            }
        }
        let v = choice.expect("some client remains");
        order.push(v + 1);
        placed |= 1 << v;
    }

    Ok(AlphaResult {
        alpha: value[0],
        permutation: Permutation::new(order, k).expect("DP walk visits every client once"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AverageCheck {
    pub average: Rational,
    pub centralized: Rational,
    pub equal: bool,
}

/// Compares the mean permutation bound over all `K!` orders with the
/// centralized bound.
pub fn alpha_is_average_check(instance: &SideInfoInstance) -> Result<AverageCheck, IndexCodingError> {
    if instance.clients() > AVERAGE_CLIENT_CAP {
        return Err(IndexCodingError::TooManyClients {
            clients: instance.clients(),
            cap: AVERAGE_CLIENT_CAP,
        });
    }
    let average = average_permutation_bound(instance);
    let centralized = centralized_bound(instance);
    let equal = average == centralized;
    Ok(AverageCheck {
        average,
        centralized,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::permutation_bound;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn cyclic(k: usize) -> SideInfoInstance {
        let owned: Vec<(Vec<usize>, Vec<usize>)> = (1..=k).map(|i| (vec![i], vec![i % k + 1])).collect();
        let refs: Vec<(&[usize], &[usize], u64)> =
            owned.iter().map(|(p, q)| (p.as_slice(), q.as_slice(), 1)).collect();
        SideInfoInstance::from_lists(k, &refs).unwrap()
    }

    #[test]
    fn examples() {
        let recip = SideInfoInstance::from_lists(2, &[(&[1], &[2], 1), (&[2], &[1], 1)]).unwrap();
        let r = alpha_exact(&recip).unwrap();
        assert_eq!(r.alpha, 1);
        assert_eq!(r.permutation, Permutation::identity(2));

        let r = alpha_exact(&cyclic(3)).unwrap();
        assert_eq!(r.alpha, 2);
        assert_eq!(permutation_bound(&cyclic(3), &r.permutation).unwrap(), 2);

        let server_only = SideInfoInstance::from_lists(3, &[(&[1], &[], 2), (&[2], &[], 3), (&[3], &[], 1)]).unwrap();
        assert_eq!(alpha_exact(&server_only).unwrap().alpha, 6);

        assert_eq!(alpha_exact(&cyclic(4)).unwrap().alpha, 3);
    }

    #[test]
    fn tie_break_prefers_low_indices() {
        let empty = SideInfoInstance::new(4, vec![]).unwrap();
        assert_eq!(alpha_exact(&empty).unwrap().permutation, Permutation::identity(4));
    }

    #[test]
    fn cap_enforced() {
        let big = SideInfoInstance::new(25, vec![]).unwrap();
        assert!(matches!(alpha_exact(&big), Err(IndexCodingError::TooManyClients { .. })));
        let seven = SideInfoInstance::new(7, vec![]).unwrap();
        assert!(alpha_is_average_check(&seven).is_err());
    }

    #[test]
    fn average_check_examples() {
        let c = alpha_is_average_check(&cyclic(3)).unwrap();
        assert_eq!((c.average.clone(), c.equal), (ratio(3, 2), true));
        let recip = SideInfoInstance::from_lists(2, &[(&[1], &[2], 1), (&[2], &[1], 1)]).unwrap();
        assert_eq!(alpha_is_average_check(&recip).unwrap().average, int(1));
        let single = SideInfoInstance::from_lists(1, &[(&[1], &[], 5)]).unwrap();
        let c = alpha_is_average_check(&single).unwrap();
        assert_eq!((c.average, c.centralized, c.equal), (int(5), int(5), true));
    }

    fn arb_instance() -> impl Strategy<Value = SideInfoInstance> {
        crate::bound::tests::arb_side_info(6, 4)
    }

    proptest! {
        #[test]
        fn alpha_is_max_over_permutations(inst in arb_instance()) {
            let brute = Permutation::all(inst.clients())
                .map(|g| permutation_bound(&inst, &g).unwrap())
                .max()
                .unwrap();
            let r = alpha_exact(&inst).unwrap();
            prop_assert_eq!(r.alpha, brute);
            prop_assert_eq!(permutation_bound(&inst, &r.permutation).unwrap(), r.alpha);
        }

        #[test]
        fn alpha_dominates_average(inst in arb_instance()) {
            let a = alpha_exact(&inst).unwrap().alpha;
            prop_assert!(crate::rational::uint(a) >= centralized_bound(&inst));
            prop_assert!(a <= inst.total_bits());
        }

        #[test]
        fn alpha_counts_everything_without_side_info(inst in arb_instance()) {
            let stripped: Vec<_> = inst
                .classes()
                .iter()
                .map(|c| super::super::SideInfoClass { side_info: NodeSet::EMPTY, ..c.clone() })
                .collect();
            let stripped = SideInfoInstance::new(inst.clients(), stripped).unwrap();
            // Multi-demander classes still count once per bit.
            prop_assert_eq!(alpha_exact(&stripped).unwrap().alpha, stripped.total_bits());
        }

        #[test]
        fn gain_shrinks_as_placed_set_grows(inst in arb_instance(), a in any::<u64>(), b in any::<u64>(), v in 1usize..7) {
            let k = inst.clients();
            prop_assume!(v <= k);
            let universe = inst.client_set().without(v);
            let small = NodeSet::from_mask((a << 1) & universe.mask());
            let large = small.union(NodeSet::from_mask((b << 1) & universe.mask()));
            prop_assert!(gain(&inst, large, v) <= gain(&inst, small, v));
        }
    }
}
