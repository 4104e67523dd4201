//! Exhaustive references for small instances.
//!
//! [`linear_optimal_load`] searches all scalar binary linear schemes;
//! [`alpha_bruteforce`] enumerates generalized independent sets directly.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bound::generic_bound;
use crate::gf2::Basis64;
use crate::index_coding::{alpha_exact, SideInfoInstance, ALPHA_CLIENT_CAP};
use crate::instance::ExchangeInstance;
use crate::nodeset::NodeSet;
use crate::rational::{self, Rational};
use crate::OracleError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_bits: usize,
    pub max_nodes: usize,
    pub max_load: usize,
    /// Wall-clock budget for the search; `None` means unlimited.
    pub budget: Option<Duration>,
    /// Largest number of candidate encoders examined at one load.
    pub max_candidates: u128,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_bits: 10,
            max_nodes: 4,
            max_load: 8,
            budget: Some(Duration::from_secs(60)),
            max_candidates: 1 << 30,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The search result meets a converse, so it is the optimal load.
    CertifiedOptimal,
    /// Optimal among scalar binary linear schemes; the true optimum lies
    /// between the converse and this load.
    Bracketed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedOptimal => "certified optimal",
            Verdict::Bracketed => "bracketed",
        })
    }
}

/// A binary linear scheme. Bit `i` is the `i`-th demanded bit in class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearScheme {
    /// `(P, Q)` of each coordinate.
    pub bits: Vec<(NodeSet, NodeSet)>,
    /// Per transmitting node, its rows as coordinate masks.
    pub rows: Vec<(usize, Vec<u64>)>,
}

impl LinearScheme {
    pub fn load(&self) -> usize {
        self.rows.iter().map(|(_, r)| r.len()).sum()
    }

    /// Every demander of every bit recovers it from the other nodes' rows
    /// and its own storage.
    pub fn is_decodable(&self) -> bool {
        let n = self.bits.len();
        let nodes = self
            .bits
            .iter()
            .fold(NodeSet::EMPTY, |acc, (p, q)| acc.union(*p).union(*q));
        nodes.iter().all(|k| {
            let known = (0..n).filter(|&b| self.bits[b].1.contains(k)).fold(0u64, |m, b| m | 1 << b);
            let mut basis = Basis64::new();
            for (node, rows) in &self.rows {
                if *node != k {
                    rows.iter().for_each(|r| {
                        basis.insert(r & !known);
                    });
                }
            }
            (0..n).filter(|&b| self.bits[b].0.contains(k)).all(|b| basis.contains(1 << b))
        })
    }
}

impl fmt::Display for LinearScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (node, rows) in &self.rows {
            for r in rows {
                let terms: Vec<String> = (0..64).filter(|b| r >> b & 1 == 1).map(|b| format!("b{}", b + 1)).collect();
                writeln!(f, "node {node}: {}", terms.join(" + "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub load: u64,
    pub scheme: LinearScheme,
    pub generic: Rational,
    /// `α` for centralized instances.
    pub alpha: Option<u64>,
    pub verdict: Verdict,
}

impl OracleResult {
    /// Best converse available: the generic bound, or `α` when larger.
    pub fn converse(&self) -> Rational {
        match self.alpha {
            Some(a) if rational::uint(a) > self.generic => rational::uint(a),
            _ => self.generic.clone(),
        }
    }
}

/// `[d choose l]_2`: number of `l`-dimensional subspaces of `GF(2)^d`.
pub fn gaussian_binomial(d: usize, l: usize) -> u128 {
    if l > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..l {
        num = num.saturating_mul((1u128 << (d - i).min(126)) - 1);
        den = den.saturating_mul((1u128 << (i + 1)) - 1);
    }
    if num == u128::MAX {
        u128::MAX
    } else {
        num / den
    }
}

/// All `l`-dimensional subspaces of the coordinates in `support`, each as
/// its reduced row echelon basis mapped to global coordinates.
fn subspaces(support: &[usize], l: usize) -> Vec<Vec<u64>> {
    let d = support.len();
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(l);
    choose_pivots(d, l, 0, &mut pivots, &mut |piv| {
        let pivot_mask: u64 = piv.iter().fold(0, |m, &p| m | 1 << p);
        let free: Vec<Vec<usize>> = piv
            .iter()
            .map(|&p| (p + 1..d).filter(|c| pivot_mask >> c & 1 == 0).collect())
            .collect();
        let total: usize = free.iter().map(|f| f.len()).sum();
        for fill in 0u64..1 << total {
            let mut shift = 0;
            let rows = piv
                .iter()
                .zip(&free)
                .map(|(&p, cols)| {
                    let mut row = 1u64 << support[p];
                    for (j, &c) in cols.iter().enumerate() {
                        if fill >> (shift + j) & 1 == 1 {
                            row |= 1 << support[c];
                        }
                    }
                    shift += cols.len();
                    row
                })
                .collect();
            out.push(rows);
        }
    });
    out
}

fn choose_pivots(d: usize, l: usize, start: usize, acc: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if acc.len() == l {
        visit(acc);
        return;
    }
    for p in start..d {
        if d - p < l - acc.len() {
            break;
        }
        acc.push(p);
        choose_pivots(d, l, p + 1, acc, visit);
        acc.pop();
    }
}

/// Compositions of `total` into parts bounded by `caps`.
fn splits(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn go(total: usize, caps: &[usize], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match caps.split_first() {
            None => {
                if total == 0 {
                    out.push(acc.clone());
                }
            }
            Some((&cap, rest)) => {
                let rest_cap: usize = rest.iter().sum();
                for l in total.saturating_sub(rest_cap)..=cap.min(total) {
                    acc.push(l);
                    go(total - l, rest, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(total, caps, &mut Vec::new(), &mut out);
    out
}

struct Search {
    /// Transmitting nodes and their supports.
    senders: Vec<(usize, Vec<usize>)>,
    /// For every demanding node: its known-coordinate mask and demanded mask.
    receivers: Vec<(usize, u64, u64)>,
}

impl Search {
    fn decodes(&self, chosen: &[&Vec<u64>]) -> bool {
        self.receivers.iter().all(|&(k, known, wanted)| {
            let mut basis = Basis64::new();
            for ((node, _), rows) in self.senders.iter().zip(chosen) {
                if *node != k {
                    for &r in rows.iter() {
                        basis.insert(r & !known);
                    }
                }
            }
            let mut w = wanted;
            while w != 0 {
                let b = w.trailing_zeros();
                if !basis.contains(1 << b) {
                    return false;
                }
                w &= w - 1;
            }
            true
        })
    }

    /// Depth-first over the remaining senders' subspace lists.
    fn extend<'a>(&self, lists: &'a [Vec<Vec<u64>>], chosen: &mut Vec<&'a Vec<u64>>, stop: &AtomicBool, deadline: Option<Instant>, ticks: &mut u32) -> Option<Vec<Vec<u64>>> {
        if chosen.len() == lists.len() {
            *ticks += 1;
            if *ticks % 4096 == 0 && deadline.is_some_and(|d| Instant::now() > d) {
                stop.store(true, Ordering::Relaxed);
            }
            return self.decodes(chosen).then(|| chosen.iter().map(|r| (*r).clone()).collect());
        }
        for rows in &lists[chosen.len()] {
            if stop.load(Ordering::Relaxed) {
                return None;
            }
            chosen.push(rows);
            let found = self.extend(lists, chosen, stop, deadline, ticks);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Minimum total load over scalar binary linear schemes, searched by
/// increasing load from the generic bound's ceiling.
///
/// Only demanded bits are used as coordinates, and in centralized instances
/// only the server transmits; neither restriction changes the optimum.
pub fn linear_optimal_load(instance: &ExchangeInstance, limits: &OracleLimits) -> Result<OracleResult, OracleError> {
    let generic = generic_bound(instance)?;
    if instance.node_count > limits.max_nodes {
        return Err(OracleError::LimitsExceeded(format!(
            "{} nodes, limit {}",
            instance.node_count, limits.max_nodes
        )));
    }
    let all_bits = instance.disaggregate()?;
    if all_bits.len() > limits.max_bits || all_bits.len() > 64 {
        return Err(OracleError::LimitsExceeded(format!("{} bits, limit {}", all_bits.len(), limits.max_bits)));
    }
    let bits: Vec<(NodeSet, NodeSet)> = all_bits.into_iter().filter(|(p, _)| !p.is_empty()).collect();
    let n = bits.len();
    let alpha = if instance.centralized && instance.node_count <= ALPHA_CLIENT_CAP + 1 {
        Some(alpha_exact(&SideInfoInstance::from_exchange(instance)?).map_err(|e| OracleError::LimitsExceeded(e.to_string()))?.alpha)
    } else {
        None
    };

    let mask_of = |pred: &dyn Fn(&(NodeSet, NodeSet)) -> bool| -> u64 {
        bits.iter().enumerate().filter(|(_, b)| pred(b)).fold(0, |m, (i, _)| m | 1 << i)
    };
    let senders: Vec<(usize, Vec<usize>)> = (0..instance.node_count)
        .filter(|&i| !instance.centralized || i == 0)
        .map(|i| (i, (0..n).filter(|&b| bits[b].1.contains(i)).collect::<Vec<_>>()))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    let receivers: Vec<(usize, u64, u64)> = (0..instance.node_count)
        .map(|k| (k, mask_of(&|b| b.1.contains(k)), mask_of(&|b| b.0.contains(k))))
        .filter(|&(_, _, wanted)| wanted != 0)
        .collect();
    let search = Search { senders, receivers };

    let finish = |load: usize, rows: Vec<(usize, Vec<u64>)>| {
        let scheme = LinearScheme { bits: bits.clone(), rows };
        let mut result = OracleResult {
            load: load as u64,
            scheme,
            generic: generic.clone(),
            alpha,
            verdict: Verdict::Bracketed,
        };
        if rational::uint(load as u64) == result.converse().ceil() {
            result.verdict = Verdict::CertifiedOptimal;
        }
        result
    };
    let uncoded = || {
        let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
        for (i, &(_, q)) in bits.iter().enumerate() {
            let node = if instance.centralized { 0 } else { q.min().expect("valid instances store demanded bits") };
            match rows.iter_mut().find(|(s, _)| *s == node) {
                Some((_, r)) => r.push(1 << i),
                None => rows.push((node, vec![1 << i])),
            }
        }
        rows.sort_by_key(|(s, _)| *s);
        rows
    };

    let start = rational::ceil(&generic).to_usize().unwrap_or(0);
    let deadline = limits.budget.map(|b| Instant::now() + b);
    let caps: Vec<usize> = search.senders.iter().map(|(_, s)| s.len()).collect();
    for load in start..=n {
        if load == n {
            return Ok(finish(n, uncoded()));
        }
        if load > limits.max_load {
            return Err(OracleError::BudgetExhausted {
                lower: load as u64,
                upper: n as u64,
            });
        }
        let level = splits(load, &caps);
        let candidates = level.iter().fold(0u128, |acc, split| {
            let here = split
                .iter()
                .zip(&caps)
                .fold(1u128, |m, (&l, &d)| m.saturating_mul(gaussian_binomial(d, l)));
            acc.saturating_add(here)
        });
        if candidates > limits.max_candidates {
            if load == start {
                return Err(OracleError::LimitsExceeded(format!("{candidates} candidate encoders at load {load}")));
            }
            return Err(OracleError::BudgetExhausted {
                lower: load as u64,
                upper: n as u64,
            });
        }
        let stop = AtomicBool::new(false);
        for split in level {
            let lists: Vec<Vec<Vec<u64>>> = search
                .senders
                .iter()
                .zip(&split)
                .map(|((_, support), &l)| subspaces(support, l))
                .collect();
            let found = lists[0].par_iter().find_map_first(|first| {
                let mut chosen = vec![first];
                let mut ticks = 0;
                search.extend(&lists, &mut chosen, &stop, deadline, &mut ticks)
            });
            if let Some(rows) = found {
                let rows = search
                    .senders
                    .iter()
                    .zip(rows)
                    .filter(|(_, r)| !r.is_empty())
                    .map(|((node, _), r)| (*node, r))
                    .collect();
                return Ok(finish(load, rows));
            }
            if stop.load(Ordering::Relaxed) || deadline.is_some_and(|d| Instant::now() > d) {
                return Err(OracleError::BudgetExhausted {
                    lower: load as u64,
                    upper: n as u64,
                });
            }
        }
    }
    Ok(finish(0, Vec::new()))
}

/// Bit cap for [`alpha_bruteforce`].
pub const ALPHA_BRUTEFORCE_BITS: usize = 16;

/// Largest set of bits whose every nonempty subset `I` has a node demanding
/// a bit of `I` and holding none of the others, by enumerating all subsets.
pub fn alpha_bruteforce(instance: &SideInfoInstance) -> Result<u64, OracleError> {
    let mut bits = Vec::new();
    for c in instance.classes() {
        bits.extend(std::iter::repeat_n((c.demanders.mask(), c.side_info.mask()), c.count as usize));
    }
    let n = bits.len();
    if n > ALPHA_BRUTEFORCE_BITS {
        return Err(OracleError::LimitsExceeded(format!("{n} bits, limit {ALPHA_BRUTEFORCE_BITS}")));
    }
    let size = 1usize << n;
    let mut demand = vec![0u64; size];
    let mut held = vec![0u64; size];
    let mut ok = vec![true; size];
    let mut best = 0u32;
    for set in 1..size {
        let low = set.trailing_zeros() as usize;
        let rest = set & (set - 1);
        demand[set] = demand[rest] | bits[low].0;
        held[set] = held[rest] | bits[low].1;
        // A demander of some bit in the set that holds none of them; it
        // holds none of its own demands, so one union covers "the others".
        let good = demand[set] & !held[set] != 0;
        let mut all = good;
        let mut s = set;
        while all && s != 0 {
            let x = s & s.wrapping_neg();
            all = ok[set ^ x];
            s ^= x;
        }
        ok[set] = all;
        if all {
            best = best.max(set.count_ones());
        }
    }
    Ok(best as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::BitClass;
    use crate::rational::int;
    use proptest::prelude::*;

    fn set(nodes: &[usize]) -> NodeSet {
        NodeSet::from_nodes(nodes.iter().copied()).unwrap()
    }

    fn reciprocal_pair() -> ExchangeInstance {
        ExchangeInstance::new(
            2,
            false,
            vec![BitClass::new(set(&[0]), set(&[1]), 1), BitClass::new(set(&[1]), set(&[0]), 1)],
        )
    }

    fn cyclic(k: usize) -> SideInfoInstance {
        let owned: Vec<(Vec<usize>, Vec<usize>)> = (1..=k).map(|i| (vec![i], vec![i % k + 1])).collect();
        let refs: Vec<(&[usize], &[usize], u64)> = owned.iter().map(|(p, q)| (p.as_slice(), q.as_slice(), 1)).collect();
        SideInfoInstance::from_lists(k, &refs).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2), 35);
        assert_eq!(gaussian_binomial(3, 1), 7);
        assert_eq!(gaussian_binomial(5, 0), 1);
        assert_eq!(gaussian_binomial(2, 3), 0);
        for (d, l) in [(4, 2), (5, 3), (3, 3)] {
            let support: Vec<usize> = (0..d).collect();
            assert_eq!(subspaces(&support, l).len() as u128, gaussian_binomial(d, l));
        }
    }

    #[test]
    fn two_node_base_case() {
        let r = linear_optimal_load(&reciprocal_pair(), &OracleLimits::default()).unwrap();
        assert_eq!(r.load, 2);
        assert_eq!(r.verdict, Verdict::CertifiedOptimal);
        assert_eq!(r.scheme.rows, vec![(0, vec![0b10]), (1, vec![0b01])]);
        assert!(r.scheme.is_decodable());
    }

    #[test]
    fn centralized_reciprocal_sends_one_xor() {
        let inst = SideInfoInstance::from_lists(2, &[(&[1], &[2], 1), (&[2], &[1], 1)]).unwrap().to_exchange();
        let r = linear_optimal_load(&inst, &OracleLimits::default()).unwrap();
        assert_eq!(r.load, 1);
        assert_eq!(r.scheme.rows, vec![(0, vec![0b11])]);
    }

    #[test]
    fn cyclic_three_needs_two() {
        let r = linear_optimal_load(&cyclic(3).to_exchange(), &OracleLimits::default()).unwrap();
        assert_eq!(r.load, 2);
        assert_eq!(r.alpha, Some(2));
        assert_eq!(r.verdict, Verdict::CertifiedOptimal);
        assert!(r.scheme.is_decodable());
    }

    #[test]
    fn cyclic_four_needs_three() {
        let limits = OracleLimits {
            max_nodes: 5,
            ..OracleLimits::default()
        };
        let r = linear_optimal_load(&cyclic(4).to_exchange(), &limits).unwrap();
        assert_eq!(r.load, 3);
        assert_eq!(r.generic, int(2));
        assert_eq!(r.verdict, Verdict::CertifiedOptimal);
    }

    #[test]
    fn limits_enforced() {
        let big = ExchangeInstance::new(2, false, vec![BitClass::new(set(&[0]), set(&[1]), 11)]);
        assert!(matches!(linear_optimal_load(&big, &OracleLimits::default()), Err(OracleError::LimitsExceeded(_))));
        let wide = cyclic(4).to_exchange();
        assert!(matches!(linear_optimal_load(&wide, &OracleLimits::default()), Err(OracleError::LimitsExceeded(_))));
        assert!(matches!(
            linear_optimal_load(&cyclic(3).to_exchange(), &OracleLimits { max_load: 1, ..OracleLimits::default() }),
            Err(OracleError::BudgetExhausted { lower: 2, upper: 3 })
        ));
    }

    #[test]
    fn no_demands_means_no_load() {
        let inst = ExchangeInstance::new(2, false, vec![BitClass::new(NodeSet::EMPTY, set(&[1]), 3)]);
        let r = linear_optimal_load(&inst, &OracleLimits::default()).unwrap();
        assert_eq!(r.load, 0);
    }

    #[test]
    fn alpha_bruteforce_examples() {
        let recip = SideInfoInstance::from_lists(2, &[(&[1], &[2], 1), (&[2], &[1], 1)]).unwrap();
        assert_eq!(alpha_bruteforce(&recip).unwrap(), 1);
        assert_eq!(alpha_bruteforce(&cyclic(3)).unwrap(), 2);
        let server_only = SideInfoInstance::from_lists(2, &[(&[1], &[], 3), (&[2], &[], 2)]).unwrap();
        assert_eq!(alpha_bruteforce(&server_only).unwrap(), 5);
        let too_big = SideInfoInstance::from_lists(1, &[(&[1], &[], 17)]).unwrap();
        assert!(alpha_bruteforce(&too_big).is_err());
    }

    fn arb_small() -> impl Strategy<Value = ExchangeInstance> {
        (2usize..4).prop_flat_map(|k| {
            let full = (1u64 << k) - 1;
            prop::collection::vec((1..=full, 1..=full, 1u64..3), 1..4).prop_map(move |raw| {
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

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn generic_bound_never_exceeds_search(inst in arb_small()) {
            let r = linear_optimal_load(&inst, &OracleLimits::default()).unwrap();
            prop_assert!(r.generic <= rational::uint(r.load));
            prop_assert!(r.scheme.is_decodable());
            prop_assert_eq!(r.scheme.load() as u64, r.load);
        }

        #[test]
        fn bruteforce_matches_dp(inst in crate::bound::tests::arb_side_info(4, 3)) {
            prop_assume!(inst.total_bits() <= 12);
            prop_assert_eq!(alpha_bruteforce(&inst).unwrap(), alpha_exact(&inst).unwrap().alpha);
        }
    }
}
