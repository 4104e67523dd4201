//! The reproduction matrix: one exact check per acceptance criterion.
//!
//! Every criterion is deterministic given the seed, and the rendered report
//! contains no timings, so two runs with the same seed are byte-identical.

use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bound::{average_permutation_bound, centralized_bound, generic_bound};
use crate::index_coding::{alpha_exact, clique_cover_scheme, tightness_check, verify_scheme, SideInfoClass, SideInfoInstance};
use crate::instance::{BitClass, ExchangeInstance};
use crate::nodeset::NodeSet;
use crate::oracle::{alpha_bruteforce, linear_optimal_load, OracleLimits};
use crate::rational::{self, int, ratio, uint, Rational};
use crate::scenarios::{
    averaged_bound, caching_closed_form, cdc_closed_form_s1, cdc_instance, cdc_normalized_bound, cdc_profile_bound_s1,
    cdc_prop_bound, cyclic_demand_family, cyclic_shuffle, decentralized_instance, man_placement,
    memory_sharing_placement, random_storage, shuffle_average_bound, shuffling_closed_form, shuffling_instance,
    symmetric_storage, CachingSetting, CachingSpec, CdcSpec, DecentralizedMode,
};

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

type Check = Result<String, String>;

fn outcome(id: u8, name: &'static str, check: Check) -> Outcome {
    let (passed, detail) = match check {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome { id, name, passed, detail }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 56) ^ 0x5eed_0000)
}

fn show(x: &Rational) -> String {
    rational::format_exact(x)
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Averaged bound over the cyclic family on the symmetric placement equals
/// `K(1−M/N)F/(1+MK/N)`.
pub fn caching_equality() -> Check {
    let mut shown = Vec::new();
    for (k, n, m, f) in [(2, 2, 1, 2), (4, 4, 1, 4), (4, 4, 2, 12)] {
        let started = Instant::now();
        let spec = CachingSpec::new(k, n, int(m), f);
        let avg = averaged_bound(&man_placement(&spec).map_err(fail)?, &cyclic_demand_family(n, k, 1).map_err(fail)?)
            .map_err(fail)?;
        let closed = caching_closed_form(&spec, CachingSetting::Centralized).map_err(fail)?;
        if avg != closed {
            return Err(format!("(K,N,M,F)=({k},{n},{m},{f}): averaged {} != closed {}", show(&avg), show(&closed)));
        }
        if started.elapsed() >= Duration::from_secs(1) {
            return Err(format!("(K,N,M,F)=({k},{n},{m},{f}) took over 1 s"));
        }
        shown.push(show(&avg));
    }
    Ok(format!("averaged = closed form = {}", shown.join(", ")))
}

/// The heterogeneous form reduces to `(N/M−1)F` without a server and to the
/// homogeneous server form with one.
pub fn heterogeneous_reductions() -> Check {
    for (n, m, f) in [(3, 1, 1), (4, 1, 2), (6, 2, 3), (5, 3, 7), (8, 6, 4)] {
        let k = n;
        let spec = CachingSpec::new(k, n, int(m), f).with_server(false);
        let got = caching_closed_form(&spec, CachingSetting::Heterogeneous).map_err(fail)?;
        let want = (ratio(n as i64, m) - int(1)) * uint(f);
        if got != want {
            return Err(format!("no server (N,M,F)=({n},{m},{f}): {} != {}", show(&got), show(&want)));
        }
    }
    let mut swept = 0;
    for k in 1..=5usize {
        for n in 1..=6usize {
            for m in 0..=n as i64 {
                for f in [1u64, 3, 10] {
                    let spec = CachingSpec::new(k, n, int(m), f);
                    let het = caching_closed_form(&spec, CachingSetting::Heterogeneous).map_err(fail)?;
                    let hom = caching_closed_form(&spec, CachingSetting::Centralized).map_err(fail)?;
                    if het != hom {
                        return Err(format!("server (K,N,M,F)=({k},{n},{m},{f}): {} != {}", show(&het), show(&hom)));
                    }
                    swept += 1;
                }
            }
        }
    }
    Ok(format!("5 server-free triples match (N/M-1)F; {swept} server cases match the homogeneous form"))
}

/// Multiple requests: `(K,Δ,N,M) = (2,2,4,1)` should average to `2F`.
///
/// `t = MK/N = 1/2` is fractional, so the placement memory-shares between
/// `t = 0` and `t = 1`.
pub fn multiple_requests() -> Check {
    let f = 4;
    let spec = CachingSpec::new(2, 4, int(1), f).with_requests(2);
    let placement = memory_sharing_placement(&spec).map_err(fail)?;
    placement.check(&spec).map_err(fail)?;
    let avg = averaged_bound(&placement, &cyclic_demand_family(4, 2, 2).map_err(fail)?).map_err(fail)?;
    let closed = caching_closed_form(&spec, CachingSetting::MultipleRequests).map_err(fail)?;
    let target = uint(2 * f);
    let detail = format!("F={f}: averaged {}, closed form {}, target 2F = {}", show(&avg), show(&closed), show(&target));
    if avg == target {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Exact-fraction decentralized instances meet the closed form exactly and
/// sampled ones come within 2%.
pub fn decentralized(seed: u64) -> Check {
    let mut rng = rng_for(seed, 4);
    let mut worst = 0f64;
    for (k, n, m) in [(2usize, 2usize, 1i64), (3, 3, 1), (4, 4, 2)] {
        let exact_spec = CachingSpec::new(k, n, int(m), 12);
        let closed = caching_closed_form(&exact_spec, CachingSetting::Decentralized).map_err(fail)?;
        let bound = generic_bound(&decentralized_instance(&exact_spec, DecentralizedMode::Exact).map_err(fail)?).map_err(fail)?;
        if bound != closed {
            return Err(format!("K={k} M/N={m}/{n}: exact {} != {}", show(&bound), show(&closed)));
        }
        let sampled_spec = CachingSpec::new(k, n, int(m), 100_000);
        let closed = caching_closed_form(&sampled_spec, CachingSetting::Decentralized).map_err(fail)?;
        let inst = decentralized_instance(&sampled_spec, DecentralizedMode::Sampled { seed: rng.random() }).map_err(fail)?;
        let sampled = generic_bound(&inst).map_err(fail)?;
        let rel = ((&sampled - &closed).abs() / &closed).clone();
        let rel = rational::to_f64(&rel);
        worst = worst.max(rel);
        if rel >= 0.02 {
            return Err(format!("K={k} M/N={m}/{n}: sampled relative error {rel:.4}"));
        }
    }
    Ok(format!("exact masses match for 3 cases; sampled worst relative error {worst:.4}"))
}

/// Cyclic shuffle on own-unit storage, then random legal storages.
pub fn shuffling(seed: u64) -> Check {
    let unit = 2;
    let spec = symmetric_storage(3, 1, 1, unit).map_err(fail)?;
    let bound = generic_bound(&shuffling_instance(&spec, &cyclic_shuffle(3, 1)).map_err(fail)?).map_err(fail)?;
    let closed = shuffling_closed_form(3, 1, 1, unit).map_err(fail)?;
    if bound != uint(3 * unit) || bound != closed {
        return Err(format!("K=3 q=1 M=1: bound {} closed {} want {}", show(&bound), show(&closed), 3 * unit));
    }
    let mut rng = rng_for(seed, 5);
    for i in 0..10 {
        let k = rng.random_range(2..=4usize);
        let q = rng.random_range(1..=2usize);
        let m = rng.random_range(q..=k * q);
        let b = rng.random_range(1..=4u64);
        let spec = random_storage(k, q, m, b, rng.random()).map_err(fail)?;
        let avg = shuffle_average_bound(&spec).map_err(fail)?;
        let closed = shuffling_closed_form(k, q, m, b).map_err(fail)?;
        if avg < closed {
            return Err(format!("storage {i} (K={k},q={q},M={m},B={b}): average {} < closed {}", show(&avg), show(&closed)));
        }
    }
    Ok(format!("cyclic bound = closed form = {}; 10 random storages average above the closed form", 3 * unit))
}

/// Multisets of `len` items from `0..choices`, in lexicographic order.
fn multisets(choices: usize, len: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(choices: usize, len: usize, start: usize, acc: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if acc.len() == len {
            visit(acc);
            return;
        }
        for c in start..choices {
            acc.push(c);
            go(choices, len, c, acc, visit);
            acc.pop();
        }
    }
    go(choices, len, 0, &mut Vec::new(), visit);
}

/// Every map assignment (up to file order) for `N ≤ 6`, `K ≤ 4`, `s = 1`.
pub fn cdc() -> Check {
    let mut checked = 0u64;
    let mut uniform = 0u64;
    for k in 2..=4usize {
        let sets: Vec<NodeSet> = (1..1u64 << k).map(NodeSet::from_mask).collect();
        for n in 1..=6usize {
            let mut err = None;
            multisets(sets.len(), n, &mut |pick| {
                if err.is_some() {
                    return;
                }
                let spec = CdcSpec {
                    nodes: k,
                    mappers: pick.iter().map(|&i| sets[i]).collect(),
                    reducers: k as u64,
                    value_bits: 1,
                    replication: 1,
                };
                let got = match cdc_normalized_bound(&spec) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e.to_string());
                        return;
                    }
                };
                let profile = spec.mapping_profile();
                let want = cdc_profile_bound_s1(&profile, k, n);
                if got != want {
                    err = Some(format!("K={k} N={n} {:?}: {} != {}", spec.mappers, show(&got), show(&want)));
                    return;
                }
                if profile.iter().filter(|&&a| a > 0).count() == 1 {
                    let closed = cdc_closed_form_s1(&spec.computation_load(), k).expect("r >= 1");
                    if got != closed {
                        err = Some(format!("K={k} N={n} uniform: {} != {}", show(&got), show(&closed)));
                        return;
                    }
                    uniform += 1;
                }
                checked += 1;
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    let spec = CdcSpec {
        nodes: 3,
        mappers: (0..3).map(NodeSet::singleton).collect(),
        reducers: 3,
        value_bits: 1,
        replication: 2,
    };
    let prop = cdc_prop_bound(&spec.mapping_profile(), 3, 2, 3);
    let built = cdc_normalized_bound(&spec).map_err(fail)?;
    cdc_instance(&spec).map_err(fail)?;
    if prop != Rational::one() || built != prop {
        return Err(format!("s=2 K=3: formula {} built {} want 1", show(&prop), show(&built)));
    }
    Ok(format!("{checked} assignments match ({uniform} uniform also match (1/r)(1-r/K)); s=2 value 1"))
}

/// A random side-information instance with `1..=max_clients` clients and at
/// most `max_bits` bits.
fn random_side_info(rng: &mut ChaCha8Rng, max_clients: usize, max_bits: u64) -> SideInfoInstance {
    let k = rng.random_range(1..=max_clients);
    let full = (1u64 << k) - 1;
    let mut left = rng.random_range(1..=max_bits);
    let mut classes = Vec::new();
    while left > 0 {
        let p = rng.random_range(1..=full);
        let q = rng.random_range(0..=full) & !p;
        let n = rng.random_range(1..=left.min(3));
        left -= n;
        classes.push(SideInfoClass {
            demanders: NodeSet::from_mask(p << 1),
            side_info: NodeSet::from_mask(q << 1),
            count: n,
        });
    }
    SideInfoInstance::new(k, classes).expect("generated classes are well formed")
}

/// Mean permutation bound over all `K!` orders equals the centralized bound.
pub fn averaging_identity(seed: u64) -> Check {
    let mut rng = rng_for(seed, 7);
    for i in 0..50 {
        let inst = random_side_info(&mut rng, 5, 12);
        let avg = average_permutation_bound(&inst);
        let thm = centralized_bound(&inst);
        if avg != thm {
            return Err(format!("instance {i}: average {} != {}", show(&avg), show(&thm)));
        }
    }
    Ok("50 instances: average over all orders = centralized bound".into())
}

fn cyclic(k: usize) -> SideInfoInstance {
    let classes = (1..=k)
        .map(|i| SideInfoClass {
            demanders: NodeSet::singleton(i),
            side_info: NodeSet::singleton(i % k + 1),
            count: 1,
        })
        .collect();
    SideInfoInstance::new(k, classes).expect("cyclic instance is well formed")
}

/// DP against exhaustive enumeration, then the strict gap on the 4-cycle.
pub fn alpha_correctness(seed: u64) -> Check {
    let mut rng = rng_for(seed, 8);
    for i in 0..100 {
        let inst = random_side_info(&mut rng, 5, 12);
        let dp = alpha_exact(&inst).map_err(fail)?.alpha;
        let brute = alpha_bruteforce(&inst).map_err(fail)?;
        if dp != brute {
            return Err(format!("instance {i}: DP {dp} != exhaustive {brute}"));
        }
    }
    let started = Instant::now();
    let four = cyclic(4);
    let bound = centralized_bound(&four);
    let alpha = alpha_exact(&four).map_err(fail)?.alpha;
    let limits = OracleLimits {
        max_nodes: 5,
        ..OracleLimits::default()
    };
    let linear = linear_optimal_load(&four.to_exchange(), &limits).map_err(fail)?.load;
    let detail = format!("100 instances agree; 4-cycle bound {} < alpha {alpha} = linear optimum {linear}", show(&bound));
    if bound == int(2) && alpha == 3 && linear == 3 && started.elapsed() < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// A unicast instance built from symmetric cliques, so tightness holds.
fn random_tight(rng: &mut ChaCha8Rng, max_bits: u64) -> SideInfoInstance {
    let k = rng.random_range(2..=4usize);
    let clients = NodeSet::full(k + 1).without(0);
    let mut classes = Vec::new();
    let mut used = 0;
    let target = rng.random_range(2..=max_bits);
    while used < target {
        if rng.random_bool(0.25) {
            let c = rng.random_range(1..=k);
            classes.push(SideInfoClass {
                demanders: NodeSet::singleton(c),
                side_info: NodeSet::EMPTY,
                count: 1,
            });
            used += 1;
            continue;
        }
        let mask = rng.random_range(0..1u64 << k) << 1;
        let s = NodeSet::from_mask(mask).intersection(clients);
        if s.len() < 2 || used + s.len() as u64 > max_bits {
            if used + 2 > max_bits {
                break;
            }
            continue;
        }
        for member in s.iter() {
            classes.push(SideInfoClass {
                demanders: NodeSet::singleton(member),
                side_info: s.without(member),
                count: 1,
            });
        }
        used += s.len() as u64;
    }
    SideInfoInstance::new(k, classes).expect("generated classes are well formed")
}

/// Tight instances: scheme, bound, `α` and linear optimum coincide; one
/// extra bit in a clique breaks tightness and opens a gap.
pub fn tightness(seed: u64) -> Check {
    let mut rng = rng_for(seed, 9);
    let limits = OracleLimits {
        max_nodes: 5,
        ..OracleLimits::default()
    };
    let mut done = 0;
    while done < 20 {
        let inst = random_tight(&mut rng, 8);
        if !inst.classes().iter().any(|c| !c.side_info.is_empty()) {
            continue;
        }
        let tag = format!("instance {done}");
        if !tightness_check(&inst).map_err(fail)?.is_tight() {
            return Err(format!("{tag}: generator produced a non-tight instance"));
        }
        let scheme = clique_cover_scheme(&inst).map_err(fail)?;
        let load = uint(scheme.total_load());
        let bound = centralized_bound(&inst);
        let alpha = uint(alpha_exact(&inst).map_err(fail)?.alpha);
        let linear = uint(linear_optimal_load(&inst.to_exchange(), &limits).map_err(fail)?.load);
        if load != bound || bound != alpha || alpha != linear {
            return Err(format!(
                "{tag}: scheme {} bound {} alpha {} linear {}",
                show(&load),
                show(&bound),
                show(&alpha),
                show(&linear)
            ));
        }
        if !verify_scheme(&inst, &scheme, 4, rng.random()).map_err(fail)? {
            return Err(format!("{tag}: clique-cover scheme does not decode"));
        }

        let target = inst.classes().iter().find(|c| !c.side_info.is_empty()).expect("checked above").clone();
        let mut classes = inst.classes().to_vec();
        classes.push(SideInfoClass { count: 1, ..target });
        let bumped = SideInfoInstance::new(inst.clients(), classes).map_err(fail)?;
        if tightness_check(&bumped).map_err(fail)?.is_tight() {
            return Err(format!("{tag}: perturbed instance still tight"));
        }
        let gap = uint(clique_cover_scheme(&bumped).map_err(fail)?.total_load()) - centralized_bound(&bumped);
        if !gap.is_positive() {
            return Err(format!("{tag}: perturbed gap {} not positive", show(&gap)));
        }
        done += 1;
    }
    Ok("20 tight instances: scheme = bound = alpha = linear optimum; perturbations open a gap".into())
}

fn random_exchange(rng: &mut ChaCha8Rng) -> ExchangeInstance {
    loop {
        let k = rng.random_range(2..=4usize);
        let centralized = k >= 3 && rng.random_bool(0.3);
        let full = (1u64 << k) - 1;
        let mut left = rng.random_range(1..=6u64);
        let mut classes = Vec::new();
        while left > 0 {
            let n = rng.random_range(1..=left.min(2));
            left -= n;
            let mut p = rng.random_range(1..=full);
            let mut q = rng.random_range(1..=full) & !p;
            if centralized {
                p &= !1;
                q |= 1;
            }
            if p != 0 && q != 0 {
                classes.push(BitClass::new(NodeSet::from_mask(p), NodeSet::from_mask(q), n));
            }
        }
        let inst = ExchangeInstance::new(k, centralized, classes).canonicalize();
        if !inst.classes.is_empty() && inst.is_valid() {
            return inst;
        }
    }
}

/// The generic bound never exceeds the optimal linear load.
pub fn sandwich(seed: u64) -> Check {
    let mut rng = rng_for(seed, 10);
    let limits = OracleLimits::default();
    let mut certified = 0;
    for i in 0..50 {
        let inst = random_exchange(&mut rng);
        let r = linear_optimal_load(&inst, &limits).map_err(fail)?;
        if r.generic > uint(r.load) {
            return Err(format!("instance {i}: bound {} > linear optimum {}", show(&r.generic), r.load));
        }
        if !r.scheme.is_decodable() {
            return Err(format!("instance {i}: witness does not decode"));
        }
        if r.verdict == crate::oracle::Verdict::CertifiedOptimal {
            certified += 1;
        }
    }
    Ok(format!("50 instances: bound <= linear optimum ({certified} certified optimal)"))
}

/// Criteria 1 to 10.
pub fn run_matrix(seed: u64) -> Vec<Outcome> {
    vec![
        outcome(1, "symmetric caching placement meets the converse", caching_equality()),
        outcome(2, "heterogeneous and device-to-device reductions", heterogeneous_reductions()),
        outcome(3, "multiple requests average to 2F", multiple_requests()),
        outcome(4, "decentralized caching", decentralized(seed)),
        outcome(5, "data shuffling", shuffling(seed)),
        outcome(6, "distributed computing", cdc()),
        outcome(7, "permutation averaging identity", averaging_identity(seed)),
        outcome(8, "alpha correctness and strict looseness", alpha_correctness(seed)),
        outcome(9, "tightness and clique cover", tightness(seed)),
        outcome(10, "bound never exceeds linear optimum", sandwich(seed)),
    ]
}

pub fn render(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&o.line());
        out.push('\n');
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    out
}

/// Runs the matrix twice and adds the determinism criterion.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    let started = Instant::now();
    let mut first = run_matrix(seed);
    let second = run_matrix(seed);
    let same = render(&first) == render(&second);
    let fast = started.elapsed() < Duration::from_secs(300);
    let check = match (same, fast) {
        (true, true) => Ok("two runs rendered byte-identical reports within 5 minutes".to_string()),
        (false, _) => Err("two runs with the same seed differ".to_string()),
        (true, false) => Err("two runs took over 5 minutes".to_string()),
    };
    first.push(outcome(11, "determinism", check));
    first
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        let mut n = 0;
        multisets(3, 2, &mut |_| n += 1);
        assert_eq!(n, 6);
    }

    #[test]
    fn generators_respect_caps() {
        let mut rng = rng_for(1, 0);
        for _ in 0..20 {
            let s = random_side_info(&mut rng, 5, 12);
            assert!(s.clients() <= 5 && s.total_bits() <= 12);
            let t = random_tight(&mut rng, 8);
            assert!(t.total_bits() <= 8);
            assert!(tightness_check(&t).unwrap().is_tight());
            assert!(random_exchange(&mut rng).total_bits() <= uint(6));
        }
    }

    #[test]
    fn outcome_lines() {
        let o = outcome(3, "x", Err("d".into()));
        assert_eq!(o.line(), "[FAIL]  3 x: d");
        assert_eq!(render(&[o]), "[FAIL]  3 x: d\n0/1 criteria passed\n");
    }
}
