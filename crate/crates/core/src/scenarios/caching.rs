//! Coded caching with uncoded placement.
//!
//! Clients are numbered `1..=K`. With a server the instance uses node 0 for
//! the server and node `k` for client `k`; without one client `k` is node
//! `k - 1`. Files are numbered `1..=N`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bound::generic_bound;
use crate::instance::{BitClass, ExchangeInstance};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::rational::{self, Rational};
use crate::{InstanceError, ScenarioError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheGroup {
    pub clients: usize,
    /// Fraction of every file each client in the group caches.
    pub fraction: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CachingSpec {
    pub clients: usize,
    pub files: usize,
    pub file_bits: u64,
    /// Cache size `M`, in files.
    pub cache_files: Rational,
    /// Files requested per client.
    pub requests: usize,
    pub server: bool,
    pub groups: Vec<CacheGroup>,
}

impl CachingSpec {
    /// One homogeneous group caching `M/N` of each file, a server, one request each.
    pub fn new(clients: usize, files: usize, cache_files: Rational, file_bits: u64) -> Self {
        let fraction = if files == 0 {
            Rational::zero()
        } else {
            &cache_files / rational::uint(files as u64)
        };
        CachingSpec {
            clients,
            files,
            file_bits,
            cache_files,
            requests: 1,
            server: true,
            groups: vec![CacheGroup { clients, fraction }],
        }
    }

    pub fn with_requests(mut self, requests: usize) -> Self {
        self.requests = requests;
        self
    }

    pub fn with_server(mut self, server: bool) -> Self {
        self.server = server;
        self
    }

    pub fn with_groups(mut self, groups: Vec<CacheGroup>) -> Self {
        self.groups = groups;
        self
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: &str| Err(ScenarioError::InvalidSpec(m.to_string()));
        if self.clients == 0 || self.files == 0 || self.file_bits == 0 || self.requests == 0 {
            return bad("K, N, F and Delta must be positive");
        }
        if self.clients + usize::from(self.server) > MAX_NODES {
            return Err(InstanceError::TooManyNodes(self.clients + 1).into());
        }
        if self.cache_files < Rational::zero() || self.cache_files > rational::uint(self.files as u64) {
            return bad("cache size must lie in [0, N]");
        }
        if self.groups.iter().map(|g| g.clients).sum::<usize>() != self.clients {
            return bad("group sizes must add up to K");
        }
        if self.groups.iter().any(|g| g.fraction < Rational::zero() || g.fraction > Rational::one()) {
            return bad("cache fractions must lie in [0, 1]");
        }
        Ok(())
    }

    /// `t = MK/N`.
    pub fn t(&self) -> Rational {
        &self.cache_files * rational::uint(self.clients as u64) / rational::uint(self.files as u64)
    }

    /// Cache fraction of each client, in client order.
    pub fn client_fractions(&self) -> Vec<Rational> {
        self.groups
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.fraction.clone(), g.clients))
            .collect()
    }

    fn client_universe(&self) -> NodeSet {
        NodeSet::full(self.clients + 1).without(0)
    }
}

/// `b_n^Q` for every file: bits of file `n` cached at exactly the clients `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    clients: usize,
    server: bool,
    file_bits: u64,
    files: Vec<BTreeMap<NodeSet, u64>>,
}

impl Placement {
    /// Zero-count patterns are dropped.
    pub fn new(clients: usize, server: bool, file_bits: u64, files: Vec<BTreeMap<NodeSet, u64>>) -> Self {
        let files = files
            .into_iter()
            .map(|m| m.into_iter().filter(|&(_, b)| b > 0).collect())
            .collect();
        Placement {
            clients,
            server,
            file_bits,
            files,
        }
    }

    pub fn clients(&self) -> usize {
        self.clients
    }

    pub fn files(&self) -> usize {
        self.files.len()
    }

    pub fn server(&self) -> bool {
        self.server
    }

    pub fn file_bits(&self) -> u64 {
        self.file_bits
    }

    /// `(Q, b_n^Q)` for file `n` (1-based).
    pub fn parts(&self, file: usize) -> impl Iterator<Item = (NodeSet, u64)> + '_ {
        self.files[file - 1].iter().map(|(&q, &b)| (q, b))
    }

    pub fn bits(&self, file: usize, cached_at: NodeSet) -> u64 {
        self.files[file - 1].get(&cached_at).copied().unwrap_or(0)
    }

    /// `Σ_n Σ_Q |Q| b_n^Q`.
    pub fn storage_used(&self) -> u64 {
        self.files
            .iter()
            .flat_map(|m| m.iter())
            .map(|(q, &b)| q.len() as u64 * b)
            .sum()
    }

    /// Every file fully accounted for and the total storage within budget.
    pub fn check(&self, spec: &CachingSpec) -> Result<(), ScenarioError> {
        let universe = spec.client_universe();
        for (i, m) in self.files.iter().enumerate() {
            if m.values().sum::<u64>() != self.file_bits {
                return Err(ScenarioError::InvalidSpec(format!("file {} is not split into F bits", i + 1)));
            }
            if m.keys().any(|q| !q.is_subset(universe)) {
                return Err(ScenarioError::InvalidSpec(format!("file {} cached outside 1..=K", i + 1)));
            }
        }
        let budget: Rational = spec
            .groups
            .iter()
            .map(|g| rational::uint(g.clients as u64) * &g.fraction)
            .sum::<Rational>()
            * rational::uint(spec.files as u64)
            * rational::uint(spec.file_bits);
        if rational::uint(self.storage_used()) > budget {
            return Err(ScenarioError::InvalidSpec("placement exceeds the cache budget".into()));
        }
        Ok(())
    }
}

fn subsets_of_size(universe: NodeSet, size: usize) -> impl Iterator<Item = NodeSet> {
    universe.subsets().filter(move |s| s.len() == size)
}

fn integral_t(spec: &CachingSpec) -> Result<u64, ScenarioError> {
    let t = spec.t();
    if !t.is_integer() {
        return Err(ScenarioError::NonIntegerT(rational::format_exact(&t)));
    }
    Ok(t.to_integer().to_u64().expect("t lies in [0, K]"))
}

fn require_homogeneous(spec: &CachingSpec) -> Result<(), ScenarioError> {
    spec.validate()?;
    if spec.groups.len() != 1 {
        return Err(ScenarioError::InvalidSpec("placement needs a single homogeneous group".into()));
    }
    Ok(())
}

/// Adds `bits` bits split evenly over all `t`-subsets to `file`.
fn add_symmetric(file: &mut BTreeMap<NodeSet, u64>, universe: NodeSet, t: usize, bits: u64) -> Result<(), ScenarioError> {
    if bits == 0 {
        return Ok(());
    }
    let parts = rational::binomial_u64(universe.len() as u64, t as u64);
    if bits % parts != 0 {
        return Err(ScenarioError::Indivisible { parts, bits });
    }
    for s in subsets_of_size(universe, t) {
        *file.entry(s).or_default() += bits / parts;
    }
    Ok(())
}

/// Symmetric placement: each file in `C(K,t)` equal parts, part `T` cached at `T`.
pub fn man_placement(spec: &CachingSpec) -> Result<Placement, ScenarioError> {
    require_homogeneous(spec)?;
    let t = integral_t(spec)? as usize;
    let universe = spec.client_universe();
    let mut file = BTreeMap::new();
    add_symmetric(&mut file, universe, t, spec.file_bits)?;
    Ok(Placement::new(spec.clients, spec.server, spec.file_bits, vec![file; spec.files]))
}

/// Splits each file between the symmetric placements at `⌊t⌋` and `⌈t⌉` so the
/// cache budget is met exactly. Equals [`man_placement`] for integer `t`.
pub fn memory_sharing_placement(spec: &CachingSpec) -> Result<Placement, ScenarioError> {
    require_homogeneous(spec)?;
    let t = spec.t();
    let lo = t.floor();
    if lo == t {
        return man_placement(spec);
    }
    let f = rational::uint(spec.file_bits);
    let low_share = (&lo + Rational::one() - &t) * &f;
    if !low_share.is_integer() {
        return Err(ScenarioError::Indivisible {
            parts: t.denom().to_u64().unwrap_or(u64::MAX),
            bits: spec.file_bits,
        });
    }
    let low_bits = low_share.to_integer().to_u64().expect("share lies in [0, F]");
    let lo = lo.to_integer().to_usize().expect("t lies in [0, K]");
    let universe = spec.client_universe();
    let mut file = BTreeMap::new();
    add_symmetric(&mut file, universe, lo, low_bits)?;
    add_symmetric(&mut file, universe, lo + 1, spec.file_bits - low_bits)?;
    Ok(Placement::new(spec.clients, spec.server, spec.file_bits, vec![file; spec.files]))
}

fn cached_bits(spec: &CachingSpec, fraction: &Rational) -> Result<u64, ScenarioError> {
    let w = fraction * rational::uint(spec.file_bits);
    if !w.is_integer() {
        return Err(ScenarioError::Indivisible {
            parts: fraction.denom().to_u64().unwrap_or(u64::MAX),
            bits: spec.file_bits,
        });
    }
    Ok(w.to_integer().to_u64().expect("fraction lies in [0, 1]"))
}

fn patterns_from_masks(masks: &[NodeSet]) -> BTreeMap<NodeSet, u64> {
    let mut out = BTreeMap::new();
    for &m in masks {
        *out.entry(m).or_default() += 1;
    }
    out
}

/// Client `k` caches a cyclic window of `γ_k F` bits of every file; windows
/// are laid end to end, so bits are spread as evenly as the sizes allow.
pub fn cyclic_window_placement(spec: &CachingSpec) -> Result<Placement, ScenarioError> {
    spec.validate()?;
    let f = spec.file_bits;
    let mut masks = vec![NodeSet::EMPTY; f as usize];
    let mut start = 0u64;
    for (i, gamma) in spec.client_fractions().iter().enumerate() {
        let w = cached_bits(spec, gamma)?;
        for j in 0..w {
            masks[((start + j) % f) as usize].insert(i + 1);
        }
        start = (start + w) % f;
    }
    let file = patterns_from_masks(&masks);
    Ok(Placement::new(spec.clients, spec.server, f, vec![file; spec.files]))
}

/// Client `k` caches `⌊γ_k F⌋` uniformly chosen bits of every file.
pub fn random_placement(spec: &CachingSpec, seed: u64) -> Result<Placement, ScenarioError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = spec.file_bits as usize;
    let fractions = spec.client_fractions();
    let mut files = Vec::with_capacity(spec.files);
    for _ in 0..spec.files {
        let mut masks = vec![NodeSet::EMPTY; f];
        for (i, gamma) in fractions.iter().enumerate() {
            let w = (gamma * rational::uint(f as u64)).floor().to_integer().to_usize().unwrap_or(0);
            for b in sample(&mut rng, f, w.min(f)) {
                masks[b].insert(i + 1);
            }
        }
        files.push(patterns_from_masks(&masks));
    }
    Ok(Placement::new(spec.clients, spec.server, spec.file_bits, files))
}

/// Files requested by each client, in client order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandVector(pub Vec<Vec<usize>>);

impl DemandVector {
    /// One file per client.
    pub fn single(files: &[usize]) -> Self {
        DemandVector(files.iter().map(|&f| vec![f]).collect())
    }

    pub fn clients(&self) -> usize {
        self.0.len()
    }

    /// Files requested by client `k` (1-based).
    pub fn files_of(&self, client: usize) -> &[usize] {
        &self.0[client - 1]
    }

    /// All requested files are different.
    pub fn is_distinct(&self) -> bool {
        let all: Vec<usize> = self.0.iter().flatten().copied().collect();
        let set: std::collections::BTreeSet<usize> = all.iter().copied().collect();
        set.len() == all.len()
    }

    /// Parses `"1,2,3"` (one file per client) or `"1,2|3,4"` (client lists
    /// separated by `|`).
    pub fn parse(s: &str) -> Option<Self> {
        let num = |x: &str| x.trim().parse::<usize>().ok();
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.contains('|') {
            s.split('|')
                .map(|c| c.split(',').map(num).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
                .map(DemandVector)
        } else {
            s.split(',').map(num).collect::<Option<Vec<_>>>().map(|v| Self::single(&v))
        }
    }
}

impl fmt::Display for DemandVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let multi = self.0.iter().any(|c| c.len() != 1);
        let sep = if multi { "|" } else { "," };
        let body: Vec<String> = self
            .0
            .iter()
            .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "({})", body.join(sep))
    }
}

/// `j ⊕_N i = ((j + i) mod N) + 1`.
pub fn cyclic_add(j: usize, i: usize, files: usize) -> usize {
    (j + i) % files + 1
}

/// The `N` demand vectors of consecutive files, one starting at each file.
/// Client `k` of vector `j` asks for `j ⊕ ((k−1)Δ), .., j ⊕ (kΔ−1)`.
pub fn cyclic_demand_family(files: usize, clients: usize, requests: usize) -> Result<Vec<DemandVector>, ScenarioError> {
    if clients * requests > files {
        return Err(ScenarioError::TooFewFiles {
            needed: clients * requests,
            files,
        });
    }
    Ok((0..files)
        .map(|j| {
            DemandVector(
                (0..clients)
                    .map(|k| (0..requests).map(|i| cyclic_add(j, k * requests + i, files)).collect())
                    .collect(),
            )
        })
        .collect())
}

/// Node index of client `k`.
fn node_of(client: usize, server: bool) -> usize {
    if server {
        client
    } else {
        client - 1
    }
}

fn map_clients(set: NodeSet, server: bool) -> NodeSet {
    if server {
        set
    } else {
        set.shift_down(1)
    }
}

/// Shared construction: each requested file's storage patterns become
/// classes with `P` = its requesters outside `Q`.
fn build_instance<F>(clients: usize, files: usize, server: bool, demand: &DemandVector, patterns: F) -> Result<ExchangeInstance, ScenarioError>
where
    F: Fn(usize) -> Vec<(NodeSet, Rational)>,
{
    if demand.clients() != clients {
        return Err(ScenarioError::InvalidSpec(format!(
            "demand lists {} clients, placement has {clients}",
            demand.clients()
        )));
    }
    let mut requesters: BTreeMap<usize, NodeSet> = BTreeMap::new();
    for k in 1..=clients {
        for &n in demand.files_of(k) {
            if n == 0 || n > files {
                return Err(ScenarioError::UnknownFile { file: n, files });
            }
            requesters.entry(n).or_default().insert(k);
        }
    }
    let node_count = clients + usize::from(server);
    let mut classes = Vec::new();
    for (&n, &wanted) in &requesters {
        for (q, mass) in patterns(n) {
            let p = wanted.difference(q);
            let mut owners = map_clients(q, server);
            if server {
                owners.insert(0);
            }
            classes.push(BitClass::with_mass(map_clients(p, server), owners, mass));
        }
    }
    let instance = ExchangeInstance::new(node_count, server, classes).canonicalize();
    let report = instance.validate();
    if !report.is_ok() {
        return Err(InstanceError::Invalid(report).into());
    }
    Ok(instance)
}

/// The delivery problem for one demand vector.
pub fn caching_instance(placement: &Placement, demand: &DemandVector) -> Result<ExchangeInstance, ScenarioError> {
    build_instance(placement.clients, placement.files(), placement.server, demand, |n| {
        placement.parts(n).map(|(q, b)| (q, rational::uint(b))).collect()
    })
}

/// Mean generic bound over a family of demand vectors.
pub fn averaged_bound(placement: &Placement, family: &[DemandVector]) -> Result<Rational, ScenarioError> {
    if family.is_empty() {
        return Err(ScenarioError::InvalidSpec("empty demand family".into()));
    }
    let bounds = family
        .par_iter()
        .map(|d| Ok(generic_bound(&caching_instance(placement, d)?)?))
        .collect::<Result<Vec<Rational>, ScenarioError>>()?;
    Ok(bounds.into_iter().sum::<Rational>() / rational::uint(family.len() as u64))
}

/// Which closed-form converse to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CachingSetting {
    /// `K(1−M/N)F / (1+MK/N)`.
    Centralized,
    /// `(K − Σ K_i γ_i) / (γ + Σ K_i γ_i) · F`, `γ` the server flag.
    Heterogeneous,
    /// `KΔ(1−M/N)F / (1+MK/N)`.
    MultipleRequests,
    /// `(NF/M)(1−M/N)(1−(1−M/N)^K)`.
    Decentralized,
}

pub fn caching_closed_form(spec: &CachingSpec, setting: CachingSetting) -> Result<Rational, ScenarioError> {
    spec.validate()?;
    let k = rational::uint(spec.clients as u64);
    let f = rational::uint(spec.file_bits);
    let gamma = &spec.cache_files / rational::uint(spec.files as u64);
    let one = Rational::one();
    Ok(match setting {
        CachingSetting::Centralized | CachingSetting::MultipleRequests => {
            let delta = match setting {
                CachingSetting::MultipleRequests => rational::uint(spec.requests as u64),
                _ => one.clone(),
            };
            &k * delta * (&one - &gamma) * f / (&one + &gamma * &k)
        }
        CachingSetting::Heterogeneous => {
            let stored: Rational = spec
                .groups
                .iter()
                .map(|g| rational::uint(g.clients as u64) * &g.fraction)
                .sum();
            let den = if spec.server { &one + &stored } else { stored.clone() };
            if den.is_zero() {
                return Err(ScenarioError::Unbounded("no server and no cache".into()));
            }
            (k - stored) / den * f
        }
        CachingSetting::Decentralized => {
            if gamma.is_zero() {
                return Err(ScenarioError::Unbounded("M = 0".into()));
            }
            f / &gamma * (&one - &gamma) * (&one - rational::pow(&(&one - &gamma), spec.clients))
        }
    })
}

/// How [`decentralized_instance`] fills in storage patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecentralizedMode {
    /// Each pattern `Q` gets its expected mass `F γ^|Q| (1−γ)^{K−|Q|}`.
    Exact,
    /// Each client caches each bit independently with probability `γ`.
    Sampled { seed: u64 },
}

/// Server-based system where every client caches a `γ = M/N` fraction of
/// every file independently; client `k` requests file `k`.
pub fn decentralized_instance(spec: &CachingSpec, mode: DecentralizedMode) -> Result<ExchangeInstance, ScenarioError> {
    spec.validate()?;
    if !spec.server {
        return Err(ScenarioError::InvalidSpec("decentralized placement needs a server".into()));
    }
    let gamma = &spec.cache_files / rational::uint(spec.files as u64);
    if gamma <= Rational::zero() || gamma >= Rational::one() {
        return Err(ScenarioError::InvalidSpec("need 0 < M < N".into()));
    }
    if spec.clients > spec.files {
        return Err(ScenarioError::TooFewFiles {
            needed: spec.clients,
            files: spec.files,
        });
    }
    let universe = spec.client_universe();
    let demand = DemandVector::single(&(1..=spec.clients).collect::<Vec<_>>());
    match mode {
        DecentralizedMode::Exact => {
            let f = rational::uint(spec.file_bits);
            let miss = Rational::one() - &gamma;
            let masses: Vec<(NodeSet, Rational)> = universe
                .subsets()
                .map(|q| {
                    let mass = &f * rational::pow(&gamma, q.len()) * rational::pow(&miss, spec.clients - q.len());
                    (q, mass)
                })
                .collect();
            build_instance(spec.clients, spec.files, true, &demand, |_| masses.clone())
        }
        DecentralizedMode::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let num = gamma.numer().to_u64().expect("0 < γ < 1");
            let den = gamma.denom().to_u64().ok_or_else(|| ScenarioError::InvalidSpec("M/N denominator too large".into()))?;
            let mut per_file = Vec::with_capacity(spec.clients);
            for _ in 0..spec.clients {
                let mut masks = Vec::with_capacity(spec.file_bits as usize);
                for _ in 0..spec.file_bits {
                    let mut q = NodeSet::EMPTY;
                    for k in 1..=spec.clients {
                        if rng.random_range(0..den) < num {
                            q.insert(k);
                        }
                    }
                    masks.push(q);
                }
                per_file.push(patterns_from_masks(&masks));
            }
            build_instance(spec.clients, spec.files, true, &demand, |n| {
                per_file[n - 1].iter().map(|(&q, &b)| (q, rational::uint(b))).collect()
            })
        }
    }
}

/// Node index of client `k` in instances built for `spec`.
pub fn client_node(spec: &CachingSpec, client: usize) -> usize {
    node_of(client, spec.server)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn set(nodes: &[usize]) -> NodeSet {
        NodeSet::from_nodes(nodes.iter().copied()).unwrap()
    }

    fn spec(k: usize, n: usize, m: i64, f: u64) -> CachingSpec {
        CachingSpec::new(k, n, int(m), f)
    }

    #[test]
    fn man_examples() {
        let p = man_placement(&spec(2, 2, 1, 2)).unwrap();
        assert_eq!(p.bits(1, set(&[1])), 1);
        assert_eq!(p.bits(2, set(&[2])), 1);
        let p = man_placement(&spec(4, 4, 1, 4)).unwrap();
        for k in 1..=4 {
            assert_eq!(p.bits(3, set(&[k])), 1);
        }
        let p = man_placement(&spec(3, 3, 0, 1)).unwrap();
        assert_eq!(p.bits(2, NodeSet::EMPTY), 1);
        assert!(matches!(man_placement(&spec(2, 4, 1, 2)), Err(ScenarioError::NonIntegerT(_))));
        assert!(matches!(man_placement(&spec(4, 4, 2, 5)), Err(ScenarioError::Indivisible { parts: 6, bits: 5 })));
    }

    #[test]
    fn instance_examples() {
        let p = man_placement(&spec(2, 2, 1, 2)).unwrap();
        let inst = caching_instance(&p, &DemandVector::single(&[1, 2])).unwrap();
        assert_eq!(inst.classes.len(), 4);
        assert_eq!(inst.count_of(set(&[1]), set(&[0, 2])), int(1));
        assert_eq!(inst.count_of(set(&[2]), set(&[0, 1])), int(1));
        assert_eq!(inst.count_of(NodeSet::EMPTY, set(&[0, 1])), int(1));
        assert_eq!(generic_bound(&inst).unwrap(), int(1));

        let same = caching_instance(&p, &DemandVector::single(&[1, 1])).unwrap();
        assert_eq!(same.count_of(set(&[1]), set(&[0, 2])), int(1));
        assert_eq!(same.count_of(set(&[2]), set(&[0, 1])), int(1));
        assert_eq!(same.demanded_bits(), int(2));

        let none = man_placement(&spec(3, 3, 0, 5)).unwrap();
        let inst = caching_instance(&none, &DemandVector::single(&[3, 1, 2])).unwrap();
        assert_eq!(inst.count_of(set(&[2]), set(&[0])), int(5));
        assert_eq!(generic_bound(&inst).unwrap(), int(15));
    }

    #[test]
    fn bad_demands() {
        let p = man_placement(&spec(2, 2, 1, 2)).unwrap();
        assert!(matches!(
            caching_instance(&p, &DemandVector::single(&[1, 3])),
            Err(ScenarioError::UnknownFile { file: 3, files: 2 })
        ));
        assert!(caching_instance(&p, &DemandVector::single(&[1])).is_err());
    }

    #[test]
    fn family_examples() {
        let fam = cyclic_demand_family(3, 2, 1).unwrap();
        let shown: Vec<String> = fam.iter().map(|d| d.to_string()).collect();
        assert_eq!(shown, ["(1,2)", "(2,3)", "(3,1)"]);
        let fam = cyclic_demand_family(4, 2, 2).unwrap();
        let shown: Vec<String> = fam.iter().map(|d| d.to_string()).collect();
        assert_eq!(shown, ["(1,2|3,4)", "(2,3|4,1)", "(3,4|1,2)", "(4,1|2,3)"]);
        let fam = cyclic_demand_family(3, 3, 1).unwrap();
        assert_eq!(fam[1], DemandVector::single(&[2, 3, 1]));
        assert!(cyclic_demand_family(3, 2, 2).is_err());
    }

    #[test]
    fn demand_parse_round_trip() {
        for s in ["(1,2)", "(1,2|3,4)", "(5)"] {
            assert_eq!(DemandVector::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(DemandVector::parse("2,1").unwrap(), DemandVector::single(&[2, 1]));
        assert!(DemandVector::parse("a,1").is_none());
    }

    #[test]
    fn averaged_examples() {
        for (k, n, m, f, want) in [(2, 2, 1, 2, 1), (4, 4, 1, 4, 6), (3, 3, 0, 1, 3)] {
            let s = spec(k, n, m, f);
            let p = man_placement(&s).unwrap();
            let fam = cyclic_demand_family(n, k, 1).unwrap();
            assert_eq!(averaged_bound(&p, &fam).unwrap(), int(want));
            assert_eq!(caching_closed_form(&s, CachingSetting::Centralized).unwrap(), int(want));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(caching_closed_form(&spec(2, 2, 1, 2), CachingSetting::Centralized).unwrap(), int(1));
        let d2d = spec(3, 3, 1, 1).with_server(false);
        assert_eq!(caching_closed_form(&d2d, CachingSetting::Heterogeneous).unwrap(), int(2));
        let multi = spec(2, 4, 1, 1).with_requests(2);
        assert_eq!(caching_closed_form(&multi, CachingSetting::MultipleRequests).unwrap(), int(2));
        let dec = spec(2, 2, 1, 1);
        assert_eq!(caching_closed_form(&dec, CachingSetting::Decentralized).unwrap(), ratio(3, 4));
        assert!(matches!(
            caching_closed_form(&spec(2, 2, 0, 1), CachingSetting::Decentralized),
            Err(ScenarioError::Unbounded(_))
        ));
        let nothing = spec(2, 2, 0, 1).with_server(false);
        assert!(caching_closed_form(&nothing, CachingSetting::Heterogeneous).is_err());
    }

    #[test]
    fn decentralized_exact_example() {
        let s = spec(2, 2, 1, 4);
        let inst = decentralized_instance(&s, DecentralizedMode::Exact).unwrap();
        assert_eq!(generic_bound(&inst).unwrap(), int(3));
        let one = spec(1, 2, 1, 4);
        let inst = decentralized_instance(&one, DecentralizedMode::Exact).unwrap();
        assert_eq!(inst.count_of(set(&[1]), set(&[0])), int(2));
        assert!(decentralized_instance(&spec(2, 2, 0, 4), DecentralizedMode::Exact).is_err());
    }

    #[test]
    fn decentralized_sampled_is_deterministic() {
        let s = spec(3, 3, 1, 300);
        let a = decentralized_instance(&s, DecentralizedMode::Sampled { seed: 9 }).unwrap();
        let b = decentralized_instance(&s, DecentralizedMode::Sampled { seed: 9 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_bits(), int(900));
    }

    #[test]
    fn memory_sharing_meets_budget() {
        let s = spec(2, 4, 1, 4).with_requests(2);
        let p = memory_sharing_placement(&s).unwrap();
        p.check(&s).unwrap();
        assert_eq!(p.bits(1, NodeSet::EMPTY), 2);
        assert_eq!(p.bits(1, set(&[1])), 1);
        assert_eq!(p.storage_used(), 8);
        let fam = cyclic_demand_family(4, 2, 2).unwrap();
        assert_eq!(averaged_bound(&p, &fam).unwrap(), int(10));
    }

    #[test]
    fn multi_request_integral_t_meets_closed_form() {
        let s = spec(2, 4, 2, 2).with_requests(2);
        let p = man_placement(&s).unwrap();
        let fam = cyclic_demand_family(4, 2, 2).unwrap();
        let closed = caching_closed_form(&s, CachingSetting::MultipleRequests).unwrap();
        assert_eq!(closed, int(2));
        assert_eq!(averaged_bound(&p, &fam).unwrap(), closed);
    }

    #[test]
    fn window_placement_fills_each_client() {
        let groups = vec![
            CacheGroup { clients: 1, fraction: ratio(1, 2) },
            CacheGroup { clients: 2, fraction: ratio(1, 4) },
        ];
        let s = spec(3, 3, 1, 8).with_groups(groups).with_server(false);
        let p = cyclic_window_placement(&s).unwrap();
        p.check(&s).unwrap();
        assert_eq!(p.storage_used(), 3 * 8);
        let fam = cyclic_demand_family(3, 3, 1).unwrap();
        let avg = averaged_bound(&p, &fam).unwrap();
        assert!(avg >= caching_closed_form(&s, CachingSetting::Heterogeneous).unwrap());
    }

    proptest! {
        #[test]
        fn family_requests_each_file_delta_times(n in 2usize..9, k in 1usize..4, delta in 1usize..3) {
            prop_assume!(k * delta <= n);
            let fam = cyclic_demand_family(n, k, delta).unwrap();
            prop_assert_eq!(fam.len(), n);
            for d in &fam {
                prop_assert!(d.is_distinct());
            }
            for client in 1..=k {
                for file in 1..=n {
                    let hits: usize = fam.iter().map(|d| d.files_of(client).iter().filter(|&&x| x == file).count()).sum();
                    prop_assert_eq!(hits, delta);
                }
            }
        }

        #[test]
        fn random_placements_stay_above_closed_form(k in 2usize..4, extra in 0usize..2, m in 0i64..3, seed in any::<u64>()) {
            let n = k + extra;
            prop_assume!(m as usize <= n);
            let s = spec(k, n, m, 6);
            let p = random_placement(&s, seed).unwrap();
            p.check(&s).unwrap();
            let fam = cyclic_demand_family(n, k, 1).unwrap();
            prop_assert!(averaged_bound(&p, &fam).unwrap() >= caching_closed_form(&s, CachingSetting::Centralized).unwrap());
        }
    }
}
