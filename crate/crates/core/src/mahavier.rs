//! Bonding systems over finite preorders and their Mahavier products.
//!
//! A system assigns to every comparable pair `p ≤ q` a bond
//! `f_{p,q} ⊆ X_q × X_p`; a thread `x` belongs to the product when
//! `x(p) ∈ f_{p,q}(x(q))` for every such pair.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::preorder::{FinitePreorder, PreorderError};
use crate::relation::{compose, BinaryRelation, ElementSet, EndoRelation, GammaWitness, RelationError, MAX_CARRIER};

pub const DEFAULT_NODE_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MahavierError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Preorder(#[from] PreorderError),
    #[error("expected {expected} index sizes, got {got}")]
    SizeCount { expected: usize, got: usize },
    #[error("index {index} has size {size}; sizes must be in 1..={MAX_CARRIER}")]
    BadSize { index: usize, size: usize },
    #[error("bond ({p},{q}) given but {p} ≤ {q} does not hold")]
    UnexpectedBond { p: usize, q: usize },
    #[error("bond ({p},{q}) missing")]
    MissingBond { p: usize, q: usize },
    #[error("bond ({p},{q}) is {src}x{dst}, expected {want_src}x{want_dst}")]
    BondShape {
        p: usize,
        q: usize,
        src: usize,
        dst: usize,
        want_src: usize,
        want_dst: usize,
    },
    #[error("relation is not contained in its square: {pair:?} ∈ f but not in f∘f")]
    NotSubIdempotent {
        pair: (usize, usize),
        triple: Option<Triple>,
    },
    #[error("incompatible system: f_{{p,r}} ⊄ f_{{p,q}}∘f_{{q,r}} at {0}")]
    Incompatible(Triple),
    #[error("preorder has no strict triple p < q < r")]
    NoStrictTriple,
    #[error("search exceeded the node cap of {0}")]
    NodeCapExceeded(u64),
    #[error("thread has length {got}, expected {expected}")]
    ThreadLength { expected: usize, got: usize },
    #[error("thread value {value} at index {index} is outside X_{index} of size {size}")]
    ThreadValue { index: usize, value: usize, size: usize },
    #[error("witness {0} does not validate against the relation")]
    InvalidWitness(GammaWitness),
    #[error("alpha must be at least 1")]
    ZeroAlpha,
}

/// An index triple `p ≤ q ≤ r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// A point of the full product `Π X_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Thread(pub Vec<usize>);

impl Thread {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Thread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BondingSystem {
    preorder: FinitePreorder,
    sizes: Vec<usize>,
    /// `bonds[p * m + q]` is `f_{p,q}` when `p ≤ q`.
    bonds: Vec<Option<BinaryRelation>>,
}

impl BondingSystem {
    /// Builds a system; every comparable pair, diagonal included, needs a bond.
    pub fn new(
        preorder: FinitePreorder,
        sizes: Vec<usize>,
        bonds: impl IntoIterator<Item = ((usize, usize), BinaryRelation)>,
    ) -> Result<Self, MahavierError> {
        Self::build(preorder, sizes, bonds, false)
    }

    /// Like [`BondingSystem::new`], but a missing diagonal bond defaults to `ι`.
    pub fn with_identity_diagonals(
        preorder: FinitePreorder,
        sizes: Vec<usize>,
        bonds: impl IntoIterator<Item = ((usize, usize), BinaryRelation)>,
    ) -> Result<Self, MahavierError> {
        Self::build(preorder, sizes, bonds, true)
    }

    fn build(
        preorder: FinitePreorder,
        sizes: Vec<usize>,
        bonds: impl IntoIterator<Item = ((usize, usize), BinaryRelation)>,
        identity_diagonals: bool,
    ) -> Result<Self, MahavierError> {
        let m = preorder.len();
        if sizes.len() != m {
            return Err(MahavierError::SizeCount {
                expected: m,
                got: sizes.len(),
            });
        }
        if let Some((index, &size)) = sizes
            .iter()
            .enumerate()
            .find(|(_, &s)| s == 0 || s > MAX_CARRIER)
        {
            return Err(MahavierError::BadSize { index, size });
        }
        let mut slots: Vec<Option<BinaryRelation>> = vec![None; m * m];
        for ((p, q), bond) in bonds {
            if p >= m || q >= m || !preorder.leq(p, q) {
                return Err(MahavierError::UnexpectedBond { p, q });
            }
            let (want_src, want_dst) = (sizes[q], sizes[p]);
            if bond.src_size() != want_src || bond.dst_size() != want_dst {
                return Err(MahavierError::BondShape {
                    p,
                    q,
                    src: bond.src_size(),
                    dst: bond.dst_size(),
                    want_src,
                    want_dst,
                });
            }
            slots[p * m + q] = Some(bond);
        }
        for (p, q) in preorder.comparable_pairs() {
            if slots[p * m + q].is_some() {
                continue;
            }
            if p == q && identity_diagonals {
                slots[p * m + q] = Some(EndoRelation::identity(sizes[p])?.into_binary());
            } else {
                return Err(MahavierError::MissingBond { p, q });
            }
        }
        Ok(BondingSystem {
            preorder,
            sizes,
            bonds: slots,
        })
    }

    pub fn preorder(&self) -> &FinitePreorder {
        &self.preorder
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `f_{p,q}`, when `p ≤ q`.
    pub fn bond(&self, p: usize, q: usize) -> Option<&BinaryRelation> {
        self.bonds.get(p * self.preorder.len() + q)?.as_ref()
    }

    pub fn bonds(&self) -> impl Iterator<Item = ((usize, usize), &BinaryRelation)> + '_ {
        let m = self.preorder.len();
        self.bonds
            .iter()
            .enumerate()
            .filter_map(move |(i, b)| b.as_ref().map(|b| ((i / m, i % m), b)))
    }

    fn composite(&self, t: Triple) -> BinaryRelation {
        let left = self.bond(t.p, t.q).expect("comparable");
        let right = self.bond(t.q, t.r).expect("comparable");
        compose(left, right).expect("bond shapes agree")
    }

    /// First triple with `f_{p,r} ⊄ f_{p,q} ∘ f_{q,r}`.
    pub fn compatibility_violation(&self) -> Option<Triple> {
        self.preorder
            .comparable_triples()
            .map(|(p, q, r)| Triple { p, q, r })
            .find(|&t| !self.bond(t.p, t.r).expect("comparable").is_subset(&self.composite(t)))
    }

    pub fn is_compatible(&self) -> bool {
        self.compatibility_violation().is_none()
    }

    /// First triple with `f_{p,r} ≠ f_{p,q} ∘ f_{q,r}`.
    pub fn exactness_violation(&self) -> Option<Triple> {
        self.preorder
            .comparable_triples()
            .map(|(p, q, r)| Triple { p, q, r })
            .find(|&t| *self.bond(t.p, t.r).expect("comparable") != self.composite(t))
    }

    pub fn is_exact(&self) -> bool {
        self.exactness_violation().is_none()
    }

    /// Size of the full product `Π |X_p|`, saturating.
    pub fn product_size(&self) -> u128 {
        self.sizes
            .iter()
            .fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
    }
}

/// The system with `f` on every strictly comparable pair (both directions of
/// a cycle) and `ι` on the diagonal. Rejects `f ⊄ f∘f` and any other
/// compatibility failure.
pub fn constant_system(f: &EndoRelation, preorder: &FinitePreorder) -> Result<BondingSystem, MahavierError> {
    let sys = constant_system_unchecked(f, preorder)?;
    let square = f.square();
    if let Some(pair) = f.pairs().find(|&(a, b)| !square.contains(a, b)) {
        return Err(MahavierError::NotSubIdempotent {
            pair,
            triple: sys.compatibility_violation(),
        });
    }
    if let Some(t) = sys.compatibility_violation() {
        return Err(MahavierError::Incompatible(t));
    }
    Ok(sys)
}

fn constant_system_unchecked(f: &EndoRelation, preorder: &FinitePreorder) -> Result<BondingSystem, MahavierError> {
    let n = f.size();
    let bonds: Vec<_> = preorder
        .comparable_pairs()
        .filter(|&(p, q)| p != q)
        .map(|pq| (pq, f.as_binary().clone()))
        .collect();
    BondingSystem::with_identity_diagonals(preorder.clone(), vec![n; preorder.len()], bonds)
}

/// Checks that the constant system over `preorder` is exact exactly when `f`
/// is idempotent. A rejected constant system counts as not exact.
///
/// With a cycle in `preorder` the forward direction can fail for
/// idempotent `f ≠ ι`, since the diagonal `ι` must then equal `f∘f`.
pub fn verify_constant_exactness(f: &EndoRelation, preorder: &FinitePreorder) -> Result<bool, MahavierError> {
    if !preorder.has_strict_triple() {
        return Err(MahavierError::NoStrictTriple);
    }
    let exact = match constant_system(f, preorder) {
        Ok(sys) => sys.is_exact(),
        Err(MahavierError::NotSubIdempotent { .. } | MahavierError::Incompatible(_)) => false,
        Err(e) => return Err(e),
    };
    Ok(exact == f.is_idempotent())
}

/// First comparable pair `(p, q)` with `x(p) ∉ f_{p,q}(x(q))`, or `None` when
/// `x` is a thread of the product.
pub fn contains_thread(sys: &BondingSystem, x: &Thread) -> Result<Option<(usize, usize)>, MahavierError> {
    let m = sys.preorder.len();
    if x.len() != m {
        return Err(MahavierError::ThreadLength {
            expected: m,
            got: x.len(),
        });
    }
    if let Some((index, &value)) = x.0.iter().enumerate().find(|&(p, &v)| v >= sys.sizes[p]) {
        return Err(MahavierError::ThreadValue {
            index,
            value,
            size: sys.sizes[index],
        });
    }
    Ok(sys
        .preorder
        .comparable_pairs()
        .find(|&(p, q)| !sys.bond(p, q).expect("comparable").contains(x.0[q], x.0[p])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductConfig {
    pub node_cap: u64,
    pub jobs: usize,
}

impl Default for ProductConfig {
    fn default() -> Self {
        ProductConfig {
            node_cap: DEFAULT_NODE_CAP,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Assignments tried.
    pub nodes: u64,
    /// Assignments abandoned because some candidate set became empty.
    pub prunes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductResult {
    pub count: usize,
    pub threads: Vec<Thread>,
    pub stats: SearchStats,
    /// Set when the system fails compatibility; the product is still enumerated.
    pub incompatibility: Option<Triple>,
}

/// Per-variable constraint lists used by the search.
struct Propagator {
    order: Vec<usize>,
    /// For `v`: `(p, f_{p,v})` with `p ≤ v`, `p ≠ v`; assigning `x(v)` narrows
    /// `p` to `f_{p,v}(x(v))`.
    below: Vec<Vec<(usize, BinaryRelation)>>,
    /// For `v`: `(q, f_{v,q}⁻¹)` with `v ≤ q`, `q ≠ v`; assigning `x(v)` narrows
    /// `q` to the points whose bond image contains `x(v)`.
    above: Vec<Vec<(usize, BinaryRelation)>>,
    initial: Vec<ElementSet>,
}

impl Propagator {
    fn new(sys: &BondingSystem) -> Self {
        let m = sys.preorder.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&p| (std::cmp::Reverse(sys.preorder.degree(p)), p));
        let mut below = vec![Vec::new(); m];
        let mut above = vec![Vec::new(); m];
        for ((p, q), bond) in sys.bonds() {
            if p != q {
                below[q].push((p, bond.clone()));
                above[p].push((q, bond.inverse()));
            }
        }
        // x(p) ∈ f_{p,p}(x(p)): only points reflexive in the diagonal bond.
        let initial = (0..m)
            .map(|p| {
                let diag = sys.bond(p, p).expect("diagonal bond");
                (0..sys.sizes[p]).filter(|&a| diag.contains(a, a)).collect()
            })
            .collect();
        Propagator {
            order,
            below,
            above,
            initial,
        }
    }

    fn assign(&self, domains: &[ElementSet], v: usize, value: usize) -> Option<Vec<ElementSet>> {
        let mut next = domains.to_vec();
        next[v] = ElementSet::singleton(value);
        for (p, bond) in &self.below[v] {
            next[*p] = next[*p].intersection(bond.row(value));
            if next[*p].is_empty() {
                return None;
            }
        }
        for (q, inv) in &self.above[v] {
            next[*q] = next[*q].intersection(inv.row(value));
            if next[*q].is_empty() {
                return None;
            }
        }
        Some(next)
    }
}

struct Subtree<'a> {
    prop: &'a Propagator,
    cap: u64,
    stats: SearchStats,
    found: Vec<Thread>,
}

impl Subtree<'_> {
    fn visit(&mut self, depth: usize, domains: &[ElementSet]) -> Result<(), MahavierError> {
        if depth == self.prop.order.len() {
            let thread = domains.iter().map(|d| d.first().expect("assigned")).collect();
            self.found.push(Thread(thread));
            return Ok(());
        }
        let v = self.prop.order[depth];
        for value in domains[v] {
            self.branch(depth, domains, v, value)?;
        }
        Ok(())
    }

    fn branch(&mut self, depth: usize, domains: &[ElementSet], v: usize, value: usize) -> Result<(), MahavierError> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.cap {
            return Err(MahavierError::NodeCapExceeded(self.cap));
        }
        match self.prop.assign(domains, v, value) {
            Some(next) => self.visit(depth + 1, &next),
            None => {
                self.stats.prunes += 1;
                Ok(())
            }
        }
    }
}

fn run_pool<T: Send>(jobs: usize, op: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
        .install(op)
}

/// Enumerates the Mahavier product by backtracking with forward checking.
/// Root branches run in parallel; output is sorted and independent of `jobs`.
pub fn enumerate_product(sys: &BondingSystem, config: &ProductConfig) -> Result<ProductResult, MahavierError> {
    let prop = Propagator::new(sys);
    let root = prop.order[0];
    let roots: Vec<usize> = prop.initial[root].to_vec();
    let branches: Vec<Result<Subtree, MahavierError>> = run_pool(config.jobs, || {
        roots
            .par_iter()
            .map(|&value| {
                let mut sub = Subtree {
                    prop: &prop,
                    cap: config.node_cap,
                    stats: SearchStats::default(),
                    found: Vec::new(),
                };
                sub.branch(0, &prop.initial, root, value)?;
                Ok(sub)
            })
            .collect()
    });
    let mut stats = SearchStats::default();
    let mut threads = Vec::new();
    for branch in branches {
        let sub = branch?;
        stats.nodes += sub.stats.nodes;
        stats.prunes += sub.stats.prunes;
        threads.extend(sub.found);
    }
    if stats.nodes > config.node_cap {
        return Err(MahavierError::NodeCapExceeded(config.node_cap));
    }
    threads.sort_unstable();
    Ok(ProductResult {
        count: threads.len(),
        threads,
        stats,
        incompatibility: sys.compatibility_violation(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainEmbedding {
    pub witness: GammaWitness,
    pub alpha: usize,
    /// `threads[γ]` is `x_γ`, for `γ = 0..=alpha`.
    pub threads: Vec<Thread>,
    /// Set when `f ⊄ f∘f`, i.e. the ambient product lies outside the
    /// compatibility hypothesis.
    pub warning: Option<String>,
}

/// Embeds the chain `0 < 1 < … < alpha` into the constant product over
/// `chain(alpha)`: `x_γ(β) = y` for `β < γ` and `x` otherwise.
pub fn embed_chain(f: &EndoRelation, witness: GammaWitness, alpha: usize) -> Result<ChainEmbedding, MahavierError> {
    if !witness.validates(f) {
        return Err(MahavierError::InvalidWitness(witness));
    }
    if alpha == 0 {
        return Err(MahavierError::ZeroAlpha);
    }
    let threads: Vec<Thread> = (0..=alpha)
        .map(|gamma| Thread((0..alpha).map(|beta| if beta < gamma { witness.y } else { witness.x }).collect()))
        .collect();
    // Over a chain the constant system has `ι` on the diagonal and `f` on
    // every `p < q`, so membership reduces to `{x(p) : p < q} ⊆ f(x(q))`.
    for thread in &threads {
        let mut earlier = ElementSet::EMPTY;
        for &v in &thread.0 {
            assert!(earlier.is_subset(f.row(v)), "embedded thread {thread} not in product");
            earlier.insert(v);
        }
    }
    assert!(
        threads.windows(2).all(|w| w[0] != w[1]),
        "embedded threads are not distinct"
    );
    let warning = (!f.is_sub_idempotent())
        .then(|| "relation is not contained in its square; the product lies outside the compatibility hypothesis".to_string());
    Ok(ChainEmbedding {
        witness,
        alpha,
        threads,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::{build_preorder, chain};

    fn rel(n: usize, pairs: &[(usize, usize)]) -> EndoRelation {
        EndoRelation::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    fn vee() -> EndoRelation {
        rel(2, &[(0, 0), (0, 1), (1, 1)])
    }

    fn threads(xs: &[&[usize]]) -> Vec<Thread> {
        xs.iter().map(|x| Thread(x.to_vec())).collect()
    }

    fn product(sys: &BondingSystem) -> ProductResult {
        enumerate_product(sys, &ProductConfig::default()).unwrap()
    }

    #[test]
    fn identity_system_gives_diagonal() {
        let sys = constant_system(&EndoRelation::identity(2).unwrap(), &chain(3).unwrap()).unwrap();
        assert_eq!(product(&sys).threads, threads(&[&[0, 0, 0], &[1, 1, 1]]));
    }

    #[test]
    fn full_system_is_unconstrained() {
        let sys = constant_system(&EndoRelation::full(2).unwrap(), &chain(3).unwrap()).unwrap();
        assert!(sys.is_exact());
        assert_eq!(product(&sys).count, 8);
    }

    #[test]
    fn vee_system() {
        let sys = constant_system(&vee(), &chain(3).unwrap()).unwrap();
        assert!(sys.is_exact());
        assert_eq!(
            product(&sys).threads,
            threads(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[1, 1, 1]])
        );
        assert_eq!(contains_thread(&sys, &Thread(vec![0, 0, 0])).unwrap(), None);
        assert_eq!(contains_thread(&sys, &Thread(vec![0, 1, 1])).unwrap(), Some((0, 1)));
    }

    #[test]
    fn identity_system_rejects_nonconstant_threads() {
        let sys = constant_system(&EndoRelation::identity(3).unwrap(), &chain(4).unwrap()).unwrap();
        assert!(contains_thread(&sys, &Thread(vec![0, 0, 1, 1])).unwrap().is_some());
        assert!(contains_thread(&sys, &Thread(vec![2, 2, 2, 2])).unwrap().is_none());
    }

    #[test]
    fn thread_shape_errors() {
        let sys = constant_system(&vee(), &chain(3).unwrap()).unwrap();
        assert!(matches!(
            contains_thread(&sys, &Thread(vec![0, 0])),
            Err(MahavierError::ThreadLength { expected: 3, got: 2 })
        ));
        assert!(matches!(
            contains_thread(&sys, &Thread(vec![0, 2, 0])),
            Err(MahavierError::ThreadValue { index: 1, value: 2, size: 2 })
        ));
    }

    #[test]
    fn strict_order_rejected() {
        let s3 = rel(3, &[(0, 1), (0, 2), (1, 2)]);
        let err = constant_system(&s3, &chain(3).unwrap()).unwrap_err();
        match err {
            MahavierError::NotSubIdempotent { pair, triple } => {
                assert_eq!(pair, (0, 1));
                assert_eq!(triple, Some(Triple { p: 0, q: 1, r: 2 }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn compatible_but_not_exact() {
        let p = chain(3).unwrap();
        let full = BinaryRelation::full(2, 2).unwrap();
        let small = EndoRelation::identity(2).unwrap().into_binary();
        let sys = BondingSystem::with_identity_diagonals(
            p,
            vec![2, 2, 2],
            [((0, 1), full.clone()), ((1, 2), full), ((0, 2), small)],
        )
        .unwrap();
        assert!(sys.is_compatible());
        assert!(!sys.is_exact());
        assert_eq!(sys.exactness_violation(), Some(Triple { p: 0, q: 1, r: 2 }));
    }

    #[test]
    fn missing_and_misshaped_bonds() {
        let p = chain(2).unwrap();
        assert!(matches!(
            BondingSystem::with_identity_diagonals(p.clone(), vec![2, 2], []),
            Err(MahavierError::MissingBond { p: 0, q: 1 })
        ));
        assert!(matches!(
            BondingSystem::new(p.clone(), vec![2, 2], [((0, 1), BinaryRelation::full(2, 2).unwrap())]),
            Err(MahavierError::MissingBond { p: 0, q: 0 })
        ));
        assert!(matches!(
            BondingSystem::with_identity_diagonals(p.clone(), vec![2, 3], [((0, 1), BinaryRelation::full(2, 2).unwrap())]),
            Err(MahavierError::BondShape { .. })
        ));
        assert!(matches!(
            BondingSystem::with_identity_diagonals(p, vec![2, 2], [((1, 0), BinaryRelation::full(2, 2).unwrap())]),
            Err(MahavierError::UnexpectedBond { p: 1, q: 0 })
        ));
    }

    #[test]
    fn rectangular_bonds() {
        // X_0 = 3 points, X_1 = 2 points; f_{0,1} sends 0 -> {0,1}, 1 -> {2}.
        let p = chain(2).unwrap();
        let bond = BinaryRelation::from_pairs(2, 3, [(0, 0), (0, 1), (1, 2)]).unwrap();
        let sys = BondingSystem::with_identity_diagonals(p, vec![3, 2], [((0, 1), bond)]).unwrap();
        assert_eq!(
            product(&sys).threads,
            threads(&[&[0, 0], &[1, 0], &[2, 1]])
        );
    }

    #[test]
    fn two_cycle_constraints_both_ways() {
        let p = build_preorder(2, [(0, 1), (1, 0)]).unwrap().preorder;
        let f = vee();
        let sys = constant_system_unchecked(&f, &p).unwrap();
        // x(0) ∈ f(x(1)) and x(1) ∈ f(x(0)) only hold together on the diagonal.
        assert_eq!(product(&sys).threads, threads(&[&[0, 0], &[1, 1]]));
    }

    #[test]
    fn exactness_observation_examples() {
        let c3 = chain(3).unwrap();
        let s3 = rel(3, &[(0, 1), (0, 2), (1, 2)]);
        assert!(verify_constant_exactness(&s3, &c3).unwrap());
        assert!(verify_constant_exactness(&EndoRelation::identity(2).unwrap(), &c3).unwrap());
        assert_eq!(
            verify_constant_exactness(&vee(), &chain(2).unwrap()),
            Err(MahavierError::NoStrictTriple)
        );
    }

    #[test]
    fn embed_vee_matches_product() {
        let e = embed_chain(&vee(), GammaWitness { x: 0, y: 1 }, 3).unwrap();
        assert_eq!(
            e.threads,
            threads(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[1, 1, 1]])
        );
        let sys = constant_system(&vee(), &chain(3).unwrap()).unwrap();
        assert_eq!(product(&sys).threads, e.threads);
        assert!(e.warning.is_none());
    }

    #[test]
    fn embed_small_and_full() {
        let e = embed_chain(&vee(), GammaWitness { x: 0, y: 1 }, 1).unwrap();
        assert_eq!(e.threads, threads(&[&[0], &[1]]));
        let full = EndoRelation::full(2).unwrap();
        let e = embed_chain(&full, GammaWitness { x: 0, y: 1 }, 5).unwrap();
        assert_eq!(e.threads.len(), 6);
    }

    #[test]
    fn embed_rejects_bad_witness_and_warns() {
        assert!(matches!(
            embed_chain(&vee(), GammaWitness { x: 1, y: 0 }, 3),
            Err(MahavierError::InvalidWitness(_))
        ));
        // Γ holds at (0,1) but ⟨2,3⟩ ∉ f∘f since f(3) = {0}.
        let f = rel(4, &[(0, 0), (0, 1), (1, 1), (2, 3), (3, 0)]);
        assert!(!f.is_sub_idempotent());
        let e = embed_chain(&f, GammaWitness { x: 0, y: 1 }, 4).unwrap();
        assert!(e.warning.is_some());
        assert_eq!(e.threads.len(), 5);
    }

    #[test]
    fn node_cap_enforced() {
        let sys = constant_system(&EndoRelation::full(3).unwrap(), &chain(6).unwrap()).unwrap();
        let err = enumerate_product(&sys, &ProductConfig { node_cap: 50, jobs: 1 }).unwrap_err();
        assert_eq!(err, MahavierError::NodeCapExceeded(50));
    }

    #[test]
    fn parallel_matches_serial() {
        let sys = constant_system(&vee(), &chain(6).unwrap()).unwrap();
        let one = enumerate_product(&sys, &ProductConfig { node_cap: DEFAULT_NODE_CAP, jobs: 1 }).unwrap();
        let four = enumerate_product(&sys, &ProductConfig { node_cap: DEFAULT_NODE_CAP, jobs: 4 }).unwrap();
        assert_eq!(one, four);
        // threads of vee over a chain are monotone 1…1 0…0 patterns
        assert_eq!(one.count, 7);
    }
}
