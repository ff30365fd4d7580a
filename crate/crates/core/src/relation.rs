//! Finite binary relations packed as bit rows.
//!
//! Elements of a carrier are dense ids `0..n`. Row `a` of a relation holds
//! the image `f(a)` as a 64-bit mask, so carriers are limited to
//! [`MAX_CARRIER`] points. Composition follows the set-valued function
//! convention: `(f ∘ g)(a)` is the union of `f(b)` over `b ∈ g(a)`, i.e. `g`
//! is applied first.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Largest carrier a packed row can hold.
pub const MAX_CARRIER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("empty carrier: relations need at least one element")]
    EmptyCarrier,
    #[error("carrier of size {size} exceeds the packed limit of {MAX_CARRIER}")]
    CarrierTooLarge { size: usize },
    #[error("pair ({a}, {b}) out of range for a {src}x{dst} relation")]
    PairOutOfRange {
        a: usize,
        b: usize,
        src: usize,
        dst: usize,
    },
    #[error("element {element} out of range for a carrier of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("cannot compose: left relation has domain {left_src}, right relation has codomain {right_dst}")]
    DimensionMismatch { left_src: usize, right_dst: usize },
    #[error("relation is {src}x{dst}, expected a square relation")]
    NotSquare { src: usize, dst: usize },
    #[error("witness ({x}, {y}) needs two distinct elements")]
    DegenerateWitness { x: usize, y: usize },
}

fn check_size(size: usize) -> Result<(), RelationError> {
    match size {
        0 => Err(RelationError::EmptyCarrier),
        s if s > MAX_CARRIER => Err(RelationError::CarrierTooLarge { size: s }),
        _ => Ok(()),
    }
}

/// A subset of a carrier `0..n`, `n <= 64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_CARRIER);
        if n == MAX_CARRIER {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        ElementSet(1u64 << x)
    }

    /// The interval `lo..=hi`; empty when `lo > hi`.
    pub fn range_inclusive(lo: usize, hi: usize) -> Self {
        if lo > hi {
            return ElementSet::EMPTY;
        }
        ElementSet(ElementSet::full(hi + 1).0 & !ElementSet::full(lo).0)
    }

    pub fn contains(self, x: usize) -> bool {
        x < MAX_CARRIER && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u64 << x);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 & !other.0)
    }

    /// Least element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element, if any.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> ElementIter {
        ElementIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct ElementIter(u64);

impl Iterator for ElementIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ElementIter {}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = ElementIter;

    fn into_iter(self) -> ElementIter {
        self.iter()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = ElementSet::EMPTY;
        for x in iter {
            set.insert(x);
        }
        set
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = ids.iter().find(|&&x| x >= MAX_CARRIER) {
            return Err(serde::de::Error::custom(format!(
                "element {bad} exceeds the packed limit"
            )));
        }
        Ok(ids.into_iter().collect())
    }
}

/// A relation `f ⊆ A × B` between finite carriers `A = 0..src_size` and
/// `B = 0..dst_size`. Entry `(a, b)` is set iff `b ∈ f(a)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    src_size: usize,
    dst_size: usize,
    rows: SmallVec<[u64; 8]>,
}

impl BinaryRelation {
    pub fn empty(src_size: usize, dst_size: usize) -> Result<Self, RelationError> {
        check_size(src_size)?;
        check_size(dst_size)?;
        Ok(BinaryRelation {
            src_size,
            dst_size,
            rows: SmallVec::from_elem(0, src_size),
        })
    }

    pub fn full(src_size: usize, dst_size: usize) -> Result<Self, RelationError> {
        let mut r = Self::empty(src_size, dst_size)?;
        let mask = ElementSet::full(dst_size).bits();
        r.rows.iter_mut().for_each(|row| *row = mask);
        Ok(r)
    }

    pub fn from_pairs<I>(src_size: usize, dst_size: usize, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Self::empty(src_size, dst_size)?;
        for (a, b) in pairs {
            r.insert(a, b)?;
        }
        Ok(r)
    }

    /// Builds a relation from its images, one per source element.
    pub fn from_rows(dst_size: usize, rows: &[ElementSet]) -> Result<Self, RelationError> {
        let mut r = Self::empty(rows.len(), dst_size)?;
        for (a, &row) in rows.iter().enumerate() {
            if let Some(b) = row.last().filter(|&b| b >= dst_size) {
                return Err(RelationError::PairOutOfRange {
                    a,
                    b,
                    src: rows.len(),
                    dst: dst_size,
                });
            }
            r.rows[a] = row.bits();
        }
        Ok(r)
    }

    pub fn src_size(&self) -> usize {
        self.src_size
    }

    pub fn dst_size(&self) -> usize {
        self.dst_size
    }

    pub fn insert(&mut self, a: usize, b: usize) -> Result<(), RelationError> {
        if a >= self.src_size || b >= self.dst_size {
            return Err(RelationError::PairOutOfRange {
                a,
                b,
                src: self.src_size,
                dst: self.dst_size,
            });
        }
        self.rows[a] |= 1u64 << b;
        Ok(())
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.src_size && ElementSet(self.rows[a]).contains(b)
    }

    /// `f(a)`.
    pub fn row(&self, a: usize) -> ElementSet {
        ElementSet(self.rows[a])
    }

    pub fn rows(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.rows.iter().map(|&r| ElementSet(r))
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, &r)| ElementSet(r).iter().map(move |b| (a, b)))
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Transpose.
    pub fn inverse(&self) -> BinaryRelation {
        let mut rows: SmallVec<[u64; 8]> = SmallVec::from_elem(0, self.dst_size);
        for (a, b) in self.pairs() {
            rows[b] |= 1u64 << a;
        }
        BinaryRelation {
            src_size: self.dst_size,
            dst_size: self.src_size,
            rows,
        }
    }

    /// `f(A)`, read as the union of the images of the members of `A`.
    pub fn image(&self, set: ElementSet) -> ElementSet {
        set.iter()
            .filter(|&a| a < self.src_size)
            .fold(ElementSet::EMPTY, |acc, a| acc.union(self.row(a)))
    }

    pub fn is_subset(&self, other: &BinaryRelation) -> bool {
        self.src_size == other.src_size
            && self.dst_size == other.dst_size
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &BinaryRelation) -> Result<BinaryRelation, RelationError> {
        if self.src_size != other.src_size || self.dst_size != other.dst_size {
            return Err(RelationError::DimensionMismatch {
                left_src: self.src_size,
                right_dst: other.src_size,
            });
        }
        let mut r = self.clone();
        r.rows.iter_mut().zip(&other.rows).for_each(|(a, b)| *a &= b);
        Ok(r)
    }

    /// Every source element has a nonempty image.
    pub fn is_serial(&self) -> bool {
        self.rows.iter().all(|&r| r != 0)
    }

    /// Every target element is hit.
    pub fn is_surjective(&self) -> bool {
        self.rows.iter().fold(0, |acc, r| acc | r) == ElementSet::full(self.dst_size).bits()
    }
}

/// `f ∘ g` for `g: A → B` and `f: B → C`.
pub fn compose(f: &BinaryRelation, g: &BinaryRelation) -> Result<BinaryRelation, RelationError> {
    if f.src_size != g.dst_size {
        return Err(RelationError::DimensionMismatch {
            left_src: f.src_size,
            right_dst: g.dst_size,
        });
    }
    let rows = g
        .rows
        .iter()
        .map(|&r| ElementSet(r).iter().fold(0u64, |acc, b| acc | f.rows[b]))
        .collect();
    Ok(BinaryRelation {
        src_size: g.src_size,
        dst_size: f.dst_size,
        rows,
    })
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryRelation({}x{}, {})", self.src_size, self.dst_size, self)
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct BinaryRelationRepr {
    src_size: usize,
    dst_size: usize,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for BinaryRelation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BinaryRelationRepr {
            src_size: self.src_size,
            dst_size: self.dst_size,
            pairs: self.pairs().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinaryRelation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BinaryRelationRepr::deserialize(deserializer)?;
        BinaryRelation::from_pairs(repr.src_size, repr.dst_size, repr.pairs)
            .map_err(serde::de::Error::custom)
    }
}

/// A relation `f ⊆ X²` on a single carrier `X = 0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EndoRelation(BinaryRelation);

impl EndoRelation {
    pub fn empty(n: usize) -> Result<Self, RelationError> {
        BinaryRelation::empty(n, n).map(EndoRelation)
    }

    /// The diagonal `ι`.
    pub fn identity(n: usize) -> Result<Self, RelationError> {
        let mut r = BinaryRelation::empty(n, n)?;
        for (a, row) in r.rows.iter_mut().enumerate() {
            *row = 1u64 << a;
        }
        Ok(EndoRelation(r))
    }

    pub fn full(n: usize) -> Result<Self, RelationError> {
        BinaryRelation::full(n, n).map(EndoRelation)
    }

    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        BinaryRelation::from_pairs(n, n, pairs).map(EndoRelation)
    }

    pub fn from_rows(rows: &[ElementSet]) -> Result<Self, RelationError> {
        BinaryRelation::from_rows(rows.len(), rows).map(EndoRelation)
    }

    /// Decodes the row-major `n²`-bit encoding: bit `a·n + b` is `(a, b)`.
    pub fn decode(n: usize, code: u64) -> Result<Self, RelationError> {
        if n * n > 64 {
            return Err(RelationError::CarrierTooLarge { size: n });
        }
        let mut r = BinaryRelation::empty(n, n)?;
        let mask = ElementSet::full(n).bits();
        for (a, row) in r.rows.iter_mut().enumerate() {
            *row = (code >> (a * n)) & mask;
        }
        Ok(EndoRelation(r))
    }

    /// Inverse of [`EndoRelation::decode`]; `None` when `n² > 64`.
    pub fn encode(&self) -> Option<u64> {
        let n = self.size();
        (n * n <= 64).then(|| {
            self.0
                .rows
                .iter()
                .enumerate()
                .fold(0u64, |acc, (a, &r)| acc | r << (a * n))
        })
    }

    pub fn size(&self) -> usize {
        self.0.src_size
    }

    pub fn as_binary(&self) -> &BinaryRelation {
        &self.0
    }

    pub fn into_binary(self) -> BinaryRelation {
        self.0
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.0.contains(a, b)
    }

    pub fn insert(&mut self, a: usize, b: usize) -> Result<(), RelationError> {
        self.0.insert(a, b)
    }

    pub fn row(&self, a: usize) -> ElementSet {
        self.0.row(a)
    }

    pub fn rows(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.0.rows()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.pairs()
    }

    pub fn image(&self, set: ElementSet) -> ElementSet {
        self.0.image(set)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn carrier(&self) -> ElementSet {
        ElementSet::full(self.size())
    }

    pub fn inverse(&self) -> EndoRelation {
        EndoRelation(self.0.inverse())
    }

    pub fn compose(&self, other: &EndoRelation) -> Result<EndoRelation, RelationError> {
        compose(&self.0, &other.0).map(EndoRelation)
    }

    /// `f² = f ∘ f`.
    pub fn square(&self) -> EndoRelation {
        let rows = self
            .0
            .rows
            .iter()
            .map(|&r| ElementSet(r).iter().fold(0u64, |acc, b| acc | self.0.rows[b]))
            .collect();
        EndoRelation(BinaryRelation {
            src_size: self.0.src_size,
            dst_size: self.0.dst_size,
            rows,
        })
    }

    pub fn is_subset(&self, other: &EndoRelation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn reflexive_points(&self) -> ElementSet {
        (0..self.size()).filter(|&a| self.contains(a, a)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.rows.iter().enumerate().all(|(a, &r)| r == 1u64 << a)
    }

    pub fn is_serial(&self) -> bool {
        self.0.is_serial()
    }

    pub fn is_surjective(&self) -> bool {
        self.0.is_surjective()
    }

    /// `f² ⊆ f`.
    pub fn is_transitive(&self) -> bool {
        self.square().is_subset(self)
    }

    /// `f² = f`.
    pub fn is_idempotent(&self) -> bool {
        self.square() == *self
    }

    /// `f ⊆ f²`, the compatibility hypothesis for constant bonding systems.
    pub fn is_sub_idempotent(&self) -> bool {
        self.is_subset(&self.square())
    }

    /// `f↾A = f ∩ (A × X)` on the original carrier.
    pub fn restrict_rows(&self, set: ElementSet) -> EndoRelation {
        let mut r = self.0.clone();
        for (a, row) in r.rows.iter_mut().enumerate() {
            if !set.contains(a) {
                *row = 0;
            }
        }
        EndoRelation(r)
    }

    /// `f ∩ A²` on the original carrier.
    pub fn intersect_square(&self, set: ElementSet) -> EndoRelation {
        let mut r = self.restrict_rows(set);
        r.0.rows.iter_mut().for_each(|row| *row &= set.bits());
        r
    }

    /// `ι↾A` on the original carrier.
    pub fn identity_on(&self, set: ElementSet) -> EndoRelation {
        let mut r = self.0.clone();
        for (a, row) in r.rows.iter_mut().enumerate() {
            *row = if set.contains(a) { 1u64 << a } else { 0 };
        }
        EndoRelation(r)
    }

    /// Re-indexes `f ∩ A²` as a relation on `0..|A|`.
    pub fn restrict(&self, set: ElementSet) -> Restriction {
        let set = set.intersection(self.carrier());
        let index_map = set.to_vec();
        let escaped = index_map.iter().any(|&a| !self.row(a).is_subset(set));
        let relation = (!index_map.is_empty()).then(|| {
            let rows: Vec<ElementSet> = index_map
                .iter()
                .map(|&a| {
                    index_map
                        .iter()
                        .enumerate()
                        .filter(|&(_, &b)| self.contains(a, b))
                        .map(|(j, _)| j)
                        .collect()
                })
                .collect();
            EndoRelation::from_rows(&rows).expect("restriction of a valid relation")
        });
        Restriction {
            relation,
            index_map,
            escaped,
        }
    }

    /// `f↾f(x) = ι↾f(x)` for every `x`: each point of an image is fixed
    /// with a singleton image.
    pub fn is_trivial(&self) -> bool {
        self.trivial_violation().is_none()
    }

    /// Least `x` with `f↾f(x) ≠ ι↾f(x)`. Both sides agree off `f(x)`, so this
    /// is the least `x` with some `a ∈ f(x)` and `f(a) ≠ {a}`.
    pub fn trivial_violation(&self) -> Option<usize> {
        (0..self.size()).find(|&x| {
            self.row(x)
                .iter()
                .any(|a| self.row(a) != ElementSet::singleton(a))
        })
    }

    /// Lexicographically least `(x, y)`, `x ≠ y`, with `⟨x,x⟩, ⟨x,y⟩, ⟨y,y⟩ ∈ f`.
    pub fn condition_gamma(&self) -> Option<GammaWitness> {
        let reflexive = self.reflexive_points();
        reflexive.iter().find_map(|x| {
            let mut candidates = self.row(x).intersection(reflexive);
            candidates.remove(x);
            candidates.first().map(|y| GammaWitness { x, y })
        })
    }

    /// Some `⟨x,x⟩, ⟨x,y⟩ ∈ f` with `x ≠ y`, lexicographically least.
    pub fn reflexive_fork(&self) -> Option<(usize, usize)> {
        self.reflexive_points().iter().find_map(|x| {
            let mut out = self.row(x);
            out.remove(x);
            out.first().map(|y| (x, y))
        })
    }

    pub fn properties(&self) -> PropertyReport {
        let serial = self.is_serial();
        let surjective = self.is_surjective();
        let idempotent = self.is_idempotent();
        PropertyReport {
            serial,
            surjective,
            transitive: self.is_transitive(),
            idempotent,
            trivial: self.is_trivial(),
            v_relation: serial && surjective && idempotent,
            gamma: self.condition_gamma(),
        }
    }
}

impl TryFrom<BinaryRelation> for EndoRelation {
    type Error = RelationError;

    fn try_from(r: BinaryRelation) -> Result<Self, RelationError> {
        if r.src_size != r.dst_size {
            return Err(RelationError::NotSquare {
                src: r.src_size,
                dst: r.dst_size,
            });
        }
        Ok(EndoRelation(r))
    }
}

impl From<EndoRelation> for BinaryRelation {
    fn from(r: EndoRelation) -> Self {
        r.0
    }
}

impl fmt::Debug for EndoRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndoRelation(n={}, {})", self.size(), self.0)
    }
}

impl fmt::Display for EndoRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Serialize, Deserialize)]
struct EndoRelationRepr {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for EndoRelation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        EndoRelationRepr {
            n: self.size(),
            pairs: self.pairs().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EndoRelation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = EndoRelationRepr::deserialize(deserializer)?;
        EndoRelation::from_pairs(repr.n, repr.pairs).map_err(serde::de::Error::custom)
    }
}

/// Result of re-indexing a relation onto a subset of its carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    /// `None` when the subset was empty.
    pub relation: Option<EndoRelation>,
    /// `index_map[i]` is the original id of new element `i`.
    pub index_map: Vec<usize>,
    /// Some row of the subset left it, so `f ∩ (A × X)` lost pairs when cut to `A²`.
    pub escaped: bool,
}

impl Restriction {
    pub fn is_degenerate(&self) -> bool {
        self.relation.is_none()
    }

    /// Original id of re-indexed element `i`.
    pub fn original(&self, i: usize) -> usize {
        self.index_map[i]
    }
}

/// Evidence for Condition Γ: distinct `x, y` with `⟨x,x⟩, ⟨x,y⟩, ⟨y,y⟩ ∈ f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaWitness {
    pub x: usize,
    pub y: usize,
}

impl GammaWitness {
    pub fn new(x: usize, y: usize) -> Result<Self, RelationError> {
        if x == y {
            return Err(RelationError::DegenerateWitness { x, y });
        }
        Ok(GammaWitness { x, y })
    }

    /// The three pairs the witness asserts.
    pub fn triple(&self) -> [(usize, usize); 3] {
        [(self.x, self.x), (self.x, self.y), (self.y, self.y)]
    }

    pub fn validates(&self, f: &EndoRelation) -> bool {
        self.x != self.y && self.triple().iter().all(|&(a, b)| f.contains(a, b))
    }
}

impl fmt::Display for GammaWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Every predicate of a relation, each evaluated from its own definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub serial: bool,
    pub surjective: bool,
    pub transitive: bool,
    pub idempotent: bool,
    pub trivial: bool,
    pub v_relation: bool,
    pub gamma: Option<GammaWitness>,
}
