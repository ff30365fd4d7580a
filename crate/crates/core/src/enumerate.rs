//! Exhaustive sweeps over every relation on an `n`-element carrier.
//!
//! A relation is encoded as an `n²`-bit integer, row-major (bit `a·n + b`
//! is the pair `(a, b)`), and relations are visited in ascending code order.
//! Parallel sweeps cut the code range into fixed-size blocks and merge the
//! per-block results in block order, so every table is the same for any
//! worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use bitflags::bitflags;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mahavier::verify_constant_exactness;
use crate::preorder::chain;
use crate::relation::{ElementSet, EndoRelation};
use crate::witness::{equivalence_report, gamma_chain_witness};

pub const DEFAULT_MAX_N: usize = 5;
/// Keeps `2^(n²)` and every code in one word.
pub const HARD_MAX_N: usize = 7;

const BLOCK_BITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("n must be at least 1")]
    ZeroSize,
    #[error("n = {n} exceeds the configured bound {max}")]
    BoundExceeded { n: usize, max: usize },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
}

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
    pub struct PredicateMask: u8 {
        const SERIAL = 1;
        const SURJECTIVE = 1 << 1;
        const TRANSITIVE = 1 << 2;
        const IDEMPOTENT = 1 << 3;
        const TRIVIAL = 1 << 4;
        const V_RELATION = 1 << 5;
        const GAMMA = 1 << 6;
    }
}

const PREDICATE_NAMES: [(&str, PredicateMask); 7] = [
    ("serial", PredicateMask::SERIAL),
    ("surjective", PredicateMask::SURJECTIVE),
    ("transitive", PredicateMask::TRANSITIVE),
    ("idempotent", PredicateMask::IDEMPOTENT),
    ("trivial", PredicateMask::TRIVIAL),
    ("v_relation", PredicateMask::V_RELATION),
    ("gamma", PredicateMask::GAMMA),
];

impl PredicateMask {
    /// Evaluates every predicate of `f`.
    pub fn of(f: &EndoRelation) -> PredicateMask {
        let p = f.properties();
        let mut mask = PredicateMask::empty();
        mask.set(PredicateMask::SERIAL, p.serial);
        mask.set(PredicateMask::SURJECTIVE, p.surjective);
        mask.set(PredicateMask::TRANSITIVE, p.transitive);
        mask.set(PredicateMask::IDEMPOTENT, p.idempotent);
        mask.set(PredicateMask::TRIVIAL, p.trivial);
        mask.set(PredicateMask::V_RELATION, p.v_relation);
        mask.set(PredicateMask::GAMMA, p.gamma.is_some());
        mask
    }

    pub fn names(self) -> Vec<&'static str> {
        PREDICATE_NAMES
            .iter()
            .filter(|(_, m)| self.contains(*m))
            .map(|(name, _)| *name)
            .collect()
    }

    /// Parses a comma- or space-separated list of predicate names.
    pub fn parse_list(text: &str) -> Result<PredicateMask, EnumError> {
        text.split([',', ' '])
            .filter(|s| !s.is_empty())
            .try_fold(PredicateMask::empty(), |acc, name| Ok(acc | name.parse::<PredicateMask>()?))
    }
}

impl FromStr for PredicateMask {
    type Err = EnumError;

    fn from_str(s: &str) -> Result<Self, EnumError> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        PREDICATE_NAMES
            .iter()
            .find(|(name, _)| *name == key || (key == "v" && *name == "v_relation"))
            .map(|(_, m)| *m)
            .ok_or_else(|| EnumError::UnknownPredicate(s.to_string()))
    }
}

impl fmt::Display for PredicateMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        f.write_str(&self.names().join(","))
    }
}

impl Serialize for PredicateMask {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.names())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_n: usize,
    pub jobs: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_n: DEFAULT_MAX_N,
            jobs: 1,
        }
    }
}

impl EnumConfig {
    fn check(&self, n: usize) -> Result<(), EnumError> {
        if n == 0 {
            return Err(EnumError::ZeroSize);
        }
        let max = self.max_n.min(HARD_MAX_N);
        if n > max {
            return Err(EnumError::BoundExceeded { n, max });
        }
        Ok(())
    }
}

fn total(n: usize) -> u64 {
    1u64 << (n * n)
}

fn last_code(n: usize) -> u64 {
    total(n) - 1
}

/// Ascending stream of all relations on `n` points satisfying every
/// predicate in `filter`.
pub struct RelationStream {
    n: usize,
    filter: PredicateMask,
    next: Option<u64>,
}

impl Iterator for RelationStream {
    type Item = EndoRelation;

    fn next(&mut self) -> Option<EndoRelation> {
        while let Some(code) = self.next {
            self.next = (code < last_code(self.n)).then(|| code + 1);
            let f = EndoRelation::decode(self.n, code).expect("n checked");
            if self.filter.is_empty() || PredicateMask::of(&f).contains(self.filter) {
                return Some(f);
            }
        }
        None
    }
}

pub fn enumerate_relations(n: usize, filter: PredicateMask, config: &EnumConfig) -> Result<RelationStream, EnumError> {
    config.check(n)?;
    Ok(RelationStream {
        n,
        filter,
        next: Some(0),
    })
}

/// Number of relations on `n` points satisfying every predicate in `filter`.
pub fn count_relations(n: usize, filter: PredicateMask, config: &EnumConfig) -> Result<u64, EnumError> {
    config.check(n)?;
    let counts = sweep(n, config, |_, _, mask, part: &mut u64| {
        if mask.contains(filter) {
            *part += 1;
        }
    });
    Ok(counts.into_iter().sum())
}

/// Runs `visit` on every relation, block by block, and returns the
/// per-block accumulators in block order.
fn sweep<P, F>(n: usize, config: &EnumConfig, visit: F) -> Vec<P>
where
    P: Default + Send,
    F: Fn(u64, &EndoRelation, PredicateMask, &mut P) + Sync,
{
    let bits = (n * n) as u32;
    let block_bits = BLOCK_BITS.min(bits);
    let blocks = 1u64 << (bits - block_bits);
    let run = || {
        (0..blocks)
            .into_par_iter()
            .map(|block| {
                let mut part = P::default();
                let start = block << block_bits;
                for code in start..start + (1u64 << block_bits) {
                    let f = EndoRelation::decode(n, code).expect("n checked");
                    let mask = PredicateMask::of(&f);
                    visit(code, &f, mask, &mut part);
                }
                part
            })
            .collect()
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .expect("thread pool")
        .install(run)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    /// Γ ⟺ reflexive fork ⟺ non-trivial, for idempotent serial relations;
    /// also runs the constructive chain search on every non-trivial one.
    Gamma,
    /// `f = ι` ⟺ singleton images ⟺ trivial, for idempotent surjective
    /// relations; `ι` is the only trivial V-relation.
    Trivial,
    /// V-relation ⟺ `f(f(x)) = f(x)` for all `x`, for serial surjective relations.
    Vchar,
    /// Constant system over a 3-chain is exact ⟺ `f` idempotent, for `f ⊆ f∘f`.
    Exactness,
}

impl Claim {
    pub const ALL: [Claim; 4] = [Claim::Gamma, Claim::Trivial, Claim::Vchar, Claim::Exactness];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Gamma => "gamma",
            Claim::Trivial => "trivial",
            Claim::Vchar => "vchar",
            Claim::Exactness => "exactness",
        }
    }
}

impl FromStr for Claim {
    type Err = EnumError;

    fn from_str(s: &str) -> Result<Self, EnumError> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| EnumError::UnknownClaim(s.to_string()))
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub code: u64,
    pub relation: EndoRelation,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinationCount {
    pub predicates: PredicateMask,
    pub count: u64,
}

/// Aggregate of one exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationTable {
    pub claim: Option<Claim>,
    pub n: usize,
    pub total_count: u64,
    /// Relations per predicate, each counted independently.
    pub predicate_counts: BTreeMap<&'static str, u64>,
    /// Relations per exact predicate combination, nonzero only, by mask.
    pub combinations: Vec<CombinationCount>,
    /// Relations meeting the claim's hypothesis.
    pub hypothesis_count: u64,
    /// Claim-specific tallies.
    pub tallies: BTreeMap<&'static str, u64>,
    /// Relations violating the claim, ascending by code. Always empty for a
    /// true theorem.
    pub counterexamples: Vec<Counterexample>,
}

impl ClassificationTable {
    pub fn count(&self, predicates: PredicateMask) -> u64 {
        self.combinations
            .iter()
            .filter(|c| c.predicates.contains(predicates))
            .map(|c| c.count)
            .sum()
    }

    pub fn tally(&self, key: &str) -> u64 {
        self.tallies.get(key).copied().unwrap_or(0)
    }

    pub fn verified(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Default)]
struct Partial {
    combos: Vec<u64>,
    hypothesis: u64,
    tallies: BTreeMap<&'static str, u64>,
    counterexamples: Vec<Counterexample>,
}

impl Partial {
    fn tick(&mut self, key: &'static str) {
        *self.tallies.entry(key).or_default() += 1;
    }

    fn fail(&mut self, code: u64, f: &EndoRelation, reason: impl Into<String>) {
        self.counterexamples.push(Counterexample {
            code,
            relation: f.clone(),
            reason: reason.into(),
        });
    }
}

fn merge(claim: Option<Claim>, n: usize, parts: Vec<Partial>) -> ClassificationTable {
    let mut combos = vec![0u64; 128];
    let mut hypothesis_count = 0;
    let mut tallies = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for part in parts {
        for (acc, c) in combos.iter_mut().zip(&part.combos) {
            *acc += c;
        }
        hypothesis_count += part.hypothesis;
        for (k, v) in part.tallies {
            *tallies.entry(k).or_default() += v;
        }
        counterexamples.extend(part.counterexamples);
    }
    let combinations: Vec<CombinationCount> = combos
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(bits, &count)| CombinationCount {
            predicates: PredicateMask::from_bits_truncate(bits as u8),
            count,
        })
        .collect();
    let predicate_counts = PREDICATE_NAMES
        .iter()
        .map(|&(name, m)| {
            let c = combinations
                .iter()
                .filter(|c| c.predicates.contains(m))
                .map(|c| c.count)
                .sum();
            (name, c)
        })
        .collect();
    ClassificationTable {
        claim,
        n,
        total_count: total(n),
        predicate_counts,
        combinations,
        hypothesis_count,
        tallies,
        counterexamples,
    }
}

fn run_claim<F>(claim: Option<Claim>, n: usize, config: &EnumConfig, check: F) -> Result<ClassificationTable, EnumError>
where
    F: Fn(u64, &EndoRelation, PredicateMask, &mut Partial) + Sync,
{
    config.check(n)?;
    let parts = sweep(n, config, |code, f, mask, part: &mut Partial| {
        if part.combos.is_empty() {
            part.combos = vec![0; 128];
        }
        part.combos[mask.bits() as usize] += 1;
        check(code, f, mask, part);
    });
    Ok(merge(claim, n, parts))
}

/// Predicate counts over all relations on `n` points, no claim attached.
pub fn classify(n: usize, config: &EnumConfig) -> Result<ClassificationTable, EnumError> {
    run_claim(None, n, config, |_, _, _, _| {})
}

/// Sweeps every idempotent serial relation: Condition Γ, the reflexive-fork
/// condition and non-triviality must agree, and the constructive chain
/// search must produce a valid witness for each non-trivial one.
pub fn verify_gamma_theorem(n: usize, config: &EnumConfig) -> Result<ClassificationTable, EnumError> {
    run_claim(Some(Claim::Gamma), n, config, |code, f, mask, part| {
        if !mask.contains(PredicateMask::IDEMPOTENT | PredicateMask::SERIAL) {
            return;
        }
        part.hypothesis += 1;
        let report = match equivalence_report(f) {
            Ok(r) => r,
            Err(e) => return part.fail(code, f, format!("equivalence report failed: {e}")),
        };
        if !report.consistent() {
            part.fail(
                code,
                f,
                format!(
                    "conditions disagree: gamma={} condition_b={} nontrivial={}",
                    report.gamma, report.condition_b, report.nontrivial
                ),
            );
        }
        if report.gamma {
            part.tick("gamma");
        }
        if !report.nontrivial {
            return;
        }
        part.tick("nontrivial");
        match gamma_chain_witness(f) {
            Ok((w, trace)) if w.validates(f) && trace.satisfies_chain_pattern(f) => {
                part.tick("chain_witnesses_validated");
                if trace.points.len() > 2 {
                    part.tick("chain_extended");
                }
                if !trace.lemma_points.is_empty() {
                    part.tick("lemma_walks");
                }
            }
            Ok((w, trace)) => part.fail(code, f, format!("chain witness {w} or trace {:?} invalid", trace.points)),
            Err(e) => part.fail(code, f, format!("chain search failed: {e}")),
        }
    })
}

/// Sweeps every idempotent surjective relation: being `ι`, having only
/// singleton images, and being trivial must coincide; the only trivial
/// V-relation must be `ι`.
pub fn verify_trivial_characterization(n: usize, config: &EnumConfig) -> Result<ClassificationTable, EnumError> {
    run_claim(Some(Claim::Trivial), n, config, |code, f, mask, part| {
        if mask.contains(PredicateMask::TRIVIAL | PredicateMask::V_RELATION) {
            part.tick("trivial_v_relations");
            if !f.is_identity() {
                part.fail(code, f, "trivial V-relation other than the identity");
            }
        }
        if !mask.contains(PredicateMask::IDEMPOTENT | PredicateMask::SURJECTIVE) {
            return;
        }
        part.hypothesis += 1;
        let identity = f.is_identity();
        let singletons = f.rows().all(|r| r.len() == 1);
        let trivial = mask.contains(PredicateMask::TRIVIAL);
        if identity {
            part.tick("identity");
        }
        if !(identity == singletons && singletons == trivial) {
            part.fail(
                code,
                f,
                format!("identity={identity} singleton_images={singletons} trivial={trivial}"),
            );
        }
    })
}

/// `f(f(x)) = f(x)` for every `x`.
pub fn fixes_images(f: &EndoRelation) -> bool {
    f.rows().all(|img| f.image(img) == img)
}

/// Sweeps every serial surjective relation: V-relation ⟺ every image is
/// fixed by `f`. V-relations must also send a singleton image `{y}` to a
/// fixed point `f(y) = {y}`.
pub fn verify_v_characterization(n: usize, config: &EnumConfig) -> Result<ClassificationTable, EnumError> {
    run_claim(Some(Claim::Vchar), n, config, |code, f, mask, part| {
        if !mask.contains(PredicateMask::SERIAL | PredicateMask::SURJECTIVE) {
            return;
        }
        part.hypothesis += 1;
        let v = mask.contains(PredicateMask::V_RELATION);
        let fixing = fixes_images(f);
        if fixing {
            part.tick("image_fixing");
        }
        if v {
            part.tick("v_relations");
        }
        if v != fixing {
            part.fail(code, f, format!("v_relation={v} image_fixing={fixing}"));
        }
        if v {
            let bad = f.rows().filter(|r| r.len() == 1).find_map(|r| {
                let y = r.first().expect("singleton");
                (f.row(y) != ElementSet::singleton(y)).then_some(y)
            });
            if let Some(y) = bad {
                part.fail(code, f, format!("singleton image {{{y}}} but f({y}) is not {{{y}}}"));
            }
        }
    })
}

/// Sweeps every `f ⊆ f∘f`: the constant system over the 3-chain is exact
/// exactly when `f` is idempotent.
pub fn verify_exactness(n: usize, config: &EnumConfig) -> Result<ClassificationTable, EnumError> {
    let p = chain(3).expect("nonempty chain");
    run_claim(Some(Claim::Exactness), n, config, |code, f, mask, part| {
        if !f.is_sub_idempotent() {
            return;
        }
        part.hypothesis += 1;
        if mask.contains(PredicateMask::IDEMPOTENT) {
            part.tick("idempotent");
        }
        match verify_constant_exactness(f, &p) {
            Ok(true) => part.tick("equivalence_holds"),
            Ok(false) => part.fail(code, f, "exactness and idempotence disagree"),
            Err(e) => part.fail(code, f, format!("exactness check failed: {e}")),
        }
    })
}

pub fn verify_claim(claim: Claim, n: usize, config: &EnumConfig) -> Result<ClassificationTable, EnumError> {
    match claim {
        Claim::Gamma => verify_gamma_theorem(n, config),
        Claim::Trivial => verify_trivial_characterization(n, config),
        Claim::Vchar => verify_v_characterization(n, config),
        Claim::Exactness => verify_exactness(n, config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    #[test]
    fn one_point_has_two_relations() {
        let all: Vec<_> = enumerate_relations(1, PredicateMask::empty(), &cfg()).unwrap().collect();
        assert_eq!(all.len(), 2);
        assert!(all[0].is_empty());
        assert!(all[1].is_identity());
    }

    #[test]
    fn serial_on_two_points() {
        let n = enumerate_relations(2, PredicateMask::SERIAL, &cfg()).unwrap().count();
        assert_eq!(n, 9);
        assert_eq!(count_relations(2, PredicateMask::SERIAL, &cfg()).unwrap(), 9);
    }

    #[test]
    fn v_relations_on_two_points() {
        let got: Vec<_> = enumerate_relations(2, PredicateMask::V_RELATION, &cfg()).unwrap().collect();
        let want = [
            EndoRelation::identity(2).unwrap(),
            EndoRelation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]).unwrap(),
            EndoRelation::from_pairs(2, [(0, 0), (1, 0), (1, 1)]).unwrap(),
            EndoRelation::full(2).unwrap(),
        ];
        assert_eq!(got.len(), 4);
        for w in &want {
            assert!(got.contains(w), "{w:?}");
        }
        // ascending codes
        let codes: Vec<u64> = got.iter().map(|f| f.encode().unwrap()).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bound_enforced() {
        assert_eq!(
            enumerate_relations(6, PredicateMask::empty(), &cfg()).err(),
            Some(EnumError::BoundExceeded { n: 6, max: 5 })
        );
        let big = EnumConfig { max_n: 20, jobs: 1 };
        assert_eq!(
            count_relations(9, PredicateMask::empty(), &big).err(),
            Some(EnumError::BoundExceeded { n: 9, max: 7 })
        );
        assert_eq!(verify_gamma_theorem(0, &cfg()).err(), Some(EnumError::ZeroSize));
    }

    #[test]
    fn gamma_small_cases() {
        let t1 = verify_gamma_theorem(1, &cfg()).unwrap();
        assert_eq!(t1.hypothesis_count, 1);
        assert_eq!(t1.tally("nontrivial"), 0);
        assert!(t1.verified());

        let t2 = verify_gamma_theorem(2, &cfg()).unwrap();
        assert_eq!(t2.hypothesis_count, 6);
        assert_eq!(t2.tally("nontrivial"), 3);
        assert_eq!(t2.tally("gamma"), 3);
        assert_eq!(t2.tally("chain_witnesses_validated"), 3);
        assert!(t2.verified());
    }

    #[test]
    fn trivial_small_cases() {
        for n in 1..=3 {
            let t = verify_trivial_characterization(n, &cfg()).unwrap();
            assert!(t.verified(), "{:?}", t.counterexamples);
            assert_eq!(t.tally("trivial_v_relations"), 1);
        }
        assert_eq!(verify_trivial_characterization(3, &cfg()).unwrap().total_count, 512);
    }

    #[test]
    fn vchar_small_cases() {
        let t = verify_v_characterization(2, &cfg()).unwrap();
        assert!(t.verified());
        assert_eq!(t.total_count, 16);
        assert!(fixes_images(&EndoRelation::full(2).unwrap()));
        let swap = EndoRelation::from_pairs(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(swap.image(swap.row(0)), ElementSet::singleton(0));
        assert!(!fixes_images(&swap));
    }

    #[test]
    fn exactness_on_two_points() {
        let t = verify_exactness(2, &cfg()).unwrap();
        assert!(t.verified());
        assert_eq!(t.hypothesis_count, t.tally("equivalence_holds"));
    }

    #[test]
    fn counts_are_monotone() {
        let t = classify(3, &cfg()).unwrap();
        let c = |m| t.count(m);
        assert!(c(PredicateMask::V_RELATION) <= c(PredicateMask::IDEMPOTENT));
        assert!(c(PredicateMask::IDEMPOTENT) <= c(PredicateMask::TRANSITIVE));
        assert!(c(PredicateMask::SERIAL | PredicateMask::IDEMPOTENT) <= c(PredicateMask::SERIAL));
        assert_eq!(t.predicate_counts["transitive"], c(PredicateMask::TRANSITIVE));
        assert_eq!(t.combinations.iter().map(|c| c.count).sum::<u64>(), 512);
    }

    #[test]
    fn parse_predicates() {
        assert_eq!(
            PredicateMask::parse_list("serial,v").unwrap(),
            PredicateMask::SERIAL | PredicateMask::V_RELATION
        );
        assert!(PredicateMask::parse_list("bogus").is_err());
        assert_eq!("exactness".parse::<Claim>().unwrap(), Claim::Exactness);
        assert_eq!((PredicateMask::SERIAL | PredicateMask::GAMMA).to_string(), "serial,gamma");
    }

    #[test]
    fn worker_count_does_not_change_tables() {
        let one = verify_gamma_theorem(3, &cfg()).unwrap();
        let four = verify_gamma_theorem(3, &EnumConfig { max_n: 5, jobs: 4 }).unwrap();
        assert_eq!(one, four);
    }
}
