//! Constructive Condition Γ search for idempotent serial relations.
//!
//! The search follows the non-triviality route: pick a point `x₀` whose
//! image is not fixed pointwise, restrict to `g = f↾f(x₀)`, and find in
//! `g⁻¹` a pair `⟨y,y⟩, ⟨x,y⟩` (directly when `g⁻¹` is reflexive, otherwise by
//! walking a chain of non-reflexive points). That yields `⟨x,x⟩, ⟨x,y⟩ ∈ f`,
//! and a second chain `z₀ = x, z₁ = y, …` through `f` ends at the first
//! reflexive point. Every choice takes the least admissible element.

use serde::Serialize;
use thiserror::Error;

use crate::relation::{ElementSet, EndoRelation, GammaWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("relation is not idempotent")]
    NotIdempotent,
    #[error("relation is not serial: element {0} has an empty image")]
    NotSerial(usize),
    #[error("relation is trivial, so it has no Condition Γ witness")]
    Trivial,
    /// The chain ran out of fresh points; impossible for valid input.
    #[error("chain exhausted the carrier without reaching a reflexive point: {0:?}")]
    ChainExhausted(Vec<usize>),
}

/// Audit record of one [`gamma_chain_witness`] run, in ids of the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainTrace {
    /// The non-triviality witness `x₀`.
    pub anchor: usize,
    /// The chain walked inside `(f↾f(x₀))⁻¹`; empty when that relation was reflexive.
    pub lemma_points: Vec<usize>,
    /// `z₀, z₁, …`; the last point is the reflexive one closing the witness.
    pub points: Vec<usize>,
}

impl ChainTrace {
    /// Checks the chain invariant: before the last point,
    /// `⟨zᵢ,zⱼ⟩ ∈ f ⟺ i < j ∨ i = j = 0`; the last point is reflexive and
    /// reached from every earlier point, and when the chain actually grew
    /// (three or more points) it reaches none of them back.
    pub fn satisfies_chain_pattern(&self, f: &EndoRelation) -> bool {
        let z = &self.points;
        if z.len() < 2 {
            return false;
        }
        let distinct = z.iter().collect::<std::collections::BTreeSet<_>>().len() == z.len();
        let last = z.len() - 1;
        let prefix = (0..last).all(|i| {
            (0..last).all(|j| f.contains(z[i], z[j]) == (i < j || (i == 0 && j == 0)))
        });
        let closing = f.contains(z[last], z[last])
            && (0..last).all(|i| f.contains(z[i], z[last]))
            && (z.len() == 2 || (0..last).all(|i| !f.contains(z[last], z[i])));
        distinct && prefix && closing
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub gamma: bool,
    pub condition_b: bool,
    pub nontrivial: bool,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.gamma == self.condition_b && self.condition_b == self.nontrivial
    }
}

/// Least `x₀` with `f↾f(x₀) ≠ ι↾f(x₀)`, or `None` when `f` is trivial.
pub fn nontriviality_witness(f: &EndoRelation) -> Option<usize> {
    f.trivial_violation()
}

fn check_hypotheses(f: &EndoRelation) -> Result<(), WitnessError> {
    if let Some(x) = (0..f.size()).find(|&x| f.row(x).is_empty()) {
        return Err(WitnessError::NotSerial(x));
    }
    if !f.is_idempotent() {
        return Err(WitnessError::NotIdempotent);
    }
    Ok(())
}

/// Walks `x₀, x₁, …` in `h` from a non-reflexive start, each step the least
/// fresh successor, until a reflexive point appears. Returns the chain;
/// its last two points `x, y` satisfy `⟨x,y⟩, ⟨y,y⟩ ∈ h`.
fn nonreflexive_chain(h: &EndoRelation, start: usize) -> Result<Vec<usize>, WitnessError> {
    let mut chain = vec![start];
    let mut seen = ElementSet::singleton(start);
    loop {
        let tail = *chain.last().expect("chain is never empty");
        let Some(next) = h.row(tail).difference(seen).first() else {
            return Err(WitnessError::ChainExhausted(chain));
        };
        chain.push(next);
        seen.insert(next);
        if h.contains(next, next) {
            return Ok(chain);
        }
    }
}

/// Runs the constructive Condition Γ search. Requires `f` idempotent,
/// serial and non-trivial.
pub fn gamma_chain_witness(f: &EndoRelation) -> Result<(GammaWitness, ChainTrace), WitnessError> {
    check_hypotheses(f)?;
    let anchor = nontriviality_witness(f).ok_or(WitnessError::Trivial)?;

    let restriction = f.restrict(f.row(anchor));
    let g = restriction
        .relation
        .as_ref()
        .expect("serial relation has nonempty images");
    let h = g.inverse();

    // Find ⟨x,x⟩, ⟨x,y⟩ ∈ g (in restricted ids) via h = g⁻¹.
    let (bx, by, lemma_points) = if h.reflexive_points() == h.carrier() {
        // h ≠ ι, so g has an off-diagonal pair; every point is reflexive.
        let (x, y) = g.reflexive_fork().expect("non-trivial restriction is not the identity");
        (x, y, Vec::new())
    } else {
        let start = h
            .carrier()
            .difference(h.reflexive_points())
            .first()
            .expect("some point is not reflexive");
        let chain = nonreflexive_chain(&h, start)?;
        // ⟨u,v⟩, ⟨v,v⟩ ∈ h  ⇒  ⟨v,v⟩, ⟨v,u⟩ ∈ g
        let u = chain[chain.len() - 2];
        let v = chain[chain.len() - 1];
        let mapped = chain.iter().map(|&i| restriction.original(i)).collect();
        (v, u, mapped)
    };
    let x = restriction.original(bx);
    let y = restriction.original(by);
    debug_assert!(f.contains(x, x) && f.contains(x, y) && x != y);

    let mut points = vec![x, y];
    if !f.contains(y, y) {
        let mut seen = ElementSet::from_iter([x, y]);
        loop {
            let tail = *points.last().expect("chain is never empty");
            let Some(next) = f.row(tail).difference(seen).first() else {
                return Err(WitnessError::ChainExhausted(points));
            };
            points.push(next);
            seen.insert(next);
            if f.contains(next, next) {
                break;
            }
        }
    }
    let witness = GammaWitness {
        x: points[0],
        y: *points.last().expect("chain is never empty"),
    };
    debug_assert!(witness.validates(f));
    Ok((
        witness,
        ChainTrace {
            anchor,
            lemma_points,
            points,
        },
    ))
}

/// Evaluates the three equivalent conditions for an idempotent serial relation.
pub fn equivalence_report(f: &EndoRelation) -> Result<EquivalenceReport, WitnessError> {
    check_hypotheses(f)?;
    Ok(EquivalenceReport {
        gamma: f.condition_gamma().is_some(),
        condition_b: f.reflexive_fork().is_some(),
        nontrivial: !f.is_trivial(),
    })
}
