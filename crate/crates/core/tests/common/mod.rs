//! Reference implementations for tests: plain `BTreeSet` relations, every
//! predicate straight from its definition, no bit tricks.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use mahavier_core::grid::{FamilySpec, LowerChoice, StarChoice, UpperChoice};
use mahavier_core::mahavier::BondingSystem;
use mahavier_core::preorder::build_preorder;
use mahavier_core::{BinaryRelation, ElementSet, EndoRelation};
use rand::Rng;

pub type Rel = BTreeSet<(usize, usize)>;

/// Bit `a * n + b` of `code` is the pair `(a, b)`.
pub fn decode(n: usize, code: u64) -> Rel {
    let mut f = Rel::new();
    for a in 0..n {
        for b in 0..n {
            if code >> (a * n + b) & 1 == 1 {
                f.insert((a, b));
            }
        }
    }
    f
}

pub fn from_core(f: &EndoRelation) -> Rel {
    let n = f.size();
    let mut r = Rel::new();
    for a in 0..n {
        for b in 0..n {
            if f.contains(a, b) {
                r.insert((a, b));
            }
        }
    }
    r
}

pub fn to_core(n: usize, f: &Rel) -> EndoRelation {
    EndoRelation::from_pairs(n, f.iter().copied()).unwrap()
}

pub fn image(f: &Rel, x: usize) -> BTreeSet<usize> {
    f.iter().filter(|&&(a, _)| a == x).map(|&(_, b)| b).collect()
}

/// `f ∘ g`: apply `g`, then `f`.
pub fn compose(f: &Rel, g: &Rel) -> Rel {
    let mut out = Rel::new();
    for &(a, b) in g {
        for &(c, d) in f {
            if b == c {
                out.insert((a, d));
            }
        }
    }
    out
}

pub fn inverse(f: &Rel) -> Rel {
    f.iter().map(|&(a, b)| (b, a)).collect()
}

pub fn identity(n: usize) -> Rel {
    (0..n).map(|a| (a, a)).collect()
}

pub fn serial(n: usize, f: &Rel) -> bool {
    (0..n).all(|x| f.iter().any(|&(a, _)| a == x))
}

pub fn surjective(n: usize, f: &Rel) -> bool {
    (0..n).all(|y| f.iter().any(|&(_, b)| b == y))
}

pub fn transitive(f: &Rel) -> bool {
    compose(f, f).is_subset(f)
}

pub fn idempotent(f: &Rel) -> bool {
    compose(f, f) == *f
}

pub fn sub_idempotent(f: &Rel) -> bool {
    f.is_subset(&compose(f, f))
}

/// For every `x`: `f ∩ (f(x) × X)` equals the diagonal on `f(x)`.
pub fn trivial(n: usize, f: &Rel) -> bool {
    (0..n).all(|x| {
        let fx = image(f, x);
        let restricted: Rel = f.iter().filter(|(a, _)| fx.contains(a)).copied().collect();
        let diagonal: Rel = fx.iter().map(|&a| (a, a)).collect();
        restricted == diagonal
    })
}

pub fn v_relation(n: usize, f: &Rel) -> bool {
    serial(n, f) && surjective(n, f) && idempotent(f)
}

/// Lexicographically least `(x, y)`, `x ≠ y`, with `⟨x,x⟩, ⟨x,y⟩, ⟨y,y⟩ ∈ f`.
pub fn gamma(n: usize, f: &Rel) -> Option<(usize, usize)> {
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| x != y && f.contains(&(x, x)) && f.contains(&(x, y)) && f.contains(&(y, y)))
}

/// Some `⟨x,x⟩, ⟨x,y⟩ ∈ f` with `x ≠ y`.
pub fn reflexive_fork(n: usize, f: &Rel) -> bool {
    (0..n).any(|x| f.contains(&(x, x)) && (0..n).any(|y| y != x && f.contains(&(x, y))))
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Counts {
    pub total: u64,
    pub serial: u64,
    pub transitive: u64,
    pub idempotent: u64,
    pub idempotent_serial: u64,
    pub v: u64,
    pub trivial: u64,
    pub nontrivial_idempotent_serial: u64,
    pub serial_surjective: u64,
    pub trivial_v: u64,
    pub gamma: u64,
}

pub fn counts(n: usize) -> Counts {
    let mut c = Counts::default();
    for code in 0..1u64 << (n * n) {
        let f = decode(n, code);
        let (s, i, t) = (serial(n, &f), idempotent(&f), trivial(n, &f));
        let v = v_relation(n, &f);
        c.total += 1;
        c.serial += s as u64;
        c.transitive += transitive(&f) as u64;
        c.idempotent += i as u64;
        c.idempotent_serial += (i && s) as u64;
        c.v += v as u64;
        c.trivial += t as u64;
        c.nontrivial_idempotent_serial += (i && s && !t) as u64;
        c.serial_surjective += (s && surjective(n, &f)) as u64;
        c.trivial_v += (t && v) as u64;
        c.gamma += gamma(n, &f).is_some() as u64;
    }
    c
}

/// Reflexive-transitive closure as a dense matrix.
pub fn closure(m: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; m]; m];
    for p in 0..m {
        leq[p][p] = true;
    }
    for &(p, q) in pairs {
        leq[p][q] = true;
    }
    loop {
        let mut changed = false;
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    if leq[p][q] && leq[q][r] && !leq[p][r] {
                        leq[p][r] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return leq;
        }
    }
}

/// A bonding system described without any library types.
#[derive(Debug, Clone)]
pub struct RawSystem {
    pub m: usize,
    pub order: Vec<(usize, usize)>,
    pub sizes: Vec<usize>,
    /// `(p, q)` with `p ≤ q` to pairs `(a, b)`, `a ∈ X_q`, `b ∈ X_p`.
    pub bonds: BTreeMap<(usize, usize), Rel>,
}

impl RawSystem {
    pub fn leq(&self) -> Vec<Vec<bool>> {
        closure(self.m, &self.order)
    }

    pub fn to_core(&self) -> BondingSystem {
        let preorder = build_preorder(self.m, self.order.iter().copied()).unwrap().preorder;
        let bonds = self.bonds.iter().map(|(&(p, q), r)| {
            let bond = BinaryRelation::from_pairs(self.sizes[q], self.sizes[p], r.iter().copied()).unwrap();
            ((p, q), bond)
        });
        BondingSystem::new(preorder, self.sizes.clone(), bonds.collect::<Vec<_>>()).unwrap()
    }

    /// Every vector of the full product, in lexicographic order, kept when
    /// `x(p) ∈ f_{p,q}(x(q))` for all `p ≤ q`.
    pub fn brute_product(&self) -> Vec<Vec<usize>> {
        let leq = self.leq();
        let mut out = Vec::new();
        let mut x = vec![0usize; self.m];
        loop {
            let member = (0..self.m).all(|p| {
                (0..self.m).all(|q| !leq[p][q] || self.bonds[&(p, q)].contains(&(x[q], x[p])))
            });
            if member {
                out.push(x.clone());
            }
            let mut i = self.m;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                x[i] += 1;
                if x[i] < self.sizes[i] {
                    break;
                }
                x[i] = 0;
            }
        }
    }

    pub fn product_size(&self) -> usize {
        self.sizes.iter().product()
    }
}

fn random_rel<R: Rng>(rng: &mut R, src: usize, dst: usize, density: f64) -> Rel {
    let mut r = Rel::new();
    for a in 0..src {
        for b in 0..dst {
            if rng.gen_bool(density) {
                r.insert((a, b));
            }
        }
    }
    r
}

/// A random system with `Π |X_p| ≤ 4096`; `two_cycle` forces `0 ≤ 1 ≤ 0`.
pub fn random_system<R: Rng>(rng: &mut R, two_cycle: bool) -> RawSystem {
    let m = rng.gen_range(if two_cycle { 2 } else { 1 }..=6);
    let mut sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=4)).collect();
    while sizes.iter().product::<usize>() > 4096 {
        let i = rng.gen_range(0..m);
        sizes[i] = (sizes[i] - 1).max(1);
    }
    let mut order = Vec::new();
    for p in 0..m {
        for q in 0..m {
            if p != q && rng.gen_bool(0.3) {
                order.push((p, q));
            }
        }
    }
    if two_cycle {
        order.push((0, 1));
        order.push((1, 0));
    }
    let leq = closure(m, &order);
    let density = [0.4, 0.7, 0.9][rng.gen_range(0..3)];
    let mut bonds = BTreeMap::new();
    for p in 0..m {
        for q in 0..m {
            if !leq[p][q] {
                continue;
            }
            let r = if p == q && rng.gen_bool(0.7) {
                identity(sizes[p])
            } else {
                random_rel(rng, sizes[q], sizes[p], density)
            };
            bonds.insert((p, q), r);
        }
    }
    RawSystem { m, order, sizes, bonds }
}

/// A family spec for a `k`-grid; may violate surjectivity.
pub fn sample_family<R: Rng>(rng: &mut R, family: u8, k: usize) -> FamilySpec {
    let points = k + 1;
    match family {
        1 => FamilySpec::Reflection,
        2 => FamilySpec::Lower(
            (0..points)
                .map(|_| match rng.gen_range(0..6) {
                    0 => LowerChoice::Interval,
                    1 => LowerChoice::ZeroAndSelf,
                    2 => LowerChoice::Zero,
                    _ => LowerChoice::Point,
                })
                .collect(),
        ),
        3 => FamilySpec::Upper(
            (0..points)
                .map(|_| match rng.gen_range(0..6) {
                    0 => UpperChoice::Interval,
                    1 => UpperChoice::SelfAndTop,
                    2 => UpperChoice::Top,
                    _ => UpperChoice::Point,
                })
                .collect(),
        ),
        4 => {
            let mut a = ElementSet::EMPTY;
            let mut b = ElementSet::EMPTY;
            for x in 0..points {
                match rng.gen_range(0..3) {
                    0 => a.insert(x),
                    1 => b.insert(x),
                    _ => {}
                }
            }
            if a.is_empty() {
                let x = rng.gen_range(0..points);
                b.remove(x);
                a.insert(x);
            }
            if b.is_empty() {
                let x = (0..points).find(|&x| !a.contains(x)).unwrap_or(0);
                a.remove(x);
                b.insert(x);
                if a.is_empty() {
                    a.insert((x + 1) % points);
                }
            }
            FamilySpec::Split { a, b }
        }
        _ => {
            let center = rng.gen_range(0..points);
            let mut set = ElementSet::singleton(center);
            for x in 0..points {
                if rng.gen_bool(0.4) {
                    set.insert(x);
                }
            }
            // points outside B are only hit by themselves, so they mostly stay put
            let mut choices: Vec<StarChoice> = (0..points)
                .map(|x| {
                    let p = if set.contains(x) { 0.3 } else { 0.05 };
                    if rng.gen_bool(p) {
                        StarChoice::Whole
                    } else {
                        StarChoice::Point
                    }
                })
                .collect();
            choices[center] = StarChoice::Whole;
            let fixed: Vec<usize> = set.iter().filter(|&y| choices[y] == StarChoice::Point).collect();
            if !fixed.is_empty() {
                for x in 0..points {
                    let p = if set.contains(x) { 0.3 } else { 0.05 };
                    if x != center && !fixed.contains(&x) && rng.gen_bool(p) {
                        choices[x] = StarChoice::Fixed(fixed[rng.gen_range(0..fixed.len())]);
                    }
                }
            }
            FamilySpec::Star { center, set, choices }
        }
    }
}
