//! V-relation families on the grid `{0, 1/k, …, 1}`, point `i` standing for
//! `i/k`. Intervals discretize to full index ranges.

use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::relation::{ElementSet, EndoRelation, GammaWitness, MAX_CARRIER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid parameter k = {0} must be in 1..{MAX_CARRIER}")]
    BadK(usize),
    #[error("figure presets need k divisible by 4, got {0}")]
    NotDivisibleBy4(usize),
    #[error("expected {expected} per-point choices, got {got}")]
    ChoiceCount { expected: usize, got: usize },
    #[error("index set {0} must be nonempty")]
    EmptySet(&'static str),
    #[error("index sets A and B overlap")]
    Overlap,
    #[error("point {0} is not on the grid")]
    OffGrid(usize),
    #[error("b = {0} must belong to B")]
    CenterOutsideSet(usize),
    #[error("b = {0} must be assigned the whole set B")]
    CenterNotWhole(usize),
    #[error("designated point {0} is not in B")]
    FixedOutsideSet(usize),
    #[error("designated point {0} is not fixed: f({0}) ≠ {{{0}}}")]
    FixedNotFixed(usize),
    #[error("relation is not surjective: point {uncovered} is never hit")]
    NotSurjective { uncovered: usize },
    #[error("relation is not serial: point {0} has an empty image")]
    NotSerial(usize),
    #[error("construction is not a V-relation")]
    NotVRelation,
    #[error("figure panel {panel} does not validate its stated witness")]
    PresetMismatch { panel: usize },
    #[error("unknown choice `{0}`")]
    UnknownChoice(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    k: usize,
}

impl GridSpec {
    pub fn new(k: usize) -> Result<Self, GridError> {
        if k == 0 || k >= MAX_CARRIER {
            return Err(GridError::BadK(k));
        }
        Ok(GridSpec { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> usize {
        self.k + 1
    }

    fn check(&self, set: ElementSet) -> Result<(), GridError> {
        match set.last() {
            Some(x) if x > self.k => Err(GridError::OffGrid(x)),
            _ => Ok(()),
        }
    }
}

/// Per-point image for the lower family: `[0,x]`, `{0,x}`, `{0}` or `{x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LowerChoice {
    Interval,
    ZeroAndSelf,
    Zero,
    Point,
}

/// Per-point image for the upper family: `[x,1]`, `{x,1}`, `{1}` or `{x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UpperChoice {
    Interval,
    SelfAndTop,
    Top,
    Point,
}

/// Per-point image for the star family: `{x}`, all of `B`, or `{y}` for a
/// fixed point `y ∈ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StarChoice {
    Point,
    Whole,
    Fixed(usize),
}

impl FromStr for LowerChoice {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, GridError> {
        Ok(match s {
            "interval" => LowerChoice::Interval,
            "zero-self" => LowerChoice::ZeroAndSelf,
            "zero" => LowerChoice::Zero,
            "self" => LowerChoice::Point,
            _ => return Err(GridError::UnknownChoice(s.to_string())),
        })
    }
}

impl FromStr for UpperChoice {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, GridError> {
        Ok(match s {
            "interval" => UpperChoice::Interval,
            "self-top" => UpperChoice::SelfAndTop,
            "top" => UpperChoice::Top,
            "self" => UpperChoice::Point,
            _ => return Err(GridError::UnknownChoice(s.to_string())),
        })
    }
}

impl FromStr for StarChoice {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, GridError> {
        match s {
            "self" => Ok(StarChoice::Point),
            "whole" => Ok(StarChoice::Whole),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|y| y.parse().ok())
                .map(StarChoice::Fixed)
                .ok_or_else(|| GridError::UnknownChoice(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FamilySpec {
    /// `f(x) = {x, 1-x}`.
    Reflection,
    Lower(Vec<LowerChoice>),
    Upper(Vec<UpperChoice>),
    /// `f(a) = [0,1]` on `A`, `f(x) = B` elsewhere; `A`, `B` disjoint, nonempty.
    Split { a: ElementSet, b: ElementSet },
    /// `b ∈ f(b) = B`, other points per `choices`.
    Star {
        center: usize,
        set: ElementSet,
        choices: Vec<StarChoice>,
    },
}

impl FamilySpec {
    pub fn id(&self) -> u8 {
        match self {
            FamilySpec::Reflection => 1,
            FamilySpec::Lower(_) => 2,
            FamilySpec::Upper(_) => 3,
            FamilySpec::Split { .. } => 4,
            FamilySpec::Star { .. } => 5,
        }
    }
}

fn check_len<T>(choices: &[T], grid: &GridSpec) -> Result<(), GridError> {
    if choices.len() != grid.points() {
        return Err(GridError::ChoiceCount {
            expected: grid.points(),
            got: choices.len(),
        });
    }
    Ok(())
}

/// Builds the grid relation for `spec` and checks it is a V-relation.
pub fn construct_family(spec: &FamilySpec, grid: &GridSpec) -> Result<EndoRelation, GridError> {
    let k = grid.k;
    let rows: Vec<ElementSet> = match spec {
        FamilySpec::Reflection => (0..=k).map(|x| ElementSet::from_iter([x, k - x])).collect(),
        FamilySpec::Lower(choices) => {
            check_len(choices, grid)?;
            choices
                .iter()
                .enumerate()
                .map(|(x, c)| match c {
                    LowerChoice::Interval => ElementSet::range_inclusive(0, x),
                    LowerChoice::ZeroAndSelf => ElementSet::from_iter([0, x]),
                    LowerChoice::Zero => ElementSet::singleton(0),
                    LowerChoice::Point => ElementSet::singleton(x),
                })
                .collect()
        }
        FamilySpec::Upper(choices) => {
            check_len(choices, grid)?;
            choices
                .iter()
                .enumerate()
                .map(|(x, c)| match c {
                    UpperChoice::Interval => ElementSet::range_inclusive(x, k),
                    UpperChoice::SelfAndTop => ElementSet::from_iter([x, k]),
                    UpperChoice::Top => ElementSet::singleton(k),
                    UpperChoice::Point => ElementSet::singleton(x),
                })
                .collect()
        }
        FamilySpec::Split { a, b } => {
            grid.check(*a)?;
            grid.check(*b)?;
            if a.is_empty() {
                return Err(GridError::EmptySet("A"));
            }
            if b.is_empty() {
                return Err(GridError::EmptySet("B"));
            }
            if !a.intersection(*b).is_empty() {
                return Err(GridError::Overlap);
            }
            let all = ElementSet::full(grid.points());
            (0..=k).map(|x| if a.contains(x) { all } else { *b }).collect()
        }
        FamilySpec::Star { center, set, choices } => {
            check_len(choices, grid)?;
            grid.check(*set)?;
            if *center > k {
                return Err(GridError::OffGrid(*center));
            }
            if !set.contains(*center) {
                return Err(GridError::CenterOutsideSet(*center));
            }
            if choices[*center] != StarChoice::Whole {
                return Err(GridError::CenterNotWhole(*center));
            }
            let mut rows = Vec::with_capacity(grid.points());
            for (x, c) in choices.iter().enumerate() {
                rows.push(match *c {
                    StarChoice::Point => ElementSet::singleton(x),
                    StarChoice::Whole => *set,
                    StarChoice::Fixed(y) if y > k => return Err(GridError::OffGrid(y)),
                    StarChoice::Fixed(y) if !set.contains(y) => return Err(GridError::FixedOutsideSet(y)),
                    StarChoice::Fixed(y) => ElementSet::singleton(y),
                });
            }
            if let Some(y) = choices.iter().find_map(|c| match *c {
                StarChoice::Fixed(y) if rows[y] != ElementSet::singleton(y) => Some(y),
                _ => None,
            }) {
                return Err(GridError::FixedNotFixed(y));
            }
            rows
        }
    };
    let f = EndoRelation::from_rows(&rows).expect("grid rows stay on the grid");
    if let Some(x) = (0..=k).find(|&x| f.row(x).is_empty()) {
        return Err(GridError::NotSerial(x));
    }
    let hit = f.rows().fold(ElementSet::EMPTY, ElementSet::union);
    if let Some(uncovered) = f.carrier().difference(hit).first() {
        return Err(GridError::NotSurjective { uncovered });
    }
    if !f.properties().v_relation {
        return Err(GridError::NotVRelation);
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FigurePanel {
    pub panel: usize,
    pub relation: EndoRelation,
    pub expected: Option<GammaWitness>,
}

/// The four example V-relations with their marked Condition Γ points,
/// scaled to the grid. Needs `k` divisible by 4.
pub fn figure1_presets(k: usize) -> Result<Vec<FigurePanel>, GridError> {
    let grid = GridSpec::new(k)?;
    if !k.is_multiple_of(4) {
        return Err(GridError::NotDivisibleBy4(k));
    }
    let (quarter, half, three_quarters) = (k / 4, k / 2, 3 * k / 4);

    let identity = EndoRelation::identity(grid.points()).expect("valid grid");

    let vertical_at_zero = construct_family(
        &FamilySpec::Star {
            center: 0,
            set: ElementSet::full(grid.points()),
            choices: (0..=k)
                .map(|x| if x == 0 { StarChoice::Whole } else { StarChoice::Point })
                .collect(),
        },
        &grid,
    )?;

    let staircase = construct_family(
        &FamilySpec::Upper(
            (0..=k)
                .map(|x| match x {
                    x if x < quarter => UpperChoice::Point,
                    x if x == quarter || x == three_quarters => UpperChoice::Interval,
                    x if x < three_quarters => UpperChoice::Top,
                    _ => UpperChoice::SelfAndTop,
                })
                .collect(),
        ),
        &grid,
    )?;

    let block = construct_family(
        &FamilySpec::Star {
            center: k,
            set: ElementSet::range_inclusive(half, k),
            choices: (0..=k)
                .map(|x| match x {
                    x if x <= half => StarChoice::Point,
                    x if x < three_quarters => StarChoice::Fixed(half),
                    _ => StarChoice::Whole,
                })
                .collect(),
        },
        &grid,
    )?;

    let panels = vec![
        FigurePanel {
            panel: 1,
            relation: identity,
            expected: None,
        },
        FigurePanel {
            panel: 2,
            relation: vertical_at_zero,
            expected: Some(GammaWitness { x: 0, y: half }),
        },
        FigurePanel {
            panel: 3,
            relation: staircase,
            expected: Some(GammaWitness {
                x: quarter,
                y: three_quarters,
            }),
        },
        FigurePanel {
            panel: 4,
            relation: block,
            expected: Some(GammaWitness {
                x: k,
                y: three_quarters,
            }),
        },
    ];
    for p in &panels {
        let props = p.relation.properties();
        let ok = match p.expected {
            None => props.gamma.is_none() && props.v_relation,
            Some(w) => props.v_relation && props.gamma.is_some() && w.validates(&p.relation),
        };
        if !ok {
            return Err(GridError::PresetMismatch { panel: p.panel });
        }
    }
    Ok(panels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(k: usize) -> GridSpec {
        GridSpec::new(k).unwrap()
    }

    fn set(xs: &[usize]) -> ElementSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn reflection_on_three_points() {
        let f = construct_family(&FamilySpec::Reflection, &grid(2)).unwrap();
        assert_eq!(
            f.pairs().collect::<Vec<_>>(),
            vec![(0, 0), (0, 2), (1, 1), (2, 0), (2, 2)]
        );
        assert!(f.properties().v_relation);
        assert_eq!(f, f.inverse());
    }

    #[test]
    fn split_family_example() {
        let f = construct_family(&FamilySpec::Split { a: set(&[0]), b: set(&[2]) }, &grid(2)).unwrap();
        assert_eq!(f.row(0), set(&[0, 1, 2]));
        assert_eq!(f.row(1), set(&[2]));
        assert_eq!(f.row(2), set(&[2]));
    }

    #[test]
    fn lower_family_example() {
        use LowerChoice::*;
        let f = construct_family(&FamilySpec::Lower(vec![Point, Point, Interval]), &grid(2)).unwrap();
        assert_eq!(f.row(0), set(&[0]));
        assert_eq!(f.row(1), set(&[1]));
        assert_eq!(f.row(2), set(&[0, 1, 2]));
    }

    #[test]
    fn lower_family_needs_surjectivity() {
        use LowerChoice::*;
        let err = construct_family(&FamilySpec::Lower(vec![Point, Zero, Zero]), &grid(2)).unwrap_err();
        assert_eq!(err, GridError::NotSurjective { uncovered: 1 });
    }

    #[test]
    fn upper_family_all_top_but_top_point() {
        use UpperChoice::*;
        let err = construct_family(&FamilySpec::Upper(vec![Top, Top, Top]), &grid(2)).unwrap_err();
        assert_eq!(err, GridError::NotSurjective { uncovered: 0 });
        let f = construct_family(&FamilySpec::Upper(vec![Interval, Top, SelfAndTop]), &grid(2)).unwrap();
        assert!(f.properties().v_relation);
    }

    #[test]
    fn split_family_validation() {
        let g = grid(3);
        assert_eq!(
            construct_family(&FamilySpec::Split { a: set(&[0]), b: set(&[0, 1]) }, &g),
            Err(GridError::Overlap)
        );
        assert_eq!(
            construct_family(&FamilySpec::Split { a: ElementSet::EMPTY, b: set(&[1]) }, &g),
            Err(GridError::EmptySet("A"))
        );
        assert_eq!(
            construct_family(&FamilySpec::Split { a: set(&[0]), b: set(&[7]) }, &g),
            Err(GridError::OffGrid(7))
        );
    }

    #[test]
    fn star_family_validation() {
        use StarChoice::*;
        let g = grid(2);
        let spec = |center, s: &[usize], choices: Vec<StarChoice>| FamilySpec::Star {
            center,
            set: set(s),
            choices,
        };
        assert_eq!(
            construct_family(&spec(0, &[1, 2], vec![Whole, Point, Point]), &g),
            Err(GridError::CenterOutsideSet(0))
        );
        assert_eq!(
            construct_family(&spec(1, &[1, 2], vec![Point, Point, Point]), &g),
            Err(GridError::CenterNotWhole(1))
        );
        assert_eq!(
            construct_family(&spec(1, &[1, 2], vec![Fixed(0), Whole, Point]), &g),
            Err(GridError::FixedOutsideSet(0))
        );
        assert_eq!(
            construct_family(&spec(1, &[1, 2], vec![Fixed(1), Whole, Point]), &g),
            Err(GridError::FixedNotFixed(1))
        );
        let f = construct_family(&spec(1, &[1, 2], vec![Fixed(2), Whole, Point]), &g);
        assert_eq!(f, Err(GridError::NotSurjective { uncovered: 0 }));
        let f = construct_family(&spec(1, &[1, 2], vec![Point, Whole, Point]), &g).unwrap();
        assert!(f.properties().v_relation);
    }

    #[test]
    fn bad_grids() {
        assert_eq!(GridSpec::new(0), Err(GridError::BadK(0)));
        assert_eq!(GridSpec::new(64), Err(GridError::BadK(64)));
        assert_eq!(figure1_presets(6), Err(GridError::NotDivisibleBy4(6)));
        assert_eq!(
            construct_family(&FamilySpec::Lower(vec![LowerChoice::Point]), &grid(2)),
            Err(GridError::ChoiceCount { expected: 3, got: 1 })
        );
    }

    #[test]
    fn presets_k4() {
        let panels = figure1_presets(4).unwrap();
        assert_eq!(panels.len(), 4);
        assert_eq!(panels[0].relation.condition_gamma(), None);
        assert!(panels[1].relation.condition_gamma().is_some());
        assert_eq!(panels[1].expected, Some(GammaWitness { x: 0, y: 2 }));
        assert!(panels[1].expected.unwrap().validates(&panels[1].relation));
    }

    #[test]
    fn presets_k8_panel4() {
        let panels = figure1_presets(8).unwrap();
        let f = &panels[3].relation;
        assert_eq!(panels[3].expected, Some(GammaWitness { x: 8, y: 6 }));
        assert!(f.contains(8, 8) && f.contains(8, 6) && f.contains(6, 6));
        // f(x) = {x} below the middle, {1/2} in (1/2, 3/4), B above
        assert_eq!(f.row(2), set(&[2]));
        assert_eq!(f.row(5), set(&[4]));
        assert_eq!(f.row(7), ElementSet::range_inclusive(4, 8));
    }

    #[test]
    fn preset_staircase_shape() {
        let f = &figure1_presets(8).unwrap()[2].relation;
        assert_eq!(f.row(1), set(&[1]));
        assert_eq!(f.row(2), ElementSet::range_inclusive(2, 8));
        assert_eq!(f.row(4), set(&[8]));
        assert_eq!(f.row(6), ElementSet::range_inclusive(6, 8));
        assert_eq!(f.row(7), set(&[7, 8]));
    }

    #[test]
    fn parse_choices() {
        assert_eq!("zero-self".parse::<LowerChoice>().unwrap(), LowerChoice::ZeroAndSelf);
        assert_eq!("self-top".parse::<UpperChoice>().unwrap(), UpperChoice::SelfAndTop);
        assert_eq!("fixed:3".parse::<StarChoice>().unwrap(), StarChoice::Fixed(3));
        assert!("fixed:x".parse::<StarChoice>().is_err());
    }
}
