//! Weight functions on corners and the degree bound they give.
//!
//! The link of a zero-cell `v` has the one-cell ends at `v` as nodes and
//! one edge per corner at `v`, joining its two darts. A link sequence
//! walks corners end to end, never turning straight back along the same
//! corner, and closes up. A dart is a corner with a direction; its weight
//! is the corner's weight.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::complex::{
    corner_table, occurrence_table, ComplexSpec, Corner, CornerAddress, Label, OneCellCorner, Sign,
};
use crate::covers::{assemble_surface, CoverError, CoverPiece, LiftedOccurrence, SurfaceAssembly};
use crate::homology::HomologyClass;

pub type WeightFunction = BTreeMap<CornerAddress, BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("corner `{0}` has no weight")]
    IncompleteWeights(CornerAddress),
    #[error("weight function is not valid: {0}")]
    InvalidWeights(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Word letters and constant circles of a two-cell.
pub fn seg_circ(c: &ComplexSpec, x: &str) -> (usize, usize) {
    let cell = c.two_cell(x).expect("known cell");
    let seg = cell.boundary.iter().map(|a| a.letters().len()).sum();
    let circ = cell
        .boundary
        .iter()
        .filter(|a| matches!(a, crate::complex::BoundaryAttachment::ConstantCircle(_)))
        .count();
    (seg, circ)
}

/// χ(type) − Seg/2 + Circ + Σ w over the cell's corners.
pub fn weighted_euler(c: &ComplexSpec, w: &WeightFunction, x: &str) -> BigRational {
    let cell = c.two_cell(x).expect("known cell");
    let (seg, circ) = seg_circ(c, x);
    let mut total = rational(cell.cell_type.euler_characteristic()) - BigRational::new(BigInt::from(seg), BigInt::from(2))
        + rational(circ as i64);
    for (k, attachment) in cell.boundary.iter().enumerate() {
        for p in 0..attachment.letters().len() {
            if let Some(v) = w.get(&CornerAddress::new(x, k, p)) {
                total += v;
            }
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dart {
    pub corner: CornerAddress,
    pub sign: Sign,
    pub tail: OneCellCorner,
    pub head: OneCellCorner,
    pub weight: BigRational,
}

/// Darts at one zero-cell with the allowed transitions between them.
/// Darts `2i` and `2i + 1` are the two directions of corner `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDigraph {
    pub vertex: Label,
    pub darts: Vec<Dart>,
    pub successors: Vec<Vec<usize>>,
}

pub fn link_digraph(c: &ComplexSpec, w: &WeightFunction, v: &str) -> LinkDigraph {
    let corners: Vec<Corner> = corner_table(c)
        .into_iter()
        .filter(|k| k.at_zero_cell == v)
        .collect();
    let mut darts = Vec::with_capacity(2 * corners.len());
    for k in &corners {
        let weight = w.get(&k.address()).cloned().unwrap_or_else(BigRational::zero);
        darts.push(Dart {
            corner: k.address(),
            sign: Sign::Pos,
            tail: k.left_dart.clone(),
            head: k.right_dart.clone(),
            weight: weight.clone(),
        });
        darts.push(Dart {
            corner: k.address(),
            sign: Sign::Neg,
            tail: k.right_dart.clone(),
            head: k.left_dart.clone(),
            weight,
        });
    }
    let successors = (0..darts.len())
        .map(|i| {
            (0..darts.len())
                .filter(|&j| darts[i].head == darts[j].tail && j != (i ^ 1))
                .collect()
        })
        .collect();
    LinkDigraph {
        vertex: v.to_string(),
        darts,
        successors,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkCycle {
    /// Least weight of a closed link sequence, with one such sequence.
    Min {
        weight: BigRational,
        cycle: Vec<(CornerAddress, Sign)>,
    },
    /// Some closed link sequence has negative weight.
    Negative { cycle: Vec<(CornerAddress, Sign)> },
    /// The vertex has no closed link sequence.
    None,
}

impl LinkCycle {
    pub fn at_least_one(&self) -> bool {
        match self {
            LinkCycle::Min { weight, .. } => *weight >= rational(1),
            LinkCycle::Negative { .. } => false,
            LinkCycle::None => true,
        }
    }

    pub fn weight(&self) -> Option<&BigRational> {
        match self {
            LinkCycle::Min { weight, .. } => Some(weight),
            _ => None,
        }
    }
}

impl Serialize for LinkCycle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LinkCycle::Min { weight, .. } => s.collect_str(weight),
            LinkCycle::Negative { .. } => s.serialize_str("negative"),
            LinkCycle::None => s.serialize_str("none"),
        }
    }
}

fn as_sequence(g: &LinkDigraph, path: &[usize]) -> Vec<(CornerAddress, Sign)> {
    path.iter()
        .map(|&d| (g.darts[d].corner.clone(), g.darts[d].sign))
        .collect()
}

/// Least-weight closed walk in the dart graph. Every closed walk splits
/// into simple cycles, so without negative cycles this is the least
/// simple cycle. Bellman–Ford from each dart, with a relaxation in round
/// `n` signalling a negative cycle.
pub fn min_link_cycle_in(g: &LinkDigraph) -> LinkCycle {
    let n = g.darts.len();
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    for source in 0..n {
        // dist[d]: least weight of a walk source -> d, counting darts after source
        let mut dist: Vec<Option<BigRational>> = vec![None; n];
        let mut pred = vec![usize::MAX; n];
        dist[source] = Some(BigRational::zero());
        for round in 0..=n {
            let mut changed = None;
            for u in 0..n {
                let Some(du) = dist[u].clone() else { continue };
                for &v in &g.successors[u] {
                    if v == source {
                        continue;
                    }
                    let cand = &du + &g.darts[v].weight;
                    if dist[v].as_ref().is_none_or(|dv| cand < *dv) {
                        dist[v] = Some(cand);
                        pred[v] = u;
                        changed = Some(v);
                    }
                }
            }
            match changed {
                None => break,
                Some(v) if round == n => {
                    return LinkCycle::Negative {
                        cycle: as_sequence(g, &predecessor_cycle(&pred, v, n)),
                    };
                }
                _ => {}
            }
        }
        for u in 0..n {
            if !g.successors[u].contains(&source) {
                continue;
            }
            let Some(du) = &dist[u] else { continue };
            let total = du + &g.darts[source].weight;
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                let mut path = vec![u];
                while *path.last().unwrap() != source {
                    path.push(pred[*path.last().unwrap()]);
                }
                path.reverse();
                if total.is_negative() {
                    return LinkCycle::Negative {
                        cycle: as_sequence(g, &path),
                    };
                }
                best = Some((total, path));
            }
        }
    }
    match best {
        Some((weight, path)) => LinkCycle::Min {
            weight,
            cycle: as_sequence(g, &path),
        },
        None => LinkCycle::None,
    }
}

fn predecessor_cycle(pred: &[usize], start: usize, n: usize) -> Vec<usize> {
    let mut v = start;
    for _ in 0..n {
        if pred[v] == usize::MAX {
            return vec![];
        }
        v = pred[v];
    }
    let mut cycle = vec![v];
    let mut u = pred[v];
    while u != v && u != usize::MAX && cycle.len() <= n {
        cycle.push(u);
        u = pred[u];
    }
    cycle.reverse();
    cycle
}

pub fn min_link_cycle(c: &ComplexSpec, w: &WeightFunction, v: &str) -> LinkCycle {
    min_link_cycle_in(&link_digraph(c, w, v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFailure {
    NonNegativeEuler {
        cell: Label,
        #[serde(serialize_with = "as_string")]
        chi_w: BigRational,
    },
    ShortLinkCycle {
        vertex: Label,
        #[serde(serialize_with = "as_string")]
        weight: BigRational,
        #[serde(serialize_with = "cycle_strings")]
        cycle: Vec<(CornerAddress, Sign)>,
    },
    NegativeLinkCycle {
        vertex: Label,
        #[serde(serialize_with = "cycle_strings")]
        cycle: Vec<(CornerAddress, Sign)>,
    },
}

fn as_string<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn cycle_strings<S: Serializer>(v: &[(CornerAddress, Sign)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(a, o)| format!("{a}{o}")))
}

fn rational_map<S: Serializer>(m: &BTreeMap<Label, BigRational>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, v.to_string())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub valid: bool,
    #[serde(serialize_with = "rational_map")]
    pub chi_w: BTreeMap<Label, BigRational>,
    pub min_link_cycle: BTreeMap<Label, LinkCycle>,
    pub failures: Vec<WeightFailure>,
}

impl WeightReport {
    pub fn max_chi_w(&self) -> Option<&BigRational> {
        self.chi_w.values().max()
    }
}

pub fn validate_weight_function(c: &ComplexSpec, w: &WeightFunction) -> Result<WeightReport, WeightError> {
    for k in corner_table(c) {
        if !w.contains_key(&k.address()) {
            return Err(WeightError::IncompleteWeights(k.address()));
        }
    }
    let mut failures = Vec::new();
    let mut chi_w = BTreeMap::new();
    for x in c.two_cells().keys() {
        let v = weighted_euler(c, w, x);
        if !v.is_negative() {
            failures.push(WeightFailure::NonNegativeEuler {
                cell: x.clone(),
                chi_w: v.clone(),
            });
        }
        chi_w.insert(x.clone(), v);
    }
    let mut cycles = BTreeMap::new();
    for v in c.zero_cells() {
        let m = min_link_cycle(c, w, v);
        match &m {
            LinkCycle::Negative { cycle } => failures.push(WeightFailure::NegativeLinkCycle {
                vertex: v.clone(),
                cycle: cycle.clone(),
            }),
            LinkCycle::Min { weight, cycle } if *weight < rational(1) => {
                failures.push(WeightFailure::ShortLinkCycle {
                    vertex: v.clone(),
                    weight: weight.clone(),
                    cycle: cycle.clone(),
                })
            }
            _ => {}
        }
        cycles.insert(v.clone(), m);
    }
    Ok(WeightReport {
        valid: failures.is_empty(),
        chi_w,
        min_link_cycle: cycles,
        failures,
    })
}

/// `|n(x)|` trivial sheets per cell, oriented by the sign of `n(x)`;
/// along each one-cell the k-th positive lift (in cell, component,
/// position, sheet order) is glued to the k-th negative one.
pub fn arbitrary_representative(c: &ComplexSpec, alpha: &HomologyClass) -> Result<SurfaceAssembly, CoverError> {
    let mut pieces = Vec::new();
    for (cell, &n) in &alpha.coefficients {
        if n == 0 {
            continue;
        }
        let t = c
            .two_cell(cell)
            .ok_or_else(|| CoverError::UnknownCell(cell.clone()))?
            .cell_type;
        pieces.push(CoverPiece::trivial(cell.clone(), t, n.unsigned_abs() as usize, Sign::of(n)));
    }
    // (cell, component, position, sheet) order of occurrences
    let mut lifts: BTreeMap<(Label, usize, usize, usize), (LiftedOccurrence, Label, bool)> = BTreeMap::new();
    for (pi, p) in pieces.iter().enumerate() {
        for o in occurrence_table(c).into_iter().filter(|o| o.two_cell == p.cell) {
            for sheet in 0..p.degree {
                let addr = LiftedOccurrence {
                    piece: pi,
                    component: o.component_index,
                    sheet,
                    position: o.position,
                };
                let positive = o.sign.times(p.orientation) == Sign::Pos;
                lifts.insert(
                    (p.cell.clone(), o.component_index, o.position, sheet),
                    (addr, o.one_cell.clone(), positive),
                );
            }
        }
    }
    let mut by_edge: BTreeMap<Label, (Vec<LiftedOccurrence>, Vec<LiftedOccurrence>)> = BTreeMap::new();
    for (addr, e, positive) in lifts.into_values() {
        let entry = by_edge.entry(e).or_default();
        if positive {
            entry.0.push(addr);
        } else {
            entry.1.push(addr);
        }
    }
    let mut matching = Vec::new();
    for (e, (pos, neg)) in by_edge {
        if pos.len() != neg.len() {
            return Err(CoverError::InvariantViolation(format!(
                "one-cell `{e}` has {} positive and {} negative lifts",
                pos.len(),
                neg.len()
            )));
        }
        matching.extend(pos.into_iter().zip(neg));
    }
    assemble_surface(pieces, matching, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    /// Bound on the total covering degree of a minimizer.
    pub c: u64,
    /// Twice the genus of the arbitrary representative.
    pub b: u64,
}

/// `C = ⌊B / (−max χ_w)⌋` with `B = 2·g` of the arbitrary representative.
pub fn degree_bound(c: &ComplexSpec, w: &WeightFunction, alpha: &HomologyClass) -> Result<DegreeBound, WeightError> {
    let report = validate_weight_function(c, w)?;
    if !report.valid {
        return Err(WeightError::InvalidWeights(format!("{} failure(s)", report.failures.len())));
    }
    let s = arbitrary_representative(c, alpha)?;
    let b = 2 * s.invariants().genus as u64;
    Ok(DegreeBound {
        c: bound_from(b, report.max_chi_w()),
        b,
    })
}

/// `⌊b / (−max χ_w)⌋`; zero when there are no cells.
pub fn bound_from(b: u64, max_chi_w: Option<&BigRational>) -> u64 {
    match max_chi_w {
        None => 0,
        Some(m) => (BigRational::from_integer(BigInt::from(b)) / -m)
            .floor()
            .to_integer()
            .to_u64()
            .unwrap_or(u64::MAX),
    }
}
