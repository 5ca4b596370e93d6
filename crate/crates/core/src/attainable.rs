//! From enumerated representatives to the whole attainable set.
//!
//! Attainable sets are closed under adding a handle `(χ+2, g+1)`, adding a
//! torus `(χ, g+1)`, and tubing two non-spherical components together
//! `(χ+2, g)` as long as at least `n₀` of them remain. A finite list of
//! minima plus `n₀` therefore describes the set exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::covers::RepPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttainablePoint {
    pub chi_minus: i64,
    pub genus: i64,
}

impl AttainablePoint {
    pub fn new(chi_minus: i64, genus: i64) -> Self {
        AttainablePoint { chi_minus, genus }
    }

    pub fn dominates(&self, other: &AttainablePoint) -> bool {
        self.chi_minus >= other.chi_minus && self.genus >= other.genus
    }
}

impl From<RepPoint> for AttainablePoint {
    fn from(p: RepPoint) -> Self {
        AttainablePoint::new(p.chi_minus, p.genus)
    }
}

impl fmt::Display for AttainablePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.chi_minus, self.genus)
    }
}

impl Serialize for AttainablePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.chi_minus)?;
        t.serialize_element(&self.genus)?;
        t.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttainableSetDescription {
    pub minima: Vec<AttainablePoint>,
    pub n0: i64,
    pub chi_minus: i64,
    pub genus: i64,
    pub g_c: i64,
    pub chi_c: i64,
    pub sphere_case: bool,
    pub bound_used: u64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttainableError {
    #[error("no representative found within total degree {bound}")]
    EmptyEnumeration { bound: u64 },
}

/// Points of `points` not dominated by another point, in increasing χ⁻.
pub fn product_minima(points: impl IntoIterator<Item = AttainablePoint>) -> Vec<AttainablePoint> {
    let all: BTreeSet<AttainablePoint> = points.into_iter().collect();
    let mut out: Vec<AttainablePoint> = Vec::new();
    // sorted by (χ, g): a point is minimal iff its genus beats every earlier one
    for p in all {
        if out.last().is_none_or(|m| p.genus < m.genus) {
            out.push(p);
        }
    }
    out
}

/// Attainable set of the zero class: the empty surface and every
/// null-homologous closed surface.
pub fn sphere_case_description(bound_used: u64) -> AttainableSetDescription {
    AttainableSetDescription {
        minima: vec![AttainablePoint::new(0, 0)],
        n0: 0,
        chi_minus: 0,
        genus: 0,
        g_c: 0,
        chi_c: 0,
        sphere_case: true,
        bound_used,
        certified: true,
    }
}

pub fn attainable_description(
    points: &BTreeSet<RepPoint>,
    alpha_is_zero: bool,
    bound_used: u64,
    certified: bool,
) -> Result<AttainableSetDescription, AttainableError> {
    if alpha_is_zero {
        return Ok(sphere_case_description(bound_used));
    }
    let n0 = points
        .iter()
        .map(|p| p.n0)
        .min()
        .ok_or(AttainableError::EmptyEnumeration { bound: bound_used })?;
    let minima = product_minima(points.iter().map(|&p| p.into()));
    let g_c = points
        .iter()
        .filter(|p| p.n0 == n0)
        .map(|p| p.genus)
        .min()
        .expect("n0 is attained");
    Ok(AttainableSetDescription {
        chi_minus: minima.iter().map(|m| m.chi_minus).min().expect("nonempty"),
        genus: minima.iter().map(|m| m.genus).min().expect("nonempty"),
        minima,
        n0,
        g_c,
        chi_c: 2 * g_c - 2 * n0,
        sphere_case: false,
        bound_used,
        certified,
    })
}

pub fn membership(d: &AttainableSetDescription, p: AttainablePoint) -> bool {
    let (chi, g) = (p.chi_minus, p.genus);
    if chi % 2 != 0 || chi < 0 || g < 0 {
        return false;
    }
    if d.sphere_case {
        return (chi, g) == (0, 0) || chi <= 2 * g - 2;
    }
    chi <= 2 * g - 2 * d.n0 && d.minima.iter().any(|m| p.dominates(m))
}

/// Members with `χ⁻ ≤ chi_max` and `g ≤ g_max`, sorted.
pub fn saturate_window(d: &AttainableSetDescription, chi_max: i64, g_max: i64) -> Vec<AttainablePoint> {
    let mut out = Vec::new();
    for g in 0..=g_max {
        for chi in (0..=chi_max).step_by(2) {
            let p = AttainablePoint::new(chi, g);
            if membership(d, p) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

impl<'de> Deserialize<'de> for AttainablePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (chi_minus, genus) = <(i64, i64)>::deserialize(d)?;
        Ok(AttainablePoint { chi_minus, genus })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lpq {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for Lpq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lpq::Finite(v) => write!(f, "{v}"),
            Lpq::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Lpq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `min { p·χ⁻ + q·g }` over the attainable set; finite exactly on the
/// cone `q ≥ 0, 2p + q ≥ 0`. For `p < 0` the minimum is taken at the
/// bottom of the ceiling ray, `(2p+q)·g_c − 2p·n₀`.
pub fn lpq(d: &AttainableSetDescription, p: &BigRational, q: &BigRational) -> Lpq {
    let two = int(2);
    if q.is_negative() || (&two * p + q).is_negative() {
        return Lpq::Infinite;
    }
    let at_minima = d
        .minima
        .iter()
        .map(|m| p * int(m.chi_minus) + q * int(m.genus))
        .min()
        .expect("descriptions have minima");
    if !p.is_negative() {
        return Lpq::Finite(at_minima);
    }
    let ray = |g: i64, n0: i64| (&two * p + q) * int(g) - &two * p * int(n0);
    if d.sphere_case {
        // the empty surface, or the ceiling ray starting at the torus
        let torus = ray(1, 1);
        return Lpq::Finite(if torus < BigRational::zero() { torus } else { BigRational::zero() });
    }
    Lpq::Finite(ray(d.g_c, d.n0))
}
