//! End-to-end computation of attainable sets.
//!
//! With a valid weight function every cell of a cellwise covering has
//! negative weighted Euler characteristic, so a representative of genus
//! `g` has total degree at most `⌊2g / −max χ_w⌋`. The enumeration runs
//! level by level and stops once the level exceeds both that bound for the
//! arbitrary representative and for the best genus found so far.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::attainable::{attainable_description, AttainableError, AttainableSetDescription};
use crate::complex::{orientable_restriction, ComplexSpec};
use crate::covers::{enumerate_covers, enumerate_level, CoverError, Enumeration, EnumerationOptions};
use crate::homology::{validate_class, ClassExpression, HomologyClass, HomologyError};
use crate::weights::{bound_from, degree_bound, validate_weight_function, DegreeBound, WeightError, WeightFunction, WeightReport};

#[derive(Debug, Clone)]
pub enum BoundSource {
    Weights(WeightFunction),
    MaxDegree(u64),
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    pub enumeration: EnumerationOptions,
    /// Drop non-orientable cells first; they never carry a class.
    pub restrict_orientable: bool,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Attainable(#[from] AttainableError),
    #[error("weight function is invalid")]
    InvalidWeights(Box<WeightReport>),
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub class: HomologyClass,
    pub description: AttainableSetDescription,
    pub enumeration: Enumeration,
    pub weight_report: Option<WeightReport>,
    pub degree_bound: Option<DegreeBound>,
}

pub fn run_attainable(
    c: &ComplexSpec,
    class: &ClassExpression,
    bound: &BoundSource,
    opts: &PipelineOptions,
) -> Result<PipelineResult, PipelineError> {
    let restricted;
    let c = if opts.restrict_orientable {
        restricted = orientable_restriction(c);
        &restricted
    } else {
        c
    };
    let alpha = validate_class(c, class)?;
    match bound {
        BoundSource::MaxDegree(max) => {
            if alpha.is_zero() {
                return finish(alpha, Enumeration::default(), *max, false, None, None);
            }
            let e = enumerate_covers(c, &alpha, *max, &opts.enumeration)?;
            finish(alpha, e, *max, false, None, None)
        }
        BoundSource::Weights(w) => {
            let report = validate_weight_function(c, w)?;
            if !report.valid {
                return Err(PipelineError::InvalidWeights(Box::new(report)));
            }
            if alpha.is_zero() {
                return finish(alpha, Enumeration::default(), 0, true, Some(report), None);
            }
            let db = degree_bound(c, w, &alpha)?;
            let m = report.max_chi_w().cloned();
            let mut e = Enumeration::default();
            let mut level = alpha.l1_norm();
            let mut limit = db.c;
            while level <= limit {
                e.merge(enumerate_level(c, &alpha, level, &opts.enumeration)?);
                if let Some(g) = e.points.keys().map(|p| p.genus).min() {
                    limit = limit.min(bound_from(2 * g as u64, m.as_ref()));
                }
                level += 2;
            }
            e.total_degree_bound = limit;
            check_negative_components(&e)?;
            finish(alpha, e, limit, true, Some(report), Some(db))
        }
    }
}

fn finish(
    class: HomologyClass,
    enumeration: Enumeration,
    bound_used: u64,
    certified: bool,
    weight_report: Option<WeightReport>,
    degree_bound: Option<DegreeBound>,
) -> Result<PipelineResult, PipelineError> {
    let description = attainable_description(&enumeration.point_set(), class.is_zero(), bound_used, certified)?;
    Ok(PipelineResult {
        class,
        description,
        enumeration,
        weight_report,
        degree_bound,
    })
}

fn check_negative_components(e: &Enumeration) -> Result<(), CoverError> {
    for (p, r) in &e.points {
        if let Some(k) = r.witness.components.iter().find(|k| k.chi >= 0) {
            return Err(CoverError::InvariantViolation(format!(
                "witness for {p:?} has a component with χ = {} despite valid weights",
                k.chi
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationRow {
    pub n: u64,
    pub chi_minus: i64,
    pub genus: i64,
    #[serde(serialize_with = "as_string")]
    pub chi_ratio: BigRational,
    #[serde(serialize_with = "as_string")]
    pub genus_ratio: BigRational,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub rows: Vec<StabilizationRow>,
    /// Least `χ⁻(nα)/n` seen; the stable cone is estimated as
    /// `χ_est ≤ χ ≤ 2g`. Nothing is claimed about the limit.
    #[serde(serialize_with = "as_string")]
    pub chi_estimate: BigRational,
}

fn as_string<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Runs the pipeline for `α, 2α, …, Nα`, with `bounds[n−1]` as the degree
/// bound for `nα` (or the weight function for all of them).
pub fn stabilization_report(
    c: &ComplexSpec,
    class: &ClassExpression,
    n: u64,
    bounds: &[BoundSource],
    opts: &PipelineOptions,
) -> Result<StabilizationReport, PipelineError> {
    let mut rows = Vec::new();
    for k in 1..=n {
        let b = bounds
            .get(k as usize - 1)
            .or(bounds.last())
            .cloned()
            .unwrap_or(BoundSource::MaxDegree(0));
        let scaled: ClassExpression = class.iter().map(|(l, &v)| (l.clone(), v * k as i64)).collect();
        let r = run_attainable(c, &scaled, &b, opts)?;
        let d = r.description;
        let ratio = |v: i64| BigRational::new(BigInt::from(v), BigInt::from(k));
        rows.push(StabilizationRow {
            n: k,
            chi_minus: d.chi_minus,
            genus: d.genus,
            chi_ratio: ratio(d.chi_minus),
            genus_ratio: ratio(2 * d.genus),
            certified: d.certified,
        });
    }
    let chi_estimate = rows
        .iter()
        .map(|r| r.chi_ratio.clone())
        .min()
        .unwrap_or_else(|| BigRational::from_integer(0.into()));
    Ok(StabilizationReport { rows, chi_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attainable::AttainablePoint;
    use crate::instances::{handlebody, three_octagons};

    #[test]
    fn zero_class_is_sphere_case() {
        let (c, _) = handlebody();
        let r = run_attainable(&c, &ClassExpression::new(), &BoundSource::MaxDegree(4), &PipelineOptions::default()).unwrap();
        assert!(r.description.sphere_case);
        let s = stabilization_report(&c, &ClassExpression::new(), 2, &[BoundSource::MaxDegree(2)], &PipelineOptions::default()).unwrap();
        assert!(s.rows.iter().all(|row| row.chi_minus == 0 && row.genus == 0));
    }

    #[test]
    fn octagons_single_level() {
        let (c, a, w) = three_octagons();
        let r = run_attainable(&c, &a.coefficients, &BoundSource::Weights(w), &PipelineOptions::default()).unwrap();
        let d = r.description;
        assert!(d.certified);
        assert_eq!(d.minima, vec![AttainablePoint::new(6, 6), AttainablePoint::new(8, 5)]);
        assert_eq!(d.n0, 1);
        assert!(r.degree_bound.unwrap().c >= d.bound_used);
    }

    #[test]
    fn user_bound_too_small() {
        let (c, a) = handlebody();
        let r = run_attainable(&c, &a.coefficients, &BoundSource::MaxDegree(1), &PipelineOptions::default());
        assert!(matches!(r, Err(PipelineError::Cover(CoverError::BoundTooSmall { .. }))));
    }
}
