mod common;

use std::collections::BTreeSet;

use num_rational::BigRational;

use surfrep::attainable::{lpq, membership, saturate_window, AttainablePoint, AttainableSetDescription, Lpq};
use surfrep::homology::ClassExpression;
use surfrep::instances::{handlebody, hypercube, three_octagons};
use surfrep::pipeline::{run_attainable, BoundSource, PipelineOptions};
use surfrep::render::{render_ascii, render_svg};

fn expr(entries: &[(&str, i64)]) -> ClassExpression {
    entries.iter().map(|(l, n)| (l.to_string(), *n)).collect()
}

fn descriptions() -> Vec<AttainableSetDescription> {
    let opts = PipelineOptions::default();
    let (h, alpha) = handlebody();
    let (o, beta, w) = three_octagons();
    let cube = hypercube(4);
    vec![
        run_attainable(&h, &alpha.coefficients, &BoundSource::MaxDegree(5), &opts).unwrap().description,
        run_attainable(&h, &expr(&[("X", 1)]), &BoundSource::MaxDegree(5), &opts).unwrap().description,
        run_attainable(&h, &expr(&[]), &BoundSource::MaxDegree(5), &opts).unwrap().description,
        run_attainable(&o, &beta.coefficients, &BoundSource::Weights(w), &opts).unwrap().description,
        run_attainable(&cube, &expr(&[("s1_2", 1), ("s3_4", 1)]), &BoundSource::MaxDegree(4), &opts)
            .unwrap()
            .description,
    ]
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn closed_form_equals_move_closure() {
    for d in descriptions() {
        for (chi_max, g_max) in [(0, 0), (4, 2), (13, 7), (40, 40)] {
            let window: BTreeSet<AttainablePoint> = saturate_window(&d, chi_max, g_max).into_iter().collect();
            assert_eq!(window, common::move_closure(&d, chi_max, g_max), "{d:?} {chi_max}x{g_max}");
        }
        assert!(!membership(&d, AttainablePoint::new(d.chi_minus + 1, d.genus + 5)));
    }
}

#[test]
fn minima_respect_bounds() {
    for d in descriptions().into_iter().filter(|d| !d.sphere_case) {
        for m in &d.minima {
            assert!(m.genus >= d.g_c);
            assert!(d.chi_minus <= m.chi_minus && m.chi_minus <= 2 * m.genus - 2 * d.n0);
        }
    }
}

#[test]
fn lpq_matches_direct_minimization() {
    for d in descriptions() {
        assert_eq!(lpq(&d, &q(1), &q(0)), Lpq::Finite(q(d.chi_minus)));
        assert_eq!(lpq(&d, &q(0), &q(1)), Lpq::Finite(q(d.genus)));
        assert_eq!(lpq(&d, &q(3), &q(-1)), Lpq::Infinite);
        assert_eq!(lpq(&d, &q(-2), &q(3)), Lpq::Infinite);
        let window = saturate_window(&d, 80, 40);
        for (p, qq) in [(-1, 2), (-1, 3), (-2, 7), (1, 1), (0, 2), (3, 1)] {
            let direct = window.iter().map(|m| p * m.chi_minus + qq * m.genus).min().unwrap();
            assert_eq!(lpq(&d, &q(p), &q(qq)), Lpq::Finite(q(direct)), "{p},{qq} {d:?}");
            if p < 0 && !d.sphere_case {
                assert_eq!(direct, (2 * p + qq) * d.g_c - 2 * p * d.n0);
            }
        }
    }
}

#[test]
fn renderings_show_the_window() {
    for d in descriptions() {
        let members = saturate_window(&d, 8, 6);
        let svg = render_svg(&d, 8, 6);
        let doc = roxmltree::Document::parse(&svg).expect("well-formed svg");
        let crosses = doc
            .descendants()
            .filter(|n| n.attribute("class") == Some("cross"))
            .count();
        assert_eq!(crosses, members.len());
        assert_eq!(svg, render_svg(&d, 8, 6));
        let grid = render_ascii(&d, 8, 6);
        let marked: usize = grid.lines().skip(1).take(7).map(|l| l.matches('x').count()).sum();
        assert_eq!(marked, members.len());
    }
}
