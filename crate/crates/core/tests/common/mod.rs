//! Test-only oracles, independent of the library's algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use surfrep::attainable::{AttainablePoint, AttainableSetDescription};
use surfrep::complex::{BoundaryAttachment, CellType, Letter, RawComplex};
use surfrep::weights::LinkDigraph;

/// Least weight over all dart-simple cycles, and whether any is negative.
/// Weights are scaled to a common denominator so the search runs on `i64`.
pub fn brute_force_cycles(g: &LinkDigraph) -> (Option<BigRational>, bool) {
    let n = g.darts.len();
    let denom = g
        .darts
        .iter()
        .fold(BigInt::one(), |acc, d| acc.lcm(d.weight.denom()));
    let w: Vec<i64> = g
        .darts
        .iter()
        .map(|d| (d.weight.numer() * (&denom / d.weight.denom())).to_i64().expect("small weights"))
        .collect();
    struct Search<'a> {
        succ: &'a [Vec<usize>],
        w: &'a [i64],
        on_path: Vec<bool>,
        best: Option<i64>,
    }
    impl Search<'_> {
        fn dfs(&mut self, start: usize, at: usize, weight: i64) {
            for &next in &self.succ[at] {
                if next == start {
                    let total = weight + self.w[start];
                    if self.best.is_none_or(|b| total < b) {
                        self.best = Some(total);
                    }
                } else if next > start && !self.on_path[next] {
                    self.on_path[next] = true;
                    self.dfs(start, next, weight + self.w[next]);
                    self.on_path[next] = false;
                }
            }
        }
    }
    let mut s = Search {
        succ: &g.successors,
        w: &w,
        on_path: vec![false; n],
        best: None,
    };
    for start in 0..n {
        s.on_path[start] = true;
        s.dfs(start, start, 0);
        s.on_path[start] = false;
    }
    let best = s.best.map(|b| BigRational::new(b.into(), denom.clone()));
    let negative = best.as_ref().is_some_and(|b| b.is_negative());
    (best, negative)
}

/// Rank of an integer skew-symmetric matrix over the rationals, halved:
/// the least number of elementary wedges summing to the form.
pub fn wedge_rank(m: &[Vec<i64>]) -> usize {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..n {
            if r != rank && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[rank][col];
                for c in 0..n {
                    let v = &f * &a[rank][c];
                    a[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    assert_eq!(rank % 2, 0, "skew forms have even rank");
    rank / 2
}

/// Closure of the minima under `(χ, g+1)`, `(χ+2, g+1)` and, below the
/// ceiling `2g − 2n₀`, `(χ+2, g)`, clipped to the window.
pub fn move_closure(d: &AttainableSetDescription, chi_max: i64, g_max: i64) -> BTreeSet<AttainablePoint> {
    let (seeds, n0): (Vec<AttainablePoint>, i64) = if d.sphere_case {
        (vec![AttainablePoint::new(0, 1)], 1)
    } else {
        (d.minima.clone(), d.n0)
    };
    let mut seen = BTreeSet::new();
    if d.sphere_case && chi_max >= 0 && g_max >= 0 {
        seen.insert(AttainablePoint::new(0, 0));
    }
    let mut queue: VecDeque<AttainablePoint> = seeds.into_iter().collect();
    while let Some(p) = queue.pop_front() {
        if p.chi_minus > chi_max || p.genus > g_max || !seen.insert(p) {
            continue;
        }
        queue.push_back(AttainablePoint::new(p.chi_minus, p.genus + 1));
        queue.push_back(AttainablePoint::new(p.chi_minus + 2, p.genus + 1));
        if p.chi_minus + 2 <= 2 * p.genus - 2 * n0 {
            queue.push_back(AttainablePoint::new(p.chi_minus + 2, p.genus));
        }
    }
    seen
}

/// A random valid complex: closed words come from random edge walks
/// closed up by their own reverse when they do not return.
pub fn random_complex(rng: &mut StdRng) -> RawComplex {
    let nv = rng.gen_range(1..=3);
    let zero: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let ne = rng.gen_range(1..=4);
    let one: Vec<(String, String, String)> = (0..ne)
        .map(|i| {
            (
                format!("e{i}"),
                zero[rng.gen_range(0..nv)].clone(),
                zero[rng.gen_range(0..nv)].clone(),
            )
        })
        .collect();
    let nf = rng.gen_range(1..=3);
    let mut two = Vec::new();
    for i in 0..nf {
        let b = rng.gen_range(1..=2u32);
        let t = CellType {
            genus: rng.gen_range(0..=2),
            boundary_components: b,
            orientable: rng.gen_bool(0.7),
        };
        let mut boundary = Vec::new();
        for _ in 0..b {
            if rng.gen_bool(0.15) {
                boundary.push(BoundaryAttachment::ConstantCircle(zero[rng.gen_range(0..nv)].clone()));
                continue;
            }
            let start = rng.gen_range(0..nv);
            let mut at = zero[start].clone();
            let mut word: Vec<Letter> = Vec::new();
            for _ in 0..rng.gen_range(1..=5) {
                let options: Vec<Letter> = one
                    .iter()
                    .flat_map(|(l, s, e)| {
                        let mut v = Vec::new();
                        if *s == at {
                            v.push(Letter::pos(l.clone()));
                        }
                        if *e == at {
                            v.push(Letter::neg(l.clone()));
                        }
                        v
                    })
                    .collect();
                if options.is_empty() {
                    break;
                }
                let l = options[rng.gen_range(0..options.len())].clone();
                let (_, s, e) = one.iter().find(|(x, _, _)| *x == l.one_cell).unwrap();
                at = if l.sign == surfrep::complex::Sign::Pos { e.clone() } else { s.clone() };
                word.push(l);
            }
            if word.is_empty() {
                boundary.push(BoundaryAttachment::ConstantCircle(zero[start].clone()));
                continue;
            }
            if at != zero[start] {
                let back: Vec<Letter> = word.iter().rev().map(Letter::inverse).collect();
                word.extend(back);
            }
            boundary.push(BoundaryAttachment::Word(word));
        }
        two.push((format!("F{i}"), t, boundary));
    }
    RawComplex {
        zero_cells: zero,
        one_cells: one,
        two_cells: two,
    }
}
