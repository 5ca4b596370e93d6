//! Exhaustive enumeration of cellwise coverings without folds representing
//! a class, by total degree.
//!
//! For each signed degree split and each choice of atlas entries, perfect
//! matchings are built smallest-unmatched-slot first. Vertices and
//! components are tracked by union-find with rollback, so leaves cost one
//! pass over the components. A per-one-cell counting check discards
//! branches in which some base occurrence has more open lifts than the
//! opposite direction can absorb from other occurrences.
//!
//! With pruning on, interchangeable units (pieces' connected components
//! with the same cell, orientation and monodromy up to relabelling) are
//! opened in order: a slot may be matched into an untouched unit only if
//! no earlier twin of that unit is untouched. This keeps one matching per
//! isomorphism class of such relabellings and so preserves the set of
//! emitted points, but not the witness counts.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::complex::{ComplexSpec, Label, Sign};
use crate::covers::assembly::{from_partner, Layout};
use crate::covers::atlas::{cell_cover_atlas, Action, DEFAULT_DEGREE_CAP};
use crate::covers::{CoverError, CoverPiece, RepPoint, SurfaceAssembly};
use crate::homology::HomologyClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub prune: bool,
    pub threads: usize,
    pub degree_cap: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            prune: true,
            threads: 1,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRecord {
    pub witnesses: u64,
    /// The first assembly found, in search order.
    pub witness: SurfaceAssembly,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub points: BTreeMap<RepPoint, PointRecord>,
    pub total_degree_bound: u64,
    pub configurations: u64,
}

impl Enumeration {
    pub fn witnesses(&self) -> u64 {
        self.points.values().map(|r| r.witnesses).sum()
    }

    pub fn point_set(&self) -> BTreeSet<RepPoint> {
        self.points.keys().copied().collect()
    }

    /// Appends `other`, keeping the earlier witness of shared points.
    pub fn merge(&mut self, other: Enumeration) {
        for (p, r) in other.points {
            match self.points.get_mut(&p) {
                Some(mine) => mine.witnesses += r.witnesses,
                None => {
                    self.points.insert(p, r);
                }
            }
        }
        self.total_degree_bound = self.total_degree_bound.max(other.total_degree_bound);
        self.configurations += other.configurations;
    }
}

impl serde::Serialize for Enumeration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let points: Vec<[i64; 3]> = self.points.keys().map(|p| [p.chi_minus, p.genus, p.n0]).collect();
        let mut st = s.serialize_struct("Enumeration", 3)?;
        st.serialize_field("points", &points)?;
        st.serialize_field("witnesses", &self.witnesses())?;
        st.serialize_field("total_degree_bound", &self.total_degree_bound)?;
        st.end()
    }
}

/// Signed degree splits `(cell, k⁺, k⁻)` with `k⁺ − k⁻ = n(x)` over all
/// orientable cells and `Σ (k⁺ + k⁻) = total`, in lexicographic order.
pub fn splits(c: &ComplexSpec, alpha: &HomologyClass, total: u64) -> Vec<Vec<(Label, u64, u64)>> {
    let cells: Vec<(Label, i64)> = c
        .orientable_cells()
        .into_iter()
        .map(|l| (l.clone(), alpha.coefficient(l)))
        .collect();
    let base = alpha.l1_norm();
    if total < base || !(total - base).is_multiple_of(2) {
        return vec![];
    }
    let extra = (total - base) / 2;
    let mut out = Vec::new();
    let mut m = vec![0u64; cells.len()];
    compositions(extra, 0, &mut m, &mut |m| {
        out.push(
            cells
                .iter()
                .zip(m)
                .map(|((l, n), &k)| (l.clone(), k + (*n).max(0) as u64, k + (-*n).max(0) as u64))
                .collect(),
        )
    });
    out
}

fn compositions(left: u64, i: usize, m: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if i == m.len() {
        if left == 0 {
            f(m);
        }
        return;
    }
    if i + 1 == m.len() {
        m[i] = left;
        f(m);
        m[i] = 0;
        return;
    }
    for k in 0..=left {
        m[i] = k;
        compositions(left - k, i + 1, m, f);
    }
    m[i] = 0;
}

/// All piece lists for the splits at one total degree.
pub fn configurations(
    c: &ComplexSpec,
    alpha: &HomologyClass,
    total: u64,
    cap: usize,
) -> Result<Vec<Vec<CoverPiece>>, CoverError> {
    let mut out = Vec::new();
    let mut atlas_cache: BTreeMap<(Label, u64), Vec<Action>> = BTreeMap::new();
    for split in splits(c, alpha, total) {
        let mut choices: Vec<Vec<CoverPiece>> = Vec::new();
        for (cell, kp, km) in &split {
            let t = c.two_cell(cell).expect("orientable cell").cell_type;
            for (k, o) in [(*kp, Sign::Pos), (*km, Sign::Neg)] {
                if k == 0 {
                    continue;
                }
                let key = (cell.clone(), k);
                if !atlas_cache.contains_key(&key) {
                    atlas_cache.insert(key.clone(), cell_cover_atlas(t, k as usize, cap)?);
                }
                choices.push(
                    atlas_cache[&key]
                        .iter()
                        .map(|a| CoverPiece {
                            cell: cell.clone(),
                            degree: k as usize,
                            orientation: o,
                            monodromy: a.clone(),
                        })
                        .collect(),
                );
            }
        }
        let mut current = Vec::new();
        product(&choices, &mut current, &mut out);
    }
    Ok(out)
}

fn product(choices: &[Vec<CoverPiece>], current: &mut Vec<CoverPiece>, out: &mut Vec<Vec<CoverPiece>>) {
    match choices.split_first() {
        None => out.push(current.clone()),
        Some((head, rest)) => {
            for p in head {
                current.push(p.clone());
                product(rest, current, out);
                current.pop();
            }
        }
    }
}

const NONE: u32 = u32::MAX;

struct RollbackUf {
    parent: Vec<u32>,
    size: Vec<u32>,
    log: Vec<(u32, u32)>,
}

impl RollbackUf {
    fn new(n: usize) -> Self {
        RollbackUf {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            log: Vec::new(),
        }
    }

    fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    /// Joins two classes; returns `(root, absorbed)` if they differed.
    fn union(&mut self, a: u32, b: u32) -> Option<(u32, u32)> {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return None;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        self.log.push((b, a));
        Some((a, b))
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (b, a) = self.log.pop().unwrap();
            self.parent[b as usize] = b;
            self.size[a as usize] -= self.size[b as usize];
        }
    }
}

/// Immutable search data for one configuration.
struct Problem<'a> {
    lay: &'a Layout,
    candidates: Vec<Vec<u32>>,
    earlier_twins: Vec<Vec<u32>>,
    bases_of: Vec<Vec<u32>>,
    prune: bool,
}

struct State {
    partner: Vec<u32>,
    touched: Vec<u32>,
    open_positive: Vec<i32>,
    open_base: Vec<i32>,
    corners: RollbackUf,
    units: RollbackUf,
    /// Running Euler characteristic at each unit root.
    chi: Vec<i64>,
    chi_log: Vec<(u32, i64)>,
    found: BTreeMap<RepPoint, (u64, Vec<u32>)>,
}

impl<'a> Problem<'a> {
    fn new(lay: &'a Layout, prune: bool) -> Problem<'a> {
        let n = lay.slots.len();
        let mut by_cell: Vec<Vec<u32>> = vec![Vec::new(); lay.one_cells];
        for (i, s) in lay.slots.iter().enumerate() {
            by_cell[s.one_cell as usize].push(i as u32);
        }
        let candidates = (0..n)
            .map(|i| {
                let s = &lay.slots[i];
                by_cell[s.one_cell as usize]
                    .iter()
                    .copied()
                    .filter(|&j| {
                        let t = &lay.slots[j as usize];
                        t.positive != s.positive && t.base != s.base
                    })
                    .collect()
            })
            .collect();
        let earlier_twins = (0..lay.units.len())
            .map(|u| {
                (0..u)
                    .filter(|&v| lay.units[v].signature == lay.units[u].signature)
                    .map(|v| v as u32)
                    .collect()
            })
            .collect();
        let mut bases_of: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); lay.one_cells];
        for s in &lay.slots {
            bases_of[s.one_cell as usize].insert(s.base);
        }
        Problem {
            lay,
            candidates,
            earlier_twins,
            bases_of: bases_of.into_iter().map(|b| b.into_iter().collect()).collect(),
            prune,
        }
    }

    fn initial_state(&self) -> Option<State> {
        let lay = self.lay;
        let mut open_positive = vec![0i32; lay.one_cells];
        let mut open_negative = vec![0i32; lay.one_cells];
        let mut open_base = vec![0i32; lay.bases];
        for s in &lay.slots {
            if s.positive {
                open_positive[s.one_cell as usize] += 1;
            } else {
                open_negative[s.one_cell as usize] += 1;
            }
            open_base[s.base as usize] += 1;
        }
        if open_positive != open_negative {
            return None;
        }
        let st = State {
            partner: vec![NONE; lay.slots.len()],
            touched: vec![0; lay.units.len()],
            open_positive,
            open_base,
            corners: RollbackUf::new(lay.corner_unit.len()),
            units: RollbackUf::new(lay.units.len()),
            chi: lay.units.iter().map(|u| u.chi + u.constant + u.corners).collect(),
            chi_log: Vec::new(),
            found: BTreeMap::new(),
        };
        (0..lay.one_cells)
            .all(|e| self.balanced(&st, e))
            .then_some(st)
    }

    fn balanced(&self, st: &State, e: usize) -> bool {
        let open = st.open_positive[e];
        self.bases_of[e].iter().all(|&b| st.open_base[b as usize] <= open)
    }

    fn adjust_chi(&self, st: &mut State, root: u32, delta: i64) {
        st.chi_log.push((root, st.chi[root as usize]));
        st.chi[root as usize] += delta;
    }

    fn join_corners(&self, st: &mut State, a: u32, b: u32) {
        if st.corners.union(a, b).is_some() {
            let root = st.units.find(self.lay.corner_unit[a as usize]);
            self.adjust_chi(st, root, -1);
        }
    }

    fn search(&self, st: &mut State, from: usize) {
        let n = self.lay.slots.len();
        let mut s = from;
        while s < n && st.partner[s] != NONE {
            s += 1;
        }
        if s == n {
            self.leaf(st);
            return;
        }
        let slot = &self.lay.slots[s];
        let us = slot.unit;
        let e = slot.one_cell as usize;
        for &t in &self.candidates[s] {
            if st.partner[t as usize] != NONE {
                continue;
            }
            let ts = &self.lay.slots[t as usize];
            let ut = ts.unit;
            if self.prune
                && ut != us
                && st.touched[ut as usize] == 0
                && self.earlier_twins[ut as usize]
                    .iter()
                    .any(|&v| v != us && st.touched[v as usize] == 0)
            {
                continue;
            }
            let marks = (st.corners.log.len(), st.units.log.len(), st.chi_log.len());
            st.partner[s] = t;
            st.partner[t as usize] = s as u32;
            st.touched[us as usize] += 1;
            st.touched[ut as usize] += 1;
            st.open_positive[e] -= 1;
            st.open_base[slot.base as usize] -= 1;
            st.open_base[ts.base as usize] -= 1;
            if let Some((root, absorbed)) = st.units.union(us, ut) {
                let extra = st.chi[absorbed as usize];
                self.adjust_chi(st, root, extra);
            }
            let root = st.units.find(us);
            self.adjust_chi(st, root, -1);
            self.join_corners(st, slot.start, ts.start);
            self.join_corners(st, slot.end, ts.end);

            if self.balanced(st, e) {
                self.search(st, s + 1);
            }

            st.corners.rollback(marks.0);
            st.units.rollback(marks.1);
            while st.chi_log.len() > marks.2 {
                let (r, v) = st.chi_log.pop().unwrap();
                st.chi[r as usize] = v;
            }
            st.open_base[ts.base as usize] += 1;
            st.open_base[slot.base as usize] += 1;
            st.open_positive[e] += 1;
            st.touched[ut as usize] -= 1;
            st.touched[us as usize] -= 1;
            st.partner[t as usize] = NONE;
            st.partner[s] = NONE;
        }
    }

    fn leaf(&self, st: &mut State) {
        let mut p = RepPoint {
            chi_minus: 0,
            genus: 0,
            n0: 0,
        };
        for u in 0..self.lay.units.len() as u32 {
            if st.units.parent[u as usize] != u {
                continue;
            }
            let chi = st.chi[u as usize];
            let g = (2 - chi) / 2;
            p.chi_minus += (-chi).max(0);
            p.genus += g;
            p.n0 += (g >= 1) as i64;
        }
        match st.found.get_mut(&p) {
            Some(entry) => entry.0 += 1,
            None => {
                st.found.insert(p, (1, st.partner.clone()));
            }
        }
    }
}

fn enumerate_configuration(
    c: &ComplexSpec,
    pieces: &[CoverPiece],
    prune: bool,
) -> Result<Enumeration, CoverError> {
    let lay = Layout::new(c, pieces)?;
    let problem = Problem::new(&lay, prune);
    let mut out = Enumeration {
        configurations: 1,
        ..Enumeration::default()
    };
    let Some(mut st) = problem.initial_state() else {
        return Ok(out);
    };
    problem.search(&mut st, 0);
    for (p, (witnesses, partner)) in st.found {
        let witness = from_partner(&lay, pieces.to_vec(), &partner)?;
        if witness.invariants() != p || !witness.is_fold_free() {
            return Err(CoverError::InvariantViolation(format!(
                "witness recomputes to {:?}, search reported {p:?}",
                witness.invariants()
            )));
        }
        out.points.insert(p, PointRecord { witnesses, witness });
    }
    Ok(out)
}

/// All fold-free coverings of total degree exactly `total`.
pub fn enumerate_level(
    c: &ComplexSpec,
    alpha: &HomologyClass,
    total: u64,
    opts: &EnumerationOptions,
) -> Result<Enumeration, CoverError> {
    let configs = configurations(c, alpha, total, opts.degree_cap)?;
    let results: Vec<Result<Enumeration, CoverError>> = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| CoverError::InvariantViolation(e.to_string()))?;
        pool.install(|| {
            configs
                .par_iter()
                .map(|p| enumerate_configuration(c, p, opts.prune))
                .collect()
        })
    } else {
        configs
            .iter()
            .map(|p| enumerate_configuration(c, p, opts.prune))
            .collect()
    };
    let mut out = Enumeration {
        total_degree_bound: total,
        ..Enumeration::default()
    };
    for r in results {
        out.merge(r?);
    }
    Ok(out)
}

/// All fold-free coverings of total degree at most `max_total_degree`.
pub fn enumerate_covers(
    c: &ComplexSpec,
    alpha: &HomologyClass,
    max_total_degree: u64,
    opts: &EnumerationOptions,
) -> Result<Enumeration, CoverError> {
    let required = alpha.l1_norm();
    if max_total_degree < required {
        return Err(CoverError::BoundTooSmall {
            bound: max_total_degree,
            required,
        });
    }
    let mut out = Enumeration::default();
    for total in (required..=max_total_degree).step_by(2) {
        out.merge(enumerate_level(c, alpha, total, opts)?);
    }
    out.total_degree_bound = max_total_degree;
    Ok(out)
}
