//! Finite-sheeted covers of a compact surface with boundary, as actions of
//! its free fundamental group on sheets, up to relabelling of sheets.
//!
//! Transitive actions are enumerated as complete coset tables in standard
//! (breadth-first) numbering, the classical low-index procedure; a table is
//! kept only if it is the least standard table over all base points, so
//! each conjugacy class appears once. Disconnected actions are multisets
//! of transitive ones.

use crate::complex::CellType;
use crate::covers::perm::{orbits, Perm};
use crate::covers::CoverError;

/// Monodromy images of the free generators, one permutation each.
pub type Action = Vec<Perm>;

pub const DEFAULT_DEGREE_CAP: usize = 6;

fn image(gens: &[Perm], inverses: &[Perm], p: usize, slot: usize) -> usize {
    if slot.is_multiple_of(2) {
        gens[slot / 2][p]
    } else {
        inverses[slot / 2][p]
    }
}

/// Relabels a transitive action by breadth-first numbering from `base`.
fn standard_from(gens: &[Perm], base: usize) -> Action {
    let k = gens.first().map_or(1, |g| g.len());
    let inverses: Vec<Perm> = gens.iter().map(|g| crate::covers::perm::inverse(g)).collect();
    let mut number = vec![usize::MAX; k];
    let mut order = vec![base];
    number[base] = 0;
    let mut head = 0;
    while head < order.len() {
        let p = order[head];
        head += 1;
        for slot in 0..2 * gens.len() {
            let q = image(gens, &inverses, p, slot);
            if number[q] == usize::MAX {
                number[q] = order.len();
                order.push(q);
            }
        }
    }
    gens.iter()
        .map(|g| order.iter().map(|&p| number[g[p]]).collect())
        .collect()
}

/// Least standard numbering of a transitive action; a complete invariant
/// of its conjugacy class.
pub fn canonical_form(gens: &[Perm]) -> Action {
    let k = gens.first().map_or(1, |g| g.len());
    (0..k)
        .map(|b| standard_from(gens, b))
        .min()
        .expect("nonempty")
}

/// Transitive actions of the free group of rank `rank` on `degree` points,
/// one per conjugacy class, in increasing canonical order.
pub fn transitive_actions(rank: usize, degree: usize) -> Vec<Action> {
    if degree == 0 {
        return vec![];
    }
    if rank == 0 {
        return if degree == 1 { vec![vec![]] } else { vec![] };
    }
    let width = 2 * rank;
    let mut table = vec![usize::MAX; degree * width];
    let mut out = Vec::new();
    fill(&mut table, width, degree, 1, 0, &mut out);
    out.sort();
    out
}

fn fill(table: &mut [usize], width: usize, degree: usize, used: usize, from: usize, out: &mut Vec<Action>) {
    let Some(idx) = (from..used * width).find(|&i| table[i] == usize::MAX) else {
        if used == degree {
            let gens: Action = (0..width / 2)
                .map(|g| (0..degree).map(|p| table[p * width + 2 * g]).collect())
                .collect();
            if canonical_form(&gens) == gens {
                out.push(gens);
            }
        }
        return;
    };
    let (p, slot) = (idx / width, idx % width);
    let back = slot ^ 1;
    let limit = if used < degree { used + 1 } else { used };
    for q in 0..limit {
        if table[q * width + back] != usize::MAX {
            continue;
        }
        table[idx] = q;
        table[q * width + back] = p;
        fill(table, width, degree, if q == used { used + 1 } else { used }, idx + 1, out);
        table[idx] = usize::MAX;
        table[q * width + back] = usize::MAX;
    }
}

/// Direct sum of actions on consecutive blocks of points.
pub fn direct_sum(parts: &[&Action], rank: usize) -> Action {
    let mut out: Action = vec![Vec::new(); rank];
    let mut offset = 0;
    for part in parts {
        let k = part.first().map_or(1, |g| g.len());
        for (g, perm) in out.iter_mut().enumerate() {
            if rank > 0 {
                perm.extend(part[g].iter().map(|&x| x + offset));
            }
        }
        offset += k;
    }
    out
}

/// All actions (connected or not) of degree `k` for a cell type, up to
/// conjugacy. Disks have only the trivial action with no generators.
pub fn cell_cover_atlas(t: CellType, k: usize, cap: usize) -> Result<Vec<Action>, CoverError> {
    if !t.orientable {
        return Err(CoverError::NonOrientableType);
    }
    if t.is_disk() {
        return Ok(vec![vec![]]);
    }
    if k > cap {
        return Err(CoverError::DegreeTooLarge { degree: k, cap });
    }
    let rank = t.free_rank();
    let by_degree: Vec<Vec<Action>> = (0..=k).map(|d| transitive_actions(rank, d)).collect();
    // multisets of (degree, index) in nonincreasing order
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    multisets(k, (k, usize::MAX), &by_degree, &mut chosen, rank, &mut out);
    Ok(out)
}

fn multisets(
    remaining: usize,
    max: (usize, usize),
    by_degree: &[Vec<Action>],
    chosen: &mut Vec<(usize, usize)>,
    rank: usize,
    out: &mut Vec<Action>,
) {
    if remaining == 0 {
        let parts: Vec<&Action> = chosen.iter().map(|&(d, i)| &by_degree[d][i]).collect();
        out.push(direct_sum(&parts, rank));
        return;
    }
    for d in (1..=remaining.min(max.0)).rev() {
        let top = if d == max.0 { max.1 } else { by_degree[d].len().saturating_sub(1) };
        for i in (0..by_degree[d].len()).rev().filter(|&i| i <= top) {
            chosen.push((d, i));
            multisets(remaining - d, (d, i), by_degree, chosen, rank, out);
            chosen.pop();
        }
    }
}

/// Connected components of an action's sheet set.
pub fn sheet_orbits(degree: usize, action: &Action) -> Vec<Vec<usize>> {
    orbits(degree, action)
}
