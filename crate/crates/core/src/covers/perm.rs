//! Permutations of `{0, .., k-1}` stored as image vectors.
//!
//! Products are read left to right: `compose(p, q)` applies `p` first.
//! This matches path lifting, where a sheet travels along `p` then `q`.

pub type Perm = Vec<usize>;

pub fn identity(k: usize) -> Perm {
    (0..k).collect()
}

pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    p.iter().map(|&i| q[i]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i == j)
}

/// Cycles in order of their least element, each starting there.
pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = p[i];
        }
        out.push(cycle);
    }
    out
}

/// Orbits of the group generated by `gens` on `k` points, each sorted,
/// in order of least element.
pub fn orbits(k: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; k];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..k {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![start];
        let mut orbit = vec![];
        label[start] = id;
        while let Some(i) = stack.pop() {
            orbit.push(i);
            for g in gens {
                for j in [g[i], inverse_image(g, i)] {
                    if label[j] == usize::MAX {
                        label[j] = id;
                        stack.push(j);
                    }
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

fn inverse_image(p: &[usize], i: usize) -> usize {
    p.iter().position(|&j| j == i).expect("permutation")
}

/// All permutations of `k` points in lexicographic order.
pub fn all_perms(k: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current = identity(k);
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_order() {
        let p = vec![1, 2, 0];
        let q = vec![0, 2, 1];
        // 0 -p-> 1 -q-> 2
        assert_eq!(compose(&p, &q)[0], 2);
        assert!(is_identity(&compose(&p, &inverse(&p))));
    }

    #[test]
    fn cycle_structure() {
        assert_eq!(cycles(&[1, 0, 2]), vec![vec![0, 1], vec![2]]);
        assert_eq!(orbits(4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]]), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(all_perms(3).len(), 6);
        assert_eq!(all_perms(0).len(), 1);
    }
}
