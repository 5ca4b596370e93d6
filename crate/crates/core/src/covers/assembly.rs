//! Gluing cover pieces along a matching of lifted occurrences.
//!
//! A lifted occurrence is addressed by (piece, boundary component, sheet,
//! position). Along one boundary circle a sheet stays constant; passing the
//! position-0 corner moves sheet `s` to `σ_j(s)`. The corner-lift between
//! `(s, p)` and `(s, p + 1)` is `(s, p + 1)`, and the one after `(s, L − 1)`
//! is `(σ_j(s), 0)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::complex::{occurrence_table, BoundaryAttachment, ComplexSpec, Label, Sign};
use crate::covers::atlas::{canonical_form, Action};
use crate::covers::perm::{cycles, orbits, Perm};
use crate::covers::{CoverError, CoverPiece};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedOccurrence {
    pub piece: usize,
    pub component: usize,
    pub sheet: usize,
    pub position: usize,
}

impl fmt::Display for LiftedOccurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}.{}", self.piece, self.component, self.sheet, self.position)
    }
}

impl Serialize for LiftedOccurrence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One boundary circle of a piece: a cycle of `σ_j` on sheets, traversing
/// the base attachment once per sheet in the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedCircle {
    pub component: usize,
    pub sheets: Vec<usize>,
    pub occurrences: Vec<LiftedOccurrence>,
}

pub fn piece_boundary_lifts(
    p: &CoverPiece,
    piece: usize,
    c: &ComplexSpec,
) -> Result<Vec<LiftedCircle>, CoverError> {
    let cell = c
        .two_cell(&p.cell)
        .ok_or_else(|| CoverError::UnknownCell(p.cell.clone()))?;
    check_piece(p, cell.cell_type)?;
    let sigma = p.boundary_permutations(cell.cell_type);
    let mut out = Vec::new();
    for (j, attachment) in cell.boundary.iter().enumerate() {
        let len = attachment.letters().len();
        for cycle in cycles(&sigma[j]) {
            let occurrences = cycle
                .iter()
                .flat_map(|&sheet| {
                    (0..len).map(move |position| LiftedOccurrence {
                        piece,
                        component: j,
                        sheet,
                        position,
                    })
                })
                .collect();
            out.push(LiftedCircle {
                component: j,
                sheets: cycle,
                occurrences,
            });
        }
    }
    Ok(out)
}

fn is_perm(p: &[usize], k: usize) -> bool {
    let mut seen = vec![false; k];
    p.len() == k && p.iter().all(|&i| i < k && !std::mem::replace(&mut seen[i], true))
}

fn check_piece(p: &CoverPiece, t: crate::complex::CellType) -> Result<(), CoverError> {
    if !t.orientable {
        return Err(CoverError::NonOrientableType);
    }
    if p.degree == 0
        || p.monodromy.len() != t.free_rank()
        || !p.monodromy.iter().all(|g| is_perm(g, p.degree))
    {
        return Err(CoverError::InvariantViolation(format!(
            "malformed monodromy for a piece over `{}`",
            p.cell
        )));
    }
    Ok(())
}

/// One lifted occurrence with everything the gluing needs.
#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub addr: LiftedOccurrence,
    pub one_cell: u32,
    /// Effective direction on the oriented surface is positive.
    pub positive: bool,
    /// Index of the base occurrence in `occurrence_table`.
    pub base: u32,
    pub unit: u32,
    /// Corner-lifts over the start and end of the base one-cell.
    pub start: u32,
    pub end: u32,
}

/// A connected component of a piece: one orbit of its monodromy.
#[derive(Debug, Clone)]
pub(crate) struct Unit {
    pub chi: i64,
    pub corners: i64,
    /// Lifted constant circles, each a vertex of the surface.
    pub constant: i64,
    /// Units with equal signatures are interchangeable.
    pub signature: (Label, Sign, Action),
}

#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub slots: Vec<Slot>,
    pub units: Vec<Unit>,
    pub corner_unit: Vec<u32>,
    pub one_cells: usize,
    pub bases: usize,
    pub index: HashMap<LiftedOccurrence, u32>,
}

impl Layout {
    /// Slots are ordered unit by unit, then by component, sheet, position.
    pub fn new(c: &ComplexSpec, pieces: &[CoverPiece]) -> Result<Layout, CoverError> {
        let base_index: BTreeMap<(Label, usize, usize), u32> = occurrence_table(c)
            .into_iter()
            .enumerate()
            .map(|(i, o)| ((o.two_cell, o.component_index, o.position), i as u32))
            .collect();
        let mut lay = Layout {
            slots: Vec::new(),
            units: Vec::new(),
            corner_unit: Vec::new(),
            one_cells: c.one_cells().len(),
            bases: base_index.len(),
            index: HashMap::new(),
        };
        for (pi, p) in pieces.iter().enumerate() {
            let cell = c
                .two_cell(&p.cell)
                .ok_or_else(|| CoverError::UnknownCell(p.cell.clone()))?;
            let t = cell.cell_type;
            check_piece(p, t)?;
            let sigma = p.boundary_permutations(t);
            for orbit in orbits(p.degree, &p.monodromy) {
                let u = lay.units.len() as u32;
                let mut local = vec![usize::MAX; p.degree];
                for (i, &s) in orbit.iter().enumerate() {
                    local[s] = i;
                }
                let restricted: Action = p
                    .monodromy
                    .iter()
                    .map(|g| orbit.iter().map(|&s| local[g[s]]).collect::<Perm>())
                    .collect();
                let signature = (p.cell.clone(), p.orientation, canonical_form(&restricted));
                let mut corner: HashMap<(usize, usize, usize), u32> = HashMap::new();
                let mut constant = 0i64;
                for (j, a) in cell.boundary.iter().enumerate() {
                    match a {
                        BoundaryAttachment::ConstantCircle(_) => {
                            constant += cycles(&sigma[j])
                                .iter()
                                .filter(|cy| local[cy[0]] != usize::MAX)
                                .count() as i64;
                        }
                        BoundaryAttachment::Word(w) => {
                            for &s in &orbit {
                                for pos in 0..w.len() {
                                    corner.insert((j, s, pos), lay.corner_unit.len() as u32);
                                    lay.corner_unit.push(u);
                                }
                            }
                        }
                    }
                }
                for (j, a) in cell.boundary.iter().enumerate() {
                    let w = a.letters();
                    for &s in &orbit {
                        for (pos, letter) in w.iter().enumerate() {
                            let tail = corner[&(j, s, pos)];
                            let head = if pos + 1 < w.len() {
                                corner[&(j, s, pos + 1)]
                            } else {
                                corner[&(j, sigma[j][s], 0)]
                            };
                            let (start, end) = match letter.sign {
                                Sign::Pos => (tail, head),
                                Sign::Neg => (head, tail),
                            };
                            let addr = LiftedOccurrence {
                                piece: pi,
                                component: j,
                                sheet: s,
                                position: pos,
                            };
                            lay.index.insert(addr, lay.slots.len() as u32);
                            lay.slots.push(Slot {
                                addr,
                                one_cell: c.one_cell_index(&letter.one_cell).expect("validated") as u32,
                                positive: letter.sign.times(p.orientation) == Sign::Pos,
                                base: base_index[&(p.cell.clone(), j, pos)],
                                unit: u,
                                start,
                                end,
                            });
                        }
                    }
                }
                lay.units.push(Unit {
                    chi: orbit.len() as i64 * t.euler_characteristic(),
                    corners: corner.len() as i64,
                    constant,
                    signature,
                });
            }
        }
        Ok(lay)
    }

    /// Vertices, edges and per-component Euler characteristics of the
    /// surface glued along `partner` (a fixed-point-free involution on
    /// slots). Components are listed in order of their least unit.
    pub fn glue(&self, partner: &[u32]) -> (i64, i64, Vec<i64>) {
        let mut corners = SimpleUf::new(self.corner_unit.len());
        let mut units = SimpleUf::new(self.units.len());
        let mut edges = 0;
        for (i, s) in self.slots.iter().enumerate() {
            let j = partner[i] as usize;
            if j < i {
                continue;
            }
            let t = &self.slots[j];
            edges += 1;
            units.union(s.unit as usize, t.unit as usize);
            corners.union(s.start as usize, t.start as usize);
            corners.union(s.end as usize, t.end as usize);
        }
        let mut chi = vec![0i64; self.units.len()];
        let mut vertices = 0;
        for (u, unit) in self.units.iter().enumerate() {
            chi[units.find(u)] += unit.chi + unit.constant;
            vertices += unit.constant;
        }
        for k in 0..self.corner_unit.len() {
            if corners.find(k) == k {
                vertices += 1;
                chi[units.find(self.corner_unit[k] as usize)] += 1;
            }
        }
        for (i, s) in self.slots.iter().enumerate() {
            if (partner[i] as usize) > i {
                chi[units.find(s.unit as usize)] -= 1;
            }
        }
        let components = (0..self.units.len())
            .filter(|&u| units.find(u) == u)
            .map(|u| chi[u])
            .collect();
        (vertices, edges, components)
    }
}

struct SimpleUf {
    parent: Vec<usize>,
}

impl SimpleUf {
    fn new(n: usize) -> Self {
        SimpleUf {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SurfaceComponent {
    pub chi: i64,
    pub genus: i64,
}

/// A point `(χ⁻, g, n₀)` of a representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RepPoint {
    pub chi_minus: i64,
    pub genus: i64,
    pub n0: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceAssembly {
    pub components: Vec<SurfaceComponent>,
    pub pieces: Vec<CoverPiece>,
    pub matching: Vec<(LiftedOccurrence, LiftedOccurrence)>,
    #[serde(skip)]
    pub vertices: i64,
    #[serde(skip)]
    pub edges: i64,
    #[serde(skip)]
    pub chi: i64,
    /// Base occurrence `(cell, component, position)` of each matched side.
    #[serde(skip)]
    bases: Vec<((Label, usize, usize), (Label, usize, usize))>,
}

impl SurfaceAssembly {
    pub fn empty() -> SurfaceAssembly {
        SurfaceAssembly {
            components: vec![],
            pieces: vec![],
            matching: vec![],
            vertices: 0,
            edges: 0,
            chi: 0,
            bases: vec![],
        }
    }

    pub fn invariants(&self) -> RepPoint {
        surface_invariants(self)
    }

    /// Σ orientation · degree per base cell.
    pub fn represented_class(&self) -> BTreeMap<Label, i64> {
        let mut out = BTreeMap::new();
        for p in &self.pieces {
            *out.entry(p.cell.clone()).or_default() += p.orientation.value() * p.degree as i64;
        }
        out.retain(|_, n| *n != 0);
        out
    }

    /// No matched pair meets the same base occurrence.
    pub fn is_fold_free(&self) -> bool {
        self.bases.iter().all(|(a, b)| a != b)
    }
}

/// Glues `pieces` along `matching`. The matching must be perfect on the
/// lifted occurrences and pair equal one-cells with opposite effective
/// directions; folds are allowed here.
pub fn assemble_surface(
    pieces: Vec<CoverPiece>,
    matching: Vec<(LiftedOccurrence, LiftedOccurrence)>,
    c: &ComplexSpec,
) -> Result<SurfaceAssembly, CoverError> {
    let lay = Layout::new(c, &pieces)?;
    let mut partner = vec![u32::MAX; lay.slots.len()];
    let bad = |m: String| Err(CoverError::InvariantViolation(m));
    for (a, b) in &matching {
        let (Some(&i), Some(&j)) = (lay.index.get(a), lay.index.get(b)) else {
            return bad(format!("matching names an unknown lifted occurrence {a} or {b}"));
        };
        if i == j || partner[i as usize] != u32::MAX || partner[j as usize] != u32::MAX {
            return bad(format!("lifted occurrence {a} or {b} matched twice"));
        }
        let (s, t) = (&lay.slots[i as usize], &lay.slots[j as usize]);
        if s.one_cell != t.one_cell {
            return bad(format!("{a} and {b} lie over different one-cells"));
        }
        if s.positive == t.positive {
            return bad(format!("{a} and {b} have the same direction"));
        }
        partner[i as usize] = j;
        partner[j as usize] = i;
    }
    if let Some(i) = partner.iter().position(|&p| p == u32::MAX) {
        return bad(format!("lifted occurrence {} is unmatched", lay.slots[i].addr));
    }
    from_partner(&lay, pieces, &partner)
}

pub(crate) fn from_partner(
    lay: &Layout,
    pieces: Vec<CoverPiece>,
    partner: &[u32],
) -> Result<SurfaceAssembly, CoverError> {
    let (vertices, edges, chis) = lay.glue(partner);
    let mut components = Vec::with_capacity(chis.len());
    for chi in chis {
        if chi % 2 != 0 || chi > 2 {
            return Err(CoverError::InvariantViolation(format!(
                "component with Euler characteristic {chi}"
            )));
        }
        components.push(SurfaceComponent {
            chi,
            genus: (2 - chi) / 2,
        });
    }
    let base_of = |s: &Slot| {
        let p = &pieces[s.addr.piece];
        (p.cell.clone(), s.addr.component, s.addr.position)
    };
    let mut matching = Vec::with_capacity(lay.slots.len() / 2);
    let mut bases = Vec::with_capacity(lay.slots.len() / 2);
    for (i, s) in lay.slots.iter().enumerate() {
        let j = partner[i] as usize;
        if j > i {
            let t = &lay.slots[j];
            matching.push((s.addr, t.addr));
            bases.push((base_of(s), base_of(t)));
        }
    }
    let chi = components.iter().map(|k| k.chi).sum();
    Ok(SurfaceAssembly {
        components,
        pieces,
        matching,
        vertices,
        edges,
        chi,
        bases,
    })
}

pub fn surface_invariants(s: &SurfaceAssembly) -> RepPoint {
    RepPoint {
        chi_minus: s.components.iter().map(|k| (-k.chi).max(0)).sum(),
        genus: s.components.iter().map(|k| k.genus).sum(),
        n0: s.components.iter().filter(|k| k.genus >= 1).count() as i64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, word, CellType, RawComplex, Sign::*};

    fn loops(labels: &[&str], cells: Vec<(&str, crate::complex::BoundaryAttachment)>) -> ComplexSpec {
        build_complex(RawComplex {
            zero_cells: vec!["p".into()],
            one_cells: labels
                .iter()
                .map(|l| (l.to_string(), "p".into(), "p".into()))
                .collect(),
            two_cells: cells
                .into_iter()
                .map(|(l, w)| (l.to_string(), CellType::DISK, vec![w]))
                .collect(),
        })
        .unwrap()
    }

    fn occ(piece: usize, sheet: usize, position: usize) -> LiftedOccurrence {
        LiftedOccurrence {
            piece,
            component: 0,
            sheet,
            position,
        }
    }

    #[test]
    fn square_closes_to_torus() {
        let c = loops(&["a", "b"], vec![("X", word(&[("a", Pos), ("b", Pos), ("a", Neg), ("b", Neg)]))]);
        let piece = CoverPiece::trivial("X", CellType::DISK, 1, Pos);
        let s = assemble_surface(vec![piece], vec![(occ(0, 0, 0), occ(0, 0, 2)), (occ(0, 0, 1), occ(0, 0, 3))], &c)
            .unwrap();
        assert_eq!((s.vertices, s.edges, s.chi), (1, 2, 0));
        assert_eq!(s.invariants(), RepPoint { chi_minus: 0, genus: 1, n0: 1 });
        assert!(s.is_fold_free());
    }

    #[test]
    fn octagon_closes_to_genus_two() {
        let w = word(&[
            ("a", Pos),
            ("b", Pos),
            ("c", Pos),
            ("d", Pos),
            ("a", Neg),
            ("b", Neg),
            ("c", Neg),
            ("d", Neg),
        ]);
        let c = loops(&["a", "b", "c", "d"], vec![("O", w)]);
        let piece = CoverPiece::trivial("O", CellType::DISK, 1, Pos);
        let m = (0..4).map(|i| (occ(0, 0, i), occ(0, 0, i + 4))).collect();
        let s = assemble_surface(vec![piece], m, &c).unwrap();
        assert_eq!(s.components, vec![SurfaceComponent { chi: -2, genus: 2 }]);
    }

    #[test]
    fn crosswise_double_cover_of_torus() {
        let c = loops(&["a", "b"], vec![("X", word(&[("a", Pos), ("b", Pos), ("a", Neg), ("b", Neg)]))]);
        let piece = CoverPiece::trivial("X", CellType::DISK, 2, Pos);
        let m = vec![
            (occ(0, 0, 0), occ(0, 1, 2)),
            (occ(0, 1, 0), occ(0, 0, 2)),
            (occ(0, 0, 1), occ(0, 0, 3)),
            (occ(0, 1, 1), occ(0, 1, 3)),
        ];
        let s = assemble_surface(vec![piece], m, &c).unwrap();
        assert_eq!(s.components, vec![SurfaceComponent { chi: 0, genus: 1 }]);
        assert_eq!(s.represented_class(), [("X".to_string(), 2)].into());
    }

    #[test]
    fn rejects_bad_matchings() {
        let c = loops(&["a", "b"], vec![("X", word(&[("a", Pos), ("b", Pos), ("a", Neg), ("b", Neg)]))]);
        let piece = CoverPiece::trivial("X", CellType::DISK, 1, Pos);
        let err = assemble_surface(vec![piece.clone()], vec![(occ(0, 0, 0), occ(0, 0, 1))], &c);
        assert!(matches!(err, Err(CoverError::InvariantViolation(_))));
        let err = assemble_surface(vec![piece], vec![(occ(0, 0, 0), occ(0, 0, 2))], &c);
        assert!(matches!(err, Err(CoverError::InvariantViolation(_))));
    }

    #[test]
    fn boundary_lifts_follow_cycles() {
        let c = build_complex(RawComplex {
            zero_cells: vec!["p".into()],
            one_cells: vec![("a".into(), "p".into(), "p".into()), ("b".into(), "p".into(), "p".into())],
            two_cells: vec![(
                "A".into(),
                CellType::orientable(0, 2),
                vec![word(&[("a", Pos), ("b", Pos)]), word(&[("b", Neg), ("a", Neg)])],
            )],
        })
        .unwrap();
        let connected = CoverPiece {
            cell: "A".into(),
            degree: 2,
            orientation: Pos,
            monodromy: vec![vec![1, 0]],
        };
        let lifts = piece_boundary_lifts(&connected, 0, &c).unwrap();
        assert_eq!(lifts.len(), 2);
        assert!(lifts.iter().all(|l| l.occurrences.len() == 4));
        let split = CoverPiece::trivial("A", CellType::orientable(0, 2), 2, Pos);
        assert_eq!(piece_boundary_lifts(&split, 0, &c).unwrap().len(), 4);
    }
}
