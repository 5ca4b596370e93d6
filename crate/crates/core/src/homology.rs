//! Integer homology of a combinatorial 2-complex.
//!
//! Second homology is the kernel of the map sending each orientable
//! two-cell to the signed edge chain traced by its gluing words. Edge
//! chains of the 1-skeleton are compared directly: for a graph, homologous
//! cycles are equal chains.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::complex::{ComplexSpec, Label};
use crate::intmat::{self, IntMatrix};

/// Signed traversal counts indexed by one-cells in label order.
pub type EdgeChain = Vec<i64>;

/// Coefficients on orientable two-cells; omitted labels are zero.
pub type ClassExpression = BTreeMap<Label, i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("two-cell `{0}` is not orientable")]
    NonOrientableCell(Label),
    #[error("unknown two-cell `{0}`")]
    UnknownCell(Label),
    #[error("class is not a cycle; boundary residues {residues:?}")]
    NotACycle { residues: BTreeMap<Label, i64> },
    #[error("coefficient overflow")]
    Overflow,
}

/// A class of `H_2`, as coefficients over all orientable two-cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    pub coefficients: BTreeMap<Label, i64>,
    pub certified: bool,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|&n| n == 0)
    }

    pub fn coefficient(&self, cell: &str) -> i64 {
        self.coefficients.get(cell).copied().unwrap_or(0)
    }

    /// Sum of `|n(x)|`, the least total degree of any representative.
    pub fn l1_norm(&self) -> u64 {
        self.coefficients.values().map(|n| n.unsigned_abs()).sum()
    }

    pub fn scaled(&self, k: i64) -> HomologyClass {
        HomologyClass {
            coefficients: self
                .coefficients
                .iter()
                .map(|(l, &n)| (l.clone(), n * k))
                .collect(),
            certified: self.certified,
        }
    }

    pub fn as_vector(&self) -> Vec<i64> {
        self.coefficients.values().copied().collect()
    }
}

pub fn boundary_chain(c: &ComplexSpec, x: &str) -> Result<EdgeChain, HomologyError> {
    let cell = c
        .two_cell(x)
        .ok_or_else(|| HomologyError::UnknownCell(x.to_string()))?;
    if !cell.cell_type.orientable {
        return Err(HomologyError::NonOrientableCell(x.to_string()));
    }
    let mut chain = vec![0i64; c.one_cells().len()];
    for attachment in &cell.boundary {
        for letter in attachment.letters() {
            let i = c
                .one_cell_index(&letter.one_cell)
                .expect("validated complex");
            chain[i] += letter.sign.value();
        }
    }
    Ok(chain)
}

/// Matrix with one row per one-cell and one column per orientable two-cell.
pub fn boundary_matrix(c: &ComplexSpec) -> IntMatrix {
    let cells = c.orientable_cells();
    let columns: Vec<EdgeChain> = cells
        .iter()
        .map(|x| boundary_chain(c, x).expect("orientable"))
        .collect();
    (0..c.one_cells().len())
        .map(|i| columns.iter().map(|col| BigInt::from(col[i])).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Group {
    pub rank: usize,
    /// Coordinates over `cells`, in Hermite normal form.
    pub basis: Vec<Vec<BigInt>>,
    pub cells: Vec<Label>,
}

pub fn h2_group(c: &ComplexSpec) -> H2Group {
    let cells: Vec<Label> = c.orientable_cells().into_iter().cloned().collect();
    let m = boundary_matrix(c);
    let basis = intmat::kernel_basis(&m, cells.len());
    H2Group {
        rank: basis.len(),
        basis,
        cells,
    }
}

impl serde::Serialize for H2Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let basis: Vec<Vec<serde_json::Value>> = self
            .basis
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| match x.to_i64() {
                        Some(n) => n.into(),
                        None => x.to_string().into(),
                    })
                    .collect()
            })
            .collect();
        let mut st = s.serialize_struct("H2Group", 3)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("basis", &basis)?;
        st.serialize_field("cells", &self.cells)?;
        st.end()
    }
}

impl H2Group {
    /// Basis vectors as classes, when entries fit in `i64`.
    pub fn basis_classes(&self) -> Option<Vec<ClassExpression>> {
        self.basis
            .iter()
            .map(|v| {
                self.cells
                    .iter()
                    .zip(v)
                    .map(|(l, x)| x.to_i64().map(|x| (l.clone(), x)))
                    .collect()
            })
            .collect()
    }
}

pub fn validate_class(c: &ComplexSpec, e: &ClassExpression) -> Result<HomologyClass, HomologyError> {
    for label in e.keys() {
        match c.two_cell(label) {
            None => return Err(HomologyError::UnknownCell(label.clone())),
            Some(cell) if !cell.cell_type.orientable => {
                return Err(HomologyError::NonOrientableCell(label.clone()))
            }
            _ => {}
        }
    }
    let mut total = vec![0i64; c.one_cells().len()];
    for (label, &n) in e.iter() {
        if n == 0 {
            continue;
        }
        let chain = boundary_chain(c, label)?;
        for (t, x) in total.iter_mut().zip(chain) {
            *t = x
                .checked_mul(n)
                .and_then(|v| t.checked_add(v))
                .ok_or(HomologyError::Overflow)?;
        }
    }
    if total.iter().any(|&t| t != 0) {
        let residues = c
            .one_cells()
            .keys()
            .zip(&total)
            .filter(|(_, &t)| t != 0)
            .map(|(l, &t)| (l.clone(), t))
            .collect();
        return Err(HomologyError::NotACycle { residues });
    }
    let coefficients = c
        .orientable_cells()
        .into_iter()
        .map(|l| (l.clone(), e.get(l).copied().unwrap_or(0)))
        .collect();
    Ok(HomologyClass {
        coefficients,
        certified: true,
    })
}

/// Rank over the rationals of an integer matrix; used for cross-checks.
pub fn rational_rank(m: &IntMatrix, cols: usize) -> usize {
    let res = intmat::row_hnf(m, cols);
    res.hnf.iter().filter(|r| r.iter().any(|x| !x.is_zero())).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, word, CellType, RawComplex, Sign::*};

    fn loop_complex(cells: Vec<(&str, crate::complex::BoundaryAttachment)>) -> ComplexSpec {
        build_complex(RawComplex {
            zero_cells: vec!["p".into()],
            one_cells: ["a", "b", "c"]
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

    #[test]
    fn chains() {
        let c = loop_complex(vec![
            ("X", word(&[("a", Pos), ("b", Pos), ("a", Neg), ("b", Neg)])),
            ("D", word(&[("a", Pos), ("a", Pos)])),
            (
                "Z",
                word(&[
                    ("a", Pos),
                    ("b", Pos),
                    ("c", Pos),
                    ("a", Neg),
                    ("c", Neg),
                    ("b", Neg),
                ]),
            ),
        ]);
        assert_eq!(boundary_chain(&c, "X").unwrap(), vec![0, 0, 0]);
        assert_eq!(boundary_chain(&c, "D").unwrap(), vec![2, 0, 0]);
        assert_eq!(boundary_chain(&c, "Z").unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn single_disk_on_loop_has_no_h2() {
        let c = loop_complex(vec![("D", word(&[("a", Pos)]))]);
        assert_eq!(h2_group(&c).rank, 0);
        let e: ClassExpression = [("D".to_string(), 1)].into();
        assert!(matches!(
            validate_class(&c, &e),
            Err(HomologyError::NotACycle { .. })
        ));
        assert!(validate_class(&c, &ClassExpression::new()).unwrap().is_zero());
    }

    #[test]
    fn non_orientable_is_rejected() {
        let c = build_complex(RawComplex {
            zero_cells: vec!["p".into()],
            one_cells: vec![("a".into(), "p".into(), "p".into())],
            two_cells: vec![(
                "M".into(),
                CellType {
                    genus: 1,
                    boundary_components: 1,
                    orientable: false,
                },
                vec![word(&[("a", Pos), ("a", Pos)])],
            )],
        })
        .unwrap();
        assert!(matches!(
            boundary_chain(&c, "M"),
            Err(HomologyError::NonOrientableCell(_))
        ));
        let e: ClassExpression = [("M".to_string(), 1)].into();
        assert!(matches!(
            validate_class(&c, &e),
            Err(HomologyError::NonOrientableCell(_))
        ));
        assert_eq!(h2_group(&c).rank, 0);
    }

    #[test]
    fn relation_between_cells() {
        // D1 = a a, D2 = a: 1*D1 - 2*D2 is a cycle.
        let c = loop_complex(vec![
            ("D1", word(&[("a", Pos), ("a", Pos)])),
            ("D2", word(&[("a", Pos)])),
        ]);
        let h = h2_group(&c);
        assert_eq!(h.rank, 1);
        assert_eq!(h.basis[0], vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
