//! Combinatorial generalized 2-complexes.
//!
//! A complex is given by three labelled cell sets. One-cells carry their
//! start and end vertex; two-cells carry a manifold type (genus, number of
//! boundary circles, orientability) and one attachment per boundary circle.
//! An attachment is either a closed edge path or a constant map to a vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub type Label = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn of(n: i64) -> Sign {
        if n < 0 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// Diffeomorphism type of a two-cell model surface. For non-orientable
/// types `genus` counts crosscaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellType {
    pub genus: u32,
    pub boundary_components: u32,
    pub orientable: bool,
}

impl CellType {
    pub const DISK: CellType = CellType {
        genus: 0,
        boundary_components: 1,
        orientable: true,
    };

    pub fn orientable(genus: u32, boundary_components: u32) -> CellType {
        CellType {
            genus,
            boundary_components,
            orientable: true,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        let g = i64::from(self.genus);
        let b = i64::from(self.boundary_components);
        if self.orientable {
            2 - 2 * g - b
        } else {
            2 - g - b
        }
    }

    /// Rank of the (free) fundamental group of an orientable model.
    pub fn free_rank(&self) -> usize {
        (2 * self.genus + self.boundary_components - 1) as usize
    }

    pub fn is_disk(&self) -> bool {
        *self == CellType::DISK
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub one_cell: Label,
    pub sign: Sign,
}

impl Letter {
    pub fn new(one_cell: impl Into<Label>, sign: Sign) -> Letter {
        Letter {
            one_cell: one_cell.into(),
            sign,
        }
    }

    pub fn pos(one_cell: impl Into<Label>) -> Letter {
        Letter::new(one_cell, Sign::Pos)
    }

    pub fn neg(one_cell: impl Into<Label>) -> Letter {
        Letter::new(one_cell, Sign::Neg)
    }

    pub fn inverse(&self) -> Letter {
        Letter::new(self.one_cell.clone(), self.sign.flip())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoundaryAttachment {
    Word(Vec<Letter>),
    ConstantCircle(Label),
}

impl BoundaryAttachment {
    pub fn letters(&self) -> &[Letter] {
        match self {
            BoundaryAttachment::Word(w) => w,
            BoundaryAttachment::ConstantCircle(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneCell {
    pub start: Label,
    pub end: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoCell {
    pub cell_type: CellType,
    pub boundary: Vec<BoundaryAttachment>,
}

/// Unvalidated cell lists, in input order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawComplex {
    pub zero_cells: Vec<Label>,
    pub one_cells: Vec<(Label, Label, Label)>,
    pub two_cells: Vec<(Label, CellType, Vec<BoundaryAttachment>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate {dimension}-cell label `{label}`")]
    DuplicateLabel { dimension: u8, label: Label },
    #[error("{context} refers to unknown {dimension}-cell `{label}`")]
    DanglingReference {
        context: String,
        dimension: u8,
        label: Label,
    },
    #[error("two-cell `{cell}` has {expected} boundary components but {found} attachments")]
    BoundaryCountMismatch {
        cell: Label,
        expected: u32,
        found: usize,
    },
    #[error("gluing word of `{cell}` component {component} is not a closed edge path (letter {position} ends at `{ends_at}`, next starts at `{next_starts_at}`)")]
    NonClosedGluingWord {
        cell: Label,
        component: usize,
        position: usize,
        ends_at: Label,
        next_starts_at: Label,
    },
    #[error("two-cell `{cell}` has an empty gluing word")]
    EmptyGluingWord { cell: Label },
    #[error("two-cell `{cell}` has a cell type without boundary")]
    InvalidCellType { cell: Label },
}

/// A validated combinatorial generalized 2-complex. Cells are kept in
/// label order, which fixes every derived enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComplexSpec {
    zero_cells: BTreeSet<Label>,
    one_cells: BTreeMap<Label, OneCell>,
    two_cells: BTreeMap<Label, TwoCell>,
}

pub fn build_complex(raw: RawComplex) -> Result<ComplexSpec, ComplexError> {
    let mut zero_cells = BTreeSet::new();
    for v in raw.zero_cells {
        if !zero_cells.insert(v.clone()) {
            return Err(ComplexError::DuplicateLabel {
                dimension: 0,
                label: v,
            });
        }
    }

    let mut one_cells = BTreeMap::new();
    for (label, start, end) in raw.one_cells {
        for v in [&start, &end] {
            if !zero_cells.contains(v) {
                return Err(ComplexError::DanglingReference {
                    context: format!("one-cell `{label}`"),
                    dimension: 0,
                    label: v.clone(),
                });
            }
        }
        if one_cells.contains_key(&label) {
            return Err(ComplexError::DuplicateLabel {
                dimension: 1,
                label,
            });
        }
        one_cells.insert(label, OneCell { start, end });
    }

    let mut two_cells = BTreeMap::new();
    for (label, cell_type, boundary) in raw.two_cells {
        if two_cells.contains_key(&label) {
            return Err(ComplexError::DuplicateLabel {
                dimension: 2,
                label,
            });
        }
        if cell_type.boundary_components == 0 {
            return Err(ComplexError::InvalidCellType { cell: label });
        }
        if boundary.len() != cell_type.boundary_components as usize {
            return Err(ComplexError::BoundaryCountMismatch {
                cell: label,
                expected: cell_type.boundary_components,
                found: boundary.len(),
            });
        }
        for (component, attachment) in boundary.iter().enumerate() {
            match attachment {
                BoundaryAttachment::ConstantCircle(v) => {
                    if !zero_cells.contains(v) {
                        return Err(ComplexError::DanglingReference {
                            context: format!("two-cell `{label}`"),
                            dimension: 0,
                            label: v.clone(),
                        });
                    }
                }
                BoundaryAttachment::Word(word) => {
                    if word.is_empty() {
                        return Err(ComplexError::EmptyGluingWord { cell: label });
                    }
                    for letter in word {
                        if !one_cells.contains_key(&letter.one_cell) {
                            return Err(ComplexError::DanglingReference {
                                context: format!("two-cell `{label}`"),
                                dimension: 1,
                                label: letter.one_cell.clone(),
                            });
                        }
                    }
                    check_closed(&one_cells, &label, component, word)?;
                }
            }
        }
        two_cells.insert(
            label,
            TwoCell {
                cell_type,
                boundary,
            },
        );
    }

    Ok(ComplexSpec {
        zero_cells,
        one_cells,
        two_cells,
    })
}

fn traversal<'a>(one_cells: &'a BTreeMap<Label, OneCell>, letter: &Letter) -> (&'a Label, &'a Label) {
    let e = &one_cells[&letter.one_cell];
    match letter.sign {
        Sign::Pos => (&e.start, &e.end),
        Sign::Neg => (&e.end, &e.start),
    }
}

fn check_closed(
    one_cells: &BTreeMap<Label, OneCell>,
    cell: &Label,
    component: usize,
    word: &[Letter],
) -> Result<(), ComplexError> {
    for (i, letter) in word.iter().enumerate() {
        let next = &word[(i + 1) % word.len()];
        let (_, ends_at) = traversal(one_cells, letter);
        let (next_starts_at, _) = traversal(one_cells, next);
        if ends_at != next_starts_at {
            return Err(ComplexError::NonClosedGluingWord {
                cell: cell.clone(),
                component,
                position: i,
                ends_at: ends_at.clone(),
                next_starts_at: next_starts_at.clone(),
            });
        }
    }
    Ok(())
}

/// Which end of a one-cell a corner touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Endpoint {
    #[serde(rename = "start")]
    Start,
    #[serde(rename = "end")]
    End,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OneCellCorner {
    pub one_cell: Label,
    pub endpoint: Endpoint,
}

impl fmt::Display for OneCellCorner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = match self.endpoint {
            Endpoint::Start => "start",
            Endpoint::End => "end",
        };
        write!(f, "{}:{}", self.one_cell, end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub two_cell: Label,
    pub component_index: usize,
    pub position: usize,
    pub one_cell: Label,
    pub sign: Sign,
}

/// Address of a corner of a two-cell: `cell.component.position`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerAddress {
    pub two_cell: Label,
    pub component_index: usize,
    pub position: usize,
}

impl CornerAddress {
    pub fn new(two_cell: impl Into<Label>, component_index: usize, position: usize) -> Self {
        CornerAddress {
            two_cell: two_cell.into(),
            component_index,
            position,
        }
    }
}

impl fmt::Display for CornerAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.two_cell, self.component_index, self.position)
    }
}

/// Corner `position` sits between occurrence `position - 1` (incoming,
/// cyclically) and occurrence `position` (outgoing) of its component.
/// `left_dart` is the end of the incoming occurrence's one-cell touched by
/// the corner, `right_dart` the end of the outgoing one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub two_cell: Label,
    pub component_index: usize,
    pub position: usize,
    pub at_zero_cell: Label,
    pub left_dart: OneCellCorner,
    pub right_dart: OneCellCorner,
}

impl Corner {
    pub fn address(&self) -> CornerAddress {
        CornerAddress::new(self.two_cell.clone(), self.component_index, self.position)
    }
}

impl ComplexSpec {
    pub fn empty() -> ComplexSpec {
        ComplexSpec::default()
    }

    pub fn zero_cells(&self) -> &BTreeSet<Label> {
        &self.zero_cells
    }

    pub fn one_cells(&self) -> &BTreeMap<Label, OneCell> {
        &self.one_cells
    }

    pub fn two_cells(&self) -> &BTreeMap<Label, TwoCell> {
        &self.two_cells
    }

    pub fn two_cell(&self, label: &str) -> Option<&TwoCell> {
        self.two_cells.get(label)
    }

    /// Orientable two-cell labels in label order; this is the coordinate
    /// order of homology class vectors.
    pub fn orientable_cells(&self) -> Vec<&Label> {
        self.two_cells
            .iter()
            .filter(|(_, c)| c.cell_type.orientable)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn one_cell_index(&self, label: &str) -> Option<usize> {
        self.one_cells.keys().position(|l| l == label)
    }

    pub fn zero_cell_of(&self, corner: &OneCellCorner) -> &Label {
        let e = &self.one_cells[&corner.one_cell];
        match corner.endpoint {
            Endpoint::Start => &e.start,
            Endpoint::End => &e.end,
        }
    }

    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            zero_cells: self.zero_cells.iter().cloned().collect(),
            one_cells: self
                .one_cells
                .iter()
                .map(|(l, e)| (l.clone(), e.start.clone(), e.end.clone()))
                .collect(),
            two_cells: self
                .two_cells
                .iter()
                .map(|(l, c)| (l.clone(), c.cell_type, c.boundary.clone()))
                .collect(),
        }
    }
}

pub fn occurrence_table(c: &ComplexSpec) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for (label, cell) in &c.two_cells {
        for (component_index, attachment) in cell.boundary.iter().enumerate() {
            for (position, letter) in attachment.letters().iter().enumerate() {
                out.push(Occurrence {
                    two_cell: label.clone(),
                    component_index,
                    position,
                    one_cell: letter.one_cell.clone(),
                    sign: letter.sign,
                });
            }
        }
    }
    out
}

/// The end of `letter`'s one-cell reached at the end of its traversal.
pub fn terminal_dart(letter: &Letter) -> OneCellCorner {
    OneCellCorner {
        one_cell: letter.one_cell.clone(),
        endpoint: match letter.sign {
            Sign::Pos => Endpoint::End,
            Sign::Neg => Endpoint::Start,
        },
    }
}

/// The end of `letter`'s one-cell where its traversal begins.
pub fn initial_dart(letter: &Letter) -> OneCellCorner {
    OneCellCorner {
        one_cell: letter.one_cell.clone(),
        endpoint: match letter.sign {
            Sign::Pos => Endpoint::Start,
            Sign::Neg => Endpoint::End,
        },
    }
}

pub fn corner_table(c: &ComplexSpec) -> Vec<Corner> {
    let mut out = Vec::new();
    for (label, cell) in &c.two_cells {
        for (component_index, attachment) in cell.boundary.iter().enumerate() {
            let word = attachment.letters();
            let k = word.len();
            for position in 0..k {
                let incoming = &word[(position + k - 1) % k];
                let outgoing = &word[position];
                let left_dart = terminal_dart(incoming);
                let right_dart = initial_dart(outgoing);
                let at_zero_cell = c.zero_cell_of(&right_dart).clone();
                out.push(Corner {
                    two_cell: label.clone(),
                    component_index,
                    position,
                    at_zero_cell,
                    left_dart,
                    right_dart,
                });
            }
        }
    }
    out
}

/// The subcomplex of orientable two-cells, with the same 1-skeleton.
pub fn orientable_restriction(c: &ComplexSpec) -> ComplexSpec {
    ComplexSpec {
        zero_cells: c.zero_cells.clone(),
        one_cells: c.one_cells.clone(),
        two_cells: c
            .two_cells
            .iter()
            .filter(|(_, cell)| cell.cell_type.orientable)
            .map(|(l, cell)| (l.clone(), cell.clone()))
            .collect(),
    }
}

/// Builds a word attachment from `(one-cell, sign)` pairs.
pub fn word(letters: &[(&str, Sign)]) -> BoundaryAttachment {
    BoundaryAttachment::Word(letters.iter().map(|(l, s)| Letter::new(*l, *s)).collect())
}
