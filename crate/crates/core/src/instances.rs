//! Built-in example complexes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::complex::{
    build_complex, corner_table, BoundaryAttachment, CellType, ComplexSpec, CornerAddress, Label, Letter,
    RawComplex, Sign,
};
use crate::encoding::parse_complex;
use crate::homology::{self, ClassExpression, HomologyClass};
use crate::intmat;
use crate::weights::WeightFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("word uses unknown generator `{0}`")]
    WordUsesUnknownGenerator(Label),
    #[error("generator `{0}` clashes with an added generator")]
    ReservedGenerator(Label),
    #[error("unknown built-in instance `{0}`")]
    UnknownInstance(String),
    #[error("bad instance parameters: {0}")]
    BadParameters(String),
}

/// The three squares `X = aba⁻¹b⁻¹`, `Y = aca⁻¹c⁻¹`, `Z = abca⁻¹c⁻¹b⁻¹`
/// on a wedge of three circles, in annotated text form.
pub const HANDLEBODY_TEXT: &str = "\
( ( [0-cells]
    p [label]
  ),
  ( [1-cells]
    ( a [label], (p [start], p [end]) ),
    ( b [label], (p [start], p [end]) ),
    ( c [label], (p [start], p [end]) )
  ),
  ( [2-cells]
    ( X [label],
      ( 1 [number of boundary components],
        0 [genus],
        + [orientable: yes]
      ),
      ( a, b, a^{-1}, b^{-1} ) [gluing map]
    ),
    ( Y [label],
      ( 1 [number of boundary components],
        0 [genus],
        + [orientable: yes]
      ),
      ( a, c, a^{-1}, c^{-1} ) [gluing map]
    ),
    ( Z [label],
      ( 1 [number of boundary components],
        0 [genus],
        + [orientable: yes]
      ),
      ( a, b, c, a^{-1}, c^{-1}, b^{-1} ) [gluing map]
    )
  )
)
";

fn certified(c: &ComplexSpec, e: &ClassExpression) -> HomologyClass {
    homology::validate_class(c, e).expect("built-in class is a cycle")
}

fn unit_class(cells: &[&str]) -> ClassExpression {
    cells.iter().map(|l| (l.to_string(), 1)).collect()
}

pub fn handlebody() -> (ComplexSpec, HomologyClass) {
    let c = parse_complex(HANDLEBODY_TEXT).expect("built-in text parses");
    let alpha = certified(&c, &unit_class(&["X", "Y", "Z"]));
    (c, alpha)
}

fn letters(pattern: &[(&str, Sign)]) -> Vec<Letter> {
    pattern.iter().map(|(l, s)| Letter::new(*l, *s)).collect()
}

/// Parses `a b a^-1 b^-1`-style words: letters separated by spaces or
/// dots, inverses marked `^-1`.
pub fn parse_word(text: &str) -> Vec<Letter> {
    text.split(|ch: char| ch.is_whitespace() || ch == '.')
        .filter(|t| !t.is_empty())
        .map(|t| match t.strip_suffix("^-1") {
            Some(l) => Letter::neg(l),
            None => Letter::pos(t),
        })
        .collect()
}

/// Three genus-two cells on one vertex. The outer cells are octagons
/// `e b₁ c₁ d₁ e⁻¹ b₁⁻¹ c₁⁻¹ d₁⁻¹` and `f b₃ c₃ d₃ f⁻¹ b₃⁻¹ c₃⁻¹ d₃⁻¹`; the
/// middle one shares `e` with the first and `f` with the last, with word
/// `e f b₂ c₂ d₂ f⁻¹ e⁻¹ b₂⁻¹ c₂⁻¹ d₂⁻¹`. Corners weigh 1/8, except the
/// two corners of the middle cell between `e` and `f`, which weigh 1/2.
pub fn three_octagons() -> (ComplexSpec, HomologyClass, WeightFunction) {
    use Sign::{Neg, Pos};
    let outer = |s: &str, i: u32| {
        let (b, c, d) = (format!("b{i}"), format!("c{i}"), format!("d{i}"));
        letters(&[
            (s, Pos),
            (&b, Pos),
            (&c, Pos),
            (&d, Pos),
            (s, Neg),
            (&b, Neg),
            (&c, Neg),
            (&d, Neg),
        ])
    };
    let middle = letters(&[
        ("e", Pos),
        ("f", Pos),
        ("b2", Pos),
        ("c2", Pos),
        ("d2", Pos),
        ("f", Neg),
        ("e", Neg),
        ("b2", Neg),
        ("c2", Neg),
        ("d2", Neg),
    ]);
    let mut one_cells = vec!["e".to_string(), "f".to_string()];
    for i in 1..=3 {
        for x in ["b", "c", "d"] {
            one_cells.push(format!("{x}{i}"));
        }
    }
    let raw = RawComplex {
        zero_cells: vec!["p".into()],
        one_cells: one_cells.into_iter().map(|l| (l, "p".into(), "p".into())).collect(),
        two_cells: vec![
            ("X".into(), CellType::DISK, vec![BoundaryAttachment::Word(outer("e", 1))]),
            ("Y".into(), CellType::DISK, vec![BoundaryAttachment::Word(middle)]),
            ("Z".into(), CellType::DISK, vec![BoundaryAttachment::Word(outer("f", 3))]),
        ],
    };
    let c = build_complex(raw).expect("built-in complex is valid");
    let alpha = certified(&c, &unit_class(&["X", "Y", "Z"]));
    let white = [CornerAddress::new("Y", 0, 1), CornerAddress::new("Y", 0, 6)];
    let w = corner_table(&c)
        .into_iter()
        .map(|k| {
            let a = k.address();
            let v = if white.contains(&a) { (1, 2) } else { (1, 8) };
            (a, BigRational::new(BigInt::from(v.0), BigInt::from(v.1)))
        })
        .collect();
    (c, alpha, w)
}

/// 2-skeleton of the n-torus: one vertex, loops `e1..en`, and a square
/// `s{i}_{j} = e_i e_j e_i⁻¹ e_j⁻¹` for each `i < j`.
pub fn hypercube(n: usize) -> ComplexSpec {
    let edges: Vec<Label> = (1..=n).map(|i| format!("e{i}")).collect();
    let mut two_cells = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let (a, b) = (format!("e{i}"), format!("e{j}"));
            two_cells.push((
                format!("s{i}_{j}"),
                CellType::DISK,
                vec![BoundaryAttachment::Word(vec![
                    Letter::pos(a.clone()),
                    Letter::pos(b.clone()),
                    Letter::neg(a),
                    Letter::neg(b),
                ])],
            ));
        }
    }
    build_complex(RawComplex {
        zero_cells: vec!["p".into()],
        one_cells: edges.into_iter().map(|l| (l, "p".into(), "p".into())).collect(),
        two_cells,
    })
    .expect("hypercube skeleton is valid")
}

/// A finite presentation: generators and relator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Label>,
    pub relators: Vec<Vec<Letter>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GordonInstance {
    pub complex: ComplexSpec,
    /// Fundamental class of the added surface plus relator cells whose
    /// boundary cancels it; one solution among many, if any exists.
    pub candidate_class: Option<ClassExpression>,
    pub relator_count: usize,
}

const ADDED: [&str; 4] = ["a", "alpha", "b", "beta"];

fn power(l: &str, k: i64) -> Vec<Letter> {
    let letter = if k >= 0 { Letter::pos(l) } else { Letter::neg(l) };
    vec![letter; k.unsigned_abs() as usize]
}

fn inverse_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(Letter::inverse).collect()
}

fn commutator(x: &[Letter], y: &[Letter]) -> Vec<Letter> {
    [x, y, &inverse_word(x), &inverse_word(y)].concat()
}

/// Relator `L = R` as the closed word `L R⁻¹`.
fn relation(lhs: Vec<Letter>, rhs: Vec<Letter>) -> Vec<Letter> {
    [lhs, inverse_word(&rhs)].concat()
}

/// The presentation complex of `Π_w`, which adds generators `a, α, b, β`
/// and the relations
/// (i) `a α a⁻¹ = b²`, (ii) `α a α⁻¹ = b β b⁻¹`,
/// (iii) `a^{2i} q_i α^{2i} = β^{2(i+1)} b β^{−2(i+1)}` for each generator,
/// (iv) `[w, a] = β² b β⁻²`, (v) `[w, α] = β b β b⁻¹ β⁻¹`,
/// together with an orientable cell of genus `B` with two boundary circles
/// glued along `a⁻¹` and `b⁻¹`.
pub fn gordon(pi: &Presentation, w: &[Letter], genus: u32) -> Result<GordonInstance, InstanceError> {
    if genus == 0 {
        return Err(InstanceError::BadParameters("genus bound must be positive".into()));
    }
    for g in &pi.generators {
        if ADDED.contains(&g.as_str()) || g == "S" {
            return Err(InstanceError::ReservedGenerator(g.clone()));
        }
    }
    for l in pi.relators.iter().flatten().chain(w) {
        if !pi.generators.contains(&l.one_cell) {
            return Err(InstanceError::WordUsesUnknownGenerator(l.one_cell.clone()));
        }
    }
    let p = |l: &str| vec![Letter::pos(l)];
    let mut cells: Vec<(Label, Vec<Letter>)> = Vec::new();
    for (i, r) in pi.relators.iter().enumerate() {
        cells.push((format!("R{}", i + 1), r.clone()));
    }
    cells.push(("Ri".into(), relation([p("a"), p("alpha"), power("a", -1)].concat(), power("b", 2))));
    cells.push((
        "Rii".into(),
        relation(
            [p("alpha"), p("a"), power("alpha", -1)].concat(),
            [p("b"), p("beta"), power("b", -1)].concat(),
        ),
    ));
    for (i, q) in pi.generators.iter().enumerate() {
        let k = i as i64 + 1;
        cells.push((
            format!("Riii_{k}"),
            relation(
                [power("a", 2 * k), p(q), power("alpha", 2 * k)].concat(),
                [power("beta", 2 * (k + 1)), p("b"), power("beta", -2 * (k + 1))].concat(),
            ),
        ));
    }
    cells.push((
        "Riv".into(),
        relation(commutator(w, &p("a")), [power("beta", 2), p("b"), power("beta", -2)].concat()),
    ));
    cells.push((
        "Rv".into(),
        relation(
            commutator(w, &p("alpha")),
            [p("beta"), p("b"), p("beta"), power("b", -1), power("beta", -1)].concat(),
        ),
    ));
    let relator_count = cells.len();
    let mut two_cells: Vec<(Label, CellType, Vec<BoundaryAttachment>)> = cells
        .into_iter()
        .map(|(l, word)| {
            let attachment = if word.is_empty() {
                BoundaryAttachment::ConstantCircle("p".into())
            } else {
                BoundaryAttachment::Word(word)
            };
            (l, CellType::DISK, vec![attachment])
        })
        .collect();
    two_cells.push((
        "S".into(),
        CellType::orientable(genus, 2),
        vec![
            BoundaryAttachment::Word(vec![Letter::neg("a")]),
            BoundaryAttachment::Word(vec![Letter::neg("b")]),
        ],
    ));
    let one_cells = pi
        .generators
        .iter()
        .cloned()
        .chain(ADDED.iter().map(|s| s.to_string()))
        .map(|l| (l, "p".into(), "p".into()))
        .collect();
    let complex = build_complex(RawComplex {
        zero_cells: vec!["p".into()],
        one_cells,
        two_cells,
    })
    .map_err(|e| InstanceError::BadParameters(e.to_string()))?;
    let candidate_class = candidate(&complex);
    Ok(GordonInstance {
        complex,
        candidate_class,
        relator_count,
    })
}

/// Solves `Σ n(R) ∂R = −∂S` over the relator cells and adds `S` once.
fn candidate(c: &ComplexSpec) -> Option<ClassExpression> {
    let cells: Vec<Label> = c.orientable_cells().into_iter().filter(|l| *l != "S").cloned().collect();
    let rows = c.one_cells().len();
    let columns: Vec<Vec<i64>> = cells
        .iter()
        .map(|x| homology::boundary_chain(c, x).expect("orientable"))
        .collect();
    let m: intmat::IntMatrix = (0..rows)
        .map(|i| columns.iter().map(|col| BigInt::from(col[i])).collect())
        .collect();
    let target: Vec<BigInt> = homology::boundary_chain(c, "S")
        .expect("orientable")
        .into_iter()
        .map(|x| BigInt::from(-x))
        .collect();
    let x = intmat::solve(&m, cells.len(), &target)?;
    let mut out: ClassExpression = cells
        .into_iter()
        .zip(x)
        .filter_map(|(l, v)| v.to_i64().map(|v| (l, v)))
        .collect();
    out.insert("S".into(), 1);
    out.retain(|_, v| *v != 0);
    Some(out)
}

/// A built-in complex with a default class and, where known, weights.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub complex: ComplexSpec,
    pub class: Option<ClassExpression>,
    pub weights: Option<WeightFunction>,
}

/// `@handlebody`, `@three-octagons`, `@hypercube:N`, and
/// `@gordon:GENS|RELATORS|WORD|B` with comma-separated generators,
/// comma-separated relators, and words written `q1.q2^-1`.
pub fn builtin(name: &str) -> Result<Builtin, InstanceError> {
    let name = name.strip_prefix('@').unwrap_or(name);
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    match head {
        "handlebody" => {
            let (c, a) = handlebody();
            Ok(Builtin {
                complex: c,
                class: Some(a.coefficients),
                weights: None,
            })
        }
        "three-octagons" => {
            let (c, a, w) = three_octagons();
            Ok(Builtin {
                complex: c,
                class: Some(a.coefficients),
                weights: Some(w),
            })
        }
        "hypercube" => {
            let n: usize = arg
                .parse()
                .ok()
                .filter(|&n| n >= 2)
                .ok_or_else(|| InstanceError::BadParameters(format!("hypercube dimension `{arg}`")))?;
            Ok(Builtin {
                complex: hypercube(n),
                class: None,
                weights: None,
            })
        }
        "gordon" => {
            let parts: Vec<&str> = arg.split('|').collect();
            let [gens, rels, w, b] = parts[..] else {
                return Err(InstanceError::BadParameters(
                    "expected @gordon:GENS|RELATORS|WORD|B".into(),
                ));
            };
            let pi = Presentation {
                generators: gens.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect(),
                relators: rels.split(',').filter(|s| !s.trim().is_empty()).map(parse_word).collect(),
            };
            let genus = b
                .trim()
                .parse()
                .map_err(|_| InstanceError::BadParameters(format!("genus bound `{b}`")))?;
            let g = gordon(&pi, &parse_word(w), genus)?;
            Ok(Builtin {
                complex: g.complex,
                class: g.candidate_class,
                weights: None,
            })
        }
        _ => Err(InstanceError::UnknownInstance(name.to_string())),
    }
}
