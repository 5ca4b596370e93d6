//! Text encoding of complexes, classes and weight functions.
//!
//! Complex grammar, after dropping `[...]` annotations and whitespace:
//!
//! ```text
//! complex  := "(" group0 "," group1 "," group2 ")"
//! group0   := "(" label,* ")"
//! group1   := "(" ( "(" label "," "(" label "," label ")" ")" ),* ")"
//! group2   := "(" ( "(" label "," "(" nat "," nat "," sign ")" "," battach,+ ")" ),* ")"
//! battach  := "(" letter,+ ")" | label
//! letter   := label | label "^{-1}"
//! ```
//!
//! The type triple is (boundary components, genus, orientability). A bare
//! label as an attachment is a constant circle at that zero-cell; a cell
//! with `b` boundary circles lists `b` attachments.
//!
//! A group may also be a single bare label, as in `(p, ..., ...)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    build_complex, corner_table, BoundaryAttachment, CellType, ComplexError, ComplexSpec,
    CornerAddress, Label, Letter, RawComplex, Sign,
};
use crate::homology::ClassExpression;
use crate::weights::WeightFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("{line}:{column}: {message}")]
    Lex {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown two-cell `{0}`")]
    UnknownCell(Label),
    #[error("two-cell `{0}` is not orientable")]
    NonOrientableCell(Label),
    #[error("bad integer `{0}`")]
    IntegerSyntax(String),
    #[error("`{0}` is assigned twice")]
    Duplicate(String),
    #[error("unknown corner `{0}`")]
    UnknownCorner(String),
    #[error("corner `{0}` has no weight and no default is given")]
    MissingCorner(String),
    #[error("line {line}: bad rational `{text}`")]
    RationalSyntax { line: usize, text: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Inverse,
    Sign(Sign),
    Word(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

pub fn is_label_char(ch: char) -> bool {
    ch.is_alphanumeric() || ch == '_' || ch == '\''
}

fn lex(text: &str) -> Result<Vec<Token>, EncodingError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    let advance = |i: &mut usize, line: &mut usize, column: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let ch = chars[i];
        let (l, c) = (line, column);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l, column: c });
        match ch {
            _ if ch.is_whitespace() => advance(&mut i, &mut line, &mut column),
            '[' => {
                while i < chars.len() && chars[i] != ']' {
                    advance(&mut i, &mut line, &mut column);
                }
                if i == chars.len() {
                    return Err(EncodingError::Lex {
                        line: l,
                        column: c,
                        message: "unterminated comment".into(),
                    });
                }
                advance(&mut i, &mut line, &mut column);
            }
            ']' => {
                return Err(EncodingError::Lex {
                    line: l,
                    column: c,
                    message: "unexpected `]`".into(),
                })
            }
            '(' | ')' | ',' | '+' | '-' | '\u{2212}' => {
                push(
                    &mut out,
                    match ch {
                        '(' => Tok::Open,
                        ')' => Tok::Close,
                        ',' => Tok::Comma,
                        '+' => Tok::Sign(Sign::Pos),
                        _ => Tok::Sign(Sign::Neg),
                    },
                );
                advance(&mut i, &mut line, &mut column);
            }
            '^' => {
                let rest: String = chars[i..].iter().take(5).collect();
                if rest == "^{-1}" || rest == "^{\u{2212}1}" {
                    push(&mut out, Tok::Inverse);
                    for _ in 0..5 {
                        advance(&mut i, &mut line, &mut column);
                    }
                } else {
                    return Err(EncodingError::Lex {
                        line: l,
                        column: c,
                        message: "expected `^{-1}`".into(),
                    });
                }
            }
            _ if is_label_char(ch) => {
                let mut word = String::new();
                while i < chars.len() && is_label_char(chars[i]) {
                    word.push(chars[i]);
                    advance(&mut i, &mut line, &mut column);
                }
                push(&mut out, Tok::Word(word));
            }
            _ => {
                return Err(EncodingError::Lex {
                    line: l,
                    column: c,
                    message: format!("unexpected character `{ch}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn error(&self, message: impl Into<String>) -> EncodingError {
        let (line, column) = self
            .tokens
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column));
        EncodingError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Open) => "`(`".into(),
            Some(Tok::Close) => "`)`".into(),
            Some(Tok::Comma) => "`,`".into(),
            Some(Tok::Inverse) => "`^{-1}`".into(),
            Some(Tok::Sign(s)) => format!("`{s}`"),
            Some(Tok::Word(w)) => format!("`{w}`"),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), EncodingError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", self.describe())))
        }
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn label(&mut self) -> Result<Label, EncodingError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error(format!("expected a label, found {}", self.describe()))),
        }
    }

    fn nat(&mut self) -> Result<u32, EncodingError> {
        let here = self.pos;
        let w = self.label()?;
        w.parse().map_err(|_| {
            self.pos = here;
            self.error(format!("expected a natural number, found `{w}`"))
        })
    }

    /// `"(" item ("," item)* ")"`, or `"(" ")"` when `allow_empty`.
    fn list<T>(
        &mut self,
        allow_empty: bool,
        mut item: impl FnMut(&mut Self) -> Result<T, EncodingError>,
    ) -> Result<Vec<T>, EncodingError> {
        self.expect(Tok::Open, "`(`")?;
        let mut out = Vec::new();
        if self.eat(Tok::Close) {
            if allow_empty {
                return Ok(out);
            }
            self.pos -= 1;
            return Err(self.error("empty list"));
        }
        loop {
            out.push(item(self)?);
            if self.eat(Tok::Close) {
                return Ok(out);
            }
            self.expect(Tok::Comma, "`,` or `)`")?;
        }
    }

    /// A group is a parenthesized list or, for one element, a bare item.
    fn group<T>(
        &mut self,
        bare: bool,
        item: impl FnMut(&mut Self) -> Result<T, EncodingError>,
    ) -> Result<Vec<T>, EncodingError> {
        let mut item = item;
        if bare && matches!(self.peek(), Some(Tok::Word(_))) {
            return Ok(vec![item(self)?]);
        }
        self.list(true, item)
    }

    fn one_cell(&mut self) -> Result<(Label, Label, Label), EncodingError> {
        self.expect(Tok::Open, "`(`")?;
        let label = self.label()?;
        self.expect(Tok::Comma, "`,`")?;
        self.expect(Tok::Open, "`(`")?;
        let start = self.label()?;
        self.expect(Tok::Comma, "`,`")?;
        let end = self.label()?;
        self.expect(Tok::Close, "`)`")?;
        self.expect(Tok::Close, "`)`")?;
        Ok((label, start, end))
    }

    fn letter(&mut self) -> Result<Letter, EncodingError> {
        let l = self.label()?;
        let sign = if self.eat(Tok::Inverse) {
            Sign::Neg
        } else {
            Sign::Pos
        };
        Ok(Letter::new(l, sign))
    }

    fn two_cell(&mut self) -> Result<(Label, CellType, Vec<BoundaryAttachment>), EncodingError> {
        self.expect(Tok::Open, "`(`")?;
        let label = self.label()?;
        self.expect(Tok::Comma, "`,`")?;
        self.expect(Tok::Open, "`(`")?;
        let boundary_components = self.nat()?;
        self.expect(Tok::Comma, "`,`")?;
        let genus = self.nat()?;
        self.expect(Tok::Comma, "`,`")?;
        let orientable = match self.peek() {
            Some(Tok::Sign(s)) => {
                let s = *s;
                self.pos += 1;
                s == Sign::Pos
            }
            _ => return Err(self.error(format!("expected `+` or `-`, found {}", self.describe()))),
        };
        self.expect(Tok::Close, "`)`")?;
        let mut boundary = Vec::new();
        while self.eat(Tok::Comma) {
            boundary.push(match self.peek() {
                Some(Tok::Word(_)) => BoundaryAttachment::ConstantCircle(self.label()?),
                _ => BoundaryAttachment::Word(self.list(false, Self::letter)?),
            });
        }
        if boundary.is_empty() {
            return Err(self.error("expected `,` and a boundary attachment"));
        }
        self.expect(Tok::Close, "`)`")?;
        let cell_type = CellType {
            genus,
            boundary_components,
            orientable,
        };
        Ok((label, cell_type, boundary))
    }
}

fn end_position(text: &str) -> (usize, usize) {
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses without structural validation.
pub fn parse_raw(text: &str) -> Result<RawComplex, EncodingError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
        end: end_position(text),
    };
    p.expect(Tok::Open, "`(`")?;
    let zero_cells = p.group(true, Parser::label)?;
    p.expect(Tok::Comma, "`,`")?;
    let one_cells = p.group(false, Parser::one_cell)?;
    p.expect(Tok::Comma, "`,`")?;
    let two_cells = p.group(false, Parser::two_cell)?;
    p.expect(Tok::Close, "`)`")?;
    if p.pos != p.tokens.len() {
        return Err(p.error(format!("trailing input {}", p.describe())));
    }
    Ok(RawComplex {
        zero_cells,
        one_cells,
        two_cells,
    })
}

pub fn parse_complex(text: &str) -> Result<ComplexSpec, EncodingError> {
    Ok(build_complex(parse_raw(text)?)?)
}

fn print_attachment(out: &mut String, a: &BoundaryAttachment) {
    match a {
        BoundaryAttachment::ConstantCircle(v) => out.push_str(v),
        BoundaryAttachment::Word(w) => {
            out.push('(');
            for (i, l) in w.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&l.one_cell);
                if l.sign == Sign::Neg {
                    out.push_str("^{-1}");
                }
            }
            out.push(')');
        }
    }
}

/// Canonical one-line form: cells in label order, no whitespace.
pub fn print_complex(c: &ComplexSpec) -> String {
    let mut out = String::from("((");
    let zeros: Vec<&str> = c.zero_cells().iter().map(String::as_str).collect();
    out.push_str(&zeros.join(","));
    out.push_str("),(");
    for (i, (l, e)) in c.one_cells().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "({l},({},{}))", e.start, e.end);
    }
    out.push_str("),(");
    for (i, (l, x)) in c.two_cells().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let t = x.cell_type;
        let sign = if t.orientable { '+' } else { '-' };
        let _ = write!(out, "({l},({},{},{sign})", t.boundary_components, t.genus);
        for a in &x.boundary {
            out.push(',');
            print_attachment(&mut out, a);
        }
        out.push(')');
    }
    out.push_str("))");
    out
}

/// `X=1,Y=1,Z=-2`; empty text is the zero class.
pub fn parse_class(text: &str, c: &ComplexSpec) -> Result<ClassExpression, EncodingError> {
    let mut out = ClassExpression::new();
    for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (label, value) = entry
            .split_once('=')
            .ok_or_else(|| EncodingError::IntegerSyntax(entry.to_string()))?;
        let label = label.trim();
        let value = value.trim();
        let n: i64 = value
            .parse()
            .map_err(|_| EncodingError::IntegerSyntax(value.to_string()))?;
        match c.two_cell(label) {
            None => return Err(EncodingError::UnknownCell(label.to_string())),
            Some(x) if !x.cell_type.orientable => {
                return Err(EncodingError::NonOrientableCell(label.to_string()))
            }
            _ => {}
        }
        if out.insert(label.to_string(), n).is_some() {
            return Err(EncodingError::Duplicate(label.to_string()));
        }
    }
    Ok(out)
}

pub fn print_class(e: &ClassExpression) -> String {
    e.iter()
        .filter(|(_, &n)| n != 0)
        .map(|(l, n)| format!("{l}={n}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub fn parse_corner_address(text: &str) -> Option<CornerAddress> {
    let mut parts = text.trim().rsplitn(3, '.');
    let position = parts.next()?.parse().ok()?;
    let component = parts.next()?.parse().ok()?;
    let cell = parts.next()?;
    if cell.is_empty() {
        return None;
    }
    Some(CornerAddress::new(cell, component, position))
}

/// Lines `cell.comp.pos = p/q`, an optional `default = p/q`, and `#`
/// comments. The result assigns every corner of `c`.
pub fn parse_weights(text: &str, c: &ComplexSpec) -> Result<WeightFunction, EncodingError> {
    let corners: Vec<CornerAddress> = corner_table(c).iter().map(|k| k.address()).collect();
    let mut given: BTreeMap<CornerAddress, BigRational> = BTreeMap::new();
    let mut default = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| EncodingError::RationalSyntax {
            line: i + 1,
            text: line.to_string(),
        })?;
        let value = parse_rational(rhs).ok_or_else(|| EncodingError::RationalSyntax {
            line: i + 1,
            text: rhs.trim().to_string(),
        })?;
        let lhs = lhs.trim();
        if lhs == "default" {
            if default.replace(value).is_some() {
                return Err(EncodingError::Duplicate("default".into()));
            }
            continue;
        }
        let address = parse_corner_address(lhs)
            .filter(|a| corners.binary_search(a).is_ok())
            .ok_or_else(|| EncodingError::UnknownCorner(lhs.to_string()))?;
        if given.insert(address, value).is_some() {
            return Err(EncodingError::Duplicate(lhs.to_string()));
        }
    }
    corners
        .into_iter()
        .map(|a| match given.remove(&a).or_else(|| default.clone()) {
            Some(v) => Ok((a, v)),
            None => Err(EncodingError::MissingCorner(a.to_string())),
        })
        .collect()
}

pub fn print_weights(w: &WeightFunction) -> String {
    let mut out = String::new();
    for (a, v) in w {
        let _ = writeln!(out, "{a} = {v}");
    }
    out
}

/// Deterministic pretty JSON. Key order follows struct field order and
/// sorted maps.
pub fn export_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const HANDLEBODY_TEXT: &str = r"
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

    #[test]
    fn verbatim_handlebody() {
        let c = parse_complex(HANDLEBODY_TEXT).unwrap();
        assert_eq!(c.zero_cells().len(), 1);
        assert_eq!(c.one_cells().len(), 3);
        assert_eq!(c.two_cells().len(), 3);
        let z = c.two_cell("Z").unwrap();
        assert_eq!(z.boundary[0].letters().len(), 6);
        assert_eq!(z.boundary[0].letters()[3], Letter::neg("a"));
        let printed = print_complex(&c);
        assert!(printed.starts_with("((p),((a,(p,p)),"));
        assert_eq!(parse_complex(&printed).unwrap(), c);
    }

    #[test]
    fn empty_and_constant_circles() {
        assert_eq!(print_complex(&ComplexSpec::empty()), "((),(),())");
        assert_eq!(parse_complex("((),(),())").unwrap(), ComplexSpec::empty());
        let text = "((p,q),((a,(p,p))),((A,(2,1,+),(a),q)))";
        let c = parse_complex(text).unwrap();
        assert_eq!(
            c.two_cell("A").unwrap().boundary[1],
            BoundaryAttachment::ConstantCircle("q".into())
        );
        assert_eq!(print_complex(&c), text);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_complex("((p),\n  ((a,(p,p)),\n ((X,(1,0,+),(a)))").unwrap_err();
        assert!(matches!(err, EncodingError::Parse { line: 3, .. }), "{err}");
        let err = parse_complex("((p),((a,(p,p))),((X,(1,0,+),(a$))))").unwrap_err();
        assert!(matches!(err, EncodingError::Lex { line: 1, column: 32, .. }), "{err}");
        let err = parse_complex("((p) [unclosed,(),())").unwrap_err();
        assert!(matches!(err, EncodingError::Lex { column: 6, .. }));
        let err = parse_complex("((p),((a,(p,q))),())").unwrap_err();
        assert!(matches!(err, EncodingError::Complex(_)));
        // position counts characters of the original text, comments included
        let err = parse_complex("([\u{3b1}\u{3b2}] (p) x").unwrap_err();
        assert!(matches!(err, EncodingError::Parse { line: 1, column: 11, .. }), "{err}");
    }

    #[test]
    fn unicode_minus_and_labels() {
        let c = parse_complex("((v'),((\u{3b1}_1,(v',v'))),((x,(1,0,\u{2212}),(\u{3b1}_1,\u{3b1}_1))))").unwrap();
        assert!(!c.two_cell("x").unwrap().cell_type.orientable);
        assert!(print_complex(&c).contains("(1,0,-)"));
    }

    #[test]
    fn classes() {
        let c = parse_complex(HANDLEBODY_TEXT).unwrap();
        let e = parse_class("X=1, Y=1,Z=1", &c).unwrap();
        assert_eq!(e.len(), 3);
        assert!(parse_class("", &c).unwrap().is_empty());
        assert!(matches!(parse_class("W=1", &c), Err(EncodingError::UnknownCell(_))));
        assert!(matches!(parse_class("X=one", &c), Err(EncodingError::IntegerSyntax(_))));
        assert!(matches!(parse_class("X=1,X=2", &c), Err(EncodingError::Duplicate(_))));
        assert_eq!(print_class(&e), "X=1,Y=1,Z=1");
    }

    #[test]
    fn weights_files() {
        let c = parse_complex(HANDLEBODY_TEXT).unwrap();
        let w = parse_weights("default = 0", &c).unwrap();
        assert_eq!(w.len(), 14);
        assert!(w.values().all(|v| *v == BigRational::from_integer(0.into())));
        let w = parse_weights("# comment\nX.0.1 = 1/8\ndefault = -1/2\n", &c).unwrap();
        assert_eq!(w[&CornerAddress::new("X", 0, 1)], BigRational::new(1.into(), 8.into()));
        assert_eq!(w[&CornerAddress::new("Z", 0, 5)], BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_weights(&print_weights(&w), &c).unwrap(), w);
        assert!(matches!(parse_weights("X.0.99 = 1", &c), Err(EncodingError::UnknownCorner(_))));
        assert!(matches!(parse_weights("X.0.0 = 1", &c), Err(EncodingError::MissingCorner(_))));
        assert!(matches!(
            parse_weights("default = 1/0", &c),
            Err(EncodingError::RationalSyntax { line: 1, .. })
        ));
    }
}
