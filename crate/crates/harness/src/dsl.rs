//! The expression language.
//!
//! ```text
//! expr    := atom | op "(" operand "," operand ")"
//! op      := "circ" | "star"
//! operand := expr "@" INT [ "." INT ]
//! atom    := "K" "(" INT ")" | "path" "(" INT ")" | "Fp" "(" INT ")"
//!          | "fan" "(" INT { ";" field } ")"
//! field   := "W" "=" lists | "a" "=" lists | "marks" "=" list
//! lists   := "[" [ list { "," list } ] "]"
//! list    := "[" [ INT { "," INT } ] "]"
//! ```
//!
//! `@f` names leaf `f` of the first atom of the operand; `@i.f` names leaf `f` of its `i`-th atom.

use std::fmt;
use std::ops::Range;

use bei_core::families::{MarkedGraph, Realization};
use bei_core::{Atom, Error as CoreError, FanSpec, GraphExpr, MarkRef, Op};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagnosticKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    /// Byte range into the source.
    pub span: Range<usize>,
    pub message: String,
    /// Empty for semantic errors.
    pub expected: Vec<String>,
}

impl Diagnostic {
    /// The offending source line with a caret underline.
    pub fn render(&self, source: &str) -> String {
        let start = source[..self.span.start.min(source.len())].rfind('\n').map_or(0, |i| i + 1);
        let end = source[start..].find('\n').map_or(source.len(), |i| start + i);
        let line = &source[start..end];
        let pad: String = source[start..self.span.start.min(end)]
            .chars()
            .map(|c| if c == '\t' { '\t' } else { ' ' })
            .collect();
        let width = source[self.span.start.min(end)..self.span.end.clamp(self.span.start, end)]
            .chars()
            .count()
            .max(1);
        format!("{self}\n  {line}\n  {pad}{}", "^".repeat(width))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Semantic => "semantic error",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    At,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("integer {v}"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::At => "@",
            Tok::Dot => ".",
            Tok::Ident(_) => "identifier",
            Tok::Int(_) => "integer",
            Tok::Eof => "end of input",
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, Range<usize>), (Range<usize>, String)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(c) = self.src[start..].chars().next() else {
            return Ok((Tok::Eof, start..start));
        };
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            '@' => Some(Tok::At),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start..self.pos));
        }
        if c.is_ascii_digit() {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = &self.src[start..self.pos];
            return text
                .parse::<u32>()
                .map(|v| (Tok::Int(v), start..self.pos))
                .map_err(|_| (start..self.pos, format!("integer {text} is too large")));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start..self.pos));
        }
        self.pos += c.len_utf8();
        Err((start..self.pos, format!("unexpected character `{c}`")))
    }
}

const EXPR_START: [&str; 6] = ["`K`", "`path`", "`Fp`", "`fan`", "`circ`", "`star`"];

struct Parser<'a> {
    src: &'a str,
    lexer: Lexer<'a>,
    tok: Tok,
    span: Range<usize>,
}

/// Realized subexpression, kept so marks can be checked as soon as a node closes.
struct Parsed {
    expr: GraphExpr,
    span: Range<usize>,
    real: Realization,
}

struct Mark {
    mark: MarkRef,
    atom_span: Option<Range<usize>>,
    label_span: Range<usize>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> PResult<Self> {
        let mut p = Parser { src, lexer: Lexer { src, pos: 0 }, tok: Tok::Eof, span: 0..0 };
        p.bump()?;
        Ok(p)
    }

    fn diag(&self, kind: DiagnosticKind, span: Range<usize>, message: String, expected: &[&str]) -> Diagnostic {
        let before = &self.src[..span.start];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        Diagnostic {
            kind,
            line,
            column,
            span,
            message,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn semantic(&self, span: Range<usize>, message: impl Into<String>) -> Diagnostic {
        self.diag(DiagnosticKind::Semantic, span, message.into(), &[])
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        self.diag(
            DiagnosticKind::Syntax,
            self.span.clone(),
            format!("unexpected {}", self.tok.describe()),
            expected,
        )
    }

    fn bump(&mut self) -> PResult<Range<usize>> {
        let prev = self.span.clone();
        match self.lexer.next() {
            Ok((t, s)) => {
                self.tok = t;
                self.span = s;
                Ok(prev)
            }
            Err((s, msg)) => Err(self.diag(DiagnosticKind::Syntax, s, msg, &[])),
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Range<usize>> {
        if self.tok == t {
            let s = self.span.clone();
            self.bump()?;
            Ok(s)
        } else {
            let want = format!("`{}`", t.symbol());
            Err(self.unexpected(&[&want]))
        }
    }

    fn int(&mut self) -> PResult<(u32, Range<usize>)> {
        if let Tok::Int(v) = self.tok {
            let s = self.span.clone();
            self.bump()?;
            Ok((v, s))
        } else {
            Err(self.unexpected(&["integer"]))
        }
    }

    fn expr(&mut self) -> PResult<Parsed> {
        let Tok::Ident(name) = self.tok.clone() else {
            return Err(self.unexpected(&EXPR_START));
        };
        let start = self.span.start;
        match name.as_str() {
            "circ" | "star" => {
                let op = if name == "circ" { Op::Circ } else { Op::Star };
                self.bump()?;
                self.expect(Tok::LParen)?;
                let left = self.expr()?;
                let lmark = self.mark()?;
                self.expect(Tok::Comma)?;
                let right = self.expr()?;
                let rmark = self.mark()?;
                let end = self.expect(Tok::RParen)?.end;
                self.node(op, left, lmark, right, rmark, start..end)
            }
            "K" | "path" | "Fp" => {
                self.bump()?;
                self.expect(Tok::LParen)?;
                let (v, vspan) = self.int()?;
                let end = self.expect(Tok::RParen)?.end;
                let atom = match name.as_str() {
                    "K" => Atom::Complete(v),
                    "path" => Atom::Path(v),
                    _ => Atom::Fp(v),
                };
                self.atom(atom, start..end, |_| vspan.clone())
            }
            "fan" => self.fan(start),
            _ => Err(self.unexpected(&EXPR_START)),
        }
    }

    fn mark(&mut self) -> PResult<Mark> {
        self.expect(Tok::At)?;
        let (first, first_span) = self.int()?;
        if self.tok == Tok::Dot {
            self.bump()?;
            let (label, label_span) = self.int()?;
            Ok(Mark {
                mark: MarkRef { atom: first as usize, label },
                atom_span: Some(first_span),
                label_span,
            })
        } else {
            Ok(Mark { mark: MarkRef { atom: 1, label: first }, atom_span: None, label_span: first_span })
        }
    }

    fn list(&mut self) -> PResult<(Vec<u32>, Vec<Range<usize>>, Range<usize>)> {
        let start = self.expect(Tok::LBracket)?.start;
        let (mut vals, mut spans) = (Vec::new(), Vec::new());
        if self.tok != Tok::RBracket {
            loop {
                let (v, s) = self.int()?;
                vals.push(v);
                spans.push(s);
                match self.tok {
                    Tok::Comma => {
                        self.bump()?;
                    }
                    Tok::RBracket => break,
                    _ => return Err(self.unexpected(&["`,`", "`]`"])),
                }
            }
        }
        let end = self.expect(Tok::RBracket)?.end;
        Ok((vals, spans, start..end))
    }

    #[allow(clippy::type_complexity)]
    fn lists(&mut self) -> PResult<(Vec<Vec<u32>>, Vec<Vec<Range<usize>>>, Range<usize>)> {
        let start = self.expect(Tok::LBracket)?.start;
        let (mut vals, mut spans) = (Vec::new(), Vec::new());
        if self.tok != Tok::RBracket {
            loop {
                if self.tok != Tok::LBracket {
                    return Err(self.unexpected(&["`[`"]));
                }
                let (v, s, _) = self.list()?;
                vals.push(v);
                spans.push(s);
                match self.tok {
                    Tok::Comma => {
                        self.bump()?;
                    }
                    Tok::RBracket => break,
                    _ => return Err(self.unexpected(&["`,`", "`]`"])),
                }
            }
        }
        let end = self.expect(Tok::RBracket)?.end;
        Ok((vals, spans, start..end))
    }

    fn fan(&mut self, start: usize) -> PResult<Parsed> {
        self.bump()?;
        self.expect(Tok::LParen)?;
        let (n, n_span) = self.int()?;
        let mut w = None;
        let mut a = None;
        let mut marks = None;
        loop {
            match self.tok {
                Tok::Semi => {
                    self.bump()?;
                }
                Tok::RParen => break,
                _ => return Err(self.unexpected(&["`;`", "`)`"])),
            }
            let Tok::Ident(field) = self.tok.clone() else {
                return Err(self.unexpected(&["`W`", "`a`", "`marks`"]));
            };
            let field_span = self.span.clone();
            let slot_taken = match field.as_str() {
                "W" => w.is_some(),
                "a" => a.is_some(),
                "marks" => marks.is_some(),
                _ => return Err(self.unexpected(&["`W`", "`a`", "`marks`"])),
            };
            if slot_taken {
                return Err(self.semantic(field_span, format!("field `{field}` given twice")));
            }
            self.bump()?;
            self.expect(Tok::Eq)?;
            match field.as_str() {
                "W" => w = Some(self.lists()?),
                "a" => a = Some(self.lists()?),
                _ => marks = Some(self.list()?),
            }
        }
        let end = self.expect(Tok::RParen)?.end;
        let whole = start..end;
        let (partition, w_spans, w_span) = w.unwrap_or((Vec::new(), Vec::new(), whole.clone()));
        let (sizes, a_spans, a_span) = match a {
            Some(v) => v,
            None => {
                let sizes = partition.iter().map(|p| (2..=p.len() as u32 + 1).collect()).collect();
                (sizes, Vec::new(), whole.clone())
            }
        };
        let mut spec = FanSpec { n, partition, branch_sizes: sizes, marks: None };
        let mut marks_span = whole.clone();
        let mut mark_items: Vec<(u32, Range<usize>)> = Vec::new();
        if let Some((m, spans, s)) = marks {
            mark_items = m.iter().copied().zip(spans).collect();
            spec.marks = Some(m);
            marks_span = s;
        }
        let locate = |e: &CoreError| -> Range<usize> {
            match e {
                CoreError::BranchSizeViolation { i, j, .. } => a_spans
                    .get(i - 1)
                    .and_then(|r| r.get(j - 1))
                    .cloned()
                    .unwrap_or_else(|| a_span.clone()),
                CoreError::InvalidPartition(_) if w_spans.is_empty() => whole.clone(),
                CoreError::InvalidPartition(_) => w_span.start..a_span.end.max(w_span.end),
                CoreError::MarksNotLeaves(bad) => mark_items
                    .iter()
                    .find(|(v, _)| bad.first() == Some(v))
                    .map(|(_, s)| s.clone())
                    .unwrap_or_else(|| marks_span.clone()),
                CoreError::InvalidSpec(msg) if msg.contains("K_") => n_span.clone(),
                CoreError::InvalidSpec(msg) if msg.contains("mark") => marks_span.clone(),
                _ => whole.clone(),
            }
        };
        self.atom(Atom::Fan(spec), whole.clone(), locate)
    }

    fn atom(&self, atom: Atom, span: Range<usize>, locate: impl Fn(&CoreError) -> Range<usize>) -> PResult<Parsed> {
        let expr = GraphExpr::atom(atom);
        match expr.realize() {
            Ok(real) => Ok(Parsed { expr, span, real }),
            Err(e) => Err(self.semantic(locate(&e), e.to_string())),
        }
    }

    fn resolve_mark(&self, side: &Parsed, m: &Mark) -> PResult<MarkRef> {
        let count = side.real.atoms.len();
        let index = m.mark.atom;
        let atom_span = m.atom_span.clone().unwrap_or_else(|| m.label_span.clone());
        if index == 0 || index > count {
            let msg = if count == 1 {
                format!("atom index {index} out of range; this operand is a single atom")
            } else {
                format!("atom index {index} out of range; this operand has atoms 1..={count}")
            };
            return Err(self.semantic(atom_span, msg));
        }
        let placed = &side.real.atoms[index - 1];
        let label = m.mark.label;
        let global = placed.global(label);
        if label == 0 || label > placed.width || !side.real.marked.marks.contains(&global) {
            let status = if label >= 1 && label <= placed.width && side.real.marked.consumed.contains(&global) {
                "was already consumed"
            } else {
                "is not a marked leaf"
            };
            let avail = available(&side.real);
            return Err(self.semantic(
                m.label_span.clone(),
                format!("vertex {label} of atom {index} ({}) {status}; available marks: {avail}", placed.atom),
            ));
        }
        Ok(MarkRef { atom: index - 1, label })
    }

    fn node(
        &self,
        op: Op,
        left: Parsed,
        lmark: Mark,
        right: Parsed,
        rmark: Mark,
        span: Range<usize>,
    ) -> PResult<Parsed> {
        let lm = self.resolve_mark(&left, &lmark)?;
        let rm = self.resolve_mark(&right, &rmark)?;
        if op == Op::Circ {
            for side in [&left, &right] {
                if is_p2(&side.real.marked) {
                    return Err(self.semantic(side.span.clone(), "circ is undefined when an operand is the path P_2"));
                }
            }
        }
        let expr = GraphExpr::Node { op, left: Box::new(left.expr), lmark: lm, right: Box::new(right.expr), rmark: rm };
        match expr.realize() {
            Ok(real) => Ok(Parsed { expr, span, real }),
            Err(e) => Err(self.semantic(span, e.to_string())),
        }
    }
}

fn is_p2(g: &MarkedGraph) -> bool {
    g.graph.num_vertices() == 2 && g.graph.num_edges() == 1
}

/// Free marks as the operand-relative `@i.f` references that name them.
fn available(real: &Realization) -> String {
    let mut out = Vec::new();
    for &g in &real.marked.marks {
        if let Some((i, p)) = real.atoms.iter().enumerate().find(|(_, p)| g > p.offset && g <= p.offset + p.width) {
            out.push(format!("{}.{}", i + 1, g - p.offset));
        }
    }
    if out.is_empty() {
        "none".into()
    } else {
        out.join(", ")
    }
}

pub fn parse_expr(text: &str) -> Result<GraphExpr, Diagnostic> {
    let mut p = Parser::new(text)?;
    let parsed = p.expr()?;
    if p.tok != Tok::Eof {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(parsed.expr)
}

/// Canonical text of an expression; `parse_expr(&emit(e)) == e`.
pub fn emit(expr: &GraphExpr) -> String {
    expr.to_string()
}
