//! S-expression proof documents.
//!
//! ```text
//! (document (logic WF) (kind nd)
//!   (body (ImpI 1 "p -> p" (assume "p" 1))))
//!
//! (document (logic WF) (kind hilbert) (assumptions "p & q")
//!   (body (lines
//!     (line 1 "p & q" assume)
//!     (line 2 "p & q -> p" (axiom Ax3))
//!     (line 3 "p" (MP 1 2)))))
//! ```
//!
//! Natural-deduction nodes are `(Rule label... "conclusion" premise...)` with one
//! label (an integer or `_`) per discharge slot. Hilbert premises are 1-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{parse, Formula};
use crate::hilbert::{HilbertProof, Instantiation, Justification, Line, RuleId, SchemaId};
use crate::logic::LogicSpec;
use crate::natded::{Derivation, Inference, NdRule};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Body {
    Nd(Derivation),
    Hilbert {
        assumptions: Vec<Formula>,
        proof: HilbertProof,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofDocument {
    pub logic: LogicSpec,
    pub body: Body,
}

impl ProofDocument {
    pub fn nd(logic: LogicSpec, derivation: Derivation) -> Self {
        ProofDocument {
            logic,
            body: Body::Nd(derivation),
        }
    }

    pub fn hilbert(logic: LogicSpec, assumptions: Vec<Formula>, proof: HilbertProof) -> Self {
        ProofDocument {
            logic,
            body: Body::Hilbert { assumptions, proof },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Nd(_) => "nd",
            Body::Hilbert { .. } => "hilbert",
        }
    }

    pub fn assumption_set(&self) -> BTreeSet<Formula> {
        match &self.body {
            Body::Nd(_) => BTreeSet::new(),
            Body::Hilbert { assumptions, .. } => assumptions.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
enum Sexp {
    Symbol(String, usize),
    Str(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Symbol(_, o) | Sexp::Str(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

struct Reader<'a> {
    src: &'a str,
}

impl Reader<'_> {
    fn error(&self, offset: usize, message: impl Into<String>) -> DocumentError {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        DocumentError {
            line,
            column,
            message: message.into(),
        }
    }

    fn tokens(&self) -> Result<Sexp, DocumentError> {
        let bytes = self.src.as_bytes();
        let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
        let mut done: Option<Sexp> = None;
        let mut i = 0;
        let push = |stack: &mut Vec<(Vec<Sexp>, usize)>, done: &mut Option<Sexp>, item: Sexp| -> Result<(), DocumentError> {
            match stack.last_mut() {
                Some((items, _)) => items.push(item),
                None if done.is_none() => *done = Some(item),
                None => return Err(self.error(item.offset(), "trailing input after document")),
            }
            Ok(())
        };
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b'(' => {
                    stack.push((Vec::new(), i));
                    i += 1;
                }
                b')' => {
                    let (items, start) = stack.pop().ok_or_else(|| self.error(i, "unbalanced ')'"))?;
                    push(&mut stack, &mut done, Sexp::List(items, start))?;
                    i += 1;
                }
                b';' => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                    }
                }
                b'"' => {
                    let start = i;
                    i += 1;
                    let mut s = String::new();
                    loop {
                        let Some(ch) = self.src[i..].chars().next() else {
                            return Err(self.error(start, "unterminated string"));
                        };
                        i += ch.len_utf8();
                        match ch {
                            '"' => break,
                            '\\' => {
                                let Some(esc) = self.src[i..].chars().next() else {
                                    return Err(self.error(start, "unterminated string"));
                                };
                                i += esc.len_utf8();
                                s.push(esc);
                            }
                            other => s.push(other),
                        }
                    }
                    push(&mut stack, &mut done, Sexp::Str(s, start))?;
                }
                c if c.is_ascii_whitespace() => i += 1,
                _ => {
                    let start = i;
                    while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !b"()\";".contains(&bytes[i]) {
                        i += 1;
                    }
                    push(&mut stack, &mut done, Sexp::Symbol(self.src[start..i].to_string(), start))?;
                }
            }
        }
        if let Some((_, start)) = stack.last() {
            return Err(self.error(*start, "unbalanced '('"));
        }
        done.ok_or_else(|| self.error(0, "empty document"))
    }

    fn list<'s>(&self, s: &'s Sexp, what: &str) -> Result<&'s [Sexp], DocumentError> {
        match s {
            Sexp::List(items, _) => Ok(items),
            other => Err(self.error(other.offset(), format!("expected {what}"))),
        }
    }

    fn symbol<'s>(&self, s: &'s Sexp, what: &str) -> Result<&'s str, DocumentError> {
        match s {
            Sexp::Symbol(name, _) => Ok(name),
            other => Err(self.error(other.offset(), format!("expected {what}"))),
        }
    }

    fn formula(&self, s: &Sexp) -> Result<Formula, DocumentError> {
        match s {
            Sexp::Str(text, offset) => {
                parse(text).map_err(|e| self.error(*offset + 1 + e.position, format!("in formula: {}", e.message)))
            }
            other => Err(self.error(other.offset(), "expected a quoted formula")),
        }
    }

    fn head<'s>(&self, s: &'s Sexp, what: &str) -> Result<(&'s str, &'s [Sexp]), DocumentError> {
        let items = self.list(s, what)?;
        let (first, rest) = items
            .split_first()
            .ok_or_else(|| self.error(s.offset(), format!("expected {what}, found ()")))?;
        Ok((self.symbol(first, what)?, rest))
    }

    fn document(&self, s: &Sexp) -> Result<ProofDocument, DocumentError> {
        let (head, fields) = self.head(s, "(document ...)")?;
        if head != "document" {
            return Err(self.error(s.offset(), "expected (document ...)"));
        }
        let mut logic = None;
        let mut kind = None;
        let mut assumptions = None;
        let mut body = None;
        for field in fields {
            let (name, args) = self.head(field, "a document field")?;
            let one = || match args {
                [x] => Ok(x),
                _ => Err(self.error(field.offset(), format!("({name} ...) takes one argument"))),
            };
            match name {
                "logic" => {
                    let arg = one()?;
                    let text = self.symbol(arg, "a logic name")?;
                    logic = Some(text.parse::<LogicSpec>().map_err(|e| self.error(arg.offset(), e.to_string()))?);
                }
                "kind" => kind = Some((self.symbol(one()?, "nd or hilbert")?, field.offset())),
                "assumptions" => {
                    assumptions = Some(args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?)
                }
                "body" => body = Some(one()?),
                other => return Err(self.error(field.offset(), format!("unknown field {other:?}"))),
            }
        }
        let logic = logic.ok_or_else(|| self.error(s.offset(), "missing (logic ...)"))?;
        let (kind, kind_at) = kind.ok_or_else(|| self.error(s.offset(), "missing (kind ...)"))?;
        let body_sexp = body.ok_or_else(|| self.error(s.offset(), "missing (body ...)"))?;
        let body = match kind {
            "nd" => {
                if assumptions.is_some() {
                    return Err(self.error(s.offset(), "(assumptions ...) is only for hilbert documents"));
                }
                Body::Nd(self.derivation(body_sexp)?)
            }
            "hilbert" => Body::Hilbert {
                assumptions: assumptions.unwrap_or_default(),
                proof: self.hilbert(body_sexp)?,
            },
            other => return Err(self.error(kind_at, format!("unknown kind {other:?}"))),
        };
        Ok(ProofDocument { logic, body })
    }

    fn label(&self, s: &Sexp) -> Result<Option<Option<u32>>, DocumentError> {
        match s {
            Sexp::Symbol(t, _) if t == "_" => Ok(Some(None)),
            Sexp::Symbol(t, o) => t
                .parse::<u32>()
                .map(|n| Some(Some(n)))
                .map_err(|_| self.error(*o, format!("expected a label, got {t:?}"))),
            _ => Ok(None),
        }
    }

    fn derivation(&self, s: &Sexp) -> Result<Derivation, DocumentError> {
        let (head, rest) = self.head(s, "a derivation node")?;
        if head == "assume" {
            return match rest {
                [f] => Ok(Derivation::assume(self.formula(f)?)),
                [f, l] => match self.label(l)? {
                    Some(label) => Ok(Derivation {
                        conclusion: self.formula(f)?,
                        inference: Inference::Assumption { label },
                    }),
                    None => Err(self.error(l.offset(), "expected a label")),
                },
                _ => Err(self.error(s.offset(), "(assume \"formula\" [label])")),
            };
        }
        let rule: NdRule = head.parse().map_err(|e: String| self.error(s.offset(), e))?;
        let mut labels = Vec::new();
        let mut idx = 0;
        while let Some(item) = rest.get(idx) {
            match self.label(item)? {
                Some(l) => labels.push(l),
                None => break,
            }
            idx += 1;
        }
        let conclusion = self.formula(
            rest.get(idx)
                .ok_or_else(|| self.error(s.offset(), format!("{rule} node is missing its conclusion")))?,
        )?;
        let premises = rest[idx + 1..]
            .iter()
            .map(|p| self.derivation(p))
            .collect::<Result<Vec<_>, _>>()?;
        if premises.len() != rule.arity() {
            return Err(self.error(
                s.offset(),
                format!("{rule} takes {} premises, got {}", rule.arity(), premises.len()),
            ));
        }
        if labels.len() != rule.slots().len() {
            return Err(self.error(
                s.offset(),
                format!("{rule} takes {} labels, got {}", rule.slots().len(), labels.len()),
            ));
        }
        Ok(Derivation::rule(rule, labels, conclusion, premises))
    }

    fn hilbert(&self, s: &Sexp) -> Result<HilbertProof, DocumentError> {
        let (head, lines) = self.head(s, "(lines ...)")?;
        if head != "lines" {
            return Err(self.error(s.offset(), "expected (lines ...)"));
        }
        let mut out = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            let (head, parts) = self.head(line, "(line n \"formula\" justification)")?;
            let [number, formula, just] = parts else {
                return Err(self.error(line.offset(), "(line n \"formula\" justification)"));
            };
            if head != "line" || self.symbol(number, "a line number")? != (i + 1).to_string() {
                return Err(self.error(line.offset(), format!("expected (line {} ...)", i + 1)));
            }
            let formula = self.formula(formula)?;
            let justification = match just {
                Sexp::Symbol(t, _) if t == "assume" => Justification::Assumption,
                _ => {
                    let (name, args) = self.head(just, "a justification")?;
                    if name == "axiom" {
                        let (schema, binds) = args
                            .split_first()
                            .ok_or_else(|| self.error(just.offset(), "(axiom Schema (A \"f\")...)"))?;
                        let schema: SchemaId = self
                            .symbol(schema, "a schema name")?
                            .parse()
                            .map_err(|e: String| self.error(schema.offset(), e))?;
                        let mut instantiation = Instantiation::new();
                        for bind in binds {
                            let (var, value) = self.head(bind, "(Var \"formula\")")?;
                            let [value] = value else {
                                return Err(self.error(bind.offset(), "(Var \"formula\")"));
                            };
                            instantiation.insert(var.to_string(), self.formula(value)?);
                        }
                        Justification::Axiom {
                            schema,
                            instantiation,
                        }
                    } else {
                        let rule: RuleId = name.parse().map_err(|e: String| self.error(just.offset(), e))?;
                        let premises = args
                            .iter()
                            .map(|a| {
                                let t = self.symbol(a, "a line number")?;
                                match t.parse::<usize>() {
                                    Ok(n) if n >= 1 => Ok(n - 1),
                                    _ => Err(self.error(a.offset(), format!("bad line number {t:?}"))),
                                }
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Justification::Rule { rule, premises }
                    }
                }
            };
            out.push(Line {
                formula,
                justification,
            });
        }
        Ok(HilbertProof { lines: out })
    }
}

pub fn read_document(text: &str) -> Result<ProofDocument, DocumentError> {
    let reader = Reader { src: text };
    let sexp = reader.tokens()?;
    reader.document(&sexp)
}

/// Reads a bare derivation node such as `(ImpI 1 "p -> p" (assume "p" 1))`.
pub fn read_derivation(text: &str) -> Result<Derivation, DocumentError> {
    let reader = Reader { src: text };
    let sexp = reader.tokens()?;
    reader.derivation(&sexp)
}

fn quote(f: &Formula) -> String {
    format!("\"{f}\"")
}

fn label_text(l: &Option<u32>) -> String {
    l.map_or_else(|| "_".to_string(), |n| n.to_string())
}

fn write_node(d: &Derivation, indent: usize, out: &mut String) {
    match &d.inference {
        Inference::Assumption { label } => {
            let _ = write!(out, "(assume {}", quote(&d.conclusion));
            if let Some(l) = label {
                let _ = write!(out, " {l}");
            }
            out.push(')');
        }
        Inference::Rule {
            rule,
            labels,
            premises,
        } => {
            let _ = write!(out, "({rule}");
            for l in labels {
                let _ = write!(out, " {}", label_text(l));
            }
            let _ = write!(out, " {}", quote(&d.conclusion));
            for p in premises {
                out.push('\n');
                out.push_str(&" ".repeat(indent + 2));
                write_node(p, indent + 2, out);
            }
            out.push(')');
        }
    }
}

pub fn write_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write_node(d, 0, &mut out);
    out
}

pub fn write_hilbert(proof: &HilbertProof) -> String {
    let mut out = String::from("(lines");
    for (i, line) in proof.lines.iter().enumerate() {
        let _ = write!(out, "\n  (line {} {} ", i + 1, quote(&line.formula));
        match &line.justification {
            Justification::Assumption => out.push_str("assume"),
            Justification::Axiom {
                schema,
                instantiation,
            } => {
                let _ = write!(out, "(axiom {schema}");
                for (k, v) in instantiation {
                    let _ = write!(out, " ({k} {})", quote(v));
                }
                out.push(')');
            }
            Justification::Rule { rule, premises } => {
                let _ = write!(out, "({rule}");
                for p in premises {
                    let _ = write!(out, " {}", p + 1);
                }
                out.push(')');
            }
        }
        out.push(')');
    }
    out.push(')');
    out
}

fn indent_block(text: &str, by: usize) -> String {
    let pad = " ".repeat(by);
    text.lines().collect::<Vec<_>>().join(&format!("\n{pad}"))
}

pub fn write_document(doc: &ProofDocument) -> String {
    let mut out = format!("(document (logic {}) (kind {})", doc.logic, doc.kind());
    match &doc.body {
        Body::Nd(d) => {
            let _ = write!(out, "\n  (body\n    {}))", indent_block(&write_derivation(d), 4));
        }
        Body::Hilbert { assumptions, proof } => {
            if !assumptions.is_empty() {
                out.push_str("\n  (assumptions");
                for a in assumptions {
                    let _ = write!(out, " {}", quote(a));
                }
                out.push(')');
            }
            let _ = write!(out, "\n  (body\n    {}))", indent_block(&write_hilbert(proof), 4));
        }
    }
    out.push('\n');
    out
}
