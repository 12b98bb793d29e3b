//! Text format for programs.
//!
//! ```text
//! # comment
//! vars: x, y, z
//! g: x + y - 1            # ';'-separated lists
//! h: x - 3*y
//! blocks:
//!   map: x; y - z
//!   set: omega_E           # or omega_V, omega_S
//!   map: x; z
//!   set: boxes [0, inf] x [0, 0], [0, 0] x [0, inf]
//!   map: x; y; z
//!   set: union { polyhedron { le: [(-1, 0, 0) 0, (0, 1, 0) <= 0] eq: [(0, 0, 1) = 0] } ... }
//! objective: x + y
//! ```
//!
//! Orthogonal programs replace `blocks` by `kind: mpec | mpvc | mpsc` with `G:` and `H:` lists.
//! Values may span several lines while brackets are open. Only rational literals are accepted.

use crate::disjunctive::{DisjunctiveSet, Interval};
use crate::error::{Error, Result};
use crate::expr::{parse_list, Expr, VectorFunc};
use crate::geometry::{Polyhedron, Row};
use crate::model::{Block, Program};
use crate::ortho::{OrthoKind, OrthoProgram};
use crate::rational::{parse_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelFile {
    Generic(Program),
    Ortho(OrthoProgram),
}

impl ModelFile {
    /// Generic view; orthogonal programs become one `Ω` block per pair `(G_i, H_i)`.
    pub fn into_program(self) -> Result<Program> {
        match self {
            ModelFile::Generic(p) => Ok(p),
            ModelFile::Ortho(o) => Ok(o.to_global_program()),
        }
    }

    pub fn program(&self) -> Program {
        match self {
            ModelFile::Generic(p) => p.clone(),
            ModelFile::Ortho(o) => o.to_global_program(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelFile::Generic(p) => p.dim(),
            ModelFile::Ortho(o) => o.vars.len(),
        }
    }
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

fn depth_delta(s: &str) -> i32 {
    s.chars()
        .map(|c| match c {
            '{' | '[' | '(' => 1,
            '}' | ']' | ')' => -1,
            _ => 0,
        })
        .sum()
}

fn split_entries(text: &str) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    let mut depth = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        let key_end = trimmed.find(':');
        let is_key = depth == 0
            && key_end.map_or(false, |k| {
                let key = &trimmed[..k];
                !key.is_empty() && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            });
        if is_key {
            let k = key_end.unwrap();
            entries.push(Entry { key: trimmed[..k].to_string(), value: trimmed[k + 1..].to_string(), line: i + 1 });
        } else {
            match entries.last_mut() {
                Some(e) => {
                    e.value.push('\n');
                    e.value.push_str(line);
                }
                None => return Err(Error::Model { line: i + 1, message: "expected `key: value`".into() }),
            }
        }
        depth += depth_delta(line);
        if depth < 0 {
            return Err(Error::Model { line: i + 1, message: "unbalanced closing bracket".into() });
        }
    }
    if depth != 0 {
        return Err(Error::Model { line: text.lines().count(), message: "unclosed bracket".into() });
    }
    Ok(entries)
}

fn exprs(value: &str, vars: &[String], line: usize) -> Result<Vec<Expr>> {
    parse_list(value, vars).map_err(|e| Error::Model { line, message: e.to_string() })
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let entries = split_entries(text)?;
    let mut vars: Option<Vec<String>> = None;
    let mut g = Vec::new();
    let mut h = Vec::new();
    let mut big_g = Vec::new();
    let mut big_h = Vec::new();
    let mut kind = None;
    let mut objective = None;
    let mut blocks: Vec<(Option<VectorFunc>, Option<DisjunctiveSet>, usize)> = Vec::new();
    let mut in_blocks = false;
    for e in &entries {
        let need_vars = || {
            vars.clone().ok_or_else(|| Error::Model { line: e.line, message: "`vars` must come first".into() })
        };
        match e.key.as_str() {
            "vars" => {
                let names: Vec<String> = e
                    .value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect();
                for n in &names {
                    let ok = n.chars().next().map_or(false, |c| c.is_ascii_alphabetic() || c == '_')
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return Err(Error::Model { line: e.line, message: format!("bad variable name `{n}`") });
                    }
                }
                vars = Some(names);
            }
            "g" => g.extend(exprs(&e.value, &need_vars()?, e.line)?),
            "h" => h.extend(exprs(&e.value, &need_vars()?, e.line)?),
            "G" => big_g.extend(exprs(&e.value, &need_vars()?, e.line)?),
            "H" => big_h.extend(exprs(&e.value, &need_vars()?, e.line)?),
            "objective" => {
                let mut list = exprs(&e.value, &need_vars()?, e.line)?;
                if list.len() != 1 {
                    return Err(Error::Model { line: e.line, message: "objective must be one expression".into() });
                }
                objective = list.pop();
            }
            "kind" => {
                kind = Some(match e.value.trim() {
                    "mpec" => OrthoKind::Mpec,
                    "mpvc" => OrthoKind::Mpvc,
                    "mpsc" => OrthoKind::Mpsc,
                    other => return Err(Error::Model { line: e.line, message: format!("unknown kind `{other}`") }),
                })
            }
            "blocks" => {
                in_blocks = true;
                if !e.value.trim().is_empty() {
                    return Err(Error::Model { line: e.line, message: "`blocks:` takes no value".into() });
                }
            }
            "map" if in_blocks => {
                let v = need_vars()?;
                let comps = exprs(&e.value, &v, e.line)?;
                blocks.push((Some(VectorFunc::new(comps, v.len())), None, e.line));
            }
            "set" if in_blocks => {
                let set = parse_set(&e.value).map_err(|m| Error::Model { line: e.line, message: m })?;
                match blocks.last_mut() {
                    Some(b) if b.1.is_none() => b.1 = Some(set),
                    _ => return Err(Error::Model { line: e.line, message: "`set` must follow a `map`".into() }),
                }
            }
            other => return Err(Error::Model { line: e.line, message: format!("unknown key `{other}`") }),
        }
    }
    let vars = vars.ok_or(Error::Model { line: 1, message: "missing `vars`".into() })?;
    if let Some(kind) = kind {
        if !blocks.is_empty() {
            return Err(Error::Model { line: 1, message: "`kind` programs cannot also have `blocks`".into() });
        }
        if big_g.len() != big_h.len() {
            return Err(Error::Model { line: 1, message: "`G` and `H` must have the same length".into() });
        }
        return Ok(ModelFile::Ortho(OrthoProgram { vars, g, h, big_g, big_h, kind, objective }));
    }
    let mut out = Vec::new();
    for (map, set, line) in blocks {
        let (map, set) = match (map, set) {
            (Some(m), Some(s)) => (m, s),
            _ => return Err(Error::Model { line, message: "block without `set`".into() }),
        };
        if map.output_dim() != set.dim {
            return Err(Error::Model {
                line,
                message: format!("map has {} components but the set lives in R^{}", map.output_dim(), set.dim),
            });
        }
        out.push(Block { map, set });
    }
    let p = Program { vars, g, h, blocks: out, objective };
    p.validate()?;
    Ok(ModelFile::Generic(p))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Num(Q),
    Inf(bool),
    Sym(&'static str),
}

fn lex_set(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let sym = match c {
            '{' => Some("{"),
            '}' => Some("}"),
            '[' => Some("["),
            ']' => Some("]"),
            '(' => Some("("),
            ')' => Some(")"),
            ',' => Some(","),
            ':' => Some(":"),
            '=' => Some("="),
            _ => None,
        };
        if let Some(sym) = sym {
            out.push(Tok::Sym(sym));
            i += 1;
            continue;
        }
        if c == '<' && chars.get(i + 1) == Some(&'=') {
            out.push(Tok::Sym("<="));
            i += 2;
            continue;
        }
        let start = i;
        if c == '-' || c == '+' {
            i += 1;
        }
        while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '.' | '/')) {
            i += 1;
        }
        let word: String = chars[start..i].iter().collect();
        if word.is_empty() || word == "-" || word == "+" {
            return Err(format!("unexpected character `{c}` in set"));
        }
        let body = word.trim_start_matches(['-', '+']);
        if body == "inf" {
            out.push(Tok::Inf(!word.starts_with('-')));
        } else if body.chars().next().map_or(false, |c| c.is_ascii_digit() || c == '.') {
            out.push(Tok::Num(parse_q(&word).ok_or(format!("bad number `{word}`"))?));
        } else if word.starts_with(['-', '+']) {
            return Err(format!("unexpected `{word}`"));
        } else {
            out.push(Tok::Word(word));
        }
    }
    Ok(out)
}

struct SetParser {
    toks: Vec<Tok>,
    pos: usize,
}

impl SetParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, sym: &'static str) -> std::result::Result<(), String> {
        match self.next() {
            Some(Tok::Sym(s)) if s == sym => Ok(()),
            other => Err(format!("expected `{sym}`, found {other:?}")),
        }
    }

    fn eat(&mut self, sym: &'static str) -> bool {
        if self.peek() == Some(&Tok::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn num(&mut self) -> std::result::Result<Q, String> {
        match self.next() {
            Some(Tok::Num(q)) => Ok(q),
            other => Err(format!("expected a rational number, found {other:?}")),
        }
    }

    fn bound(&mut self) -> std::result::Result<Option<Q>, String> {
        match self.next() {
            Some(Tok::Num(q)) => Ok(Some(q)),
            Some(Tok::Inf(_)) => Ok(None),
            other => Err(format!("expected a bound, found {other:?}")),
        }
    }

    fn interval(&mut self) -> std::result::Result<Interval, String> {
        self.expect("[")?;
        let lo_tok = self.peek().cloned();
        let lo = self.bound()?;
        if lo_tok == Some(Tok::Inf(true)) {
            return Err("lower bound cannot be +inf".into());
        }
        self.expect(",")?;
        let hi_tok = self.peek().cloned();
        let hi = self.bound()?;
        if hi_tok == Some(Tok::Inf(false)) {
            return Err("upper bound cannot be -inf".into());
        }
        self.expect("]")?;
        Ok((lo, hi))
    }

    fn polyhedron(&mut self) -> std::result::Result<(usize, Vec<Row>), String> {
        self.expect("{")?;
        let mut rows = Vec::new();
        let mut dim = None;
        while !self.eat("}") {
            let kind = match self.next() {
                Some(Tok::Word(w)) if w == "le" || w == "eq" => w,
                other => return Err(format!("expected `le` or `eq`, found {other:?}")),
            };
            self.expect(":")?;
            self.expect("[")?;
            if !self.eat("]") {
                loop {
                    self.expect("(")?;
                    let mut normal = vec![self.num()?];
                    while self.eat(",") {
                        normal.push(self.num()?);
                    }
                    self.expect(")")?;
                    if kind == "le" {
                        self.eat("<=");
                    } else {
                        self.eat("=");
                    }
                    let rhs = self.num()?;
                    if *dim.get_or_insert(normal.len()) != normal.len() {
                        return Err("rows of different lengths".into());
                    }
                    rows.push(if kind == "le" { Row::le(normal, rhs) } else { Row::eq(normal, rhs) });
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect("]")?;
            }
        }
        Ok((dim.ok_or("polyhedron without rows; its dimension is unknown")?, rows))
    }
}

fn parse_set(text: &str) -> std::result::Result<DisjunctiveSet, String> {
    let mut p = SetParser { toks: lex_set(text)?, pos: 0 };
    let set = match p.next() {
        Some(Tok::Word(w)) => match w.as_str() {
            "omega_E" => DisjunctiveSet::omega_e(),
            "omega_V" => DisjunctiveSet::omega_v(),
            "omega_S" => DisjunctiveSet::omega_s(),
            "boxes" => {
                let mut boxes = Vec::new();
                loop {
                    let mut b = vec![p.interval()?];
                    while matches!(p.peek(), Some(Tok::Word(w)) if w == "x") {
                        p.pos += 1;
                        b.push(p.interval()?);
                    }
                    boxes.push(b);
                    if !p.eat(",") {
                        break;
                    }
                }
                DisjunctiveSet::boxes(&boxes).map_err(|e| e.to_string())?
            }
            "polyhedron" => {
                let (dim, rows) = p.polyhedron()?;
                DisjunctiveSet::single(Polyhedron::new(dim, rows).map_err(|e| e.to_string())?)
            }
            "union" => {
                p.expect("{")?;
                let mut pieces = Vec::new();
                while !p.eat("}") {
                    match p.next() {
                        Some(Tok::Word(w)) if w == "polyhedron" => {
                            let (dim, rows) = p.polyhedron()?;
                            pieces.push(Polyhedron::new(dim, rows).map_err(|e| e.to_string())?);
                        }
                        other => return Err(format!("expected `polyhedron`, found {other:?}")),
                    }
                }
                let dim = pieces.first().map_or(0, |c| c.dim);
                DisjunctiveSet::new(dim, pieces).map_err(|e| e.to_string())?
            }
            other => return Err(format!("unknown set `{other}`")),
        },
        other => return Err(format!("expected a set, found {other:?}")),
    };
    if p.pos != p.toks.len() {
        return Err("trailing input after set".into());
    }
    Ok(set)
}
