//! The structure-file format: line-oriented plain text with named sections.
//!
//! ```text
//! kleene_algebra K { elements: 2 ; zero: 0 ; one: 1 ;
//!                    add: [[0,1],[1,1]] ; mul: [[0,0],[0,1]] ; star: [1,1] }
//! kleene_algebra M { builtin: mat(K,2) }
//! module P { over_left: M ; over_right: K ; size: 4 ; zero: 0 ;
//!            add: [[...]] ; left_action: [[...]] ; right_action: [[...]] }
//! hom h { from: K ; to: M ; map: [0,15] }
//! idempotent e { in: M ; index: 9 }
//! tensor T { left: P ; right: Q ; module: PQ ; pure: [[...]] }
//! witness W { k: K ; s: M ; p: P ; q: Q ; tpq: PQ ; tqp: QP ;
//!             u: [...] ; v: [...] ; pure_pq: [[...]] ; pure_qp: [[...]] }
//! ```
//!
//! Tables are row-major index matrices; `#` starts a line comment. Parsing
//! validates dimensions and references only; axiom checking is a command.

use std::fmt::Write as _;
use std::sync::Arc;

use kam_core::{
    catalog, ActionSide, AlgebraHom, KamError, KleeneAlgebra, KleeneModule, Limits,
};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone)]
enum Raw {
    Int(usize),
    Name(String),
    Vector(Vec<usize>),
    Matrix(Vec<Vec<usize>>),
}

struct Section {
    kind: String,
    name: String,
    line: usize,
    entries: Vec<(String, Raw, usize)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&(String, Raw, usize)> {
        self.entries.iter().find(|(k, _, _)| k == key)
    }

    fn int(&self, key: &str) -> Result<usize, ParseError> {
        match self.get(key) {
            Some((_, Raw::Int(v), _)) => Ok(*v),
            Some((_, _, line)) => Err(ParseError {
                line: *line,
                message: format!("section {}: {key} must be an integer", self.name),
            }),
            None => Err(ParseError {
                line: self.line,
                message: format!("section {}: missing key {key}", self.name),
            }),
        }
    }

    fn name_value(&self, key: &str) -> Result<String, ParseError> {
        match self.get(key) {
            Some((_, Raw::Name(v), _)) => Ok(v.clone()),
            Some((_, Raw::Int(v), _)) => Ok(v.to_string()),
            Some((_, _, line)) => Err(ParseError {
                line: *line,
                message: format!("section {}: {key} must be a name", self.name),
            }),
            None => Err(ParseError {
                line: self.line,
                message: format!("section {}: missing key {key}", self.name),
            }),
        }
    }

    fn vector(&self, key: &str) -> Result<Vec<usize>, ParseError> {
        match self.get(key) {
            Some((_, Raw::Vector(v), _)) => Ok(v.clone()),
            Some((_, _, line)) => Err(ParseError {
                line: *line,
                message: format!("section {}: {key} must be a vector", self.name),
            }),
            None => Err(ParseError {
                line: self.line,
                message: format!("section {}: missing key {key}", self.name),
            }),
        }
    }

    fn matrix(&self, key: &str) -> Result<Vec<Vec<usize>>, ParseError> {
        match self.get(key) {
            Some((_, Raw::Matrix(v), _)) => Ok(v.clone()),
            Some((_, Raw::Vector(v), _)) if v.is_empty() => Ok(Vec::new()),
            Some((_, _, line)) => Err(ParseError {
                line: *line,
                message: format!("section {}: {key} must be a matrix", self.name),
            }),
            None => Err(ParseError {
                line: self.line,
                message: format!("section {}: missing key {key}", self.name),
            }),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Int(usize),
    Punct(char),
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
        }
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize)>, ParseError> {
        loop {
            match self.chars.peek() {
                None => return Ok(None),
                Some('\n') => {
                    self.line += 1;
                    self.chars.next();
                }
                Some(c) if c.is_whitespace() => {
                    self.chars.next();
                }
                Some('#') => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.chars.next();
                    }
                }
                Some(&c) if "{}[],;:".contains(c) => {
                    self.chars.next();
                    return Ok(Some((Tok::Punct(c), self.line)));
                }
                Some(&c) if c.is_ascii_digit() => {
                    let mut v = 0usize;
                    while let Some(&d) = self.chars.peek() {
                        if let Some(digit) = d.to_digit(10) {
                            v = v * 10 + digit as usize;
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    return Ok(Some((Tok::Int(v), self.line)));
                }
                Some(&c) if c.is_alphanumeric() || "_().".contains(c) => {
                    let mut word = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if d.is_alphanumeric() || "_().".contains(d) {
                            word.push(d);
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    return Ok(Some((Tok::Word(word), self.line)));
                }
                Some(&c) => {
                    return Err(ParseError {
                        line: self.line,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
    }
}

fn parse_sections(text: &str) -> Result<Vec<Section>, ParseError> {
    let mut lx = Lexer::new(text);
    let mut toks: Vec<(Tok, usize)> = Vec::new();
    while let Some(t) = lx.next_tok()? {
        toks.push(t);
    }
    let mut i = 0usize;
    let mut out = Vec::new();
    while i < toks.len() {
        let (kind, kind_line) = match &toks[i] {
            (Tok::Word(w), l) => (w.clone(), *l),
            (t, l) => {
                return Err(ParseError {
                    line: *l,
                    message: format!("expected a section keyword, found {t:?}"),
                })
            }
        };
        if !matches!(
            kind.as_str(),
            "kleene_algebra" | "module" | "hom" | "idempotent" | "tensor" | "witness"
        ) {
            return Err(ParseError {
                line: kind_line,
                message: format!("unknown section keyword {kind}"),
            });
        }
        i += 1;
        let (name, name_line) = match toks.get(i) {
            Some((Tok::Word(w), l)) => (w.clone(), *l),
            other => {
                return Err(ParseError {
                    line: other.map(|(_, l)| *l).unwrap_or(kind_line),
                    message: format!("section {kind}: expected a name"),
                })
            }
        };
        i += 1;
        match toks.get(i) {
            Some((Tok::Punct('{'), _)) => i += 1,
            other => {
                return Err(ParseError {
                    line: other.map(|(_, l)| *l).unwrap_or(name_line),
                    message: format!("section {name}: expected '{{'"),
                })
            }
        }
        let mut entries = Vec::new();
        loop {
            match toks.get(i) {
                Some((Tok::Punct('}'), _)) => {
                    i += 1;
                    break;
                }
                Some((Tok::Punct(';'), _)) => {
                    i += 1;
                }
                Some((Tok::Word(key), key_line)) => {
                    let key = key.clone();
                    let key_line = *key_line;
                    i += 1;
                    match toks.get(i) {
                        Some((Tok::Punct(':'), _)) => i += 1,
                        other => {
                            return Err(ParseError {
                                line: other.map(|(_, l)| *l).unwrap_or(key_line),
                                message: format!("section {name}: expected ':' after {key}"),
                            })
                        }
                    }
                    let value = parse_value(&toks, &mut i, &name)?;
                    entries.push((key, value, key_line));
                }
                Some((t, l)) => {
                    return Err(ParseError {
                        line: *l,
                        message: format!("section {name}: unexpected {t:?}"),
                    })
                }
                None => {
                    return Err(ParseError {
                        line: name_line,
                        message: format!("section {name}: missing closing '}}'"),
                    })
                }
            }
        }
        out.push(Section {
            kind,
            name,
            line: kind_line,
            entries,
        });
    }
    Ok(out)
}

fn parse_value(toks: &[(Tok, usize)], i: &mut usize, section: &str) -> Result<Raw, ParseError> {
    match toks.get(*i) {
        Some((Tok::Int(v), _)) => {
            *i += 1;
            Ok(Raw::Int(*v))
        }
        Some((Tok::Word(w), _)) => {
            let mut name = w.clone();
            *i += 1;
            // Specs like mat(K0,3) lex as several tokens; rejoin up to the
            // entry separator.
            while let Some((tok, _)) = toks.get(*i) {
                match tok {
                    Tok::Word(w2) => name.push_str(w2),
                    Tok::Int(v) => name.push_str(&v.to_string()),
                    Tok::Punct(',') => name.push(','),
                    _ => break,
                }
                *i += 1;
            }
            Ok(Raw::Name(name))
        }
        Some((Tok::Punct('['), line)) => {
            let line = *line;
            *i += 1;
            // Either a flat vector of ints or a matrix of vectors.
            let mut ints = Vec::new();
            let mut rows: Vec<Vec<usize>> = Vec::new();
            loop {
                match toks.get(*i) {
                    Some((Tok::Punct(']'), _)) => {
                        *i += 1;
                        break;
                    }
                    Some((Tok::Punct(','), _)) => {
                        *i += 1;
                    }
                    Some((Tok::Int(v), _)) => {
                        ints.push(*v);
                        *i += 1;
                    }
                    Some((Tok::Punct('['), _)) => {
                        *i += 1;
                        let mut row = Vec::new();
                        loop {
                            match toks.get(*i) {
                                Some((Tok::Punct(']'), _)) => {
                                    *i += 1;
                                    break;
                                }
                                Some((Tok::Punct(','), _)) => {
                                    *i += 1;
                                }
                                Some((Tok::Int(v), _)) => {
                                    row.push(*v);
                                    *i += 1;
                                }
                                other => {
                                    return Err(ParseError {
                                        line: other.map(|(_, l)| *l).unwrap_or(line),
                                        message: format!(
                                            "section {section}: malformed inner row"
                                        ),
                                    })
                                }
                            }
                        }
                        rows.push(row);
                    }
                    other => {
                        return Err(ParseError {
                            line: other.map(|(_, l)| *l).unwrap_or(line),
                            message: format!("section {section}: malformed table"),
                        })
                    }
                }
            }
            if rows.is_empty() {
                Ok(Raw::Vector(ints))
            } else if ints.is_empty() {
                Ok(Raw::Matrix(rows))
            } else {
                Err(ParseError {
                    line,
                    message: format!("section {section}: mixed vector and matrix entries"),
                })
            }
        }
        other => Err(ParseError {
            line: other.map(|(_, l)| *l).unwrap_or(1),
            message: format!("section {section}: expected a value"),
        }),
    }
}

/// Tensor section contents, resolved against the catalog.
pub struct TensorEntry {
    pub left: String,
    pub right: String,
    pub module: String,
    pub pure: Vec<Vec<usize>>,
}

/// Witness section contents, resolved against the catalog.
pub struct WitnessEntry {
    pub k: String,
    pub s: String,
    pub p: String,
    pub q: String,
    pub tpq: String,
    pub tqp: String,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub pure_pq: Vec<Vec<usize>>,
    pub pure_qp: Vec<Vec<usize>>,
}

/// A parsed structure file with every reference resolved.
pub struct Catalog {
    pub algebras: Vec<(String, Arc<KleeneAlgebra>)>,
    pub modules: Vec<(String, Arc<KleeneModule>)>,
    pub homs: Vec<(String, AlgebraHom)>,
    pub idempotents: Vec<(String, String, usize)>,
    pub tensors: Vec<(String, TensorEntry)>,
    pub witnesses: Vec<(String, WitnessEntry)>,
}

impl Catalog {
    pub fn algebra(&self, name: &str) -> Option<&Arc<KleeneAlgebra>> {
        self.algebras
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| a)
    }

    pub fn module(&self, name: &str) -> Option<&Arc<KleeneModule>> {
        self.modules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    pub fn hom(&self, name: &str) -> Option<&AlgebraHom> {
        self.homs.iter().find(|(n, _, ..)| n == name).map(|(_, h)| h)
    }
}

fn flat(table: &[Vec<usize>], rows: usize, cols: usize, what: &str, line: usize) -> Result<Vec<u32>, ParseError> {
    if table.len() != rows {
        return Err(ParseError {
            line,
            message: format!("{what}: expected {rows} rows, found {}", table.len()),
        });
    }
    let mut out = Vec::with_capacity(rows * cols);
    for row in table {
        if row.len() != cols {
            return Err(ParseError {
                line,
                message: format!("{what}: expected {cols} columns, found {}", row.len()),
            });
        }
        for &v in row {
            out.push(v as u32);
        }
    }
    Ok(out)
}

/// Parses a structure file into a resolved catalog. Dimension and reference
/// errors carry line numbers; no axioms are checked here.
pub fn parse_structure_file(text: &str, limits: &Limits) -> Result<Catalog, ParseError> {
    let sections = parse_sections(text)?;
    let mut cat = Catalog {
        algebras: Vec::new(),
        modules: Vec::new(),
        homs: Vec::new(),
        idempotents: Vec::new(),
        tensors: Vec::new(),
        witnesses: Vec::new(),
    };
    let dangling = |line: usize, what: &str, name: &str| ParseError {
        line,
        message: format!("dangling reference: {what} {name} is not declared"),
    };
    for s in sections {
        match s.kind.as_str() {
            "kleene_algebra" => {
                if let Some((_, raw, line)) = s.get("builtin") {
                    let spec = match raw {
                        Raw::Name(n) => n.clone(),
                        _ => {
                            return Err(ParseError {
                                line: *line,
                                message: "builtin must be a spec".to_string(),
                            })
                        }
                    };
                    // A builtin spec may reference an already-declared base
                    // by name, e.g. mat(K,2).
                    let alg = if let Some(rest) =
                        spec.strip_prefix("mat(").and_then(|r| r.strip_suffix(')'))
                    {
                        let (base, dim) = rest.rsplit_once(',').ok_or_else(|| ParseError {
                            line: *line,
                            message: format!("bad matrix spec {spec}"),
                        })?;
                        let dim: usize = dim.trim().parse().map_err(|_| ParseError {
                            line: *line,
                            message: format!("bad matrix dimension in {spec}"),
                        })?;
                        let base_alg = match cat.algebra(base.trim()) {
                            Some(a) => Arc::clone(a),
                            None => catalog::builtin_algebra(base.trim(), limits).map_err(|e| {
                                ParseError {
                                    line: *line,
                                    message: e.to_string(),
                                }
                            })?,
                        };
                        KleeneAlgebra::matrix(&base_alg, dim, limits).map_err(|e| ParseError {
                            line: *line,
                            message: e.to_string(),
                        })?
                    } else {
                        catalog::builtin_algebra(&spec, limits).map_err(|e| ParseError {
                            line: *line,
                            message: e.to_string(),
                        })?
                    };
                    cat.algebras.push((s.name.clone(), alg));
                    continue;
                }
                let size = s.int("elements")?;
                let zero = s.int("zero")?;
                let one = s.int("one")?;
                let add = flat(&s.matrix("add")?, size, size, "add", s.line)?;
                let mul = flat(&s.matrix("mul")?, size, size, "mul", s.line)?;
                let star_rows = s.vector("star")?;
                if star_rows.len() != size {
                    return Err(ParseError {
                        line: s.line,
                        message: format!("star: expected {size} entries"),
                    });
                }
                let star = star_rows.iter().map(|&v| v as u32).collect();
                let alg = KleeneAlgebra::from_tables(s.name.clone(), size, zero, one, add, mul, star)
                    .map_err(|e| ParseError {
                        line: s.line,
                        message: e.to_string(),
                    })?;
                cat.algebras.push((s.name.clone(), alg));
            }
            "module" => {
                let size = s.int("size")?;
                let zero = s.int("zero")?;
                let add = flat(&s.matrix("add")?, size, size, "add", s.line)?;
                let left = match s.get("over_left") {
                    Some(_) => {
                        let name = s.name_value("over_left")?;
                        let alg = cat
                            .algebra(&name)
                            .ok_or_else(|| dangling(s.line, "algebra", &name))?;
                        let table = flat(
                            &s.matrix("left_action")?,
                            alg.size(),
                            size,
                            "left_action",
                            s.line,
                        )?;
                        Some(ActionSide {
                            algebra: Arc::clone(alg),
                            table,
                        })
                    }
                    None => None,
                };
                let right = match s.get("over_right") {
                    Some(_) => {
                        let name = s.name_value("over_right")?;
                        let alg = cat
                            .algebra(&name)
                            .ok_or_else(|| dangling(s.line, "algebra", &name))?;
                        let table = flat(
                            &s.matrix("right_action")?,
                            size,
                            alg.size(),
                            "right_action",
                            s.line,
                        )?;
                        Some(ActionSide {
                            algebra: Arc::clone(alg),
                            table,
                        })
                    }
                    None => None,
                };
                let module =
                    KleeneModule::from_tables(s.name.clone(), size, zero, add, left, right, limits)
                        .map_err(|e| ParseError {
                            line: s.line,
                            message: e.to_string(),
                        })?;
                cat.modules.push((s.name.clone(), module));
            }
            "hom" => {
                let from = s.name_value("from")?;
                let to = s.name_value("to")?;
                let source = cat
                    .algebra(&from)
                    .ok_or_else(|| dangling(s.line, "algebra", &from))?
                    .clone();
                let target = cat
                    .algebra(&to)
                    .ok_or_else(|| dangling(s.line, "algebra", &to))?
                    .clone();
                let map = s.vector("map")?.iter().map(|&v| v as u32).collect();
                let hom = AlgebraHom::new(&source, &target, map).map_err(|e| ParseError {
                    line: s.line,
                    message: e.to_string(),
                })?;
                cat.homs.push((s.name.clone(), hom));
            }
            "idempotent" => {
                let alg = s.name_value("in")?;
                if cat.algebra(&alg).is_none() {
                    return Err(dangling(s.line, "algebra", &alg));
                }
                let index = s.int("index")?;
                cat.idempotents.push((s.name.clone(), alg, index));
            }
            "tensor" => {
                let left = s.name_value("left")?;
                let right = s.name_value("right")?;
                let module = s.name_value("module")?;
                for m in [&left, &right, &module] {
                    if cat.module(m).is_none() {
                        return Err(dangling(s.line, "module", m));
                    }
                }
                let pure = s.matrix("pure")?;
                cat.tensors.push((
                    s.name.clone(),
                    TensorEntry {
                        left,
                        right,
                        module,
                        pure,
                    },
                ));
            }
            "witness" => {
                let k = s.name_value("k")?;
                let sname = s.name_value("s")?;
                for a in [&k, &sname] {
                    if cat.algebra(a).is_none() {
                        return Err(dangling(s.line, "algebra", a));
                    }
                }
                let p = s.name_value("p")?;
                let q = s.name_value("q")?;
                let tpq = s.name_value("tpq")?;
                let tqp = s.name_value("tqp")?;
                for m in [&p, &q, &tpq, &tqp] {
                    if cat.module(m).is_none() {
                        return Err(dangling(s.line, "module", m));
                    }
                }
                cat.witnesses.push((
                    s.name.clone(),
                    WitnessEntry {
                        k,
                        s: sname,
                        p,
                        q,
                        tpq,
                        tqp,
                        u: s.vector("u")?,
                        v: s.vector("v")?,
                        pure_pq: s.matrix("pure_pq")?,
                        pure_qp: s.matrix("pure_qp")?,
                    },
                ));
            }
            _ => unreachable!("section keywords are validated during lexing"),
        }
    }
    Ok(cat)
}

// Writers. Emission is deterministic: entries in fixed order, one section
// per block.

fn write_matrix(out: &mut String, rows: usize, cols: usize, value: impl Fn(usize, usize) -> usize) {
    out.push('[');
    for r in 0..rows {
        if r > 0 {
            out.push(',');
        }
        out.push('[');
        for c in 0..cols {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", value(r, c));
        }
        out.push(']');
    }
    out.push(']');
}

fn write_vector(out: &mut String, len: usize, value: impl Fn(usize) -> usize) {
    out.push('[');
    for i in 0..len {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}", value(i));
    }
    out.push(']');
}

pub fn write_algebra(out: &mut String, name: &str, alg: &KleeneAlgebra, base_name: Option<&str>) {
    if alg.same_as(&KleeneAlgebra::bool2()) {
        let _ = writeln!(out, "kleene_algebra {name} {{ builtin: bool2 }}");
        return;
    }
    if let Some(points) = alg.rel_points() {
        let _ = writeln!(out, "kleene_algebra {name} {{ builtin: rel({points}) }}");
        return;
    }
    if let (Some((_, dim)), Some(base)) = (alg.matrix_structure(), base_name) {
        let _ = writeln!(out, "kleene_algebra {name} {{ builtin: mat({base},{dim}) }}");
        return;
    }
    let n = alg.size();
    let _ = write!(
        out,
        "kleene_algebra {name} {{ elements: {n} ; zero: {} ; one: {} ;\n  add: ",
        alg.zero(),
        alg.one()
    );
    write_matrix(out, n, n, |r, c| alg.add(r, c));
    out.push_str(" ;\n  mul: ");
    write_matrix(out, n, n, |r, c| alg.mul(r, c));
    out.push_str(" ;\n  star: ");
    write_vector(out, n, |i| alg.star(i));
    out.push_str(" }\n");
}

pub fn write_module(
    out: &mut String,
    name: &str,
    module: &KleeneModule,
    left_name: Option<&str>,
    right_name: Option<&str>,
) {
    let n = module.size();
    let _ = write!(out, "module {name} {{ ");
    if let (Some(_), Some(ln)) = (module.left_algebra(), left_name) {
        let _ = write!(out, "over_left: {ln} ; ");
    }
    if let (Some(_), Some(rn)) = (module.right_algebra(), right_name) {
        let _ = write!(out, "over_right: {rn} ; ");
    }
    let _ = write!(out, "size: {n} ; zero: {} ;\n  add: ", module.zero());
    write_matrix(out, n, n, |r, c| module.add(r, c));
    if let (Some(alg), Some(_)) = (module.left_algebra(), left_name) {
        out.push_str(" ;\n  left_action: ");
        write_matrix(out, alg.size(), n, |a, m| module.act_left(a, m));
    }
    if let (Some(alg), Some(_)) = (module.right_algebra(), right_name) {
        out.push_str(" ;\n  right_action: ");
        write_matrix(out, n, alg.size(), |m, c| module.act_right(m, c));
    }
    out.push_str(" }\n");
}

pub fn write_hom(out: &mut String, name: &str, hom: &AlgebraHom, from: &str, to: &str) {
    let _ = write!(out, "hom {name} {{ from: {from} ; to: {to} ; map: ");
    write_vector(out, hom.map.len(), |i| hom.map[i] as usize);
    out.push_str(" }\n");
}

pub fn write_tensor_section(
    out: &mut String,
    name: &str,
    left: &str,
    right: &str,
    module: &str,
    pure: &[u32],
    right_size: usize,
) {
    let rows = pure.len() / right_size;
    let _ = write!(
        out,
        "tensor {name} {{ left: {left} ; right: {right} ; module: {module} ;\n  pure: "
    );
    write_matrix(out, rows, right_size, |r, c| pure[r * right_size + c] as usize);
    out.push_str(" }\n");
}

#[allow(clippy::too_many_arguments)]
pub fn write_witness_section(
    out: &mut String,
    name: &str,
    names: [&str; 6],
    u: &[u32],
    v: &[u32],
    pure_pq: (&[u32], usize),
    pure_qp: (&[u32], usize),
) {
    let [k, s, p, q, tpq, tqp] = names;
    let _ = write!(
        out,
        "witness {name} {{ k: {k} ; s: {s} ; p: {p} ; q: {q} ; tpq: {tpq} ; tqp: {tqp} ;\n  u: "
    );
    write_vector(out, u.len(), |i| u[i] as usize);
    out.push_str(" ;\n  v: ");
    write_vector(out, v.len(), |i| v[i] as usize);
    out.push_str(" ;\n  pure_pq: ");
    let (pq, pq_cols) = pure_pq;
    write_matrix(out, pq.len() / pq_cols, pq_cols, |r, c| {
        pq[r * pq_cols + c] as usize
    });
    out.push_str(" ;\n  pure_qp: ");
    let (qp, qp_cols) = pure_qp;
    write_matrix(out, qp.len() / qp_cols, qp_cols, |r, c| {
        qp[r * qp_cols + c] as usize
    });
    out.push_str(" }\n");
}

pub fn io_error(e: std::io::Error, path: &std::path::Path) -> KamError {
    KamError::Malformed {
        what: "file",
        detail: format!("{}: {e}", path.display()),
    }
}
