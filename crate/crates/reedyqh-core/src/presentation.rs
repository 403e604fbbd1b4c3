//! Quiver presentations: parsing, rootedness tests, and the truncated
//! path-algebra construction of a finite k-linear category.
//!
//! File format, line oriented with '#' comments:
//!
//! ```text
//! [field]      kind=GF p=7          # or kind=Q
//! [quiver]
//! vertices = v0 v1
//! arrow a : v0 -> v1
//! arrow b : v1 -> v0
//! [relations]
//! b*a                               # paths compose right to left
//! 1/2*a*b - e(v1)                   # e(v) is the empty path at v
//! [limits]     maxlen = 4
//! [reedy]                           # optional
//! degree v0 = 0
//! degree v1 = 1
//! plus = a
//! minus = b
//! ```
//!
//! Hom spaces are spans of paths of length <= maxlen modulo the two-sided
//! ideal generated by the relations, with the closure computed degree by
//! degree inside the truncated path coalgebra. Finite-dimensionality is
//! certified by demanding that no surviving basis path has length maxlen;
//! otherwise the bound cannot be trusted and building errors out.

use crate::exactla::{FieldSpec, Matrix, Scalar};
use crate::lincat::{LinearCategory, ReedyStructure};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// A composable word of arrows, stored in application order (index 0 acts
/// first); the empty word is the identity path at source == target.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathWord {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

/// A k-linear combination of parallel paths, meant to be set to zero.
#[derive(Clone, Debug)]
pub struct RelationExpr {
    pub source: usize,
    pub target: usize,
    pub terms: Vec<(Scalar, PathWord)>,
}

#[derive(Clone, Debug)]
pub struct ReedySection {
    /// Degree per vertex, aligned with quiver.vertices.
    pub degree: Vec<u32>,
    /// Arrow indices generating the raising subcategory.
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PresentationFile {
    pub field: FieldSpec,
    pub quiver: Quiver,
    pub relations: Vec<RelationExpr>,
    pub maxlen: usize,
    pub reedy: Option<ReedySection>,
}

#[derive(Debug, thiserror::Error)]
pub enum PresentationError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("bound insufficient: path {witness} ({from} -> {to}) of length {len} survives the relation ideal at maxlen={maxlen}; the category is not certified finite-dimensional at this bound")]
    BoundInsufficient {
        from: String,
        to: String,
        witness: String,
        len: usize,
        maxlen: usize,
    },
    #[error("relation term {term} has length {len} > maxlen {maxlen}")]
    RelationTooLong {
        term: String,
        len: usize,
        maxlen: usize,
    },
}

impl Quiver {
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

impl PathWord {
    pub fn identity(v: usize) -> PathWord {
        PathWord {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Render in function order: later arrows on the left, '*'-joined.
    pub fn render(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e({})", quiver.vertices[self.source]);
        }
        self.arrows
            .iter()
            .rev()
            .map(|&a| quiver.arrows[a].name.clone())
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "path({:?})", self.arrows)
    }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A token with its 1-based starting column in the original line.
#[derive(Clone, Debug)]
struct Tok {
    text: String,
    line: usize,
    col: usize,
}

/// Split a line into whitespace-separated tokens, additionally padding the
/// structural symbols so "a:b->c" and "a : b -> c" tokenize identically.
fn tokenize(line_no: usize, line: &str, pad_arrows: bool) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut cur_col = 0usize;
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    let flush = |out: &mut Vec<Tok>, cur: &mut String, col: usize| {
        if !cur.is_empty() {
            out.push(Tok {
                text: std::mem::take(cur),
                line: line_no,
                col: col + 1,
            });
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            flush(&mut out, &mut cur, cur_col);
            i += 1;
            continue;
        }
        if pad_arrows && c == '-' && i + 1 < chars.len() && chars[i + 1] == '>' {
            flush(&mut out, &mut cur, cur_col);
            out.push(Tok {
                text: "->".into(),
                line: line_no,
                col: i + 1,
            });
            i += 2;
            continue;
        }
        if c == '=' || (pad_arrows && c == ':') {
            flush(&mut out, &mut cur, cur_col);
            out.push(Tok {
                text: c.to_string(),
                line: line_no,
                col: i + 1,
            });
            i += 1;
            continue;
        }
        if cur.is_empty() {
            cur_col = i;
        }
        cur.push(c);
        i += 1;
    }
    flush(&mut out, &mut cur, cur_col);
    out
}

/// Parse the presentation file format described in the module docs.
pub fn parse_presentation(input: &str) -> Result<PresentationFile, PresentationError> {
    // Phase 1: strip comments, bucket content lines by section.
    let mut sections: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut rest = trimmed;
        if rest.starts_with('[') {
            let close = rest
                .find(']')
                .ok_or_else(|| syntax(line_no, 1, "unterminated section header"))?;
            let name = rest[1..close].trim().to_string();
            if name.is_empty() {
                return Err(syntax(line_no, 1, "empty section name"));
            }
            let known = ["field", "quiver", "relations", "limits", "reedy", "diagram", "coeff"];
            if !known.contains(&name.as_str()) {
                return Err(syntax(line_no, 2, format!("unknown section [{name}]")));
            }
            sections.entry(name.clone()).or_default();
            current = Some(name);
            rest = rest[close + 1..].trim();
            if rest.is_empty() {
                continue;
            }
        }
        match &current {
            Some(sec) => sections
                .get_mut(sec)
                .unwrap()
                .push((line_no, rest.to_string())),
            None => return Err(syntax(line_no, 1, "content before any [section] header")),
        }
    }

    // Phase 2: field.
    let field_lines = sections
        .get("field")
        .ok_or_else(|| syntax(0, 0, "missing [field] section"))?;
    let mut kind: Option<String> = None;
    let mut p_val: Option<(u32, usize, usize)> = None;
    for (ln, text) in field_lines {
        let toks = tokenize(*ln, text, false);
        let mut i = 0;
        while i < toks.len() {
            let key = &toks[i];
            if i + 2 >= toks.len() || toks[i + 1].text != "=" {
                return Err(syntax(key.line, key.col, "expected key = value"));
            }
            let val = &toks[i + 2];
            match key.text.as_str() {
                "kind" => kind = Some(val.text.clone()),
                "p" => {
                    let p: u32 = val.text.parse().map_err(|_| {
                        syntax(val.line, val.col, format!("invalid prime: {}", val.text))
                    })?;
                    p_val = Some((p, val.line, val.col));
                }
                other => {
                    return Err(syntax(
                        key.line,
                        key.col,
                        format!("unknown field key: {other}"),
                    ))
                }
            }
            i += 3;
        }
    }
    let field = match kind.as_deref() {
        Some("Q") => FieldSpec::Rationals,
        Some("GF") => {
            let (p, ln, col) =
                p_val.ok_or_else(|| syntax(0, 0, "kind=GF requires p=<prime>"))?;
            FieldSpec::prime(p).map_err(|e| syntax(ln, col, e.to_string()))?
        }
        Some(other) => return Err(syntax(0, 0, format!("unknown field kind: {other}"))),
        None => return Err(syntax(0, 0, "missing field kind")),
    };

    // Phase 3: quiver.
    let quiver_lines = sections
        .get("quiver")
        .ok_or_else(|| syntax(0, 0, "missing [quiver] section"))?;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut arrow_decls: Vec<(usize, Vec<Tok>)> = Vec::new();
    for (ln, text) in quiver_lines {
        let toks = tokenize(*ln, text, true);
        if toks.is_empty() {
            continue;
        }
        match toks[0].text.as_str() {
            "vertices" => {
                if toks.len() < 3 || toks[1].text != "=" {
                    return Err(syntax(toks[0].line, toks[0].col, "expected vertices = v0 v1 ..."));
                }
                for t in &toks[2..] {
                    if !is_identifier(&t.text) {
                        return Err(syntax(t.line, t.col, format!("invalid vertex name: {}", t.text)));
                    }
                    if vertices.contains(&t.text) {
                        return Err(syntax(t.line, t.col, format!("duplicate vertex: {}", t.text)));
                    }
                    vertices.push(t.text.clone());
                }
            }
            "arrow" => arrow_decls.push((*ln, toks)),
            other => {
                return Err(syntax(
                    toks[0].line,
                    toks[0].col,
                    format!("unknown quiver directive: {other}"),
                ))
            }
        }
    }
    let quiver_probe = Quiver {
        vertices: vertices.clone(),
        arrows: Vec::new(),
    };
    for (_ln, toks) in &arrow_decls {
        // arrow NAME : SRC -> TGT
        if toks.len() != 6 || toks[2].text != ":" || toks[4].text != "->" {
            return Err(syntax(
                toks[0].line,
                toks[0].col,
                "expected arrow NAME : SRC -> TGT",
            ));
        }
        let name = &toks[1];
        if !is_identifier(&name.text) {
            return Err(syntax(name.line, name.col, format!("invalid arrow name: {}", name.text)));
        }
        if arrows.iter().any(|a| a.name == name.text) {
            return Err(syntax(name.line, name.col, format!("duplicate arrow: {}", name.text)));
        }
        let src = quiver_probe
            .vertex(&toks[3].text)
            .ok_or_else(|| syntax(toks[3].line, toks[3].col, format!("unknown vertex: {}", toks[3].text)))?;
        let tgt = quiver_probe
            .vertex(&toks[5].text)
            .ok_or_else(|| syntax(toks[5].line, toks[5].col, format!("unknown vertex: {}", toks[5].text)))?;
        arrows.push(Arrow {
            name: name.text.clone(),
            source: src,
            target: tgt,
        });
    }
    let quiver = Quiver { vertices, arrows };

    // Phase 4: limits.
    let limit_lines = sections
        .get("limits")
        .ok_or_else(|| syntax(0, 0, "missing [limits] section (maxlen = <n>)"))?;
    let mut maxlen: Option<usize> = None;
    for (ln, text) in limit_lines {
        let toks = tokenize(*ln, text, false);
        if toks.len() != 3 || toks[0].text != "maxlen" || toks[1].text != "=" {
            return Err(syntax(*ln, 1, "expected maxlen = <n>"));
        }
        let v: usize = toks[2]
            .text
            .parse()
            .map_err(|_| syntax(toks[2].line, toks[2].col, "invalid maxlen"))?;
        if v < 1 {
            return Err(syntax(toks[2].line, toks[2].col, "maxlen must be >= 1"));
        }
        maxlen = Some(v);
    }
    let maxlen = maxlen.ok_or_else(|| syntax(0, 0, "missing maxlen in [limits]"))?;

    // Phase 5: relations.
    let mut relations = Vec::new();
    if let Some(rel_lines) = sections.get("relations") {
        for (ln, text) in rel_lines {
            relations.push(parse_relation(*ln, text, field, &quiver)?);
        }
    }

    // Phase 6: reedy (optional).
    let reedy = if let Some(reedy_lines) = sections.get("reedy") {
        let mut degree: Vec<Option<u32>> = vec![None; quiver.vertices.len()];
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (ln, text) in reedy_lines {
            let toks = tokenize(*ln, text, false);
            if toks.is_empty() {
                continue;
            }
            match toks[0].text.as_str() {
                "degree" => {
                    if toks.len() != 4 || toks[2].text != "=" {
                        return Err(syntax(*ln, 1, "expected degree VERTEX = <n>"));
                    }
                    let v = quiver.vertex(&toks[1].text).ok_or_else(|| {
                        syntax(toks[1].line, toks[1].col, format!("unknown vertex: {}", toks[1].text))
                    })?;
                    let d: u32 = toks[3]
                        .text
                        .parse()
                        .map_err(|_| syntax(toks[3].line, toks[3].col, "invalid degree"))?;
                    degree[v] = Some(d);
                }
                "plus" | "minus" => {
                    if toks.len() < 2 || toks[1].text != "=" {
                        return Err(syntax(*ln, 1, "expected plus = a b ... or minus = ..."));
                    }
                    for t in &toks[2..] {
                        let a = quiver.arrow(&t.text).ok_or_else(|| {
                            syntax(t.line, t.col, format!("unknown arrow: {}", t.text))
                        })?;
                        if toks[0].text == "plus" {
                            plus.push(a);
                        } else {
                            minus.push(a);
                        }
                    }
                }
                other => {
                    return Err(syntax(
                        toks[0].line,
                        toks[0].col,
                        format!("unknown reedy directive: {other}"),
                    ))
                }
            }
        }
        let mut deg = Vec::new();
        for (v, d) in degree.iter().enumerate() {
            match d {
                Some(d) => deg.push(*d),
                None => {
                    return Err(syntax(
                        0,
                        0,
                        format!("[reedy] missing degree for vertex {}", quiver.vertices[v]),
                    ))
                }
            }
        }
        Some(ReedySection {
            degree: deg,
            plus,
            minus,
        })
    } else {
        None
    };

    Ok(PresentationFile {
        field,
        quiver,
        relations,
        maxlen,
        reedy,
    })
}

/// Parse one relation line: terms joined by + or -, each term an optional
/// coefficient followed by a '*'-joined path.
fn parse_relation(
    ln: usize,
    text: &str,
    field: FieldSpec,
    quiver: &Quiver,
) -> Result<RelationExpr, PresentationError> {
    let toks = tokenize(ln, text, false);
    let mut terms: Vec<(Scalar, PathWord)> = Vec::new();
    let mut sign_negative = false;
    let mut expect_term = true;
    let mut i = 0;
    while i < toks.len() {
        let t = &toks[i];
        if t.text == "+" || t.text == "-" {
            if expect_term && !(terms.is_empty() && t.text == "-") {
                return Err(syntax(t.line, t.col, "unexpected sign"));
            }
            sign_negative = t.text == "-";
            expect_term = true;
            i += 1;
            continue;
        }
        if !expect_term {
            return Err(syntax(t.line, t.col, "expected + or - between terms"));
        }
        let (coef, path) = parse_term(t, field, quiver)?;
        let coef = if sign_negative { field.neg(&coef) } else { coef };
        terms.push((coef, path));
        sign_negative = false;
        expect_term = false;
        i += 1;
    }
    if terms.is_empty() {
        return Err(syntax(ln, 1, "empty relation"));
    }
    let (src, tgt) = (terms[0].1.source, terms[0].1.target);
    for (_, p) in &terms {
        if p.source != src || p.target != tgt {
            return Err(syntax(
                ln,
                1,
                format!(
                    "relation terms are not parallel: {} -> {} vs {} -> {}",
                    quiver.vertices[src], quiver.vertices[tgt],
                    quiver.vertices[p.source], quiver.vertices[p.target]
                ),
            ));
        }
    }
    Ok(RelationExpr {
        source: src,
        target: tgt,
        terms,
    })
}

/// Parse one term token like "2*b*a", "1/3*e(v0)", "b*a".
fn parse_term(
    t: &Tok,
    field: FieldSpec,
    quiver: &Quiver,
) -> Result<(Scalar, PathWord), PresentationError> {
    let segments: Vec<&str> = t.text.split('*').collect();
    let mut idx = 0;
    let coef = if let Some(c) = parse_coefficient(segments[0], field) {
        idx = 1;
        c.map_err(|e| syntax(t.line, t.col, e))?
    } else {
        field.one()
    };
    if idx >= segments.len() {
        return Err(syntax(t.line, t.col, "coefficient without a path"));
    }
    // Segments are written in function order; application order is reversed.
    let mut factors: Vec<PathWord> = Vec::new();
    for seg in &segments[idx..] {
        factors.push(parse_path_segment(seg, t, quiver)?);
    }
    factors.reverse();
    let mut word = factors[0].clone();
    for f in &factors[1..] {
        if f.source != word.target {
            return Err(syntax(
                t.line,
                t.col,
                format!(
                    "non-composable path {}: segment starts at {} but previous ends at {}",
                    t.text, quiver.vertices[f.source], quiver.vertices[word.target]
                ),
            ));
        }
        word.arrows.extend(f.arrows.iter().copied());
        word.target = f.target;
    }
    Ok((coef, word))
}

pub(crate) fn parse_coefficient(s: &str, field: FieldSpec) -> Option<Result<Scalar, String>> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.chars().next().unwrap().is_ascii_digit() {
        return None;
    }
    let parse_i64 = |x: &str| -> Result<i64, String> {
        x.parse::<i64>().map_err(|_| format!("invalid number: {x}"))
    };
    let result = (|| {
        if let Some((n, d)) = s.split_once('/') {
            let n = parse_i64(n)?;
            let d = parse_i64(d)?;
            field.from_fraction(n, d).map_err(|e| e.to_string())
        } else {
            Ok(field.from_i64(parse_i64(s)?))
        }
    })();
    Some(result)
}

fn parse_path_segment(
    seg: &str,
    t: &Tok,
    quiver: &Quiver,
) -> Result<PathWord, PresentationError> {
    if let Some(inner) = seg.strip_prefix("e(").and_then(|s| s.strip_suffix(')')) {
        let v = quiver
            .vertex(inner)
            .ok_or_else(|| syntax(t.line, t.col, format!("unknown vertex: {inner}")))?;
        return Ok(PathWord::identity(v));
    }
    let a = quiver
        .arrow(seg)
        .ok_or_else(|| syntax(t.line, t.col, format!("unknown arrow: {seg}")))?;
    let arr = &quiver.arrows[a];
    Ok(PathWord {
        source: arr.source,
        target: arr.target,
        arrows: vec![a],
    })
}

/// Left-rootedness: iterate V_{n+1} = set of vertices all of whose incoming
/// arrows start inside V_n, from V_0 empty, until stable; rooted iff the
/// stable set is everything.
pub fn is_left_rooted(q: &Quiver) -> bool {
    rooted_fixpoint(q, true) == q.vertices.len()
}

/// Right-rootedness: dual, following outgoing arrows.
pub fn is_right_rooted(q: &Quiver) -> bool {
    rooted_fixpoint(q, false) == q.vertices.len()
}

fn rooted_fixpoint(q: &Quiver, incoming: bool) -> usize {
    let n = q.vertices.len();
    let mut inside = vec![false; n];
    loop {
        let mut next = vec![false; n];
        for v in 0..n {
            next[v] = q.arrows.iter().all(|a| {
                let (end, other) = if incoming {
                    (a.target, a.source)
                } else {
                    (a.source, a.target)
                };
                end != v || inside[other]
            });
        }
        if next == inside {
            return inside.iter().filter(|&&b| b).count();
        }
        inside = next;
    }
}

/// The category built from a presentation, plus the data needed to map
/// presentation-level names into it.
pub struct BuiltCategory {
    pub category: LinearCategory,
    pub reedy: Option<ReedyStructure>,
    /// Coordinates of each arrow's class inside Hom(source, target).
    pub arrow_classes: Vec<Matrix>,
    /// Basis paths per hom pair (application order words).
    pub basis_paths: Vec<Vec<Vec<PathWord>>>,
}

/// Row echelon set over path coordinates in descending (length, lex) order:
/// each row's pivot is its largest surviving path, so reduction rewrites
/// long paths into shorter ones. Rows whose pivot path has length == maxlen
/// are saturated ("dead"): composing them would overflow the truncation.
struct DescEchelon {
    field: FieldSpec,
    /// (pivot index, coefficients); every nonzero coord has index <= pivot.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl DescEchelon {
    fn new(field: FieldSpec) -> DescEchelon {
        DescEchelon {
            field,
            rows: Vec::new(),
        }
    }

    /// Reduce against current rows; insert the remainder if nonzero.
    /// Returns the inserted (pivot, row) when the span grew.
    fn insert(&mut self, mut v: Vec<Scalar>) -> Option<(usize, Vec<Scalar>)> {
        let f = self.field;
        for (p, row) in &self.rows {
            if !f.is_zero(&v[*p]) {
                let c = v[*p].clone();
                for (i, r) in row.iter().enumerate() {
                    v[i] = f.sub(&v[i], &f.mul(&c, r));
                }
            }
        }
        let pivot = (0..v.len()).rev().find(|&i| !f.is_zero(&v[i]))?;
        let inv = f.inv(&v[pivot]);
        for x in &mut v {
            *x = f.mul(x, &inv);
        }
        self.rows.push((pivot, v.clone()));
        self.rows.sort_by(|a, b| b.0.cmp(&a.0));
        Some((pivot, v))
    }

    /// Full back-substitution so each row vanishes at every other pivot.
    fn normalize(&mut self) {
        let f = self.field;
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        for i in 0..self.rows.len() {
            for (j, &pj) in pivots.iter().enumerate() {
                if i == j {
                    continue;
                }
                let c = self.rows[i].1[pj].clone();
                if f.is_zero(&c) {
                    continue;
                }
                let other = self.rows[j].1.clone();
                for (k, o) in other.iter().enumerate() {
                    self.rows[i].1[k] = f.sub(&self.rows[i].1[k], &f.mul(&c, o));
                }
            }
        }
    }

    fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Coordinates of the class of v over the non-pivot (basis) indices.
    /// Requires normalize() first.
    fn reduce_to_class(&self, mut v: Vec<Scalar>, basis_idx: &[usize]) -> Vec<Scalar> {
        let f = self.field;
        for (p, row) in &self.rows {
            if !f.is_zero(&v[*p]) {
                let c = v[*p].clone();
                for (i, r) in row.iter().enumerate() {
                    v[i] = f.sub(&v[i], &f.mul(&c, r));
                }
            }
        }
        basis_idx.iter().map(|&i| v[i].clone()).collect()
    }
}

/// Build the finite k-linear category presented by the file. See module
/// docs for the truncation and certification strategy.
pub fn build_linear_category(pres: &PresentationFile) -> Result<BuiltCategory, PresentationError> {
    let q = &pres.quiver;
    let f = pres.field;
    let nv = q.vertices.len();
    let maxlen = pres.maxlen;

    // Enumerate paths by (length, lex on arrow sequences), bucketed by
    // (source, target). Extension order preserves lex order per length.
    let mut buckets: Vec<Vec<Vec<PathWord>>> = vec![vec![Vec::new(); nv]; nv];
    let mut frontier: Vec<PathWord> = (0..nv).map(PathWord::identity).collect();
    for v in 0..nv {
        buckets[v][v].push(PathWord::identity(v));
    }
    for _len in 1..=maxlen {
        let mut next = Vec::new();
        for p in &frontier {
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source != p.target {
                    continue;
                }
                let mut np = p.clone();
                np.arrows.push(ai);
                np.target = a.target;
                buckets[np.source][np.target].push(np.clone());
                next.push(np);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let index: Vec<Vec<BTreeMap<Vec<usize>, usize>>> = buckets
        .iter()
        .map(|row| {
            row.iter()
                .map(|b| {
                    b.iter()
                        .enumerate()
                        .map(|(i, p)| (p.arrows.clone(), i))
                        .collect()
                })
                .collect()
        })
        .collect();

    // Relation vectors, seeded into per-bucket echelon sets.
    let mut ech: Vec<Vec<DescEchelon>> = (0..nv)
        .map(|_| (0..nv).map(|_| DescEchelon::new(f)).collect())
        .collect();
    // Worklist of live rows to compose with arrows on both sides.
    let mut work: Vec<(usize, usize, Vec<Scalar>)> = Vec::new();
    for rel in &pres.relations {
        let (s, t) = (rel.source, rel.target);
        let mut v = vec![f.zero(); buckets[s][t].len()];
        for (c, p) in &rel.terms {
            if p.len() > maxlen {
                return Err(PresentationError::RelationTooLong {
                    term: p.render(q),
                    len: p.len(),
                    maxlen,
                });
            }
            let i = index[s][t][&p.arrows];
            v[i] = f.add(&v[i], c);
        }
        if let Some((pivot, row)) = ech[s][t].insert(v) {
            if buckets[s][t][pivot].len() < maxlen {
                work.push((s, t, row));
            }
        }
    }
    while let Some((s, t, row)) = work.pop() {
        // Post-compose with arrows out of t.
        for (ai, a) in q.arrows.iter().enumerate() {
            if a.source != t {
                continue;
            }
            let t2 = a.target;
            let mut v = vec![f.zero(); buckets[s][t2].len()];
            for (i, c) in row.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                let mut word = buckets[s][t][i].arrows.clone();
                word.push(ai);
                let j = index[s][t2][&word];
                v[j] = f.add(&v[j], c);
            }
            if let Some((pivot, nrow)) = ech[s][t2].insert(v) {
                if buckets[s][t2][pivot].len() < maxlen {
                    work.push((s, t2, nrow));
                }
            }
        }
        // Pre-compose with arrows into s.
        for (ai, a) in q.arrows.iter().enumerate() {
            if a.target != s {
                continue;
            }
            let s2 = a.source;
            let mut v = vec![f.zero(); buckets[s2][t].len()];
            for (i, c) in row.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                let mut word = vec![ai];
                word.extend(buckets[s][t][i].arrows.iter().copied());
                let j = index[s2][t][&word];
                v[j] = f.add(&v[j], c);
            }
            if let Some((pivot, nrow)) = ech[s2][t].insert(v) {
                if buckets[s2][t][pivot].len() < maxlen {
                    work.push((s2, t, nrow));
                }
            }
        }
    }

    // Quotient bases: non-pivot paths; certify no survivor at maxlen.
    let mut basis_idx: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); nv]; nv];
    let mut basis_paths: Vec<Vec<Vec<PathWord>>> = vec![vec![Vec::new(); nv]; nv];
    for s in 0..nv {
        for t in 0..nv {
            ech[s][t].normalize();
            let pivots = ech[s][t].pivots();
            for (i, p) in buckets[s][t].iter().enumerate() {
                if pivots.contains(&i) {
                    continue;
                }
                if p.len() == maxlen {
                    return Err(PresentationError::BoundInsufficient {
                        from: q.vertices[s].clone(),
                        to: q.vertices[t].clone(),
                        witness: p.render(q),
                        len: p.len(),
                        maxlen,
                    });
                }
                basis_idx[s][t].push(i);
                basis_paths[s][t].push(p.clone());
            }
        }
    }

    // Class of a single path as basis coordinates.
    let class_of = |s: usize, t: usize, word: &[usize]| -> Matrix {
        let mut v = vec![f.zero(); buckets[s][t].len()];
        let i = index[s][t][word];
        v[i] = f.one();
        let coords = ech[s][t].reduce_to_class(v, &basis_idx[s][t]);
        let mut m = Matrix::zeros(f, coords.len(), 1);
        for (i, c) in coords.into_iter().enumerate() {
            m.set(i, 0, c);
        }
        m
    };

    // Arrow action matrices: post-composition by arrow a on Hom(s, src(a)).
    let mut arrow_act: Vec<Vec<Matrix>> = Vec::new();
    for (_ai, a) in q.arrows.iter().enumerate() {
        let mut per_source = Vec::new();
        for s in 0..nv {
            let dom = &basis_paths[s][a.source];
            let mut m = Matrix::zeros(f, basis_idx[s][a.target].len(), dom.len());
            for (j, p) in dom.iter().enumerate() {
                let mut word = p.arrows.clone();
                word.push(_ai);
                let col = class_of(s, a.target, &word);
                for i in 0..col.rows() {
                    m.set(i, j, col.get(i, 0).clone());
                }
            }
            per_source.push(m);
        }
        arrow_act.push(per_source);
    }

    // Composition tables: walk the arrows of each basis path of Hom(d,e).
    let mut comp = vec![vec![vec![Matrix::zeros(f, 0, 0); nv]; nv]; nv];
    for c in 0..nv {
        for d in 0..nv {
            let nf = basis_idx[c][d].len();
            for e in 0..nv {
                let ng = basis_idx[d][e].len();
                let mut m = Matrix::zeros(f, basis_idx[c][e].len(), ng * nf);
                for (gi, g) in basis_paths[d][e].iter().enumerate() {
                    for fi in 0..nf {
                        let mut vec_cur = Matrix::zeros(f, nf, 1);
                        vec_cur.set(fi, 0, f.one());
                        let mut cur_t = d;
                        let mut cur = vec_cur;
                        for &ai in &g.arrows {
                            assert!(q.arrows[ai].source == cur_t);
                            cur = arrow_act[ai][c].mul(&cur);
                            cur_t = q.arrows[ai].target;
                        }
                        for i in 0..cur.rows() {
                            m.set(i, gi * nf + fi, cur.get(i, 0).clone());
                        }
                    }
                }
                comp[c][d][e] = m;
            }
        }
    }

    let labels: Vec<Vec<Vec<String>>> = basis_paths
        .iter()
        .map(|row| {
            row.iter()
                .map(|b| b.iter().map(|p| p.render(q)).collect())
                .collect()
        })
        .collect();
    let identities: Vec<Matrix> = (0..nv).map(|v| class_of(v, v, &[])).collect();
    let category = LinearCategory::new(f, q.vertices.clone(), labels, identities, comp);

    let arrow_classes: Vec<Matrix> = q
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| class_of(a.source, a.target, &[ai]))
        .collect();

    let reedy = pres.reedy.as_ref().map(|r| {
        let mut plus_gens = Vec::new();
        let mut minus_gens = Vec::new();
        for c in 0..nv {
            let mut prow = Vec::new();
            let mut mrow = Vec::new();
            for d in 0..nv {
                let dim = category.hom_dim(c, d);
                let collect = |list: &Vec<usize>| -> Matrix {
                    let cols: Vec<Matrix> = list
                        .iter()
                        .filter(|&&ai| q.arrows[ai].source == c && q.arrows[ai].target == d)
                        .map(|&ai| arrow_classes[ai].clone())
                        .collect();
                    if cols.is_empty() {
                        Matrix::zeros(f, dim, 0)
                    } else {
                        let refs: Vec<&Matrix> = cols.iter().collect();
                        Matrix::hstack(&refs)
                    }
                };
                prow.push(collect(&r.plus));
                mrow.push(collect(&r.minus));
            }
            plus_gens.push(prow);
            minus_gens.push(mrow);
        }
        ReedyStructure::from_generators(&category, r.degree.clone(), plus_gens, minus_gens)
    });

    Ok(BuiltCategory {
        category,
        reedy,
        arrow_classes,
        basis_paths,
    })
}
