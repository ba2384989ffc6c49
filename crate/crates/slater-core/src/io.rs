//! Plain-text file formats: tournaments, profiles, module partitions,
//! graphs, DIMACS CNF with extension comments, and gadget layout metadata.
//!
//! Serializers emit canonical bytes (every line `\n`-terminated, fields
//! single-space separated), so identical values always produce identical
//! files. Parsers are strict and reject deviations with a line/column
//! diagnostic; `parse(serialize(x)) == x` for every format.
//!
//! Candidates and vertices are 0-based in every format; DIMACS variables
//! are 1-based as usual, and this module is the only place the two
//! conventions meet.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formulas::{ClauseSide, Cnf, Graph};
use crate::gadget::{GadgetPlan, ModuleSpec};
use crate::modules::ModulePartition;
use crate::tournament::{LinearOrder, Profile, Tournament};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// Tokenizer for one line, tracking 1-based columns.
struct Line<'a> {
    text: &'a str,
    number: usize,
    cursor: usize,
}

impl<'a> Line<'a> {
    fn new(text: &'a str, number: usize) -> Self {
        Line {
            text,
            number,
            cursor: 0,
        }
    }

    fn next_token(&mut self) -> Option<(&'a str, usize)> {
        let rest = &self.text[self.cursor..];
        let skip = rest.len() - rest.trim_start().len();
        let start = self.cursor + skip;
        if start >= self.text.len() {
            return None;
        }
        let token_len = self.text[start..]
            .find(char::is_whitespace)
            .unwrap_or(self.text.len() - start);
        self.cursor = start + token_len;
        Some((&self.text[start..start + token_len], start + 1))
    }

    fn expect_token(&mut self, what: &str) -> Result<(&'a str, usize), ParseError> {
        self.next_token().ok_or_else(|| {
            ParseError::new(self.number, self.text.len() + 1, format!("expected {what}"))
        })
    }

    fn expect_literal(&mut self, lit: &str) -> Result<(), ParseError> {
        let (tok, col) = self.expect_token(&format!("`{lit}`"))?;
        if tok != lit {
            return Err(ParseError::new(
                self.number,
                col,
                format!("expected `{lit}`, found `{tok}`"),
            ));
        }
        Ok(())
    }

    fn expect_number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let (tok, col) = self.expect_token(what)?;
        tok.parse()
            .map_err(|_| ParseError::new(self.number, col, format!("invalid {what}: `{tok}`")))
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if let Some((tok, col)) = self.next_token() {
            return Err(ParseError::new(
                self.number,
                col,
                format!("unexpected trailing `{tok}`"),
            ));
        }
        Ok(())
    }
}

/// Lines of the input, rejecting interior blank lines; a single trailing
/// newline is fine.
fn lines(input: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    let raw: Vec<&str> = input.split('\n').collect();
    for (i, &text) in raw.iter().enumerate() {
        let text = text.strip_suffix('\r').unwrap_or(text);
        if text.trim().is_empty() {
            if i + 1 != raw.len() {
                return Err(ParseError::new(i + 1, 1, "blank line"));
            }
            continue;
        }
        out.push(Line::new(text, i + 1));
    }
    Ok(out)
}

fn missing_line(what: &str, after: usize) -> ParseError {
    ParseError::new(after + 1, 1, format!("expected {what}"))
}

// ---------------------------------------------------------------------------
// tournament files
// ---------------------------------------------------------------------------

/// `tournament <n>` followed by an `n x n` character matrix over `{0,1,-}`;
/// row `u`, column `v` is `1` exactly when the arc `(u, v)` is present, and
/// the diagonal is `-`.
pub fn serialize_tournament(t: &Tournament) -> String {
    let n = t.n();
    let mut out = format!("tournament {n}\n");
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            out.push(if u == v {
                '-'
            } else if t.arc(u, v) {
                '1'
            } else {
                '0'
            });
        }
        out.push('\n');
    }
    out
}

pub fn parse_tournament(input: &str) -> Result<Tournament, ParseError> {
    let mut lines = lines(input)?.into_iter();
    let mut header = lines
        .next()
        .ok_or_else(|| missing_line("`tournament <n>` header", 0))?;
    header.expect_literal("tournament")?;
    let n: usize = header.expect_number("candidate count")?;
    header.expect_end()?;

    let mut rows: Vec<(Vec<char>, usize)> = Vec::with_capacity(n);
    for u in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| missing_line(&format!("matrix row {u}"), u + 1))?;
        let chars: Vec<char> = line.text.chars().collect();
        if chars.len() != n {
            return Err(ParseError::new(
                line.number,
                chars.len() + 1,
                format!("row has {} columns, expected {n}", chars.len()),
            ));
        }
        rows.push((chars, line.number));
    }
    if let Some(extra) = lines.next() {
        return Err(ParseError::new(
            extra.number,
            1,
            "unexpected content after matrix",
        ));
    }

    for (u, (row, line_no)) in rows.iter().enumerate() {
        for (v, &c) in row.iter().enumerate() {
            match (u == v, c) {
                (true, '-') | (false, '0') | (false, '1') => {}
                (true, _) => return Err(ParseError::new(*line_no, v + 1, "diagonal must be `-`")),
                (false, _) => {
                    return Err(ParseError::new(
                        *line_no,
                        v + 1,
                        format!("invalid cell `{c}`"),
                    ))
                }
            }
        }
    }
    for u in 0..n {
        for v in (u + 1)..n {
            let uv = rows[u].0[v] == '1';
            let vu = rows[v].0[u] == '1';
            if uv == vu {
                return Err(ParseError::new(
                    rows[u].1,
                    v + 1,
                    format!("cells ({u},{v}) and ({v},{u}) must contain exactly one `1`"),
                ));
            }
        }
    }
    Ok(Tournament::from_fn(n, |u, v| {
        rows[u as usize].0[v as usize] == '1'
    }))
}

// ---------------------------------------------------------------------------
// profile files
// ---------------------------------------------------------------------------

/// `profile <n> <k>` followed by `k` lines of `n` space-separated candidate
/// ids in ascending preference (last = favorite).
pub fn serialize_profile(p: &Profile) -> String {
    let mut out = format!("profile {} {}\n", p.n(), p.voters().len());
    for voter in p.voters() {
        let ids: Vec<String> = voter.as_slice().iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_profile(input: &str) -> Result<Profile, ParseError> {
    let mut lines = lines(input)?.into_iter();
    let mut header = lines
        .next()
        .ok_or_else(|| missing_line("`profile <n> <k>` header", 0))?;
    header.expect_literal("profile")?;
    let n: usize = header.expect_number("candidate count")?;
    let k: usize = header.expect_number("voter count")?;
    header.expect_end()?;

    let mut voters = Vec::with_capacity(k);
    for i in 0..k {
        let mut line = lines
            .next()
            .ok_or_else(|| missing_line(&format!("voter {i}"), i + 1))?;
        let mut seq = Vec::with_capacity(n);
        for _ in 0..n {
            seq.push(line.expect_number::<u32>("candidate id")?);
        }
        line.expect_end()?;
        let number = line.number;
        let order =
            LinearOrder::new(seq, n).map_err(|e| ParseError::new(number, 1, e.to_string()))?;
        voters.push(order);
    }
    if let Some(extra) = lines.next() {
        return Err(ParseError::new(
            extra.number,
            1,
            "unexpected content after voters",
        ));
    }
    Profile::new(n, voters).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

// ---------------------------------------------------------------------------
// modules files
// ---------------------------------------------------------------------------

/// `modules <k>` followed by `k` lines of space-separated vertex ids, one
/// class per line; the classes must tile `0..n` where `n` is the total
/// number of ids.
pub fn serialize_modules(mp: &ModulePartition) -> String {
    let mut out = format!("modules {}\n", mp.len());
    for class in mp.classes() {
        let ids: Vec<String> = class.iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_modules(input: &str) -> Result<ModulePartition, ParseError> {
    let mut lines = lines(input)?.into_iter();
    let mut header = lines
        .next()
        .ok_or_else(|| missing_line("`modules <k>` header", 0))?;
    header.expect_literal("modules")?;
    let k: usize = header.expect_number("class count")?;
    header.expect_end()?;

    let mut classes = Vec::with_capacity(k);
    let mut total = 0usize;
    for i in 0..k {
        let mut line = lines
            .next()
            .ok_or_else(|| missing_line(&format!("class {i}"), i + 1))?;
        let mut class = Vec::new();
        while let Some((tok, col)) = line.next_token() {
            let v: u32 = tok.parse().map_err(|_| {
                ParseError::new(line.number, col, format!("invalid vertex id: `{tok}`"))
            })?;
            class.push(v);
        }
        if class.is_empty() {
            return Err(ParseError::new(line.number, 1, "empty class"));
        }
        total += class.len();
        classes.push(class);
    }
    if let Some(extra) = lines.next() {
        return Err(ParseError::new(
            extra.number,
            1,
            "unexpected content after classes",
        ));
    }
    ModulePartition::new(total, classes).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

// ---------------------------------------------------------------------------
// graph files
// ---------------------------------------------------------------------------

/// `graph <n> <m>` followed by `m` lines `u v`, one edge per line.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {}\n", g.n(), g.edges().len());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_graph(input: &str) -> Result<Graph, ParseError> {
    let mut lines = lines(input)?.into_iter();
    let mut header = lines
        .next()
        .ok_or_else(|| missing_line("`graph <n> <m>` header", 0))?;
    header.expect_literal("graph")?;
    let n: usize = header.expect_number("vertex count")?;
    let m: usize = header.expect_number("edge count")?;
    header.expect_end()?;

    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let mut line = lines
            .next()
            .ok_or_else(|| missing_line(&format!("edge {i}"), i + 1))?;
        let u: u32 = line.expect_number("endpoint")?;
        let v: u32 = line.expect_number("endpoint")?;
        line.expect_end()?;
        edges.push((u, v));
    }
    if let Some(extra) = lines.next() {
        return Err(ParseError::new(
            extra.number,
            1,
            "unexpected content after edges",
        ));
    }
    Graph::new(n, &edges).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

// ---------------------------------------------------------------------------
// DIMACS CNF files
// ---------------------------------------------------------------------------

/// Parsed DIMACS plus the two extension comments this tool understands:
/// `c dvar <v>` names the distinguished variable and `c lr <tags>` gives
/// one `L`/`R` side tag per clause in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsFile {
    pub cnf: Cnf,
    pub dvar: Option<usize>,
    pub sides: Option<Vec<ClauseSide>>,
}

pub fn serialize_dimacs(cnf: &Cnf, dvar: Option<usize>, sides: Option<&[ClauseSide]>) -> String {
    let mut out = String::new();
    if let Some(d) = dvar {
        let _ = writeln!(out, "c dvar {d}");
    }
    // A clause-free formula has nothing to tag.
    if let Some(sides) = sides.filter(|s| !s.is_empty()) {
        let tags: String = sides
            .iter()
            .map(|s| match s {
                ClauseSide::Left => 'L',
                ClauseSide::Right => 'R',
            })
            .collect();
        let _ = writeln!(out, "c lr {tags}");
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.num_clauses());
    for clause in cnf.clauses() {
        let lits: Vec<String> = clause.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "{} 0", lits.join(" "));
    }
    out
}

pub fn parse_dimacs(input: &str) -> Result<DimacsFile, ParseError> {
    let mut dvar: Option<usize> = None;
    let mut lr: Option<(String, usize)> = None;
    let mut head: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();

    for mut line in lines(input)? {
        let number = line.number;
        let (first, col) = line.expect_token("a line")?;
        match first {
            "c" => {
                match line.next_token() {
                    Some(("dvar", _)) => {
                        if dvar.is_some() {
                            return Err(ParseError::new(number, col, "duplicate `c dvar`"));
                        }
                        dvar = Some(line.expect_number("variable")?);
                        line.expect_end()?;
                    }
                    Some(("lr", _)) => {
                        if lr.is_some() {
                            return Err(ParseError::new(number, col, "duplicate `c lr`"));
                        }
                        let (tags, tcol) = line.expect_token("side tags")?;
                        if let Some(bad) = tags.chars().find(|&c| c != 'L' && c != 'R') {
                            return Err(ParseError::new(
                                number,
                                tcol,
                                format!("invalid side tag `{bad}`"),
                            ));
                        }
                        let tags = tags.to_string();
                        line.expect_end()?;
                        lr = Some((tags, number));
                    }
                    // Other comments are ignored, as is DIMACS custom.
                    _ => {}
                }
            }
            "p" => {
                if head.is_some() {
                    return Err(ParseError::new(number, col, "duplicate `p` line"));
                }
                line.expect_literal("cnf").map_err(|mut e| {
                    e.line = number;
                    e
                })?;
                let vars: usize = line.expect_number("variable count")?;
                let count: usize = line.expect_number("clause count")?;
                line.expect_end()?;
                head = Some((vars, count));
            }
            _ => {
                if head.is_none() {
                    return Err(ParseError::new(number, col, "clause before `p cnf` header"));
                }
                let mut clause = Vec::new();
                let mut lit: i32 = first.parse().map_err(|_| {
                    ParseError::new(number, col, format!("invalid literal `{first}`"))
                })?;
                loop {
                    if lit == 0 {
                        line.expect_end()?;
                        break;
                    }
                    clause.push(lit);
                    let (tok, tcol) = line.expect_token("literal or terminating 0")?;
                    lit = tok.parse().map_err(|_| {
                        ParseError::new(number, tcol, format!("invalid literal `{tok}`"))
                    })?;
                }
                if clause.is_empty() {
                    return Err(ParseError::new(number, col, "empty clause"));
                }
                clauses.push(clause);
            }
        }
    }

    let (vars, count) = head.ok_or_else(|| missing_line("`p cnf` header", 0))?;
    if clauses.len() != count {
        return Err(ParseError::new(
            1,
            1,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    let cnf = Cnf::new(vars, clauses).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    let sides = match lr {
        None => None,
        Some((tags, line_no)) => {
            if tags.len() != cnf.num_clauses() {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!(
                        "`c lr` has {} tags, formula has {} clauses",
                        tags.len(),
                        cnf.num_clauses()
                    ),
                ));
            }
            Some(
                tags.chars()
                    .map(|c| {
                        if c == 'L' {
                            ClauseSide::Left
                        } else {
                            ClauseSide::Right
                        }
                    })
                    .collect(),
            )
        }
    };
    if let Some(d) = dvar {
        if d == 0 || d > cnf.num_vars() {
            return Err(ParseError::new(1, 1, format!("dvar {d} out of range")));
        }
    }
    Ok(DimacsFile { cnf, dvar, sides })
}

// ---------------------------------------------------------------------------
// layout metadata files
// ---------------------------------------------------------------------------

/// Gadget layout metadata: one `module <name> <start> <end_exclusive>` line
/// per module in layout order, then `designated <id>`, then
/// `params <n> <m> <s1> <s2>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutFile {
    pub modules: Vec<(String, u128, u128)>,
    pub designated: u128,
    pub n: usize,
    pub m: usize,
    pub s1: u128,
    pub s2: u128,
}

impl LayoutFile {
    pub fn of_plan(plan: &GadgetPlan) -> Self {
        LayoutFile {
            modules: plan
                .modules()
                .iter()
                .map(|spec: &ModuleSpec| (spec.name(), spec.start, spec.end))
                .collect(),
            designated: plan.designated(),
            n: plan.params().n,
            m: plan.params().m,
            s1: plan.params().s1,
            s2: plan.params().s2,
        }
    }
}

pub fn serialize_layout(file: &LayoutFile) -> String {
    let mut out = String::new();
    for (name, start, end) in &file.modules {
        let _ = writeln!(out, "module {name} {start} {end}");
    }
    let _ = writeln!(out, "designated {}", file.designated);
    let _ = writeln!(out, "params {} {} {} {}", file.n, file.m, file.s1, file.s2);
    out
}

pub fn parse_layout(input: &str) -> Result<LayoutFile, ParseError> {
    let mut modules = Vec::new();
    let mut designated: Option<u128> = None;
    let mut params: Option<(usize, usize, u128, u128)> = None;

    for mut line in lines(input)? {
        let number = line.number;
        let (first, col) = line.expect_token("a line")?;
        match first {
            "module" => {
                if designated.is_some() || params.is_some() {
                    return Err(ParseError::new(
                        number,
                        col,
                        "module line after designated/params",
                    ));
                }
                let (name, _) = line.expect_token("module name")?;
                let name = name.to_string();
                let start: u128 = line.expect_number("start id")?;
                let end: u128 = line.expect_number("end id")?;
                line.expect_end()?;
                if end <= start {
                    return Err(ParseError::new(number, col, "empty module range"));
                }
                modules.push((name, start, end));
            }
            "designated" => {
                if designated.is_some() {
                    return Err(ParseError::new(number, col, "duplicate designated line"));
                }
                designated = Some(line.expect_number("vertex id")?);
                line.expect_end()?;
            }
            "params" => {
                if params.is_some() {
                    return Err(ParseError::new(number, col, "duplicate params line"));
                }
                if designated.is_none() {
                    return Err(ParseError::new(
                        number,
                        col,
                        "params line before designated",
                    ));
                }
                let n: usize = line.expect_number("variable count")?;
                let m: usize = line.expect_number("clause count")?;
                let s1: u128 = line.expect_number("s1")?;
                let s2: u128 = line.expect_number("s2")?;
                line.expect_end()?;
                params = Some((n, m, s1, s2));
            }
            other => {
                return Err(ParseError::new(
                    number,
                    col,
                    format!("unknown line `{other}`"),
                ));
            }
        }
    }
    let designated = designated.ok_or_else(|| missing_line("designated line", 0))?;
    let (n, m, s1, s2) = params.ok_or_else(|| missing_line("params line", 0))?;
    if modules.is_empty() {
        return Err(missing_line("module lines", 0));
    }
    Ok(LayoutFile {
        modules,
        designated,
        n,
        m,
        s1,
        s2,
    })
}
