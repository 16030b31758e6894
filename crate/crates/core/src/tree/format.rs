//! Line-oriented text formats for trees and traces.
//!
//! ```text
//! ktree k=2 n=2
//! node 1 clique 0
//! node 2 clique 1
//! clique 0 members 0_1,0_2 children 1
//! clique 1 members 0_2,1 children 2
//! clique 2 members 0_1,1 children
//! ...
//! ```
//!
//! Traces are `trace k=<k>` followed by whitespace-separated slot choices.

use std::fmt::Write as _;

use super::{InsertionTrace, KTree, Label};
use crate::error::{Error, Result};

pub fn serialize(tree: &KTree) -> String {
    let mut out = String::new();
    writeln!(out, "ktree k={} n={}", tree.k(), tree.size()).unwrap();
    for j in 1..=tree.size() as u32 {
        let id = tree.inserted(j).unwrap();
        writeln!(out, "node {j} clique {}", tree.node(id).parent_clique.unwrap()).unwrap();
    }
    for c in tree.cliques() {
        let members: Vec<String> = c.members.iter().map(|&m| tree.label_of(m).to_string()).collect();
        let children: Vec<String> = c.children.iter().map(|x| x.to_string()).collect();
        write!(out, "clique {} members {} children", c.id, members.join(",")).unwrap();
        if !children.is_empty() {
            write!(out, " {}", children.join(",")).unwrap();
        }
        out.push('\n');
    }
    out
}

struct Cursor<'a> {
    line: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in text.char_indices() {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push((s + 1, &text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &text[s..]));
        }
        Self { line, tokens }
    }

    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn column(&self, idx: usize) -> usize {
        self.tokens
            .get(idx)
            .map(|t| t.0)
            .unwrap_or_else(|| self.tokens.last().map(|t| t.0 + t.1.len()).unwrap_or(1))
    }

    fn token(&self, idx: usize, what: &str) -> Result<&'a str> {
        self.tokens
            .get(idx)
            .map(|t| t.1)
            .ok_or_else(|| self.err(self.column(idx), format!("expected {what}")))
    }

    fn keyword(&self, idx: usize, kw: &str) -> Result<()> {
        let t = self.token(idx, kw)?;
        if t != kw {
            return Err(self.err(self.column(idx), format!("expected `{kw}`, found `{t}`")));
        }
        Ok(())
    }

    fn number<T: std::str::FromStr>(&self, idx: usize, what: &str) -> Result<T> {
        let t = self.token(idx, what)?;
        t.parse()
            .map_err(|_| self.err(self.column(idx), format!("expected {what}, found `{t}`")))
    }

    fn assignment(&self, idx: usize, key: &str) -> Result<u64> {
        let t = self.token(idx, key)?;
        t.strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| self.err(self.column(idx), format!("expected `{key}=<integer>`, found `{t}`")))
    }

    fn list<T>(&self, idx: usize, parse: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Vec<T>> {
        match self.tokens.get(idx) {
            None => Ok(Vec::new()),
            Some(&(col, t)) => t
                .split(',')
                .map(|item| parse(item).map_err(|m| self.err(col, m)))
                .collect(),
        }
    }

    fn end(&self, idx: usize) -> Result<()> {
        if idx < self.tokens.len() {
            return Err(self.err(self.column(idx), format!("unexpected `{}`", self.tokens[idx].1)));
        }
        Ok(())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

struct CliqueLine {
    line: usize,
    members: Vec<Label>,
    children: Vec<u32>,
}

pub fn deserialize(text: &str) -> Result<KTree> {
    let mut lines = content_lines(text);
    let (hline, htext) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "empty document".into(),
    })?;
    let header = Cursor::new(hline, htext);
    header.keyword(0, "ktree")?;
    let k = header.assignment(1, "k")? as usize;
    let n = header.assignment(2, "n")? as usize;
    header.end(3)?;
    if k < 1 {
        return Err(header.err(header.column(1), "k must be >= 1"));
    }

    let mut parent: Vec<Option<(usize, u32)>> = vec![None; n + 1];
    let mut cliques: Vec<Option<CliqueLine>> = vec![];
    for (line, body) in lines {
        let cur = Cursor::new(line, body);
        match cur.token(0, "record type")? {
            "node" => {
                let j: usize = cur.number(1, "node label")?;
                if j == 0 || j > n {
                    return Err(cur.err(cur.column(1), format!("node label {j} outside 1..={n}")));
                }
                cur.keyword(2, "clique")?;
                let c: u32 = cur.number(3, "clique id")?;
                cur.end(4)?;
                if parent[j].is_some() {
                    return Err(cur.err(cur.column(1), format!("duplicate node {j}")));
                }
                parent[j] = Some((line, c));
            }
            "clique" => {
                let c: usize = cur.number(1, "clique id")?;
                cur.keyword(2, "members")?;
                let members = cur.list(3, |s| s.parse::<Label>())?;
                cur.keyword(4, "children")?;
                let children = cur.list(5, |s| s.parse::<u32>().map_err(|_| format!("bad child label `{s}`")))?;
                cur.end(6)?;
                if members.len() != k {
                    return Err(cur.err(cur.column(3), format!("expected {k} members, found {}", members.len())));
                }
                if cliques.len() <= c {
                    cliques.resize_with(c + 1, || None);
                }
                if cliques[c].is_some() {
                    return Err(cur.err(cur.column(1), format!("duplicate clique {c}")));
                }
                cliques[c] = Some(CliqueLine { line, members, children });
            }
            other => return Err(cur.err(cur.column(0), format!("unknown record `{other}`"))),
        }
    }

    let expected_cliques = 1 + k * n;
    if cliques.len() != expected_cliques || cliques.iter().any(Option::is_none) {
        let present = cliques.iter().filter(|c| c.is_some()).count();
        return Err(Error::Parse {
            line: hline,
            column: 1,
            message: format!("expected {expected_cliques} clique records (ids 0..), found {present}"),
        });
    }
    let cliques: Vec<CliqueLine> = cliques.into_iter().map(Option::unwrap).collect();

    let mut tree = KTree::new(k).unwrap();
    for j in 1..=n {
        let (line, c) = parent[j].ok_or(Error::Parse {
            line: hline,
            column: 1,
            message: format!("missing record for node {j}"),
        })?;
        let bad = |message: String| Error::Parse { line, column: 1, message };
        if c as usize >= tree.clique_count() {
            return Err(bad(format!("node {j} attaches to clique {c}, which does not exist yet")));
        }
        let doc_children = &cliques[c as usize].children;
        let idx = doc_children
            .iter()
            .position(|&x| x as usize == j)
            .ok_or_else(|| bad(format!("clique {c} does not list node {j} as a child")))?;
        let position = 1 + doc_children[..idx].iter().filter(|&&x| (x as usize) < j).count();
        let slot = tree.slot_of(c, position).map_err(|e| bad(e.to_string()))?;
        tree.insert_at(slot).map_err(|e| bad(e.to_string()))?;
    }

    for (c, record) in tree.cliques().zip(&cliques) {
        let members: Vec<Label> = c.members.iter().map(|&m| tree.label_of(m)).collect();
        if members != record.members || c.children != record.children.as_slice() {
            return Err(Error::Parse {
                line: record.line,
                column: 1,
                message: format!("clique {} does not match the tree implied by the node records", c.id),
            });
        }
    }
    Ok(tree)
}

pub fn format_trace(trace: &InsertionTrace) -> String {
    let mut out = format!("trace k={}\n", trace.k);
    let choices: Vec<String> = trace.choices.iter().map(u64::to_string).collect();
    if !choices.is_empty() {
        out.push_str(&choices.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_trace(text: &str) -> Result<InsertionTrace> {
    let mut lines = content_lines(text);
    let (hline, htext) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "empty document".into(),
    })?;
    let header = Cursor::new(hline, htext);
    header.keyword(0, "trace")?;
    let k = header.assignment(1, "k")? as usize;
    header.end(2)?;
    let mut choices = Vec::new();
    for (line, body) in lines {
        let cur = Cursor::new(line, body);
        for idx in 0..cur.tokens.len() {
            choices.push(cur.number::<u64>(idx, "slot choice")?);
        }
    }
    Ok(InsertionTrace::new(k, choices))
}
