//! Text format for diagrams.
//!
//! ```text
//! # comment
//! group cyclic 3
//! gauss: A B A B
//! labels: A=1, B=2
//! ---
//! raw: 1
//! pairs: A.0-A.3, A.1-A.2
//! circles: 1
//! orientation: A=0
//! rotation: A=1
//! ```
//!
//! The group header is optional (default `trivial`) and applies to every
//! diagram in the document. Labels default to the identity; the orientation
//! defaults to the first source-sink structure, or `none` when the shadow is
//! not good. An explicit `orientation: none` keeps a good diagram unoriented.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::functors::Homomorphism;
use crate::gknot::GGraph;
use crate::graph::{from_gauss_codes, FramedFourGraph, HalfEdge, SourceSinkStructure};
use crate::groups::{parse_group_lines, GroupElement, GroupSpec};
use crate::surface::RotationSystem;

/// Names A..Z, then V26, V27, ...
pub fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("V{i}")
    }
}

#[derive(Clone, Debug)]
pub struct DiagramEntry {
    pub names: Vec<String>,
    pub diagram: GGraph,
    pub rotation: Option<RotationSystem>,
    /// 1-based line of the stanza's first line.
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub group: GroupSpec,
    pub diagrams: Vec<DiagramEntry>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim_end()
}

/// Splits on commas outside parentheses.
fn split_list(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out.into_iter()
        .map(|(o, p)| (o + p.len() - p.trim_start().len(), p.trim()))
        .filter(|(_, p)| !p.is_empty())
        .collect()
}

struct Field<'a> {
    line: usize,
    /// 1-based column of `value`.
    column: usize,
    value: &'a str,
}

impl Field<'_> {
    fn error(&self, offset: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.column + offset, msg)
    }

    fn number(&self) -> Result<usize> {
        self.value.trim().parse().map_err(|_| self.error(0, format!("expected a number, got {:?}", self.value)))
    }

    /// `name=value` items.
    fn assignments(&self) -> Result<Vec<(usize, &str, &str)>> {
        split_list(self.value)
            .into_iter()
            .map(|(off, item)| {
                let (k, v) = item.split_once('=').ok_or_else(|| self.error(off, format!("expected name=value, got {item:?}")))?;
                Ok((off + item.find('=').unwrap() + 1, k.trim(), v.trim()))
            })
            .collect()
    }
}

fn lookup(names: &HashMap<&str, usize>, f: &Field, off: usize, name: &str) -> Result<usize> {
    names.get(name).copied().ok_or_else(|| f.error(off, format!("unknown vertex {name:?}")))
}

fn parse_half_edge(names: &HashMap<&str, usize>, f: &Field, off: usize, text: &str) -> Result<HalfEdge> {
    let (v, s) = text.rsplit_once('.').ok_or_else(|| f.error(off, format!("expected vertex.slot, got {text:?}")))?;
    let v = lookup(names, f, off, v.trim())?;
    let slot: u8 = s.trim().parse().map_err(|_| f.error(off, format!("bad slot in {text:?}")))?;
    Ok(HalfEdge::new(v, slot))
}

fn parse_stanza(group: &GroupSpec, fields: &[(String, Field)], first_line: usize) -> Result<DiagramEntry> {
    let get = |k: &str| fields.iter().find(|(n, _)| n == k).map(|(_, f)| f);
    for (i, (k, f)) in fields.iter().enumerate() {
        if fields[..i].iter().any(|(n, _)| n == k) {
            return Err(f.error(0, format!("duplicate field {k:?}")));
        }
    }
    let circles = get("circles").map(Field::number).transpose()?.unwrap_or(0);
    let (shadow, names) = match (get("gauss"), get("raw")) {
        (Some(g), None) => {
            let words: Vec<Vec<String>> =
                g.value.split('/').map(|w| w.split_whitespace().map(str::to_string).collect()).collect();
            let words: Vec<Vec<String>> = if g.value.trim().is_empty() { Vec::new() } else { words };
            let d = from_gauss_codes(&words, circles).map_err(|e| g.error(0, e.to_string()))?;
            (d.graph, d.names)
        }
        (None, Some(r)) => {
            let n = r.number()?;
            let names: Vec<String> = (0..n).map(default_name).collect();
            let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
            let mut pairs = Vec::new();
            if let Some(p) = get("pairs") {
                for (off, item) in split_list(p.value) {
                    let (a, b) = item.split_once('-').ok_or_else(|| p.error(off, format!("expected a-b, got {item:?}")))?;
                    pairs.push((parse_half_edge(&index, p, off, a)?, parse_half_edge(&index, p, off, b)?));
                }
            } else if n > 0 {
                return Err(r.error(0, "raw diagram needs a pairs line"));
            }
            let g = FramedFourGraph::from_pairs(n, &pairs, circles).map_err(|e| r.error(0, e.to_string()))?;
            (g, names)
        }
        (Some(f), Some(_)) => return Err(f.error(0, "give either gauss or raw, not both")),
        (None, None) => return Err(Error::parse(first_line, 1, "diagram needs a gauss or raw line")),
    };
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let n = shadow.vertex_count();
    let mut labels = vec![group.identity(); n];
    if let Some(f) = get("labels") {
        for (off, name, value) in f.assignments()? {
            let v = lookup(&index, f, off, name)?;
            labels[v] = group.parse_element(value).map_err(|e| match e {
                Error::Parse { pos, msg } => f.error(off + pos.column - 1, msg),
                other => f.error(off, other.to_string()),
            })?;
        }
    }
    let orientation = match get("orientation") {
        Some(f) if f.value.trim() == "none" => None,
        Some(f) => {
            let mut polarity = vec![None; n];
            for (off, name, value) in f.assignments()? {
                let v = lookup(&index, f, off, name)?;
                polarity[v] = Some(match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(f.error(off, format!("polarity must be 0 or 1, got {value:?}"))),
                });
            }
            let polarity: Vec<bool> = polarity
                .into_iter()
                .enumerate()
                .map(|(v, p)| p.ok_or_else(|| f.error(0, format!("no polarity for {}", names[v]))))
                .collect::<Result<_>>()?;
            let o = SourceSinkStructure { polarity, circle_orientations: vec![false; shadow.free_circles()] };
            if !o.is_valid_for(&shadow) {
                return Err(f.error(0, "not a source-sink structure of this diagram"));
            }
            Some(o)
        }
        None => shadow.first_source_sink_structure(),
    };
    let rotation = match get("rotation") {
        None => None,
        Some(f) => {
            let mut bits = vec![false; n];
            for (off, name, value) in f.assignments()? {
                bits[lookup(&index, f, off, name)?] = match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(f.error(off, format!("rotation must be 0 or 1, got {value:?}"))),
                };
            }
            Some(RotationSystem { bits })
        }
    };
    let diagram = GGraph::new(shadow, group.clone(), labels, orientation).map_err(|e| Error::parse(first_line, 1, e.to_string()))?;
    Ok(DiagramEntry { names, diagram, rotation, line: first_line })
}

const FIELDS: [&str; 8] = ["gauss", "raw", "pairs", "circles", "labels", "orientation", "rotation", "hom"];

/// Parses a document of one or more diagrams.
pub fn parse_document(text: &str) -> Result<Document> {
    let lines: Vec<&str> = text.lines().map(strip_comment).collect();
    let mut i = 0;
    while i < lines.len() && lines[i].trim().is_empty() {
        i += 1;
    }
    let group = match lines.get(i) {
        Some(l) if !l.contains(':') && l.trim() != "---" => {
            let (g, next) = parse_group_lines(&lines, i)?;
            i = next;
            g
        }
        _ => GroupSpec::Trivial,
    };
    let mut diagrams = Vec::new();
    let mut fields: Vec<(String, Field)> = Vec::new();
    let mut first_line = i + 1;
    let mut flush = |fields: &mut Vec<(String, Field)>, first: usize| -> Result<()> {
        if !fields.is_empty() {
            diagrams.push(parse_stanza(&group, fields, first)?);
            fields.clear();
        }
        Ok(())
    };
    for (idx, line) in lines.iter().enumerate().skip(i) {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if line.trim() == "---" {
            flush(&mut fields, first_line)?;
            continue;
        }
        let (key, value) =
            line.split_once(':').ok_or_else(|| Error::parse(line_no, 1, format!("expected `field: value`, got {:?}", line.trim())))?;
        let key = key.trim();
        if !FIELDS.contains(&key) || key == "hom" {
            return Err(Error::parse(line_no, 1, format!("unknown field {key:?}")));
        }
        if fields.is_empty() {
            first_line = line_no;
        }
        let column = line.find(':').unwrap() + 2 + (value.len() - value.trim_start().len());
        fields.push((key.to_string(), Field { line: line_no, column, value: value.trim() }));
    }
    flush(&mut fields, first_line)?;
    if diagrams.is_empty() {
        return Err(Error::parse(lines.len().max(1), 1, "no diagram found"));
    }
    Ok(Document { group, diagrams })
}

/// Parses a document holding exactly one diagram.
pub fn parse_diagram(text: &str) -> Result<GGraph> {
    let mut doc = parse_document(text)?;
    if doc.diagrams.len() != 1 {
        return Err(Error::parse(1, 1, format!("expected one diagram, found {}", doc.diagrams.len())));
    }
    Ok(doc.diagrams.remove(0).diagram)
}

/// Raw stanza of a diagram, without the group header.
pub fn print_diagram(k: &GGraph, names: Option<&[String]>, rotation: Option<&RotationSystem>) -> String {
    let n = k.vertex_count();
    let name = |v: usize| names.map_or_else(|| default_name(v), |ns| ns[v].clone());
    let shadow = k.shadow();
    let mut s = String::new();
    writeln!(s, "raw: {n}").unwrap();
    if n > 0 {
        let pairs: Vec<String> = shadow
            .edges()
            .map(|(a, b)| format!("{}.{}-{}.{}", name(a / 4), a % 4, name(b / 4), b % 4))
            .collect();
        writeln!(s, "pairs: {}", pairs.join(", ")).unwrap();
    }
    if shadow.free_circles() > 0 {
        writeln!(s, "circles: {}", shadow.free_circles()).unwrap();
    }
    if n > 0 && *k.group() != GroupSpec::Trivial {
        let labels: Vec<String> = (0..n).map(|v| format!("{}={}", name(v), k.group().format_element(k.label(v)))).collect();
        writeln!(s, "labels: {}", labels.join(", ")).unwrap();
    }
    match k.orientation() {
        None => writeln!(s, "orientation: none").unwrap(),
        Some(o) if n > 0 => {
            let bits: Vec<String> = (0..n).map(|v| format!("{}={}", name(v), o.polarity[v] as u8)).collect();
            writeln!(s, "orientation: {}", bits.join(", ")).unwrap();
        }
        Some(_) => {}
    }
    if let Some(r) = rotation {
        let bits: Vec<String> = (0..n).map(|v| format!("{}={}", name(v), r.bits[v] as u8)).collect();
        writeln!(s, "rotation: {}", bits.join(", ")).unwrap();
    }
    s
}

/// Group header followed by the diagram's raw stanza.
pub fn print_document(k: &GGraph) -> String {
    format!("{}\n{}", k.group().to_text(), print_diagram(k, None, None))
}

/// Parses a target group header followed by `hom: a->b, ...`.
pub fn parse_homomorphism(text: &str, source: &GroupSpec) -> Result<Homomorphism> {
    let lines: Vec<&str> = text.lines().map(strip_comment).collect();
    let (target, next) = parse_group_lines(&lines, 0)?;
    let (idx, line) = lines
        .iter()
        .enumerate()
        .skip(next)
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(lines.len().max(1), 1, "missing hom line"))?;
    let value = line
        .trim()
        .strip_prefix("hom:")
        .ok_or_else(|| Error::parse(idx + 1, 1, "expected `hom: a->b, ...`"))?;
    let f = Field { line: idx + 1, column: line.find(':').unwrap() + 2, value: value.trim() };
    let mut pairs = Vec::new();
    for (off, item) in split_list(f.value) {
        let (a, b) = item.split_once("->").ok_or_else(|| f.error(off, format!("expected a->b, got {item:?}")))?;
        let a = source.parse_element(a.trim()).map_err(|e| f.error(off, e.to_string()))?;
        let b = target.parse_element(b.trim()).map_err(|e| f.error(off, e.to_string()))?;
        pairs.push((a, b));
    }
    Homomorphism::from_pairs(source, &target, &pairs)
}

/// Parses a comma separated list of group elements.
pub fn parse_element_list(group: &GroupSpec, text: &str) -> Result<Vec<GroupElement>> {
    split_list(text).into_iter().map(|(_, e)| group.parse_element(e)).collect()
}

/// Parses `a=b, ...` pairs of group elements.
pub fn parse_element_pairs(group: &GroupSpec, text: &str) -> Result<Vec<(GroupElement, GroupElement)>> {
    split_list(text)
        .into_iter()
        .map(|(off, item)| {
            let (a, b) = item.split_once('=').ok_or_else(|| Error::parse(1, off + 1, format!("expected a=b, got {item:?}")))?;
            Ok((group.parse_element(a.trim())?, group.parse_element(b.trim())?))
        })
        .collect()
}
