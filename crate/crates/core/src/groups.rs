//! Group backends with decidable equality, used as vertex labels.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl TableGroup {
    /// Validates the table: Latin square, two-sided identity and, for up to
    /// 64 elements, associativity.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Domain("empty multiplication table".into()));
        }
        if identity >= n {
            return Err(Error::Domain(format!("identity {identity} out of range")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Domain(format!("row {i} is not a permutation")));
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[j]], true) {
                    return Err(Error::Domain(format!("column {j} is not a permutation")));
                }
            }
        }
        for x in 0..n {
            if table[identity][x] != x || table[x][identity] != x {
                return Err(Error::Domain(format!("{identity} is not an identity")));
            }
        }
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            return Err(Error::Domain(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        }
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == identity).unwrap()).collect();
        Ok(TableGroup { table, identity, inverses })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Trivial,
    Cyclic(u64),
    Table(Arc<TableGroup>),
    Free(usize),
    Product(Vec<GroupSpec>),
}

/// Element of some [`GroupSpec`]. Free words hold letters `±(i+1)` for
/// generator `x{i+1}` and are kept freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Unit,
    Residue(u64),
    Index(usize),
    Word(Vec<i32>),
    Tuple(Vec<GroupElement>),
}

fn mismatch(spec: &GroupSpec, e: &GroupElement) -> Error {
    Error::GroupMismatch(format!("{e:?} is not an element of {spec}"))
}

fn reduce_word(word: &mut Vec<i32>, letter: i32) {
    if word.last() == Some(&-letter) {
        word.pop();
    } else {
        word.push(letter);
    }
}

impl GroupSpec {
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("cyclic group order must be at least 1".into()));
        }
        Ok(GroupSpec::Cyclic(n))
    }

    pub fn table(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        Ok(GroupSpec::Table(Arc::new(TableGroup::new(table, identity)?)))
    }

    /// The symmetric group on three letters; index `i` is the `i`-th
    /// permutation of (0,1,2) in lexicographic order, so 0 is the identity.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        // (a*b)(x) = a(b(x))
                        let comp = [perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]];
                        idx(comp)
                    })
                    .collect()
            })
            .collect();
        GroupSpec::table(table, 0).expect("S3 table is valid")
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Trivial => GroupElement::Unit,
            GroupSpec::Cyclic(_) => GroupElement::Residue(0),
            GroupSpec::Table(t) => GroupElement::Index(t.identity),
            GroupSpec::Free(_) => GroupElement::Word(Vec::new()),
            GroupSpec::Product(parts) => GroupElement::Tuple(parts.iter().map(|p| p.identity()).collect()),
        }
    }

    /// Checks that `e` belongs to this group.
    pub fn check(&self, e: &GroupElement) -> Result<()> {
        let ok = match (self, e) {
            (GroupSpec::Trivial, GroupElement::Unit) => true,
            (GroupSpec::Cyclic(n), GroupElement::Residue(r)) => r < n,
            (GroupSpec::Table(t), GroupElement::Index(i)) => *i < t.size(),
            (GroupSpec::Free(r), GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *r)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupSpec::Product(parts), GroupElement::Tuple(xs)) => {
                return if parts.len() == xs.len() {
                    parts.iter().zip(xs).try_for_each(|(p, x)| p.check(x))
                } else {
                    Err(mismatch(self, e))
                };
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(mismatch(self, e))
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupSpec::Trivial, _, _) => GroupElement::Unit,
            (GroupSpec::Cyclic(n), GroupElement::Residue(x), GroupElement::Residue(y)) => {
                GroupElement::Residue((x + y) % n)
            }
            (GroupSpec::Table(t), GroupElement::Index(x), GroupElement::Index(y)) => {
                GroupElement::Index(t.table[*x][*y])
            }
            (GroupSpec::Free(_), GroupElement::Word(x), GroupElement::Word(y)) => {
                let mut w = x.clone();
                for &l in y {
                    reduce_word(&mut w, l);
                }
                GroupElement::Word(w)
            }
            (GroupSpec::Product(parts), GroupElement::Tuple(xs), GroupElement::Tuple(ys)) => {
                GroupElement::Tuple(
                    parts.iter().zip(xs.iter().zip(ys)).map(|(p, (x, y))| p.mul_unchecked(x, y)).collect(),
                )
            }
            _ => unreachable!("elements were checked"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.inv_unchecked(a))
    }

    fn inv_unchecked(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GroupSpec::Trivial, _) => GroupElement::Unit,
            (GroupSpec::Cyclic(n), GroupElement::Residue(x)) => GroupElement::Residue((n - x) % n),
            (GroupSpec::Table(t), GroupElement::Index(x)) => GroupElement::Index(t.inverses[*x]),
            (GroupSpec::Free(_), GroupElement::Word(w)) => {
                GroupElement::Word(w.iter().rev().map(|l| -l).collect())
            }
            (GroupSpec::Product(parts), GroupElement::Tuple(xs)) => {
                GroupElement::Tuple(parts.iter().zip(xs).map(|(p, x)| p.inv_unchecked(x)).collect())
            }
            _ => unreachable!("elements were checked"),
        }
    }

    /// Elements are kept in normal form, so equality is structural.
    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(a == b)
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        *a == self.identity()
    }

    pub fn product_of(&self, elements: &[GroupElement]) -> Result<GroupElement> {
        elements.iter().try_fold(self.identity(), |acc, e| self.multiply(&acc, e))
    }

    /// Number of elements, `None` for infinite groups.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Trivial => Some(1),
            GroupSpec::Cyclic(n) => Some(*n as usize),
            GroupSpec::Table(t) => Some(t.size()),
            GroupSpec::Free(0) => Some(1),
            GroupSpec::Free(_) => None,
            GroupSpec::Product(parts) => parts.iter().map(|p| p.order()).product(),
        }
    }

    /// All elements in increasing order, for finite groups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        match self {
            GroupSpec::Trivial => Some(vec![GroupElement::Unit]),
            GroupSpec::Cyclic(n) => Some((0..*n).map(GroupElement::Residue).collect()),
            GroupSpec::Table(t) => Some((0..t.size()).map(GroupElement::Index).collect()),
            GroupSpec::Free(0) => Some(vec![GroupElement::Word(Vec::new())]),
            GroupSpec::Free(_) => None,
            GroupSpec::Product(parts) => {
                let mut acc: Vec<Vec<GroupElement>> = vec![Vec::new()];
                for p in parts {
                    let els = p.elements()?;
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            els.iter().map(move |e| {
                                let mut v = prefix.clone();
                                v.push(e.clone());
                                v
                            })
                        })
                        .collect();
                }
                Some(acc.into_iter().map(GroupElement::Tuple).collect())
            }
        }
    }

    /// Generators and their inverses for free groups, every element otherwise.
    pub fn candidate_labels(&self) -> Vec<GroupElement> {
        match self {
            GroupSpec::Free(r) => {
                let mut v = vec![GroupElement::Word(Vec::new())];
                for i in 1..=*r as i32 {
                    v.push(GroupElement::Word(vec![i]));
                    v.push(GroupElement::Word(vec![-i]));
                }
                v
            }
            _ => self.elements().unwrap_or_default(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::Trivial | GroupSpec::Cyclic(_) => true,
            GroupSpec::Free(r) => *r <= 1,
            GroupSpec::Table(t) => {
                let n = t.size();
                (0..n).all(|a| (0..n).all(|b| t.table[a][b] == t.table[b][a]))
            }
            GroupSpec::Product(parts) => parts.iter().all(GroupSpec::is_abelian),
        }
    }

    /// Key of the unordered pair {g, g⁻¹}; the identity is rejected.
    pub fn inversion_pair_key(&self, g: &GroupElement) -> Result<PairKey> {
        self.check(g)?;
        if self.is_identity(g) {
            return Err(Error::Domain("the identity has no inversion pair key".into()));
        }
        let inv = self.inv_unchecked(g);
        let representative = if inv < *g { inv } else { g.clone() };
        let text = self.format_element(&representative);
        Ok(PairKey { representative, text })
    }

    pub fn format_element(&self, e: &GroupElement) -> String {
        match (self, e) {
            (_, GroupElement::Unit) => "1".into(),
            (_, GroupElement::Residue(r)) => r.to_string(),
            (_, GroupElement::Index(i)) => i.to_string(),
            (_, GroupElement::Word(w)) => format_word(w),
            (GroupSpec::Product(parts), GroupElement::Tuple(xs)) => {
                let inner: Vec<String> = parts.iter().zip(xs).map(|(p, x)| p.format_element(x)).collect();
                format!("({})", inner.join(","))
            }
            (_, GroupElement::Tuple(xs)) => format!("{xs:?}"),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let mut p = ElementParser { s: text.as_bytes(), pos: 0 };
        p.skip_ws();
        let e = p.element(self)?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    /// Parses a group header such as `cyclic 6`, `free 2`, `trivial`,
    /// `product cyclic 2;cyclic 3`, or `table <n>` followed by `n` rows and
    /// an `identity <i>` line. A leading `group` keyword is accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        let (spec, used) = parse_group_lines(&lines, 0)?;
        if let Some((i, l)) = lines.iter().enumerate().skip(used).find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::parse(i + 1, 1, format!("unexpected line after group: {}", l.trim())));
        }
        Ok(spec)
    }

    /// Text form accepted by [`GroupSpec::parse`].
    pub fn to_text(&self) -> String {
        match self {
            GroupSpec::Table(t) => {
                let mut s = format!("group table {}\n", t.size());
                for row in &t.table {
                    let r: Vec<String> = row.iter().map(usize::to_string).collect();
                    s.push_str(&r.join(" "));
                    s.push('\n');
                }
                s.push_str(&format!("identity {}", t.identity));
                s
            }
            other => format!("group {other}"),
        }
    }
}

/// Parses one group header starting at `lines[start]`; returns the group and
/// the index of the first line after it.
pub(crate) fn parse_group_lines(lines: &[&str], start: usize) -> Result<(GroupSpec, usize)> {
    let mut i = start;
    while i < lines.len() && lines[i].trim().is_empty() {
        i += 1;
    }
    let Some(first) = lines.get(i) else {
        return Err(Error::parse(i + 1, 1, "missing group header"));
    };
    let line_no = i + 1;
    let body = first.trim();
    let body = body.strip_prefix("group").map(str::trim).unwrap_or(body);
    let mut words = body.split_whitespace();
    let kind = words.next().unwrap_or("");
    let rest: Vec<&str> = words.collect();
    let number = |what: &str| -> Result<u64> {
        rest.first()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| Error::parse(line_no, 1, format!("expected {what}")))
    };
    let spec = match kind {
        "trivial" => GroupSpec::Trivial,
        "cyclic" => GroupSpec::cyclic(number("cyclic order")?)
            .map_err(|e| Error::parse(line_no, 1, e.to_string()))?,
        "free" => GroupSpec::Free(number("free rank")? as usize),
        "product" => {
            let joined = rest.join(" ");
            let mut parts = Vec::new();
            for piece in joined.split(';') {
                let (p, _) = parse_group_lines(&[piece], 0).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::parse(line_no, 1, msg),
                    other => other,
                })?;
                if matches!(p, GroupSpec::Table(_) | GroupSpec::Product(_)) {
                    return Err(Error::parse(line_no, 1, "product factors must be one-line groups"));
                }
                parts.push(p);
            }
            GroupSpec::Product(parts)
        }
        "table" => {
            let n = number("table size")? as usize;
            let mut rows = Vec::with_capacity(n);
            for r in 0..n {
                let idx = i + 1 + r;
                let line = lines.get(idx).ok_or_else(|| Error::parse(idx + 1, 1, "missing table row"))?;
                let row: Result<Vec<usize>> = line
                    .split_whitespace()
                    .map(|w| w.parse().map_err(|_| Error::parse(idx + 1, 1, format!("bad entry {w:?}"))))
                    .collect();
                rows.push(row?);
            }
            let idx = i + 1 + n;
            let id_line = lines.get(idx).map(|l| l.trim()).unwrap_or("");
            let identity = id_line
                .strip_prefix("identity")
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| Error::parse(idx + 1, 1, "expected `identity <i>`"))?;
            let spec = GroupSpec::table(rows, identity).map_err(|e| Error::parse(line_no, 1, e.to_string()))?;
            return Ok((spec, idx + 1));
        }
        other => return Err(Error::parse(line_no, 1, format!("unknown group kind {other:?}"))),
    };
    Ok((spec, i + 1))
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "trivial"),
            GroupSpec::Cyclic(n) => write!(f, "cyclic {n}"),
            GroupSpec::Table(t) => write!(f, "table {}", t.size()),
            GroupSpec::Free(r) => write!(f, "free {r}"),
            GroupSpec::Product(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "product {}", inner.join(";"))
            }
        }
    }
}

/// Canonical key of {g, g⁻¹}: the smaller of the two elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairKey {
    pub representative: GroupElement,
    text: String,
}

impl fmt::Display for PairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.text)
    }
}

fn format_word(w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let letter = w[i];
        let mut j = i;
        while j < w.len() && w[j] == letter {
            j += 1;
        }
        let exp = (j - i) as i64 * letter.signum() as i64;
        let g = letter.abs();
        out.push(if exp == 1 { format!("x{g}") } else { format!("x{g}^{exp}") });
        i = j;
    }
    out.join("*")
}

struct ElementParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ElementParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(1, start + 1, "number too large"))
    }

    fn element(&mut self, spec: &GroupSpec) -> Result<GroupElement> {
        let start = self.pos;
        let e = match spec {
            GroupSpec::Trivial => {
                if self.number()? != 1 {
                    return Err(Error::parse(1, start + 1, "the trivial group has only 1"));
                }
                GroupElement::Unit
            }
            GroupSpec::Cyclic(_) => GroupElement::Residue(self.number()?),
            GroupSpec::Table(_) => GroupElement::Index(self.number()? as usize),
            GroupSpec::Free(_) => self.word()?,
            GroupSpec::Product(parts) => {
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let mut xs = Vec::with_capacity(parts.len());
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 && !self.eat(b',') {
                        return Err(self.error("expected ','"));
                    }
                    self.skip_ws();
                    xs.push(self.element(p)?);
                }
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                GroupElement::Tuple(xs)
            }
        };
        spec.check(&e).map_err(|_| Error::parse(1, start + 1, "element out of range"))?;
        Ok(e)
    }

    fn word(&mut self) -> Result<GroupElement> {
        let mut w = Vec::new();
        loop {
            self.skip_ws();
            if self.s.get(self.pos) == Some(&b'1') {
                self.pos += 1;
            } else {
                if !self.eat(b'x') {
                    return Err(self.error("expected a generator like x1"));
                }
                let g = self.number()? as i32;
                if g == 0 {
                    return Err(self.error("generators are numbered from 1"));
                }
                let mut exp: i64 = 1;
                if self.eat(b'^') {
                    let neg = self.eat(b'-');
                    exp = self.number()? as i64;
                    if neg {
                        exp = -exp;
                    }
                }
                let letter = if exp < 0 { -g } else { g };
                for _ in 0..exp.unsigned_abs() {
                    reduce_word(&mut w, letter);
                }
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(GroupElement::Word(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: u64) -> GroupElement {
        GroupElement::Residue(x)
    }

    #[test]
    fn group_examples() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        assert_eq!(z6.multiply(&r(4), &r(5)).unwrap(), r(3));
        let f2 = GroupSpec::Free(2);
        let xy = f2.parse_element("x1*x2").unwrap();
        let yinv = f2.parse_element("x2^-1").unwrap();
        assert_eq!(f2.multiply(&xy, &yinv).unwrap(), GroupElement::Word(vec![1]));
        let s3 = GroupSpec::symmetric3();
        let transposition = GroupElement::Index(1);
        assert_eq!(s3.inverse(&transposition).unwrap(), transposition);
        assert!(!s3.is_abelian());
        assert!(z6.multiply(&r(6), &r(1)).is_err());
        assert!(matches!(z6.multiply(&GroupElement::Index(1), &r(1)), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn pair_keys() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        assert_eq!(z5.inversion_pair_key(&r(2)).unwrap(), z5.inversion_pair_key(&r(3)).unwrap());
        let z4 = GroupSpec::cyclic(4).unwrap();
        assert_eq!(z4.inversion_pair_key(&r(2)).unwrap().to_string(), "{2}");
        let f1 = GroupSpec::Free(1);
        let x2 = f1.parse_element("x1^2").unwrap();
        let xm2 = f1.parse_element("x1^-2").unwrap();
        let x = f1.parse_element("x1").unwrap();
        assert_eq!(f1.inversion_pair_key(&x2).unwrap(), f1.inversion_pair_key(&xm2).unwrap());
        assert_ne!(f1.inversion_pair_key(&x2).unwrap(), f1.inversion_pair_key(&x).unwrap());
        assert!(matches!(z5.inversion_pair_key(&r(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_examples() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        assert_eq!(z6.parse_element("4").unwrap(), r(4));
        let f2 = GroupSpec::Free(2);
        assert_eq!(f2.parse_element("x1*x1^-1").unwrap(), f2.identity());
        let p = GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)]);
        assert_eq!(p.parse_element("(1,2)").unwrap(), GroupElement::Tuple(vec![r(1), r(2)]));
        match z6.parse_element("7") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos.column, 1),
            other => panic!("{other:?}"),
        }
        match f2.parse_element("x1*y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos.column, 4),
            other => panic!("{other:?}"),
        }
        assert!(f2.parse_element("x3").is_err());
    }

    #[test]
    fn word_printing() {
        let f2 = GroupSpec::Free(2);
        for text in ["1", "x1", "x1^2", "x1^-3*x2", "x2*x1^-1*x2^2"] {
            let e = f2.parse_element(text).unwrap();
            assert_eq!(f2.format_element(&e), text);
        }
    }

    #[test]
    fn group_file_format() {
        assert_eq!(GroupSpec::parse("group cyclic 6").unwrap(), GroupSpec::Cyclic(6));
        assert_eq!(GroupSpec::parse("group free 2").unwrap(), GroupSpec::Free(2));
        assert_eq!(
            GroupSpec::parse("group product cyclic 2;cyclic 3").unwrap(),
            GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)])
        );
        let s3 = GroupSpec::symmetric3();
        assert_eq!(GroupSpec::parse(&s3.to_text()).unwrap(), s3);
        let bad = "group table 2\n0 1\n0 1\nidentity 0";
        assert!(GroupSpec::parse(bad).is_err());
        let non_assoc = "group table 3\n0 1 2\n1 0 2\n2 2 0\nidentity 0";
        assert!(GroupSpec::parse(non_assoc).is_err());
        assert!(GroupSpec::parse("group cyclic 0").is_err());
    }

    #[test]
    fn axioms_on_finite_backends() {
        let groups = [
            GroupSpec::Trivial,
            GroupSpec::Cyclic(1),
            GroupSpec::Cyclic(7),
            GroupSpec::symmetric3(),
            GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(2)]),
        ];
        for g in &groups {
            let els = g.elements().unwrap();
            assert_eq!(els.len(), g.order().unwrap());
            let id = g.identity();
            for a in &els {
                assert_eq!(&g.multiply(a, &id).unwrap(), a);
                assert_eq!(&g.multiply(&id, a).unwrap(), a);
                let inv = g.inverse(a).unwrap();
                assert_eq!(g.multiply(a, &inv).unwrap(), id);
                if !g.is_identity(a) {
                    assert_eq!(g.inversion_pair_key(a).unwrap(), g.inversion_pair_key(&inv).unwrap());
                }
                assert_eq!(&g.parse_element(&g.format_element(a)).unwrap(), a);
                for b in &els {
                    for c in &els {
                        let l = g.multiply(&g.multiply(a, b).unwrap(), c).unwrap();
                        let r = g.multiply(a, &g.multiply(b, c).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }
}
