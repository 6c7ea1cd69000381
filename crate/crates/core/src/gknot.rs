//! G-labeled diagrams, labeled Reidemeister moves and bounded equivalence search.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::canon::{canonical_code, decode, CanonicalKey};
use crate::error::{Error, Result};
use crate::graph::{from_gauss_codes, opposite, Extension, FramedFourGraph, SourceSinkStructure};
use crate::groups::{GroupElement, GroupSpec};

/// A framed 4-graph with group-labeled vertices and, when the shadow is
/// good, a chosen source-sink structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GGraph {
    shadow: FramedFourGraph,
    group: GroupSpec,
    labels: Vec<GroupElement>,
    orientation: Option<SourceSinkStructure>,
}

impl GGraph {
    /// Checks labels against the group and the orientation against the
    /// shadow. `None` gives an unoriented diagram, good shadow or not.
    pub fn new(
        shadow: FramedFourGraph,
        group: GroupSpec,
        labels: Vec<GroupElement>,
        orientation: Option<SourceSinkStructure>,
    ) -> Result<Self> {
        if labels.len() != shadow.vertex_count() {
            return Err(Error::Domain(format!(
                "{} labels for {} vertices",
                labels.len(),
                shadow.vertex_count()
            )));
        }
        for l in &labels {
            group.check(l)?;
        }
        match &orientation {
            Some(o) if !o.is_valid_for(&shadow) => {
                return Err(Error::Domain("orientation is not a source-sink structure of the shadow".into()))
            }
            _ => {}
        }
        Ok(GGraph { shadow, group, labels, orientation })
    }

    /// Uses the lexicographically first source-sink structure, if any.
    pub fn with_first_orientation(
        shadow: FramedFourGraph,
        group: GroupSpec,
        labels: Vec<GroupElement>,
    ) -> Result<Self> {
        let orientation = shadow.first_source_sink_structure();
        GGraph::new(shadow, group, labels, orientation)
    }

    /// Every vertex labeled by the identity.
    pub fn unlabeled(shadow: FramedFourGraph, group: GroupSpec) -> Result<Self> {
        let labels = vec![group.identity(); shadow.vertex_count()];
        GGraph::with_first_orientation(shadow, group, labels)
    }

    pub fn unknot(group: GroupSpec) -> Self {
        GGraph {
            shadow: FramedFourGraph::unknot(),
            group,
            labels: Vec::new(),
            orientation: Some(SourceSinkStructure { polarity: Vec::new(), circle_orientations: vec![false] }),
        }
    }

    pub fn shadow(&self) -> &FramedFourGraph {
        &self.shadow
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn labels(&self) -> &[GroupElement] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &GroupElement {
        &self.labels[v]
    }

    pub fn orientation(&self) -> Option<&SourceSinkStructure> {
        self.orientation.as_ref()
    }

    pub fn vertex_count(&self) -> usize {
        self.shadow.vertex_count()
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(|l| self.group.format_element(l)).collect()
    }

    /// Canonical key respecting labels and orientation.
    pub fn key(&self) -> CanonicalKey {
        canonical_code(&self.shadow, self.orientation.as_ref(), Some(&self.label_strings()))
    }

    pub fn with_orientation(&self, orientation: SourceSinkStructure) -> Result<Self> {
        GGraph::new(self.shadow.clone(), self.group.clone(), self.labels.clone(), Some(orientation))
    }

    /// The same diagram with its source-sink structure dropped.
    pub fn unoriented(&self) -> Self {
        GGraph { orientation: None, ..self.clone() }
    }

    pub(crate) fn from_parts_unchecked(
        shadow: FramedFourGraph,
        group: GroupSpec,
        labels: Vec<GroupElement>,
        orientation: Option<SourceSinkStructure>,
    ) -> Self {
        GGraph { shadow, group, labels, orientation }
    }

    /// The diagram in canonical vertex order rebuilt from its key; unlabeled
    /// keys give unit labels.
    pub(crate) fn from_key(key: &CanonicalKey, group: &GroupSpec) -> Result<GGraph> {
        let bad = || Error::Internal(format!("undecodable key {key}"));
        let d = decode(key).ok_or_else(bad)?;
        let gd = from_gauss_codes(&d.words, d.free_circles)?;
        let n = gd.graph.vertex_count();
        let index: HashMap<&str, usize> = gd.names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut labels = vec![GroupElement::Unit; n];
        if let Some(ls) = &d.labels {
            for (c, text) in ls.iter().enumerate() {
                labels[index[c.to_string().as_str()]] = group.parse_element(text)?;
            }
        }
        let orientation = match &d.bits {
            None => None,
            Some(bits) => {
                // the first passage of word i leaves through slot 4v+p+2
                let mut passes = vec![0usize; n];
                let mut hints = vec![None; n];
                for (word, &bit) in d.words.iter().zip(bits) {
                    let v = index[word[0].as_str()];
                    let h = 4 * v + passes[v] + 2;
                    hints[v] = Some((h & 1 == 1) == bit);
                    for sym in word {
                        passes[index[sym.as_str()]] += 1;
                    }
                }
                match gd.graph.extend_orientation(&hints, false) {
                    Extension::Structure(o) => Some(o),
                    _ => return Err(bad()),
                }
            }
        };
        let g = GGraph { shadow: gd.graph, group: group.clone(), labels, orientation };
        let again = match d.labels {
            Some(_) => g.key(),
            None => canonical_code(&g.shadow, g.orientation.as_ref(), None),
        };
        if again != *key {
            return Err(bad());
        }
        Ok(g)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> GGraph {
        let shadow = self.shadow.permute_vertices(perm);
        let mut labels = self.labels.clone();
        for (v, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[v].clone();
        }
        let orientation = self.orientation.as_ref().map(|o| {
            let mut polarity = o.polarity.clone();
            for (v, &p) in perm.iter().enumerate() {
                polarity[p] = o.polarity[v];
            }
            SourceSinkStructure { polarity, circle_orientations: o.circle_orientations.clone() }
        });
        GGraph { shadow, group: self.group.clone(), labels, orientation }
    }

    /// Polarity hints for a result whose vertex `v` came from old vertex `origin[v]`.
    fn hints(&self, origin: &[Option<usize>]) -> Vec<Option<bool>> {
        match &self.orientation {
            None => vec![None; origin.len()],
            Some(o) => origin.iter().map(|x| x.map(|v| o.polarity[v])).collect(),
        }
    }

    /// Builds a move result, extending the orientation of untouched vertices.
    fn rebuild(
        &self,
        shadow: FramedFourGraph,
        labels: Vec<GroupElement>,
        hints: Vec<Option<bool>>,
    ) -> std::result::Result<GGraph, Extension> {
        if self.orientation.is_none() {
            return Ok(GGraph { shadow, group: self.group.clone(), labels, orientation: None });
        }
        match shadow.extend_orientation(&hints, false) {
            Extension::Structure(o) => {
                Ok(GGraph { shadow, group: self.group.clone(), labels, orientation: Some(o) })
            }
            other => Err(other),
        }
    }
}

/// Place on a diagram where new vertices can be inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    /// The edge whose smaller half-edge index is given.
    Edge(usize),
    /// A free circle; distinct indices denote distinct circles.
    Circle(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    R1Minus,
    R1Plus,
    R2Minus,
    R2Plus,
    R3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] =
        [MoveKind::R1Minus, MoveKind::R1Plus, MoveKind::R2Minus, MoveKind::R2Plus, MoveKind::R3];
    pub const DECREASING: [MoveKind; 2] = [MoveKind::R1Minus, MoveKind::R2Minus];
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveSite {
    /// Remove a unit-labeled vertex carrying a loop on adjacent slots.
    R1Remove { vertex: usize },
    /// Insert a unit-labeled kink; `side` selects which adjacent slot closes the loop.
    R1Insert { at: Position, side: u8 },
    /// Remove the two vertices of a bigon with mutually inverse labels.
    R2Remove { vertices: (usize, usize) },
    /// Insert a bigon labeled `label` and its inverse across two strand segments.
    R2Insert { first: Position, second: Position, crossed: bool, label: GroupElement },
    /// Slide a triangle; `vertices` are listed along the orientation of its boundary.
    R3 { vertices: [usize; 3], edges: [usize; 3] },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Remove { .. } => MoveKind::R1Minus,
            MoveSite::R1Insert { .. } => MoveKind::R1Plus,
            MoveSite::R2Remove { .. } => MoveKind::R2Minus,
            MoveSite::R2Insert { .. } => MoveKind::R2Plus,
            MoveSite::R3 { .. } => MoveKind::R3,
        }
    }

    /// Change in vertex count.
    pub fn vertex_delta(&self) -> isize {
        match self.kind() {
            MoveKind::R1Minus => -1,
            MoveKind::R1Plus => 1,
            MoveKind::R2Minus => -2,
            MoveKind::R2Plus => 2,
            MoveKind::R3 => 0,
        }
    }

    pub fn to_text(&self, group: &GroupSpec) -> String {
        fn pos(p: &Position) -> String {
            match p {
                Position::Edge(h) => format!("e{h}"),
                Position::Circle(i) => format!("c{i}"),
            }
        }
        match self {
            MoveSite::R1Remove { vertex } => format!("R1- v={vertex}"),
            MoveSite::R1Insert { at, side } => format!("R1+ at={} side={side}", pos(at)),
            MoveSite::R2Remove { vertices: (a, b) } => format!("R2- v={a},{b}"),
            MoveSite::R2Insert { first, second, crossed, label } => format!(
                "R2+ at={},{} crossed={} g={}",
                pos(first),
                pos(second),
                *crossed as u8,
                group.format_element(label)
            ),
            MoveSite::R3 { vertices: [a, b, c], edges: [x, y, z] } => {
                format!("R3 v={a},{b},{c} e={x},{y},{z}")
            }
        }
    }

    pub fn parse(text: &str, group: &GroupSpec) -> Result<MoveSite> {
        let bad = |msg: &str| Error::parse(1, 1, format!("{msg} in move {text:?}"));
        let text = text.trim();
        let (head, rest) = text.split_once(' ').ok_or_else(|| bad("missing fields"))?;
        let mut fields: HashMap<&str, &str> = HashMap::new();
        let mut remaining = rest.trim();
        while !remaining.is_empty() {
            let (k, v) = remaining.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let k = k.trim();
            if k == "g" {
                fields.insert(k, v.trim());
                break;
            }
            let (v, tail) = v.split_once(' ').unwrap_or((v, ""));
            fields.insert(k, v);
            remaining = tail.trim();
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(&format!("missing {k}")));
        let nums = |s: &str| -> Result<Vec<usize>> {
            s.split(',').map(|x| x.parse::<usize>().map_err(|_| bad("bad number"))).collect()
        };
        let pos = |s: &str| -> Result<Position> {
            let n = s[1..].parse::<usize>().map_err(|_| bad("bad position"))?;
            match s.as_bytes().first() {
                Some(b'e') => Ok(Position::Edge(n)),
                Some(b'c') => Ok(Position::Circle(n)),
                _ => Err(bad("bad position")),
            }
        };
        Ok(match head {
            "R1-" => MoveSite::R1Remove { vertex: nums(get("v")?)?[0] },
            "R1+" => MoveSite::R1Insert {
                at: pos(get("at")?)?,
                side: get("side")?.parse().map_err(|_| bad("bad side"))?,
            },
            "R2-" => {
                let v = nums(get("v")?)?;
                if v.len() != 2 {
                    return Err(bad("expected two vertices"));
                }
                MoveSite::R2Remove { vertices: (v[0], v[1]) }
            }
            "R2+" => {
                let at: Vec<&str> = get("at")?.split(',').collect();
                if at.len() != 2 {
                    return Err(bad("expected two positions"));
                }
                MoveSite::R2Insert {
                    first: pos(at[0])?,
                    second: pos(at[1])?,
                    crossed: get("crossed")? == "1",
                    label: group.parse_element(get("g")?)?,
                }
            }
            "R3" => {
                let v = nums(get("v")?)?;
                let e = nums(get("e")?)?;
                if v.len() != 3 || e.len() != 3 {
                    return Err(bad("expected three vertices and edges"));
                }
                MoveSite::R3 { vertices: [v[0], v[1], v[2]], edges: [e[0], e[1], e[2]] }
            }
            _ => return Err(bad("unknown move")),
        })
    }
}

fn adjacent(h: usize) -> [usize; 2] {
    [h ^ 1, h ^ 3]
}

fn has_adjacent_loop(g: &FramedFourGraph, v: usize) -> bool {
    (0..4).any(|s| {
        let h = 4 * v + s;
        adjacent(h).contains(&g.partner(h))
    })
}

fn r2_removable(k: &GGraph, x: usize, y: usize) -> bool {
    let id = k.group.identity();
    k.group.multiply(&k.labels[x], &k.labels[y]).map(|p| p == id).unwrap_or(false)
        && k.shadow.find_bigons().iter().any(|b| b.vertices == (x.min(y), x.max(y)))
}

/// A triangle: three distinct vertices pairwise joined by edges that are
/// adjacent at every corner. Edges are given by their smaller half-edge.
fn triangles(g: &FramedFourGraph) -> Vec<([usize; 3], [(usize, usize); 3])> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in 0..g.vertex_count() {
        for (a, b) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            let (ha, hb) = (4 * x + a, 4 * x + b);
            let (pa, pb) = (g.partner(ha), g.partner(hb));
            let (y, z) = (pa / 4, pb / 4);
            if y == x || z == x || y == z {
                continue;
            }
            for hc in adjacent(pa) {
                let pc = g.partner(hc);
                if pc / 4 != z || pc == pb || pc == opposite(pb) {
                    continue;
                }
                let mut edges = [(ha, pa), (hb, pb), (hc, pc)].map(|(p, q)| (p.min(q), p.max(q)));
                edges.sort();
                if seen.insert(edges) {
                    let mut vs = [x, y, z];
                    vs.sort();
                    out.push((vs, edges));
                }
            }
        }
    }
    out
}

/// Orders a triangle's vertices along its boundary: by the source-sink
/// structure when present, otherwise starting from the smallest vertex.
fn triangle_cycle(k: &GGraph, edges: &[(usize, usize); 3]) -> [usize; 3] {
    // directed edges tail -> head
    let directed: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(p, q)| match &k.orientation {
            Some(o) if !o.emanating(p) => (q / 4, p / 4),
            _ => (p / 4, q / 4),
        })
        .collect();
    let start = edges.iter().map(|e| e.0 / 4).chain(edges.iter().map(|e| e.1 / 4)).min().unwrap();
    if k.orientation.is_none() {
        let mut vs: Vec<usize> = edges.iter().flat_map(|e| [e.0 / 4, e.1 / 4]).collect();
        vs.sort();
        vs.dedup();
        return [vs[0], vs[1], vs[2]];
    }
    let next = |v: usize| directed.iter().find(|d| d.0 == v).map(|d| d.1).unwrap();
    let b = next(start);
    let c = next(b);
    [start, b, c]
}

fn r3_condition(k: &GGraph, cycle: &[usize; 3]) -> bool {
    if k.orientation.is_none() && !k.group.is_abelian() {
        return false;
    }
    let labels: Vec<GroupElement> = cycle.iter().map(|&v| k.labels[v].clone()).collect();
    k.group.product_of(&labels).map(|p| k.group.is_identity(&p)).unwrap_or(false)
}

fn insert_positions(g: &FramedFourGraph) -> Vec<Position> {
    let mut v: Vec<Position> = g.edges().map(|(h, _)| Position::Edge(h)).collect();
    if g.free_circles() > 0 {
        v.push(Position::Circle(0));
    }
    v
}

/// All applicable sites of the given kinds. Increasing moves are only listed
/// when the result stays within `max_vertices`.
pub fn enumerate_moves(k: &GGraph, kinds: &[MoveKind], max_vertices: Option<usize>) -> Vec<MoveSite> {
    let g = &k.shadow;
    let n = g.vertex_count();
    let fits = |extra: usize| max_vertices.map_or(true, |m| n + extra <= m);
    let mut out = Vec::new();
    let want = |kind| kinds.contains(&kind);
    if want(MoveKind::R1Minus) {
        for v in 0..n {
            if k.group.is_identity(&k.labels[v]) && has_adjacent_loop(g, v) {
                out.push(MoveSite::R1Remove { vertex: v });
            }
        }
    }
    if want(MoveKind::R1Plus) && fits(1) {
        for at in insert_positions(g) {
            for side in 0..2 {
                out.push(MoveSite::R1Insert { at, side });
            }
        }
    }
    if want(MoveKind::R2Minus) {
        let mut pairs: Vec<(usize, usize)> = g.find_bigons().into_iter().map(|b| b.vertices).collect();
        pairs.dedup();
        for (x, y) in pairs {
            if k.group.multiply(&k.labels[x], &k.labels[y]).map(|p| k.group.is_identity(&p)).unwrap_or(false) {
                out.push(MoveSite::R2Remove { vertices: (x, y) });
            }
        }
    }
    if want(MoveKind::R2Plus) && fits(2) {
        let mut positions = insert_positions(g);
        let labels = k.group.candidate_labels();
        let mut pairs = Vec::new();
        for i in 0..positions.len() {
            for j in i..positions.len() {
                pairs.push((positions[i], positions[j]));
            }
        }
        if g.free_circles() >= 2 {
            pairs.push((Position::Circle(0), Position::Circle(1)));
        }
        positions.clear();
        for (first, second) in pairs {
            for crossed in [false, true] {
                for label in &labels {
                    let site = MoveSite::R2Insert { first, second, crossed, label: label.clone() };
                    // insertions that cannot carry the existing orientation are not moves
                    if apply_r2_insert(k, first, second, crossed, label).is_ok() {
                        out.push(site);
                    }
                }
            }
        }
    }
    if want(MoveKind::R3) {
        for (_, edges) in triangles(g) {
            let cycle = triangle_cycle(k, &edges);
            if r3_condition(k, &cycle) {
                out.push(MoveSite::R3 { vertices: cycle, edges: edges.map(|e| e.0) });
            }
        }
    }
    out
}

fn internal(site: &MoveSite, what: &str) -> Error {
    Error::Internal(format!("{site:?}: {what}; moves must preserve goodness"))
}

fn drop_vertex<T: Clone>(items: &[T], v: usize) -> Vec<T> {
    items.iter().enumerate().filter(|&(i, _)| i != v).map(|(_, x)| x.clone()).collect()
}

fn origin_after_removal(n: usize, removed: &[usize]) -> Vec<Option<usize>> {
    (0..n).filter(|v| !removed.contains(v)).map(Some).collect()
}

pub fn apply_move(k: &GGraph, site: &MoveSite) -> Result<GGraph> {
    let g = &k.shadow;
    let n = g.vertex_count();
    let stale = || Error::StaleSite(site.to_text(&k.group));
    let finish = |res: std::result::Result<GGraph, Extension>| {
        res.map_err(|e| match e {
            Extension::Conflict => internal(site, "orientation does not extend"),
            Extension::NotGood => internal(site, "result is not good"),
            Extension::Structure(_) => unreachable!(),
        })
    };
    match site {
        MoveSite::R1Remove { vertex } => {
            let v = *vertex;
            if v >= n || !k.group.is_identity(&k.labels[v]) || !has_adjacent_loop(g, v) {
                return Err(stale());
            }
            let shadow = g.remove_vertex(v);
            let labels = drop_vertex(&k.labels, v);
            let hints = k.hints(&origin_after_removal(n, &[v]));
            finish(k.rebuild(shadow, labels, hints))
        }
        MoveSite::R2Remove { vertices: (x, y) } => {
            let (x, y) = (*x, *y);
            if x >= n || y >= n || x == y || !r2_removable(k, x, y) {
                return Err(stale());
            }
            let (lo, hi) = (x.min(y), x.max(y));
            let shadow = g.remove_vertex(hi).remove_vertex(lo);
            let labels = drop_vertex(&drop_vertex(&k.labels, hi), lo);
            let hints = k.hints(&origin_after_removal(n, &[lo, hi]));
            finish(k.rebuild(shadow, labels, hints))
        }
        MoveSite::R1Insert { at, side } => {
            if *side > 1 {
                return Err(stale());
            }
            let w = 4 * n;
            let (loop_slot, exit_slot) = if *side == 0 { (1, 3) } else { (3, 1) };
            let mut partner: Vec<usize> = g.partners().to_vec();
            partner.extend([0; 4]);
            let mut link = |a: usize, b: usize| {
                partner[a] = b;
                partner[b] = a;
            };
            link(w + 2, w + loop_slot);
            let mut circles = g.free_circles();
            match *at {
                Position::Edge(h) => {
                    if h >= g.half_edge_count() || g.partner(h) < h {
                        return Err(stale());
                    }
                    let p = g.partner(h);
                    link(h, w);
                    link(w + exit_slot, p);
                }
                Position::Circle(0) if circles > 0 => {
                    circles -= 1;
                    link(w, w + exit_slot);
                }
                Position::Circle(_) => return Err(stale()),
            }
            let shadow = FramedFourGraph::from_partner(partner, circles);
            let mut labels = k.labels.clone();
            labels.push(k.group.identity());
            let mut origin: Vec<Option<usize>> = (0..n).map(Some).collect();
            origin.push(None);
            finish(k.rebuild(shadow, labels, k.hints(&origin)))
        }
        MoveSite::R2Insert { first, second, crossed, label } => {
            k.group.check(label).map_err(|_| stale())?;
            apply_r2_insert(k, *first, *second, *crossed, label).map_err(|e| match e {
                R2Failure::Stale => stale(),
                R2Failure::Orientation => Error::NotApplicable(format!(
                    "{} does not carry the orientation",
                    site.to_text(&k.group)
                )),
            })
        }
        MoveSite::R3 { vertices, edges } => {
            let found = triangles(g).into_iter().find(|(_, es)| es.map(|e| e.0) == *edges);
            let Some((_, es)) = found else { return Err(stale()) };
            let cycle = triangle_cycle(k, &es);
            if cycle != *vertices || !r3_condition(k, &cycle) {
                return Err(stale());
            }
            // swap the outer ends of each strand segment along the triangle
            let mut sigma: Vec<usize> = (0..g.half_edge_count()).collect();
            for &(p, q) in &es {
                let (op, oq) = (opposite(p), opposite(q));
                sigma[op] = oq;
                sigma[oq] = op;
            }
            let partner: Vec<usize> = (0..g.half_edge_count()).map(|h| sigma[g.partner(sigma[h])]).collect();
            let shadow = FramedFourGraph::from_partner(partner, g.free_circles());
            let mut labels = k.labels.clone();
            for &v in vertices {
                labels[v] = k.group.inverse(&labels[v])?;
            }
            // edges keep their direction, so the triangle's vertices swap emanating pairs
            let origin: Vec<Option<usize>> = (0..n).map(Some).collect();
            let mut hints = k.hints(&origin);
            for &v in vertices {
                hints[v] = hints[v].map(|b| !b);
            }
            finish(k.rebuild(shadow, labels, hints))
        }
    }
}

enum R2Failure {
    Stale,
    Orientation,
}

fn apply_r2_insert(
    k: &GGraph,
    first: Position,
    second: Position,
    crossed: bool,
    label: &GroupElement,
) -> std::result::Result<GGraph, R2Failure> {
    let g = &k.shadow;
    let n = g.vertex_count();
    let (x, y) = (4 * n, 4 * n + 4);
    let mut partner: Vec<usize> = g.partners().to_vec();
    partner.extend([0; 8]);
    let mut link = |a: usize, b: usize| {
        partner[a] = b;
        partner[b] = a;
    };
    // strand 1 runs x.0 -> x.2 -> y.0 -> y.2
    link(x + 2, y);
    let (in1, out1) = (x, y + 2);
    let (in2, out2) = if crossed {
        link(y + 3, x + 1);
        (y + 1, x + 3)
    } else {
        link(x + 3, y + 1);
        (x + 1, y + 3)
    };
    let edge = |h: usize| -> std::result::Result<(usize, usize), R2Failure> {
        if h < g.half_edge_count() && g.partner(h) > h {
            Ok((h, g.partner(h)))
        } else {
            Err(R2Failure::Stale)
        }
    };
    let mut circles = g.free_circles();
    let mut take_circle = |idx: usize| -> std::result::Result<(), R2Failure> {
        if idx >= g.free_circles() {
            return Err(R2Failure::Stale);
        }
        circles -= 1;
        Ok(())
    };
    match (first, second) {
        (Position::Edge(a), Position::Edge(b)) if a == b => {
            let (h, p) = edge(a)?;
            link(h, in1);
            link(out1, in2);
            link(out2, p);
        }
        (Position::Edge(a), Position::Edge(b)) => {
            let (h1, p1) = edge(a)?;
            let (h2, p2) = edge(b)?;
            link(h1, in1);
            link(out1, p1);
            link(h2, in2);
            link(out2, p2);
        }
        (Position::Edge(a), Position::Circle(c)) | (Position::Circle(c), Position::Edge(a)) => {
            let (h, p) = edge(a)?;
            take_circle(c)?;
            let (ein, eout, cin, cout) =
                if matches!(first, Position::Edge(_)) { (in1, out1, in2, out2) } else { (in2, out2, in1, out1) };
            link(h, ein);
            link(eout, p);
            link(cout, cin);
        }
        (Position::Circle(c1), Position::Circle(c2)) if c1 == c2 => {
            take_circle(c1)?;
            link(out1, in2);
            link(out2, in1);
        }
        (Position::Circle(c1), Position::Circle(c2)) => {
            take_circle(c1)?;
            take_circle(c2)?;
            link(out1, in1);
            link(out2, in2);
        }
    }
    let shadow = FramedFourGraph::from_partner(partner, circles);
    let mut labels = k.labels.clone();
    labels.push(label.clone());
    labels.push(k.group.inverse(label).map_err(|_| R2Failure::Stale)?);
    let mut origin: Vec<Option<usize>> = (0..n).map(Some).collect();
    origin.extend([None, None]);
    k.rebuild(shadow, labels, k.hints(&origin)).map_err(|_| R2Failure::Orientation)
}

/// Sequence of moves; each site refers to the diagram produced by the previous ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MovePath {
    pub steps: Vec<MoveSite>,
}

impl MovePath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_text(&self, group: &GroupSpec) -> String {
        self.steps.iter().map(|s| s.to_text(group) + "\n").collect()
    }

    pub fn parse(text: &str, group: &GroupSpec) -> Result<Self> {
        let steps = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| MoveSite::parse(l, group))
            .collect::<Result<_>>()?;
        Ok(MovePath { steps })
    }
}

pub fn replay(k: &GGraph, path: &MovePath) -> Result<GGraph> {
    path.steps.iter().try_fold(k.clone(), |acc, site| apply_move(&acc, site))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub vertex_budget: usize,
    pub node_budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Proven(MovePath),
    /// Not a proof of inequivalence.
    NotFoundWithinBudget { expanded: usize },
}

impl SearchOutcome {
    pub fn is_proven(&self) -> bool {
        matches!(self, SearchOutcome::Proven(_))
    }
}

struct Visit {
    parent: Option<CanonicalKey>,
    graph: GGraph,
}

fn successors(k: &GGraph, vertex_budget: usize) -> Result<Vec<(MoveSite, GGraph, CanonicalKey)>> {
    enumerate_moves(k, &MoveKind::ALL, Some(vertex_budget))
        .into_iter()
        .map(|site| {
            let child = apply_move(k, &site)?;
            let key = child.key();
            Ok((site, child, key))
        })
        .collect()
}

/// Bidirectional breadth-first search over canonical keys, expanding at most
/// `node_budget` states with at most `vertex_budget` vertices each.
pub fn equivalence_search(k1: &GGraph, k2: &GGraph, budget: SearchBudget) -> Result<SearchOutcome> {
    if k1.group != k2.group {
        return Err(Error::GroupMismatch("diagrams are labeled by different groups".into()));
    }
    if k1.orientation.is_some() != k2.orientation.is_some() {
        return Ok(SearchOutcome::NotFoundWithinBudget { expanded: 0 });
    }
    let (key1, key2) = (k1.key(), k2.key());
    if key1 == key2 {
        return Ok(SearchOutcome::Proven(MovePath::default()));
    }
    let mut sides: [HashMap<CanonicalKey, Visit>; 2] = [HashMap::new(), HashMap::new()];
    sides[0].insert(key1.clone(), Visit { parent: None, graph: k1.clone() });
    sides[1].insert(key2.clone(), Visit { parent: None, graph: k2.clone() });
    let mut frontiers = [vec![key1], vec![key2]];
    let mut expanded = 0usize;
    loop {
        let side = match (frontiers[0].is_empty(), frontiers[1].is_empty()) {
            (true, true) => return Ok(SearchOutcome::NotFoundWithinBudget { expanded }),
            (false, true) => 0,
            (true, false) => 1,
            (false, false) => usize::from(frontiers[1].len() < frontiers[0].len()),
        };
        let frontier = std::mem::take(&mut frontiers[side]);
        let room = budget.node_budget.saturating_sub(expanded);
        let batch = &frontier[..frontier.len().min(room)];
        let expansions: Vec<Result<Vec<(MoveSite, GGraph, CanonicalKey)>>> = batch
            .par_iter()
            .map(|key| successors(&sides[side][key].graph, budget.vertex_budget))
            .collect();
        expanded += batch.len();
        let mut next = Vec::new();
        for (key, children) in batch.iter().zip(expansions) {
            for (_, child, ck) in children? {
                if sides[side].contains_key(&ck) {
                    continue;
                }
                sides[side].insert(ck.clone(), Visit { parent: Some(key.clone()), graph: child });
                if sides[1 - side].contains_key(&ck) {
                    let path = build_path(&sides, &ck, budget.vertex_budget)?;
                    return Ok(SearchOutcome::Proven(path));
                }
                next.push(ck);
            }
        }
        if batch.len() < frontier.len() {
            return Ok(SearchOutcome::NotFoundWithinBudget { expanded });
        }
        next.sort();
        frontiers[side] = next;
    }
}

/// Runs [`equivalence_search`] with vertex budgets growing from the larger
/// diagram's size to `extra_vertices` above it, stopping at the first proof.
pub fn graduated_search(k1: &GGraph, k2: &GGraph, extra_vertices: usize, node_budget: usize) -> Result<SearchOutcome> {
    let base = k1.vertex_count().max(k2.vertex_count());
    let mut expanded = 0;
    for extra in 0..=extra_vertices {
        let budget = SearchBudget { vertex_budget: base + extra, node_budget };
        match equivalence_search(k1, k2, budget)? {
            SearchOutcome::Proven(p) => return Ok(SearchOutcome::Proven(p)),
            SearchOutcome::NotFoundWithinBudget { expanded: e } => expanded += e,
        }
    }
    Ok(SearchOutcome::NotFoundWithinBudget { expanded })
}

fn build_path(
    sides: &[HashMap<CanonicalKey, Visit>; 2],
    meet: &CanonicalKey,
    vertex_budget: usize,
) -> Result<MovePath> {
    let chain = |side: usize| -> Vec<CanonicalKey> {
        let mut keys = vec![meet.clone()];
        while let Some(p) = &sides[side][keys.last().unwrap()].parent {
            keys.push(p.clone());
        }
        keys
    };
    // forward: root .. meet, re-derived so every site refers to the replayed diagram
    let mut forward = chain(0);
    forward.reverse();
    let backward = chain(1);
    let targets: Vec<&CanonicalKey> = forward.iter().skip(1).chain(backward.iter().skip(1)).collect();
    let mut current = sides[0][&forward[0]].graph.clone();
    let mut steps = Vec::with_capacity(targets.len());
    for target in targets {
        let budget = vertex_budget.max(current.vertex_count() + 2);
        let (site, child) = enumerate_moves(&current, &MoveKind::ALL, Some(budget))
            .into_iter()
            .find_map(|site| {
                let child = apply_move(&current, &site).ok()?;
                (child.key() == *target).then_some((site, child))
            })
            .ok_or_else(|| Error::Internal("search path step cannot be replayed".into()))?;
        steps.push(site);
        current = child;
    }
    Ok(MovePath { steps })
}

/// Labels met along one strand, and the rotation-minimal form of the word
/// and of its inverse read backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentWord {
    pub word: Vec<GroupElement>,
    pub class: Vec<GroupElement>,
}

fn min_rotation(word: &[GroupElement]) -> Vec<GroupElement> {
    (0..word.len().max(1))
        .map(|r| word.iter().cycle().skip(r).take(word.len()).cloned().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Word of the strand leaving its vertex through half-edge `basepoint`;
/// `None` reads a free circle (the empty word).
pub fn component_word(k: &GGraph, basepoint: Option<usize>) -> Result<ComponentWord> {
    let word = match basepoint {
        None => Vec::new(),
        Some(start) => {
            if start >= k.shadow.half_edge_count() {
                return Err(Error::Domain(format!("half-edge {start} out of range")));
            }
            let mut word = Vec::new();
            let mut h = start;
            loop {
                let p = k.shadow.partner(h);
                word.push(k.labels[p / 4].clone());
                h = opposite(p);
                if h == start {
                    break;
                }
            }
            word
        }
    };
    let inverse: Vec<GroupElement> =
        word.iter().rev().map(|e| k.group.inverse(e)).collect::<Result<_>>()?;
    let class = min_rotation(&word).min(min_rotation(&inverse));
    Ok(ComponentWord { word, class })
}

/// Words of all strands from their canonical basepoints, then one empty word per free circle.
pub fn component_words(k: &GGraph) -> Result<Vec<ComponentWord>> {
    let mut out: Vec<ComponentWord> =
        k.shadow.strands().iter().map(|s| component_word(k, Some(s[0]))).collect::<Result<_>>()?;
    for _ in 0..k.shadow.free_circles() {
        out.push(component_word(k, None)?);
    }
    Ok(out)
}

impl fmt::Display for GGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

impl FromStr for MoveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "R1-" => MoveKind::R1Minus,
            "R1+" => MoveKind::R1Plus,
            "R2-" => MoveKind::R2Minus,
            "R2+" => MoveKind::R2Plus,
            "R3" => MoveKind::R3,
            _ => return Err(Error::Domain(format!("unknown move kind {s:?}"))),
        })
    }
}
