//! Half-edge model of framed 4-valent graphs.
//!
//! A vertex `v` owns the four half-edges `4v..4v+4`. Slots `s` and `s ^ 2`
//! are opposite, so the framing is positional and never stored. Free
//! circles are a plain counter.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub vertex: usize,
    pub slot: u8,
}

impl HalfEdge {
    pub fn new(vertex: usize, slot: u8) -> Self {
        HalfEdge { vertex, slot }
    }

    pub fn index(self) -> usize {
        4 * self.vertex + self.slot as usize
    }

    pub fn from_index(index: usize) -> Self {
        HalfEdge { vertex: index / 4, slot: (index % 4) as u8 }
    }

    pub fn opposite(self) -> Self {
        HalfEdge { vertex: self.vertex, slot: self.slot ^ 2 }
    }
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.vertex, self.slot)
    }
}

/// Index of the half-edge opposite to `h` at the same vertex.
#[inline]
pub fn opposite(h: usize) -> usize {
    h ^ 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    SlotOutOfRange(HalfEdge),
    DuplicateHalfEdge(HalfEdge),
    UnpairedHalfEdge(HalfEdge),
    SelfPaired(HalfEdge),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SlotOutOfRange(h) => write!(f, "half-edge {h} out of range"),
            Violation::DuplicateHalfEdge(h) => write!(f, "duplicate half-edge {h}"),
            Violation::UnpairedHalfEdge(h) => write!(f, "unpaired half-edge {h}"),
            Violation::SelfPaired(h) => write!(f, "half-edge {h} paired with itself"),
        }
    }
}

/// Checks that `pairs` is a perfect matching on the `4 * vertex_count` half-edges.
pub fn validate_pairs(vertex_count: usize, pairs: &[(HalfEdge, HalfEdge)]) -> Vec<Violation> {
    let mut seen = vec![0usize; 4 * vertex_count];
    let mut out = Vec::new();
    for &(a, b) in pairs {
        if a == b {
            out.push(Violation::SelfPaired(a));
        }
        for h in [a, b] {
            if h.vertex >= vertex_count || h.slot >= 4 {
                out.push(Violation::SlotOutOfRange(h));
                continue;
            }
            seen[h.index()] += 1;
            if seen[h.index()] == 2 {
                out.push(Violation::DuplicateHalfEdge(h));
            }
        }
    }
    for (i, &count) in seen.iter().enumerate() {
        if count == 0 {
            out.push(Violation::UnpairedHalfEdge(HalfEdge::from_index(i)));
        }
    }
    out
}

/// The two ways of smoothing a vertex. Both join adjacent slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Smoothing {
    /// Joins slots {0,1} and {2,3}.
    ParallelA,
    /// Joins slots {0,3} and {1,2}.
    ParallelB,
}

impl Smoothing {
    pub const BOTH: [Smoothing; 2] = [Smoothing::ParallelA, Smoothing::ParallelB];

    fn joins(self) -> [[u8; 2]; 2] {
        match self {
            Smoothing::ParallelA => [[0, 1], [2, 3]],
            Smoothing::ParallelB => [[0, 3], [1, 2]],
        }
    }
}

const REMOVAL: [[u8; 2]; 2] = [[0, 2], [1, 3]];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FramedFourGraph {
    partner: Vec<usize>,
    free_circles: usize,
}

impl FramedFourGraph {
    pub fn empty() -> Self {
        FramedFourGraph { partner: Vec::new(), free_circles: 0 }
    }

    pub fn circles(count: usize) -> Self {
        FramedFourGraph { partner: Vec::new(), free_circles: count }
    }

    pub fn unknot() -> Self {
        Self::circles(1)
    }

    pub fn from_pairs(
        vertex_count: usize,
        pairs: &[(HalfEdge, HalfEdge)],
        free_circles: usize,
    ) -> Result<Self> {
        let violations = validate_pairs(vertex_count, pairs);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidGraph(v.to_string()));
        }
        let mut partner = vec![0; 4 * vertex_count];
        for &(a, b) in pairs {
            partner[a.index()] = b.index();
            partner[b.index()] = a.index();
        }
        Ok(FramedFourGraph { partner, free_circles })
    }

    /// Builds a graph from a partner table; the table must be a fixed-point-free involution.
    pub(crate) fn from_partner(partner: Vec<usize>, free_circles: usize) -> Self {
        let g = FramedFourGraph { partner, free_circles };
        debug_assert!(g.validate().is_empty(), "invalid partner table");
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.partner.len() / 4
    }

    pub fn half_edge_count(&self) -> usize {
        self.partner.len()
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    #[cfg(test)]
    pub(crate) fn with_free_circles(mut self, count: usize) -> Self {
        self.free_circles = count;
        self
    }

    #[inline]
    pub fn partner(&self, h: usize) -> usize {
        self.partner[h]
    }

    pub(crate) fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Edges as `(h, partner(h))` with `h < partner(h)`, in increasing order of `h`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner.iter().enumerate().filter(|&(h, &p)| h < p).map(|(h, &p)| (h, p))
    }

    pub fn pairs(&self) -> Vec<(HalfEdge, HalfEdge)> {
        self.edges().map(|(a, b)| (HalfEdge::from_index(a), HalfEdge::from_index(b))).collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let n = self.partner.len();
        if n % 4 != 0 {
            return vec![Violation::SlotOutOfRange(HalfEdge::from_index(n))];
        }
        let mut out = Vec::new();
        for (h, &p) in self.partner.iter().enumerate() {
            if p >= n {
                out.push(Violation::SlotOutOfRange(HalfEdge::from_index(p)));
            } else if p == h {
                out.push(Violation::SelfPaired(HalfEdge::from_index(h)));
            } else if self.partner[p] != h {
                out.push(Violation::DuplicateHalfEdge(HalfEdge::from_index(p)));
            }
        }
        out
    }

    /// Unicursal components as strands. Each strand lists its outgoing
    /// half-edges in traversal order: after leaving through `h` the strand
    /// enters `partner(h)` and leaves again through `opposite(partner(h))`.
    /// Every strand starts at its smallest unvisited half-edge.
    pub fn strands(&self) -> Vec<Vec<usize>> {
        let mut visited = vec![false; self.partner.len()];
        let mut strands = Vec::new();
        for start in 0..self.partner.len() {
            if visited[start] {
                continue;
            }
            let mut strand = Vec::new();
            let mut h = start;
            loop {
                visited[h] = true;
                strand.push(h);
                let p = self.partner[h];
                visited[p] = true;
                h = opposite(p);
                if h == start {
                    break;
                }
            }
            strands.push(strand);
        }
        strands
    }

    /// Strand index of every half-edge.
    pub fn strand_of_half_edges(&self) -> (Vec<usize>, usize) {
        let strands = self.strands();
        let mut comp = vec![0; self.partner.len()];
        for (i, s) in strands.iter().enumerate() {
            for &h in s {
                comp[h] = i;
                comp[self.partner[h]] = i;
            }
        }
        (comp, strands.len())
    }

    pub fn unicursal_count(&self) -> usize {
        self.strands().len()
    }

    /// Unicursal plus circular components.
    pub fn component_count(&self) -> usize {
        self.unicursal_count() + self.free_circles
    }

    /// Connected components over vertices: component id per vertex, and the count.
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for s in 0..4 {
                    let w = self.partner[4 * v + s] / 4;
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().1 <= 1
    }

    /// Polarity vector with each connected component rooted at `false` on its
    /// smallest vertex, or `None` when the graph admits no source-sink structure.
    fn base_polarity(&self) -> Option<(Vec<bool>, Vec<usize>, usize)> {
        let (comp, count) = self.connected_components();
        let n = self.vertex_count();
        let mut pol: Vec<Option<bool>> = vec![None; n];
        let mut stack = Vec::new();
        for root in 0..n {
            if pol[root].is_some() {
                continue;
            }
            pol[root] = Some(false);
            stack.push(root);
            while let Some(v) = stack.pop() {
                let pv = pol[v].unwrap();
                for s in 0..4 {
                    let h = 4 * v + s;
                    let p = self.partner[h];
                    // exactly one end of every edge emanates
                    let want = pv ^ true ^ (h & 1 == 1) ^ (p & 1 == 1);
                    let w = p / 4;
                    match pol[w] {
                        None => {
                            pol[w] = Some(want);
                            stack.push(w);
                        }
                        Some(x) if x != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some((pol.into_iter().map(Option::unwrap).collect(), comp, count))
    }

    pub fn is_good(&self) -> bool {
        self.base_polarity().is_some()
    }

    /// All source-sink structures, sorted lexicographically by polarity vector
    /// and then by circle orientations.
    pub fn source_sink_structures(&self) -> Vec<SourceSinkStructure> {
        let Some((base, comp, count)) = self.base_polarity() else {
            return Vec::new();
        };
        let bits = count + self.free_circles;
        assert!(bits < 32, "too many components to enumerate structures");
        let mut out = Vec::with_capacity(1 << bits);
        for mask in 0u32..(1u32 << bits) {
            let polarity = base.iter().zip(&comp).map(|(&b, &c)| b ^ (mask >> c & 1 == 1)).collect();
            let circle_orientations =
                (0..self.free_circles).map(|i| mask >> (count + i) & 1 == 1).collect();
            out.push(SourceSinkStructure { polarity, circle_orientations });
        }
        out.sort();
        out
    }

    /// The lexicographically smallest source-sink structure.
    pub fn first_source_sink_structure(&self) -> Option<SourceSinkStructure> {
        self.base_polarity().map(|(polarity, _, _)| SourceSinkStructure {
            polarity,
            circle_orientations: vec![false; self.free_circles],
        })
    }

    /// Extends per-vertex polarity hints to a full structure, choosing for each
    /// connected component the one of its two structures matching the hints.
    pub(crate) fn extend_orientation(&self, hints: &[Option<bool>], lenient: bool) -> Extension {
        let Some((base, comp, count)) = self.base_polarity() else {
            return Extension::NotGood;
        };
        let mut flip: Vec<Option<bool>> = vec![None; count];
        for (v, hint) in hints.iter().enumerate() {
            let Some(want) = *hint else { continue };
            let f = want != base[v];
            match flip[comp[v]] {
                None => flip[comp[v]] = Some(f),
                Some(x) if x != f && !lenient => return Extension::Conflict,
                Some(_) => {}
            }
        }
        let polarity =
            base.iter().zip(&comp).map(|(&b, &c)| b ^ flip[c].unwrap_or(false)).collect();
        Extension::Structure(SourceSinkStructure {
            polarity,
            circle_orientations: vec![false; self.free_circles],
        })
    }

    /// Deletes `v` and joins the partners of each slot pair in `joins`,
    /// chaining through loops at `v`. Closed vertex-free loops become circles.
    pub(crate) fn rejoin(&self, v: usize, joins: [[u8; 2]; 2]) -> FramedFourGraph {
        let base = 4 * v;
        let join = |s: usize| -> usize {
            for pair in joins {
                if pair[0] as usize == s {
                    return pair[1] as usize;
                }
                if pair[1] as usize == s {
                    return pair[0] as usize;
                }
            }
            unreachable!("joins must cover all four slots")
        };
        let at_v = |h: usize| h / 4 == v;
        let mut partner = self.partner.clone();
        let mut visited = [false; 4];
        for s in 0..4 {
            let p = self.partner[base + s];
            if at_v(p) || visited[s] {
                continue;
            }
            visited[s] = true;
            let mut t = join(s);
            loop {
                visited[t] = true;
                let q = self.partner[base + t];
                if !at_v(q) {
                    partner[p] = q;
                    partner[q] = p;
                    break;
                }
                let u = q - base;
                visited[u] = true;
                t = join(u);
            }
        }
        let mut circles = self.free_circles;
        for s in 0..4 {
            if visited[s] {
                continue;
            }
            circles += 1;
            let mut t = s;
            loop {
                visited[t] = true;
                let u = join(t);
                visited[u] = true;
                let next = self.partner[base + u] - base;
                if visited[next] {
                    break;
                }
                t = next;
            }
        }
        // half-edges above v shift down by four
        let shift = |h: usize| if h / 4 > v { h - 4 } else { h };
        let mut new_partner = vec![0; self.partner.len() - 4];
        for h in (0..self.partner.len()).filter(|&h| !at_v(h)) {
            assert!(!at_v(partner[h]), "rejoin left a dangling half-edge");
            new_partner[shift(h)] = shift(partner[h]);
        }
        FramedFourGraph::from_partner(new_partner, circles)
    }

    /// Deletes `v`, joining the partners of opposite slots.
    pub fn remove_vertex(&self, v: usize) -> FramedFourGraph {
        assert!(v < self.vertex_count(), "vertex {v} out of range");
        self.rejoin(v, REMOVAL)
    }

    pub fn smooth(&self, v: usize, way: Smoothing) -> FramedFourGraph {
        assert!(v < self.vertex_count(), "vertex {v} out of range");
        self.rejoin(v, way.joins())
    }

    /// Which smoothing continues each incoming strand into the other pass's exit.
    pub fn oriented_smoothing_way(&self, v: usize, t: &TraversalOrientation) -> Result<Smoothing> {
        if v >= self.vertex_count() {
            return Err(Error::Domain(format!("vertex {v} out of range")));
        }
        let incoming: Vec<usize> = (0..4).map(|s| 4 * v + s).filter(|&h| !t.is_outgoing(h)).collect();
        if incoming.len() != 2 || incoming[0] ^ 2 == incoming[1] {
            return Err(Error::Domain("traversal orientation does not match the graph".into()));
        }
        let (comp, _) = self.strand_of_half_edges();
        if comp[incoming[0]] != comp[incoming[1]] {
            return Err(Error::NotApplicable(format!(
                "the two passes of vertex {v} lie on different components"
            )));
        }
        // incoming i1 continues to the exit of the other pass, opposite(i2)
        let a = (incoming[0] % 4) as u8;
        let b = (opposite(incoming[1]) % 4) as u8;
        let way = if Smoothing::ParallelA.joins().iter().any(|p| (p[0] == a && p[1] == b) || (p[0] == b && p[1] == a)) {
            Smoothing::ParallelA
        } else {
            Smoothing::ParallelB
        };
        Ok(way)
    }

    /// Smoothing at `v` that preserves the direction of travel on both strands.
    pub fn oriented_smooth(&self, v: usize, t: &TraversalOrientation) -> Result<FramedFourGraph> {
        let way = self.oriented_smoothing_way(v, t)?;
        Ok(self.smooth(v, way))
    }

    /// Every bigon exactly once, ordered by vertices and then half-edges.
    pub fn find_bigons(&self) -> Vec<Bigon> {
        let mut between: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (a, b) in self.edges() {
            let (va, vb) = (a / 4, b / 4);
            if va == vb {
                continue;
            }
            let (x, y, hx, hy) = if va < vb { (va, vb, a, b) } else { (vb, va, b, a) };
            between.entry((x, y)).or_default().push((hx, hy));
        }
        let mut out = Vec::new();
        for ((x, y), edges) in between {
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    let (e1, e2) = (edges[i], edges[j]);
                    if opposite(e1.0) != e2.0 && opposite(e1.1) != e2.1 {
                        out.push(Bigon { vertices: (x, y), edges: [e1, e2] });
                    }
                }
            }
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.find_bigons().is_empty()
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> FramedFourGraph {
        assert_eq!(perm.len(), self.vertex_count());
        let map = |h: usize| 4 * perm[h / 4] + h % 4;
        let mut partner = vec![0; self.partner.len()];
        for (h, &p) in self.partner.iter().enumerate() {
            partner[map(h)] = map(p);
        }
        FramedFourGraph::from_partner(partner, self.free_circles)
    }

    /// Disjoint union; vertices of `other` are numbered after those of `self`.
    pub fn disjoint_union(&self, other: &FramedFourGraph) -> FramedFourGraph {
        let shift = self.partner.len();
        let mut partner = self.partner.clone();
        partner.extend(other.partner.iter().map(|&p| p + shift));
        FramedFourGraph::from_partner(partner, self.free_circles + other.free_circles)
    }

    /// Vertex sequences of the strands, as Gauss words.
    pub fn gauss_words(&self) -> Vec<Vec<usize>> {
        self.strands().iter().map(|s| s.iter().map(|&h| self.partner[h] / 4).collect()).collect()
    }
}

pub(crate) enum Extension {
    NotGood,
    Conflict,
    Structure(SourceSinkStructure),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bigon {
    pub vertices: (usize, usize),
    /// Each edge as (half-edge at the first vertex, half-edge at the second).
    pub edges: [(usize, usize); 2],
}

/// Orientation of every edge such that each vertex has one emanating
/// opposite pair. `polarity[v] == false` means slots {0,2} emanate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSinkStructure {
    pub polarity: Vec<bool>,
    pub circle_orientations: Vec<bool>,
}

impl SourceSinkStructure {
    #[inline]
    pub fn emanating(&self, h: usize) -> bool {
        (h & 1 == 1) == self.polarity[h / 4]
    }

    pub fn reversed(&self) -> Self {
        SourceSinkStructure {
            polarity: self.polarity.iter().map(|b| !b).collect(),
            circle_orientations: self.circle_orientations.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_valid_for(&self, graph: &FramedFourGraph) -> bool {
        self.polarity.len() == graph.vertex_count()
            && self.circle_orientations.len() == graph.free_circles()
            && graph.edges().all(|(a, b)| self.emanating(a) != self.emanating(b))
    }
}

/// A direction of travel along every strand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraversalOrientation {
    outgoing: Vec<bool>,
}

impl TraversalOrientation {
    /// Direction given by [`FramedFourGraph::strands`].
    pub fn canonical(graph: &FramedFourGraph) -> Self {
        let mut outgoing = vec![false; graph.half_edge_count()];
        for strand in graph.strands() {
            for h in strand {
                outgoing[h] = true;
            }
        }
        TraversalOrientation { outgoing }
    }

    pub(crate) fn from_outgoing(outgoing: Vec<bool>) -> Self {
        TraversalOrientation { outgoing }
    }

    #[inline]
    pub fn is_outgoing(&self, h: usize) -> bool {
        self.outgoing[h]
    }

    /// Travel continues straight through vertices and along edges.
    pub fn is_valid_for(&self, graph: &FramedFourGraph) -> bool {
        self.outgoing.len() == graph.half_edge_count()
            && (0..self.outgoing.len()).all(|h| {
                self.outgoing[h] != self.outgoing[opposite(h)]
                    && self.outgoing[h] != self.outgoing[graph.partner(h)]
            })
    }
}

/// Output of [`from_gauss_codes`].
#[derive(Clone, Debug)]
pub struct GaussDiagram {
    pub graph: FramedFourGraph,
    pub traversal: TraversalOrientation,
    /// Symbol of each vertex, in order of first appearance.
    pub names: Vec<String>,
}

/// One vertex per symbol. The first pass of a symbol enters slot 0 and
/// leaves slot 2, the second enters slot 1 and leaves slot 3.
pub fn from_gauss_codes<S: AsRef<str>>(words: &[Vec<S>], circles: usize) -> Result<GaussDiagram> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut count = Vec::new();
    for word in words {
        if word.is_empty() {
            return Err(Error::MalformedCode("empty word; use the circle count instead".into()));
        }
        for sym in word {
            let sym = sym.as_ref();
            let v = *index.entry(sym).or_insert_with(|| {
                names.push(sym.to_string());
                count.push(0);
                names.len() - 1
            });
            count[v] += 1;
        }
    }
    if let Some(v) = count.iter().position(|&c| c != 2) {
        return Err(Error::MalformedCode(format!(
            "symbol {} occurs {} times, expected 2",
            names[v], count[v]
        )));
    }
    let n = names.len();
    let mut partner = vec![0; 4 * n];
    let mut outgoing = vec![false; 4 * n];
    let mut passes = vec![0u8; n];
    for word in words {
        let mut slots = Vec::with_capacity(word.len());
        for sym in word {
            let v = index[sym.as_ref()];
            let pass = passes[v];
            passes[v] += 1;
            slots.push((4 * v + pass as usize, 4 * v + pass as usize + 2));
        }
        for i in 0..slots.len() {
            let exit = slots[i].1;
            let entry = slots[(i + 1) % slots.len()].0;
            partner[exit] = entry;
            partner[entry] = exit;
            outgoing[exit] = true;
        }
    }
    Ok(GaussDiagram {
        graph: FramedFourGraph::from_partner(partner, circles),
        traversal: TraversalOrientation::from_outgoing(outgoing),
        names,
    })
}

/// Convenience: whitespace-separated symbols, words separated by `/`.
pub fn gauss(code: &str) -> Result<GaussDiagram> {
    let words: Vec<Vec<&str>> = code
        .split('/')
        .map(|w| w.split_whitespace().collect::<Vec<_>>())
        .filter(|w| !w.is_empty())
        .collect();
    from_gauss_codes(&words, 0)
}
