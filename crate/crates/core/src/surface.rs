//! Rotation systems, faces and genus of cellular embeddings, checkerboard
//! colorings and the vertex/face group presentation.

use std::fmt;

use crate::error::{Error, Result};
use crate::gknot::GGraph;
use crate::graph::{FramedFourGraph, SourceSinkStructure};
use crate::groups::{GroupElement, GroupSpec};

/// One bit per vertex: `false` orders the slots (0,1,2,3), `true` orders them (0,3,2,1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationSystem {
    pub bits: Vec<bool>,
}

impl RotationSystem {
    pub fn uniform(vertex_count: usize) -> Self {
        RotationSystem { bits: vec![false; vertex_count] }
    }

    /// All 2^n rotation systems, in binary counting order.
    pub fn all(vertex_count: usize) -> impl Iterator<Item = RotationSystem> {
        (0u64..1 << vertex_count)
            .map(move |m| RotationSystem { bits: (0..vertex_count).map(|v| m >> v & 1 == 1).collect() })
    }

    fn next(&self, h: usize) -> usize {
        let base = h & !3;
        let step = if self.bits[h / 4] { 3 } else { 1 };
        base + (h % 4 + step) % 4
    }
}

/// Faces of the embedding, each a cycle of half-edges: the walk leaves
/// through `h`, arrives at `partner(h)` and turns to the next slot in the rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub faces: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    vertex_count: usize,
}

impl Embedding {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_of(&self, h: usize) -> usize {
        self.face_of[h]
    }

    /// From V − E + F = 2 − 2g with E = 2V.
    pub fn genus(&self) -> usize {
        let twice = 2 + self.vertex_count as isize - self.faces.len() as isize;
        assert!(twice >= 0 && twice % 2 == 0, "Euler characteristic out of range");
        (twice / 2) as usize
    }
}

fn require_embeddable(graph: &FramedFourGraph, rotation: &RotationSystem) -> Result<()> {
    if graph.vertex_count() == 0 || graph.free_circles() > 0 || !graph.is_connected() {
        return Err(Error::Unsupported("embeddings need a connected graph with at least one vertex".into()));
    }
    if rotation.bits.len() != graph.vertex_count() {
        return Err(Error::Domain(format!(
            "rotation has {} entries for {} vertices",
            rotation.bits.len(),
            graph.vertex_count()
        )));
    }
    Ok(())
}

pub fn faces(graph: &FramedFourGraph, rotation: &RotationSystem) -> Result<Embedding> {
    require_embeddable(graph, rotation)?;
    let n = graph.half_edge_count();
    let mut face_of = vec![usize::MAX; n];
    let mut faces = Vec::new();
    for start in 0..n {
        if face_of[start] != usize::MAX {
            continue;
        }
        let mut walk = Vec::new();
        let mut h = start;
        while face_of[h] == usize::MAX {
            face_of[h] = faces.len();
            walk.push(h);
            h = rotation.next(graph.partner(h));
        }
        faces.push(walk);
    }
    Ok(Embedding { faces, face_of, vertex_count: graph.vertex_count() })
}

pub fn genus(graph: &FramedFourGraph, rotation: &RotationSystem) -> Result<usize> {
    Ok(faces(graph, rotation)?.genus())
}

/// Proper 2-coloring of the faces across every edge, face 0 colored `false`.
pub fn checkerboard_coloring(graph: &FramedFourGraph, rotation: &RotationSystem) -> Result<Option<Vec<bool>>> {
    let emb = faces(graph, rotation)?;
    let f = emb.face_count();
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); f];
    for (a, b) in graph.edges() {
        let (x, y) = (emb.face_of(a), emb.face_of(b));
        if x == y {
            return Ok(None);
        }
        adjacent[x].push(y);
        adjacent[y].push(x);
    }
    let mut color: Vec<Option<bool>> = vec![None; f];
    for root in 0..f {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            let c = color[x].unwrap();
            for &y in &adjacent[x] {
                match color[y] {
                    None => {
                        color[y] = Some(!c);
                        stack.push(y);
                    }
                    Some(d) if d == c => return Ok(None),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Some(color.into_iter().map(Option::unwrap).collect()))
}

/// Generators with cyclic relator words; relators carry no inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<usize>>,
}

/// a, b, …, z, then v26, v27, …
pub fn generator_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("v{i}")
    }
}

fn min_rotation(word: &[usize]) -> Vec<usize> {
    (0..word.len().max(1))
        .map(|r| word.iter().cycle().skip(r).take(word.len()).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

impl Presentation {
    pub fn free(rank: usize) -> Self {
        Presentation { generators: (0..rank).map(generator_name).collect(), relators: Vec::new() }
    }

    pub fn relator_text(&self, r: &[usize]) -> String {
        if r.is_empty() {
            return "1".into();
        }
        r.iter().map(|&g| self.generators[g].as_str()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.generators.join(" "))?;
        for r in &self.relators {
            writeln!(f, "rel: {}", self.relator_text(r))?;
        }
        Ok(())
    }
}

/// One generator per vertex and one relator per face, read along the face
/// boundary in the direction given by the source-sink structure.
pub fn presentation(
    graph: &FramedFourGraph,
    rotation: &RotationSystem,
    orientation: &SourceSinkStructure,
) -> Result<Presentation> {
    if !orientation.is_valid_for(graph) {
        return Err(Error::Domain("orientation is not a source-sink structure of the graph".into()));
    }
    if checkerboard_coloring(graph, rotation)?.is_none() {
        return Err(Error::Domain("embedding is not checkerboard colorable".into()));
    }
    let emb = faces(graph, rotation)?;
    let mut relators = Vec::with_capacity(emb.face_count());
    for (i, face) in emb.faces.iter().enumerate() {
        let forward = face.iter().filter(|&&h| orientation.emanating(h)).count();
        if forward != 0 && forward != face.len() {
            return Err(Error::Domain(format!(
                "face {i} ({} corners) is not coherently oriented: {forward} edges agree",
                face.len()
            )));
        }
        // the walk reaches vertex partner(h)/4 after leaving through h
        let mut word: Vec<usize> = face.iter().map(|&h| graph.partner(h) / 4).collect();
        if forward == 0 {
            word.reverse();
        }
        relators.push(min_rotation(&word));
    }
    relators.sort();
    Ok(Presentation { generators: (0..graph.vertex_count()).map(generator_name).collect(), relators })
}

/// Invariant factors d₁ | d₂ | … (all > 1) and the free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub torsion: Vec<u64>,
    pub free_rank: usize,
}

impl Abelianization {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// Diagonal entries of the Smith normal form of an integer matrix.
pub fn smith_diagonal(mut m: Vec<Vec<i64>>, cols: usize) -> Vec<u64> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].abs())
        else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = m[t][t];
            let mut clean = true;
            for r in t + 1..rows {
                let q = m[r][t] / p;
                if q != 0 {
                    for c in t..cols {
                        m[r][c] -= q * m[t][c];
                    }
                }
                if m[r][t] != 0 {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                let q = m[t][c] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[c] -= q * row[t];
                    }
                }
                if m[t][c] != 0 {
                    clean = false;
                }
            }
            if clean {
                // the pivot must divide the whole remaining block
                let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| m[r][c] % p != 0);
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            m[t][c] += m[r][c];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t into the pivot
            let (br, bc) = (t..rows)
                .map(|r| (r, t))
                .chain((t..cols).map(|c| (t, c)))
                .filter(|&(r, c)| m[r][c] != 0)
                .min_by_key(|&(r, c)| m[r][c].abs())
                .unwrap();
            m.swap(t, br);
            for row in m.iter_mut() {
                row.swap(t, bc);
            }
        }
        diag.push(m[t][t].unsigned_abs());
        t += 1;
    }
    diag
}

pub fn abelianization(p: &Presentation) -> Abelianization {
    let cols = p.generators.len();
    let matrix: Vec<Vec<i64>> = p
        .relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; cols];
            for &g in r {
                row[g] += 1;
            }
            row
        })
        .collect();
    let diag = smith_diagonal(matrix, cols);
    Abelianization {
        torsion: diag.iter().copied().filter(|&d| d > 1).collect(),
        free_rank: cols - diag.len(),
    }
}

/// Labels each vertex by the image of its generator, after checking that
/// every relator maps to the identity.
pub fn label_via_quotient(
    graph: &FramedFourGraph,
    p: &Presentation,
    group: &GroupSpec,
    images: &[GroupElement],
    orientation: Option<&SourceSinkStructure>,
) -> Result<GGraph> {
    if images.len() != p.generators.len() || images.len() != graph.vertex_count() {
        return Err(Error::Domain("one image per generator and vertex is needed".into()));
    }
    for r in &p.relators {
        let word: Vec<GroupElement> = r.iter().map(|&g| images[g].clone()).collect();
        if !group.is_identity(&group.product_of(&word)?) {
            return Err(Error::Homomorphism { relator: p.relator_text(r) });
        }
    }
    match orientation {
        Some(o) => GGraph::new(graph.clone(), group.clone(), images.to_vec(), Some(o.clone())),
        None => GGraph::with_first_orientation(graph.clone(), group.clone(), images.to_vec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gauss;

    fn rot(bits: &[u8]) -> RotationSystem {
        RotationSystem { bits: bits.iter().map(|&b| b == 1).collect() }
    }

    #[test]
    fn figure_eight() {
        let g = gauss("A A").unwrap().graph;
        for bits in [[0], [1]] {
            let emb = faces(&g, &rot(&bits)).unwrap();
            assert_eq!(emb.face_count(), 3);
            assert_eq!(emb.genus(), 0);
            assert!(checkerboard_coloring(&g, &rot(&bits)).unwrap().is_some());
        }
        let o = g.first_source_sink_structure().unwrap();
        let p = presentation(&g, &rot(&[0]), &o).unwrap();
        assert_eq!(p.relators, vec![vec![0], vec![0], vec![0, 0]]);
        assert!(abelianization(&p).is_trivial());
        let k = label_via_quotient(&g, &p, &GroupSpec::Trivial, &[GroupElement::Unit], None).unwrap();
        assert_eq!(k.labels(), &[GroupElement::Unit]);
        let z2 = GroupSpec::Cyclic(2);
        assert!(matches!(
            label_via_quotient(&g, &p, &z2, &[GroupElement::Residue(1)], None),
            Err(Error::Homomorphism { .. })
        ));
    }

    #[test]
    fn non_good_graph_has_no_checkerboard() {
        // one vertex, loops joining opposite slots: no source-sink structure
        let g = FramedFourGraph::from_partner(vec![2, 3, 0, 1], 0);
        assert!(!g.is_good());
        for r in RotationSystem::all(1) {
            assert_eq!(genus(&g, &r).unwrap(), 1);
            assert!(checkerboard_coloring(&g, &r).unwrap().is_none());
        }
    }

    #[test]
    fn torus_embedding() {
        // every good graph with two vertices is planar; the trefoil shadow is not
        let g = gauss("A B C A B C").unwrap().graph;
        let (r, emb) = RotationSystem::all(3)
            .map(|r| {
                let e = faces(&g, &r).unwrap();
                (r, e)
            })
            .find(|(_, e)| e.genus() == 1)
            .expect("a genus one rotation");
        assert_eq!(emb.face_count(), 3);
        let o = g.first_source_sink_structure().unwrap();
        let p = presentation(&g, &r, &o).unwrap();
        assert_eq!(p.relators.iter().map(Vec::len).sum::<usize>(), 12);
        let k = label_via_quotient(&g, &p, &GroupSpec::Trivial, &vec![GroupElement::Unit; 3], Some(&o)).unwrap();
        assert_eq!(k.orientation(), Some(&o));
    }

    #[test]
    fn smith_forms() {
        let ab = |gens: usize, rels: Vec<Vec<usize>>| {
            abelianization(&Presentation { generators: (0..gens).map(generator_name).collect(), relators: rels })
        };
        assert_eq!(ab(2, vec![]), Abelianization { torsion: vec![], free_rank: 2 });
        assert_eq!(ab(1, vec![vec![0, 0]]), Abelianization { torsion: vec![2], free_rank: 0 });
        assert_eq!(smith_diagonal(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3), vec![2, 6, 12]);
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
        assert_eq!(ab(2, vec![vec![0, 0, 1, 1], vec![0, 1]]).to_string(), "Z^1");
        assert_eq!(ab(2, vec![vec![0, 0, 1], vec![0, 1]]).to_string(), "1");
    }

    #[test]
    fn disconnected_graphs_are_rejected() {
        let g = gauss("A A / B B").unwrap().graph;
        assert!(matches!(faces(&g, &RotationSystem::uniform(2)), Err(Error::Unsupported(_))));
    }
}
