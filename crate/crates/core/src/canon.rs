//! Canonical keys for framed 4-graphs.
//!
//! A framed 4-graph is determined up to isomorphism by the vertex sequences
//! of its strands, so the key is the lexicographically smallest strand
//! encoding over every start and direction of a first strand in each
//! connected component. Later strands are started at the occurrence of the
//! smallest already numbered vertex, leaving only their direction free.

use std::fmt;

use crate::graph::{FramedFourGraph, SourceSinkStructure};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

struct Passage {
    vertex: usize,
    incoming: usize,
}

struct Ctx<'a> {
    strands: Vec<Vec<Passage>>,
    occurrences: Vec<[(usize, usize); 2]>,
    orientation: Option<&'a SourceSinkStructure>,
    ranks: Option<Vec<u32>>,
}

#[derive(Clone)]
struct State {
    num: Vec<u32>,
    by_num: Vec<usize>,
    done: Vec<bool>,
    tokens: Vec<u32>,
}

const UNSET: u32 = u32::MAX;

impl Ctx<'_> {
    fn encode_strand(&self, st: &mut State, s: usize, p: usize, forward: bool) {
        let strand = &self.strands[s];
        let len = strand.len();
        st.done[s] = true;
        st.tokens.push(len as u32);
        for k in 0..len {
            let pos = if forward { (p + k) % len } else { (p + len - k) % len };
            let w = strand[pos].vertex;
            if st.num[w] == UNSET {
                st.num[w] = st.by_num.len() as u32;
                st.by_num.push(w);
            }
            st.tokens.push(st.num[w]);
        }
        if let Some(o) = self.orientation {
            let inc = strand[p].incoming;
            let leaving = if forward { inc ^ 2 } else { inc };
            st.tokens.push(o.emanating(leaving) as u32);
        }
    }

    fn next_occurrence(&self, st: &State) -> Option<(usize, usize)> {
        st.by_num.iter().find_map(|&w| {
            self.occurrences[w].iter().copied().find(|&(s, _)| !st.done[s])
        })
    }

    fn search(&self, st: State, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
        match self.next_occurrence(&st) {
            None => {
                let mut tokens = st.tokens;
                if let Some(ranks) = &self.ranks {
                    tokens.extend(st.by_num.iter().map(|&w| ranks[w]));
                }
                if best.as_ref().is_none_or(|b| tokens < b.0) {
                    *best = Some((tokens, st.by_num));
                }
            }
            Some((s, p)) => {
                for forward in [true, false] {
                    let mut next = st.clone();
                    self.encode_strand(&mut next, s, p, forward);
                    self.search(next, best);
                }
            }
        }
    }
}

/// Key equal for two graphs iff a framing-preserving isomorphism maps one to
/// the other, matching free circle counts, labels when given, and the
/// source-sink structure when given. Circle orientations are ignored.
pub fn canonical_code(
    graph: &FramedFourGraph,
    orientation: Option<&SourceSinkStructure>,
    labels: Option<&[String]>,
) -> CanonicalKey {
    canonical_order(graph, orientation, labels).0
}

/// The key together with the vertices listed in canonical order: position `i`
/// holds the vertex numbered `i` by some encoding that attains the key.
pub fn canonical_order(
    graph: &FramedFourGraph,
    orientation: Option<&SourceSinkStructure>,
    labels: Option<&[String]>,
) -> (CanonicalKey, Vec<usize>) {
    let n = graph.vertex_count();
    let strands: Vec<Vec<Passage>> = graph
        .strands()
        .into_iter()
        .map(|s| {
            s.into_iter()
                .map(|h| {
                    let incoming = graph.partner(h);
                    Passage { vertex: incoming / 4, incoming }
                })
                .collect()
        })
        .collect();
    let mut occurrences = vec![[(usize::MAX, 0); 2]; n];
    let mut seen = vec![0usize; n];
    for (s, strand) in strands.iter().enumerate() {
        for (p, passage) in strand.iter().enumerate() {
            occurrences[passage.vertex][seen[passage.vertex]] = (s, p);
            seen[passage.vertex] += 1;
        }
    }
    let mut distinct: Vec<&String> = Vec::new();
    let ranks = labels.map(|labels| {
        assert_eq!(labels.len(), n, "one label per vertex");
        distinct = labels.iter().collect();
        distinct.sort();
        distinct.dedup();
        labels.iter().map(|l| distinct.binary_search(&l).unwrap() as u32).collect::<Vec<_>>()
    });
    let (vcomp, ncomp) = graph.connected_components();
    let mut comp_strands: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (s, strand) in strands.iter().enumerate() {
        comp_strands[vcomp[strand[0].vertex]].push(s);
    }
    let ctx = Ctx { strands, occurrences, orientation, ranks };
    let mut parts: Vec<(Vec<u32>, Vec<usize>)> = Vec::with_capacity(ncomp);
    for members in &comp_strands {
        let mut best = None;
        for &s in members {
            for p in 0..ctx.strands[s].len() {
                for forward in [true, false] {
                    let mut st = State {
                        num: vec![UNSET; n],
                        by_num: Vec::new(),
                        done: vec![false; ctx.strands.len()],
                        tokens: Vec::new(),
                    };
                    ctx.encode_strand(&mut st, s, p, forward);
                    ctx.search(st, &mut best);
                }
            }
        }
        parts.push(best.expect("component without strands"));
    }
    parts.sort();
    let mut key = String::new();
    key.push(if orientation.is_some() { 'o' } else { 'u' });
    key.push_str(&format!("c{}", graph.free_circles()));
    for (part, _) in &parts {
        key.push('[');
        let body: Vec<String> = part.iter().map(u32::to_string).collect();
        key.push_str(&body.join("."));
        key.push(']');
    }
    if labels.is_some() {
        key.push_str("L{");
        let body: Vec<&str> = distinct.iter().map(|s| s.as_str()).collect();
        key.push_str(&body.join(";"));
        key.push('}');
    }
    (CanonicalKey(key), parts.into_iter().flat_map(|p| p.1).collect())
}

/// A key taken apart: straight-ahead words over canonical vertex numbers, the
/// emanating bit at the start of each word, and per-vertex label strings.
pub(crate) struct DecodedKey {
    pub words: Vec<Vec<String>>,
    pub bits: Option<Vec<bool>>,
    pub labels: Option<Vec<String>>,
    pub free_circles: usize,
}

/// Inverse of [`canonical_code`] up to isomorphism.
pub(crate) fn decode(key: &CanonicalKey) -> Option<DecodedKey> {
    let s = key.as_str();
    let oriented = match s.as_bytes().first()? {
        b'o' => true,
        b'u' => false,
        _ => return None,
    };
    let (body, label_part) = match s.find("L{") {
        Some(i) => (&s[1..i], Some(s[i + 2..].strip_suffix('}')?)),
        None => (&s[1..], None),
    };
    let body = body.strip_prefix('c')?;
    let open = body.find('[').unwrap_or(body.len());
    let free_circles = body[..open].parse().ok()?;
    let distinct: Option<Vec<&str>> = label_part.map(|l| l.split(';').collect());
    let mut words = Vec::new();
    let mut bits = Vec::new();
    let mut labels = Vec::new();
    let mut offset = 0;
    for part in body[open..].split_terminator(']') {
        let tokens: Vec<usize> = part.strip_prefix('[')?.split('.').map(|t| t.parse().ok()).collect::<Option<_>>()?;
        let mut pos = 0;
        let mut seen: Vec<u8> = Vec::new();
        loop {
            let len = *tokens.get(pos)?;
            pos += 1;
            let word = tokens.get(pos..pos + len)?;
            pos += len;
            for &w in word {
                if w >= seen.len() {
                    seen.resize(w + 1, 0);
                }
                seen[w] += 1;
            }
            words.push(word.iter().map(|w| (w + offset).to_string()).collect());
            if oriented {
                bits.push(*tokens.get(pos)? == 1);
                pos += 1;
            }
            if seen.iter().all(|&c| c == 2) {
                break;
            }
        }
        if let Some(d) = &distinct {
            for &r in tokens.get(pos..pos + seen.len())? {
                labels.push(d.get(r)?.to_string());
            }
            pos += seen.len();
        }
        if pos != tokens.len() {
            return None;
        }
        offset += seen.len();
    }
    Some(DecodedKey {
        words,
        bits: oriented.then_some(bits),
        labels: distinct.map(|_| labels),
        free_circles,
    })
}
