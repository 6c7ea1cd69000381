//! Parity bracket, group bracket, the delta family, lower bounds and the
//! enumeration of minimal diagrams.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::rc::Rc;

use crate::canon::{canonical_code, canonical_order, CanonicalKey};
use crate::error::{Error, Result};
use crate::gknot::{apply_move, enumerate_moves, equivalence_search, GGraph, MoveKind, SearchBudget, SearchOutcome};
use crate::graph::{from_gauss_codes, Extension, FramedFourGraph, Smoothing, SourceSinkStructure, TraversalOrientation};
use crate::groups::{GroupElement, GroupSpec, PairKey};

pub const DEFAULT_ORBIT_CAP: usize = 100_000;

/// Target space of a combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    /// Unlabeled graphs modulo bigon removal.
    G2,
    /// Unit-free G-graphs modulo bigon removal and triangle moves.
    SG,
    /// Two-component free links without trivial components.
    L2,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::G2 => "G2",
            Space::SG => "SG",
            Space::L2 => "L2",
        }
    }

    /// Key under which a representative of this space is stored.
    pub fn term_key(self, rep: &GGraph) -> CanonicalKey {
        match self {
            Space::SG => rep.key(),
            Space::G2 | Space::L2 => shadow_key(rep.shadow()),
        }
    }
}

/// Which two-component terms vanish in the delta family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TrivialQuotient {
    /// Terms with at least one vertex-free component.
    #[default]
    AtLeastOne,
    /// Terms with exactly one vertex-free component.
    ExactlyOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantOptions {
    pub orbit_cap: usize,
    pub trivial: TrivialQuotient,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions { orbit_cap: DEFAULT_ORBIT_CAP, trivial: TrivialQuotient::AtLeastOne }
    }
}

/// Z₂-linear combination of canonical keys, each with one stored representative.
#[derive(Clone, Debug)]
pub struct DiagramCombination {
    space: Space,
    terms: BTreeMap<CanonicalKey, GGraph>,
}

impl PartialEq for DiagramCombination {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.terms.keys().eq(other.terms.keys())
    }
}

impl Eq for DiagramCombination {}

impl DiagramCombination {
    pub fn zero(space: Space) -> Self {
        DiagramCombination { space, terms: BTreeMap::new() }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Adds one copy of the term; two copies cancel.
    pub fn toggle(&mut self, key: CanonicalKey, representative: GGraph) {
        if self.terms.remove(&key).is_none() {
            self.terms.insert(key, representative);
        }
    }

    pub fn add(&mut self, other: &DiagramCombination) {
        for (k, r) in &other.terms {
            self.toggle(k.clone(), r.clone());
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.terms.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.terms.keys()
    }

    /// Terms in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &GGraph)> {
        self.terms.iter()
    }

    pub fn max_vertex_count(&self) -> usize {
        self.terms.values().map(GGraph::vertex_count).max().unwrap_or(0)
    }
}

fn unlabeled(shadow: FramedFourGraph) -> GGraph {
    let labels = vec![GroupElement::Unit; shadow.vertex_count()];
    GGraph::from_parts_unchecked(shadow, GroupSpec::Trivial, labels, None)
}

fn shadow_key(g: &FramedFourGraph) -> CanonicalKey {
    canonical_code(g, None, None)
}

/// Removes the first bigon until none is left.
pub fn reduce_bigons(graph: &FramedFourGraph) -> FramedFourGraph {
    reduce_bigons_by(graph, |_| 0)
}

/// Removes bigons until none is left, `choose(n)` picking among the `n` current bigons.
pub fn reduce_bigons_by(graph: &FramedFourGraph, mut choose: impl FnMut(usize) -> usize) -> FramedFourGraph {
    let mut g = graph.clone();
    loop {
        let bigons = g.find_bigons();
        if bigons.is_empty() {
            return g;
        }
        let (x, y) = bigons[choose(bigons.len()) % bigons.len()].vertices;
        g = g.remove_vertex(y).remove_vertex(x);
    }
}

/// Removes bigons with mutually inverse labels until none is left.
pub fn reduce_labeled_bigons(k: &GGraph) -> Result<GGraph> {
    let mut k = k.clone();
    while let Some(site) = enumerate_moves(&k, &[MoveKind::R2Minus], None).into_iter().next() {
        k = apply_move(&k, &site)?;
    }
    Ok(k)
}

fn require_z2(k: &GGraph) -> Result<()> {
    if *k.group() != GroupSpec::Cyclic(2) {
        return Err(Error::Domain("parity needs labels in Z2".into()));
    }
    Ok(())
}

fn require_one_component(k: &GGraph) -> Result<()> {
    let c = k.shadow().component_count();
    if c != 1 {
        return Err(Error::Domain(format!("expected one component, found {c}")));
    }
    Ok(())
}

/// All vertices labeled 1 in Z₂.
pub fn is_odd(k: &GGraph) -> Result<bool> {
    require_z2(k)?;
    Ok(k.labels().iter().all(|l| !k.group().is_identity(l)))
}

pub fn is_irreducible(k: &GGraph) -> bool {
    k.shadow().is_irreducible()
}

/// Smooths the listed vertices (ascending), `mask` bit i choosing the way at `verts[i]`.
fn smooth_set(k: &GGraph, verts: &[usize], mask: u64) -> (FramedFourGraph, Vec<GroupElement>, Vec<usize>) {
    let mut shadow = k.shadow().clone();
    let mut labels = k.labels().to_vec();
    let mut origin: Vec<usize> = (0..k.vertex_count()).collect();
    for (i, &v) in verts.iter().enumerate().rev() {
        let way = if mask >> i & 1 == 0 { Smoothing::ParallelA } else { Smoothing::ParallelB };
        shadow = shadow.smooth(v, way);
        labels.remove(v);
        origin.remove(v);
    }
    (shadow, labels, origin)
}

fn restrict_orientation(
    k: &GGraph,
    shadow: &FramedFourGraph,
    origin: &[usize],
) -> Result<Option<SourceSinkStructure>> {
    let Some(o) = k.orientation() else { return Ok(None) };
    let hints: Vec<Option<bool>> = origin.iter().map(|&v| Some(o.polarity[v])).collect();
    match shadow.extend_orientation(&hints, false) {
        Extension::Structure(s) => Ok(Some(s)),
        _ => Err(Error::Internal("smoothing broke the source-sink structure".into())),
    }
}

fn check_smoothing_scale(count: usize) -> Result<()> {
    if count > 24 {
        return Err(Error::ScaleLimit(format!("{count} vertices to smooth")));
    }
    Ok(())
}

/// Sum over smoothings of the even vertices that leave one component, reduced by bigon removal.
pub fn parity_bracket(k: &GGraph) -> Result<DiagramCombination> {
    require_z2(k)?;
    require_one_component(k)?;
    let even: Vec<usize> = (0..k.vertex_count()).filter(|&v| k.group().is_identity(k.label(v))).collect();
    check_smoothing_scale(even.len())?;
    let mut out = DiagramCombination::zero(Space::G2);
    for mask in 0..1u64 << even.len() {
        let (shadow, _, _) = smooth_set(k, &even, mask);
        if shadow.component_count() != 1 {
            continue;
        }
        let reduced = reduce_bigons(&shadow);
        out.toggle(shadow_key(&reduced), unlabeled(reduced));
    }
    Ok(out)
}

/// Which orbit a memo entry belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Orbit {
    SG,
    L2,
}

/// Orbit minimum together with the orbit size.
type Minimum = Rc<(CanonicalKey, GGraph, usize)>;

const MEMO_LIMIT: usize = 1 << 20;

thread_local! {
    static MEMO: RefCell<HashMap<(Orbit, CanonicalKey), Minimum>> = RefCell::new(HashMap::new());
}

/// Forgets the orbits and smoothing terms memoized on this thread.
pub fn clear_orbit_memo() {
    MEMO.with(|m| m.borrow_mut().clear());
    TERMS.with(|m| m.borrow_mut().clear());
}

/// Minimal vertex count, then minimal key, over the orbit of `start` under `kinds`.
/// Every key met is memoized, so later members of the same orbit are answered
/// directly; the representative is rebuilt from its key so it does not depend
/// on where the search started.
fn orbit_minimum(
    orbit: Orbit,
    start: GGraph,
    kinds: &[MoveKind],
    cap: usize,
    key: impl Fn(&GGraph) -> CanonicalKey,
) -> Result<(CanonicalKey, GGraph)> {
    let start_key = key(&start);
    let memo_key = (orbit, start_key.clone());
    if let Some(m) = MEMO.with(|m| m.borrow().get(&memo_key).cloned()) {
        // entries of another group with the same key text are simply replaced below
        if m.2 <= cap && m.1.group() == start.group() {
            return Ok((m.0.clone(), m.1.clone()));
        }
    }
    let mut seen: HashSet<CanonicalKey> = HashSet::from([start_key.clone()]);
    let mut best = (start.vertex_count(), start_key, start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(g) = queue.pop_front() {
        for site in enumerate_moves(&g, kinds, None) {
            let next = apply_move(&g, &site)?;
            let k = key(&next);
            if seen.contains(&k) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::CanonicalizationOverflow { term: best.1.to_string(), states: seen.len() });
            }
            seen.insert(k.clone());
            if (next.vertex_count(), &k) < (best.0, &best.1) {
                best = (next.vertex_count(), k, next.clone());
            }
            queue.push_back(next);
        }
    }
    let rep = GGraph::from_key(&best.1, best.2.group())?;
    let found: Minimum = Rc::new((best.1, rep, seen.len()));
    MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() + seen.len() > MEMO_LIMIT {
            m.clear();
        }
        for k in seen {
            m.insert((orbit, k), found.clone());
        }
    });
    Ok((found.0.clone(), found.1.clone()))
}

/// Canonical representative of a unit-free G-graph modulo bigon removal and triangle moves.
pub fn sg_canonical(k: &GGraph, cap: usize) -> Result<(CanonicalKey, GGraph)> {
    orbit_minimum(Orbit::SG, k.clone(), &[MoveKind::R2Minus, MoveKind::R3], cap, GGraph::key)
}

pub fn group_bracket(k: &GGraph) -> Result<DiagramCombination> {
    group_bracket_with(k, &InvariantOptions::default())
}

/// Sum over smoothings of the unit-labeled vertices that leave one component.
pub fn group_bracket_with(k: &GGraph, opts: &InvariantOptions) -> Result<DiagramCombination> {
    require_one_component(k)?;
    let units: Vec<usize> = (0..k.vertex_count()).filter(|&v| k.group().is_identity(k.label(v))).collect();
    check_smoothing_scale(units.len())?;
    let mut out = DiagramCombination::zero(Space::SG);
    for mask in 0..1u64 << units.len() {
        let (shadow, labels, origin) = smooth_set(k, &units, mask);
        if shadow.component_count() != 1 {
            continue;
        }
        let orientation = restrict_orientation(k, &shadow, &origin)?;
        let term = GGraph::from_parts_unchecked(shadow, k.group().clone(), labels, orientation);
        let (key, rep) = sg_canonical(&term, opts.orbit_cap)?;
        out.toggle(key, rep);
    }
    Ok(out)
}

/// Canonical form of a two-component term: minimal diagram under kink
/// removal, bigon removal and triangle moves.
fn l2_canonical(shadow: FramedFourGraph, cap: usize) -> Result<(CanonicalKey, GGraph)> {
    let kinds = [MoveKind::R1Minus, MoveKind::R2Minus, MoveKind::R3];
    orbit_minimum(Orbit::L2, unlabeled(shadow), &kinds, cap, |g| shadow_key(g.shadow()))
}

fn is_trivial_term(rep: &GGraph, mode: TrivialQuotient) -> bool {
    let circles = rep.shadow().free_circles();
    match mode {
        TrivialQuotient::AtLeastOne => circles >= 1,
        TrivialQuotient::ExactlyOne => circles == 1,
    }
}

type Terms = Rc<Vec<Option<(CanonicalKey, GGraph)>>>;

thread_local! {
    static TERMS: RefCell<HashMap<(CanonicalKey, usize, TrivialQuotient), Terms>> = RefCell::new(HashMap::new());
}

/// The non-trivial term of the oriented smoothing at each vertex picked by `include`.
/// Terms depend on the shadow only; they are memoized by shadow key, listed in
/// canonical vertex order.
fn vertex_terms(
    k: &GGraph,
    include: impl Fn(usize) -> bool,
    opts: &InvariantOptions,
) -> Result<Vec<(usize, CanonicalKey, GGraph)>> {
    require_one_component(k)?;
    let (key, order) = canonical_order(k.shadow(), None, None);
    let memo_key = (key, opts.orbit_cap, opts.trivial);
    let terms = match TERMS.with(|m| m.borrow().get(&memo_key).cloned()) {
        Some(t) => t,
        None => {
            let t = TraversalOrientation::canonical(k.shadow());
            let mut terms = Vec::with_capacity(order.len());
            for &v in &order {
                let smoothed = k.shadow().oriented_smooth(v, &t)?;
                let (key, rep) = l2_canonical(smoothed, opts.orbit_cap)?;
                terms.push((!is_trivial_term(&rep, opts.trivial)).then_some((key, rep)));
            }
            let terms = Rc::new(terms);
            TERMS.with(|m| {
                let mut m = m.borrow_mut();
                if m.len() >= MEMO_LIMIT {
                    m.clear();
                }
                m.insert(memo_key, terms.clone());
            });
            terms
        }
    };
    let mut out: Vec<(usize, CanonicalKey, GGraph)> = order
        .iter()
        .zip(terms.iter())
        .filter(|(&v, _)| include(v))
        .filter_map(|(&v, t)| t.as_ref().map(|(key, rep)| (v, key.clone(), rep.clone())))
        .collect();
    out.sort_by_key(|t| t.0);
    Ok(out)
}

fn sum_terms<'a>(terms: impl IntoIterator<Item = &'a (usize, CanonicalKey, GGraph)>) -> DiagramCombination {
    let mut out = DiagramCombination::zero(Space::L2);
    for (_, key, rep) in terms {
        out.toggle(key.clone(), rep.clone());
    }
    out
}

fn pair_of(k: &GGraph, v: usize) -> Result<Option<PairKey>> {
    let g = k.group();
    let l = k.label(v);
    if g.is_identity(l) {
        return Ok(None);
    }
    g.inversion_pair_key(l).map(Some)
}

/// Sum of oriented smoothings at every vertex.
pub fn delta(k: &GGraph) -> Result<DiagramCombination> {
    delta_with(k, &InvariantOptions::default())
}

pub fn delta_with(k: &GGraph, opts: &InvariantOptions) -> Result<DiagramCombination> {
    Ok(sum_terms(&vertex_terms(k, |_| true, opts)?))
}

/// Delta of an unlabeled one-component diagram.
pub fn delta_of_graph(graph: &FramedFourGraph, opts: &InvariantOptions) -> Result<DiagramCombination> {
    delta_with(&unlabeled(graph.clone()), opts)
}

/// Oriented smoothings at the vertices labeled by an element of the pair.
pub fn delta_g(k: &GGraph, pair: &PairKey) -> Result<DiagramCombination> {
    delta_g_with(k, pair, &InvariantOptions::default())
}

pub fn delta_g_with(k: &GGraph, pair: &PairKey, opts: &InvariantOptions) -> Result<DiagramCombination> {
    let terms = vertex_terms(k, |v| pair_of(k, v).ok().flatten().as_ref() == Some(pair), opts)?;
    Ok(sum_terms(&terms))
}

pub fn delta_full(k: &GGraph) -> Result<BTreeMap<PairKey, DiagramCombination>> {
    delta_full_with(k, &InvariantOptions::default())
}

/// Every nonzero `delta_g` over the non-unit labels present.
pub fn delta_full_with(k: &GGraph, opts: &InvariantOptions) -> Result<BTreeMap<PairKey, DiagramCombination>> {
    Ok(delta_family_with(k, opts)?.1)
}

/// `delta` and every nonzero `delta_g`, smoothing each vertex once.
pub fn delta_family_with(
    k: &GGraph,
    opts: &InvariantOptions,
) -> Result<(DiagramCombination, BTreeMap<PairKey, DiagramCombination>)> {
    let pairs: Vec<Option<PairKey>> = (0..k.vertex_count()).map(|v| pair_of(k, v)).collect::<Result<_>>()?;
    let terms = vertex_terms(k, |_| true, opts)?;
    let mut full: BTreeMap<PairKey, DiagramCombination> = BTreeMap::new();
    for term in &terms {
        if let Some(p) = &pairs[term.0] {
            full.entry(p.clone()).or_insert_with(|| DiagramCombination::zero(Space::L2)).toggle(term.1.clone(), term.2.clone());
        }
    }
    full.retain(|_, d| !d.is_empty());
    Ok((sum_terms(&terms), full))
}

pub fn crossing_lower_bound(k: &GGraph) -> Result<usize> {
    crossing_lower_bound_with(k, &InvariantOptions::default())
}

/// Any diagram equivalent to `k` has at least this many vertices.
pub fn crossing_lower_bound_with(k: &GGraph, opts: &InvariantOptions) -> Result<usize> {
    let m1 = group_bracket_with(k, opts)?.max_vertex_count();
    let (d, full) = delta_family_with(k, opts)?;
    let mut deltas = vec![d];
    deltas.extend(full.into_values());
    let m2 = deltas.iter().filter(|d| !d.is_empty()).map(|d| d.max_vertex_count() + 1).max().unwrap_or(0);
    Ok(m1.max(m2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MinimalityStatus {
    CertifiedMinimal,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct NaEntry {
    pub key: CanonicalKey,
    pub diagram: GGraph,
    pub lower_bound: usize,
    pub status: MinimalityStatus,
    /// A smaller class proven equivalent by search, when one was found.
    pub equivalent_to: Option<CanonicalKey>,
}

#[derive(Clone, Copy, Debug)]
pub struct NaOptions {
    pub invariants: InvariantOptions,
    pub search: SearchBudget,
}

impl Default for NaOptions {
    fn default() -> Self {
        NaOptions {
            invariants: InvariantOptions::default(),
            search: SearchBudget { vertex_budget: 6, node_budget: 10_000 },
        }
    }
}

/// Double occurrence words of length 2k whose symbols first appear in increasing order.
fn double_occurrence_words(k: usize) -> Vec<Vec<usize>> {
    fn go(word: &mut Vec<usize>, counts: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<usize>>) {
        if word.len() == 2 * k {
            out.push(word.clone());
            return;
        }
        let opened = counts.iter().filter(|&&c| c > 0).count();
        for s in 0..k.min(opened + 1) {
            if counts[s] < 2 {
                counts[s] += 1;
                word.push(s);
                go(word, counts, k, out);
                word.pop();
                counts[s] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![0; k], k, &mut out);
    out
}

/// Good one-component G-graphs with k vertices, one per canonical key.
pub fn good_diagrams(group: &GroupSpec, k: usize) -> Result<Vec<(CanonicalKey, GGraph)>> {
    let elements = group
        .elements()
        .ok_or_else(|| Error::ScaleLimit("enumeration needs a finite group".into()))?;
    let mut out: BTreeMap<CanonicalKey, GGraph> = BTreeMap::new();
    if k == 0 {
        let u = GGraph::unknot(group.clone());
        out.insert(u.key(), u);
    }
    for word in double_occurrence_words(k).into_iter().filter(|w| !w.is_empty()) {
        let names: Vec<String> = word.iter().map(|s| format!("V{s}")).collect();
        let shadow = from_gauss_codes(&[names], 0)?.graph;
        let structures = shadow.source_sink_structures();
        if structures.is_empty() {
            continue;
        }
        let total = elements.len().pow(k as u32);
        for index in 0..total {
            let mut rest = index;
            let labels: Vec<GroupElement> = (0..k)
                .map(|_| {
                    let e = elements[rest % elements.len()].clone();
                    rest /= elements.len();
                    e
                })
                .collect();
            for s in &structures {
                let g = GGraph::new(shadow.clone(), group.clone(), labels.clone(), Some(s.clone()))?;
                out.entry(g.key()).or_insert(g);
            }
        }
    }
    Ok(out.into_iter().collect())
}

type Signature = (Vec<CanonicalKey>, Vec<CanonicalKey>, Vec<(PairKey, Vec<CanonicalKey>)>);

fn signature(k: &GGraph, opts: &InvariantOptions) -> Result<Signature> {
    let gb = group_bracket_with(k, opts)?.keys().cloned().collect();
    let (d, full) = delta_family_with(k, opts)?;
    let d = d.keys().cloned().collect();
    let full = full
        .into_iter()
        .map(|(p, c)| (p, c.keys().cloned().collect()))
        .collect();
    Ok((gb, d, full))
}

/// Good one-component k-vertex G-graphs, each certified minimal when its
/// lower bound is k or its invariants differ from every smaller diagram.
pub fn na_enumeration(group: &GroupSpec, k: usize, opts: &NaOptions) -> Result<Vec<NaEntry>> {
    let order = group.order().ok_or_else(|| Error::ScaleLimit("enumeration needs a finite group".into()))?;
    if k > 4 || order > 6 {
        return Err(Error::ScaleLimit(format!("enumeration is limited to k <= 4 and |G| <= 6 (got k = {k}, |G| = {order})")));
    }
    let mut smaller: Vec<(CanonicalKey, GGraph, Signature)> = Vec::new();
    for j in 0..k {
        for (key, g) in good_diagrams(group, j)? {
            let sig = signature(&g, &opts.invariants)?;
            smaller.push((key, g, sig));
        }
    }
    let mut out = Vec::new();
    for (key, diagram) in good_diagrams(group, k)? {
        let lower_bound = crossing_lower_bound_with(&diagram, &opts.invariants)?;
        let mut status = MinimalityStatus::CertifiedMinimal;
        let mut equivalent_to = None;
        if lower_bound < k {
            let sig = signature(&diagram, &opts.invariants)?;
            for (skey, sg, ssig) in &smaller {
                if *ssig != sig {
                    continue;
                }
                status = MinimalityStatus::Undetermined;
                if let SearchOutcome::Proven(_) = equivalence_search(&diagram, sg, opts.search)? {
                    equivalent_to = Some(skey.clone());
                    break;
                }
            }
        }
        out.push(NaEntry { key, diagram, lower_bound, status, equivalent_to });
    }
    Ok(out)
}
