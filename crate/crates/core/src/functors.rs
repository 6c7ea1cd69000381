//! Pushforward along homomorphisms, projection to subgroups and abelian covers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gknot::GGraph;
use crate::graph::{Extension, FramedFourGraph, SourceSinkStructure};
use crate::groups::{GroupElement, GroupSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Action {
    Table(BTreeMap<GroupElement, GroupElement>),
    /// Images of the free generators x1..xr.
    Generators(Vec<GroupElement>),
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: GroupSpec,
    target: GroupSpec,
    action: Action,
}

impl Homomorphism {
    pub fn identity(group: &GroupSpec) -> Self {
        let action = match group.elements() {
            Some(els) => Action::Table(els.into_iter().map(|e| (e.clone(), e)).collect()),
            None => {
                let GroupSpec::Free(r) = group else { unreachable!("only free groups are infinite") };
                Action::Generators((1..=*r as i32).map(|i| GroupElement::Word(vec![i])).collect())
            }
        };
        Homomorphism { source: group.clone(), target: group.clone(), action }
    }

    /// The map to the trivial group.
    pub fn trivial(source: &GroupSpec) -> Self {
        Homomorphism { source: source.clone(), target: GroupSpec::Trivial, action: Action::Trivial }
    }

    /// Builds a homomorphism from `source -> target` image pairs.
    ///
    /// Free sources need the image of every generator. Cyclic sources may give
    /// the image of 1 only. Other sources need the full table. The result is
    /// checked exhaustively on finite sources.
    pub fn from_pairs(source: &GroupSpec, target: &GroupSpec, pairs: &[(GroupElement, GroupElement)]) -> Result<Self> {
        for (a, b) in pairs {
            source.check(a)?;
            target.check(b)?;
        }
        if let GroupSpec::Free(r) = source {
            let mut images = vec![None; *r];
            for (a, b) in pairs {
                match a {
                    GroupElement::Word(w) if w.len() == 1 && w[0] > 0 => images[w[0] as usize - 1] = Some(b.clone()),
                    _ => return Err(Error::Domain("free source: give the image of each generator".into())),
                }
            }
            let images = images
                .into_iter()
                .enumerate()
                .map(|(i, x)| x.ok_or_else(|| Error::Domain(format!("missing image of x{}", i + 1))))
                .collect::<Result<_>>()?;
            return Ok(Homomorphism { source: source.clone(), target: target.clone(), action: Action::Generators(images) });
        }
        let mut table: BTreeMap<GroupElement, GroupElement> = BTreeMap::new();
        if let GroupSpec::Cyclic(n) = source {
            if let Some((_, img)) = pairs.iter().find(|(a, _)| *a == GroupElement::Residue(1 % n)) {
                let mut acc = target.identity();
                for k in 0..*n {
                    table.insert(GroupElement::Residue(k), acc.clone());
                    acc = target.multiply(&acc, img)?;
                }
            }
        }
        for (a, b) in pairs {
            if let Some(existing) = table.get(a) {
                if existing != b {
                    return Err(Error::Homomorphism { relator: format!("{} has two images", source.format_element(a)) });
                }
            }
            table.insert(a.clone(), b.clone());
        }
        let hom = Homomorphism { source: source.clone(), target: target.clone(), action: Action::Table(table) };
        hom.verify()?;
        Ok(hom)
    }

    fn verify(&self) -> Result<()> {
        let els = self.source.elements().expect("finite source");
        let Action::Table(t) = &self.action else { return Ok(()) };
        for e in &els {
            if !t.contains_key(e) {
                return Err(Error::Domain(format!("no image for {}", self.source.format_element(e))));
            }
        }
        if !self.target.is_identity(&t[&self.source.identity()]) {
            return Err(Error::Homomorphism { relator: "identity is not mapped to identity".into() });
        }
        for a in &els {
            for b in &els {
                let lhs = &t[&self.source.multiply(a, b)?];
                let rhs = self.target.multiply(&t[a], &t[b])?;
                if *lhs != rhs {
                    return Err(Error::Homomorphism {
                        relator: format!(
                            "f({}*{}) != f({})*f({})",
                            self.source.format_element(a),
                            self.source.format_element(b),
                            self.source.format_element(a),
                            self.source.format_element(b)
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        self.source.check(g)?;
        match &self.action {
            Action::Trivial => Ok(GroupElement::Unit),
            Action::Table(t) => Ok(t[g].clone()),
            Action::Generators(images) => {
                let GroupElement::Word(w) = g else { unreachable!() };
                let letters: Vec<GroupElement> = w
                    .iter()
                    .map(|&l| {
                        let img = &images[l.unsigned_abs() as usize - 1];
                        if l > 0 {
                            Ok(img.clone())
                        } else {
                            self.target.inverse(img)
                        }
                    })
                    .collect::<Result<_>>()?;
                self.target.product_of(&letters)
            }
        }
    }
}

/// Relabels every vertex by its image; shadow and orientation are kept.
pub fn pushforward(k: &GGraph, hom: &Homomorphism) -> Result<GGraph> {
    if *k.group() != hom.source {
        return Err(Error::GroupMismatch(format!("diagram is over {}, map starts at {}", k.group(), hom.source)));
    }
    let labels = k.labels().iter().map(|l| hom.apply(l)).collect::<Result<_>>()?;
    Ok(GGraph::from_parts_unchecked(k.shadow().clone(), hom.target.clone(), labels, k.orientation().cloned()))
}

/// A finite subgroup, closed under multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient: GroupSpec,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn new(ambient: &GroupSpec, elements: &[GroupElement]) -> Result<Self> {
        if ambient.order().is_none() {
            return Err(Error::Unsupported("subgroups of infinite groups".into()));
        }
        for e in elements {
            ambient.check(e)?;
        }
        let mut elements = elements.to_vec();
        elements.sort();
        elements.dedup();
        if !elements.contains(&ambient.identity()) {
            return Err(Error::Domain("subgroup must contain the identity".into()));
        }
        for a in &elements {
            for b in &elements {
                let p = ambient.multiply(a, b)?;
                if elements.binary_search(&p).is_err() {
                    return Err(Error::Domain(format!(
                        "not closed: {} * {} = {}",
                        ambient.format_element(a),
                        ambient.format_element(b),
                        ambient.format_element(&p)
                    )));
                }
            }
        }
        Ok(Subgroup { ambient: ambient.clone(), elements })
    }

    /// Multiples of `d` in Z/n.
    pub fn cyclic_multiples(n: u64, d: u64) -> Result<Self> {
        if d == 0 || n % d != 0 {
            return Err(Error::Domain(format!("{d} does not divide {n}")));
        }
        let els: Vec<GroupElement> = (0..n / d).map(|k| GroupElement::Residue(k * d)).collect();
        Subgroup::new(&GroupSpec::cyclic(n)?, &els)
    }

    pub fn ambient(&self) -> &GroupSpec {
        &self.ambient
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// The subgroup as a group in its own right: Z/m for subgroups of
    /// cyclic groups (d·k ↦ k), a multiplication table otherwise.
    pub fn as_group(&self) -> GroupSpec {
        match self.ambient {
            GroupSpec::Cyclic(_) => GroupSpec::Cyclic(self.order() as u64),
            GroupSpec::Trivial => GroupSpec::Trivial,
            _ => {
                let idx = |e: &GroupElement| self.elements.binary_search(e).unwrap();
                let table = self
                    .elements
                    .iter()
                    .map(|a| self.elements.iter().map(|b| idx(&self.ambient.multiply(a, b).unwrap())).collect())
                    .collect();
                GroupSpec::table(table, idx(&self.ambient.identity())).expect("closed subset is a group")
            }
        }
    }

    /// An element of the subgroup, expressed in [`Subgroup::as_group`].
    pub fn to_sub(&self, g: &GroupElement) -> Result<GroupElement> {
        let i = self
            .elements
            .binary_search(g)
            .map_err(|_| Error::Domain(format!("{} is not in the subgroup", self.ambient.format_element(g))))?;
        Ok(match self.ambient {
            GroupSpec::Cyclic(_) => GroupElement::Residue(i as u64),
            GroupSpec::Trivial => GroupElement::Unit,
            _ => GroupElement::Index(i),
        })
    }
}

/// Deletes the vertices whose labels lie outside the subgroup.
///
/// The orientation is re-derived: on each component the structure agreeing
/// with the smallest surviving vertex is kept. A result that is not good
/// carries no orientation.
pub fn project(k: &GGraph, sub: &Subgroup) -> Result<GGraph> {
    if *k.group() != sub.ambient {
        return Err(Error::GroupMismatch(format!("diagram is over {}, subgroup of {}", k.group(), sub.ambient)));
    }
    let mut shadow = k.shadow().clone();
    let mut kept: Vec<usize> = (0..k.vertex_count()).collect();
    for v in (0..k.vertex_count()).rev() {
        if !sub.contains(k.label(v)) {
            shadow = shadow.remove_vertex(v);
            kept.remove(v);
        }
    }
    let labels = kept.iter().map(|&v| sub.to_sub(k.label(v))).collect::<Result<_>>()?;
    let hints: Vec<Option<bool>> = match k.orientation() {
        Some(o) => kept.iter().map(|&v| Some(o.polarity[v])).collect(),
        None => vec![None; kept.len()],
    };
    let orientation = match shadow.extend_orientation(&hints, true) {
        Extension::Structure(s) => Some(s),
        _ => None,
    };
    Ok(GGraph::from_parts_unchecked(shadow, sub.as_group(), labels, orientation))
}

/// The quotient G/G′ of an abelian group, cosets ordered by smallest
/// element with G′ first.
#[derive(Clone, Debug)]
pub struct Quotient {
    sub: Subgroup,
    cosets: Vec<Vec<GroupElement>>,
    index: BTreeMap<GroupElement, usize>,
}

impl Quotient {
    pub fn new(sub: &Subgroup) -> Result<Self> {
        let g = &sub.ambient;
        if !g.is_abelian() {
            return Err(Error::Unsupported("covers over non-abelian groups".into()));
        }
        let mut index = BTreeMap::new();
        let mut cosets: Vec<Vec<GroupElement>> = Vec::new();
        for e in g.elements().expect("finite ambient") {
            if index.contains_key(&e) {
                continue;
            }
            let mut coset: Vec<GroupElement> =
                sub.elements.iter().map(|s| g.multiply(&e, s)).collect::<Result<_>>()?;
            coset.sort();
            for c in &coset {
                index.insert(c.clone(), cosets.len());
            }
            cosets.push(coset);
        }
        // the subgroup's coset holds the identity; keep it first
        let id = index[&g.identity()];
        if id != 0 {
            cosets.swap(0, id);
            for (i, c) in cosets.iter().enumerate() {
                for e in c {
                    index.insert(e.clone(), i);
                }
            }
        }
        Ok(Quotient { sub: sub.clone(), cosets, index })
    }

    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    /// The projection α: G → H.
    pub fn alpha(&self, g: &GroupElement) -> usize {
        self.index[g]
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let g = &self.sub.ambient;
        self.index[&g.multiply(&self.cosets[a][0], &self.cosets[b][0]).expect("ambient elements")]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let g = &self.sub.ambient;
        self.index[&g.inverse(&self.cosets[a][0]).expect("ambient element")]
    }

    /// Smallest element of each coset.
    pub fn minimal_section(&self) -> Transversal {
        Transversal { images: self.cosets.iter().map(|c| c[0].clone()).collect() }
    }

    /// A section that is a homomorphism, i.e. a complement of G′ in G, picking
    /// the smallest image coset by coset. `None` when the extension does not split.
    pub fn split_section(&self) -> Option<Transversal> {
        let mut images = vec![self.cosets[0][0].clone()];
        self.extend_split(&mut images).then_some(Transversal { images })
    }

    fn extend_split(&self, images: &mut Vec<GroupElement>) -> bool {
        let g = &self.sub.ambient;
        let i = images.len();
        if i == self.cosets.len() {
            return true;
        }
        for candidate in &self.cosets[i] {
            images.push(candidate.clone());
            let consistent = (0..=i).all(|a| {
                (0..=i).all(|b| {
                    let c = self.multiply(a, b);
                    c > i || g.multiply(&images[a], &images[b]).expect("ambient elements") == images[c]
                })
            });
            if consistent && self.extend_split(images) {
                return true;
            }
            images.pop();
        }
        false
    }

    pub fn is_homomorphic(&self, t: &Transversal) -> bool {
        let g = &self.sub.ambient;
        let n = self.cosets.len();
        (0..n).all(|a| {
            (0..n).all(|b| g.multiply(&t.images[a], &t.images[b]).expect("ambient elements") == t.images[self.multiply(a, b)])
        })
    }

    /// Section from `(coset member, image)` pairs; unlisted cosets use their smallest element.
    pub fn section(&self, pairs: &[(GroupElement, GroupElement)]) -> Result<Transversal> {
        let g = &self.sub.ambient;
        let mut t = self.minimal_section();
        for (h, img) in pairs {
            g.check(h)?;
            g.check(img)?;
            let (ih, ii) = (self.alpha(h), self.alpha(img));
            if ih != ii {
                return Err(Error::Domain(format!(
                    "section maps the coset of {} to {}, outside it",
                    g.format_element(h),
                    g.format_element(img)
                )));
            }
            t.images[ih] = img.clone();
        }
        if !g.is_identity(&t.images[0]) {
            return Err(Error::Domain("section must send the unit coset to the identity".into()));
        }
        Ok(t)
    }
}

/// A section σ: H → G of the quotient map, indexed by coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    pub images: Vec<GroupElement>,
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub graph: GGraph,
    pub sheets: usize,
    /// Base vertex and sheet of every lifted vertex.
    pub lifts: Vec<(usize, usize)>,
}

impl Cover {
    /// Component count predicted for a strand-preserving cover.
    pub fn expected_components(&self, base: &GGraph) -> usize {
        base.shadow().component_count() * self.sheets
    }
}

/// The |G/G′|-sheeted cover. Strands are copied once per sheet; the lift
/// X^i of X carries the emanating pair of sheet i and the incoming pair of
/// sheet i·α(f(X)), and is labeled f(X)·σ(α(f(X)))⁻¹.
///
/// σ must be a homomorphism, so G = G′ × σ(H); without a complement the
/// G′-parts of a bigon's labels need not cancel. The default section is
/// [`Quotient::split_section`].
pub fn cover(k: &GGraph, sub: &Subgroup, section: Option<&Transversal>) -> Result<Cover> {
    let g = k.group();
    if *g != sub.ambient {
        return Err(Error::GroupMismatch(format!("diagram is over {g}, subgroup of {}", sub.ambient)));
    }
    let q = Quotient::new(sub)?;
    let sigma = match section {
        Some(s) => {
            if s.images.len() != q.order() || !g.is_identity(&s.images[0]) {
                return Err(Error::Domain("section does not match the quotient".into()));
            }
            for (i, img) in s.images.iter().enumerate() {
                if q.alpha(img) != i {
                    return Err(Error::Domain("section is not a right inverse of the quotient map".into()));
                }
            }
            if !q.is_homomorphic(s) {
                return Err(Error::Domain("section is not a homomorphism".into()));
            }
            s.clone()
        }
        None => q.split_section().ok_or_else(|| {
            Error::Unsupported(format!("{} has no complement in {g}; the cover needs a split extension", sub.as_group()))
        })?,
    };
    let polarity = match k.orientation() {
        Some(o) => o.polarity.clone(),
        None => {
            // without a source-sink structure the two passes must be interchangeable
            if k.labels().iter().any(|l| q.inverse(q.alpha(l)) != q.alpha(l)) {
                return Err(Error::Domain("unoriented diagram needs labels of order at most 2 in the quotient".into()));
            }
            vec![false; k.vertex_count()]
        }
    };
    let sheets = q.order();
    let n = k.vertex_count();
    let shift: Vec<usize> = k.labels().iter().map(|l| q.alpha(l)).collect();
    // lifted half-edge of h on sheet j
    let lift = |h: usize, j: usize| -> usize {
        let (x, s) = (h / 4, h % 4);
        let emanating = (s & 1 == 1) == polarity[x];
        let i = if emanating { j } else { q.multiply(j, q.inverse(shift[x])) };
        4 * (x * sheets + i) + s
    };
    let mut partner = vec![0; 4 * n * sheets];
    for (a, b) in k.shadow().edges() {
        for j in 0..sheets {
            let (la, lb) = (lift(a, j), lift(b, j));
            partner[la] = lb;
            partner[lb] = la;
        }
    }
    let shadow = FramedFourGraph::from_partner(partner, k.shadow().free_circles() * sheets);
    let mut labels = Vec::with_capacity(n * sheets);
    let mut lifts = Vec::with_capacity(n * sheets);
    for x in 0..n {
        let f = k.label(x);
        let gp = g.multiply(f, &g.inverse(&sigma.images[shift[x]])?)?;
        let label = sub.to_sub(&gp)?;
        for i in 0..sheets {
            labels.push(label.clone());
            lifts.push((x, i));
        }
    }
    let orientation = k.orientation().map(|o| SourceSinkStructure {
        polarity: (0..n * sheets).map(|v| o.polarity[v / sheets]).collect(),
        circle_orientations: o.circle_orientations.iter().flat_map(|&c| std::iter::repeat_n(c, sheets)).collect(),
    });
    let graph = GGraph::from_parts_unchecked(shadow, sub.as_group(), labels, orientation);
    Ok(Cover { graph, sheets, lifts })
}

/// A vertex whose two passes lie on different components.
pub fn is_mixed(graph: &FramedFourGraph, v: usize) -> bool {
    let (comp, _) = graph.strand_of_half_edges();
    comp[4 * v] != comp[4 * v + 1]
}
