//! Morphisms of Ω as edge maps, checked vertex by vertex.

use std::fmt;

use crate::error::{DendroError, Result};
use crate::tree::{Flavor, Node, Tree};

/// A map of trees, i.e. an operad map between the free operads they generate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaMorphism {
    pub source: Tree,
    pub target: Tree,
    pub edge_map: Vec<usize>,
}

/// Which generating class an elementary map belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementaryKind {
    InnerFace,
    TopFace,
    RootFace,
    /// Edge inclusion `η → C_n`; the faces of a corolla.
    CorollaFace,
    Degeneracy,
}

impl fmt::Display for ElementaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementaryKind::InnerFace => "inner-face",
            ElementaryKind::TopFace => "top-face",
            ElementaryKind::RootFace => "root-face",
            ElementaryKind::CorollaFace => "corolla-face",
            ElementaryKind::Degeneracy => "degeneracy",
        })
    }
}

impl ElementaryKind {
    pub fn is_face(self) -> bool {
        self != ElementaryKind::Degeneracy
    }
}

/// Checks that `map` sends every vertex of `s` to an operation of `t`.
pub fn check_edge_map(s: &Tree, t: &Tree, map: &[usize]) -> std::result::Result<(), String> {
    if map.len() != s.num_edges() {
        return Err(format!("edge map has length {}, source has {} edges", map.len(), s.num_edges()));
    }
    if let Some(&bad) = map.iter().find(|&&e| e >= t.num_edges()) {
        return Err(format!("edge {bad} is not an edge of the target"));
    }
    let sub: Vec<u64> = (0..t.num_edges()).map(|e| t.subtree_mask(e)).collect();
    let leaves = t.leaf_mask();
    for v in s.vertices() {
        let ins: Vec<usize> = s.inputs(v).unwrap().iter().map(|&c| map[c]).collect();
        if !is_operation(&sub, leaves, map[v], &ins) {
            return Err(format!("vertex above edge {v} does not map to an operation"));
        }
    }
    Ok(())
}

/// Whether `inputs -> out` is an operation of the free operad on the target.
fn is_operation(sub: &[u64], leaves: u64, out: usize, inputs: &[usize]) -> bool {
    if inputs.len() == 1 && inputs[0] == out {
        return true;
    }
    let mut covered = 0u64;
    for (i, &a) in inputs.iter().enumerate() {
        if a == out || sub[out] & (1 << a) == 0 {
            return false;
        }
        for &b in &inputs[..i] {
            if sub[a] & (1 << b) != 0 || sub[b] & (1 << a) != 0 {
                return false;
            }
        }
        covered |= sub[a];
    }
    sub[out] & leaves & !covered == 0
}

/// Vertices of `t` (by output edge) lying inside the image of some vertex of `s`.
pub fn vertex_image(s: &Tree, t: &Tree, map: &[usize]) -> u64 {
    let mut hit = 0u64;
    for v in s.vertices() {
        let ins = s.inputs(v).unwrap();
        let a = map[v];
        if ins.len() == 1 && map[ins[0]] == a {
            continue;
        }
        let below = ins.iter().fold(0u64, |m, &c| m | t.subtree_mask(map[c]));
        let mut region = t.subtree_mask(a) & !below;
        while region != 0 {
            let x = region.trailing_zeros() as usize;
            region &= region - 1;
            if !t.is_leaf(x) {
                hit |= 1 << x;
            }
        }
    }
    hit
}

impl OmegaMorphism {
    pub fn new(source: Tree, target: Tree, edge_map: Vec<usize>) -> Result<Self> {
        if source.flavor() != target.flavor() {
            return Err(DendroError::FlavorMismatch { expected: source.flavor(), found: target.flavor() });
        }
        check_edge_map(&source, &target, &edge_map).map_err(DendroError::InvalidMorphism)?;
        Ok(OmegaMorphism { source, target, edge_map })
    }

    pub fn identity(t: &Tree) -> Self {
        OmegaMorphism { source: t.clone(), target: t.clone(), edge_map: (0..t.num_edges()).collect() }
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &OmegaMorphism) -> Result<OmegaMorphism> {
        compose(self, f)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u64;
        for &e in &self.edge_map {
            if seen & (1 << e) != 0 {
                return false;
            }
            seen |= 1 << e;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let hit = self.edge_map.iter().fold(0u64, |m, &e| m | (1 << e));
        hit.count_ones() as usize == self.target.num_edges()
    }

    /// Bijective on edges between trees of equal size.
    pub fn is_iso(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective() && self.is_surjective()
    }

    /// Monomorphisms of Ω are exactly the edge-injective maps.
    pub fn is_mono(&self) -> bool {
        self.is_injective()
    }

    /// A degeneracy followed by an isomorphism: every edge and every vertex
    /// of the target is hit.
    pub fn is_split_epi(&self) -> bool {
        self.is_surjective()
            && vertex_image(&self.source, &self.target, &self.edge_map)
                == self.target.vertices().fold(0u64, |m, v| m | (1 << v))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.edge_map.iter().enumerate().all(|(i, &e)| i == e)
    }
}

/// `g ∘ f`.
pub fn compose(g: &OmegaMorphism, f: &OmegaMorphism) -> Result<OmegaMorphism> {
    if f.target != g.source {
        return Err(DendroError::NotComposable);
    }
    Ok(OmegaMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        edge_map: f.edge_map.iter().map(|&e| g.edge_map[e]).collect(),
    })
}

/// All edge maps `s → t` that are morphisms, in lexicographic order of the
/// edge map.
pub fn hom_maps_raw(s: &Tree, t: &Tree) -> Vec<Vec<usize>> {
    let sub: Vec<u64> = (0..t.num_edges()).map(|e| t.subtree_mask(e)).collect();
    let leaves = t.leaf_mask();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; s.num_edges()];
    // edges of s in preorder; vertices are processed when their output is mapped
    let verts: Vec<usize> = s.vertices().collect();
    for r in 0..t.num_edges() {
        map[0] = r;
        extend(s, &verts, 0, &sub, leaves, &mut map, &mut out);
    }
    out.sort();
    out
}

fn extend(
    s: &Tree,
    verts: &[usize],
    vi: usize,
    sub: &[u64],
    leaves: u64,
    map: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(&v) = verts.get(vi) else {
        out.push(map.clone());
        return;
    };
    let ins = s.inputs(v).unwrap();
    let a = map[v];
    let mut chosen = Vec::with_capacity(ins.len());
    choose_inputs(s, verts, vi, ins, a, sub, leaves, &mut chosen, map, out);
}

#[allow(clippy::too_many_arguments)]
fn choose_inputs(
    s: &Tree,
    verts: &[usize],
    vi: usize,
    ins: &[usize],
    a: usize,
    sub: &[u64],
    leaves: u64,
    chosen: &mut Vec<usize>,
    map: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == ins.len() {
        if !is_operation(sub, leaves, a, chosen) {
            return;
        }
        for (&c, &b) in ins.iter().zip(chosen.iter()) {
            map[c] = b;
        }
        extend(s, verts, vi + 1, sub, leaves, map, out);
        return;
    }
    let mut cand = sub[a];
    if ins.len() != 1 {
        cand &= !(1u64 << a);
    }
    while cand != 0 {
        let b = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let clash = chosen.iter().any(|&c| sub[c] & (1 << b) != 0 || sub[b] & (1 << c) != 0);
        if clash {
            continue;
        }
        chosen.push(b);
        choose_inputs(s, verts, vi, ins, a, sub, leaves, chosen, map, out);
        chosen.pop();
    }
}

/// All morphisms `s → t`; deterministic order.
pub fn hom_set(s: &Tree, t: &Tree) -> Result<Vec<OmegaMorphism>> {
    if s.flavor() != t.flavor() {
        return Err(DendroError::FlavorMismatch { expected: s.flavor(), found: t.flavor() });
    }
    Ok(hom_maps_raw(s, t)
        .into_iter()
        .map(|m| OmegaMorphism { source: s.clone(), target: t.clone(), edge_map: m })
        .collect())
}

pub fn automorphisms(t: &Tree) -> Vec<OmegaMorphism> {
    hom_maps_raw(t, t)
        .into_iter()
        .map(|m| OmegaMorphism { source: t.clone(), target: t.clone(), edge_map: m })
        .filter(OmegaMorphism::is_iso)
        .collect()
}

/// Some isomorphism `s → t`, if the trees are isomorphic.
pub fn find_iso(s: &Tree, t: &Tree) -> Option<Vec<usize>> {
    if s.key() != t.key() {
        return None;
    }
    let (cs, ms) = s.canonicalize();
    let (ct, mt) = t.canonicalize();
    debug_assert_eq!(cs.presentation(), ct.presentation());
    let mut inv_t = vec![0; mt.len()];
    for (e, &c) in mt.iter().enumerate() {
        inv_t[c] = e;
    }
    Some(ms.iter().map(|&c| inv_t[c]).collect())
}

/// Tree with edges labelled by ids of an ambient tree.
#[derive(Clone)]
struct Labelled {
    label: usize,
    kids: Option<Vec<Labelled>>,
}

impl Labelled {
    fn of(t: &Tree, e: usize) -> Labelled {
        Labelled { label: e, kids: t.inputs(e).map(|ins| ins.iter().map(|&c| Labelled::of(t, c)).collect()) }
    }

    fn node(&self) -> Node {
        match &self.kids {
            None => Node::Leaf,
            Some(k) => Node::Vertex(k.iter().map(Labelled::node).collect()),
        }
    }

    /// Labels in preorder, matching the ids `Tree::from_node` assigns.
    fn labels(&self, out: &mut Vec<usize>) {
        out.push(self.label);
        if let Some(k) = &self.kids {
            for c in k {
                c.labels(out);
            }
        }
    }

    fn build(&self, flavor: Flavor) -> Option<(Tree, Vec<usize>)> {
        let t = Tree::from_node(&self.node(), flavor).ok()?;
        let mut labels = Vec::new();
        self.labels(&mut labels);
        Some((t, labels))
    }

    fn map_at(&mut self, e: usize, f: &mut dyn FnMut(&mut Labelled)) {
        if self.label == e {
            f(self);
            return;
        }
        if let Some(k) = &mut self.kids {
            for c in k {
                c.map_at(e, f);
            }
        }
    }
}

/// Elementary faces into `t` and elementary degeneracies out of `t`.
/// Faces whose source falls outside the flavor of `t` are omitted.
pub fn elementary_maps(t: &Tree) -> Vec<(ElementaryKind, OmegaMorphism)> {
    let flavor = t.flavor();
    let mut out = Vec::new();
    let face = |kind, lab: Labelled, out: &mut Vec<(ElementaryKind, OmegaMorphism)>| {
        if let Some((s, labels)) = lab.build(flavor) {
            out.push((kind, OmegaMorphism { source: s, target: t.clone(), edge_map: labels }));
        }
    };
    if let Some(n) = t.corolla_arity() {
        let eta = Tree::eta();
        if eta.with_flavor(flavor).is_ok() {
            for e in 0..=n {
                face(ElementaryKind::CorollaFace, Labelled { label: e, kids: None }, &mut out);
            }
        }
    } else if let Some(root_ins) = t.inputs(0) {
        for e in t.inner_edges() {
            let mut lab = Labelled::of(t, 0);
            let parent = t.parent(e).unwrap();
            lab.map_at(parent, &mut |node| {
                let kids = node.kids.take().unwrap();
                let mut merged = Vec::new();
                for k in kids {
                    if k.label == e {
                        merged.extend(k.kids.unwrap());
                    } else {
                        merged.push(k);
                    }
                }
                node.kids = Some(merged);
            });
            face(ElementaryKind::InnerFace, lab, &mut out);
        }
        for e in t.inner_edges() {
            if t.inputs(e).unwrap().iter().all(|&c| t.is_leaf(c)) {
                let mut lab = Labelled::of(t, 0);
                lab.map_at(e, &mut |node| node.kids = None);
                face(ElementaryKind::TopFace, lab, &mut out);
            }
        }
        let non_leaf: Vec<usize> = root_ins.iter().copied().filter(|&c| !t.is_leaf(c)).collect();
        if non_leaf.len() == 1 {
            face(ElementaryKind::RootFace, Labelled::of(t, non_leaf[0]), &mut out);
        }
    }
    for e in t.vertices() {
        let ins = t.inputs(e).unwrap();
        if ins.len() != 1 {
            continue;
        }
        let c = ins[0];
        let mut lab = Labelled::of(t, 0);
        lab.map_at(e, &mut |node| {
            let mut kids = node.kids.take().unwrap();
            let inner = kids.pop().unwrap();
            node.kids = inner.kids;
        });
        let (s, labels) = lab.build(flavor).expect("collapsing a unary vertex keeps the flavor");
        let mut pos = vec![usize::MAX; t.num_edges()];
        for (i, &l) in labels.iter().enumerate() {
            pos[l] = i;
        }
        pos[c] = pos[e];
        out.push((ElementaryKind::Degeneracy, OmegaMorphism { source: t.clone(), target: s, edge_map: pos }));
    }
    out
}
