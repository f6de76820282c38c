//! Normal monomorphisms, partial normality and the generating maps `Ψ_t`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::TreeCategory;
use crate::error::{DendroError, Result};
use crate::gset::{equivariant_maps, llp_generator, FiniteGSet, FiniteGroup, Verdict};
use crate::lean::LeanObject;
use crate::lifting::has_lifting;
use crate::limits::pullback;
use crate::morphism::{automorphisms, OmegaMorphism};
use crate::presheaf::{FinitePresheaf, PresheafMap};
use crate::tree::{Flavor, Tree};

/// `Aut(t)` for a stored object, with the arrow of each group element.
pub fn aut_group(cat: &TreeCategory, o: usize) -> (Arc<FiniteGroup>, Vec<usize>) {
    let perms: Vec<Vec<usize>> = cat.automorphisms(o).iter().map(|&a| cat.arrow(a).map.clone()).collect();
    let (g, elems) = FiniteGroup::from_permutations(&perms, cat.object(o).num_edges());
    let arrows = elems.iter().map(|p| cat.find_arrow(o, o, p).expect("automorphism")).collect();
    (Arc::new(g), arrows)
}

/// `X_t` as a right `Aut(t)`-set.
pub fn aut_gset(x: &FinitePresheaf, o: usize) -> FiniteGSet {
    let (g, arrows) = aut_group(x.cat(), o);
    let act = (0..x.count(o)).map(|y| arrows.iter().map(|&a| x.act(a, y)).collect()).collect();
    FiniteGSet::new(g, act).expect("presheaf actions restrict to group actions")
}

fn fixed_by_nontrivial(x: &FinitePresheaf, o: usize, y: usize) -> bool {
    let cat = x.cat();
    let id = cat.identity(o);
    cat.automorphisms(o).iter().any(|&a| a != id && x.act(a, y) == y)
}

/// Injective on trees of size ≤ `n`, with free action off the image.
pub fn is_normal_mono_upto(f: &PresheafMap, n: usize) -> bool {
    let (x, y) = (f.source(), f.target());
    let cat = x.cat();
    (0..cat.objects_upto(n)).all(|o| {
        let mut hit = vec![false; y.count(o)];
        for e in 0..x.count(o) {
            let v = f.apply(o, e);
            if std::mem::replace(&mut hit[v], true) {
                return false;
            }
        }
        (0..y.count(o)).all(|v| hit[v] || !fixed_by_nontrivial(y, o, v))
    })
}

pub fn is_normal_upto(x: &FinitePresheaf, n: usize) -> bool {
    (0..x.cat().objects_upto(n)).all(|o| (0..x.count(o)).all(|v| !fixed_by_nontrivial(x, o, v)))
}

/// Free action at every tree of size ≤ `n`, evaluated on demand.
pub fn is_lean_normal_upto(l: &LeanObject, n: usize) -> Result<bool> {
    for t in crate::tree::enumerate_trees(n, l.flavor()) {
        let auts: Vec<OmegaMorphism> = automorphisms(&t).into_iter().filter(|m| !m.is_identity()).collect();
        for v in 0..l.evaluate(&t)?.len() {
            for a in &auts {
                if l.act(a, v)? == v {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn is_n_partially_normal(f: &PresheafMap, n: usize) -> Result<bool> {
    if n > f.cat().max_size() {
        return Err(DendroError::TruncationTooSmall { have: f.cat().max_size(), need: n });
    }
    Ok(is_normal_mono_upto(f, n))
}

/// `R_t Z` on Ω_(N): at `S`, the `Aut(t)`-equivariant maps `hom(t, S) → Z`.
/// Elements are listed as value vectors over `hom(t, S)` in sorted order.
pub fn right_kan_extension(cat: &Arc<TreeCategory>, o: usize, z: &FiniteGSet) -> (FinitePresheaf, Vec<Vec<Vec<usize>>>) {
    let (group, auts) = aut_group(cat, o);
    let mut elems = Vec::with_capacity(cat.num_objects());
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    let mut homs: Vec<HashMap<usize, usize>> = Vec::new();
    for s in 0..cat.num_objects() {
        let hom = cat.hom(o, s);
        let pos: HashMap<usize, usize> = hom.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let act = hom.iter().map(|&a| auts.iter().map(|&g| pos[&cat.compose(a, g).unwrap()]).collect()).collect();
        let hs = FiniteGSet::new(group.clone(), act).expect("precomposition is a right action");
        let mut maps = equivariant_maps(&hs, z);
        maps.sort();
        index.push(maps.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect());
        elems.push(maps);
        homs.push(pos);
    }
    let sets = elems.iter().map(Vec::len).collect();
    let x = FinitePresheaf::from_fn(cat.clone(), sets, |a, i| {
        let ar = cat.arrow(a);
        let phi = &elems[ar.tgt][i];
        let pulled: Vec<usize> =
            cat.hom(o, ar.src).iter().map(|&b| phi[homs[ar.tgt][&cat.compose(a, b).unwrap()]]).collect();
        index[ar.src][&pulled]
    });
    (x, elems)
}

/// `Ψ_t = R_t(2^G ⊔ G → * ⊔ *)` with `G = Aut(t)`, on Ω_(n).
pub fn psi_map(t: &Tree, n: usize) -> Result<PresheafMap> {
    let cat = TreeCategory::get(t.flavor(), n);
    let (o, _) = cat.locate(t).ok_or(DendroError::TruncationTooSmall { have: n, need: t.size() })?;
    let (group, _) = aut_group(&cat, o);
    let p = llp_generator(&group);
    let (src, src_elems) = right_kan_extension(&cat, o, &p.source);
    let (tgt, tgt_elems) = right_kan_extension(&cat, o, &p.target);
    let comps = (0..cat.num_objects())
        .map(|s| {
            let pos: HashMap<&Vec<usize>, usize> = tgt_elems[s].iter().enumerate().map(|(k, m)| (m, k)).collect();
            src_elems[s].iter().map(|phi| pos[&phi.iter().map(|&v| p.map[v]).collect::<Vec<_>>()]).collect()
        })
        .collect();
    PresheafMap::new(Arc::new(src), Arc::new(tgt), comps)
}

/// Left lifting against `Ψ_t` for every stored `t` of size ≤ `n`.
pub fn llp_normality_check(f: &PresheafMap, n: usize) -> Result<bool> {
    let cat = f.cat().clone();
    if n > cat.max_size() {
        return Err(DendroError::TruncationTooSmall { have: cat.max_size(), need: n });
    }
    for o in 0..cat.objects_upto(n) {
        let psi = psi_map(cat.object(o), cat.max_size())?;
        if !has_lifting(f, &psi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A map of lean objects of the same degree, given on the stored trees.
#[derive(Debug, Clone)]
pub struct LeanMap {
    pub source: LeanObject,
    pub target: LeanObject,
    pub base: PresheafMap,
}

impl LeanMap {
    pub fn new(source: LeanObject, target: LeanObject, comps: Vec<Vec<usize>>) -> Result<LeanMap> {
        if source.degree() != target.degree() {
            return Err(DendroError::ShapeMismatch("lean objects of different degree".into()));
        }
        let base = PresheafMap::new(source.base().clone(), target.base().clone(), comps)?;
        Ok(LeanMap { source, target, base })
    }

    /// The component at any tree, applied to families cell by cell.
    pub fn component(&self, t: &Tree) -> Result<Vec<usize>> {
        let (sv, tv) = (self.source.evaluate(t)?, self.target.evaluate(t)?);
        let objs: Vec<usize> = sv.cells().map(|(o, _)| o).collect();
        Ok(sv
            .families
            .iter()
            .map(|fam| {
                let img: Vec<usize> = fam.iter().zip(&objs).map(|(&x, &o)| self.base.apply(o, x)).collect();
                tv.position(&img).expect("images of families are families")
            })
            .collect())
    }
}

/// An element outside the image fixed by a nontrivial automorphism.
#[derive(Debug, Clone)]
pub struct FixedComplementWitness {
    /// The tree where the map fails to be surjective, and the element there.
    pub base_tree: Tree,
    pub base_element: usize,
    pub arity: usize,
    /// `C_{n,T}`: `T` grafted onto the last leaf of the corolla `C_{n+1}`.
    pub tree: Tree,
    pub element: usize,
    /// The `n` leaves on the root vertex, as edges of `tree`.
    pub leaves: Vec<usize>,
    /// Edge maps of the automorphisms fixing `element`.
    pub stabilizer: Vec<Vec<usize>>,
    /// `|Y_C|`, `|Y_η|` and `|Y_T|`.
    pub counts: (usize, usize, usize),
}

impl FixedComplementWitness {
    /// Every transposition of two root leaves fixes the element.
    pub fn fixed_by_leaf_swaps(&self) -> bool {
        let k = self.leaves.len();
        (0..k).all(|a| {
            (a + 1..k).all(|b| {
                self.stabilizer.iter().any(|m| {
                    let (la, lb) = (self.leaves[a], self.leaves[b]);
                    m[la] == lb && m[lb] == la && self.leaves.iter().all(|&l| l == la || l == lb || m[l] == l)
                })
            })
        })
    }

    pub fn product_formula_holds(&self) -> bool {
        let (c, eta, t) = self.counts;
        eta.checked_pow(self.arity as u32 + 1).and_then(|p| p.checked_mul(t)) == Some(c)
    }
}

/// Builds the fixed element `(c, …, c, y)` for a non-surjective lean mono.
pub fn fixed_complement_element(f: &LeanMap) -> Result<FixedComplementWitness> {
    let flavor = f.target.flavor();
    if flavor == Flavor::Closed {
        return Err(DendroError::FlavorMismatch { expected: Flavor::General, found: flavor });
    }
    let cat = f.base.cat().clone();
    let (o, y) = (0..cat.num_objects())
        .find_map(|o| {
            let mut hit = vec![false; f.target.base().count(o)];
            for &v in &f.base.comps()[o] {
                hit[v] = true;
            }
            hit.iter().position(|&h| !h).map(|y| (o, y))
        })
        .ok_or_else(|| DendroError::NoWitness("surjective on every stored tree".into()))?;
    let t = cat.object(o).clone();
    let n = 2.max(f.target.degree()).max(t.size());
    let corolla = Tree::corolla(n + 1).with_flavor(flavor)?;
    let c_tree = corolla.graft(n + 1, &t)?.with_flavor(flavor)?;
    let (canon, _) = c_tree.canonicalize();
    let target = &f.target;
    let value = target.evaluate(&canon)?;
    let eta = Tree::eta().with_flavor(flavor)?;
    // positions of the root corolla's edges and of T inside the canonical tree
    let (_, to_canon) = c_tree.canonicalize();
    let root_edge = to_canon[0];
    let leaves: Vec<usize> = (1..=n).map(|e| to_canon[e]).collect();
    let t_embed: Vec<usize> = (0..t.num_edges()).map(|e| to_canon[n + 1 + e]).collect();
    let t_face = OmegaMorphism::new(t.clone(), canon.clone(), t_embed)?;
    let colour_of = |e: usize| OmegaMorphism::new(eta.clone(), canon.clone(), vec![e]);
    let root_colour = target.act(&OmegaMorphism::new(eta.clone(), t.clone(), vec![0])?, y)?;
    let mut element = None;
    for z in 0..value.len() {
        if target.act(&t_face, z)? != y || target.act(&colour_of(root_edge)?, z)? != root_colour {
            continue;
        }
        let mut all = true;
        for &l in &leaves {
            all &= target.act(&colour_of(l)?, z)? == root_colour;
        }
        if all {
            element = Some(z);
            break;
        }
    }
    let element = element.ok_or_else(|| DendroError::NoWitness("no element with the prescribed restrictions".into()))?;
    let mut stabilizer = Vec::new();
    for a in automorphisms(&canon) {
        if !a.is_identity() && target.act(&a, element)? == element {
            stabilizer.push(a.edge_map);
        }
    }
    if f.component(&canon)?.contains(&element) {
        return Err(DendroError::NoWitness("element lies in the image".into()));
    }
    let counts = (value.len(), target.evaluate(&eta)?.len(), target.evaluate(&t)?.len());
    Ok(FixedComplementWitness { base_tree: t, base_element: y, arity: n, tree: canon, element, leaves, stabilizer, counts })
}

/// `levels[0] ← levels[1] ← …` of lean objects, handled on trees of size ≤ `bound`.
#[derive(Debug, Clone)]
pub struct DSetTower {
    pub bound: usize,
    pub levels: Vec<Arc<FinitePresheaf>>,
    pub bonds: Vec<PresheafMap>,
    pub stationary: bool,
}

impl DSetTower {
    /// Materializes lean levels on trees of size ≤ `bound`; `bonds[i]` is
    /// given by components there.
    pub fn new(levels: &[LeanObject], bound: usize, bonds: Vec<Vec<Vec<usize>>>, stationary: bool) -> Result<DSetTower> {
        let values: Vec<Arc<FinitePresheaf>> =
            levels.iter().map(|l| l.to_presheaf(bound).map(Arc::new)).collect::<Result<_>>()?;
        Self::from_presheaves(values, bonds, stationary)
    }

    pub fn from_presheaves(levels: Vec<Arc<FinitePresheaf>>, bonds: Vec<Vec<Vec<usize>>>, stationary: bool) -> Result<DSetTower> {
        if levels.is_empty() || bonds.len() + 1 != levels.len() {
            return Err(DendroError::ShapeMismatch("need one bond between consecutive levels".into()));
        }
        let bound = levels[0].truncation();
        let bonds = bonds
            .into_iter()
            .enumerate()
            .map(|(i, c)| PresheafMap::new(levels[i + 1].clone(), levels[i].clone(), c))
            .collect::<Result<_>>()?;
        Ok(DSetTower { bound, levels, bonds, stationary })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn project(&self, i: usize, j: usize, o: usize, x: usize) -> usize {
        (i..j).rev().fold(x, |x, k| self.bonds[k].apply(o, x))
    }
}

#[derive(Debug, Clone)]
pub struct DSetTowerMap {
    pub source: DSetTower,
    pub target: DSetTower,
    pub maps: Vec<PresheafMap>,
}

impl DSetTowerMap {
    pub fn new(source: DSetTower, target: DSetTower, comps: Vec<Vec<Vec<usize>>>) -> Result<DSetTowerMap> {
        if source.len() != target.len() || comps.len() != source.len() {
            return Err(DendroError::ShapeMismatch("towers of different length".into()));
        }
        let maps: Vec<PresheafMap> = comps
            .into_iter()
            .enumerate()
            .map(|(i, c)| PresheafMap::new(source.levels[i].clone(), target.levels[i].clone(), c))
            .collect::<Result<_>>()?;
        for i in 0..source.bonds.len() {
            if maps[i].after(&source.bonds[i])?.comps() != target.bonds[i].after(&maps[i + 1])?.comps() {
                return Err(DendroError::NotCommutative(format!("level {i}")));
            }
        }
        Ok(DSetTowerMap { source, target, maps })
    }

    /// Largest `n ≤ bound` for which level `i` is `n`-partially normal, or
    /// `None` when not even injective at size 0.
    pub fn normality_degree(&self, i: usize) -> Option<usize> {
        (0..=self.source.bound).take_while(|&n| is_normal_mono_upto(&self.maps[i], n)).last()
    }
}

#[derive(Debug, Clone)]
pub struct NormalReindex {
    pub verdict: Verdict,
    pub theta: Vec<usize>,
    /// Sizes up to which level `i` was asked to be normal.
    pub targets: Vec<usize>,
    pub inconclusive_from: Option<usize>,
    pub map: DSetTowerMap,
}

/// Chooses the least nondecreasing `θ(i) ≥ i` such that fixed points at
/// level `θ(i)` of trees of size ≤ `φ(i)` project into the image at level
/// `i`, then pulls back. The input must be levelwise injective.
pub fn increasingly_normal_reindex(f: &DSetTowerMap, phi: impl Fn(usize) -> usize) -> Result<NormalReindex> {
    let (x, y) = (&f.source, &f.target);
    if !f.maps.iter().all(PresheafMap::is_mono) {
        return Err(DendroError::ShapeMismatch("expected a levelwise injective map".into()));
    }
    let cat = x.levels[0].cat().clone();
    let witness = |i: usize, j: usize, n: usize| {
        (0..cat.objects_upto(n.min(y.bound))).all(|o| {
            let mut hit = vec![false; y.levels[i].count(o)];
            for e in 0..x.levels[i].count(o) {
                hit[f.maps[i].apply(o, e)] = true;
            }
            (0..y.levels[j].count(o)).all(|v| !fixed_by_nontrivial(&y.levels[j], o, v) || hit[y.project(i, j, o, v)])
        })
    };
    let mut theta: Vec<usize> = Vec::new();
    let mut targets = Vec::new();
    let mut inconclusive_from = None;
    for i in 0..x.len() {
        let from = theta.last().copied().unwrap_or(0).max(i);
        let n = phi(i).min(y.bound);
        match (from..y.len()).find(|&j| witness(i, j, n)) {
            Some(j) => {
                theta.push(j);
                targets.push(n);
            }
            None => {
                inconclusive_from = Some(i);
                break;
            }
        }
    }
    if theta.is_empty() {
        return Err(DendroError::NoWitness("level 0 has no witness in the prefix".into()));
    }
    let m = theta.len();
    let mut levels = Vec::with_capacity(m);
    let mut incl = Vec::with_capacity(m);
    let mut legs = Vec::with_capacity(m);
    for (i, &t) in theta.iter().enumerate() {
        let proj = compose_bonds(y, i, t)?;
        let (p, to_x, to_y) = pullback(&f.maps[i], &proj)?;
        levels.push(p);
        incl.push(to_y.comps().to_vec());
        legs.push(to_x);
    }
    let xbonds: Vec<Vec<Vec<usize>>> = (0..m - 1)
        .map(|i| {
            // (x, y) ↦ (bond x, π y), located among the pairs of level i
            (0..cat.num_objects())
                .map(|o| {
                    (0..levels[i + 1].count(o))
                        .map(|k| {
                            let xv = x.bonds[i].apply(o, legs[i + 1].apply(o, k));
                            let yv = y.project(theta[i], theta[i + 1], o, incl[i + 1][o][k]);
                            (0..levels[i].count(o))
                                .find(|&q| legs[i].apply(o, q) == xv && incl[i][o][q] == yv)
                                .expect("pullbacks are compatible")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let tlevels: Vec<Arc<FinitePresheaf>> = theta.iter().map(|&t| y.levels[t].clone()).collect();
    let tbonds: Vec<Vec<Vec<usize>>> = (0..m - 1)
        .map(|i| {
            (0..cat.num_objects())
                .map(|o| (0..tlevels[i + 1].count(o)).map(|v| y.project(theta[i], theta[i + 1], o, v)).collect())
                .collect()
        })
        .collect();
    let stationary = x.stationary && inconclusive_from.is_none();
    let source = DSetTower::from_presheaves(levels, xbonds, stationary)?;
    let target = DSetTower::from_presheaves(tlevels, tbonds, stationary)?;
    let map = DSetTowerMap::new(source, target, incl)?;
    let verdict = match inconclusive_from {
        None => Verdict::Yes,
        Some(_) if x.stationary => Verdict::No,
        Some(_) => Verdict::Inconclusive,
    };
    Ok(NormalReindex { verdict, theta, targets, inconclusive_from, map })
}

fn compose_bonds(t: &DSetTower, i: usize, j: usize) -> Result<PresheafMap> {
    let mut m = PresheafMap::identity(t.levels[j].clone());
    for k in (i..j).rev() {
        m = t.bonds[k].after(&m)?;
    }
    Ok(m)
}
