//! Finite presheaves on Ω_(N) and natural maps between them.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::category::TreeCategory;
use crate::error::{DendroError, Result};
use crate::morphism::{check_edge_map, elementary_maps, hom_maps_raw, vertex_image};
use crate::tree::{parse_term, Flavor, Tree};

/// A presheaf on Ω_(N) with finite values. `actions[a][y]` is the restriction
/// of `y ∈ X_tgt(a)` along arrow `a`.
#[derive(Debug, Clone)]
pub struct FinitePresheaf {
    cat: Arc<TreeCategory>,
    sets: Vec<usize>,
    actions: Vec<Vec<usize>>,
}

impl PartialEq for FinitePresheaf {
    fn eq(&self, other: &Self) -> bool {
        self.flavor() == other.flavor()
            && self.truncation() == other.truncation()
            && self.sets == other.sets
            && self.actions == other.actions
    }
}

impl Eq for FinitePresheaf {}

impl FinitePresheaf {
    /// Builds and checks functoriality.
    pub fn new(cat: Arc<TreeCategory>, sets: Vec<usize>, actions: Vec<Vec<usize>>) -> Result<Self> {
        let x = Self::new_unchecked(cat, sets, actions)?;
        x.check_functorial()?;
        Ok(x)
    }

    /// Only shapes are checked.
    pub fn new_unchecked(cat: Arc<TreeCategory>, sets: Vec<usize>, actions: Vec<Vec<usize>>) -> Result<Self> {
        if sets.len() != cat.num_objects() || actions.len() != cat.num_arrows() {
            return Err(DendroError::ShapeMismatch(format!(
                "expected {} sets and {} actions, got {} and {}",
                cat.num_objects(),
                cat.num_arrows(),
                sets.len(),
                actions.len()
            )));
        }
        for (a, act) in actions.iter().enumerate() {
            let ar = cat.arrow(a);
            if act.len() != sets[ar.tgt] || act.iter().any(|&x| x >= sets[ar.src]) {
                return Err(DendroError::ShapeMismatch(format!("action of arrow {a} has the wrong shape")));
            }
        }
        Ok(FinitePresheaf { cat, sets, actions })
    }

    /// Tabulates `act(arrow, y)` for every arrow.
    pub fn from_fn(cat: Arc<TreeCategory>, sets: Vec<usize>, act: impl Fn(usize, usize) -> usize) -> Self {
        let actions = (0..cat.num_arrows()).map(|a| (0..sets[cat.arrow(a).tgt]).map(|y| act(a, y)).collect()).collect();
        FinitePresheaf { cat, sets, actions }
    }

    /// Extends actions given on the generating arrows to all arrows, then
    /// checks functoriality.
    pub fn from_generators(cat: Arc<TreeCategory>, sets: Vec<usize>, gens: &BTreeMap<usize, Vec<usize>>) -> Result<Self> {
        let n = cat.num_arrows();
        let mut actions: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut queue = VecDeque::new();
        for o in 0..cat.num_objects() {
            let id = cat.identity(o);
            actions[id] = Some((0..sets[o]).collect());
            queue.push_back(id);
        }
        let mut gens_from = vec![Vec::new(); cat.num_objects()];
        for &g in cat.generators() {
            let act = gens.get(&g).ok_or_else(|| DendroError::Malformed(format!("missing action for generator {g}")))?;
            let ar = cat.arrow(g);
            if act.len() != sets[ar.tgt] || act.iter().any(|&x| x >= sets[ar.src]) {
                return Err(DendroError::ShapeMismatch(format!("action of generator {g} has the wrong shape")));
            }
            gens_from[ar.src].push(g);
        }
        while let Some(b) = queue.pop_front() {
            let mid = cat.arrow(b).tgt;
            for &g in &gens_from[mid] {
                let c = cat.compose(g, b).expect("composable");
                if actions[c].is_none() {
                    let (xb, xg) = (actions[b].as_ref().unwrap(), &gens[&g]);
                    actions[c] = Some(xg.iter().map(|&y| xb[y]).collect());
                    queue.push_back(c);
                }
            }
        }
        let actions = actions.into_iter().map(|a| a.expect("generators generate")).collect();
        FinitePresheaf::new(cat, sets, actions)
    }

    pub fn empty(cat: Arc<TreeCategory>) -> Self {
        let sets = vec![0; cat.num_objects()];
        FinitePresheaf::from_fn(cat, sets, |_, _| unreachable!())
    }

    pub fn terminal(cat: Arc<TreeCategory>) -> Self {
        let sets = vec![1; cat.num_objects()];
        FinitePresheaf::from_fn(cat, sets, |_, _| 0)
    }

    pub fn cat(&self) -> &Arc<TreeCategory> {
        &self.cat
    }

    pub fn flavor(&self) -> Flavor {
        self.cat.flavor()
    }

    pub fn truncation(&self) -> usize {
        self.cat.max_size()
    }

    pub fn sets(&self) -> &[usize] {
        &self.sets
    }

    pub fn count(&self, o: usize) -> usize {
        self.sets[o]
    }

    pub fn total(&self) -> usize {
        self.sets.iter().sum()
    }

    pub fn action(&self, a: usize) -> &[usize] {
        &self.actions[a]
    }

    pub fn act(&self, a: usize, y: usize) -> usize {
        self.actions[a][y]
    }

    pub fn is_empty(&self) -> bool {
        self.sets.iter().all(|&s| s == 0)
    }

    /// Identities act trivially and `X(g∘f) = X(f)∘X(g)` for every generator
    /// `g`; since generators generate, this covers all composable pairs.
    pub fn check_functorial(&self) -> Result<()> {
        let cat = &self.cat;
        for o in 0..cat.num_objects() {
            if self.actions[cat.identity(o)].iter().enumerate().any(|(i, &x)| i != x) {
                return Err(DendroError::NotFunctorial(format!("identity of {} acts nontrivially", cat.object(o))));
            }
        }
        for &g in cat.generators() {
            self.check_pairs_with(g)?;
        }
        Ok(())
    }

    /// The same check over every composable pair.
    pub fn check_functorial_full(&self) -> Result<()> {
        self.check_functorial()?;
        for g in 0..self.cat.num_arrows() {
            self.check_pairs_with(g)?;
        }
        Ok(())
    }

    fn check_pairs_with(&self, g: usize) -> Result<()> {
        let cat = &self.cat;
        let mid = cat.arrow(g).src;
        for s in 0..cat.num_objects() {
            for &f in cat.hom(s, mid) {
                let gf = cat.compose(g, f).expect("composable");
                let (xf, xg, xgf) = (&self.actions[f], &self.actions[g], &self.actions[gf]);
                if (0..xgf.len()).any(|y| xgf[y] != xf[xg[y]]) {
                    return Err(DendroError::NotFunctorial(format!(
                        "arrows {f} then {g} ({} -> {} -> {})",
                        cat.object(s),
                        cat.object(mid),
                        cat.object(cat.arrow(g).tgt)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Restriction to Ω_(n), `n ≤ N`.
    pub fn restrict(&self, n: usize) -> Result<FinitePresheaf> {
        if n > self.truncation() {
            return Err(DendroError::TruncationTooSmall { have: self.truncation(), need: n });
        }
        let small = TreeCategory::get(self.flavor(), n);
        let ids = arrow_embedding(&small, &self.cat);
        let k = small.num_objects();
        Ok(FinitePresheaf {
            sets: self.sets[..k].to_vec(),
            actions: ids.iter().map(|&a| self.actions[a].clone()).collect(),
            cat: small,
        })
    }

    pub fn to_json(&self) -> Value {
        let cat = &self.cat;
        let mut sets = serde_json::Map::new();
        for o in 0..cat.num_objects() {
            sets.insert(cat.key(o).canon.clone(), json!(self.sets[o]));
        }
        let mut actions = serde_json::Map::new();
        for a in 0..cat.num_arrows() {
            actions.insert(arrow_id(cat, a), json!(self.actions[a]));
        }
        json!({
            "flavor": self.flavor(),
            "truncation": self.truncation(),
            "sets": sets,
            "actions": actions,
        })
    }

    /// Reads the format written by [`FinitePresheaf::to_json`]. Actions may be
    /// given for the generating arrows only.
    pub fn from_json(v: &Value) -> Result<FinitePresheaf> {
        let bad = |m: &str| DendroError::Malformed(m.to_string());
        let flavor: Flavor = serde_json::from_value(v["flavor"].clone()).map_err(|e| bad(&e.to_string()))?;
        let n = v["truncation"].as_u64().ok_or_else(|| bad("missing truncation"))? as usize;
        let cat = TreeCategory::get(flavor, n);
        let sets_v = v["sets"].as_object().ok_or_else(|| bad("missing sets"))?;
        let mut sets = vec![0; cat.num_objects()];
        for (k, c) in sets_v {
            let t = parse_term(k, flavor)?;
            let o = cat.index_of(&t.key()).ok_or_else(|| bad(&format!("tree {k} outside the truncation")))?;
            sets[o] = c.as_u64().ok_or_else(|| bad("set sizes must be integers"))? as usize;
        }
        let mut given = BTreeMap::new();
        for (id, arr) in v["actions"].as_object().ok_or_else(|| bad("missing actions"))? {
            let a = parse_arrow_id(&cat, id)?;
            let table: Vec<usize> = serde_json::from_value(arr.clone()).map_err(|e| bad(&e.to_string()))?;
            given.insert(a, table);
        }
        let x = FinitePresheaf::from_generators(cat, sets, &given)?;
        for (a, table) in &given {
            if x.actions[*a] != *table {
                return Err(DendroError::NotFunctorial(format!("action of {} disagrees with the generators", arrow_id(&x.cat, *a))));
            }
        }
        Ok(x)
    }
}

/// `srckey|tgtkey|e0,e1,...` using the canonical terms of the stored objects.
pub fn arrow_id(cat: &TreeCategory, a: usize) -> String {
    let ar = cat.arrow(a);
    let map: Vec<String> = ar.map.iter().map(usize::to_string).collect();
    format!("{}|{}|{}", cat.key(ar.src), cat.key(ar.tgt), map.join(","))
}

pub fn parse_arrow_id(cat: &TreeCategory, id: &str) -> Result<usize> {
    let bad = || DendroError::Malformed(format!("bad morphism id `{id}`"));
    let parts: Vec<&str> = id.split('|').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let s = cat.index_of(&parse_term(parts[0], cat.flavor())?.key()).ok_or_else(bad)?;
    let t = cat.index_of(&parse_term(parts[1], cat.flavor())?.key()).ok_or_else(bad)?;
    let map: Vec<usize> = if parts[2].is_empty() {
        Vec::new()
    } else {
        parts[2].split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    cat.find_arrow(s, t, &map).ok_or_else(bad)
}

/// Arrow ids of `small` inside `big`; objects of `small` are an initial
/// segment of those of `big`.
pub fn arrow_embedding(small: &TreeCategory, big: &TreeCategory) -> Vec<usize> {
    (0..small.num_arrows())
        .map(|a| {
            let ar = small.arrow(a);
            big.find_arrow(ar.src, ar.tgt, &ar.map).expect("full subcategory")
        })
        .collect()
}

/// A natural transformation between presheaves on the same Ω_(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMap {
    source: Arc<FinitePresheaf>,
    target: Arc<FinitePresheaf>,
    comps: Vec<Vec<usize>>,
}

impl PresheafMap {
    pub fn new(source: Arc<FinitePresheaf>, target: Arc<FinitePresheaf>, comps: Vec<Vec<usize>>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, comps)?;
        f.check_natural()?;
        Ok(f)
    }

    pub fn new_unchecked(source: Arc<FinitePresheaf>, target: Arc<FinitePresheaf>, comps: Vec<Vec<usize>>) -> Result<Self> {
        if (source.flavor(), source.truncation()) != (target.flavor(), target.truncation()) {
            return Err(DendroError::ShapeMismatch("source and target live on different categories".into()));
        }
        if comps.len() != source.sets.len()
            || comps.iter().enumerate().any(|(o, c)| c.len() != source.sets[o] || c.iter().any(|&v| v >= target.sets[o]))
        {
            return Err(DendroError::ShapeMismatch("components do not match the presheaves".into()));
        }
        Ok(PresheafMap { source, target, comps })
    }

    pub fn identity(x: Arc<FinitePresheaf>) -> Self {
        let comps = x.sets.iter().map(|&n| (0..n).collect()).collect();
        PresheafMap { source: x.clone(), target: x, comps }
    }

    pub fn source(&self) -> &Arc<FinitePresheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePresheaf> {
        &self.target
    }

    pub fn comps(&self) -> &[Vec<usize>] {
        &self.comps
    }

    pub fn apply(&self, o: usize, x: usize) -> usize {
        self.comps[o][x]
    }

    pub fn cat(&self) -> &Arc<TreeCategory> {
        &self.source.cat
    }

    pub fn check_natural(&self) -> Result<()> {
        let cat = &self.source.cat;
        for &g in cat.generators() {
            let ar = cat.arrow(g);
            for y in 0..self.source.sets[ar.tgt] {
                if self.comps[ar.src][self.source.act(g, y)] != self.target.act(g, self.comps[ar.tgt][y]) {
                    return Err(DendroError::NotNatural(format!(
                        "square at {} -> {} fails on element {y}",
                        cat.object(ar.src),
                        cat.object(ar.tgt)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &PresheafMap) -> Result<PresheafMap> {
        if f.target.as_ref() != self.source.as_ref() {
            return Err(DendroError::NotComposable);
        }
        let comps = f.comps.iter().enumerate().map(|(o, c)| c.iter().map(|&x| self.comps[o][x]).collect()).collect();
        Ok(PresheafMap { source: f.source.clone(), target: self.target.clone(), comps })
    }

    pub fn is_mono(&self) -> bool {
        self.comps.iter().enumerate().all(|(o, c)| {
            let mut seen = vec![false; self.target.sets[o]];
            c.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    pub fn is_epi(&self) -> bool {
        self.comps.iter().enumerate().all(|(o, c)| {
            let mut seen = vec![false; self.target.sets[o]];
            for &v in c {
                seen[v] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Image membership in the target, per object.
    pub fn image_mask(&self) -> Vec<Vec<bool>> {
        self.comps
            .iter()
            .enumerate()
            .map(|(o, c)| {
                let mut m = vec![false; self.target.sets[o]];
                for &v in c {
                    m[v] = true;
                }
                m
            })
            .collect()
    }

    /// Restriction of both ends to Ω_(n).
    pub fn restrict(&self, n: usize) -> Result<PresheafMap> {
        let s = Arc::new(self.source.restrict(n)?);
        let t = Arc::new(self.target.restrict(n)?);
        let k = s.sets.len();
        Ok(PresheafMap { source: s, target: t, comps: self.comps[..k].to_vec() })
    }

    pub fn to_json(&self) -> Value {
        let cat = self.cat();
        let mut comps = serde_json::Map::new();
        for o in 0..cat.num_objects() {
            comps.insert(cat.key(o).canon.clone(), json!(self.comps[o]));
        }
        json!({"source": self.source.to_json(), "target": self.target.to_json(), "components": comps})
    }

    pub fn from_json(v: &Value) -> Result<PresheafMap> {
        let source = Arc::new(FinitePresheaf::from_json(&v["source"])?);
        let target = Arc::new(FinitePresheaf::from_json(&v["target"])?);
        let cat = source.cat.clone();
        let obj = v["components"].as_object().ok_or_else(|| DendroError::Malformed("missing components".into()))?;
        let mut comps = vec![Vec::new(); cat.num_objects()];
        for (k, c) in obj {
            let o = cat
                .index_of(&parse_term(k, cat.flavor())?.key())
                .ok_or_else(|| DendroError::Malformed(format!("tree {k} outside the truncation")))?;
            comps[o] = serde_json::from_value(c.clone()).map_err(|e| DendroError::Malformed(e.to_string()))?;
        }
        PresheafMap::new(source, target, comps)
    }
}

/// The subpresheaf of `x` on the marked elements, with its inclusion.
/// Elements keep their relative order.
pub fn subpresheaf(x: &Arc<FinitePresheaf>, keep: &[Vec<bool>]) -> Result<PresheafMap> {
    let cat = x.cat.clone();
    let mut pos = Vec::with_capacity(keep.len());
    let mut incl = Vec::with_capacity(keep.len());
    for k in keep {
        let mut p = vec![usize::MAX; k.len()];
        let mut inc = Vec::new();
        for (i, &b) in k.iter().enumerate() {
            if b {
                p[i] = inc.len();
                inc.push(i);
            }
        }
        pos.push(p);
        incl.push(inc);
    }
    for a in 0..cat.num_arrows() {
        let ar = cat.arrow(a);
        for &y in &incl[ar.tgt] {
            if !keep[ar.src][x.act(a, y)] {
                return Err(DendroError::NotFunctorial(format!(
                    "marked elements are not closed under {} -> {}",
                    cat.object(ar.src),
                    cat.object(ar.tgt)
                )));
            }
        }
    }
    let sets = incl.iter().map(Vec::len).collect();
    let sub = FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        let ar = cat.arrow(a);
        pos[ar.src][x.act(a, incl[ar.tgt][y])]
    });
    Ok(PresheafMap { source: Arc::new(sub), target: x.clone(), comps: incl })
}

/// Closure of the marked elements under all restrictions.
pub fn generated(x: &FinitePresheaf, seeds: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let cat = &x.cat;
    let mut keep = seeds.to_vec();
    for t in 0..cat.num_objects() {
        for y in 0..x.sets[t] {
            if !keep[t][y] {
                continue;
            }
            for s in 0..cat.num_objects() {
                for &a in cat.hom(s, t) {
                    keep[s][x.act(a, y)] = true;
                }
            }
        }
    }
    keep
}

/// Ω[t] on Ω_(N) together with the edge map of every element.
#[derive(Debug, Clone)]
pub struct Representable {
    pub tree: Tree,
    pub presheaf: Arc<FinitePresheaf>,
    pub maps: Vec<Vec<Vec<usize>>>,
}

impl Representable {
    pub fn new(t: &Tree, n: usize) -> Representable {
        let cat = TreeCategory::get(t.flavor(), n);
        Representable::on(t, cat)
    }

    pub fn on(t: &Tree, cat: Arc<TreeCategory>) -> Representable {
        let maps: Vec<Vec<Vec<usize>>> = (0..cat.num_objects()).map(|o| hom_maps_raw(cat.object(o), t)).collect();
        let sets = maps.iter().map(Vec::len).collect();
        let index: Vec<std::collections::HashMap<&Vec<usize>, usize>> =
            maps.iter().map(|ms| ms.iter().enumerate().map(|(i, m)| (m, i)).collect()).collect();
        let presheaf = FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
            let ar = cat.arrow(a);
            let alpha = &maps[ar.tgt][y];
            let comp: Vec<usize> = ar.map.iter().map(|&e| alpha[e]).collect();
            index[ar.src][&comp]
        });
        Representable { tree: t.clone(), presheaf: Arc::new(presheaf), maps }
    }

    /// Position of `α: S → t` with `S` a stored object.
    pub fn index_of(&self, o: usize, map: &[usize]) -> Option<usize> {
        self.maps[o].binary_search_by(|m| m.as_slice().cmp(map)).ok()
    }

    /// The identity, when `t` itself is a stored object in canonical form.
    pub fn identity_element(&self) -> Option<(usize, usize)> {
        let cat = self.presheaf.cat();
        let o = cat.index_of(&self.tree.key())?;
        if cat.object(o) != &self.tree {
            return None;
        }
        let id: Vec<usize> = (0..self.tree.num_edges()).collect();
        Some((o, self.index_of(o, &id)?))
    }

    fn sub_where(&self, pred: impl Fn(usize, &[usize]) -> bool) -> PresheafMap {
        let keep: Vec<Vec<bool>> = self.maps.iter().enumerate().map(|(o, ms)| ms.iter().map(|m| pred(o, m)).collect()).collect();
        subpresheaf(&self.presheaf, &keep).expect("sieve")
    }

    /// Elements factoring through one of the given monomorphisms into `t`.
    fn union_of_faces(&self, faces: &[(Tree, Vec<usize>)]) -> PresheafMap {
        let cat = self.presheaf.cat().clone();
        self.sub_where(|o, alpha| faces.iter().any(|(src, inj)| factors_through(cat.object(o), alpha, src, inj)))
    }
}

/// Whether `α: s → t` factors as `δ ∘ β` for the injective `δ: src → t`.
pub fn factors_through(s: &Tree, alpha: &[usize], src: &Tree, delta: &[usize]) -> bool {
    let mut inv = std::collections::HashMap::with_capacity(delta.len());
    for (i, &e) in delta.iter().enumerate() {
        inv.insert(e, i);
    }
    let Some(beta) = alpha.iter().map(|e| inv.get(e).copied()).collect::<Option<Vec<usize>>>() else {
        return false;
    };
    check_edge_map(s, src, &beta).is_ok()
}

pub fn representable(t: &Tree, n: usize) -> Arc<FinitePresheaf> {
    Representable::new(t, n).presheaf
}

/// `∂Ω[t] ↪ Ω[t]`: the elements that are not split epimorphisms.
pub fn boundary(t: &Tree, n: usize) -> PresheafMap {
    boundary_of(&Representable::new(t, n))
}

pub fn boundary_of(rep: &Representable) -> PresheafMap {
    let cat = rep.presheaf.cat().clone();
    let t = &rep.tree;
    let all_vertices = t.vertices().fold(0u64, |m, v| m | (1 << v));
    rep.sub_where(|o, alpha| {
        let hit = alpha.iter().fold(0u64, |m, &e| m | (1 << e));
        let surjective = hit.count_ones() as usize == t.num_edges();
        !(surjective && vertex_image(cat.object(o), t, alpha) == all_vertices)
    })
}

/// Union of the images of all elementary faces of `t` in its flavor.
pub fn face_union(t: &Tree, n: usize) -> PresheafMap {
    let rep = Representable::new(t, n);
    let faces: Vec<(Tree, Vec<usize>)> =
        elementary_maps(t).into_iter().filter(|(k, _)| k.is_face()).map(|(_, m)| (m.source, m.edge_map)).collect();
    rep.union_of_faces(&faces)
}

/// `Λ^e[t] ↪ Ω[t]`: union of the elementary faces that keep the inner edge `e`.
/// In the closed flavor `e` must also be very inner.
pub fn horn(t: &Tree, e: usize, n: usize) -> Result<PresheafMap> {
    if e >= t.num_edges() {
        return Err(DendroError::EdgeOutOfRange { edge: e, edges: t.num_edges() });
    }
    if !t.is_inner(e) {
        return Err(DendroError::NotInner(e));
    }
    if t.flavor() == Flavor::Closed && !t.is_very_inner(e) {
        return Err(DendroError::NotVeryInner(e));
    }
    let rep = Representable::new(t, n);
    let faces: Vec<(Tree, Vec<usize>)> = elementary_maps(t)
        .into_iter()
        .filter(|(k, m)| k.is_face() && m.edge_map.contains(&e))
        .map(|(_, m)| (m.source, m.edge_map))
        .collect();
    Ok(rep.union_of_faces(&faces))
}

/// Union of the corollas of `t`; for `η` the whole representable.
pub fn spine(t: &Tree, n: usize) -> PresheafMap {
    let rep = Representable::new(t, n);
    if t.num_vertices() == 0 {
        return PresheafMap::identity(rep.presheaf.clone());
    }
    let corollas: Vec<(Tree, Vec<usize>)> = t
        .vertices()
        .filter_map(|v| {
            let ins = t.inputs(v).unwrap();
            let c = Tree::corolla(ins.len()).with_flavor(t.flavor()).ok()?;
            let mut map = vec![v];
            map.extend_from_slice(ins);
            Some((c, map))
        })
        .collect();
    rep.union_of_faces(&corollas)
}

/// Whether `y ∈ X_o` lies in sk_n: it has size ≤ n or is a degeneracy of an
/// element that does.
pub fn in_skeleton(x: &FinitePresheaf, o: usize, y: usize, n: usize) -> bool {
    let cat = &x.cat;
    if cat.size(o) <= n {
        return true;
    }
    cat.degeneracies(o).iter().any(|&(sigma, section)| {
        let down = x.act(section, y);
        x.act(sigma, down) == y && in_skeleton(x, cat.arrow(sigma).tgt, down, n)
    })
}

/// `sk_n x ↪ x`.
pub fn skeleton(x: &Arc<FinitePresheaf>, n: usize) -> PresheafMap {
    let keep: Vec<Vec<bool>> =
        (0..x.cat.num_objects()).map(|o| (0..x.sets[o]).map(|y| in_skeleton(x, o, y, n)).collect()).collect();
    subpresheaf(x, &keep).expect("skeleta are subpresheaves")
}

/// Elements that are not degeneracies of smaller elements.
pub fn is_nondegenerate(x: &FinitePresheaf, o: usize, y: usize) -> bool {
    x.cat.degeneracies(o).iter().all(|&(sigma, section)| x.act(sigma, x.act(section, y)) != y)
}
