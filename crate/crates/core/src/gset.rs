//! Finite groups, finite right G-sets, and finite prefixes of towers of
//! G-sets standing in for profinite G-sets.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{DendroError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Element 0 must be the identity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        let bad = |m: &str| Err(DendroError::NotAGroup(m.to_string()));
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return bad("table is not square over the elements");
        }
        if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
            return bad("element 0 is not the identity");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) => inverse[a] = b,
                None => return bad("missing inverse"),
            }
        }
        Ok(FiniteGroup { table, inverse })
    }

    /// The group generated by permutations, with `(p q)(i) = p(q(i))`.
    /// Elements are sorted, so the identity comes first.
    pub fn from_permutations(gens: &[Vec<usize>], degree: usize) -> (FiniteGroup, Vec<Vec<usize>>) {
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id]);
        let mut frontier: Vec<Vec<usize>> = seen.iter().cloned().collect();
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q: Vec<usize> = g.iter().map(|&i| p[i]).collect();
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = elems
            .iter()
            .map(|p| elems.iter().map(|q| index[&q.iter().map(|&i| p[i]).collect::<Vec<_>>()]).collect())
            .collect();
        (FiniteGroup::from_table(table).expect("permutations form a group"), elems)
    }

    pub fn cyclic(k: usize) -> FiniteGroup {
        let k = k.max(1);
        FiniteGroup::from_table((0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect()).unwrap()
    }

    pub fn symmetric(k: usize) -> FiniteGroup {
        let gens: Vec<Vec<usize>> = (0..k.saturating_sub(1))
            .map(|i| {
                let mut p: Vec<usize> = (0..k).collect();
                p.swap(i, i + 1);
                p
            })
            .collect();
        FiniteGroup::from_permutations(&gens, k).0
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "table": self.table })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FiniteGroup> {
        let table = serde_json::from_value(v["table"].clone()).map_err(|e| DendroError::Malformed(e.to_string()))?;
        FiniteGroup::from_table(table)
    }

    /// Subgroups up to conjugacy, as sorted element lists.
    pub fn subgroup_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut subgroups: BTreeSet<Vec<usize>> = BTreeSet::new();
        // adjoin one element at a time; reaches every subgroup
        let mut stack = vec![vec![0usize]];
        while let Some(s) = stack.pop() {
            if !subgroups.insert(s.clone()) {
                continue;
            }
            for g in 0..n {
                if !s.contains(&g) {
                    stack.push(self.closure(&s, g));
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for h in subgroups {
            let conj = |h: &[usize], g: usize| -> Vec<usize> {
                let mut c: Vec<usize> = h.iter().map(|&x| self.mul(self.mul(self.inv(g), x), g)).collect();
                c.sort_unstable();
                c
            };
            if !classes.iter().any(|k| k.len() == h.len() && (0..n).any(|g| conj(k, g) == h)) {
                classes.push(h);
            }
        }
        classes.sort_by_key(|h| std::cmp::Reverse(h.len()));
        classes
    }

    fn closure(&self, s: &[usize], g: usize) -> Vec<usize> {
        let mut set: BTreeSet<usize> = s.iter().copied().collect();
        set.insert(g);
        loop {
            let cur: Vec<usize> = set.iter().copied().collect();
            let before = set.len();
            for &a in &cur {
                for &b in &cur {
                    set.insert(self.mul(a, b));
                }
            }
            if set.len() == before {
                return set.into_iter().collect();
            }
        }
    }
}

/// A finite set with a right action, `act[x][g] = x·g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGSet {
    group: Arc<FiniteGroup>,
    act: Vec<Vec<usize>>,
}

impl FiniteGSet {
    pub fn new(group: Arc<FiniteGroup>, act: Vec<Vec<usize>>) -> Result<FiniteGSet> {
        let n = act.len();
        let bad = |m: String| Err(DendroError::NotAnAction(m));
        for (x, row) in act.iter().enumerate() {
            if row.len() != group.order() || row.iter().any(|&y| y >= n) {
                return bad(format!("row {x} has the wrong shape"));
            }
            if row[0] != x {
                return bad(format!("identity moves {x}"));
            }
            for g in 0..group.order() {
                for h in 0..group.order() {
                    if act[row[g]][h] != row[group.mul(g, h)] {
                        return bad(format!("(x·g)·h ≠ x·(gh) at x={x}, g={g}, h={h}"));
                    }
                }
            }
        }
        Ok(FiniteGSet { group, act })
    }

    pub fn empty(group: Arc<FiniteGroup>) -> FiniteGSet {
        FiniteGSet { group, act: Vec::new() }
    }

    /// The point with trivial action.
    pub fn point(group: Arc<FiniteGroup>) -> FiniteGSet {
        let k = group.order();
        FiniteGSet { group, act: vec![vec![0; k]] }
    }

    /// `G` acting on itself from the right.
    pub fn regular(group: Arc<FiniteGroup>) -> FiniteGSet {
        let act = group.table().to_vec();
        FiniteGSet { group, act }
    }

    /// Right cosets `Hg` of a subgroup.
    pub fn cosets(group: Arc<FiniteGroup>, sub: &[usize]) -> FiniteGSet {
        let n = group.order();
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut which = vec![usize::MAX; n];
        for g in 0..n {
            if which[g] == usize::MAX {
                let mut c: Vec<usize> = sub.iter().map(|&h| group.mul(h, g)).collect();
                c.sort_unstable();
                for &x in &c {
                    which[x] = cosets.len();
                }
                cosets.push(c);
            }
        }
        let act = cosets.iter().map(|c| (0..n).map(|k| which[group.mul(c[0], k)]).collect()).collect();
        FiniteGSet { group, act }
    }

    /// `2^G`: functions `G → {0,1}` as bitmasks, `(φ·g)(k) = φ(gk)`.
    pub fn power_of_two(group: Arc<FiniteGroup>) -> FiniteGSet {
        let n = group.order();
        let act = (0..1usize << n)
            .map(|phi| {
                (0..n)
                    .map(|g| (0..n).filter(|&k| phi >> group.mul(g, k) & 1 == 1).fold(0, |acc, k| acc | 1 << k))
                    .collect()
            })
            .collect();
        FiniteGSet { group, act }
    }

    pub fn coproduct(&self, other: &FiniteGSet) -> FiniteGSet {
        let off = self.len();
        let mut act = self.act.clone();
        act.extend(other.act.iter().map(|r| r.iter().map(|&y| y + off).collect()));
        FiniteGSet { group: self.group.clone(), act }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.act.len()
    }

    pub fn is_empty(&self) -> bool {
        self.act.is_empty()
    }

    pub fn act(&self, x: usize, g: usize) -> usize {
        self.act[x][g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.act
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group().order()).filter(|&g| self.act[x][g] == x).collect()
    }

    /// Orbits, each listed from its least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for x in 0..self.len() {
            if !seen[x] {
                let orbit: BTreeSet<usize> = self.act[x].iter().copied().collect();
                for &y in &orbit {
                    seen[y] = true;
                }
                out.push(orbit.into_iter().collect());
            }
        }
        out
    }
}

pub fn is_free(x: &FiniteGSet) -> bool {
    (0..x.len()).all(|y| x.stabilizer(y).len() == 1)
}

/// All G-sets with at most `max_size` elements, up to isomorphism.
pub fn gsets_upto(group: &Arc<FiniteGroup>, max_size: usize) -> Vec<FiniteGSet> {
    let types: Vec<FiniteGSet> =
        group.subgroup_classes().iter().map(|h| FiniteGSet::cosets(group.clone(), h)).collect();
    let mut out = Vec::new();
    fn go(types: &[FiniteGSet], from: usize, cur: FiniteGSet, room: usize, out: &mut Vec<FiniteGSet>) {
        out.push(cur.clone());
        for (i, t) in types.iter().enumerate().skip(from) {
            if t.len() <= room {
                go(types, i, cur.coproduct(t), room - t.len(), out);
            }
        }
    }
    go(&types, 0, FiniteGSet::empty(group.clone()), max_size, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMap {
    pub source: FiniteGSet,
    pub target: FiniteGSet,
    pub map: Vec<usize>,
}

impl GMap {
    pub fn new(source: FiniteGSet, target: FiniteGSet, map: Vec<usize>) -> Result<GMap> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(DendroError::ShapeMismatch("map does not fit its source and target".into()));
        }
        for x in 0..source.len() {
            for g in 0..source.group().order() {
                if map[source.act(x, g)] != target.act(map[x], g) {
                    return Err(DendroError::NotEquivariant(format!("at x={x}, g={g}")));
                }
            }
        }
        Ok(GMap { source, target, map })
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// Stabilizers are trivial outside the image.
pub fn free_on_complement(f: &GMap) -> bool {
    let mut hit = vec![false; f.target.len()];
    for &y in &f.map {
        hit[y] = true;
    }
    (0..f.target.len()).all(|y| hit[y] || f.target.stabilizer(y).len() == 1)
}

/// All equivariant maps `x → y`: a value on each orbit representative
/// whose stabilizer contains the representative's.
pub fn equivariant_maps(x: &FiniteGSet, y: &FiniteGSet) -> Vec<Vec<usize>> {
    let reps: Vec<usize> = x.orbits().iter().map(|o| o[0]).collect();
    let options: Vec<Vec<usize>> = reps
        .iter()
        .map(|&r| {
            let st = x.stabilizer(r);
            (0..y.len()).filter(|&w| st.iter().all(|&g| y.act(w, g) == w)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; reps.len()];
    if options.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let mut map = vec![0; x.len()];
        for (i, &r) in reps.iter().enumerate() {
            let w = options[i][choice[i]];
            for g in 0..x.group().order() {
                map[x.act(r, g)] = y.act(w, g);
            }
        }
        out.push(map);
        let mut i = 0;
        loop {
            if i == reps.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Solves every square from `f` to `p` by brute force over orbit
/// representatives of the target of `f`.
pub fn has_llp(f: &GMap, p: &GMap) -> bool {
    let tops = equivariant_maps(&f.source, &p.source);
    let bottoms = equivariant_maps(&f.target, &p.target);
    for v in &bottoms {
        for u in &tops {
            let commutes = (0..f.source.len()).all(|x| p.map[u[x]] == v[f.map[x]]);
            if commutes && !has_lift(f, p, u, v) {
                return false;
            }
        }
    }
    true
}

fn has_lift(f: &GMap, p: &GMap, u: &[usize], v: &[usize]) -> bool {
    let y = &f.target;
    let e = &p.source;
    let k = y.group().order();
    let reps: Vec<usize> = y.orbits().iter().map(|o| o[0]).collect();
    // forced values along the image of f
    let mut forced: Vec<Option<usize>> = vec![None; y.len()];
    for x in 0..f.source.len() {
        let t = f.map[x];
        match forced[t] {
            Some(w) if w != u[x] => return false,
            _ => forced[t] = Some(u[x]),
        }
    }
    reps.iter().all(|&r| {
        let st = y.stabilizer(r);
        (0..e.len()).any(|w| {
            p.map[w] == v[r]
                && st.iter().all(|&g| e.act(w, g) == w)
                && (0..k).all(|g| forced[y.act(r, g)].is_none_or(|fw| fw == e.act(w, g)))
        })
    })
}

/// `2^G ⊔ G → * ⊔ *`.
pub fn llp_generator(group: &Arc<FiniteGroup>) -> GMap {
    let two = FiniteGSet::power_of_two(group.clone());
    let reg = FiniteGSet::regular(group.clone());
    let src = two.coproduct(&reg);
    let pts = FiniteGSet::point(group.clone()).coproduct(&FiniteGSet::point(group.clone()));
    let map = (0..src.len()).map(|i| usize::from(i >= two.len())).collect();
    GMap::new(src, pts, map).expect("constant maps are equivariant")
}

pub fn has_llp_generator(f: &GMap) -> bool {
    has_llp(f, &llp_generator(f.source.group()))
}

/// Three-valued answer for properties of a whole tower seen through a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

/// `levels[0] ← levels[1] ← …`; `bonds[i]: levels[i+1] → levels[i]`.
/// A stationary tower repeats its last level forever with identity bonds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSetTower {
    pub levels: Vec<FiniteGSet>,
    pub bonds: Vec<Vec<usize>>,
    pub stationary: bool,
}

impl GSetTower {
    pub fn new(levels: Vec<FiniteGSet>, bonds: Vec<Vec<usize>>, stationary: bool) -> Result<GSetTower> {
        if levels.is_empty() || bonds.len() + 1 != levels.len() {
            return Err(DendroError::ShapeMismatch("need one bond between consecutive levels".into()));
        }
        for (i, b) in bonds.iter().enumerate() {
            GMap::new(levels[i + 1].clone(), levels[i].clone(), b.clone())?;
        }
        Ok(GSetTower { levels, bonds, stationary })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `π_{ij}: X_j → X_i` for `i ≤ j`.
    pub fn project(&self, i: usize, j: usize, x: usize) -> usize {
        (i..j).rev().fold(x, |x, k| self.bonds[k][x])
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "levels": self.levels.iter().map(|l| l.table()).collect::<Vec<_>>(),
            "bonds": self.bonds,
            "stationary": self.stationary,
        })
    }

    pub fn from_json(group: &Arc<FiniteGroup>, v: &serde_json::Value) -> Result<GSetTower> {
        let bad = |e: serde_json::Error| DendroError::Malformed(e.to_string());
        let levels: Vec<Vec<Vec<usize>>> = serde_json::from_value(v["levels"].clone()).map_err(bad)?;
        let bonds: Vec<Vec<usize>> = serde_json::from_value(v["bonds"].clone()).map_err(bad)?;
        let levels = levels.into_iter().map(|a| FiniteGSet::new(group.clone(), a)).collect::<Result<_>>()?;
        GSetTower::new(levels, bonds, v["stationary"].as_bool().unwrap_or(false))
    }
}

/// Levelwise equivariant maps commuting with the bonds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerMap {
    pub source: GSetTower,
    pub target: GSetTower,
    pub maps: Vec<Vec<usize>>,
}

impl TowerMap {
    pub fn new(source: GSetTower, target: GSetTower, maps: Vec<Vec<usize>>) -> Result<TowerMap> {
        if source.len() != target.len() || maps.len() != source.len() || source.stationary != target.stationary {
            return Err(DendroError::ShapeMismatch("towers of different shape".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            GMap::new(source.levels[i].clone(), target.levels[i].clone(), m.clone())?;
        }
        for i in 0..source.bonds.len() {
            for x in 0..source.levels[i + 1].len() {
                if maps[i][source.bonds[i][x]] != target.bonds[i][maps[i + 1][x]] {
                    return Err(DendroError::NotCommutative(format!("level {i}, element {x}")));
                }
            }
        }
        Ok(TowerMap { source, target, maps })
    }

    pub fn level(&self, i: usize) -> GMap {
        GMap { source: self.source.levels[i].clone(), target: self.target.levels[i].clone(), map: self.maps[i].clone() }
    }

    pub fn is_levelwise_injective(&self) -> bool {
        (0..self.maps.len()).all(|i| self.level(i).is_injective())
    }

    pub fn to_json(&self, group: &FiniteGroup) -> serde_json::Value {
        serde_json::json!({
            "group": group.to_json(),
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "maps": self.maps,
        })
    }

    /// Reads `{group, source, target, maps}`.
    pub fn from_json(v: &serde_json::Value) -> Result<TowerMap> {
        let group = Arc::new(FiniteGroup::from_json(&v["group"])?);
        let source = GSetTower::from_json(&group, &v["source"])?;
        let target = GSetTower::from_json(&group, &v["target"])?;
        let maps = serde_json::from_value(v["maps"].clone()).map_err(|e| DendroError::Malformed(e.to_string()))?;
        TowerMap::new(source, target, maps)
    }
}

/// Whether level `j` separates, at level `i`, points that `f_j` merges.
fn mono_witness(f: &TowerMap, i: usize, j: usize) -> bool {
    let x = &f.source;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    (0..x.levels[j].len()).all(|a| {
        let below = x.project(i, j, a);
        *seen.entry(f.maps[j][a]).or_insert(below) == below
    })
}

/// Least `j ≥ i` in the prefix with the property, or `None`.
fn least_witness(f: &TowerMap, i: usize, from: usize, pred: impl Fn(&TowerMap, usize, usize) -> bool) -> Option<usize> {
    (from.max(i)..f.source.len()).find(|&j| pred(f, i, j))
}

/// Whether the limit map is a monomorphism: every level is eventually
/// separated. Without a witness the answer is only definite for
/// stationary towers.
pub fn tower_is_mono(f: &TowerMap) -> Verdict {
    for i in 0..f.source.len() {
        if least_witness(f, i, i, mono_witness).is_none() {
            return if f.source.stationary { Verdict::No } else { Verdict::Inconclusive };
        }
    }
    Verdict::Yes
}

/// `X'_i = im(f_i)` with the corestriction `ρ_i: X_i → X'_i`.
#[derive(Debug, Clone)]
pub struct InjectiveReindex {
    pub verdict: Verdict,
    pub map: TowerMap,
    /// `ρ_i` by level.
    pub rho: Vec<Vec<usize>>,
    /// `X'_i` as a sorted subset of `Y_i`.
    pub images: Vec<Vec<usize>>,
}

pub fn reindex_to_injective(f: &TowerMap) -> Result<InjectiveReindex> {
    let y = &f.target;
    let mut images = Vec::with_capacity(f.maps.len());
    let mut levels = Vec::new();
    let mut rho = Vec::new();
    for (i, m) in f.maps.iter().enumerate() {
        let im: Vec<usize> = m.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let pos: HashMap<usize, usize> = im.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let act = im.iter().map(|&v| y.levels[i].table()[v].iter().map(|w| pos[w]).collect()).collect();
        levels.push(FiniteGSet::new(y.levels[i].group().clone(), act)?);
        rho.push(m.iter().map(|v| pos[v]).collect());
        images.push(im);
    }
    let bonds = (0..y.bonds.len())
        .map(|i| images[i + 1].iter().map(|&v| images[i].binary_search(&y.bonds[i][v]).unwrap()).collect())
        .collect();
    let source = GSetTower::new(levels, bonds, y.stationary)?;
    let maps = images.clone();
    Ok(InjectiveReindex { verdict: tower_is_mono(f), map: TowerMap::new(source, y.clone(), maps)?, rho, images })
}

/// Fixed points of non-identity elements at level `j` project into the
/// image at level `i`.
fn complement_witness(f: &TowerMap, i: usize, j: usize) -> bool {
    let y = &f.target;
    let mut hit = vec![false; y.levels[i].len()];
    for &v in &f.maps[i] {
        hit[v] = true;
    }
    let yj = &y.levels[j];
    (0..yj.len()).all(|v| yj.stabilizer(v).len() == 1 || hit[y.project(i, j, v)])
}

/// The pullback reindexing `X'_i = X_i ×_{Y_i} Y_{θ(i)}`.
#[derive(Debug, Clone)]
pub struct FreeComplementReindex {
    pub verdict: Verdict,
    /// Least nondecreasing choice with `θ(i) ≥ i`.
    pub theta: Vec<usize>,
    /// Output levels stop here when no witness fits in the prefix.
    pub inconclusive_from: Option<usize>,
    pub map: TowerMap,
    /// Pullback elements `(x, y)` by level.
    pub pairs: Vec<Vec<(usize, usize)>>,
    /// `ξ_i: X_{θ(i)} → X'_i`.
    pub xi: Vec<Vec<usize>>,
}

pub fn reindex_free_complement(f: &TowerMap) -> Result<FreeComplementReindex> {
    if !f.is_levelwise_injective() {
        return Err(DendroError::ShapeMismatch("expected a levelwise injective map".into()));
    }
    let (x, y) = (&f.source, &f.target);
    let mut theta = Vec::new();
    let mut inconclusive_from = None;
    for i in 0..x.len() {
        let from = theta.last().copied().unwrap_or(0);
        match least_witness(f, i, from, complement_witness) {
            Some(j) => theta.push(j),
            None => {
                inconclusive_from = Some(i);
                break;
            }
        }
    }
    if theta.is_empty() {
        return Err(DendroError::NoWitness("level 0 has no witness in the prefix".into()));
    }
    let group = y.levels[0].group().clone();
    let mut pairs = Vec::new();
    let mut levels = Vec::new();
    let mut tlevels = Vec::new();
    for (i, &t) in theta.iter().enumerate() {
        let mut ps: Vec<(usize, usize)> = Vec::new();
        for v in 0..y.levels[t].len() {
            let below = y.project(i, t, v);
            if let Some(a) = f.maps[i].iter().position(|&w| w == below) {
                ps.push((a, v));
            }
        }
        let pos: HashMap<(usize, usize), usize> = ps.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let act =
            ps.iter().map(|&(a, v)| (0..group.order()).map(|g| pos[&(x.levels[i].act(a, g), y.levels[t].act(v, g))]).collect()).collect();
        levels.push(FiniteGSet::new(group.clone(), act)?);
        tlevels.push(y.levels[t].clone());
        pairs.push(ps);
    }
    let m = theta.len();
    let bonds: Vec<Vec<usize>> = (0..m - 1)
        .map(|i| {
            pairs[i + 1]
                .iter()
                .map(|&(a, v)| {
                    let p = (x.bonds[i][a], y.project(theta[i], theta[i + 1], v));
                    pairs[i].iter().position(|&q| q == p).unwrap()
                })
                .collect()
        })
        .collect();
    let tbonds: Vec<Vec<usize>> =
        (0..m - 1).map(|i| (0..tlevels[i + 1].len()).map(|v| y.project(theta[i], theta[i + 1], v)).collect()).collect();
    let stationary = x.stationary && inconclusive_from.is_none();
    let source = GSetTower::new(levels, bonds, stationary)?;
    let target = GSetTower::new(tlevels, tbonds, stationary)?;
    let maps = pairs.iter().map(|ps| ps.iter().map(|&(_, v)| v).collect()).collect();
    let xi = theta
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            (0..x.levels[t].len())
                .map(|a| {
                    let p = (x.project(i, t, a), f.maps[t][a]);
                    pairs[i].iter().position(|&q| q == p).unwrap()
                })
                .collect()
        })
        .collect();
    let verdict = match inconclusive_from {
        None => Verdict::Yes,
        Some(_) if x.stationary => Verdict::No,
        Some(_) => Verdict::Inconclusive,
    };
    Ok(FreeComplementReindex { verdict, theta, inconclusive_from, map: TowerMap::new(source, target, maps)?, pairs, xi })
}

/// A random G-set with at most `max_size` elements.
pub fn random_gset<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>, max_size: usize) -> FiniteGSet {
    let all = gsets_upto(group, max_size);
    all[rng.gen_range(0..all.len())].clone()
}

/// A random tower map with `levels` levels; retries until bonds exist.
pub fn random_tower_map<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>, levels: usize, max_size: usize) -> TowerMap {
    let pool = gsets_upto(group, max_size);
    let pick = |rng: &mut R| pool[rng.gen_range(0..pool.len())].clone();
    'retry: loop {
        let mut ys = vec![pick(rng)];
        let mut xs = vec![pick(rng)];
        let fs0 = equivariant_maps(&xs[0], &ys[0]);
        if fs0.is_empty() {
            continue;
        }
        let mut maps = vec![fs0[rng.gen_range(0..fs0.len())].clone()];
        let (mut ybonds, mut xbonds) = (Vec::new(), Vec::new());
        for i in 0..levels - 1 {
            let mut ok = false;
            for _ in 0..20 {
                let (yn, xn) = (pick(rng), pick(rng));
                let yb = equivariant_maps(&yn, &ys[i]);
                let fs = equivariant_maps(&xn, &yn);
                let xb = equivariant_maps(&xn, &xs[i]);
                if yb.is_empty() || fs.is_empty() || xb.is_empty() {
                    continue;
                }
                let yb = yb[rng.gen_range(0..yb.len())].clone();
                let fnext = fs[rng.gen_range(0..fs.len())].clone();
                let fits: Vec<&Vec<usize>> =
                    xb.iter().filter(|b| (0..xn.len()).all(|a| maps[i][b[a]] == yb[fnext[a]])).collect();
                if fits.is_empty() {
                    continue;
                }
                xbonds.push(fits[rng.gen_range(0..fits.len())].clone());
                ybonds.push(yb);
                maps.push(fnext);
                ys.push(yn);
                xs.push(xn);
                ok = true;
                break;
            }
            if !ok {
                continue 'retry;
            }
        }
        let stationary = rng.gen_bool(0.5);
        let x = GSetTower::new(xs, xbonds, stationary).expect("bonds are equivariant");
        let y = GSetTower::new(ys, ybonds, stationary).expect("bonds are equivariant");
        return TowerMap::new(x, y, maps).expect("squares commute");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(k: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(k))
    }

    #[test]
    fn groups() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(3).subgroup_classes().len(), 4);
        assert_eq!(FiniteGroup::cyclic(4).subgroup_classes().len(), 3);
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn freeness() {
        let g = c(3);
        assert!(is_free(&FiniteGSet::regular(g.clone())));
        assert!(!is_free(&FiniteGSet::point(g.clone())));
        let two = FiniteGSet::power_of_two(g.clone());
        assert_eq!(two.orbits().len(), 4);
        let reg = FiniteGSet::regular(g.clone());
        assert!(is_free(&reg.coproduct(&reg)));
    }

    #[test]
    fn gset_counts() {
        // C_2: sizes ≤ 4 are a·1 + b·2 with a + 2b ≤ 4
        assert_eq!(gsets_upto(&c(2), 4).len(), 9);
        assert_eq!(gsets_upto(&c(3), 4).len(), 7);
    }

    #[test]
    fn llp_examples() {
        let g = c(2);
        let e = FiniteGSet::empty(g.clone());
        let reg = FiniteGSet::regular(g.clone());
        let pt = FiniteGSet::point(g.clone());
        assert!(has_llp_generator(&GMap::new(reg.clone(), reg.clone(), vec![0, 1]).unwrap()));
        assert!(has_llp_generator(&GMap::new(e.clone(), reg, vec![]).unwrap()));
        assert!(!has_llp_generator(&GMap::new(e, pt.clone(), vec![]).unwrap()));
        let two = pt.coproduct(&pt);
        assert!(!has_llp_generator(&GMap::new(two, pt, vec![0, 0]).unwrap()));
    }

    #[test]
    fn stationary_non_injective_is_not_mono() {
        let g = c(2);
        let pt = FiniteGSet::point(g.clone());
        let x = GSetTower::new(vec![pt.coproduct(&pt)], vec![], true).unwrap();
        let y = GSetTower::new(vec![pt], vec![], true).unwrap();
        let f = TowerMap::new(x.clone(), y.clone(), vec![vec![0, 0]]).unwrap();
        assert_eq!(tower_is_mono(&f), Verdict::No);
        let f = TowerMap::new(
            GSetTower { stationary: false, ..x },
            GSetTower { stationary: false, ..y },
            vec![vec![0, 0]],
        )
        .unwrap();
        assert_eq!(tower_is_mono(&f), Verdict::Inconclusive);
    }
}
