//! The finite full subcategory Ω_(N) of trees of size ≤ N, with every
//! hom-set precomputed between canonical representatives.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::morphism::{elementary_maps, find_iso, hom_maps_raw, vertex_image, ElementaryKind, OmegaMorphism};
use crate::tree::{enumerate_trees, parse_term, Flavor, Tree, TreeKey};

/// A morphism between stored objects, by object index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
    pub map: Vec<usize>,
}

#[derive(Debug)]
pub struct TreeCategory {
    flavor: Flavor,
    max_size: usize,
    objects: Vec<Tree>,
    keys: Vec<TreeKey>,
    index: HashMap<TreeKey, usize>,
    arrows: Vec<Arrow>,
    hom: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
    identity: Vec<usize>,
    automorphisms: Vec<Vec<usize>>,
    faces: Vec<Vec<(ElementaryKind, usize)>>,
    degeneracies: Vec<Vec<(usize, usize)>>,
    generators: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CachedHoms {
    flavor: Flavor,
    max_size: usize,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
}

static CACHE: OnceLock<Mutex<HashMap<(Flavor, usize), Arc<TreeCategory>>>> = OnceLock::new();

impl TreeCategory {
    /// Shared instance for `(flavor, max_size)`, built on first use.
    pub fn get(flavor: Flavor, max_size: usize) -> Arc<TreeCategory> {
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(c) = cache.lock().unwrap().get(&(flavor, max_size)) {
            return c.clone();
        }
        let built = Arc::new(TreeCategory::build(flavor, max_size));
        cache.lock().unwrap().entry((flavor, max_size)).or_insert(built).clone()
    }

    fn disk_path(flavor: Flavor, max_size: usize) -> Option<PathBuf> {
        let dir = std::env::var_os("DENDRO_CACHE_DIR")?;
        Some(PathBuf::from(dir).join(format!("omega-{flavor}-{max_size}.json")))
    }

    fn build(flavor: Flavor, max_size: usize) -> TreeCategory {
        let objects = enumerate_trees(max_size, flavor);
        let arrows = Self::load_arrows(flavor, max_size, &objects).unwrap_or_else(|| {
            let arrows = Self::compute_arrows(&objects);
            if let Some(path) = Self::disk_path(flavor, max_size) {
                let blob = CachedHoms {
                    flavor,
                    max_size,
                    objects: objects.iter().map(Tree::presentation).collect(),
                    arrows: arrows.clone(),
                };
                // the cache is an optimisation only; failures to write are ignored
                if let Ok(text) = serde_json::to_string(&blob) {
                    let _ = std::fs::create_dir_all(path.parent().unwrap());
                    let _ = std::fs::write(&path, text);
                }
            }
            arrows
        });
        Self::assemble(flavor, max_size, objects, arrows)
    }

    fn load_arrows(flavor: Flavor, max_size: usize, objects: &[Tree]) -> Option<Vec<Arrow>> {
        let text = std::fs::read_to_string(Self::disk_path(flavor, max_size)?).ok()?;
        let blob: CachedHoms = serde_json::from_str(&text).ok()?;
        let same = blob.flavor == flavor
            && blob.max_size == max_size
            && blob.objects.len() == objects.len()
            && blob.objects.iter().zip(objects).all(|(p, t)| parse_term(p, flavor).ok().as_ref() == Some(t));
        same.then_some(blob.arrows)
    }

    fn compute_arrows(objects: &[Tree]) -> Vec<Arrow> {
        let n = objects.len();
        let per_pair: Vec<Vec<Arrow>> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (s, t) = (k / n, k % n);
                hom_maps_raw(&objects[s], &objects[t]).into_iter().map(|map| Arrow { src: s, tgt: t, map }).collect()
            })
            .collect();
        per_pair.into_iter().flatten().collect()
    }

    fn assemble(flavor: Flavor, max_size: usize, objects: Vec<Tree>, arrows: Vec<Arrow>) -> TreeCategory {
        let n = objects.len();
        let keys: Vec<TreeKey> = objects.iter().map(Tree::key).collect();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut hom = vec![vec![Vec::new(); n]; n];
        let mut lookup = vec![HashMap::new(); n * n];
        for (id, a) in arrows.iter().enumerate() {
            hom[a.src][a.tgt].push(id);
            lookup[a.src * n + a.tgt].insert(a.map.clone(), id);
        }
        let mut cat = TreeCategory {
            flavor,
            max_size,
            objects,
            keys,
            index,
            arrows,
            hom,
            lookup,
            identity: Vec::new(),
            automorphisms: Vec::new(),
            faces: vec![Vec::new(); n],
            degeneracies: vec![Vec::new(); n],
            generators: Vec::new(),
        };
        cat.identity = (0..n).map(|o| cat.find_arrow(o, o, &(0..cat.objects[o].num_edges()).collect::<Vec<_>>()).unwrap()).collect();
        cat.automorphisms = (0..n)
            .map(|o| cat.hom[o][o].iter().copied().filter(|&a| cat.is_iso(a)).collect())
            .collect();
        for t in 0..n {
            for (kind, m) in elementary_maps(&cat.objects[t]) {
                if kind.is_face() {
                    let (s, to_canon) = cat.locate(&m.source).expect("faces shrink");
                    let mut inv = vec![0; to_canon.len()];
                    for (e, &c) in to_canon.iter().enumerate() {
                        inv[c] = e;
                    }
                    let map: Vec<usize> = inv.iter().map(|&e| m.edge_map[e]).collect();
                    let id = cat.find_arrow(s, t, &map).expect("face is a morphism");
                    cat.faces[t].push((kind, id));
                } else {
                    let (s, to_canon) = cat.locate(&m.target).expect("degeneracies shrink");
                    let map: Vec<usize> = m.edge_map.iter().map(|&e| to_canon[e]).collect();
                    let sigma = cat.find_arrow(t, s, &map).expect("degeneracy is a morphism");
                    let id_s = cat.identity[s];
                    let section = cat.hom[s][t]
                        .iter()
                        .copied()
                        .find(|&sec| cat.compose(sigma, sec) == Some(id_s))
                        .expect("degeneracies split");
                    cat.degeneracies[t].push((sigma, section));
                }
            }
        }
        let mut gens: Vec<usize> = cat.faces.iter().flatten().map(|&(_, a)| a).collect();
        gens.extend(cat.degeneracies.iter().flatten().map(|&(d, _)| d));
        gens.extend(cat.automorphisms.iter().flatten().copied().filter(|&a| a != cat.identity[cat.arrows[a].src]));
        gens.sort_unstable();
        gens.dedup();
        cat.generators = gens;
        cat
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[Tree] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &Tree {
        &self.objects[i]
    }

    pub fn key(&self, i: usize) -> &TreeKey {
        &self.keys[i]
    }

    pub fn size(&self, i: usize) -> usize {
        self.objects[i].size()
    }

    pub fn index_of(&self, key: &TreeKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Stored representative of `t` and an isomorphism `t → rep` as an edge map.
    pub fn locate(&self, t: &Tree) -> Option<(usize, Vec<usize>)> {
        let i = self.index_of(&t.key())?;
        Some((i, find_iso(t, &self.objects[i])?))
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn hom(&self, s: usize, t: usize) -> &[usize] {
        &self.hom[s][t]
    }

    pub fn find_arrow(&self, s: usize, t: usize, map: &[usize]) -> Option<usize> {
        self.lookup[s * self.objects.len() + t].get(map).copied()
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    /// `g ∘ f`, or `None` when the arrows are not composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let (fa, ga) = (&self.arrows[f], &self.arrows[g]);
        if fa.tgt != ga.src {
            return None;
        }
        let map: Vec<usize> = fa.map.iter().map(|&e| ga.map[e]).collect();
        self.find_arrow(fa.src, ga.tgt, &map)
    }

    pub fn automorphisms(&self, o: usize) -> &[usize] {
        &self.automorphisms[o]
    }

    /// Elementary faces into `o` (sources replaced by their representatives).
    pub fn faces(&self, o: usize) -> &[(ElementaryKind, usize)] {
        &self.faces[o]
    }

    /// Elementary degeneracies out of `o`, each with a chosen section.
    pub fn degeneracies(&self, o: usize) -> &[(usize, usize)] {
        &self.degeneracies[o]
    }

    /// Faces, degeneracies and non-identity automorphisms; every arrow is a
    /// composite of these.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_injective(&self, a: usize) -> bool {
        let m = &self.arrows[a].map;
        let mut seen = 0u64;
        m.iter().all(|&e| {
            let fresh = seen & (1 << e) == 0;
            seen |= 1 << e;
            fresh
        })
    }

    pub fn is_surjective(&self, a: usize) -> bool {
        let ar = &self.arrows[a];
        let hit = ar.map.iter().fold(0u64, |m, &e| m | (1 << e));
        hit.count_ones() as usize == self.objects[ar.tgt].num_edges()
    }

    pub fn is_iso(&self, a: usize) -> bool {
        self.arrows[a].src == self.arrows[a].tgt && self.is_injective(a)
    }

    pub fn is_split_epi(&self, a: usize) -> bool {
        let ar = &self.arrows[a];
        let t = &self.objects[ar.tgt];
        self.is_surjective(a)
            && vertex_image(&self.objects[ar.src], t, &ar.map) == t.vertices().fold(0u64, |m, v| m | (1 << v))
    }

    pub fn morphism(&self, a: usize) -> OmegaMorphism {
        let ar = &self.arrows[a];
        OmegaMorphism {
            source: self.objects[ar.src].clone(),
            target: self.objects[ar.tgt].clone(),
            edge_map: ar.map.clone(),
        }
    }

    /// Objects of size ≤ `n`, which form an initial segment of the object list.
    pub fn objects_upto(&self, n: usize) -> usize {
        self.objects.iter().take_while(|t| t.size() <= n).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_and_composition() {
        let cat = TreeCategory::get(Flavor::General, 4);
        for o in 0..cat.num_objects() {
            let id = cat.identity(o);
            for &a in cat.hom(o, o) {
                assert_eq!(cat.compose(a, id), Some(a));
                assert_eq!(cat.compose(id, a), Some(a));
            }
        }
        for a in 0..cat.num_arrows() {
            let ar = cat.arrow(a);
            for t in 0..cat.num_objects() {
                for &b in cat.hom(ar.tgt, t) {
                    assert!(cat.compose(b, a).is_some());
                }
            }
        }
    }

    #[test]
    fn sections_split() {
        let cat = TreeCategory::get(Flavor::Open, 5);
        for o in 0..cat.num_objects() {
            for &(d, s) in cat.degeneracies(o) {
                assert_eq!(cat.compose(d, s), Some(cat.identity(cat.arrow(d).tgt)));
                assert!(cat.is_surjective(d) && !cat.is_iso(d));
            }
        }
    }

    #[test]
    fn counts_are_stable() {
        let cat = TreeCategory::get(Flavor::General, 3);
        assert_eq!(cat.num_objects(), 5);
        assert_eq!(cat.objects_upto(1), 2);
        assert_eq!(cat.automorphisms(3).len(), 2);
        let closed = TreeCategory::get(Flavor::Closed, 0);
        assert_eq!(closed.num_objects(), 0);
    }
}
