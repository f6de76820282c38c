//! Enumeration and random sampling of small presheaves and maps.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::Rng;

use crate::category::TreeCategory;
use crate::nat::NatSearch;
use crate::presheaf::{FinitePresheaf, PresheafMap};

/// Relations `g ∘ h = k` and `g ∘ h = id` among generators, used to prune.
fn generator_relations(cat: &TreeCategory) -> Vec<(usize, usize, Option<usize>)> {
    let gens = cat.generators();
    let pos: BTreeMap<usize, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut out = Vec::new();
    for (gi, &g) in gens.iter().enumerate() {
        for (hi, &h) in gens.iter().enumerate() {
            let Some(c) = cat.compose(g, h) else { continue };
            let ar = cat.arrow(c);
            if ar.src == ar.tgt && cat.identity(ar.src) == c {
                out.push((gi, hi, None));
            } else if let Some(&k) = pos.get(&c) {
                out.push((gi, hi, Some(k)));
            }
        }
    }
    out
}

/// Every presheaf with at most `max_per_object` elements per tree, up to
/// isomorphism, in a deterministic order.
pub fn small_presheaves(cat: &Arc<TreeCategory>, max_per_object: usize) -> Vec<Arc<FinitePresheaf>> {
    let gens = cat.generators().to_vec();
    let rels = generator_relations(cat);
    let nobj = cat.num_objects();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut sizes = vec![0usize; nobj];
    loop {
        let mut tables: Vec<Vec<usize>> = gens.iter().map(|&g| vec![0; sizes[cat.arrow(g).tgt]]).collect();
        assign(cat, &gens, &rels, &sizes, 0, &mut tables, &mut |tables| {
            let map: BTreeMap<usize, Vec<usize>> = gens.iter().copied().zip(tables.iter().cloned()).collect();
            if let Ok(x) = FinitePresheaf::from_generators(cat.clone(), sizes.clone(), &map) {
                if seen.insert(canonical_form(&x)) {
                    out.push(Arc::new(x));
                }
            }
        });
        let mut i = 0;
        loop {
            if i == nobj {
                return out;
            }
            sizes[i] += 1;
            if sizes[i] <= max_per_object {
                break;
            }
            sizes[i] = 0;
            i += 1;
        }
    }
}

fn assign(
    cat: &TreeCategory,
    gens: &[usize],
    rels: &[(usize, usize, Option<usize>)],
    sizes: &[usize],
    k: usize,
    tables: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[Vec<usize>]),
) {
    if k == gens.len() {
        emit(tables);
        return;
    }
    let ar = cat.arrow(gens[k]);
    let (dom, cod) = (sizes[ar.tgt], sizes[ar.src]);
    if dom > 0 && cod == 0 {
        return;
    }
    let total = cod.pow(dom as u32);
    for mut code in 0..total.max(1) {
        for y in 0..dom {
            tables[k][y] = code % cod;
            code /= cod;
        }
        if consistent(rels, k, tables) {
            assign(cat, gens, rels, sizes, k + 1, tables, emit);
        }
    }
}

/// Relations whose generators are all among the first `k + 1`.
fn consistent(rels: &[(usize, usize, Option<usize>)], k: usize, t: &[Vec<usize>]) -> bool {
    rels.iter().all(|&(g, h, c)| {
        if g > k || h > k || c.is_some_and(|c| c > k) {
            return true;
        }
        // X(g ∘ h) = X(h) ∘ X(g)
        let dom = t[g].len();
        (0..dom).all(|y| {
            let lhs = t[h][t[g][y]];
            match c {
                Some(c) => lhs == t[c][y],
                None => lhs == y,
            }
        })
    })
}

/// Least action table over all relabelings of the elements of each object.
pub fn canonical_form(x: &FinitePresheaf) -> (Vec<usize>, Vec<Vec<usize>>) {
    let cat = x.cat();
    let perms: Vec<Vec<Vec<usize>>> = (0..cat.num_objects()).map(|o| permutations(x.count(o))).collect();
    let mut choice = vec![0usize; perms.len()];
    let mut best: Option<Vec<Vec<usize>>> = None;
    loop {
        let table: Vec<Vec<usize>> = cat
            .generators()
            .iter()
            .map(|&g| {
                let ar = cat.arrow(g);
                let (pt, ps) = (&perms[ar.tgt][choice[ar.tgt]], &perms[ar.src][choice[ar.src]]);
                let mut row = vec![0; x.count(ar.tgt)];
                for y in 0..x.count(ar.tgt) {
                    row[pt[y]] = ps[x.act(g, y)];
                }
                row
            })
            .collect();
        if best.as_ref().is_none_or(|b| table < *b) {
            best = Some(table);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return (x.sets().to_vec(), best.unwrap());
            }
            choice[i] += 1;
            if choice[i] < perms[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out
}

/// All maps `x → y`.
pub fn all_maps(x: &Arc<FinitePresheaf>, y: &Arc<FinitePresheaf>) -> Vec<PresheafMap> {
    NatSearch::new(x, y)
        .all()
        .into_iter()
        .map(|c| PresheafMap::new_unchecked(x.clone(), y.clone(), c).expect("search output is natural"))
        .collect()
}

/// A random presheaf from the small family.
pub fn random_small_presheaf<R: Rng>(rng: &mut R, family: &[Arc<FinitePresheaf>]) -> Arc<FinitePresheaf> {
    family[rng.gen_range(0..family.len())].clone()
}
