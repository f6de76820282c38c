//! The associative operad on closed trees: linear orders, matching
//! families, and its closed nerve.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::TreeCategory;
use crate::error::{DendroError, Result};
use crate::lean::coskeleton_unit;
use crate::lifting::horn_family;
use crate::nat::NatSearch;
use crate::presheaf::{boundary, horn, FinitePresheaf, PresheafMap};
use crate::tree::{Flavor, Tree};

/// All linear orders on `0..n`, each listed from first to last, in
/// lexicographic order.
pub fn ass_operations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    go(n, &mut cur, &mut used, &mut out);
    out
}

fn restrict_order(order: &[usize], subset: u32) -> Vec<usize> {
    order.iter().copied().filter(|&v| subset >> v & 1 == 1).collect()
}

/// A compatible family of orders on the proper subsets of `0..n`, indexed
/// by subset bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchingFamily {
    pub arity: usize,
    pub orders: Vec<Vec<usize>>,
}

impl MatchingFamily {
    pub fn is_coherent(&self) -> bool {
        let full = (1u32 << self.arity) - 1;
        (0..full).all(|u| {
            (0..self.arity).all(|i| u >> i & 1 == 0 || self.orders[(u & !(1 << i)) as usize] == restrict_order(&self.orders[u as usize], u & !(1 << i)))
        })
    }
}

/// All matching families for arity `n ≥ 1`. Subsets are visited in
/// increasing bitmask order, so every subset of `U` is decided before `U`.
pub fn matching_object_ass(n: usize) -> Result<Vec<MatchingFamily>> {
    if n == 0 || n > 16 {
        return Err(DendroError::ShapeMismatch(format!("arity {n} outside 1..=16")));
    }
    let full = (1u32 << n) - 1;
    let mut orders: Vec<Vec<usize>> = vec![Vec::new(); full as usize];
    let mut out = Vec::new();
    fn go(u: u32, full: u32, n: usize, orders: &mut Vec<Vec<usize>>, out: &mut Vec<MatchingFamily>) {
        if u == full {
            out.push(MatchingFamily { arity: n, orders: orders.clone() });
            return;
        }
        let elems: Vec<usize> = (0..n).filter(|&i| u >> i & 1 == 1).collect();
        let candidates = permutations_of(&elems);
        for c in candidates {
            if elems.iter().all(|&i| orders[(u & !(1 << i)) as usize] == restrict_order(&c, u & !(1 << i))) {
                orders[u as usize] = c;
                go(u + 1, full, n, orders, out);
            }
        }
    }
    go(0, full, n, &mut orders, &mut out);
    Ok(out)
}

fn permutations_of(elems: &[usize]) -> Vec<Vec<usize>> {
    ass_operations(elems.len()).into_iter().map(|p| p.iter().map(|&i| elems[i]).collect()).collect()
}

/// Sends each order to its family of restrictions.
pub fn matching_map_ass(n: usize) -> Result<Vec<usize>> {
    let families = matching_object_ass(n)?;
    let index: HashMap<&MatchingFamily, usize> = families.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let full = (1u32 << n) - 1;
    Ok(ass_operations(n)
        .iter()
        .map(|o| {
            let fam = MatchingFamily { arity: n, orders: (0..full).map(|u| restrict_order(o, u)).collect() };
            index[&fam]
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingReport {
    pub arity: usize,
    pub operations: usize,
    pub families: usize,
    pub image: usize,
    pub injective: bool,
    pub surjective: bool,
}

pub fn matching_report(n: usize) -> Result<MatchingReport> {
    let map = matching_map_ass(n)?;
    let families = matching_object_ass(n)?.len();
    let mut image = map.clone();
    image.sort_unstable();
    image.dedup();
    Ok(MatchingReport {
        arity: n,
        operations: map.len(),
        families,
        image: image.len(),
        injective: image.len() == map.len(),
        surjective: image.len() == families,
    })
}

/// One order per vertex, indexed in mixed radix over vertices by edge id.
struct NerveCells {
    radix: Vec<(usize, Vec<Vec<usize>>)>,
}

impl NerveCells {
    fn new(t: &Tree) -> NerveCells {
        NerveCells { radix: t.vertices().map(|v| (v, ass_operations(t.inputs(v).unwrap().len()))).collect() }
    }

    fn count(&self) -> usize {
        self.radix.iter().map(|(_, os)| os.len()).product()
    }

    fn decode(&self, mut i: usize, edges: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); edges];
        for (v, os) in &self.radix {
            out[*v] = os[i % os.len()].clone();
            i /= os.len();
        }
        out
    }

    fn encode(&self, orders: &[Vec<usize>]) -> usize {
        let mut i = 0;
        for (v, os) in self.radix.iter().rev() {
            i = i * os.len() + os.iter().position(|o| *o == orders[*v]).unwrap();
        }
        i
    }
}

/// Targets in the order met when reading the operations of `t` from `e` upward;
/// branches that end in stumps contribute nothing.
fn read_order(t: &Tree, orders: &[Vec<usize>], e: usize, targets: &[usize], out: &mut Vec<usize>) {
    if let Some(k) = targets.iter().position(|&b| b == e) {
        out.push(k);
        return;
    }
    if let Some(ins) = t.inputs(e) {
        for &slot in &orders[e] {
            read_order(t, orders, ins[slot], targets, out);
        }
    }
}

/// `N_cl(Ass)` on closed trees of size ≤ `n`.
pub fn closed_nerve_ass(n: usize) -> FinitePresheaf {
    let cat = TreeCategory::get(Flavor::Closed, n);
    let cells: Vec<NerveCells> = cat.objects().iter().map(NerveCells::new).collect();
    let sets = cells.iter().map(NerveCells::count).collect();
    FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        let ar = cat.arrow(a);
        let (s, t) = (cat.object(ar.src), cat.object(ar.tgt));
        let orders = cells[ar.tgt].decode(y, t.num_edges());
        let mut pulled = vec![Vec::new(); s.num_edges()];
        for w in s.vertices() {
            let ins = s.inputs(w).unwrap();
            if ins.len() == 1 && ar.map[ins[0]] == ar.map[w] {
                pulled[w] = vec![0];
                continue;
            }
            let targets: Vec<usize> = ins.iter().map(|&b| ar.map[b]).collect();
            let mut seen = Vec::with_capacity(targets.len());
            if let Some(top) = t.inputs(ar.map[w]) {
                for &slot in &orders[ar.map[w]] {
                    read_order(t, &orders, top[slot], &targets, &mut seen);
                }
            }
            pulled[w] = seen;
        }
        cells[ar.src].encode(&pulled)
    })
}

pub fn closed_boundary(t: &Tree, n: usize) -> Result<PresheafMap> {
    if t.flavor() != Flavor::Closed {
        return Err(DendroError::FlavorMismatch { expected: Flavor::Closed, found: t.flavor() });
    }
    Ok(boundary(t, n))
}

pub fn very_inner_horn(t: &Tree, e: usize, n: usize) -> Result<PresheafMap> {
    if t.flavor() != Flavor::Closed {
        return Err(DendroError::FlavorMismatch { expected: Flavor::Closed, found: t.flavor() });
    }
    horn(t, e, n)
}

/// Least `m ≤ n` with `x → cosk_m x` an isomorphism on trees of size ≤ `n`.
pub fn coskeletal_degree_search(x: &Arc<FinitePresheaf>, n: usize) -> Result<Option<usize>> {
    let x = if x.truncation() == n { x.clone() } else { Arc::new(x.restrict(n)?) };
    for m in 0..=n {
        if coskeleton_unit(&x, m)?.is_iso() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Every map `A → X` extends along the mono `i: A → B` in exactly one way.
pub fn has_unique_fillers(x: &FinitePresheaf, i: &PresheafMap) -> bool {
    let (a, b) = (i.source(), i.target());
    let mut ok = true;
    NatSearch::new(a, x).for_each(|top| {
        let mut lifts = NatSearch::new(b, x);
        for o in 0..a.cat().num_objects() {
            for e in 0..a.count(o) {
                lifts.fix(o, i.apply(o, e), top[o][e]);
            }
        }
        ok = lifts.count() == 1;
        ok
    });
    ok
}

pub fn has_unique_very_inner_fillers(x: &FinitePresheaf, m: usize) -> Result<bool> {
    let cat = x.cat();
    if m > cat.max_size() {
        return Err(DendroError::TruncationTooSmall { have: cat.max_size(), need: m });
    }
    Ok(horn_family(Flavor::Closed, cat.max_size(), m).iter().all(|h| has_unique_fillers(x, h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_counts() {
        let mut f = 1;
        for n in 0..=7 {
            if n > 0 {
                f *= n;
            }
            assert_eq!(ass_operations(n).len(), f);
        }
    }

    #[test]
    fn matching_counts() {
        let r = |n| matching_report(n).unwrap();
        assert_eq!((r(1).families, r(2).families), (1, 1));
        assert_eq!((r(3).families, r(3).image, r(3).injective), (8, 6, true));
        for n in 4..=6 {
            assert!(r(n).injective && r(n).surjective, "{n}");
        }
        for n in 1..=5 {
            assert!(matching_object_ass(n).unwrap().iter().all(MatchingFamily::is_coherent));
        }
    }

    #[test]
    fn nerve_small_values() {
        let x = closed_nerve_ass(5);
        x.check_functorial_full().unwrap();
        let cat = x.cat();
        let c0 = cat.index_of(&Tree::corolla(0).with_flavor(Flavor::Closed).unwrap().key()).unwrap();
        assert_eq!(x.count(c0), 1);
        let c2 = cat.index_of(&Tree::corolla(2).closure().key()).unwrap();
        assert_eq!(x.count(c2), 2);
    }

    use crate::presheaf::representable;

    fn cl(s: &str) -> Tree {
        crate::tree::parse_term(s, Flavor::Closed).unwrap()
    }

    #[test]
    fn nerve_is_normal_with_unique_fillers() {
        let x = Arc::new(closed_nerve_ass(5));
        assert!(crate::normality::is_normal_upto(&x, 5));
        assert!(has_unique_very_inner_fillers(&x, 5).unwrap());
        let m = coskeletal_degree_search(&x, 5).unwrap();
        assert!(m.is_some_and(|m| m <= 5));
    }

    #[test]
    fn coskeletal_degrees() {
        let t = Arc::new(FinitePresheaf::terminal(TreeCategory::get(Flavor::Closed, 5)));
        assert_eq!(coskeletal_degree_search(&t, 5).unwrap(), Some(0));
        // C̄_2 has no map to C_0, but its boundary does
        let c0 = representable(&cl("[]"), 5);
        assert_eq!(coskeletal_degree_search(&c0, 5).unwrap(), Some(5));
        assert!(!coskeleton_unit(&c0, 4).unwrap().is_iso());
        let c2 = representable(&cl("[[][]]"), 5);
        assert_eq!(coskeletal_degree_search(&c2, 5).unwrap(), Some(5));
    }

    #[test]
    fn nerve_coskeletal_degree_stabilizes() {
        let x = Arc::new(closed_nerve_ass(9));
        x.check_functorial().unwrap();
        assert_eq!(coskeletal_degree_search(&x, 9).unwrap(), Some(7));
    }

    #[test]
    fn closed_boundaries_and_horns() {
        let c0 = TreeCategory::get(Flavor::Closed, 5).object(0).clone();
        assert_eq!(c0.size(), 1);
        assert!(closed_boundary(&c0, 5).unwrap().source().is_empty());
        let c2 = Tree::corolla(2).closure();
        let b = closed_boundary(&c2, 5).unwrap();
        let stumps = b.cat().objects().iter().position(|t| t.size() == 1).unwrap();
        assert!(b.source().total() > b.source().count(stumps));
        let below_stump = cl("[[]]");
        assert!(very_inner_horn(&below_stump, 1, 5).is_err());
        assert!(very_inner_horn(&cl("[[[]]]"), 1, 5).is_ok());
        assert!(closed_boundary(&Tree::corolla(2), 5).is_err());
    }
}
