//! The edge-poset functor from simplicial sets, tensors with simplices,
//! simplicial hom levels, and a normal resolution of the point.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::category::TreeCategory;
use crate::error::{DendroError, Result};
use crate::lean::LeanObject;
use crate::lifting::has_lifting;
use crate::limits::{product, pushout, to_terminal};
use crate::nat::NatSearch;
use crate::normality::is_normal_upto;
use crate::presheaf::{boundary, representable, FinitePresheaf, PresheafMap};
use crate::simplicial::FiniteSimplicialSet;
use crate::tree::{tree_to_json, Flavor, Tree};

pub const DEFAULT_BUDGET: usize = 100_000;

/// Monotone maps from the edges of `t` (root largest) to `[k]`, as value
/// lists indexed by edge, in lexicographic order.
pub fn edge_maps(t: &Tree, k: usize) -> Vec<Vec<usize>> {
    let n = t.num_edges();
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn go(t: &Tree, e: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if e == cur.len() {
            out.push(cur.clone());
            return;
        }
        // edges are in preorder, so the parent is already set
        let hi = t.parent(e).map_or(k, |p| cur[p]);
        for v in 0..=hi {
            cur[e] = v;
            go(t, e + 1, k, cur, out);
        }
    }
    go(t, 0, k, &mut cur, &mut out);
    out
}

fn onto(s: &[usize], k: usize) -> bool {
    crate::simplicial::is_surjection(s, k)
}

/// A cell of `ℰ(M)` at a tree: a nondegenerate simplex `z ∈ M_k` and a
/// surjection from the edges onto `[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub dim: usize,
    pub simplex: usize,
    pub surjection: Vec<usize>,
}

/// `(z, f)` with `f` arbitrary monotone, reduced to its normal form.
fn reduce(m: &FiniteSimplicialSet, dim: usize, z: usize, f: &[usize]) -> EdgeLabel {
    let mut image: Vec<usize> = f.to_vec();
    image.sort_unstable();
    image.dedup();
    let g: Vec<usize> = f.iter().map(|v| image.binary_search(v).unwrap()).collect();
    let face = m.act(&image, dim, z);
    let (j, w, sigma) = m.normal_form(image.len() - 1, face);
    EdgeLabel { dim: j, simplex: w, surjection: g.iter().map(|&v| sigma[v]).collect() }
}

/// `ℰ(M)` truncated to `cat`, with the label of every element. `M` is read
/// as generated by its simplices up to its maximal dimension.
pub fn cal_e_labelled(m: &FiniteSimplicialSet, cat: &Arc<TreeCategory>) -> (FinitePresheaf, Vec<Vec<EdgeLabel>>) {
    let nondeg: Vec<Vec<usize>> = (0..=m.max_dim()).map(|k| m.nondegenerate(k)).collect();
    let labels: Vec<Vec<EdgeLabel>> = cat
        .objects()
        .iter()
        .map(|t| {
            let mut ls = Vec::new();
            for (k, zs) in nondeg.iter().enumerate().take(t.num_edges()) {
                let surj: Vec<Vec<usize>> = edge_maps(t, k).into_iter().filter(|s| onto(s, k)).collect();
                for &z in zs {
                    for s in &surj {
                        ls.push(EdgeLabel { dim: k, simplex: z, surjection: s.clone() });
                    }
                }
            }
            ls.sort();
            ls
        })
        .collect();
    let index: Vec<HashMap<&EdgeLabel, usize>> =
        labels.iter().map(|ls| ls.iter().enumerate().map(|(i, l)| (l, i)).collect()).collect();
    let sets = labels.iter().map(Vec::len).collect();
    let x = FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        let ar = cat.arrow(a);
        let l = &labels[ar.tgt][y];
        let f: Vec<usize> = ar.map.iter().map(|&e| l.surjection[e]).collect();
        index[ar.src][&reduce(m, l.dim, l.simplex, &f)]
    });
    (x, labels)
}

pub fn cal_e(m: &FiniteSimplicialSet, flavor: Flavor, n: usize) -> FinitePresheaf {
    cal_e_labelled(m, &TreeCategory::get(flavor, n)).0
}

/// `ℰ(Δ[k])` read off directly as all monotone edge maps into `[k]`.
pub fn cal_e_simplex(k: usize, flavor: Flavor, n: usize) -> FinitePresheaf {
    let cat = TreeCategory::get(flavor, n);
    let cells: Vec<Vec<Vec<usize>>> = cat.objects().iter().map(|t| edge_maps(t, k)).collect();
    let sets = cells.iter().map(Vec::len).collect();
    FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        let ar = cat.arrow(a);
        let f: Vec<usize> = ar.map.iter().map(|&e| cells[ar.tgt][y][e]).collect();
        cells[ar.src].binary_search(&f).expect("restriction of a monotone map is monotone")
    })
}

/// `ℰ(M)` built by gluing `ℰ(Δ[k])` along `ℰ(∂Δ[k])` for each nondegenerate
/// simplex in order of dimension.
pub fn cal_e_by_cells(m: &FiniteSimplicialSet, flavor: Flavor, n: usize) -> Result<(Arc<FinitePresheaf>, Vec<Vec<EdgeLabel>>)> {
    let cat = TreeCategory::get(flavor, n);
    let mut cur = Arc::new(FinitePresheaf::empty(cat.clone()));
    let mut labels: Vec<Vec<EdgeLabel>> = vec![Vec::new(); cat.num_objects()];
    for k in 0..=m.max_dim() {
        let cells: Vec<Vec<Vec<usize>>> = cat.objects().iter().map(|t| edge_maps(t, k)).collect();
        let simplex = Arc::new(cal_e_simplex(k, flavor, n));
        let keep: Vec<Vec<bool>> = cells.iter().map(|cs| cs.iter().map(|s| !onto(s, k)).collect()).collect();
        let incl = crate::presheaf::subpresheaf(&simplex, &keep)?;
        for z in m.nondegenerate(k) {
            let index: Vec<HashMap<&EdgeLabel, usize>> =
                labels.iter().map(|ls| ls.iter().enumerate().map(|(i, l)| (l, i)).collect()).collect();
            let attach: Vec<Vec<usize>> = (0..cat.num_objects())
                .map(|o| {
                    incl.comps()[o].iter().map(|&c| index[o][&reduce(m, k, z, &cells[o][c])]).collect()
                })
                .collect();
            let attach = PresheafMap::new_unchecked(incl.source().clone(), cur.clone(), attach)?;
            let (p, old, new) = pushout(&attach, &incl)?;
            let mut next = vec![Vec::new(); cat.num_objects()];
            for o in 0..cat.num_objects() {
                next[o] = vec![None; p.count(o)];
                for (i, l) in labels[o].iter().enumerate() {
                    next[o][old.apply(o, i)] = Some(l.clone());
                }
                for (c, s) in cells[o].iter().enumerate() {
                    let slot = &mut next[o][new.apply(o, c)];
                    if slot.is_none() {
                        *slot = Some(EdgeLabel { dim: k, simplex: z, surjection: s.clone() });
                    }
                }
            }
            labels = next.into_iter().map(|row| row.into_iter().map(|l| l.expect("pushout is jointly onto")).collect()).collect();
            cur = p;
        }
    }
    Ok((cur, labels))
}

/// `x ⊗ M ≅ x × ℰ(M)`.
pub fn tensor_simplicial(x: &Arc<FinitePresheaf>, m: &FiniteSimplicialSet) -> Result<Arc<FinitePresheaf>> {
    let e = Arc::new(cal_e(m, x.flavor(), x.truncation()));
    Ok(product(x, &e)?.0)
}

/// Maps `x ⊗ Δ[k] → y`, computed on trees up to the degree of `y`.
pub fn shom_level(x: &Arc<FinitePresheaf>, y: &LeanObject, k: usize) -> Result<Vec<PresheafMap>> {
    let n = y.degree();
    if x.flavor() != y.flavor() {
        return Err(DendroError::FlavorMismatch { expected: y.flavor(), found: x.flavor() });
    }
    if x.truncation() < n {
        return Err(DendroError::TruncationTooSmall { have: x.truncation(), need: n });
    }
    let x = if x.truncation() == n { x.clone() } else { Arc::new(x.restrict(n)?) };
    let src = tensor_simplicial(&x, &FiniteSimplicialSet::delta(k, k))?;
    let base = y.base();
    NatSearch::new(&src, base)
        .all()
        .into_iter()
        .map(|c| PresheafMap::new_unchecked(src.clone(), base.clone(), c))
        .collect()
}

/// One boundary map that was filled.
#[derive(Debug, Clone)]
pub struct GlueRecord {
    pub level: usize,
    pub tree: Tree,
    pub boundary_map: Vec<Vec<usize>>,
}

/// Levels `E^(0) → E^(1) → …` of the resolution, each on trees up to `bound`.
#[derive(Debug, Clone)]
pub struct EConstructionState {
    pub flavor: Flavor,
    pub bound: usize,
    pub budget: usize,
    pub levels: Vec<Arc<FinitePresheaf>>,
    pub bonds: Vec<PresheafMap>,
    pub glued: Vec<GlueRecord>,
    /// Level at which some tree would have exceeded the budget.
    pub exhausted_at: Option<usize>,
}

impl EConstructionState {
    pub fn level(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn top(&self) -> Arc<FinitePresheaf> {
        self.levels.last().cloned().unwrap_or_else(|| Arc::new(FinitePresheaf::empty(TreeCategory::get(self.flavor, self.bound))))
    }

    pub fn is_complete(&self) -> bool {
        self.exhausted_at.is_none() && self.levels.len() == self.bound + 1
    }

    /// Normal up to the bound.
    pub fn check_normal(&self) -> bool {
        is_normal_upto(&self.top(), self.bound)
    }

    /// Every boundary `∂Ω[t] → E` with `t` of size ≤ bound has a filler.
    pub fn check_fillers(&self) -> bool {
        let top = self.top();
        let cat = top.cat().clone();
        cat.objects().iter().all(|t| has_lifting(&boundary(t, self.bound), &to_terminal(&top)))
    }

    /// `E^(n) → E^(n+1)` is bijective on trees of size ≤ n.
    pub fn check_stability(&self) -> bool {
        self.bonds.iter().enumerate().all(|(n, b)| {
            let cat = b.cat();
            (0..cat.objects_upto(n)).all(|o| {
                let mut seen = vec![false; b.target().count(o)];
                b.source().count(o) == b.target().count(o) && b.comps()[o].iter().all(|&v| !std::mem::replace(&mut seen[v], true))
            })
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "flavor": self.flavor.name(),
            "bound": self.bound,
            "budget": self.budget,
            "level": self.level(),
            "exhausted_at": self.exhausted_at,
            "presheaf": self.top().to_json(),
            "glued": self.glued.iter().map(|g| json!({
                "level": g.level,
                "tree": tree_to_json(&g.tree),
                "boundary_map": g.boundary_map,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Glues `Ω[t]` along every map `∂Ω[t] → E^(n-1)` with `t` of size `n`,
/// for `n = 0..=bound`, starting from the empty presheaf.
pub fn build_e(flavor: Flavor, bound: usize, budget: usize) -> Result<EConstructionState> {
    let cat = TreeCategory::get(flavor, bound);
    let mut state = EConstructionState {
        flavor,
        bound,
        budget,
        levels: Vec::new(),
        bonds: Vec::new(),
        glued: Vec::new(),
        exhausted_at: None,
    };
    let mut cur = Arc::new(FinitePresheaf::empty(cat.clone()));
    for n in 0..=bound {
        let prev = cur.clone();
        let mut leg = PresheafMap::identity(prev.clone());
        for t in cat.objects().iter().filter(|t| t.size() == n) {
            let b = boundary(t, bound);
            for u in NatSearch::new(b.source(), &prev).all() {
                let u = PresheafMap::new_unchecked(b.source().clone(), prev.clone(), u)?;
                let (p, new_leg, _) = pushout(&leg.after(&u)?, &b)?;
                if p.sets().iter().any(|&c| c > budget) {
                    state.exhausted_at = Some(n);
                    return Ok(state);
                }
                leg = new_leg.after(&leg)?;
                state.glued.push(GlueRecord { level: n, tree: t.clone(), boundary_map: u.comps().to_vec() });
                cur = p;
            }
        }
        if n > 0 {
            state.bonds.push(leg);
        }
        state.levels.push(cur.clone());
    }
    Ok(state)
}

/// `x × E → x` with `E` built up to the truncation of `x`.
pub fn normalize(x: &Arc<FinitePresheaf>) -> Result<PresheafMap> {
    if x.is_empty() {
        return Ok(PresheafMap::identity(x.clone()));
    }
    let e = build_e(x.flavor(), x.truncation(), DEFAULT_BUDGET)?;
    if let Some(level) = e.exhausted_at {
        return Err(DendroError::BudgetExceeded { level, budget: DEFAULT_BUDGET });
    }
    Ok(product(x, &e.top())?.1)
}

/// The representable on `η` or, in the closed flavor, on the stump.
pub fn unit_representable(flavor: Flavor, n: usize) -> Arc<FinitePresheaf> {
    let t = if flavor == Flavor::Closed { Tree::corolla(0).closure() } else { Tree::eta() };
    representable(&t, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::FiniteSimplicialSet as S;

    fn iso(a: &FinitePresheaf, b: &FinitePresheaf) -> bool {
        a.sets() == b.sets()
            && NatSearch::new(a, b).all().into_iter().any(|c| c.iter().all(|row| {
                let mut r = row.clone();
                r.sort_unstable();
                r.dedup();
                r.len() == row.len()
            }))
    }

    #[test]
    fn simplex_counts() {
        let e0 = cal_e(&S::delta(0, 0), Flavor::General, 4);
        assert!(e0.sets().iter().all(|&c| c == 1));
        let c2 = Tree::corolla(2);
        let cat = TreeCategory::get(Flavor::General, 4);
        let o = cat.index_of(&c2.key()).unwrap();
        assert_eq!(cal_e(&S::delta(1, 1), Flavor::General, 4).count(o), 5);
        assert_eq!(edge_maps(&c2, 1).len(), 5);
    }

    #[test]
    fn formula_matches_direct_simplex() {
        for k in 0..=3 {
            for fl in [Flavor::General, Flavor::Open, Flavor::Closed] {
                let a = cal_e(&S::delta(k, k), fl, 4);
                let b = cal_e_simplex(k, fl, 4);
                assert_eq!(a.sets(), b.sets());
                assert!(iso(&a, &b), "{k} {fl:?}");
            }
        }
    }

    #[test]
    fn gluing_matches_formula() {
        for m in [S::delta(2, 2), S::boundary_delta(2, 2), S::boundary_delta(3, 3)] {
            let (a, la) = cal_e_by_cells(&m, Flavor::General, 3).unwrap();
            let (b, lb) = cal_e_labelled(&m, &TreeCategory::get(Flavor::General, 3));
            assert_eq!(a.sets(), b.sets());
            // same labels give the same action
            for o in 0..a.cat().num_objects() {
                let mut x = la[o].clone();
                x.sort();
                assert_eq!(x, lb[o]);
            }
            for ar in 0..a.cat().num_arrows() {
                let src = a.cat().arrow(ar).src;
                let tgt = a.cat().arrow(ar).tgt;
                for y in 0..a.count(tgt) {
                    let z = lb[tgt].binary_search(&la[tgt][y]).unwrap();
                    assert_eq!(la[src][a.act(ar, y)], lb[src][b.act(ar, z)]);
                }
            }
        }
    }

    #[test]
    fn boundary_agrees_below_dimension() {
        for n in 1..=4 {
            let full = cal_e(&S::delta(n, n), Flavor::General, 4);
            let bd = cal_e(&S::boundary_delta(n, n), Flavor::General, 4);
            for (o, t) in full.cat().objects().iter().enumerate() {
                if t.size() < n {
                    assert_eq!(full.count(o), bd.count(o));
                }
            }
        }
    }

    #[test]
    fn tensor_and_shom() {
        let eta = unit_representable(Flavor::General, 3);
        let t = tensor_simplicial(&eta, &S::delta(1, 1)).unwrap();
        assert_eq!(t.count(0), 2);
        let same = tensor_simplicial(&eta, &S::delta(0, 0)).unwrap();
        assert_eq!(same.sets(), eta.sets());
        let y = LeanObject::new(2, representable(&Tree::corolla(1), 2)).unwrap();
        let x = representable(&Tree::corolla(1), 3);
        let direct = NatSearch::new(&x.restrict(2).unwrap(), y.base()).count();
        assert_eq!(shom_level(&x, &y, 0).unwrap().len(), direct);
        let empty = Arc::new(FinitePresheaf::empty(x.cat().clone()));
        assert_eq!(shom_level(&empty, &y, 2).unwrap().len(), 1);
    }

    #[test]
    fn resolution_low_levels() {
        let s = build_e(Flavor::General, 3, DEFAULT_BUDGET).unwrap();
        let eta = unit_representable(Flavor::General, 3);
        assert!(iso(&s.levels[0], &eta));
        assert!(iso(&s.levels[1], &representable(&Tree::corolla(0), 3)));
        assert!(s.is_complete());
        assert!(s.check_normal() && s.check_fillers() && s.check_stability());
    }

    #[test]
    fn resolution_open_and_budget() {
        let s = build_e(Flavor::Open, 3, DEFAULT_BUDGET).unwrap();
        assert!(s.check_normal() && s.check_fillers() && s.check_stability());
        let tight = build_e(Flavor::General, 3, 2).unwrap();
        assert!(tight.exhausted_at.is_some());
    }

    #[test]
    fn normalize_projects() {
        let t = Arc::new(FinitePresheaf::terminal(TreeCategory::get(Flavor::General, 3)));
        assert!(!is_normal_upto(&t, 3));
        let p = normalize(&t).unwrap();
        assert!(is_normal_upto(p.source(), 3));
        let e = Arc::new(FinitePresheaf::empty(t.cat().clone()));
        assert!(normalize(&e).unwrap().is_iso());
    }
}
