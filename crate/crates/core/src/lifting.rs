//! Lifting problems between finite presheaves.

use std::sync::Arc;

use crate::error::{DendroError, Result};
use crate::limits::to_terminal;
use crate::nat::NatSearch;
use crate::presheaf::{boundary, horn, in_skeleton, subpresheaf, FinitePresheaf, PresheafMap};
use crate::tree::Flavor;

/// A commutative square `p ∘ top = bottom ∘ i`.
#[derive(Debug, Clone)]
pub struct LiftingProblem {
    pub i: PresheafMap,
    pub p: PresheafMap,
    pub top: PresheafMap,
    pub bottom: PresheafMap,
}

impl LiftingProblem {
    pub fn new(i: PresheafMap, p: PresheafMap, top: PresheafMap, bottom: PresheafMap) -> Result<Self> {
        let same = |a: &Arc<FinitePresheaf>, b: &Arc<FinitePresheaf>| Arc::ptr_eq(a, b) || a == b;
        if !same(top.source(), i.source())
            || !same(top.target(), p.source())
            || !same(bottom.source(), i.target())
            || !same(bottom.target(), p.target())
        {
            return Err(DendroError::ShapeMismatch("square corners do not match".into()));
        }
        if p.after(&top)?.comps() != bottom.after(&i)?.comps() {
            return Err(DendroError::NotCommutative("p ∘ top ≠ bottom ∘ i".into()));
        }
        Ok(LiftingProblem { i, p, top, bottom })
    }
}

/// A diagonal `B → X` with both triangles commuting.
#[derive(Debug, Clone)]
pub struct LiftSolution {
    pub lift: PresheafMap,
}

/// Restricts a search for maps `B → X` to those over `bottom` and under `top`.
/// Returns false when the constraints already clash.
fn constrain(search: &mut NatSearch, i: &PresheafMap, p: &PresheafMap, top: &[Vec<usize>], bottom: &[Vec<usize>]) -> bool {
    let b = i.target();
    for o in 0..b.cat().num_objects() {
        let mut forced: Vec<Option<usize>> = vec![None; b.count(o)];
        for a in 0..i.source().count(o) {
            let t = i.apply(o, a);
            match forced[t] {
                Some(v) if v != top[o][a] => return false,
                _ => forced[t] = Some(top[o][a]),
            }
        }
        for y in 0..b.count(o) {
            let want = bottom[o][y];
            let f = forced[y];
            search.restrict(o, y, |v| p.apply(o, v) == want && f.is_none_or(|w| w == v));
        }
    }
    true
}

/// First lift in the search order, or none.
pub fn solve_lift(problem: &LiftingProblem) -> Option<LiftSolution> {
    let LiftingProblem { i, p, top, bottom } = problem;
    let mut search = NatSearch::new(i.target(), p.source());
    if !constrain(&mut search, i, p, top.comps(), bottom.comps()) {
        return None;
    }
    let comps = search.first()?;
    let lift = PresheafMap::new_unchecked(i.target().clone(), p.source().clone(), comps).ok()?;
    Some(LiftSolution { lift })
}

/// Every square from `i` to `p` has a lift. Squares are enumerated by
/// bottom map, then by top maps over it.
pub fn has_lifting(i: &PresheafMap, p: &PresheafMap) -> bool {
    first_failing_square(i, p).is_none()
}

/// A square from `i` to `p` without a lift, as `(top, bottom)` components.
pub fn first_failing_square(i: &PresheafMap, p: &PresheafMap) -> Option<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let (a, b) = (i.source(), i.target());
    let (x, y) = (p.source(), p.target());
    let mut failing = None;
    NatSearch::new(b, y).for_each(|bottom| {
        let mut tops = NatSearch::new(a, x);
        for o in 0..a.cat().num_objects() {
            for e in 0..a.count(o) {
                let want = bottom[o][i.apply(o, e)];
                tops.restrict(o, e, |v| p.apply(o, v) == want);
            }
        }
        tops.for_each(|top| {
            let mut lifts = NatSearch::new(b, x);
            if !constrain(&mut lifts, i, p, top, bottom) || lifts.first().is_none() {
                failing = Some((top.to_vec(), bottom.to_vec()));
                return false;
            }
            true
        });
        failing.is_none()
    });
    failing
}

pub fn has_rlp_family(p: &PresheafMap, family: &[PresheafMap]) -> bool {
    family.iter().all(|i| has_lifting(i, p))
}

pub fn has_llp_family(i: &PresheafMap, family: &[PresheafMap]) -> bool {
    family.iter().all(|p| has_lifting(i, p))
}

/// `∂Ω[t] ↪ Ω[t]` for every stored `t` of size ≤ `m`.
pub fn boundary_family(flavor: Flavor, n: usize, m: usize) -> Vec<PresheafMap> {
    let cat = crate::TreeCategory::get(flavor, n);
    cat.objects().iter().filter(|t| t.size() <= m).map(|t| boundary(t, n)).collect()
}

/// Inner horns (very inner in the closed flavor) for every stored `t` of size ≤ `m`.
pub fn horn_family(flavor: Flavor, n: usize, m: usize) -> Vec<PresheafMap> {
    let cat = crate::TreeCategory::get(flavor, n);
    let mut out = Vec::new();
    for t in cat.objects().iter().filter(|t| t.size() <= m) {
        for e in t.inner_edges() {
            if flavor != Flavor::Closed || t.is_very_inner(e) {
                out.push(horn(t, e, n).expect("inner edge"));
            }
        }
    }
    out
}

fn check_bound(p: &PresheafMap, m: usize) -> Result<()> {
    if m > p.cat().max_size() {
        return Err(DendroError::TruncationTooSmall { have: p.cat().max_size(), need: m });
    }
    Ok(())
}

pub fn is_trivial_fib_upto(p: &PresheafMap, m: usize) -> Result<bool> {
    check_bound(p, m)?;
    Ok(has_rlp_family(p, &boundary_family(p.cat().flavor(), p.cat().max_size(), m)))
}

pub fn is_inner_fib_upto(p: &PresheafMap, m: usize) -> Result<bool> {
    check_bound(p, m)?;
    Ok(has_rlp_family(p, &horn_family(p.cat().flavor(), p.cat().max_size(), m)))
}

pub fn is_operad_upto(x: &Arc<FinitePresheaf>, m: usize) -> Result<bool> {
    is_inner_fib_upto(&to_terminal(x), m)
}

/// `i(sk_n A) ∪ sk_{n-1} B ↪ sk_n B`. Extending along it into `X` is the
/// same as lifting `i` against `cosk_n X → cosk_{n-1} X`.
pub fn coskeletal_reduction(i: &PresheafMap, n: usize) -> Result<PresheafMap> {
    let (a, b) = (i.source(), i.target());
    let cat = b.cat();
    let sk = |x: &FinitePresheaf, o: usize, y: usize, k: Option<usize>| k.is_some_and(|k| in_skeleton(x, o, y, k));
    let below = n.checked_sub(1);
    let mut union: Vec<Vec<bool>> = (0..cat.num_objects())
        .map(|o| (0..b.count(o)).map(|y| sk(b, o, y, below)).collect())
        .collect();
    for (o, row) in union.iter_mut().enumerate() {
        for e in 0..a.count(o) {
            if in_skeleton(a, o, e, n) {
                row[i.apply(o, e)] = true;
            }
        }
    }
    let sk_b = crate::presheaf::skeleton(b, n);
    let keep: Vec<Vec<bool>> =
        (0..cat.num_objects()).map(|o| sk_b.comps()[o].iter().map(|&y| union[o][y]).collect()).collect();
    subpresheaf(sk_b.source(), &keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lean::coskeleton_comparison;
    use crate::limits::{from_empty, to_terminal};
    use crate::presheaf::{representable, spine};
    use crate::tree::{parse_term, Tree};
    use crate::TreeCategory;

    fn g(s: &str) -> Tree {
        parse_term(s, Flavor::General).unwrap()
    }

    #[test]
    fn identities_lift() {
        let x = representable(&g("[**]"), 3);
        let i = boundary(&g("[**]"), 3);
        let id = PresheafMap::identity(x.clone());
        let top = i.clone();
        let p = LiftingProblem::new(i.clone(), id.clone(), top, id.clone()).unwrap();
        assert!(solve_lift(&p).is_some());
        assert!(has_lifting(&PresheafMap::identity(x.clone()), &to_terminal(&x)));
    }

    #[test]
    fn terminal_is_trivial_fibration() {
        let t = Arc::new(FinitePresheaf::terminal(TreeCategory::get(Flavor::General, 3)));
        assert!(is_trivial_fib_upto(&PresheafMap::identity(t.clone()), 3).unwrap());
        assert!(is_operad_upto(&t, 3).unwrap());
    }

    #[test]
    fn representable_is_not_trivially_fibrant() {
        let x = representable(&Tree::corolla(1), 3);
        assert!(!is_trivial_fib_upto(&to_terminal(&x), 3).unwrap());
        assert!(is_operad_upto(&x, 3).unwrap());
    }

    #[test]
    fn spine_extension_into_representable() {
        let t = g("[[**]*]");
        let x = representable(&t, 5);
        assert!(has_lifting(&spine(&t, 5), &to_terminal(&x)));
        assert!(!has_lifting(&from_empty(&x), &from_empty(&x)));
    }

    #[test]
    fn reduction_of_boundaries() {
        for t in crate::enumerate_trees(3, Flavor::General) {
            for n in 0..=4 {
                let r = coskeletal_reduction(&boundary(&t, 4), n).unwrap();
                if t.size() == n {
                    assert!(!r.is_iso());
                    assert_eq!(r.source().sets(), boundary(&t, 4).source().sets());
                } else {
                    assert!(r.is_iso(), "{t} {n}");
                }
            }
        }
    }

    #[test]
    fn reduction_matches_coskeletal_lifting() {
        let y = representable(&Tree::corolla(2), 3);
        for t in crate::enumerate_trees(3, Flavor::General) {
            let i = boundary(&t, 3);
            for n in 1..=3 {
                let p = coskeleton_comparison(&y, n, n - 1, 3).unwrap();
                let r = coskeletal_reduction(&i, n).unwrap();
                assert_eq!(has_lifting(&i, &p), has_lifting(&r, &to_terminal(&y)), "{t} {n}");
            }
        }
    }
}
