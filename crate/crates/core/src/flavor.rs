//! Functors between the flavors, and between simplicial and dendroidal sets.

use crate::category::TreeCategory;
use crate::error::{DendroError, Result};
use crate::lean::LeanObject;
use crate::morphism::OmegaMorphism;
use crate::presheaf::FinitePresheaf;
use crate::simplicial::{monotone_maps, FiniteSimplicialSet};
use crate::tree::{Flavor, Tree};

fn expect_flavor(x: &FinitePresheaf, f: Flavor) -> Result<()> {
    if x.flavor() != f {
        return Err(DendroError::FlavorMismatch { expected: f, found: x.flavor() });
    }
    Ok(())
}

/// Extension by the empty set from open to general trees.
pub fn o_shriek(x: &FinitePresheaf) -> Result<FinitePresheaf> {
    expect_flavor(x, Flavor::Open)?;
    let small = x.cat();
    let cat = TreeCategory::get(Flavor::General, x.truncation());
    let to_small: Vec<Option<usize>> = cat
        .objects()
        .iter()
        .map(|t| t.with_flavor(Flavor::Open).ok().and_then(|u| small.index_of(&u.key())))
        .collect();
    let sets = to_small.iter().map(|o| o.map_or(0, |o| x.count(o))).collect();
    Ok(FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        let ar = cat.arrow(a);
        // the source of a map into an open tree is open
        let (s, t) = (to_small[ar.src].unwrap(), to_small[ar.tgt].unwrap());
        x.act(small.find_arrow(s, t, &ar.map).expect("same representatives"), y)
    }))
}

/// Restriction from general to open trees.
pub fn o_star(x: &FinitePresheaf) -> Result<FinitePresheaf> {
    expect_flavor(x, Flavor::General)?;
    restrict_flavor(x, Flavor::Open)
}

fn restrict_flavor(x: &FinitePresheaf, flavor: Flavor) -> Result<FinitePresheaf> {
    let big = x.cat();
    let cat = TreeCategory::get(flavor, x.truncation());
    let to_big: Vec<usize> = cat
        .objects()
        .iter()
        .map(|t| big.index_of(&t.with_flavor(big.flavor()).expect("general admits all").key()).unwrap())
        .collect();
    let sets = to_big.iter().map(|&o| x.count(o)).collect();
    Ok(FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        let ar = cat.arrow(a);
        x.act(big.find_arrow(to_big[ar.src], to_big[ar.tgt], &ar.map).unwrap(), y)
    }))
}

/// `X_T := X_{closure(T)}` for a presheaf on closed trees, giving a general
/// presheaf on trees of size ≤ `n`. Closures must stay within the truncation.
pub fn u_shriek(x: &FinitePresheaf, n: usize) -> Result<FinitePresheaf> {
    expect_flavor(x, Flavor::Closed)?;
    let small = x.cat();
    let cat = TreeCategory::get(Flavor::General, n);
    let mut closures = Vec::with_capacity(cat.num_objects());
    for t in cat.objects() {
        let c = t.closure();
        let Some((o, iso)) = small.locate(&c) else {
            return Err(DendroError::TruncationTooSmall { have: x.truncation(), need: c.size() });
        };
        closures.push((o, iso));
    }
    let sets = closures.iter().map(|(o, _)| x.count(*o)).collect();
    Ok(FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        // closure keeps edge ids, so the edge map is unchanged
        let ar = cat.arrow(a);
        let (so, siso) = &closures[ar.src];
        let (to, tiso) = &closures[ar.tgt];
        let mut comp = vec![0; siso.len()];
        for (e, &ce) in siso.iter().enumerate() {
            comp[ce] = tiso[ar.map[e]];
        }
        x.act(small.find_arrow(*so, *to, &comp).expect("closure is functorial"), y)
    }))
}

fn linear_arrow(cat: &TreeCategory, theta: &[usize], b: usize) -> Option<usize> {
    let a = theta.len() - 1;
    let src = cat.index_of(&Tree::linear(a).key())?;
    let tgt = cat.index_of(&Tree::linear(b).key())?;
    cat.find_arrow(src, tgt, &linear_edge_map(theta, b))
}

/// Edge `e` of the linear tree with `k` vertices sits at vertex `k - e` of `[k]`.
pub fn linear_edge_map(theta: &[usize], b: usize) -> Vec<usize> {
    let a = theta.len() - 1;
    (0..=a).map(|e| b - theta[a - e]).collect()
}

/// `i^*` of a presheaf, up to dimension `⌊N/2⌋`.
pub fn i_star(x: &FinitePresheaf) -> Result<FiniteSimplicialSet> {
    expect_flavor(x, Flavor::General)?;
    let cat = x.cat();
    let k = x.truncation() / 2;
    let objs: Vec<usize> = (0..=k).map(|d| cat.index_of(&Tree::linear(d).key()).unwrap()).collect();
    FiniteSimplicialSet::from_fn(k, objs.iter().map(|&o| x.count(o)).collect(), |theta, b, y| {
        x.act(linear_arrow(cat, theta, b).expect("monotone maps are arrows"), y)
    })
}

/// `i^*` of a lean object, up to any dimension.
pub fn i_star_lean(l: &LeanObject, max_dim: usize) -> Result<FiniteSimplicialSet> {
    if l.flavor() != Flavor::General {
        return Err(DendroError::FlavorMismatch { expected: Flavor::General, found: l.flavor() });
    }
    let sets = (0..=max_dim).map(|d| l.evaluate(&Tree::linear(d)).map(|v| v.len())).collect::<Result<_>>()?;
    FiniteSimplicialSet::from_fn(max_dim, sets, |theta, b, y| {
        let a = theta.len() - 1;
        let m = OmegaMorphism::new(Tree::linear(a), Tree::linear(b), linear_edge_map(theta, b)).expect("monotone");
        l.act(&m, y).expect("general trees")
    })
}

/// `i_!`: supported on linear trees. Needs the simplicial set up to
/// dimension `⌊n/2⌋`.
pub fn i_shriek(m: &FiniteSimplicialSet, n: usize) -> Result<FinitePresheaf> {
    if m.max_dim() < n / 2 {
        return Err(DendroError::TruncationTooSmall { have: m.max_dim(), need: n / 2 });
    }
    let cat = TreeCategory::get(Flavor::General, n);
    let dims: Vec<Option<usize>> =
        cat.objects().iter().map(|t| if t.is_linear() { Some(t.num_vertices()) } else { None }).collect();
    let sets = dims.iter().map(|d| d.map_or(0, |d| m.count(d))).collect();
    Ok(FinitePresheaf::from_fn(cat.clone(), sets, |a, y| {
        let ar = cat.arrow(a);
        let (da, db) = (dims[ar.src].unwrap(), dims[ar.tgt].unwrap());
        let theta: Vec<usize> = (0..=da).map(|v| db - ar.map[da - v]).collect();
        m.act(&theta, db, y)
    }))
}

/// All monotone maps `[a] → [b]` as arrows of the linear trees in `cat`.
pub fn simplicial_arrows(cat: &TreeCategory, a: usize, b: usize) -> Vec<usize> {
    monotone_maps(a, b).iter().filter_map(|th| linear_arrow(cat, th, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lean::coskeleton;
    use crate::presheaf::representable;
    use crate::simplicial::FiniteSimplicialSet;
    use std::sync::Arc;

    #[test]
    fn open_round_trip() {
        for t in crate::tree::enumerate_trees(3, Flavor::Open) {
            let x = representable(&t, 3);
            let g = o_shriek(&x).unwrap();
            g.check_functorial_full().unwrap();
            assert_eq!(o_star(&g).unwrap(), *x);
        }
    }

    #[test]
    fn closure_extension() {
        let x = FinitePresheaf::terminal(TreeCategory::get(Flavor::Closed, 4));
        let g = u_shriek(&x, 2).unwrap();
        g.check_functorial_full().unwrap();
        assert!(g.sets().iter().all(|&k| k == 1));
        let y = representable(&Tree::corolla(0).with_flavor(Flavor::Closed).unwrap(), 4);
        let g = u_shriek(&y, 2).unwrap();
        g.check_functorial_full().unwrap();
        let eta = g.cat().index_of(&Tree::eta().key()).unwrap();
        assert_eq!(g.count(eta), 1);
    }

    #[test]
    fn simplicial_round_trip() {
        let d = FiniteSimplicialSet::delta(1, 2);
        let x = i_shriek(&d, 4).unwrap();
        x.check_functorial_full().unwrap();
        assert_eq!(i_star(&x).unwrap(), d);
        let l = coskeleton(&Arc::new(x), 4).unwrap();
        assert_eq!(i_star_lean(&l, 2).unwrap(), d);
    }
}
