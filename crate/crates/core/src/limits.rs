//! Finite limits and colimits, computed degreewise.

use std::sync::Arc;

use crate::error::{DendroError, Result};
use crate::presheaf::{subpresheaf, FinitePresheaf, PresheafMap};

fn same_cat(x: &FinitePresheaf, y: &FinitePresheaf) -> Result<()> {
    if (x.flavor(), x.truncation()) == (y.flavor(), y.truncation()) {
        Ok(())
    } else {
        Err(DendroError::ShapeMismatch("presheaves live on different categories".into()))
    }
}

/// `x × y` with `(i, j) ↦ i·|y_T| + j`, and the two projections.
pub fn product(x: &Arc<FinitePresheaf>, y: &Arc<FinitePresheaf>) -> Result<(Arc<FinitePresheaf>, PresheafMap, PresheafMap)> {
    same_cat(x, y)?;
    let cat = x.cat().clone();
    let sets: Vec<usize> = (0..cat.num_objects()).map(|o| x.count(o) * y.count(o)).collect();
    let p = Arc::new(FinitePresheaf::from_fn(cat.clone(), sets, |a, k| {
        let ar = cat.arrow(a);
        let (i, j) = (k / y.count(ar.tgt), k % y.count(ar.tgt));
        x.act(a, i) * y.count(ar.src) + y.act(a, j)
    }));
    let comps1 = (0..cat.num_objects()).map(|o| (0..p.count(o)).map(|k| k / y.count(o)).collect()).collect();
    let comps2 = (0..cat.num_objects()).map(|o| (0..p.count(o)).map(|k| k % y.count(o)).collect()).collect();
    let p1 = PresheafMap::new_unchecked(p.clone(), x.clone(), comps1)?;
    let p2 = PresheafMap::new_unchecked(p.clone(), y.clone(), comps2)?;
    Ok((p, p1, p2))
}

/// `f × g: a × c → b × d`.
pub fn product_map(f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
    let (src, _, _) = product(f.source(), g.source())?;
    let (tgt, _, _) = product(f.target(), g.target())?;
    let cat = src.cat().clone();
    let comps = (0..cat.num_objects())
        .map(|o| {
            let (nc, nd) = (g.source().count(o), g.target().count(o));
            (0..src.count(o)).map(|k| f.apply(o, k / nc) * nd + g.apply(o, k % nc)).collect()
        })
        .collect();
    PresheafMap::new_unchecked(src, tgt, comps)
}

/// Pullback of `f: x → z ← y: g`; elements are the pairs in lexicographic order.
pub fn pullback(f: &PresheafMap, g: &PresheafMap) -> Result<(Arc<FinitePresheaf>, PresheafMap, PresheafMap)> {
    if f.target() != g.target() {
        return Err(DendroError::ShapeMismatch("pullback of maps with different targets".into()));
    }
    let (x, y) = (f.source(), g.source());
    same_cat(x, y)?;
    let cat = x.cat().clone();
    let pairs: Vec<Vec<(usize, usize)>> = (0..cat.num_objects())
        .map(|o| {
            let mut v = Vec::new();
            for i in 0..x.count(o) {
                for j in 0..y.count(o) {
                    if f.apply(o, i) == g.apply(o, j) {
                        v.push((i, j));
                    }
                }
            }
            v
        })
        .collect();
    let sets = pairs.iter().map(Vec::len).collect();
    let p = Arc::new(FinitePresheaf::from_fn(cat.clone(), sets, |a, k| {
        let ar = cat.arrow(a);
        let (i, j) = pairs[ar.tgt][k];
        let r = (x.act(a, i), y.act(a, j));
        pairs[ar.src].binary_search(&r).expect("pullbacks are closed")
    }));
    let c1 = pairs.iter().map(|v| v.iter().map(|p| p.0).collect()).collect();
    let c2 = pairs.iter().map(|v| v.iter().map(|p| p.1).collect()).collect();
    Ok((p.clone(), PresheafMap::new_unchecked(p.clone(), x.clone(), c1)?, PresheafMap::new_unchecked(p, y.clone(), c2)?))
}

/// Inclusion of the equalizer of `f, g: x ⇉ y`.
pub fn equalizer(f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(DendroError::ShapeMismatch("equalizer of non-parallel maps".into()));
    }
    let x = f.source();
    let keep: Vec<Vec<bool>> =
        (0..x.cat().num_objects()).map(|o| (0..x.count(o)).map(|i| f.apply(o, i) == g.apply(o, i)).collect()).collect();
    subpresheaf(x, &keep)
}

/// `⊔ xs` with the summands concatenated in order, plus the injections.
pub fn coproduct_all(xs: &[Arc<FinitePresheaf>], cat: &Arc<crate::TreeCategory>) -> Result<(Arc<FinitePresheaf>, Vec<PresheafMap>)> {
    for x in xs {
        if (x.flavor(), x.truncation()) != (cat.flavor(), cat.max_size()) {
            return Err(DendroError::ShapeMismatch("summand on a different category".into()));
        }
    }
    let n = cat.num_objects();
    let mut offsets = vec![vec![0; n]; xs.len() + 1];
    for (k, x) in xs.iter().enumerate() {
        for o in 0..n {
            offsets[k + 1][o] = offsets[k][o] + x.count(o);
        }
    }
    let sets = offsets[xs.len()].clone();
    let which = |o: usize, i: usize| -> usize { offsets.partition_point(|off| off[o] <= i) - 1 };
    let s = Arc::new(FinitePresheaf::from_fn(cat.clone(), sets, |a, i| {
        let ar = cat.arrow(a);
        let k = which(ar.tgt, i);
        offsets[k][ar.src] + xs[k].act(a, i - offsets[k][ar.tgt])
    }));
    let mut incs = Vec::with_capacity(xs.len());
    for (k, x) in xs.iter().enumerate() {
        let comps = (0..n).map(|o| (0..x.count(o)).map(|i| offsets[k][o] + i).collect()).collect();
        incs.push(PresheafMap::new_unchecked(x.clone(), s.clone(), comps)?);
    }
    Ok((s, incs))
}

pub fn coproduct(x: &Arc<FinitePresheaf>, y: &Arc<FinitePresheaf>) -> Result<(Arc<FinitePresheaf>, PresheafMap, PresheafMap)> {
    same_cat(x, y)?;
    let (s, mut incs) = coproduct_all(&[x.clone(), y.clone()], x.cat())?;
    let i2 = incs.pop().unwrap();
    Ok((s, incs.pop().unwrap(), i2))
}

/// `[f, g]: x ⊔ y → z`.
pub fn copair(s: &Arc<FinitePresheaf>, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
    let comps = (0..s.cat().num_objects())
        .map(|o| {
            let k = f.source().count(o);
            (0..s.count(o)).map(|i| if i < k { f.apply(o, i) } else { g.apply(o, i - k) }).collect()
        })
        .collect();
    PresheafMap::new_unchecked(s.clone(), f.target().clone(), comps)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Pushout of `b ← a → c`. Elements of the result are classes of `b ⊔ c`,
/// ordered by their least member.
pub fn pushout(f: &PresheafMap, g: &PresheafMap) -> Result<(Arc<FinitePresheaf>, PresheafMap, PresheafMap)> {
    if f.source() != g.source() {
        return Err(DendroError::ShapeMismatch("pushout of maps with different sources".into()));
    }
    let (b, c) = (f.target(), g.target());
    same_cat(b, c)?;
    let cat = b.cat().clone();
    let n = cat.num_objects();
    let mut class_of = Vec::with_capacity(n);
    let mut reps = Vec::with_capacity(n);
    for o in 0..n {
        let nb = b.count(o);
        let mut uf = UnionFind((0..nb + c.count(o)).collect());
        for i in 0..f.source().count(o) {
            uf.union(f.apply(o, i), nb + g.apply(o, i));
        }
        let mut cls = vec![usize::MAX; nb + c.count(o)];
        let mut rep = Vec::new();
        for i in 0..cls.len() {
            let r = uf.find(i);
            if cls[r] == usize::MAX {
                cls[r] = rep.len();
                rep.push(i);
            }
            cls[i] = cls[r];
        }
        class_of.push(cls);
        reps.push(rep);
    }
    let sets = reps.iter().map(Vec::len).collect();
    let p = Arc::new(FinitePresheaf::from_fn(cat.clone(), sets, |a, k| {
        let ar = cat.arrow(a);
        let i = reps[ar.tgt][k];
        let nb_t = b.count(ar.tgt);
        let j = if i < nb_t { b.act(a, i) } else { b.count(ar.src) + c.act(a, i - nb_t) };
        class_of[ar.src][j]
    }));
    let j1 = (0..n).map(|o| (0..b.count(o)).map(|i| class_of[o][i]).collect()).collect();
    let j2 = (0..n).map(|o| (0..c.count(o)).map(|i| class_of[o][b.count(o) + i]).collect()).collect();
    Ok((p.clone(), PresheafMap::new_unchecked(b.clone(), p.clone(), j1)?, PresheafMap::new_unchecked(c.clone(), p, j2)?))
}

/// `f = m ∘ e` with `e` epi onto the image and `m` its inclusion.
pub fn image_factorization(f: &PresheafMap) -> Result<(PresheafMap, PresheafMap)> {
    let m = subpresheaf(f.target(), &f.image_mask())?;
    let n = f.cat().num_objects();
    let comps = (0..n)
        .map(|o| {
            let incl = &m.comps()[o];
            (0..f.source().count(o)).map(|i| incl.binary_search(&f.apply(o, i)).unwrap()).collect()
        })
        .collect();
    let e = PresheafMap::new_unchecked(f.source().clone(), m.source().clone(), comps)?;
    Ok((e, m))
}

/// The unique map to the terminal presheaf.
pub fn to_terminal(x: &Arc<FinitePresheaf>) -> PresheafMap {
    let t = Arc::new(FinitePresheaf::terminal(x.cat().clone()));
    let comps = x.sets().iter().map(|&k| vec![0; k]).collect();
    PresheafMap::new_unchecked(x.clone(), t, comps).expect("shapes agree")
}

/// The unique map out of the empty presheaf.
pub fn from_empty(x: &Arc<FinitePresheaf>) -> PresheafMap {
    let e = Arc::new(FinitePresheaf::empty(x.cat().clone()));
    let comps = vec![Vec::new(); x.cat().num_objects()];
    PresheafMap::new_unchecked(e, x.clone(), comps).expect("shapes agree")
}
