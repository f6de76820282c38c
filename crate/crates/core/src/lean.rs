//! Coskeletal objects: a presheaf on Ω_(n) evaluated on any tree as the
//! limit over the trees of size ≤ n mapping into it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::category::TreeCategory;
use crate::error::{DendroError, Result};
use crate::limits::product;
use crate::morphism::OmegaMorphism;
use crate::nat::NatSearch;
use crate::presheaf::{FinitePresheaf, PresheafMap, Representable};
use crate::tree::{Flavor, Tree};

/// Value of a lean object at one tree: the compatible families over the
/// cells `(S, α: S → t)` with `|S| ≤ n`.
#[derive(Debug)]
pub struct LeanValue {
    pub tree: Tree,
    rep: Representable,
    offsets: Vec<usize>,
    pub families: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl LeanValue {
    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn num_cells(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Cell of `α: S → t`, `S` a stored object of the base category.
    pub fn cell(&self, o: usize, map: &[usize]) -> Option<usize> {
        Some(self.offsets[o] + self.rep.index_of(o, map)?)
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        self.rep.maps.iter().enumerate().flat_map(|(o, ms)| ms.iter().map(move |m| (o, m.as_slice())))
    }

    pub fn position(&self, family: &[usize]) -> Option<usize> {
        self.index.get(family).copied()
    }
}

/// An n-coskeletal presheaf on Ω, stored by its restriction to Ω_(n).
#[derive(Debug)]
pub struct LeanObject {
    degree: usize,
    base: Arc<FinitePresheaf>,
    cache: Mutex<HashMap<String, Arc<LeanValue>>>,
}

impl Clone for LeanObject {
    fn clone(&self) -> Self {
        LeanObject::new(self.degree, self.base.clone()).expect("already validated")
    }
}

impl LeanObject {
    /// `base` may be truncated above `degree`; only Ω_(degree) is kept.
    pub fn new(degree: usize, base: Arc<FinitePresheaf>) -> Result<LeanObject> {
        let base = if base.truncation() == degree { base } else { Arc::new(base.restrict(degree)?) };
        Ok(LeanObject { degree, base, cache: Mutex::new(HashMap::new()) })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &Arc<FinitePresheaf> {
        &self.base
    }

    pub fn flavor(&self) -> Flavor {
        self.base.flavor()
    }

    pub fn evaluate(&self, t: &Tree) -> Result<Arc<LeanValue>> {
        if t.flavor() != self.flavor() {
            return Err(DendroError::FlavorMismatch { expected: self.flavor(), found: t.flavor() });
        }
        let key = t.presentation();
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.compute(t));
        Ok(self.cache.lock().unwrap().entry(key).or_insert(v).clone())
    }

    fn compute(&self, t: &Tree) -> LeanValue {
        let cat = self.base.cat().clone();
        let rep = Representable::on(t, cat.clone());
        let mut offsets = vec![0];
        for ms in &rep.maps {
            offsets.push(offsets.last().unwrap() + ms.len());
        }
        let families: Vec<Vec<usize>> = if t.size() <= self.degree {
            // stored element order
            let (c, iso) = cat.locate(t).expect("small trees are stored");
            let arrows: Vec<usize> = rep
                .maps
                .iter()
                .enumerate()
                .flat_map(|(o, ms)| ms.iter().map(move |m| (o, m)))
                .map(|(o, m)| {
                    let comp: Vec<usize> = m.iter().map(|&e| iso[e]).collect();
                    cat.find_arrow(o, c, &comp).expect("stored arrow")
                })
                .collect();
            (0..self.base.count(c)).map(|x| arrows.iter().map(|&a| self.base.act(a, x)).collect()).collect()
        } else {
            let mut fams: Vec<Vec<usize>> =
                NatSearch::new(&rep.presheaf, &self.base).all().into_iter().map(|c| c.concat()).collect();
            fams.sort();
            fams
        };
        let index = families.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        LeanValue { tree: t.clone(), rep, offsets, families, index }
    }

    /// Restriction of family `i` at `m.target` along `m`.
    pub fn act(&self, m: &OmegaMorphism, i: usize) -> Result<usize> {
        let tv = self.evaluate(&m.target)?;
        let sv = self.evaluate(&m.source)?;
        let fam = &tv.families[i];
        let restricted: Vec<usize> = sv
            .cells()
            .map(|(o, beta)| {
                let comp: Vec<usize> = beta.iter().map(|&e| m.edge_map[e]).collect();
                fam[tv.cell(o, &comp).expect("composite is a cell")]
            })
            .collect();
        Ok(sv.position(&restricted).expect("restrictions of families are families"))
    }

    /// Materializes the object on Ω_(n) for any `n`.
    pub fn to_presheaf(&self, n: usize) -> Result<FinitePresheaf> {
        let cat = TreeCategory::get(self.flavor(), n);
        let values: Vec<Arc<LeanValue>> = cat.objects().iter().map(|t| self.evaluate(t)).collect::<Result<_>>()?;
        let sets = values.iter().map(|v| v.len()).collect();
        Ok(FinitePresheaf::from_fn(cat.clone(), sets, |a, i| {
            let ar = cat.arrow(a);
            let (tv, sv) = (&values[ar.tgt], &values[ar.src]);
            let fam = &tv.families[i];
            let restricted: Vec<usize> = sv
                .cells()
                .map(|(o, beta)| {
                    let comp: Vec<usize> = beta.iter().map(|&e| ar.map[e]).collect();
                    fam[tv.cell(o, &comp).unwrap()]
                })
                .collect();
            sv.position(&restricted).unwrap()
        }))
    }
}

/// `cosk_n x`, for `n` at most the truncation of `x`.
pub fn coskeleton(x: &FinitePresheaf, n: usize) -> Result<LeanObject> {
    LeanObject::new(n, Arc::new(x.restrict(n)?))
}

/// Elements of `cosk_n(base)` at `t`, as families.
pub fn evaluate_lean(l: &LeanObject, t: &Tree) -> Result<Arc<LeanValue>> {
    l.evaluate(t)
}

/// The unit `x → (cosk_n x)` restricted to the truncation of `x`.
pub fn coskeleton_unit(x: &Arc<FinitePresheaf>, n: usize) -> Result<PresheafMap> {
    let lean = coskeleton(x, n)?;
    let target = Arc::new(lean.to_presheaf(x.truncation())?);
    let cat = x.cat().clone();
    let comps = (0..cat.num_objects())
        .map(|o| {
            let v = lean.evaluate(cat.object(o)).unwrap();
            (0..x.count(o))
                .map(|y| {
                    let fam: Vec<usize> = v
                        .cells()
                        .map(|(s, alpha)| x.act(cat.find_arrow(s, o, alpha).expect("stored arrow"), y))
                        .collect();
                    v.position(&fam).expect("restrictions form a family")
                })
                .collect()
        })
        .collect();
    PresheafMap::new(x.clone(), target, comps)
}

/// `cosk_n x → cosk_m x` for `m ≤ n`, on trees of size ≤ `big`.
pub fn coskeleton_comparison(x: &Arc<FinitePresheaf>, n: usize, m: usize, big: usize) -> Result<PresheafMap> {
    if m > n {
        return Err(DendroError::ShapeMismatch(format!("cannot compare cosk_{n} with cosk_{m}")));
    }
    let (hi, lo) = (coskeleton(x, n)?, coskeleton(x, m)?);
    let source = Arc::new(hi.to_presheaf(big)?);
    let target = Arc::new(lo.to_presheaf(big)?);
    let cat = source.cat().clone();
    let comps = (0..cat.num_objects())
        .map(|o| {
            let t = cat.object(o);
            let (hv, lv) = (hi.evaluate(t).unwrap(), lo.evaluate(t).unwrap());
            // objects of Ω_(m) come first, so the cells over them are a prefix
            let k = lv.num_cells();
            hv.families.iter().map(|f| lv.position(&f[..k]).expect("restriction is a family")).collect()
        })
        .collect();
    PresheafMap::new(source, target, comps)
}

/// `CExp(e, x)`: at `T`, the maps `e × Ω[T] → x` computed over Ω_(n).
pub fn cartesian_exponential(e: &FinitePresheaf, x: &LeanObject) -> Result<LeanObject> {
    let n = x.degree();
    let e = Arc::new(e.restrict(n)?);
    let cat = x.base().cat().clone();
    let mut maps_per_obj = Vec::with_capacity(cat.num_objects());
    let mut reps = Vec::with_capacity(cat.num_objects());
    for t in cat.objects() {
        let rep = Representable::on(t, cat.clone());
        let (prod, _, _) = product(&e, &rep.presheaf)?;
        let mut sols = NatSearch::new(&prod, x.base()).all();
        sols.sort();
        maps_per_obj.push(sols);
        reps.push(rep);
    }
    let index: Vec<HashMap<Vec<Vec<usize>>, usize>> = maps_per_obj
        .iter()
        .map(|sols| sols.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let sets = maps_per_obj.iter().map(Vec::len).collect();
    let base = FinitePresheaf::from_fn(cat.clone(), sets, |a, i| {
        let ar = cat.arrow(a);
        let psi = &maps_per_obj[ar.tgt][i];
        let (rs, rt) = (&reps[ar.src], &reps[ar.tgt]);
        let comps: Vec<Vec<usize>> = (0..cat.num_objects())
            .map(|o| {
                let k = rs.maps[o].len();
                (0..e.count(o) * k)
                    .map(|cell| {
                        let (u, b) = (cell / k, cell % k);
                        let comp: Vec<usize> = rs.maps[o][b].iter().map(|&ed| ar.map[ed]).collect();
                        let b2 = rt.index_of(o, &comp).unwrap();
                        psi[o][u * rt.maps[o].len() + b2]
                    })
                    .collect()
            })
            .collect();
        index[ar.src][&comps]
    });
    LeanObject::new(n, Arc::new(base))
}
