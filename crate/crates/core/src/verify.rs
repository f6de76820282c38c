//! Self-check suites with machine-readable reports.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::category::TreeCategory;
use crate::closed_ops::{closed_nerve_ass, coskeletal_degree_search, has_unique_very_inner_fillers, matching_report};
use crate::error::Result;
use crate::gset::{equivariant_maps, free_on_complement, gsets_upto, has_llp_generator, FiniteGroup, GMap};
use crate::homotopy::{build_e, cal_e, edge_maps, DEFAULT_BUDGET};
use crate::lifting::coskeletal_reduction;
use crate::normality::{is_normal_mono_upto, is_normal_upto, llp_normality_check};
use crate::presheaf::{boundary, skeleton, FinitePresheaf};
use crate::sample::{all_maps, small_presheaves};
use crate::simplicial::FiniteSimplicialSet;
use crate::tree::Flavor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl From<bool> for Status {
    fn from(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub version: &'static str,
    pub checks: Vec<Check>,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl VerifyReport {
    pub fn new(suite: &str) -> VerifyReport {
        VerifyReport {
            suite: suite.into(),
            version: env!("CARGO_PKG_VERSION"),
            checks: Vec::new(),
            counts: BTreeMap::new(),
            timings_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, status: impl Into<Status>, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), status: status.into(), detail });
    }

    pub fn count(&mut self, name: impl Into<String>, n: usize) {
        self.counts.insert(name.into(), n as u64);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn merge(&mut self, other: VerifyReport) {
        let prefix = other.suite.clone();
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}/{}", c.name), ..c });
        }
        for (k, v) in other.counts {
            self.counts.insert(format!("{prefix}/{k}"), v);
        }
        if let Some(t) = other.timings_ms {
            let mine = self.timings_ms.get_or_insert_with(BTreeMap::new);
            for (k, v) in t {
                mine.insert(format!("{prefix}/{k}"), v);
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// Runs `f` and records its wall time when `timed` is set.
fn timed<T>(report: &mut VerifyReport, timed: bool, name: &str, f: impl FnOnce(&mut VerifyReport) -> T) -> T {
    let start = Instant::now();
    let out = f(report);
    if timed {
        report.timings_ms.get_or_insert_with(BTreeMap::new).insert(name.into(), start.elapsed().as_millis() as u64);
    }
    out
}

/// Composites of generators, as edge maps, grouped by (source, target).
pub fn generated_homs(cat: &TreeCategory) -> BTreeMap<(usize, usize), BTreeSet<Vec<usize>>> {
    let mut homs: BTreeMap<(usize, usize), BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut frontier: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for o in 0..cat.num_objects() {
        let id: Vec<usize> = (0..cat.object(o).num_edges()).collect();
        homs.entry((o, o)).or_default().insert(id.clone());
        frontier.push((o, o, id));
    }
    let gens: Vec<_> = cat.generators().iter().map(|&g| cat.arrow(g).clone()).collect();
    while let Some((s, t, m)) = frontier.pop() {
        for g in gens.iter().filter(|g| g.src == t) {
            let comp: Vec<usize> = m.iter().map(|&e| g.map[e]).collect();
            if homs.entry((s, g.tgt)).or_default().insert(comp.clone()) {
                frontier.push((s, g.tgt, comp));
            }
        }
    }
    homs
}

/// Hom sets against composites of generators, freeness of automorphisms on
/// degeneracies, and boundaries as skeleta.
pub fn verify_trees(max_size: usize, time: bool) -> VerifyReport {
    let mut r = VerifyReport::new("trees");
    let cat = TreeCategory::get(Flavor::General, max_size);
    r.count("objects", cat.num_objects());
    r.count("arrows", cat.num_arrows());
    timed(&mut r, time, "hom", |r| {
        let closure = generated_homs(&cat);
        let mut bad = 0;
        for s in 0..cat.num_objects() {
            for t in 0..cat.num_objects() {
                let direct: BTreeSet<Vec<usize>> = crate::hom_set(cat.object(s), cat.object(t))
                    .map(|ms| ms.into_iter().map(|m| m.edge_map).collect())
                    .unwrap_or_default();
                if direct != closure.get(&(s, t)).cloned().unwrap_or_default() {
                    bad += 1;
                }
            }
        }
        r.check("hom-equals-generated", bad == 0, (bad > 0).then(|| format!("{bad} mismatched pairs")));
    });
    timed(&mut r, time, "degeneracies", |r| {
        let mut violations = 0;
        for s in 0..cat.num_objects() {
            let auts = cat.automorphisms(s);
            for a in (0..cat.num_arrows()).filter(|&a| cat.arrow(a).src == s && cat.is_split_epi(a) && !cat.is_iso(a)) {
                violations += auts.iter().filter(|&&g| g != cat.identity(s) && cat.compose(a, g) == Some(a)).count();
            }
        }
        r.count("degeneracy-violations", violations);
        r.check("aut-free-on-degeneracies", violations == 0, None);
    });
    timed(&mut r, time, "skeleta", |r| {
        let mut bad = 0;
        for fl in [Flavor::General, Flavor::Open, Flavor::Closed] {
            for t in TreeCategory::get(fl, max_size).objects() {
                let rep = crate::presheaf::representable(t, max_size);
                let b = boundary(t, max_size);
                let ok = t.size() == 0 && b.source().is_empty() || {
                    let sk = skeleton(&rep, t.size().saturating_sub(1));
                    sk.comps() == b.comps()
                };
                if !ok {
                    bad += 1;
                }
            }
        }
        r.check("skeleton-is-boundary", bad == 0, (bad > 0).then(|| format!("{bad} trees")));
    });
    r
}

/// LLP against the generator versus mono with free complement, for all maps
/// between G-sets with at most `max_carrier` elements, `G` cyclic of order 2 and 3.
pub fn verify_gset(max_carrier: usize, time: bool) -> VerifyReport {
    let mut r = VerifyReport::new("gset");
    for k in [2, 3] {
        timed(&mut r, time, &format!("C{k}"), |r| {
            let g = Arc::new(FiniteGroup::cyclic(k));
            let sets = gsets_upto(&g, max_carrier);
            let (mut maps, mut bad) = (0, 0);
            for x in &sets {
                for y in &sets {
                    for m in equivariant_maps(x, y) {
                        let f = GMap::new(x.clone(), y.clone(), m).expect("enumerated maps are equivariant");
                        maps += 1;
                        if has_llp_generator(&f) != (f.is_injective() && free_on_complement(&f)) {
                            bad += 1;
                        }
                    }
                }
            }
            r.count(format!("C{k}-maps"), maps);
            r.check(format!("C{k}-llp-iff-free-mono"), bad == 0, (bad > 0).then(|| format!("{bad} discrepancies")));
        });
    }
    r
}

/// Normal monos against the lifting test, over all maps between presheaves
/// on trees of size ≤ `max_size` with at most `per_object` elements per tree.
pub fn verify_normality(max_size: usize, per_object: usize, time: bool) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("normality");
    let cat = TreeCategory::get(Flavor::General, max_size);
    let family = timed(&mut r, time, "family", |_| small_presheaves(&cat, per_object));
    r.count("presheaves", family.len());
    let (mut maps, mut normal, mut bad) = (0, 0, 0);
    timed(&mut r, time, "compare", |_| -> Result<()> {
        for x in &family {
            for y in &family {
                for f in all_maps(x, y) {
                    maps += 1;
                    let a = is_normal_mono_upto(&f, max_size);
                    normal += a as usize;
                    if a != llp_normality_check(&f, max_size)? {
                        bad += 1;
                    }
                }
            }
        }
        Ok(())
    })?;
    r.count("maps", maps);
    r.count("normal", normal);
    r.check("normal-iff-lifting", bad == 0, (bad > 0).then(|| format!("{bad} discrepancies")));
    Ok(r)
}

/// Linear orders, matching maps and the closed nerve of the associative operad.
pub fn verify_ass(max_arity: usize, max_size: usize, time: bool) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("ass");
    let mut fact = 1usize;
    for n in 0..=max_arity {
        fact *= n.max(1);
        let ops = crate::closed_ops::ass_operations(n).len();
        r.check(format!("orders-{n}"), ops == fact, None);
    }
    timed(&mut r, time, "matching", |r| -> Result<()> {
        for n in 1..=max_arity {
            let m = matching_report(n)?;
            r.count(format!("matching-{n}-families"), m.families);
            r.count(format!("matching-{n}-image"), m.image);
            let expected = match n {
                1 => m.families == 1 && m.injective,
                2 => m.families == 1 && m.image == 1,
                3 => m.families == 8 && m.image == 6 && m.injective,
                _ => m.injective && m.surjective,
            };
            r.check(format!("matching-{n}"), expected, None);
        }
        Ok(())
    })?;
    timed(&mut r, time, "nerve", |r| -> Result<()> {
        let x = Arc::new(closed_nerve_ass(max_size));
        r.check("nerve-functorial", x.check_functorial_full().is_ok(), None);
        r.check("nerve-normal", is_normal_upto(&x, max_size), None);
        r.check("nerve-unique-fillers", has_unique_very_inner_fillers(&x, max_size)?, None);
        match coskeletal_degree_search(&x, max_size)? {
            Some(m) => {
                r.count("coskeletal-degree", m);
                r.check("coskeletal-degree-found", true, None);
            }
            None => r.check("coskeletal-degree-found", false, None),
        }
        Ok(())
    })?;
    Ok(r)
}

/// The edge-poset functor on simplices and the resolution of the point.
pub fn verify_e(bound: usize, time: bool) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("e");
    timed(&mut r, time, "functor", |r| {
        let mut bad = 0;
        for n in 1..=bound.min(4) {
            let full = cal_e(&FiniteSimplicialSet::delta(n, n), Flavor::General, bound);
            let bd = cal_e(&FiniteSimplicialSet::boundary_delta(n, n), Flavor::General, bound);
            for (o, t) in full.cat().objects().iter().enumerate() {
                if t.size() < n && full.count(o) != bd.count(o) {
                    bad += 1;
                }
            }
        }
        r.check("boundary-agrees-below-dimension", bad == 0, None);
        let e0 = cal_e(&FiniteSimplicialSet::delta(0, 0), Flavor::General, bound);
        r.check("point-is-terminal", e0.sets().iter().all(|&c| c == 1), None);
        r.check("corolla-two-into-interval", edge_maps(&crate::Tree::corolla(2), 1).len() == 5, None);
    });
    for fl in [Flavor::General, Flavor::Open] {
        timed(&mut r, time, &format!("resolution-{}", fl.name()), |r| -> Result<()> {
            let s = build_e(fl, bound, DEFAULT_BUDGET)?;
            let name = fl.name();
            r.check(format!("{name}-complete"), s.is_complete(), s.exhausted_at.map(|l| format!("budget hit at level {l}")));
            r.check(format!("{name}-normal"), s.check_normal(), None);
            r.check(format!("{name}-fillers"), s.check_fillers(), None);
            r.check(format!("{name}-stable"), s.check_stability(), None);
            r.count(format!("{name}-glued"), s.glued.len());
            r.count(format!("{name}-elements"), s.top().total());
            Ok(())
        })?;
    }
    Ok(r)
}

/// Coskeletal reduction of boundary inclusions.
pub fn verify_reduction(max_size: usize, time: bool) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("reduction");
    let mut bad = 0;
    timed(&mut r, time, "boundaries", |_| -> Result<()> {
        for t in TreeCategory::get(Flavor::General, max_size).objects() {
            let b = boundary(t, max_size);
            for n in 0..=max_size {
                let red = coskeletal_reduction(&b, n)?;
                let ok = if t.size() == n {
                    !red.is_iso() && red.source().sets() == b.source().sets() && red.target().sets() == b.target().sets()
                } else {
                    red.is_iso()
                };
                bad += !ok as usize;
            }
        }
        Ok(())
    })?;
    r.check("reduction-of-boundaries", bad == 0, None);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// Every suite at bounds chosen by `level`.
pub fn verify_all(level: Level, time: bool) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("all");
    let (trees, carrier, norm, arity) = match level {
        Level::Quick => (3, 3, (2, 2), 5),
        Level::Full => (5, 4, (3, 2), 6),
    };
    r.merge(verify_trees(trees, time));
    r.merge(verify_gset(carrier, time));
    r.merge(verify_normality(norm.0, norm.1, time)?);
    r.merge(verify_ass(arity, 5, time)?);
    r.merge(verify_e(3, time)?);
    r.merge(verify_reduction(trees.min(4), time)?);
    Ok(r)
}

pub fn presheaf_summary(x: &FinitePresheaf) -> BTreeMap<String, u64> {
    let cat = x.cat();
    cat.objects().iter().enumerate().map(|(o, t)| (crate::print_term(t), x.count(o) as u64)).collect()
}
