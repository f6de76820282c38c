//! Acceptance battery. Runs without the libtest harness so that every
//! criterion prints exactly one pass/fail line; exits nonzero on any failure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dendro::closed_ops::{
    ass_operations, closed_nerve_ass, coskeletal_degree_search, has_unique_very_inner_fillers, matching_report,
};
use dendro::gset::{
    equivariant_maps, gsets_upto, has_llp_generator, random_tower_map, reindex_free_complement, reindex_to_injective,
    FiniteGSet, FiniteGroup, GMap, GSetTower, TowerMap, Verdict,
};
use dendro::homotopy::{build_e, cal_e, EConstructionState, DEFAULT_BUDGET};
use dendro::lean::{coskeleton_unit, evaluate_lean, LeanObject};
use dendro::lifting::coskeletal_reduction;
use dendro::morphism::find_iso;
use dendro::nat::{naive_nat_count, NatSearch};
use dendro::normality::{fixed_complement_element, is_normal_mono_upto, llp_normality_check, LeanMap};
use dendro::presheaf::{boundary, skeleton, FinitePresheaf, PresheafMap, Representable};
use dendro::sample::{all_maps, small_presheaves};
use dendro::simplicial::FiniteSimplicialSet;
use dendro::{automorphisms, compose, elementary_maps, enumerate_trees, hom_set, Flavor, OmegaMorphism, Tree, TreeCategory};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- shared oracles -------------------------------------------------------

/// Aut(T) acts freely on `X_T` minus the image of `f_T`, and `f` is injective,
/// for every stored tree of size ≤ n. Written directly against the tables.
fn normal_mono_oracle(f: &PresheafMap, n: usize) -> bool {
    let cat = f.cat();
    (0..cat.num_objects()).filter(|&o| cat.size(o) <= n).all(|o| {
        let comp = &f.comps()[o];
        let image: BTreeSet<usize> = comp.iter().copied().collect();
        if image.len() != comp.len() {
            return false;
        }
        let y = f.target();
        (0..y.count(o)).filter(|v| !image.contains(v)).all(|v| {
            cat.automorphisms(o).iter().all(|&g| g == cat.identity(o) || y.act(g, v) != v)
        })
    })
}

fn normal_oracle(x: &Arc<FinitePresheaf>, n: usize) -> bool {
    let empty = Arc::new(FinitePresheaf::empty(x.cat().clone()));
    let f = PresheafMap::new(empty, x.clone(), vec![Vec::new(); x.cat().num_objects()]).unwrap();
    normal_mono_oracle(&f, n)
}

/// The map `Ω[t] → x` picking `z ∈ x_t`, with `t` a stored object.
fn yoneda(x: &FinitePresheaf, t_obj: usize, z: usize) -> Vec<Vec<usize>> {
    let cat = x.cat();
    let rep = Representable::on(cat.object(t_obj), cat.clone());
    (0..cat.num_objects())
        .map(|s| {
            rep.maps[s]
                .iter()
                .map(|m| {
                    let a = cat.find_arrow(s, t_obj, m).expect("every element is an arrow");
                    x.act(a, z)
                })
                .collect()
        })
        .collect()
}

fn bijective(rows: &[Vec<usize>], targets: &[usize]) -> bool {
    rows.iter().zip(targets).all(|(r, &k)| r.len() == k && r.iter().collect::<BTreeSet<_>>().len() == k)
}

// ---- criteria -------------------------------------------------------------

/// Hom sets by edge-map filtering against composites of elementary maps,
/// built here from faces, degeneracies and automorphisms with explicit
/// relabelling onto the enumerated representatives.
fn c01_hom_sets() -> Outcome {
    const MAX: usize = 4;
    let trees = enumerate_trees(MAX, Flavor::General);
    let id_of = |t: &Tree| trees.iter().position(|c| find_iso(c, t).is_some()).expect("representative exists");
    let mut gens: Vec<OmegaMorphism> = Vec::new();
    for t in &trees {
        for (kind, m) in elementary_maps(t) {
            if kind.is_face() {
                if m.source.size() > MAX {
                    continue;
                }
                let c = &trees[id_of(&m.source)];
                let iso = OmegaMorphism::new(c.clone(), m.source.clone(), find_iso(c, &m.source).unwrap()).unwrap();
                gens.push(compose(&m, &iso).unwrap());
            } else {
                let c = &trees[id_of(&m.target)];
                let iso = OmegaMorphism::new(m.target.clone(), c.clone(), find_iso(&m.target, c).unwrap()).unwrap();
                gens.push(compose(&iso, &m).unwrap());
            }
        }
        gens.extend(automorphisms(t));
    }
    let key = |t: &Tree| trees.iter().position(|c| c == t).expect("generator endpoints are representatives");
    let mut closure: BTreeMap<(usize, usize), BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut stack: Vec<OmegaMorphism> = trees.iter().map(OmegaMorphism::identity).collect();
    for m in &stack {
        closure.entry((key(&m.source), key(&m.target))).or_default().insert(m.edge_map.clone());
    }
    while let Some(m) = stack.pop() {
        for g in gens.iter().filter(|g| g.source == m.target) {
            let c = compose(g, &m).unwrap();
            if closure.entry((key(&c.source), key(&c.target))).or_default().insert(c.edge_map.clone()) {
                stack.push(c);
            }
        }
    }
    let mut total = 0;
    for (i, s) in trees.iter().enumerate() {
        for (j, t) in trees.iter().enumerate() {
            let direct: BTreeSet<Vec<usize>> = hom_set(s, t).unwrap().into_iter().map(|m| m.edge_map).collect();
            let generated = closure.get(&(i, j)).cloned().unwrap_or_default();
            ensure(direct == generated, || format!("{s} -> {t}: {} direct vs {} generated", direct.len(), generated.len()))?;
            total += direct.len();
        }
    }
    Ok(format!("{} trees, {} morphisms, all hom sets equal", trees.len(), total))
}

fn c02_degeneracy_freeness() -> Outcome {
    let trees = enumerate_trees(5, Flavor::General);
    let (mut degens, mut violations) = (0, 0);
    for t in &trees {
        let auts = automorphisms(t);
        for s in &trees {
            for d in hom_set(t, s).unwrap().into_iter().filter(|m| m.is_split_epi() && !m.is_iso()) {
                degens += 1;
                violations += auts.iter().filter(|g| !g.is_identity() && compose(&d, g).unwrap() == d).count();
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("{degens} degeneracies over {} trees, 0 violations", trees.len()))
}

/// Boundary as the elements of the representable that miss an edge or a
/// stump. Faces never create stumps and degeneracies keep them, so a map is
/// onto exactly when it hits every edge and its source has as many stumps.
fn c03_boundary_is_skeleton() -> Outcome {
    const MAX: usize = 5;
    let mut checked = 0;
    for fl in [Flavor::General, Flavor::Open, Flavor::Closed] {
        let cat = TreeCategory::get(fl, MAX);
        for t in cat.objects() {
            let rep = Representable::new(t, MAX);
            let oracle: Vec<Vec<usize>> = rep
                .maps
                .iter()
                .enumerate()
                .map(|(o, ms)| {
                    let stumps = cat.object(o).stumps().count();
                    ms.iter()
                        .enumerate()
                        .filter(|(_, m)| {
                            m.iter().collect::<BTreeSet<_>>().len() < t.num_edges() || stumps < t.stumps().count()
                        })
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            let b = boundary(t, MAX);
            let sk = skeleton(&rep.presheaf, t.size().saturating_sub(1));
            let sk_rows: Vec<Vec<usize>> = if t.size() == 0 { vec![Vec::new(); oracle.len()] } else { sk.comps().to_vec() };
            ensure(b.comps() == oracle.as_slice(), || format!("boundary of {t} differs from the oracle"))?;
            ensure(sk_rows == oracle, || format!("skeleton of {t} differs from its boundary"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} trees across three flavors"))
}

fn c04_sk_cosk_adjunction() -> Outcome {
    const INSTANCES: usize = 24;
    let cat = TreeCategory::get(Flavor::General, 3);
    let family = small_presheaves(&cat, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..INSTANCES {
        let x = family[rng.gen_range(0..family.len())].clone();
        let y = family[rng.gen_range(0..family.len())].clone();
        let n = k % 3;
        let cut = cat.objects_upto(n);
        let sk = skeleton(&x, n);
        let unit = coskeleton_unit(&y, n).map_err(|e| e.to_string())?;
        let cosk = unit.target().clone();
        // Ω_(n)-parts: sk_n x agrees with x there, cosk_n y with y through the unit
        let back: Vec<HashMap<usize, usize>> =
            (0..cut).map(|o| unit.comps()[o].iter().enumerate().map(|(i, &v)| (v, i)).collect()).collect();
        let left: Vec<Vec<Vec<usize>>> = all_maps(sk.source(), &y).into_iter().map(|m| m.comps()[..cut].to_vec()).collect();
        let right: Vec<Vec<Vec<usize>>> = all_maps(&x, &cosk)
            .into_iter()
            .map(|m| (0..cut).map(|o| m.comps()[o].iter().map(|v| back[o][v]).collect()).collect())
            .collect();
        let (ls, rs): (BTreeSet<_>, BTreeSet<_>) = (left.iter().cloned().collect(), right.iter().cloned().collect());
        let truncated = naive_nat_count(&x.restrict(n).unwrap(), &y.restrict(n).unwrap(), 1 << 20).expect("small");
        ensure(ls.len() == left.len() && rs.len() == right.len(), || format!("instance {k}: restriction not injective"))?;
        ensure(ls == rs, || format!("instance {k}: hom sets differ"))?;
        ensure(ls.len() == truncated, || format!("instance {k}: {} maps vs {truncated} on the truncation", ls.len()))?;
    }
    Ok(format!("{INSTANCES} random instances, explicit bijection through the truncation"))
}

fn c05_gset_llp() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (k, expected_sets) in [(2, 9), (3, 7)] {
        let g = Arc::new(FiniteGroup::cyclic(k));
        let sets = gsets_upto(&g, 4);
        ensure(sets.len() == expected_sets, || format!("C{k}: {} G-sets, expected {expected_sets}", sets.len()))?;
        let mut maps = 0;
        for x in &sets {
            for y in &sets {
                for m in equivariant_maps(x, y) {
                    maps += 1;
                    let injective = m.iter().collect::<BTreeSet<_>>().len() == m.len();
                    let free = (0..y.len())
                        .filter(|v| !m.contains(v))
                        .all(|v| (1..g.order()).all(|h| y.act(v, h) != v));
                    let f = GMap::new(x.clone(), y.clone(), m).unwrap();
                    ensure(has_llp_generator(&f) == (injective && free), || format!("C{k}: discrepancy at {:?}", f.map))?;
                }
            }
        }
        summary.push(format!("C{k}: {maps} maps"));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{}, 0 discrepancies", summary.join(", ")))
}

fn c2_group() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

fn gs(g: &Arc<FiniteGroup>, table: &[&[usize]]) -> FiniteGSet {
    FiniteGSet::new(g.clone(), table.iter().map(|r| r.to_vec()).collect()).unwrap()
}

/// Towers with a known answer: `(map, mono verdict, free-complement verdict or None if not injective)`.
fn hand_built_towers() -> Vec<(TowerMap, Verdict, Option<Verdict>)> {
    let g = c2_group();
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let p = gs(&g, &[&[0, 0]]);
    let two_p = gs(&g, &[&[0, 0], &[1, 1]]);
    let p_r = gs(&g, &[&[0, 0], &[1, 2], &[2, 1]]);
    let r = gs(&g, &[&[0, 1], &[1, 0]]);
    let p3 = gs(&c3, &[&[0, 0, 0]]);
    let p_r3 = gs(&c3, &[&[0, 0, 0], &[1, 2, 3], &[2, 3, 1], &[3, 1, 2]]);
    let two_p3 = gs(&c3, &[&[0, 0, 0], &[1, 1, 1]]);
    let tower = |levels: Vec<FiniteGSet>, bonds: Vec<Vec<usize>>, st: bool| GSetTower::new(levels, bonds, st).unwrap();
    let map = |x: GSetTower, y: GSetTower, m: Vec<Vec<usize>>| TowerMap::new(x, y, m).unwrap();
    use Verdict::*;
    vec![
        // point into point plus a free orbit, constant
        (map(tower(vec![p.clone(); 3], vec![vec![0]; 2], true), tower(vec![p_r.clone(); 3], vec![vec![0, 1, 2]; 2], true), vec![vec![0]; 3]), Yes, Some(Yes)),
        // fixed point outside the image, forever
        (map(tower(vec![p.clone(); 2], vec![vec![0]], true), tower(vec![two_p.clone(); 2], vec![vec![0, 1]], true), vec![vec![0]; 2]), Yes, Some(No)),
        // same prefix, not known to stabilize
        (map(tower(vec![p.clone(); 2], vec![vec![0]], false), tower(vec![two_p.clone(); 2], vec![vec![0, 1]], false), vec![vec![0]; 2]), Yes, Some(Inconclusive)),
        // two points merged forever
        (map(tower(vec![two_p.clone(); 2], vec![vec![0, 1]], true), tower(vec![p.clone(); 2], vec![vec![0]], true), vec![vec![0, 0]; 2]), No, None),
        // merged, not known to stabilize
        (map(tower(vec![two_p.clone(); 2], vec![vec![0, 1]], false), tower(vec![p.clone(); 2], vec![vec![0]], false), vec![vec![0, 0]; 2]), Inconclusive, None),
        // merged at level 0, separated at level 1
        (map(tower(vec![two_p.clone(); 2], vec![vec![0, 1]], true), tower(vec![p.clone(), two_p.clone()], vec![vec![0, 0]], true), vec![vec![0, 0], vec![0, 1]]), Yes, None),
        // the fixed complement point at level 0 is covered from level 1 on
        (map(tower(vec![p.clone(); 2], vec![vec![0]], true), tower(vec![two_p.clone(), p_r.clone()], vec![vec![0, 1, 1]], true), vec![vec![0]; 2]), Yes, Some(Yes)),
        // regular orbit mapped isomorphically
        (map(tower(vec![r.clone(); 3], vec![vec![0, 1]; 2], true), tower(vec![r.clone(); 3], vec![vec![0, 1]; 2], true), vec![vec![0, 1]; 3]), Yes, Some(Yes)),
        // empty into a free orbit
        (map(tower(vec![FiniteGSet::empty(g.clone()); 2], vec![vec![]], true), tower(vec![r.clone(); 2], vec![vec![0, 1]], true), vec![vec![]; 2]), Yes, Some(Yes)),
        // C3: point into point plus a free orbit
        (map(tower(vec![p3.clone(); 2], vec![vec![0]], true), tower(vec![p_r3.clone(); 2], vec![vec![0, 1, 2, 3]], true), vec![vec![0]; 2]), Yes, Some(Yes)),
        // C3: extra fixed point forever
        (map(tower(vec![p3.clone(); 3], vec![vec![0]; 2], true), tower(vec![two_p3.clone(); 3], vec![vec![0, 1]; 2], true), vec![vec![1]; 3]), Yes, Some(No)),
        // C3: free orbit collapsed onto a point at level 0 only
        (map(tower(vec![p_r3.clone(); 2], vec![vec![0, 1, 2, 3]], true), tower(vec![p3.clone(), p_r3.clone()], vec![vec![0, 0, 0, 0]], true), vec![vec![0; 4], vec![0, 1, 2, 3]]), Yes, None),
    ]
}

/// Output of the injective reindexing: levelwise injective, `f = incl ∘ ρ`,
/// `ρ` onto and compatible with bonds, so top elements of the prefix map onto
/// those of the new tower.
fn check_injective(f: &TowerMap) -> Result<TowerMap, String> {
    let r = reindex_to_injective(f).map_err(|e| e.to_string())?;
    ensure(r.map.is_levelwise_injective(), || "output not levelwise injective".into())?;
    for i in 0..f.maps.len() {
        let incl = &r.map.maps[i];
        ensure(f.maps[i].iter().zip(&r.rho[i]).all(|(&v, &k)| incl[k] == v), || format!("f ≠ incl ∘ ρ at {i}"))?;
        ensure(r.rho[i].iter().collect::<BTreeSet<_>>().len() == r.map.source.levels[i].len(), || format!("ρ not onto at {i}"))?;
        if i + 1 < f.maps.len() {
            for a in 0..f.source.levels[i + 1].len() {
                ensure(r.rho[i][f.source.bonds[i][a]] == r.map.source.bonds[i][r.rho[i + 1][a]], || format!("ρ breaks bonds at {i}"))?;
            }
        }
    }
    ensure(r.verdict == dendro::gset::tower_is_mono(f), || "verdict mismatch".into())?;
    Ok(r.map)
}

/// Output of the free-complement reindexing: injective with free complement at
/// every produced level, and `ξ` sends the top elements of the prefix to
/// compatible sequences whose first components project back correctly.
fn check_free_complement(f: &TowerMap) -> Result<Verdict, String> {
    let r = match reindex_free_complement(f) {
        Ok(r) => r,
        Err(dendro::DendroError::NoWitness(_)) => return Ok(if f.source.stationary { Verdict::No } else { Verdict::Inconclusive }),
        Err(e) => return Err(e.to_string()),
    };
    let m = r.theta.len();
    ensure(r.theta.windows(2).all(|w| w[0] <= w[1]) && r.theta.iter().enumerate().all(|(i, &t)| t >= i), || "θ not admissible".into())?;
    for i in 0..m {
        let level = r.map.level(i);
        ensure(level.is_injective(), || format!("level {i} not injective"))?;
        let y = &level.target;
        let free = (0..y.len()).filter(|v| !level.map.contains(v)).all(|v| y.stabilizer(v).len() == 1);
        ensure(free, || format!("level {i}: complement not free"))?;
    }
    let x = &f.source;
    let top = r.theta[m - 1];
    for a in 0..x.levels[top].len() {
        let seq: Vec<usize> = (0..m).map(|i| r.xi[i][x.project(r.theta[i], top, a)]).collect();
        for i in 0..m {
            ensure(r.pairs[i][seq[i]].0 == x.project(i, top, a), || format!("ξ loses level {i}"))?;
            if i + 1 < m {
                ensure(r.map.source.bonds[i][seq[i + 1]] == seq[i], || format!("ξ breaks bonds at {i}"))?;
            }
        }
    }
    Ok(r.verdict)
}

fn c06_tower_reindexing() -> Outcome {
    let hand = hand_built_towers();
    for (k, (f, mono, free)) in hand.iter().enumerate() {
        let out = check_injective(f).map_err(|e| format!("hand {k}: {e}"))?;
        ensure(dendro::gset::tower_is_mono(f) == *mono, || format!("hand {k}: mono verdict"))?;
        if let Some(v) = free {
            let got = check_free_complement(f).map_err(|e| format!("hand {k}: {e}"))?;
            ensure(got == *v, || format!("hand {k}: free-complement verdict {got:?}, expected {v:?}"))?;
        } else {
            check_free_complement(&out).map_err(|e| format!("hand {k} (reindexed): {e}"))?;
        }
    }
    const RANDOM: usize = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let groups = [Arc::new(FiniteGroup::cyclic(2)), Arc::new(FiniteGroup::cyclic(3))];
    for k in 0..RANDOM {
        let g = &groups[k % 2];
        let f = random_tower_map(&mut rng, g, 2 + k % 3, 4);
        let out = check_injective(&f).map_err(|e| format!("random {k}: {e}"))?;
        check_free_complement(&out).map_err(|e| format!("random {k}: {e}"))?;
    }
    Ok(format!("{} hand-built and {RANDOM} random towers", hand.len()))
}

fn c07_normality_vs_lifting() -> Outcome {
    const FAMILY: usize = 124;
    const MAPS: usize = 16705;
    const NORMAL: usize = 999;
    let cat = TreeCategory::get(Flavor::General, 3);
    let family = small_presheaves(&cat, 2);
    let (mut maps, mut normal) = (0, 0);
    for x in &family {
        for y in &family {
            for f in all_maps(x, y) {
                maps += 1;
                let a = is_normal_mono_upto(&f, 3);
                let b = llp_normality_check(&f, 3).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("discrepancy: normal {a}, lifting {b}"))?;
                ensure(a == normal_mono_oracle(&f, 3), || "normality disagrees with the direct count".into())?;
                normal += a as usize;
            }
        }
    }
    ensure((family.len(), maps, normal) == (FAMILY, MAPS, NORMAL), || {
        format!("family {} maps {maps} normal {normal}, expected {FAMILY}/{MAPS}/{NORMAL}", family.len())
    })?;
    Ok(format!("{FAMILY} presheaves, {MAPS} maps, {NORMAL} normal, 0 discrepancies"))
}

fn check_witness(f: &LeanMap) -> Result<(), String> {
    let w = fixed_complement_element(f).map_err(|e| e.to_string())?;
    let target = &f.target;
    ensure(!f.component(&w.tree).unwrap().contains(&w.element), || "witness lies in the image".into())?;
    // swap the first two root leaves by hand
    let mut swap: Vec<usize> = (0..w.tree.num_edges()).collect();
    swap.swap(w.leaves[0], w.leaves[1]);
    let swap = OmegaMorphism::new(w.tree.clone(), w.tree.clone(), swap).map_err(|e| e.to_string())?;
    ensure(target.act(&swap, w.element).unwrap() == w.element, || "leaf swap moves the witness".into())?;
    ensure(w.stabilizer.contains(&swap.edge_map), || "stabilizer misses the leaf swap".into())?;
    let eta = Tree::eta().with_flavor(target.flavor()).unwrap();
    let count = |t: &Tree| evaluate_lean(target, t).unwrap().len();
    let (yc, ye, yt) = (count(&w.tree), count(&eta), count(&w.base_tree));
    ensure(yc == ye.pow(w.arity as u32 + 1) * yt, || format!("{yc} ≠ {ye}^{} · {yt}", w.arity + 1))?;
    Ok(())
}

fn c08_lean_rigidity() -> Outcome {
    const PER_FLAVOR: usize = 30;
    const DEGREE: usize = 2;
    let terminal = Arc::new(FinitePresheaf::terminal(TreeCategory::get(Flavor::General, DEGREE)));
    let empty = Arc::new(FinitePresheaf::empty(terminal.cat().clone()));
    let f = LeanMap::new(
        LeanObject::new(DEGREE, empty).unwrap(),
        LeanObject::new(DEGREE, terminal.clone()).unwrap(),
        vec![Vec::new(); terminal.cat().num_objects()],
    )
    .unwrap();
    let w = fixed_complement_element(&f).map_err(|e| e.to_string())?;
    ensure(w.tree.corolla_arity() == Some(3), || format!("witness tree {} is not C_3", w.tree))?;
    check_witness(&f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut sampled = 1;
    for fl in [Flavor::General, Flavor::Open] {
        let cat = TreeCategory::get(fl, DEGREE);
        let family = small_presheaves(&cat, 2);
        let mut monos = Vec::new();
        for x in &family {
            for y in &family {
                monos.extend(all_maps(x, y).into_iter().filter(|m| m.is_mono() && !m.is_epi()));
            }
        }
        for _ in 0..PER_FLAVOR {
            let m = &monos[rng.gen_range(0..monos.len())];
            let f = LeanMap::new(
                LeanObject::new(DEGREE, m.source().clone()).unwrap(),
                LeanObject::new(DEGREE, m.target().clone()).unwrap(),
                m.comps().to_vec(),
            )
            .unwrap();
            check_witness(&f).map_err(|e| format!("{}: {e}", fl.name()))?;
            sampled += 1;
        }
    }
    Ok(format!("{sampled} non-surjective lean monos, empty into terminal witnessed on C_3"))
}

/// Tournaments on `n` points whose proper triples are all transitive.
fn matching_oracle(n: usize) -> usize {
    // below three points no pair is a proper subset
    if n < 3 {
        return 1;
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
    (0u64..1 << pairs.len())
        .filter(|&bits| {
            let before = |a: usize, b: usize| if a < b { bits >> idx(a, b) & 1 == 1 } else { bits >> idx(b, a) & 1 == 0 };
            n == 3
                || (0..n).all(|a| {
                    (0..n).all(|b| (0..n).all(|c| a == b || b == c || a == c || !(before(a, b) && before(b, c)) || before(a, c)))
                })
        })
        .count()
}

fn c09_associative_operad() -> Outcome {
    let start = Instant::now();
    let mut fact = 1;
    for n in 0..=7 {
        fact *= n.max(1);
        ensure(ass_operations(n).len() == fact, || format!("|Ass({n})| ≠ {fact}"))?;
    }
    for n in 1..=6 {
        let r = matching_report(n).map_err(|e| e.to_string())?;
        let oracle = matching_oracle(n);
        ensure(r.families == oracle, || format!("arity {n}: {} families, oracle {oracle}", r.families))?;
        match n {
            3 => ensure(r.families == 8 && r.image == 6 && r.injective, || "arity 3".into())?,
            4..=6 => ensure(r.injective && r.surjective, || format!("arity {n} not bijective"))?,
            _ => {}
        }
    }
    let x = Arc::new(closed_nerve_ass(5));
    x.check_functorial_full().map_err(|e| e.to_string())?;
    ensure(normal_oracle(&x, 5), || "nerve not normal".into())?;
    ensure(has_unique_very_inner_fillers(&x, 5).map_err(|e| e.to_string())?, || "filler not unique".into())?;
    let m = coskeletal_degree_search(&x, 5).map_err(|e| e.to_string())?;
    ensure(m.is_some_and(|m| m <= 5), || format!("coskeletal degree {m:?}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1}s"))?;
    Ok(format!("orders n! to 7, matching 8/6 at 3 and bijective 4..6, nerve checks pass, degree {}", m.unwrap()))
}

/// Monotone maps from the edge poset to `[k]`, by brute force over all functions.
fn monotone_count(t: &Tree, k: usize, surjective: Option<bool>) -> usize {
    let e = t.num_edges();
    let mut count = 0;
    let mut f = vec![0usize; e];
    loop {
        let mono = (0..e).all(|a| (0..e).all(|b| !t.edge_leq(a, b) || f[a] <= f[b]));
        let onto = (0..=k).all(|v| f.contains(&v));
        if mono && surjective.is_none_or(|s| s == onto) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == e {
                return count;
            }
            f[i] += 1;
            if f[i] <= k {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

fn c10_edge_functor() -> Outcome {
    const MAX: usize = 4;
    let cat = TreeCategory::get(Flavor::General, MAX);
    for n in 0..=4 {
        let full = cal_e(&FiniteSimplicialSet::delta(n, n), Flavor::General, MAX);
        let bd = cal_e(&FiniteSimplicialSet::boundary_delta(n, n), Flavor::General, MAX);
        for (o, t) in cat.objects().iter().enumerate() {
            ensure(full.count(o) == monotone_count(t, n, None), || format!("Δ[{n}] at {t}"))?;
            if n > 0 {
                ensure(bd.count(o) == monotone_count(t, n, Some(false)), || format!("∂Δ[{n}] at {t}"))?;
            }
            if t.size() < n {
                ensure(full.count(o) == bd.count(o), || format!("boundary differs below dimension at {t}, n = {n}"))?;
            }
        }
    }
    let c2 = cat.index_of(&Tree::corolla(2).key()).unwrap();
    let count = cal_e(&FiniteSimplicialSet::delta(1, 1), Flavor::General, MAX).count(c2);
    ensure(count == 5, || format!("|E(Δ[1])| at C_2 is {count}"))?;
    let point = cal_e(&FiniteSimplicialSet::delta(0, 0), Flavor::General, MAX);
    ensure(point.sets().iter().all(|&c| c == 1), || "E(Δ[0]) not terminal".into())?;
    Ok("boundary agrees below dimension for n ≤ 4, 5 maps at C_2, point is terminal".into())
}

fn check_resolution(s: &EConstructionState) -> Result<(), String> {
    let e = s.top();
    let cat = e.cat().clone();
    ensure(s.is_complete(), || format!("budget hit at {:?}", s.exhausted_at))?;
    ensure(normal_oracle(&e, s.bound), || "not normal".into())?;
    for (o, t) in cat.objects().iter().enumerate() {
        let b = boundary(t, s.bound);
        let fillers: BTreeSet<Vec<Vec<usize>>> = (0..e.count(o))
            .map(|z| {
                let y = yoneda(&e, o, z);
                (0..cat.num_objects()).map(|q| b.comps()[q].iter().map(|&i| y[q][i]).collect()).collect()
            })
            .collect();
        for u in NatSearch::new(b.source(), &e).all() {
            ensure(fillers.contains(&u), || format!("boundary map on {t} has no filler"))?;
        }
    }
    for (n, bond) in s.bonds.iter().enumerate() {
        let cut = cat.objects_upto(n);
        ensure(bijective(&bond.comps()[..cut], &bond.target().sets()[..cut]), || format!("level {n} not stable"))?;
    }
    Ok(())
}

fn c11_resolution() -> Outcome {
    let start = Instant::now();
    let general = build_e(Flavor::General, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check_resolution(&general).map_err(|e| format!("general: {e}"))?;
    let open = build_e(Flavor::Open, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check_resolution(&open).map_err(|e| format!("open: {e}"))?;
    let cat = TreeCategory::get(Flavor::General, 3);
    for (level, t) in [(0, Tree::eta()), (1, Tree::corolla(0))] {
        let e = &general.levels[level];
        let o = cat.index_of(&t.key()).unwrap();
        ensure(e.count(o) == 1, || format!("level {level}: {} elements at {t}", e.count(o)))?;
        let rep = Representable::new(&t, 3);
        ensure(e.sets() == rep.presheaf.sets(), || format!("level {level} sizes {:?}", e.sets()))?;
        ensure(bijective(&yoneda(e, o, 0), e.sets()), || format!("level {level} is not represented by {t}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.1}s"))?;
    Ok(format!("general {} and open {} elements, normal, filled, stable", general.top().total(), open.top().total()))
}

fn c12_coskeletal_reduction() -> Outcome {
    const MAX: usize = 4;
    let mut cases = 0;
    for t in enumerate_trees(MAX, Flavor::General) {
        let b = boundary(&t, MAX);
        for n in 0..=MAX {
            let r = coskeletal_reduction(&b, n).map_err(|e| e.to_string())?;
            if t.size() == n {
                ensure(r.source().sets() == b.source().sets() && r.target().sets() == b.target().sets(), || format!("{t}, n = {n}: shape"))?;
                ensure(r.comps() == b.comps(), || format!("{t}, n = {n}: not the boundary inclusion"))?;
            } else {
                ensure(bijective(r.comps(), r.target().sets()), || format!("{t}, n = {n}: not an isomorphism"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("hom sets equal composites of elementary maps", c01_hom_sets),
        ("automorphisms act freely on degeneracies", c02_degeneracy_freeness),
        ("boundary equals skeleton below the size", c03_boundary_is_skeleton),
        ("skeleton and coskeleton adjunction", c04_sk_cosk_adjunction),
        ("G-set lifting against the generator", c05_gset_llp),
        ("tower reindexing post-conditions", c06_tower_reindexing),
        ("normal monos versus lifting", c07_normality_vs_lifting),
        ("fixed elements outside lean images", c08_lean_rigidity),
        ("associative operad", c09_associative_operad),
        ("edge-poset functor on simplices", c10_edge_functor),
        ("normal resolution of the point", c11_resolution),
        ("coskeletal reduction of boundaries", c12_coskeletal_reduction),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
