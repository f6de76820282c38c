//! Backtracking search for natural transformations `X → Y`.
//!
//! One variable per element `(T, x)` of `X`; its domain is a subset of `Y_T`.
//! Every generating arrow `m: S → T` ties `(T, x)` to `(S, m*x)` through the
//! table `Y(m)`. Domains that shrink to one value are treated as assigned
//! and propagated immediately.

use crate::presheaf::FinitePresheaf;

pub struct NatSearch<'a> {
    y: &'a FinitePresheaf,
    offsets: Vec<usize>,
    cell_obj: Vec<usize>,
    domains: Vec<Vec<u32>>,
    out_edges: Vec<Vec<(u32, u32)>>,
    in_edges: Vec<Vec<(u32, u32)>>,
}

enum Undo {
    Domain(usize, Vec<u32>),
    Fixed(usize),
}

struct State {
    domains: Vec<Vec<u32>>,
    fixed: Vec<bool>,
    trail: Vec<Undo>,
}

impl<'a> NatSearch<'a> {
    pub fn new(x: &'a FinitePresheaf, y: &'a FinitePresheaf) -> Self {
        assert_eq!(x.flavor(), y.flavor(), "presheaves on different categories");
        assert_eq!(x.truncation(), y.truncation(), "presheaves on different categories");
        let cat = x.cat();
        let mut offsets = Vec::with_capacity(cat.num_objects() + 1);
        let mut cell_obj = Vec::new();
        for o in 0..cat.num_objects() {
            offsets.push(cell_obj.len());
            cell_obj.extend(std::iter::repeat_n(o, x.count(o)));
        }
        offsets.push(cell_obj.len());
        let n = cell_obj.len();
        let mut domains: Vec<Vec<u32>> = cell_obj.iter().map(|&o| (0..y.count(o) as u32).collect()).collect();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for &g in cat.generators() {
            let ar = cat.arrow(g);
            for xi in 0..x.count(ar.tgt) {
                let from = offsets[ar.tgt] + xi;
                let to = offsets[ar.src] + x.act(g, xi);
                if from == to {
                    domains[from].retain(|&v| y.act(g, v as usize) == v as usize);
                } else {
                    out_edges[from].push((to as u32, g as u32));
                    in_edges[to].push((from as u32, g as u32));
                }
            }
        }
        NatSearch { y, offsets, cell_obj, domains, out_edges, in_edges }
    }

    pub fn num_cells(&self) -> usize {
        self.cell_obj.len()
    }

    /// Keeps only the allowed values at element `xi` of `X_o`.
    pub fn restrict(&mut self, o: usize, xi: usize, allowed: impl Fn(usize) -> bool) {
        self.domains[self.offsets[o] + xi].retain(|&v| allowed(v as usize));
    }

    pub fn fix(&mut self, o: usize, xi: usize, v: usize) {
        self.restrict(o, xi, |w| w == v);
    }

    /// Calls `f` on each solution (components per object) until it returns false.
    pub fn for_each(&self, mut f: impl FnMut(&[Vec<usize>]) -> bool) {
        let n = self.num_cells();
        let mut st = State { domains: self.domains.clone(), fixed: vec![false; n], trail: Vec::new() };
        if st.domains.iter().any(Vec::is_empty) {
            return;
        }
        let seeds: Vec<usize> = (0..n).filter(|&c| st.domains[c].len() == 1).collect();
        if !self.propagate(&mut st, seeds) {
            return;
        }
        self.search(&mut st, &mut f);
    }

    pub fn first(&self) -> Option<Vec<Vec<usize>>> {
        let mut found = None;
        self.for_each(|s| {
            found = Some(s.to_vec());
            false
        });
        found
    }

    pub fn all(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.for_each(|s| {
            out.push(s.to_vec());
            true
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut k = 0;
        self.for_each(|_| {
            k += 1;
            true
        });
        k
    }

    fn search(&self, st: &mut State, f: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
        let mut best: Option<usize> = None;
        for c in 0..self.num_cells() {
            if st.fixed[c] {
                continue;
            }
            let len = st.domains[c].len();
            if best.is_none_or(|b| len < st.domains[b].len()) {
                best = Some(c);
                if len == 2 {
                    break;
                }
            }
        }
        let Some(c) = best else {
            let comps: Vec<Vec<usize>> = (0..self.offsets.len() - 1)
                .map(|o| (self.offsets[o]..self.offsets[o + 1]).map(|c| st.domains[c][0] as usize).collect())
                .collect();
            return f(&comps);
        };
        let options = st.domains[c].clone();
        for v in options {
            let mark = st.trail.len();
            let old = std::mem::replace(&mut st.domains[c], vec![v]);
            st.trail.push(Undo::Domain(c, old));
            let go_on = !self.propagate(st, vec![c]) || self.search(st, f);
            undo(st, mark);
            if !go_on {
                return false;
            }
        }
        true
    }

    fn propagate(&self, st: &mut State, mut queue: Vec<usize>) -> bool {
        while let Some(c) = queue.pop() {
            if st.fixed[c] {
                continue;
            }
            st.fixed[c] = true;
            st.trail.push(Undo::Fixed(c));
            let v = st.domains[c][0] as usize;
            for &(d, m) in &self.out_edges[c] {
                let d = d as usize;
                let w = self.y.act(m as usize, v) as u32;
                let dom = &st.domains[d];
                if dom.len() == 1 && dom[0] == w {
                    continue;
                }
                if !dom.contains(&w) {
                    return false;
                }
                let old = std::mem::replace(&mut st.domains[d], vec![w]);
                st.trail.push(Undo::Domain(d, old));
                queue.push(d);
            }
            for &(b, m) in &self.in_edges[c] {
                let b = b as usize;
                let table = self.y.action(m as usize);
                let dom = &st.domains[b];
                let kept: Vec<u32> = dom.iter().copied().filter(|&u| table[u as usize] == v).collect();
                if kept.is_empty() {
                    return false;
                }
                if kept.len() == dom.len() {
                    continue;
                }
                let single = kept.len() == 1;
                let old = std::mem::replace(&mut st.domains[b], kept);
                st.trail.push(Undo::Domain(b, old));
                if single {
                    queue.push(b);
                }
            }
        }
        true
    }
}

fn undo(st: &mut State, mark: usize) {
    while st.trail.len() > mark {
        match st.trail.pop().unwrap() {
            Undo::Domain(c, old) => st.domains[c] = old,
            Undo::Fixed(c) => st.fixed[c] = false,
        }
    }
}

/// Brute force over all families of functions; used to validate the search.
pub fn naive_nat_count(x: &FinitePresheaf, y: &FinitePresheaf, limit: usize) -> Option<usize> {
    let cat = x.cat();
    let cells: Vec<(usize, usize)> = (0..cat.num_objects()).flat_map(|o| (0..x.count(o)).map(move |i| (o, i))).collect();
    let mut space = 1usize;
    for &(o, _) in &cells {
        space = space.checked_mul(y.count(o))?;
        if space > limit {
            return None;
        }
    }
    let mut comps: Vec<Vec<usize>> = (0..cat.num_objects()).map(|o| vec![0; x.count(o)]).collect();
    let mut count = 0;
    for mut k in 0..space {
        for &(o, i) in &cells {
            comps[o][i] = k % y.count(o);
            k /= y.count(o);
        }
        let natural = (0..cat.num_arrows()).all(|a| {
            let ar = cat.arrow(a);
            (0..x.count(ar.tgt)).all(|xi| comps[ar.src][x.act(a, xi)] == y.act(a, comps[ar.tgt][xi]))
        });
        count += usize::from(natural);
    }
    Some(count)
}
