//! Finite simplicial sets truncated at a maximal dimension.

use std::collections::HashMap;

use crate::error::{DendroError, Result};

/// All monotone maps `[a] → [b]` as value lists, in lexicographic order.
pub fn monotone_maps(a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(a + 1);
    fn go(a: usize, b: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == a + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=b {
            cur.push(v);
            go(a, b, v, cur, out);
            cur.pop();
        }
    }
    go(a, b, 0, &mut cur, &mut out);
    out
}

pub fn is_surjection(theta: &[usize], b: usize) -> bool {
    let mut hit = vec![false; b + 1];
    for &v in theta {
        hit[v] = true;
    }
    hit.into_iter().all(|h| h)
}

/// Codegeneracy `σ_i: [k] → [k-1]` repeating `i`.
pub fn codegeneracy(k: usize, i: usize) -> Vec<usize> {
    (0..=k).map(|v| if v <= i { v } else { v - 1 }).collect()
}

/// Coface `δ_i: [k-1] → [k]` skipping `i`.
pub fn coface(k: usize, i: usize) -> Vec<usize> {
    (0..k).map(|v| if v < i { v } else { v + 1 }).collect()
}

/// A simplicial set given in dimensions `0..=max_dim`, with the action of
/// every monotone map stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    max_dim: usize,
    sets: Vec<usize>,
    actions: HashMap<(usize, usize, Vec<usize>), Vec<usize>>,
}

impl FiniteSimplicialSet {
    /// `act(θ, b, y)` restricts `y ∈ X_b` along `θ: [a] → [b]`.
    pub fn from_fn(max_dim: usize, sets: Vec<usize>, act: impl Fn(&[usize], usize, usize) -> usize) -> Result<Self> {
        if sets.len() != max_dim + 1 {
            return Err(DendroError::ShapeMismatch(format!("need {} dimensions, got {}", max_dim + 1, sets.len())));
        }
        let mut actions = HashMap::new();
        for a in 0..=max_dim {
            for b in 0..=max_dim {
                for theta in monotone_maps(a, b) {
                    let table: Vec<usize> = (0..sets[b]).map(|y| act(&theta, b, y)).collect();
                    if table.iter().any(|&x| x >= sets[a]) {
                        return Err(DendroError::ShapeMismatch(format!("action of {theta:?} leaves dimension {a}")));
                    }
                    actions.insert((a, b, theta), table);
                }
            }
        }
        let m = FiniteSimplicialSet { max_dim, sets, actions };
        m.check()?;
        Ok(m)
    }

    /// The standard simplex `Δ[n]`: monotone maps into `[n]`.
    pub fn delta(n: usize, max_dim: usize) -> Self {
        Self::simplex_sub(n, max_dim, |_| true)
    }

    /// `∂Δ[n]`: the non-surjective maps into `[n]`.
    pub fn boundary_delta(n: usize, max_dim: usize) -> Self {
        Self::simplex_sub(n, max_dim, |th| !is_surjection(th, n))
    }

    fn simplex_sub(n: usize, max_dim: usize, keep: impl Fn(&[usize]) -> bool) -> Self {
        let cells: Vec<Vec<Vec<usize>>> =
            (0..=max_dim).map(|k| monotone_maps(k, n).into_iter().filter(|m| keep(m)).collect()).collect();
        let sets = cells.iter().map(Vec::len).collect();
        Self::from_fn(max_dim, sets, |theta, b, y| {
            let comp: Vec<usize> = theta.iter().map(|&v| cells[b][y][v]).collect();
            cells[theta.len() - 1].binary_search(&comp).expect("closed under restriction")
        })
        .expect("simplices are simplicial sets")
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn count(&self, k: usize) -> usize {
        self.sets[k]
    }

    pub fn sets(&self) -> &[usize] {
        &self.sets
    }

    pub fn act(&self, theta: &[usize], b: usize, y: usize) -> usize {
        self.actions[&(theta.len() - 1, b, theta.to_vec())][y]
    }

    /// Identities act trivially and actions compose contravariantly.
    pub fn check(&self) -> Result<()> {
        let k = self.max_dim;
        for a in 0..=k {
            let id: Vec<usize> = (0..=a).collect();
            if (0..self.sets[a]).any(|y| self.act(&id, a, y) != y) {
                return Err(DendroError::NotFunctorial(format!("identity of [{a}] acts nontrivially")));
            }
        }
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    for th in monotone_maps(a, b) {
                        for ph in monotone_maps(b, c) {
                            let comp: Vec<usize> = th.iter().map(|&v| ph[v]).collect();
                            for y in 0..self.sets[c] {
                                if self.act(&comp, c, y) != self.act(&th, b, self.act(&ph, c, y)) {
                                    return Err(DendroError::NotFunctorial(format!("{th:?} then {ph:?}")));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_nondegenerate(&self, k: usize, y: usize) -> bool {
        (0..k).all(|i| self.act(&codegeneracy(k, i), k - 1, self.act(&coface(k, i), k, y)) != y)
    }

    pub fn nondegenerate(&self, k: usize) -> Vec<usize> {
        (0..self.sets[k]).filter(|&y| self.is_nondegenerate(k, y)).collect()
    }

    /// `y = σ*z` with `z` nondegenerate of dimension `j` and `σ: [k] ↠ [j]`.
    pub fn normal_form(&self, k: usize, y: usize) -> (usize, usize, Vec<usize>) {
        for i in 0..k {
            let down = self.act(&coface(k, i), k, y);
            let sigma = codegeneracy(k, i);
            if self.act(&sigma, k - 1, down) == y {
                let (j, z, tau) = self.normal_form(k - 1, down);
                return (j, z, sigma.iter().map(|&v| tau[v]).collect());
            }
        }
        (k, y, (0..=k).collect())
    }

    /// Simplices that are degeneracies of simplices of dimension ≤ n.
    pub fn skeleton(&self, n: usize) -> Self {
        let keep: Vec<Vec<usize>> =
            (0..=self.max_dim).map(|k| (0..self.sets[k]).filter(|&y| self.normal_form(k, y).0 <= n).collect()).collect();
        let sets = keep.iter().map(Vec::len).collect();
        Self::from_fn(self.max_dim, sets, |theta, b, y| {
            let a = theta.len() - 1;
            keep[a].binary_search(&self.act(theta, b, keep[b][y])).expect("skeleta are closed")
        })
        .expect("skeleta are simplicial sets")
    }
}
