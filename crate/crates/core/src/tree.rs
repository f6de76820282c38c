//! Finite rooted trees with leaf/stump distinction.
//!
//! Edges carry small integer ids assigned in preorder, so the root is always
//! edge `0` and a vertex's output edge precedes its inputs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DendroError, Result};

/// Which full subcategory of Ω a tree lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    General,
    /// No stumps.
    Open,
    /// No leaves.
    Closed,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::General, Flavor::Open, Flavor::Closed];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::General => "general",
            Flavor::Open => "open",
            Flavor::Closed => "closed",
        }
    }

    pub fn admits(self, t: &Tree) -> bool {
        match self {
            Flavor::General => true,
            Flavor::Open => t.stumps().next().is_none(),
            Flavor::Closed => t.leaves().next().is_none(),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Flavor {
    type Err = DendroError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" | "g" => Ok(Flavor::General),
            "open" | "o" => Ok(Flavor::Open),
            "closed" | "cl" | "c" => Ok(Flavor::Closed),
            _ => Err(DendroError::Malformed(format!("unknown flavor `{s}`"))),
        }
    }
}

/// Recursive description of the part of a tree above an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf,
    Vertex(Vec<Node>),
}

impl Node {
    pub fn corolla(n: usize) -> Node {
        Node::Vertex(vec![Node::Leaf; n])
    }

    fn canonical_string(&self) -> String {
        match self {
            Node::Leaf => "*".to_string(),
            Node::Vertex(kids) => {
                let mut parts: Vec<String> = kids.iter().map(Node::canonical_string).collect();
                parts.sort();
                let mut s = String::with_capacity(2 + parts.iter().map(String::len).sum::<usize>());
                s.push('[');
                for p in parts {
                    s.push_str(&p);
                }
                s.push(']');
                s
            }
        }
    }
}

/// A finite rooted tree; an object of Ω, Ω_o or Ω_cl depending on `flavor`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    flavor: Flavor,
    parent: Vec<Option<usize>>,
    /// `None` for a leaf terminus, otherwise the inputs of the vertex on top of the edge.
    top: Vec<Option<Vec<usize>>>,
}

/// Canonical form of a tree: equal iff the trees are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeKey {
    pub canon: String,
    pub flavor: Flavor,
}

impl fmt::Display for TreeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canon)
    }
}

impl Tree {
    pub fn from_node(node: &Node, flavor: Flavor) -> Result<Tree> {
        let mut t = Tree { flavor, parent: Vec::new(), top: Vec::new() };
        t.push_node(node, None);
        if t.parent.len() > 64 {
            return Err(DendroError::Malformed("trees are limited to 64 edges".into()));
        }
        t.check_flavor()?;
        Ok(t)
    }

    fn push_node(&mut self, node: &Node, parent: Option<usize>) -> usize {
        let id = self.parent.len();
        self.parent.push(parent);
        self.top.push(None);
        if let Node::Vertex(kids) = node {
            let mut inputs = Vec::with_capacity(kids.len());
            for k in kids {
                inputs.push(self.push_node(k, Some(id)));
            }
            self.top[id] = Some(inputs);
        }
        id
    }

    fn check_flavor(&self) -> Result<()> {
        if self.flavor.admits(self) {
            return Ok(());
        }
        let msg = match self.flavor {
            Flavor::Open => "open trees have no stumps",
            Flavor::Closed => "closed trees have no leaves",
            Flavor::General => unreachable!(),
        };
        Err(DendroError::FlavorViolation { flavor: self.flavor, msg: msg.into() })
    }

    /// The unit tree η: a single edge, no vertices.
    pub fn eta() -> Tree {
        Tree { flavor: Flavor::General, parent: vec![None], top: vec![None] }
    }

    /// Corolla with `n` leaves; `corolla(0)` is the stump tree C_0.
    pub fn corolla(n: usize) -> Tree {
        Tree::from_node(&Node::corolla(n), Flavor::General).expect("corolla")
    }

    /// Linear tree i([n]): `n` unary vertices stacked on one leaf.
    pub fn linear(n: usize) -> Tree {
        let mut node = Node::Leaf;
        for _ in 0..n {
            node = Node::Vertex(vec![node]);
        }
        Tree::from_node(&node, Flavor::General).expect("linear")
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Re-tags the tree, checking the flavor constraint.
    pub fn with_flavor(&self, flavor: Flavor) -> Result<Tree> {
        let t = Tree { flavor, ..self.clone() };
        t.check_flavor()?;
        Ok(t)
    }

    pub fn num_edges(&self) -> usize {
        self.parent.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.top.iter().filter(|t| t.is_some()).count()
    }

    /// Non-root edges plus vertices.
    pub fn size(&self) -> usize {
        self.num_edges() - 1 + self.num_vertices()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn parent(&self, e: usize) -> Option<usize> {
        self.parent[e]
    }

    /// Inputs of the vertex on top of `e`, or `None` when `e` is a leaf.
    pub fn inputs(&self, e: usize) -> Option<&[usize]> {
        self.top[e].as_deref()
    }

    pub fn is_leaf(&self, e: usize) -> bool {
        self.top[e].is_none()
    }

    pub fn is_stump_edge(&self, e: usize) -> bool {
        matches!(&self.top[e], Some(v) if v.is_empty())
    }

    pub fn is_inner(&self, e: usize) -> bool {
        e != 0 && self.top[e].is_some()
    }

    /// Inner edge whose top vertex is not a stump.
    pub fn is_very_inner(&self, e: usize) -> bool {
        self.is_inner(e) && !self.is_stump_edge(e)
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_edges()).filter(move |&e| self.top[e].is_none())
    }

    pub fn stumps(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_edges()).filter(move |&e| self.is_stump_edge(e))
    }

    /// Output edges of all vertices, in preorder.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_edges()).filter(move |&e| self.top[e].is_some())
    }

    pub fn inner_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.num_edges()).filter(move |&e| self.top[e].is_some())
    }

    /// A corolla C_n (one vertex, every input a leaf), `n` ≥ 0.
    pub fn corolla_arity(&self) -> Option<usize> {
        match &self.top[0] {
            Some(ins) if ins.iter().all(|&c| self.is_leaf(c)) => Some(ins.len()),
            _ => None,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.top.iter().all(|t| t.as_ref().is_none_or(|v| v.len() == 1))
    }

    pub fn to_node(&self) -> Node {
        self.node_at(0)
    }

    fn node_at(&self, e: usize) -> Node {
        match &self.top[e] {
            None => Node::Leaf,
            Some(ins) => Node::Vertex(ins.iter().map(|&c| self.node_at(c)).collect()),
        }
    }

    pub fn key(&self) -> TreeKey {
        TreeKey { canon: self.to_node().canonical_string(), flavor: self.flavor }
    }

    /// Isomorphic copy with children in canonical order, plus the edge
    /// bijection `self -> canonical`.
    pub fn canonicalize(&self) -> (Tree, Vec<usize>) {
        let mut out = Tree { flavor: self.flavor, parent: Vec::new(), top: Vec::new() };
        let mut map = vec![usize::MAX; self.num_edges()];
        let strings: Vec<String> = (0..self.num_edges()).map(|e| self.node_at(e).canonical_string()).collect();
        self.push_canonical(0, None, &strings, &mut out, &mut map);
        (out, map)
    }

    fn push_canonical(&self, e: usize, parent: Option<usize>, strings: &[String], out: &mut Tree, map: &mut [usize]) {
        let id = out.parent.len();
        out.parent.push(parent);
        out.top.push(None);
        map[e] = id;
        if let Some(ins) = &self.top[e] {
            let mut order = ins.clone();
            // stable sort keeps the result deterministic among equal subtrees
            order.sort_by(|&a, &b| strings[a].cmp(&strings[b]));
            let mut new_ins = Vec::with_capacity(order.len());
            for c in order {
                new_ins.push(out.parent.len());
                self.push_canonical(c, Some(id), strings, out, map);
            }
            out.top[id] = Some(new_ins);
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().1.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Mask of edges `x` with `x ≤ e`, i.e. the subtree standing on `e`.
    pub fn subtree_mask(&self, e: usize) -> u64 {
        let mut m = 1u64 << e;
        if let Some(ins) = &self.top[e] {
            for &c in ins {
                m |= self.subtree_mask(c);
            }
        }
        m
    }

    pub fn leaf_mask(&self) -> u64 {
        self.leaves().fold(0, |m, e| m | (1u64 << e))
    }

    /// Poset order: `e ≤ f` iff the path from `e` to the root passes through `f`.
    pub fn edge_leq(&self, e: usize, f: usize) -> bool {
        let mut cur = Some(e);
        while let Some(c) = cur {
            if c == f {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    pub fn edge_poset(&self) -> EdgePoset {
        let n = self.num_edges();
        let mut leq = vec![vec![false; n]; n];
        for (e, row) in leq.iter_mut().enumerate() {
            for (f, cell) in row.iter_mut().enumerate() {
                *cell = self.edge_leq(e, f);
            }
        }
        EdgePoset { leq }
    }

    /// Term with children in stored order (not canonicalized).
    pub fn presentation(&self) -> String {
        let mut s = String::new();
        self.write_presentation(0, &mut s);
        s
    }

    fn write_presentation(&self, e: usize, s: &mut String) {
        match &self.top[e] {
            None => s.push('*'),
            Some(ins) => {
                s.push('[');
                for &c in ins {
                    self.write_presentation(c, s);
                }
                s.push(']');
            }
        }
    }

    /// Caps every leaf with a stump.
    pub fn closure(&self) -> Tree {
        let mut t = self.clone();
        for e in 0..t.num_edges() {
            if t.top[e].is_none() {
                t.top[e] = Some(Vec::new());
            }
        }
        t.flavor = Flavor::Closed;
        t
    }

    /// Identifies the root of `top` with the leaf `leaf` of `self`.
    pub fn graft(&self, leaf: usize, top: &Tree) -> Result<Tree> {
        if leaf >= self.num_edges() {
            return Err(DendroError::EdgeOutOfRange { edge: leaf, edges: self.num_edges() });
        }
        if !self.is_leaf(leaf) {
            return Err(DendroError::NotALeaf(leaf));
        }
        let node = self.graft_node(0, leaf, &top.to_node());
        let flavor = if self.flavor == top.flavor { self.flavor } else { Flavor::General };
        Tree::from_node(&node, flavor)
    }

    fn graft_node(&self, e: usize, leaf: usize, top: &Node) -> Node {
        if e == leaf {
            return top.clone();
        }
        match &self.top[e] {
            None => Node::Leaf,
            Some(ins) => Node::Vertex(ins.iter().map(|&c| self.graft_node(c, leaf, top)).collect()),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n  rankdir=BT;\n  node [shape=point];\n");
        out.push_str("  base [shape=none, label=\"\"];\n");
        for e in 0..self.num_edges() {
            let upper = if self.top[e].is_some() { format!("v{e}") } else { format!("l{e}") };
            if self.top[e].is_some() {
                let style = if self.is_stump_edge(e) { ", color=gray" } else { "" };
                out.push_str(&format!("  v{e} [shape=circle, width=0.12, style=filled{style}];\n"));
            } else {
                out.push_str(&format!("  l{e} [shape=none, label=\"\"];\n"));
            }
            let lower = match self.parent[e] {
                None => "base".to_string(),
                Some(p) => format!("v{p}"),
            };
            out.push_str(&format!("  {lower} -> {upper} [arrowhead=none, label=\"{e}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.presentation())
    }
}

/// The edges of a tree ordered towards the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePoset {
    leq: Vec<Vec<bool>>,
}

impl EdgePoset {
    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq[x][m]))
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&m| (0..self.len()).all(|x| x == m || !self.leq[x][m])).collect()
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            if !self.leq[a][a] {
                return false;
            }
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    return false;
                }
                for c in 0..n {
                    if self.leq[a][b] && self.leq[b][c] && !self.leq[a][c] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_total(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.leq[a][b] || self.leq[b][a]))
    }
}

/// Parses `T ::= "*" | "[" T* "]"`; whitespace is ignored.
pub fn parse_term(text: &str, flavor: Flavor) -> Result<Tree> {
    let bytes: Vec<(usize, u8)> = text.bytes().enumerate().filter(|(_, b)| !b.is_ascii_whitespace()).collect();
    let mut pos = 0;
    let node = parse_node(&bytes, &mut pos, text.len())?;
    if pos < bytes.len() {
        return Err(DendroError::Syntax { pos: bytes[pos].0, msg: "trailing input".into() });
    }
    Tree::from_node(&node, flavor)
}

fn parse_node(bytes: &[(usize, u8)], pos: &mut usize, end: usize) -> Result<Node> {
    let Some(&(at, b)) = bytes.get(*pos) else {
        return Err(DendroError::Syntax { pos: end, msg: "unexpected end of input".into() });
    };
    match b {
        b'*' => {
            *pos += 1;
            Ok(Node::Leaf)
        }
        b'[' => {
            *pos += 1;
            let mut kids = Vec::new();
            loop {
                match bytes.get(*pos) {
                    None => return Err(DendroError::Syntax { pos: end, msg: "unclosed `[`".into() }),
                    Some(&(_, b']')) => {
                        *pos += 1;
                        return Ok(Node::Vertex(kids));
                    }
                    Some(_) => kids.push(parse_node(bytes, pos, end)?),
                }
            }
        }
        other => Err(DendroError::Syntax { pos: at, msg: format!("unexpected character `{}`", other as char) }),
    }
}

/// Canonical term of a tree.
pub fn print_term(t: &Tree) -> String {
    t.key().canon
}

/// All trees of size ≤ `max_size` in `flavor`, one per isomorphism class,
/// sorted by (size, canonical key). Trees come out canonicalized.
pub fn enumerate_trees(max_size: usize, flavor: Flavor) -> Vec<Tree> {
    // nodes[w] = canonical strings of subtrees of weight w, where weight of a
    // vertex node is 1 + sum(1 + weight(child)) and a leaf weighs 0
    let mut by_weight: Vec<Vec<Node>> = vec![Vec::new(); max_size + 1];
    by_weight[0].push(Node::Leaf);
    for w in 1..=max_size {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut kids = Vec::new();
        multisets(&by_weight, w - 1, 0, 0, &mut kids, &mut |ks: &[Node]| {
            let n = Node::Vertex(ks.to_vec());
            if seen.insert(n.canonical_string()) {
                out.push(n);
            }
        });
        by_weight[w] = out;
    }
    let mut trees: Vec<Tree> = by_weight
        .iter()
        .flatten()
        .filter_map(|n| {
            let t = Tree::from_node(n, Flavor::General).ok()?;
            t.with_flavor(flavor).ok().map(|t| t.canonicalize().0)
        })
        .collect();
    trees.sort_by_cached_key(|t| (t.size(), t.key().canon));
    trees
}

/// Multisets of children whose total cost `sum(1 + weight)` equals `budget`,
/// generated with nondecreasing (weight, index) to avoid repeats.
fn multisets(
    by_weight: &[Vec<Node>],
    budget: usize,
    min_w: usize,
    min_i: usize,
    acc: &mut Vec<Node>,
    emit: &mut dyn FnMut(&[Node]),
) {
    if budget == 0 {
        emit(acc);
        return;
    }
    for w in min_w..by_weight.len() {
        if w + 1 > budget {
            break;
        }
        let start = if w == min_w { min_i } else { 0 };
        for i in start..by_weight[w].len() {
            acc.push(by_weight[w][i].clone());
            multisets(by_weight, budget - (w + 1), w, i, acc, emit);
            acc.pop();
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonNode {
    Leaf { leaf: bool },
    Vertex { inputs: Vec<JsonNode> },
}

#[derive(Serialize, Deserialize)]
struct JsonTree {
    flavor: Flavor,
    root: JsonNode,
}

fn to_json_node(n: &Node) -> JsonNode {
    match n {
        Node::Leaf => JsonNode::Leaf { leaf: true },
        Node::Vertex(kids) => JsonNode::Vertex { inputs: kids.iter().map(to_json_node).collect() },
    }
}

fn from_json_node(n: &JsonNode) -> Result<Node> {
    match n {
        JsonNode::Leaf { leaf: true } => Ok(Node::Leaf),
        JsonNode::Leaf { leaf: false } => Err(DendroError::Malformed("`leaf` must be true".into())),
        JsonNode::Vertex { inputs } => Ok(Node::Vertex(inputs.iter().map(from_json_node).collect::<Result<_>>()?)),
    }
}

pub fn tree_to_json(t: &Tree) -> serde_json::Value {
    serde_json::to_value(JsonTree { flavor: t.flavor, root: to_json_node(&t.to_node()) }).expect("serializable")
}

pub fn tree_from_json(v: &serde_json::Value) -> Result<Tree> {
    let jt: JsonTree = serde_json::from_value(v.clone()).map_err(|e| DendroError::Malformed(e.to_string()))?;
    Tree::from_node(&from_json_node(&jt.root)?, jt.flavor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        parse_term(s, Flavor::General).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(Tree::eta().size(), 0);
        for n in 0..6 {
            assert_eq!(Tree::corolla(n).size(), n + 1);
            assert_eq!(Tree::linear(n).size(), 2 * n);
        }
        assert_eq!(t("[[]]").size(), 3);
        assert_eq!(t("[[]]").num_vertices(), 2);
    }

    #[test]
    fn parse_examples() {
        assert_eq!(t("*"), Tree::eta());
        assert_eq!(t("[**]"), Tree::corolla(2));
        assert_eq!(t(" [ * * ] "), Tree::corolla(2));
        let e = parse_term("[*", Flavor::General).unwrap_err();
        assert!(matches!(e, DendroError::Syntax { pos: 2, .. }));
        let e = parse_term("[*x]", Flavor::General).unwrap_err();
        assert!(matches!(e, DendroError::Syntax { pos: 2, .. }));
        assert!(matches!(parse_term("[*]*", Flavor::General), Err(DendroError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_term("[*]", Flavor::Closed), Err(DendroError::FlavorViolation { .. })));
        assert!(matches!(parse_term("[[]*]", Flavor::Open), Err(DendroError::FlavorViolation { .. })));
        assert!(parse_term("[[]]", Flavor::Closed).is_ok());
    }

    #[test]
    fn keys_ignore_input_order() {
        assert_eq!(t("[*[*]]").key(), t("[[*]*]").key());
        assert_ne!(t("[*]").key(), t("[[]]").key());
        assert_eq!(print_term(&t("[[*]*]")), "[*[*]]");
    }

    #[test]
    fn enumeration_small_cases() {
        let g0: Vec<String> = enumerate_trees(0, Flavor::General).iter().map(print_term).collect();
        assert_eq!(g0, ["*"]);
        let g1: Vec<String> = enumerate_trees(1, Flavor::General).iter().map(print_term).collect();
        assert_eq!(g1, ["*", "[]"]);
        let o2: Vec<String> = enumerate_trees(2, Flavor::Open).iter().map(print_term).collect();
        assert_eq!(o2, ["*", "[*]"]);
        let c3: Vec<String> = enumerate_trees(3, Flavor::Closed).iter().map(print_term).collect();
        assert_eq!(c3, ["[]", "[[]]"]);
        let g3: Vec<String> = enumerate_trees(3, Flavor::General).iter().map(print_term).collect();
        assert_eq!(g3, ["*", "[]", "[*]", "[**]", "[[]]"]);
    }

    #[test]
    fn enumeration_is_sorted_and_canonical() {
        let ts = enumerate_trees(6, Flavor::General);
        for w in ts.windows(2) {
            assert!((w[0].size(), w[0].key()) < (w[1].size(), w[1].key()));
        }
        assert!(ts.iter().all(Tree::is_canonical));
    }

    #[test]
    fn closure_and_graft() {
        assert_eq!(print_term(&Tree::eta().closure()), "[]");
        assert_eq!(print_term(&Tree::corolla(3).closure()), "[[][][]]");
        for tr in enumerate_trees(4, Flavor::General) {
            let c = tr.closure();
            assert_eq!(c.closure(), c);
            assert!(Flavor::Closed.admits(&c));
        }
        let c3 = Tree::corolla(3);
        assert_eq!(c3.graft(2, &Tree::eta()).unwrap().key(), c3.key());
        let g = c3.graft(3, &Tree::corolla(2)).unwrap();
        assert_eq!(g.size(), c3.size() + Tree::corolla(2).size());
        assert_eq!(c3.graft(0, &Tree::eta()), Err(DendroError::NotALeaf(0)));
        let o = parse_term("[**]", Flavor::Open).unwrap();
        assert_eq!(o.graft(1, &o).unwrap().flavor(), Flavor::Open);
    }

    #[test]
    fn edge_posets() {
        let p = Tree::eta().edge_poset();
        assert_eq!(p.len(), 1);
        let p = Tree::corolla(2).edge_poset();
        assert_eq!(p.maximum(), Some(0));
        assert!(!p.leq(1, 2) && !p.leq(2, 1));
        assert_eq!(p.minimal_elements(), vec![1, 2]);
        for n in 0..5 {
            let p = Tree::linear(n).edge_poset();
            assert_eq!(p.len(), n + 1);
            assert!(p.is_total() && p.is_partial_order());
        }
    }

    #[test]
    fn json_round_trip() {
        let tr = t("[*[[]*]]");
        let v = tree_to_json(&tr);
        assert_eq!(tree_from_json(&v).unwrap(), tr);
        assert!(tree_from_json(&serde_json::json!({"flavor": "open", "root": {"inputs": []}})).is_err());
    }
}
