//! Rooted trees in an append-only arena, their parenthesized text form,
//! and canonical keys.
//!
//! Text grammar: `tree := "(" tree* ")"`. The outermost pair is the root and
//! children are read left to right. Whitespace between tokens is ignored.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// How sibling order is treated when comparing trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Ordered,
    Unordered,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ordered => "ordered",
            Mode::Unordered => "unordered",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ordered" => Ok(Mode::Ordered),
            "unordered" => Ok(Mode::Unordered),
            other => Err(Error::Argument(format!(
                "unknown mode {other:?} (expected ordered|unordered)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

/// A rooted tree. Node ids are dense `0..len()`; edits return new trees and
/// keep every existing id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    nodes: Vec<Node>,
    root: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeStats {
    pub height: usize,
    pub vertex_count: usize,
    pub max_child_count: usize,
}

/// Canonical text of a tree under a [`Mode`]. Equal keys mean isomorphic
/// (unordered) or equivalent (ordered) trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey(String);

impl CanonKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Number of vertices encoded by the key.
    pub fn vertex_count(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Tree {
    /// The one-vertex tree.
    pub fn single() -> Tree {
        Tree {
            nodes: vec![Node {
                parent: None,
                children: Vec::new(),
            }],
            root: 0,
        }
    }

    /// A root with `k` leaf children.
    pub fn star(k: usize) -> Tree {
        let mut t = Tree::single();
        for _ in 0..k {
            t.push_child(0);
        }
        t
    }

    /// A path with `n >= 1` vertices, rooted at one end.
    pub fn path(n: usize) -> Tree {
        let mut t = Tree::single();
        let mut last = 0;
        for _ in 1..n {
            last = t.push_child(last);
        }
        t
    }

    /// A new root whose children are copies of `subtrees`, in order.
    pub fn with_subtrees<'a, I>(subtrees: I) -> Tree
    where
        I: IntoIterator<Item = &'a Tree>,
    {
        let mut t = Tree::single();
        for sub in subtrees {
            t.graft(0, sub);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].children
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].parent
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.nodes.len()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        v != self.root && self.nodes[v].children.is_empty()
    }

    /// Node ids in preorder (parents before children, siblings left to right).
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.nodes[v].children.iter().rev());
        }
        order
    }

    /// Node ids with every child before its parent.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut order = self.preorder();
        order.reverse();
        order
    }

    /// Distance from the root, indexed by node id.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.len()];
        for v in self.preorder() {
            for &c in &self.nodes[v].children {
                depth[c] = depth[v] + 1;
            }
        }
        depth
    }

    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    pub fn max_child_count(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.children.len())
            .max()
            .unwrap_or(0)
    }

    pub fn stats(&self) -> TreeStats {
        TreeStats {
            height: self.height(),
            vertex_count: self.len(),
            max_child_count: self.max_child_count(),
        }
    }

    /// Copy of the subtree rooted at `v` (all descendants), renumbered.
    pub fn subtree(&self, v: NodeId) -> Tree {
        let mut out = Tree::single();
        let mut stack = vec![(v, 0)];
        while let Some((src, dst)) = stack.pop() {
            for &c in &self.nodes[src].children {
                let id = out.push_child(dst);
                stack.push((c, id));
            }
        }
        out
    }

    /// Checks every structural invariant of the arena.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 || self.root >= n {
            return Err(Error::Constraint("tree has no root".into()));
        }
        if self.nodes[self.root].parent.is_some() {
            return Err(Error::Constraint("root has a parent".into()));
        }
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if seen[v] {
                return Err(Error::Constraint(format!("node {v} reached twice")));
            }
            seen[v] = true;
            count += 1;
            for &c in &self.nodes[v].children {
                if c >= n || self.nodes[c].parent != Some(v) {
                    return Err(Error::Constraint(format!(
                        "child {c} of {v} has inconsistent parent"
                    )));
                }
                stack.push(c);
            }
        }
        if count != n {
            return Err(Error::Constraint("unreachable nodes".into()));
        }
        Ok(())
    }

    fn push_child(&mut self, v: NodeId) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent: Some(v),
            children: Vec::new(),
        });
        self.nodes[v].children.push(id);
        id
    }

    /// Appends a copy of `sub` as the last child of `v`.
    fn graft(&mut self, v: NodeId, sub: &Tree) {
        let mut stack = vec![(sub.root, v)];
        while let Some((src, parent)) = stack.pop() {
            let id = self.push_child(parent);
            // Push in reverse so children keep their order after popping.
            for &c in sub.nodes[src].children.iter().rev() {
                stack.push((c, id));
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_tree(self))
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_tree(s)
    }
}

/// Parses the parenthesized encoding. Node ids follow preorder.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut open: Vec<NodeId> = Vec::new();
    let mut closed_root = false;
    for (offset, byte) in text.bytes().enumerate() {
        match byte {
            b'(' => {
                if closed_root {
                    return Err(Error::Parse {
                        offset,
                        message: "content after the root closed".into(),
                    });
                }
                let id = nodes.len();
                let parent = open.last().copied();
                nodes.push(Node {
                    parent,
                    children: Vec::new(),
                });
                if let Some(p) = parent {
                    nodes[p].children.push(id);
                }
                open.push(id);
            }
            b')' => {
                if open.pop().is_none() {
                    return Err(Error::Parse {
                        offset,
                        message: "unmatched ')'".into(),
                    });
                }
                if open.is_empty() {
                    closed_root = true;
                }
            }
            b' ' | b'\t' | b'\r' | b'\n' => {}
            _ => {
                return Err(Error::Parse {
                    offset,
                    message: format!("unexpected character {:?}", byte as char),
                })
            }
        }
    }
    if !open.is_empty() {
        return Err(Error::Parse {
            offset: text.len(),
            message: format!("{} unclosed '('", open.len()),
        });
    }
    if nodes.is_empty() {
        return Err(Error::Parse {
            offset: 0,
            message: "empty tree encoding".into(),
        });
    }
    Ok(Tree { nodes, root: 0 })
}

/// Literal serialization, children in stored order.
pub fn serialize_tree(t: &Tree) -> String {
    let mut out = String::with_capacity(2 * t.len());
    // (node, entering?)
    let mut stack = vec![(t.root, true)];
    while let Some((v, enter)) = stack.pop() {
        if enter {
            out.push('(');
            stack.push((v, false));
            for &c in t.nodes[v].children.iter().rev() {
                stack.push((c, true));
            }
        } else {
            out.push(')');
        }
    }
    out
}

/// Canonical key under `mode`.
///
/// Ordered mode is the literal serialization. Unordered mode sorts the
/// child encodings of every node by ascending byte order before
/// concatenating them, so `(())` precedes `()` and deeper subtrees come
/// first.
pub fn canonical_form(t: &Tree, mode: Mode) -> CanonKey {
    match mode {
        Mode::Ordered => CanonKey(serialize_tree(t)),
        Mode::Unordered => {
            let mut enc: Vec<String> = vec![String::new(); t.len()];
            for v in t.postorder() {
                let mut parts: Vec<String> = t.nodes[v]
                    .children
                    .iter()
                    .map(|&c| std::mem::take(&mut enc[c]))
                    .collect();
                parts.sort_unstable();
                let mut s = String::with_capacity(2 + parts.iter().map(String::len).sum::<usize>());
                s.push('(');
                for p in &parts {
                    s.push_str(p);
                }
                s.push(')');
                enc[v] = s;
            }
            CanonKey(std::mem::take(&mut enc[t.root]))
        }
    }
}

/// Returns a copy of `t` with a new leaf appended as the last child of `v`.
pub fn add_leaf(t: &Tree, v: NodeId) -> Result<Tree> {
    if !t.contains(v) {
        return Err(Error::UnknownNode(v));
    }
    let mut out = t.clone();
    out.push_child(v);
    Ok(out)
}

/// Returns a copy of `t` with a new leaf inserted at position `pos` of the
/// child list of `v`. The new node gets id `t.len()`.
pub fn insert_leaf(t: &Tree, v: NodeId, pos: usize) -> Result<Tree> {
    if !t.contains(v) {
        return Err(Error::UnknownNode(v));
    }
    if pos > t.nodes[v].children.len() {
        return Err(Error::Argument(format!(
            "position {pos} exceeds child count of node {v}"
        )));
    }
    let mut out = t.clone();
    let id = out.push_child(v);
    out.nodes[v].children.pop();
    out.nodes[v].children.insert(pos, id);
    Ok(out)
}

/// Returns a copy of `t` hung below a new root. The new root gets id
/// `t.len()`.
pub fn extend_above(t: &Tree) -> Tree {
    let mut out = t.clone();
    let id = out.nodes.len();
    out.nodes.push(Node {
        parent: None,
        children: vec![t.root],
    });
    out.nodes[t.root].parent = Some(id);
    out.root = id;
    out
}

pub fn tree_stats(t: &Tree) -> TreeStats {
    t.stats()
}
