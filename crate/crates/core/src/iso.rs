//! Subtree isomorphism for rooted trees, ordered and unordered.
//!
//! A pattern is contained in a target when some vertex of the target roots a
//! parent-closed set of its descendants that is isomorphic (or, in ordered
//! mode, equivalent) to the pattern. The pattern root may land on any target
//! vertex.
//!
//! Both trees are first hash-consed into shape classes shared by the query,
//! so `embed(p, t)` is memoized per pair of classes rather than per pair of
//! nodes. Unordered child lists are matched with augmenting paths; ordered
//! child lists with a greedy left-to-right scan, which is optimal for
//! subsequence matching.

use std::collections::HashMap;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::tree::{canonical_form, Mode, NodeId, Tree};

type Class = u32;

#[derive(Default)]
struct Classes {
    ids: HashMap<Vec<Class>, Class>,
    kids: Vec<Vec<Class>>,
    height: Vec<u32>,
    size: Vec<u32>,
}

impl Classes {
    fn classify(&mut self, t: &Tree, mode: Mode) -> Vec<Class> {
        let mut cls = vec![0; t.len()];
        for v in t.postorder() {
            let mut key: Vec<Class> = t.children(v).iter().map(|&c| cls[c]).collect();
            if mode == Mode::Unordered {
                key.sort_unstable();
            }
            cls[v] = self.intern(key);
        }
        cls
    }

    fn intern(&mut self, key: Vec<Class>) -> Class {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.kids.len() as Class;
        let height = key
            .iter()
            .map(|&c| self.height[c as usize] + 1)
            .max()
            .unwrap_or(0);
        let size = 1 + key.iter().map(|&c| self.size[c as usize]).sum::<u32>();
        self.kids.push(key.clone());
        self.height.push(height);
        self.size.push(size);
        self.ids.insert(key, id);
        id
    }
}

/// Maximum bipartite matching by augmenting paths. `adj[i]` lists the right
/// vertices compatible with left vertex `i`. Returns the partner of every
/// left vertex.
pub(crate) fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for i in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(i, adj, &mut seen, &mut owner);
    }
    let mut partner = vec![None; adj.len()];
    for (j, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            partner[*i] = Some(j);
        }
    }
    partner
}

struct Matcher {
    mode: Mode,
    classes: Classes,
    memo: HashMap<(Class, Class), bool>,
}

impl Matcher {
    fn new(mode: Mode) -> Matcher {
        Matcher {
            mode,
            classes: Classes::default(),
            memo: HashMap::new(),
        }
    }

    /// Can class `p` be embedded with its root on a vertex of class `t`?
    fn embed(&mut self, p: Class, t: Class) -> bool {
        if p == t {
            return true;
        }
        let (pi, ti) = (p as usize, t as usize);
        let c = &self.classes;
        if c.size[pi] > c.size[ti]
            || c.height[pi] > c.height[ti]
            || c.kids[pi].len() > c.kids[ti].len()
        {
            return false;
        }
        if c.kids[pi].is_empty() {
            return true;
        }
        if let Some(&hit) = self.memo.get(&(p, t)) {
            return hit;
        }
        let pk = self.classes.kids[pi].clone();
        let tk = self.classes.kids[ti].clone();
        let ok = match self.mode {
            Mode::Ordered => {
                let mut next = 0;
                for &tc in &tk {
                    if next < pk.len() && self.embed(pk[next], tc) {
                        next += 1;
                    }
                }
                next == pk.len()
            }
            Mode::Unordered => {
                let adj: Vec<Vec<usize>> = pk
                    .iter()
                    .map(|&pc| (0..tk.len()).filter(|&j| self.embed(pc, tk[j])).collect())
                    .collect();
                if adj.iter().any(Vec::is_empty) {
                    false
                } else {
                    max_matching(&adj, tk.len()).iter().all(Option::is_some)
                }
            }
        };
        self.memo.insert((p, t), ok);
        ok
    }

    /// Assigns each child of pattern node `p` to a child of target node `t`.
    fn assign_children(
        &mut self,
        pattern: &Tree,
        pcls: &[Class],
        p: NodeId,
        target: &Tree,
        tcls: &[Class],
        t: NodeId,
    ) -> Vec<(NodeId, NodeId)> {
        let pk = pattern.children(p);
        let tk = target.children(t);
        match self.mode {
            Mode::Ordered => {
                let mut out = Vec::with_capacity(pk.len());
                let mut next = 0;
                for &tc in tk {
                    if next < pk.len() && self.embed(pcls[pk[next]], tcls[tc]) {
                        out.push((pk[next], tc));
                        next += 1;
                    }
                }
                out
            }
            Mode::Unordered => {
                let adj: Vec<Vec<usize>> = pk
                    .iter()
                    .map(|&pc| {
                        (0..tk.len())
                            .filter(|&j| self.embed(pcls[pc], tcls[tk[j]]))
                            .collect()
                    })
                    .collect();
                max_matching(&adj, tk.len())
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, j)| j.map(|j| (pk[i], tk[j])))
                    .collect()
            }
        }
    }
}

/// Pattern-node-to-target-node map certifying containment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub map: Vec<NodeId>,
}

impl EmbeddingWitness {
    /// Checks injectivity, exact parent preservation, and (ordered mode)
    /// sibling order, without consulting the matcher.
    pub fn validate(&self, pattern: &Tree, target: &Tree, mode: Mode) -> bool {
        if self.map.len() != pattern.len() || self.map.iter().any(|&t| !target.contains(t)) {
            return false;
        }
        let mut used = vec![None; target.len()];
        for (p, &t) in self.map.iter().enumerate() {
            if used[t].is_some() {
                return false;
            }
            used[t] = Some(p);
        }
        for p in 0..pattern.len() {
            let t = self.map[p];
            match pattern.parent(p) {
                Some(pp) => {
                    if target.parent(t) != Some(self.map[pp]) {
                        return false;
                    }
                }
                None => {
                    if let Some(tp) = target.parent(t) {
                        if used[tp].is_some() {
                            return false;
                        }
                    }
                }
            }
        }
        if mode == Mode::Ordered {
            for p in 0..pattern.len() {
                let t = self.map[p];
                let pos: Vec<usize> = pattern
                    .children(p)
                    .iter()
                    .map(|&c| {
                        target
                            .children(t)
                            .iter()
                            .position(|&x| x == self.map[c])
                            .unwrap_or(usize::MAX)
                    })
                    .collect();
                if pos.windows(2).any(|w| w[0] >= w[1]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Does `pattern` occur as a subtree of `target`?
pub fn subtree_iso(pattern: &Tree, target: &Tree, mode: Mode) -> bool {
    let mut m = Matcher::new(mode);
    let pcls = m.classes.classify(pattern, mode);
    let tcls = m.classes.classify(target, mode);
    let proot = pcls[pattern.root()];
    let mut targets: Vec<Class> = tcls.clone();
    targets.sort_unstable();
    targets.dedup();
    targets.into_iter().any(|t| m.embed(proot, t))
}

/// Like [`subtree_iso`] but returns an explicit embedding.
pub fn find_embedding(pattern: &Tree, target: &Tree, mode: Mode) -> Option<EmbeddingWitness> {
    let mut m = Matcher::new(mode);
    let pcls = m.classes.classify(pattern, mode);
    let tcls = m.classes.classify(target, mode);
    let proot = pattern.root();
    let start = target
        .preorder()
        .into_iter()
        .find(|&t| m.embed(pcls[proot], tcls[t]))?;
    let mut map = vec![usize::MAX; pattern.len()];
    map[proot] = start;
    let mut stack = vec![(proot, start)];
    while let Some((p, t)) = stack.pop() {
        for (pc, tc) in m.assign_children(pattern, &pcls, p, target, &tcls, t) {
            map[pc] = tc;
            stack.push((pc, tc));
        }
    }
    Some(EmbeddingWitness { map })
}

/// Isomorphism (unordered) or equivalence (ordered).
pub fn tree_equal(a: &Tree, b: &Tree, mode: Mode) -> bool {
    a.len() == b.len() && canonical_form(a, mode) == canonical_form(b, mode)
}

/// Sorted indices of the dataset trees containing a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SupportSet {
    pub indices: Vec<usize>,
}

impl SupportSet {
    pub fn count(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

pub fn support_set(pattern: &Tree, dataset: &Dataset) -> SupportSet {
    let indices = dataset
        .trees()
        .iter()
        .enumerate()
        .filter(|(_, t)| subtree_iso(pattern, t, dataset.mode()))
        .map(|(i, _)| i)
        .collect();
    SupportSet { indices }
}

pub fn is_frequent(pattern: &Tree, dataset: &Dataset, theta: usize) -> Result<bool> {
    if theta < 1 {
        return Err(Error::Argument("theta must be at least 1".into()));
    }
    Ok(support_set(pattern, dataset).count() >= theta)
}
