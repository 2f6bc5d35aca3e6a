//! Reverse-search enumeration of closed frequent trees for unordered
//! datasets whose trees have height at most two.
//!
//! A pattern is closed when every strict super-pattern has strictly smaller
//! support. Over such datasets every closed pattern is either a star (which
//! includes the single vertex) or a height-two tree, and the two kinds are
//! handled separately:
//!
//! - Height-two patterns only occur in height-two trees, and containment
//!   between them is signature dominance. A closed height-two pattern is
//!   `chi_inv` of the signature meet of its support. These form a forest
//!   rooted at the meet of all height-two trees; the parent of a pattern
//!   `T` is the `⪯`-maximal tree among `mct(supp(T) ∪ {T'})` for
//!   `T' ∉ supp(T)`, and its neighbours are the closures of the one-leaf
//!   extensions of `T` at depth at most one.
//! - Stars form a chain ordered by size. A star is closed when the next
//!   larger star loses support and no height-two common tree of its support
//!   contains it. The chain is walked from its smallest closed member.
//!
//! The traversal keeps only the current root-to-node path and the pending
//! neighbour lists along it, so memory does not grow with the number of
//! solutions.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::height2::{chi, chi_inv, signature_leq, Signature};
use crate::iso::SupportSet;
use crate::tree::{canonical_form, CanonKey, Mode, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningConfig {
    pub theta: usize,
    /// Stop after this many solutions.
    pub limit: Option<usize>,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            theta: 1,
            limit: None,
        }
    }
}

/// One emitted solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNode {
    pub pattern: Tree,
    pub support: SupportSet,
    pub canon: CanonKey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MiningSummary {
    pub count: usize,
    /// Longest gap between consecutive emissions, counting the start of the
    /// run and its end as emissions.
    pub max_delay: Duration,
    /// Deepest root-to-node path held by the traversal.
    pub max_depth: usize,
    /// Most patterns held at once (path nodes plus pending neighbours).
    pub max_live_patterns: usize,
    /// The sink or the limit ended the run before the forest was exhausted.
    pub stopped_early: bool,
}

/// Closed-pattern candidates in algebraic form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Pattern {
    /// Root with this many leaf children; `Star(0)` is the single vertex.
    Star(usize),
    /// Height-two tree given by its signature.
    Tall(Signature),
}

impl Pattern {
    fn from_tree(t: &Tree) -> Option<Pattern> {
        match t.height() {
            0 | 1 => Some(Pattern::Star(t.children(t.root()).len())),
            2 => chi(t).ok().map(Pattern::Tall),
            _ => None,
        }
    }

    fn to_tree(&self) -> Tree {
        match self {
            Pattern::Star(k) => Tree::star(*k),
            Pattern::Tall(sig) => chi_inv(sig),
        }
    }
}

/// Per-tree facts the search needs, computed once per dataset.
struct Profile {
    len: usize,
    height: Vec<usize>,
    max_child: Vec<usize>,
    sig: Vec<Option<Signature>>,
    tall: Vec<usize>,
    max_star: usize,
}

impl Profile {
    fn new(dataset: &Dataset) -> Result<Profile> {
        if dataset.mode() != Mode::Unordered {
            return Err(Error::Constraint(
                "closed mining requires an unordered dataset".into(),
            ));
        }
        let mut height = Vec::with_capacity(dataset.len());
        let mut max_child = Vec::with_capacity(dataset.len());
        let mut sig = Vec::with_capacity(dataset.len());
        let mut tall = Vec::new();
        for (i, t) in dataset.trees().iter().enumerate() {
            let h = t.height();
            if h > 2 {
                return Err(Error::Constraint(format!(
                    "tree {i} has height {h}; closed mining requires height at most 2"
                )));
            }
            height.push(h);
            max_child.push(t.max_child_count());
            if h == 2 {
                tall.push(i);
                sig.push(Some(chi(t)?));
            } else {
                sig.push(None);
            }
        }
        let max_star = max_child.iter().copied().max().unwrap_or(0);
        Ok(Profile {
            len: dataset.len(),
            height,
            max_child,
            sig,
            tall,
            max_star,
        })
    }

    fn sig(&self, i: usize) -> &Signature {
        self.sig[i].as_ref().expect("height-two tree")
    }

    fn star_support(&self, k: usize) -> Vec<usize> {
        (0..self.len).filter(|&i| self.max_child[i] >= k).collect()
    }

    fn tall_support(&self, s: &Signature) -> Vec<usize> {
        self.tall
            .iter()
            .copied()
            .filter(|&i| signature_leq(s, self.sig(i)))
            .collect()
    }

    fn support(&self, p: &Pattern) -> Vec<usize> {
        match p {
            Pattern::Star(k) => self.star_support(*k),
            Pattern::Tall(s) => self.tall_support(s),
        }
    }

    fn meet(&self, idx: &[usize]) -> Signature {
        Signature::meet(idx.iter().map(|&i| self.sig(i))).expect("nonempty support")
    }

    fn closure(&self, p: &Pattern) -> Result<Pattern> {
        let supp = self.support(p);
        if supp.is_empty() {
            return Err(Error::ClosureUndefined);
        }
        Ok(match p {
            Pattern::Tall(_) => Pattern::Tall(self.meet(&supp)),
            Pattern::Star(_) => {
                let limit = supp.iter().map(|&i| self.max_child[i]).min().unwrap_or(0);
                if supp.iter().all(|&i| self.height[i] == 2) {
                    let meet = self.meet(&supp);
                    if meet.max_child_count() >= limit {
                        return Ok(Pattern::Tall(meet));
                    }
                }
                Pattern::Star(limit)
            }
        })
    }

    fn star_closed(&self, k: usize) -> bool {
        matches!(self.closure(&Pattern::Star(k)), Ok(Pattern::Star(c)) if c == k)
    }

    fn roots(&self, theta: usize) -> Vec<Pattern> {
        let mut out = Vec::new();
        if theta > self.len {
            return out;
        }
        if let Some(k) = (0..=self.max_star).find(|&k| self.star_closed(k)) {
            if self.star_support(k).len() >= theta {
                out.push(Pattern::Star(k));
            }
        }
        if !self.tall.is_empty() && self.tall.len() >= theta {
            out.push(Pattern::Tall(self.meet(&self.tall)));
        }
        out
    }

    /// Parent in the search forest, with the dataset index of the tree that
    /// selected it.
    fn parent(&self, p: &Pattern) -> Result<(Pattern, Option<usize>)> {
        let supp = self.support(p);
        if supp.is_empty() {
            return Err(Error::ClosureUndefined);
        }
        match p {
            Pattern::Star(k) => (0..*k)
                .rev()
                .find(|&j| self.star_closed(j))
                .map(|j| (Pattern::Star(j), None))
                .ok_or(Error::NoParent),
            Pattern::Tall(_) => {
                if supp.len() == self.tall.len() {
                    return Err(Error::NoParent);
                }
                let base = self.meet(&supp);
                let in_supp: HashSet<usize> = supp.iter().copied().collect();
                let cands: Vec<(Signature, usize)> = self
                    .tall
                    .iter()
                    .copied()
                    .filter(|i| !in_supp.contains(i))
                    .map(|i| (Signature::meet([&base, self.sig(i)]).expect("two"), i))
                    .collect();
                let maximal = cands
                    .iter()
                    .filter(|(s, _)| !cands.iter().any(|(o, _)| o != s && signature_leq(s, o)));
                let (sig, idx) = maximal
                    .map(|(s, i)| {
                        let key = canonical_form(&chi_inv(s), Mode::Unordered);
                        (key, *i, s.clone())
                    })
                    .min_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)))
                    .map(|(_, i, s)| (s, i))
                    .expect("support is a strict subset of the height-two trees");
                Ok((Pattern::Tall(sig), Some(idx)))
            }
        }
    }

    fn neighbors(&self, p: &Pattern, theta: usize) -> Vec<Pattern> {
        match p {
            Pattern::Star(k) => ((k + 1)..=self.max_star)
                .find(|&j| self.star_closed(j))
                .filter(|&j| self.star_support(j).len() >= theta)
                .map(Pattern::Star)
                .into_iter()
                .collect(),
            Pattern::Tall(sig) => {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                let extensions =
                    std::iter::once(sig.push_leaf()).chain((0..sig.len()).map(|i| sig.bump(i)));
                for ext in extensions {
                    let supp = self.tall_support(&ext);
                    if supp.is_empty() || supp.len() < theta {
                        continue;
                    }
                    let closed = Pattern::Tall(self.meet(&supp));
                    if &closed != p && seen.insert(closed.clone()) {
                        out.push(closed);
                    }
                }
                out
            }
        }
    }
}

fn checked_pattern(pattern: &Tree) -> Result<Pattern> {
    Pattern::from_tree(pattern).ok_or(Error::ClosureUndefined)
}

/// Closure of `pattern`: the maximal common tree of its support that
/// contains it. Stars close to the largest common star unless a height-two
/// common tree contains that star.
pub fn closure(pattern: &Tree, dataset: &Dataset) -> Result<Tree> {
    let prof = Profile::new(dataset)?;
    Ok(prof.closure(&checked_pattern(pattern)?)?.to_tree())
}

pub fn is_closed(pattern: &Tree, dataset: &Dataset) -> Result<bool> {
    let prof = Profile::new(dataset)?;
    let p = checked_pattern(pattern)?;
    Ok(prof.closure(&p)? == p)
}

/// Parent of a closed pattern in the search forest. Support strictly grows.
pub fn parent_of(pattern: &Tree, dataset: &Dataset) -> Result<Tree> {
    let prof = Profile::new(dataset)?;
    Ok(prof.parent(&checked_pattern(pattern)?)?.0.to_tree())
}

/// Like [`parent_of`], also naming the dataset tree whose addition to the
/// support produced the parent (height-two patterns only).
pub fn parent_with_witness(pattern: &Tree, dataset: &Dataset) -> Result<(Tree, Option<usize>)> {
    let prof = Profile::new(dataset)?;
    let (p, idx) = prof.parent(&checked_pattern(pattern)?)?;
    Ok((p.to_tree(), idx))
}

/// Candidate children of a closed frequent pattern.
pub fn neighbors(pattern: &Tree, dataset: &Dataset, theta: usize) -> Result<Vec<Tree>> {
    if theta < 1 {
        return Err(Error::Argument("theta must be at least 1".into()));
    }
    let prof = Profile::new(dataset)?;
    let p = checked_pattern(pattern)?;
    Ok(prof
        .neighbors(&p, theta)
        .iter()
        .map(Pattern::to_tree)
        .collect())
}

/// Roots of the search forest: the smallest closed star and the meet of all
/// height-two trees, each when frequent.
pub fn roots(dataset: &Dataset, theta: usize) -> Result<Vec<Tree>> {
    let prof = Profile::new(dataset)?;
    Ok(prof.roots(theta).iter().map(Pattern::to_tree).collect())
}

struct Frame {
    pattern: Pattern,
    pending: Vec<Pattern>,
    next: usize,
}

struct Emitter<'s, F> {
    sink: &'s mut F,
    config: MiningConfig,
    summary: MiningSummary,
    last: Instant,
}

impl<F: FnMut(&SearchNode) -> ControlFlow<()>> Emitter<'_, F> {
    fn emit(&mut self, prof: &Profile, p: &Pattern) -> ControlFlow<()> {
        let pattern = p.to_tree();
        let node = SearchNode {
            canon: canonical_form(&pattern, Mode::Unordered),
            support: SupportSet {
                indices: prof.support(p),
            },
            pattern,
        };
        let now = Instant::now();
        self.summary.max_delay = self.summary.max_delay.max(now - self.last);
        self.last = now;
        self.summary.count += 1;
        (self.sink)(&node)?;
        if self.config.limit.is_some_and(|l| self.summary.count >= l) {
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }
}

/// Streams every closed `theta`-frequent tree of `dataset` to `sink`, each
/// exactly once and in a deterministic order. The sink may stop the run by
/// returning `ControlFlow::Break`.
pub fn enumerate_closed<F>(
    dataset: &Dataset,
    config: MiningConfig,
    mut sink: F,
) -> Result<MiningSummary>
where
    F: FnMut(&SearchNode) -> ControlFlow<()>,
{
    if config.theta < 1 {
        return Err(Error::Argument("theta must be at least 1".into()));
    }
    let prof = Profile::new(dataset)?;
    let mut em = Emitter {
        sink: &mut sink,
        config,
        summary: MiningSummary::default(),
        last: Instant::now(),
    };
    if config.limit == Some(0) {
        em.summary.stopped_early = true;
        return Ok(em.summary);
    }
    let theta = config.theta;
    'forest: for root in prof.roots(theta) {
        if em.emit(&prof, &root).is_break() {
            em.summary.stopped_early = true;
            break 'forest;
        }
        let mut stack = vec![Frame {
            pending: prof.neighbors(&root, theta),
            pattern: root,
            next: 0,
        }];
        let mut live: usize = stack.iter().map(|f| 1 + f.pending.len()).sum();
        em.summary.max_live_patterns = em.summary.max_live_patterns.max(live);
        em.summary.max_depth = em.summary.max_depth.max(stack.len());
        while let Some(top) = stack.last_mut() {
            if top.next == top.pending.len() {
                live -= 1 + top.pending.len();
                stack.pop();
                continue;
            }
            let cand = top.pending[top.next].clone();
            top.next += 1;
            let is_child = matches!(prof.parent(&cand), Ok((ref par, _)) if *par == top.pattern);
            if !is_child {
                continue;
            }
            if em.emit(&prof, &cand).is_break() {
                em.summary.stopped_early = true;
                break 'forest;
            }
            let pending = prof.neighbors(&cand, theta);
            live += 1 + pending.len();
            stack.push(Frame {
                pattern: cand,
                pending,
                next: 0,
            });
            em.summary.max_live_patterns = em.summary.max_live_patterns.max(live);
            em.summary.max_depth = em.summary.max_depth.max(stack.len());
        }
    }
    let end = Instant::now();
    em.summary.max_delay = em.summary.max_delay.max(end - em.last);
    Ok(em.summary)
}

/// Collects all closed `theta`-frequent trees.
pub fn collect_closed(dataset: &Dataset, theta: usize) -> Result<Vec<SearchNode>> {
    let mut out = Vec::new();
    enumerate_closed(dataset, MiningConfig { theta, limit: None }, |n| {
        out.push(n.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
