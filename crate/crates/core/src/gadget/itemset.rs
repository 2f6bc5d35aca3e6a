//! Maximal frequent itemsets as maximal frequent ordered trees.
//!
//! Over items `1..=n`, `T(X)` is a root with `n` children where child `j`
//! carries one leaf iff `j ∈ X`; then `T(X1) ≼ T(X2)` iff `X1 ⊆ X2`. The
//! dataset is one `T(X)` per transaction followed by `eta` copies of `R`,
//! a root with `n - 1` leaf-carrying children, and `theta = eta`. When no
//! frequent itemset has `n - 1` or more items, the maximal frequent trees
//! are `T(Y)` for the maximal frequent itemsets `Y`, plus `R`.

use std::collections::BTreeSet;

use super::{content_lines, parse_ints, Check, Report};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::oracle::brute_maximal;
use crate::tree::{canonical_form, CanonKey, Mode, Tree};

/// Largest item universe accepted by [`brute_maximal_itemsets`].
pub const ITEMSET_MAX_ITEMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDb {
    pub n: usize,
    pub transactions: Vec<BTreeSet<usize>>,
}

impl TransactionDb {
    pub fn new(n: usize, transactions: Vec<BTreeSet<usize>>) -> Result<TransactionDb> {
        for (i, t) in transactions.iter().enumerate() {
            if let Some(&x) = t.iter().find(|&&x| x == 0 || x > n) {
                return Err(Error::Argument(format!(
                    "transaction {} has item {x} outside 1..={n}",
                    i + 1
                )));
            }
        }
        Ok(TransactionDb { n, transactions })
    }

    pub fn support(&self, x: &BTreeSet<usize>) -> usize {
        self.transactions.iter().filter(|t| x.is_subset(t)).count()
    }
}

/// One transaction per line of positive integers. A `# n=<int>` comment
/// fixes the universe size, which otherwise is the largest item. Other
/// `#` lines and blank lines are skipped.
pub fn parse_transactions(text: &str) -> Result<TransactionDb> {
    let mut declared = None;
    for (ln, line) in text.lines().enumerate() {
        if let Some(v) = line
            .trim()
            .strip_prefix('#')
            .and_then(|r| r.trim().strip_prefix("n="))
        {
            declared = Some(v.trim().parse::<usize>().map_err(|_| {
                Error::Argument(format!("bad universe size {v:?}")).at_line(ln + 1)
            })?);
        }
    }
    let mut txs = Vec::new();
    for (ln, line) in content_lines(text, '#') {
        let items: Vec<usize> = parse_ints(line, ln)?;
        if items.contains(&0) {
            return Err(Error::Argument("items are positive".into()).at_line(ln));
        }
        if let Some(&x) = declared.and_then(|n| items.iter().find(|&&x| x > n)) {
            return Err(Error::Argument(format!("item {x} exceeds declared n")).at_line(ln));
        }
        txs.push(items.into_iter().collect::<BTreeSet<usize>>());
    }
    let n = declared.unwrap_or_else(|| txs.iter().flatten().copied().max().unwrap_or(0));
    TransactionDb::new(n, txs)
}

/// `T(X)`.
pub fn itemset_tree(x: &BTreeSet<usize>, n: usize) -> Result<Tree> {
    if let Some(&v) = x.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::Argument(format!("item {v} outside 1..={n}")));
    }
    let leaf = Tree::single();
    let bar = Tree::path(2);
    Ok(Tree::with_subtrees((1..=n).map(|j| {
        if x.contains(&j) {
            &bar
        } else {
            &leaf
        }
    })))
}

/// `R`: root with `n - 1` children, each carrying one leaf.
pub fn r_tree(n: usize) -> Tree {
    let bar = Tree::path(2);
    Tree::with_subtrees(std::iter::repeat_n(&bar, n.saturating_sub(1)))
}

#[derive(Debug, Clone)]
pub struct ItemsetGadget {
    /// `[T(X_1), .., T(X_k), R, .., R]`, ordered.
    pub dataset: Dataset,
    pub n: usize,
    pub theta: usize,
    /// `T(Y_1), .., T(Y_l), R`.
    pub s_set: Vec<Tree>,
}

pub fn gen_itemset_instance(
    db: &TransactionDb,
    maximal_itemsets: &[BTreeSet<usize>],
    eta: usize,
) -> Result<ItemsetGadget> {
    if eta < 1 {
        return Err(Error::Argument("eta must be at least 1".into()));
    }
    let n = db.n;
    let mut trees = db
        .transactions
        .iter()
        .map(|x| itemset_tree(x, n))
        .collect::<Result<Vec<_>>>()?;
    let r = r_tree(n);
    trees.extend(std::iter::repeat_n(r.clone(), eta));
    let mut s_set = maximal_itemsets
        .iter()
        .map(|y| itemset_tree(y, n))
        .collect::<Result<Vec<_>>>()?;
    s_set.push(r);
    Ok(ItemsetGadget {
        dataset: Dataset::new(trees, Mode::Ordered).with_theta_hint(eta),
        n,
        theta: eta,
        s_set,
    })
}

/// Itemsets contained in at least `eta` transactions with no frequent
/// strict superset, by subset enumeration.
pub fn brute_maximal_itemsets(db: &TransactionDb, eta: usize) -> Result<Vec<BTreeSet<usize>>> {
    if db.n > ITEMSET_MAX_ITEMS {
        return Err(Error::SizeGuard(format!(
            "{} items exceeds the limit of {ITEMSET_MAX_ITEMS}",
            db.n
        )));
    }
    let set = |mask: u32| -> BTreeSet<usize> {
        (0..db.n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| i + 1)
            .collect()
    };
    let frequent = |mask: u32| db.support(&set(mask)) >= eta;
    let mut out = Vec::new();
    for mask in 0u32..(1 << db.n) {
        if frequent(mask) && (0..db.n).all(|i| mask & (1 << i) != 0 || !frequent(mask | 1 << i)) {
            out.push(set(mask));
        }
    }
    out.sort();
    Ok(out)
}

/// Whether some frequent itemset has at least `n - 1` items, in which case
/// `R` may stop being maximal and the correspondence is not claimed.
pub fn guard_tripped(db: &TransactionDb, maximal: &[BTreeSet<usize>]) -> bool {
    maximal.iter().any(|y| y.len() + 1 >= db.n)
}

/// Compares the brute-force maximal frequent trees of the gadget with the
/// trees of the brute-force maximal frequent itemsets plus `R`.
pub fn verify_itemset(db: &TransactionDb, eta: usize) -> Result<Report> {
    let maximal = brute_maximal_itemsets(db, eta)?;
    let g = gen_itemset_instance(db, &maximal, eta)?;
    let mut r = Report::default();
    if guard_tripped(db, &maximal) {
        // A tripped guard is reported, not failed.
        r.push(
            Check::skipped("size_guard")
                .with("reason", "frequent_itemset_of_size_at_least_n_minus_1"),
        );
        r.push(Check::skipped("maximal_trees_match").with("itemsets", maximal.len()));
        return Ok(r);
    }
    r.push(Check::new("size_guard", true));
    let expected: BTreeSet<CanonKey> = g
        .s_set
        .iter()
        .map(|t| canonical_form(t, Mode::Ordered))
        .collect();
    let found: BTreeSet<CanonKey> = brute_maximal(&g.dataset, eta)?.into_keys().collect();
    r.push(
        Check::new("maximal_trees_match", found == expected)
            .with("itemsets", maximal.len())
            .with("trees", found.len())
            .with("expected", expected.len()),
    );
    Ok(r)
}
