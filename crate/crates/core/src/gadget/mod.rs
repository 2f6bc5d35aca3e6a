//! Generators and verifiers for three reduction families: hypergraph
//! dualization to maximal common ordered trees, (3,4)-SAT to maximal
//! 2-frequent unordered trees, and maximal frequent itemsets to maximal
//! frequent ordered trees.

pub mod dual;
pub mod itemset;
pub mod sat;

use std::fmt;

pub use dual::{
    gen_dualization_instance, parse_hypergraph, tree_to_vertexset, verify_dual, vertexset_to_tree,
    DualGadget,
};
pub use itemset::{
    brute_maximal_itemsets, gen_itemset_instance, itemset_tree, parse_transactions, r_tree,
    verify_itemset, ItemsetGadget, TransactionDb,
};
pub use sat::{
    build_gamma, build_gamma_alpha, build_mu, build_nu, build_xi, build_zeta, gen_sat_instance,
    parse_dimacs, verify_sat, CnfFormula, SatGadget,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated because a precondition did not hold.
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// One named check with free-form `key=value` details.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub fields: Vec<(String, String)>,
}

impl Check {
    pub fn new(name: &str, passed: bool) -> Check {
        Check {
            name: name.to_string(),
            status: if passed { Status::Pass } else { Status::Fail },
            fields: Vec::new(),
        }
    }

    pub fn skipped(name: &str) -> Check {
        Check {
            name: name.to_string(),
            status: Status::Skipped,
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Check {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// No check failed. Skipped checks do not count as failures.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// One line per check, `check=<name> status=<pass|fail|skipped> k=v ...`,
/// followed by `overall=<pass|fail>`.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "check={} status={}", c.name, c.status)?;
            for (k, v) in &c.fields {
                write!(f, " {k}={v}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "overall={}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str, comment: char) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

pub(crate) fn parse_ints<T: std::str::FromStr>(line: &str, lineno: usize) -> crate::Result<Vec<T>> {
    line.split_whitespace()
        .map(|w| {
            w.parse::<T>().map_err(|_| {
                crate::Error::Argument(format!("not an integer: {w:?}")).at_line(lineno)
            })
        })
        .collect()
}
