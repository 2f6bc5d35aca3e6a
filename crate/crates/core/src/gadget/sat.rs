//! (3,4)-SAT as maximal 2-frequent unordered trees.
//!
//! For a formula with `n` variables and `m` clauses:
//!
//! - `nu(j)`: root with `m - j + 1` children, each carrying `j` leaves.
//!   Distinct `j` give pairwise incomparable trees.
//! - `zeta`: root with children `nu(1) .. nu(m)`; `zeta_j` omits `nu(j)`.
//! - `mu_i`: root with two children `u1`, `u2`; `u1` has `nu(j)` for every
//!   clause `j` containing `x_i`, `u2` for every clause containing `¬x_i`.
//! - `xi` (resp. `xi_j`): root with `n` children, each with a single child
//!   whose subtree is `zeta` (resp. `zeta_j`).
//! - `Gamma`: root with children `mu_1 .. mu_n`.
//!
//! The dataset is `[xi, xi_1, .., xi_m, Gamma]` with `theta = 2`. For an
//! assignment `alpha`, `Gamma_alpha` keeps in each `mu_i` only the branch
//! of the literal `alpha` makes true, so `Gamma_alpha` lacks `nu(j)` exactly
//! for the clauses `alpha` falsifies, and it embeds in some `xi_j` iff
//! `alpha` is not satisfying.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{content_lines, parse_ints, Check, Report};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::iso::subtree_iso;
use crate::tree::{Mode, Tree};

/// CNF over variables `1..=n`; literals are signed DIMACS integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub n: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(n: usize, clauses: Vec<Vec<i32>>) -> Result<CnfFormula> {
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Argument(format!("clause {} is empty", j + 1)));
            }
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > n) {
                return Err(Error::Argument(format!(
                    "clause {} has literal {l} outside ±1..={n}",
                    j + 1
                )));
            }
        }
        Ok(CnfFormula { n, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// `alpha[i]` is the value of variable `i + 1`.
    pub fn clause_satisfied(&self, j: usize, alpha: &[bool]) -> bool {
        self.clauses[j]
            .iter()
            .any(|&l| alpha[l.unsigned_abs() as usize - 1] == (l > 0))
    }

    pub fn evaluate(&self, alpha: &[bool]) -> bool {
        (0..self.m()).all(|j| self.clause_satisfied(j, alpha))
    }

    /// Violations of the (3,4) form: clauses with more than three literals
    /// and literals occurring more than four times.
    pub fn violations_34(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut occ: BTreeMap<i32, usize> = BTreeMap::new();
        for (j, c) in self.clauses.iter().enumerate() {
            if c.len() > 3 {
                out.push(format!("clause {} has {} literals", j + 1, c.len()));
            }
            for &l in c {
                *occ.entry(l).or_default() += 1;
            }
        }
        for (l, k) in occ {
            if k > 4 {
                out.push(format!("literal {l} occurs {k} times"));
            }
        }
        out
    }
}

/// Reads DIMACS CNF: `c` comment lines, a `p cnf n m` line, then clauses
/// terminated by `0` (possibly spanning lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<i32> = Vec::new();
    for (ln, line) in content_lines(text, 'c') {
        if line.starts_with('%') {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let w: Vec<&str> = rest.split_whitespace().collect();
            if header.is_some() || w.len() != 3 || w[0] != "cnf" {
                return Err(Error::Argument("expected \"p cnf n m\"".into()).at_line(ln));
            }
            let nm: Vec<usize> = parse_ints(&w[1..].join(" "), ln)?;
            header = Some((nm[0], nm[1]));
            continue;
        }
        let (n, _) = header
            .ok_or_else(|| Error::Argument("clause before \"p cnf\" line".into()).at_line(ln))?;
        for l in parse_ints::<i32>(line, ln)? {
            if l == 0 {
                if cur.is_empty() {
                    return Err(Error::Argument("empty clause".into()).at_line(ln));
                }
                clauses.push(std::mem::take(&mut cur));
            } else if l.unsigned_abs() as usize > n {
                return Err(
                    Error::Argument(format!("literal {l} exceeds {n} variables")).at_line(ln),
                );
            } else {
                cur.push(l);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Argument("missing \"p cnf\" line".into()))?;
    if !cur.is_empty() {
        return Err(Error::Argument("last clause is not terminated by 0".into()));
    }
    if clauses.len() != m {
        return Err(Error::Argument(format!(
            "header announces {m} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(n, clauses)
}

pub fn build_nu(m: usize, j: usize) -> Result<Tree> {
    if j < 1 || j > m {
        return Err(Error::Argument(format!("nu index {j} outside 1..={m}")));
    }
    let branch = Tree::star(j);
    Ok(Tree::with_subtrees(std::iter::repeat_n(&branch, m - j + 1)))
}

pub fn build_zeta(m: usize, omit: Option<usize>) -> Result<Tree> {
    if m < 1 {
        return Err(Error::Argument("m must be at least 1".into()));
    }
    if let Some(j) = omit {
        if j < 1 || j > m {
            return Err(Error::Argument(format!(
                "omitted index {j} outside 1..={m}"
            )));
        }
    }
    let kids = (1..=m)
        .filter(|&i| Some(i) != omit)
        .map(|i| build_nu(m, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tree::with_subtrees(&kids))
}

fn check_var(i: usize, cnf: &CnfFormula) -> Result<()> {
    if i < 1 || i > cnf.n {
        return Err(Error::Argument(format!(
            "variable {i} outside 1..={}",
            cnf.n
        )));
    }
    Ok(())
}

/// Branch of `mu_i` for one literal sign: `nu(j)` for each clause holding it.
fn literal_branch(i: usize, positive: bool, cnf: &CnfFormula) -> Result<Tree> {
    let lit = if positive { i as i32 } else { -(i as i32) };
    let kids = (0..cnf.m())
        .filter(|&j| cnf.clauses[j].contains(&lit))
        .map(|j| build_nu(cnf.m(), j + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tree::with_subtrees(&kids))
}

pub fn build_mu(i: usize, cnf: &CnfFormula) -> Result<Tree> {
    check_var(i, cnf)?;
    let u1 = literal_branch(i, true, cnf)?;
    let u2 = literal_branch(i, false, cnf)?;
    Ok(Tree::with_subtrees([&u1, &u2]))
}

pub fn build_xi(cnf: &CnfFormula, omit: Option<usize>) -> Result<Tree> {
    let zeta = build_zeta(cnf.m(), omit)?;
    let stem = Tree::with_subtrees([&zeta]);
    Ok(Tree::with_subtrees(std::iter::repeat_n(&stem, cnf.n)))
}

pub fn build_gamma(cnf: &CnfFormula) -> Result<Tree> {
    let mus = (1..=cnf.n)
        .map(|i| build_mu(i, cnf))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tree::with_subtrees(&mus))
}

/// `Gamma` with, for each variable, only the branch of its true literal.
pub fn build_gamma_alpha(cnf: &CnfFormula, alpha: &[bool]) -> Result<Tree> {
    if alpha.len() != cnf.n {
        return Err(Error::Argument(format!(
            "assignment has {} values for {} variables",
            alpha.len(),
            cnf.n
        )));
    }
    let mus = (1..=cnf.n)
        .map(|i| {
            let kept = literal_branch(i, alpha[i - 1], cnf)?;
            Ok(Tree::with_subtrees([&kept]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tree::with_subtrees(&mus))
}

#[derive(Debug, Clone)]
pub struct SatGadget {
    /// `[xi, xi_1, .., xi_m, Gamma]`, unordered.
    pub dataset: Dataset,
    pub theta: usize,
    pub cnf: CnfFormula,
    /// `xi_1 .. xi_m`.
    pub known_solutions: Vec<Tree>,
    pub warnings: Vec<String>,
}

pub fn gen_sat_instance(cnf: &CnfFormula) -> Result<SatGadget> {
    let bad = cnf.violations_34();
    if !bad.is_empty() {
        return Err(Error::Constraint(format!(
            "not a (3,4)-formula: {}",
            bad.join("; ")
        )));
    }
    if cnf.m() == 0 {
        return Err(Error::Argument("formula has no clauses".into()));
    }
    let mut warnings = Vec::new();
    if cnf.n <= 10 || cnf.m() <= 10 {
        warnings.push(format!(
            "n={} m={}: the reduction is only claimed for n and m greater than 10",
            cnf.n,
            cnf.m()
        ));
    }
    let xi = build_xi(cnf, None)?;
    let known = (1..=cnf.m())
        .map(|j| build_xi(cnf, Some(j)))
        .collect::<Result<Vec<_>>>()?;
    let mut trees = vec![xi];
    trees.extend(known.iter().cloned());
    trees.push(build_gamma(cnf)?);
    Ok(SatGadget {
        dataset: Dataset::new(trees, Mode::Unordered).with_theta_hint(2),
        theta: 2,
        cnf: cnf.clone(),
        known_solutions: known,
        warnings,
    })
}

/// Assignments for the `Gamma_alpha` check: all-true, all-false, one
/// falsifier per clause (its literals false, the rest random), then random
/// fill up to `samples`.
pub fn sample_assignments(cnf: &CnfFormula, samples: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![vec![true; cnf.n], vec![false; cnf.n]];
    for c in &cnf.clauses {
        let mut a: Vec<bool> = (0..cnf.n).map(|_| rng.gen()).collect();
        for &l in c {
            a[l.unsigned_abs() as usize - 1] = l < 0;
        }
        out.push(a);
    }
    while out.len() < samples {
        out.push((0..cnf.n).map(|_| rng.gen()).collect());
    }
    out
}

/// Instance-level checks of the reduction claims. The maximal 2-frequent
/// set itself is not computed; the trees are far too large for that.
pub fn verify_sat(cnf: &CnfFormula, samples: usize, seed: u64) -> Result<Report> {
    let g = gen_sat_instance(cnf)?;
    let m = cnf.m();
    let mode = Mode::Unordered;
    let mut r = Report::default();

    let nus = (1..=m)
        .map(|j| build_nu(m, j))
        .collect::<Result<Vec<_>>>()?;
    let mut bad = 0;
    for (j, a) in nus.iter().enumerate() {
        for (k, b) in nus.iter().enumerate() {
            if subtree_iso(a, b, mode) != (j == k) {
                bad += 1;
            }
        }
    }
    r.push(
        Check::new("nu_antichain", bad == 0)
            .with("pairs", m * m)
            .with("mismatches", bad),
    );

    let trees = g.dataset.trees();
    let heights_ok = trees.iter().all(|t| t.height() == 5);
    r.push(Check::new("heights_are_5", heights_ok));

    let xi = &trees[0];
    let gamma = &trees[m + 1];
    let in_xi = g
        .known_solutions
        .iter()
        .filter(|x| subtree_iso(x, xi, mode))
        .count();
    r.push(
        Check::new("xi_j_in_xi", in_xi == m)
            .with("count", in_xi)
            .with("m", m),
    );
    let in_gamma = g
        .known_solutions
        .iter()
        .filter(|x| subtree_iso(x, gamma, mode))
        .count();
    r.push(Check::new("xi_j_not_in_gamma", in_gamma == 0).with("contained", in_gamma));

    let alphas = sample_assignments(cnf, samples, seed);
    let (mut mismatches, mut unsat, mut not_below) = (0, 0, 0);
    for a in &alphas {
        let ga = build_gamma_alpha(cnf, a)?;
        if !(subtree_iso(&ga, gamma, mode) && subtree_iso(&ga, xi, mode)) {
            not_below += 1;
        }
        let embeds = g.known_solutions.iter().any(|x| subtree_iso(&ga, x, mode));
        let falsified = !cnf.evaluate(a);
        unsat += usize::from(falsified);
        if embeds != falsified {
            mismatches += 1;
        }
    }
    r.push(
        Check::new("gamma_alpha_below_gamma_and_xi", not_below == 0).with("violations", not_below),
    );
    r.push(
        Check::new("gamma_alpha_criterion", mismatches == 0)
            .with("assignments", alphas.len())
            .with("unsatisfying", unsat)
            .with("mismatches", mismatches),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> CnfFormula {
        CnfFormula::new(3, vec![vec![1, -2], vec![2, 3], vec![-1, -3]]).unwrap()
    }

    #[test]
    fn nu_shape() {
        let t = build_nu(3, 2).unwrap();
        assert_eq!(t.children(t.root()).len(), 2);
        for m in 1..=6 {
            for j in 1..=m {
                assert_eq!(build_nu(m, j).unwrap().len(), 1 + (m - j + 1) * (1 + j));
            }
        }
        assert!(build_nu(3, 0).is_err());
        assert!(build_nu(3, 4).is_err());
    }

    #[test]
    fn zeta_shapes() {
        let z = build_zeta(3, None).unwrap();
        assert_eq!(z.children(z.root()).len(), 3);
        let z2 = build_zeta(3, Some(2)).unwrap();
        assert_eq!(z2.children(z2.root()).len(), 2);
        assert!(subtree_iso(&z2, &z, Mode::Unordered));
        assert_eq!(z.height(), 3);
    }

    #[test]
    fn mu_branches() {
        let f = CnfFormula::new(2, vec![vec![1], vec![2], vec![1, 2]]).unwrap();
        let mu = build_mu(1, &f).unwrap();
        let kids = mu.children(mu.root());
        assert_eq!(mu.children(kids[0]).len(), 2);
        assert_eq!(mu.children(kids[1]).len(), 0);
        let lonely = CnfFormula::new(3, vec![vec![1]]).unwrap();
        let mu = build_mu(3, &lonely).unwrap();
        assert_eq!(mu.len(), 3);
    }

    #[test]
    fn dimacs_round() {
        let f = parse_dimacs("c hi\np cnf 3 2\n1 -2 0\n2\n3 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![2, 3]]);
        assert!(parse_dimacs("p cnf 2 1\n1 5 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("1 0\n").is_err());
    }

    #[test]
    fn form_violations() {
        let f = CnfFormula::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(f.violations_34().len(), 1);
        let f = CnfFormula::new(1, vec![vec![1]; 5]).unwrap();
        assert!(matches!(gen_sat_instance(&f), Err(Error::Constraint(_))));
    }

    #[test]
    fn small_instance_claims_hold() {
        let g = gen_sat_instance(&tiny()).unwrap();
        assert_eq!(g.warnings.len(), 1);
        let r = verify_sat(&tiny(), 20, 1).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn all_false_on_positive_clause() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1]]).unwrap();
        let ga = build_gamma_alpha(&f, &[false, false]).unwrap();
        assert!(subtree_iso(
            &ga,
            &build_xi(&f, Some(1)).unwrap(),
            Mode::Unordered
        ));
        assert!(build_gamma_alpha(&f, &[true]).is_err());
    }
}
