//! Multisets of trees loaded from line-oriented text.
//!
//! One tree per line. Blank lines and lines starting with `#` are skipped,
//! except that a `# mode=ordered|unordered` comment sets the comparison mode
//! and a `# theta=<int>` comment records a suggested threshold.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::tree::{canonical_form, parse_tree, CanonKey, Mode, Tree};

#[derive(Debug, Clone)]
pub struct Dataset {
    trees: Vec<Tree>,
    mode: Mode,
    canon: Vec<CanonKey>,
    theta_hint: Option<usize>,
}

impl Dataset {
    pub fn new(trees: Vec<Tree>, mode: Mode) -> Dataset {
        let canon = trees.iter().map(|t| canonical_form(t, mode)).collect();
        Dataset {
            trees,
            mode,
            canon,
            theta_hint: None,
        }
    }

    pub fn with_theta_hint(mut self, theta: usize) -> Dataset {
        self.theta_hint = Some(theta);
        self
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn tree(&self, i: usize) -> &Tree {
        &self.trees[i]
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn canon(&self, i: usize) -> &CanonKey {
        &self.canon[i]
    }

    pub fn theta_hint(&self) -> Option<usize> {
        self.theta_hint
    }

    /// Same trees compared under another mode.
    pub fn with_mode(&self, mode: Mode) -> Dataset {
        Dataset {
            theta_hint: self.theta_hint,
            ..Dataset::new(self.trees.clone(), mode)
        }
    }

    /// Dataset file text, including the mode header and the theta hint when
    /// present. Reloading it yields the same trees in the same order.
    pub fn to_text(&self) -> String {
        let mut out = format!("# mode={}\n", self.mode);
        if let Some(theta) = self.theta_hint {
            out.push_str(&format!("# theta={theta}\n"));
        }
        for t in &self.trees {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

/// Reads a dataset. An explicit `mode` overrides the file header; with
/// neither, trees are unordered.
pub fn load_dataset<R: BufRead>(source: R, mode: Option<Mode>) -> Result<Dataset> {
    let mut trees = Vec::new();
    let mut header_mode = None;
    let mut theta_hint = None;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(m) = comment.strip_prefix("mode=") {
                header_mode = Some(m.parse::<Mode>().map_err(|e| e.at_line(lineno))?);
            } else if let Some(th) = comment.strip_prefix("theta=") {
                let th = th
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Argument(format!("bad theta {th:?}")).at_line(lineno))?;
                theta_hint = Some(th);
            }
            continue;
        }
        trees.push(parse_tree(text).map_err(|e| e.at_line(lineno))?);
    }
    let mode = mode.or(header_mode).unwrap_or(Mode::Unordered);
    let mut ds = Dataset::new(trees, mode);
    ds.theta_hint = theta_hint;
    Ok(ds)
}

/// Convenience wrapper over [`load_dataset`] for in-memory text.
pub fn dataset_from_str(text: &str, mode: Option<Mode>) -> Result<Dataset> {
    load_dataset(text.as_bytes(), mode)
}
