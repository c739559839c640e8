//! Uniform residual report returned by every checker.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conformal::LambdaElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

/// One failing identity instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub axiom_id: String,
    pub indices: Vec<usize>,
    /// Coordinates of the nonzero residual, printed in the polynomial grammar.
    pub residual: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    /// Identity instances evaluated.
    pub checked: usize,
    /// Instances with nonzero residual.
    pub failed: usize,
    /// Distinct failing axiom ids in natural order.
    pub failing_axioms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub items: Vec<Item>,
    pub summary: Summary,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn error(check: &str, message: impl Into<String>) -> Report {
        Report {
            check: check.to_string(),
            status: Status::Error,
            error: Some(message.into()),
            items: Vec::new(),
            summary: Summary { checked: 0, failed: 0, failing_axioms: Vec::new() },
        }
    }

    pub fn failing_axioms(&self) -> &[String] {
        &self.summary.failing_axioms
    }

    pub fn fails(&self, axiom: &str) -> bool {
        self.summary.failing_axioms.iter().any(|a| a == axiom)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.check, self.status);
        if let Some(e) = &self.error {
            out.push_str(&format!("  error: {e}\n"));
        }
        for it in &self.items {
            let idx = it.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            out.push_str(&format!("  {} ({}) residual [{}]\n", it.axiom_id, idx, it.residual.join(", ")));
        }
        out.push_str(&format!(
            "  checked {} instances, {} failed\n",
            self.summary.checked, self.summary.failed
        ));
        out
    }
}

/// Collects identity results; items end up ordered by first appearance of
/// their axiom id, then by indices.
#[derive(Debug)]
pub struct ReportBuilder {
    check: String,
    order: Vec<String>,
    items: Vec<(usize, Item)>,
    checked: usize,
}

impl ReportBuilder {
    pub fn new(check: impl Into<String>) -> Self {
        ReportBuilder { check: check.into(), order: Vec::new(), items: Vec::new(), checked: 0 }
    }

    fn rank(&mut self, axiom: &str) -> usize {
        match self.order.iter().position(|a| a == axiom) {
            Some(r) => r,
            None => {
                self.order.push(axiom.to_string());
                self.order.len() - 1
            }
        }
    }

    /// Records one evaluated instance; a nonzero residual becomes an item.
    pub fn record(&mut self, axiom: &str, indices: &[usize], residual: &LambdaElement) {
        let rank = self.rank(axiom);
        self.checked += 1;
        if !residual.is_zero() {
            self.items.push((
                rank,
                Item {
                    axiom_id: axiom.to_string(),
                    indices: indices.to_vec(),
                    residual: residual.coords().iter().map(|p| p.to_string()).collect(),
                },
            ));
        }
    }

    /// Folds another report in, prefixing its axiom ids.
    pub fn absorb(&mut self, prefix: &str, other: &Report) {
        for it in &other.items {
            let id = format!("{prefix}{}", it.axiom_id);
            let rank = self.rank(&id);
            self.items.push((rank, Item { axiom_id: id, ..it.clone() }));
        }
        self.checked += other.summary.checked;
    }

    pub fn finish(mut self) -> Report {
        self.items.sort_by(|a, b| (a.0, &a.1.indices).cmp(&(b.0, &b.1.indices)));
        let mut failing: Vec<(usize, String)> = Vec::new();
        for (r, it) in &self.items {
            if !failing.iter().any(|(_, a)| a == &it.axiom_id) {
                failing.push((*r, it.axiom_id.clone()));
            }
        }
        let items: Vec<Item> = self.items.into_iter().map(|(_, it)| it).collect();
        Report {
            check: self.check,
            status: if items.is_empty() { Status::Pass } else { Status::Fail },
            error: None,
            summary: Summary {
                checked: self.checked,
                failed: items.len(),
                failing_axioms: failing.into_iter().map(|(_, a)| a).collect(),
            },
            items,
        }
    }
}
