use serde::{Deserialize, Serialize};

/// Direction of a displayed inequality `lhs REL rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = ">=")]
    GreaterEq,
}

/// Both sides of an inequality as evaluated, plus the tolerance it was
/// judged at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub tol: f64,
}

impl InequalityReport {
    pub fn le(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            lhs,
            rhs,
            relation: Relation::LessEq,
            tol,
        }
    }

    pub fn ge(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            lhs,
            rhs,
            relation: Relation::GreaterEq,
            tol,
        }
    }

    /// Signed margin: nonnegative exactly when the inequality holds with no
    /// tolerance.
    pub fn slack(&self) -> f64 {
        match self.relation {
            Relation::LessEq => self.rhs - self.lhs,
            Relation::GreaterEq => self.lhs - self.rhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.slack() >= -self.tol
    }
}
