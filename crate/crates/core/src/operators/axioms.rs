use serde::{Deserialize, Serialize};

use super::{OperatorFamily, OperatorInstance};

/// Structural properties an operator may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// `f ≤ g ⇒ T(f) ≤ T(g)`
    Monotone,
    /// `T(af) = aT(f)` for `a ≥ 0`
    PositivelyHomogeneous,
    /// `T(f+g) ≤ T(f) + T(g)`
    Subadditive,
    /// `T(f+g) = T(f) + T(g)` for comonotone `f, g`
    ComonotoneAdditive,
    /// `T(f+g) = T(f) + T(g)` for all `f, g`
    Additive,
}

impl Axiom {
    pub fn tag(self) -> &'static str {
        match self {
            Axiom::Monotone => "monotone",
            Axiom::PositivelyHomogeneous => "positively-homogeneous",
            Axiom::Subadditive => "subadditive",
            Axiom::ComonotoneAdditive => "comonotone-additive",
            Axiom::Additive => "additive",
        }
    }
}

/// The axioms a family is expected to satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSet {
    pub axioms: Vec<Axiom>,
    /// False when the expectation is claimed but not established.
    pub verified: bool,
    pub note: Option<String>,
}

impl AxiomSet {
    pub fn contains(&self, axiom: Axiom) -> bool {
        self.axioms.contains(&axiom)
    }

    /// Subadditive and positively homogeneous.
    pub fn is_sublinear(&self) -> bool {
        self.contains(Axiom::Subadditive) && self.contains(Axiom::PositivelyHomogeneous)
    }
}

/// Expected axioms: every Choquet family is monotone, positively
/// homogeneous and comonotone additive, and subadditive when its capacity
/// is submodular; classical families are linear.
pub fn operator_axioms(inst: &OperatorInstance) -> AxiomSet {
    let family = inst.family();
    let mut axioms = vec![
        Axiom::Monotone,
        Axiom::PositivelyHomogeneous,
        Axiom::ComonotoneAdditive,
    ];
    if family.is_choquet() {
        if inst.capacity().is_some_and(|c| c.is_submodular()) {
            axioms.push(Axiom::Subadditive);
        }
    } else {
        axioms.push(Axiom::Subadditive);
        axioms.push(Axiom::Additive);
    }
    axioms.sort();
    let (verified, note) = if family == OperatorFamily::DurrmeyerChoquetSimplex {
        (
            false,
            Some("unverified: claimed without proof; constants are mapped to zero".to_string()),
        )
    } else {
        (true, None)
    };
    AxiomSet {
        axioms,
        verified,
        note,
    }
}
