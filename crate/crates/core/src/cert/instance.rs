//! Shannon and access-structure inequalities as checkable instances.
//!
//! Sets live on the extended ground set: participants `0..n` plus the secret
//! at index `n`. The strong forms only speak about participant sets.

use std::fmt;

use num_traits::{One, Zero};

use crate::cert::expr::LinearExpr;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

/// Direction of a two-sided axiom used as one inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, e: LinearExpr) -> LinearExpr {
        match self {
            Sign::Plus => e,
            Sign::Minus => -e,
        }
    }

    fn apply_bound(self, b: Rational) -> Rational {
        match self {
            Sign::Plus => b,
            Sign::Minus => -b,
        }
    }

    pub fn as_int(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InequalityInstance {
    /// `±f(∅) ≥ 0`.
    EmptyZero(Sign),
    /// `f(A) ≥ 0`.
    Positivity(VertexSet),
    /// `f(B) − f(A) ≥ 0` for `A ⊆ B`.
    Monotonicity { subset: VertexSet, superset: VertexSet },
    /// `f(A) + f(B) − f(A∪B) − f(A∩B) ≥ 0`.
    Submodularity(VertexSet, VertexSet),
    /// `f(B) − f(A) ≥ 1` for `A ⊆ B`, `A` independent and `B` not.
    StrongMonotonicity { subset: VertexSet, superset: VertexSet },
    /// `f(A) + f(B) − f(A∪B) − f(A∩B) ≥ 1` when neither `A` nor `B` is
    /// independent but `A∩B` is.
    StrongSubmodularity(VertexSet, VertexSet),
    /// `f(s) ≥ 1` (plus) or `−f(s) ≥ −1` (minus).
    SecretUnit(Sign),
    /// `±(f(A∪s) − f(A)) ≥ 0` for a qualified `A`.
    AccessQualified { set: VertexSet, sign: Sign },
    /// `f(A∪s) − f(A) ≥ 1` (plus) or `f(A) − f(A∪s) ≥ −1` (minus) for an
    /// independent `A`.
    AccessUnqualified { set: VertexSet, sign: Sign },
}

impl InequalityInstance {
    pub fn kind(&self) -> InstanceKind {
        use InequalityInstance::*;
        match self {
            EmptyZero(_) => InstanceKind::EmptyZero,
            Positivity(_) => InstanceKind::Positivity,
            Monotonicity { .. } => InstanceKind::Monotonicity,
            Submodularity(..) => InstanceKind::Submodularity,
            StrongMonotonicity { .. } => InstanceKind::StrongMonotonicity,
            StrongSubmodularity(..) => InstanceKind::StrongSubmodularity,
            SecretUnit(_) => InstanceKind::SecretUnit,
            AccessQualified { .. } => InstanceKind::AccessQualified,
            AccessUnqualified { .. } => InstanceKind::AccessUnqualified,
        }
    }

    pub fn sets(&self) -> Vec<&VertexSet> {
        use InequalityInstance::*;
        match self {
            EmptyZero(_) | SecretUnit(_) => vec![],
            Positivity(a) => vec![a],
            Monotonicity { subset, superset } | StrongMonotonicity { subset, superset } => {
                vec![subset, superset]
            }
            Submodularity(a, b) | StrongSubmodularity(a, b) => vec![a, b],
            AccessQualified { set, .. } | AccessUnqualified { set, .. } => vec![set],
        }
    }

    pub fn sign(&self) -> Option<Sign> {
        use InequalityInstance::*;
        match self {
            EmptyZero(s) | SecretUnit(s) => Some(*s),
            AccessQualified { sign, .. } | AccessUnqualified { sign, .. } => Some(*sign),
            _ => None,
        }
    }

    /// Checks the side conditions in `g` and returns the inequality as
    /// `(lhs, bound)` meaning `lhs ≥ bound`.
    pub fn expr(&self, g: &LabeledGraph) -> Result<(LinearExpr, Rational)> {
        self.validate(g)?;
        Ok(self.expr_unchecked(g.vertex_count()))
    }

    /// The inequality without side-condition checks; `n` locates the secret.
    pub fn expr_unchecked(&self, n: usize) -> (LinearExpr, Rational) {
        use InequalityInstance::*;
        let one = Rational::one;
        let submodular = |a: &VertexSet, b: &VertexSet| {
            let mut e = LinearExpr::f(a.clone());
            e.add_term(b.clone(), one());
            e.add_term(a.union(b), -one());
            e.add_term(a.intersection(b), -one());
            e
        };
        let increment = |a: &VertexSet, b: &VertexSet| {
            let mut e = LinearExpr::f(b.clone());
            e.add_term(a.clone(), -one());
            e
        };
        let secret = VertexSet::singleton(n);
        match self {
            EmptyZero(sign) => (sign.apply(LinearExpr::f(VertexSet::new())), Rational::zero()),
            Positivity(a) => (LinearExpr::f(a.clone()), Rational::zero()),
            Monotonicity { subset, superset } => (increment(subset, superset), Rational::zero()),
            Submodularity(a, b) => (submodular(a, b), Rational::zero()),
            StrongMonotonicity { subset, superset } => (increment(subset, superset), one()),
            StrongSubmodularity(a, b) => (submodular(a, b), one()),
            SecretUnit(sign) => (sign.apply(LinearExpr::f(secret)), sign.apply_bound(one())),
            AccessQualified { set, sign } => {
                (sign.apply(increment(set, &set.union(&secret))), Rational::zero())
            }
            AccessUnqualified { set, sign } => (
                sign.apply(increment(set, &set.union(&secret))),
                sign.apply_bound(one()),
            ),
        }
    }

    pub fn validate(&self, g: &LabeledGraph) -> Result<()> {
        use InequalityInstance::*;
        let n = g.vertex_count();
        let fail = |msg: String| Err(Error::InvalidInstance(format!("{}: {msg}", self.kind())));
        for s in self.sets() {
            if s.bound() > n + 1 {
                return fail(format!("set {s:?} leaves the ground set 0..={n}"));
            }
        }
        let participants_only = |s: &VertexSet| !s.contains(n);
        let independent = |s: &VertexSet| g.independent_unchecked(s);
        match self {
            EmptyZero(_) | SecretUnit(_) | Positivity(_) | Submodularity(..) => Ok(()),
            Monotonicity { subset, superset } => {
                if !subset.is_subset(superset) {
                    return fail(format!("{subset:?} is not a subset of {superset:?}"));
                }
                Ok(())
            }
            StrongMonotonicity { subset, superset } => {
                if !participants_only(superset) {
                    return fail("sets must not contain the secret".into());
                }
                if !subset.is_subset(superset) {
                    return fail(format!("{subset:?} is not a subset of {superset:?}"));
                }
                if !independent(subset) {
                    return fail(format!("smaller set {subset:?} is not independent"));
                }
                if independent(superset) {
                    return fail(format!("larger set {superset:?} is independent"));
                }
                Ok(())
            }
            StrongSubmodularity(a, b) => {
                if !participants_only(a) || !participants_only(b) {
                    return fail("sets must not contain the secret".into());
                }
                if independent(a) {
                    return fail(format!("first set {a:?} is independent"));
                }
                if independent(b) {
                    return fail(format!("second set {b:?} is independent"));
                }
                if !independent(&a.intersection(b)) {
                    return fail(format!("intersection {:?} is not independent", a.intersection(b)));
                }
                Ok(())
            }
            AccessQualified { set, .. } => {
                if !participants_only(set) || independent(set) {
                    return fail(format!("{set:?} is not a qualified participant set"));
                }
                Ok(())
            }
            AccessUnqualified { set, .. } => {
                if !participants_only(set) || !independent(set) {
                    return fail(format!("{set:?} is not an independent participant set"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    EmptyZero,
    Positivity,
    Monotonicity,
    Submodularity,
    StrongMonotonicity,
    StrongSubmodularity,
    SecretUnit,
    AccessQualified,
    AccessUnqualified,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 9] = [
        InstanceKind::EmptyZero,
        InstanceKind::Positivity,
        InstanceKind::Monotonicity,
        InstanceKind::Submodularity,
        InstanceKind::StrongMonotonicity,
        InstanceKind::StrongSubmodularity,
        InstanceKind::SecretUnit,
        InstanceKind::AccessQualified,
        InstanceKind::AccessUnqualified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::EmptyZero => "EMPTY_ZERO",
            InstanceKind::Positivity => "POSITIVITY",
            InstanceKind::Monotonicity => "MONOTONICITY",
            InstanceKind::Submodularity => "SUBMODULARITY",
            InstanceKind::StrongMonotonicity => "STRONG_MONOTONICITY",
            InstanceKind::StrongSubmodularity => "STRONG_SUBMODULARITY",
            InstanceKind::SecretUnit => "SECRET_UNIT",
            InstanceKind::AccessQualified => "ACCESS_QUALIFIED",
            InstanceKind::AccessUnqualified => "ACCESS_UNQUALIFIED",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
