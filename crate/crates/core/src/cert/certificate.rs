use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cert::expr::LinearExpr;
use crate::cert::instance::{InequalityInstance, InstanceKind, Sign};
use crate::error::{Error, Result};
use crate::graph::{GraphFile, LabeledGraph};
use crate::rational::{self, Rational};
use crate::vertex_set::VertexSet;

/// `lhs ≥ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub lhs: LinearExpr,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub instance: InequalityInstance,
    pub coeff: Rational,
}

impl Step {
    pub fn new(instance: InequalityInstance) -> Self {
        Step {
            instance,
            coeff: Rational::one(),
        }
    }
}

/// A nonnegative combination of valid inequalities claimed to imply
/// `target` for every set function satisfying them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub graph: LabeledGraph,
    pub steps: Vec<Step>,
    pub target: Inequality,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Reason),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    NegativeCoefficient { step: usize },
    SideCondition { step: usize, message: String },
    /// The combined coefficient of `set` differs from the target's.
    TermMismatch {
        set: VertexSet,
        combined: Rational,
        target: Rational,
    },
    BoundNotMet { implied: Rational, required: Rational },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::NegativeCoefficient { step } => write!(f, "negative coefficient at step {step}"),
            Reason::SideCondition { step, message } => {
                write!(f, "side condition fails at step {step}: {message}")
            }
            Reason::TermMismatch { set, combined, target } => write!(
                f,
                "coefficient of f({}) is {} in the combination but {} in the target",
                set.to_hex(),
                rational::format(combined),
                rational::format(target)
            ),
            Reason::BoundNotMet { implied, required } => write!(
                f,
                "combination implies {} but the target needs {}",
                rational::format(implied),
                rational::format(required)
            ),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid(r) => write!(f, "invalid: {r}"),
        }
    }
}

impl Certificate {
    /// Verifies side conditions, coefficient signs, exact term agreement and
    /// the bound, reporting the first failure.
    pub fn check(&self) -> Verdict {
        let mut sum = LinearExpr::zero();
        let mut implied = Rational::zero();
        for (i, step) in self.steps.iter().enumerate() {
            if step.coeff.is_negative() {
                return Verdict::Invalid(Reason::NegativeCoefficient { step: i });
            }
            let (lhs, bound) = match step.instance.expr(&self.graph) {
                Ok(x) => x,
                Err(e) => {
                    return Verdict::Invalid(Reason::SideCondition {
                        step: i,
                        message: e.to_string(),
                    })
                }
            };
            sum.add_scaled(&lhs, &step.coeff);
            implied += &step.coeff * bound;
        }
        if let Some((set, combined, target)) = sum.first_difference(&self.target.lhs) {
            return Verdict::Invalid(Reason::TermMismatch { set, combined, target });
        }
        // Constants on the left move to the bound side.
        let implied = implied - &sum.constant;
        let required = &self.target.bound - &self.target.lhs.constant;
        if implied < required {
            return Verdict::Invalid(Reason::BoundNotMet { implied, required });
        }
        Verdict::Valid
    }

    /// Positive weights of the target on participant singletons, or `None`
    /// if the target has any other kind of term.
    fn singleton_weights(&self) -> Option<Vec<(usize, Rational)>> {
        let n = self.graph.vertex_count();
        self.target
            .lhs
            .terms()
            .map(|(set, c)| match set.iter().collect::<Vec<_>>()[..] {
                [v] if v < n && c.is_positive() => Some((v, c.clone())),
                _ => None,
            })
            .collect()
    }

    fn effective_bound(&self) -> Rational {
        &self.target.bound - &self.target.lhs.constant
    }

    /// Lower bound on `max_v f(v)`: the target is a positive combination of
    /// singletons, and the maximum dominates its normalized weighted mean.
    pub fn worst_case_bound(&self) -> Option<Rational> {
        let weights = self.singleton_weights()?;
        let total: Rational = weights.iter().map(|(_, w)| w).sum();
        (!total.is_zero()).then(|| self.effective_bound() / total)
    }

    /// Lower bound on the mean of `f(v)` over all vertices, using `f ≥ 0`
    /// when the weights are not uniform.
    pub fn average_case_bound(&self) -> Option<Rational> {
        let weights = self.singleton_weights()?;
        let top = weights.iter().map(|(_, w)| w).max()?.clone();
        let n = self.graph.vertex_count();
        Some(self.effective_bound() / (top * Rational::from_integer(n.into())))
    }

    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            graph: self.graph.to_file(),
            steps: self
                .steps
                .iter()
                .map(|s| StepRecord {
                    kind: s.instance.kind().name().to_string(),
                    sets: s.instance.sets().iter().map(|x| x.to_hex()).collect(),
                    sign: s.instance.sign().map(Sign::as_int),
                    coeff: s.coeff.clone(),
                })
                .collect(),
            target: TargetRecord {
                terms: self
                    .target
                    .lhs
                    .terms()
                    .map(|(s, c)| (s.to_hex(), rational::format(c)))
                    .collect(),
                constant: (!self.target.lhs.constant.is_zero())
                    .then(|| self.target.lhs.constant.clone()),
                bound: self.target.bound.clone(),
            },
        }
    }

    pub fn from_file(file: &CertificateFile) -> Result<Self> {
        let graph = LabeledGraph::from_file(&file.graph)?;
        let steps = file
            .steps
            .iter()
            .map(|r| {
                Ok(Step {
                    instance: r.instance()?,
                    coeff: r.coeff.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let mut lhs = LinearExpr::zero();
        for (k, v) in &file.target.terms {
            lhs.add_term(VertexSet::from_hex(k)?, rational::parse(v)?);
        }
        lhs.constant = file.target.constant.clone().unwrap_or_else(Rational::zero);
        Ok(Certificate {
            graph,
            steps,
            target: Inequality {
                lhs,
                bound: file.target.bound.clone(),
            },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

/// On-disk certificate. Set bitmasks are hex with bit `i` for vertex `i`
/// and bit `n` for the secret.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub graph: GraphFile,
    pub steps: Vec<StepRecord>,
    pub target: TargetRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub kind: String,
    pub sets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(with = "rational::serde_str")]
    pub coeff: Rational,
}

impl StepRecord {
    fn instance(&self) -> Result<InequalityInstance> {
        use InequalityInstance as I;
        let kind = InstanceKind::from_name(&self.kind)
            .ok_or_else(|| Error::Format(format!("unknown step kind {:?}", self.kind)))?;
        let sets = self
            .sets
            .iter()
            .map(|s| VertexSet::from_hex(s))
            .collect::<Result<Vec<_>>>()?;
        let sign = match self.sign {
            None | Some(1) => Sign::Plus,
            Some(-1) => Sign::Minus,
            Some(x) => return Err(Error::Format(format!("sign must be 1 or -1, got {x}"))),
        };
        let arity = match kind {
            InstanceKind::EmptyZero | InstanceKind::SecretUnit => 0,
            InstanceKind::Positivity
            | InstanceKind::AccessQualified
            | InstanceKind::AccessUnqualified => 1,
            _ => 2,
        };
        if sets.len() != arity {
            return Err(Error::Format(format!(
                "{kind} takes {arity} sets, got {}",
                sets.len()
            )));
        }
        let mut it = sets.into_iter();
        let mut next = || it.next().expect("arity checked");
        Ok(match kind {
            InstanceKind::EmptyZero => I::EmptyZero(sign),
            InstanceKind::SecretUnit => I::SecretUnit(sign),
            InstanceKind::Positivity => I::Positivity(next()),
            InstanceKind::AccessQualified => I::AccessQualified { set: next(), sign },
            InstanceKind::AccessUnqualified => I::AccessUnqualified { set: next(), sign },
            InstanceKind::Monotonicity => I::Monotonicity {
                subset: next(),
                superset: next(),
            },
            InstanceKind::StrongMonotonicity => I::StrongMonotonicity {
                subset: next(),
                superset: next(),
            },
            InstanceKind::Submodularity => I::Submodularity(next(), next()),
            InstanceKind::StrongSubmodularity => I::StrongSubmodularity(next(), next()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub terms: BTreeMap<String, String>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "optional_rational"
    )]
    pub constant: Option<Rational>,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
}

mod optional_rational {
    use crate::rational::{self, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&rational::format(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| rational::parse(&s).map_err(D::Error::custom))
            .transpose()
    }
}
