use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{AddAssign, Neg};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

/// A rational linear combination of set-function values `f(A)` plus a
/// constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearExpr {
    terms: BTreeMap<VertexSet, Rational>,
    pub constant: Rational,
}

impl LinearExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single term `f(set)`.
    pub fn f(set: VertexSet) -> Self {
        let mut e = Self::zero();
        e.add_term(set, Rational::one());
        e
    }

    pub fn add_term(&mut self, set: VertexSet, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(set) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinearExpr, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (set, c) in &other.terms {
            self.add_term(set.clone(), c * factor);
        }
        self.constant += &other.constant * factor;
    }

    pub fn coefficient(&self, set: &VertexSet) -> Rational {
        self.terms.get(set).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VertexSet, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True when no `f` terms remain (the constant may be nonzero).
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same coefficients on every `f` term; constants are ignored.
    pub fn same_terms(&self, other: &LinearExpr) -> bool {
        self.terms == other.terms
    }

    /// First set, in set order, whose coefficient differs between the two.
    pub fn first_difference(&self, other: &LinearExpr) -> Option<(VertexSet, Rational, Rational)> {
        let keys: std::collections::BTreeSet<&VertexSet> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().find_map(|k| {
            let (a, b) = (self.coefficient(k), other.coefficient(k));
            (a != b).then(|| (k.clone(), a, b))
        })
    }

    /// Relabels every set through `map` (old id `i` becomes `map[i]`).
    pub fn relabel(&self, map: &[usize]) -> LinearExpr {
        let mut out = LinearExpr {
            terms: BTreeMap::new(),
            constant: self.constant.clone(),
        };
        for (set, c) in &self.terms {
            out.add_term(set.iter().map(|v| map[v]).collect(), c.clone());
        }
        out
    }

    /// Value of the expression under `f`.
    pub fn evaluate(&self, f: impl Fn(&VertexSet) -> Rational) -> Rational {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (s, c)| acc + c * f(s))
    }
}

impl AddAssign<&LinearExpr> for LinearExpr {
    fn add_assign(&mut self, rhs: &LinearExpr) {
        self.add_scaled(rhs, &Rational::one());
    }
}

impl Neg for LinearExpr {
    type Output = LinearExpr;

    fn neg(mut self) -> LinearExpr {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self.constant = -self.constant;
        self
    }
}

impl FromIterator<(VertexSet, Rational)> for LinearExpr {
    fn from_iter<I: IntoIterator<Item = (VertexSet, Rational)>>(iter: I) -> Self {
        let mut e = LinearExpr::zero();
        for (s, c) in iter {
            e.add_term(s, c);
        }
        e
    }
}

/// `Σ_{b∈B} f(X ∪ b) − Σ_{a∈A} f(X ∖ a)`, requiring `A ⊆ X`.
pub fn bracket(x: &VertexSet, b: &VertexSet, a: &VertexSet) -> Result<LinearExpr> {
    if !a.is_subset(x) {
        return Err(Error::param(format!("bracket needs A ⊆ X, got A={a:?}, X={x:?}")));
    }
    let mut e = LinearExpr::zero();
    for v in b.iter() {
        e.add_term(x.with(v), Rational::one());
    }
    for v in a.iter() {
        e.add_term(x.without(v), -Rational::one());
    }
    Ok(e)
}
