//! Linear secret sharing schemes: each share is a list of linear forms in
//! the secret coordinates followed by the randomness coordinates.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearScheme {
    field: PrimeField,
    secret_dim: usize,
    randomness_dim: usize,
    rows: Vec<Vec<u64>>,
    participants: Vec<Range<usize>>,
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    modulus: u64,
    secret_dim: usize,
    randomness_dim: usize,
    rows: Vec<Vec<u64>>,
    /// Half-open row range `[start, end)` per participant.
    participants: Vec<[usize; 2]>,
}

impl LinearScheme {
    /// Checks shapes only; zero rows are allowed so faults can be injected.
    pub fn new(
        field: PrimeField,
        secret_dim: usize,
        randomness_dim: usize,
        rows: Vec<Vec<u64>>,
        participants: Vec<Range<usize>>,
    ) -> Result<Self> {
        if secret_dim == 0 {
            return Err(Error::param("secret dimension must be positive"));
        }
        let width = secret_dim + randomness_dim;
        let q = field.modulus();
        if let Some(i) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::Format(format!("row {i} has length {}, expected {width}", rows[i].len())));
        }
        if rows.iter().flatten().any(|&x| x >= q) {
            return Err(Error::Format(format!("row entry not reduced modulo {q}")));
        }
        if let Some(v) = participants.iter().position(|r| r.start > r.end || r.end > rows.len()) {
            return Err(Error::Format(format!("participant {v} has an invalid row range")));
        }
        Ok(LinearScheme {
            field,
            secret_dim,
            randomness_dim,
            rows,
            participants,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn secret_dim(&self) -> usize {
        self.secret_dim
    }

    pub fn randomness_dim(&self) -> usize {
        self.randomness_dim
    }

    pub fn width(&self) -> usize {
        self.secret_dim + self.randomness_dim
    }

    pub fn participant_count(&self) -> usize {
        self.participants.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row_range(&self, v: usize) -> Range<usize> {
        self.participants[v].clone()
    }

    pub fn rows_of(&self, v: usize) -> &[Vec<u64>] {
        &self.rows[self.participants[v].clone()]
    }

    /// Indices of all-zero rows.
    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].iter().all(|&x| x == 0)).collect()
    }

    /// Replaces one row, keeping every other part of the scheme.
    pub fn with_row(mut self, index: usize, row: Vec<u64>) -> Result<Self> {
        if index >= self.rows.len() {
            return Err(Error::param(format!("row {index} does not exist")));
        }
        self.rows[index] = row;
        let LinearScheme {
            field,
            secret_dim,
            randomness_dim,
            rows,
            participants,
        } = self;
        LinearScheme::new(field, secret_dim, randomness_dim, rows, participants)
    }

    fn check(&self, a: &VertexSet) -> Result<()> {
        match a.iter().find(|&v| v >= self.participant_count()) {
            Some(v) => Err(Error::param(format!("{v} is not a participant"))),
            None => Ok(()),
        }
    }

    fn stacked(&self, a: &VertexSet) -> Vec<&[u64]> {
        a.iter()
            .flat_map(|v| self.rows_of(v).iter().map(Vec::as_slice))
            .collect()
    }

    /// Columns inside `range` that some row uses.
    fn support(rows: &[&[u64]], range: Range<usize>) -> Vec<usize> {
        range.filter(|&c| rows.iter().any(|r| r[c] != 0)).collect()
    }

    fn ranks(&self, a: &VertexSet) -> (usize, usize) {
        let rows = self.stacked(a);
        let all = Self::support(&rows, 0..self.width());
        let random = Self::support(&rows, self.secret_dim..self.width());
        (self.field.rank(&rows, &all), self.field.rank(&rows, &random))
    }

    /// Shares of `a` fix the secret: the stacked map's kernel has zero secret
    /// part.
    pub fn is_determining(&self, a: &VertexSet) -> Result<bool> {
        self.check(a)?;
        let (full, random) = self.ranks(a);
        Ok(full == random + self.secret_dim)
    }

    /// Shares of `a` have the same distribution for every secret: the secret
    /// columns lie in the span of the randomness columns.
    pub fn is_independent_of_secret(&self, a: &VertexSet) -> Result<bool> {
        self.check(a)?;
        let (full, random) = self.ranks(a);
        Ok(full == random)
    }

    /// Joint share entropy in q-ary units. Element `participant_count()`
    /// stands for the secret.
    pub fn entropy_rank(&self, a: &VertexSet) -> Result<usize> {
        let n = self.participant_count();
        let participants = a.without(n);
        self.check(&participants)?;
        let units: Vec<Vec<u64>> = if a.contains(n) {
            (0..self.secret_dim)
                .map(|i| {
                    let mut r = vec![0; self.width()];
                    r[i] = 1;
                    r
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut rows = self.stacked(&participants);
        rows.extend(units.iter().map(Vec::as_slice));
        let all = Self::support(&rows, 0..self.width());
        Ok(self.field.rank(&rows, &all))
    }

    pub fn share_rank(&self, v: usize) -> usize {
        let rows: Vec<&[u64]> = self.rows_of(v).iter().map(Vec::as_slice).collect();
        let all = Self::support(&rows, 0..self.width());
        self.field.rank(&rows, &all)
    }

    pub fn to_json(&self) -> String {
        let file = SchemeFile {
            modulus: self.field.modulus(),
            secret_dim: self.secret_dim,
            randomness_dim: self.randomness_dim,
            rows: self.rows.clone(),
            participants: self.participants.iter().map(|r| [r.start, r.end]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("scheme serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: SchemeFile = serde_json::from_str(s)?;
        LinearScheme::new(
            PrimeField::new(file.modulus)?,
            file.secret_dim,
            file.randomness_dim,
            file.rows,
            file.participants.iter().map(|&[a, b]| a..b).collect(),
        )
    }
}
