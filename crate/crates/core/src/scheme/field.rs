//! Arithmetic and elimination over a prime field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moduli stay below this so products fit in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    q: u64,
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|p| p * p <= q).all(|p| !q.is_multiple_of(p))
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if q >= MAX_MODULUS {
            return Err(Error::param(format!("modulus {q} is above 2^31")));
        }
        if !is_prime(q) {
            return Err(Error::param(format!("modulus {q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    /// Smallest prime at least `n`.
    pub fn at_least(n: u64) -> Result<Self> {
        let q = (n.max(2)..MAX_MODULUS)
            .find(|&q| is_prime(q))
            .ok_or_else(|| Error::param("no prime below 2^31 is that large"))?;
        Ok(PrimeField { q })
    }

    pub fn modulus(self) -> u64 {
        self.q
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        self.pow(a, self.q - 2)
    }

    /// Rank of `rows` restricted to `columns`. `rows` are not modified.
    pub fn rank<R: AsRef<[u64]>>(self, rows: &[R], columns: &[usize]) -> usize {
        let mut m: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| columns.iter().map(|&c| r.as_ref()[c]).collect())
            .collect();
        self.rank_in_place(&mut m)
    }

    pub fn rank_in_place(self, m: &mut [Vec<u64>]) -> usize {
        let width = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..width {
            let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, p);
            let inv = self.inv(m[rank][col]);
            for v in &mut m[rank][col..] {
                *v = self.mul(*v, inv);
            }
            let (top, rest) = m.split_at_mut(rank + 1);
            let pivot = &top[rank];
            for row in rest {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                for (v, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v = self.sub(*v, self.mul(f, *p));
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(q: u64) -> Result<Self> {
        PrimeField::new(q)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.q
    }
}
