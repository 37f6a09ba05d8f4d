//! Exact rational linear algebra for the constraint solvers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Labelled system `A x = b` over ℚ.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    unknowns: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    labels: Vec<String>,
}

/// Solution space `particular + span(nullspace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralSolution {
    pub rank: usize,
    pub particular: Vec<Rational>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    /// One basis vector per free variable, in the order of `free`.
    pub nullspace: Vec<Vec<Rational>>,
}

impl LinearSystem {
    pub fn new(unknowns: usize) -> Self {
        LinearSystem {
            unknowns,
            ..Default::default()
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, label: impl Into<String>, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.unknowns, "row width");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        self.labels.push(label.into());
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `A x - b`, row by row.
    pub fn residuals(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                row.iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, xi)| acc + a * xi)
                    - b
            })
            .collect()
    }

    /// Reduced row echelon form. Inconsistency reports the labels of the
    /// original rows whose combination yields `0 = c ≠ 0`.
    pub fn general_solution(&self) -> Result<GeneralSolution> {
        let m = self.rows.len();
        let n = self.unknowns;
        // Augmented [A | b | I] so every reduced row remembers its provenance.
        let mut aug: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                let mut row = self.rows[i].clone();
                row.push(self.rhs[i].clone());
                row.extend((0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let inv = aug[r][c].recip();
            for x in aug[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..m {
                if i != r && !aug[i][c].is_zero() {
                    let f = aug[i][c].clone();
                    for j in 0..aug[i].len() {
                        let d = &f * &aug[r][j];
                        aug[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        for row in aug.iter().skip(r) {
            if !row[n].is_zero() {
                let conflicting = (0..m)
                    .filter(|&j| !row[n + 1 + j].is_zero())
                    .map(|j| self.labels[j].clone())
                    .collect();
                return Err(Error::Inconsistent { conflicting });
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut particular = vec![Rational::zero(); n];
        for (i, &c) in pivots.iter().enumerate() {
            particular[c] = aug[i][n].clone();
        }
        let nullspace = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Rational::zero(); n];
                v[fc] = Rational::one();
                for (i, &c) in pivots.iter().enumerate() {
                    v[c] = -aug[i][fc].clone();
                }
                v
            })
            .collect();
        Ok(GeneralSolution {
            rank: pivots.len(),
            particular,
            pivots,
            free,
            nullspace,
        })
    }

    /// The unique solution, or `Underdetermined`/`Inconsistent`.
    pub fn solve_unique(&self) -> Result<Vec<Rational>> {
        let sol = self.general_solution()?;
        if sol.rank < self.unknowns {
            return Err(Error::Underdetermined {
                rank: sol.rank,
                unknowns: self.unknowns,
            });
        }
        Ok(sol.particular)
    }
}

/// Square matrix product over ℚ.
pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Rational::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Rational::zero(), |acc, (p, q)| acc + p * q))
        .collect()
}

pub fn transpose(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut sys = LinearSystem::new(n);
        for (i, row) in a.iter().enumerate() {
            let e = if i == j { Rational::one() } else { Rational::zero() };
            sys.push("", row.clone(), e);
        }
        cols.push(sys.solve_unique().ok()?);
    }
    Some(transpose(&cols))
}

/// Determinant by fraction-exact elimination.
pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest.iter_mut() {
            let f = &row[c] / &pivot[c];
            for (x, p) in row[c..n].iter_mut().zip(&pivot[c..n]) {
                *x -= &f * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use alloc::string::ToString;

    fn q(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn unique_solution() {
        let mut s = LinearSystem::new(2);
        s.push("a", vec![q(1), q(1)], q(3));
        s.push("b", vec![q(1), q(-1)], q(1));
        let x = s.solve_unique().unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(s.residuals(&x).iter().all(Zero::is_zero));
    }

    #[test]
    fn underdetermined_reports_rank() {
        let mut s = LinearSystem::new(3);
        s.push("a", vec![q(1), q(1), q(0)], q(3));
        let err = s.solve_unique().unwrap_err();
        assert_eq!(err, Error::Underdetermined { rank: 1, unknowns: 3 });
        let g = s.general_solution().unwrap();
        assert_eq!(g.free, vec![1, 2]);
        for v in &g.nullspace {
            assert!(s.residuals(v).iter().zip(s.residuals(&vec![q(0); 3])).all(|(a, b)| a == &b));
        }
    }

    #[test]
    fn inconsistency_names_rows() {
        let mut s = LinearSystem::new(2);
        s.push("first", vec![q(1), q(0)], q(1));
        s.push("unrelated", vec![q(0), q(1)], q(5));
        s.push("second", vec![q(2), q(0)], q(3));
        match s.solve_unique().unwrap_err() {
            Error::Inconsistent { conflicting } => {
                assert_eq!(conflicting, vec!["first".to_string(), "second".to_string()]);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let a = vec![vec![q(2), q(1)], vec![q(5), q(3)]];
        assert_eq!(determinant(&a), q(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }
}
