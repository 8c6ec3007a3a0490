//! Dense linear algebra over `K` (on labels) and over `F` (on [`Elem`]s).

use serde::{Deserialize, Serialize};

use crate::gf::{Elem, FieldTower};
use crate::{Error, Result};

/// A matrix over `K`, entries are `K` labels, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct KMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl KMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        KMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(KMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(KMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn sub(&self, tower: &FieldTower, other: &KMatrix) -> Result<KMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| tower.k_sub(a, b))
            .collect();
        Ok(KMatrix { data, ..*self })
    }

    pub fn mul(&self, tower: &FieldTower, other: &KMatrix) -> Result<KMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = KMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = tower.k_add(out.get(i, j), tower.k_mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Applies `λ ↦ λ^(p^r)` entrywise.
    pub fn automorphism(&self, tower: &FieldTower, r: u32) -> KMatrix {
        KMatrix {
            data: self.data.iter().map(|&v| tower.k_automorphism(v, r)).collect(),
            ..*self
        }
    }

    pub fn rank(&self, tower: &FieldTower) -> usize {
        rank(tower, self.to_rows())
    }

    pub fn inverse(&self, tower: &FieldTower) -> Option<KMatrix> {
        if self.rows != self.cols {
            return None;
        }
        invert(tower, &self.to_rows()).map(|r| KMatrix::from_rows(r).expect("square"))
    }
}

impl TryFrom<Vec<Vec<u32>>> for KMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self> {
        KMatrix::from_rows(rows)
    }
}

impl From<KMatrix> for Vec<Vec<u32>> {
    fn from(m: KMatrix) -> Self {
        m.to_rows()
    }
}

/// Reduced row-echelon form over `K`. Zero rows are dropped; returns the pivot columns.
pub fn rref(tower: &FieldTower, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = tower.k_inv(rows[r][c]).expect("pivot is nonzero");
        if inv != 1 {
            for v in rows[r].iter_mut() {
                *v = tower.k_mul(*v, inv);
            }
        }
        for i in 0..rows.len() {
            if i == r {
                continue;
            }
            let factor = rows[i][c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let sub = tower.k_mul(factor, rows[r][j]);
                rows[i][j] = tower.k_sub(rows[i][j], sub);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(tower: &FieldTower, mut rows: Vec<Vec<u32>>) -> usize {
    rref(tower, &mut rows).len()
}

/// Basis of `{x ∈ K^cols : M x = 0}` in reduced echelon form.
pub fn nullspace(tower: &FieldTower, mut rows: Vec<Vec<u32>>, cols: usize) -> Vec<Vec<u32>> {
    let pivots = rref(tower, &mut rows);
    let mut basis: Vec<Vec<u32>> = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0; cols];
            v[f] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = tower.k_neg(rows[r][f]);
            }
            v
        })
        .collect();
    rref(tower, &mut basis);
    basis
}

/// Inverse of a square matrix over `K`, `None` if singular.
pub fn invert(tower: &FieldTower, mat: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<u32>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| (i == j) as u32));
            r
        })
        .collect();
    let pivots = rref(tower, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `M c = rhs` over `F` for an invertible square `M`.
pub fn solve_f(tower: &FieldTower, mat: &[Vec<Elem>], rhs: &[Elem]) -> Option<Vec<Elem>> {
    let n = mat.len();
    let mut aug: Vec<Vec<Elem>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    for c in 0..n {
        let sel = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, sel);
        let inv = tower.inv(aug[c][c]).ok()?;
        for v in aug[c].iter_mut() {
            *v = tower.mul(*v, inv);
        }
        for i in 0..n {
            if i == c || aug[i][c].is_zero() {
                continue;
            }
            let factor = aug[i][c];
            for j in c..=n {
                let sub = tower.mul(factor, aug[c][j]);
                aug[i][j] = tower.sub(aug[i][j], sub);
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n]).collect())
}

/// Inverse of a square matrix over `F`, `None` if singular.
pub fn invert_f(tower: &FieldTower, mat: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = mat.len();
    let cols: Vec<Vec<Elem>> = (0..n)
        .map(|j| {
            let e: Vec<Elem> = (0..n)
                .map(|i| if i == j { Elem::ONE } else { Elem::ZERO })
                .collect();
            solve_f(tower, mat, &e)
        })
        .collect::<Option<_>>()?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_is_canonical() {
        let t = FieldTower::new(3, 1, 3).unwrap();
        let mut a = vec![vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 1]];
        let piv = rref(&t, &mut a);
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(a, vec![vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn inverse_round_trip_over_q4() {
        let t = FieldTower::new(2, 2, 2).unwrap();
        let m = KMatrix::from_rows(vec![vec![1, 2], vec![3, 1]]).unwrap();
        if let Some(inv) = m.inverse(&t) {
            assert_eq!(m.mul(&t, &inv).unwrap(), KMatrix::identity(2));
        } else {
            assert!(m.rank(&t) < 2);
        }
        assert!(KMatrix::from_rows(vec![vec![1, 1], vec![1, 1]])
            .unwrap()
            .inverse(&t)
            .is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let m = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]];
        let ns = nullspace(&t, m.clone(), 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let dot = row
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| t.k_add(acc, t.k_mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
        assert_eq!(nullspace(&t, Vec::new(), 2), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn shape_errors() {
        let t = FieldTower::new(2, 1, 2).unwrap();
        let a = KMatrix::zeros(2, 3);
        let b = KMatrix::zeros(3, 2);
        assert!(a.sub(&t, &b).is_err());
        assert!(a.mul(&t, &a).is_err());
        assert!(KMatrix::from_rows(vec![vec![1], vec![1, 0]]).is_err());
    }
}
