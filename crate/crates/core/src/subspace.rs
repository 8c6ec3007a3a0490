//! `K`-subspaces of `F` in canonical (reduced row-echelon) form.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::gf::{Elem, FieldTower};
use crate::{linalg, Error, Limits, Result};

/// A `K`-subspace `U ⊆ F`.
///
/// `rows` is the RREF of the coordinate vectors of any basis, so two subspaces are equal
/// iff their rows are equal; the derived ordering is lexicographic on the flattened rows.
/// `basis` holds the elements `α_i ∈ F` whose coordinates are the rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<u32>>,
    basis: Vec<Elem>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl Subspace {
    fn from_reduced(tower: &FieldTower, rows: Vec<Vec<u32>>) -> Self {
        let basis = rows.iter().map(|r| tower.from_coords(r)).collect();
        Subspace {
            n: tower.n(),
            rows,
            basis,
        }
    }

    pub fn zero(tower: &FieldTower) -> Self {
        Self::from_reduced(tower, Vec::new())
    }

    /// `F` itself.
    pub fn full(tower: &FieldTower) -> Self {
        let n = tower.n();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as u32).collect())
            .collect();
        Self::from_reduced(tower, rows)
    }

    /// The `K`-span of `gens`.
    pub fn span(tower: &FieldTower, gens: &[Elem]) -> Self {
        let mut rows: Vec<Vec<u32>> = gens.iter().map(|&g| tower.coords(g)).collect();
        linalg::rref(tower, &mut rows);
        Self::from_reduced(tower, rows)
    }

    /// The row space of a matrix of `K` labels (not necessarily in echelon form).
    pub fn from_rows(tower: &FieldTower, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = tower.n();
        for row in &rows {
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "subspace rows must have length {n}, got {}",
                    row.len()
                )));
            }
            if row.iter().any(|&v| v as u64 >= tower.q()) {
                return Err(Error::Malformed(format!(
                    "subspace entries must lie in 0..{}",
                    tower.q()
                )));
            }
        }
        let mut rows = rows;
        linalg::rref(tower, &mut rows);
        Ok(Self::from_reduced(tower, rows))
    }

    pub fn from_json(tower: &FieldTower, json: &str) -> Result<Self> {
        let rows: Vec<Vec<u32>> =
            serde_json::from_str(json).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_rows(tower, rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("rows serialize")
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// The basis `α_1, …, α_m` read off the echelon rows.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn flat_labels(&self) -> Vec<u32> {
        self.rows.iter().flatten().copied().collect()
    }

    pub fn contains(&self, tower: &FieldTower, x: Elem) -> bool {
        let mut v = tower.coords(x);
        for row in &self.rows {
            let c = row.iter().position(|&e| e != 0).expect("rows are nonzero");
            let f = v[c];
            if f != 0 {
                for (vj, &rj) in v.iter_mut().zip(row) {
                    *vj = tower.k_sub(*vj, tower.k_mul(f, rj));
                }
            }
        }
        v.iter().all(|&e| e == 0)
    }

    /// The element `Σ λ_i α_i` where the `λ_i` are the base-`q` digits of `code`.
    pub fn element(&self, tower: &FieldTower, code: u64) -> Elem {
        let q = tower.q();
        let mut code = code;
        let mut acc = Elem::ZERO;
        for &a in &self.basis {
            let lambda = (code % q) as u32;
            code /= q;
            if lambda != 0 {
                acc = tower.add(acc, tower.mul(tower.k_embed(lambda), a));
            }
        }
        acc
    }

    /// All `q^m` elements, indexed as in [`Subspace::element`].
    pub fn elements(&self, tower: &FieldTower) -> Vec<Elem> {
        let size = tower.q().pow(self.dim() as u32);
        (0..size).map(|c| self.element(tower, c)).collect()
    }

    /// `{c·u : u ∈ U}`.
    pub fn scale(&self, tower: &FieldTower, c: Elem) -> Result<Subspace> {
        if c.is_zero() {
            return Err(Error::InvalidParameters(
                "cannot scale a subspace by zero".into(),
            ));
        }
        Ok(self.semilinear_image(tower, c, 0))
    }

    /// `{u^{q^j} : u ∈ U}`.
    pub fn frob_image(&self, tower: &FieldTower, j: i64) -> Subspace {
        self.semilinear_image(tower, Elem::ONE, j)
    }

    /// `{c·u^{q^j} : u ∈ U}` for `c ≠ 0`.
    pub fn semilinear_image(&self, tower: &FieldTower, c: Elem, j: i64) -> Subspace {
        let gens: Vec<Elem> = self
            .basis
            .iter()
            .map(|&a| tower.mul(c, tower.frobenius(a, j)))
            .collect();
        Subspace::span(tower, &gens)
    }

    /// Largest `t | n` such that `U` is a vector space over the subfield of order `q^t`.
    ///
    /// `U` is closed under multiplication by that subfield iff it is closed under
    /// multiplication by a generator of it.
    pub fn largest_linearity_field(&self, tower: &FieldTower) -> usize {
        let n = tower.n();
        divisors(n)
            .into_iter()
            .rev()
            .find(|&t| {
                self.dim() % t == 0 && {
                    let z = tower.subfield_generator(t);
                    self.basis
                        .iter()
                        .all(|&a| self.contains(tower, tower.mul(z, a)))
                }
            })
            .unwrap_or(1)
    }

    /// Smallest `t | n` such that `U` lies inside the subfield of order `q^t`.
    pub fn smallest_containing_field(&self, tower: &FieldTower) -> usize {
        let n = tower.n();
        divisors(n)
            .into_iter()
            .find(|&t| self.basis.iter().all(|&a| tower.in_subfield(a, t)))
            .unwrap_or(n)
    }

    /// Some `a ≠ 0` with `1 ∈ a·U` (namely the inverse of the first basis element).
    pub fn normalizer_scalar(&self, tower: &FieldTower) -> Option<Elem> {
        self.basis.first().and_then(|&a| tower.inv(a).ok())
    }

    /// `a·U` for a scalar making it contain `1`.
    pub fn normalized(&self, tower: &FieldTower) -> Subspace {
        match self.normalizer_scalar(tower) {
            Some(a) => self.semilinear_image(tower, a, 0),
            None => self.clone(),
        }
    }
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Number of `m`-dimensional subspaces of an `n`-dimensional space over `GF(q)`:
/// `∏_{i=1}^m (q^{n-i+1} - 1)/(q^i - 1)`.
pub fn gaussian_binomial(n: u32, m: u32, q: u64) -> BigUint {
    if m > n {
        return BigUint::default();
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=m {
        num *= q.pow(n - i + 1) - &one;
        den *= q.pow(i) - &one;
    }
    num / den
}

/// Pivot-column patterns of `m × n` echelon matrices, in lexicographic order.
pub fn pivot_patterns(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for c in start..=n - left {
            cur.push(c);
            rec(c + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= n {
        rec(0, n, m, &mut Vec::new(), &mut out);
    }
    out
}

/// All subspaces with the given pivot pattern.
pub fn subspaces_with_pivots(tower: &FieldTower, pivots: &[usize]) -> Vec<Subspace> {
    let n = tower.n();
    let q = tower.q();
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| {
            (c + 1..n)
                .filter(|j| !pivots.contains(j))
                .map(move |j| (i, j))
        })
        .collect();
    let count = q.pow(free.len() as u32);
    (0..count)
        .map(|code| {
            let mut rows = vec![vec![0u32; n]; pivots.len()];
            for (i, &c) in pivots.iter().enumerate() {
                rows[i][c] = 1;
            }
            let mut code = code;
            for &(i, j) in &free {
                rows[i][j] = (code % q) as u32;
                code /= q;
            }
            Subspace::from_reduced(tower, rows)
        })
        .collect()
}

/// Every `m`-dimensional subspace exactly once, grouped by pivot pattern.
pub fn enumerate_subspaces(tower: &FieldTower, m: usize, limits: &Limits) -> Result<Vec<Subspace>> {
    let n = tower.n();
    if m > n {
        return Err(Error::InvalidParameters(format!(
            "subspace dimension {m} exceeds n = {n}"
        )));
    }
    let count = gaussian_binomial(n as u32, m as u32, tower.q());
    let size = count.to_u128().unwrap_or(u128::MAX);
    limits.check("subspace enumeration", size, limits.max_subspaces)?;
    let chunks: Vec<Vec<Subspace>> = pivot_patterns(n, m)
        .par_iter()
        .map(|p| subspaces_with_pivots(tower, p))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}
