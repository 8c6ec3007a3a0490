//! `K`-linearized polynomials `Σ cᵢ X^{q^i}` with coefficients in `F`.

use serde::{Deserialize, Serialize};

use crate::gf::{Elem, FieldTower};
use crate::linalg;
use crate::subspace::Subspace;

/// A linearized polynomial; `coeffs[i]` is the coefficient of `X^{q^i}`.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has no
/// coefficients and structural equality is polynomial equality. A polynomial is not
/// reduced modulo `X^{q^n} - X` unless it came out of [`LinPoly::compose`] or
/// [`LinPoly::reduce_full`]; subspace polynomials need the unreduced form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Elem>", into = "Vec<Elem>")]
pub struct LinPoly {
    coeffs: Vec<Elem>,
}

impl From<Vec<Elem>> for LinPoly {
    fn from(coeffs: Vec<Elem>) -> Self {
        LinPoly::from_coeffs(coeffs)
    }
}

impl From<LinPoly> for Vec<Elem> {
    fn from(f: LinPoly) -> Self {
        f.coeffs
    }
}

/// Size of the kernel of a linearized polynomial on `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCount {
    pub count: u64,
    /// Set when the polynomial vanishes on all of `F` (`count = q^n`).
    pub identically_zero: bool,
}

impl LinPoly {
    pub fn zero() -> Self {
        LinPoly { coeffs: Vec::new() }
    }

    /// The identity map `X`.
    pub fn identity() -> Self {
        LinPoly {
            coeffs: vec![Elem::ONE],
        }
    }

    /// `c·X^{q^i}`.
    pub fn monomial(c: Elem, i: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; i + 1];
        coeffs[i] = c;
        LinPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// Largest `i` with a nonzero coefficient of `X^{q^i}`; `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, tower: &FieldTower, x: Elem) -> Elem {
        if x.is_zero() {
            return x;
        }
        self.coeffs
            .iter()
            .enumerate()
            .fold(Elem::ZERO, |acc, (i, &c)| {
                if c.is_zero() {
                    acc
                } else {
                    tower.add(acc, tower.mul(c, tower.frobenius(x, i as i64)))
                }
            })
    }

    pub fn add(&self, tower: &FieldTower, other: &LinPoly) -> LinPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        LinPoly::from_coeffs(
            (0..len)
                .map(|i| tower.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, tower: &FieldTower) -> LinPoly {
        LinPoly {
            coeffs: self.coeffs.iter().map(|&c| tower.neg(c)).collect(),
        }
    }

    pub fn sub(&self, tower: &FieldTower, other: &LinPoly) -> LinPoly {
        self.add(tower, &other.neg(tower))
    }

    /// `c·f`, i.e. `(cX) ∘ f`.
    pub fn scale(&self, tower: &FieldTower, c: Elem) -> LinPoly {
        LinPoly::from_coeffs(self.coeffs.iter().map(|&a| tower.mul(c, a)).collect())
    }

    /// `X^{q^j} ∘ f = f^{q^j}`, without reducing exponents.
    pub fn frobenius_outer(&self, tower: &FieldTower, j: usize) -> LinPoly {
        let mut coeffs = vec![Elem::ZERO; j];
        coeffs.extend(self.coeffs.iter().map(|&c| tower.frobenius(c, j as i64)));
        LinPoly::from_coeffs(coeffs)
    }

    /// Applies `c ↦ c^(p^r)` to every coefficient (`f^ρ`).
    pub fn automorphism(&self, tower: &FieldTower, r: u32) -> LinPoly {
        LinPoly::from_coeffs(self.coeffs.iter().map(|&c| tower.frobenius_p(c, r)).collect())
    }

    /// Reduction modulo `X^{q^n} - X`: exponents are folded modulo `n`.
    pub fn reduce_full(&self, tower: &FieldTower) -> LinPoly {
        let n = tower.n();
        if self.coeffs.len() <= n {
            return self.clone();
        }
        let mut out = vec![Elem::ZERO; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i % n] = tower.add(out[i % n], c);
        }
        LinPoly::from_coeffs(out)
    }

    /// `self ∘ other`, reduced modulo `X^{q^n} - X`.
    pub fn compose(&self, tower: &FieldTower, other: &LinPoly) -> LinPoly {
        let n = tower.n();
        let mut out = vec![Elem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = tower.mul(a, tower.frobenius(b, i as i64));
                let k = (i + j) % n;
                out[k] = tower.add(out[k], term);
            }
        }
        LinPoly::from_coeffs(out)
    }

    /// The canonical representative of `f + (θ_U)`: q-degree below `dim U`.
    ///
    /// Linearized division by the monic `θ_U`: the top term `c·X^{q^d}` is cancelled with
    /// `c·θ_U^{q^{d-m}}`, which vanishes on `U`.
    pub fn reduce_mod(&self, tower: &FieldTower, theta: &SubspacePoly) -> LinPoly {
        let th = theta.poly.coeffs();
        let m = th.len() - 1;
        let mut c = self.coeffs.clone();
        while c.len() > m {
            let d = c.len() - 1;
            let lead = c[d];
            if !lead.is_zero() {
                let shift = d - m;
                for (i, &t) in th.iter().enumerate() {
                    if t.is_zero() {
                        continue;
                    }
                    let term = tower.mul(lead, tower.frobenius(t, shift as i64));
                    c[i + shift] = tower.sub(c[i + shift], term);
                }
            }
            c.pop();
            while c.last().is_some_and(|v| v.is_zero()) {
                c.pop();
            }
        }
        LinPoly::from_coeffs(c)
    }

    /// Values on the fixed `K`-basis of `F`.
    pub fn values_on_basis(&self, tower: &FieldTower) -> Vec<Elem> {
        tower.basis().iter().map(|&b| self.eval(tower, b)).collect()
    }

    /// The `n × n` matrix over `K` of the map, rows `v(f(β_b))`.
    pub fn matrix(&self, tower: &FieldTower) -> Vec<Vec<u32>> {
        self.values_on_basis(tower)
            .into_iter()
            .map(|y| tower.coords(y))
            .collect()
    }

    /// The unique polynomial of q-degree `< n` with prescribed values on the fixed basis:
    /// `f(x) = Σ_i f(β_i)·Tr(β*_i x)`.
    pub fn from_values(tower: &FieldTower, values: &[Elem]) -> LinPoly {
        let n = tower.n();
        let dual = tower.dual_basis();
        let coeffs = (0..n)
            .map(|j| {
                values.iter().zip(dual).fold(Elem::ZERO, |acc, (&v, &d)| {
                    tower.add(acc, tower.mul(v, tower.frobenius(d, j as i64)))
                })
            })
            .collect();
        LinPoly::from_coeffs(coeffs)
    }

    /// The unique polynomial of q-degree `< points.len()` taking `values` on the
    /// `K`-independent `points` (Moore-matrix solve). `None` if the points are dependent.
    pub fn interpolate(tower: &FieldTower, points: &[Elem], values: &[Elem]) -> Option<LinPoly> {
        let m = points.len();
        if m == 0 {
            return Some(LinPoly::zero());
        }
        let moore: Vec<Vec<Elem>> = points
            .iter()
            .map(|&a| (0..m).map(|j| tower.frobenius(a, j as i64)).collect())
            .collect();
        linalg::solve_f(tower, &moore, values).map(LinPoly::from_coeffs)
    }

    /// Kernel size on `F`, via the rank of the matrix of the map.
    pub fn count_roots(&self, tower: &FieldTower) -> RootCount {
        let rank = linalg::rank(tower, self.matrix(tower));
        let n = tower.n();
        RootCount {
            count: tower.q().pow((n - rank) as u32),
            identically_zero: rank == 0,
        }
    }

    /// Whether `f(F) = F`.
    pub fn is_bijection(&self, tower: &FieldTower) -> bool {
        linalg::rank(tower, self.matrix(tower)) == tower.n()
    }

    /// Compositional inverse modulo `X^{q^n} - X`, if the map is bijective.
    pub fn inverse(&self, tower: &FieldTower) -> Option<LinPoly> {
        let inv = linalg::invert(tower, &self.matrix(tower))?;
        // rows of `inv` are v(f^{-1}(β_b))
        let values: Vec<Elem> = inv.iter().map(|row| tower.from_coords(row)).collect();
        Some(LinPoly::from_values(tower, &values))
    }
}

/// The subspace polynomial `θ_U = ∏_{u∈U} (X - u)` together with `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspacePoly {
    pub base: Subspace,
    pub poly: LinPoly,
}

impl SubspacePoly {
    /// Builds `θ_U` basis vector by basis vector with
    /// `θ_{V+⟨α⟩} = θ_V^q - θ_V(α)^{q-1}·θ_V`.
    pub fn new(tower: &FieldTower, base: &Subspace) -> Self {
        let mut theta = LinPoly::identity();
        for &alpha in base.basis() {
            let v = theta.eval(tower, alpha);
            let factor = tower.pow(v, tower.q() - 1);
            theta = theta
                .frobenius_outer(tower, 1)
                .sub(tower, &theta.scale(tower, factor));
        }
        SubspacePoly {
            base: base.clone(),
            poly: theta,
        }
    }

    /// `X^{q^n} - X`, whose root set is all of `F`.
    pub fn full(tower: &FieldTower) -> Self {
        Self::new(tower, &Subspace::full(tower))
    }

    pub fn dim(&self) -> usize {
        self.poly.q_degree().unwrap_or(0)
    }
}
