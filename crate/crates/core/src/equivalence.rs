//! Equivalence of projected Gabidulin codes.
//!
//! Two routes are provided and are meant to be checked against each other:
//!
//! * the orbit criterion: `π_U(G_{k,s})` and `π_W(G_{k,s})` are equivalent iff `W` maps
//!   to `U` under `x ↦ c·x^{q^j}` ([`orbit_of`], [`equivalent_by_theorem`]);
//! * an exhaustive search for `(A, B, ρ[, transpose])` with `C₂ = {A X^ρ B : X ∈ C₁}`
//!   ([`EquivalenceSearch`], [`equivalent_bruteforce`]).

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::gabidulin::{GabidulinSpec, MatrixCode};
use crate::gf::{Elem, FieldTower};
use crate::linalg::{self, KMatrix};
use crate::linpoly::{LinPoly, SubspacePoly};
use crate::subspace::{enumerate_subspaces, gaussian_binomial, Subspace};
use crate::{pow_sat, Error, Limits, Result};

/// One `ΓL(1, F)`-orbit of `m`-dimensional subspaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitClass {
    /// Lexicographically smallest echelon form in the orbit.
    pub representative: Subspace,
    /// Sorted.
    pub members: Vec<Subspace>,
    /// `n·(q^n - 1)`, the order of `GL_1(F) ⋊ Aut(F/K)`.
    pub group_order_used: u64,
}

impl OrbitClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The orbit of `U` under `x ↦ c·x^{q^j}`, found by closing `{U}` under the two generators
/// `x ↦ g·x` and `x ↦ x^q`.
pub fn orbit_of(tower: &FieldTower, u: &Subspace) -> OrbitClass {
    let g = tower.primitive();
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    while let Some(cur) = queue.pop_front() {
        for next in [
            cur.semilinear_image(tower, g, 0),
            cur.semilinear_image(tower, Elem::ONE, 1),
        ] {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut members: Vec<Subspace> = seen.into_iter().collect();
    members.sort();
    OrbitClass {
        representative: members[0].clone(),
        members,
        group_order_used: tower.n() as u64 * (tower.order() - 1),
    }
}

/// Partitions all `m`-dimensional subspaces into orbits, sorted by representative.
pub fn classify_all(tower: &FieldTower, m: usize, limits: &Limits) -> Result<Vec<OrbitClass>> {
    let all = enumerate_subspaces(tower, m, limits)?;
    let mut assigned: HashSet<Subspace> = HashSet::with_capacity(all.len());
    let mut orbits = Vec::new();
    for u in &all {
        if assigned.contains(u) {
            continue;
        }
        let orbit = orbit_of(tower, u);
        assigned.extend(orbit.members.iter().cloned());
        orbits.push(orbit);
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// `(1/n) ∏_{i=2}^m (q^{n-i+1} - 1)/(q^i - 1)`; the empty product gives `1/n` for `m ≤ 1`.
pub fn theorem11_product(q: u64, n: u32, m: u32) -> BigRational {
    let q = BigInt::from(q);
    let one = BigInt::one();
    let mut acc = BigRational::new(one.clone(), BigInt::from(n));
    for i in 2..=m {
        let num = q.pow(n - i + 1) - &one;
        let den = q.pow(i) - &one;
        acc *= BigRational::new(num, den);
    }
    acc
}

/// Lower bound on the number of pairwise inequivalent Gabidulin codes in `K^{m×n}` with
/// minimum distance `d`; needs `1 < d ≤ m ≤ n`.
pub fn theorem11_bound(q: u64, n: u32, m: u32, d: u32) -> Result<BigRational> {
    if d <= 1 || d > m || m > n {
        return Err(Error::Precondition(format!(
            "the bound needs 1 < d <= m <= n, got d = {d}, m = {m}, n = {n}"
        )));
    }
    Ok(theorem11_product(q, n, m))
}

fn check_same_family(a: &GabidulinSpec, b: &GabidulinSpec) -> Result<()> {
    if a.tower() != b.tower() {
        return Err(Error::ParameterMismatch("codes live over different towers".into()));
    }
    if a.k() != b.k() || a.s() != b.s() {
        return Err(Error::ParameterMismatch(format!(
            "(k, s) differ: ({}, {}) vs ({}, {})",
            a.k(),
            a.s(),
            b.k(),
            b.s()
        )));
    }
    if a.m() != b.m() {
        return Err(Error::ParameterMismatch(format!(
            "subspace dimensions differ: {} vs {}",
            a.m(),
            b.m()
        )));
    }
    Ok(())
}

/// Equivalence by the orbit criterion. Needs equal `(q, n, k, s, m)` and `k < m`.
pub fn equivalent_by_theorem(a: &GabidulinSpec, b: &GabidulinSpec) -> Result<bool> {
    check_same_family(a, b)?;
    if a.k() >= a.m() {
        return Err(Error::Precondition(format!(
            "the orbit criterion needs k < m, got k = {}, m = {}",
            a.k(),
            a.m()
        )));
    }
    let t = a.tower();
    Ok(orbit_of(t, a.subspace()).representative == orbit_of(t, b.subspace()).representative)
}

/// Polynomial form of an equivalence: `π_W(φ₂ ∘ f^ρ ∘ φ₁)` runs over the second code as
/// `f` runs over the first, with `φ₁(W) = U` and `φ₂` bijective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyWitness {
    pub phi2: LinPoly,
    pub phi1: LinPoly,
    pub rho: u32,
}

/// `C₂ = {A X^ρ B : X ∈ C₁}`, or `{A X^ρ B : X^T ∈ C₁}` when `transpose` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    #[serde(rename = "A")]
    pub a: KMatrix,
    #[serde(rename = "B")]
    pub b: KMatrix,
    pub rho: u32,
    pub transpose: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub poly_form: Option<PolyWitness>,
}

impl EquivalenceWitness {
    /// The image of `code` under the witness.
    pub fn apply(&self, tower: &FieldTower, code: &MatrixCode) -> Result<MatrixCode> {
        let words = code
            .words()
            .iter()
            .map(|x| {
                let x = if self.transpose { x.transpose() } else { x.clone() };
                self.a
                    .mul(tower, &x.automorphism(tower, self.rho))?
                    .mul(tower, &self.b)
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixCode::new(code.q(), self.a.rows(), self.b.cols(), code.is_linear(), words)
    }

    /// Whether the witness maps `c1` onto `c2` as sets.
    pub fn maps(&self, tower: &FieldTower, c1: &MatrixCode, c2: &MatrixCode) -> Result<bool> {
        let image: HashSet<KMatrix> = self.apply(tower, c1)?.words().iter().cloned().collect();
        let target: HashSet<KMatrix> = c2.words().iter().cloned().collect();
        Ok(image == target)
    }

    /// Matrix form of a polynomial witness between `π_U(C₁)` (`spec1`) and `π_W(C₂)`
    /// (`spec2`). Only `ρ = id` is supported.
    pub fn from_poly(poly: PolyWitness, spec1: &GabidulinSpec, spec2: &GabidulinSpec) -> Result<Self> {
        if poly.rho != 0 {
            return Err(Error::InvalidParameters(
                "matrix form is only derived for ρ = id".into(),
            ));
        }
        let t = spec1.tower();
        let u = spec1.subspace();
        let w = spec2.subspace();
        let pivots = pivot_columns(u);
        let mut rows = Vec::with_capacity(w.dim());
        for &wi in w.basis() {
            let img = poly.phi1.eval(t, wi);
            if !u.contains(t, img) {
                return Err(Error::Precondition("φ₁(W) is not contained in U".into()));
            }
            let c = t.coords(img);
            rows.push(pivots.iter().map(|&p| c[p]).collect::<Vec<u32>>());
        }
        let a = KMatrix::from_rows(rows)?;
        let b = KMatrix::from_rows(poly.phi2.matrix(t))?;
        Ok(EquivalenceWitness {
            a,
            b,
            rho: 0,
            transpose: false,
            poly_form: Some(poly),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }
}

fn pivot_columns(u: &Subspace) -> Vec<usize> {
    u.rows()
        .iter()
        .map(|r| r.iter().position(|&v| v != 0).expect("nonzero row"))
        .collect()
}

/// `|GL_k(q)|`.
pub fn gl_order(k: usize, q: u64) -> u128 {
    let qk = pow_sat(q, k as u64);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul(qk - pow_sat(q, i as u64))
    })
}

/// All invertible `k × k` matrices, lexicographic on the row-major entries.
fn general_linear(tower: &FieldTower, k: usize) -> Vec<KMatrix> {
    let q = tower.q();
    let total = pow_sat(q, (k * k) as u64) as u64;
    (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut data = vec![0u32; k * k];
            let mut c = code;
            for slot in data.iter_mut().rev() {
                *slot = (c % q) as u32;
                c /= q;
            }
            let m = KMatrix::from_flat(k, k, data).expect("sized");
            (m.rank(tower) == k).then_some(m)
        })
        .collect()
}

/// Arithmetic on row vectors of `K^n` packed base `q` (coordinate `b` is digit `b`).
struct RowOps {
    q: u64,
    n: usize,
    size: usize,
    add: Vec<u32>,
    scal: Vec<u32>,
}

impl RowOps {
    fn new(tower: &FieldTower, n: usize) -> Self {
        let q = tower.q();
        let size = pow_sat(q, n as u64) as usize;
        let unpack = |code: usize| -> Vec<u32> {
            let mut c = code as u64;
            (0..n)
                .map(|_| {
                    let d = (c % q) as u32;
                    c /= q;
                    d
                })
                .collect()
        };
        let pack = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |a, &d| a * q as u32 + d) };
        let digits: Vec<Vec<u32>> = (0..size).map(unpack).collect();
        let mut scal = vec![0u32; q as usize * size];
        for lambda in 0..q as usize {
            for (code, v) in digits.iter().enumerate() {
                let w: Vec<u32> = v.iter().map(|&d| tower.k_mul(lambda as u32, d)).collect();
                scal[lambda * size + code] = pack(&w);
            }
        }
        let mut add = Vec::new();
        if size * size <= 1 << 22 {
            add = vec![0u32; size * size];
            for (a, va) in digits.iter().enumerate() {
                for (b, vb) in digits.iter().enumerate() {
                    let w: Vec<u32> = va.iter().zip(vb).map(|(&x, &y)| tower.k_add(x, y)).collect();
                    add[a * size + b] = pack(&w);
                }
            }
        }
        RowOps {
            q,
            n,
            size,
            add,
            scal,
        }
    }

    fn add(&self, tower: &FieldTower, a: u32, b: u32) -> u32 {
        if !self.add.is_empty() {
            return self.add[a as usize * self.size + b as usize];
        }
        let q = self.q;
        let (mut x, mut y, mut out, mut place) = (a as u64, b as u64, 0u64, 1u64);
        for _ in 0..self.n {
            out += tower.k_add((x % q) as u32, (y % q) as u32) as u64 * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out as u32
    }

    fn scal(&self, lambda: u32, v: u32) -> u32 {
        self.scal[lambda as usize * self.size + v as usize]
    }

    fn pack(&self, row: &[u32]) -> u32 {
        row.iter().rev().fold(0u32, |a, &d| a * self.q as u32 + d)
    }
}

/// Tables for the fallback search over non-linear target codes: every invertible `B`, and
/// the action of every `B` and every `ρ` on packed rows.
struct RightTables {
    ops: RowOps,
    gl_n: Vec<KMatrix>,
    right: Vec<Vec<u32>>,
    rho: Vec<Vec<u32>>,
}

impl RightTables {
    fn new(tower: &FieldTower, m: usize, n: usize, limits: &Limits) -> Result<Self> {
        let q = tower.q();
        let space = gl_order(m, q)
            .saturating_mul(gl_order(n, q))
            .saturating_mul(tower.e() as u128);
        limits.check("equivalence search space", space, limits.max_search)?;
        limits.check("row space", pow_sat(q, n as u64), 1 << 16)?;
        limits.check("matrix space", pow_sat(q, (m * n) as u64), u64::MAX)?;
        let ops = RowOps::new(tower, n);
        let gl_n = general_linear(tower, n);
        let right = gl_n
            .par_iter()
            .map(|b| {
                let rows: Vec<u32> = (0..n).map(|i| ops.pack(b.row(i))).collect();
                let mut table = vec![0u32; ops.size];
                for code in 1..ops.size {
                    // peel off the lowest nonzero digit
                    let mut c = code as u64;
                    let mut b_idx = 0;
                    while c % q == 0 {
                        c /= q;
                        b_idx += 1;
                    }
                    let digit = (c % q) as u32;
                    let rest = code as u64 - digit as u64 * q.pow(b_idx as u32);
                    table[code] = ops.add(tower, table[rest as usize], ops.scal(digit, rows[b_idx]));
                }
                table
            })
            .collect();
        let rho = (0..tower.e())
            .map(|r| {
                (0..ops.size as u64)
                    .map(|code| {
                        let mut c = code;
                        let digits: Vec<u32> = (0..n)
                            .map(|_| {
                                let d = (c % q) as u32;
                                c /= q;
                                tower.k_automorphism(d, r)
                            })
                            .collect();
                        ops.pack(&digits)
                    })
                    .collect()
            })
            .collect();
        Ok(RightTables {
            ops,
            gl_n,
            right,
            rho,
        })
    }

    fn packed_rows(&self, w: &KMatrix) -> Vec<u32> {
        (0..w.rows()).map(|i| self.ops.pack(w.row(i))).collect()
    }

    fn key(&self, rows: &[u32]) -> u64 {
        rows.iter()
            .rev()
            .fold(0u64, |acc, &r| acc * self.ops.size as u64 + r as u64)
    }
}

/// Reusable exhaustive search for matrix-code equivalences between `m × n` codes over `K`.
///
/// `A` runs over all invertible matrices in lexicographic order (in parallel), then `ρ`,
/// then the transpose flag. When the target code is linear the admissible `B` for fixed
/// `(A, ρ, transpose)` form a `K`-subspace, which is solved for directly and scanned in
/// lexicographic order for an invertible member; otherwise every invertible `B` is tried.
pub struct EquivalenceSearch {
    tower: FieldTower,
    m: usize,
    n: usize,
    limits: Limits,
    gl_m: Vec<KMatrix>,
    tables: OnceLock<Result<RightTables>>,
}

impl EquivalenceSearch {
    pub fn new(tower: &FieldTower, m: usize, n: usize, limits: &Limits) -> Result<Self> {
        let q = tower.q();
        let space = gl_order(m, q).saturating_mul(tower.e() as u128);
        limits.check("equivalence search space", space, limits.max_search)?;
        limits.check("matrix space", pow_sat(q, (n * n) as u64), u64::MAX)?;
        Ok(EquivalenceSearch {
            tower: tower.clone(),
            m,
            n,
            limits: *limits,
            gl_m: general_linear(tower, m),
            tables: OnceLock::new(),
        })
    }

    fn tables(&self) -> Result<&RightTables> {
        self.tables
            .get_or_init(|| RightTables::new(&self.tower, self.m, self.n, &self.limits))
            .as_ref()
            .map_err(Error::clone)
    }

    /// Reduced echelon basis of the span of the flattened words.
    fn span(&self, code: &MatrixCode) -> Vec<Vec<u32>> {
        let mut rows: Vec<Vec<u32>> = code.words().iter().map(|w| w.as_flat().to_vec()).collect();
        linalg::rref(&self.tower, &mut rows);
        rows
    }

    /// The identity if the codes coincide, otherwise the first `(A, ρ, transpose, B)` in
    /// search order mapping `c1` onto `c2`.
    pub fn find(&self, c1: &MatrixCode, c2: &MatrixCode) -> Result<Option<EquivalenceWitness>> {
        let t = &self.tower;
        for c in [c1, c2] {
            if c.m() != self.m || c.n() != self.n || c.q() != t.q() {
                return Err(Error::ShapeMismatch(format!(
                    "search is set up for {}x{} codes over GF({}), got {}x{} over GF({})",
                    self.m,
                    self.n,
                    t.q(),
                    c.m(),
                    c.n(),
                    c.q()
                )));
            }
        }
        let target: HashSet<&KMatrix> = c2.words().iter().collect();
        if c1.len() != c2.len() || target.len() != c2.len() {
            return Ok(None);
        }
        if c1.words().iter().all(|w| target.contains(w)) {
            return Ok(Some(EquivalenceWitness {
                a: KMatrix::identity(self.m),
                b: KMatrix::identity(self.n),
                rho: 0,
                transpose: false,
                poly_form: None,
            }));
        }
        if c1.rank_distribution(t) != c2.rank_distribution(t) {
            return Ok(None);
        }
        let span2 = self.span(c2);
        if pow_sat(t.q(), span2.len() as u64) == c2.len() as u128 {
            Ok(self.find_linear(c1, &span2))
        } else {
            self.find_tables(c1, c2)
        }
    }

    fn find_linear(&self, c1: &MatrixCode, span2: &[Vec<u32>]) -> Option<EquivalenceWitness> {
        let t = &self.tower;
        let (m, n) = (self.m, self.n);
        // rows h with <h, w> = 0 exactly for w in C₂
        let checks = linalg::nullspace(t, span2.to_vec(), m * n);
        let basis1: Vec<KMatrix> = self
            .span(c1)
            .into_iter()
            .map(|r| KMatrix::from_flat(m, n, r).expect("sized"))
            .collect();
        let transposes: &[bool] = if m == n { &[false, true] } else { &[false] };
        let q = t.q();
        self.gl_m.par_iter().find_map_first(|a| {
            for r in 0..t.e() {
                for &tr in transposes {
                    let ys: Vec<KMatrix> = basis1
                        .iter()
                        .map(|x| {
                            let x = if tr { x.transpose() } else { x.clone() };
                            a.mul(t, &x.automorphism(t, r)).expect("shapes agree")
                        })
                        .collect();
                    // Σ_{i,l} h_il (Y B)_il = Σ_{j,l} B_jl Σ_i h_il Y_ij
                    let mut eqs = Vec::with_capacity(checks.len() * ys.len());
                    for y in &ys {
                        for h in &checks {
                            let mut row = vec![0u32; n * n];
                            for j in 0..n {
                                for l in 0..n {
                                    let mut acc = 0u32;
                                    for i in 0..m {
                                        let hv = h[i * n + l];
                                        if hv != 0 {
                                            acc = t.k_add(acc, t.k_mul(hv, y.get(i, j)));
                                        }
                                    }
                                    row[j * n + l] = acc;
                                }
                            }
                            eqs.push(row);
                        }
                    }
                    let sol = linalg::nullspace(t, eqs, n * n);
                    let count = pow_sat(q, sol.len() as u64);
                    for code in 0..count as u64 {
                        let mut b = vec![0u32; n * n];
                        let mut c = code;
                        for v in sol.iter().rev() {
                            let coef = (c % q) as u32;
                            c /= q;
                            if coef != 0 {
                                for (bi, &vi) in b.iter_mut().zip(v) {
                                    *bi = t.k_add(*bi, t.k_mul(coef, vi));
                                }
                            }
                        }
                        let b = KMatrix::from_flat(n, n, b).expect("sized");
                        if b.rank(t) == n {
                            return Some(EquivalenceWitness {
                                a: a.clone(),
                                b,
                                rho: r,
                                transpose: tr,
                                poly_form: None,
                            });
                        }
                    }
                }
            }
            None
        })
    }

    /// Like [`find`](Self::find) but always runs over every invertible `B`, even for linear
    /// codes. Slower; kept as an independent check of the linear shortcut.
    pub fn find_exhaustive(&self, c1: &MatrixCode, c2: &MatrixCode) -> Result<Option<EquivalenceWitness>> {
        let t = &self.tower;
        if (c1.m(), c1.n(), c2.m(), c2.n()) != (self.m, self.n, self.m, self.n) {
            return Err(Error::ShapeMismatch("codes do not match the search shape".into()));
        }
        if c1.len() != c2.len() || c1.rank_distribution(t) != c2.rank_distribution(t) {
            return Ok(None);
        }
        self.find_tables(c1, c2)
    }

    fn find_tables(&self, c1: &MatrixCode, c2: &MatrixCode) -> Result<Option<EquivalenceWitness>> {
        let t = &self.tower;
        let tables = self.tables()?;
        let ops = &tables.ops;
        let target: HashSet<u64> = c2.words().iter().map(|w| tables.key(&tables.packed_rows(w))).collect();
        let transposes: &[bool] = if self.m == self.n { &[false, true] } else { &[false] };
        let variants: Vec<Vec<Vec<u32>>> = transposes
            .iter()
            .map(|&tr| {
                c1.words()
                    .iter()
                    .map(|w| {
                        if tr {
                            tables.packed_rows(&w.transpose())
                        } else {
                            tables.packed_rows(w)
                        }
                    })
                    .collect()
            })
            .collect();

        let hit = self.gl_m.par_iter().find_map_first(|a| {
            let mut scratch = vec![0u32; self.m];
            let mut out = vec![0u32; self.m];
            for (r, rtab) in tables.rho.iter().enumerate() {
                for (vi, words) in variants.iter().enumerate() {
                    for (bi, btab) in tables.right.iter().enumerate() {
                        let ok = words.iter().all(|rows| {
                            for (s, &x) in scratch.iter_mut().zip(rows) {
                                *s = btab[rtab[x as usize] as usize];
                            }
                            for (i, o) in out.iter_mut().enumerate() {
                                let mut acc = 0u32;
                                for (j, &y) in scratch.iter().enumerate() {
                                    let coef = a.get(i, j);
                                    if coef != 0 {
                                        acc = ops.add(t, acc, ops.scal(coef, y));
                                    }
                                }
                                *o = acc;
                            }
                            target.contains(&tables.key(&out))
                        });
                        if ok {
                            return Some((a.clone(), bi, r as u32, transposes[vi]));
                        }
                    }
                }
            }
            None
        });
        Ok(hit.map(|(a, bi, rho, transpose)| EquivalenceWitness {
            a,
            b: tables.gl_n[bi].clone(),
            rho,
            transpose,
            poly_form: None,
        }))
    }
}

/// Exhaustive equivalence test under the rank-metric isometries.
pub fn equivalent_bruteforce(
    tower: &FieldTower,
    c1: &MatrixCode,
    c2: &MatrixCode,
    limits: &Limits,
) -> Result<Option<EquivalenceWitness>> {
    if (c1.m(), c1.n()) != (c2.m(), c2.n()) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            c1.m(),
            c1.n(),
            c2.m(),
            c2.n()
        )));
    }
    EquivalenceSearch::new(tower, c1.m(), c1.n(), limits)?.find(c1, c2)
}

/// Checks the polynomial conditions of an equivalence between `π_U(C₁)` (`spec1`) and
/// `π_W(C₂)` (`spec2`): `φ₁(W) = U`, `φ₂(F) = F`, and equality of the reduced code sets.
pub fn verify_witness_poly(
    witness: &EquivalenceWitness,
    spec1: &GabidulinSpec,
    spec2: &GabidulinSpec,
    limits: &Limits,
) -> Result<bool> {
    let poly = witness
        .poly_form
        .as_ref()
        .ok_or_else(|| Error::Precondition("witness has no polynomial form".into()))?;
    verify_poly(poly, spec1, spec2, limits)
}

pub fn verify_poly(
    poly: &PolyWitness,
    spec1: &GabidulinSpec,
    spec2: &GabidulinSpec,
    limits: &Limits,
) -> Result<bool> {
    let t = spec1.tower();
    if t != spec2.tower() {
        return Err(Error::ParameterMismatch("codes live over different towers".into()));
    }
    let u = spec1.subspace();
    let w = spec2.subspace();
    let image: Vec<Elem> = w.basis().iter().map(|&x| poly.phi1.eval(t, x)).collect();
    let phi1_w = Subspace::span(t, &image);
    if phi1_w.dim() != w.dim() || &phi1_w != u {
        return Ok(false);
    }
    if !poly.phi2.is_bijection(t) {
        return Ok(false);
    }
    let theta_w = spec2.theta();
    let mapped: HashSet<LinPoly> = spec1
        .polynomials(limits)?
        .par_iter()
        .map(|f| {
            poly.phi2
                .compose(t, &f.automorphism(t, poly.rho).compose(t, &poly.phi1))
                .reduce_mod(t, theta_w)
        })
        .collect();
    let target: HashSet<LinPoly> = spec2.code_polynomials(limits)?.into_iter().collect();
    Ok(mapped == target)
}

/// For `U = c·W^{q^j}`: the witness `φ₁ = c·X^{q^j}` (mapping `W` onto `U`) and
/// `φ₂ = X^{q^{n-j}}`. Returns `U` and the witness.
pub fn semilinear_witness(tower: &FieldTower, w: &Subspace, c: Elem, j: usize) -> Result<(Subspace, PolyWitness)> {
    if c.is_zero() {
        return Err(Error::InvalidParameters("c must be nonzero".into()));
    }
    let n = tower.n();
    let j = j % n;
    let u = w.semilinear_image(tower, c, j as i64);
    let poly = PolyWitness {
        phi2: LinPoly::monomial(Elem::ONE, (n - j) % n),
        phi1: LinPoly::monomial(c, j),
        rho: 0,
    };
    Ok((u, poly))
}

/// The witness `φ₂ = c·X^{q^j}`, `φ₁ = X^{q^{n-j}}`; it satisfies `φ₁(W) = U` for
/// `U = W^{q^{n-j}}`, which is returned alongside.
pub fn frobenius_witness(tower: &FieldTower, w: &Subspace, c: Elem, j: usize) -> Result<(Subspace, PolyWitness)> {
    if c.is_zero() {
        return Err(Error::InvalidParameters("c must be nonzero".into()));
    }
    let n = tower.n();
    let j = j % n;
    let back = (n - j) % n;
    let u = w.frob_image(tower, back as i64);
    let poly = PolyWitness {
        phi2: LinPoly::monomial(c, j),
        phi1: LinPoly::monomial(Elem::ONE, back),
        rho: 0,
    };
    Ok((u, poly))
}

/// `γ₁ ↦ φ₁⁻¹ ∘ γ₁^ρ ∘ φ₁`, carrying a middle-nucleus element of `π_U(C₁)` (a residue
/// modulo `θ_U`) to one of `π_W(C₂)` (a residue modulo `θ_W`). `φ₁⁻¹` is the inverse of
/// the restriction `φ₁ : W → U`.
pub fn transport_middle(
    tower: &FieldTower,
    gamma: &LinPoly,
    poly: &PolyWitness,
    u: &Subspace,
    w: &Subspace,
) -> Result<LinPoly> {
    let pivots = pivot_columns(u);
    let ucoords = |x: Elem| -> Vec<u32> {
        let c = tower.coords(x);
        pivots.iter().map(|&p| c[p]).collect()
    };
    let a_rows: Vec<Vec<u32>> = w
        .basis()
        .iter()
        .map(|&x| ucoords(poly.phi1.eval(tower, x)))
        .collect();
    let a_inv = linalg::invert(tower, &a_rows)
        .ok_or_else(|| Error::Precondition("φ₁ does not map W onto U".into()))?;
    let gamma_rho = gamma.automorphism(tower, poly.rho);
    let values: Vec<Elem> = w
        .basis()
        .iter()
        .map(|&x| {
            let v = gamma_rho.eval(tower, poly.phi1.eval(tower, x));
            let mu = ucoords(v);
            // W-coordinates of φ₁⁻¹(v) are μ·A⁻¹
            (0..w.dim()).fold(Elem::ZERO, |acc, j| {
                let coef = (0..w.dim()).fold(0u32, |s, i| {
                    tower.k_add(s, tower.k_mul(mu[i], a_inv[i][j]))
                });
                tower.add(acc, tower.mul(tower.k_embed(coef), w.basis()[j]))
            })
        })
        .collect();
    LinPoly::interpolate(tower, w.basis(), &values)
        .ok_or_else(|| Error::Precondition("W basis is dependent".into()))
}

/// `γ₂ ↦ φ₂ ∘ γ₂^ρ ∘ φ₂⁻¹` on right-nucleus elements (residues mod `X^{q^n} - X`).
pub fn transport_right(tower: &FieldTower, gamma: &LinPoly, poly: &PolyWitness) -> Result<LinPoly> {
    let inv = poly
        .phi2
        .inverse(tower)
        .ok_or_else(|| Error::Precondition("φ₂ is not bijective".into()))?;
    Ok(poly
        .phi2
        .compose(tower, &gamma.automorphism(tower, poly.rho).compose(tower, &inv)))
}

/// Convenience: `θ_U` of a subspace, used when reducing transported maps.
pub fn subspace_poly(tower: &FieldTower, u: &Subspace) -> SubspacePoly {
    SubspacePoly::new(tower, u)
}

/// One census cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub q: u64,
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub d: u32,
    pub subspaces: BigUint,
    pub orbits: Option<u64>,
    pub bound: Option<BigRational>,
    pub bound_satisfied: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CensusTable {
    pub rows: Vec<CensusRow>,
}

impl CensusTable {
    pub const CSV_HEADER: &'static str =
        "q,n,m,k,d,subspaces,orbits,bound_num,bound_den,bound_satisfied";

    /// Any feasible cell whose exact count falls below the bound.
    pub fn violations(&self) -> Vec<&CensusRow> {
        self.rows
            .iter()
            .filter(|r| r.bound_satisfied == Some(false))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let opt = |v: Option<String>| v.unwrap_or_default();
            let line = [
                r.q.to_string(),
                r.n.to_string(),
                r.m.to_string(),
                r.k.to_string(),
                r.d.to_string(),
                r.subspaces.to_string(),
                opt(r.orbits.map(|o| o.to_string())),
                opt(r.bound.as_ref().map(|b| b.numer().to_string())),
                opt(r.bound.as_ref().map(|b| b.denom().to_string())),
                opt(r.bound_satisfied.map(|b| b.to_string())),
            ]
            .join(",");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let num = |v: String| -> Value {
            v.parse::<u64>()
                .map(Value::from)
                .unwrap_or(Value::String(v))
        };
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    json!({
                        "q": r.q,
                        "n": r.n,
                        "m": r.m,
                        "k": r.k,
                        "d": r.d,
                        "subspaces": num(r.subspaces.to_string()),
                        "orbits": r.orbits,
                        "bound_num": r.bound.as_ref().map(|b| num(b.numer().to_string())),
                        "bound_den": r.bound.as_ref().map(|b| num(b.denom().to_string())),
                        "bound_satisfied": r.bound_satisfied,
                        "note": r.note,
                    })
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("census serializes")
    }
}

/// Exact orbit counts next to the counting bound for every `(m, k)` cell.
///
/// Cells with `k > m` are skipped; cells with `k = m` (so `d = 1`) get a flag-only row.
/// Cells whose enumeration exceeds the limits keep the bound but no exact count.
pub fn census(q: u64, n: u32, ks: &[u32], ms: &[u32], limits: &Limits) -> Result<CensusTable> {
    let tower = FieldTower::from_q(q, n, limits);
    let mut rows = Vec::new();
    let mut orbit_counts: BTreeMap<u32, std::result::Result<u64, String>> = BTreeMap::new();
    for &m in ms {
        if m > n {
            continue;
        }
        for &k in ks {
            if k == 0 || k > m {
                continue;
            }
            let d = m - k + 1;
            let subspaces = gaussian_binomial(n, m, q);
            if d <= 1 {
                rows.push(CensusRow {
                    q,
                    n,
                    m,
                    k,
                    d,
                    subspaces,
                    orbits: None,
                    bound: None,
                    bound_satisfied: None,
                    note: Some("d must exceed 1 for the counting bound (k = m is the full space)".into()),
                });
                continue;
            }
            let bound = theorem11_bound(q, n, m, d)?;
            let count = orbit_counts
                .entry(m)
                .or_insert_with(|| match &tower {
                    Ok(t) => classify_all(t, m as usize, limits)
                        .map(|o| o.len() as u64)
                        .map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                })
                .clone();
            let (orbits, satisfied, note) = match count {
                Ok(c) => {
                    let exact = BigRational::from_integer(BigInt::from(c));
                    (Some(c), Some(exact >= bound), None)
                }
                Err(e) => (None, None, Some(format!("infeasible: {e}"))),
            };
            rows.push(CensusRow {
                q,
                n,
                m,
                k,
                d,
                subspaces,
                orbits,
                bound: Some(bound),
                bound_satisfied: satisfied,
                note,
            });
        }
    }
    Ok(CensusTable { rows })
}

/// `⌈x⌉` for a nonnegative rational.
pub fn ceil_rational(x: &BigRational) -> BigUint {
    let c = x.ceil();
    c.to_integer().to_biguint().unwrap_or_default()
}

/// Orbit sizes divide `n(q^n - 1)/(q - 1)`, the order of `ΓL(1, F)` modulo `K*`.
pub fn effective_group_order(tower: &FieldTower) -> u64 {
    tower.n() as u64 * (tower.order() - 1) / (tower.q() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> FieldTower {
        FieldTower::new(2, 1, 4).unwrap()
    }

    #[test]
    fn bound_values() {
        let b = theorem11_bound(2, 6, 2, 2).unwrap();
        assert_eq!(b, BigRational::new(31.into(), 18.into()));
        let b = theorem11_bound(2, 4, 2, 2).unwrap();
        assert_eq!(b, BigRational::new(7.into(), 12.into()));
        assert!(theorem11_bound(2, 4, 1, 1).is_err());
        assert!(theorem11_bound(2, 4, 2, 3).is_err());
        assert_eq!(theorem11_product(2, 4, 1), BigRational::new(1.into(), 4.into()));
        assert_eq!(ceil_rational(&BigRational::new(7.into(), 12.into())), BigUint::one());
    }

    #[test]
    fn orbit_contains_itself() {
        let t = gf16();
        let u = Subspace::span(&t, &[t.exp(2), t.exp(7)]);
        let o = orbit_of(&t, &u);
        assert!(o.members.contains(&u));
        assert_eq!(o.representative, o.members[0]);
        assert_eq!(effective_group_order(&t) % o.len() as u64, 0);
    }

    #[test]
    fn lines_and_hyperplanes_form_single_orbits() {
        let t = gf16();
        let lim = Limits::default();
        for m in [1, 3, 4] {
            let orbits = classify_all(&t, m, &lim).unwrap();
            assert_eq!(orbits.len(), 1, "m = {m}");
        }
        assert_eq!(classify_all(&t, 3, &lim).unwrap()[0].len(), 15);
    }

    #[test]
    fn identity_witness_for_identical_codes() {
        let t = gf16();
        let u = Subspace::span(&t, &[Elem::ONE, t.generator()]);
        let spec = GabidulinSpec::new(&t, 1, 1, u).unwrap();
        let c = spec.to_matrix_code(&Limits::default()).unwrap();
        let w = equivalent_bruteforce(&t, &c, &c, &Limits::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.a, KMatrix::identity(2));
        assert_eq!(w.b, KMatrix::identity(4));
        assert_eq!((w.rho, w.transpose), (0, false));
    }

    #[test]
    fn witness_json_shape() {
        let w = EquivalenceWitness {
            a: KMatrix::identity(1),
            b: KMatrix::identity(2),
            rho: 0,
            transpose: false,
            poly_form: None,
        };
        assert_eq!(w.to_json(), r#"{"A":[[1]],"B":[[1,0],[0,1]],"rho":0,"transpose":false}"#);
        let back: EquivalenceWitness = serde_json::from_str(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn theorem_rejects_mismatches() {
        let t = gf16();
        let u = Subspace::span(&t, &[Elem::ONE, t.generator()]);
        let a = GabidulinSpec::new(&t, 1, 1, u.clone()).unwrap();
        let b = GabidulinSpec::new(&t, 1, 3, u.clone()).unwrap();
        assert!(matches!(equivalent_by_theorem(&a, &b), Err(Error::ParameterMismatch(_))));
        let full = GabidulinSpec::new(&t, 2, 1, u).unwrap();
        assert!(matches!(equivalent_by_theorem(&full, &full), Err(Error::Precondition(_))));
        assert!(equivalent_by_theorem(&a, &a).unwrap());
    }

    #[test]
    fn missing_poly_form_is_an_error() {
        let t = gf16();
        let u = Subspace::span(&t, &[Elem::ONE, t.generator()]);
        let spec = GabidulinSpec::new(&t, 1, 1, u).unwrap();
        let w = EquivalenceWitness {
            a: KMatrix::identity(2),
            b: KMatrix::identity(4),
            rho: 0,
            transpose: false,
            poly_form: None,
        };
        assert!(verify_witness_poly(&w, &spec, &spec, &Limits::default()).is_err());
    }

    #[test]
    fn census_csv_layout() {
        let table = census(2, 4, &[1], &[1, 2, 3], &Limits::default()).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CensusTable::CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "2,4,1,1,1,15,,,,");
        assert!(table.violations().is_empty());
        assert_eq!(table.rows[2].orbits, Some(1));
    }
}
