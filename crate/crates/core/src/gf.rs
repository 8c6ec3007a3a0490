//! Finite-field tower `GF(p) ⊂ K = GF(q) ⊂ F = GF(q^n)` with `q = p^e`.
//!
//! Elements of `F` are stored as their coefficient vector over `GF(p)` with respect to the
//! power basis of the defining modulus, packed base `p` into a `u32` (coefficient of `x^i` is
//! digit `i`). Multiplication goes through discrete-log tables; addition is XOR for `p = 2`
//! and Zech logarithms otherwise.
//!
//! Elements of `K` appear in two guises: as elements of `F` fixed by `x ↦ x^q`, and as
//! *labels* `0..q`, which are the entries of every matrix over `K` in this crate. Labels are
//! coordinates over `GF(p)` with respect to `1, κ, …, κ^{e-1}` for the primitive element
//! `κ` of `K`; for prime `q` a label is just the residue.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{linalg, pow_sat, Error, Limits, Result};

/// An element of `F`, identified by its packed `GF(p)` coefficient vector.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn repr(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a tower: `{p, e, n, modulus}` with the modulus listed
/// low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

struct TowerData {
    p: u32,
    e: u32,
    n: u32,
    degree: u32,
    q: u64,
    order: u64,
    modulus: Vec<u32>,
    primitive: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    k_embed: Vec<Elem>,
    coord: Vec<u32>,
    uncoord: Vec<u32>,
    basis: Vec<Elem>,
    dual_basis: Vec<Elem>,
}

/// The tower `GF(p) ⊂ K ⊂ F`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldTower {
    data: Arc<TowerData>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.data.p)
            .field("e", &self.data.e)
            .field("n", &self.data.n)
            .field("modulus", &self.data.modulus)
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.p == other.data.p
                && self.data.e == other.data.e
                && self.data.n == other.data.n
                && self.data.modulus == other.data.modulus)
    }
}

impl Eq for FieldTower {}

pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

// Dense polynomials over GF(p), low degree first. Only used while building a tower.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut k = p - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            k >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while a.len() > dm {
            let da = a.len() - 1;
            let c = a[da] as u64 * lead_inv % p as u64;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = da - dm + i;
                    a[idx] = ((a[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
                }
            }
            trim(&mut a);
        }
        a
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
        rem(&out, m, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^(p^d) mod m` by repeated `p`-th powering.
    fn frobenius_x(m: &[u32], p: u32, d: u32) -> Vec<u32> {
        let mut cur = rem(&[0, 1], m, p);
        for _ in 0..d {
            let mut acc = vec![1u32];
            let mut base = cur.clone();
            let mut k = p;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mulmod(&acc, &base, m, p);
                }
                base = mulmod(&base, &base, m, p);
                k >>= 1;
            }
            cur = acc;
        }
        cur
    }

    /// Ben-Or: `m` (monic) is irreducible iff `gcd(x^(p^d) - x, m) = 1` for all `d ≤ deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            let mut h = frobenius_x(m, p, d as u32);
            if h.len() < 2 {
                h.resize(2, 0);
            }
            h[1] = (h[1] + p - 1) % p;
            trim(&mut h);
            let g = gcd(m, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl FieldTower {
    /// Builds the tower with the lexicographically smallest monic irreducible modulus of
    /// degree `e·n` over `GF(p)`, using the default size cap.
    pub fn new(p: u32, e: u32, n: u32) -> Result<Self> {
        Self::with_limits(p, e, n, &Limits::default())
    }

    /// Like [`FieldTower::new`] but takes the order `q` of `K` directly.
    pub fn from_q(q: u64, n: u32, limits: &Limits) -> Result<Self> {
        let (p, e) = prime_power(q)?;
        Self::with_limits(p, e, n, limits)
    }

    pub fn with_limits(p: u32, e: u32, n: u32, limits: &Limits) -> Result<Self> {
        Self::check_params(p, e, n, limits)?;
        let modulus = smallest_irreducible(p, e * n);
        Self::build(p, e, n, modulus)
    }

    /// Builds a tower over a caller-supplied modulus (monic, irreducible, degree `e·n`).
    pub fn with_modulus(p: u32, e: u32, n: u32, modulus: Vec<u32>, limits: &Limits) -> Result<Self> {
        Self::check_params(p, e, n, limits)?;
        let degree = (e * n) as usize;
        if modulus.len() != degree + 1 || modulus[degree] != 1 {
            return Err(Error::InvalidParameters(format!(
                "modulus must be monic of degree {degree}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameters(
                "modulus coefficients must lie in 0..p".into(),
            ));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameters("modulus is reducible".into()));
        }
        Self::build(p, e, n, modulus)
    }

    pub fn from_spec(spec: &FieldSpec, limits: &Limits) -> Result<Self> {
        Self::with_modulus(spec.p, spec.e, spec.n, spec.modulus.clone(), limits)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.data.p,
            e: self.data.e,
            n: self.data.n,
            modulus: self.data.modulus.clone(),
        }
    }

    fn check_params(p: u32, e: u32, n: u32, limits: &Limits) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 || n == 0 {
            return Err(Error::InvalidParameters("e and n must be positive".into()));
        }
        let size = pow_sat(p as u64, (e as u64) * (n as u64));
        limits.check_card("field", size)?;
        if size > u32::MAX as u128 {
            return Err(Error::LimitExceeded {
                what: "field",
                size: size.to_string(),
                cap: u32::MAX as u64,
            });
        }
        Ok(())
    }

    fn build(p: u32, e: u32, n: u32, modulus: Vec<u32>) -> Result<Self> {
        let degree = e * n;
        let order = (p as u64).pow(degree);
        let q = (p as u64).pow(e);
        let group = order - 1;

        let primitive = find_primitive(p, &modulus, order);
        let mut exp = vec![0u32; group as usize];
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = 1u32;
        for i in 0..group as usize {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = mulmod_repr(cur, primitive, p, &modulus);
        }

        let mut zech = Vec::new();
        if p != 2 {
            zech = vec![NO_LOG; group as usize];
            for (k, z) in zech.iter_mut().enumerate() {
                let r = exp[k];
                let low = r % p;
                let plus_one = r - low + (low + 1) % p;
                *z = log[plus_one as usize];
            }
        }

        let mut data = TowerData {
            p,
            e,
            n,
            degree,
            q,
            order,
            modulus,
            primitive: Elem(primitive),
            exp,
            log,
            zech,
            k_embed: Vec::new(),
            coord: Vec::new(),
            uncoord: Vec::new(),
            basis: Vec::new(),
            dual_basis: Vec::new(),
        };

        // K = {0} ∪ ⟨κ⟩ with κ = g^((Q-1)/(q-1)); labels are GF(p)-coordinates w.r.t. powers of κ.
        let kappa = if q == 2 { 1 } else { data.exp[(group / (q - 1)) as usize] };
        let mut kappa_pows = Vec::with_capacity(e as usize);
        let mut acc = Elem::ONE;
        for _ in 0..e {
            kappa_pows.push(acc);
            acc = raw_mul(&data, acc, Elem(kappa));
        }
        let mut k_embed = Vec::with_capacity(q as usize);
        for label in 0..q {
            let mut v = Elem::ZERO;
            let mut l = label as u32;
            for pw in &kappa_pows {
                let digit = l % p;
                l /= p;
                for _ in 0..digit {
                    v = raw_add(&data, v, *pw);
                }
            }
            k_embed.push(v);
        }
        data.k_embed = k_embed;

        // K-basis 1, x, ..., x^(n-1) of F.
        data.basis = (0..n).map(|b| Elem(p.pow(b))).collect();
        if n == 1 {
            data.basis = vec![Elem::ONE];
        }

        if e > 1 {
            let mut coord = vec![0u32; order as usize];
            let mut uncoord = vec![0u32; order as usize];
            for code in 0..order {
                let mut c = code;
                let mut y = Elem::ZERO;
                for b in 0..n as usize {
                    let lambda = data.k_embed[(c % q) as usize];
                    c /= q;
                    y = raw_add(&data, y, raw_mul(&data, lambda, data.basis[b]));
                }
                uncoord[code as usize] = y.0;
                coord[y.0 as usize] = code as u32;
            }
            data.coord = coord;
            data.uncoord = uncoord;
        }

        let mut tower = FieldTower {
            data: Arc::new(data),
        };
        let dual = tower.compute_dual_basis()?;
        Arc::get_mut(&mut tower.data)
            .expect("tower not yet shared")
            .dual_basis = dual;
        Ok(tower)
    }

    fn compute_dual_basis(&self) -> Result<Vec<Elem>> {
        let n = self.n();
        let basis = self.basis();
        let gram: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.trace(self.mul(basis[i], basis[j])))
                    .collect()
            })
            .collect();
        let inv = linalg::invert(self, &gram).ok_or_else(|| {
            Error::InvalidParameters("trace form is degenerate on the chosen basis".into())
        })?;
        Ok((0..n)
            .map(|j| {
                (0..n).fold(Elem::ZERO, |acc, l| {
                    self.add(acc, self.mul(self.k_embed(inv[j][l]), basis[l]))
                })
            })
            .collect())
    }

    pub fn p(&self) -> u32 {
        self.data.p
    }

    pub fn e(&self) -> u32 {
        self.data.e
    }

    /// `[F : K]`.
    pub fn n(&self) -> usize {
        self.data.n as usize
    }

    /// `[F : GF(p)] = e·n`.
    pub fn degree(&self) -> u32 {
        self.data.degree
    }

    /// `|K|`.
    pub fn q(&self) -> u64 {
        self.data.q
    }

    /// `|F|`.
    pub fn order(&self) -> u64 {
        self.data.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.data.modulus
    }

    /// The generator of `F*` used for the log tables.
    pub fn primitive(&self) -> Elem {
        self.data.primitive
    }

    /// The polynomial variable `x`, i.e. the class of `X` in `GF(p)[X]/(modulus)`.
    pub fn generator(&self) -> Elem {
        if self.data.degree == 1 {
            // x ≡ -modulus[0]
            let m0 = self.data.modulus[0];
            Elem((self.data.p - m0) % self.data.p)
        } else {
            Elem(self.data.p)
        }
    }

    pub fn elem(&self, repr: u32) -> Result<Elem> {
        if (repr as u64) < self.data.order {
            Ok(Elem(repr))
        } else {
            Err(Error::InvalidParameters(format!(
                "{repr} is not an element of a field of order {}",
                self.data.order
            )))
        }
    }

    /// All elements of `F` in increasing `repr` order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.data.order as u32).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        raw_add(&self.data, a, b)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let d = &*self.data;
        if d.p == 2 || a.is_zero() {
            return a;
        }
        let group = d.order - 1;
        let l = d.log[a.0 as usize] as u64;
        Elem(d.exp[((l + group / 2) % group) as usize])
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        raw_mul(&self.data, a, b)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = &*self.data;
        let group = d.order - 1;
        let l = d.log[a.0 as usize] as u64;
        Ok(Elem(d.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let d = &*self.data;
        let group = d.order - 1;
        let l = d.log[a.0 as usize] as u128;
        Elem(d.exp[((l * (k as u128 % group as u128)) % group as u128) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let group = self.data.order - 1;
        let l = self.data.log[a.0 as usize] as u64;
        Some(group / gcd_u64(l, group))
    }

    /// `g^i` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> Elem {
        let group = self.data.order - 1;
        Elem(self.data.exp[(i % group) as usize])
    }

    /// Discrete log base the primitive element.
    pub fn log(&self, a: Elem) -> Option<u64> {
        if a.is_zero() {
            None
        } else {
            Some(self.data.log[a.0 as usize] as u64)
        }
    }

    /// `a^(q^i)`, with `i` taken modulo `n`.
    pub fn frobenius(&self, a: Elem, i: i64) -> Elem {
        if a.is_zero() {
            return a;
        }
        let n = self.data.n as i64;
        let i = i.rem_euclid(n) as u32;
        let group = self.data.order - 1;
        let mut l = self.data.log[a.0 as usize] as u128;
        for _ in 0..i {
            l = l * self.data.q as u128 % group as u128;
        }
        Elem(self.data.exp[l as usize])
    }

    /// `a^(p^r)`, the `r`-th power of the absolute Frobenius.
    pub fn frobenius_p(&self, a: Elem, r: u32) -> Elem {
        if a.is_zero() {
            return a;
        }
        let group = self.data.order - 1;
        let mut l = self.data.log[a.0 as usize] as u128;
        for _ in 0..(r % self.data.degree.max(1)) {
            l = l * self.data.p as u128 % group as u128;
        }
        Elem(self.data.exp[l as usize])
    }

    /// `Tr_{F/K}(a)` as a `K` label.
    pub fn trace(&self, a: Elem) -> u32 {
        let mut acc = Elem::ZERO;
        for i in 0..self.data.n as i64 {
            acc = self.add(acc, self.frobenius(a, i));
        }
        self.k_label(acc)
            .expect("trace lies in the base field")
    }

    /// Whether `a` lies in the subfield of order `q^t`.
    pub fn in_subfield(&self, a: Elem, t: usize) -> bool {
        self.frobenius(a, t as i64) == a
    }

    /// A generator of the unique subfield of `F` of order `q^t` (`t | n`).
    pub fn subfield_generator(&self, t: usize) -> Elem {
        let group = self.data.order - 1;
        let sub = self.data.q.pow(t as u32) - 1;
        self.exp(group / sub)
    }

    /// Elements of the subfield of order `q^t` (`t | n`), zero first.
    pub fn subfield_elements(&self, t: usize) -> Vec<Elem> {
        let gen = self.subfield_generator(t);
        let size = self.data.q.pow(t as u32) - 1;
        let mut out = Vec::with_capacity(size as usize + 1);
        out.push(Elem::ZERO);
        let mut cur = Elem::ONE;
        for _ in 0..size {
            out.push(cur);
            cur = self.mul(cur, gen);
        }
        out.sort();
        out
    }

    // ---- K = GF(q) ----

    /// The element of `F` corresponding to a `K` label.
    pub fn k_embed(&self, label: u32) -> Elem {
        self.data.k_embed[label as usize]
    }

    /// The `K` label of `a`, if `a ∈ K`.
    pub fn k_label(&self, a: Elem) -> Option<u32> {
        let code = self.coord_code(a);
        if (code as u64) < self.data.q {
            Some(code)
        } else {
            None
        }
    }

    pub fn in_k(&self, a: Elem) -> bool {
        self.frobenius(a, 1) == a
    }

    pub fn k_add(&self, a: u32, b: u32) -> u32 {
        if self.data.e == 1 {
            return (a + b) % self.data.p;
        }
        self.coord_code(self.add(self.k_embed(a), self.k_embed(b)))
    }

    pub fn k_neg(&self, a: u32) -> u32 {
        if self.data.e == 1 {
            return (self.data.p - a) % self.data.p;
        }
        self.coord_code(self.neg(self.k_embed(a)))
    }

    pub fn k_sub(&self, a: u32, b: u32) -> u32 {
        self.k_add(a, self.k_neg(b))
    }

    pub fn k_mul(&self, a: u32, b: u32) -> u32 {
        if self.data.e == 1 {
            return ((a as u64 * b as u64) % self.data.p as u64) as u32;
        }
        self.coord_code(self.mul(self.k_embed(a), self.k_embed(b)))
    }

    pub fn k_inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        Some(self.coord_code(self.inv(self.k_embed(a)).ok()?))
    }

    /// `λ ↦ λ^(p^r)` on `K` labels; `r < e` enumerates `Aut(K)`.
    pub fn k_automorphism(&self, a: u32, r: u32) -> u32 {
        if self.data.e == 1 {
            return a;
        }
        self.coord_code(self.frobenius_p(self.k_embed(a), r))
    }

    // ---- coordinates over K ----

    /// The fixed `K`-basis `1, x, …, x^(n-1)` of `F`.
    pub fn basis(&self) -> &[Elem] {
        &self.data.basis
    }

    /// The trace-dual of [`FieldTower::basis`].
    pub fn dual_basis(&self) -> &[Elem] {
        &self.data.dual_basis
    }

    /// Coordinates of `a` w.r.t. [`FieldTower::basis`], packed base `q`.
    pub fn coord_code(&self, a: Elem) -> u32 {
        if self.data.e == 1 {
            a.0
        } else {
            self.data.coord[a.0 as usize]
        }
    }

    pub fn from_coord_code(&self, code: u32) -> Elem {
        if self.data.e == 1 {
            Elem(code)
        } else {
            Elem(self.data.uncoord[code as usize])
        }
    }

    /// The coordinate vector `v(a) ∈ K^n` as labels.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let q = self.data.q as u32;
        let mut code = self.coord_code(a);
        (0..self.data.n)
            .map(|_| {
                let d = code % q;
                code /= q;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Elem {
        let q = self.data.q as u32;
        let code = coords.iter().rev().fold(0u32, |acc, &c| acc * q + c);
        self.from_coord_code(code)
    }
}

fn raw_add(d: &TowerData, a: Elem, b: Elem) -> Elem {
    if d.p == 2 {
        return Elem(a.0 ^ b.0);
    }
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let group = d.order - 1;
    let la = d.log[a.0 as usize] as u64;
    let lb = d.log[b.0 as usize] as u64;
    let diff = (lb + group - la) % group;
    let z = d.zech[diff as usize];
    if z == NO_LOG {
        Elem::ZERO
    } else {
        Elem(d.exp[((la + z as u64) % group) as usize])
    }
}

fn raw_mul(d: &TowerData, a: Elem, b: Elem) -> Elem {
    if a.is_zero() || b.is_zero() {
        return Elem::ZERO;
    }
    let group = d.order - 1;
    let s = d.log[a.0 as usize] as u64 + d.log[b.0 as usize] as u64;
    Elem(d.exp[(s % group) as usize])
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn unpack(r: u32, p: u32, len: usize) -> Vec<u32> {
    let mut r = r;
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(r % p);
        r /= p;
    }
    v
}

fn pack(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Product of two packed elements modulo the defining polynomial, computed from scratch.
fn mulmod_repr(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let deg = modulus.len() - 1;
    if p == 2 {
        let mask = (1u64 << deg) - 1;
        let red = pack(&modulus[..deg], 2) as u64;
        let mut acc = 0u64;
        let mut a = a as u64;
        let mut b = b as u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> deg & 1 == 1 {
                a = (a & mask) ^ red;
            }
        }
        return acc as u32;
    }
    let av = unpack(a, p, deg);
    let bv = unpack(b, p, deg);
    let mut r = fp_poly::mulmod(&av, &bv, modulus, p);
    r.resize(deg, 0);
    pack(&r, p)
}

fn find_primitive(p: u32, modulus: &[u32], order: u64) -> u32 {
    let group = order - 1;
    if group == 1 {
        return 1;
    }
    let factors = prime_factors(group);
    let powmod = |base: u32, mut k: u64| {
        let mut acc = 1u32;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = mulmod_repr(acc, b, p, modulus);
            }
            b = mulmod_repr(b, b, p, modulus);
            k >>= 1;
        }
        acc
    };
    (1..order as u32)
        .find(|&g| factors.iter().all(|&r| powmod(g, group / r) != 1))
        .expect("multiplicative group of a finite field is cyclic")
}

/// Lexicographically smallest monic irreducible polynomial of the given degree over `GF(p)`.
///
/// Candidates are ordered by their coefficient vectors read from the top degree down, which
/// is the same as ordering the packed lower coefficients as base-`p` integers.
pub fn smallest_irreducible(p: u32, degree: u32) -> Vec<u32> {
    let d = degree as usize;
    let count = (p as u64).pow(degree);
    for tail in 0..count {
        let mut m = unpack(tail as u32, p, d);
        m.push(1);
        if fp_poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    fp_poly::is_irreducible(modulus, p)
}
