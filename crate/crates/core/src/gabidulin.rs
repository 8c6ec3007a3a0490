//! Projected Gabidulin codes `π_U(G_{k,s})`, their matrix form, the MRD check and nuclei.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf::{Elem, FieldTower};
use crate::linalg::KMatrix;
use crate::linpoly::{LinPoly, SubspacePoly};
use crate::subspace::Subspace;
use crate::{pow_sat, Error, Limits, Result};

/// Parameters `(q, n, k, s, U)` of the code `π_U(G_{k,s})`.
#[derive(Debug, Clone)]
pub struct GabidulinSpec {
    tower: FieldTower,
    k: usize,
    s: usize,
    subspace: Subspace,
    theta: SubspacePoly,
}

impl GabidulinSpec {
    pub fn new(tower: &FieldTower, k: usize, s: usize, subspace: Subspace) -> Result<Self> {
        let n = tower.n();
        let m = subspace.dim();
        if subspace.n() != n {
            return Err(Error::ParameterMismatch(format!(
                "subspace lives in a degree-{} extension, tower has n = {n}",
                subspace.n()
            )));
        }
        if s == 0 || s.gcd(&n) != 1 {
            return Err(Error::InvalidParameters(format!(
                "s = {s} must be positive and coprime to n = {n}"
            )));
        }
        if k == 0 || k > m {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k <= m, got k = {k}, m = {m}"
            )));
        }
        let theta = SubspacePoly::new(tower, &subspace);
        Ok(GabidulinSpec {
            tower: tower.clone(),
            k,
            s,
            subspace,
            theta,
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> usize {
        self.subspace.dim()
    }

    pub fn n(&self) -> usize {
        self.tower.n()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn theta(&self) -> &SubspacePoly {
        &self.theta
    }

    /// Designed minimum distance `m - k + 1`.
    pub fn designed_distance(&self) -> usize {
        self.m() - self.k + 1
    }

    /// `q^{nk}`, the number of codewords.
    pub fn code_size(&self) -> u128 {
        pow_sat(self.tower.order(), self.k as u64)
    }

    /// The same code on another subspace.
    pub fn with_subspace(&self, subspace: Subspace) -> Result<Self> {
        Self::new(&self.tower, self.k, self.s, subspace)
    }

    /// `Σ_{i<k} a_i X^{q^{si}}`, exponents folded modulo `n`.
    pub fn polynomial(&self, coeffs: &[Elem]) -> LinPoly {
        let n = self.n();
        let mut out = vec![Elem::ZERO; n];
        for (i, &a) in coeffs.iter().enumerate().take(self.k) {
            let e = (self.s * i) % n;
            out[e] = self.tower.add(out[e], a);
        }
        LinPoly::from_coeffs(out)
    }

    /// The `K`-basis `{β_b X^{q^{si}}}` of `G_{k,s}`, `nk` polynomials.
    pub fn k_basis(&self) -> Vec<LinPoly> {
        let n = self.n();
        (0..self.k)
            .flat_map(|i| {
                self.tower
                    .basis()
                    .iter()
                    .map(move |&b| LinPoly::monomial(b, (self.s * i) % n))
            })
            .collect()
    }

    /// All of `G_{k,s}` (not reduced modulo `θ_U`), in counter order on `(a_0, …, a_{k-1})`.
    pub fn polynomials(&self, limits: &Limits) -> Result<Vec<LinPoly>> {
        let size = self.code_size();
        limits.check_card("Gabidulin code", size)?;
        let order = self.tower.order();
        Ok((0..size as u64)
            .map(|mut code| {
                let coeffs: Vec<Elem> = (0..self.k)
                    .map(|_| {
                        let a = Elem((code % order) as u32);
                        code /= order;
                        a
                    })
                    .collect();
                self.polynomial(&coeffs)
            })
            .collect())
    }

    /// `π_U(G_{k,s})`: every code polynomial reduced modulo `θ_U`.
    pub fn code_polynomials(&self, limits: &Limits) -> Result<Vec<LinPoly>> {
        Ok(self
            .polynomials(limits)?
            .iter()
            .map(|f| f.reduce_mod(&self.tower, &self.theta))
            .collect())
    }

    /// The matrix `(v(f(α_1)), …, v(f(α_m)))^T`.
    pub fn word(&self, f: &LinPoly) -> KMatrix {
        let rows = self
            .subspace
            .basis()
            .iter()
            .map(|&a| self.tower.coords(f.eval(&self.tower, a)))
            .collect();
        KMatrix::from_rows(rows).expect("rows have length n")
    }

    pub fn to_matrix_code(&self, limits: &Limits) -> Result<MatrixCode> {
        let words = self
            .polynomials(limits)?
            .iter()
            .map(|f| self.word(f))
            .collect();
        MatrixCode::new(self.tower.q(), self.m(), self.n(), true, words)
    }

    /// Hash index of the evaluation tuples `(f(α_1), …, f(α_m))` of all codewords.
    pub fn index(&self, limits: &Limits) -> Result<CodeIndex> {
        let packer = TuplePacker::new(&self.tower, self.m())?;
        let basis = self.subspace.basis();
        let set = self
            .polynomials(limits)?
            .iter()
            .map(|f| packer.pack(basis.iter().map(|&a| f.eval(&self.tower, a))))
            .collect();
        Ok(CodeIndex { packer, set })
    }

    /// Whether every nonzero codeword polynomial has at most `q^{k-1}` roots in `F`.
    pub fn root_bound_holds(&self, limits: &Limits) -> Result<bool> {
        let bound = self.tower.q().pow(self.k as u32 - 1);
        Ok(self
            .polynomials(limits)?
            .par_iter()
            .filter(|f| !f.is_zero())
            .all(|f| f.count_roots(&self.tower).count <= bound))
    }
}

/// Packs a tuple of field elements into a `u128` key.
#[derive(Debug, Clone, Copy)]
pub struct TuplePacker {
    bits: u32,
}

impl TuplePacker {
    pub fn new(tower: &FieldTower, len: usize) -> Result<Self> {
        let bits = 64 - (tower.order() - 1).max(1).leading_zeros();
        if bits as usize * len > 128 {
            return Err(Error::LimitExceeded {
                what: "evaluation tuple",
                size: format!("{} bits", bits as usize * len),
                cap: 128,
            });
        }
        Ok(TuplePacker { bits })
    }

    pub fn pack(&self, values: impl Iterator<Item = Elem>) -> u128 {
        values.fold(0u128, |acc, v| (acc << self.bits) | v.0 as u128)
    }
}

/// Membership test for `π_W(g) ∈ π_W(C)` via evaluation on the basis of `W`.
#[derive(Debug, Clone)]
pub struct CodeIndex {
    packer: TuplePacker,
    set: HashSet<u128>,
}

impl CodeIndex {
    pub fn contains_values(&self, values: impl Iterator<Item = Elem>) -> bool {
        self.set.contains(&self.packer.pack(values))
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// An explicit set of `m × n` matrices over `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixCodeJson", into = "MatrixCodeJson")]
pub struct MatrixCode {
    q: u64,
    m: usize,
    n: usize,
    linear: bool,
    words: Vec<KMatrix>,
}

#[derive(Serialize, Deserialize)]
struct MatrixCodeJson {
    q: u64,
    m: usize,
    n: usize,
    linear: bool,
    words: Vec<Vec<u32>>,
}

impl TryFrom<MatrixCodeJson> for MatrixCode {
    type Error = Error;

    fn try_from(j: MatrixCodeJson) -> Result<Self> {
        let words = j
            .words
            .into_iter()
            .map(|w| KMatrix::from_flat(j.m, j.n, w))
            .collect::<Result<Vec<_>>>()?;
        MatrixCode::new(j.q, j.m, j.n, j.linear, words)
    }
}

impl From<MatrixCode> for MatrixCodeJson {
    fn from(c: MatrixCode) -> Self {
        MatrixCodeJson {
            q: c.q,
            m: c.m,
            n: c.n,
            linear: c.linear,
            words: c.words.iter().map(|w| w.as_flat().to_vec()).collect(),
        }
    }
}

impl MatrixCode {
    pub fn new(q: u64, m: usize, n: usize, linear: bool, words: Vec<KMatrix>) -> Result<Self> {
        for w in &words {
            if w.rows() != m || w.cols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "word of shape {}x{} in a {m}x{n} code",
                    w.rows(),
                    w.cols()
                )));
            }
            if w.as_flat().iter().any(|&v| v as u64 >= q) {
                return Err(Error::Malformed(format!("entry outside 0..{q}")));
            }
        }
        Ok(MatrixCode {
            q,
            m,
            n,
            linear,
            words,
        })
    }

    /// All of `K^{m×n}`.
    pub fn full_space(q: u64, m: usize, n: usize, limits: &Limits) -> Result<Self> {
        let size = pow_sat(q, (m * n) as u64);
        limits.check_card("matrix space", size)?;
        let words = (0..size as u64)
            .map(|mut code| {
                let data = (0..m * n)
                    .map(|_| {
                        let v = (code % q) as u32;
                        code /= q;
                        v
                    })
                    .collect();
                KMatrix::from_flat(m, n, data).expect("sized")
            })
            .collect();
        Self::new(q, m, n, true, words)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn words(&self) -> &[KMatrix] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of words of each rank.
    pub fn rank_distribution(&self, tower: &FieldTower) -> BTreeMap<usize, usize> {
        let ranks: Vec<usize> = self.words.par_iter().map(|w| w.rank(tower)).collect();
        let mut out = BTreeMap::new();
        for r in ranks {
            *out.entry(r).or_insert(0) += 1;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("code serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// `d(A, B) = rk(A - B)`.
pub fn rank_distance(tower: &FieldTower, a: &KMatrix, b: &KMatrix) -> Result<usize> {
    Ok(a.sub(tower, b)?.rank(tower))
}

/// Minimum rank distance. Linear codes use the smallest nonzero rank; anything else is
/// compared pairwise.
pub fn min_distance(tower: &FieldTower, code: &MatrixCode) -> Result<usize> {
    if code.len() < 2 {
        return Err(Error::Precondition(
            "minimum distance needs at least two words".into(),
        ));
    }
    let d = if code.linear {
        code.words
            .par_iter()
            .filter(|w| !w.is_zero())
            .map(|w| w.rank(tower))
            .min()
    } else {
        (0..code.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let words = &code.words;
                (i + 1..words.len()).filter_map(move |j| {
                    rank_distance(tower, &words[i], &words[j]).ok()
                })
            })
            .min()
    };
    d.ok_or_else(|| Error::Precondition("code has no two distinct words".into()))
}

/// `|C| = q^{n(m - d + 1)}` (with `m ≤ n` after transposing if needed).
pub fn is_mrd(tower: &FieldTower, code: &MatrixCode) -> bool {
    let Ok(d) = min_distance(tower, code) else {
        return false;
    };
    let small = code.m.min(code.n);
    let large = code.m.max(code.n);
    if d > small {
        return false;
    }
    code.len() as u128 == pow_sat(code.q, (large * (small - d + 1)) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NucleusKind {
    Middle,
    Right,
}

/// A nucleus as a sorted set of canonical representatives: residues modulo `θ_W` for the
/// middle nucleus, residues modulo `X^{q^n} - X` for the right nucleus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Nucleus {
    pub kind: NucleusKind,
    pub t: Option<usize>,
    pub r: Option<usize>,
    pub elements: Vec<LinPoly>,
}

impl Nucleus {
    fn new(kind: NucleusKind, mut elements: Vec<LinPoly>) -> Self {
        elements.sort();
        elements.dedup();
        Nucleus {
            kind,
            t: None,
            r: None,
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, f: &LinPoly) -> bool {
        self.elements.binary_search(f).is_ok()
    }

    /// Whether both nuclei hold the same set of maps.
    pub fn same_elements(&self, other: &Nucleus) -> bool {
        self.kind == other.kind && self.elements == other.elements
    }
}

/// Middle nucleus by exhaustive search over `End_K(W)`, encoded as the images of the basis
/// of `W` and stored as interpolating residues modulo `θ_W`.
pub fn middle_nucleus_bruteforce(spec: &GabidulinSpec, limits: &Limits) -> Result<Nucleus> {
    let t = spec.tower();
    let m = spec.m();
    let q = t.q();
    limits.check_card("middle-nucleus search", pow_sat(q, (m * m) as u64))?;
    let index = spec.index(limits)?;
    let w = spec.subspace();
    let elems = w.elements(t);
    let per = elems.len() as u64;
    // f(w) for every basis polynomial f and every w ∈ W
    let table: Vec<Vec<Elem>> = spec
        .k_basis()
        .iter()
        .map(|f| elems.iter().map(|&x| f.eval(t, x)).collect())
        .collect();
    let total = pow_sat(per, m as u64) as u64;
    let found: Vec<Vec<Elem>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let choice: Vec<usize> = digits(code, per, m);
            let ok = table
                .iter()
                .all(|vals| index.contains_values(choice.iter().map(|&c| vals[c])));
            ok.then(|| choice.iter().map(|&c| elems[c]).collect())
        })
        .collect();
    let elements = found
        .into_iter()
        .map(|images| {
            LinPoly::interpolate(t, w.basis(), &images).expect("basis is independent")
        })
        .collect();
    let mut nuc = Nucleus::new(NucleusKind::Middle, elements);
    nuc.t = field_degree(q, nuc.len());
    Ok(nuc)
}

/// Right nucleus by exhaustive search over `End_K(F)` (all `q^{n²}` maps).
pub fn right_nucleus_bruteforce(spec: &GabidulinSpec, limits: &Limits) -> Result<Nucleus> {
    let t = spec.tower();
    let n = spec.n();
    limits.check_card("right-nucleus search", pow_sat(t.q(), (n * n) as u64))?;
    let index = spec.index(limits)?;
    let w = spec.subspace().basis();
    // coordinates of f(α_i) for every basis polynomial f
    let coords: Vec<Vec<Vec<u32>>> = spec
        .k_basis()
        .iter()
        .map(|f| w.iter().map(|&a| t.coords(f.eval(t, a))).collect())
        .collect();
    let order = t.order();
    let total = pow_sat(order, n as u64) as u64;
    let found: Vec<Vec<Elem>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let images: Vec<Elem> = digits(code, order, n)
                .into_iter()
                .map(|d| Elem(d as u32))
                .collect();
            let apply = |c: &[u32]| {
                c.iter().zip(&images).fold(Elem::ZERO, |acc, (&l, &y)| {
                    if l == 0 {
                        acc
                    } else {
                        t.add(acc, t.mul(t.k_embed(l), y))
                    }
                })
            };
            let ok = coords
                .iter()
                .all(|per_f| index.contains_values(per_f.iter().map(|c| apply(c))));
            ok.then_some(images)
        })
        .collect();
    let elements = found
        .into_iter()
        .map(|images| LinPoly::from_values(t, &images))
        .collect();
    Ok(Nucleus::new(NucleusKind::Right, elements))
}

/// All `ψ` (as residues mod `θ_W`) with `π_W(f∘ψ) ∈ π_W(C)` for every codeword `f`,
/// searching every `K`-linear map `W → F`.
pub fn inner_stabilizers_bruteforce(spec: &GabidulinSpec, limits: &Limits) -> Result<Vec<LinPoly>> {
    let t = spec.tower();
    let m = spec.m();
    let order = t.order();
    limits.check_card("inner-map search", pow_sat(order, m as u64))?;
    let index = spec.index(limits)?;
    let basis = spec.k_basis();
    let total = pow_sat(order, m as u64) as u64;
    let found: Vec<Vec<Elem>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let images: Vec<Elem> = digits(code, order, m)
                .into_iter()
                .map(|d| Elem(d as u32))
                .collect();
            let ok = basis
                .iter()
                .all(|f| index.contains_values(images.iter().map(|&y| f.eval(t, y))));
            ok.then_some(images)
        })
        .collect();
    let mut out: Vec<LinPoly> = found
        .into_iter()
        .map(|images| {
            LinPoly::interpolate(t, spec.subspace().basis(), &images).expect("independent")
        })
        .collect();
    out.sort();
    Ok(out)
}

fn check_formula_preconditions(spec: &GabidulinSpec) -> Result<()> {
    if spec.k() >= spec.m() {
        return Err(Error::Precondition(format!(
            "the nucleus formulas need k < m, got k = {}, m = {}",
            spec.k(),
            spec.m()
        )));
    }
    Ok(())
}

/// `{cX : c ∈ E}` where `E` is the largest subfield over which `U` is a vector space.
pub fn middle_nucleus_formula(spec: &GabidulinSpec) -> Result<Nucleus> {
    check_formula_preconditions(spec)?;
    let t = spec.tower();
    let deg = spec.subspace().largest_linearity_field(t);
    let elements = t
        .subfield_elements(deg)
        .into_iter()
        .map(|c| LinPoly::monomial(c, 0))
        .collect();
    let mut nuc = Nucleus::new(NucleusKind::Middle, elements);
    nuc.t = Some(deg);
    Ok(nuc)
}

/// `{Σ_{i<r} c_i X^{q^{it}}}` where `q^t` is the order of the smallest subfield containing
/// `U` and `r = n/t`. Requires `1 ∈ U`.
pub fn right_nucleus_formula(spec: &GabidulinSpec, limits: &Limits) -> Result<Nucleus> {
    check_formula_preconditions(spec)?;
    let t = spec.tower();
    if !spec.subspace().contains(t, Elem::ONE) {
        return Err(Error::Precondition(
            "the right-nucleus formula needs 1 ∈ U".into(),
        ));
    }
    let deg = spec.subspace().smallest_containing_field(t);
    let n = spec.n();
    let r = n / deg;
    let order = t.order();
    let total = pow_sat(order, r as u64);
    limits.check_card("right nucleus", total)?;
    let elements = (0..total as u64)
        .map(|code| {
            let mut coeffs = vec![Elem::ZERO; n];
            for (i, d) in digits(code, order, r).into_iter().enumerate() {
                coeffs[i * deg] = Elem(d as u32);
            }
            LinPoly::from_coeffs(coeffs)
        })
        .collect();
    let mut nuc = Nucleus::new(NucleusKind::Right, elements);
    nuc.t = Some(deg);
    nuc.r = Some(r);
    Ok(nuc)
}

/// Both nuclei by formula: `(middle, right)`.
pub fn nuclei_formula(spec: &GabidulinSpec, limits: &Limits) -> Result<(Nucleus, Nucleus)> {
    Ok((
        middle_nucleus_formula(spec)?,
        right_nucleus_formula(spec, limits)?,
    ))
}

fn digits(mut code: u64, base: u64, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = (code % base) as usize;
            code /= base;
            d
        })
        .collect()
}

/// `t` with `q^t = size`, if any.
fn field_degree(q: u64, size: usize) -> Option<usize> {
    let mut acc = 1u64;
    for t in 0..64 {
        if acc == size as u64 {
            return Some(t);
        }
        acc = acc.checked_mul(q)?;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> FieldTower {
        FieldTower::new(2, 1, 4).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn spec_validation() {
        let t = gf16();
        let u = Subspace::span(&t, &[Elem::ONE, t.generator()]);
        assert!(GabidulinSpec::new(&t, 1, 2, u.clone()).is_err());
        assert!(GabidulinSpec::new(&t, 3, 1, u.clone()).is_err());
        assert!(GabidulinSpec::new(&t, 0, 1, u.clone()).is_err());
        assert!(GabidulinSpec::new(&t, 2, 3, u).is_ok());
    }

    #[test]
    fn k1_code_is_scalar_multiples() {
        let t = gf16();
        let u = Subspace::span(&t, &[Elem::ONE, t.generator()]);
        let spec = GabidulinSpec::new(&t, 1, 1, u).unwrap();
        let polys = spec.code_polynomials(&lim()).unwrap();
        assert_eq!(polys.len(), 16);
        let mut d = polys.clone();
        d.sort();
        d.dedup();
        assert_eq!(d.len(), 16);
        assert!(polys.iter().all(|f| f.q_degree().unwrap_or(0) == 0));
    }

    #[test]
    fn words_of_zero_and_identity() {
        let t = gf16();
        let u = Subspace::span(&t, &[t.exp(3), t.exp(8)]);
        let spec = GabidulinSpec::new(&t, 1, 1, u.clone()).unwrap();
        assert!(spec.word(&LinPoly::zero()).is_zero());
        let id = spec.word(&LinPoly::identity());
        assert_eq!(id.to_rows(), u.rows().to_vec());
    }

    #[test]
    fn rank_distance_examples() {
        let t = gf16();
        let a = KMatrix::from_rows(vec![vec![1, 0, 0, 0], vec![1, 0, 0, 0]]).unwrap();
        let z = KMatrix::zeros(2, 4);
        assert_eq!(rank_distance(&t, &a, &a).unwrap(), 0);
        assert_eq!(rank_distance(&t, &a, &z).unwrap(), 1);
        let i = KMatrix::from_rows(vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(rank_distance(&t, &i, &z).unwrap(), 2);
        assert!(rank_distance(&t, &a, &KMatrix::zeros(4, 2)).is_err());
    }

    #[test]
    fn full_space_and_two_word_code() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let full = MatrixCode::full_space(2, 2, 3, &lim()).unwrap();
        assert_eq!(min_distance(&t, &full).unwrap(), 1);
        assert!(is_mrd(&t, &full));
        let w = KMatrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let two = MatrixCode::new(2, 2, 3, false, vec![KMatrix::zeros(2, 3), w]).unwrap();
        assert_eq!(min_distance(&t, &two).unwrap(), 2);
        assert!(!is_mrd(&t, &two));
        let one = MatrixCode::new(2, 2, 3, false, vec![KMatrix::zeros(2, 3)]).unwrap();
        assert!(min_distance(&t, &one).is_err());
    }

    #[test]
    fn matrix_code_json_is_flat() {
        let w = KMatrix::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let c = MatrixCode::new(2, 2, 2, true, vec![KMatrix::zeros(2, 2), w]).unwrap();
        let json = c.to_json();
        assert_eq!(
            json,
            r#"{"q":2,"m":2,"n":2,"linear":true,"words":[[0,0,0,0],[1,0,0,1]]}"#
        );
        assert_eq!(MatrixCode::from_json(&json).unwrap(), c);
    }

    #[test]
    fn nucleus_formula_preconditions() {
        let t = gf16();
        let u = Subspace::span(&t, &[Elem::ONE, t.generator()]);
        let full = GabidulinSpec::new(&t, 2, 1, u.clone()).unwrap();
        assert!(matches!(
            middle_nucleus_formula(&full),
            Err(Error::Precondition(_))
        ));
        let v = Subspace::span(&t, &[t.exp(5), t.exp(6)]);
        let spec = GabidulinSpec::new(&t, 1, 1, v).unwrap();
        if !spec.subspace().contains(&t, Elem::ONE) {
            assert!(right_nucleus_formula(&spec, &lim()).is_err());
        }
        let spec = GabidulinSpec::new(&t, 1, 1, u).unwrap();
        let (mid, right) = nuclei_formula(&spec, &lim()).unwrap();
        assert_eq!(mid.len(), 2);
        assert_eq!(right.len(), 16);
    }

    #[test]
    fn full_subspace_nuclei() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let spec = GabidulinSpec::new(&t, 1, 1, Subspace::full(&t)).unwrap();
        let (mid, right) = nuclei_formula(&spec, &lim()).unwrap();
        assert_eq!((mid.t, right.t, right.r), (Some(3), Some(3), Some(1)));
        assert_eq!(mid.len(), 8);
        assert_eq!(right.len(), 8);
    }
}
