//! Test-side oracles. These deliberately avoid the library's echelon forms, rank routines and
//! closed formulas: subspaces are explicit element sets, ranks come from bitmask elimination
//! over GF(2), and counts come from plain products.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use gabidulin::{Elem, FieldTower, LinPoly, Subspace};

/// `x^{q^j}` by repeated powering.
pub fn frob(t: &FieldTower, x: Elem, j: usize) -> Elem {
    let mut y = x;
    for _ in 0..j {
        y = t.pow(y, t.q());
    }
    y
}

/// `Σ c_i x^{q^i}` straight from the coefficient list.
pub fn eval_naive(t: &FieldTower, f: &LinPoly, x: Elem) -> Elem {
    f.coeffs()
        .iter()
        .enumerate()
        .fold(Elem::ZERO, |acc, (i, &c)| t.add(acc, t.mul(c, frob(t, x, i))))
}

pub fn roots_naive(t: &FieldTower, f: &LinPoly) -> u64 {
    t.elements().filter(|&x| eval_naive(t, f, x).is_zero()).count() as u64
}

/// Elements of `K` inside `F`, found as the fixed points of `x ↦ x^q`.
pub fn k_elements(t: &FieldTower) -> Vec<Elem> {
    t.elements().filter(|&x| t.pow(x, t.q()) == x).collect()
}

/// `[n m]_q` as a plain product.
pub fn gauss_binom(n: u32, m: u32, q: u128) -> u128 {
    if m > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..m {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

pub type ElemSet = Vec<u32>;

/// `S + K·x`, sorted by representation.
fn extend(t: &FieldTower, ks: &[Elem], set: &[u32], x: Elem) -> ElemSet {
    let mut out = BTreeSet::new();
    for &s in set {
        for &l in ks {
            out.insert(t.add(t.elem(s).unwrap(), t.mul(l, x)).repr());
        }
    }
    out.into_iter().collect()
}

/// Every `m`-dimensional `K`-subspace of `F` as a sorted element set, built one vector at a
/// time from `{0}`.
pub fn subspace_sets(t: &FieldTower, m: usize) -> Vec<ElemSet> {
    let ks = k_elements(t);
    let mut level: BTreeSet<ElemSet> = BTreeSet::from([vec![0]]);
    for _ in 0..m {
        let mut next = BTreeSet::new();
        for s in &level {
            for x in t.elements() {
                if s.binary_search(&x.repr()).is_err() {
                    next.insert(extend(t, &ks, s, x));
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

pub fn set_of(t: &FieldTower, u: &Subspace) -> ElemSet {
    let mut v: Vec<u32> = u.elements(t).into_iter().map(Elem::repr).collect();
    v.sort_unstable();
    v
}

pub fn image_set(t: &FieldTower, set: &[u32], c: Elem, j: usize) -> ElemSet {
    let mut v: Vec<u32> = set
        .iter()
        .map(|&x| t.mul(c, frob(t, t.elem(x).unwrap(), j)).repr())
        .collect();
    v.sort_unstable();
    v
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Orbit sizes of the `m`-subspaces under `x ↦ c·x^{q^j}`. Small fields run the full
/// double loop over `c ∈ F*`, `j < n`; larger ones join each subspace with its images
/// under a primitive scalar and under `x ↦ x^q`, which generate the same group.
pub fn orbit_sizes(t: &FieldTower, m: usize) -> Vec<usize> {
    let sets = subspace_sets(t, m);
    let index: HashMap<&ElemSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..sets.len()).collect();
    let nonzero: Vec<Elem> = t.elements().filter(|x| !x.is_zero()).collect();
    let prim = *nonzero
        .iter()
        .find(|&&g| {
            let mut y = g;
            let mut ord = 1;
            while y != Elem::ONE {
                y = t.mul(y, g);
                ord += 1;
            }
            ord == t.order() - 1
        })
        .unwrap();
    let full = t.order() <= 64;
    for (i, s) in sets.iter().enumerate() {
        let moves: Vec<(Elem, usize)> = if full {
            nonzero
                .iter()
                .flat_map(|&c| (0..t.n()).map(move |j| (c, j)))
                .collect()
        } else {
            vec![(prim, 0), (Elem::ONE, 1)]
        };
        for (c, j) in moves {
            let img = image_set(t, s, c, j);
            let k = index[&img];
            let (a, b) = (find(&mut parent, i), find(&mut parent, k));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..sets.len() {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut v: Vec<usize> = sizes.into_values().collect();
    v.sort_unstable();
    v
}

/// Rank of a list of GF(2)-row bitmasks.
pub fn rank_gf2(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in (0..64).rev() {
        let mask = 1u64 << bit;
        let Some(p) = rows.iter().skip(rank).position(|&r| r & mask != 0) else {
            continue;
        };
        rows.swap(rank, rank + p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & mask != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// For a prime-field tower over GF(2): the codewords of `π_U(G_{k,s})` as row bitmasks
/// (the representation of `f(α_i)` is its coordinate vector), one word per coefficient
/// tuple `(a_0, …, a_{k-1})`.
pub fn binary_words(t: &FieldTower, k: usize, s: usize, basis: &[Elem]) -> Vec<Vec<u64>> {
    assert_eq!(t.q(), 2);
    let n = t.n();
    let order = t.order();
    let total = order.pow(k as u32);
    let fr: Vec<Vec<u64>> = basis
        .iter()
        .map(|&a| (0..k).map(|i| frob(t, a, (s * i) % n).repr() as u64).collect())
        .collect();
    (0..total)
        .map(|mut code| {
            let coeffs: Vec<Elem> = (0..k)
                .map(|_| {
                    let c = t.elem((code % order) as u32).unwrap();
                    code /= order;
                    c
                })
                .collect();
            fr.iter()
                .map(|powers| {
                    powers.iter().zip(&coeffs).fold(0u64, |acc, (&p, &c)| {
                        acc ^ t.mul(c, t.elem(p as u32).unwrap()).repr() as u64
                    })
                })
                .collect()
        })
        .collect()
}

/// `∏_{u ∈ U} (X - u)` as an ordinary polynomial, coefficients low degree first.
pub fn literal_product(t: &FieldTower, elems: &[Elem]) -> Vec<Elem> {
    let mut poly = vec![Elem::ONE];
    for &u in elems {
        let mut next = vec![Elem::ZERO; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = t.add(next[i + 1], c);
            next[i] = t.sub(next[i], t.mul(c, u));
        }
        poly = next;
    }
    poly
}

/// Subspaces containing `1`, each once.
pub fn normalized_subspaces(t: &FieldTower, m: usize) -> Vec<Subspace> {
    let mut v: Vec<Subspace> = subspace_sets(t, m)
        .into_iter()
        .filter(|s| s.binary_search(&Elem::ONE.repr()).is_ok())
        .map(|s| {
            let elems: Vec<Elem> = s.iter().map(|&x| t.elem(x).unwrap()).collect();
            Subspace::span(t, &elems)
        })
        .collect();
    v.sort();
    v.dedup();
    v
}
