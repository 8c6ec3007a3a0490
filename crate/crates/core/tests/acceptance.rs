//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use gabidulin::equivalence::{
    frobenius_witness, transport_middle, transport_right, verify_poly, EquivalenceSearch,
};
use gabidulin::gabidulin::{
    middle_nucleus_bruteforce, middle_nucleus_formula, right_nucleus_bruteforce,
    right_nucleus_formula,
};
use gabidulin::{
    classify_all, equivalent_by_theorem, gaussian_binomial, is_mrd, min_distance,
    theorem11_bound, Elem, FieldTower, GabidulinSpec, Limits, LinPoly, Subspace, SubspacePoly,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn gabidulin(t: &FieldTower, k: usize, s: usize, u: Subspace) -> GabidulinSpec {
    GabidulinSpec::new(t, k, s, u).expect("valid parameters")
}

fn all_subspaces(t: &FieldTower, m: usize) -> Vec<Subspace> {
    gabidulin::subspace::enumerate_subspaces(t, m, &Limits::default()).unwrap()
}

/// q = 2, n ∈ {3, 4}, every m, every k < m, s ∈ {1, n-1}, every U.
fn mrd_property() -> Outcome {
    let lim = Limits::default();
    let mut checked = 0;
    for n in [3u32, 4] {
        let t = FieldTower::new(2, 1, n).unwrap();
        for m in 2..=n as usize {
            for u in all_subspaces(&t, m) {
                for k in 1..m {
                    for s in BTreeSet::from([1, n as usize - 1]) {
                        let spec = gabidulin(&t, k, s, u.clone());
                        let code = spec.to_matrix_code(&lim).unwrap();
                        let d = min_distance(&t, &code).unwrap();
                        let want = m - k + 1;
                        ensure!(d == want, "n={n} m={m} k={k} s={s} U={}: d={d}, want {want}", u.to_json());
                        ensure!(is_mrd(&t, &code), "n={n} m={m} k={k} s={s}: not MRD");
                        // independent: bitmask ranks of the evaluation words
                        let words = binary_words(&t, k, s, u.basis());
                        let distinct: HashSet<&Vec<u64>> = words.iter().collect();
                        ensure!(distinct.len() == 1 << (n as usize * k), "oracle: words collide");
                        let oracle_d = words
                            .iter()
                            .filter(|w| w.iter().any(|&r| r != 0))
                            .map(|w| rank_gf2(w.clone()))
                            .min()
                            .unwrap();
                        ensure!(oracle_d == want, "oracle distance {oracle_d}, want {want}");
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} codes"))
}

/// q = 2, n = 4, m = 2, k = 1, s = 1: brute force agrees with the orbit criterion on all
/// ordered pairs.
fn oracle_equivalence() -> Outcome {
    let lim = Limits::default();
    let t = FieldTower::new(2, 1, 4).unwrap();
    let subs = all_subspaces(&t, 2);
    ensure!(subs.len() == 35, "{} subspaces", subs.len());
    let specs: Vec<GabidulinSpec> = subs.iter().map(|u| gabidulin(&t, 1, 1, u.clone())).collect();
    let codes: Vec<_> = specs.iter().map(|s| s.to_matrix_code(&lim).unwrap()).collect();
    let search = EquivalenceSearch::new(&t, 2, 4, &lim).unwrap();
    let mut equivalent = 0;
    for (i, a) in specs.iter().enumerate() {
        for (j, b) in specs.iter().enumerate() {
            let th = equivalent_by_theorem(a, b).unwrap();
            let bf = search.find(&codes[i], &codes[j]).unwrap();
            let full = search.find_exhaustive(&codes[i], &codes[j]).unwrap();
            ensure!(th == bf.is_some(), "pair ({i}, {j}): theorem {th}, brute force {}", bf.is_some());
            ensure!(th == full.is_some(), "pair ({i}, {j}): theorem {th}, search over all B {}", full.is_some());
            for w in bf.iter().chain(&full) {
                ensure!(w.maps(&t, &codes[i], &codes[j]).unwrap(), "pair ({i}, {j}): bad witness");
            }
            equivalent += th as usize;
        }
    }
    Ok(format!("1225 pairs, {equivalent} equivalent"))
}

fn bound_oracle(q: u64, n: u32, m: u32) -> BigRational {
    // (1/n)·[n m]_q·(q-1)/(q^n-1)
    let q = q as u128;
    BigRational::new(
        BigInt::from(gauss_binom(n, m, q)) * BigInt::from(q - 1),
        BigInt::from(n) * BigInt::from(q.pow(n) - 1),
    )
}

/// q ∈ {2, 3}, n ≤ 6, m ≤ 3, k < m: exact orbit count against the bound, and the orbit
/// partition covers every subspace.
fn census_bound() -> Outcome {
    let lim = Limits::default();
    let mut cells = 0;
    for q in [2u64, 3] {
        for n in 2..=6u32 {
            let t = FieldTower::from_q(q, n, &lim).unwrap();
            for m in 2..=3.min(n) {
                let orbits = classify_all(&t, m as usize, &lim).unwrap();
                let total: usize = orbits.iter().map(|o| o.len()).sum();
                let want = gauss_binom(n, m, q as u128);
                ensure!(total as u128 == want, "q={q} n={n} m={m}: {total} subspaces, want {want}");
                ensure!(gaussian_binomial(n, m, q) == BigUint::from(want), "binomial q={q} n={n} m={m}");
                let count = BigRational::from_integer(BigInt::from(orbits.len()));
                for k in 1..m {
                    let bound = theorem11_bound(q, n, m, m - k + 1).unwrap();
                    ensure!(bound == bound_oracle(q, n, m), "bound q={q} n={n} m={m}: {bound}");
                    ensure!(count >= bound, "q={q} n={n} m={m} k={k}: {count} orbits < {bound}");
                    cells += 1;
                }
                if t.order() <= 81 {
                    let sizes = orbit_sizes(&t, m as usize);
                    ensure!(sizes.len() == orbits.len(), "q={q} n={n} m={m}: oracle {} orbits, library {}", sizes.len(), orbits.len());
                    let mut lib: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
                    lib.sort_unstable();
                    ensure!(lib == sizes, "q={q} n={n} m={m}: orbit sizes differ");
                }
            }
        }
    }
    Ok(format!("{cells} cells"))
}

/// q ∈ {2, 3}, n ≤ 5, m = n - 1: a single orbit.
fn hyperplanes_single_orbit() -> Outcome {
    let lim = Limits::default();
    for q in [2u64, 3] {
        for n in 2..=5u32 {
            let t = FieldTower::from_q(q, n, &lim).unwrap();
            let m = n as usize - 1;
            let orbits = classify_all(&t, m, &lim).unwrap();
            ensure!(orbits.len() == 1, "q={q} n={n}: {} orbits", orbits.len());
            let sizes = orbit_sizes(&t, m);
            ensure!(sizes.len() == 1, "oracle q={q} n={n}: {} orbits", sizes.len());
        }
    }
    Ok("8 cells".into())
}

/// q = 2, n = 4, m ∈ {2, 3}, k = 1 (and 2 for m = 3), every U with 1 ∈ U: formula nuclei
/// equal brute-force nuclei.
fn nuclei() -> Outcome {
    let lim = Limits::default();
    let t = FieldTower::new(2, 1, 4).unwrap();
    let mut checked = 0;
    for (m, ks) in [(2usize, vec![1usize]), (3, vec![1, 2])] {
        for u in normalized_subspaces(&t, m) {
            for &k in &ks {
                let spec = gabidulin(&t, k, 1, u.clone());
                let mf = middle_nucleus_formula(&spec).unwrap();
                let rf = right_nucleus_formula(&spec, &lim).unwrap();
                let mb = middle_nucleus_bruteforce(&spec, &lim).unwrap();
                let rb = right_nucleus_bruteforce(&spec, &lim).unwrap();
                ensure!(mf.same_elements(&mb), "m={m} k={k} U={}: middle {} vs {}", u.to_json(), mf.len(), mb.len());
                ensure!(rf.same_elements(&rb), "m={m} k={k} U={}: right {} vs {}", u.to_json(), rf.len(), rb.len());
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} codes"))
}

/// q = 2, n = 4, m ∈ {2, 3}, s ∈ {1, 3}: G_{m,s} reduces to q^{nm} distinct residues for
/// every U, each agreeing with its polynomial on U.
fn representatives() -> Outcome {
    let lim = Limits::default();
    let t = FieldTower::new(2, 1, 4).unwrap();
    let mut checked = 0;
    for m in [2usize, 3] {
        for u in all_subspaces(&t, m) {
            let elems = u.elements(&t);
            for s in [1usize, 3] {
                let spec = gabidulin(&t, m, s, u.clone());
                let polys = spec.polynomials(&lim).unwrap();
                let mut seen = HashSet::with_capacity(polys.len());
                for f in &polys {
                    let r = f.reduce_mod(&t, spec.theta());
                    ensure!(r.q_degree().is_none_or(|d| d < m), "residue of q-degree >= m");
                    ensure!(
                        elems.iter().all(|&x| eval_naive(&t, &r, x) == eval_naive(&t, f, x)),
                        "residue differs from f on U"
                    );
                    seen.insert(r);
                }
                ensure!(seen.len() == 1 << (4 * m), "m={m} s={s}: {} residues", seen.len());
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (U, s) cases"))
}

/// q = 2, n ∈ {3, 4, 5}, k ≤ 3, gcd(s, n) = 1: no nonzero codeword has more than q^{k-1}
/// roots.
fn root_bound() -> Outcome {
    let lim = Limits::default();
    let mut polys = 0;
    for n in [3u32, 4, 5] {
        let t = FieldTower::new(2, 1, n).unwrap();
        let full = Subspace::full(&t);
        for s in (1..n as usize).filter(|&s| num_integer::gcd(s, n as usize) == 1) {
            for k in 1..=3usize {
                let spec = gabidulin(&t, k, s, full.clone());
                let bound = 1u64 << (k - 1);
                for f in spec.polynomials(&lim).unwrap().iter().filter(|f| !f.is_zero()) {
                    let naive = roots_naive(&t, f);
                    let lib = f.count_roots(&t).count;
                    ensure!(naive == lib, "n={n} s={s}: root counts {naive} vs {lib}");
                    ensure!(naive <= bound, "n={n} k={k} s={s}: {naive} roots > {bound}");
                    polys += 1;
                }
            }
        }
    }
    Ok(format!("{polys} polynomials"))
}

/// Five equivalent pairs with witnesses φ₂ = c·X^{q^j}, φ₁ = X^{q^{n-j}}: the transport
/// maps are bijections between brute-force nuclei.
fn nucleus_transport() -> Outcome {
    let lim = Limits::default();
    let t2 = FieldTower::new(2, 1, 4).unwrap();
    let t3 = FieldTower::new(3, 1, 3).unwrap();
    let g2 = t2.primitive();
    let g3 = t3.primitive();
    let x2 = t2.generator();
    let cases: Vec<(&FieldTower, usize, Vec<Elem>, Elem, usize)> = vec![
        (&t2, 1, vec![Elem::ONE, x2], g2, 1),
        (&t2, 1, vec![Elem::ONE, t2.pow(x2, 5)], t2.pow(g2, 3), 2),
        (&t2, 1, vec![x2, t2.pow(x2, 3)], g2, 3),
        (&t2, 2, vec![Elem::ONE, x2, t2.pow(x2, 2)], t2.pow(g2, 7), 1),
        (&t3, 1, vec![Elem::ONE, t3.generator()], g3, 2),
    ];
    for (i, (t, k, gens, c, j)) in cases.into_iter().enumerate() {
        let w = Subspace::span(t, &gens);
        let (u, poly) = frobenius_witness(t, &w, c, j).unwrap();
        let spec_u = gabidulin(t, k, 1, u.clone());
        let spec_w = gabidulin(t, k, 1, w.clone());
        ensure!(verify_poly(&poly, &spec_u, &spec_w, &lim).unwrap(), "case {i}: witness fails");

        let mid_u = middle_nucleus_bruteforce(&spec_u, &lim).unwrap();
        let mid_w = middle_nucleus_bruteforce(&spec_w, &lim).unwrap();
        let moved: BTreeSet<LinPoly> = mid_u
            .elements
            .iter()
            .map(|g| transport_middle(t, g, &poly, &u, &w).unwrap())
            .collect();
        ensure!(moved.len() == mid_u.len(), "case {i}: middle transport not injective");
        ensure!(moved.into_iter().eq(mid_w.elements.iter().cloned()), "case {i}: middle image differs");

        let right_u = right_nucleus_bruteforce(&spec_u, &lim).unwrap();
        let right_w = right_nucleus_bruteforce(&spec_w, &lim).unwrap();
        let moved: BTreeSet<LinPoly> = right_u
            .elements
            .iter()
            .map(|g| transport_right(t, g, &poly).unwrap())
            .collect();
        ensure!(moved.len() == right_u.len(), "case {i}: right transport not injective");
        ensure!(moved.into_iter().eq(right_w.elements.iter().cloned()), "case {i}: right image differs");
    }
    Ok("5 pairs".into())
}

/// Field axioms, Frobenius linearity, composition associativity, θ_U against the literal
/// product, subspace counts.
fn property_suite() -> Outcome {
    let lim = Limits::default();
    let towers = [
        FieldTower::new(2, 2, 2).unwrap(),
        FieldTower::new(3, 1, 3).unwrap(),
        FieldTower::new(5, 1, 2).unwrap(),
        FieldTower::new(2, 1, 4).unwrap(),
    ];
    for t in &towers {
        let all: Vec<Elem> = t.elements().collect();
        ensure!(all.len() as u64 == t.order(), "element count");
        for &a in &all {
            ensure!(t.add(a, t.neg(a)).is_zero(), "additive inverse");
            ensure!(t.mul(a, Elem::ONE) == a && t.add(a, Elem::ZERO) == a, "identities");
            if !a.is_zero() {
                ensure!(t.mul(a, t.inv(a).unwrap()) == Elem::ONE, "inverse of {}", a.repr());
            }
            for &b in &all {
                ensure!(t.add(a, b) == t.add(b, a) && t.mul(a, b) == t.mul(b, a), "commutativity");
                let fa = |x| frob(t, x, 1);
                ensure!(fa(t.add(a, b)) == t.add(fa(a), fa(b)), "Frobenius additivity");
                ensure!(t.frobenius(a, 1) == fa(a), "Frobenius table");
                for &c in &all {
                    ensure!(t.mul(t.mul(a, b), c) == t.mul(a, t.mul(b, c)), "mul associativity");
                    ensure!(t.add(t.add(a, b), c) == t.add(a, t.add(b, c)), "add associativity");
                    ensure!(t.mul(a, t.add(b, c)) == t.add(t.mul(a, b), t.mul(a, c)), "distributivity");
                }
            }
        }
        for lam in k_elements(t) {
            for &a in &all {
                ensure!(frob(t, t.mul(lam, a), 1) == t.mul(lam, frob(t, a, 1)), "Frobenius K-linearity");
            }
        }
    }

    // composition against function composition, exhaustive on GF(4)/GF(2) and GF(8)/GF(2)
    for n in [2u32, 3] {
        let t = FieldTower::new(2, 1, n).unwrap();
        let order = t.order() as u32;
        let polys: Vec<LinPoly> = (0..order.pow(n))
            .map(|mut code| {
                LinPoly::from_coeffs(
                    (0..n)
                        .map(|_| {
                            let c = t.elem(code % order).unwrap();
                            code /= order;
                            c
                        })
                        .collect(),
                )
            })
            .collect();
        let sample: Vec<&LinPoly> = if n == 2 { polys.iter().collect() } else { polys.iter().step_by(37).collect() };
        for f in &sample {
            for g in &sample {
                let fg = f.compose(&t, g);
                ensure!(
                    t.elements().all(|x| eval_naive(&t, &fg, x) == eval_naive(&t, f, eval_naive(&t, g, x))),
                    "composition disagrees with evaluation"
                );
                for h in &sample {
                    ensure!(fg.compose(&t, h) == f.compose(&t, &g.compose(&t, h)), "associativity");
                }
            }
        }
    }

    // θ_U against ∏(X - u) for every |U| ≤ 16
    let mut thetas = 0;
    for t in [
        FieldTower::new(2, 1, 4).unwrap(),
        FieldTower::new(2, 2, 2).unwrap(),
        FieldTower::new(3, 1, 2).unwrap(),
    ] {
        for m in 0..=t.n() {
            for u in gabidulin::subspace::enumerate_subspaces(&t, m, &lim).unwrap() {
                let elems = u.elements(&t);
                if elems.len() > 16 {
                    continue;
                }
                let literal = literal_product(&t, &elems);
                let theta = SubspacePoly::new(&t, &u).poly;
                let mut expanded = vec![Elem::ZERO; literal.len()];
                for (i, &c) in theta.coeffs().iter().enumerate() {
                    expanded[t.q().pow(i as u32) as usize] = c;
                }
                ensure!(expanded == literal, "θ_U mismatch for U = {}", u.to_json());
                thetas += 1;
            }
        }
    }

    // subspace counts against Gaussian binomials, with an independent enumeration
    for (q, nmax) in [(2u64, 6u32), (3, 4), (4, 3)] {
        for n in 1..=nmax {
            let t = FieldTower::from_q(q, n, &lim).unwrap();
            for m in 0..=n {
                let lib = gabidulin::subspace::enumerate_subspaces(&t, m as usize, &lim).unwrap();
                let want = gauss_binom(n, m, q as u128);
                ensure!(lib.len() as u128 == want, "q={q} n={n} m={m}: {} subspaces", lib.len());
                if t.order() <= 64 {
                    let sets = subspace_sets(&t, m as usize);
                    ensure!(sets.len() as u128 == want, "oracle q={q} n={n} m={m}: {}", sets.len());
                }
            }
        }
    }
    Ok(format!("{thetas} subspace polynomials"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("MRD property", mrd_property),
        ("orbit criterion vs exhaustive equivalence", oracle_equivalence),
        ("orbit count bound", census_bound),
        ("hyperplanes form one orbit", hyperplanes_single_orbit),
        ("nuclei formulas", nuclei),
        ("distinct residues modulo θ_U", representatives),
        ("root bound", root_bound),
        ("nucleus transport", nucleus_transport),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}, {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
