//! Acceptance suite: one PASS/FAIL line per criterion. Every check is exact.
//! Run with `cargo test -p kac-jordan --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use kac_jordan::algebra::{restrict_scalars, Simplicity, SimplicityOptions, SuperAlgebra};
use kac_jordan::catalog;
use kac_jordan::descent::{
    forms_equivalent, k10_twisted_basis, rigid_involutions, rigidity_witness, separate_forms,
    split_check, twist, DescentDatum, QuadraticEtale,
};
use kac_jordan::gradings::{
    classify, coarsen, coarsening_hom, fine_gradings, gradings_isomorphic, verify_grading, z2_census,
    GradedAlgebra, GradingLabel,
};
use kac_jordan::group::{AbelianGroup, GroupElement};
use kac_jordan::linalg::{Matrix, Subspace, Vector};
use kac_jordan::morphisms::{
    check_isomorphism, decompose_automorphism, derivations, dphi, is_morphism, k10_automorphism,
    phi_auto, sl2_pairs, tau_auto, Sl2,
};
use kac_jordan::scalars::{Scalar, ScalarDomain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rational() -> ScalarDomain {
    ScalarDomain::rational()
}

fn fp(p: u64) -> ScalarDomain {
    ScalarDomain::prime(p).unwrap()
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let out = f();
    let spent = start.elapsed();
    ensure!(spent < limit, "{what} took {spent:.2?}, limit {limit:?}");
    Ok(out)
}

// ---------------------------------------------------------------------------
// Oracles

/// K3 from its defining products, basis (a, u, v).
fn k3_oracle(d: &ScalarDomain) -> Vec<Vec<Vector>> {
    let half = d.ratio(1, 2).unwrap();
    let z = || vec![d.zero(); 3];
    let mut t = vec![vec![z(); 3]; 3];
    t[0][0][0] = d.one();
    for x in [1, 2] {
        t[0][x][x] = half.clone();
        t[x][0][x] = half.clone();
    }
    t[1][2][0] = d.one();
    t[2][1][0] = -d.one();
    t
}

fn k3_form(d: &ScalarDomain, x: usize, y: usize) -> Scalar {
    match (x, y) {
        (0, 0) => d.ratio(1, 2).unwrap(),
        (1, 2) => d.one(),
        (2, 1) => -d.one(),
        _ => d.zero(),
    }
}

const PAIRS: [(usize, usize); 9] = [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (1, 0), (2, 0), (0, 1), (0, 2)];

/// K10 constants with correction coefficient `c` (the algebra has `c = 3/4`).
fn k10_oracle(d: &ScalarDomain, c: &Scalar) -> Vec<Scalar> {
    let k3 = k3_oracle(d);
    let par = |x: usize| u8::from(x != 0);
    let index = |x: usize, y: usize| 1 + PAIRS.iter().position(|&p| p == (x, y)).unwrap();
    let n = 10;
    let mut out = vec![d.zero(); n * n * n];
    for i in 0..n {
        out[i * n + i] = d.one();
        out[(i * n) * n + i] = d.one();
    }
    for (i, &(x, y)) in PAIRS.iter().enumerate() {
        for (j, &(z, t)) in PAIRS.iter().enumerate() {
            let sign = if par(y) * par(z) == 1 { -d.one() } else { d.one() };
            let (row, col) = (i + 1, j + 1);
            for p in 0..3 {
                for q in 0..3 {
                    let coef = &k3[x][z][p] * &k3[y][t][q];
                    if !coef.is_zero() {
                        out[(row * n + col) * n + index(p, q)] += &sign * &coef;
                    }
                }
            }
            let corr = &(c * &k3_form(d, x, z)) * &k3_form(d, y, t);
            out[(row * n + col) * n] -= &sign * &corr;
        }
    }
    out
}

fn k10_parity() -> Vec<u8> {
    std::iter::once(0)
        .chain(PAIRS.iter().map(|&(x, y)| (u8::from(x != 0) + u8::from(y != 0)) % 2))
        .collect()
}

fn same_table(a: &SuperAlgebra, constants: &[Scalar]) -> bool {
    let n = a.dim();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| a.constant(i, j, k) == &constants[(i * n + j) * n + k])))
}

/// Residue table of an algebra over a prime field.
struct Table {
    n: usize,
    p: u64,
    parity: Vec<u8>,
    nonzero: Vec<Vec<(usize, u64)>>,
}

impl Table {
    fn new(a: &SuperAlgebra) -> Table {
        let p = a.domain().characteristic();
        let n = a.dim();
        let mut nonzero = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = a.constant(i, j, k).residue().expect("prime field");
                    if c != 0 {
                        nonzero[i * n + j].push((k, c));
                    }
                }
            }
        }
        Table {
            n,
            p,
            parity: a.parity().to_vec(),
            nonzero,
        }
    }

    fn left(&self, i: usize) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for j in 0..self.n {
            for &(k, c) in &self.nonzero[i * self.n + j] {
                m[k][j] = c;
            }
        }
        m
    }

    fn right(&self, i: usize) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for j in 0..self.n {
            for &(k, c) in &self.nonzero[j * self.n + i] {
                m[k][j] = c;
            }
        }
        m
    }
}

const GENERATORS: usize = 6;
const MONOMIALS: usize = 1 << GENERATORS;

/// Element of the Grassmann envelope `A0 ⊗ G0 + A1 ⊗ G1` on six generators.
fn envelope_mul(t: &Table, x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; t.n * MONOMIALS];
    for i in 0..t.n {
        for s in 0..MONOMIALS {
            let xv = x[i * MONOMIALS + s];
            if xv == 0 {
                continue;
            }
            for j in 0..t.n {
                let pairs = &t.nonzero[i * t.n + j];
                if pairs.is_empty() {
                    continue;
                }
                for r in 0..MONOMIALS {
                    let yv = y[j * MONOMIALS + r];
                    if yv == 0 || s & r != 0 {
                        continue;
                    }
                    // sign of g_S g_R: pairs (s_k in S, r_l in R) with s_k > r_l
                    let mut inversions = 0;
                    for b in 0..GENERATORS {
                        if s >> b & 1 == 1 {
                            inversions += (r & ((1 << b) - 1)).count_ones();
                        }
                    }
                    let mut coef = xv * yv % t.p;
                    if inversions % 2 == 1 {
                        coef = (t.p - coef) % t.p;
                    }
                    for &(k, c) in pairs {
                        let slot = &mut out[k * MONOMIALS + (s | r)];
                        *slot = (*slot + coef * c) % t.p;
                    }
                }
            }
        }
    }
    out
}

fn envelope_random(t: &Table, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut x = vec![0u64; t.n * MONOMIALS];
    for i in 0..t.n {
        for s in 0..MONOMIALS {
            // keep degrees small so products stay inside six generators
            if (s.count_ones() as u8) % 2 == t.parity[i] && s.count_ones() <= 1 {
                x[i * MONOMIALS + s] = rng.gen_range(0..t.p);
            }
        }
    }
    x
}

/// A superalgebra is Jordan iff its Grassmann envelope is a Jordan algebra;
/// checks `xy = yx` and `(x²y)x = x²(yx)` on random envelope elements.
fn envelope_is_jordan(a: &SuperAlgebra, trials: usize, seed: u64) -> bool {
    let t = Table::new(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let x = envelope_random(&t, &mut rng);
        let y = envelope_random(&t, &mut rng);
        let x2 = envelope_mul(&t, &x, &x);
        envelope_mul(&t, &x, &y) == envelope_mul(&t, &y, &x)
            && envelope_mul(&t, &envelope_mul(&t, &x2, &y), &x)
                == envelope_mul(&t, &x2, &envelope_mul(&t, &y, &x))
    })
}

/// Row rank of vectors mod p.
fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..width {
                    m[r][c] = (m[r][c] + p * p - f * m[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
                }
            }
        }
    }
    out
}

/// Dimension of the associative algebra generated by all `L_x`, `R_x`. It is
/// `n²` only when no proper nonzero subspace is invariant, i.e. no proper ideal.
fn multiplication_algebra_dim(a: &SuperAlgebra) -> usize {
    let t = Table::new(a);
    let p = t.p;
    let gens: Vec<Vec<Vec<u64>>> = (0..t.n).flat_map(|i| [t.left(i), t.right(i)]).collect();
    let flat = |m: &Vec<Vec<u64>>| m.iter().flatten().copied().collect::<Vec<u64>>();
    let mut flats: Vec<Vec<u64>> = Vec::new();
    let mut queue: Vec<Vec<Vec<u64>>> = gens.clone();
    let id: Vec<Vec<u64>> = (0..t.n).map(|i| (0..t.n).map(|j| u64::from(i == j)).collect()).collect();
    queue.push(id);
    while let Some(m) = queue.pop() {
        let mut trial = flats.clone();
        trial.push(flat(&m));
        if rank_mod(&trial, p) == flats.len() {
            continue;
        }
        flats = trial;
        for g in &gens {
            queue.push(mat_mul_mod(g, &m, p));
        }
        if flats.len() == t.n * t.n {
            break;
        }
    }
    flats.len()
}

/// Dimension of the even derivations from the linear conditions
/// `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)` on parity-preserving `D`.
fn even_derivation_dim(a: &SuperAlgebra) -> usize {
    let t = Table::new(a);
    let (n, p) = (t.n, t.p);
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| t.parity[r] == t.parity[c])
        .collect();
    let var = |r: usize, c: usize| unknowns.iter().position(|&u| u == (r, c));
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // coefficient of e_k in D(e_i e_j) - D(e_i) e_j - e_i D(e_j)
            for k in 0..n {
                let mut row = vec![0u64; unknowns.len()];
                let mut add = |v: Option<usize>, c: u64, neg: bool| {
                    if let Some(v) = v {
                        let c = if neg { (p - c % p) % p } else { c % p };
                        row[v] = (row[v] + c) % p;
                    }
                };
                for &(m, c) in &t.nonzero[i * n + j] {
                    add(var(k, m), c, false);
                }
                for m in 0..n {
                    for &(kk, c) in &t.nonzero[m * n + j] {
                        if kk == k {
                            add(var(m, i), c, true);
                        }
                    }
                    for &(kk, c) in &t.nonzero[i * n + m] {
                        if kk == k {
                            add(var(m, j), c, true);
                        }
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    unknowns.len() - rank_mod(&rows, p)
}

/// Even idempotents by enumerating the even part over a prime field.
fn even_idempotents(a: &SuperAlgebra) -> usize {
    let t = Table::new(a);
    let even: Vec<usize> = (0..t.n).filter(|&i| t.parity[i] == 0).collect();
    let total = (t.p as usize).pow(even.len() as u32);
    let mut count = 0;
    for code in 0..total {
        let mut x = vec![0u64; t.n];
        let mut c = code;
        for &i in &even {
            x[i] = (c % t.p as usize) as u64;
            c /= t.p as usize;
        }
        let mut sq = vec![0u64; t.n];
        for &i in &even {
            for &j in &even {
                let xy = x[i] * x[j] % t.p;
                if xy == 0 {
                    continue;
                }
                for &(k, c) in &t.nonzero[i * t.n + j] {
                    sq[k] = (sq[k] + xy * c) % t.p;
                }
            }
        }
        if sq == x {
            count += 1;
        }
    }
    count
}

/// Test-side τ: `x⊗y ↦ (-1)^{|x||y|} y⊗x`, fixing 1.
fn tau_oracle(d: &ScalarDomain) -> Matrix {
    let mut m = Matrix::zeros(d, 10, 10);
    m.set(0, 0, d.one());
    for (i, &(x, y)) in PAIRS.iter().enumerate() {
        let j = PAIRS.iter().position(|&q| q == (y, x)).unwrap();
        let sign = if x != 0 && y != 0 { -d.one() } else { d.one() };
        m.set(j + 1, i + 1, sign);
    }
    m
}

// ---------------------------------------------------------------------------
// Criteria

fn axioms() -> Check {
    let limit = Duration::from_secs(1);
    for d in [rational(), fp(5), fp(7)] {
        let three_quarters = d.ratio(3, 4).unwrap();
        let k10 = catalog::kac_k10(&d).unwrap();
        ensure!(same_table(&k10, &k10_oracle(&d, &three_quarters)), "K10 table over {d} differs from the oracle");
        let k3 = catalog::kaplansky_k3(&d).unwrap();
        let k3_flat: Vec<Scalar> = k3_oracle(&d).into_iter().flatten().flatten().collect();
        ensure!(same_table(&k3, &k3_flat), "K3 table over {d} differs from the oracle");
        for name in ["k3", "jw", "k10"] {
            let a = catalog::by_name(name, &d).unwrap().unwrap();
            let ok = timed(limit, name, || a.is_supercommutative() && a.is_jordan_super())?;
            ensure!(ok, "{name} over {d} fails the axioms");
            if d.characteristic() != 0 {
                ensure!(envelope_is_jordan(&a, 3, 7), "{name} over {d} fails the envelope oracle");
            }
        }
        // the correction coefficient is forced
        let wrong = SuperAlgebra::new(&d, k10_parity(), k10_oracle(&d, &d.ratio(1, 2).unwrap()), None, catalog::k10_labels())
            .unwrap();
        ensure!(!wrong.is_jordan_super(), "coefficient 1/2 accepted over {d}");
        if d.characteristic() != 0 {
            ensure!(!envelope_is_jordan(&wrong, 3, 7), "envelope oracle misses a wrong coefficient over {d}");
        }
    }
    let f3 = fp(3);
    let k9 = catalog::kac_k9(&f3).unwrap();
    let ok = timed(limit, "k9", || k9.is_supercommutative() && k9.is_jordan_super())?;
    ensure!(ok, "K9 over F3 fails the axioms");
    ensure!(envelope_is_jordan(&k9, 3, 7), "K9 fails the envelope oracle");
    Ok(())
}

fn dichotomy() -> Check {
    let limit = Duration::from_secs(10);
    let opts = SimplicityOptions::default();
    let f5 = fp(5);
    let f3 = fp(3);
    let k10_5 = catalog::kac_k10(&f5).unwrap();
    let r = timed(limit, "K10/F5", || k10_5.is_simple(&opts))?.map_err(|e| e.to_string())?;
    ensure!(r.is_simple(), "K10 over F5 not reported simple: {r:?}");
    ensure!(multiplication_algebra_dim(&k10_5) == 100, "oracle: K10 over F5 has an invariant subspace");

    let k10_3 = catalog::kac_k10(&f3).unwrap();
    let r = timed(limit, "K10/F3", || k10_3.is_simple(&opts))?.map_err(|e| e.to_string())?;
    let Simplicity::NotSimple { ideal } = r else {
        return Err(format!("K10 over F3 reported {r:?}"));
    };
    let k9_span = Subspace::coordinate(&f3, 10, &(1..10).collect::<Vec<_>>());
    ensure!(ideal == k9_span, "ideal over F3 is not K9 (dim {})", ideal.dim());
    ensure!(k10_3.is_ideal(&ideal), "K9 is not an ideal of K10 over F3");
    ensure!(multiplication_algebra_dim(&k10_3) < 100, "oracle: K10 over F3 acts irreducibly");

    let k9 = catalog::kac_k9(&f3).unwrap();
    let r = timed(limit, "K9/F3", || k9.is_simple(&opts))?.map_err(|e| e.to_string())?;
    ensure!(r.is_simple(), "K9 over F3 not reported simple: {r:?}");
    ensure!(multiplication_algebra_dim(&k9) == 81, "oracle: K9 has an invariant subspace");
    // full projective enumeration of K9 over F3: 9841 points
    let r = timed(limit, "K9/F3 enumeration", || k9.exhaustive_simplicity(20_000))?.map_err(|e| e.to_string())?;
    ensure!(r.is_simple(), "enumeration finds a proper ideal of K9");
    Ok(())
}

fn automorphisms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [rational(), fp(3), fp(5)] {
        let a = catalog::kac_k10(&d).unwrap();
        let tau = tau_auto(&d);
        ensure!(tau.matrix() == &tau_oracle(&d), "τ differs from the oracle over {d}");
        ensure!(is_morphism(&a, &a, &tau), "τ is not a morphism over {d}");
        ensure!(tau.compose(&tau).matrix().is_identity(), "τ² ≠ id over {d}");
        for _ in 0..100 {
            let f = Sl2::random(&d, &mut rng);
            let g = Sl2::random(&d, &mut rng);
            let phi = phi_auto(&f, &g);
            ensure!(is_morphism(&a, &a, &phi), "Φ(f, g) is not a morphism over {d}");
            ensure!(
                tau.compose(&phi).compose(&tau) == phi_auto(&g, &f),
                "τΦ(f, g)τ ≠ Φ(g, f) over {d}"
            );
            for swap in [false, true] {
                let m = k10_automorphism(&f, &g, swap);
                let dec = decompose_automorphism(&a, &m).map_err(|e| e.to_string())?;
                ensure!(dec.f == f && dec.g == g && dec.swap == swap, "decomposition mismatch over {d}");
                ensure!(k10_automorphism(&dec.f, &dec.g, dec.swap) == m, "reconstruction mismatch over {d}");
            }
        }
    }
    Ok(())
}

fn derivation_algebra() -> Check {
    for d in [rational(), fp(5), fp(7)] {
        let a = catalog::kac_k10(&d).unwrap();
        let ders = derivations(&a, 0);
        ensure!(ders.len() == 6, "dim Der_even = {} over {d}", ders.len());
        if d.characteristic() != 0 {
            ensure!(even_derivation_dim(&a) == 6, "oracle disagrees on Der_even over {d}");
        }
        let flat = |m: &Matrix| -> Vector { m.rows().into_iter().flatten().collect() };
        let span = Subspace::span(&d, 100, ders.iter().map(|x| flat(x.matrix())));
        let images = Subspace::span(
            &d,
            100,
            sl2_pairs(&d)
                .iter()
                .map(|(x, y)| flat(dphi(x, y).unwrap().matrix())),
        );
        ensure!(span == images, "Der_even ≠ dΦ(sl2 × sl2) over {d}");
        for x in &ders {
            for y in &ders {
                ensure!(span.contains(&flat(x.supercommutator(y).matrix())), "not commutator-closed over {d}");
            }
        }
    }
    Ok(())
}

fn random_label(rng: &mut ChaCha8Rng, family: u8) -> (AbelianGroup, GradingLabel) {
    let rank = rng.gen_range(0..3);
    let mut torsion: Vec<u64> = (0..rng.gen_range(0..2)).map(|_| [3, 4, 5][rng.gen_range(0..3)]).collect();
    if family == 2 {
        torsion.push([2, 4, 6][rng.gen_range(0..3)]);
    }
    let g = AbelianGroup::new(rank, torsion).unwrap();
    let random = |rng: &mut ChaCha8Rng| -> GroupElement {
        let c: Vec<i64> = (0..g.arity()).map(|_| rng.gen_range(-4..5)).collect();
        g.element(&c).unwrap()
    };
    let label = if family == 1 {
        GradingLabel::First { g1: random(rng), g2: random(rng) }
    } else {
        let n = *g.torsion().last().unwrap() as i64;
        let mut h = vec![0; g.arity()];
        *h.last_mut().unwrap() = n / 2;
        GradingLabel::Second { g: random(rng), h: g.element(&h).unwrap() }
    };
    (g, label)
}

fn gradings() -> Check {
    let d = rational();
    let z = AbelianGroup::free(1);
    let zz2 = AbelianGroup::new(1, vec![2]).unwrap();
    let el = |g: &AbelianGroup, c: &[i64]| g.element(c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in [GradedAlgebra::K3Squared, GradedAlgebra::K10] {
        let a = kind.build(&d);
        // constructors verify and classification round-trips
        for case in 0..20 {
            let family = 1 + (case % 2) as u8;
            let (group, label) = random_label(&mut rng, family);
            let gr = kind.standard(&d, &group, &label).map_err(|e| e.to_string())?;
            verify_grading(&a, &gr).map_err(|e| format!("{label}: {e}"))?;
            let c = classify(&a, &gr).map_err(|e| format!("{label}: {e}"))?;
            ensure!(c.label == label.canonical(&group), "classify({label}) = {}", c.label);
            let back = kind.standard(&d, &group, &c.label).unwrap().image(c.normalizer.matrix());
            ensure!(back == gr, "normalizer does not carry the standard grading onto {label}");
            // coarsening of the fine grading of the same family
            let fine = fine_gradings(kind, &d);
            let hom = coarsening_hom(&group, &label).map_err(|e| e.to_string())?;
            let coarse = coarsen(&fine[(family - 1) as usize].1, &hom).map_err(|e| e.to_string())?;
            ensure!(coarse == gr, "coarsening does not reproduce {label}");
        }
        // the three isomorphism examples
        let first = |x: i64, y: i64| {
            kind.standard(&d, &z, &GradingLabel::First { g1: el(&z, &[x]), g2: el(&z, &[y]) }).unwrap()
        };
        let second = |x: i64, t: i64| {
            kind.standard(&d, &zz2, &GradingLabel::Second { g: el(&zz2, &[x, t]), h: el(&zz2, &[0, 1]) })
                .unwrap()
        };
        let examples = [
            (first(1, 1), first(1, -1), false),
            (first(1, 2), first(2, 1), true),
            (second(1, 0), second(-1, 1), false),
        ];
        for (k, (x, y, needs_swap)) in examples.iter().enumerate() {
            let w = gradings_isomorphic(&a, x, y)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("example {} not isomorphic", k + 1))?;
            check_isomorphism(&a, &a, &w).map_err(|e| e.to_string())?;
            ensure!(x.image(w.matrix()) == *y, "witness {} does not map components", k + 1);
            if *needs_swap && kind == GradedAlgebra::K10 {
                let dec = decompose_automorphism(&a, &w).map_err(|e| e.to_string())?;
                ensure!(dec.swap, "witness for Γ1(1,2) ≅ Γ1(2,1) does not involve τ");
            }
        }
        ensure!(
            gradings_isomorphic(&a, &first(1, 2), &first(1, 3)).unwrap().is_none(),
            "Γ1(1,2) ≅ Γ1(1,3) claimed"
        );
    }
    Ok(())
}

/// Classes of Z/2-gradings predicted from the isomorphism criteria: family 1
/// by the set {±g1, ±g2}, family 2 by the coset {g, g+h, -g, -g+h} with h = 1.
fn predicted_z2_classes() -> usize {
    let mut classes = BTreeSet::new();
    for g1 in 0..2u8 {
        for g2 in 0..2u8 {
            // -x = x in Z/2, so the set is just {g1, g2}
            let set: BTreeSet<u8> = [g1, g2].into_iter().collect();
            let multiset = if g1 == g2 { vec![g1, g1] } else { set.into_iter().collect() };
            classes.insert((1u8, multiset));
        }
    }
    for g in 0..2u8 {
        let coset: BTreeSet<u8> = [g, g ^ 1].into_iter().collect();
        classes.insert((2u8, coset.into_iter().collect()));
    }
    classes.len()
}

fn census() -> Check {
    let predicted = predicted_z2_classes();
    ensure!(predicted == 4, "label oracle predicts {predicted}");
    for kind in [GradedAlgebra::K10, GradedAlgebra::K3Squared] {
        let report = timed(Duration::from_secs(60), "census", || z2_census(kind, 3, 1 << 20))?
            .map_err(|e| e.to_string())?;
        ensure!(report.group_order == 1152, "{kind:?}: group of order {}", report.group_order);
        ensure!(report.classes == predicted, "{kind:?}: census {} vs prediction {predicted}", report.classes);
        ensure!(report.predicted == predicted, "{kind:?}: library prediction {}", report.predicted);
    }
    Ok(())
}

fn twisted_forms() -> Check {
    for (d, value) in [(rational(), -1), (fp(5), 2), (fp(3), -1)] {
        let dv = d.from_i64(value);
        let report = k10_twisted_basis(&d, &dv).map_err(|e| e.to_string())?;
        let a = &report.form.algebra;
        ensure!(a.dim() == 10 && a.is_supercommutative() && a.is_jordan_super(), "twist over {d} is not a 10-dim Jordan superalgebra");
        ensure!(report.even_matches, "even part over {d} does not match");
        ensure!(!report.odd_not_fixed.is_empty(), "odd-basis discrepancy not reported over {d}");
        ensure!(report.odd_corrected_fixed, "sign-corrected odd basis not fixed over {d}");
        // every fixed vector P + Qw satisfies τP = P and τQ = -Q
        let tau = tau_oracle(&d);
        for v in &report.form.fixed {
            let (p, q) = v.split_at(10);
            let tq: Vector = tau.apply(q).iter().map(|x| -x).collect();
            ensure!(tau.apply(p) == p && tq == q, "a fixed vector is not fixed over {d}");
        }
        split_check(&report.form).map_err(|e| format!("split check over {d}: {e}"))?;
    }
    Ok(())
}

fn uniqueness() -> Check {
    let q = rational();
    let a = catalog::kac_k10(&q).unwrap();
    let tau = tau_auto(&q);
    let e = forms_equivalent(&a, &tau, &q.from_i64(-1), &q.from_i64(-4)).map_err(|e| e.to_string())?;
    let w = e.witness.ok_or("twists along √-1 and √-4 not identified")?;
    check_isomorphism(&w.source, &w.target, &w.map).map_err(|e| e.to_string())?;
    let e = forms_equivalent(&a, &tau, &q.from_i64(-1), &q.from_i64(2)).map_err(|e| e.to_string())?;
    ensure!(!e.equivalent(), "twists along √-1 and √2 identified");
    Ok(())
}

fn separation() -> Check {
    let limit = Duration::from_secs(30);
    let opts = SimplicityOptions::default();
    let f3 = fp(3);
    let f9 = ScalarDomain::quadratic(&f3, f3.from_i64(-1)).unwrap();
    let split = catalog::k3_squared(&f3).unwrap();
    let field = restrict_scalars(&catalog::kaplansky_k3(&f9).unwrap()).unwrap();
    let r = timed(limit, "K3×K3 vs K3 over F9", || separate_forms(&split, &field, &opts, 1 << 20))?
        .map_err(|e| e.to_string())?;
    let row = r.invariants.iter().find(|i| i.name == "even idempotents").unwrap();
    ensure!(row.left == "4" && row.right == "2", "idempotent counts {} vs {}", row.left, row.right);
    ensure!(even_idempotents(&split) == 4 && even_idempotents(&field) == 2, "oracle counts differ");

    let f5 = fp(5);
    let plain = catalog::kac_k10(&f5).unwrap();
    let twisted = twist(
        &DescentDatum::new(&plain, &tau_auto(&f5), &QuadraticEtale::new(&f5, f5.from_i64(2)).unwrap())
            .map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?
    .algebra;
    let r = timed(limit, "K10 vs its twist", || separate_forms(&plain, &twisted, &opts, 1 << 20))?
        .map_err(|e| e.to_string())?;
    let row = r.invariants.iter().find(|i| i.name == "even idempotents").unwrap();
    ensure!(row.differs(), "even idempotent censuses agree ({})", row.left);
    let (x, y) = (even_idempotents(&plain), even_idempotents(&twisted));
    ensure!(
        row.left == x.to_string() && row.right == y.to_string(),
        "census {} / {} vs oracle {x} / {y}",
        row.left,
        row.right
    );
    let same = separate_forms(&plain, &plain, &opts, 1 << 20).map_err(|e| e.to_string())?;
    ensure!(!same.separated(), "an algebra is separated from itself");
    Ok(())
}

fn rigidity() -> Check {
    let cases = [(rational(), -1), (rational(), 2), (rational(), 3), (fp(5), 2), (fp(7), 3), (fp(3), -1)];
    for (d, value) in cases {
        let etale = QuadraticEtale::new(&d, d.from_i64(value)).map_err(|e| e.to_string())?;
        ensure!(!etale.is_split(), "{value} is a square over {d}");
        for a in [catalog::kaplansky_k3(&d).unwrap(), catalog::superform_jw(&d).unwrap()] {
            for t in rigid_involutions(&d) {
                let form = twist(&DescentDatum::new(&a, &t, &etale).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let w = rigidity_witness(&form).map_err(|e| format!("over {d}, d = {value}: {e}"))?;
                check_isomorphism(&a, &form.algebra, &w.map).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("axioms", axioms),
        ("characteristic dichotomy", dichotomy),
        ("automorphisms", automorphisms),
        ("derivations", derivation_algebra),
        ("gradings", gradings),
        ("census cross-check", census),
        ("twisted forms", twisted_forms),
        ("uniqueness per extension", uniqueness),
        ("separation", separation),
        ("rigidity", rigidity),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let spent = start.elapsed();
        match outcome {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({spent:.2?})", n + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({spent:.2?}) {reason}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
