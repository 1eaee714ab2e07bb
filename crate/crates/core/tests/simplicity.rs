use kac_jordan::algebra::{restrict_scalars, AlgebraError, Simplicity, SimplicityOptions, SuperAlgebra};
use kac_jordan::catalog;
use kac_jordan::scalars::{ScalarDomain, ScalarError};

/// Row rank of vectors mod p.
fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = (1..p).find(|&x| x * m[rank][col] % p == 1).unwrap();
        let pivot_row: Vec<u64> = m[rank].iter().map(|x| x * inv % p).collect();
        m[rank] = pivot_row.clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every subspace of F_p^n of dimension k, as reduced echelon bases.
fn subspaces(n: usize, k: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..n).map(move |c| (r, c)))
            .filter(|(_, c)| !pivots.contains(c))
            .collect();
        let total = p.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u64; n]; k];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = c % p;
                c /= p;
            }
            out.push(rows);
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Simplicity decided by testing every proper nonzero subspace for ideal-ness.
fn simple_by_subspaces(a: &SuperAlgebra) -> bool {
    let p = a.domain().characteristic();
    let n = a.dim();
    let c = |i: usize, j: usize, k: usize| a.constant(i, j, k).residue().unwrap();
    let product_zero = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| c(i, j, k) == 0)));
    if product_zero {
        return false;
    }
    let mul = |i: usize, v: &[u64], left: bool| -> Vec<u64> {
        let mut out = vec![0u64; n];
        for (j, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate() {
                let coef = if left { c(i, j, k) } else { c(j, i, k) };
                *slot = (*slot + x * coef) % p;
            }
        }
        out
    };
    for k in 1..n {
        for basis in subspaces(n, k, p) {
            let is_ideal = basis.iter().all(|v| {
                (0..n).all(|i| {
                    [true, false].into_iter().all(|left| {
                        let mut rows = basis.clone();
                        rows.push(mul(i, v, left));
                        rank_mod(&rows, p) == k
                    })
                })
            });
            if is_ideal {
                return false;
            }
        }
    }
    true
}

#[test]
fn subspace_enumeration_agrees_on_small_algebras() {
    let f3 = ScalarDomain::prime(3).unwrap();
    let f9 = ScalarDomain::quadratic(&f3, f3.from_i64(-1)).unwrap();
    let opts = SimplicityOptions::default();
    let mut algebras: Vec<(String, SuperAlgebra)> = ["k3", "jw", "k3xk3", "jwxjw"]
        .iter()
        .map(|name| (name.to_string(), catalog::by_name(name, &f3).unwrap().unwrap()))
        .collect();
    algebras.push(("K3 over F9".into(), restrict_scalars(&catalog::kaplansky_k3(&f9).unwrap()).unwrap()));
    algebras.push(("even part of K10".into(), catalog::kac_k10(&f3).unwrap().even_part()));
    algebras.push(("even part of K9".into(), catalog::kac_k9(&f3).unwrap().even_part()));
    for (name, a) in &algebras {
        assert!(a.dim() <= 6);
        let fast = a.is_simple(&opts).unwrap().is_simple();
        assert_eq!(fast, simple_by_subspaces(a), "{name}");
    }
    // K3 and J(W) are simple, the products are not
    assert!(simple_by_subspaces(&algebras[0].1));
    assert!(!simple_by_subspaces(&algebras[2].1));
}

#[test]
fn subspace_counts_are_gaussian_binomials() {
    // [4 choose 2]_3 = 130, [6 choose 3]_3 = 33880
    assert_eq!(subspaces(4, 2, 3).len(), 130);
    assert_eq!(subspaces(6, 3, 3).len(), 33880);
}

#[test]
fn rational_certificate_needs_a_good_prime() {
    let q = ScalarDomain::rational();
    let seventh = q.ratio(1, 7).unwrap();
    let a = SuperAlgebra::new(&q, vec![0], vec![seventh], None, vec!["e".into()]).unwrap();
    let opts = SimplicityOptions { prime: 7, ..SimplicityOptions::default() };
    assert!(matches!(
        a.is_simple(&opts),
        Err(AlgebraError::Scalar(ScalarError::NotReducible { p: 7, .. }))
    ));
    let opts = SimplicityOptions { prime: 5, ..SimplicityOptions::default() };
    assert!(a.is_simple(&opts).unwrap().is_simple());
    let k10 = catalog::kac_k10(&q).unwrap();
    let opts = SimplicityOptions { prime: 3, ..SimplicityOptions::default() };
    assert!(matches!(k10.is_simple(&opts).unwrap(), Simplicity::Inconclusive { .. }));
}
