//! Linear maps between superalgebras: homomorphism checks, the automorphisms
//! `Φ(f, g)` and `τ` of K10, their analogues on the two-factor products,
//! decomposition of K10 automorphisms, and derivation spaces.

use rand::Rng;
use thiserror::Error;

use crate::algebra::SuperAlgebra;
use crate::catalog::{k10, tensor_factors, tensor_index};
use crate::linalg::{kernel, Matrix, Vector};
use crate::scalars::{Scalar, ScalarDomain};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("trace is {0}, expected 0")]
    Trace(String),
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("not of the form Φ(f,g) or Φ(f,g)∘τ: {0}")]
    NotInImage(String),
    #[error("Φ(f,g) rebuilt from the odd blocks differs from the input")]
    ReconstructionMismatch,
    #[error("map fails the homomorphism check: {0}")]
    NotMorphism(MorphismFailure),
}

/// Why a linear map is not a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismFailure {
    #[error("matrix shape {rows}x{cols} does not match the algebras")]
    Shape { rows: usize, cols: usize },
    #[error("matrix and algebras live over different domains")]
    Domain,
    #[error("entry ({row}, {column}) mixes parities")]
    Parity { row: usize, column: usize },
    #[error("M(e_{i} e_{j}) != M(e_{i}) M(e_{j})")]
    Product { i: usize, j: usize },
    #[error("unity is not mapped to unity")]
    Unity,
    #[error("matrix is not invertible")]
    NotInvertible,
}

/// A matrix (column `j` is the image of `e_j`) with a declared parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Matrix,
    parity: u8,
}

impl LinearMap {
    pub fn new(matrix: Matrix, parity: u8) -> Self {
        LinearMap {
            matrix,
            parity: parity % 2,
        }
    }

    pub fn even(matrix: Matrix) -> Self {
        Self::new(matrix, 0)
    }

    pub fn identity(domain: &ScalarDomain, n: usize) -> Self {
        Self::even(Matrix::identity(domain, n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.apply(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap::new(self.matrix.mul(&other.matrix), self.parity + other.parity)
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        self.matrix
            .inverse()
            .map(|m| LinearMap::new(m, self.parity))
    }

    /// `[D, E] = DE - (-1)^{|D||E|} ED`.
    pub fn supercommutator(&self, other: &LinearMap) -> LinearMap {
        let sign = if self.parity * other.parity == 1 { -1 } else { 1 };
        LinearMap::new(
            self.matrix.bracket(&other.matrix, sign),
            self.parity + other.parity,
        )
    }

    /// Whether every nonzero entry maps parity `p` to `p + parity`.
    pub fn respects_parity(&self, source: &[u8], target: &[u8]) -> bool {
        self.parity_violation(source, target).is_none()
    }

    fn parity_violation(&self, source: &[u8], target: &[u8]) -> Option<(usize, usize)> {
        for (r, &pr) in target.iter().enumerate() {
            for (c, &pc) in source.iter().enumerate() {
                if (pc + self.parity) % 2 != pr && !self.matrix.get(r, c).is_zero() {
                    return Some((r, c));
                }
            }
        }
        None
    }
}

fn check_shape(
    source: &SuperAlgebra,
    target: &SuperAlgebra,
    map: &LinearMap,
) -> Result<(), MorphismFailure> {
    let m = map.matrix();
    if m.nrows() != target.dim() || m.ncols() != source.dim() {
        return Err(MorphismFailure::Shape {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.domain() != source.domain() || m.domain() != target.domain() {
        return Err(MorphismFailure::Domain);
    }
    Ok(())
}

/// Checks that an even map preserves parity, products and unity.
pub fn check_morphism(
    source: &SuperAlgebra,
    target: &SuperAlgebra,
    map: &LinearMap,
) -> Result<(), MorphismFailure> {
    check_shape(source, target, map)?;
    if let Some((row, column)) = map.parity_violation(source.parity(), target.parity()) {
        return Err(MorphismFailure::Parity { row, column });
    }
    let m = map.matrix();
    let images = m.columns();
    let n = source.dim();
    for i in 0..n {
        for j in 0..n {
            let lhs = m.apply(source.basis_product(i, j));
            if lhs != target.mul(&images[i], &images[j]) {
                return Err(MorphismFailure::Product { i, j });
            }
        }
    }
    if let (Some(u), Some(w)) = (source.unity(), target.unity()) {
        if &m.apply(u) != w {
            return Err(MorphismFailure::Unity);
        }
    }
    Ok(())
}

pub fn is_morphism(source: &SuperAlgebra, target: &SuperAlgebra, map: &LinearMap) -> bool {
    map.parity() == 0 && check_morphism(source, target, map).is_ok()
}

/// A bijective homomorphism.
pub fn check_isomorphism(
    source: &SuperAlgebra,
    target: &SuperAlgebra,
    map: &LinearMap,
) -> Result<(), MorphismFailure> {
    check_morphism(source, target, map)?;
    if map.matrix().inverse().is_none() {
        return Err(MorphismFailure::NotInvertible);
    }
    Ok(())
}

pub fn is_automorphism(algebra: &SuperAlgebra, map: &LinearMap) -> bool {
    map.parity() == 0 && check_isomorphism(algebra, algebra, map).is_ok()
}

/// A 2x2 matrix of determinant 1 acting on `W = span(u, v)`; columns are the
/// images of `u` and `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2 {
    matrix: Matrix,
}

impl Sl2 {
    pub fn new(matrix: Matrix) -> Result<Self, MorphismError> {
        if matrix.nrows() != 2 || matrix.ncols() != 2 {
            return Err(MorphismError::Shape {
                expected: 2,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let det = matrix.determinant();
        if !det.is_one() {
            return Err(MorphismError::Determinant(det.to_string()));
        }
        Ok(Sl2 { matrix })
    }

    pub fn from_entries(domain: &ScalarDomain, entries: [[i64; 2]; 2]) -> Result<Self, MorphismError> {
        let rows = entries
            .iter()
            .map(|r| r.iter().map(|&x| domain.from_i64(x)).collect())
            .collect();
        Self::new(Matrix::from_rows(domain, rows))
    }

    pub fn identity(domain: &ScalarDomain) -> Self {
        Sl2 {
            matrix: Matrix::identity(domain, 2),
        }
    }

    /// `u ↦ v, v ↦ -u`, which inverts the degrees of a homogeneous
    /// symplectic basis.
    pub fn rotation(domain: &ScalarDomain) -> Self {
        Self::from_entries(domain, [[0, -1], [1, 0]]).expect("determinant 1")
    }

    pub fn random<R: Rng + ?Sized>(domain: &ScalarDomain, rng: &mut R) -> Self {
        loop {
            let a = domain.random(rng);
            if a.is_zero() {
                continue;
            }
            let b = domain.random(rng);
            let c = domain.random(rng);
            let d = (domain.one() + &b * &c).try_div(&a).expect("a is nonzero");
            let m = Matrix::from_rows(domain, vec![vec![a, b], vec![c, d]]);
            return Sl2 { matrix: m };
        }
    }

    /// All elements of SL2 over a finite prime field.
    pub fn enumerate(domain: &ScalarDomain) -> Vec<Sl2> {
        let elements = domain.elements().expect("finite field");
        let mut out = Vec::new();
        for a in &elements {
            for b in &elements {
                for c in &elements {
                    for d in &elements {
                        if (a * d - b * c).is_one() {
                            let m = Matrix::from_rows(
                                domain,
                                vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]],
                            );
                            out.push(Sl2 { matrix: m });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn mul(&self, other: &Sl2) -> Sl2 {
        Sl2 {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            matrix: self.matrix.inverse().expect("determinant 1"),
        }
    }

    /// `1 ⊕ f` on `(a, u, v)` or `(1, u, v)`.
    fn extended(&self) -> Matrix {
        let d = self.matrix.domain();
        let mut m = Matrix::identity(d, 3);
        for r in 0..2 {
            for c in 0..2 {
                m.set(r + 1, c + 1, self.matrix.get(r, c).clone());
            }
        }
        m
    }
}

/// The map `1 ↦ 1, x⊗y ↦ F(x)⊗G(y)` for 3x3 matrices on K3.
fn tensor_map(domain: &ScalarDomain, f: &Matrix, g: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(domain, 10, 10);
    m.set(k10::ONE, k10::ONE, domain.one());
    for col in 1..10 {
        let (x, y) = tensor_factors(col).expect("tensor index");
        for p in 0..3 {
            for q in 0..3 {
                let c = f.get(p, x) * g.get(q, y);
                if !c.is_zero() {
                    m.set(tensor_index(p, q), col, c);
                }
            }
        }
    }
    m
}

/// `Φ(f, g)`: `1 ↦ 1`, `x⊗y ↦ F(x)⊗G(y)` with `F = 1 ⊕ f`, `G = 1 ⊕ g`.
pub fn phi_auto(f: &Sl2, g: &Sl2) -> LinearMap {
    let d = f.matrix.domain();
    LinearMap::even(tensor_map(d, &f.extended(), &g.extended()))
}

/// `τ`: `1 ↦ 1`, `x⊗y ↦ (-1)^{|x||y|} y⊗x`.
pub fn tau_auto(domain: &ScalarDomain) -> LinearMap {
    let mut m = Matrix::zeros(domain, 10, 10);
    m.set(k10::ONE, k10::ONE, domain.one());
    for col in 1..10 {
        let (x, y) = tensor_factors(col).expect("tensor index");
        let s = if x != 0 && y != 0 { -1 } else { 1 };
        m.set(tensor_index(y, x), col, domain.from_i64(s));
    }
    LinearMap::even(m)
}

/// `Φ(f, g)`, or `Φ(f, g) ∘ τ` when `swap` is set.
pub fn k10_automorphism(f: &Sl2, g: &Sl2, swap: bool) -> LinearMap {
    let phi = phi_auto(f, g);
    if swap {
        phi.compose(&tau_auto(f.matrix.domain()))
    } else {
        phi
    }
}

/// The factor exchange `(x, y) ↦ (y, x)` on a product of two 3-dim algebras.
pub fn factor_swap(domain: &ScalarDomain) -> LinearMap {
    let mut m = Matrix::zeros(domain, 6, 6);
    for i in 0..3 {
        m.set(i, i + 3, domain.one());
        m.set(i + 3, i, domain.one());
    }
    LinearMap::even(m)
}

/// `Ψ(f, g)`: `(x, y) ↦ (F(x), G(y))` on K3×K3 or J(W)×J(W), composed with
/// the factor swap (applied first) when `swap` is set.
pub fn psi_auto(f: &Sl2, g: &Sl2, swap: bool) -> LinearMap {
    let d = f.matrix.domain();
    let (ef, eg) = (f.extended(), g.extended());
    let mut m = Matrix::zeros(d, 6, 6);
    for r in 0..3 {
        for c in 0..3 {
            m.set(r, c, ef.get(r, c).clone());
            m.set(r + 3, c + 3, eg.get(r, c).clone());
        }
    }
    let psi = LinearMap::even(m);
    if swap {
        psi.compose(&factor_swap(d))
    } else {
        psi
    }
}

/// The data `(f, g, swap)` with `M = Φ(f, g) ∘ τ^swap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K10Decomposition {
    pub f: Sl2,
    pub g: Sl2,
    pub swap: bool,
}

/// Recovers `(f, g, swap)` from an automorphism of K10 and checks that the
/// reconstruction equals the input.
pub fn decompose_automorphism(
    algebra: &SuperAlgebra,
    map: &LinearMap,
) -> Result<K10Decomposition, MorphismError> {
    let m = map.matrix();
    if m.nrows() != 10 || m.ncols() != 10 {
        return Err(MorphismError::Shape {
            expected: 10,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    check_isomorphism(algebra, algebra, map).map_err(MorphismError::NotMorphism)?;
    let (l, r) = (&k10::LEFT_ODD[..], &k10::RIGHT_ODD[..]);
    let diagonal_zero = m.submatrix(l, l).is_zero() && m.submatrix(r, r).is_zero();
    let off_zero = m.submatrix(l, r).is_zero() && m.submatrix(r, l).is_zero();
    let swap = match (off_zero, diagonal_zero) {
        (true, false) => false,
        (false, true) => true,
        _ => {
            return Err(MorphismError::NotInImage(
                "odd blocks W⊗a and a⊗W are neither preserved nor exchanged".into(),
            ))
        }
    };
    // Φ(f,g)∘τ sends u⊗a to a⊗g(u) and a⊗u to f(u)⊗a.
    let (f, g) = if swap {
        (m.submatrix(l, r), m.submatrix(r, l))
    } else {
        (m.submatrix(l, l), m.submatrix(r, r))
    };
    let f = Sl2::new(f)?;
    let g = Sl2::new(g)?;
    if k10_automorphism(&f, &g, swap).matrix() != m {
        return Err(MorphismError::ReconstructionMismatch);
    }
    Ok(K10Decomposition { f, g, swap })
}

/// Basis of the derivations of the given parity: linear maps `D` with
/// `D(xy) = D(x)y + (-1)^{|D||x|} x D(y)`, found as the kernel of a linear
/// system in the parity-respecting matrix entries.
pub fn derivations(algebra: &SuperAlgebra, parity: u8) -> Vec<LinearMap> {
    let n = algebra.dim();
    let dom = algebra.domain();
    let par = algebra.parity();
    let parity = parity % 2;
    // unknowns: entries (row, col) allowed by the parity
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| par[r] == (par[c] + parity) % 2)
        .collect();
    let mut index = vec![None; n * n];
    for (u, &(r, c)) in unknowns.iter().enumerate() {
        index[r * n + c] = Some(u);
    }
    let m = unknowns.len();
    let mut rows: Vec<Vector> = Vec::new();
    for i in 0..n {
        let sign = if parity * par[i] == 1 { -dom.one() } else { dom.one() };
        for j in 0..n {
            let eij = algebra.basis_product(i, j);
            for k in 0..n {
                let mut row = vec![dom.zero(); m];
                let mut touched = false;
                let mut add = |r: usize, c: usize, coeff: Scalar| {
                    if coeff.is_zero() {
                        return;
                    }
                    if let Some(u) = index[r * n + c] {
                        row[u] += coeff;
                        touched = true;
                    }
                };
                // D(e_i e_j)_k = sum_l c_ijl D[k][l]
                for (l, c) in eij.iter().enumerate() {
                    add(k, l, c.clone());
                }
                // (D(e_i) e_j)_k = sum_l D[l][i] c_ljk
                for l in 0..n {
                    add(l, i, -algebra.constant(l, j, k));
                }
                // (e_i D(e_j))_k = sum_l D[l][j] c_ilk
                for l in 0..n {
                    add(l, j, -(&sign * algebra.constant(i, l, k)));
                }
                if touched && row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    kernel(dom, &rows, m)
        .into_iter()
        .map(|sol| {
            let mut mat = Matrix::zeros(dom, n, n);
            for (u, &(r, c)) in unknowns.iter().enumerate() {
                mat.set(r, c, sol[u].clone());
            }
            LinearMap::new(mat, parity)
        })
        .collect()
}

/// Whether `D(xy) = D(x)y + (-1)^{|D||x|} x D(y)` on all basis pairs.
pub fn is_derivation(algebra: &SuperAlgebra, d: &LinearMap) -> bool {
    let n = algebra.dim();
    let dom = algebra.domain();
    if !d.respects_parity(algebra.parity(), algebra.parity()) {
        return false;
    }
    let cols = d.matrix().columns();
    (0..n).all(|i| {
        let ei = crate::linalg::unit_vector(dom, n, i);
        (0..n).all(|j| {
            let ej = crate::linalg::unit_vector(dom, n, j);
            let lhs = d.apply(algebra.basis_product(i, j));
            let mut rhs = algebra.mul(&cols[i], &ej);
            let second = algebra.mul(&ei, &cols[j]);
            let sign = d.parity() * algebra.parity()[i] == 1;
            for (x, y) in rhs.iter_mut().zip(second) {
                if sign {
                    *x -= y;
                } else {
                    *x += y;
                }
            }
            lhs == rhs
        })
    })
}

/// The differential of `Φ` at `(X, Y)` for traceless 2x2 matrices:
/// `1, a⊗a ↦ 0`, `x⊗y ↦ X'(x)⊗y + x⊗Y'(y)` with `X' = 0 ⊕ X`.
pub fn dphi(x: &Matrix, y: &Matrix) -> Result<LinearMap, MorphismError> {
    let dom = x.domain().clone();
    for m in [x, y] {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(MorphismError::Shape {
                expected: 2,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let tr = m.get(0, 0) + m.get(1, 1);
        if !tr.is_zero() {
            return Err(MorphismError::Trace(tr.to_string()));
        }
    }
    let extend = |m: &Matrix| {
        let mut e = Matrix::zeros(&dom, 3, 3);
        for r in 0..2 {
            for c in 0..2 {
                e.set(r + 1, c + 1, m.get(r, c).clone());
            }
        }
        e
    };
    let id = Matrix::identity(&dom, 3);
    let mut left = tensor_map(&dom, &extend(x), &id);
    let mut right = tensor_map(&dom, &id, &extend(y));
    // tensor_map fixes 1; the differential kills it
    left.set(k10::ONE, k10::ONE, dom.zero());
    right.set(k10::ONE, k10::ONE, dom.zero());
    Ok(LinearMap::even(left.add(&right)))
}

/// `sl2 x sl2` basis `(E,0), (H,0), (F,0), (0,E), (0,H), (0,F)`.
pub fn sl2_pairs(domain: &ScalarDomain) -> Vec<(Matrix, Matrix)> {
    let m = |e: [[i64; 2]; 2]| {
        Matrix::from_rows(
            domain,
            e.iter()
                .map(|r| r.iter().map(|&x| domain.from_i64(x)).collect())
                .collect(),
        )
    };
    let basis = [m([[0, 1], [0, 0]]), m([[1, 0], [0, -1]]), m([[0, 0], [1, 0]])];
    let zero = Matrix::zeros(domain, 2, 2);
    basis
        .iter()
        .map(|b| (b.clone(), zero.clone()))
        .chain(basis.iter().map(|b| (zero.clone(), b.clone())))
        .collect()
}
