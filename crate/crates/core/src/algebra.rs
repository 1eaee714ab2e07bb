//! Superalgebras given by a dense table of structure constants, and the generic
//! predicates on them: supercommutativity, the super Jordan identity, ideals,
//! simplicity, products, change of scalars and idempotent counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{
    add_scaled, is_zero_vector, unit_vector, zero_vector, BasisSolver, Matrix, Subspace, Vector,
};
use crate::scalars::{Scalar, ScalarDomain, ScalarError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("algebras live over different domains: {0} and {1}")]
    DomainMismatch(String, String),
    #[error("structure constant c[{i}][{j}][{k}] breaks parity coherence")]
    ParityIncoherent { i: usize, j: usize, k: usize },
    #[error("declared unity fails unity * e_{0} = e_{0} = e_{0} * unity")]
    NotUnity(usize),
    #[error("enumeration of {needed} elements exceeds the budget of {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("operation requires {0}")]
    Unsupported(String),
    #[error("span is not closed under multiplication: e_{i} * e_{j} leaves it")]
    NotClosed { i: usize, j: usize },
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// A finite-dimensional superalgebra `e_i e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlgebra {
    domain: ScalarDomain,
    parity: Vec<u8>,
    constants: Vec<Scalar>,
    unity: Option<Vector>,
    labels: Vec<String>,
}

/// A triple of basis indices on which the super Jordan identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanViolation {
    pub triple: (usize, usize, usize),
    pub residual: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple { evidence: String },
    /// A proper nonzero ideal.
    NotSimple { ideal: Subspace },
    /// `A A = 0`.
    ZeroProduct,
    /// Over the rationals, the reduction mod p was not simple; nothing follows.
    Inconclusive { reason: String },
}

impl Simplicity {
    pub fn is_simple(&self) -> bool {
        matches!(self, Simplicity::Simple { .. })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SimplicityOptions {
    /// Prime used to certify simplicity of algebras over the rationals.
    pub prime: u64,
    pub seed: u64,
    /// Cap on the number of projective points enumerated.
    pub budget: u128,
}

impl Default for SimplicityOptions {
    fn default() -> Self {
        SimplicityOptions {
            prime: 5,
            seed: 0x4b31_3000,
            budget: 200_000,
        }
    }
}

fn sign(exp: u8) -> i64 {
    if exp.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl SuperAlgebra {
    /// Validates parity coherence and the declared unity.
    pub fn new(
        domain: &ScalarDomain,
        parity: Vec<u8>,
        constants: Vec<Scalar>,
        unity: Option<Vector>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = parity.len();
        if constants.len() != n * n * n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n * n * n,
                got: constants.len(),
            });
        }
        if labels.len() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        for c in &constants {
            if c.domain() != domain {
                return Err(AlgebraError::DomainMismatch(
                    domain.to_string(),
                    c.domain().to_string(),
                ));
            }
        }
        let alg = SuperAlgebra {
            domain: domain.clone(),
            parity: parity.into_iter().map(|p| p % 2).collect(),
            constants,
            unity,
            labels,
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !alg.constant(i, j, k).is_zero()
                        && alg.parity[k] != (alg.parity[i] + alg.parity[j]) % 2
                    {
                        return Err(AlgebraError::ParityIncoherent { i, j, k });
                    }
                }
            }
        }
        if let Some(u) = &alg.unity {
            if u.len() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: u.len(),
                });
            }
            for i in 0..n {
                let e = unit_vector(domain, n, i);
                if alg.mul(u, &e) != e || alg.mul(&e, u) != e {
                    return Err(AlgebraError::NotUnity(i));
                }
            }
        }
        Ok(alg)
    }

    /// Builds the table from a closure returning the product of two basis vectors.
    pub fn from_products(
        domain: &ScalarDomain,
        parity: Vec<u8>,
        labels: Vec<String>,
        unity: Option<Vector>,
        mut product: impl FnMut(usize, usize) -> Vector,
    ) -> Result<Self> {
        let n = parity.len();
        let mut constants = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j);
                if v.len() != n {
                    return Err(AlgebraError::DimensionMismatch {
                        expected: n,
                        got: v.len(),
                    });
                }
                constants.extend(v);
            }
        }
        Self::new(domain, parity, constants, unity, labels)
    }

    /// The zero-dimensional algebra, neutral for [`direct_product`].
    pub fn zero_algebra(domain: &ScalarDomain) -> Self {
        SuperAlgebra {
            domain: domain.clone(),
            parity: Vec::new(),
            constants: Vec::new(),
            unity: Some(Vec::new()),
            labels: Vec::new(),
        }
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unity(&self) -> Option<&Vector> {
        self.unity.as_ref()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.constants[(i * n + j) * n + k]
    }

    /// `e_i e_j` as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim();
        &self.constants[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == 0).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == 1).collect()
    }

    pub fn even_subspace(&self) -> Subspace {
        Subspace::coordinate(&self.domain, self.dim(), &self.even_indices())
    }

    pub fn odd_subspace(&self) -> Subspace {
        Subspace::coordinate(&self.domain, self.dim(), &self.odd_indices())
    }

    /// Parity of a nonzero vector, if it is homogeneous.
    pub fn vector_parity(&self, v: &[Scalar]) -> Option<u8> {
        let mut found = None;
        for (x, &p) in v.iter().zip(&self.parity) {
            if !x.is_zero() {
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        found
    }

    /// Bilinear product; assumes vectors of the right length and domain.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim();
        let mut out = zero_vector(&self.domain, n);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                add_scaled(&mut out, &ab, self.basis_product(i, j));
            }
        }
        out
    }

    /// Checked product of two coordinate vectors.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        for v in [x, y] {
            if v.len() != self.dim() {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim(),
                    got: v.len(),
                });
            }
            if let Some(bad) = v.iter().find(|s| s.domain() != &self.domain) {
                return Err(AlgebraError::DomainMismatch(
                    self.domain.to_string(),
                    bad.domain().to_string(),
                ));
            }
        }
        Ok(self.mul(x, y))
    }

    /// Matrix of `y -> e_i y`.
    pub fn left_operator(&self, i: usize) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.basis_product(i, j).to_vec()).collect();
        Matrix::from_columns(&self.domain, n, &cols)
    }

    /// Matrix of `y -> y e_i`.
    pub fn right_operator(&self, i: usize) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.basis_product(j, i).to_vec()).collect();
        Matrix::from_columns(&self.domain, n, &cols)
    }

    /// First basis pair violating `e_i e_j = (-1)^{|i||j|} e_j e_i`.
    pub fn supercommutativity_failure(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let s = self.domain.from_i64(sign(self.parity[i] * self.parity[j]));
                let lhs = self.basis_product(i, j);
                let rhs = self.basis_product(j, i);
                if lhs.iter().zip(rhs).any(|(a, b)| a != &(&s * b)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_supercommutative(&self) -> bool {
        self.supercommutativity_failure().is_none()
    }

    /// Checks, for every basis triple `(x, y, z)`,
    ///
    /// `(-1)^{|x||z|}[L_{xy}, L_z] + (-1)^{|y||x|}[L_{yz}, L_x] + (-1)^{|z||y|}[L_{zx}, L_y] = 0`
    ///
    /// with the super bracket `[A, B] = AB - (-1)^{|A||B|} BA`.
    pub fn check_jordan(&self) -> std::result::Result<(), JordanViolation> {
        let n = self.dim();
        let ops: Vec<Matrix> = (0..n).map(|i| self.left_operator(i)).collect();
        // products[k * n + z] = L_k L_z
        let mut products = Vec::with_capacity(n * n);
        for k in 0..n {
            for z in 0..n {
                products.push(ops[k].mul(&ops[z]));
            }
        }
        let p = &self.parity;
        let zero = Matrix::zeros(&self.domain, n, n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut residual = zero.clone();
                    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
                        // term (-1)^{|a||c|} [L_{ab}, L_c]
                        let outer = self.domain.from_i64(sign(p[a] * p[c]));
                        let swap = sign((p[a] + p[b]) * p[c]);
                        for (k, coeff) in self.basis_product(a, b).iter().enumerate() {
                            if coeff.is_zero() {
                                continue;
                            }
                            let f = &outer * coeff;
                            let lk_lc = &products[k * n + c];
                            let lc_lk = &products[c * n + k];
                            let bracket = if swap == 1 {
                                lk_lc.sub(lc_lk)
                            } else {
                                lk_lc.add(lc_lk)
                            };
                            residual = residual.add(&bracket.scale(&f));
                        }
                    }
                    if !residual.is_zero() {
                        return Err(JordanViolation {
                            triple: (x, y, z),
                            residual,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Supercommutative and satisfying the super Jordan identity.
    pub fn is_jordan_super(&self) -> bool {
        self.is_supercommutative() && self.check_jordan().is_ok()
    }

    /// Smallest two-sided ideal containing the given vectors.
    pub fn ideal_closure(&self, generators: &[Vector]) -> Subspace {
        let n = self.dim();
        let left: Vec<Matrix> = (0..n).map(|i| self.left_operator(i)).collect();
        let right: Vec<Matrix> = (0..n).map(|i| self.right_operator(i)).collect();
        let ops: Vec<Matrix> = left.into_iter().chain(right).collect();
        spin(&self.domain, n, &ops, generators)
    }

    /// Whether the subspace is closed under multiplication by every basis element.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let n = self.dim();
        s.basis().iter().all(|v| {
            (0..n).all(|i| {
                let e = unit_vector(&self.domain, n, i);
                s.contains(&self.mul(&e, v)) && s.contains(&self.mul(v, &e))
            })
        })
    }

    /// Span of all products `x y` with `x` in `a` and `y` in `b`.
    pub fn product_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut s = Subspace::zero(&self.domain, self.dim());
        for x in a.basis() {
            for y in b.basis() {
                s.insert(&self.mul(x, y));
            }
        }
        s
    }

    fn has_zero_product(&self) -> bool {
        self.constants.iter().all(Scalar::is_zero)
    }

    /// Simplicity with a certificate.
    ///
    /// Over a prime field the ideal lattice is probed with Norton's
    /// irreducibility test applied to the multiplication algebra (generated by
    /// all left and right multiplications): for a singular element `t` of that
    /// algebra, every nonzero vector of `ker t` must generate the whole algebra
    /// as an ideal, and every nonzero vector of `ker t^T` must generate the whole
    /// dual module. Both kernels are enumerated up to scalars. When no singular
    /// element with a small kernel turns up, all projective points are
    /// enumerated instead.
    ///
    /// Over the rationals the table is reduced modulo `options.prime`; a simple
    /// reduction certifies simplicity, anything else is inconclusive.
    pub fn is_simple(&self, options: &SimplicityOptions) -> Result<Simplicity> {
        match self.domain {
            ScalarDomain::Rational => {
                let reduced = self.reduce_mod(options.prime)?;
                Ok(match reduced.is_simple(options)? {
                    Simplicity::Simple { evidence } => Simplicity::Simple {
                        evidence: format!("simple mod {} ({evidence})", options.prime),
                    },
                    Simplicity::NotSimple { ideal } => Simplicity::Inconclusive {
                        reason: format!(
                            "reduction mod {} has an ideal of dimension {}",
                            options.prime,
                            ideal.dim()
                        ),
                    },
                    other => Simplicity::Inconclusive {
                        reason: format!("reduction mod {} is not simple: {other:?}", options.prime),
                    },
                })
            }
            ScalarDomain::Prime(p) => {
                if self.dim() == 0 || self.has_zero_product() {
                    return Ok(Simplicity::ZeroProduct);
                }
                self.norton_simplicity(p, options)
            }
            ScalarDomain::Quadratic(_) => Err(AlgebraError::Unsupported(
                "a prime field or the rationals".into(),
            )),
        }
    }

    fn norton_simplicity(&self, p: u64, options: &SimplicityOptions) -> Result<Simplicity> {
        let n = self.dim();
        let dom = &self.domain;
        let gens: Vec<Matrix> = (0..n)
            .map(|i| self.left_operator(i))
            .chain((0..n).map(|i| self.right_operator(i)))
            .collect();
        let dual: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let random_combination = |rng: &mut ChaCha8Rng| {
            let mut m = Matrix::zeros(dom, n, n);
            for g in &gens {
                m = m.add(&g.scale(&dom.random(rng)));
            }
            m
        };
        let identity = Matrix::identity(dom, n);
        let mut best: Option<(usize, Matrix)> = None;
        for _ in 0..40 {
            let a = random_combination(&mut rng);
            let b = random_combination(&mut rng);
            let x = a.add(&b.mul(&a)).add(&random_combination(&mut rng).mul(&b));
            for lambda in 0..p.min(128) {
                let shift: i64 = if p <= 128 {
                    lambda as i64
                } else {
                    rng.gen_range(0..p) as i64
                };
                let theta = x.sub(&identity.scale(&dom.from_i64(shift)));
                let nullity = n - theta.rank();
                if nullity > 0 && best.as_ref().is_none_or(|(k, _)| nullity < *k) {
                    best = Some((nullity, theta));
                }
            }
            if matches!(best, Some((1, _))) {
                break;
            }
        }
        let Some((nullity, theta)) = best else {
            return self.exhaustive_simplicity(options.budget);
        };
        let points = projective_count(p, nullity);
        if points.saturating_mul(2) > options.budget {
            return self.exhaustive_simplicity(options.budget);
        }
        let kernel = theta.kernel();
        for v in projective_points(dom, &kernel) {
            let ideal = spin(dom, n, &gens, &[v]);
            if !ideal.is_full() {
                return Ok(Simplicity::NotSimple { ideal });
            }
        }
        let dual_kernel = theta.transpose().kernel();
        for w in projective_points(dom, &dual_kernel) {
            let sub = spin(dom, n, &dual, &[w]);
            if !sub.is_full() {
                return Ok(Simplicity::NotSimple {
                    ideal: sub.annihilator(),
                });
            }
        }
        Ok(Simplicity::Simple {
            evidence: format!(
                "Norton test: {} kernel vectors and {} dual kernel vectors all generate",
                points,
                projective_count(p, dual_kernel.len())
            ),
        })
    }

    /// Simplicity by enumerating every nonzero vector up to scalars and
    /// computing the ideal it generates. Prime fields only.
    pub fn exhaustive_simplicity(&self, budget: u128) -> Result<Simplicity> {
        let ScalarDomain::Prime(p) = self.domain else {
            return Err(AlgebraError::Unsupported("a prime field".into()));
        };
        if self.dim() == 0 || self.has_zero_product() {
            return Ok(Simplicity::ZeroProduct);
        }
        let n = self.dim();
        let points = projective_count(p, n);
        if points > budget {
            return Err(AlgebraError::BudgetExceeded {
                needed: points,
                cap: budget,
            });
        }
        let gens: Vec<Matrix> = (0..n)
            .map(|i| self.left_operator(i))
            .chain((0..n).map(|i| self.right_operator(i)))
            .collect();
        let basis: Vec<Vector> = (0..n).map(|i| unit_vector(&self.domain, n, i)).collect();
        for v in projective_points(&self.domain, &basis) {
            let ideal = spin(&self.domain, n, &gens, &[v]);
            if !ideal.is_full() {
                return Ok(Simplicity::NotSimple { ideal });
            }
        }
        Ok(Simplicity::Simple {
            evidence: format!("all {points} projective points generate"),
        })
    }

    /// Reduction of a rational table modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<SuperAlgebra> {
        if self.domain != ScalarDomain::Rational {
            return Err(AlgebraError::Unsupported("an algebra over the rationals".into()));
        }
        let target = ScalarDomain::prime(p)?;
        let reduce = |x: &Scalar| target.reduce(x);
        let constants = self.constants.iter().map(reduce).collect::<std::result::Result<_, _>>()?;
        let unity = match &self.unity {
            Some(u) => Some(u.iter().map(reduce).collect::<std::result::Result<_, _>>()?),
            None => None,
        };
        SuperAlgebra::new(
            &target,
            self.parity.clone(),
            constants,
            unity,
            self.labels.clone(),
        )
    }

    /// The subalgebra spanned by the given homogeneous vectors, in that basis.
    pub fn subalgebra(&self, basis: &[Vector], labels: Vec<String>) -> Result<SuperAlgebra> {
        let solver = BasisSolver::new(&self.domain, basis).ok_or(AlgebraError::DependentBasis)?;
        let parity = basis
            .iter()
            .map(|b| {
                self.vector_parity(b)
                    .ok_or(AlgebraError::Unsupported("homogeneous basis vectors".into()))
            })
            .collect::<Result<Vec<u8>>>()?;
        let unity = self.unity.as_ref().and_then(|u| solver.solve(u));
        SuperAlgebra::from_products(&self.domain, parity, labels, unity, |i, j| {
            solver
                .solve(&self.mul(&basis[i], &basis[j]))
                .unwrap_or_default()
        })
        .map_err(|e| match e {
            AlgebraError::DimensionMismatch { .. } => {
                let m = basis.len();
                let (i, j) = (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .find(|&(i, j)| solver.solve(&self.mul(&basis[i], &basis[j])).is_none())
                    .expect("some product leaves the span");
                AlgebraError::NotClosed { i, j }
            }
            other => other,
        })
    }

    /// Subalgebra on the parity-zero basis vectors.
    pub fn even_part(&self) -> SuperAlgebra {
        let idx = self.even_indices();
        let m = idx.len();
        let mut constants = Vec::with_capacity(m * m * m);
        for &i in &idx {
            for &j in &idx {
                for &k in &idx {
                    constants.push(self.constant(i, j, k).clone());
                }
            }
        }
        let unity = self
            .unity
            .as_ref()
            .map(|u| idx.iter().map(|&i| u[i].clone()).collect());
        SuperAlgebra {
            domain: self.domain.clone(),
            parity: vec![0; m],
            constants,
            unity,
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// Number of `x` with `x x = x`, scanning the even part or the whole space.
    pub fn idempotent_census(&self, restrict_even: bool, cap: u128) -> Result<u128> {
        let ScalarDomain::Prime(p) = self.domain else {
            return Err(AlgebraError::Unsupported("a prime field".into()));
        };
        let scanned = if restrict_even {
            self.even_part()
        } else {
            self.clone()
        };
        let m = scanned.dim();
        let total = (p as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if total > cap {
            return Err(AlgebraError::BudgetExceeded {
                needed: total,
                cap,
            });
        }
        let elements = self.domain.elements().expect("finite field");
        let mut digits = vec![0usize; m];
        let mut count = 0u128;
        loop {
            let x: Vector = digits.iter().map(|&d| elements[d].clone()).collect();
            if scanned.mul(&x, &x) == x {
                count += 1;
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == m {
                    return Ok(count);
                }
                digits[pos] += 1;
                if digits[pos] < elements.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Smallest subspace containing `generators` and stable under every operator.
pub fn spin(domain: &ScalarDomain, n: usize, ops: &[Matrix], generators: &[Vector]) -> Subspace {
    let mut space = Subspace::zero(domain, n);
    let mut queue: Vec<Vector> = Vec::new();
    for g in generators {
        if space.insert(g) {
            queue.push(g.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if space.is_full() {
            break;
        }
        for op in ops {
            let w = op.apply(&v);
            if !is_zero_vector(&w) && space.insert(&w) {
                queue.push(w);
            }
        }
    }
    space
}

fn projective_count(q: u64, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let q = q as u128;
    (q.pow(k as u32) - 1) / (q - 1)
}

/// One representative per line in the span of `basis`: coefficient vectors
/// whose first nonzero entry is 1.
fn projective_points<'a>(
    domain: &'a ScalarDomain,
    basis: &'a [Vector],
) -> impl Iterator<Item = Vector> + 'a {
    let elements = domain.elements().expect("finite field");
    let k = basis.len();
    let n = basis.first().map_or(0, Vec::len);
    (0..k).flat_map(move |lead| {
        let elements = elements.clone();
        let tail = k - lead - 1;
        let q = elements.len();
        let total = q.pow(tail as u32);
        (0..total).map(move |mut code| {
            let mut v = basis[lead].clone();
            for b in &basis[lead + 1..] {
                let c = &elements[code % q];
                code /= q;
                add_scaled(&mut v, c, b);
            }
            debug_assert_eq!(v.len(), n);
            v
        })
    })
}

/// Block-diagonal product `A x B`; unital iff both factors are.
pub fn direct_product(a: &SuperAlgebra, b: &SuperAlgebra) -> Result<SuperAlgebra> {
    if a.domain != b.domain {
        return Err(AlgebraError::DomainMismatch(
            a.domain.to_string(),
            b.domain.to_string(),
        ));
    }
    if b.dim() == 0 {
        return Ok(a.clone());
    }
    if a.dim() == 0 {
        return Ok(b.clone());
    }
    let (na, nb) = (a.dim(), b.dim());
    let n = na + nb;
    let dom = &a.domain;
    let parity: Vec<u8> = a.parity.iter().chain(&b.parity).copied().collect();
    let labels: Vec<String> = a
        .labels
        .iter()
        .map(|l| format!("({l},0)"))
        .chain(b.labels.iter().map(|l| format!("(0,{l})")))
        .collect();
    let unity = match (&a.unity, &b.unity) {
        (Some(ua), Some(ub)) => Some(ua.iter().chain(ub).cloned().collect()),
        _ => None,
    };
    SuperAlgebra::from_products(dom, parity, labels, unity, |i, j| {
        let mut v = zero_vector(dom, n);
        if i < na && j < na {
            v[..na].clone_from_slice(a.basis_product(i, j));
        } else if i >= na && j >= na {
            v[na..].clone_from_slice(b.basis_product(i - na, j - na));
        }
        v
    })
}

/// The same table read over an extension domain.
pub fn scalar_extension(a: &SuperAlgebra, target: &ScalarDomain) -> Result<SuperAlgebra> {
    if !target.extends(&a.domain) {
        return Err(ScalarError::NoEmbedding(a.domain.to_string(), target.to_string()).into());
    }
    let embed = |x: &Scalar| target.embed(x).expect("checked embedding");
    Ok(SuperAlgebra {
        domain: target.clone(),
        parity: a.parity.clone(),
        constants: a.constants.iter().map(embed).collect(),
        unity: a.unity.as_ref().map(|u| u.iter().map(embed).collect()),
        labels: a.labels.clone(),
    })
}

/// Restriction of scalars from `base(w)` to `base`: basis `e_0.., w e_0..`.
pub fn restrict_scalars(a: &SuperAlgebra) -> Result<SuperAlgebra> {
    let quad = a
        .domain
        .as_quadratic()
        .ok_or_else(|| ScalarError::NotQuadratic(a.domain.to_string()))?;
    let base = quad.base().clone();
    let d = quad.d().clone();
    let n = a.dim();
    let parts = |x: &Scalar| {
        let (re, im) = x.components().expect("quadratic scalar");
        (re.clone(), im.clone())
    };
    let parity: Vec<u8> = a.parity.iter().chain(&a.parity).copied().collect();
    let labels: Vec<String> = a
        .labels
        .iter()
        .cloned()
        .chain(a.labels.iter().map(|l| format!("w*{l}")))
        .collect();
    let unity = a.unity.as_ref().map(|u| {
        let (re, im): (Vec<Scalar>, Vec<Scalar>) = u.iter().map(parts).unzip();
        re.into_iter().chain(im).collect()
    });
    SuperAlgebra::from_products(&base, parity, labels, unity, |i, j| {
        let (ii, iw) = (i % n, i >= n);
        let (jj, jw) = (j % n, j >= n);
        let mut v = zero_vector(&base, 2 * n);
        for (k, c) in a.basis_product(ii, jj).iter().enumerate() {
            let (p, q) = parts(c);
            // (p + q w) times w^(number of w factors)
            let (re, im) = match (iw, jw) {
                (false, false) => (p, q),
                (true, false) | (false, true) => (&d * &q, p),
                (true, true) => (&d * &p, &d * &q),
            };
            v[k] = re;
            v[n + k] = im;
        }
        v
    })
}
