//! Twisted forms by Galois descent along a quadratic extension `K = F(w)`,
//! `w² = d`: the fixed points of `t ⊗ σ` on `A ⊗ K` for an involutive
//! automorphism `t`, with split checks, equivalence witnesses between twists,
//! invariant-based separation and rigidity witnesses.

use thiserror::Error;

use crate::algebra::{
    restrict_scalars, scalar_extension, AlgebraError, Simplicity, SimplicityOptions, SuperAlgebra,
};
use crate::catalog::{self, describe, k10};
use crate::linalg::{scale, zero_vector, BasisSolver, Matrix, Subspace, Vector};
use crate::morphisms::{check_isomorphism, derivations, is_automorphism, tau_auto, LinearMap, MorphismFailure};
use crate::scalars::{is_square, sqrt, Scalar, ScalarDomain, ScalarError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DescentError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("twisting map is not an involutive automorphism: {0}")]
    BadInvolution(String),
    #[error("{0} is a square, so the extension is split")]
    Split(String),
    #[error("{0} is not a square, so the extension is a field")]
    NotSplit(String),
    #[error("fixed space has dimension {got}, expected {expected}")]
    FixedDimension { expected: usize, got: usize },
    #[error("fixed space is not closed under multiplication")]
    NotClosed,
    #[error("computed even fixed part differs from the expected basis: {0}")]
    EvenMismatch(String),
    #[error("witness verification failed: {0}")]
    WitnessFailure(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, DescentError>;

/// `K = base[w]/(w² - d)`, a field unless `d` is a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticEtale {
    base: ScalarDomain,
    d: Scalar,
    split: bool,
    domain: ScalarDomain,
}

impl QuadraticEtale {
    pub fn new(base: &ScalarDomain, d: Scalar) -> Result<Self> {
        let split = is_square(base, &d)?;
        let domain = ScalarDomain::quadratic(base, d.clone())?;
        Ok(QuadraticEtale {
            base: base.clone(),
            d,
            split,
            domain,
        })
    }

    pub fn base(&self) -> &ScalarDomain {
        &self.base
    }

    pub fn d(&self) -> &Scalar {
        &self.d
    }

    pub fn is_split(&self) -> bool {
        self.split
    }

    /// The extension as a scalar domain.
    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }
}

/// An algebra over the base with an involutive automorphism and an extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentDatum {
    algebra: SuperAlgebra,
    involution: LinearMap,
    etale: QuadraticEtale,
}

impl DescentDatum {
    pub fn new(algebra: &SuperAlgebra, involution: &LinearMap, etale: &QuadraticEtale) -> Result<Self> {
        if algebra.domain() != etale.base() {
            return Err(DescentError::Unsupported(format!(
                "algebra over {} cannot be twisted along an extension of {}",
                algebra.domain(),
                etale.base()
            )));
        }
        if !is_automorphism(algebra, involution) {
            return Err(DescentError::BadInvolution("not an automorphism".into()));
        }
        if !involution.compose(involution).matrix().is_identity() {
            return Err(DescentError::BadInvolution("t∘t is not the identity".into()));
        }
        Ok(DescentDatum {
            algebra: algebra.clone(),
            involution: involution.clone(),
            etale: etale.clone(),
        })
    }

    pub fn algebra(&self) -> &SuperAlgebra {
        &self.algebra
    }

    pub fn involution(&self) -> &LinearMap {
        &self.involution
    }

    pub fn etale(&self) -> &QuadraticEtale {
        &self.etale
    }
}

/// The fixed algebra of `t ⊗ σ`, with its basis written in `A ⊗ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedForm {
    pub algebra: SuperAlgebra,
    /// Basis vectors `P + Q w` as base coordinates `(P, Q)` of length `2n`.
    pub fixed: Vec<Vector>,
    /// The same vectors with entries in `K`.
    pub embedding: Vec<Vector>,
    pub datum: DescentDatum,
}

fn twisted_label(labels: &[String], v: &[Scalar]) -> String {
    let n = labels.len();
    let (p, q) = v.split_at(n);
    let p_zero = p.iter().all(Scalar::is_zero);
    let q_zero = q.iter().all(Scalar::is_zero);
    match (p_zero, q_zero) {
        (_, true) => describe(labels, p),
        (true, false) => format!("w*({})", describe(labels, q)),
        (false, false) => format!("{} + w*({})", describe(labels, p), describe(labels, q)),
    }
}

/// Fixed points of `P + Qw ↦ t(P) - t(Q)w`, i.e. `t(P) = P` and `t(Q) = -Q`,
/// solved as a kernel over the base. The basis lists even vectors first, each
/// block in reduced echelon form.
pub fn twist(datum: &DescentDatum) -> Result<TwistedForm> {
    let a = &datum.algebra;
    let base = a.domain();
    let n = a.dim();
    let t = datum.involution.matrix();
    let mut op = Matrix::zeros(base, 2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            op.set(r, c, t.get(r, c).clone());
            op.set(n + r, n + c, -t.get(r, c));
        }
    }
    let fixed_space = Subspace::span(base, 2 * n, op.sub(&Matrix::identity(base, 2 * n)).kernel());
    let parity_idx = |p: u8| -> Vec<usize> {
        (0..2 * n).filter(|&i| a.parity()[i % n] == p).collect()
    };
    let even = fixed_space.intersection(&Subspace::coordinate(base, 2 * n, &parity_idx(0)));
    let odd = fixed_space.intersection(&Subspace::coordinate(base, 2 * n, &parity_idx(1)));
    let fixed: Vec<Vector> = even.basis().iter().chain(odd.basis()).cloned().collect();
    if fixed.len() != n || fixed_space.dim() != n {
        return Err(DescentError::FixedDimension {
            expected: n,
            got: fixed_space.dim(),
        });
    }
    let k = datum.etale.domain();
    let big = restrict_scalars(&scalar_extension(a, k)?)?;
    let labels: Vec<String> = fixed.iter().map(|v| twisted_label(a.labels(), v)).collect();
    let algebra = big.subalgebra(&fixed, labels).map_err(|e| match e {
        AlgebraError::NotClosed { .. } => DescentError::NotClosed,
        other => other.into(),
    })?;
    let embedding = fixed
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| k.pair(v[i].clone(), v[n + i].clone()))
                .collect::<std::result::Result<Vector, _>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(TwistedForm {
        algebra,
        fixed,
        embedding,
        datum: datum.clone(),
    })
}

/// Twists K10 by `τ` along `F(√d)`.
pub fn twist_k10(base: &ScalarDomain, d: &Scalar) -> Result<TwistedForm> {
    let a = catalog::kac_k10(base)?;
    let etale = QuadraticEtale::new(base, d.clone())?;
    twist(&DescentDatum::new(&a, &tau_auto(base), &etale)?)
}

/// Comparison of the computed fixed basis of the K10 twist with the basis
/// `1⊗1, (a⊗a)⊗1, (u⊗u)⊗w, (v⊗v)⊗w, (u⊗v-v⊗u)⊗1, (u⊗v+v⊗u)⊗w` for the even
/// part and `(a⊗x+x⊗a)⊗1, (a⊗x+x⊗a)⊗w` (x = u, v) for the odd part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K10BasisReport {
    pub form: TwistedForm,
    pub even: Vec<String>,
    pub odd: Vec<String>,
    pub even_matches: bool,
    /// Reference odd vectors that are not fixed by `τ ⊗ σ`.
    pub odd_not_fixed: Vec<String>,
    /// Reference odd vectors with the sign corrected to `(x⊗a-a⊗x)⊗w`.
    pub odd_corrected_fixed: bool,
}

impl K10BasisReport {
    pub fn odd_discrepancy(&self) -> bool {
        !self.odd_not_fixed.is_empty()
    }
}

fn doubled(domain: &ScalarDomain, p: &[(usize, i64)], q: &[(usize, i64)]) -> Vector {
    let mut v = zero_vector(domain, 20);
    for &(i, c) in p {
        v[i] = domain.from_i64(c);
    }
    for &(i, c) in q {
        v[10 + i] = domain.from_i64(c);
    }
    v
}

pub fn k10_twisted_basis(base: &ScalarDomain, d: &Scalar) -> Result<K10BasisReport> {
    if is_square(base, d)? {
        return Err(DescentError::Split(d.to_string()));
    }
    let form = twist_k10(base, d)?;
    use k10::*;
    let expected_even = [
        doubled(base, &[(ONE, 1)], &[]),
        doubled(base, &[(AA, 1)], &[]),
        doubled(base, &[], &[(UU, 1)]),
        doubled(base, &[], &[(VV, 1)]),
        doubled(base, &[(UV, 1), (VU, -1)], &[]),
        doubled(base, &[], &[(UV, 1), (VU, 1)]),
    ];
    let fixed_space = Subspace::span(base, 20, form.fixed.clone());
    let n_even = form.algebra.even_indices().len();
    let computed_even = Subspace::span(base, 20, form.fixed[..n_even].to_vec());
    let expected_span = Subspace::span(base, 20, expected_even.to_vec());
    let even_matches = computed_even == expected_span && expected_span.dim() == 6;
    if !even_matches {
        return Err(DescentError::EvenMismatch(
            form.algebra.labels()[..n_even].join(", "),
        ));
    }
    let labels = catalog::k10_labels();
    let mut odd_not_fixed = Vec::new();
    let mut corrected = Vec::new();
    for (xa, ax) in [(UA, AU), (VA, AV)] {
        let sym_one = doubled(base, &[(ax, 1), (xa, 1)], &[]);
        let sym_w = doubled(base, &[], &[(ax, 1), (xa, 1)]);
        for v in [sym_one.clone(), sym_w] {
            if !fixed_space.contains(&v) {
                odd_not_fixed.push(twisted_label(&labels, &v));
            }
        }
        corrected.push(sym_one);
        corrected.push(doubled(base, &[], &[(xa, 1), (ax, -1)]));
    }
    let odd_corrected_fixed = corrected.iter().all(|v| fixed_space.contains(v))
        && Subspace::span(base, 20, corrected).dim() == 4;
    Ok(K10BasisReport {
        even: form.algebra.labels()[..n_even].to_vec(),
        odd: form.algebra.labels()[n_even..].to_vec(),
        even_matches,
        odd_not_fixed,
        odd_corrected_fixed,
        form,
    })
}

/// A verified isomorphism `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub source: SuperAlgebra,
    pub target: SuperAlgebra,
    pub map: LinearMap,
}

fn verified(source: SuperAlgebra, target: SuperAlgebra, map: LinearMap) -> Result<Witness> {
    check_isomorphism(&source, &target, &map)
        .map_err(|e: MorphismFailure| DescentError::WitnessFailure(e.to_string()))?;
    Ok(Witness { source, target, map })
}

/// Shows that the twist becomes the original algebra after extending scalars.
/// For a field extension the witness is the `K`-linear map sending the fixed
/// basis to its embedding in `A ⊗ K`; for a square `d = s²` it is the
/// base-linear map `P + Qw ↦ P + sQ` into `A` itself.
pub fn split_check(form: &TwistedForm) -> Result<Witness> {
    let datum = &form.datum;
    let a = &datum.algebra;
    let n = a.dim();
    let base = a.domain();
    if datum.etale.is_split() {
        let s = sqrt(base, datum.etale.d())?.expect("square has a root");
        let columns: Vec<Vector> = form
            .fixed
            .iter()
            .map(|v| (0..n).map(|i| &v[i] + &(&s * &v[n + i])).collect())
            .collect();
        let map = LinearMap::even(Matrix::from_columns(base, n, &columns));
        return verified(form.algebra.clone(), a.clone(), map);
    }
    let k = datum.etale.domain();
    let map = LinearMap::even(Matrix::from_columns(k, n, &form.embedding));
    let source = scalar_extension(&form.algebra, k)?;
    let target = scalar_extension(a, k)?;
    if map.matrix().rank() != n {
        return Err(DescentError::WitnessFailure(format!(
            "embedded basis has K-rank {} instead of {n}",
            map.matrix().rank()
        )));
    }
    verified(source, target, map)
}

/// Outcome of comparing twists along `F(√d)` and `F(√d')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    /// `s` with `d = s² d'`, when it exists.
    pub ratio_root: Option<Scalar>,
    pub witness: Option<Witness>,
}

impl Equivalence {
    pub fn equivalent(&self) -> bool {
        self.witness.is_some()
    }
}

/// Twists of the same algebra along two nontrivial extensions. When `d/d'` is
/// a square `s²` the map `P + Qw ↦ P + sQw'` is an isomorphism of the twists;
/// otherwise the extensions differ and `None` is returned as witness.
pub fn forms_equivalent(
    algebra: &SuperAlgebra,
    involution: &LinearMap,
    d: &Scalar,
    d_prime: &Scalar,
) -> Result<Equivalence> {
    let base = algebra.domain();
    for x in [d, d_prime] {
        if is_square(base, x)? {
            return Err(DescentError::Split(x.to_string()));
        }
    }
    let ratio = d.try_div(d_prime)?;
    let Some(s) = sqrt(base, &ratio)? else {
        return Ok(Equivalence {
            ratio_root: None,
            witness: None,
        });
    };
    let first = twist(&DescentDatum::new(algebra, involution, &QuadraticEtale::new(base, d.clone())?)?)?;
    let second = twist(&DescentDatum::new(
        algebra,
        involution,
        &QuadraticEtale::new(base, d_prime.clone())?,
    )?)?;
    let n = algebra.dim();
    let solver = BasisSolver::new(base, &second.fixed).expect("fixed basis is independent");
    let mut columns = Vec::with_capacity(n);
    for v in &first.fixed {
        let mut image = v.clone();
        for x in &mut image[n..] {
            *x = &s * &*x;
        }
        let coords = solver.solve(&image).ok_or_else(|| {
            DescentError::WitnessFailure("image of a fixed vector is not fixed".into())
        })?;
        columns.push(coords);
    }
    let map = LinearMap::even(Matrix::from_columns(base, n, &columns));
    let witness = verified(first.algebra, second.algebra, map)?;
    Ok(Equivalence {
        ratio_root: Some(s),
        witness: Some(witness),
    })
}

/// One row of the invariant table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub name: &'static str,
    pub left: String,
    pub right: String,
}

impl Invariant {
    pub fn differs(&self) -> bool {
        self.left != self.right
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub invariants: Vec<Invariant>,
}

impl SeparationReport {
    /// Names of invariants that differ; empty means inconclusive.
    pub fn differing(&self) -> Vec<&'static str> {
        self.invariants
            .iter()
            .filter(|i| i.differs())
            .map(|i| i.name)
            .collect()
    }

    pub fn separated(&self) -> bool {
        !self.differing().is_empty()
    }
}

fn simplicity_text(a: &SuperAlgebra, options: &SimplicityOptions) -> String {
    match a.is_simple(options) {
        Ok(Simplicity::Simple { .. }) => "simple".into(),
        Ok(Simplicity::NotSimple { ideal }) => format!("proper ideal of dimension {}", ideal.dim()),
        Ok(Simplicity::ZeroProduct) => "zero product".into(),
        Ok(Simplicity::Inconclusive { .. }) => "inconclusive".into(),
        Err(e) => format!("unavailable ({e})"),
    }
}

/// Computes isomorphism invariants of two algebras over a prime field: the
/// number of idempotents in the even part, dimensions of the even and odd
/// derivation spaces, and simplicity. Equal tables prove nothing.
pub fn separate_forms(
    a: &SuperAlgebra,
    b: &SuperAlgebra,
    options: &SimplicityOptions,
    census_cap: u128,
) -> Result<SeparationReport> {
    if a.domain() != b.domain() {
        return Err(AlgebraError::DomainMismatch(a.domain().to_string(), b.domain().to_string()).into());
    }
    if !matches!(a.domain(), ScalarDomain::Prime(_)) {
        return Err(DescentError::Unsupported("separation needs a prime field".into()));
    }
    let mut invariants = Vec::new();
    let mut row = |name: &'static str, f: &dyn Fn(&SuperAlgebra) -> String| {
        invariants.push(Invariant {
            name,
            left: f(a),
            right: f(b),
        });
    };
    row("dimension", &|x| x.dim().to_string());
    row("even dimension", &|x| x.even_indices().len().to_string());
    row("even idempotents", &|x| match x.idempotent_census(true, census_cap) {
        Ok(c) => c.to_string(),
        Err(e) => format!("unavailable ({e})"),
    });
    row("even derivations", &|x| derivations(x, 0).len().to_string());
    row("odd derivations", &|x| derivations(x, 1).len().to_string());
    row("simplicity", &|x| simplicity_text(x, options));
    Ok(SeparationReport { invariants })
}

/// The involutions of K3 and J(W) used for rigidity: the identity and
/// `-1` on the odd part.
pub fn rigid_involutions(domain: &ScalarDomain) -> Vec<LinearMap> {
    let mut minus = Matrix::identity(domain, 3);
    minus.set(1, 1, -domain.one());
    minus.set(2, 2, -domain.one());
    vec![LinearMap::identity(domain, 3), LinearMap::even(minus)]
}

/// An isomorphism from a 3-dimensional algebra with basis `(e, u, v)`,
/// `e² = e` and `uv = e`, onto a twisted form of it: the even basis vector is
/// rescaled to an idempotent `ε` and the odd pair to a pair with product `ε`.
pub fn rigidity_witness(form: &TwistedForm) -> Result<Witness> {
    let reference = &form.datum.algebra;
    let f = &form.algebra;
    let base = f.domain();
    if f.dim() != 3 || f.parity() != [0, 1, 1] {
        return Err(DescentError::Unsupported(
            "rigidity witnesses are built for K3 and J(W)".into(),
        ));
    }
    let unexpected = |what: &str| DescentError::WitnessFailure(what.to_string());
    let e0 = crate::linalg::unit_vector(base, 3, 0);
    let sq = f.mul(&e0, &e0);
    let lambda = sq[0].clone();
    if lambda.is_zero() || sq[1..].iter().any(|x| !x.is_zero()) {
        return Err(unexpected("even basis vector is not a multiple of an idempotent"));
    }
    let eps = scale(&e0, &lambda.inv()?);
    let o1 = crate::linalg::unit_vector(base, 3, 1);
    let o2 = crate::linalg::unit_vector(base, 3, 2);
    let p = f.mul(&o1, &o2);
    // p = c ε with ε = e0 / λ
    let c = &p[0] * &lambda;
    if c.is_zero() {
        return Err(unexpected("odd basis vectors pair to zero"));
    }
    let b2 = scale(&o2, &c.inv()?);
    let map = LinearMap::even(Matrix::from_columns(base, 3, &[eps, o1, b2]));
    verified(reference.clone(), f.clone(), map)
}

/// For a twist of `B × B` by the factor swap: the isomorphism from `B ⊗ K`
/// (viewed over the base, basis `e_i, w e_i`) onto the twist, `z ↦ (z, σz)`.
pub fn product_twist_witness(form: &TwistedForm, factor: &SuperAlgebra) -> Result<Witness> {
    let k = form.datum.etale.domain();
    let base = form.datum.algebra.domain();
    let m = factor.dim();
    let n = 2 * m;
    if form.datum.algebra.dim() != n {
        return Err(DescentError::Unsupported("twist is not of a product with this factor".into()));
    }
    let source = restrict_scalars(&scalar_extension(factor, k)?)?;
    let solver = BasisSolver::new(base, &form.fixed).expect("fixed basis is independent");
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        // e_i ↦ (e_i, e_i) and w e_i ↦ (w e_i, -w e_i), as base coordinates (P, Q)
        let mut v = zero_vector(base, 2 * n);
        if j < m {
            v[j] = base.one();
            v[m + j] = base.one();
        } else {
            v[n + j - m] = base.one();
            v[n + j] = -base.one();
        }
        let coords = solver
            .solve(&v)
            .ok_or_else(|| DescentError::WitnessFailure("diagonal vector is not fixed".into()))?;
        columns.push(coords);
    }
    let map = LinearMap::even(Matrix::from_columns(base, n, &columns));
    verified(source, form.algebra.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn etale_flags_squares() {
        let q = ScalarDomain::rational();
        assert!(QuadraticEtale::new(&q, q.from_i64(4)).unwrap().is_split());
        assert!(!QuadraticEtale::new(&q, q.from_i64(-1)).unwrap().is_split());
        assert!(QuadraticEtale::new(&q, q.zero()).is_err());
    }

    #[test]
    fn non_involution_is_rejected() {
        let q = ScalarDomain::rational();
        let a = catalog::kac_k10(&q).unwrap();
        let etale = QuadraticEtale::new(&q, q.from_i64(-1)).unwrap();
        let f = crate::morphisms::Sl2::from_entries(&q, [[1, 1], [0, 1]]).unwrap();
        let phi = crate::morphisms::phi_auto(&f, &f);
        assert!(matches!(
            DescentDatum::new(&a, &phi, &etale),
            Err(DescentError::BadInvolution(_))
        ));
    }

    #[test]
    fn twisted_labels() {
        let labels: Vec<String> = vec!["x".into(), "y".into()];
        let q = ScalarDomain::rational();
        let v = vec![q.one(), q.zero(), q.zero(), q.from_i64(2)];
        assert_eq!(twisted_label(&labels, &v), "x + w*(2*y)");
    }
}
