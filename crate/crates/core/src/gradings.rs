//! Group gradings on superalgebras: verification, the two families on K3×K3
//! and K10, propagation of degrees from the odd part, coarsening,
//! classification with normalizing automorphisms, isomorphism witnesses, the
//! census of Z/2-gradings over small fields, and a refinement search used to
//! certify fine gradings.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::algebra::SuperAlgebra;
use crate::catalog::{self, describe, k10};
use crate::group::{AbelianGroup, GroupElement, GroupError, GroupHom, IntegerLattice};
use crate::linalg::{is_zero_vector, unit_vector, zero_vector, BasisSolver, Matrix, Subspace, Vector};
use crate::morphisms::{is_automorphism, k10_automorphism, psi_auto, LinearMap, Sl2};
use crate::scalars::{Scalar, ScalarDomain};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GradingError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("component of degree {degree} does not live in the algebra's ambient space")]
    Ambient { degree: String },
    #[error("components are not independent or do not span: dimensions add to {sum}, span has dimension {span}, algebra has dimension {dim}")]
    NotDirectSum { sum: usize, span: usize, dim: usize },
    #[error("A_{g} A_{h} is not contained in A_({g}+{h})")]
    ProductRule { g: String, h: String },
    #[error("component of degree {0} is not a sum of even and odd vectors")]
    NotSuper(String),
    #[error("{0} is not an element of order 2")]
    NotOrderTwo(String),
    #[error("conflicting degrees: {first} has degree {first_degree} but {second} has degree {second_degree}, and they are dependent")]
    Conflict {
        first: String,
        first_degree: String,
        second: String,
        second_degree: String,
    },
    #[error("products of the assigned vectors span only {0} dimensions")]
    NotGenerated(usize),
    #[error("homomorphism source {0} differs from the grading group {1}")]
    HomSource(String, String),
    #[error("gradings are only classified on K3×K3 and K10")]
    UnsupportedAlgebra,
    #[error("not a grading of the expected shape: {0}")]
    Unexpected(String),
    #[error("witness verification failed: {0}")]
    WitnessFailure(String),
    #[error("enumeration of {needed} elements exceeds the budget of {cap}")]
    Budget { needed: u128, cap: u128 },
    #[error("gradings by different groups: {0} and {1}")]
    GroupMismatch(String, String),
}

pub type Result<T> = std::result::Result<T, GradingError>;

/// A decomposition `A = sum_g A_g` stored as degree -> subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    group: AbelianGroup,
    components: BTreeMap<GroupElement, Subspace>,
}

impl Grading {
    /// Zero components are dropped; components with equal degrees are summed.
    pub fn new(group: &AbelianGroup, components: Vec<(GroupElement, Subspace)>) -> Self {
        let mut map: BTreeMap<GroupElement, Subspace> = BTreeMap::new();
        for (g, s) in components {
            if s.is_zero() {
                continue;
            }
            let entry = map.entry(g);
            match entry {
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get().sum(&s);
                    o.insert(sum);
                }
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(s);
                }
            }
        }
        Grading {
            group: group.clone(),
            components: map,
        }
    }

    /// Vectors with prescribed degrees; vectors of equal degree are spanned together.
    pub fn from_vectors(
        domain: &ScalarDomain,
        ambient: usize,
        group: &AbelianGroup,
        vectors: Vec<(Vector, GroupElement)>,
    ) -> Self {
        let mut by_degree: BTreeMap<GroupElement, Vec<Vector>> = BTreeMap::new();
        for (v, g) in vectors {
            by_degree.entry(g).or_default().push(v);
        }
        Self::new(
            group,
            by_degree
                .into_iter()
                .map(|(g, vs)| (g, Subspace::span(domain, ambient, vs)))
                .collect(),
        )
    }

    /// Everything in degree zero.
    pub fn trivial(algebra: &SuperAlgebra, group: &AbelianGroup) -> Self {
        Self::new(
            group,
            vec![(group.zero(), Subspace::full(algebra.domain(), algebra.dim()))],
        )
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn components(&self) -> &BTreeMap<GroupElement, Subspace> {
        &self.components
    }

    pub fn component(&self, g: &GroupElement) -> Option<&Subspace> {
        self.components.get(g)
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.components.keys().cloned().collect()
    }

    /// Transport along a linear map: `(M Γ)_g = M(Γ_g)`.
    pub fn image(&self, map: &Matrix) -> Grading {
        Grading {
            group: self.group.clone(),
            components: self
                .components
                .iter()
                .map(|(g, s)| (g.clone(), s.image(map)))
                .collect(),
        }
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn degree_of(&self, v: &[Scalar]) -> Option<GroupElement> {
        if is_zero_vector(v) {
            return None;
        }
        self.components
            .iter()
            .find(|(_, s)| s.contains(v))
            .map(|(g, _)| g.clone())
    }
}

/// Checks the direct sum, the product rule and compatibility with parity.
pub fn verify_grading(algebra: &SuperAlgebra, grading: &Grading) -> Result<()> {
    let n = algebra.dim();
    let dom = algebra.domain();
    let mut total = Subspace::zero(dom, n);
    let mut sum = 0;
    for (g, s) in &grading.components {
        if s.ambient() != n || s.domain() != dom || g.coords().len() != grading.group.arity() {
            return Err(GradingError::Ambient {
                degree: g.to_string(),
            });
        }
        sum += s.dim();
        total = total.sum(s);
    }
    if sum != n || total.dim() != n {
        return Err(GradingError::NotDirectSum {
            sum,
            span: total.dim(),
            dim: n,
        });
    }
    let even = algebra.even_subspace();
    let odd = algebra.odd_subspace();
    for (g, s) in &grading.components {
        if s.intersection(&even).dim() + s.intersection(&odd).dim() != s.dim() {
            return Err(GradingError::NotSuper(g.to_string()));
        }
    }
    let zero = Subspace::zero(dom, n);
    for (g, sg) in &grading.components {
        for (h, sh) in &grading.components {
            let gh = grading.group.add(g, h);
            let target = grading.components.get(&gh).unwrap_or(&zero);
            for x in sg.basis() {
                for y in sh.basis() {
                    if !target.contains(&algebra.mul(x, y)) {
                        return Err(GradingError::ProductRule {
                            g: g.to_string(),
                            h: h.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Homogeneous basis of a graded subspace, with degrees.
fn homogeneous_basis(grading: &Grading, space: &Subspace) -> Result<Vec<(Vector, GroupElement)>> {
    let mut out = Vec::new();
    for (g, s) in &grading.components {
        for v in s.intersection(space).basis() {
            out.push((v.clone(), g.clone()));
        }
    }
    if out.len() != space.dim() {
        return Err(GradingError::Unexpected(
            "subspace is not a sum of homogeneous pieces".into(),
        ));
    }
    Ok(out)
}

/// Parameters of the two families, up to the group they live in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GradingLabel {
    /// Degrees `g1, -g1` on the first symplectic plane and `g2, -g2` on the second.
    First { g1: GroupElement, g2: GroupElement },
    /// `deg(u,u) = g`, `deg(a,-a) = h` with `2h = 0 != h`.
    Second { g: GroupElement, h: GroupElement },
}

impl GradingLabel {
    pub fn family(&self) -> u8 {
        match self {
            GradingLabel::First { .. } => 1,
            GradingLabel::Second { .. } => 2,
        }
    }

    /// Representative of the isomorphism class: family 1 is determined by the
    /// set `{g1, -g1, g2, -g2}`, family 2 by `h` and the coset
    /// `{g, g+h, -g, -g+h}`.
    pub fn canonical(&self, group: &AbelianGroup) -> GradingLabel {
        match self {
            GradingLabel::First { g1, g2 } => {
                let rep = |x: &GroupElement| x.clone().min(group.neg(x));
                let (a, b) = (rep(g1), rep(g2));
                GradingLabel::First {
                    g1: a.clone().min(b.clone()),
                    g2: a.max(b),
                }
            }
            GradingLabel::Second { g, h } => {
                let ng = group.neg(g);
                let g = [g.clone(), group.add(g, h), group.add(&ng, h), ng]
                    .into_iter()
                    .min()
                    .expect("nonempty");
                GradingLabel::Second { g, h: h.clone() }
            }
        }
    }
}

impl std::fmt::Display for GradingLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GradingLabel::First { g1, g2 } => write!(f, "Γ1(g1={g1}, g2={g2})"),
            GradingLabel::Second { g, h } => write!(f, "Γ2(g={g}, h={h})"),
        }
    }
}

fn check_label(group: &AbelianGroup, label: &GradingLabel) -> Result<()> {
    let elements: Vec<&GroupElement> = match label {
        GradingLabel::First { g1, g2 } => vec![g1, g2],
        GradingLabel::Second { g, h } => vec![g, h],
    };
    for e in elements {
        group.element(e.coords())?;
    }
    if let GradingLabel::Second { h, .. } = label {
        if !group.is_involution(h) {
            return Err(GradingError::NotOrderTwo(h.to_string()));
        }
    }
    Ok(())
}

/// The two superalgebras whose gradings are classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedAlgebra {
    K3Squared,
    K10,
}

impl GradedAlgebra {
    pub fn build(self, domain: &ScalarDomain) -> SuperAlgebra {
        match self {
            GradedAlgebra::K3Squared => catalog::k3_squared(domain),
            GradedAlgebra::K10 => catalog::kac_k10(domain),
        }
        .expect("characteristic is not 2")
    }

    /// Recognizes the catalog table (same domain, same constants).
    pub fn detect(algebra: &SuperAlgebra) -> Option<Self> {
        [GradedAlgebra::K3Squared, GradedAlgebra::K10]
            .into_iter()
            .find(|k| {
                let reference = k.build(algebra.domain());
                reference.dim() == algebra.dim()
                    && (0..algebra.dim()).all(|i| {
                        (0..algebra.dim()).all(|j| {
                            reference.basis_product(i, j) == algebra.basis_product(i, j)
                        })
                    })
            })
    }

    /// `Φ(f,g)∘τ^swap` on K10, `Ψ(f,g)∘swap` on K3×K3.
    pub fn automorphism(self, f: &Sl2, g: &Sl2, swap: bool) -> LinearMap {
        match self {
            GradedAlgebra::K3Squared => psi_auto(f, g, swap),
            GradedAlgebra::K10 => k10_automorphism(f, g, swap),
        }
    }

    /// The standard grading with the given parameters.
    pub fn standard(
        self,
        domain: &ScalarDomain,
        group: &AbelianGroup,
        label: &GradingLabel,
    ) -> Result<Grading> {
        match self {
            GradedAlgebra::K3Squared => gamma_k3k3(domain, group, label),
            GradedAlgebra::K10 => gamma_k10(domain, group, label),
        }
    }
}

fn combo(domain: &ScalarDomain, n: usize, terms: &[(usize, i64)]) -> Vector {
    let mut v = zero_vector(domain, n);
    for &(i, c) in terms {
        v[i] = domain.from_i64(c);
    }
    v
}

/// Gradings of Γ1/Γ2 type on K3×K3 with basis `(a,0),(u,0),(v,0),(0,a),(0,u),(0,v)`.
pub fn gamma_k3k3(domain: &ScalarDomain, group: &AbelianGroup, label: &GradingLabel) -> Result<Grading> {
    check_label(group, label)?;
    let e = |terms: &[(usize, i64)]| combo(domain, 6, terms);
    let vectors = match label {
        GradingLabel::First { g1, g2 } => vec![
            (e(&[(0, 1)]), group.zero()),
            (e(&[(3, 1)]), group.zero()),
            (e(&[(1, 1)]), g1.clone()),
            (e(&[(2, 1)]), group.neg(g1)),
            (e(&[(4, 1)]), g2.clone()),
            (e(&[(5, 1)]), group.neg(g2)),
        ],
        GradingLabel::Second { g, h } => {
            let ng = group.neg(g);
            vec![
                (e(&[(0, 1), (3, 1)]), group.zero()),
                (e(&[(0, 1), (3, -1)]), h.clone()),
                (e(&[(1, 1), (4, 1)]), g.clone()),
                (e(&[(1, 1), (4, -1)]), group.add(g, h)),
                (e(&[(2, 1), (5, 1)]), ng.clone()),
                (e(&[(2, 1), (5, -1)]), group.add(&ng, h)),
            ]
        }
    };
    Ok(Grading::from_vectors(domain, 6, group, vectors))
}

pub fn gamma1_k3k3(
    domain: &ScalarDomain,
    group: &AbelianGroup,
    g1: &GroupElement,
    g2: &GroupElement,
) -> Result<Grading> {
    gamma_k3k3(domain, group, &GradingLabel::First { g1: g1.clone(), g2: g2.clone() })
}

pub fn gamma2_k3k3(
    domain: &ScalarDomain,
    group: &AbelianGroup,
    g: &GroupElement,
    h: &GroupElement,
) -> Result<Grading> {
    gamma_k3k3(domain, group, &GradingLabel::Second { g: g.clone(), h: h.clone() })
}

/// Degrees of the odd part of K10 for the given label.
pub fn k10_odd_assignment(
    domain: &ScalarDomain,
    group: &AbelianGroup,
    label: &GradingLabel,
) -> Result<Vec<(Vector, GroupElement)>> {
    check_label(group, label)?;
    use k10::{AU, AV, UA, VA};
    let e = |terms: &[(usize, i64)]| combo(domain, 10, terms);
    Ok(match label {
        GradingLabel::First { g1, g2 } => vec![
            (e(&[(UA, 1)]), g1.clone()),
            (e(&[(VA, 1)]), group.neg(g1)),
            (e(&[(AU, 1)]), g2.clone()),
            (e(&[(AV, 1)]), group.neg(g2)),
        ],
        GradingLabel::Second { g, h } => {
            let ng = group.neg(g);
            vec![
                (e(&[(UA, 1), (AU, 1)]), g.clone()),
                (e(&[(UA, 1), (AU, -1)]), group.add(g, h)),
                (e(&[(VA, 1), (AV, 1)]), ng.clone()),
                (e(&[(VA, 1), (AV, -1)]), group.add(&ng, h)),
            ]
        }
    })
}

/// Γ1/Γ2 on K10: odd degrees as in the label, even degrees propagated.
pub fn gamma_k10(domain: &ScalarDomain, group: &AbelianGroup, label: &GradingLabel) -> Result<Grading> {
    let algebra = catalog::kac_k10(domain).expect("characteristic is not 2");
    let odd = k10_odd_assignment(domain, group, label)?;
    propagate_from_odd(&algebra, group, &odd)
}

/// Builds the grading generated by degrees on (odd) homogeneous vectors: the
/// unity gets degree zero and every product `xy` of already graded vectors gets
/// `deg x + deg y`, until the whole algebra is covered. Two dependent vectors
/// with different degrees are reported as a conflict.
pub fn propagate_from_odd(
    algebra: &SuperAlgebra,
    group: &AbelianGroup,
    assignment: &[(Vector, GroupElement)],
) -> Result<Grading> {
    let n = algebra.dim();
    let dom = algebra.domain();
    let labels = algebra.labels();
    // accepted generators: independent vectors with degrees and names
    let mut accepted: Vec<(Vector, GroupElement, String)> = Vec::new();
    let mut components: BTreeMap<GroupElement, Subspace> = BTreeMap::new();
    let mut total = Subspace::zero(dom, n);

    let mut insert = |v: Vector,
                      degree: GroupElement,
                      name: String,
                      accepted: &mut Vec<(Vector, GroupElement, String)>|
     -> Result<bool> {
        if is_zero_vector(&v) {
            return Ok(false);
        }
        let comp = components
            .entry(degree.clone())
            .or_insert_with(|| Subspace::zero(dom, n));
        if comp.contains(&v) {
            return Ok(false);
        }
        if total.contains(&v) {
            let basis: Vec<Vector> = accepted.iter().map(|(w, _, _)| w.clone()).collect();
            let coeffs = BasisSolver::new(dom, &basis)
                .and_then(|s| s.solve(&v))
                .expect("accepted vectors are independent and span the total");
            let (_, d, other) = accepted
                .iter()
                .zip(&coeffs)
                .find(|((_, d, _), c)| !c.is_zero() && d != &degree)
                .map(|(a, _)| a)
                .expect("a generator of another degree is involved");
            return Err(GradingError::Conflict {
                first: other.clone(),
                first_degree: d.to_string(),
                second: name,
                second_degree: degree.to_string(),
            });
        }
        comp.insert(&v);
        total.insert(&v);
        accepted.push((v, degree, name));
        Ok(true)
    };

    if let Some(u) = algebra.unity() {
        insert(u.clone(), group.zero(), describe(labels, u), &mut accepted)?;
    }
    for (v, g) in assignment {
        let g = group.element(g.coords())?;
        insert(v.clone(), g, describe(labels, v), &mut accepted)?;
    }
    let mut start = 0;
    loop {
        let before = accepted.len();
        for i in 0..before {
            for j in 0..before {
                if i < start && j < start {
                    continue;
                }
                let (x, dx, nx) = accepted[i].clone();
                let (y, dy, ny) = accepted[j].clone();
                let p = algebra.mul(&x, &y);
                let name = format!("({nx})({ny})");
                insert(p, group.add(&dx, &dy), name, &mut accepted)?;
            }
        }
        if accepted.len() == before {
            break;
        }
        start = before;
    }
    if accepted.len() != n {
        return Err(GradingError::NotGenerated(accepted.len()));
    }
    let grading = Grading::from_vectors(
        dom,
        n,
        group,
        accepted.into_iter().map(|(v, g, _)| (v, g)).collect(),
    );
    verify_grading(algebra, &grading)?;
    Ok(grading)
}

/// Pushes degrees through a homomorphism, merging components with equal images.
pub fn coarsen(grading: &Grading, hom: &GroupHom) -> Result<Grading> {
    if hom.source() != &grading.group {
        return Err(GradingError::HomSource(
            hom.source().to_string(),
            grading.group.to_string(),
        ));
    }
    Ok(Grading::new(
        hom.target(),
        grading
            .components
            .iter()
            .map(|(g, s)| (hom.apply(g), s.clone()))
            .collect(),
    ))
}

/// The two fine gradings: Γ1 by `Z^2` with `g1 = (1,0)`, `g2 = (0,1)`, and Γ2
/// by `Z x Z/2` with `g = (1,0)`, `h = (0,1)`.
pub fn fine_gradings(kind: GradedAlgebra, domain: &ScalarDomain) -> [(GradingLabel, Grading); 2] {
    let z2 = AbelianGroup::free(2);
    let zz2 = AbelianGroup::new(1, vec![2]).expect("valid torsion");
    let l1 = GradingLabel::First {
        g1: z2.element(&[1, 0]).expect("arity"),
        g2: z2.element(&[0, 1]).expect("arity"),
    };
    let l2 = GradingLabel::Second {
        g: zz2.element(&[1, 0]).expect("arity"),
        h: zz2.element(&[0, 1]).expect("arity"),
    };
    let g1 = kind.standard(domain, &z2, &l1).expect("valid label");
    let g2 = kind.standard(domain, &zz2, &l2).expect("valid label");
    [(l1, g1), (l2, g2)]
}

/// The homomorphism realizing Γ(G; params) as a coarsening of the fine
/// grading of the same family.
pub fn coarsening_hom(group: &AbelianGroup, label: &GradingLabel) -> Result<GroupHom> {
    let (source, images) = match label {
        GradingLabel::First { g1, g2 } => (AbelianGroup::free(2), vec![g1.clone(), g2.clone()]),
        GradingLabel::Second { g, h } => (
            AbelianGroup::new(1, vec![2]).expect("valid torsion"),
            vec![g.clone(), h.clone()],
        ),
    };
    Ok(GroupHom::new(&source, group, images)?)
}

/// A classified grading: canonical label and an automorphism `N` with
/// `N(standard(label)) = Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub algebra: GradedAlgebra,
    pub label: GradingLabel,
    pub normalizer: LinearMap,
}

/// 2x2 matrix with the given columns.
fn columns2(domain: &ScalarDomain, c1: [&Scalar; 2], c2: [&Scalar; 2]) -> Matrix {
    Matrix::from_rows(
        domain,
        vec![
            vec![c1[0].clone(), c2[0].clone()],
            vec![c1[1].clone(), c2[1].clone()],
        ],
    )
}

/// Raw label and the pair `(f1, f2)` with `Ψ(f1, f2)` mapping the standard
/// grading onto the given one (K3×K3 coordinates).
fn classify_k3k3_raw(algebra: &SuperAlgebra, grading: &Grading) -> Result<(GradingLabel, Sl2, Sl2)> {
    let dom = algebra.domain();
    let group = grading.group();
    let even = Subspace::coordinate(dom, 6, &[0, 3]);
    let even_hb = homogeneous_basis(grading, &even)?;
    let sl2 = |m: Matrix| {
        Sl2::new(m).map_err(|e| GradingError::Unexpected(format!("symplectic basis: {e}")))
    };
    if even_hb.iter().all(|(_, g)| group.is_zero(g)) {
        let plane = |idx: [usize; 2], unit: usize| -> Result<(GroupElement, Sl2)> {
            let space = Subspace::coordinate(dom, 6, &idx);
            let hb = homogeneous_basis(grading, &space)?;
            let (x, gx) = &hb[0];
            let (y, _) = &hb[1];
            let c = algebra.mul(x, y)[unit].clone();
            let y = crate::linalg::scale(y, &c.inv().map_err(|_| {
                GradingError::Unexpected("homogeneous vectors pair to zero".into())
            })?);
            let f = sl2(columns2(dom, [&x[idx[0]], &x[idx[1]]], [&y[idx[0]], &y[idx[1]]]))?;
            Ok((gx.clone(), f))
        };
        let (g1, f1) = plane([1, 2], 0)?;
        let (g2, f2) = plane([4, 5], 3)?;
        return Ok((GradingLabel::First { g1, g2 }, f1, f2));
    }
    let h = even_hb
        .iter()
        .map(|(_, g)| g)
        .find(|g| !group.is_zero(g))
        .expect("some even degree is nonzero")
        .clone();
    if !group.is_involution(&h) {
        return Err(GradingError::NotOrderTwo(h.to_string()));
    }
    let odd = Subspace::coordinate(dom, 6, &[1, 2, 4, 5]);
    let hb = homogeneous_basis(grading, &odd)?;
    let (x, g) = &hb[0];
    let partner = hb.iter().find_map(|(y, gy)| {
        let p = algebra.mul(x, y);
        (group.is_zero(&group.add(g, gy)) && !p[0].is_zero()).then(|| (y.clone(), p[0].clone()))
    });
    let Some((y, c)) = partner else {
        return Err(GradingError::Unexpected(
            "no homogeneous partner of opposite degree".into(),
        ));
    };
    let y = crate::linalg::scale(&y, &c.inv().expect("nonzero pairing"));
    let f1 = sl2(columns2(dom, [&x[1], &x[2]], [&y[1], &y[2]]))?;
    let f2 = sl2(columns2(dom, [&x[4], &x[5]], [&y[4], &y[5]]))?;
    Ok((GradingLabel::Second { g: g.clone(), h }, f1, f2))
}

/// Odd K10 coordinates `u⊗a, v⊗a, a⊗u, a⊗v` correspond to `(u,0), (v,0), (0,u), (0,v)`.
const ODD_TRANSFER: [(usize, usize); 4] = [(k10::UA, 1), (k10::VA, 2), (k10::AU, 4), (k10::AV, 5)];

/// Runs the classification procedure: on K3×K3 the grading of the even
/// idempotent pair decides the family and homogeneous symplectic bases give the
/// parameters; on K10 the odd degrees are transferred to K3×K3 first. The
/// label is then canonicalized and the normalizer adjusted by a small
/// automorphism, and everything is verified.
pub fn classify(algebra: &SuperAlgebra, grading: &Grading) -> Result<Classification> {
    let kind = GradedAlgebra::detect(algebra).ok_or(GradingError::UnsupportedAlgebra)?;
    verify_grading(algebra, grading)?;
    let dom = algebra.domain();
    let group = grading.group();
    let (raw, f1, f2) = match kind {
        GradedAlgebra::K3Squared => classify_k3k3_raw(algebra, grading)?,
        GradedAlgebra::K10 => {
            let odd = algebra.odd_subspace();
            let hb = homogeneous_basis(grading, &odd)?;
            let transferred: Vec<(Vector, GroupElement)> = hb
                .into_iter()
                .map(|(v, g)| {
                    let mut w = zero_vector(dom, 6);
                    for (from, to) in ODD_TRANSFER {
                        w[to] = v[from].clone();
                    }
                    (w, g)
                })
                .collect();
            let pair = catalog::k3_squared(dom).expect("characteristic is not 2");
            let induced = propagate_from_odd(&pair, group, &transferred).map_err(|e| {
                GradingError::Unexpected(format!("odd degrees do not induce a grading of K3×K3: {e}"))
            })?;
            classify_k3k3_raw(&pair, &induced)?
        }
    };
    let raw_normalizer = kind.automorphism(&f1, &f2, false);
    let raw_standard = kind.standard(dom, group, &raw)?;
    if raw_standard.image(raw_normalizer.matrix()) != *grading {
        return Err(GradingError::WitnessFailure(format!(
            "normalizer does not carry {raw} onto the grading"
        )));
    }
    let label = raw.canonical(group);
    let canonical_standard = kind.standard(dom, group, &label)?;
    let small = small_witness(kind, dom, &canonical_standard, &raw_standard).ok_or_else(|| {
        GradingError::WitnessFailure(format!("no small automorphism carries {label} to {raw}"))
    })?;
    let normalizer = raw_normalizer.compose(&small);
    Ok(Classification {
        algebra: kind,
        label,
        normalizer,
    })
}

/// The automorphisms `Φ(f,g)∘τ^s` (or `Ψ(f,g)∘swap^s`) with `f, g` in the
/// group generated by the degree-inverting rotation `u ↦ v, v ↦ -u`.
pub fn small_automorphisms(kind: GradedAlgebra, domain: &ScalarDomain) -> Vec<LinearMap> {
    let j = Sl2::rotation(domain);
    let mut powers = vec![Sl2::identity(domain)];
    for _ in 0..3 {
        let next = powers.last().expect("nonempty").mul(&j);
        powers.push(next);
    }
    let mut out = Vec::new();
    for swap in [false, true] {
        for f in &powers {
            for g in &powers {
                out.push(kind.automorphism(f, g, swap));
            }
        }
    }
    out
}

fn small_witness(
    kind: GradedAlgebra,
    domain: &ScalarDomain,
    from: &Grading,
    to: &Grading,
) -> Option<LinearMap> {
    small_automorphisms(kind, domain)
        .into_iter()
        .find(|w| from.image(w.matrix()) == *to)
}

/// Decides isomorphism by comparing canonical labels; on success returns an
/// automorphism carrying the first grading onto the second, verified
/// component by component.
pub fn gradings_isomorphic(
    algebra: &SuperAlgebra,
    first: &Grading,
    second: &Grading,
) -> Result<Option<LinearMap>> {
    if first.group() != second.group() {
        return Err(GradingError::GroupMismatch(
            first.group().to_string(),
            second.group().to_string(),
        ));
    }
    let a = classify(algebra, first)?;
    let b = classify(algebra, second)?;
    if a.label != b.label {
        return Ok(None);
    }
    let inverse = a
        .normalizer
        .inverse()
        .ok_or_else(|| GradingError::WitnessFailure("normalizer is singular".into()))?;
    let witness = b.normalizer.compose(&inverse);
    if !is_automorphism(algebra, &witness) {
        return Err(GradingError::WitnessFailure("witness is not an automorphism".into()));
    }
    if first.image(witness.matrix()) != *second {
        return Err(GradingError::WitnessFailure(
            "witness does not map components onto components".into(),
        ));
    }
    Ok(Some(witness))
}

/// Number of isomorphism classes of gradings by a finite group predicted by
/// the canonical labels of both families.
pub fn predicted_class_count(group: &AbelianGroup) -> Option<usize> {
    let elements = group.elements()?;
    let mut labels = BTreeSet::new();
    for g1 in &elements {
        for g2 in &elements {
            labels.insert(
                GradingLabel::First {
                    g1: g1.clone(),
                    g2: g2.clone(),
                }
                .canonical(group),
            );
        }
    }
    for h in elements.iter().filter(|h| group.is_involution(h)) {
        for g in &elements {
            labels.insert(
                GradingLabel::Second {
                    g: g.clone(),
                    h: h.clone(),
                }
                .canonical(group),
            );
        }
    }
    Some(labels.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub q: u64,
    pub group_order: usize,
    /// Elements `t` with `t² = 1`, the identity included.
    pub involutions: usize,
    /// Conjugacy classes of such elements, i.e. classes of Z/2-gradings.
    pub classes: usize,
    /// Count predicted from canonical labels over Z/2.
    pub predicted: usize,
    /// Canonical label of the eigenspace grading of each class representative.
    pub labels: Vec<GradingLabel>,
}

/// Z/2-gradings up to isomorphism over `F_q`, by brute force: enumerate the
/// group `{Φ(f,g)∘τ^s}` (or its K3×K3 analogue), take all elements of order at
/// most 2, count their conjugacy classes, and turn each class representative
/// into its eigenspace grading.
pub fn z2_census(kind: GradedAlgebra, q: u64, budget: u128) -> std::result::Result<CensusReport, GradingError> {
    let domain = ScalarDomain::prime(q)
        .map_err(|e| GradingError::Unexpected(format!("census field: {e}")))?;
    let sl = Sl2::enumerate(&domain);
    let m = sl.len();
    let order = 2 * (m as u128) * (m as u128);
    if order > budget {
        return Err(GradingError::Budget {
            needed: order,
            cap: budget,
        });
    }
    let index: HashMap<&Matrix, usize> = sl.iter().enumerate().map(|(i, s)| (s.matrix(), i)).collect();
    let table: Vec<Vec<usize>> = sl
        .iter()
        .map(|a| sl.iter().map(|b| index[a.mul(b).matrix()]).collect())
        .collect();
    let inv: Vec<usize> = sl.iter().map(|a| index[a.inverse().matrix()]).collect();
    let id = index[Sl2::identity(&domain).matrix()];
    type Elem = (usize, usize, bool);
    // (f, g, s) stands for Φ(f,g)∘τ^s; τΦ(f,g)τ = Φ(g,f)
    let compose = |x: Elem, y: Elem| -> Elem {
        let (f, g, s) = x;
        let (f2, g2, s2) = y;
        if s {
            (table[f][g2], table[g][f2], !s2)
        } else {
            (table[f][f2], table[g][g2], s2)
        }
    };
    let inverse = |x: Elem| -> Elem {
        let (f, g, s) = x;
        if s {
            (inv[g], inv[f], true)
        } else {
            (inv[f], inv[g], false)
        }
    };
    let all: Vec<Elem> = (0..m)
        .flat_map(|f| (0..m).flat_map(move |g| [(f, g, false), (f, g, true)]))
        .collect();
    let identity: Elem = (id, id, false);
    let involutions: Vec<Elem> = all
        .iter()
        .copied()
        .filter(|&x| compose(x, x) == identity)
        .collect();
    let mut seen: HashSet<Elem> = HashSet::new();
    let mut reps = Vec::new();
    for &t in &involutions {
        if seen.contains(&t) {
            continue;
        }
        reps.push(t);
        for &c in &all {
            seen.insert(compose(compose(c, t), inverse(c)));
        }
    }
    let algebra = kind.build(&domain);
    let z2 = AbelianGroup::cyclic(2).expect("valid torsion");
    let mut labels = Vec::new();
    for &(f, g, s) in &reps {
        let map = kind.automorphism(&sl[f], &sl[g], s);
        let n = algebra.dim();
        let identity = Matrix::identity(&domain, n);
        let plus = Subspace::span(&domain, n, map.matrix().sub(&identity).kernel());
        let minus = Subspace::span(&domain, n, map.matrix().add(&identity).kernel());
        let grading = Grading::new(
            &z2,
            vec![
                (z2.element(&[0]).expect("arity"), plus),
                (z2.element(&[1]).expect("arity"), minus),
            ],
        );
        verify_grading(&algebra, &grading)?;
        labels.push(classify(&algebra, &grading)?.label);
    }
    let predicted = predicted_class_count(&z2).expect("finite group");
    Ok(CensusReport {
        q,
        group_order: all.len(),
        involutions: involutions.len(),
        classes: reps.len(),
        predicted,
        labels,
    })
}

/// A proper refinement: a finer decomposition that is a grading by its
/// universal group.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub pieces: Vec<Subspace>,
}

/// All decompositions of `space` into a direct sum of nonzero subspaces that
/// are considered by the refinement search: every decomposition when the field
/// is finite and the space has dimension at most 3, otherwise the ones induced
/// by partitions of its echelon basis.
fn decompositions(space: &Subspace) -> Vec<Vec<Subspace>> {
    let dom = space.domain();
    let n = space.ambient();
    let k = space.dim();
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = vec![vec![space.clone()]];
    if k == 1 {
        return out;
    }
    if dom.order().is_some() && k <= 3 {
        let lines = lines_in(space);
        match k {
            2 => {
                for i in 0..lines.len() {
                    for j in i + 1..lines.len() {
                        out.push(vec![lines[i].clone(), lines[j].clone()]);
                    }
                }
            }
            _ => {
                let planes: Vec<Subspace> = {
                    let mut seen = BTreeSet::new();
                    let mut planes = Vec::new();
                    for i in 0..lines.len() {
                        for j in i + 1..lines.len() {
                            let p = lines[i].sum(&lines[j]);
                            let key = format!("{:?}", p.basis());
                            if seen.insert(key) {
                                planes.push(p);
                            }
                        }
                    }
                    planes
                };
                for l in &lines {
                    for p in &planes {
                        if l.sum(p).dim() == 3 {
                            out.push(vec![l.clone(), p.clone()]);
                        }
                    }
                }
                for i in 0..lines.len() {
                    for j in i + 1..lines.len() {
                        let p = lines[i].sum(&lines[j]);
                        for l in &lines[j + 1..] {
                            if p.sum(l).dim() == 3 {
                                out.push(vec![lines[i].clone(), lines[j].clone(), l.clone()]);
                            }
                        }
                    }
                }
            }
        }
        return out;
    }
    // set partitions of the echelon basis
    let basis = space.basis().to_vec();
    let mut partitions: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for i in 0..k {
        let mut next = Vec::new();
        for p in &partitions {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        partitions = next;
    }
    out.clear();
    for p in partitions {
        out.push(
            p.into_iter()
                .map(|block| Subspace::span(dom, n, block.into_iter().map(|i| basis[i].clone())))
                .collect(),
        );
    }
    out
}

fn lines_in(space: &Subspace) -> Vec<Subspace> {
    let dom = space.domain();
    let elements = dom.elements().expect("finite field");
    let basis = space.basis();
    let k = basis.len();
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        let total = elements.len().pow(tail as u32);
        for mut code in 0..total {
            let mut v = basis[lead].clone();
            for b in &basis[lead + 1..] {
                crate::linalg::add_scaled(&mut v, &elements[code % elements.len()], b);
                code /= elements.len();
            }
            out.push(Subspace::span(dom, space.ambient(), vec![v]));
        }
    }
    out
}

/// Whether the pieces form a grading by their universal group: every product
/// of two pieces lies in a single piece, and distinct pieces get distinct
/// elements of `Z^pieces / <e_i + e_j - e_k>`.
pub fn is_group_grading(algebra: &SuperAlgebra, pieces: &[Subspace]) -> bool {
    let m = pieces.len();
    let mut relations = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let prod = algebra.product_span(&pieces[i], &pieces[j]);
            if prod.is_zero() {
                continue;
            }
            let Some(k) = pieces.iter().position(|p| p.contains_subspace(&prod)) else {
                return false;
            };
            let mut r = vec![0i64; m];
            r[i] += 1;
            r[j] += 1;
            r[k] -= 1;
            relations.push(r);
        }
    }
    let lattice = IntegerLattice::new(m, relations);
    for i in 0..m {
        for j in i + 1..m {
            let mut d = vec![0i64; m];
            d[i] = 1;
            d[j] = -1;
            if lattice.contains(&d) {
                return false;
            }
        }
    }
    true
}

/// Searches for a proper refinement among splittings of the components (each
/// split along parity, then as in [`decompositions`]). `cap` bounds the number
/// of candidate decompositions examined.
pub fn find_refinement(algebra: &SuperAlgebra, grading: &Grading, cap: usize) -> Result<Option<Refinement>> {
    let even = algebra.even_subspace();
    let odd = algebra.odd_subspace();
    let mut options: Vec<Vec<Vec<Subspace>>> = Vec::new();
    for comp in grading.components.values() {
        let mut choices = Vec::new();
        let de = decompositions(&comp.intersection(&even));
        let dod = decompositions(&comp.intersection(&odd));
        for a in &de {
            for b in &dod {
                choices.push(a.iter().chain(b).cloned().collect::<Vec<_>>());
            }
        }
        // unsplit first, so the trivial choice is available
        choices.insert(0, vec![comp.clone()]);
        options.push(choices);
    }
    let total: u128 = options.iter().map(|o| o.len() as u128).product();
    if total > cap as u128 {
        return Err(GradingError::Budget {
            needed: total,
            cap: cap as u128,
        });
    }
    let original = grading.components.len();
    let mut idx = vec![0usize; options.len()];
    loop {
        let pieces: Vec<Subspace> = idx
            .iter()
            .zip(&options)
            .flat_map(|(&i, o)| o[i].iter().cloned())
            .collect();
        if pieces.len() > original && is_group_grading(algebra, &pieces) {
            return Ok(Some(Refinement { pieces }));
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Unit vectors of the catalog basis as a degree assignment.
pub fn axis_assignment(
    domain: &ScalarDomain,
    n: usize,
    degrees: &[(usize, GroupElement)],
) -> Vec<(Vector, GroupElement)> {
    degrees
        .iter()
        .map(|(i, g)| (unit_vector(domain, n, *i), g.clone()))
        .collect()
}
