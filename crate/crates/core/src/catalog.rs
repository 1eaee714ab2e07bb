//! Named superalgebras with frozen basis orders.
//!
//! * K3: `(a, u, v)`, parities `(0, 1, 1)`.
//! * J(W): `(1, u, v)`, parities `(0, 1, 1)`, unity `1`.
//! * K10: `(1, a⊗a, u⊗u, u⊗v, v⊗u, v⊗v, u⊗a, v⊗a, a⊗u, a⊗v)`.
//! * K9 (characteristic 3): the last nine K10 basis vectors.
//! * Products: first factor basis, then second factor basis.
//!
//! The skew form on `W = span(u, v)` is normalized by `(u|v) = 1`.

use crate::algebra::{direct_product, AlgebraError, Result, SuperAlgebra};
use crate::linalg::{unit_vector, zero_vector, Matrix, Vector};
use crate::scalars::{Scalar, ScalarDomain};

/// Indices into the K10 basis.
pub mod k10 {
    pub const ONE: usize = 0;
    pub const AA: usize = 1;
    pub const UU: usize = 2;
    pub const UV: usize = 3;
    pub const VU: usize = 4;
    pub const VV: usize = 5;
    pub const UA: usize = 6;
    pub const VA: usize = 7;
    pub const AU: usize = 8;
    pub const AV: usize = 9;

    /// Odd blocks `W⊗a` and `a⊗W`.
    pub const LEFT_ODD: [usize; 2] = [UA, VA];
    pub const RIGHT_ODD: [usize; 2] = [AU, AV];
}

/// K3 basis letters `a, u, v` by index.
const K3_NAMES: [&str; 3] = ["a", "u", "v"];

/// K10 index of `x⊗y` for K3 basis indices `x, y`.
pub fn tensor_index(x: usize, y: usize) -> usize {
    const TABLE: [[usize; 3]; 3] = [
        [k10::AA, k10::AU, k10::AV],
        [k10::UA, k10::UU, k10::UV],
        [k10::VA, k10::VU, k10::VV],
    ];
    TABLE[x][y]
}

/// Inverse of [`tensor_index`] on indices `1..10`.
pub fn tensor_factors(index: usize) -> Option<(usize, usize)> {
    (0..3)
        .flat_map(|x| (0..3).map(move |y| (x, y)))
        .find(|&(x, y)| tensor_index(x, y) == index)
}

fn check_characteristic(domain: &ScalarDomain) -> Result<()> {
    if domain.characteristic() == 2 {
        return Err(AlgebraError::Unsupported("characteristic other than 2".into()));
    }
    Ok(())
}

fn k3_parity(i: usize) -> u8 {
    u8::from(i != 0)
}

/// Gram matrix of the supersymmetric form on K3 in the basis `(a, u, v)`.
pub fn k3_form(domain: &ScalarDomain) -> Result<Matrix> {
    check_characteristic(domain)?;
    let mut m = Matrix::zeros(domain, 3, 3);
    m.set(0, 0, domain.ratio(1, 2)?);
    m.set(1, 2, domain.one());
    m.set(2, 1, -domain.one());
    Ok(m)
}

/// Product of K3 basis vectors as K3 coordinates.
fn k3_product(domain: &ScalarDomain, i: usize, j: usize) -> Result<Vector> {
    let half = domain.ratio(1, 2)?;
    let mut out = zero_vector(domain, 3);
    match (i, j) {
        (0, 0) => out[0] = domain.one(),
        (0, k) | (k, 0) => out[k] = half,
        (1, 2) => out[0] = domain.one(),
        (2, 1) => out[0] = -domain.one(),
        _ => {}
    }
    Ok(out)
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Kaplansky's superalgebra: `a² = a`, `ax = xa = x/2`, `xy = (x|y)a`.
pub fn kaplansky_k3(domain: &ScalarDomain) -> Result<SuperAlgebra> {
    check_characteristic(domain)?;
    let table: Vec<Vector> = (0..9)
        .map(|ij| k3_product(domain, ij / 3, ij % 3))
        .collect::<Result<_>>()?;
    SuperAlgebra::from_products(domain, vec![0, 1, 1], names(&K3_NAMES), None, |i, j| {
        table[3 * i + j].clone()
    })
}

/// The superform algebra `F1 + W` with `xy = (x|y)1`.
pub fn superform_jw(domain: &ScalarDomain) -> Result<SuperAlgebra> {
    check_characteristic(domain)?;
    let unity = unit_vector(domain, 3, 0);
    SuperAlgebra::from_products(
        domain,
        vec![0, 1, 1],
        names(&["1", "u", "v"]),
        Some(unity),
        |i, j| match (i, j) {
            (0, k) | (k, 0) => unit_vector(domain, 3, k),
            (1, 2) => unit_vector(domain, 3, 0),
            (2, 1) => {
                let mut v = zero_vector(domain, 3);
                v[0] = -domain.one();
                v
            }
            _ => zero_vector(domain, 3),
        },
    )
}

/// Labels of the K10 basis.
pub fn k10_labels() -> Vec<String> {
    (0..10)
        .map(|i| match tensor_factors(i) {
            Some((x, y)) => format!("{}⊗{}", K3_NAMES[x], K3_NAMES[y]),
            None => "1".to_string(),
        })
        .collect()
}

/// Kac's superalgebra `F1 + K3⊗K3` with
/// `(x⊗y)(z⊗t) = (-1)^{|y||z|} (xz⊗yt - (3/4)(x|z)(y|t) 1)`.
pub fn kac_k10(domain: &ScalarDomain) -> Result<SuperAlgebra> {
    check_characteristic(domain)?;
    let form = k3_form(domain)?;
    let correction = domain.ratio(3, 4)?;
    let k3: Vec<Vector> = (0..9)
        .map(|ij| k3_product(domain, ij / 3, ij % 3))
        .collect::<Result<_>>()?;
    let parity: Vec<u8> = (0..10)
        .map(|i| tensor_factors(i).map_or(0, |(x, y)| (k3_parity(x) + k3_parity(y)) % 2))
        .collect();
    let unity = unit_vector(domain, 10, k10::ONE);
    SuperAlgebra::from_products(domain, parity, k10_labels(), Some(unity), |i, j| {
        let (Some((x, y)), Some((z, t))) = (tensor_factors(i), tensor_factors(j)) else {
            // one factor is the unity
            return unit_vector(domain, 10, if i == k10::ONE { j } else { i });
        };
        let mut out = zero_vector(domain, 10);
        let xz = &k3[3 * x + z];
        let yt = &k3[3 * y + t];
        for (p, c1) in xz.iter().enumerate() {
            for (q, c2) in yt.iter().enumerate() {
                out[tensor_index(p, q)] += c1 * c2;
            }
        }
        let pairing = form.get(x, z) * form.get(y, t);
        out[k10::ONE] -= &correction * &pairing;
        if k3_parity(y) * k3_parity(z) == 1 {
            for c in &mut out {
                *c = -&*c;
            }
        }
        out
    })
}

/// The ideal `K3⊗K3` of K10 in characteristic 3, on basis indices `1..10`.
pub fn kac_k9(domain: &ScalarDomain) -> Result<SuperAlgebra> {
    if domain.characteristic() != 3 {
        return Err(AlgebraError::Unsupported("characteristic 3".into()));
    }
    let k10 = kac_k10(domain)?;
    let basis: Vec<Vector> = (1..10).map(|i| unit_vector(domain, 10, i)).collect();
    k10.subalgebra(&basis, k10_labels()[1..].to_vec())
}

pub fn k3_squared(domain: &ScalarDomain) -> Result<SuperAlgebra> {
    let k3 = kaplansky_k3(domain)?;
    direct_product(&k3, &k3)
}

pub fn jw_squared(domain: &ScalarDomain) -> Result<SuperAlgebra> {
    let jw = superform_jw(domain)?;
    direct_product(&jw, &jw)
}

/// Looks up an algebra by its CLI name.
pub fn by_name(name: &str, domain: &ScalarDomain) -> Option<Result<SuperAlgebra>> {
    Some(match name {
        "k3" => kaplansky_k3(domain),
        "jw" => superform_jw(domain),
        "k10" => kac_k10(domain),
        "k9" => kac_k9(domain),
        "k3xk3" => k3_squared(domain),
        "jwxjw" => jw_squared(domain),
        _ => return None,
    })
}

pub const NAMES: [&str; 6] = ["k3", "jw", "k10", "k9", "k3xk3", "jwxjw"];

/// `sum c_i e_i` rendered with the algebra's labels, e.g. `u⊗v - v⊗u`.
pub fn describe(labels: &[String], v: &[Scalar]) -> String {
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, text.clone()),
        };
        let coeff = if mag == "1" {
            String::new()
        } else if mag.contains(['+', '-']) {
            format!("({mag})*")
        } else {
            format!("{mag}*")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&coeff);
        out.push_str(l);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
