//! Finitely generated abelian groups `Z^r x Z/n_1 x ... x Z/n_s`, written
//! additively, and homomorphisms between them.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("torsion orders must be at least 2, got {0}")]
    BadTorsion(u64),
    #[error("element has {got} coordinates, group needs {expected}")]
    Arity { expected: usize, got: usize },
    #[error("homomorphism needs one image per generator ({expected}), got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("generator {index} has order {order} but its image {image} does not")]
    IllDefined {
        index: usize,
        order: u64,
        image: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    rank: usize,
    torsion: Vec<u64>,
}

/// Coordinates of a group element, canonical for its group (torsion
/// coordinates reduced into `[0, n)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<i64>);

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl AbelianGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self, GroupError> {
        if let Some(&bad) = torsion.iter().find(|&&n| n < 2) {
            return Err(GroupError::BadTorsion(bad));
        }
        Ok(AbelianGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::new(0, vec![n])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn arity(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// `None` for free coordinates.
    fn modulus(&self, i: usize) -> Option<u64> {
        i.checked_sub(self.rank).map(|t| self.torsion[t])
    }

    fn canonical(&self, mut coords: Vec<i64>) -> GroupElement {
        for (i, c) in coords.iter_mut().enumerate() {
            if let Some(n) = self.modulus(i) {
                *c = c.rem_euclid(n as i64);
            }
        }
        GroupElement(coords)
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.arity() {
            return Err(GroupError::Arity {
                expected: self.arity(),
                got: coords.len(),
            });
        }
        Ok(self.canonical(coords.to_vec()))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.arity()])
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.arity())
            .map(|i| {
                let mut c = vec![0; self.arity()];
                c[i] = 1;
                GroupElement(c)
            })
            .collect()
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.canonical(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        self.canonical(x.0.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.neg(y))
    }

    pub fn times(&self, k: i64, x: &GroupElement) -> GroupElement {
        self.canonical(x.0.iter().map(|a| k * a).collect())
    }

    pub fn is_zero(&self, x: &GroupElement) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    /// Order of `x`; `None` when it is infinite.
    pub fn order(&self, x: &GroupElement) -> Option<u64> {
        if x.0[..self.rank].iter().any(|&c| c != 0) {
            return None;
        }
        let mut order = 1u64;
        for (i, &c) in x.0.iter().enumerate().skip(self.rank) {
            let n = self.torsion[i - self.rank];
            let o = n / gcd(n, c as u64);
            order = order / gcd(order, o) * o;
        }
        Some(order)
    }

    /// Whether `2x = 0` and `x != 0`.
    pub fn is_involution(&self, x: &GroupElement) -> bool {
        !self.is_zero(x) && self.is_zero(&self.times(2, x))
    }

    /// Every element, for finite groups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        if self.rank > 0 {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &n in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..n as i64).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(GroupElement).collect())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A homomorphism given by the images of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: AbelianGroup,
    target: AbelianGroup,
    images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(
        source: &AbelianGroup,
        target: &AbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        if images.len() != source.arity() {
            return Err(GroupError::ImageCount {
                expected: source.arity(),
                got: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            if img.0.len() != target.arity() {
                return Err(GroupError::Arity {
                    expected: target.arity(),
                    got: img.0.len(),
                });
            }
            if let Some(n) = source.modulus(i) {
                if !target.is_zero(&target.times(n as i64, img)) {
                    return Err(GroupError::IllDefined {
                        index: i,
                        order: n,
                        image: img.to_string(),
                    });
                }
            }
        }
        let images = images.into_iter().map(|g| target.canonical(g.0)).collect();
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn identity(group: &AbelianGroup) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            images: group.generators(),
        }
    }

    pub fn source(&self) -> &AbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &AbelianGroup {
        &self.target
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let mut acc = self.target.zero();
        for (c, img) in x.0.iter().zip(&self.images) {
            acc = self.target.add(&acc, &self.target.times(*c, img));
        }
        acc
    }
}

/// A subgroup of `Z^m` given by generators, kept in integer row echelon form
/// for membership tests.
#[derive(Clone, Debug)]
pub struct IntegerLattice {
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl IntegerLattice {
    pub fn new(width: usize, generators: Vec<Vec<i64>>) -> Self {
        let mut rows: Vec<Vec<i128>> = generators
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
            .collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..width {
            loop {
                // smallest nonzero entry in this column among the remaining rows
                let Some(best) = (top..rows.len())
                    .filter(|&r| rows[r][col] != 0)
                    .min_by_key(|&r| rows[r][col].abs())
                else {
                    break;
                };
                rows.swap(top, best);
                let mut done = true;
                for r in top + 1..rows.len() {
                    if rows[r][col] != 0 {
                        let q = rows[r][col].div_euclid(rows[top][col]);
                        let pivot_row = rows[top].clone();
                        for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                            *x -= q * p;
                        }
                        if rows[r][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    pivots.push(col);
                    top += 1;
                    break;
                }
            }
        }
        rows.truncate(top);
        IntegerLattice { rows, pivots }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            if v[col] % row[col] != 0 {
                return false;
            }
            let q = v[col] / row[col];
            for (x, p) in v.iter_mut().zip(row) {
                *x -= q * p;
            }
        }
        v.iter().all(|&x| x == 0)
    }
}
