//! Finite-rank integral lattices with a symmetric integer pairing.
//!
//! All arithmetic is exact. Determinants and inertia go through
//! [`crate::linalg`]; short-vector enumeration for definite forms uses the
//! Fincke-Pohst bound, so it is exhaustive.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// A homology class, given by its coordinates in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeClass(Vec<i64>);

impl LatticeClass {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeClass(vec![0; rank])
    }

    /// The `i`-th basis vector of a rank-`rank` lattice.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeClass(self.0.iter().map(|x| x * k).collect())
    }

    /// Gcd of the coordinates; `0` for the zero class.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// If `self = n * other` for an integer `n`, returns `n`.
    pub fn multiple_of(&self, other: &LatticeClass) -> Option<i64> {
        if self.len() != other.len() || other.is_zero() {
            return None;
        }
        let (i, &o) = other.0.iter().enumerate().find(|(_, &x)| x != 0)?;
        if self.0[i] % o != 0 {
            return None;
        }
        let n = self.0[i] / o;
        (other.scale(n) == *self).then_some(n)
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeClass {
    type Output = LatticeClass;
    fn add(self, rhs: &LatticeClass) -> LatticeClass {
        LatticeClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeClass {
    type Output = LatticeClass;
    fn sub(self, rhs: &LatticeClass) -> LatticeClass {
        LatticeClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeClass {
    type Output = LatticeClass;
    fn neg(self) -> LatticeClass {
        LatticeClass(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for LatticeClass {
    fn from(v: Vec<i64>) -> Self {
        LatticeClass(v)
    }
}

/// Free abelian group of finite rank with a symmetric integer pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralLattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
}

/// Result of a box-limited search; the bound travels with the classes so the
/// caller can never mistake it for an exhaustive list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedClasses {
    pub square: i64,
    pub height_bound: u32,
    pub classes: Vec<LatticeClass>,
}

impl IntegralLattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if labels.len() != n {
            return Err(Error::MalformedGram(format!(
                "{} labels for rank {n}",
                labels.len()
            )));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedGram(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::MalformedGram(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return Err(Error::MalformedGram("duplicate basis labels".into()));
        }
        Ok(IntegralLattice { gram, labels })
    }

    /// Like [`IntegralLattice::new`] but also requires `|det| = 1`.
    pub fn new_unimodular(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let l = Self::new(gram, labels)?;
        if !l.is_unimodular() {
            return Err(Error::NotUnimodular(l.determinant().to_string()));
        }
        Ok(l)
    }

    pub fn empty() -> Self {
        IntegralLattice {
            gram: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Diagonal lattice `<d_1> + ... + <d_n>`.
    pub fn diagonal(entries: &[i64], labels: &[&str]) -> Result<Self> {
        let n = entries.len();
        let mut gram = vec![vec![0; n]; n];
        for (i, &d) in entries.iter().enumerate() {
            gram[i][i] = d;
        }
        Self::new(gram, labels.iter().map(|s| s.to_string()).collect())
    }

    /// The hyperbolic plane `H`, gram `[[0, 1], [1, 0]]`.
    pub fn hyperbolic() -> Self {
        IntegralLattice {
            gram: vec![vec![0, 1], vec![1, 0]],
            labels: vec!["u".into(), "v".into()],
        }
    }

    /// The positive definite `E8` lattice in the simple-root basis.
    pub fn e8() -> Self {
        // Dynkin diagram: chain 1-2-3-4-5-6-7 with node 8 attached to node 5.
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
        let mut gram = vec![vec![0; 8]; 8];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in &edges {
            gram[a][b] = -1;
            gram[b][a] = -1;
        }
        IntegralLattice {
            gram,
            labels: (1..=8).map(|i| format!("e{i}")).collect(),
        }
    }

    /// Same basis, pairing multiplied by `-1`.
    pub fn negated(&self) -> Self {
        IntegralLattice {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn check(&self, operand: &'static str, a: &LatticeClass) -> Result<()> {
        if a.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                operand,
                expected: self.rank(),
                found: a.len(),
            });
        }
        Ok(())
    }

    pub fn pairing(&self, a: &LatticeClass, b: &LatticeClass) -> Result<i64> {
        self.check("a", a)?;
        self.check("b", b)?;
        Ok(self.pair_unchecked(a.coords(), b.coords()))
    }

    pub fn square(&self, a: &LatticeClass) -> Result<i64> {
        self.pairing(a, a)
    }

    pub(crate) fn pair_unchecked(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.gram[i];
            let dot: i64 = row.iter().zip(b).map(|(g, bj)| g * bj).sum();
            s += ai * dot;
        }
        s
    }

    /// Pairing of a rational vector (in lattice coordinates) with another.
    pub fn pairing_rational(&self, a: &[BigRational], b: &[BigRational]) -> BigRational {
        let mut s = BigRational::from_integer(BigInt::from(0));
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if self.gram[i][j] != 0 {
                    s += ai * bj * BigRational::from_integer(self.gram[i][j].into());
                }
            }
        }
        s
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.gram)
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Even lattice: every vector has even square, i.e. the diagonal is even.
    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    /// `(positive, negative, zero)` eigenvalue counts of the gram matrix.
    pub fn inertia(&self) -> (usize, usize, usize) {
        linalg::inertia(&linalg::to_rational(&self.gram))
    }

    /// Sylvester signature `(positive_index, negative_index)`.
    pub fn signature(&self) -> Result<(usize, usize)> {
        match self.inertia() {
            (p, n, 0) => Ok((p, n)),
            _ => Err(Error::DegenerateForm),
        }
    }

    /// Orthogonal direct sum. Labels of `other` that collide with ours get a
    /// `#n` suffix, `n` the smallest integer making them unique.
    pub fn direct_sum(&self, other: &IntegralLattice) -> IntegralLattice {
        let n1 = self.rank();
        let n = n1 + other.rank();
        let mut gram = vec![vec![0; n]; n];
        for i in 0..n1 {
            gram[i][..n1].copy_from_slice(&self.gram[i]);
        }
        for i in 0..other.rank() {
            gram[n1 + i][n1..].copy_from_slice(&other.gram[i]);
        }
        let mut labels = self.labels.clone();
        for l in &other.labels {
            labels.push(fresh_label(&labels, l));
        }
        IntegralLattice { gram, labels }
    }

    /// `L + <-1>`, the new basis vector labelled `E_k`.
    pub fn blow_up(&self) -> IntegralLattice {
        let k = (1..)
            .find(|k| self.label_index(&format!("E_{k}")).is_none())
            .unwrap_or(1);
        let e = IntegralLattice {
            gram: vec![vec![-1]],
            labels: vec![format!("E_{k}")],
        };
        self.direct_sum(&e)
    }

    /// Every vector of the given square in a definite lattice.
    pub fn enumerate_square_classes(&self, square: i64) -> Result<Vec<LatticeClass>> {
        let (p, n) = self.signature()?;
        let r = self.rank();
        let sign = if p == r {
            1
        } else if n == r {
            -1
        } else {
            return Err(Error::IndefiniteLattice);
        };
        if r == 0 {
            return Ok(if square == 0 { vec![LatticeClass::zero(0)] } else { vec![] });
        }
        if square * sign < 0 {
            return Err(Error::SquareSign {
                square,
                sign: if sign > 0 { "positive" } else { "negative" },
            });
        }
        let form = linalg::to_rational(&if sign > 0 {
            self.gram.clone()
        } else {
            self.negated().gram
        });
        let target = BigRational::from_integer((square * sign).into());
        let pts = linalg::ellipsoid_points(&form, &target, None)
            .expect("definite form has a quadratic completion");
        let mut out: Vec<LatticeClass> = pts
            .into_iter()
            .filter(|x| self.pair_unchecked(x, x) == square)
            .map(LatticeClass)
            .collect();
        out.sort();
        Ok(out)
    }

    /// All `v` with `max |v_i| <= height_bound` and `v.v = square`.
    ///
    /// This is a finite window, not a complete list, whenever the lattice is
    /// indefinite.
    pub fn bounded_square_classes(&self, square: i64, height_bound: u32) -> BoundedClasses {
        let r = self.rank();
        let h = height_bound as i64;
        let mut classes: Vec<LatticeClass> = if r == 0 {
            if square == 0 { vec![LatticeClass::zero(0)] } else { vec![] }
        } else {
            (-h..=h)
                .into_par_iter()
                .flat_map_iter(|first| {
                    let mut found = Vec::new();
                    let mut x = vec![0i64; r];
                    x[0] = first;
                    box_walk(self, &mut x, 1, h, square, &mut found);
                    found
                })
                .collect()
        };
        classes.sort();
        BoundedClasses {
            square,
            height_bound,
            classes,
        }
    }
}

fn box_walk(
    l: &IntegralLattice,
    x: &mut Vec<i64>,
    i: usize,
    h: i64,
    square: i64,
    out: &mut Vec<LatticeClass>,
) {
    if i == x.len() {
        if l.pair_unchecked(x, x) == square {
            out.push(LatticeClass(x.clone()));
        }
        return;
    }
    for v in -h..=h {
        x[i] = v;
        box_walk(l, x, i + 1, h, square, out);
    }
    x[i] = 0;
}

fn fresh_label(existing: &[String], label: &str) -> String {
    if !existing.iter().any(|l| l == label) {
        return label.to_string();
    }
    (1..)
        .map(|n| format!("{label}#{n}"))
        .find(|c| !existing.iter().any(|l| l == c))
        .expect("unbounded suffix search")
}
