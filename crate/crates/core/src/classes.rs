//! Numerical invariants of homology classes in a symplectic 4-manifold
//! model: expected dimension, contact number, adjunction genus and the
//! predicates built on them.

use num::rational::Ratio;
use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IntegralLattice, LatticeClass};

/// Declarative geometric facts about a manifold that cannot be read off its
/// homology. They gate the theorem-backed rules in [`crate::knownvalues`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldFlags {
    pub rational_or_ruled: bool,
    pub k3: bool,
    pub algebraic_hypersurface: bool,
}

impl ManifoldFlags {
    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut f = ManifoldFlags::default();
        for n in names {
            match n {
                "rational_or_ruled" => f.rational_or_ruled = true,
                "k3" => f.k3 = true,
                "algebraic_hypersurface" => f.algebraic_hypersurface = true,
                other => {
                    return Err(Error::InvalidData(format!("unknown manifold flag {other:?}")))
                }
            }
        }
        Ok(f)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.algebraic_hypersurface {
            v.push("algebraic_hypersurface");
        }
        if self.k3 {
            v.push("k3");
        }
        if self.rational_or_ruled {
            v.push("rational_or_ruled");
        }
        v
    }
}

/// Homological model of `(X, omega)`: the intersection lattice, the
/// canonical class `K` and the first Betti number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldModel {
    pub name: String,
    pub lattice: IntegralLattice,
    pub canonical: LatticeClass,
    /// Carried for the K3 hypothesis check only.
    pub b1: u32,
    pub flags: ManifoldFlags,
}

/// The fixed hypersurface `V`: its class and genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceModel {
    pub class: LatticeClass,
    pub genus: u32,
}

impl ManifoldModel {
    pub fn new(
        name: impl Into<String>,
        lattice: IntegralLattice,
        canonical: LatticeClass,
        b1: u32,
        flags: ManifoldFlags,
    ) -> Result<Self> {
        lattice.check("K", &canonical)?;
        if !lattice.is_unimodular() {
            return Err(Error::NotUnimodular(lattice.determinant().to_string()));
        }
        Ok(ManifoldModel {
            name: name.into(),
            lattice,
            canonical,
            b1,
            flags,
        })
    }

    /// `CP^2 # m(-CP^2)`-style model: lattice `<1> + m<-1>` with
    /// `K = -3h + E_1 + ... + E_m`.
    pub fn blowup_of_plane(m: usize) -> Self {
        let mut lattice = IntegralLattice::diagonal(&[1], &["h"]).expect("rank one lattice");
        for _ in 0..m {
            lattice = lattice.blow_up();
        }
        let mut k = vec![1i64; m + 1];
        k[0] = -3;
        ManifoldModel {
            name: format!("P2#{m}(-P2)"),
            lattice,
            canonical: LatticeClass::new(k),
            b1: 0,
            flags: ManifoldFlags::default(),
        }
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn pairing(&self, a: &LatticeClass, b: &LatticeClass) -> Result<i64> {
        self.lattice.pairing(a, b)
    }

    pub fn square(&self, a: &LatticeClass) -> Result<i64> {
        self.lattice.square(a)
    }

    /// `K . A`.
    pub fn k_dot(&self, a: &LatticeClass) -> Result<i64> {
        self.lattice.pairing(&self.canonical, a)
    }

    /// `2 d_A = A.A - K.A`, always an integer.
    pub fn two_d(&self, a: &LatticeClass) -> Result<i64> {
        Ok(self.square(a)? - self.k_dot(a)?)
    }

    /// Expected dimension `d_A = (A.A - K.A) / 2`, possibly a half-integer.
    pub fn d_of(&self, a: &LatticeClass) -> Result<Ratio<i64>> {
        Ok(Ratio::new(self.two_d(a)?, 2))
    }

    /// `d_A` as an integer, or an error naming the class when it is not one.
    pub fn d_integral(&self, a: &LatticeClass) -> Result<i64> {
        let t = self.two_d(a)?;
        if t % 2 != 0 {
            return Err(Error::Precondition(format!("d_A of {a} is not integral ({t}/2)")));
        }
        Ok(t / 2)
    }

    /// `l_A = A . V`.
    pub fn l_of(&self, v: &HypersurfaceModel, a: &LatticeClass) -> Result<i64> {
        self.pairing(a, &v.class)
    }

    /// Adjunction genus `1 + (A.A + K.A) / 2`. May be negative for classes
    /// with no embedded representative.
    pub fn genus_of(&self, a: &LatticeClass) -> Result<i64> {
        let s = self.square(a)? + self.k_dot(a)?;
        if s % 2 != 0 {
            return Err(Error::OddAdjunction);
        }
        Ok(1 + s / 2)
    }

    /// `A.A = 0` and `K.A = 0`.
    pub fn is_toroidal(&self, a: &LatticeClass) -> Result<bool> {
        Ok(self.square(a)? == 0 && self.k_dot(a)? == 0)
    }

    /// Toroidal and divisible: `A = k A'` with `k > 1`. Divisibility is the
    /// coordinate gcd, which is basis independent over `Z`. The zero class
    /// counts as divisible.
    pub fn is_multiply_toroidal(&self, a: &LatticeClass) -> Result<bool> {
        Ok(self.is_toroidal(a)? && a.content() != 1)
    }

    /// `A.A = -1` and `K.A = -1`.
    pub fn is_exceptional(&self, a: &LatticeClass) -> Result<bool> {
        Ok(self.square(a)? == -1 && self.k_dot(a)? == -1)
    }

    /// `d_V >= 0`.
    pub fn is_stable(&self, v: &HypersurfaceModel) -> Result<bool> {
        Ok(self.two_d(&v.class)? >= 0)
    }

    /// `g(V) > g(A)`.
    pub fn is_small(&self, v: &HypersurfaceModel, a: &LatticeClass) -> Result<bool> {
        Ok(i64::from(v.genus) > self.genus_of(a)?)
    }

    /// For `B.B < 0`: whether an embedded irreducible representative survives
    /// for generic `J`. Only exceptional spheres (`B.B = -1`, genus 0) with
    /// `d_B >= 0` do.
    pub fn negative_class_admits_curve(&self, b: &LatticeClass) -> Result<bool> {
        let sq = self.square(b)?;
        if sq >= 0 {
            return Err(Error::NotNegativeClass);
        }
        if self.two_d(b)? < 0 || sq != -1 {
            return Ok(false);
        }
        Ok(self.genus_of(b).map(|g| g == 0).unwrap_or(false))
    }

    /// Index `d_A - m` of a curve with `m + 1` levels.
    pub fn level_index(&self, a: &LatticeClass, m: u32) -> Result<i64> {
        Ok(self.d_integral(a)? - i64::from(m))
    }

    /// Dimension of the stratum of curves with `m + 1` levels:
    /// `-m` if `V` is stable, `-m + |d_V|` otherwise.
    pub fn stratum_dimension(&self, v: &HypersurfaceModel, m: u32) -> Result<Ratio<i64>> {
        let dv = self.d_of(&v.class)?;
        let m = Ratio::from_integer(i64::from(m));
        Ok(if dv >= Ratio::zero() { -m } else { -m + dv.abs() })
    }

    /// Deformation witness for the area lemma: the lexicographically smallest
    /// `(t, s)` on the grid `t = 1, s = 0, 1, 2, ...` with
    /// `(t omega + s A).V > (t omega + s A).A`.
    pub fn area_deformation_witness(
        &self,
        v: &HypersurfaceModel,
        a: &LatticeClass,
        omega: &[BigRational],
    ) -> Result<(BigRational, BigRational)> {
        if omega.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                operand: "omega",
                expected: self.rank(),
                found: omega.len(),
            });
        }
        let av = self.pairing(a, &v.class)?;
        let aa = self.square(a)?;
        if !(av > aa && aa >= 0) {
            return Err(Error::AreaLemma(format!("need A.V > A.A >= 0, got A.V = {av}, A.A = {aa}")));
        }
        let om_a = self.omega_pairing(omega, a);
        let om_v = self.omega_pairing(omega, &v.class);
        if !om_a.is_positive() || !om_v.is_positive() {
            return Err(Error::AreaLemma(format!(
                "areas must be positive, got omega.A = {om_a}, omega.V = {om_v}"
            )));
        }
        let gap = BigRational::from_integer((av - aa).into());
        let deficit = &om_a - &om_v;
        let s = if deficit.is_negative() {
            BigRational::zero()
        } else {
            (deficit / &gap).floor() + BigRational::from_integer(1.into())
        };
        let t = BigRational::from_integer(1.into());
        let lhs = &t * &om_v + &s * BigRational::from_integer(av.into());
        let rhs = &t * &om_a + &s * BigRational::from_integer(aa.into());
        assert!(lhs > rhs, "area witness failed its defining inequality");
        Ok((t, s))
    }

    /// Pairing of a rational class `omega` with an integral class.
    pub fn omega_pairing(&self, omega: &[BigRational], a: &LatticeClass) -> BigRational {
        let ar: Vec<BigRational> = a
            .coords()
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        self.lattice.pairing_rational(omega, &ar)
    }
}

impl HypersurfaceModel {
    /// Checks adjunction `2g - 2 = V.V + K.V` against `m`.
    pub fn new(m: &ManifoldModel, class: LatticeClass, genus: u32) -> Result<Self> {
        m.lattice.check("hypersurface class", &class)?;
        let lhs = 2 * i64::from(genus) - 2;
        let rhs = m.square(&class)? + m.k_dot(&class)?;
        if lhs != rhs {
            return Err(Error::AdjunctionMismatch { lhs, rhs });
        }
        Ok(HypersurfaceModel { class, genus })
    }
}
