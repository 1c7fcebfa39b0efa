//! The K3 lattice `3H + 2(-E8)`, rational period points, Kähler chamber
//! checks, and Picard sublattice certificates.

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{IntegralLattice, LatticeClass};
use crate::linalg;

pub fn build_k3_lattice() -> IntegralLattice {
    let h = IntegralLattice::hyperbolic();
    let e = IntegralLattice::e8().negated();
    h.direct_sum(&h).direct_sum(&h).direct_sum(&e).direct_sum(&e)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

#[cfg(test)]
fn class_to_rational(a: &LatticeClass) -> Vec<BigRational> {
    a.coords().iter().map(|&x| rat(x)).collect()
}

/// A rational period `[J] = re + i im`, spanning the positive plane `E([J])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPoint {
    pub re: Vec<BigRational>,
    pub im: Vec<BigRational>,
}

impl PeriodPoint {
    /// Checks `re.re = im.im`, `re.im = 0` and `re.re > 0` in `lattice`.
    pub fn new(lattice: &IntegralLattice, re: Vec<BigRational>, im: Vec<BigRational>) -> Result<Self> {
        for (name, v) in [("re", &re), ("im", &im)] {
            if v.len() != lattice.rank() {
                return Err(Error::InvalidPeriod(format!(
                    "{name} has length {}, lattice rank is {}",
                    v.len(),
                    lattice.rank()
                )));
            }
        }
        let rr = lattice.pairing_rational(&re, &re);
        let ii = lattice.pairing_rational(&im, &im);
        let ri = lattice.pairing_rational(&re, &im);
        if rr != ii {
            return Err(Error::InvalidPeriod(format!("re.re = {rr} but im.im = {ii}")));
        }
        if !ri.is_zero() {
            return Err(Error::InvalidPeriod(format!("re.im = {ri}, expected 0")));
        }
        if !rr.is_positive() {
            return Err(Error::InvalidPeriod(format!("re.re = {rr} is not positive")));
        }
        Ok(PeriodPoint { re, im })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChamberResult {
    /// No root orthogonal to `U` and `kappa` within the bound. Not a proof.
    Pass { bound: u32 },
    Fail {
        witness: Option<LatticeClass>,
        reason: String,
    },
    /// The search could not be carried out exhaustively within the bound.
    Inconclusive { reason: String },
}

impl std::fmt::Display for ChamberResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChamberResult::Pass { bound } => write!(f, "pass(bound={bound})"),
            ChamberResult::Fail { witness: Some(d), reason } => write!(f, "fail(witness={d}): {reason}"),
            ChamberResult::Fail { witness: None, reason } => write!(f, "fail: {reason}"),
            ChamberResult::Inconclusive { reason } => write!(f, "inconclusive: {reason}"),
        }
    }
}

/// Kähler chamber check in the K3 lattice.
pub fn kahler_chamber_check(
    kappa: &[BigRational],
    u: &PeriodPoint,
    height_bound: u32,
) -> Result<ChamberResult> {
    kahler_chamber_check_in(&build_k3_lattice(), kappa, u, height_bound)
}

/// Kähler chamber check in an arbitrary lattice: `kappa` must be positive,
/// orthogonal to `U`, and orthogonal to no root `d` (`d.d = -2`) with
/// `d` orthogonal to `U` and `max |d_i| <= height_bound`.
pub fn kahler_chamber_check_in(
    lattice: &IntegralLattice,
    kappa: &[BigRational],
    u: &PeriodPoint,
    height_bound: u32,
) -> Result<ChamberResult> {
    let u = PeriodPoint::new(lattice, u.re.clone(), u.im.clone())?;
    if kappa.len() != lattice.rank() {
        return Err(Error::DimensionMismatch {
            operand: "kappa",
            expected: lattice.rank(),
            found: kappa.len(),
        });
    }
    let kk = lattice.pairing_rational(kappa, kappa);
    if !kk.is_positive() {
        return Ok(ChamberResult::Fail {
            witness: None,
            reason: format!("q(kappa, kappa) = {kk} is not positive"),
        });
    }
    for (name, w) in [("re", &u.re), ("im", &u.im)] {
        let p = lattice.pairing_rational(kappa, w);
        if !p.is_zero() {
            return Ok(ChamberResult::Fail {
                witness: None,
                reason: format!("q(kappa, {name}) = {p}, expected 0"),
            });
        }
    }
    let dirs = [&u.re, &u.im, &kappa.to_vec()].map(|w| w.clone());
    let roots = match orthogonal_roots(lattice, &dirs, height_bound) {
        Some(r) => r,
        None => {
            return Ok(ChamberResult::Inconclusive {
                reason: "complement of the positive directions is not negative definite and the box is too large"
                    .into(),
            })
        }
    };
    Ok(match roots.into_iter().next() {
        Some(d) => ChamberResult::Fail {
            reason: format!("root {d} is orthogonal to U and kappa"),
            witness: Some(d),
        },
        None => ChamberResult::Pass {
            bound: height_bound,
        },
    })
}

/// Every `d` with `d.d = -2`, `max |d_i| <= bound` and `q(d, w) = 0` for all
/// `w` in `dirs`, sorted. `None` when neither the definite reduction nor a
/// box scan of moderate size applies.
pub fn orthogonal_roots(
    lattice: &IntegralLattice,
    dirs: &[Vec<BigRational>],
    bound: u32,
) -> Option<Vec<LatticeClass>> {
    let n = lattice.rank();
    let g = linalg::to_rational(lattice.gram());
    // linear functionals x -> q(w, x)
    let funcs: Vec<Vec<BigRational>> = dirs
        .iter()
        .map(|w| {
            (0..n)
                .map(|j| (0..n).map(|i| &w[i] * &g[i][j]).sum())
                .collect()
        })
        .collect();
    let accept = |x: &[i64]| -> bool {
        let xs: Vec<BigRational> = x.iter().map(|&v| rat(v)).collect();
        lattice.pairing_rational(&xs, &xs) == rat(-2)
            && funcs.iter().all(|f| {
                f.iter().zip(x).map(|(a, &b)| a * rat(b)).sum::<BigRational>().is_zero()
            })
    };
    let mut lambda = BigRational::one();
    let mut form = None;
    for _ in 0..64 {
        let p: linalg::RatMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = -g[i][j].clone();
                        for f in &funcs {
                            v += &lambda * &f[i] * &f[j];
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        if linalg::inertia(&p) == (n, 0, 0) {
            form = Some(p);
            break;
        }
        lambda *= rat(2);
    }
    let mut out: Vec<LatticeClass> = match form {
        Some(p) => linalg::ellipsoid_points(&p, &rat(2), Some(i64::from(bound)))
            .expect("positive definite")
            .into_iter()
            .filter(|x| accept(x))
            .map(LatticeClass::new)
            .collect(),
        None => {
            let size = (2.0 * f64::from(bound) + 1.0).powi(n as i32);
            if size > 5e6 {
                return None;
            }
            lattice
                .bounded_square_classes(-2, bound)
                .classes
                .into_iter()
                .filter(|d| accept(d.coords()))
                .collect()
        }
    };
    out.sort();
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardCheck {
    pub ok: bool,
    pub r: usize,
    pub signature: (usize, usize),
    pub nullity: usize,
    pub moduli_dim: i64,
}

/// Whether the span of `basis` in the K3 lattice has signature `(1, r-1)`
/// with `r <= 20`, and the dimension `20 - r` of the corresponding moduli.
pub fn picard_signature_check(basis: &[LatticeClass]) -> Result<PicardCheck> {
    picard_signature_check_in(&build_k3_lattice(), basis)
}

pub fn picard_signature_check_in(
    lattice: &IntegralLattice,
    basis: &[LatticeClass],
) -> Result<PicardCheck> {
    for b in basis {
        lattice.check("basis vector", b)?;
    }
    let rows: Vec<Vec<i64>> = basis.iter().map(|b| b.coords().to_vec()).collect();
    let r = basis.len();
    if linalg::rank(&rows) != r {
        return Err(Error::DependentBasis);
    }
    let gram: Vec<Vec<i64>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| lattice.pairing(a, b)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let (pos, neg, zero) = linalg::inertia(&linalg::to_rational(&gram));
    Ok(PicardCheck {
        ok: r >= 1 && pos == 1 && neg == r - 1 && zero == 0 && r <= 20,
        r,
        signature: (pos, neg),
        nullity: zero,
        moduli_dim: 20 - r as i64,
    })
}

/// How a class of the K3 lattice is realized as the class of a divisor for
/// some complex structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PicCertificate {
    /// `A.A > 0`: choose a period orthogonal to `A`; `A` is then a Kähler class.
    KahlerClassRoute,
    /// `A.A = 0`, `A != 0`: hyperkähler rotation, given some `e` with `A.e > 0`.
    HyperkahlerRoute { side_condition: String },
    /// `A.A = -2`... `-1`: either `A` or `-A` is effective.
    ReflectionRoute,
    /// The zero class.
    Trivial,
    /// `A.A < -2`: no certificate.
    None,
}

impl std::fmt::Display for PicCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PicCertificate::KahlerClassRoute => write!(f, "kahler-class route"),
            PicCertificate::HyperkahlerRoute { side_condition } => {
                write!(f, "hyperkahler route ({side_condition})")
            }
            PicCertificate::ReflectionRoute => write!(f, "reflection route (A or -A effective)"),
            PicCertificate::Trivial => write!(f, "trivial (zero class)"),
            PicCertificate::None => write!(f, "none"),
        }
    }
}

pub fn pic_membership_certificate(a: &LatticeClass) -> Result<PicCertificate> {
    let l = build_k3_lattice();
    let sq = l.square(a)?;
    Ok(if a.is_zero() {
        PicCertificate::Trivial
    } else if sq > 0 {
        PicCertificate::KahlerClassRoute
    } else if sq == 0 {
        PicCertificate::HyperkahlerRoute {
            side_condition: "requires a class e with A.e > 0".into(),
        }
    } else if sq >= -2 {
        PicCertificate::ReflectionRoute
    } else {
        PicCertificate::None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn three_h() -> IntegralLattice {
        let h = IntegralLattice::hyperbolic();
        h.direct_sum(&h).direct_sum(&h)
    }

    fn e(n: usize, i: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    fn add(a: &[i64], b: &[i64], k: i64) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + k * y).collect()
    }

    #[test]
    fn k3_lattice_invariants() {
        let l = build_k3_lattice();
        assert_eq!(l.rank(), 22);
        assert_eq!(l.signature().unwrap(), (3, 19));
        assert!(l.is_even());
        assert!(l.is_unimodular());
        assert!((0..22).all(|i| l.gram()[i][i] % 2 == 0));
    }

    #[test]
    fn period_validation() {
        let l = three_h();
        // re = u1 + v1, im = u2 + v2
        let re = r(&[1, 1, 0, 0, 0, 0]);
        let im = r(&[0, 0, 1, 1, 0, 0]);
        assert!(PeriodPoint::new(&l, re.clone(), im.clone()).is_ok());
        let bad = r(&[1, 1, 1, 1, 0, 0]);
        assert!(matches!(PeriodPoint::new(&l, re.clone(), bad), Err(Error::InvalidPeriod(_))));
        let scaled = r(&[2, 1, 0, 0, 0, 0]);
        // re.re = 4, im.im = 2
        assert!(PeriodPoint::new(&l, scaled, im).is_err());
    }

    fn three_h_period() -> PeriodPoint {
        PeriodPoint::new(&three_h(), r(&[1, 1, 0, 0, 0, 0]), r(&[0, 0, 1, 1, 0, 0])).unwrap()
    }

    #[test]
    fn chamber_rejects_nonpositive_kappa() {
        let u = three_h_period();
        let k = r(&[0, 0, 0, 0, 1, -1]);
        let res = kahler_chamber_check_in(&three_h(), &k, &u, 2).unwrap();
        assert!(matches!(res, ChamberResult::Fail { witness: None, .. }));
    }

    #[test]
    fn chamber_finds_constructed_root() {
        // d = u1 - v1 is a root orthogonal to U; kappa = u3 + v3 is orthogonal to d
        let l = three_h();
        let u = three_h_period();
        let k = r(&[0, 0, 0, 0, 1, 1]);
        match kahler_chamber_check_in(&l, &k, &u, 1).unwrap() {
            ChamberResult::Fail { witness: Some(d), .. } => {
                assert_eq!(l.square(&d).unwrap(), -2);
                let ds: Vec<BigRational> = class_to_rational(&d);
                assert!(l.pairing_rational(&ds, &k).is_zero());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn chamber_passes_generic_kappa() {
        let l = three_h();
        let u = three_h_period();
        let k = r(&[1, -1, 2, -2, 5, 7]);
        assert!(l.pairing_rational(&k, &k).is_positive());
        assert_eq!(
            kahler_chamber_check_in(&l, &k, &u, 3).unwrap(),
            ChamberResult::Pass { bound: 3 }
        );
    }

    #[test]
    fn orthogonal_roots_match_box_scan() {
        let l = three_h();
        let u = three_h_period();
        let dirs = vec![u.re.clone(), u.im.clone(), r(&[0, 0, 0, 0, 1, 1])];
        let fast = orthogonal_roots(&l, &dirs, 2).unwrap();
        let slow: Vec<LatticeClass> = l
            .bounded_square_classes(-2, 2)
            .classes
            .into_iter()
            .filter(|d| {
                let ds = class_to_rational(d);
                dirs.iter().all(|w| l.pairing_rational(&ds, w).is_zero())
            })
            .collect();
        assert_eq!(fast, slow);
        assert!(!fast.is_empty());
    }

    #[test]
    fn k3_chamber_check_with_e8_roots() {
        // kappa orthogonal to every E8 root fails: kappa supported on the H part
        let n = 22;
        let re = add(&e(n, 0), &e(n, 1), 1);
        let im = add(&e(n, 2), &e(n, 3), 1);
        let u = PeriodPoint::new(&build_k3_lattice(), r(&re), r(&im)).unwrap();
        let k = r(&add(&e(n, 4), &e(n, 5), 1));
        let res = kahler_chamber_check(&k, &u, 1).unwrap();
        assert!(matches!(res, ChamberResult::Fail { witness: Some(_), .. }));
    }

    #[test]
    fn picard_examples() {
        let n = 22;
        let v = LatticeClass::new(add(&e(n, 0), &e(n, 1), 1));
        let p = picard_signature_check(&[v.clone()]).unwrap();
        assert!(p.ok);
        assert_eq!((p.r, p.moduli_dim, p.signature), (1, 19, (1, 0)));

        let h = [LatticeClass::new(e(n, 0)), LatticeClass::new(e(n, 1))];
        let p = picard_signature_check(&h).unwrap();
        assert!(p.ok);
        assert_eq!((p.r, p.moduli_dim), (2, 18));

        let in_e8: Vec<LatticeClass> = (6..9).map(|i| LatticeClass::new(e(n, i))).collect();
        let p = picard_signature_check(&in_e8).unwrap();
        assert!(!p.ok);
        assert_eq!(p.signature, (0, 3));

        assert!(matches!(picard_signature_check(&[v.clone(), v.scale(2)]), Err(Error::DependentBasis)));
    }

    #[test]
    fn certificates() {
        let n = 22;
        let a2 = LatticeClass::new(add(&e(n, 0), &e(n, 1), 1));
        assert_eq!(pic_membership_certificate(&a2).unwrap(), PicCertificate::KahlerClassRoute);
        assert!(matches!(
            pic_membership_certificate(&LatticeClass::new(e(n, 0))).unwrap(),
            PicCertificate::HyperkahlerRoute { .. }
        ));
        let root = LatticeClass::new(add(&e(n, 0), &e(n, 1), -1));
        assert_eq!(pic_membership_certificate(&root).unwrap(), PicCertificate::ReflectionRoute);
        let deep = LatticeClass::new(add(&e(n, 0), &e(n, 1), -2));
        assert_eq!(pic_membership_certificate(&deep).unwrap(), PicCertificate::None);
        assert_eq!(pic_membership_certificate(&LatticeClass::zero(n)).unwrap(), PicCertificate::Trivial);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn chamber_fail_is_monotone_in_bound(k in proptest::collection::vec(-3i64..=3, 2)) {
            let l = three_h();
            let u = three_h_period();
            // kappa in span(u3, v3) plus the anti-diagonals of the first two H
            let kappa = r(&[k[0], -k[0], k[1], -k[1], 3, 3]);
            prop_assume!(l.pairing_rational(&kappa, &kappa).is_positive());
            let small = kahler_chamber_check_in(&l, &kappa, &u, 1).unwrap();
            let large = kahler_chamber_check_in(&l, &kappa, &u, 2).unwrap();
            if matches!(small, ChamberResult::Fail { .. }) {
                let is_fail = matches!(large, ChamberResult::Fail { .. });
                prop_assert!(is_fail);
            }
        }

        #[test]
        fn picard_dimension_sums_to_twenty(seed in proptest::collection::vec(-2i64..=2, 6)) {
            let n = 22;
            let b1 = LatticeClass::new(add(&add(&e(n, 0), &e(n, 1), seed[0]), &e(n, 6), seed[1]));
            let b2 = LatticeClass::new(add(&add(&e(n, 2), &e(n, 3), seed[2]), &e(n, 14), seed[3]));
            if let Ok(p) = picard_signature_check(&[b1, b2]) {
                if p.ok {
                    prop_assert_eq!(p.r as i64 + p.moduli_dim, 20);
                }
            }
        }
    }
}
