//! Rim tori: rank of the group they generate, and bookkeeping for refined
//! invariants indexed by lifts of a class.

use std::collections::BTreeMap;

use num::{BigInt, One};
use serde::{Deserialize, Serialize};

use crate::classes::{HypersurfaceModel, ManifoldModel};
use crate::error::{Error, Result};
use crate::lattice::LatticeClass;
use crate::linalg;

/// The map `H_1(V) -> H_2(X \ V)` whose image is the rim tori group, in
/// chosen bases. Columns index `H_1(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RimPresentation {
    pub h1v_rank: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl RimPresentation {
    pub fn new(h1v_rank: usize, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(row) = matrix.iter().find(|r| r.len() != h1v_rank) {
            return Err(Error::DimensionMismatch {
                operand: "rim matrix row",
                expected: h1v_rank,
                found: row.len(),
            });
        }
        Ok(RimPresentation { h1v_rank, matrix })
    }

    /// Invariant factors of the map; entries above 1 are torsion in the
    /// cokernel.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        if self.h1v_rank == 0 {
            return Vec::new();
        }
        linalg::smith_invariants(&self.matrix)
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }
}

/// Rank of the rim tori group.
pub fn rim_rank(p: &RimPresentation) -> usize {
    p.invariant_factors().len()
}

/// A lift `A^` of a class: its rim tori coordinates and the contact profile
/// on `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefinedKey {
    pub base_class: LatticeClass,
    pub rim_element: Vec<i64>,
    /// Sorted `(position tag, contact order)` pairs.
    pub contact_profile: Vec<(String, u32)>,
}

impl RefinedKey {
    pub fn new(base_class: LatticeClass, rim_element: Vec<i64>, mut contact_profile: Vec<(String, u32)>) -> Self {
        contact_profile.sort();
        RefinedKey {
            base_class,
            rim_element,
            contact_profile,
        }
    }

    /// Contact orders must sum to `A.V`.
    pub fn check(&self, m: &ManifoldModel, v: &HypersurfaceModel) -> Result<()> {
        let total: i64 = self.contact_profile.iter().map(|p| i64::from(p.1)).sum();
        let l = m.l_of(v, &self.base_class)?;
        if total != l {
            return Err(Error::InvalidData(format!(
                "contact profile sums to {total}, A.V = {l}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftWindow {
    pub keys: Vec<RefinedKey>,
    pub box_bound: u32,
    /// The lifts form a torsor over the rim tori group; when it is
    /// nontrivial this list is a finite window of them.
    pub is_window: bool,
}

/// Lifts of `(A, profile)` with rim coordinates in `[-box_bound, box_bound]^r`.
pub fn enumerate_lifts(
    a: &LatticeClass,
    contact_profile: &[(String, u32)],
    rim_basis_rank: usize,
    box_bound: u32,
) -> LiftWindow {
    let b = i64::from(box_bound);
    let mut coords = vec![Vec::new()];
    for _ in 0..rim_basis_rank {
        coords = coords
            .into_iter()
            .flat_map(|c| {
                (-b..=b).map(move |x| {
                    let mut c = c.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    let mut keys: Vec<RefinedKey> = coords
        .into_iter()
        .map(|r| RefinedKey::new(a.clone(), r, contact_profile.to_vec()))
        .collect();
    keys.sort();
    LiftWindow {
        keys,
        box_bound,
        is_window: rim_basis_rank > 0,
    }
}

/// Whether the refined values sum to the unrefined one.
pub fn refined_sum_check(
    refined: &BTreeMap<RefinedKey, i64>,
    base_value: i64,
    a: &LatticeClass,
) -> Result<bool> {
    if let Some(k) = refined.keys().find(|k| &k.base_class != a) {
        return Err(Error::MixedBaseClasses(a.to_string(), k.base_class.to_string()));
    }
    let total: i128 = refined.values().map(|&v| i128::from(v)).sum();
    Ok(total == i128::from(base_value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &[i64]) -> LatticeClass {
        LatticeClass::new(v.to_vec())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rim_rank(&RimPresentation::new(0, vec![]).unwrap()), 0);
        assert_eq!(rim_rank(&RimPresentation::new(0, vec![vec![], vec![]]).unwrap()), 0);
        assert_eq!(rim_rank(&RimPresentation::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap()), 2);
        let p = RimPresentation::new(2, vec![vec![2, 0], vec![0, 0]]).unwrap();
        assert_eq!(rim_rank(&p), 1);
        assert_eq!(p.torsion(), vec![BigInt::from(2)]);
        assert!(RimPresentation::new(2, vec![vec![1]]).is_err());
    }

    #[test]
    fn lift_counts() {
        let a = c(&[1, 0]);
        let prof = vec![("p".to_string(), 1)];
        let w = enumerate_lifts(&a, &prof, 0, 3);
        assert_eq!(w.keys.len(), 1);
        assert!(!w.is_window);
        assert_eq!(enumerate_lifts(&a, &prof, 1, 2).keys.len(), 5);
        assert_eq!(enumerate_lifts(&a, &prof, 2, 1).keys.len(), 9);
    }

    #[test]
    fn refined_sum_examples() {
        let a = c(&[1, 0]);
        let keys = enumerate_lifts(&a, &[], 1, 1).keys;
        let t: BTreeMap<_, _> = [(keys[0].clone(), 2), (keys[1].clone(), -1)].into_iter().collect();
        assert!(refined_sum_check(&t, 1, &a).unwrap());
        let t: BTreeMap<_, _> = [(keys[0].clone(), 2)].into_iter().collect();
        assert!(!refined_sum_check(&t, 1, &a).unwrap());
        assert!(refined_sum_check(&BTreeMap::new(), 0, &a).unwrap());
        let other = RefinedKey::new(c(&[0, 1]), vec![0], vec![]);
        let t: BTreeMap<_, _> = [(keys[0].clone(), 1), (other, 1)].into_iter().collect();
        assert!(matches!(refined_sum_check(&t, 2, &a), Err(Error::MixedBaseClasses(_, _))));
    }

    #[test]
    fn key_profile_check() {
        let m = ManifoldModel::blowup_of_plane(1);
        let v = HypersurfaceModel::new(&m, c(&[3, 0]), 1).unwrap();
        let k = RefinedKey::new(c(&[1, 0]), vec![], vec![("a".into(), 2), ("b".into(), 1)]);
        assert!(k.check(&m, &v).is_ok());
        let k = RefinedKey::new(c(&[1, 0]), vec![], vec![("a".into(), 2)]);
        assert!(k.check(&m, &v).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (0usize..4, 0usize..4).prop_flat_map(|(cols, rows)| {
            (
                Just(cols),
                proptest::collection::vec(proptest::collection::vec(-4i64..=4, cols), rows),
            )
        })
    }

    proptest! {
        #[test]
        fn rank_bounded(m in arb_matrix()) {
            let (cols, rows) = m;
            let n_rows = rows.len();
            let p = RimPresentation::new(cols, rows).unwrap();
            prop_assert!(rim_rank(&p) <= cols.min(n_rows));
        }

        #[test]
        fn rank_invariant_under_unimodular_ops(
            m in arb_matrix(),
            ops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..12),
        ) {
            let (cols, mut rows) = m;
            let before = rim_rank(&RimPresentation::new(cols, rows.clone()).unwrap());
            for (i, j, k, on_rows) in ops {
                if on_rows && !rows.is_empty() {
                    let (i, j) = (i % rows.len(), j % rows.len());
                    if i != j {
                        let src = rows[j].clone();
                        for (x, y) in rows[i].iter_mut().zip(src) {
                            *x += k * y;
                        }
                    } else {
                        rows.swap(0, i);
                    }
                } else if cols > 0 {
                    let (i, j) = (i % cols, j % cols);
                    for r in rows.iter_mut() {
                        if i != j {
                            r[i] += k * r[j];
                        } else {
                            r[i] = -r[i];
                        }
                    }
                }
            }
            prop_assert_eq!(rim_rank(&RimPresentation::new(cols, rows.clone()).unwrap()), before);
            prop_assert_eq!(before, linalg::rank(&rows));
        }

        #[test]
        fn sum_check_accepts_own_total(vals in proptest::collection::vec(-5i64..=5, 0..9), shift in -3i64..=3) {
            let a = c(&[2, 1]);
            let keys = enumerate_lifts(&a, &[("x".to_string(), 1)], 2, 1).keys;
            let mut t: BTreeMap<RefinedKey, i64> = keys.iter().cloned().zip(vals.iter().copied()).collect();
            let total: i64 = t.values().sum();
            prop_assert!(refined_sum_check(&t, total, &a).unwrap());
            // moving weight between two keys keeps the total
            if t.len() >= 2 {
                let ks: Vec<_> = t.keys().take(2).cloned().collect();
                *t.get_mut(&ks[0]).unwrap() += shift;
                *t.get_mut(&ks[1]).unwrap() -= shift;
                prop_assert!(refined_sum_check(&t, total, &a).unwrap());
            }
        }
    }
}
