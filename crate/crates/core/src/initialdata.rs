//! Initial data `I_A` constraining relative curves, its data class `[I_A]`,
//! properness, and the permutation sign of a split across components.
//!
//! Points and curves are opaque ids with an optional homology tag; no
//! geometry is stored. `Omega` sets are unordered, `Gamma` sets ordered.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::rational::Ratio;

use crate::classes::{HypersurfaceModel, ManifoldModel};
use crate::error::{Error, Result};
use crate::lattice::LatticeClass;

/// A point of `Omega_{d1}` or a curve of `Gamma_{d2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marker {
    pub id: String,
    pub class: Option<String>,
}

/// A point of `Omega_{l1}` or a curve of `Gamma_{l2}` on `V`, with its
/// contact order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Contact {
    pub id: String,
    pub class: Option<String>,
    pub s: u32,
}

impl Marker {
    pub fn new(id: impl Into<String>) -> Self {
        Marker { id: id.into(), class: None }
    }

    pub fn tagged(id: impl Into<String>, class: impl Into<String>) -> Self {
        Marker { id: id.into(), class: Some(class.into()) }
    }
}

impl Contact {
    pub fn new(id: impl Into<String>, s: u32) -> Self {
        Contact { id: id.into(), class: None, s }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct InitialData {
    /// `Omega_{d1}`: points of `X \ V`.
    pub d1: Vec<Marker>,
    /// `Gamma_{d2}`: ordered curves in `X \ V`.
    pub d2: Vec<Marker>,
    /// `Omega_{l1}`: points of `V` with contact orders.
    pub l1: Vec<Contact>,
    /// `Gamma_{l2}`: ordered curves on `V` with contact orders.
    pub l2: Vec<Contact>,
    /// `Upsilon`: contact orders of unconstrained copies of `V`.
    pub l3: Vec<u32>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataCounts {
    pub d1: usize,
    pub d2: usize,
    pub l1: usize,
    pub l2: usize,
    pub l3: usize,
}

/// Reference to one element of an [`InitialData`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementRef {
    D1(usize),
    D2(usize),
    L1(usize),
    L2(usize),
    L3(usize),
}

/// Element-to-component map, as a list of pairs.
pub type Assignment = Vec<(ElementRef, usize)>;

/// The data class `[I]`: everything about `I` except the identity of the
/// geometric objects. Counts, contact orders and homology tags, with the
/// `Gamma` sequences kept in order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataClass {
    pub d1: Vec<Option<String>>,
    pub d2: Vec<Option<String>>,
    pub l1: Vec<(Option<String>, u32)>,
    pub l2: Vec<(Option<String>, u32)>,
    pub l3: Vec<u32>,
}

impl DataClass {
    pub fn counts(&self) -> DataCounts {
        DataCounts {
            d1: self.d1.len(),
            d2: self.d2.len(),
            l1: self.l1.len(),
            l2: self.l2.len(),
            l3: self.l3.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts() == DataCounts::default()
    }
}

impl fmt::Display for DataClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.counts();
        write!(f, "[d1={} d2={} l1={} l2={} l3={}", c.d1, c.d2, c.l1, c.l2, c.l3)?;
        let s: Vec<u32> = self
            .l1
            .iter()
            .chain(&self.l2)
            .map(|x| x.1)
            .chain(self.l3.iter().copied())
            .collect();
        if !s.is_empty() {
            write!(f, " s={s:?}")?;
        }
        write!(f, "]")
    }
}

impl InitialData {
    /// Validates distinct ids within each set and `s >= 1` everywhere.
    pub fn new(
        d1: Vec<Marker>,
        d2: Vec<Marker>,
        l1: Vec<Contact>,
        l2: Vec<Contact>,
        l3: Vec<u32>,
    ) -> Result<Self> {
        let data = InitialData { d1, d2, l1, l2, l3 };
        data.validate()?;
        Ok(data)
    }

    pub fn empty() -> Self {
        InitialData::default()
    }

    /// Only `Upsilon` entries with the given contact orders.
    pub fn upsilon(orders: &[u32]) -> Result<Self> {
        InitialData::new(vec![], vec![], vec![], vec![], orders.to_vec())
    }

    pub fn validate(&self) -> Result<()> {
        fn distinct<'a>(set: &str, ids: impl Iterator<Item = &'a String>) -> Result<()> {
            let mut seen = BTreeSet::new();
            for id in ids {
                if !seen.insert(id) {
                    return Err(Error::InvalidData(format!("duplicate id {id:?} in {set}")));
                }
            }
            Ok(())
        }
        distinct("d1", self.d1.iter().map(|m| &m.id))?;
        distinct("d2", self.d2.iter().map(|m| &m.id))?;
        distinct("l1", self.l1.iter().map(|m| &m.id))?;
        distinct("l2", self.l2.iter().map(|m| &m.id))?;
        let zero = self.l1.iter().chain(&self.l2).any(|c| c.s == 0) || self.l3.contains(&0);
        if zero {
            return Err(Error::InvalidData("contact order s must be at least 1".into()));
        }
        Ok(())
    }

    pub fn counts(&self) -> DataCounts {
        DataCounts {
            d1: self.d1.len(),
            d2: self.d2.len(),
            l1: self.l1.len(),
            l2: self.l2.len(),
            l3: self.l3.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts() == DataCounts::default()
    }

    /// Sum of all contact orders.
    pub fn total_contact(&self) -> i64 {
        self.l1
            .iter()
            .chain(&self.l2)
            .map(|c| i64::from(c.s))
            .chain(self.l3.iter().map(|&s| i64::from(s)))
            .sum()
    }

    /// `2 d1 + d2 - l2 - 2 l3`, the constraint degree.
    pub fn degree(&self) -> i64 {
        let c = self.counts();
        2 * c.d1 as i64 + c.d2 as i64 - c.l2 as i64 - 2 * c.l3 as i64
    }

    pub fn data_class(&self) -> DataClass {
        let mut d1: Vec<_> = self.d1.iter().map(|m| m.class.clone()).collect();
        d1.sort();
        let mut l1: Vec<_> = self.l1.iter().map(|c| (c.class.clone(), c.s)).collect();
        l1.sort();
        let mut l3 = self.l3.clone();
        l3.sort_unstable();
        DataClass {
            d1,
            d2: self.d2.iter().map(|m| m.class.clone()).collect(),
            l1,
            l2: self.l2.iter().map(|c| (c.class.clone(), c.s)).collect(),
            l3,
        }
    }

    pub fn elements(&self) -> Vec<ElementRef> {
        let c = self.counts();
        (0..c.d1)
            .map(ElementRef::D1)
            .chain((0..c.d2).map(ElementRef::D2))
            .chain((0..c.l1).map(ElementRef::L1))
            .chain((0..c.l2).map(ElementRef::L2))
            .chain((0..c.l3).map(ElementRef::L3))
            .collect()
    }

    fn contains_ref(&self, e: ElementRef) -> bool {
        let c = self.counts();
        match e {
            ElementRef::D1(i) => i < c.d1,
            ElementRef::D2(i) => i < c.d2,
            ElementRef::L1(i) => i < c.l1,
            ElementRef::L2(i) => i < c.l2,
            ElementRef::L3(i) => i < c.l3,
        }
    }

    /// Sub-data made of the listed elements, keeping the original order
    /// within each set.
    pub fn select(&self, picks: &[ElementRef]) -> InitialData {
        let mut picks = picks.to_vec();
        picks.sort();
        let mut out = InitialData::default();
        for e in picks {
            match e {
                ElementRef::D1(i) => out.d1.push(self.d1[i].clone()),
                ElementRef::D2(i) => out.d2.push(self.d2[i].clone()),
                ElementRef::L1(i) => out.l1.push(self.l1[i].clone()),
                ElementRef::L2(i) => out.l2.push(self.l2[i].clone()),
                ElementRef::L3(i) => out.l3.push(self.l3[i]),
            }
        }
        out
    }

    /// Whether `parts` are pairwise disjoint with union `self`: the same
    /// points and curves (by id and contact order) and the same multiset of
    /// `Upsilon` orders.
    pub fn is_disjoint_union_of(&self, parts: &[InitialData]) -> bool {
        fn same<T: Ord + Clone>(whole: &[T], parts: Vec<&T>) -> bool {
            let mut a: Vec<T> = whole.to_vec();
            let mut b: Vec<T> = parts.into_iter().cloned().collect();
            a.sort();
            b.sort();
            a == b
        }
        same(&self.d1, parts.iter().flat_map(|p| &p.d1).collect())
            && same(&self.d2, parts.iter().flat_map(|p| &p.d2).collect())
            && same(&self.l1, parts.iter().flat_map(|p| &p.l1).collect())
            && same(&self.l2, parts.iter().flat_map(|p| &p.l2).collect())
            && same(&self.l3, parts.iter().flat_map(|p| &p.l3).collect())
    }
}

/// A failed properness clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProperFailure {
    /// `d_A < 0` but the data is not empty.
    NonEmptyForNegativeDimension,
    /// Clause (i): `0 <= d1 <= d_A`, `0 <= d2 <= 2 d_A`, `2 d1 + d2 <= 2 d_A`.
    Bounds(String),
    /// Clause (ii): `2 d1 + d2 - l2 - 2 l3 = 2 (d_A - l_A)`.
    Balance { degree: i64, expected: i64 },
    /// Clause (iii): `A.V = sum s_i`.
    ContactSum { l_a: i64, total: i64 },
}

impl fmt::Display for ProperFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProperFailure::NonEmptyForNegativeDimension => {
                write!(f, "d_A < 0 requires empty initial data")
            }
            ProperFailure::Bounds(msg) => write!(f, "clause (i) fails: {msg}"),
            ProperFailure::Balance { degree, expected } => write!(
                f,
                "clause (ii) fails: 2d1 + d2 - l2 - 2l3 = {degree}, 2(d_A - l_A) = {expected}"
            ),
            ProperFailure::ContactSum { l_a, total } => {
                write!(f, "clause (iii) fails: A.V = {l_a}, sum of contact orders = {total}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperReport {
    pub d_a: Ratio<i64>,
    pub l_a: i64,
    pub failures: Vec<ProperFailure>,
}

impl ProperReport {
    pub fn is_proper(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks whether `data` is proper initial data for `a`.
pub fn is_proper(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
) -> Result<ProperReport> {
    let two_d = m.two_d(a)?;
    let l_a = m.l_of(v, a)?;
    let mut failures = Vec::new();
    if two_d < 0 {
        if !data.is_empty() {
            failures.push(ProperFailure::NonEmptyForNegativeDimension);
        }
    } else {
        let c = data.counts();
        let (d1, d2) = (c.d1 as i64, c.d2 as i64);
        let mut bounds = Vec::new();
        if 2 * d1 > two_d {
            bounds.push(format!("d1 = {d1} exceeds d_A"));
        }
        if d2 > two_d {
            bounds.push(format!("d2 = {d2} exceeds 2 d_A = {two_d}"));
        }
        if 2 * d1 + d2 > two_d {
            bounds.push(format!("2 d1 + d2 = {} exceeds 2 d_A = {two_d}", 2 * d1 + d2));
        }
        if !bounds.is_empty() {
            failures.push(ProperFailure::Bounds(bounds.join("; ")));
        }
        let degree = data.degree();
        let expected = two_d - 2 * l_a;
        if degree != expected {
            failures.push(ProperFailure::Balance { degree, expected });
        }
        let total = data.total_contact();
        if total != l_a {
            failures.push(ProperFailure::ContactSum { l_a, total });
        }
    }
    Ok(ProperReport {
        d_a: Ratio::new(two_d, 2),
        l_a,
        failures,
    })
}

/// For `d_A = 0`: proper iff there are no point or curve constraints, and the
/// data is exactly `A.V` copies of `V` with contact order 1.
pub fn dzero_characterization(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
) -> Result<bool> {
    if m.two_d(a)? != 0 {
        return Err(Error::Precondition(format!("d_A of {a} is not zero")));
    }
    let c = data.counts();
    let l_a = m.l_of(v, a)?;
    let holds = c.d1 == 0
        && c.d2 == 0
        && c.l1 == 0
        && c.l2 == 0
        && c.l3 as i64 == l_a
        && data.l3.iter().all(|&s| s == 1);
    debug_assert_eq!(holds, is_proper(m, v, a, data)?.is_proper());
    Ok(holds)
}

pub fn same_class(a: &InitialData, b: &InitialData) -> bool {
    a.data_class() == b.data_class()
}

/// Contact orders of an `m`-fold covered square-zero torus: the tuple
/// `(1, ..., 1)` of length `m` at each intersection point.
pub fn toroidal_contact_orders(m: u32, intersection_count: usize) -> Vec<Vec<u32>> {
    vec![vec![1; m as usize]; intersection_count]
}

/// Every component's `d2^k + l2^k` is even.
pub fn partition_parity_check(components: &[(usize, usize)]) -> bool {
    components.iter().all(|(d2, l2)| (d2 + l2) % 2 == 0)
}

/// Sign of a permutation given as a sequence of distinct `0..n` indices.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// The sign `p(h) = sign(pi_d2) sign(pi_l2)` of a split of the `Gamma` data
/// across components.
///
/// Each component's `Gamma` elements are listed in ascending reference order,
/// and the blocks are concatenated in `component_order`.
pub fn partition_sign(
    data: &InitialData,
    assignment: &[(ElementRef, usize)],
    component_order: &[usize],
) -> Result<i8> {
    let c = data.counts();
    let mut d2_comp: Vec<Option<usize>> = vec![None; c.d2];
    let mut l2_comp: Vec<Option<usize>> = vec![None; c.l2];
    for &(e, k) in assignment {
        let slot = match e {
            ElementRef::D2(i) if i < c.d2 => &mut d2_comp[i],
            ElementRef::L2(i) if i < c.l2 => &mut l2_comp[i],
            ElementRef::D2(_) | ElementRef::L2(_) => {
                return Err(Error::Assignment(format!("{e:?} is out of range")))
            }
            _ => continue,
        };
        if slot.replace(k).is_some() {
            return Err(Error::Assignment(format!("{e:?} assigned twice")));
        }
    }
    let order_pos: BTreeMap<usize, usize> =
        component_order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    if order_pos.len() != component_order.len() {
        return Err(Error::Assignment("component order repeats a component".into()));
    }
    let mut per_comp: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (set, comps) in [("d2", &d2_comp), ("l2", &l2_comp)] {
        for (i, k) in comps.iter().enumerate() {
            let k = k.ok_or_else(|| {
                Error::Assignment(format!("{set} element {i} has no component (partial assignment)"))
            })?;
            if !order_pos.contains_key(&k) {
                return Err(Error::Assignment(format!("component {k} missing from component order")));
            }
            let e = per_comp.entry(k).or_default();
            if set == "d2" {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    let counts: Vec<(usize, usize)> = per_comp.values().copied().collect();
    if !partition_parity_check(&counts) {
        return Err(Error::Precondition("some component has odd d2 + l2".into()));
    }
    let block_perm = |comps: &[Option<usize>]| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..comps.len()).collect();
        idx.sort_by_key(|&i| (order_pos[&comps[i].expect("checked above")], i));
        idx
    };
    Ok(permutation_sign(&block_perm(&d2_comp)) * permutation_sign(&block_perm(&l2_comp)))
}

/// Splits `data` into `k` disjoint pieces following `assignment`.
pub fn partition_data(
    data: &InitialData,
    k: usize,
    assignment: &[(ElementRef, usize)],
) -> Result<Vec<InitialData>> {
    let mut picks: Vec<Vec<ElementRef>> = vec![Vec::new(); k];
    let mut seen = BTreeSet::new();
    for &(e, comp) in assignment {
        if !data.contains_ref(e) {
            return Err(Error::Assignment(format!("{e:?} is not an element of the data")));
        }
        if comp >= k {
            return Err(Error::Assignment(format!("component {comp} out of range for k = {k}")));
        }
        if !seen.insert(e) {
            return Err(Error::Assignment(format!("{e:?} assigned to more than one component")));
        }
        picks[comp].push(e);
    }
    if let Some(missing) = data.elements().into_iter().find(|e| !seen.contains(e)) {
        return Err(Error::Assignment(format!("{missing:?} is not assigned")));
    }
    Ok(picks.iter().map(|p| data.select(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn c(v: &[i64]) -> LatticeClass {
        LatticeClass::new(v.to_vec())
    }

    fn p2(m: usize) -> ManifoldModel {
        ManifoldModel::blowup_of_plane(m)
    }

    fn markers(prefix: &str, n: usize) -> Vec<Marker> {
        (0..n).map(|i| Marker::new(format!("{prefix}{i}"))).collect()
    }

    fn contacts(prefix: &str, s: &[u32]) -> Vec<Contact> {
        s.iter().enumerate().map(|(i, &s)| Contact::new(format!("{prefix}{i}"), s)).collect()
    }

    #[test]
    fn exceptional_with_upsilon_is_proper() {
        let m = p2(1);
        let v = HypersurfaceModel::new(&m, c(&[4, -2]), 2).unwrap();
        let e = c(&[0, 1]);
        assert_eq!(m.l_of(&v, &e).unwrap(), 2);
        let r = is_proper(&m, &v, &e, &InitialData::upsilon(&[1, 1]).unwrap()).unwrap();
        assert!(r.is_proper(), "{:?}", r.failures);
    }

    #[test]
    fn d_zero_with_a_point_fails_clause_one() {
        let m = p2(1);
        let v = HypersurfaceModel::new(&m, c(&[3, 0]), 1).unwrap();
        let e = c(&[0, 1]);
        let data = InitialData::new(markers("p", 1), vec![], vec![], vec![], vec![]).unwrap();
        let r = is_proper(&m, &v, &e, &data).unwrap();
        assert!(matches!(r.failures[0], ProperFailure::Bounds(_)));
    }

    #[test]
    fn balanced_data_is_proper() {
        // d_A = 2, l_A = 1: the line h against V = E1... use V with h.V = 1:
        // V = h has genus 0 and h.h = 1.
        let m = p2(1);
        let v = HypersurfaceModel::new(&m, c(&[1, 0]), 0).unwrap();
        let a = c(&[1, 0]);
        assert_eq!(m.d_of(&a).unwrap(), Ratio::from_integer(2));
        assert_eq!(m.l_of(&v, &a).unwrap(), 1);
        let data = InitialData::new(markers("p", 2), vec![], vec![], vec![], vec![1]).unwrap();
        let r = is_proper(&m, &v, &a, &data).unwrap();
        assert!(r.is_proper(), "{:?}", r.failures);
    }

    #[test]
    fn negative_dimension_requires_empty_data() {
        let m = p2(1);
        let v = HypersurfaceModel::new(&m, c(&[3, 0]), 1).unwrap();
        let a = c(&[0, -1]); // d = (-1 - 1)/2 = -1
        assert!(is_proper(&m, &v, &a, &InitialData::empty()).unwrap().is_proper());
        let r = is_proper(&m, &v, &a, &InitialData::upsilon(&[1]).unwrap()).unwrap();
        assert_eq!(r.failures, vec![ProperFailure::NonEmptyForNegativeDimension]);
    }

    #[test]
    fn dzero_examples() {
        let m = p2(1);
        // V = 5h - 3E1? need E.V = 3: V = a h - 3 E1 with genus g
        // 2g - 2 = a^2 - 9 - 3a + 3 -> a = 5: 25 - 9 - 15 + 3 = 4 -> g = 3
        let v = HypersurfaceModel::new(&m, c(&[5, -3]), 3).unwrap();
        let e = c(&[0, 1]);
        assert_eq!(m.l_of(&v, &e).unwrap(), 3);
        assert!(dzero_characterization(&m, &v, &e, &InitialData::upsilon(&[1, 1, 1]).unwrap()).unwrap());
        assert!(!dzero_characterization(&m, &v, &e, &InitialData::upsilon(&[1, 2, 1]).unwrap()).unwrap());
        let with_l1 = InitialData::new(vec![], vec![], contacts("x", &[1]), vec![], vec![1, 1]).unwrap();
        assert!(!dzero_characterization(&m, &v, &e, &with_l1).unwrap());
        assert!(dzero_characterization(&m, &v, &c(&[1, 0]), &InitialData::empty()).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(InitialData::new(vec![Marker::new("p"), Marker::new("p")], vec![], vec![], vec![], vec![]).is_err());
        assert!(InitialData::upsilon(&[0]).is_err());
        assert!(InitialData::new(vec![], vec![], vec![Contact::new("x", 0)], vec![], vec![]).is_err());
    }

    #[test]
    fn same_class_examples() {
        let a = InitialData::new(vec![], vec![], vec![], vec![], vec![1, 2]).unwrap();
        assert!(same_class(&a, &a));
        let b = InitialData::upsilon(&[1, 1]).unwrap();
        assert!(!same_class(&a, &b));
        let g = InitialData::new(
            vec![],
            vec![Marker::tagged("g1", "T"), Marker::tagged("g2", "F")],
            vec![],
            vec![],
            vec![],
        )
        .unwrap();
        let mut g_rev = g.clone();
        g_rev.d2.reverse();
        assert!(!same_class(&g, &g_rev));
        // moving a point to another point of the same class keeps the class
        let p = InitialData::new(vec![Marker::new("p")], vec![], vec![], vec![], vec![]).unwrap();
        let q = InitialData::new(vec![Marker::new("q")], vec![], vec![], vec![], vec![]).unwrap();
        assert!(same_class(&p, &q));
    }

    #[test]
    fn toroidal_contacts() {
        assert_eq!(toroidal_contact_orders(3, 2), vec![vec![1, 1, 1], vec![1, 1, 1]]);
        assert_eq!(toroidal_contact_orders(1, 2), vec![vec![1], vec![1]]);
        assert!(toroidal_contact_orders(4, 0).is_empty());
    }

    #[test]
    fn parity_examples() {
        assert!(partition_parity_check(&[(2, 0), (0, 2)]));
        assert!(partition_parity_check(&[(1, 1)]));
        assert!(!partition_parity_check(&[(1, 0)]));
    }

    #[test]
    fn sign_single_component_is_plus() {
        let data = InitialData::new(vec![], markers("g", 4), vec![], vec![], vec![]).unwrap();
        let asg: Assignment = (0..4).map(|i| (ElementRef::D2(i), 0)).collect();
        assert_eq!(partition_sign(&data, &asg, &[0]).unwrap(), 1);
    }

    #[test]
    fn sign_interleaved_blocks() {
        let data = InitialData::new(vec![], markers("g", 4), vec![], vec![], vec![]).unwrap();
        let asg: Assignment = vec![
            (ElementRef::D2(0), 0),
            (ElementRef::D2(2), 0),
            (ElementRef::D2(1), 1),
            (ElementRef::D2(3), 1),
        ];
        assert_eq!(partition_sign(&data, &asg, &[0, 1]).unwrap(), -1);
        assert_eq!(partition_sign(&data, &asg, &[1, 0]).unwrap(), -1);
    }

    #[test]
    fn sign_rejects_partial_assignment() {
        let data = InitialData::new(vec![], markers("g", 2), vec![], vec![], vec![]).unwrap();
        let asg: Assignment = vec![(ElementRef::D2(0), 0)];
        assert!(matches!(partition_sign(&data, &asg, &[0]), Err(Error::Assignment(_))));
    }

    #[test]
    fn sign_rejects_odd_components() {
        let data = InitialData::new(vec![], markers("g", 2), vec![], vec![], vec![]).unwrap();
        let asg: Assignment = vec![(ElementRef::D2(0), 0), (ElementRef::D2(1), 1)];
        assert!(matches!(partition_sign(&data, &asg, &[0, 1]), Err(Error::Precondition(_))));
    }

    #[test]
    fn permutation_sign_basics() {
        assert_eq!(permutation_sign(&[]), 1);
        assert_eq!(permutation_sign(&[1, 0]), -1);
        assert_eq!(permutation_sign(&[0, 2, 1, 3]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }

    /// Every way to give `n` ordered Gamma elements a type (d2 or l2) and
    /// split them into blocks of even `d2 + l2`: the sign must not depend on
    /// the order of the blocks. Brute force over set partitions.
    #[test]
    fn sign_independent_of_block_order_exhaustive() {
        for n in 0..=6usize {
            for types in 0..(1u32 << n) {
                let n_d2 = (0..n).filter(|i| types & (1 << i) == 0).count();
                let data = InitialData::new(
                    vec![],
                    markers("g", n_d2),
                    vec![],
                    contacts("c", &vec![1; n - n_d2]),
                    vec![],
                )
                .unwrap();
                let refs: Vec<ElementRef> = {
                    let (mut di, mut li) = (0, 0);
                    (0..n)
                        .map(|i| {
                            if types & (1 << i) == 0 {
                                di += 1;
                                ElementRef::D2(di - 1)
                            } else {
                                li += 1;
                                ElementRef::L2(li - 1)
                            }
                        })
                        .collect()
                };
                for blocks in set_partitions(n) {
                    if blocks.iter().any(|b| b.len() % 2 == 1) {
                        continue;
                    }
                    let mut asg = Assignment::new();
                    for (k, b) in blocks.iter().enumerate() {
                        for &i in b {
                            asg.push((refs[i], k));
                        }
                    }
                    let signs: BTreeSet<i8> = (0..blocks.len())
                        .permutations(blocks.len())
                        .map(|order| partition_sign(&data, &asg, &order).unwrap())
                        .collect();
                    assert_eq!(signs.len(), 1, "n={n} types={types:b} blocks={blocks:?}");
                }
            }
        }
    }

    fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![vec![]];
        for i in 0..n {
            let mut next = Vec::new();
            for p in out {
                for j in 0..p.len() {
                    let mut q: Vec<Vec<usize>> = p.clone();
                    q[j].push(i);
                    next.push(q);
                }
                let mut q = p.clone();
                q.push(vec![i]);
                next.push(q);
            }
            out = next;
        }
        out
    }

    #[test]
    fn partition_data_examples() {
        let data = InitialData::upsilon(&[1, 1]).unwrap();
        let all: Assignment = data.elements().into_iter().map(|e| (e, 0)).collect();
        assert_eq!(partition_data(&data, 1, &all).unwrap(), vec![data.clone()]);
        let split: Assignment = vec![(ElementRef::L3(0), 0), (ElementRef::L3(1), 1)];
        let parts = partition_data(&data, 2, &split).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.counts().l3 == 1));
        let missing: Assignment = vec![(ElementRef::L3(0), 0)];
        assert!(matches!(partition_data(&data, 2, &missing), Err(Error::Assignment(_))));
        let twice: Assignment = vec![(ElementRef::L3(0), 0), (ElementRef::L3(0), 1), (ElementRef::L3(1), 1)];
        assert!(matches!(partition_data(&data, 2, &twice), Err(Error::Assignment(_))));
    }

    fn arb_data() -> impl Strategy<Value = InitialData> {
        (0usize..3, 0usize..3, proptest::collection::vec(1u32..3, 0..3), proptest::collection::vec(1u32..3, 0..3), proptest::collection::vec(1u32..3, 0..3))
            .prop_map(|(d1, d2, l1, l2, l3)| {
                InitialData::new(markers("p", d1), markers("g", d2), contacts("x", &l1), contacts("c", &l2), l3).unwrap()
            })
    }

    proptest! {
        #[test]
        fn partition_then_union_reconstructs(data in arb_data(), seed in proptest::collection::vec(0usize..3, 15)) {
            let asg: Assignment = data.elements().into_iter().zip(seed).map(|(e, k)| (e, k)).collect();
            prop_assume!(asg.len() == data.elements().len());
            let parts = partition_data(&data, 3, &asg).unwrap();
            prop_assert!(data.is_disjoint_union_of(&parts));
        }

        #[test]
        fn same_class_is_an_equivalence(a in arb_data(), b in arb_data(), cc in arb_data()) {
            prop_assert!(same_class(&a, &a));
            prop_assert_eq!(same_class(&a, &b), same_class(&b, &a));
            if same_class(&a, &b) && same_class(&b, &cc) {
                prop_assert!(same_class(&a, &cc));
            }
        }

        #[test]
        fn proper_data_bounds_contact_count(
            a in proptest::collection::vec(-3i64..=3, 2),
            data in arb_data(),
        ) {
            let m = p2(1);
            let v = HypersurfaceModel::new(&m, c(&[3, 0]), 1).unwrap();
            let a = c(&a);
            if is_proper(&m, &v, &a, &data).unwrap().is_proper() {
                let cnt = data.counts();
                prop_assert!((cnt.l1 + cnt.l2 + cnt.l3) as i64 <= m.l_of(&v, &a).unwrap());
            }
        }
    }
}
