//! Homological decompositions `S(A)`, the `tau` split, the permutation
//! weight `Per(y)`, and the resummation of `GT` from `Ru` and `Qu` values.
//!
//! Also hosts brute-force checkers for the dimension inequalities used in
//! the compactness argument.

use std::collections::{BTreeMap, BTreeSet};

use log::{debug, warn};
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::classes::{HypersurfaceModel, ManifoldModel};
use crate::error::{Error, Result};
use crate::initialdata::{
    is_proper, partition_sign, Contact, DataClass, DataCounts, ElementRef, InitialData, Marker,
};
use crate::lattice::LatticeClass;

/// An element of `S(A)`: pairs `(A_k, m_k)`, kept sorted by class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    pub pairs: Vec<(LatticeClass, u32)>,
}

impl Decomposition {
    pub fn new(mut pairs: Vec<(LatticeClass, u32)>) -> Self {
        pairs.sort();
        Decomposition { pairs }
    }

    /// `sum m_k A_k`.
    pub fn total(&self, rank: usize) -> LatticeClass {
        self.pairs
            .iter()
            .fold(LatticeClass::zero(rank), |acc, (c, m)| &acc + &c.scale(i64::from(*m)))
    }

    /// Re-validates the four defining conditions of `S(target)`.
    pub fn check(&self, m: &ManifoldModel, target: &LatticeClass) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidData(msg));
        let classes: BTreeSet<&LatticeClass> = self.pairs.iter().map(|p| &p.0).collect();
        if classes.len() != self.pairs.len() {
            return bad("repeated class".into());
        }
        for (c, mult) in &self.pairs {
            if *mult == 0 {
                return bad(format!("zero multiplicity on {c}"));
            }
            if m.is_multiply_toroidal(c)? {
                return bad(format!("{c} is multiply toroidal"));
            }
            if *mult != 1 && m.square(c)? != 0 {
                return bad(format!("{c} has nonzero square but multiplicity {mult}"));
            }
        }
        for (i, (a, _)) in self.pairs.iter().enumerate() {
            for (b, _) in &self.pairs[i + 1..] {
                if m.pairing(a, b)? != 0 {
                    return bad(format!("{a} and {b} are not orthogonal"));
                }
            }
        }
        if &self.total(m.rank()) != target {
            return bad(format!("components sum to {}, not {target}", self.total(m.rank())));
        }
        Ok(())
    }
}

/// Options for [`enumerate_s_with`].
#[derive(Clone, Debug, Default)]
pub struct SOptions {
    /// Also require `d_{A_k} >= 0` of every component.
    pub require_nonneg_d: bool,
    /// Rational class whose pairing is used first as the bounding
    /// functional.
    pub omega: Option<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SEnumeration {
    pub decompositions: Vec<Decomposition>,
    /// False when no strictly positive functional exists on the support and
    /// multiplicities of square-zero classes had to be capped.
    pub complete: bool,
}

/// Multiplicity cap used when no bounding functional exists.
fn fallback_cap(a: &LatticeClass, support: &[LatticeClass]) -> u32 {
    let max = support
        .iter()
        .chain(std::iter::once(a))
        .flat_map(|c| c.coords().iter().map(|x| x.unsigned_abs()))
        .max()
        .unwrap_or(0);
    8 * (1 + max.min(1 << 20) as u32)
}

/// A linear functional on coordinates that is strictly positive on every
/// class of `support`.
fn positive_functional(
    m: &ManifoldModel,
    support: &[LatticeClass],
    omega: Option<&[BigRational]>,
) -> Option<Vec<BigRational>> {
    let n = m.rank();
    let eval = |f: &[BigRational], c: &LatticeClass| -> BigRational {
        f.iter()
            .zip(c.coords())
            .map(|(w, &x)| w * BigRational::from_integer(x.into()))
            .sum()
    };
    let positive = |f: &[BigRational]| support.iter().all(|c| eval(f, c).is_positive());
    if let Some(om) = omega {
        if om.len() == n {
            let f: Vec<BigRational> = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| BigRational::from_integer(m.lattice.gram()[j][i].into()) * &om[i])
                        .sum()
                })
                .collect();
            if positive(&f) {
                return Some(f);
            }
        }
    }
    for j in 0..n {
        for sign in [1i64, -1] {
            let mut f = vec![BigRational::zero(); n];
            f[j] = BigRational::from_integer(sign.into());
            if positive(&f) {
                return Some(f);
            }
        }
    }
    // perceptron; converges iff the support lies in an open half-space
    let mut w = vec![0i128; n];
    for _ in 0..10_000 {
        let miss = support.iter().find(|c| {
            w.iter().zip(c.coords()).map(|(a, &b)| a * i128::from(b)).sum::<i128>() <= 0
        });
        match miss {
            None => {
                return Some(
                    w.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect(),
                )
            }
            Some(c) => {
                for (a, &b) in w.iter_mut().zip(c.coords()) {
                    *a += i128::from(b);
                }
            }
        }
    }
    None
}

/// `S(A)` drawn from `support`.
pub fn enumerate_s(
    m: &ManifoldModel,
    a: &LatticeClass,
    support: &[LatticeClass],
) -> Result<Vec<Decomposition>> {
    Ok(enumerate_s_with(m, a, support, &SOptions::default())?.decompositions)
}

pub fn enumerate_s_with(
    m: &ManifoldModel,
    a: &LatticeClass,
    support: &[LatticeClass],
    opts: &SOptions,
) -> Result<SEnumeration> {
    m.lattice.check("A", a)?;
    let mut cands: Vec<LatticeClass> = Vec::new();
    for c in support.iter().collect::<BTreeSet<_>>() {
        m.lattice.check("support class", c)?;
        if c.is_zero() || m.is_multiply_toroidal(c)? {
            continue;
        }
        if opts.require_nonneg_d && m.two_d(c)? < 0 {
            continue;
        }
        cands.push(c.clone());
    }
    let squares: Vec<i64> = cands.iter().map(|c| m.square(c)).collect::<Result<_>>()?;
    let mut orth = vec![vec![false; cands.len()]; cands.len()];
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            orth[i][j] = m.pairing(&cands[i], &cands[j])? == 0;
        }
    }
    let functional = positive_functional(m, &cands, opts.omega.as_deref());
    let complete = functional.is_some() || !squares.contains(&0);
    if !complete {
        warn!("no positive functional on the support; capping multiplicities");
    }
    let eval = |c: &LatticeClass| -> Option<BigRational> {
        functional.as_ref().map(|f| {
            f.iter()
                .zip(c.coords())
                .map(|(w, &x)| w * BigRational::from_integer(x.into()))
                .sum()
        })
    };
    let search = Search {
        cands: &cands,
        squares: &squares,
        orth: &orth,
        fvals: cands.iter().map(|c| eval(c)).collect(),
        cap: fallback_cap(a, &cands),
    };
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    search.run(0, a.clone(), eval(a), &mut chosen, &mut out);
    let mut decompositions: Vec<Decomposition> = out.into_iter().map(Decomposition::new).collect();
    decompositions.sort();
    decompositions.dedup();
    Ok(SEnumeration {
        decompositions,
        complete,
    })
}

struct Search<'a> {
    cands: &'a [LatticeClass],
    squares: &'a [i64],
    orth: &'a [Vec<bool>],
    fvals: Vec<Option<BigRational>>,
    cap: u32,
}

impl Search<'_> {
    fn run(
        &self,
        idx: usize,
        remaining: LatticeClass,
        remaining_f: Option<BigRational>,
        chosen: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(LatticeClass, u32)>>,
    ) {
        if let Some(f) = &remaining_f {
            if f.is_negative() {
                return;
            }
            if f.is_zero() {
                // every further class has positive value
                if remaining.is_zero() {
                    out.push(chosen.iter().map(|&(i, k)| (self.cands[i].clone(), k)).collect());
                }
                return;
            }
        }
        if idx == self.cands.len() {
            if remaining.is_zero() {
                out.push(chosen.iter().map(|&(i, k)| (self.cands[i].clone(), k)).collect());
            }
            return;
        }
        self.run(idx + 1, remaining.clone(), remaining_f.clone(), chosen, out);
        if !chosen.iter().all(|&(j, _)| self.orth[idx][j]) {
            return;
        }
        let max_mult = if self.squares[idx] != 0 {
            1
        } else {
            match (&remaining_f, &self.fvals[idx]) {
                (Some(r), Some(f)) => {
                    let q = (r / f).floor().to_integer();
                    u32::try_from(q).unwrap_or(u32::MAX).min(u32::MAX - 1)
                }
                _ => self.cap,
            }
        };
        let c = &self.cands[idx];
        for k in 1..=max_mult {
            let rem = &remaining - &c.scale(i64::from(k));
            let rf = match (&remaining_f, &self.fvals[idx]) {
                (Some(r), Some(f)) => Some(r - f * BigRational::from_integer(k.into())),
                _ => None,
            };
            if rf.as_ref().is_some_and(|x| x.is_negative()) {
                break;
            }
            chosen.push((idx, k));
            self.run(idx + 1, rem, rf, chosen, out);
            chosen.pop();
        }
    }
}

/// Splits `y` into `(tau(y), rest)`: `tau` holds the pairs with
/// `A_k.A_k != 0` or `K.A_k != 0`.
pub fn tau(
    m: &ManifoldModel,
    y: &Decomposition,
) -> Result<(Vec<(LatticeClass, u32)>, Vec<(LatticeClass, u32)>)> {
    let mut t = Vec::new();
    let mut rest = Vec::new();
    for p in &y.pairs {
        if m.square(&p.0)? != 0 || m.k_dot(&p.0)? != 0 {
            t.push(p.clone());
        } else {
            rest.push(p.clone());
        }
    }
    Ok((t, rest))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PerMode {
    /// The printed formula, with `d_A!` and `l_A!` once per component.
    Literal,
    /// Symmetry factor `1 / m_k!` only.
    #[default]
    Unit,
}

impl std::str::FromStr for PerMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(PerMode::Literal),
            "unit" => Ok(PerMode::Unit),
            other => Err(Error::parse(1, format!("unknown per mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for PerMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PerMode::Literal => "literal",
            PerMode::Unit => "unit",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GtMode {
    /// `sum_h p(h) prod r` over the table's curve records.
    Direct,
    Resummed(PerMode),
}

impl Default for GtMode {
    fn default() -> Self {
        GtMode::Resummed(PerMode::Unit)
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn ratio(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `d_A` and `l_A` as they enter the literal formula. A negative `d_A`
/// forces empty point and curve data, so its factorial is taken as `0!`.
fn literal_globals(m: &ManifoldModel, v: &HypersurfaceModel, a: &LatticeClass) -> Result<(u64, u64)> {
    let d = m.d_integral(a)?;
    let l = m.l_of(v, a)?;
    Ok((d.max(0) as u64, l.max(0) as u64))
}

fn count_factorials(c: &DataCounts) -> BigInt {
    [c.d1, c.d2, c.l1, c.l2, c.l3]
        .iter()
        .map(|&x| factorial(x as u64))
        .product()
}

/// `Per(y)` for the given per-pair data counts (aligned with `y.pairs`).
/// Every pair of `y` contributes a factor.
pub fn per_factor(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    y: &Decomposition,
    counts: &[DataCounts],
    mode: PerMode,
) -> Result<BigRational> {
    if counts.len() != y.pairs.len() {
        return Err(Error::Precondition(format!(
            "{} count tuples for {} pairs",
            counts.len(),
            y.pairs.len()
        )));
    }
    let (d_a, l_a) = literal_globals(m, v, a)?;
    let total_d: u64 = counts.iter().map(|c| (c.d1 + c.d2) as u64).sum();
    let total_l: u64 = counts.iter().map(|c| (c.l1 + c.l2 + c.l3) as u64).sum();
    if total_d > 2 * d_a || total_l > l_a {
        return Err(Error::Precondition(format!(
            "data counts (d = {total_d}, l = {total_l}) exceed d_A = {d_a}, l_A = {l_a}"
        )));
    }
    let mut out = BigRational::one();
    for ((_, mult), c) in y.pairs.iter().zip(counts) {
        out /= ratio(factorial(u64::from(*mult)));
        if mode == PerMode::Literal {
            let num = factorial(d_a) * factorial(l_a);
            let den = count_factorials(c).pow(*mult);
            out *= BigRational::new(num, den);
        }
    }
    Ok(out)
}

/// A connected curve of a generic configuration together with its sign
/// `r(C, m, I)`, for direct evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub class: LatticeClass,
    pub multiplicity: u32,
    pub data: InitialData,
    pub r: i64,
}

/// Known `Ru`, `Qu` and per-curve values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantTable {
    ru: BTreeMap<(LatticeClass, DataClass), i64>,
    qu: BTreeMap<(LatticeClass, u32), i64>,
    curves: Vec<CurveRecord>,
}

impl DataClass {
    /// Initial data with fresh ids realizing this class.
    pub fn representative(&self) -> InitialData {
        let marker = |p: &str, i: usize, c: &Option<String>| Marker {
            id: format!("{p}{i}"),
            class: c.clone(),
        };
        let contact = |p: &str, i: usize, (c, s): &(Option<String>, u32)| Contact {
            id: format!("{p}{i}"),
            class: c.clone(),
            s: *s,
        };
        InitialData {
            d1: self.d1.iter().enumerate().map(|(i, c)| marker("p", i, c)).collect(),
            d2: self.d2.iter().enumerate().map(|(i, c)| marker("g", i, c)).collect(),
            l1: self.l1.iter().enumerate().map(|(i, c)| contact("x", i, c)).collect(),
            l2: self.l2.iter().enumerate().map(|(i, c)| contact("c", i, c)).collect(),
            l3: self.l3.clone(),
        }
    }
}

impl InvariantTable {
    pub fn new() -> Self {
        InvariantTable::default()
    }

    /// Inserts `Ru^V(class, dc)`; the data class must be proper for `class`.
    pub fn insert_ru(
        &mut self,
        m: &ManifoldModel,
        v: &HypersurfaceModel,
        class: LatticeClass,
        dc: DataClass,
        value: i64,
    ) -> Result<Option<i64>> {
        let report = is_proper(m, v, &class, &dc.representative())?;
        if !report.is_proper() {
            let why: Vec<String> = report.failures.iter().map(|f| f.to_string()).collect();
            return Err(Error::InvalidData(format!(
                "ru key {dc} is not proper for {class}: {}",
                why.join("; ")
            )));
        }
        Ok(self.ru.insert((class, dc), value))
    }

    /// Inserts `Qu^V(class, n)`; `class` must be primitive toroidal.
    pub fn insert_qu(
        &mut self,
        m: &ManifoldModel,
        class: LatticeClass,
        n: u32,
        value: i64,
    ) -> Result<Option<i64>> {
        if !m.is_toroidal(&class)? || class.content() != 1 {
            return Err(Error::NonPrimitiveQu(class.to_string()));
        }
        if n == 0 {
            return Err(Error::InvalidData("qu entry needs n >= 1".into()));
        }
        Ok(self.qu.insert((class, n), value))
    }

    pub fn add_curve(&mut self, record: CurveRecord) {
        self.curves.push(record);
    }

    pub fn ru(&self, class: &LatticeClass, dc: &DataClass) -> Option<i64> {
        self.ru.get(&(class.clone(), dc.clone())).copied()
    }

    pub fn qu(&self, m: &ManifoldModel, class: &LatticeClass, n: u32) -> Result<Option<i64>> {
        if !m.is_toroidal(class)? || class.content() != 1 {
            return Err(Error::NonPrimitiveQu(class.to_string()));
        }
        Ok(self.qu.get(&(class.clone(), n)).copied())
    }

    pub fn ru_entries(&self) -> impl Iterator<Item = (&LatticeClass, &DataClass, i64)> {
        self.ru.iter().map(|((c, d), v)| (c, d, *v))
    }

    pub fn qu_entries(&self) -> impl Iterator<Item = (&LatticeClass, u32, i64)> {
        self.qu.iter().map(|((c, n), v)| (c, *n, *v))
    }

    pub fn curves(&self) -> &[CurveRecord] {
        &self.curves
    }

    /// Every class carrying a table entry, sorted.
    pub fn support(&self) -> Vec<LatticeClass> {
        let s: BTreeSet<LatticeClass> = self
            .ru
            .keys()
            .map(|k| k.0.clone())
            .chain(self.qu.keys().map(|k| k.0.clone()))
            .chain(self.curves.iter().map(|c| c.class.clone()))
            .collect();
        s.into_iter().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.ru.is_empty() && self.qu.is_empty() && self.curves.is_empty()
    }
}

/// `GT^V(A)([I])` from the table.
pub fn gt_from_ru(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
    table: &InvariantTable,
    mode: GtMode,
) -> Result<BigRational> {
    match mode {
        GtMode::Direct => gt_direct(m, v, a, data, table),
        GtMode::Resummed(p) => gt_resummed(m, v, a, data, table, p),
    }
}

fn gt_resummed(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
    table: &InvariantTable,
    mode: PerMode,
) -> Result<BigRational> {
    let s = enumerate_s_with(m, a, &table.support(), &SOptions::default())?;
    if !s.complete {
        warn!("S({a}) enumeration is a bounded window");
    }
    let mut total = BigRational::zero();
    for y in &s.decompositions {
        let term = decomposition_term(m, v, a, data, table, y, mode)?;
        debug!("y = {:?}: {term}", y.pairs);
        total += term;
    }
    Ok(total)
}

struct Slot {
    class: LatticeClass,
    pair: usize,
    mult: u32,
    tau: bool,
}

fn decomposition_term(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
    table: &InvariantTable,
    y: &Decomposition,
    mode: PerMode,
) -> Result<BigRational> {
    let mut slots = Vec::new();
    for (k, (c, mult)) in y.pairs.iter().enumerate() {
        let is_tau = m.square(c)? != 0 || m.k_dot(c)? != 0;
        let copies = if is_tau { *mult } else { 1 };
        for _ in 0..copies {
            slots.push(Slot { class: c.clone(), pair: k, mult: *mult, tau: is_tau });
        }
    }
    let tau_slots: Vec<usize> = (0..slots.len()).filter(|&i| slots[i].tau).collect();
    let labeled: Vec<ElementRef> = data
        .elements()
        .into_iter()
        .filter(|e| !matches!(e, ElementRef::L3(_)))
        .collect();
    let mut upsilon: BTreeMap<u32, usize> = BTreeMap::new();
    for &s in &data.l3 {
        *upsilon.entry(s).or_default() += 1;
    }
    let upsilon: Vec<(u32, usize)> = upsilon.into_iter().collect();

    let literal = match mode {
        PerMode::Literal => Some(literal_globals(m, v, a)?),
        PerMode::Unit => None,
    };
    let mut unit_weight = BigRational::one();
    for (c, mult) in &y.pairs {
        if m.square(c)? != 0 || m.k_dot(c)? != 0 {
            unit_weight /= ratio(factorial(u64::from(*mult)));
        }
    }

    let mut total = BigRational::zero();
    let mut picks: Vec<Vec<ElementRef>> = vec![Vec::new(); slots.len()];
    let mut ups: Vec<Vec<u32>> = vec![Vec::new(); slots.len()];
    let mut ctx = TermCtx {
        m,
        v,
        table,
        slots: &slots,
        tau_slots: &tau_slots,
        labeled: &labeled,
        upsilon: &upsilon,
        data,
        literal,
        pairs: y.pairs.len(),
        unit_weight: &unit_weight,
        total: &mut total,
    };
    ctx.assign_labeled(0, &mut picks, &mut ups)?;
    Ok(total)
}

struct TermCtx<'a> {
    m: &'a ManifoldModel,
    v: &'a HypersurfaceModel,
    table: &'a InvariantTable,
    slots: &'a [Slot],
    tau_slots: &'a [usize],
    labeled: &'a [ElementRef],
    upsilon: &'a [(u32, usize)],
    data: &'a InitialData,
    literal: Option<(u64, u64)>,
    pairs: usize,
    unit_weight: &'a BigRational,
    total: &'a mut BigRational,
}

impl TermCtx<'_> {
    fn assign_labeled(
        &mut self,
        i: usize,
        picks: &mut Vec<Vec<ElementRef>>,
        ups: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if i == self.labeled.len() {
            return self.assign_upsilon(0, 0, self.upsilon.first().map_or(0, |g| g.1), picks, ups);
        }
        // labeled data only goes to tau slots; non-tau slots take Upsilon only
        for &s in self.tau_slots {
            picks[s].push(self.labeled[i]);
            self.assign_labeled(i + 1, picks, ups)?;
            picks[s].pop();
        }
        Ok(())
    }

    /// Distributes `left` copies of the `group`-th Upsilon order over slots
    /// `slot..`.
    fn assign_upsilon(
        &mut self,
        group: usize,
        slot: usize,
        left: usize,
        picks: &mut Vec<Vec<ElementRef>>,
        ups: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if group == self.upsilon.len() {
            return self.evaluate(picks, ups);
        }
        let (s, _) = self.upsilon[group];
        if slot + 1 == self.slots.len() || self.slots.is_empty() {
            if self.slots.is_empty() {
                return if left == 0 { self.evaluate(picks, ups) } else { Ok(()) };
            }
            let last = self.slots.len() - 1;
            ups[last].extend(std::iter::repeat(s).take(left));
            let next_left = self.upsilon.get(group + 1).map_or(0, |g| g.1);
            let r = self.assign_upsilon(group + 1, 0, next_left, picks, ups);
            let keep = ups[last].len() - left;
            ups[last].truncate(keep);
            return r;
        }
        for take in 0..=left {
            ups[slot].extend(std::iter::repeat(s).take(take));
            let r = self.assign_upsilon(group, slot + 1, left - take, picks, ups);
            let keep = ups[slot].len() - take;
            ups[slot].truncate(keep);
            r?;
        }
        Ok(())
    }

    fn evaluate(&mut self, picks: &[Vec<ElementRef>], ups: &[Vec<u32>]) -> Result<()> {
        if self.slots.is_empty() {
            if self.data.is_empty() {
                *self.total += self.unit_weight.clone();
            }
            return Ok(());
        }
        let mut value = BigInt::one();
        let mut per_pair_den: Vec<BigInt> = vec![BigInt::one(); self.pairs];
        for (i, slot) in self.slots.iter().enumerate() {
            let mut sub = self.data.select(&picks[i]);
            sub.l3 = ups[i].clone();
            sub.l3.sort_unstable();
            let v = if slot.tau {
                if !is_proper(self.m, self.v, &slot.class, &sub)?.is_proper() {
                    return Ok(());
                }
                per_pair_den[slot.pair] *= count_factorials(&sub.counts());
                self.table.ru(&slot.class, &sub.data_class()).unwrap_or(0)
            } else {
                let need = i64::from(slot.mult) * self.m.l_of(self.v, &slot.class)?;
                let ok = sub.d1.is_empty()
                    && sub.d2.is_empty()
                    && sub.l1.is_empty()
                    && sub.l2.is_empty()
                    && sub.l3.iter().all(|&s| s == 1)
                    && sub.l3.len() as i64 == need;
                if !ok {
                    return Ok(());
                }
                self.table.qu(self.m, &slot.class, slot.mult)?.unwrap_or(0)
            };
            if v == 0 {
                return Ok(());
            }
            value *= v;
        }
        let mut term = ratio(value) * self.unit_weight;
        if let Some((d_a, l_a)) = self.literal {
            let num = factorial(d_a) * factorial(l_a);
            let mut seen = BTreeSet::new();
            for slot in self.slots.iter().filter(|s| s.tau) {
                if seen.insert(slot.pair) {
                    term *= BigRational::new(num.clone(), per_pair_den[slot.pair].clone());
                }
            }
        }
        *self.total += term;
        Ok(())
    }
}

fn gt_direct(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
    table: &InvariantTable,
) -> Result<BigRational> {
    let mut records = Vec::new();
    for rec in table.curves() {
        if rec.multiplicity == 0 {
            continue;
        }
        if is_proper(m, v, &rec.class, &rec.data)?.is_proper() {
            records.push(rec);
        } else {
            debug!("ignoring curve record in {} with improper data", rec.class);
        }
    }
    let mut total = BigRational::zero();
    let mut chosen: Vec<usize> = Vec::new();
    direct_search(m, a, data, &records, 0, &mut chosen, &mut total)?;
    Ok(total)
}

fn direct_search(
    m: &ManifoldModel,
    a: &LatticeClass,
    data: &InitialData,
    records: &[&CurveRecord],
    idx: usize,
    chosen: &mut Vec<usize>,
    total: &mut BigRational,
) -> Result<()> {
    if idx == records.len() {
        if let Some(q) = direct_value(m, a, data, records, chosen)? {
            *total += ratio(q.into());
        }
        return Ok(());
    }
    direct_search(m, a, data, records, idx + 1, chosen, total)?;
    for &j in chosen.iter() {
        if m.pairing(&records[j].class, &records[idx].class)? != 0 {
            return Ok(());
        }
    }
    chosen.push(idx);
    direct_search(m, a, data, records, idx + 1, chosen, total)?;
    chosen.pop();
    Ok(())
}

/// `q(h)` for the configuration made of the chosen records, or `None` if
/// they do not form a point of the relative moduli space for `(A, I)`.
fn direct_value(
    m: &ManifoldModel,
    a: &LatticeClass,
    data: &InitialData,
    records: &[&CurveRecord],
    chosen: &[usize],
) -> Result<Option<i64>> {
    let total = chosen.iter().fold(LatticeClass::zero(m.rank()), |acc, &i| {
        &acc + &records[i].class.scale(i64::from(records[i].multiplicity))
    });
    if &total != a {
        return Ok(None);
    }
    let parts: Vec<InitialData> = chosen.iter().map(|&i| records[i].data.clone()).collect();
    if !data.is_disjoint_union_of(&parts) {
        return Ok(None);
    }
    let mut assignment = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        for g in &part.d2 {
            let i = data.d2.iter().position(|x| x == g).expect("checked by union");
            assignment.push((ElementRef::D2(i), k));
        }
        for g in &part.l2 {
            let i = data.l2.iter().position(|x| x == g).expect("checked by union");
            assignment.push((ElementRef::L2(i), k));
        }
    }
    let order: Vec<usize> = (0..parts.len()).collect();
    let p = partition_sign(data, &assignment, &order)?;
    let r: i64 = chosen.iter().map(|&i| records[i].r).product();
    Ok(Some(i64::from(p) * r))
}

/// `GT` in every mode, as reported by the front end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtReport {
    pub direct: Option<BigRational>,
    pub unit: BigRational,
    pub literal: BigRational,
}

impl GtReport {
    /// Literal and unit `Per` weights disagree.
    pub fn discrepancy(&self) -> bool {
        self.unit != self.literal
    }
}

pub fn gt_report(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
    table: &InvariantTable,
) -> Result<GtReport> {
    let direct = if table.curves().is_empty() {
        None
    } else {
        Some(gt_from_ru(m, v, a, data, table, GtMode::Direct)?)
    };
    Ok(GtReport {
        direct,
        unit: gt_from_ru(m, v, a, data, table, GtMode::Resummed(PerMode::Unit))?,
        literal: gt_from_ru(m, v, a, data, table, GtMode::Resummed(PerMode::Literal))?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvReport {
    /// `2 d_A`.
    pub lhs: i64,
    /// `2 d_V` (when `m >= 1`) plus `2 sum d_{A_i}`.
    pub rhs: i64,
    /// `sum_i 2 m_i A.B_i + m_i^2 + m_i`.
    pub b_terms: i64,
    /// The four rigidity conditions with whether each holds.
    pub rigidity: Vec<(&'static str, bool)>,
}

impl ConvReport {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }

    pub fn strict(&self) -> bool {
        self.lhs > self.rhs
    }

    pub fn is_equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Checks `2 d_A >= 2 d_V + 2 sum d_{A_i}` for `A = m V + sum m_i B_i + sum r_i A_i`.
///
/// Hypotheses: each `B_i` is an exceptional class, each `A_i` has
/// `d >= 0` and nonnegative square, `A.B_i >= 0`, all multiplicities are
/// positive, distinct components meet nonnegatively, `d_V >= 0` when
/// `m >= 1` and `V.V >= 0` when `m >= 2`.
pub fn conv_inequality_check(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    mult_v: u32,
    b_list: &[(LatticeClass, u32)],
    a_list: &[(LatticeClass, u32)],
) -> Result<ConvReport> {
    let fail = |msg: String| Err(Error::Precondition(msg));
    let mut a = v.class.scale(i64::from(mult_v));
    for (c, k) in b_list.iter().chain(a_list) {
        if *k == 0 {
            return fail(format!("multiplicity of {c} must be positive"));
        }
        a = &a + &c.scale(i64::from(*k));
    }
    for (b, _) in b_list {
        if m.square(b)? != -1 || m.genus_of(b)? != 0 {
            return fail(format!("B = {b} is not an exceptional class"));
        }
        if m.pairing(&a, b)? < 0 {
            return fail(format!("A.B < 0 for B = {b}"));
        }
    }
    for (c, _) in a_list {
        if m.two_d(c)? < 0 {
            return fail(format!("d < 0 for A_i = {c}"));
        }
        if m.square(c)? < 0 {
            return fail(format!("A_i = {c} has negative square"));
        }
    }
    if mult_v >= 1 && m.two_d(&v.class)? < 0 {
        return fail("d_V < 0".into());
    }
    if mult_v >= 2 && m.square(&v.class)? < 0 {
        return fail("V.V < 0 with m >= 2".into());
    }
    let mut comps: Vec<&LatticeClass> = b_list.iter().chain(a_list).map(|p| &p.0).collect();
    if mult_v >= 1 {
        comps.push(&v.class);
    }
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if m.pairing(comps[i], comps[j])? < 0 {
                return fail(format!("components {} and {} meet negatively", comps[i], comps[j]));
            }
        }
    }

    let lhs = m.two_d(&a)?;
    let mut rhs = 0;
    if mult_v >= 1 {
        rhs += m.two_d(&v.class)?;
    }
    for (c, _) in a_list {
        rhs += m.two_d(c)?;
    }
    let mut b_terms = 0;
    for (b, k) in b_list {
        let k = i64::from(*k);
        b_terms += 2 * k * m.pairing(&a, b)? + k * k + k;
    }

    let mut orth = true;
    for (i, (x, _)) in a_list.iter().enumerate() {
        for (y, _) in &a_list[i + 1..] {
            orth &= m.pairing(x, y)? == 0;
        }
        if mult_v >= 1 {
            orth &= m.pairing(x, &v.class)? == 0;
        }
    }
    let v_rigid = mult_v <= 1
        || (m.two_d(&v.class)? == 0 && m.square(&v.class)? == 0);
    let mut a_rigid = true;
    for (c, r) in a_list {
        a_rigid &= *r == 1 || (m.two_d(c)? == 0 && m.square(c)? == 0);
    }
    Ok(ConvReport {
        lhs,
        rhs,
        b_terms,
        rigidity: vec![
            ("m_i = 0 for all i", b_list.is_empty()),
            ("A_i.A_j = 0 = A_i.V for i != j", orth),
            ("m = 1 or (d_V = 0 and V.V = 0)", v_rigid),
            ("r_i = 1 or (d_{A_i} = 0 and A_i.A_i = 0)", a_rigid),
        ],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaiReport {
    /// `2 sum d_{A_i}`.
    pub sum_two_d: i64,
    /// `sum (2 d1^i + d2^i - l2^i - 2 l3^i + 2 l_{A_i})`.
    pub middle: i64,
    /// `2 d_A`.
    pub two_d_a: i64,
}

impl DaiReport {
    pub fn holds(&self) -> bool {
        self.sum_two_d >= self.middle && self.middle >= self.two_d_a
    }

    pub fn strict(&self) -> bool {
        self.sum_two_d > self.two_d_a
    }
}

/// Checks `2 sum d_{A_i} >= sum (2 d1^i + d2^i - l2^i - 2 l3^i + 2 l_{A_i}) >= 2 d_A`
/// for a split of proper data `whole` over components.
pub fn dai_sum_bound_check(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    whole: &InitialData,
    components: &[(LatticeClass, InitialData)],
) -> Result<DaiReport> {
    let fail = |msg: String| Err(Error::Precondition(msg));
    if !is_proper(m, v, a, whole)?.is_proper() {
        return fail("initial data is not proper for A".into());
    }
    let parts: Vec<InitialData> = components.iter().map(|c| c.1.clone()).collect();
    if !whole.is_disjoint_union_of(&parts) {
        return fail("component data do not partition the initial data".into());
    }
    let mut sum_l = 0;
    let mut sum_two_d = 0;
    let mut middle = 0;
    for (c, d) in components {
        let two_d = m.two_d(c)?;
        let l = m.l_of(v, c)?;
        if d.degree() > two_d - 2 * l {
            return fail(format!("component {c}: 2d1 + d2 - l2 - 2l3 exceeds 2(d - l)"));
        }
        sum_l += l;
        sum_two_d += two_d;
        middle += d.degree() + 2 * l;
    }
    let l_a = m.l_of(v, a)?;
    if sum_l < l_a {
        return fail(format!("sum of l_(A_i) = {sum_l} is below l_A = {l_a}"));
    }
    Ok(DaiReport {
        sum_two_d,
        middle,
        two_d_a: m.two_d(a)?,
    })
}

/// Multisets of pairs `(q, m)` with `sum q m = n`, each sorted, in sorted
/// order.
pub fn qu_partitions(n: u32) -> Vec<Vec<(u32, u32)>> {
    let mut pairs = Vec::new();
    for q in 1..=n {
        for mm in 1..=n / q {
            pairs.push((q, mm));
        }
    }
    fn go(
        pairs: &[(u32, u32)],
        from: usize,
        left: u32,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..pairs.len() {
            let w = pairs[i].0 * pairs[i].1;
            if w <= left {
                cur.push(pairs[i]);
                go(pairs, i, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(&pairs, 0, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::ManifoldFlags;
    use crate::lattice::IntegralLattice;
    use proptest::prelude::*;

    fn c(v: &[i64]) -> LatticeClass {
        LatticeClass::new(v.to_vec())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// `H + <-1>` with `K = E`: `u`, `v` are primitive toroidal.
    fn torus_model() -> ManifoldModel {
        let l = IntegralLattice::hyperbolic()
            .direct_sum(&IntegralLattice::diagonal(&[-1], &["E"]).unwrap());
        ManifoldModel::new("T", l, c(&[0, 0, 1]), 0, ManifoldFlags::default()).unwrap()
    }

    fn p2(m: usize) -> ManifoldModel {
        ManifoldModel::blowup_of_plane(m)
    }

    #[test]
    fn s_of_two_exceptionals() {
        let m = p2(2);
        let e1 = c(&[0, 1, 0]);
        let e2 = c(&[0, 0, 1]);
        let e12 = c(&[0, 1, 1]);
        let s = enumerate_s(&m, &e12, &[e1.clone(), e2.clone(), e12.clone()]).unwrap();
        assert_eq!(
            s,
            vec![
                Decomposition::new(vec![(e1, 1), (e2, 1)]),
                Decomposition::new(vec![(e12, 1)]),
            ]
        );
    }

    #[test]
    fn s_of_double_torus() {
        let m = torus_model();
        let t = c(&[1, 0, 0]);
        let s = enumerate_s(&m, &t.scale(2), &[t.clone(), t.scale(2)]).unwrap();
        assert_eq!(s, vec![Decomposition::new(vec![(t, 2)])]);
    }

    #[test]
    fn s_trivial_and_empty() {
        let m = p2(1);
        let e = c(&[0, 1]);
        assert_eq!(enumerate_s(&m, &e, &[e.clone()]).unwrap(), vec![Decomposition::new(vec![(e.clone(), 1)])]);
        assert!(enumerate_s(&m, &e, &[]).unwrap().is_empty());
    }

    #[test]
    fn s_without_positive_functional_is_flagged() {
        let m = torus_model();
        let t = c(&[1, 0, 0]);
        let r = enumerate_s_with(&m, &t, &[t.clone(), t.scale(-1)], &SOptions::default()).unwrap();
        assert!(!r.complete);
        assert!(r.decompositions.contains(&Decomposition::new(vec![(t, 1)])));
    }

    #[test]
    fn s_optional_nonneg_d() {
        let m = p2(2);
        let a = c(&[0, 1, -1]);
        assert_eq!(m.two_d(&a).unwrap(), -2);
        assert_eq!(enumerate_s(&m, &a, &[a.clone()]).unwrap().len(), 1);
        let strict = enumerate_s_with(
            &m,
            &a,
            &[a.clone()],
            &SOptions { require_nonneg_d: true, omega: None },
        )
        .unwrap();
        assert!(strict.decompositions.is_empty());
    }

    #[test]
    fn tau_split() {
        let m = torus_model();
        let t = c(&[1, 0, 0]);
        let e = c(&[0, 0, 1]);
        let y = Decomposition::new(vec![(t.clone(), 2), (e.clone(), 1)]);
        let (ta, rest) = tau(&m, &y).unwrap();
        assert_eq!(ta, vec![(e, 1)]);
        assert_eq!(rest, vec![(t, 2)]);
        // square zero but K.A = -2: a fiber class on a blowup-like model
        let p = p2(1);
        let f = c(&[1, -1]);
        assert_eq!(p.square(&f).unwrap(), 0);
        assert_eq!(p.k_dot(&f).unwrap(), -2);
        let (ta, _) = tau(&p, &Decomposition::new(vec![(f.clone(), 1)])).unwrap();
        assert_eq!(ta.len(), 1);
    }

    #[test]
    fn per_factor_examples() {
        let m = torus_model();
        let v = HypersurfaceModel::new(&m, c(&[0, 0, 0]), 1).unwrap();
        let t = c(&[1, 0, 0]);
        let y = Decomposition::new(vec![(t.clone(), 2)]);
        let r = per_factor(&m, &v, &t.scale(2), &y, &[DataCounts::default()], PerMode::Unit).unwrap();
        assert_eq!(r, q(1, 2));

        // single component with all the data: d_A = 2, l_A = 1, data (2 points, one upsilon)
        let p = p2(1);
        let vh = HypersurfaceModel::new(&p, c(&[1, 0]), 0).unwrap();
        let h = c(&[1, 0]);
        let y = Decomposition::new(vec![(h.clone(), 1)]);
        let counts = DataCounts { d1: 2, l3: 1, ..Default::default() };
        let lit = per_factor(&p, &vh, &h, &y, &[counts], PerMode::Literal).unwrap();
        // 2!/(2! 0!) * 1!/(0! 0! 1!)
        assert_eq!(lit, q(1, 1));
        let counts = DataCounts { d1: 1, d2: 1, ..Default::default() };
        let lit = per_factor(&p, &vh, &h, &y, &[counts], PerMode::Literal).unwrap();
        assert_eq!(lit, q(2, 1));
        assert!(per_factor(&p, &vh, &h, &y, &[], PerMode::Unit).is_err());
    }

    fn exceptional_setup(k: usize) -> (ManifoldModel, HypersurfaceModel, InvariantTable, LatticeClass, InitialData) {
        // V = 3h - E1 - ... - Ek has E_i.V = 1; genus from adjunction
        let m = p2(k);
        let mut vc = vec![-1i64; k + 1];
        vc[0] = 3;
        let vclass = c(&vc);
        let g = m.genus_of(&vclass).unwrap();
        let v = HypersurfaceModel::new(&m, vclass, g as u32).unwrap();
        let mut table = InvariantTable::new();
        let mut a = vec![0i64; k + 1];
        for i in 1..=k {
            a[i] = 1;
            let e = LatticeClass::basis(k + 1, i);
            let d = InitialData::new(vec![], vec![], vec![], vec![], vec![1]).unwrap();
            table.insert_ru(&m, &v, e.clone(), d.data_class(), 1).unwrap();
            table.add_curve(CurveRecord { class: e, multiplicity: 1, data: d, r: 1 });
        }
        let data = InitialData::upsilon(&vec![1; k]).unwrap();
        (m, v, table, c(&a), data)
    }

    #[test]
    fn gt_exceptional_sum() {
        for k in 1..=3 {
            let (m, v, table, a, data) = exceptional_setup(k);
            assert_eq!(gt_from_ru(&m, &v, &a, &data, &table, GtMode::Direct).unwrap(), q(1, 1));
            assert_eq!(gt_from_ru(&m, &v, &a, &data, &table, GtMode::default()).unwrap(), q(1, 1));
        }
        let (m, v, table, a, data) = exceptional_setup(2);
        let rep = gt_report(&m, &v, &a, &data, &table).unwrap();
        assert_eq!(rep.literal, q(4, 1));
        assert!(rep.discrepancy());
    }

    #[test]
    fn gt_empty_table_is_zero() {
        let (m, v, _, a, data) = exceptional_setup(2);
        let t = InvariantTable::new();
        assert!(gt_from_ru(&m, &v, &a, &data, &t, GtMode::default()).unwrap().is_zero());
        assert!(gt_from_ru(&m, &v, &a, &data, &t, GtMode::Direct).unwrap().is_zero());
    }

    #[test]
    fn gt_single_class_returns_table_value() {
        let (m, v, _, _, _) = exceptional_setup(1);
        let e = c(&[0, 1]);
        let d = InitialData::upsilon(&[1]).unwrap();
        let mut t = InvariantTable::new();
        t.insert_ru(&m, &v, e.clone(), d.data_class(), -3).unwrap();
        assert_eq!(gt_from_ru(&m, &v, &e, &d, &t, GtMode::default()).unwrap(), q(-3, 1));
    }

    #[test]
    fn gt_toroidal_uses_qu() {
        let m = torus_model();
        // V = E has genus 0 (E.E + K.E = -1 + -1 = -2), T.V = 0
        let v = HypersurfaceModel::new(&m, c(&[0, 0, 1]), 0).unwrap();
        let t = c(&[1, 0, 0]);
        let mut table = InvariantTable::new();
        table.insert_qu(&m, t.clone(), 2, 7).unwrap();
        let gt = gt_from_ru(&m, &v, &t.scale(2), &InitialData::empty(), &table, GtMode::default()).unwrap();
        assert_eq!(gt, q(7, 1));
        assert!(matches!(table.qu(&m, &t.scale(2), 1), Err(Error::NonPrimitiveQu(_))));
        assert!(table.insert_qu(&m, t.scale(2), 1, 1).is_err());
    }

    #[test]
    fn insert_ru_rejects_improper_key() {
        let (m, v, mut t, _, _) = exceptional_setup(1);
        let e = c(&[0, 1]);
        let bad = InitialData::upsilon(&[1, 1]).unwrap().data_class();
        assert!(t.insert_ru(&m, &v, e, bad, 1).is_err());
    }

    #[test]
    fn direct_mode_sign() {
        // one component of class h in P2#1 with two curve constraints swapped
        let p = p2(1);
        let vh = HypersurfaceModel::new(&p, c(&[1, 0]), 0).unwrap();
        let h = c(&[1, 0]);
        let g = |id: &str| Marker::new(id);
        let data = InitialData::new(vec![g("p")], vec![g("a"), g("b")], vec![], vec![], vec![1]).unwrap();
        assert!(is_proper(&p, &vh, &h, &data).unwrap().is_proper());
        let mut t = InvariantTable::new();
        t.add_curve(CurveRecord { class: h.clone(), multiplicity: 1, data: data.clone(), r: 1 });
        assert_eq!(gt_from_ru(&p, &vh, &h, &data, &t, GtMode::Direct).unwrap(), q(1, 1));
    }

    #[test]
    fn conv_examples() {
        let m = p2(2);
        let v = HypersurfaceModel::new(&m, c(&[3, -1, -1]), 1).unwrap();
        let a1 = c(&[1, 0, 0]);
        let r = conv_inequality_check(&m, &v, 0, &[], &[(a1.clone(), 1)]).unwrap();
        assert!(r.is_equality());
        assert!(r.rigidity.iter().all(|b| b.1));

        // m = 1, B = E with A.B = 0: A = V + E1 = (3, 0, -1)
        let e1 = c(&[0, 1, 0]);
        let r = conv_inequality_check(&m, &v, 1, &[(e1.clone(), 1)], &[]).unwrap();
        let a = &v.class + &e1;
        assert_eq!(m.pairing(&a, &e1).unwrap(), 0);
        assert_eq!(r.b_terms, 2);
        assert!(r.strict());

        let neg = c(&[0, 0, -1]);
        assert!(conv_inequality_check(&m, &v, 0, &[], &[(neg, 1)]).is_err());
    }

    #[test]
    fn dai_examples() {
        let p = p2(1);
        let vh = HypersurfaceModel::new(&p, c(&[1, 0]), 0).unwrap();
        let h = c(&[1, 0]);
        let whole = InitialData::new(vec![Marker::new("p"), Marker::new("q")], vec![], vec![], vec![], vec![1]).unwrap();
        let r = dai_sum_bound_check(&p, &vh, &h, &whole, &[(h.clone(), whole.clone())]).unwrap();
        assert!(r.holds());
        assert!(!r.strict());

        // E1 has l = 0 against V = h; splitting off E1 with no data costs nothing
        let e = c(&[0, 1]);
        let r = dai_sum_bound_check(
            &p,
            &vh,
            &h,
            &whole,
            &[(h.clone(), whole.clone()), (e.clone(), InitialData::empty())],
        )
        .unwrap();
        assert!(r.holds());

        // components with too little contact
        assert!(dai_sum_bound_check(&p, &vh, &h, &whole, &[(e, whole.clone())]).is_err());
    }

    #[test]
    fn dai_strict_with_slack() {
        // component class 2h has l = 2 while the data it carries expects 1
        let p = p2(1);
        let vh = HypersurfaceModel::new(&p, c(&[1, 0]), 0).unwrap();
        let h = c(&[1, 0]);
        let whole = InitialData::new(vec![Marker::new("p"), Marker::new("q")], vec![], vec![], vec![], vec![1]).unwrap();
        let r = dai_sum_bound_check(&p, &vh, &h, &whole, &[(c(&[2, 0]), whole.clone())]).unwrap();
        assert!(r.holds());
        assert!(r.strict());
    }

    #[test]
    fn qu_partition_examples() {
        assert_eq!(qu_partitions(1), vec![vec![(1, 1)]]);
        assert_eq!(
            qu_partitions(2),
            vec![vec![(1, 1), (1, 1)], vec![(1, 2)], vec![(2, 1)]]
        );
        assert_eq!(qu_partitions(3).len(), 5);
    }

    fn arb_support() -> impl Strategy<Value = Vec<LatticeClass>> {
        proptest::collection::vec(proptest::collection::vec(-1i64..=2, 3), 0..6)
            .prop_map(|v| v.into_iter().map(LatticeClass::new).collect())
    }

    proptest! {
        #[test]
        fn decompositions_satisfy_conditions(support in arb_support(), a in proptest::collection::vec(-1i64..=3, 3)) {
            let m = p2(2);
            let a = c(&a);
            for y in enumerate_s(&m, &a, &support).unwrap() {
                prop_assert!(y.check(&m, &a).is_ok(), "{:?}", y);
            }
        }

        #[test]
        fn support_monotone(support in arb_support(), extra in proptest::collection::vec(-1i64..=2, 3), a in proptest::collection::vec(-1i64..=3, 3)) {
            let m = p2(2);
            let a = c(&a);
            let small = enumerate_s(&m, &a, &support).unwrap();
            let mut bigger = support.clone();
            bigger.push(c(&extra));
            let large = enumerate_s(&m, &a, &bigger).unwrap();
            for y in small {
                prop_assert!(large.contains(&y));
            }
        }

        #[test]
        fn unit_per_of_simple_decompositions_is_one(k in 1usize..4) {
            let (m, v, _, a, _) = exceptional_setup(k);
            let y = Decomposition::new((1..=k).map(|i| (LatticeClass::basis(k + 1, i), 1)).collect());
            let counts = vec![DataCounts::default(); k];
            prop_assert_eq!(per_factor(&m, &v, &a, &y, &counts, PerMode::Unit).unwrap(), q(1, 1));
        }

        #[test]
        fn literal_reduces_to_unit_on_empty_counts(mult in 1u32..5) {
            let m = torus_model();
            let v = HypersurfaceModel::new(&m, c(&[0, 0, 1]), 0).unwrap();
            let t = c(&[1, 0, 0]);
            let a = t.scale(i64::from(mult));
            let y = Decomposition::new(vec![(t, mult)]);
            let z = [DataCounts::default()];
            prop_assert_eq!(
                per_factor(&m, &v, &a, &y, &z, PerMode::Literal).unwrap(),
                per_factor(&m, &v, &a, &y, &z, PerMode::Unit).unwrap()
            );
        }
    }
}
