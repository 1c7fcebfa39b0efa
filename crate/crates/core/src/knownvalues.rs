//! Theorem-backed values of relative invariants, used to populate an
//! [`InvariantTable`] before resummation.

use log::warn;

use crate::classes::{HypersurfaceModel, ManifoldModel};
use crate::decomp::{CurveRecord, InvariantTable};
use crate::error::{Error, Result};
use crate::initialdata::{is_proper, InitialData};
use crate::lattice::LatticeClass;

/// Genus-0 values on a non-rational, non-ruled manifold relative to a
/// stable `V`: only exceptional spheres contribute.
///
/// Declines (`None`) on K3-flagged models, which fall under
/// [`k3_vanishing`] instead.
pub fn ru_genus0(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
) -> Result<Option<i64>> {
    if m.flags.rational_or_ruled {
        return Err(Error::TheoremHypotheses("manifold is rational or ruled".into()));
    }
    if m.flags.k3 || !m.is_stable(v)? || a.is_zero() {
        return Ok(None);
    }
    match m.genus_of(a) {
        Ok(0) => {}
        _ => return Ok(None),
    }
    if !m.is_exceptional(a)? {
        return Ok(Some(0));
    }
    if a == &v.class {
        return Ok(Some(0));
    }
    let l = m.l_of(v, a)?;
    let upsilon_only = data.d1.is_empty()
        && data.d2.is_empty()
        && data.l1.is_empty()
        && data.l2.is_empty()
        && data.l3.len() as i64 == l
        && data.l3.iter().all(|&s| s == 1);
    Ok(Some(i64::from(l > 0 && upsilon_only)))
}

/// Empty moduli for `d_A < 0`, except for `A = V`.
pub fn ru_negative_dim(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
) -> Result<Option<i64>> {
    Ok((m.two_d(a)? < 0 && a != &v.class).then_some(0))
}

/// Checks the K3 hypotheses of [`k3_vanishing`].
pub fn k3_hypotheses(m: &ManifoldModel, v: &HypersurfaceModel) -> Result<()> {
    let fail = |msg: &str| Err(Error::TheoremHypotheses(msg.into()));
    if !m.flags.k3 {
        return fail("manifold is not flagged k3");
    }
    if !m.canonical.is_zero() {
        return fail("K3 model needs K = 0");
    }
    if m.b1 != 0 {
        return fail("K3 model needs b1 = 0");
    }
    if m.lattice.signature().ok() != Some((3, 19)) {
        return fail("K3 lattice must have signature (3,19)");
    }
    if v.genus < 1 {
        return fail("hypersurface genus must be at least 1");
    }
    if !m.flags.algebraic_hypersurface {
        return fail("hypersurface is not flagged algebraic_hypersurface");
    }
    Ok(())
}

/// On a K3 surface relative to an algebraic `V` of genus at least 1, the
/// invariant vanishes unless `A = n V`, and for `n > 1` unless `V` is
/// toroidal.
pub fn k3_vanishing(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
) -> Result<Option<i64>> {
    k3_hypotheses(m, v)?;
    m.lattice.check("A", a)?;
    match a.multiple_of(&v.class) {
        Some(n) if n >= 1 => {
            if n > 1 && !m.is_toroidal(&v.class)? {
                Ok(Some(0))
            } else {
                Ok(None)
            }
        }
        _ => Ok(Some(0)),
    }
}

/// A request for rule values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleQuery {
    Class { class: LatticeClass, data: InitialData },
    /// Every `E_i` with data `Upsilon^{E_i.V}`, contact orders 1.
    ExceptionalSum { classes: Vec<LatticeClass> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApplication {
    pub class: LatticeClass,
    pub rule: &'static str,
    pub value: i64,
    /// An explicit table entry with a different value was kept.
    pub overridden_by: Option<i64>,
}

#[derive(Clone, Debug, Default)]
pub struct RulesOutcome {
    pub table: InvariantTable,
    pub applied: Vec<RuleApplication>,
    pub warnings: Vec<String>,
}

fn first_rule(
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    a: &LatticeClass,
    data: &InitialData,
) -> Option<(&'static str, i64)> {
    let rules: [(&'static str, Result<Option<i64>>); 3] = [
        ("negative-dimension", ru_negative_dim(m, v, a)),
        ("genus-0", ru_genus0(m, v, a, data)),
        ("k3-vanishing", k3_vanishing(m, v, a)),
    ];
    rules
        .into_iter()
        .find_map(|(name, r)| r.ok().flatten().map(|x| (name, x)))
}

/// Fills `table` from the rules for each query. Explicit entries win.
pub fn apply_rules(
    table: &InvariantTable,
    m: &ManifoldModel,
    v: &HypersurfaceModel,
    queries: &[RuleQuery],
) -> RulesOutcome {
    let mut out = RulesOutcome {
        table: table.clone(),
        ..Default::default()
    };
    let mut expanded = Vec::new();
    for q in queries {
        match q {
            RuleQuery::Class { class, data } => expanded.push((class.clone(), data.clone())),
            RuleQuery::ExceptionalSum { classes } => {
                for e in classes {
                    let Ok(l) = m.l_of(v, e) else { continue };
                    let ups = vec![1u32; l.max(0) as usize];
                    expanded.push((e.clone(), InitialData::upsilon(&ups).expect("positive orders")));
                }
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for (class, data) in expanded {
        let dc = data.data_class();
        if !seen.insert((class.clone(), dc.clone())) {
            continue;
        }
        let Some((rule, value)) = first_rule(m, v, &class, &data) else {
            continue;
        };
        let existing = table.ru(&class, &dc);
        let overridden_by = existing.filter(|&x| x != value);
        if let Some(x) = overridden_by {
            let msg = format!("table value {x} for {class} {dc} kept over {rule} rule value {value}");
            warn!("{msg}");
            out.warnings.push(msg);
        }
        if existing.is_none() {
            let proper = is_proper(m, v, &class, &data).map(|r| r.is_proper()).unwrap_or(false);
            if proper {
                out.table
                    .insert_ru(m, v, class.clone(), dc, value)
                    .expect("data checked proper");
                if rule == "genus-0" && value == 1 {
                    out.table.add_curve(CurveRecord {
                        class: class.clone(),
                        multiplicity: 1,
                        data: data.clone(),
                        r: 1,
                    });
                }
            }
        }
        out.applied.push(RuleApplication {
            class,
            rule,
            value,
            overridden_by,
        });
    }
    out
}
