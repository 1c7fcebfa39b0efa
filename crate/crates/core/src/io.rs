//! File formats: the manifold document, initial data documents, class specs
//! and rational vectors.
//!
//! A manifold document is UTF-8 JSON:
//!
//! ```json
//! {
//!   "name": "P2#2",
//!   "gram": [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
//!   "labels": ["h", "E1", "E2"],
//!   "K": "-3h+E1+E2",
//!   "b1": 0,
//!   "flags": [],
//!   "hypersurface": { "class": "3h-E1-E2", "genus": 1 },
//!   "ru_table": [{ "class": "E1", "data": { "l3": [1] }, "value": 1 }],
//!   "qu_table": [],
//!   "omega": ["3", "1/2", "1/2"]
//! }
//! ```
//!
//! Classes may be written as integer arrays or as specs (see
//! [`parse_class_spec`]). Rationals are `"p/q"` strings or integers.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::classes::{HypersurfaceModel, ManifoldFlags, ManifoldModel};
use crate::decomp::{CurveRecord, InvariantTable};
use crate::error::{Error, Result};
use crate::initialdata::{Contact, InitialData, Marker};
use crate::lattice::{IntegralLattice, LatticeClass};
use crate::rimtori::{RefinedKey, RimPresentation};

/// A class written either as coordinates or as a spec string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassField {
    Coords(Vec<i64>),
    Spec(String),
}

impl ClassField {
    pub fn resolve(&self, lattice: &IntegralLattice) -> Result<LatticeClass> {
        match self {
            ClassField::Coords(v) => {
                let a = LatticeClass::new(v.clone());
                lattice.check("class", &a)?;
                Ok(a)
            }
            ClassField::Spec(s) => parse_class_spec(lattice, s),
        }
    }
}

impl From<&LatticeClass> for ClassField {
    fn from(a: &LatticeClass) -> Self {
        ClassField::Coords(a.coords().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum RationalField {
    Int(i64),
    Text(String),
}

impl RationalField {
    fn value(&self) -> Result<BigRational> {
        match self {
            RationalField::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            RationalField::Text(s) => parse_rational(s),
        }
    }
}

pub fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum MarkerField {
    Id(String),
    Full {
        #[serde(default)]
        id: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<String>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ContactField {
    Order(u32),
    Full {
        #[serde(default)]
        id: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<String>,
        s: u32,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum OrderField {
    Order(u32),
    Full { s: u32 },
}

/// Initial data as written in files. Entries without ids get `d1_0`,
/// `l2_1` and so on.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    d1: Vec<MarkerField>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    d2: Vec<MarkerField>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    l1: Vec<ContactField>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    l2: Vec<ContactField>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    l3: Vec<OrderField>,
}

impl DataDoc {
    pub fn to_data(&self) -> Result<InitialData> {
        let markers = |set: &str, v: &[MarkerField]| -> Vec<Marker> {
            v.iter()
                .enumerate()
                .map(|(i, m)| match m {
                    MarkerField::Id(id) => Marker::new(id.clone()),
                    MarkerField::Full { id, class } => Marker {
                        id: id.clone().unwrap_or_else(|| format!("{set}_{i}")),
                        class: class.clone(),
                    },
                })
                .collect()
        };
        let contacts = |set: &str, v: &[ContactField]| -> Vec<Contact> {
            v.iter()
                .enumerate()
                .map(|(i, c)| match c {
                    ContactField::Order(s) => Contact::new(format!("{set}_{i}"), *s),
                    ContactField::Full { id, class, s } => Contact {
                        id: id.clone().unwrap_or_else(|| format!("{set}_{i}")),
                        class: class.clone(),
                        s: *s,
                    },
                })
                .collect()
        };
        let l3 = self
            .l3
            .iter()
            .map(|o| match o {
                OrderField::Order(s) | OrderField::Full { s } => *s,
            })
            .collect();
        InitialData::new(
            markers("d1", &self.d1),
            markers("d2", &self.d2),
            contacts("l1", &self.l1),
            contacts("l2", &self.l2),
            l3,
        )
    }

    pub fn from_data(data: &InitialData) -> Self {
        let marker = |m: &Marker| MarkerField::Full {
            id: Some(m.id.clone()),
            class: m.class.clone(),
        };
        let contact = |c: &Contact| ContactField::Full {
            id: Some(c.id.clone()),
            class: c.class.clone(),
            s: c.s,
        };
        DataDoc {
            d1: data.d1.iter().map(marker).collect(),
            d2: data.d2.iter().map(marker).collect(),
            l1: data.l1.iter().map(contact).collect(),
            l2: data.l2.iter().map(contact).collect(),
            l3: data.l3.iter().map(|&s| OrderField::Order(s)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum DataFile {
    Wrapped { data: DataDoc },
    Bare(DataDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypersurfaceDoc {
    class: ClassField,
    genus: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuDoc {
    class: ClassField,
    #[serde(default)]
    data: DataDoc,
    value: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuDoc {
    class: ClassField,
    n: u32,
    value: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    class: ClassField,
    #[serde(default = "one")]
    multiplicity: u32,
    #[serde(default)]
    data: DataDoc,
    r: i64,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RefinedEntryDoc {
    #[serde(default)]
    rim: Vec<i64>,
    #[serde(default)]
    profile: Vec<(String, u32)>,
    value: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RefinedDoc {
    class: ClassField,
    base_value: i64,
    entries: Vec<RefinedEntryDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RimDoc {
    h1v_rank: usize,
    #[serde(default)]
    matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    refined: Option<RefinedDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifoldDoc {
    name: String,
    gram: Vec<Vec<i64>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    #[serde(rename = "K")]
    k: ClassField,
    #[serde(default)]
    b1: u32,
    #[serde(default)]
    flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hypersurface: Option<HypersurfaceDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    ru_table: Vec<RuDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    qu_table: Vec<QuDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    ru_curves: Vec<CurveDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rim: Option<RimDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Vec<RationalField>>,
}

/// Refined invariants of the lifts of one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedSection {
    pub class: LatticeClass,
    pub base_value: i64,
    pub table: BTreeMap<RefinedKey, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RimSection {
    pub presentation: RimPresentation,
    pub refined: Option<RefinedSection>,
}

/// Everything a manifold document describes.
#[derive(Clone, Debug)]
pub struct ManifoldFile {
    pub model: ManifoldModel,
    pub hypersurface: Option<HypersurfaceModel>,
    pub table: InvariantTable,
    pub rim: Option<RimSection>,
    pub omega: Option<Vec<BigRational>>,
}

impl ManifoldFile {
    pub fn new(model: ManifoldModel) -> Self {
        ManifoldFile {
            model,
            hypersurface: None,
            table: InvariantTable::new(),
            rim: None,
            omega: None,
        }
    }

    pub fn require_hypersurface(&self) -> Result<&HypersurfaceModel> {
        self.hypersurface
            .as_ref()
            .ok_or_else(|| Error::InvalidData("manifold file has no hypersurface".into()))
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_manifold(text: &str) -> Result<ManifoldFile> {
    let doc: ManifoldDoc = serde_json::from_str(text).map_err(json_error)?;
    let n = doc.gram.len();
    let labels = doc
        .labels
        .clone()
        .unwrap_or_else(|| (1..=n).map(|i| format!("x{i}")).collect());
    let lattice = IntegralLattice::new(doc.gram.clone(), labels)?;
    let k = doc.k.resolve(&lattice)?;
    let flags = ManifoldFlags::from_names(doc.flags.iter().map(String::as_str))?;
    let model = ManifoldModel::new(doc.name.clone(), lattice, k, doc.b1, flags)?;
    let lat = &model.lattice;
    let hypersurface = doc
        .hypersurface
        .as_ref()
        .map(|h| HypersurfaceModel::new(&model, h.class.resolve(lat)?, h.genus))
        .transpose()?;

    let mut table = InvariantTable::new();
    if !doc.ru_table.is_empty() || !doc.ru_curves.is_empty() {
        let v = hypersurface
            .as_ref()
            .ok_or_else(|| Error::InvalidData("ru_table needs a hypersurface".into()))?;
        for e in &doc.ru_table {
            let class = e.class.resolve(lat)?;
            let dc = e.data.to_data()?.data_class();
            if table.insert_ru(&model, v, class.clone(), dc.clone(), e.value)?.is_some() {
                return Err(Error::InvalidData(format!("duplicate ru entry for {class} {dc}")));
            }
        }
        for c in &doc.ru_curves {
            table.add_curve(CurveRecord {
                class: c.class.resolve(lat)?,
                multiplicity: c.multiplicity,
                data: c.data.to_data()?,
                r: c.r,
            });
        }
    }
    for e in &doc.qu_table {
        let class = e.class.resolve(lat)?;
        if table.insert_qu(&model, class.clone(), e.n, e.value)?.is_some() {
            return Err(Error::InvalidData(format!("duplicate qu entry for {class}, n = {}", e.n)));
        }
    }

    let rim = doc
        .rim
        .as_ref()
        .map(|r| -> Result<RimSection> {
            let presentation = RimPresentation::new(r.h1v_rank, r.matrix.clone())?;
            let refined = r
                .refined
                .as_ref()
                .map(|f| -> Result<RefinedSection> {
                    let class = f.class.resolve(lat)?;
                    let mut t = BTreeMap::new();
                    for e in &f.entries {
                        let key = RefinedKey::new(class.clone(), e.rim.clone(), e.profile.clone());
                        if let Some(v) = &hypersurface {
                            key.check(&model, v)?;
                        }
                        if t.insert(key, e.value).is_some() {
                            return Err(Error::InvalidData("duplicate refined entry".into()));
                        }
                    }
                    Ok(RefinedSection {
                        class,
                        base_value: f.base_value,
                        table: t,
                    })
                })
                .transpose()?;
            Ok(RimSection {
                presentation,
                refined,
            })
        })
        .transpose()?;

    let omega = doc
        .omega
        .as_ref()
        .map(|w| w.iter().map(RationalField::value).collect::<Result<Vec<_>>>())
        .transpose()?;
    if let Some(w) = &omega {
        if w.len() != model.rank() {
            return Err(Error::DimensionMismatch {
                operand: "omega",
                expected: model.rank(),
                found: w.len(),
            });
        }
    }
    Ok(ManifoldFile {
        model,
        hypersurface,
        table,
        rim,
        omega,
    })
}

pub fn load_manifold(path: &Path) -> Result<ManifoldFile> {
    parse_manifold(&read_file(path)?)
}

/// Serializes back to the document format, classes as coordinates.
pub fn manifold_to_json(file: &ManifoldFile) -> String {
    let m = &file.model;
    let doc = ManifoldDoc {
        name: m.name.clone(),
        gram: m.lattice.gram().to_vec(),
        labels: Some(m.lattice.labels().to_vec()),
        k: (&m.canonical).into(),
        b1: m.b1,
        flags: m.flags.names().into_iter().map(String::from).collect(),
        hypersurface: file.hypersurface.as_ref().map(|h| HypersurfaceDoc {
            class: (&h.class).into(),
            genus: h.genus,
        }),
        ru_table: file
            .table
            .ru_entries()
            .map(|(c, dc, value)| RuDoc {
                class: c.into(),
                data: DataDoc::from_data(&dc.representative()),
                value,
            })
            .collect(),
        qu_table: file
            .table
            .qu_entries()
            .map(|(c, n, value)| QuDoc {
                class: c.into(),
                n,
                value,
            })
            .collect(),
        ru_curves: file
            .table
            .curves()
            .iter()
            .map(|c| CurveDoc {
                class: (&c.class).into(),
                multiplicity: c.multiplicity,
                data: DataDoc::from_data(&c.data),
                r: c.r,
            })
            .collect(),
        rim: file.rim.as_ref().map(|r| RimDoc {
            h1v_rank: r.presentation.h1v_rank,
            matrix: r.presentation.matrix.clone(),
            refined: r.refined.as_ref().map(|f| RefinedDoc {
                class: (&f.class).into(),
                base_value: f.base_value,
                entries: f
                    .table
                    .iter()
                    .map(|(k, &value)| RefinedEntryDoc {
                        rim: k.rim_element.clone(),
                        profile: k.contact_profile.clone(),
                        value,
                    })
                    .collect(),
            }),
        }),
        omega: file
            .omega
            .as_ref()
            .map(|w| w.iter().map(|q| RationalField::Text(rational_text(q))).collect()),
    };
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

/// Initial data from a data document, optionally wrapped as `{"data": ...}`.
pub fn parse_data(text: &str) -> Result<InitialData> {
    let f: DataFile = serde_json::from_str(text).map_err(json_error)?;
    match f {
        DataFile::Wrapped { data } | DataFile::Bare(data) => data.to_data(),
    }
}

pub fn load_data(path: &Path) -> Result<InitialData> {
    parse_data(&read_file(path)?)
}

pub fn data_to_json(data: &InitialData) -> String {
    serde_json::to_string_pretty(&DataDoc::from_data(data)).expect("data serializes")
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(Error::parse(1, "empty rational"));
    }
    if let Some((_, d)) = t.split_once('/') {
        if d.trim().trim_start_matches('0').is_empty() {
            return Err(Error::parse(1, format!("zero denominator in {s:?}")));
        }
    }
    BigRational::from_str(t).map_err(|e| Error::parse(1, format!("bad rational {s:?}: {e}")))
}

fn is_numeric_list(s: &str) -> bool {
    s.chars()
        .all(|c| c.is_ascii_digit() || matches!(c, ',' | '-' | '+' | '/' | ' ' | '\t'))
}

fn strip_brackets(s: &str) -> (&str, usize) {
    let t = s.trim_start();
    let lead = s.len() - t.len();
    let t = t.trim_end();
    for (open, close) in [('[', ']'), ('(', ')')] {
        if let Some(inner) = t.strip_prefix(open).and_then(|x| x.strip_suffix(close)) {
            return (inner, lead + 1);
        }
    }
    (t, lead)
}

/// A rational vector: comma-separated rationals, or an integral class spec.
pub fn parse_rational_vector(lattice: &IntegralLattice, spec: &str) -> Result<Vec<BigRational>> {
    let (body, _) = strip_brackets(spec);
    if is_numeric_list(body) {
        let v: Vec<BigRational> = body.split(',').map(parse_rational).collect::<Result<_>>()?;
        if v.len() != lattice.rank() {
            return Err(Error::DimensionMismatch {
                operand: "vector",
                expected: lattice.rank(),
                found: v.len(),
            });
        }
        return Ok(v);
    }
    let a = parse_class_spec(lattice, spec)?;
    Ok(a.coords()
        .iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect())
}

fn normalize(label: &str) -> String {
    label.chars().filter(|&c| c != '_').collect()
}

fn resolve_label(lattice: &IntegralLattice, label: &str, column: usize) -> Result<usize> {
    if let Some(i) = lattice.label_index(label) {
        return Ok(i);
    }
    let key = normalize(label);
    let hits: Vec<usize> = lattice
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| normalize(l) == key)
        .map(|(i, _)| i)
        .collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        [] => Err(Error::parse(column, format!("unknown basis label {label:?}"))),
        _ => Err(Error::parse(column, format!("ambiguous basis label {label:?}"))),
    }
}

/// A class from a spec: comma-separated coordinates (`"1,0,-1"`, brackets
/// allowed) or an integer combination of basis labels (`"E1+E2"`,
/// `"2*T"`, `"3h - E_1"`). Parse errors carry the 1-based column.
pub fn parse_class_spec(lattice: &IntegralLattice, spec: &str) -> Result<LatticeClass> {
    let (body, offset) = strip_brackets(spec);
    if body.trim().is_empty() {
        return Err(Error::parse(1, "empty class spec"));
    }
    if body.trim() == "0" && lattice.rank() != 1 {
        return Ok(LatticeClass::zero(lattice.rank()));
    }
    if body.contains(',') || is_numeric_list(body) {
        let mut coords = Vec::new();
        let mut col = offset + 1;
        for part in body.split(',') {
            let x = part
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::parse(col, format!("bad coordinate {:?}", part.trim())))?;
            coords.push(x);
            col += part.len() + 1;
        }
        let a = LatticeClass::new(coords);
        lattice.check("class", &a)?;
        return Ok(a);
    }

    let chars: Vec<char> = body.chars().collect();
    let col = |i: usize| offset + i + 1;
    let mut coords = vec![0i64; lattice.rank()];
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let mut first = true;
    loop {
        skip_ws(&mut i);
        if i >= chars.len() {
            if first {
                return Err(Error::parse(col(i), "empty class spec"));
            }
            break;
        }
        let mut sign = 1i64;
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(Error::parse(col(i), format!("expected '+' or '-', found {:?}", chars[i])));
        }
        first = false;
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let coeff = if i > start {
            let s: String = chars[start..i].iter().collect();
            s.parse::<i64>()
                .map_err(|_| Error::parse(col(start), format!("coefficient {s} out of range")))?
        } else {
            1
        };
        skip_ws(&mut i);
        if i < chars.len() && chars[i] == '*' {
            i += 1;
            skip_ws(&mut i);
        }
        let lstart = i;
        if i >= chars.len() || !(chars[i].is_alphabetic() || chars[i] == '_') {
            return Err(Error::parse(col(i), "expected a basis label"));
        }
        while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '#') {
            i += 1;
        }
        let label: String = chars[lstart..i].iter().collect();
        let idx = resolve_label(lattice, &label, col(lstart))?;
        coords[idx] += sign * coeff;
    }
    Ok(LatticeClass::new(coords))
}

/// A class as a combination of basis labels, e.g. `3h-E_1`; `0` for zero.
pub fn class_label_form(lattice: &IntegralLattice, a: &LatticeClass) -> String {
    let mut out = String::new();
    for (x, label) in a.coords().iter().zip(lattice.labels()) {
        if *x == 0 {
            continue;
        }
        if *x < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if x.abs() != 1 {
            out.push_str(&x.abs().to_string());
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
