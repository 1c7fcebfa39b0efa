//! GT of a sum of exceptional classes relative to a cubic, from a table
//! filled by the genus-0 rule.
//!
//! ```bash
//! cargo run --example genus0_exceptional
//! ```

use relgt::classes::{HypersurfaceModel, ManifoldModel};
use relgt::decomp::{gt_report, InvariantTable};
use relgt::initialdata::InitialData;
use relgt::io::class_label_form;
use relgt::knownvalues::{apply_rules, RuleQuery};
use relgt::lattice::LatticeClass;

fn main() -> relgt::error::Result<()> {
    for m in 1..=5 {
        let model = ManifoldModel::blowup_of_plane(m);
        let mut cubic = vec![-1; m + 1];
        cubic[0] = 3;
        let v = HypersurfaceModel::new(&model, LatticeClass::new(cubic), 1)?;
        let es: Vec<LatticeClass> = (1..=m).map(|i| LatticeClass::basis(m + 1, i)).collect();
        let a = es.iter().fold(LatticeClass::zero(m + 1), |s, e| &s + e);

        let rules = apply_rules(&InvariantTable::new(), &model, &v, &[RuleQuery::ExceptionalSum { classes: es }]);
        let l_a = model.l_of(&v, &a)? as usize;
        let data = InitialData::upsilon(&vec![1; l_a])?;
        let g = gt_report(&model, &v, &a, &data, &rules.table)?;
        println!(
            "m = {m}: A = {}, {} rule values, GT direct {}, unit {}, literal {}",
            class_label_form(&model.lattice, &a),
            rules.applied.len(),
            g.direct.map_or("n/a".to_string(), |x| x.to_string()),
            g.unit,
            g.literal,
        );
    }
    Ok(())
}
