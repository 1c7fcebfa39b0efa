//! The two weightings of the resummation disagree on `E1 + E2` relative to
//! a cubic through both points; the command line reports the flag.
//!
//! ```bash
//! cargo run --example per_mode_discrepancy
//! ```

use std::path::Path;

use relgt::classes::{HypersurfaceModel, ManifoldModel};
use relgt::decomp::{enumerate_s, per_factor, InvariantTable};
use relgt::initialdata::{DataCounts, InitialData};
use relgt::knownvalues::{apply_rules, RuleQuery};
use relgt::lattice::LatticeClass;

fn main() -> relgt::error::Result<()> {
    let m = ManifoldModel::blowup_of_plane(2);
    let v = HypersurfaceModel::new(&m, LatticeClass::new(vec![3, -1, -1]), 1)?;
    let (e1, e2) = (LatticeClass::basis(3, 1), LatticeClass::basis(3, 2));
    let a = &e1 + &e2;

    let table = apply_rules(&InvariantTable::new(), &m, &v, &[RuleQuery::ExceptionalSum {
        classes: vec![e1.clone(), e2.clone()],
    }])
    .table;
    let data = InitialData::upsilon(&[1, 1])?;
    let g = relgt::decomp::gt_report(&m, &v, &a, &data, &table)?;
    println!("unit {}, literal {}, discrepancy {}", g.unit, g.literal, g.discrepancy());

    for y in enumerate_s(&m, &a, &[e1, e2, a.clone()])? {
        let counts = vec![DataCounts::default(); y.pairs.len()];
        let unit = per_factor(&m, &v, &a, &y, &counts, relgt::decomp::PerMode::Unit)?;
        let literal = per_factor(&m, &v, &a, &y, &counts, relgt::decomp::PerMode::Literal)?;
        println!("  {:?}: Per unit {unit}, literal {literal}", y.pairs);
    }

    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/p2_blowup2.json");
    let out = relgt::cli::run(["relgt", "invariant", "--manifold", file.to_str().unwrap(), "--class", "E1+E2"]);
    print!("{}", out.stdout);
    Ok(())
}
