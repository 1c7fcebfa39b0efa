//! Rim tori rank of a presentation and a refined table over lifts of a
//! class, read from a manifold document.
//!
//! ```bash
//! cargo run --example rim_tori
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use relgt::io::{class_label_form, load_manifold};
use relgt::rimtori::{enumerate_lifts, refined_sum_check, rim_rank, RimPresentation};

fn main() -> relgt::error::Result<()> {
    for (name, rows) in [
        ("identity", vec![vec![1, 0], vec![0, 1]]),
        ("degenerate", vec![vec![2, 4], vec![1, 2]]),
        ("torsion", vec![vec![2, 0], vec![0, 3]]),
    ] {
        let p = RimPresentation::new(2, rows)?;
        println!("{name}: rank {}, invariant factors {:?}", rim_rank(&p), p.invariant_factors());
    }

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/torus_fibration.json");
    let file = load_manifold(&path)?;
    let rim = file.rim.as_ref().expect("document has a rim section");
    let refined = rim.refined.as_ref().expect("document has a refined table");
    println!(
        "{}: rim rank {}, refined table for {} with {} entries sums correctly: {}",
        file.model.name,
        rim_rank(&rim.presentation),
        class_label_form(&file.model.lattice, &refined.class),
        refined.table.len(),
        refined_sum_check(&refined.table, refined.base_value, &refined.class)?,
    );

    // spread a value of 3 over a window of lifts
    let window = enumerate_lifts(&refined.class, &[("p".into(), 1)], 2, 1);
    let mut t: BTreeMap<_, i64> = window.keys.iter().map(|k| (k.clone(), 0)).collect();
    for (i, v) in t.values_mut().enumerate().take(3) {
        *v = i as i64 + 1;
    }
    println!("window of {} lifts, sum to 6: {}", window.keys.len(), refined_sum_check(&t, 6, &refined.class)?);
    Ok(())
}
