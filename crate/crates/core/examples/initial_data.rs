//! Initial data: properness diagnostics and the sign of a split of the
//! ordered curve constraints across components.
//!
//! ```bash
//! cargo run --example initial_data
//! ```

use relgt::classes::{HypersurfaceModel, ManifoldModel};
use relgt::initialdata::{is_proper, partition_data, partition_sign, Contact, ElementRef, InitialData, Marker};
use relgt::io::parse_class_spec;

fn main() -> relgt::error::Result<()> {
    let m = ManifoldModel::blowup_of_plane(2);
    let v = HypersurfaceModel::new(&m, parse_class_spec(&m.lattice, "3h-E1-E2")?, 1)?;
    let a = parse_class_spec(&m.lattice, "2h")?;
    println!("A = 2h: d_A = {}, l_A = {}", m.d_of(&a)?, m.l_of(&v, &a)?);

    let candidates = [
        ("six contact points", InitialData::upsilon(&[1; 6])?),
        ("five points, six contacts", InitialData::new(
            ["p", "q", "r", "s", "t"].into_iter().map(Marker::new).collect(),
            vec![],
            vec![],
            vec![],
            vec![1; 6],
        )?),
        ("one tangency", InitialData::new(vec![], vec![], vec![Contact::new("x", 2)], vec![], vec![1; 4])?),
    ];
    for (name, data) in &candidates {
        let r = is_proper(&m, &v, &a, data)?;
        println!("{name}: {} proper={}", data.data_class(), r.is_proper());
        for f in &r.failures {
            println!("    {f}");
        }
    }

    // four curve constraints split 2 + 2 over two components
    let gamma = InitialData::new(
        vec![],
        (0..4).map(|i| Marker::new(format!("g{i}"))).collect(),
        vec![],
        vec![],
        vec![],
    )?;
    let assignment = vec![
        (ElementRef::D2(0), 0),
        (ElementRef::D2(2), 0),
        (ElementRef::D2(1), 1),
        (ElementRef::D2(3), 1),
    ];
    for order in [[0, 1], [1, 0]] {
        println!("blocks in order {order:?}: sign {}", partition_sign(&gamma, &assignment, &order)?);
    }
    let parts = partition_data(&gamma, 2, &assignment)?;
    for (k, p) in parts.iter().enumerate() {
        let ids: Vec<&str> = p.d2.iter().map(|g| g.id.as_str()).collect();
        println!("component {k}: {ids:?}");
    }
    Ok(())
}
