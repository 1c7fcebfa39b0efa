//! Intersection lattices of blow-ups of the plane: pairings, signatures,
//! and the invariants of a few classes.
//!
//! ```bash
//! cargo run --example lattice_basics
//! ```

use relgt::classes::{HypersurfaceModel, ManifoldModel};
use relgt::io::{class_label_form, parse_class_spec};

fn main() -> relgt::error::Result<()> {
    let m = ManifoldModel::blowup_of_plane(3);
    let l = &m.lattice;
    println!("{}: rank {}, signature {:?}, det {}", m.name, l.rank(), l.signature()?, l.determinant());
    println!("K = {}", class_label_form(l, &m.canonical));

    let v = HypersurfaceModel::new(&m, parse_class_spec(l, "3h-E1-E2-E3")?, 1)?;
    println!("V = {} (genus {}), stable: {}", class_label_form(l, &v.class), v.genus, m.is_stable(&v)?);

    println!("{:<12} {:>4} {:>4} {:>5} {:>4} {:>6}", "class", "A.A", "K.A", "d_A", "l_A", "genus");
    for spec in ["h", "E1", "h-E1", "h-E1-E2", "2h", "3h-E1-E2-E3", "E1+E2"] {
        let a = parse_class_spec(l, spec)?;
        println!(
            "{:<12} {:>4} {:>4} {:>5} {:>4} {:>6}",
            spec,
            m.square(&a)?,
            m.k_dot(&a)?,
            m.d_of(&a)?.to_string(),
            m.l_of(&v, &a)?,
            m.genus_of(&a)?,
        );
    }

    // the same class through the coordinate syntax
    let a = parse_class_spec(l, "1,-1,-1,0")?;
    println!("(1,-1,-1,0) = {}, exceptional: {}", class_label_form(l, &a), m.is_exceptional(&a)?);
    Ok(())
}
