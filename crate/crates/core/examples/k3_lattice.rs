//! The K3 lattice: its invariants, the roots of `-E8`, a Kähler chamber
//! check and a Picard sublattice.
//!
//! ```bash
//! cargo run --example k3_lattice
//! ```

use num::BigRational;
use relgt::io::{class_label_form, parse_class_spec};
use relgt::k3::{build_k3_lattice, kahler_chamber_check, picard_signature_check, PeriodPoint};
use relgt::lattice::IntegralLattice;

fn main() -> relgt::error::Result<()> {
    let k3 = build_k3_lattice();
    println!(
        "K3: rank {}, signature {:?}, even {}, unimodular {}",
        k3.rank(),
        k3.signature()?,
        k3.is_even(),
        k3.is_unimodular()
    );

    let roots = IntegralLattice::e8().negated().enumerate_square_classes(-2)?;
    println!("-E8 has {} roots, first {}", roots.len(), roots[0]);

    let vector = |spec: &str| -> relgt::error::Result<Vec<BigRational>> {
        let a = parse_class_spec(&k3, spec)?;
        Ok(a.coords().iter().map(|&x| BigRational::from_integer(x.into())).collect())
    };
    let period = PeriodPoint::new(&k3, vector("u+v")?, vector("u#1+v#1")?)?;
    for kappa in ["u#2+v#2", "u#2+2v#2"] {
        let res = kahler_chamber_check(&vector(kappa)?, &period, 1)?;
        println!("kappa = {kappa}: {res}");
    }

    let basis = [parse_class_spec(&k3, "u+v")?, parse_class_spec(&k3, "e1")?];
    let p = picard_signature_check(&basis)?;
    let names: Vec<String> = basis.iter().map(|b| class_label_form(&k3, b)).collect();
    println!(
        "span of {:?}: signature {:?}, hyperbolic {}, moduli dimension {}",
        names, p.signature, p.ok, p.moduli_dim
    );
    Ok(())
}
