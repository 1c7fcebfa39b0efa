//! Enumerating `S(A)` and splitting each decomposition into its `tau` part.
//!
//! ```bash
//! cargo run --example decompositions
//! ```

use relgt::classes::ManifoldModel;
use relgt::decomp::{enumerate_s_with, qu_partitions, tau, SOptions};
use relgt::io::{class_label_form, parse_class_spec};

fn main() -> relgt::error::Result<()> {
    let m = ManifoldModel::blowup_of_plane(3);
    let l = &m.lattice;
    let support: Vec<_> = ["E1", "E2", "E3", "E1+E2", "h-E1-E2", "h-E3"]
        .iter()
        .map(|s| parse_class_spec(l, s))
        .collect::<Result<_, _>>()?;

    for target in ["E1+E2", "h-E3+E1", "E1+E2+E3"] {
        let a = parse_class_spec(l, target)?;
        let s = enumerate_s_with(&m, &a, &support, &SOptions::default())?;
        println!("S({target}): {} decompositions, complete {}", s.decompositions.len(), s.complete);
        for y in &s.decompositions {
            let (t, rest) = tau(&m, y)?;
            let show = |ps: &[(relgt::lattice::LatticeClass, u32)]| {
                ps.iter()
                    .map(|(c, k)| format!("{}x{k}", class_label_form(l, c)))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            println!("  {}   tau: [{}] rest: [{}]", show(&y.pairs), show(&t), show(&rest));
        }
    }

    for n in 1..=4 {
        println!("Qu indices for n = {n}: {:?}", qu_partitions(n));
    }
    Ok(())
}
