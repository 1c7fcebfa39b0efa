pub mod classes;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod initialdata;
pub mod io;
pub mod k3;
pub mod knownvalues;
pub mod lattice;
pub mod linalg;
pub mod rimtori;
