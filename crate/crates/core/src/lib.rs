pub mod belyi;
pub mod dessins;
pub mod hypergeometric;
pub mod lattice;
pub mod numeric;
pub mod quotients;
pub mod weierstrass;
