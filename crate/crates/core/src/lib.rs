pub mod blockrep;
pub mod factor;
pub mod family;
pub mod invariants;
pub mod matcore;
pub mod poly;
pub mod random;
