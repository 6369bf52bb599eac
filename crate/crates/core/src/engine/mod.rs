pub mod annihilator;
pub mod flow;
pub mod separate;
