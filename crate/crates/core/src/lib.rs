pub mod algebra;
pub mod derive;
pub mod funcspec;
pub mod laws;
pub mod numeric;
