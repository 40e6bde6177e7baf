pub mod bounds;
pub mod diagram;
pub mod geom;
pub mod slopes;
pub mod strat;
