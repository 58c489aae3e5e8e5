pub mod certify;
pub mod dynamics;
pub mod families;
pub mod numerics;
pub mod solver;
pub mod symbolic;
