pub mod fraction;
pub mod grid;
pub mod run;
pub mod theory;
pub mod trace;
