pub mod bisection;
pub mod bounds;
pub mod enumerate;
pub mod graph;
pub mod graph6;
pub mod group;
pub mod pipeline;
pub mod symmetry;
