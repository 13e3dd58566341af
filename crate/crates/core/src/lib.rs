pub mod cli;
pub mod edge;
pub mod error;
pub mod game;
pub mod graph;
pub mod models;
pub mod scenario;
pub mod sets;
pub mod solve;
pub mod worth;
