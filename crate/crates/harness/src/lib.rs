//! Experiment harness for the ripple pond network: corpus generation, image
//! transforms, invariance sweeps, the connect-the-dots demo and report output.

pub mod config;
pub mod corpus;
pub mod demo;
pub mod io;
pub mod render;
pub mod report;
pub mod sweep;
pub mod transform;
