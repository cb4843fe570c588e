//! File formats, experiments and Monte Carlo studies on top of `hc-core`.

pub mod edgelist;
pub mod experiment;
pub mod mc;
