//! File format, SVG rendering and command-line front end for `hts-core`.

pub mod cli;
pub mod format;
pub mod svg;
