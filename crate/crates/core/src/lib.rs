//! Half-translation surfaces presented as glued rational polygons, their horizontal
//! cylinder decompositions and polyplane shears, plus two numerical laboratories: the
//! translation flow on diagonal-fixing maps and Schwarz–Christoffel maps of L-shaped
//! hexagons.
#![no_std]

extern crate alloc;

pub mod geom;
pub mod q;
pub mod surface;
pub mod trace;
pub mod affine;
pub mod examples;
pub mod cylinder;
pub mod normal_form;
pub mod shear;
pub mod pillowcase;
pub mod flowlab;
pub mod scmap;
