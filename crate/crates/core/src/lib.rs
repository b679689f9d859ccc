//! Model checking of first-order sentences on colored posets of bounded width.

pub mod formula;
pub mod poset;
pub mod gen;
pub mod typegraph;
pub mod checker;
pub mod interval;
pub mod bench;
