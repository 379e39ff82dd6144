//! Two-coloured matchings in 3-coloured complete 3-uniform hypergraphs.

pub mod bounds;
pub mod colour;
pub mod colouring;
pub mod error;
pub mod format;
pub mod extractor;
pub mod generators;
pub mod matching;
pub mod oracle;
pub mod packing;
pub mod stress;
pub mod structure;
pub mod triple;
pub mod vset;
