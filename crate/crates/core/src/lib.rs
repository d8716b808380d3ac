pub mod arrangement;
pub mod bitset;
pub mod combi;
pub mod config;
pub mod deform;
pub mod error;
pub mod filter;
pub mod geom;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod oracle;
pub mod parity;
pub mod pivot;
pub mod poly;
pub mod rat;
pub mod solve;
pub mod svg;
