#![allow(dead_code, clippy::needless_range_loop)]

pub mod lee_oracle;

/// `s` of the small corpus knots as produced by [`lee_oracle::s`].
pub const FROZEN_S: &[(&str, i64)] = &[
    ("unknot", 0),
    ("trefoil-rh", 2),
    ("trefoil-lh", -2),
    ("figure-eight", 0),
    ("torus-2-5", 4),
    ("torus-2-7", 6),
    ("5_2", 2),
    ("6_1", 0),
    ("granny", 4),
    ("square", 0),
];
