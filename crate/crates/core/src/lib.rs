//! Exact verification toolkit for cubic fourfolds with an order-7 automorphism.

pub mod exactnum;
pub mod groups;
pub mod linalg;
pub mod polyalg;
pub mod singular;
pub mod gitstab;
pub mod lattices;
pub mod arithgrp;
pub mod report;
