#![allow(dead_code)]

pub mod alexander;
pub mod corpus;
pub mod dt;
pub mod fm;
