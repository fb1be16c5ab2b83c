#![allow(dead_code)]

pub mod bar;
pub mod classical;
pub mod modules;
pub mod resolution;
