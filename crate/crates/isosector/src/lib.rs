#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cgc;
pub mod disk;
pub mod measures;
pub mod oracle;
pub mod quadrature;
pub mod rn;
pub mod sector;
