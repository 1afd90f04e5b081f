pub mod linalg;
pub mod group;
pub mod action;
pub mod poly;
pub mod eqsheaf;
pub mod fm;
pub mod oracle;
pub mod random;
pub mod cli;
