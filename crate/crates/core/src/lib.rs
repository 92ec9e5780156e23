pub mod exact_arith;
pub mod logic;
pub mod sets;
pub mod sequences;
pub mod digits;
pub mod ideals;
pub mod classifier;
pub mod oracle;
pub mod grammar;
pub mod experiment;
pub mod corpus;
