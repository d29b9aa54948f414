pub mod corpus;
pub mod eval;
pub mod features;
pub mod learn;
pub mod lexical;
pub mod matrix;
pub mod seed;
pub mod sentiment;
pub mod topics;
