pub mod cli;
pub mod corpus;
pub mod engine;
pub mod explain;
pub mod instrument;
pub mod oracle;
pub mod render;
pub mod syntax;
