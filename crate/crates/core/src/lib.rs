pub mod breaker;
pub mod detect;
pub mod error;
pub mod formula;
pub mod generate;
pub mod group;
pub mod qdimacs;
pub mod strategy;
pub mod verify;
