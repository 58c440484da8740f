pub mod cli;
pub mod elimination;
pub mod poly;
pub mod recurrence;
pub mod saddle;
