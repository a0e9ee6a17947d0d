pub mod basis;
pub mod cli;
pub mod closure;
pub mod diffop;
pub mod onshell;
pub mod parity;
pub mod reps;
pub mod ring;
pub mod spectrum;
pub mod superconf;
