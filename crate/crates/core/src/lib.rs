pub mod cli;
pub mod ctl;
pub mod kripke;
pub mod sim;
pub mod traffic;
