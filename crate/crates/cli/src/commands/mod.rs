pub mod catalog;
pub mod equiv;
pub mod erm;
pub mod verify;
