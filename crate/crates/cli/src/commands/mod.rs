pub mod density;
pub mod simulate;
pub mod table;
pub mod verify;
