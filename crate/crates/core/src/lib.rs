pub mod acode;
pub mod combinators;
pub mod design;
pub mod ingredients;
pub mod trace;
