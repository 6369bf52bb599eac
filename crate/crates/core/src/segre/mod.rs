pub mod families;
pub mod variety;
pub mod reflection;
