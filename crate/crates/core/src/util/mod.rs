pub mod bitset;
pub mod setcover;
