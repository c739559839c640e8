//! Benchmarks for the checkers live in `benches/checkers.rs`.
