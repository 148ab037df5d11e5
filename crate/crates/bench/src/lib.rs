//! Criterion benchmarks for the logorder library live in `benches/`.
