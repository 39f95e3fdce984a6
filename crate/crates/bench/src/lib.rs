//! Criterion benchmarks for the `fraccut` crate; see `benches/`.
