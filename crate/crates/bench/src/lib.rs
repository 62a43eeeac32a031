//! Criterion benchmarks for `charmat-core`; see `benches/charmat.rs`.
