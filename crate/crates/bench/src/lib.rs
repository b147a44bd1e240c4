//! Benchmarks for rumor-core; see `benches/`.
