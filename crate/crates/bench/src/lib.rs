//! Criterion benchmarks for `durrmeyer-core`; see `benches/`.
