//! Criterion benchmarks for `choquet-core`; see `benches/`.
