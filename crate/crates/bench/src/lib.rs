//! Criterion benchmarks for `measure-lab`; see `benches/measure.rs`.
