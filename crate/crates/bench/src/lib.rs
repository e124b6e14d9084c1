//! Benchmarks for the heavy kernels live in `benches/`; run them with
//! `cargo bench -p koszul-bench`.
