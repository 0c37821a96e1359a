//! Criterion benchmarks for the sieve, character-transform and scan kernels
//! of `liouville-core`. Run with `cargo bench -p liouville-bench`.
