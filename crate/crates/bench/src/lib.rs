//! Benchmarks for `ptmoments`. See `benches/kernels.rs`; run with `cargo bench -p ptmoments-bench`.

/// Degrees used for class-table builds.
pub const TABLE_DEGREES: &[usize] = &[6, 7, 8, 9];

/// (l, m, n) shapes used for sampling.
pub const STATE_SHAPES: &[(usize, usize, usize)] = &[(16, 4, 4), (64, 8, 8), (256, 16, 16)];
