//! Workloads shared by the benchmarks in `benches/`.

/// Admissible `(a, b)` with `b ≥ 2` and `a + b = w`.
pub fn convergent_pairs(w: u32) -> Vec<(u32, u32)> {
    (1..w.saturating_sub(1)).map(|a| (a, w - a)).collect()
}
