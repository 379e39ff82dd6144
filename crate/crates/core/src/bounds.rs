//! Closed-form matching-size bounds.

/// Guaranteed size `⌊4(n+1)/13⌋` of a 2-coloured matching on `n` vertices.
pub fn m_bound(n: usize) -> usize {
    4 * (n + 1) / 13
}

/// Least `n` with `m_bound(n) >= k`, namely `3k + ⌊(k-1)/4⌋`.
pub fn smallest_n_for(k: usize) -> usize {
    assert!(k >= 1, "matching size must be positive");
    3 * k + (k - 1) / 4
}

/// Size `⌊n/3⌋` of a near-perfect matching.
pub fn near_perfect_size(n: usize) -> usize {
    n / 3
}
