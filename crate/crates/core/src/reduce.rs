//! Fixed-order summation.
//!
//! All grid integrals go through [`pairwise_sum`], which splits the input at
//! the same indices regardless of how the per-node values were produced, so
//! results are reproducible bit for bit across runs and thread counts.

const BLOCK: usize = 32;

/// Pairwise (cascade) summation with a fixed split pattern.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= BLOCK {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise sum of `f(i)` for `i in 0..n`, materialised into a scratch buffer.
pub fn pairwise_sum_by(n: usize, f: impl FnMut(usize) -> f64) -> f64 {
    let buf: Vec<f64> = (0..n).map(f).collect();
    pairwise_sum(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_exact_integer_sum() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn more_accurate_than_naive_for_many_small_terms() {
        let xs = vec![0.1; 1 << 20];
        let exact = 0.1 * (1u64 << 20) as f64;
        let naive: f64 = xs.iter().sum();
        let pairwise = pairwise_sum(&xs);
        assert!((pairwise - exact).abs() <= (naive - exact).abs());
        assert!((pairwise - exact).abs() / exact < 1e-14);
    }
}
