//! Dense vector helpers shared across the solver modules.

/// Euclidean inner product. Panics on length mismatch in debug builds.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// l1 norm.
pub fn norm1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// Euclidean norm.
pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Max norm; 0 for the empty vector.
pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// True iff every entry is finite.
pub fn all_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_on_small_vectors() {
        let v = [3.0, -4.0];
        assert_eq!(norm1(&v), 7.0);
        assert_eq!(norm2(&v), 5.0);
        assert_eq!(norm_inf(&v), 4.0);
        assert_eq!(norm_inf(&[]), 0.0);
    }
}
