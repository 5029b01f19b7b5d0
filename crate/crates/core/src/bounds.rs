//! Integer thresholds derived from real fractions of `n`.
//!
//! Products such as `0.02 * 300` land a hair above the integer in floating
//! point, so a naive `ceil` would overshoot by one.

const SLACK: f64 = 1e-9;

/// `⌈frac · n⌉`, never negative.
pub fn ceil_frac(frac: f64, n: usize) -> usize {
    let x = frac * n as f64 - SLACK;
    if x <= 0.0 {
        0
    } else {
        x.ceil() as usize
    }
}

/// `⌊frac · n⌋`, never negative.
pub fn floor_frac(frac: f64, n: usize) -> usize {
    let x = frac * n as f64 + SLACK;
    if x <= 0.0 {
        0
    } else {
        x.floor() as usize
    }
}

/// Minimum semi-degree `⌈(1/2 + epsilon) · n⌉` demanded of an `n`-vertex host.
pub fn semi_degree_threshold(epsilon: f64, n: usize) -> usize {
    ceil_frac(0.5 + epsilon, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_products_do_not_overshoot() {
        assert_eq!(ceil_frac(0.02, 300), 6);
        assert_eq!(ceil_frac(0.02, 200), 4);
        assert_eq!(semi_degree_threshold(0.15, 300), 195);
        assert_eq!(semi_degree_threshold(0.1, 100), 60);
        assert_eq!(floor_frac(0.2 / 2.0, 300), 30);
        assert_eq!(floor_frac(0.2 / 3.0, 300), 20);
    }

    #[test]
    fn rounding_direction() {
        assert_eq!(ceil_frac(0.5, 7), 4);
        assert_eq!(floor_frac(0.5, 7), 3);
        assert_eq!(ceil_frac(0.0, 10), 0);
        assert_eq!(ceil_frac(-1.0, 10), 0);
    }
}
