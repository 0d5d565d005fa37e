//! Streaming moments of importance weights.

/// Welford mean/variance plus the sums needed for ESS, the largest weight,
/// and the largest few weights for the tail-shape estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMoments {
    count: u64,
    mean: f64,
    m2: f64,
    sum: f64,
    sum_sq: f64,
    max: f64,
    /// Largest weights, descending, at most `top_cap` of them.
    top: Vec<f64>,
    top_cap: usize,
}

impl WeightMoments {
    pub fn new(top_cap: usize) -> Self {
        Self {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            sum: 0.0,
            sum_sq: 0.0,
            max: 0.0,
            top: Vec::new(),
            top_cap,
        }
    }

    pub fn push(&mut self, w: f64) {
        self.count += 1;
        let delta = w - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (w - self.mean);
        self.sum += w;
        self.sum_sq += w * w;
        if w > self.max {
            self.max = w;
        }
        if self.top_cap > 0 {
            self.top.push(w);
            if self.top.len() >= 2 * self.top_cap.max(16) {
                self.trim_top();
            }
        }
    }

    fn trim_top(&mut self) {
        self.top.sort_unstable_by(|a, b| b.total_cmp(a));
        self.top.truncate(self.top_cap);
    }

    /// Chan et al. pairwise combination; `other` is treated as the later block.
    pub fn merge(&mut self, other: &WeightMoments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            let cap = self.top_cap;
            *self = other.clone();
            self.top_cap = cap;
            self.trim_top();
            return;
        }
        let n_a = self.count as f64;
        let n_b = other.count as f64;
        let n = n_a + n_b;
        let delta = other.mean - self.mean;
        self.mean += delta * n_b / n;
        self.m2 += other.m2 + delta * delta * n_a * n_b / n;
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.max = self.max.max(other.max);
        self.top.extend_from_slice(&other.top);
        self.trim_top();
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_err(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }

    /// `(Σw)² / Σw²`, zero when every weight is zero.
    pub fn ess(&self) -> f64 {
        if self.sum_sq > 0.0 {
            (self.sum * self.sum / self.sum_sq).min(self.count as f64)
        } else {
            0.0
        }
    }

    /// `max w / Σw`
    pub fn max_weight_share(&self) -> f64 {
        if self.sum > 0.0 {
            self.max / self.sum
        } else {
            0.0
        }
    }

    /// Largest weights seen, descending.
    pub fn top(&self) -> Vec<f64> {
        let mut t = self.top.clone();
        t.sort_unstable_by(|a, b| b.total_cmp(a));
        t.truncate(self.top_cap);
        t
    }
}

/// Number of order statistics used by [`hill_tail_shape`] for a sample of size `n`.
pub fn hill_order(n: u64) -> usize {
    let n = n as f64;
    (0.2 * n).min(3.0 * n.sqrt()).floor() as usize
}

/// Hill estimate of the generalized-Pareto shape of the upper weight tail.
///
/// Uses the `m = hill_order(n)` largest weights; `top` must hold at least
/// `m + 1` values in descending order. Shapes above 1/2 indicate an
/// infinite-variance weight distribution. Returns `None` when fewer than
/// ten order statistics are available or the threshold weight is zero.
pub fn hill_tail_shape(top: &[f64], n: u64) -> Option<f64> {
    let m = hill_order(n);
    if m < 10 || top.len() <= m || top[m] <= 0.0 {
        return None;
    }
    let threshold = top[m].ln();
    let shape = top[..m].iter().map(|w| w.ln() - threshold).sum::<f64>() / m as f64;
    Some(shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_weights_have_exactly_zero_variance() {
        let mut a = WeightMoments::new(8);
        for _ in 0..1000 {
            a.push(1.0);
        }
        let mut b = WeightMoments::new(8);
        for _ in 0..777 {
            b.push(1.0);
        }
        a.merge(&b);
        assert_eq!(a.mean(), 1.0);
        assert_eq!(a.std_err(), 0.0);
        assert_eq!(a.ess(), 1777.0);
    }

    #[test]
    fn hill_estimate_recovers_pareto_shape() {
        // Pareto with tail index 2 -> shape 1/2, drawn by inversion on a grid.
        let n = 100_000u64;
        let mut w: Vec<f64> = (1..=n).map(|i| (i as f64 / (n + 1) as f64).powf(-0.5)).collect();
        w.sort_unstable_by(|a, b| b.total_cmp(a));
        let shape = hill_tail_shape(&w, n).unwrap();
        assert!((shape - 0.5).abs() < 0.02, "{shape}");
        assert_eq!(hill_tail_shape(&w[..5], 20), None);
    }

    proptest! {
        #[test]
        fn merge_matches_single_pass(xs in prop::collection::vec(0.0f64..100.0, 2..200), split in 0usize..200) {
            let split = split.min(xs.len());
            let mut whole = WeightMoments::new(5);
            xs.iter().for_each(|x| whole.push(*x));
            let mut left = WeightMoments::new(5);
            let mut right = WeightMoments::new(5);
            xs[..split].iter().for_each(|x| left.push(*x));
            xs[split..].iter().for_each(|x| right.push(*x));
            left.merge(&right);
            prop_assert_eq!(left.count(), whole.count());
            prop_assert!((left.mean() - whole.mean()).abs() <= 1e-9 * whole.mean().abs().max(1.0));
            prop_assert!((left.variance() - whole.variance()).abs() <= 1e-7 * whole.variance().max(1.0));
            prop_assert_eq!(left.top(), whole.top());
            prop_assert!(left.ess() <= left.count() as f64 + 1e-9);
        }
    }
}
