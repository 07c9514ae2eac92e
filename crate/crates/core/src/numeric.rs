//! Small floating-point helpers shared by the closed forms.

/// `e^{-x} - 1 + x`, accurate for small `|x|` where the direct form cancels.
pub fn exp_neg_tail(x: f64) -> f64 {
    if x.abs() < 0.1 {
        // x^2/2 - x^3/6 + x^4/24 - ...
        let mut term = x * x / 2.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            k += 1.0;
            term *= -x / k;
            sum += term;
        }
        sum
    } else {
        (-x).exp_m1() + x
    }
}

/// `e^{x} - 1 - x`, accurate for small `|x|`.
pub fn exp_tail(x: f64) -> f64 {
    exp_neg_tail(-x)
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Integer `k >= 0` count of lattice points `k*step + start` strictly below `limit`.
pub(crate) fn lattice_points_below(start: f64, step: f64, limit: f64) -> u64 {
    if start >= limit {
        return 0;
    }
    let mut count = ((limit - start) / step).ceil() as u64;
    // Guard the rounding of the division at both ends.
    while count > 0 && start + (count - 1) as f64 * step >= limit {
        count -= 1;
    }
    while start + count as f64 * step < limit {
        count += 1;
    }
    count
}
