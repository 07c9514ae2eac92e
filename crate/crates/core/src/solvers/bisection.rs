use crate::error::Result;

/// Final bracket of a sign bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub iterations: u32,
}

impl Bracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Halves `[lo, hi]` until it is narrower than `xi`, keeping `g(lo) < 0 <= g(hi)`.
///
/// The caller guarantees the sign pattern at the ends; `max_iter` bounds
/// the work when `xi` is below the floating-point spacing of the bracket.
pub fn bisect_sign<G>(mut g: G, lo: f64, hi: f64, xi: f64, max_iter: u32) -> Result<Bracket>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut b = Bracket { lo, hi, iterations: 0 };
    while b.width() >= xi && b.iterations < max_iter {
        let mid = b.mid();
        if mid <= b.lo || mid >= b.hi {
            break;
        }
        if g(mid)? >= 0.0 {
            b.hi = mid;
        } else {
            b.lo = mid;
        }
        b.iterations += 1;
    }
    Ok(b)
}
