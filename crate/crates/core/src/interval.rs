//! Minimal outward-rounded interval arithmetic over `f64`, used to certify
//! the one-significant-figure constant inequalities. Elementary operations
//! widen each endpoint by one ulp past the rounded result; `ln` and `exp`
//! widen by four ulps to absorb the library's (faithful, not correctly
//! rounded) transcendentals.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = down(x);
    }
    x
}

fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = up(x);
    }
    x
}

impl Interval {
    /// The exact point interval; use only for values representable in `f64`.
    pub fn exact(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn point(x: f64) -> Self {
        Self {
            lo: down(x),
            hi: up(x),
        }
    }

    pub fn pi() -> Self {
        Self::point(std::f64::consts::PI)
    }

    pub fn e() -> Self {
        Self::point(std::f64::consts::E)
    }

    pub fn add(self, rhs: Self) -> Self {
        Self {
            lo: down(self.lo + rhs.lo),
            hi: up(self.hi + rhs.hi),
        }
    }

    /// Product of intervals with nonnegative lower endpoints (the only case
    /// the constant formulas need).
    pub fn mul(self, rhs: Self) -> Self {
        assert!(self.lo >= 0.0 && rhs.lo >= 0.0, "nonnegative operands only");
        Self {
            lo: down(self.lo * rhs.lo),
            hi: up(self.hi * rhs.hi),
        }
    }

    /// Quotient by a strictly positive interval.
    pub fn div(self, rhs: Self) -> Self {
        assert!(self.lo >= 0.0 && rhs.lo > 0.0, "positive divisor only");
        Self {
            lo: down(self.lo / rhs.hi),
            hi: up(self.hi / rhs.lo),
        }
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Interval::exact(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn ln(self) -> Self {
        assert!(self.lo > 0.0, "ln needs a positive interval");
        Self {
            lo: down_n(self.lo.ln(), 4),
            hi: up_n(self.hi.ln(), 4),
        }
    }

    pub fn exp(self) -> Self {
        Self {
            lo: down_n(self.lo.exp(), 4),
            hi: up_n(self.hi.exp(), 4),
        }
    }

    /// `self^q` for positive `self` via `exp(q ln self)`.
    pub fn powf(self, q: Self) -> Self {
        self.ln().mul(q).exp()
    }

    /// Certified `self <= bound`: true only when the upper endpoint is.
    pub fn certainly_le(self, bound: f64) -> bool {
        self.hi <= bound
    }

    /// Certified `self > bound`.
    pub fn certainly_gt(self, bound: f64) -> bool {
        self.lo > bound
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// `n!` as an interval (exact through 170!).
pub fn factorial(n: u32) -> Interval {
    let mut acc = Interval::exact(1.0);
    for k in 2..=n {
        acc = acc.mul(Interval::exact(f64::from(k)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_brackets_the_true_value() {
        let a = Interval::exact(3.0);
        let b = Interval::exact(7.0);
        let prod = a.mul(b);
        assert!(prod.contains(21.0));
        assert!(prod.width() < 1e-13);
        let l = Interval::exact(std::f64::consts::E).ln();
        assert!(l.contains(1.0) || (l.lo < 1.0 && l.hi > 1.0 - 1e-15));
    }

    #[test]
    fn factorial_is_exact_for_small_arguments() {
        let f = factorial(8);
        assert!(f.contains(40320.0));
        assert!(f.width() < 1e-9);
    }

    #[test]
    fn certified_comparisons_are_one_sided() {
        let x = Interval { lo: 0.9, hi: 1.1 };
        assert!(!x.certainly_le(1.0));
        assert!(x.certainly_le(1.1));
        assert!(!x.certainly_gt(1.0));
        assert!(x.certainly_gt(0.5));
    }

    #[test]
    fn powf_brackets_known_powers() {
        let two = Interval::exact(2.0);
        let p = two.powf(Interval::exact(10.0));
        assert!(p.contains(1024.0));
        assert!(p.width() / 1024.0 < 1e-12);
    }
}
