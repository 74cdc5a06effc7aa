//! Double-double accumulation (error-free TwoSum/TwoProd).

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl DoubleDouble {
    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn plus(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    /// Adds the exact product a·b.
    pub fn add_product(self, a: f64, b: f64) -> Self {
        let p = a * b;
        let err = a.mul_add(b, -p);
        self.plus(p).plus(err)
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}
