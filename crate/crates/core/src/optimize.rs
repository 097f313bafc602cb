//! Bounded scalar minimization.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on [lo, hi], stopping once the
/// bracket is narrower than `abs_tol`. Non-finite values count as +∞. The
/// end points are evaluated too, so a monotone `f` returns its better bound.
pub fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64, abs_tol: f64) -> Option<Minimum> {
    if !(lo <= hi) || !(abs_tol > 0.0) {
        return None;
    }
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() { v } else { f64::INFINITY }
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    let mut evaluations = 2;
    while (b - a).abs() > abs_tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
        evaluations += 1;
    }
    let mut best = if fc <= fd { Minimum { x: c, value: fc, evaluations: 0 } } else { Minimum { x: d, value: fd, evaluations: 0 } };
    for x in [lo, hi] {
        let v = eval(x);
        evaluations += 1;
        if v < best.value {
            best = Minimum { x, value: v, evaluations: 0 };
        }
    }
    best.evaluations = evaluations;
    best.value.is_finite().then_some(best)
}
