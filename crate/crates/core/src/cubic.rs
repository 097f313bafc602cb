//! Closed-form roots of real polynomials up to degree three.

use num_complex::Complex64;

/// All complex roots of `c3 x³ + c2 x² + c1 x + c0`, degrading to the
/// quadratic or linear formula when the leading coefficients vanish.
pub(crate) fn polynomial_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<Complex64> {
    if c3 != 0.0 {
        cubic(c3, c2, c1, c0).to_vec()
    } else if c2 != 0.0 {
        quadratic(c2, c1, c0).to_vec()
    } else if c1 != 0.0 {
        vec![Complex64::new(-c0 / c1, 0.0)]
    } else {
        Vec::new()
    }
}

/// Real roots, keeping those whose imaginary part is below
/// `1e-10 * max(1, |root|)`, Newton-polished and sorted ascending.
pub(crate) fn real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let mut out: Vec<f64> = polynomial_roots(c3, c2, c1, c0)
        .into_iter()
        .filter(|z| z.im.abs() < 1e-10 * z.norm().max(1.0))
        .map(|z| polish(c3, c2, c1, c0, z.re))
        .collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

fn polish(c3: f64, c2: f64, c1: f64, c0: f64, mut x: f64) -> f64 {
    for _ in 0..4 {
        let f = ((c3 * x + c2) * x + c1) * x + c0;
        let df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        if df == 0.0 || !f.is_finite() {
            break;
        }
        let step = f / df;
        let next = x - step;
        // Newton only helps while it keeps shrinking the residual.
        let f_next = ((c3 * next + c2) * next + c1) * next + c0;
        if f_next.abs() >= f.abs() {
            break;
        }
        x = next;
    }
    x
}

fn quadratic(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn cubic(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    // depressed cubic t³ + p t + q with x = t − b/3
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    if disc < 0.0 {
        // three distinct real roots
        let r = (-p / 3.0).sqrt();
        let cos_arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        let phi = cos_arg.acos();
        let tau = std::f64::consts::TAU;
        let mut roots = [Complex64::new(0.0, 0.0); 3];
        for (k, root) in roots.iter_mut().enumerate() {
            let t = 2.0 * r * ((phi - tau * k as f64) / 3.0).cos();
            *root = Complex64::new(t - shift, 0.0);
        }
        roots
    } else {
        let s = disc.sqrt();
        let big_a = -(q / 2.0 + q.signum() * s).cbrt();
        let big_b = if big_a != 0.0 { -p / (3.0 * big_a) } else { 0.0 };
        let t1 = big_a + big_b;
        let re = -t1 / 2.0 - shift;
        let im = 3f64.sqrt() / 2.0 * (big_a - big_b);
        [
            Complex64::new(t1 - shift, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    }
}
