//! Adaptive Gauss–Legendre quadrature over user-supplied panels.

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Fixed-order rule on [a, b].
    pub fn integrate<E>(&self, f: &impl Fn(f64) -> Result<f64, E>, a: f64, b: f64) -> Result<f64, E> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of |fine − coarse| over accepted subintervals.
    pub error: f64,
    pub subintervals: usize,
}

/// Bisect [a, b] until one rule application and the sum over its two halves
/// agree to `abs_tol`.
pub fn adaptive<E>(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<QuadResult, E> {
    let whole = rule.integrate(f, a, b)?;
    refine(rule, f, a, b, whole, abs_tol, max_depth)
}

fn refine<E>(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
) -> Result<QuadResult, E> {
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m)?;
    let right = rule.integrate(f, m, b)?;
    let err = (left + right - whole).abs();
    if err <= abs_tol || depth == 0 || m <= a || m >= b {
        return Ok(QuadResult { value: left + right, error: err, subintervals: 2 });
    }
    let l = refine(rule, f, a, m, left, abs_tol / 2.0, depth - 1)?;
    let r = refine(rule, f, m, b, right, abs_tol / 2.0, depth - 1)?;
    Ok(QuadResult {
        value: l.value + r.value,
        error: l.error + r.error,
        subintervals: l.subintervals + r.subintervals,
    })
}

/// Integrate over consecutive panels given by sorted `breakpoints`, with a
/// tolerance of `rtol` relative to a first-pass estimate of the total.
pub fn integrate_panels<E>(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> Result<f64, E>,
    breakpoints: &[f64],
    rtol: f64,
) -> Result<QuadResult, E> {
    let mut rough = 0.0;
    for w in breakpoints.windows(2) {
        rough += rule.integrate(f, w[0], w[1])?.abs();
    }
    let panels = breakpoints.len().saturating_sub(1).max(1) as f64;
    let abs_tol = (rtol * rough / panels).max(f64::MIN_POSITIVE);
    let mut out = QuadResult { value: 0.0, error: 0.0, subintervals: 0 };
    for w in breakpoints.windows(2) {
        let r = adaptive(rule, f, w[0], w[1], abs_tol, 30)?;
        out.value += r.value;
        out.error += r.error;
        out.subintervals += r.subintervals;
    }
    Ok(out)
}
