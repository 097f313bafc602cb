//! Frequency grids and peak refinement.

use crate::steady_state::WorkingPoint;

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

/// Characteristic spectral scale max(|Δ̃|, γ∥(1+ξ), κ).
pub fn spectral_scale(wp: &WorkingPoint) -> f64 {
    wp.delta_tilde
        .abs()
        .max(wp.laser.gamma_par * (1.0 + wp.xi))
        .max(wp.laser.kappa)
}

/// ±[lo, hi]·scale, log-spaced on each side, `n` points in ascending order.
/// Zero is never included.
pub fn log_symmetric(scale: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let half = logspace(lo * scale, hi * scale, n / 2);
    let mut out: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    out.extend(half);
    out
}

/// The default spectrum grid: ±[1e-4, 10]·scale with 2048 points.
pub fn default_grid(wp: &WorkingPoint) -> Vec<f64> {
    log_symmetric(spectral_scale(wp), 1e-4, 10.0, 2048)
}

/// Indices of interior local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}

/// Linear refinement with `n` points across each local maximum of `values`,
/// merged into `grid`. Points equal to zero are dropped.
pub fn refine_peaks(grid: &[f64], values: &[f64], n: usize) -> Vec<f64> {
    let mut out = grid.to_vec();
    for i in local_maxima(values) {
        out.extend(linspace(grid[i - 1], grid[i + 1], n));
    }
    out.retain(|&x| x != 0.0);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Vertex of the parabola through three points, as (x, y).
pub fn parabolic_peak(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d0 = (y[1] - y[0]) / (x[1] - x[0]);
    let d1 = (y[2] - y[1]) / (x[2] - x[1]);
    let curv = (d1 - d0) / (x[2] - x[0]);
    if curv >= 0.0 || !curv.is_finite() {
        return (x[1], y[1]);
    }
    let slope_at_x1 = d0 + curv * (x[1] - x[0]);
    let xv = x[1] - slope_at_x1 / (2.0 * curv);
    let xv = xv.clamp(x[0], x[2]);
    let yv = y[1] + slope_at_x1 * (xv - x[1]) + curv * (xv - x[1]).powi(2);
    (xv, yv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_grid_avoids_zero() {
        let g = log_symmetric(0.1, 1e-4, 10.0, 2048);
        assert_eq!(g.len(), 2048);
        assert!(g.iter().all(|&x| x != 0.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!((g[0] + 1.0).abs() < 1e-12 && (g[2047] - 1.0).abs() < 1e-12);
        assert!((g[1024] - 1e-5).abs() < 1e-17);
    }

    #[test]
    fn parabola_vertex() {
        let f = |x: f64| 3.0 - 2.0 * (x - 0.37).powi(2);
        let (x, y) = parabolic_peak([0.2, 0.3, 0.5], [f(0.2), f(0.3), f(0.5)]);
        assert!((x - 0.37).abs() < 1e-12);
        assert!((y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_adds_points_at_peaks() {
        let grid = linspace(-1.0, 1.0, 21);
        let values: Vec<f64> = grid.iter().map(|x| 1.0 / ((x - 0.33).powi(2) + 1e-3)).collect();
        let fine = refine_peaks(&grid, &values, 401);
        assert!(fine.len() > 400);
        assert!(fine.windows(2).all(|w| w[0] < w[1]));
        assert!(!fine.contains(&0.0));
    }
}
