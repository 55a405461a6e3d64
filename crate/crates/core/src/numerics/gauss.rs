use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Orders 8, 16 and 32 are cached; other orders are computed on demand.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    match order {
        8 | 16 | 32 => gl_ref(order).clone(),
        _ => compute(order),
    }
}

pub(crate) fn gl_ref(order: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static G8: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static G16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static G32: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match order {
        16 => G16.get_or_init(|| compute(16)),
        32 => G32.get_or_init(|| compute(32)),
        _ => G8.get_or_init(|| compute(8)),
    }
}

fn compute(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss-Legendre rule over `[a, b]` split at `breaks`, panels no
/// wider than `max_width`.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    max_width: f64,
    order: usize,
) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let (gx, gw) = gl_ref(order);
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|t| *t > a && *t < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut sum = 0.0;
    for win in cuts.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let panels = ((hi - lo) / max_width).ceil().max(1.0) as usize;
        let w = (hi - lo) / panels as f64;
        for p in 0..panels {
            let c = lo + (p as f64 + 0.5) * w;
            for (x, wx) in gx.iter().zip(gw) {
                sum += 0.5 * w * wx * f(c + 0.5 * w * x);
            }
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        for order in [1usize, 2, 5, 8, 16, 32] {
            let (x, w) = gauss_legendre(order);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
            let deg = 2 * order - 1;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let expect = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - expect).abs() < 1e-13, "order {order}");
        }
    }

    #[test]
    fn composite_rule() {
        let v = integrate_panels(|t| t.exp(), 0.0, 3.0, &[1.0, 2.5], 0.3, 8);
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-12);
    }
}
