//! Grid bracketing followed by golden-section refinement.
//!
//! Every argmin/argmax in the crate (cut point, Judge shift, maximizing time)
//! goes through [`periodic_grid_argmin`] to find the basin and
//! [`golden_section`] to refine inside the bracketing cells. When the caller
//! can supply the derivative, [`refine_minimum`] finishes with a bisection on
//! its sign change, which pins the location to near machine precision where
//! value comparisons alone stall at roughly the square root of it.

use crate::scalar::Real;

/// Outcome of a grid scan over one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMin<T> {
    pub index: usize,
    pub value: T,
    /// Another local minimum, at least two cells away, ties the global one.
    pub degenerate: bool,
    /// All samples tie: the function is flat to within the tie tolerance.
    pub flat: bool,
}

/// Argmin over periodic samples; ties within `tie_tol` keep the smallest index.
pub fn periodic_grid_argmin<T: Real>(values: &[T], tie_tol: T) -> GridMin<T> {
    assert!(!values.is_empty(), "grid must not be empty");
    let n = values.len();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] - tie_tol {
            best = i;
        }
    }
    let vmin = values[best];
    let vmax = values.iter().copied().fold(vmin, T::max);
    let flat = vmax - vmin <= tie_tol;
    let degenerate = flat
        || (0..n).any(|i| {
            let d = circular_distance(i, best, n);
            if d < 2 || values[i] > vmin + tie_tol {
                return false;
            }
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            values[i] <= prev && values[i] <= next && !cluster_connected(values, best, i, vmin, tie_tol)
        });
    GridMin {
        index: best,
        value: vmin,
        degenerate,
        flat,
    }
}

fn circular_distance(i: usize, j: usize, n: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(n - d)
}

// A run of tied samples between `a` and `b` is one flat basin, not two minima.
fn cluster_connected<T: Real>(values: &[T], a: usize, b: usize, vmin: T, tol: T) -> bool {
    let n = values.len();
    let forward = (1..n)
        .map(|s| (a + s) % n)
        .take_while(|&i| i != b)
        .all(|i| values[i] <= vmin + tol);
    let backward = (1..n)
        .map(|s| (a + n - s) % n)
        .take_while(|&i| i != b)
        .all(|i| values[i] <= vmin + tol);
    forward || backward
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub fn golden_section<T, F>(mut f: F, lo: T, hi: T, xtol: T, max_iter: usize) -> (T, T)
where
    T: Real,
    F: FnMut(T) -> T,
{
    let r = T::lit(INV_PHI);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > xtol && iter < max_iter {
        iter += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Root of `g` by bisection when `g(lo)` and `g(hi)` have opposite signs.
pub fn bisect<T, F>(mut g: F, lo: T, hi: T, xtol: T) -> Option<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let mut ga = g(a);
    let gb = g(b);
    if ga == T::zero() {
        return Some(a);
    }
    if gb == T::zero() {
        return Some(b);
    }
    if ga.signum() == gb.signum() || !ga.is_finite() || !gb.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let m = a + (b - a) / T::lit(2.0);
        if m <= a || m >= b || (b - a).abs() <= xtol {
            break;
        }
        let gm = g(m);
        if gm == T::zero() {
            return Some(m);
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Some(a + (b - a) / T::lit(2.0))
}

/// Refines a grid minimum at `center` inside `[center - half_width, center + half_width]`.
///
/// Golden section first; if `slope` is given and changes sign from negative
/// to positive around the golden estimate, bisection on it finishes the job.
pub fn refine_minimum<T, F, G>(
    f: F,
    slope: Option<G>,
    center: T,
    half_width: T,
    xtol: T,
) -> T
where
    T: Real,
    F: FnMut(T) -> T,
    G: FnMut(T) -> T,
{
    let lo = center - half_width;
    let hi = center + half_width;
    let (x_golden, _) = golden_section(f, lo, hi, xtol, 400);
    let Some(mut slope) = slope else {
        return x_golden;
    };
    let narrow = half_width * T::lit(1e-4);
    let brackets = [
        (x_golden - narrow, x_golden + narrow),
        (lo, hi),
    ];
    for (a, b) in brackets {
        let (sa, sb) = (slope(a), slope(b));
        if sa < T::zero() && sb > T::zero() {
            if let Some(root) = bisect(&mut slope, a, b, xtol * T::lit(1e-3)) {
                return root;
            }
        }
    }
    x_golden
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_quadratic_minimum() {
        let (x, fx) = golden_section(|x: f64| (x - 0.2).powi(2), -1.0, 1.0, 1e-10, 500);
        assert!((x - 0.2).abs() < 1e-8);
        assert!(fx < 1e-16);
    }

    #[test]
    fn refine_with_slope_reaches_machine_precision() {
        let f = |x: f64| 1.0 + (x - 0.3).powi(2);
        let df = |x: f64| 2.0 * (x - 0.3);
        let x = refine_minimum(f, Some(df), 0.31, 0.05, 1e-12);
        assert!((x - 0.3).abs() < 1e-14, "{x}");
    }

    #[test]
    fn ties_break_toward_smallest_index() {
        let values = [3.0, 1.0, 2.0, 1.0, 5.0];
        let m = periodic_grid_argmin(&values, 1e-12);
        assert_eq!(m.index, 1);
        assert!(m.degenerate);
        assert!(!m.flat);
    }

    #[test]
    fn flat_grid_is_degenerate() {
        let values = [1.0; 8];
        let m = periodic_grid_argmin(&values, 1e-12);
        assert_eq!(m.index, 0);
        assert!(m.flat && m.degenerate);
    }

    #[test]
    fn single_basin_is_not_degenerate() {
        let values: Vec<f64> = (0..64)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 64.0).cos())
            .collect();
        let m = periodic_grid_argmin(&values, 1e-12);
        assert_eq!(m.index, 32);
        assert!(!m.degenerate);
    }

    #[test]
    fn bisect_requires_sign_change() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
        let r = bisect(|x: f64| x.powi(3) - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }
}
