//! Symmetric tridiagonal matrices: Sturm counts, bisection eigenvalues, inverse iteration.

use std::thread;

/// Symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal must be one shorter");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let emax = self.off.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }
}

/// Number of eigenvalues strictly below `lambda`.
pub fn sturm_count(t: &TridiagonalOperator, lambda: f64) -> usize {
    count_with(t, lambda, t.pivmin())
}

fn count_with(t: &TridiagonalOperator, lambda: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..t.len() {
        q = if i == 0 {
            t.diag[0] - lambda
        } else {
            let e = t.off[i - 1];
            t.diag[i] - lambda - e * e / q
        };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (from zero), bisected until the bracket is narrower
/// than `rel_tol * max(1, |lambda|)`.
pub fn eigenvalue(t: &TridiagonalOperator, k: usize, rel_tol: f64) -> f64 {
    let (mut lo, mut hi) = t.gershgorin();
    let pivmin = t.pivmin();
    let span = hi - lo;
    lo -= 1e-12 * span.max(1.0);
    hi += 1e-12 * span.max(1.0);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs().max(1.0) || mid == lo || mid == hi {
            break;
        }
        if count_with(t, mid, pivmin) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The `count` smallest eigenvalues, bisected concurrently.
pub fn lowest_eigenvalues(t: &TridiagonalOperator, count: usize, rel_tol: f64) -> Vec<f64> {
    let count = count.min(t.len());
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    if workers <= 1 {
        return (0..count).map(|k| eigenvalue(t, k, rel_tol)).collect();
    }
    let mut out = vec![0.0; count];
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..count)
                        .step_by(workers)
                        .map(|k| (k, eigenvalue(t, k, rel_tol)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, v) in h.join().expect("bisection worker panicked") {
                out[k] = v;
            }
        }
    });
    out
}

/// Unit eigenvector for an accurate eigenvalue `lambda`, by inverse iteration.
pub fn eigenvector(t: &TridiagonalOperator, lambda: f64) -> Vec<f64> {
    let n = t.len();
    if n == 0 {
        return Vec::new();
    }
    // scale by the eigenvalue, not the matrix norm: stretched meshes make the latter huge
    let tiny = f64::EPSILON * lambda.abs().max(1.0);
    let sigma = lambda + tiny * 10.0;
    let mut v = vec![1.0; n];
    for (i, x) in v.iter_mut().enumerate() {
        // break symmetry so odd states are reachable
        *x += 1e-3 * (i as f64 * 0.618_033_988_75).fract();
    }
    let mut c = vec![0.0; n];
    let mut piv = vec![0.0; n];
    for _ in 0..4 {
        // forward sweep of (T - sigma) x = v without pivoting
        let mut denom = t.diag[0] - sigma;
        if denom.abs() < tiny {
            denom = tiny;
        }
        piv[0] = denom;
        let mut rhs = v.clone();
        for i in 1..n {
            let e = t.off[i - 1];
            c[i - 1] = e / piv[i - 1];
            let mut d = t.diag[i] - sigma - c[i - 1] * e;
            if d.abs() < tiny {
                d = tiny;
            }
            piv[i] = d;
            rhs[i] -= c[i - 1] * rhs[i - 1];
        }
        v[n - 1] = rhs[n - 1] / piv[n - 1];
        for i in (0..n - 1).rev() {
            v[i] = (rhs[i] - t.off[i] * v[i + 1]) / piv[i];
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            break;
        }
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}
