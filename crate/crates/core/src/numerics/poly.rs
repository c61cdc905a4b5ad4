use super::matrix::{ComplexMatrix, C64};

const MAX_ITER_PER_EIGENVALUE: usize = 100;

/// Roots of `p³ + c2 p² + c1 p + c0`, with multiplicity.
///
/// Roots are eigenvalues of the companion matrix, found by shifted QR on its
/// Hessenberg form. An exactly vanishing constant term is deflated first so
/// that the factor `p` contributes an exact zero. Output is sorted by real
/// part, then imaginary part.
pub fn cubic_roots(c2: f64, c1: f64, c0: f64) -> [C64; 3] {
    let mut roots = if c0 == 0.0 {
        // p (p² + c2 p + c1)
        let mut r = vec![C64::new(0.0, 0.0)];
        if c1 == 0.0 {
            r.push(C64::new(0.0, 0.0));
            r.push(C64::new(-c2, 0.0));
        } else {
            r.extend(companion_roots(&[c2, c1]));
        }
        r
    } else {
        companion_roots(&[c2, c1, c0])
    };
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    [roots[0], roots[1], roots[2]]
}

/// Roots of the monic polynomial `p^n + a[0] p^(n-1) + … + a[n-1]`.
fn companion_roots(a: &[f64]) -> Vec<C64> {
    let n = a.len();
    let mut c = ComplexMatrix::zeros(n, n);
    for (j, &coef) in a.iter().enumerate() {
        c[(0, j)] = C64::new(-coef, 0.0);
    }
    for i in 1..n {
        c[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    hessenberg_eigenvalues(c)
        .into_iter()
        .map(|z| polish(a, z))
        .collect()
}

fn eval_monic(a: &[f64], z: C64) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &coef in a {
        dp = dp * z + p;
        p = p * z + coef;
    }
    (p, dp)
}

/// Up to two guarded Newton steps; a step is kept only if it shrinks |p(z)|.
fn polish(a: &[f64], mut z: C64) -> C64 {
    for _ in 0..2 {
        let (p, dp) = eval_monic(a, z);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        if eval_monic(a, candidate).0.norm() < p.norm() {
            z = candidate;
        } else {
            break;
        }
    }
    z
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
/// Wilkinson shifts and deflation. Entries below the first subdiagonal are
/// ignored.
pub fn hessenberg_eigenvalues(mut h: ComplexMatrix) -> Vec<C64> {
    assert!(h.is_square(), "Hessenberg QR needs a square matrix");
    let n = h.rows();
    let mut eig = vec![C64::new(0.0, 0.0); n];
    if n == 0 {
        return eig;
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let scale = if diag == 0.0 { h.max_abs() } else { diag };
            if sub <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            // Give up on convergence and report the current diagonal.
            log::warn!("Hessenberg QR did not converge; returning unconverged diagonal");
            for k in 0..=hi {
                eig[k] = h[(k, k)];
            }
            break;
        }

        let shift = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, lo, hi, shift);
    }
    eig
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One shifted QR sweep `H - μI = QR`, `H <- RQ + μI` on rows/cols `lo..=hi`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: C64) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            (x / r, y / r)
        };
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c.conj() * a + s.conj() * b;
            h[(k + 1, j)] = -s * a + c * b;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let top = (k + 2).min(hi);
        for i in lo..=top {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s;
            h[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}
