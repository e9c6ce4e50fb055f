use num_complex::Complex64;

/// Eigenvalues (ascending) and matching unit eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    /// `vectors[k]` is the eigenvector for `values[k]`.
    pub vectors: [[Complex64; N]; N],
}

const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi diagonalization.
///
/// Intended as an independent oracle for the closed-form eigensystems; it
/// converges quadratically and reaches ~1e-15 relative accuracy for the small
/// matrices used here. Only the Hermitian part of `matrix` is read.
pub fn hermitian_eigen<const N: usize>(matrix: &[[Complex64; N]; N]) -> HermitianEigen<N> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let mut a = [[zero; N]; N];
    for i in 0..N {
        for j in 0..N {
            a[i][j] = 0.5 * (matrix[i][j] + matrix[j][i].conj());
        }
    }
    let mut v = [[zero; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = one;
    }

    let total: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if total == 0.0 {
        return finish([0.0; N], v);
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * total {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // phase that makes a[p][q] real and positive after conjugation
                let phase = apq / mag;
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // U = Φ·R with Φ = diag(1, …, conj(phase) at q, …)
                // columns p and q of U:
                //   U[p][p] = c, U[p][q] = s, U[q][p] = −s·conj(phase), U[q][q] = c·conj(phase)
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = -s * phase.conj();
                let uqq = c * phase.conj();

                // A ← A·U (columns p, q)
                for row in a.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * upp + xq * uqp;
                    row[q] = xp * upq + xq * uqq;
                }
                // A ← U†·A (rows p, q)
                for col in 0..N {
                    let (xp, xq) = (a[p][col], a[q][col]);
                    a[p][col] = upp.conj() * xp + uqp.conj() * xq;
                    a[q][col] = upq.conj() * xp + uqq.conj() * xq;
                }
                a[p][q] = zero;
                a[q][p] = zero;
                // V ← V·U
                for row in v.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * upp + xq * uqp;
                    row[q] = xp * upq + xq * uqq;
                }
            }
        }
    }

    let values: [f64; N] = std::array::from_fn(|i| a[i][i].re);
    finish(values, v)
}

fn finish<const N: usize>(values: [f64; N], v: [[Complex64; N]; N]) -> HermitianEigen<N> {
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values: [f64; N] = std::array::from_fn(|k| values[order[k]]);
    let vectors: [[Complex64; N]; N] = std::array::from_fn(|k| {
        let col: [Complex64; N] = std::array::from_fn(|r| v[r][order[k]]);
        fix_phase(col)
    });
    HermitianEigen {
        values: sorted_values,
        vectors,
    }
}

/// Normalizes `v` and rotates its global phase so the largest-magnitude
/// component is real and positive.
pub(crate) fn fix_phase<const N: usize>(mut v: [Complex64; N]) -> [Complex64; N] {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v;
    }
    let mut lead = 0;
    for i in 1..N {
        // small slack so near-ties resolve to the lower index deterministically
        if v[i].norm() > v[lead].norm() * (1.0 + 1e-9) {
            lead = i;
        }
    }
    let rot = v[lead].conj() / v[lead].norm();
    for z in v.iter_mut() {
        *z = *z * rot / norm;
    }
    v
}
