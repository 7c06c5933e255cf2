//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. The helpers are
//! small on purpose: null spaces via SVD, orthonormal range bases via
//! pivoted Gram-Schmidt, and clustering of Hermitian spectra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Tolerance for matrix identities (homomorphism, idempotence, covariance).
pub const MATRIX_TOL: f64 = 1e-9;
/// Tolerance for rounding a Hom dimension to an integer.
pub const HOM_TOL: f64 = 1e-6;
/// Singular-value cutoff for rank detection.
pub const RANK_CUTOFF: f64 = 1e-8;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `exp(2 pi i num / den)`, exact at the real and imaginary axes.
pub fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let r = num % den;
    if r == 0 {
        return ONE;
    }
    if 2 * r == den {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * r == den {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * r == 3 * den {
        return Complex64::new(0.0, -1.0);
    }
    let theta = std::f64::consts::TAU * (r as f64) / (den as f64);
    Complex64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMat) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

/// Singular values of `m`, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// True when the smallest singular value is above `RANK_CUTOFF` relative to the largest.
pub fn is_invertible(m: &CMat) -> bool {
    if !m.is_square() {
        return false;
    }
    if m.nrows() == 0 {
        return true;
    }
    let s = singular_values(m);
    let top = s[0];
    top > 0.0 && s[s.len() - 1] > RANK_CUTOFF * top.max(1.0)
}

/// Orthonormal basis of the null space of `m`, one column per null vector.
pub fn null_space(m: &CMat, cutoff: f64) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return zeros(0, 0);
    }
    let padded = if m.nrows() < cols {
        let mut p = zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff * top)
        .map(|(i, _)| i)
        .collect();
    let mut out = zeros(cols, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        for r in 0..cols {
            out[(r, j)] = v_t[(i, r)].conj();
        }
    }
    out
}

/// Orthonormal basis for the column space of `m` by modified Gram-Schmidt
/// with column pivoting on the largest residual norm.
///
/// Columns whose residual falls below `cutoff` (relative to the largest
/// input column, floored at 1) are treated as dependent.
pub fn orthonormal_range(m: &CMat, cutoff: f64) -> CMat {
    let n = m.nrows();
    let mut residual: Vec<CVec> = m.column_iter().map(|c| c.into_owned()).collect();
    let scale = residual.iter().map(vec_norm).fold(0.0, f64::max).max(1.0);
    let mut basis: Vec<CVec> = Vec::new();
    while !residual.is_empty() && basis.len() < n {
        let (pivot, norm) = residual
            .iter()
            .enumerate()
            .map(|(i, c)| (i, vec_norm(c)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if norm <= cutoff * scale {
            break;
        }
        let mut q = residual.swap_remove(pivot) / Complex64::new(norm, 0.0);
        // second pass against earlier vectors keeps q orthogonal to working precision
        for b in &basis {
            let c = b.dotc(&q);
            q -= b * c;
        }
        let qn = vec_norm(&q);
        q /= Complex64::new(qn, 0.0);
        for r in residual.iter_mut() {
            let c = q.dotc(r);
            *r -= &q * c;
        }
        basis.push(q);
    }
    let mut out = zeros(n, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues grouped into
/// clusters. Each cluster is `(mean eigenvalue, orthonormal eigenvectors)`,
/// ordered by ascending eigenvalue.
pub fn hermitian_clusters(m: &CMat, gap: f64) -> Vec<(f64, CMat)> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    // symmetrize to remove rounding asymmetry before the solver sees it
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        if clusters.is_empty() || lambda - last > gap {
            clusters.push(vec![i]);
        } else {
            clusters.last_mut().unwrap().push(i);
        }
        last = lambda;
    }
    clusters
        .into_iter()
        .map(|idx| {
            let mean = idx.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / idx.len() as f64;
            let mut vecs = zeros(n, idx.len());
            for (j, &i) in idx.iter().enumerate() {
                vecs.set_column(j, &eig.eigenvectors.column(i));
            }
            (mean, vecs)
        })
        .collect()
}

/// Null space of the stacked linear maps `T -> T a_k - b_k T` over
/// `d_out x d_in` matrices `T`. Each returned matrix is an intertwiner.
pub fn intertwiner_space(pairs: &[(&CMat, &CMat)], d_in: usize, d_out: usize) -> Vec<CMat> {
    let n = d_in * d_out;
    if n == 0 {
        return Vec::new();
    }
    if pairs.is_empty() {
        return (0..n)
            .map(|k| {
                let mut t = zeros(d_out, d_in);
                t[(k % d_out, k / d_out)] = ONE;
                t
            })
            .collect();
    }
    let mut stacked = zeros(pairs.len() * n, n);
    for (p, (a, b)) in pairs.iter().enumerate() {
        // column-major vec: vec(T a) = (a^T kron I) vec T, vec(b T) = (I kron b) vec T
        let base = p * n;
        for col_in in 0..d_in {
            for row_out in 0..d_out {
                let col = col_in * d_out + row_out;
                // contribution of T[row_out, col_in] to (T a)[row_out, j] is a[col_in, j]
                for j in 0..d_in {
                    stacked[(base + j * d_out + row_out, col)] += a[(col_in, j)];
                }
                // contribution to (b T)[i, col_in] is b[i, row_out]
                for i in 0..d_out {
                    stacked[(base + col_in * d_out + i, col)] -= b[(i, row_out)];
                }
            }
        }
    }
    let ns = null_space(&stacked, RANK_CUTOFF);
    ns.column_iter()
        .map(|c| CMat::from_column_slice(d_out, d_in, c.as_slice()))
        .collect()
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let m = random_matrix(rng, n, n);
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Random invertible matrix with condition number at most 50.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    loop {
        let m = random_matrix(rng, n, n);
        let s = singular_values(&m);
        if n == 0 || s[n - 1] * 50.0 >= s[0] {
            return m;
        }
    }
}

pub fn block_diagonal(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roots_of_unity_hit_axes_exactly() {
        assert_eq!(root_of_unity(1, 4), Complex64::new(0.0, 1.0));
        assert_eq!(root_of_unity(2, 4), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(8, 4), ONE);
        let w = root_of_unity(1, 3);
        assert!((w - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn null_space_of_rank_deficient_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 5, 2);
        let b = random_matrix(&mut rng, 2, 4);
        let m = &a * &b; // 5x4, rank 2
        let ns = null_space(&m, RANK_CUTOFF);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-10);
        // wide input gets padded
        let ns_wide = null_space(&b, RANK_CUTOFF);
        assert_eq!(ns_wide.ncols(), 2);
    }

    #[test]
    fn orthonormal_range_detects_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 6, 3);
        let m = &a * random_matrix(&mut rng, 3, 6);
        let q = orthonormal_range(&m, RANK_CUTOFF);
        assert_eq!(q.ncols(), 3);
        assert!(max_diff(&(q.adjoint() * &q), &identity(3)) < 1e-12);
        // projecting m onto the range changes nothing
        assert!(max_diff(&(&q * q.adjoint() * &m), &m) < 1e-10);
    }

    #[test]
    fn intertwiners_of_diagonal_matrices() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![ONE, -ONE]));
        let b = CMat::from_diagonal(&CVec::from_vec(vec![-ONE, ONE, ONE]));
        let space = intertwiner_space(&[(&a, &b)], 2, 3);
        // T a = b T forces T to map the +1 eigenspace into the +1 eigenspace
        assert_eq!(space.len(), 1 + 2);
        for t in &space {
            assert!(max_diff(&(t * &a), &(&b * t)) < 1e-12);
        }
    }

    #[test]
    fn hermitian_clusters_group_repeated_eigenvalues() {
        let d = CMat::from_diagonal(&CVec::from_vec(
            [1.0, 3.0, 1.0, 3.0, 3.0]
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        ));
        let c = hermitian_clusters(&d, 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1.ncols(), 2);
        assert_eq!(c[1].1.ncols(), 3);
    }
}
