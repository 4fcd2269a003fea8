//! Exact integer lattice machinery: column Hermite normal form, integer
//! kernels, LLL reduction with respect to an integral Gram matrix, and
//! Fincke-Pohst enumeration of short vectors.
//!
//! Everything here is arbitrary-precision and deterministic. Floating point
//! is never used; LLL runs with exact rational Gram-Schmidt data, which is
//! cheap at the ranks that occur in this crate (4 for equivalence lattices,
//! a few dozen for relation kernels).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense column-major-agnostic integer matrix (row-major storage).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        IMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<BigInt>>) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = IMat::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for i in 0..r {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col_j += q * col_k
    pub fn add_col_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, k)] * q;
            self[(i, j)] += t;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut out = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Column Hermite normal form.
///
/// Returns `(h, u)` with `a * u = h`, `u` unimodular. `h` is in column
/// echelon form: pivots advance strictly down and to the right, each pivot
/// is positive, and in a pivot's row every entry in an earlier column is
/// reduced into `[0, pivot)`. The form is canonical, so equal column spans
/// produce equal `h`.
pub fn hnf_col(a: &IMat) -> (IMat, IMat) {
    let mut h = a.clone();
    let mut u = IMat::identity(a.cols);
    let mut pivot_col = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    for row in 0..h.rows {
        if pivot_col >= h.cols {
            break;
        }
        // Clear row `row` to a single nonzero entry among columns >= pivot_col
        // by gcd steps.
        loop {
            // Find column with smallest nonzero |entry| in this row.
            let mut best: Option<usize> = None;
            for j in pivot_col..h.cols {
                if !h[(row, j)].is_zero() {
                    best = match best {
                        None => Some(j),
                        Some(b) => {
                            if h[(row, j)].abs() < h[(row, b)].abs() {
                                Some(j)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(pivot_col, b);
            u.swap_cols(pivot_col, b);
            let mut done = true;
            for j in (pivot_col + 1)..h.cols {
                if h[(row, j)].is_zero() {
                    continue;
                }
                let q = -(&h[(row, j)] / &h[(row, pivot_col)]);
                h.add_col_mul(j, pivot_col, &q);
                u.add_col_mul(j, pivot_col, &q);
                if !h[(row, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(row, pivot_col)].is_zero() {
            continue;
        }
        if h[(row, pivot_col)].is_negative() {
            h.negate_col(pivot_col);
            u.negate_col(pivot_col);
        }
        pivots.push((row, pivot_col));
        pivot_col += 1;
    }

    // Canonical reduction of earlier columns against each pivot.
    for &(row, col) in &pivots {
        for j in 0..col {
            let q = -h[(row, j)].div_floor(&h[(row, col)]);
            h.add_col_mul(j, col, &q);
            u.add_col_mul(j, col, &q);
        }
    }
    (h, u)
}

/// Basis of the integer kernel `{x : a x = 0}` as columns, in HNF.
pub fn kernel(a: &IMat) -> Vec<Vec<BigInt>> {
    let (h, u) = hnf_col(a);
    let mut gens = Vec::new();
    for j in 0..h.cols {
        if (0..h.rows).all(|i| h[(i, j)].is_zero()) {
            gens.push(u.col(j));
        }
    }
    if gens.is_empty() {
        return gens;
    }
    lattice_basis(gens)
}

/// HNF basis (columns) of the lattice spanned by the given generators.
pub fn lattice_basis(gens: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let m = IMat::from_cols(gens);
    let (h, _) = hnf_col(&m);
    (0..h.cols)
        .filter(|&j| (0..h.rows).any(|i| !h[(i, j)].is_zero()))
        .map(|j| h.col(j))
        .collect()
}

/// HNF basis of `{x in Z^cols : a x = 0 mod m}`. Always full rank (contains
/// `m Z^cols`).
pub fn kernel_mod(a: &IMat, m: &BigInt) -> Vec<Vec<BigInt>> {
    // Kernel of [a | m I_rows] over Z, projected to the first block.
    let mut big = IMat::zero(a.rows, a.cols + a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            big[(i, j)] = a[(i, j)].clone();
        }
        big[(i, a.cols + i)] = m.clone();
    }
    let gens: Vec<Vec<BigInt>> = kernel(&big)
        .into_iter()
        .map(|v| v[..a.cols].to_vec())
        .collect();
    lattice_basis(gens)
}

fn rat(i: &BigInt) -> BigRational {
    BigRational::from_integer(i.clone())
}

/// Inner product of coordinate vectors with respect to an integral Gram
/// matrix: `x^T G y`.
pub fn gram_ip(g: &IMat, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..g.rows {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..g.cols {
            acc += &x[i] * &g[(i, j)] * &y[j];
        }
    }
    acc
}

/// LLL-reduce the standard basis of `Z^n` with respect to the positive
/// definite integral Gram matrix `g`, with delta = 99/100. Returns the
/// reduced basis as coordinate vectors (exact rational Gram-Schmidt; the
/// rank-4 lattices of this crate make the cost irrelevant).
pub fn lll_on_gram(g: &IMat) -> Vec<Vec<BigInt>> {
    let n = g.rows;
    let mut b: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            v
        })
        .collect();
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));

    // Exact Gram-Schmidt data for the current basis.
    let gso = |b: &Vec<Vec<BigInt>>| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut norms = vec![BigRational::zero(); n];
        // proj[i][j]: <b_i, b*_j> computed incrementally.
        for i in 0..n {
            let mut star_norm = rat(&gram_ip(g, &b[i], &b[i]));
            for j in 0..i {
                let mut ip = rat(&gram_ip(g, &b[i], &b[j]));
                for k in 0..j {
                    ip -= mu[i][k].clone() * mu[j][k].clone() * norms[k].clone();
                }
                mu[i][j] = ip / norms[j].clone();
                star_norm -= mu[i][j].clone() * mu[i][j].clone() * norms[j].clone();
            }
            norms[i] = star_norm;
        }
        (mu, norms)
    };

    let (mut mu, mut norms) = gso(&b);
    let mut k = 1usize;
    while k < n {
        // Size reduction.
        for j in (0..k).rev() {
            let r = mu[k][j].round().to_integer();
            if !r.is_zero() {
                for t in 0..n {
                    let d = &r * &b[j][t];
                    b[k][t] -= d;
                }
                let (m2, n2) = gso(&b);
                mu = m2;
                norms = n2;
            }
        }
        // Lovasz condition.
        let lhs = norms[k].clone() + mu[k][k - 1].clone() * mu[k][k - 1].clone() * norms[k - 1].clone();
        if lhs >= delta.clone() * norms[k - 1].clone() {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (m2, n2) = gso(&b);
            mu = m2;
            norms = n2;
            k = k.max(2) - 1;
        }
    }
    b
}

/// All nonzero vectors `x` (one per +-pair, first nonzero coordinate
/// positive) with `x^T G x <= bound`, for a positive definite integral Gram
/// matrix. LLL preprocessing plus Fincke-Pohst enumeration with exact
/// rational arithmetic.
pub fn short_vectors(g: &IMat, bound: &BigInt) -> Vec<Vec<BigInt>> {
    let n = g.rows;
    if bound.is_negative() {
        return Vec::new();
    }
    let red = lll_on_gram(g);
    // Gram of the reduced basis.
    let mut gr = IMat::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            gr[(i, j)] = gram_ip(g, &red[i], &red[j]);
        }
    }
    // Rational Cholesky: Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2.
    let mut q: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| rat(&gr[(i, j)])).collect()).collect();
    for i in 0..n {
        assert!(q[i][i].is_positive(), "gram matrix not positive definite");
        for j in (i + 1)..n {
            let r = q[i][j].clone() / q[i][i].clone();
            q[j][i] = r; // store u_ij transposed for convenience
        }
        for k in (i + 1)..n {
            for l in k..n {
                let d = q[k][i].clone() * q[i][l].clone();
                q[k][l] -= d;
            }
        }
    }
    // d_i = q[i][i], u_ij = q[j][i] for j > i (note transposed storage).
    let d: Vec<BigRational> = (0..n).map(|i| q[i][i].clone()).collect();
    let u = |i: usize, j: usize| q[j][i].clone();

    let bound_r = rat(bound);
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut x = vec![BigInt::zero(); n];

    // Integer range of t with d*(t + c)^2 <= budget.
    fn level_range(d: &BigRational, c: &BigRational, budget: &BigRational) -> Option<(BigInt, BigInt)> {
        if budget.is_negative() {
            return None;
        }
        // |t + c| <= sqrt(budget/d); over-approximate then tighten exactly.
        let s2 = budget / d;
        let approx = (s2.numer() * s2.denom()).sqrt() / s2.denom() + 1;
        let center_floor = (-c).floor().to_integer();
        let mut lo = &center_floor - &approx - 1;
        let mut hi = &center_floor + &approx + 2;
        let ok = |t: &BigInt| {
            let tc = rat(t) + c;
            &tc * &tc * d <= *budget
        };
        while lo <= hi && !ok(&lo) {
            lo += 1;
        }
        while hi >= lo && !ok(&hi) {
            hi -= 1;
        }
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    }

    fn descend(
        level: isize,
        n: usize,
        d: &[BigRational],
        u: &dyn Fn(usize, usize) -> BigRational,
        budget: BigRational,
        x: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if level < 0 {
            if x.iter().any(|v| !v.is_zero()) {
                out.push(x.clone());
            }
            return;
        }
        let i = level as usize;
        let mut c = BigRational::zero();
        for j in (i + 1)..n {
            c += u(i, j) * rat(&x[j]);
        }
        let Some((lo, hi)) = level_range(&d[i], &c, &budget) else { return };
        let mut t = lo;
        while t <= hi {
            x[i] = t.clone();
            let tc = rat(&t) + &c;
            let used = &tc * &tc * &d[i];
            descend(level - 1, n, d, u, budget.clone() - used, x, out);
            t += 1;
        }
        x[i] = BigInt::zero();
    }

    descend(n as isize - 1, n, &d, &u, bound_r, &mut x, &mut out);

    // Map back through the reduced basis and fix sign convention.
    let mut res: Vec<Vec<BigInt>> = Vec::new();
    for coeffs in out {
        let mut v = vec![BigInt::zero(); n];
        for (i, ci) in coeffs.iter().enumerate() {
            for t in 0..n {
                v[t] += ci * &red[i][t];
            }
        }
        let first = v.iter().find(|z| !z.is_zero());
        if let Some(f) = first {
            if f.is_negative() {
                for z in &mut v {
                    *z = -z.clone();
                }
            }
        }
        res.push(v);
    }
    res.sort();
    res.dedup();
    res
}

/// Smallest value of the quadratic form on nonzero vectors, together with
/// all vectors attaining it (up to sign), given an upper bound that is
/// known to be attainable-or-larger.
pub fn minimal_vectors(g: &IMat, bound: &BigInt) -> (BigInt, Vec<Vec<BigInt>>) {
    let all = short_vectors(g, bound);
    assert!(!all.is_empty(), "short vector bound excluded the whole lattice");
    let mut min = gram_ip(g, &all[0], &all[0]);
    for v in &all {
        let q = gram_ip(g, v, v);
        if q < min {
            min = q;
        }
    }
    let vecs = all
        .into_iter()
        .filter(|v| gram_ip(g, v, v) == min)
        .collect();
    (min, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn mat(rows: &[&[i64]]) -> IMat {
        IMat::from_rows(rows.iter().map(|r| r.iter().map(|&v| bi(v)).collect()).collect())
    }

    #[test]
    fn hnf_identity_fixed() {
        let a = mat(&[&[2, 4], &[0, 3]]);
        let (h, u) = hnf_col(&a);
        assert_eq!(a.mul(&u), h);
        // det preserved up to sign: |det h| = 6
        let det = &h[(0, 0)] * &h[(1, 1)] - &h[(0, 1)] * &h[(1, 0)];
        assert_eq!(det.abs(), bi(6));
    }

    #[test]
    fn kernel_of_singular() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|z| z.is_zero()));
        }
    }

    #[test]
    fn kernel_mod_contains_scaled_identity() {
        let a = mat(&[&[1, 1], &[0, 2]]);
        let m = bi(8);
        let k = kernel_mod(&a, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            for z in a.mul_vec(v) {
                assert!(z.mod_floor(&m).is_zero());
            }
        }
        // (8,0) and (0,8) must be in the span.
        let im = IMat::from_cols(k);
        let (h, _) = hnf_col(&im);
        let det = &h[(0, 0)] * &h[(1, 1)];
        assert!((bi(64) % det).is_zero());
    }

    #[test]
    fn short_vectors_diag_form() {
        // Q = x^2 + 5y^2, bound 5: vectors (1,0), (2,0), (0,1) up to sign.
        let g = mat(&[&[1, 0], &[0, 5]]);
        let v = short_vectors(&g, &bi(5));
        assert_eq!(v.len(), 3);
        let (min, mins) = minimal_vectors(&g, &bi(5));
        assert_eq!(min, bi(1));
        assert_eq!(mins, vec![vec![bi(1), bi(0)]]);
    }

    #[test]
    fn short_vectors_off_diagonal() {
        // Q(x,y) = x^2 + xy + y^2 (Gram doubled to stay integral: use
        // [[2,1],[1,2]], values are 2*Q). Minimum 2 attained by 3 classes.
        let g = mat(&[&[2, 1], &[1, 2]]);
        let (min, mins) = minimal_vectors(&g, &bi(2));
        assert_eq!(min, bi(2));
        assert_eq!(mins.len(), 3);
    }

    #[test]
    fn lll_shortens_skewed_basis() {
        // Lattice Z^2 presented by a skewed Gram: basis (1,0),(1000,1) with
        // Q = standard: Gram = [[1, 1000], [1000, 1000001]].
        let g = mat(&[&[1, 1000], &[1000, 1000001]]);
        let red = lll_on_gram(&g);
        let norms: Vec<BigInt> = red.iter().map(|v| gram_ip(&g, v, v)).collect();
        assert!(norms.iter().all(|n| *n <= bi(2)));
    }

    #[test]
    fn enumeration_exhaustive_vs_brute_force() {
        // Random-ish pos def rank 3 form; compare against brute force box.
        let g = mat(&[&[4, 1, 0], &[1, 3, 1], &[0, 1, 5]]);
        let bound = bi(20);
        let fast = short_vectors(&g, &bound);
        let mut slow = Vec::new();
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                for z in -10i64..=10 {
                    if (x, y, z) == (0, 0, 0) {
                        continue;
                    }
                    let v = vec![bi(x), bi(y), bi(z)];
                    if gram_ip(&g, &v, &v) <= bound {
                        let mut w = v.clone();
                        if w.iter().find(|t| !t.is_zero()).unwrap().is_negative() {
                            for t in &mut w {
                                *t = -t.clone();
                            }
                        }
                        slow.push(w);
                    }
                }
            }
        }
        slow.sort();
        slow.dedup();
        assert_eq!(fast, slow);
    }
}
