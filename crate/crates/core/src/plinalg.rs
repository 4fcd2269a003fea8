//! Linear algebra over Qp at fixed precision: kernels, solving inside a
//! span, and characteristic polynomials.
//!
//! Kernels are computed through exact integer HNF on the system reduced
//! mod p^W, so elimination order cannot silently lose digits; pivots of
//! the solution lattice separate true kernel directions (small p-content)
//! from the p^W tail, and a residual check plus an expected-dimension
//! postcondition guard against precision collapse.

use crate::error::{Error, Result};
use crate::linalg::{self, IMat};
use crate::padic::Padic;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Scale a row of Padic entries to integral values and return them reduced
/// mod p^w together with the applied shift.
fn row_to_int(p: u64, row: &[Padic], w: u32) -> Result<Vec<BigInt>> {
    let mut minv: i64 = 0;
    for e in row {
        if let Some(v) = e.valuation() {
            minv = minv.min(v);
        }
    }
    let mut out = Vec::with_capacity(row.len());
    for e in row {
        let shifted = e.shift(-minv);
        let have = shifted.abs_prec();
        if have < w as i64 && !shifted.is_zero() || (shifted.is_zero() && have < w as i64) {
            return Err(Error::Precision(format!(
                "row entry known mod p^{have}, need p^{w}"
            )));
        }
        out.push(BigInt::from(shifted.to_int_mod(w)?));
    }
    Ok(out)
}

/// Kernel of the matrix with the given rows over Qp at precision w.
/// Returns primitive integer coordinate vectors (“unit content”), checked
/// to satisfy the system to at least w - slack digits. When
/// `expected_dim` is given, a mismatch is a precision error.
pub fn kernel_at_precision(
    p: u64,
    rows: &[Vec<Padic>],
    w: u32,
    expected_dim: Option<usize>,
) -> Result<Vec<Vec<BigInt>>> {
    let cols = rows.first().map_or(0, |r| r.len());
    if cols == 0 {
        return Ok(Vec::new());
    }
    let modulus = BigInt::from(p).pow(w);
    let mut int_rows = Vec::with_capacity(rows.len());
    for r in rows {
        assert_eq!(r.len(), cols);
        int_rows.push(row_to_int(p, r, w)?);
    }
    let a = IMat::from_rows(int_rows);
    let basis = linalg::kernel_mod(&a, &modulus);

    // Separate genuine kernel directions by p-content.
    let threshold = (w / 2) as i64;
    let mut out = Vec::new();
    for col in basis {
        let mut content: Option<i64> = None;
        for e in &col {
            if !e.is_zero() {
                let mut v = 0i64;
                let mut cur = e.abs();
                let pb = BigInt::from(p);
                while (&cur % &pb).is_zero() {
                    cur /= &pb;
                    v += 1;
                }
                content = Some(content.map_or(v, |c| c.min(v)));
            }
        }
        let Some(content) = content else { continue };
        if content >= threshold {
            continue;
        }
        let div = BigInt::from(p).pow(content as u32);
        let prim: Vec<BigInt> = col.iter().map(|e| e / &div).collect();
        // Residual check: each row must vanish to w minus a small slack.
        let slack_digits = (w / 4).max(2).min(w - 1);
        let check_mod = BigInt::from(p).pow(w - slack_digits);
        for (ri, r) in a.rows_iter().enumerate() {
            let mut acc = BigInt::zero();
            for (c, e) in r.iter().enumerate() {
                acc += e * &prim[c];
            }
            if !acc.mod_floor(&check_mod).is_zero() {
                return Err(Error::Precision(format!(
                    "kernel vector fails row {ri} beyond the slack"
                )));
            }
        }
        out.push(prim);
    }
    if let Some(d) = expected_dim {
        if out.len() != d {
            return Err(Error::Precision(format!(
                "kernel dimension {} does not match the expected {d}; raise the working precision",
                out.len()
            )));
        }
    }
    Ok(out)
}

impl IMat {
    pub(crate) fn rows_iter(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        (0..self.rows).map(move |i| (0..self.cols).map(|j| self[(i, j)].clone()).collect())
    }
}

/// Solve sum_k x_k col_k = target over Qp by valuation-pivoted
/// elimination; consistency on the non-pivot rows is verified.
pub fn solve_in_span(p: u64, cols: &[Vec<Padic>], target: &[Padic]) -> Result<Vec<Padic>> {
    let d = cols.len();
    let n = target.len();
    assert!(cols.iter().all(|c| c.len() == n));
    // Augmented system [cols | target], eliminate with the p-adically
    // largest pivots (minimal valuation).
    let mut m: Vec<Vec<Padic>> = (0..n)
        .map(|r| {
            let mut row: Vec<Padic> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..d {
        // Best pivot row.
        let mut best: Option<(usize, i64)> = None;
        for (r, row) in m.iter().enumerate() {
            if pivots.contains(&r) {
                continue;
            }
            if let Some(v) = row[col].valuation() {
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((r, v));
                }
            }
        }
        let (pr, _) = best.ok_or_else(|| {
            Error::Precision("span matrix rank-deficient at working precision".into())
        })?;
        pivots.push(pr);
        let inv = m[pr][col].inv()?;
        let prow: Vec<Padic> = m[pr].iter().map(|e| e.mul(&inv)).collect();
        m[pr] = prow.clone();
        for r in 0..n {
            if r == pr || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..=d {
                let t = prow[c].mul(&f);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    // Back out solution and verify the non-pivot rows vanish.
    let mut x = vec![Padic::zero(p, 1); d];
    for (col, &pr) in pivots.iter().enumerate() {
        x[col] = m[pr][d].clone();
    }
    for (r, row) in m.iter().enumerate() {
        if pivots.contains(&r) {
            continue;
        }
        if !row[d].is_zero() && row[d].valuation().unwrap() < row[d].abs_prec().min(2) {
            return Err(Error::Precision(format!(
                "target leaves the span at row {r}: residual {}",
                row[d].digit_string()
            )));
        }
    }
    Ok(x)
}

/// Characteristic polynomial det(x I - M) by the division-free Leibniz
/// expansion (fine for the small matrices that arise here). Returns
/// coefficients c_0..c_d with c_d = 1.
pub fn charpoly(p: u64, m: &[Vec<Padic>]) -> Vec<Padic> {
    let d = m.len();
    assert!(m.iter().all(|r| r.len() == d));
    // Polynomials as coefficient vectors over Padic.
    let zero_poly = |deg: usize| vec![Padic::zero(p, crate::padic::ZERO_CAP); deg + 1];
    let mut acc = zero_poly(d);

    let mut perm: Vec<usize> = (0..d).collect();
    let mut sign = 1i32;
    // Heap's algorithm for permutations with sign tracking.
    fn heaps(
        k: usize,
        perm: &mut Vec<usize>,
        sign: &mut i32,
        out: &mut Vec<(Vec<usize>, i32)>,
    ) {
        if k == 1 {
            out.push((perm.clone(), *sign));
            return;
        }
        for i in 0..k {
            heaps(k - 1, perm, sign, out);
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
            *sign = -*sign;
        }
    }
    let mut perms = Vec::new();
    if d == 0 {
        let mut one = zero_poly(0);
        one[0] = Padic::from_i64(p, 1, 64);
        return one;
    }
    heaps(d, &mut perm, &mut sign, &mut perms);

    for (pi, sg) in perms {
        // Product over rows of entry (x I - M)[r][pi[r]].
        let mut prod = zero_poly(0);
        prod[0] = Padic::from_i64(p, if sg > 0 { 1 } else { -1 }, 64);
        for (r, &c) in pi.iter().enumerate() {
            let lin = if r == c {
                vec![m[r][c].neg(), Padic::from_i64(p, 1, 64)]
            } else {
                vec![m[r][c].neg()]
            };
            // prod *= lin
            let mut next = vec![Padic::zero(p, crate::padic::ZERO_CAP); prod.len() + lin.len() - 1];
            for (i, a) in prod.iter().enumerate() {
                for (j, b) in lin.iter().enumerate() {
                    next[i + j] = next[i + j].add(&a.mul(b));
                }
            }
            prod = next;
        }
        for (i, c) in prod.into_iter().enumerate() {
            acc[i] = acc[i].add(&c);
        }
    }
    acc
}

/// Integer roots of a monic integer polynomial within [lo, hi], with
/// multiplicity detection left to the caller.
pub fn integer_roots_in(coeffs: &[BigInt], lo: i64, hi: i64) -> Vec<i64> {
    let mut out = Vec::new();
    for r in lo..=hi {
        let rb = BigInt::from(r);
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &rb + c;
        }
        if acc.is_zero() {
            out.push(r);
        }
    }
    out
}

/// Reconstruct every coefficient of a p-adic polynomial as a rational.
pub fn reconstruct_poly(coeffs: &[Padic], guard: u32) -> Option<Vec<BigRational>> {
    coeffs.iter().map(|c| c.rational_reconstruct(guard)).collect()
}
