//! Vertex and ordered-edge normal forms for the Bruhat-Tits tree of
//! GL2(Qp), adjacency, distance, and a vertex-level reduction map from the
//! p-adic upper half plane.
//!
//! Vertices are homothety classes of rank-2 Zp-lattices, represented by the
//! unique lower-triangular integer matrix (p^m, 0; r, p^n) with
//! 0 <= r < p^n whose columns span the lattice and whose entries are not
//! all divisible by p. Ordered edges are cosets of Qp^x Gamma_0(pZp),
//! represented by one of the two shapes
//!
//!   (p^m, 0; r, p^n) with 0 <= r < p^(n+1),   or
//!   (0, p^m; p^n, r) with 0 <= r < p^n.
//!
//! Normal forms are exact integers, so equality, hashing and dictionary
//! lookups are exact; the normalization witnesses (lambda, t) are p-adic.

use crate::error::{Error, Result};
use crate::padic::{Mat2, Padic, PadicQuad};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// 2x2 integer matrix, row major.
pub type IntMat = [[BigInt; 2]; 2];

fn int_mat(a: i64, b: i64, c: i64, d: i64) -> IntMat {
    [[BigInt::from(a), BigInt::from(b)], [BigInt::from(c), BigInt::from(d)]]
}

fn mat_mul(x: &IntMat, y: &IntMat) -> IntMat {
    [
        [
            &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0],
            &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1],
        ],
        [
            &x[1][0] * &y[0][0] + &x[1][1] * &y[1][0],
            &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1],
        ],
    ]
}

fn mat_det(x: &IntMat) -> BigInt {
    &x[0][0] * &x[1][1] - &x[0][1] * &x[1][0]
}

fn val_big(p: u64, n: &BigInt) -> u32 {
    assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut cur = n.abs();
    while (&cur % &pb).is_zero() {
        cur /= &pb;
        v += 1;
    }
    v
}

/// Vertex of the tree in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexRep {
    pub m: IntMat,
    /// v_p(det) of the normal form.
    pub det_exp: u32,
}

impl VertexRep {
    /// The privileged vertex v0 = [Zp^2].
    pub fn base() -> Self {
        VertexRep { m: int_mat(1, 0, 0, 1), det_exp: 0 }
    }

    pub fn parity(&self) -> u8 {
        (self.det_exp % 2) as u8
    }

    pub fn to_mat2(&self, p: u64, rel: u32) -> Mat2 {
        Mat2::from_ints(p, &self.m, rel)
    }
}

/// Ordered edge of the tree in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeRep {
    pub m: IntMat,
    /// v_p(|det|) of the normal form.
    pub det_exp: u32,
    /// Parity of the origin vertex (0 = even distance from v0).
    pub parity: u8,
}

impl EdgeRep {
    /// The privileged edge e0 = (v0, v1).
    pub fn base() -> Self {
        EdgeRep { m: int_mat(1, 0, 0, 1), det_exp: 0, parity: 0 }
    }

    pub fn to_mat2(&self, p: u64, rel: u32) -> Mat2 {
        Mat2::from_ints(p, &self.m, rel)
    }

    pub fn is_even(&self) -> bool {
        self.parity == 0
    }
}

/// Witness for a normalization: input * lambda * t = normal form.
#[derive(Debug, Clone)]
pub struct NormWitness {
    pub lambda: Padic,
    pub t: Mat2,
}

/// Working relative precision adequate for normalizing a p-adic matrix
/// whose determinant valuation is d.
fn needed_rel(d: i64) -> u32 {
    (d.unsigned_abs() as u32) + 8
}

fn exact_zero(p: u64) -> Padic {
    Padic::zero(p, crate::padic::ZERO_CAP)
}

fn exact_one(p: u64) -> Padic {
    Padic::from_i64(p, 1, 256)
}

/// Normalize an invertible matrix over Qp to the vertex normal form.
/// Returns the representative and (lambda, t) with g * lambda * t = rep at
/// working precision.
pub fn normalize_vertex(p: u64, g: &Mat2) -> Result<(VertexRep, NormWitness)> {
    let nu = g.min_valuation()?;
    let det = g.det();
    if det.is_zero() {
        return Err(Error::Precision(
            "determinant indistinguishable from zero at working precision".into(),
        ));
    }
    let lambda = Padic::from_i64(p, 1, det.rel_prec().max(8)).shift(-nu);
    let mut w = g.scale(&lambda);
    let mut t = Mat2::identity(p, g.a.rel_prec().max(8));

    // Make the top-right entry zero by column operations in GL2(Zp).
    let va = w.a.valuation();
    let vb = w.b.valuation();
    let swap_first = match (va, vb) {
        (Some(x), Some(y)) => y < x,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (None, None) => {
            return Err(Error::Precision("top row indistinguishable from zero".into()))
        }
    };
    if swap_first {
        w = Mat2::new(w.b.clone(), w.a.clone(), w.d.clone(), w.c.clone());
        t = t.mul(&Mat2::from_ints(p, &int_mat(0, 1, 1, 0), t.a.rel_prec()));
    }
    // col2 -= (b/a) col1 ; b/a in Zp.
    let q = w.b.div(&w.a)?;
    if q.valuation().map_or(false, |v| v < 0) {
        return Err(Error::Internal("vertex reduction quotient not integral".into()));
    }
    let op = Mat2::new(exact_one(p), q.neg(), exact_zero(p), exact_one(p));
    w = w.mul(&op);
    t = t.mul(&op);

    // Unit-normalize both columns.
    let m_exp = w
        .a
        .valuation()
        .ok_or_else(|| Error::Precision("pivot vanished during reduction".into()))?;
    let n_exp = w
        .d
        .valuation()
        .ok_or_else(|| Error::Precision("pivot vanished during reduction".into()))?;
    if m_exp < 0 || n_exp < 0 {
        return Err(Error::Internal("negative pivot valuation after scaling".into()));
    }
    let u1 = Padic::from_i64(p, 1, w.a.rel_prec()).shift(m_exp).div(&w.a)?;
    let u2 = Padic::from_i64(p, 1, w.d.rel_prec()).shift(n_exp).div(&w.d)?;
    let op2 = Mat2::new(u1.clone(), exact_zero(p), exact_zero(p), u2.clone());
    w = w.mul(&op2);
    t = t.mul(&op2);

    // Reduce the lower-left entry modulo p^n.
    let k = n_exp as u32;
    if w.c.abs_prec() < k as i64 {
        return Err(Error::Precision("not enough digits to reduce the residue entry".into()));
    }
    let c_res = BigInt::from(w.c.to_int_mod(k)?);
    let qred = w.c.sub(&Padic::from_int(p, &c_res, w.c.rel_prec().max(8)));
    // qred is divisible by p^n: col1 -= (qred / p^n) * col2.
    let coeff = qred.shift(-(n_exp));
    let op3 = Mat2::new(exact_one(p), exact_zero(p), coeff.neg(), exact_one(p));
    w = w.mul(&op3);
    t = t.mul(&op3);

    let rep = VertexRep {
        m: [
            [BigInt::from(p).pow(m_exp as u32), BigInt::zero()],
            [c_res.clone(), BigInt::from(p).pow(n_exp as u32)],
        ],
        det_exp: (m_exp + n_exp) as u32,
    };
    // Content condition: not all entries divisible by p.
    let content_ok = m_exp == 0
        || n_exp == 0
        || (!c_res.is_zero() && val_big(p, &c_res) == 0);
    if !content_ok {
        return Err(Error::Internal("vertex normal form failed the content condition".into()));
    }
    debug_assert!(matrices_agree(&w, &rep.m, p));
    Ok((rep, NormWitness { lambda, t }))
}

/// Normalize a matrix to the ordered-edge normal form (coset of
/// Qp^x Gamma_0(pZp)); the witness t lies in Gamma_0(pZp).
pub fn normalize_edge(p: u64, g: &Mat2) -> Result<(EdgeRep, NormWitness)> {
    let nu = g.min_valuation()?;
    let det = g.det();
    if det.is_zero() {
        return Err(Error::Precision(
            "determinant indistinguishable from zero at working precision".into(),
        ));
    }
    let lambda = Padic::from_i64(p, 1, det.rel_prec().max(8)).shift(-nu);
    let mut w = g.scale(&lambda);
    let mut t = Mat2::identity(p, g.a.rel_prec().max(8));
    let rel0 = g.a.rel_prec().max(8);
    let one = move || Padic::from_i64(p, 1, rel0);

    let va = w.a.valuation();
    let vb = w.b.valuation();
    let case_a = match (va, vb) {
        (Some(x), Some(y)) => x <= y,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => {
            return Err(Error::Precision("top row indistinguishable from zero".into()))
        }
    };

    let rep;
    if case_a {
        // (p^m, 0; r, p^n) with 0 <= r < p^(n+1).
        let m_exp = va.unwrap();
        if m_exp < 0 {
            return Err(Error::Internal("negative valuation after scaling".into()));
        }
        let u1 = Padic::from_i64(p, 1, w.a.rel_prec()).shift(m_exp).div(&w.a)?;
        let op = Mat2::new(u1.clone(), exact_zero(p), exact_zero(p), one());
        w = w.mul(&op);
        t = t.mul(&op);
        // col2 -= (b / p^m) col1, coefficient in Zp.
        let q = w.b.shift(-m_exp);
        let op2 = Mat2::new(one(), q.neg(), exact_zero(p), one());
        w = w.mul(&op2);
        t = t.mul(&op2);
        let n_exp = w
            .d
            .valuation()
            .ok_or_else(|| Error::Precision("pivot vanished during reduction".into()))?;
        if n_exp < 0 {
            return Err(Error::Internal("negative valuation after scaling".into()));
        }
        let u2 = Padic::from_i64(p, 1, w.d.rel_prec()).shift(n_exp).div(&w.d)?;
        let op3 = Mat2::new(one(), exact_zero(p), exact_zero(p), u2.clone());
        w = w.mul(&op3);
        t = t.mul(&op3);
        // Reduce lower-left modulo p^(n+1): col1 -= coeff * p * col2 with
        // coeff in Zp, i.e. a Gamma_0(pZp) operation.
        let k = (n_exp + 1) as u32;
        if w.c.abs_prec() < k as i64 {
            return Err(Error::Precision("not enough digits to reduce the residue entry".into()));
        }
        let c_res = BigInt::from(w.c.to_int_mod(k)?);
        let qred = w.c.sub(&Padic::from_int(p, &c_res, w.c.rel_prec().max(8)));
        let coeff = qred.shift(-n_exp); // divisible by p
        let op4 = Mat2::new(one(), exact_zero(p), coeff.neg(), one());
        w = w.mul(&op4);
        t = t.mul(&op4);
        rep = EdgeRep {
            m: [
                [BigInt::from(p).pow(m_exp as u32), BigInt::zero()],
                [c_res, BigInt::from(p).pow(n_exp as u32)],
            ],
            det_exp: (m_exp + n_exp) as u32,
            parity: 0, // fixed below
        };
    } else {
        // (0, p^m; p^n, r) with 0 <= r < p^n.
        let m_exp = vb.unwrap();
        if m_exp < 0 {
            return Err(Error::Internal("negative valuation after scaling".into()));
        }
        let u2 = Padic::from_i64(p, 1, w.b.rel_prec()).shift(m_exp).div(&w.b)?;
        let op = Mat2::new(one(), exact_zero(p), exact_zero(p), u2.clone());
        w = w.mul(&op);
        t = t.mul(&op);
        // col1 -= (a / p^m) col2; the coefficient lies in pZp, so this is a
        // Gamma_0(pZp) column operation.
        let q = w.a.shift(-m_exp);
        if q.valuation().map_or(false, |v| v < 1) {
            return Err(Error::Internal("edge reduction coefficient not in pZp".into()));
        }
        let op2 = Mat2::new(one(), exact_zero(p), q.neg(), one());
        w = w.mul(&op2);
        t = t.mul(&op2);
        let n_exp = w
            .c
            .valuation()
            .ok_or_else(|| Error::Precision("pivot vanished during reduction".into()))?;
        if n_exp < 0 {
            return Err(Error::Internal("negative valuation after scaling".into()));
        }
        let u1 = Padic::from_i64(p, 1, w.c.rel_prec()).shift(n_exp).div(&w.c)?;
        let op3 = Mat2::new(u1.clone(), exact_zero(p), exact_zero(p), one());
        w = w.mul(&op3);
        t = t.mul(&op3);
        // Reduce lower-right modulo p^n: col2 -= coeff col1, coeff in Zp.
        let k = n_exp as u32;
        if w.d.abs_prec() < k as i64 {
            return Err(Error::Precision("not enough digits to reduce the residue entry".into()));
        }
        let d_res = BigInt::from(w.d.to_int_mod(k)?);
        let qred = w.d.sub(&Padic::from_int(p, &d_res, w.d.rel_prec().max(8)));
        let coeff = qred.shift(-n_exp);
        let op4 = Mat2::new(one(), coeff.neg(), exact_zero(p), one());
        w = w.mul(&op4);
        t = t.mul(&op4);
        rep = EdgeRep {
            m: [
                [BigInt::zero(), BigInt::from(p).pow(m_exp as u32)],
                [BigInt::from(p).pow(n_exp as u32), d_res],
            ],
            det_exp: (m_exp + n_exp) as u32,
            parity: 0,
        };
    }
    debug_assert!(matrices_agree(&w, &rep.m, p));
    let mut rep = rep;
    rep.parity = origin_of_int(p, &rep.m)?.parity();
    Ok((rep, NormWitness { lambda, t }))
}

fn matrices_agree(w: &Mat2, m: &IntMat, p: u64) -> bool {
    let rel = w.a.rel_prec().max(8);
    let target = Mat2::from_ints(p, m, rel);
    w.entries()
        .iter()
        .zip(target.entries().iter())
        .all(|(x, y)| {
            let k = x.abs_prec().min(y.abs_prec());
            x.eq_mod(y, k.min(4))
        })
}

/// Vertex class of an integer matrix (exact path).
pub fn vertex_of_int(p: u64, m: &IntMat) -> Result<VertexRep> {
    let det = mat_det(m);
    if det.is_zero() {
        return Err(Error::Fixture("singular integer matrix".into()));
    }
    let rel = needed_rel(val_big(p, &det) as i64);
    let (rep, _) = normalize_vertex(p, &Mat2::from_ints(p, m, rel))?;
    Ok(rep)
}

/// Edge class of an integer matrix (exact path).
pub fn edge_of_int(p: u64, m: &IntMat) -> Result<EdgeRep> {
    let det = mat_det(m);
    if det.is_zero() {
        return Err(Error::Fixture("singular integer matrix".into()));
    }
    let rel = needed_rel(val_big(p, &det) as i64);
    let (rep, _) = normalize_edge(p, &Mat2::from_ints(p, m, rel))?;
    Ok(rep)
}

fn origin_of_int(p: u64, m: &IntMat) -> Result<VertexRep> {
    vertex_of_int(p, m)
}

/// Origin vertex of an ordered edge.
pub fn origin(p: u64, e: &EdgeRep) -> Result<VertexRep> {
    vertex_of_int(p, &e.m)
}

/// Terminus vertex of an ordered edge: class of e * diag(1, p).
pub fn terminus(p: u64, e: &EdgeRep) -> Result<VertexRep> {
    let dp = int_mat(1, 0, 0, p as i64);
    vertex_of_int(p, &mat_mul(&e.m, &dp))
}

/// Opposite ordered edge: class of e * (0, 1; p, 0).
pub fn opposite(p: u64, e: &EdgeRep) -> Result<EdgeRep> {
    let eta = int_mat(0, 1, p as i64, 0);
    edge_of_int(p, &mat_mul(&e.m, &eta))
}

/// The p+1 ordered edges with origin v, in a fixed deterministic order:
/// v * (1,0; r,1) for r = 0..p-1, then v * (0,1; 1,0).
pub fn edges_out(p: u64, v: &VertexRep) -> Result<Vec<EdgeRep>> {
    let mut out = Vec::with_capacity(p as usize + 1);
    for r in 0..p {
        let c = int_mat(1, 0, r as i64, 1);
        out.push(edge_of_int(p, &mat_mul(&v.m, &c))?);
    }
    let swap = int_mat(0, 1, 1, 0);
    out.push(edge_of_int(p, &mat_mul(&v.m, &swap))?);
    Ok(out)
}

/// Tree distance between two vertices: difference of the elementary
/// divisor exponents of adj(u) * v.
pub fn distance(p: u64, u: &VertexRep, v: &VertexRep) -> u32 {
    let adj_u = [
        [u.m[1][1].clone(), -u.m[0][1].clone()],
        [-u.m[1][0].clone(), u.m[0][0].clone()],
    ];
    let a = mat_mul(&adj_u, &v.m);
    let det = mat_det(&a);
    assert!(!det.is_zero());
    let dv = val_big(p, &det);
    let mut alpha: Option<u32> = None;
    for row in &a {
        for e in row {
            if !e.is_zero() {
                let v = val_big(p, e);
                alpha = Some(alpha.map_or(v, |x| x.min(v)));
            }
        }
    }
    dv - 2 * alpha.unwrap()
}

/// Vertex-level reduction of a point of the p-adic upper half plane:
/// z = x + y*omega reduces to the class of (p^v(y), x; 0, 1).
pub fn reduction_vertex(p: u64, z: &PadicQuad) -> Result<VertexRep> {
    if z.b.is_zero() {
        return Err(Error::Precision(
            "point indistinguishable from P1(Qp) at working precision".into(),
        ));
    }
    let k = z.b.valuation().unwrap();
    let pk = Padic::from_i64(p, 1, z.a.rel_prec().max(z.b.rel_prec()).max(8)).shift(k);
    let one = Padic::from_i64(p, 1, pk.rel_prec());
    let g = Mat2::new(pk, z.a.clone(), Padic::zero(p, z.a.abs_prec().max(1)), one);
    let (rep, _) = normalize_vertex(p, &g)?;
    Ok(rep)
}
