//! The Gamma-equivalence problem for vertices and edges of the tree,
//! solved by short-vector searches in rank-4 integer lattices, plus
//! stabilizer computation.
//!
//! For normalized reps u, v with 2m = v_p(det u * det v), the lattice
//!
//!   L(u,v) = { x in O : iota(x) in v M2(Zp) u* mod p^(2m+1) }
//!
//! (with M2(Zp) replaced by the level-p Eichler order M0(pZp) for ordered
//! edges) has all reduced norms of valuation >= 2m, and u ~ v under Gamma
//! exactly when the minimum is p^(2m). Witnesses are re-verified by their
//! matrix action before being returned; there are no unverified positives.

use crate::bttree::{self, EdgeRep, IntMat, VertexRep};
use crate::error::{Error, Result};
use crate::linalg::{self, IMat};
use crate::padic::{Mat2, Padic};
use crate::quatalg::{OrderContext, QuatElement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Element of Gamma = norm-one units of R = O[1/p], stored as an integral
/// quaternion x with nrd(x) = p^(2n) together with the denominator
/// exponent n; the acting matrix is iota(x)/p^n of determinant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaElement {
    pub x: QuatElement,
    pub denom_exp: u32,
}

impl GammaElement {
    pub fn identity() -> Self {
        GammaElement { x: QuatElement::one(), denom_exp: 0 }
    }

    /// Build from an integral element after checking nrd(x) = p^(2n) and
    /// stripping common p-factors.
    pub fn new(ctx: &OrderContext, x: QuatElement, denom_exp: u32) -> Result<Self> {
        let nrd = x.nrd(&ctx.alg);
        if !nrd.denom().is_one() {
            return Err(Error::Internal("gamma element has non-integral norm".into()));
        }
        let want = BigInt::from(ctx.p).pow(2 * denom_exp);
        if nrd.numer() != &want {
            return Err(Error::Internal(format!(
                "gamma element has nrd {} instead of p^{}",
                nrd,
                2 * denom_exp
            )));
        }
        let mut g = GammaElement { x, denom_exp };
        g.reduce(ctx);
        Ok(g)
    }

    /// Strip p | x whenever every order-basis coordinate is divisible.
    fn reduce(&mut self, ctx: &OrderContext) {
        let p = BigInt::from(ctx.p);
        while self.denom_exp > 0 {
            let co = ctx.coords_in_basis(&self.x);
            if !co.iter().all(|c| c.denom().is_one() && (c.numer() % &p).is_zero()) {
                break;
            }
            let inv = num_rational::BigRational::new(BigInt::one(), p.clone());
            self.x = self.x.scale(&inv);
            self.denom_exp -= 1;
        }
    }

    /// True when the element is +-1 times a power of p (acts trivially on
    /// the tree and centrally everywhere).
    pub fn is_central(&self) -> bool {
        self.x.c[1].is_zero() && self.x.c[2].is_zero() && self.x.c[3].is_zero()
    }

    /// The determinant-one matrix iota(x)/p^n.
    pub fn matrix(&self, ctx: &OrderContext) -> Result<Mat2> {
        let m = ctx.iota_apply(&self.x)?;
        let scale = Padic::from_i64(ctx.p, 1, ctx.iota_prec).shift(-(self.denom_exp as i64));
        Ok(m.scale(&scale))
    }

    /// Group law; the product is reduced.
    pub fn mul(&self, other: &GammaElement, ctx: &OrderContext) -> Result<GammaElement> {
        GammaElement::new(
            ctx,
            self.x.mul(&other.x, &ctx.alg),
            self.denom_exp + other.denom_exp,
        )
    }

    pub fn inverse(&self, ctx: &OrderContext) -> Result<GammaElement> {
        // x^-1 = conj(x)/nrd(x) = conj(x)/p^(2n): conj(x) has nrd p^(2n).
        GammaElement::new(ctx, self.x.conj(), self.denom_exp)
    }

    /// Equality in Gamma modulo the center {+-1}.
    pub fn eq_mod_center(&self, other: &GammaElement) -> bool {
        if self.denom_exp != other.denom_exp {
            return false;
        }
        self.x == other.x || self.x == other.x.neg()
    }

    pub fn act_vertex(&self, ctx: &OrderContext, v: &VertexRep) -> Result<VertexRep> {
        // Scalars do not move vertices; act by iota(x) directly.
        let g = ctx.iota_apply(&self.x)?;
        let prod = g.mul(&v.to_mat2(ctx.p, ctx.iota_prec));
        Ok(bttree::normalize_vertex(ctx.p, &prod)?.0)
    }

    pub fn act_edge(&self, ctx: &OrderContext, e: &EdgeRep) -> Result<EdgeRep> {
        let g = ctx.iota_apply(&self.x)?;
        let prod = g.mul(&e.to_mat2(ctx.p, ctx.iota_prec));
        Ok(bttree::normalize_edge(ctx.p, &prod)?.0)
    }
}

/// Rank-4 equivalence lattice with its reduced-norm Gram data (doubled:
/// entries are trd(x conj(y)) = 2<x,y>).
#[derive(Debug, Clone)]
pub struct EquivLattice {
    /// Basis vectors as order-basis coordinate columns.
    pub basis: Vec<Vec<BigInt>>,
    /// Gram matrix of the trd form on the basis.
    pub gram: IMat,
    /// Half-distance m: target reduced norm is p^(2m).
    pub m: u32,
}

/// Outcome of building an equivalence lattice.
#[derive(Debug, Clone)]
pub enum LatticeOutcome {
    Lattice(EquivLattice),
    /// v_p(det u * det v) is odd: Hom_Gamma(u, v) is empty.
    ParityObstruction,
}

fn adjugate(m: &IntMat) -> IntMat {
    [
        [m[1][1].clone(), -m[0][1].clone()],
        [-m[1][0].clone(), m[0][0].clone()],
    ]
}

fn mat_mul_int(x: &IntMat, y: &IntMat) -> IntMat {
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

/// Generators of the target Zp-lattice v * L0 * u^adj flattened to integer
/// 4-vectors, where L0 = M2(Zp) for vertices and the level-p Eichler order
/// for ordered edges.
fn target_generators(u: &IntMat, v: &IntMat, p: u64, edges: bool) -> Vec<[BigInt; 4]> {
    let ustar = adjugate(u);
    let mut gens = Vec::with_capacity(4);
    let elem = |r: usize, c: usize, scale: i64| -> IntMat {
        let mut e = [
            [BigInt::zero(), BigInt::zero()],
            [BigInt::zero(), BigInt::zero()],
        ];
        e[r][c] = BigInt::from(scale);
        e
    };
    let basis_elems = if edges {
        vec![elem(0, 0, 1), elem(0, 1, 1), elem(1, 0, p as i64), elem(1, 1, 1)]
    } else {
        vec![elem(0, 0, 1), elem(0, 1, 1), elem(1, 0, 1), elem(1, 1, 1)]
    };
    for e in basis_elems {
        let t = mat_mul_int(&mat_mul_int(v, &e), &ustar);
        gens.push([
            t[0][0].clone(),
            t[0][1].clone(),
            t[1][0].clone(),
            t[1][1].clone(),
        ]);
    }
    gens
}

fn build_lattice_core(
    ctx: &OrderContext,
    u_mat: &IntMat,
    v_mat: &IntMat,
    two_m: u32,
    edges: bool,
) -> Result<EquivLattice> {
    let m = two_m / 2;
    let prec = two_m + 1;
    if ctx.iota_prec < prec {
        return Err(Error::Precision(format!(
            "equivalence at half-distance {m} needs splitting precision {prec}, have {}",
            ctx.iota_prec
        )));
    }
    let modulus = BigInt::from(ctx.p).pow(prec);
    let iota_m = ctx.iota_coord_matrix()?;
    let targets = target_generators(u_mat, v_mat, ctx.p, edges);

    // Solve iota(sum c_i e_i) = sum d_j T_j mod p^(2m+1): kernel of
    // [M | -T | -p^(2m+1) I] projected to the c-block.
    let mut a = IMat::zero(4, 12);
    for r in 0..4 {
        for c in 0..4 {
            a[(r, c)] = iota_m[r][c].mod_floor(&modulus);
            a[(r, 4 + c)] = (-&targets[c][r]).mod_floor(&modulus);
        }
        a[(r, 8 + r)] = modulus.clone();
    }
    let gens: Vec<Vec<BigInt>> = linalg::kernel(&a)
        .into_iter()
        .map(|k| k[..4].to_vec())
        .collect();
    let basis = linalg::lattice_basis(gens);
    if basis.len() != 4 {
        return Err(Error::Internal(format!(
            "equivalence lattice has rank {} instead of 4",
            basis.len()
        )));
    }
    // Gram of the trd form in the new basis: C^T G C.
    let c = IMat::from_cols(basis.clone());
    let gram = c.transpose().mul(&ctx.gram_trd).mul(&c);
    Ok(EquivLattice { basis, gram, m })
}

/// Build L(u,v) for two vertices, or report the parity obstruction.
pub fn build_lattice_vertices(
    ctx: &OrderContext,
    u: &VertexRep,
    v: &VertexRep,
) -> Result<LatticeOutcome> {
    let two_m = u.det_exp + v.det_exp;
    if two_m % 2 != 0 {
        return Ok(LatticeOutcome::ParityObstruction);
    }
    Ok(LatticeOutcome::Lattice(build_lattice_core(ctx, &u.m, &v.m, two_m, false)?))
}

/// Build L'(u,v) for two ordered edges, or report the parity obstruction.
pub fn build_lattice_edges(
    ctx: &OrderContext,
    u: &EdgeRep,
    v: &EdgeRep,
) -> Result<LatticeOutcome> {
    let two_m = u.det_exp + v.det_exp;
    if two_m % 2 != 0 {
        return Ok(LatticeOutcome::ParityObstruction);
    }
    Ok(LatticeOutcome::Lattice(build_lattice_core(ctx, &u.m, &v.m, two_m, true)?))
}

/// All lattice vectors of reduced norm exactly p^(2m), up to sign, in
/// order-basis coordinates. Empty when the minimum exceeds the target.
pub fn shortest_vectors(ctx: &OrderContext, lat: &EquivLattice) -> Vec<QuatElement> {
    let bound = BigInt::from(2) * BigInt::from(ctx.p).pow(2 * lat.m);
    let shorts = linalg::short_vectors(&lat.gram, &bound);
    let mut out = Vec::new();
    for s in shorts {
        let q = linalg::gram_ip(&lat.gram, &s, &s);
        debug_assert!(q >= bound.clone() || q == bound, "norm below the lattice floor");
        if q == bound {
            // Map through the lattice basis to order coordinates.
            let mut coords = vec![BigInt::zero(); 4];
            for (i, si) in s.iter().enumerate() {
                for r in 0..4 {
                    coords[r] += si * &lat.basis[i][r];
                }
            }
            out.push(ctx.elem_from_coords(&coords));
        }
    }
    out
}

/// Decide Gamma-equivalence of two vertices; returns a verified witness.
pub fn are_equivalent_vertices(
    ctx: &OrderContext,
    u: &VertexRep,
    v: &VertexRep,
) -> Result<Option<GammaElement>> {
    let lat = match build_lattice_vertices(ctx, u, v)? {
        LatticeOutcome::ParityObstruction => return Ok(None),
        LatticeOutcome::Lattice(l) => l,
    };
    let cands = shortest_vectors(ctx, &lat);
    if cands.is_empty() {
        return Ok(None);
    }
    let gamma = GammaElement::new(ctx, cands[0].clone(), lat.m)?;
    let moved = gamma.act_vertex(ctx, u)?;
    if &moved != v {
        return Err(Error::Internal(
            "shortest-vector witness failed verification; raise the splitting precision".into(),
        ));
    }
    Ok(Some(gamma))
}

/// Decide Gamma-equivalence of two ordered edges; returns a verified
/// witness.
pub fn are_equivalent_edges(
    ctx: &OrderContext,
    u: &EdgeRep,
    v: &EdgeRep,
) -> Result<Option<GammaElement>> {
    let lat = match build_lattice_edges(ctx, u, v)? {
        LatticeOutcome::ParityObstruction => return Ok(None),
        LatticeOutcome::Lattice(l) => l,
    };
    let cands = shortest_vectors(ctx, &lat);
    if cands.is_empty() {
        return Ok(None);
    }
    let gamma = GammaElement::new(ctx, cands[0].clone(), lat.m)?;
    let moved = gamma.act_edge(ctx, u)?;
    if &moved != v {
        return Err(Error::Internal(
            "shortest-vector witness failed verification; raise the splitting precision".into(),
        ));
    }
    Ok(Some(gamma))
}

/// Stabilizer of a vertex in Gamma, modulo +-1; contains the identity
/// class and is verified element by element.
pub fn stabilizer_vertex(ctx: &OrderContext, v: &VertexRep) -> Result<Vec<GammaElement>> {
    let lat = match build_lattice_vertices(ctx, v, v)? {
        LatticeOutcome::ParityObstruction => unreachable!("equal reps share parity"),
        LatticeOutcome::Lattice(l) => l,
    };
    let mut out = Vec::new();
    for x in shortest_vectors(ctx, &lat) {
        let gamma = GammaElement::new(ctx, x, lat.m)?;
        let moved = gamma.act_vertex(ctx, v)?;
        if &moved != v {
            return Err(Error::Internal(
                "stabilizer candidate failed verification; raise the splitting precision".into(),
            ));
        }
        out.push(gamma);
    }
    if !out.iter().any(|g| g.is_central()) {
        return Err(Error::Internal("stabilizer lost the identity class".into()));
    }
    Ok(out)
}

/// Stabilizer of an ordered edge in Gamma, modulo +-1.
pub fn stabilizer_edge(ctx: &OrderContext, e: &EdgeRep) -> Result<Vec<GammaElement>> {
    let lat = match build_lattice_edges(ctx, e, e)? {
        LatticeOutcome::ParityObstruction => unreachable!("equal reps share parity"),
        LatticeOutcome::Lattice(l) => l,
    };
    let mut out = Vec::new();
    for x in shortest_vectors(ctx, &lat) {
        let gamma = GammaElement::new(ctx, x, lat.m)?;
        let moved = gamma.act_edge(ctx, e)?;
        if &moved != e {
            return Err(Error::Internal(
                "stabilizer candidate failed verification; raise the splitting precision".into(),
            ));
        }
        out.push(gamma);
    }
    if !out.iter().any(|g| g.is_central()) {
        return Err(Error::Internal("stabilizer lost the identity class".into()));
    }
    Ok(out)
}

/// All x in the order with nrd(x) = n, up to sign (used for the Gamma_n
/// filtration and for Hecke operators at primes l).
pub fn norm_elements(ctx: &OrderContext, n: &BigInt) -> Vec<QuatElement> {
    let bound = BigInt::from(2) * n;
    let shorts = linalg::short_vectors(&ctx.gram_trd, &bound);
    shorts
        .into_iter()
        .filter(|s| linalg::gram_ip(&ctx.gram_trd, s, s) == bound)
        .map(|s| ctx.elem_from_coords(&s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatalg::{disc13_fixture, hurwitz_fixture, with_computed_splitting, OrderContext};
    use std::collections::HashSet;

    fn ctx2() -> OrderContext {
        let fx = with_computed_splitting(&disc13_fixture(2), 40).unwrap();
        OrderContext::from_fixture(&fx, 40).unwrap()
    }

    fn ctx53() -> OrderContext {
        OrderContext::from_fixture(&hurwitz_fixture(53), 40).unwrap()
    }

    #[test]
    fn base_vertex_lattice_contains_one() {
        let ctx = ctx2();
        let v0 = VertexRep::base();
        let LatticeOutcome::Lattice(lat) = build_lattice_vertices(&ctx, &v0, &v0).unwrap() else {
            panic!("no parity obstruction expected")
        };
        assert_eq!(lat.m, 0);
        let shorts = shortest_vectors(&ctx, &lat);
        assert!(shorts.iter().any(|x| *x == QuatElement::one() || *x == QuatElement::one().neg()));
    }

    #[test]
    fn parity_obstruction() {
        let ctx = ctx2();
        let v0 = VertexRep::base();
        let v1 = bttree::vertex_of_int(2, &[[1.into(), 0.into()], [0.into(), 2.into()]]).unwrap();
        assert_eq!((v0.det_exp + v1.det_exp) % 2, 1);
        assert!(matches!(
            build_lattice_vertices(&ctx, &v0, &v1).unwrap(),
            LatticeOutcome::ParityObstruction
        ));
        assert!(are_equivalent_vertices(&ctx, &v0, &v1).unwrap().is_none());
    }

    #[test]
    fn lattice_vectors_norm_floor() {
        // Every lattice basis vector has nrd valuation >= 2m.
        let ctx = ctx2();
        let u = bttree::vertex_of_int(2, &[[1.into(), 0.into()], [1.into(), 4.into()]]).unwrap();
        let v = bttree::vertex_of_int(2, &[[1.into(), 0.into()], [3.into(), 4.into()]]).unwrap();
        let LatticeOutcome::Lattice(lat) = build_lattice_vertices(&ctx, &u, &v).unwrap() else {
            panic!()
        };
        assert_eq!(lat.m, 2);
        for b in &lat.basis {
            let x = ctx.elem_from_coords(b);
            let nrd = x.nrd(&ctx.alg);
            assert!(nrd.denom().is_one());
            let n = nrd.numer();
            assert!(
                (n % BigInt::from(2u32).pow(4)).is_zero(),
                "nrd {} not divisible by p^(2m)",
                n
            );
        }
    }

    #[test]
    fn identity_equivalence() {
        let ctx = ctx2();
        let v0 = VertexRep::base();
        let g = are_equivalent_vertices(&ctx, &v0, &v0).unwrap().unwrap();
        assert_eq!(g.act_vertex(&ctx, &v0).unwrap(), v0);
    }

    #[test]
    fn plant_and_recover_gamma1() {
        // Take gamma in Gamma_1 (nrd = p^2), move vertices/edges with it,
        // and recover a witness by the lattice test.
        let ctx = ctx2();
        let gamma1: Vec<QuatElement> = norm_elements(&ctx, &BigInt::from(4));
        assert!(!gamma1.is_empty());
        let mut tested = 0;
        for x in gamma1.iter().take(6) {
            let g = GammaElement::new(&ctx, x.clone(), 1).unwrap();
            if g.is_central() {
                continue;
            }
            tested += 1;
            for mat in [
                [[1.into(), 0.into()], [0.into(), 1.into()]],
                [[1.into(), 0.into()], [1.into(), 2.into()]],
                [[2.into(), 0.into()], [1.into(), 2.into()]],
            ] {
                let u = bttree::vertex_of_int(2, &mat).unwrap();
                let v = g.act_vertex(&ctx, &u).unwrap();
                let w = are_equivalent_vertices(&ctx, &u, &v)
                    .unwrap()
                    .expect("planted pair must be equivalent");
                assert_eq!(w.act_vertex(&ctx, &u).unwrap(), v);
            }
            // Edge variant.
            let e0 = EdgeRep::base();
            let e1 = g.act_edge(&ctx, &e0).unwrap();
            let w = are_equivalent_edges(&ctx, &e0, &e1)
                .unwrap()
                .expect("planted edge pair must be equivalent");
            assert_eq!(w.act_edge(&ctx, &e0).unwrap(), e1);
        }
        assert!(tested > 0, "no noncentral element found");
    }

    #[test]
    fn stabilizer_contains_identity_and_verifies() {
        let ctx = ctx53();
        let v0 = VertexRep::base();
        let stab = stabilizer_vertex(&ctx, &v0).unwrap();
        // Hurwitz units: 24 units, 12 classes mod +-1.
        assert_eq!(stab.len(), 12);
        assert!(stab.iter().any(|g| g.is_central()));
        for g in &stab {
            assert_eq!(g.act_vertex(&ctx, &v0).unwrap(), v0);
        }
    }

    #[test]
    fn stabilizer_group_closure() {
        let ctx = ctx53();
        let v0 = VertexRep::base();
        let stab = stabilizer_vertex(&ctx, &v0).unwrap();
        for a in &stab {
            for b in &stab {
                let prod = a.mul(b, &ctx).unwrap();
                assert!(
                    stab.iter().any(|c| c.eq_mod_center(&prod)),
                    "product left the stabilizer"
                );
            }
        }
    }

    #[test]
    fn schottky_trivial_stabilizers_disc13() {
        // Gamma(2,13,1) is Schottky: vertex stabilizers are just the
        // center.
        let ctx = ctx2();
        let v0 = VertexRep::base();
        let stab = stabilizer_vertex(&ctx, &v0).unwrap();
        assert_eq!(stab.len(), 1);
        assert!(stab[0].is_central());
        let e0 = EdgeRep::base();
        let estab = stabilizer_edge(&ctx, &e0).unwrap();
        assert_eq!(estab.len(), 1);
    }

    #[test]
    fn relation_symmetry_and_transitivity() {
        let ctx = ctx2();
        let mats: Vec<IntMat> = vec![
            [[1.into(), 0.into()], [0.into(), 1.into()]],
            [[1.into(), 0.into()], [0.into(), 4.into()]],
            [[1.into(), 0.into()], [1.into(), 4.into()]],
            [[1.into(), 0.into()], [2.into(), 4.into()]],
            [[1.into(), 0.into()], [3.into(), 4.into()]],
            [[4.into(), 0.into()], [0.into(), 1.into()]],
            [[2.into(), 0.into()], [1.into(), 2.into()]],
        ];
        let verts: Vec<VertexRep> =
            mats.iter().map(|m| bttree::vertex_of_int(2, m).unwrap()).collect();
        let n = verts.len();
        let mut rel = vec![vec![false; n]; n];
        let mut wit: Vec<Vec<Option<GammaElement>>> = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if let Some(g) = are_equivalent_vertices(&ctx, &verts[i], &verts[j]).unwrap() {
                    rel[i][j] = true;
                    wit[i][j] = Some(g);
                }
            }
        }
        for i in 0..n {
            assert!(rel[i][i]);
            for j in 0..n {
                assert_eq!(rel[i][j], rel[j][i], "symmetry {i},{j}");
                for k in 0..n {
                    if rel[i][j] && rel[j][k] {
                        assert!(rel[i][k], "transitivity {i},{j},{k}");
                        // Compose witnesses and re-verify.
                        let g = wit[j][k]
                            .as_ref()
                            .unwrap()
                            .mul(wit[i][j].as_ref().unwrap(), &ctx)
                            .unwrap();
                        assert_eq!(g.act_vertex(&ctx, &verts[i]).unwrap(), verts[k]);
                    }
                }
            }
        }
    }

    #[test]
    fn completeness_small_ball_against_gamma_n_brute_force() {
        // For p = 2 and all vertices at distance <= 3 from v0, the
        // lattice-wise relation agrees with brute force over Gamma_3
        // (elements x/p^3 with nrd(x) = p^6, which contains Gamma_1 and
        // Gamma_2 after stripping p-factors).
        let ctx = ctx2();
        let v0 = VertexRep::base();
        let mut ball = vec![v0.clone()];
        let mut seen: HashSet<VertexRep> = ball.iter().cloned().collect();
        let mut frontier = ball.clone();
        for _ in 0..3 {
            let mut next = Vec::new();
            for u in &frontier {
                for e in bttree::edges_out(2, u).unwrap() {
                    let t = bttree::terminus(2, &e).unwrap();
                    if seen.insert(t.clone()) {
                        next.push(t);
                    }
                }
            }
            ball.extend(next.iter().cloned());
            frontier = next;
        }
        assert_eq!(ball.len(), 1 + 3 + 6 + 12);

        // Brute-force orbit relation via Gamma_3.
        let theta: Vec<QuatElement> = norm_elements(&ctx, &BigInt::from(64));
        let gammas: Vec<GammaElement> = theta
            .into_iter()
            .map(|x| GammaElement::new(&ctx, x, 3).unwrap())
            .collect();
        let n = ball.len();
        let mut brute = vec![vec![false; n]; n];
        let index: std::collections::HashMap<&VertexRep, usize> =
            ball.iter().enumerate().map(|(i, v)| (v, i)).collect();
        for (i, u) in ball.iter().enumerate() {
            brute[i][i] = true;
            for g in &gammas {
                let v = g.act_vertex(&ctx, u).unwrap();
                if let Some(&j) = index.get(&v) {
                    brute[i][j] = true;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                // Brute force with Gamma_3 only proves equivalences whose
                // half-distance is at most 3; inside this ball that covers
                // everything: 2m <= 3 + 3 = 6.
                let fast = are_equivalent_vertices(&ctx, &ball[i], &ball[j]).unwrap().is_some();
                assert_eq!(fast, brute[i][j], "mismatch at pair ({i},{j})");
            }
        }
    }

    #[test]
    fn hurwitz_unit_count_via_norm_elements() {
        let ctx = ctx53();
        let units = norm_elements(&ctx, &BigInt::one());
        // 24 Hurwitz units = 12 sign classes.
        assert_eq!(units.len(), 12);
    }
}
