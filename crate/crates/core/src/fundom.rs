//! Breadth-first computation of a fundamental domain for Gamma acting on
//! the tree: ordered-edge orbit representatives, boundary pairings,
//! stabilizers, the quotient graph with its genus, the Ogg genus formula,
//! and the lookup map T -> Gamma\T.
//!
//! The queue loop pops a vertex, partitions its p+1 outgoing edges into
//! stabilizer orbits (edges at the same vertex are Gamma-equivalent
//! exactly when they are Stab-equivalent), accepts one representative per
//! orbit, and either pairs the new terminus against an existing domain
//! vertex or enqueues it. When the stabilizer is trivial all p+1 edges are
//! accepted without comparisons. Because no two processed vertices are
//! ever equivalent, local acceptance is globally sound for ordered edges;
//! each unordered orbit shows up twice, once per orientation.

use crate::arithgroup::{
    self, are_equivalent_vertices, stabilizer_vertex, GammaElement,
};
use crate::bttree::{self, EdgeRep, VertexRep};
use crate::error::{Error, Result};
use crate::numutil;
use crate::quatalg::OrderContext;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{HashMap, HashSet, VecDeque};

/// One of the p+1 literal tree edges at a processed vertex, resolved to
/// its accepted orbit representative.
#[derive(Debug, Clone)]
pub struct EdgeSlot {
    pub edge: EdgeRep,
    /// Index into `FundamentalDomain::edges`.
    pub orbit: usize,
    /// Stabilizer element with witness * edge = accepted representative.
    pub witness: GammaElement,
}

#[derive(Debug, Clone)]
pub struct VertexData {
    pub rep: VertexRep,
    /// Stabilizer mod +-1 (always contains the identity class).
    pub stab: Vec<GammaElement>,
    pub slots: Vec<EdgeSlot>,
}

#[derive(Debug, Clone)]
pub struct EdgeData {
    pub rep: EdgeRep,
    /// Index of the origin vertex (always processed).
    pub origin: usize,
    pub stab: Vec<GammaElement>,
    /// Orbit index of the opposite ordered class.
    pub opp_orbit: usize,
    /// gamma with gamma * opposite(rep) = edges[opp_orbit].rep.
    pub opp_witness: GammaElement,
}

/// Boundary pairing triple (u, v', gamma): gamma u = v' with u a boundary
/// vertex of the domain and v' a domain vertex.
#[derive(Debug, Clone)]
pub struct PairingTriple {
    pub boundary: VertexRep,
    pub target: usize,
    pub gamma: GammaElement,
}

#[derive(Debug, Clone)]
pub struct FundamentalDomain {
    pub p: u64,
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
    pub pairings: Vec<PairingTriple>,
    vertex_index: HashMap<VertexRep, usize>,
    edge_index: HashMap<EdgeRep, usize>,
    boundary_index: HashMap<VertexRep, usize>,
}

/// Multigraph Gamma\T: vertex classes, unordered edges with multiplicity,
/// genus 1 - V + E.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    pub vcount: usize,
    /// One entry per unordered edge orbit: endpoint class indices with
    /// endpoints ordered (min, max). Loops would appear as (i, i); the
    /// norm-one groups here preserve parity, so loops cannot occur, but
    /// the representation allows them.
    pub edges: Vec<(usize, usize)>,
}

impl QuotientGraph {
    pub fn genus(&self) -> i64 {
        1 - self.vcount as i64 + self.edges.len() as i64
    }
}

/// Compute the fundamental domain (queue loop over vertices).
pub fn compute_fundamental_domain(ctx: &OrderContext) -> Result<FundamentalDomain> {
    compute_fundamental_domain_with(ctx, false)
}

/// Same, with the per-vertex edge iteration order reversed; used to check
/// that the quotient invariants do not depend on the queue discipline.
pub fn compute_fundamental_domain_with(
    ctx: &OrderContext,
    reverse_edges: bool,
) -> Result<FundamentalDomain> {
    let p = ctx.p;
    let genus_bound = genus_ogg(p, ctx.nminus, ctx.nplus).unwrap_or(1).max(1);
    let edge_guard = 10 * (p as usize + 1) * (genus_bound as usize + 1);

    let mut dom = FundamentalDomain {
        p,
        vertices: Vec::new(),
        edges: Vec::new(),
        pairings: Vec::new(),
        vertex_index: HashMap::new(),
        edge_index: HashMap::new(),
        boundary_index: HashMap::new(),
    };
    let v0 = VertexRep::base();
    dom.vertex_index.insert(v0.clone(), 0);
    dom.vertices.push(VertexData { rep: v0, stab: Vec::new(), slots: Vec::new() });
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);

    while let Some(vi) = queue.pop_front() {
        let vrep = dom.vertices[vi].rep.clone();
        let stab = stabilizer_vertex(ctx, &vrep)?;
        let schottky_here = stab.len() == 1;
        let mut edges_here = bttree::edges_out(p, &vrep)?;
        if reverse_edges {
            edges_here.reverse();
        }

        // Partition the p+1 edges into Stab(v)-orbits; accept the first
        // edge of each orbit.
        let mut slot_of: HashMap<EdgeRep, (usize, GammaElement)> = HashMap::new();
        let mut accepted_here: Vec<usize> = Vec::new();
        for e in &edges_here {
            if slot_of.contains_key(e) {
                continue;
            }
            // New orbit: accept e.
            let orbit_idx = dom.edges.len();
            accepted_here.push(orbit_idx);
            let mut edge_stab = Vec::new();
            if schottky_here {
                slot_of.insert(e.clone(), (orbit_idx, GammaElement::identity()));
                edge_stab.push(GammaElement::identity());
            } else {
                for s in &stab {
                    let img = s.act_edge(ctx, e)?;
                    if img == *e {
                        edge_stab.push(s.clone());
                    }
                    slot_of
                        .entry(img)
                        .or_insert_with(|| (orbit_idx, s.inverse(ctx).expect("unit inverse")));
                }
            }
            dom.edges.push(EdgeData {
                rep: e.clone(),
                origin: vi,
                stab: edge_stab,
                opp_orbit: usize::MAX,
                opp_witness: GammaElement::identity(),
            });
            dom.edge_index.insert(e.clone(), orbit_idx);
            if dom.edges.len() > edge_guard {
                return Err(Error::Internal(format!(
                    "edge count exceeded {edge_guard}; fixture or precision fault"
                )));
            }
        }
        dom.vertices[vi].stab = stab;
        dom.vertices[vi].slots = edges_here
            .iter()
            .map(|e| {
                let (orbit, witness) = slot_of.get(e).expect("orbit cover").clone();
                EdgeSlot { edge: e.clone(), orbit, witness }
            })
            .collect();

        // Handle the termini of the newly accepted edges.
        for &oi in &accepted_here {
            let t = bttree::terminus(p, &dom.edges[oi].rep)?;
            if dom.vertex_index.contains_key(&t) || dom.boundary_index.contains_key(&t) {
                continue; // closes up within the current domain
            }
            // Try to pair against an existing domain vertex.
            let mut paired = false;
            for wi in 0..dom.vertices.len() {
                if dom.vertices[wi].rep.parity() != t.parity() {
                    continue;
                }
                if let Some(g) = are_equivalent_vertices(ctx, &t, &dom.vertices[wi].rep)? {
                    dom.boundary_index.insert(t.clone(), dom.pairings.len());
                    dom.pairings.push(PairingTriple {
                        boundary: t.clone(),
                        target: wi,
                        gamma: g,
                    });
                    paired = true;
                    break;
                }
            }
            if !paired {
                let idx = dom.vertices.len();
                dom.vertex_index.insert(t.clone(), idx);
                dom.vertices.push(VertexData { rep: t, stab: Vec::new(), slots: Vec::new() });
                queue.push_back(idx);
            }
        }
    }

    // Resolve the opposite class of every accepted edge through the
    // finished lookup tables.
    for oi in 0..dom.edges.len() {
        let opp = bttree::opposite(p, &dom.edges[oi].rep)?;
        let (orbit, witness) = dom.lookup_edge(ctx, &opp)?;
        dom.edges[oi].opp_orbit = orbit;
        dom.edges[oi].opp_witness = witness;
    }
    Ok(dom)
}

impl FundamentalDomain {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of unordered edge orbits.
    pub fn unordered_edge_count(&self) -> usize {
        debug_assert_eq!(self.edges.len() % 2, 0);
        self.edges.len() / 2
    }

    /// Indices of the even-parity accepted representatives, one per
    /// unordered orbit; these carry the positive orientation.
    pub fn even_edge_orbits(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].rep.is_even()).collect()
    }

    pub fn all_stabilizers_trivial(&self) -> bool {
        self.vertices.iter().all(|v| v.stab.len() == 1)
            && self.edges.iter().all(|e| e.stab.len() == 1)
    }

    /// Find the domain vertex literally closest to sigma by breadth-first
    /// search; returns (domain vertex rep, BFS predecessor on the path
    /// back to sigma). Radius-capped.
    fn nearest_domain_vertex(&self, sigma: &VertexRep) -> Result<(VertexRep, VertexRep)> {
        let p = self.p;
        let cap = 48usize;
        let mut seen: HashSet<VertexRep> = HashSet::new();
        let mut frontier: Vec<(VertexRep, Option<VertexRep>)> = vec![(sigma.clone(), None)];
        seen.insert(sigma.clone());
        for _ in 0..cap {
            let mut next = Vec::new();
            for (u, _) in &frontier {
                for e in bttree::edges_out(p, u)? {
                    let t = bttree::terminus(p, &e)?;
                    if seen.insert(t.clone()) {
                        if self.vertex_index.contains_key(&t)
                            || self.boundary_index.contains_key(&t)
                        {
                            return Ok((t, u.clone()));
                        }
                        next.push((t, Some(u.clone())));
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Err(Error::Internal("lookup walk failed to reach the domain".into()))
    }

    /// The map T -> Gamma\T on vertices: returns the index of the unique
    /// processed vertex in the orbit plus gamma with gamma sigma = rep.
    pub fn lookup_vertex(
        &self,
        ctx: &OrderContext,
        sigma: &VertexRep,
    ) -> Result<(usize, GammaElement)> {
        let mut acc = GammaElement::identity();
        let mut cur = sigma.clone();
        for _ in 0..256 {
            if let Some(&i) = self.vertex_index.get(&cur) {
                return Ok((i, acc));
            }
            if let Some(&pi) = self.boundary_index.get(&cur) {
                let pr = &self.pairings[pi];
                acc = pr.gamma.mul(&acc, ctx)?;
                cur = self.vertices[pr.target].rep.clone();
                continue;
            }
            let (z, y) = self.nearest_domain_vertex(&cur)?;
            if let Some(&pi) = self.boundary_index.get(&z) {
                // Move the whole picture so that z lands on its processed
                // partner, then resolve there.
                let pr = &self.pairings[pi];
                acc = pr.gamma.mul(&acc, ctx)?;
                cur = pr.gamma.act_vertex(ctx, &cur)?;
                continue;
            }
            let zi = *self.vertex_index.get(&z).expect("nearest vertex is in the domain");
            // The edge from z back toward sigma.
            let mut advanced = false;
            for slot in &self.vertices[zi].slots {
                if bttree::terminus(self.p, &slot.edge)? == y {
                    // witness * edge = accepted rep, whose terminus lies in
                    // the domain: strictly closer after the move.
                    acc = slot.witness.mul(&acc, ctx)?;
                    cur = slot.witness.act_vertex(ctx, &cur)?;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return Err(Error::Internal("lookup could not leave the current vertex".into()));
            }
        }
        Err(Error::Internal("lookup failed to converge".into()))
    }

    /// The map T -> Gamma\T on ordered edges: orbit index plus gamma with
    /// gamma sigma = edges[orbit].rep.
    pub fn lookup_edge(&self, ctx: &OrderContext, sigma: &EdgeRep) -> Result<(usize, GammaElement)> {
        if let Some(&i) = self.edge_index.get(sigma) {
            return Ok((i, GammaElement::identity()));
        }
        let o = bttree::origin(self.p, sigma)?;
        let (wi, g1) = self.lookup_vertex(ctx, &o)?;
        let moved = g1.act_edge(ctx, sigma)?;
        for slot in &self.vertices[wi].slots {
            if slot.edge == moved {
                let g = slot.witness.mul(&g1, ctx)?;
                return Ok((slot.orbit, g));
            }
        }
        Err(Error::Internal("edge lookup missed the slot table".into()))
    }

    /// Collapse boundary pairings to the quotient multigraph.
    pub fn quotient_graph(&self, _ctx: &OrderContext) -> Result<QuotientGraph> {
        let mut edges = Vec::new();
        for &i in &self.even_edge_orbits() {
            let e = &self.edges[i];
            let oi = e.origin;
            let t = bttree::terminus(self.p, &e.rep)?;
            let ti = if let Some(&x) = self.vertex_index.get(&t) {
                x
            } else {
                let pi = *self
                    .boundary_index
                    .get(&t)
                    .ok_or_else(|| Error::Internal("terminus escaped the domain".into()))?;
                self.pairings[pi].target
            };
            edges.push((oi.min(ti), oi.max(ti)));
        }
        edges.sort_unstable();
        Ok(QuotientGraph { vcount: self.vertices.len(), edges })
    }
}

/// Ogg's genus formula for X_0(p N^-, N^+), exact rational arithmetic.
pub fn genus_ogg(p: u64, nminus: u64, nplus: u64) -> Result<i64> {
    if nminus % p == 0 || nplus % p == 0 || !numutil::is_squarefree(nminus) {
        return Err(Error::Fixture("invalid level triple for the genus formula".into()));
    }
    let d = p * nminus;
    let rat = |n: i64, m: i64| BigRational::new(BigInt::from(n), BigInt::from(m));
    let mut g = rat((d * nplus) as i64, 12);
    for (l, _) in numutil::factor(d) {
        g *= rat(l as i64 - 1, l as i64);
    }
    for (l, _) in numutil::factor(nplus) {
        g *= rat(l as i64 + 1, l as i64);
    }
    g += BigRational::one();

    let e_k = |k: i64| -> BigRational {
        let mut e = BigRational::one();
        for (l, _) in numutil::factor(d) {
            e *= rat(1 - numutil::kronecker(-k, l as i64) as i64, 1);
        }
        for (l, mult) in numutil::factor(nplus) {
            if mult == 1 {
                e *= rat(1 + numutil::kronecker(-k, l as i64) as i64, 1);
            } else {
                // nu_l(k): 2 if (-k/l) = 1 else 0.
                let nu = if numutil::kronecker(-k, l as i64) == 1 { 2 } else { 0 };
                e *= rat(nu, 1);
            }
        }
        e
    };
    g -= e_k(3) / rat(3, 1);
    g -= e_k(4) / rat(4, 1);

    if !g.denom().is_one() || g.numer().is_negative() {
        return Err(Error::Fixture(format!(
            "genus formula returned the non-genus {g}; invalid level triple"
        )));
    }
    Ok(g.numer().try_into().expect("genus fits i64"))
}

/// DOT rendering of the quotient multigraph (deterministic node order).
pub fn export_dot_quotient(q: &QuotientGraph) -> String {
    let mut out = String::from("graph quotient {\n");
    for i in 0..q.vcount {
        out.push_str(&format!("  v{i};\n"));
    }
    for (a, b) in &q.edges {
        out.push_str(&format!("  v{a} -- v{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the domain subtree: processed and boundary vertices,
/// one line per unordered tree edge, boundary pairings as dashed arcs.
pub fn export_dot_domain(dom: &FundamentalDomain) -> Result<String> {
    let mut names: HashMap<VertexRep, String> = HashMap::new();
    for (i, v) in dom.vertices.iter().enumerate() {
        names.insert(v.rep.clone(), format!("v{i}"));
    }
    for (i, pr) in dom.pairings.iter().enumerate() {
        names.insert(pr.boundary.clone(), format!("b{i}"));
    }
    let mut out = String::from("graph domain {\n");
    let mut vnames: Vec<&String> = names.values().collect();
    vnames.sort();
    for n in vnames {
        out.push_str(&format!("  {n};\n"));
    }
    let mut lines = Vec::new();
    for &i in &dom.even_edge_orbits() {
        let e = &dom.edges[i];
        let o = bttree::origin(dom.p, &e.rep)?;
        let t = bttree::terminus(dom.p, &e.rep)?;
        lines.push(format!("  {} -- {};\n", names[&o], names[&t]));
    }
    lines.sort();
    for l in lines {
        out.push_str(&l);
    }
    for (i, pr) in dom.pairings.iter().enumerate() {
        out.push_str(&format!("  b{i} -- v{} [style=dashed];\n", pr.target));
    }
    out.push_str("}\n");
    Ok(out)
}

/// Gamma_n representatives (mod +-1) used by tests and sampling: matrices
/// iota(x)/p^n for x in the order with nrd = p^(2n), central classes
/// filtered out.
pub fn gamma_n_elements(ctx: &OrderContext, n: u32) -> Result<Vec<GammaElement>> {
    let target = BigInt::from(ctx.p).pow(2 * n);
    let mut out = Vec::new();
    for x in arithgroup::norm_elements(ctx, &target) {
        let g = GammaElement::new(ctx, x, n)?;
        if !g.is_central() {
            out.push(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatalg::{disc13_fixture, hurwitz_fixture, with_computed_splitting, OrderContext};

    fn ctx2() -> OrderContext {
        let fx = with_computed_splitting(&disc13_fixture(2), 40).unwrap();
        OrderContext::from_fixture(&fx, 40).unwrap()
    }

    fn ctx53() -> OrderContext {
        OrderContext::from_fixture(&hurwitz_fixture(53), 40).unwrap()
    }

    #[test]
    fn ogg_spot_values() {
        assert_eq!(genus_ogg(2, 13, 1).unwrap(), 2);
        assert_eq!(genus_ogg(53, 2, 1).unwrap(), 4);
        assert_eq!(genus_ogg(211, 1511, 1).unwrap(), 26425);
    }

    #[test]
    fn ogg_rejects_bad_levels() {
        assert!(genus_ogg(2, 2, 1).is_err());
        assert!(genus_ogg(3, 12, 1).is_err());
    }

    #[test]
    fn domain_2_13_1() {
        let ctx = ctx2();
        let dom = compute_fundamental_domain(&ctx).unwrap();
        assert_eq!(dom.vertex_count(), 2);
        assert_eq!(dom.unordered_edge_count(), 3);
        assert!(dom.all_stabilizers_trivial());
        let q = dom.quotient_graph(&ctx).unwrap();
        assert_eq!(q.vcount, 2);
        assert_eq!(q.edges.len(), 3);
        assert_eq!(q.genus(), 2);
        // Schottky regularity: 2E = (p+1)V and no loops.
        assert_eq!(2 * q.edges.len(), 3 * q.vcount);
        assert!(q.edges.iter().all(|(a, b)| a != b));
        // Boundary pairing covers every boundary vertex exactly once.
        let mut seen = std::collections::HashSet::new();
        for pr in &dom.pairings {
            assert!(seen.insert(pr.boundary.clone()));
            assert_eq!(
                pr.gamma.act_vertex(&ctx, &pr.boundary).unwrap(),
                dom.vertices[pr.target].rep
            );
        }
    }

    #[test]
    fn domain_53_2_1() {
        let ctx = ctx53();
        let dom = compute_fundamental_domain(&ctx).unwrap();
        let q = dom.quotient_graph(&ctx).unwrap();
        assert_eq!(q.vcount, 2, "two vertices");
        assert_eq!(q.edges.len(), 5, "five edges");
        assert_eq!(q.genus(), 4);
        assert!(!dom.all_stabilizers_trivial(), "Gamma(53,2,1) is not Schottky");
        for pr in &dom.pairings {
            assert_eq!(
                pr.gamma.act_vertex(&ctx, &pr.boundary).unwrap(),
                dom.vertices[pr.target].rep
            );
        }
    }

    #[test]
    fn genus_matches_ogg_on_fixtures() {
        for (ctx, p, nm) in [(ctx2(), 2u64, 13u64), (ctx53(), 53, 2)] {
            let dom = compute_fundamental_domain(&ctx).unwrap();
            let q = dom.quotient_graph(&ctx).unwrap();
            assert_eq!(q.genus(), genus_ogg(p, nm, 1).unwrap());
        }
    }

    #[test]
    fn queue_order_invariance() {
        let ctx = ctx2();
        let a = compute_fundamental_domain_with(&ctx, false).unwrap();
        let b = compute_fundamental_domain_with(&ctx, true).unwrap();
        let qa = a.quotient_graph(&ctx).unwrap();
        let qb = b.quotient_graph(&ctx).unwrap();
        assert_eq!(qa.vcount, qb.vcount);
        assert_eq!(qa.edges.len(), qb.edges.len());
        assert_eq!(qa.genus(), qb.genus());
        let stabs = |d: &FundamentalDomain| {
            let mut s: Vec<usize> = d.vertices.iter().map(|v| v.stab.len()).collect();
            s.sort_unstable();
            s
        };
        assert_eq!(stabs(&a), stabs(&b));
    }

    #[test]
    fn domain_edges_pairwise_inequivalent_2_13_1() {
        // The three positively oriented domain edges lie in distinct
        // ordered orbits.
        let ctx = ctx2();
        let dom = compute_fundamental_domain(&ctx).unwrap();
        let evens = dom.even_edge_orbits();
        assert_eq!(evens.len(), 3);
        for (ia, &a) in evens.iter().enumerate() {
            for &b in evens.iter().skip(ia + 1) {
                let r = arithgroup::are_equivalent_edges(&ctx, &dom.edges[a].rep, &dom.edges[b].rep)
                    .unwrap();
                assert!(r.is_none(), "domain edges {a} and {b} are equivalent");
            }
        }
    }

    #[test]
    fn lookup_identity_and_planted_orbits() {
        let ctx = ctx2();
        let dom = compute_fundamental_domain(&ctx).unwrap();
        // Identity on domain elements.
        for (i, e) in dom.edges.iter().enumerate() {
            let (oi, g) = dom.lookup_edge(&ctx, &e.rep).unwrap();
            assert_eq!(oi, i);
            assert!(g.is_central());
        }
        // Planted: gamma * (domain edge) resolves back to the same orbit
        // with a verifying witness.
        let gammas = gamma_n_elements(&ctx, 1).unwrap();
        for g0 in gammas.iter().take(4) {
            for e in dom.edges.iter().take(3) {
                let moved = g0.act_edge(&ctx, &e.rep).unwrap();
                let (oi, w) = dom.lookup_edge(&ctx, &moved).unwrap();
                assert_eq!(
                    w.act_edge(&ctx, &moved).unwrap(),
                    dom.edges[oi].rep,
                    "lookup witness must verify"
                );
                // Same unordered orbit class as the original.
                assert!(
                    oi == dom.edge_index[&e.rep],
                    "planted edge left its orbit: {oi}"
                );
            }
        }
    }

    #[test]
    fn lookup_opposite_consistency() {
        let ctx = ctx2();
        let dom = compute_fundamental_domain(&ctx).unwrap();
        for e in &dom.edges {
            let opp = bttree::opposite(2, &e.rep).unwrap();
            let (oi, w) = dom.lookup_edge(&ctx, &opp).unwrap();
            assert_eq!(oi, e.opp_orbit);
            assert_eq!(w.act_edge(&ctx, &opp).unwrap(), dom.edges[oi].rep);
            // opposite is parity-flipping, so the classes differ.
            assert_ne!(dom.edges[oi].rep.parity, e.rep.parity);
        }
    }

    #[test]
    fn ball_lookup_completeness() {
        // Every edge of T within distance 5 of v0 resolves to exactly one
        // accepted orbit, with a verifying transport element.
        let ctx = ctx2();
        let dom = compute_fundamental_domain(&ctx).unwrap();
        let mut verts = vec![VertexRep::base()];
        let mut seen: std::collections::HashSet<VertexRep> = verts.iter().cloned().collect();
        let mut frontier = verts.clone();
        for _ in 0..5 {
            let mut next = Vec::new();
            for u in &frontier {
                for e in bttree::edges_out(2, u).unwrap() {
                    let t = bttree::terminus(2, &e).unwrap();
                    if seen.insert(t.clone()) {
                        next.push(t);
                    }
                }
            }
            verts.extend(next.iter().cloned());
            frontier = next;
        }
        let mut count = 0;
        for u in &verts {
            for e in bttree::edges_out(2, u).unwrap() {
                let (oi, w) = dom.lookup_edge(&ctx, &e).unwrap();
                assert_eq!(w.act_edge(&ctx, &e).unwrap(), dom.edges[oi].rep);
                count += 1;
            }
        }
        assert!(count > 200);
    }

    #[test]
    fn dot_round_trip() {
        let ctx = ctx2();
        let dom = compute_fundamental_domain(&ctx).unwrap();
        let q = dom.quotient_graph(&ctx).unwrap();
        let dot = export_dot_quotient(&q);
        // Tiny DOT multigraph parser (oracle independent of the writer).
        let mut verts = std::collections::HashSet::new();
        let mut edges: Vec<(String, String)> = Vec::new();
        for line in dot.lines() {
            let line = line.trim().trim_end_matches(';');
            if line.starts_with("graph") || line == "}" || line.is_empty() {
                continue;
            }
            if let Some((a, b)) = line.split_once(" -- ") {
                edges.push((a.trim().into(), b.trim().into()));
                verts.insert(a.trim().to_string());
                verts.insert(b.trim().to_string());
            } else {
                verts.insert(line.to_string());
            }
        }
        assert_eq!(verts.len(), q.vcount);
        assert_eq!(edges.len(), q.edges.len());
        // Degenerate single-vertex graph renders and reparses.
        let q1 = QuotientGraph { vcount: 1, edges: vec![] };
        assert!(export_dot_quotient(&q1).contains("v0;"));
        // Domain rendering exists and mentions a dashed pairing.
        let dd = export_dot_domain(&dom).unwrap();
        assert!(dd.contains("style=dashed"));
    }
}
