//! Buchberger's algorithm with the sugar strategy, for ideals and for
//! submodules of free modules (position-over-term, lower position larger).

use crate::error::{Error, Result};
use crate::par::par_map;
use crate::poly::{MultiPoly, Ring};
use crate::tower::TowerElement;
use std::cmp::Ordering;

/// Upper bound on S-pairs treated in one basis computation.
pub const DEFAULT_PAIR_LIMIT: usize = 400_000;

pub type VTerm = (u32, Vec<u32>, TowerElement);

/// An element of a free module R^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    pub terms: Vec<VTerm>,
}

fn vcmp(ring: &Ring, a: (u32, &[u32]), b: (u32, &[u32])) -> Ordering {
    b.0.cmp(&a.0).then_with(|| ring.order.cmp(a.1, b.1))
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl Vector {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn from_poly(f: &MultiPoly, pos: u32) -> Self {
        Vector { terms: f.terms().iter().map(|(e, c)| (pos, e.clone(), c.clone())).collect() }
    }

    /// Entries as polynomials, for a module of the given rank.
    pub fn components(&self, ring: &Ring, rank: usize) -> Vec<MultiPoly> {
        let mut buckets: Vec<Vec<(Vec<u32>, TowerElement)>> = vec![Vec::new(); rank];
        for (pos, e, c) in &self.terms {
            buckets[*pos as usize].push((e.clone(), c.clone()));
        }
        buckets.into_iter().map(|t| MultiPoly::from_terms(ring, t)).collect()
    }

    pub fn from_components(ring: &Ring, comps: &[MultiPoly]) -> Self {
        let mut terms = Vec::new();
        for (i, f) in comps.iter().enumerate() {
            for (e, c) in f.terms() {
                terms.push((i as u32, e.clone(), c.clone()));
            }
        }
        Self::normalise(ring, terms)
    }

    fn normalise(ring: &Ring, mut terms: Vec<VTerm>) -> Self {
        terms.sort_by(|a, b| vcmp(ring, (b.0, &b.1), (a.0, &a.1)));
        let mut out: Vec<VTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == t.0 && last.1 == t.1 {
                    last.2 = last.2.add(&t.2);
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| !t.2.is_zero());
        Vector { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    pub fn sugar(&self) -> u32 {
        self.terms.iter().map(|t| deg(&t.1)).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self, ring: &Ring) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let a = &self.terms[i];
            let b = &o.terms[j];
            match vcmp(ring, (a.0, &a.1), (b.0, &b.1)) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.2.add(&b.2);
                    if !c.is_zero() {
                        out.push((a.0, a.1.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Vector { terms: out }
    }

    pub fn mul_term(&self, e: &[u32], c: &TowerElement) -> Self {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|(p, m, d)| (*p, m.iter().zip(e).map(|(a, b)| a + b).collect(), d.mul(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &TowerElement) -> Self {
        self.mul_term(&vec![0; self.terms.first().map(|t| t.1.len()).unwrap_or(0)], c)
    }

    pub fn mul_poly(&self, f: &MultiPoly, ring: &Ring) -> Self {
        let mut acc = Vector::zero();
        for (e, c) in f.terms() {
            acc = acc.add(&self.mul_term(e, c), ring);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some((_, _, c)) if !c.is_one() => self.scale(&c.inv().unwrap()),
            _ => self.clone(),
        }
    }

    /// Highest position index occurring, if any.
    pub fn max_pos(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0).max()
    }

    pub fn min_pos(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0).min()
    }
}

/// Full reduction of `f` by `basis` (leading terms are used as rewrite rules).
pub fn reduce(f: &Vector, basis: &[Vector], ring: &Ring) -> Vector {
    let mut rem: Vec<VTerm> = Vec::new();
    let mut p = f.clone();
    'outer: while let Some((pos, e, c)) = p.terms.first().cloned() {
        for g in basis {
            let (gp, ge, gc) = g.lead().unwrap();
            if *gp == pos && divides(ge, &e) {
                let q: Vec<u32> = e.iter().zip(ge).map(|(a, b)| a - b).collect();
                let k = c.div(gc).unwrap().neg();
                p = p.add(&g.mul_term(&q, &k), ring);
                continue 'outer;
            }
        }
        rem.push((pos, e, c));
        p.terms.remove(0);
    }
    Vector { terms: rem }
}

struct Pair {
    i: usize,
    j: usize,
    pos: u32,
    lcm: Vec<u32>,
    sugar: u32,
}

fn spoly(a: &Vector, b: &Vector, l: &[u32], ring: &Ring) -> Vector {
    let (_, ae, ac) = a.lead().unwrap();
    let (_, be, bc) = b.lead().unwrap();
    let qa: Vec<u32> = l.iter().zip(ae).map(|(x, y)| x - y).collect();
    let qb: Vec<u32> = l.iter().zip(be).map(|(x, y)| x - y).collect();
    let fa = a.mul_term(&qa, &ac.inv().unwrap());
    let fb = b.mul_term(&qb, &bc.inv().unwrap().neg());
    fa.add(&fb, ring)
}

/// Reduced Groebner basis of the submodule generated by `gens`.
/// `ideal` enables the coprime-lead criterion (valid for rank one only).
pub fn groebner(gens: &[Vector], ring: &Ring, ideal: bool, pair_limit: usize) -> Result<Vec<Vector>> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut done: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    let mut inputs: Vec<Vector> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    inputs.sort_by(|a, b| {
        let (ap, ae, _) = a.lead().unwrap();
        let (bp, be, _) = b.lead().unwrap();
        vcmp(ring, (*ap, ae), (*bp, be))
    });
    let mut queue: Vec<(Vector, u32)> = inputs.into_iter().map(|v| {
        let s = v.sugar();
        (v, s)
    }).collect();
    let mut treated = 0usize;
    loop {
        for (v, s) in queue.drain(..) {
            let r = reduce(&v, &basis, ring);
            if r.is_zero() {
                continue;
            }
            let r = r.monic();
            let n = basis.len();
            let (rp, re, _) = r.lead().unwrap().clone();
            for (k, g) in basis.iter().enumerate() {
                let (gp, ge, _) = g.lead().unwrap();
                if *gp != rp {
                    continue;
                }
                let l = lcm(ge, &re);
                if ideal && l.iter().zip(ge).zip(&re).all(|((m, a), b)| *m == a + b) {
                    done.insert((k, n));
                    continue;
                }
                let sg = (sugars[k] + deg(&l) - deg(ge)).max(s + deg(&l) - deg(&re));
                pairs.push(Pair { i: k, j: n, pos: rp, lcm: l, sugar: sg });
            }
            basis.push(r);
            sugars.push(s);
        }
        if pairs.is_empty() {
            break;
        }
        let min_sugar = pairs.iter().map(|p| p.sugar).min().unwrap();
        let (mut batch, rest): (Vec<Pair>, Vec<Pair>) = pairs.drain(..).partition(|p| p.sugar == min_sugar);
        pairs = rest;
        batch.sort_by(|a, b| vcmp(ring, (a.pos, &a.lcm), (b.pos, &b.lcm)).reverse().then((a.i, a.j).cmp(&(b.i, b.j))));
        // Chain criterion against pairs still pending or in this batch.
        let pending: std::collections::HashSet<(usize, usize)> =
            pairs.iter().chain(batch.iter()).map(|p| (p.i, p.j)).collect();
        let mut keep = Vec::new();
        for p in batch {
            let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
            let redundant = (0..basis.len()).any(|k| {
                if k == p.i || k == p.j {
                    return false;
                }
                let (gp, ge, _) = basis[k].lead().unwrap();
                *gp == p.pos
                    && divides(ge, &p.lcm)
                    && !pending.contains(&key(p.i, k))
                    && !pending.contains(&key(p.j, k))
            });
            if redundant {
                done.insert((p.i, p.j));
            } else {
                keep.push(p);
            }
        }
        treated += keep.len();
        if treated > pair_limit {
            return Err(Error::Unsupported(format!("Groebner pair limit {pair_limit} exceeded")));
        }
        let snapshot = &basis;
        let reduced = par_map(&keep, |p| {
            let s = spoly(&snapshot[p.i], &snapshot[p.j], &p.lcm, ring);
            reduce(&s, snapshot, ring)
        });
        for (p, r) in keep.iter().zip(reduced) {
            done.insert((p.i, p.j));
            if !r.is_zero() {
                queue.push((r, p.sugar));
            }
        }
    }
    Ok(interreduce(basis, ring))
}

fn interreduce(mut basis: Vec<Vector>, ring: &Ring) -> Vec<Vector> {
    basis.sort_by(|a, b| {
        let (ap, ae, _) = a.lead().unwrap();
        let (bp, be, _) = b.lead().unwrap();
        vcmp(ring, (*ap, ae), (*bp, be))
    });
    let mut minimal: Vec<Vector> = Vec::new();
    for g in basis {
        let (gp, ge, _) = g.lead().unwrap().clone();
        if minimal.iter().any(|h| {
            let (hp, he, _) = h.lead().unwrap();
            *hp == gp && divides(he, &ge)
        }) {
            continue;
        }
        minimal.push(g);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Vector> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let lead = Vector { terms: vec![minimal[i].terms[0].clone()] };
        let tail = Vector { terms: minimal[i].terms[1..].to_vec() };
        let r = reduce(&tail, &others, ring);
        out.push(lead.add(&r, ring).monic());
    }
    out
}

/// Reduced Groebner basis of an ideal.
pub fn ideal_groebner(gens: &[MultiPoly], ring: &Ring) -> Result<Vec<MultiPoly>> {
    let vs: Vec<Vector> = gens.iter().map(|f| Vector::from_poly(&f.base_change_if_needed(ring), 0)).collect();
    let gb = groebner(&vs, ring, true, DEFAULT_PAIR_LIMIT)?;
    Ok(gb.iter().map(|v| v.components(ring, 1).remove(0)).collect())
}

/// Normal form of a polynomial modulo a Groebner basis.
pub fn normal_form(f: &MultiPoly, gb: &[MultiPoly]) -> MultiPoly {
    let ring = f.ring();
    let vs: Vec<Vector> = gb.iter().map(|g| Vector::from_poly(g, 0)).collect();
    let r = reduce(&Vector::from_poly(f, 0), &vs, ring);
    r.components(ring, 1).remove(0)
}

impl MultiPoly {
    fn base_change_if_needed(&self, ring: &Ring) -> MultiPoly {
        if std::sync::Arc::ptr_eq(self.ring(), ring) || **self.ring() == **ring {
            self.clone()
        } else {
            self.base_change(ring)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, PolyRing, TermOrder};
    use crate::tower::TowerField;

    fn lex_ring(p: u32, vars: &[&str]) -> Ring {
        let f = TowerField::rational(p, vec![]).unwrap();
        let n = vars.len();
        PolyRing::new(
            f,
            vars.iter().map(|s| s.to_string()).collect(),
            vec![(0..n).collect()],
            TermOrder::blocks(&vec![1; n]),
        )
    }

    #[test]
    fn lex_basis_over_f5() {
        let r = lex_ring(5, &["x", "y"]);
        let g = vec![parse_poly(&r, "x^2 - y").unwrap(), parse_poly(&r, "x*y - 1").unwrap()];
        let gb = ideal_groebner(&g, &r).unwrap();
        let expect = vec![parse_poly(&r, "x - y^2").unwrap(), parse_poly(&r, "y^3 - 1").unwrap()];
        let mut a: Vec<String> = gb.iter().map(|f| f.render()).collect();
        let mut b: Vec<String> = expect.iter().map(|f| f.render()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn principal_ideal_is_monic_generator() {
        let f = TowerField::rational(3, vec!["s".into()]).unwrap();
        let r = PolyRing::affine(f, vec!["x".into(), "y".into()]);
        let g = parse_poly(&r, "s*x^2 + y").unwrap();
        let gb = ideal_groebner(&[g.clone()], &r).unwrap();
        assert_eq!(gb, vec![g.monic()]);
    }

    #[test]
    fn members_reduce_to_zero() {
        let r = lex_ring(3, &["x", "y", "z"]);
        let g = vec![parse_poly(&r, "x*y - z^2").unwrap(), parse_poly(&r, "y^2 - x*z").unwrap()];
        let gb = ideal_groebner(&g, &r).unwrap();
        let m = g[0].mul(&parse_poly(&r, "x + z").unwrap()).add(&g[1].mul(&parse_poly(&r, "y^3").unwrap()));
        assert!(normal_form(&m, &gb).is_zero());
        assert!(!normal_form(&parse_poly(&r, "x").unwrap(), &gb).is_zero());
    }
}
