//! Ideals with a cached Groebner basis, and the operations built on them.

use crate::error::{Error, Result};
use crate::groebner::{ideal_groebner, normal_form};
use crate::poly::{MultiPoly, PolyRing, Ring, TermOrder};
use std::sync::{Arc, OnceLock};

#[derive(Clone)]
pub struct IdealHandle {
    inner: Arc<Inner>,
}

struct Inner {
    ring: Ring,
    gens: Vec<MultiPoly>,
    gb: OnceLock<std::result::Result<Vec<MultiPoly>, String>>,
}

impl std::fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g: Vec<String> = self.inner.gens.iter().map(|g| g.render()).collect();
        write!(f, "({})", g.join(", "))
    }
}

impl IdealHandle {
    pub fn new(ring: &Ring, gens: Vec<MultiPoly>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        IdealHandle { inner: Arc::new(Inner { ring: ring.clone(), gens, gb: OnceLock::new() }) }
    }

    pub fn ring(&self) -> &Ring {
        &self.inner.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.inner.gens
    }

    /// Reduced Groebner basis under the ring's order, computed once.
    pub fn gb(&self) -> Result<&[MultiPoly]> {
        let r = self
            .inner
            .gb
            .get_or_init(|| ideal_groebner(&self.inner.gens, &self.inner.ring).map_err(|e| e.to_string()));
        match r {
            Ok(v) => Ok(v),
            Err(e) => Err(Error::Unsupported(e.clone())),
        }
    }

    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        Ok(normal_form(f, self.gb()?))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &IdealHandle) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.iter().any(|g| g.is_constant()))
    }

    pub fn is_zero(&self) -> bool {
        self.inner.gens.is_empty()
    }

    pub fn sum(&self, other: &IdealHandle) -> IdealHandle {
        let mut g = self.gens().to_vec();
        g.extend(other.gens().iter().cloned());
        IdealHandle::new(self.ring(), g)
    }

    pub fn with(&self, extra: &[MultiPoly]) -> IdealHandle {
        let mut g = self.gens().to_vec();
        g.extend(extra.iter().cloned());
        IdealHandle::new(self.ring(), g)
    }

    /// Krull dimension of R/I from the leading monomials (-1 for the unit ideal).
    pub fn dimension(&self) -> Result<i64> {
        let gb = self.gb()?;
        if gb.iter().any(|g| g.is_constant()) {
            return Ok(-1);
        }
        let n = self.ring().nvars();
        let leads: Vec<Vec<u32>> = gb.iter().map(|g| g.lm().unwrap().to_vec()).collect();
        let mut best = 0;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = leads
                .iter()
                .all(|e| e.iter().enumerate().any(|(i, &k)| k > 0 && mask & (1 << i) == 0));
            if independent {
                best = size;
            }
        }
        Ok(best as i64)
    }

    /// I ∩ k[remaining variables], in the ring without the eliminated ones.
    pub fn eliminate(&self, elim: &[usize]) -> Result<IdealHandle> {
        let ring = self.ring();
        let n = ring.nvars();
        let keep: Vec<usize> = (0..n).filter(|i| !elim.contains(i)).collect();
        let mut order: Vec<usize> = elim.to_vec();
        order.extend(keep.iter().copied());
        let evars: Vec<String> = order.iter().map(|&i| ring.vars[i].clone()).collect();
        let eord = TermOrder::blocks(&[elim.len(), keep.len()]);
        let er = PolyRing::new(ring.field.clone(), evars, vec![(0..n).collect()], eord);
        let mut to_e = vec![None; n];
        for (j, &i) in order.iter().enumerate() {
            to_e[i] = Some(j);
        }
        let gens: Vec<MultiPoly> = self.gens().iter().map(|g| g.remap(&er, &to_e)).collect();
        let gb = ideal_groebner(&gens, &er)?;
        let target = sub_ring(ring, &keep);
        let mut back = vec![None; n];
        for (j, _) in keep.iter().enumerate() {
            back[elim.len() + j] = Some(j);
        }
        let out: Vec<MultiPoly> = gb
            .iter()
            .filter(|g| g.terms().iter().all(|(e, _)| e[..elim.len()].iter().all(|&k| k == 0)))
            .map(|g| g.remap(&target, &back))
            .collect();
        Ok(IdealHandle::new(&target, out))
    }

    /// (I : f^∞).
    pub fn saturate(&self, f: &MultiPoly) -> Result<IdealHandle> {
        if f.is_zero() {
            return Err(Error::InvalidArgument("saturation by the zero polynomial".into()));
        }
        let ring = self.ring();
        let n = ring.nvars();
        let mut vars = vec![fresh_name(ring, "_y")];
        vars.extend(ring.vars.iter().cloned());
        let mut sizes = vec![1];
        sizes.push(n);
        let big = PolyRing::new(ring.field.clone(), vars, vec![(1..n + 1).collect()], TermOrder::blocks(&sizes));
        let up: Vec<Option<usize>> = (0..n).map(|i| Some(i + 1)).collect();
        let mut gens: Vec<MultiPoly> = self.gens().iter().map(|g| g.remap(&big, &up)).collect();
        let y = MultiPoly::var(&big, 0);
        gens.push(MultiPoly::one(&big).sub(&y.mul(&f.remap(&big, &up))));
        let gb = ideal_groebner(&gens, &big)?;
        let mut down = vec![None; n + 1];
        for i in 0..n {
            down[i + 1] = Some(i);
        }
        let out = gb
            .iter()
            .filter(|g| g.terms().iter().all(|(e, _)| e[0] == 0))
            .map(|g| g.remap(ring, &down))
            .collect();
        Ok(IdealHandle::new(ring, out))
    }

    pub fn intersect(&self, other: &IdealHandle) -> Result<IdealHandle> {
        let ring = self.ring();
        let n = ring.nvars();
        let mut vars = vec![fresh_name(ring, "_t")];
        vars.extend(ring.vars.iter().cloned());
        let big = PolyRing::new(ring.field.clone(), vars, vec![(1..n + 1).collect()], TermOrder::blocks(&[1, n]));
        let up: Vec<Option<usize>> = (0..n).map(|i| Some(i + 1)).collect();
        let t = MultiPoly::var(&big, 0);
        let omt = MultiPoly::one(&big).sub(&t);
        let mut gens: Vec<MultiPoly> = self.gens().iter().map(|g| t.mul(&g.remap(&big, &up))).collect();
        gens.extend(other.gens().iter().map(|g| omt.mul(&g.remap(&big, &up))));
        let gb = ideal_groebner(&gens, &big)?;
        let mut down = vec![None; n + 1];
        for i in 0..n {
            down[i + 1] = Some(i);
        }
        let out = gb
            .iter()
            .filter(|g| g.terms().iter().all(|(e, _)| e[0] == 0))
            .map(|g| g.remap(ring, &down))
            .collect();
        Ok(IdealHandle::new(ring, out))
    }

    /// (I : g) for a single polynomial.
    pub fn quotient_by(&self, g: &MultiPoly) -> Result<IdealHandle> {
        if g.is_zero() {
            return Ok(IdealHandle::new(self.ring(), vec![MultiPoly::one(self.ring())]));
        }
        let inter = self.intersect(&IdealHandle::new(self.ring(), vec![g.clone()]))?;
        let gens = inter
            .gb()?
            .iter()
            .map(|h| h.exact_div(g).ok_or_else(|| Error::Consistency("intersection not divisible".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealHandle::new(self.ring(), gens))
    }

    /// (I : J).
    pub fn quotient(&self, j: &IdealHandle) -> Result<IdealHandle> {
        let mut acc: Option<IdealHandle> = None;
        for g in j.gens() {
            let q = self.quotient_by(g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        Ok(acc.unwrap_or_else(|| IdealHandle::new(self.ring(), vec![MultiPoly::one(self.ring())])))
    }

    /// The reduced basis as a new handle (canonical generators).
    pub fn canonical(&self) -> Result<IdealHandle> {
        Ok(IdealHandle::new(self.ring(), self.gb()?.to_vec()))
    }
}

fn fresh_name(ring: &PolyRing, base: &str) -> String {
    let mut name = base.to_string();
    while ring.vars.contains(&name) {
        name.push('_');
    }
    name
}

/// The ring on a subset of the variables, keeping grading and order blocks.
pub fn sub_ring(ring: &Ring, keep: &[usize]) -> Ring {
    let vars: Vec<String> = keep.iter().map(|&i| ring.vars[i].clone()).collect();
    let pos = |i: usize| keep.iter().position(|&k| k == i);
    let grading: Vec<Vec<usize>> = ring
        .grading
        .iter()
        .map(|b| b.iter().filter_map(|&i| pos(i)).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    let sizes: Vec<usize> = ring
        .order
        .ranges()
        .iter()
        .map(|r| keep.iter().filter(|&&v| r.contains(&v)).count())
        .filter(|&k| k > 0)
        .collect();
    PolyRing::new(ring.field.clone(), vars, grading, TermOrder::blocks(&sizes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::tower::TowerField;

    fn ring(vars: &[&str]) -> Ring {
        let f = TowerField::rational(3, vec!["s".into()]).unwrap();
        PolyRing::affine(f, vars.iter().map(|s| s.to_string()).collect())
    }

    fn ideal(r: &Ring, g: &[&str]) -> IdealHandle {
        IdealHandle::new(r, g.iter().map(|s| parse_poly(r, s).unwrap()).collect())
    }

    #[test]
    fn saturation_examples() {
        let r = ring(&["x", "y", "z"]);
        let x = parse_poly(&r, "x").unwrap();
        let a = ideal(&r, &["x^2"]).saturate(&x).unwrap();
        assert!(a.is_unit().unwrap());
        let b = ideal(&r, &["x*y", "x*z"]).saturate(&x).unwrap();
        assert!(b.same_as(&ideal(&r, &["y", "z"])).unwrap());
        let c = b.saturate(&x).unwrap();
        assert!(c.same_as(&b).unwrap());
    }

    #[test]
    fn saturation_by_zero_is_rejected() {
        let r = ring(&["x"]);
        let z = MultiPoly::zero(&r);
        assert!(matches!(ideal(&r, &["x"]).saturate(&z), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn quotient_example() {
        let r = ring(&["x", "y"]);
        let q = ideal(&r, &["x^2", "x*y"]).quotient(&ideal(&r, &["x"])).unwrap();
        assert!(q.same_as(&ideal(&r, &["x", "y"])).unwrap());
    }

    #[test]
    fn elimination_examples() {
        let r = ring(&["x", "y", "a"]);
        let e = ideal(&r, &["x - a", "y - a^2"]).eliminate(&[0, 1]).unwrap();
        assert!(e.is_zero() || e.gb().unwrap().is_empty());
        let e2 = ideal(&r, &["x - a", "y - a^2"]).eliminate(&[2]).unwrap();
        let yy = parse_poly(e2.ring(), "y - x^2").unwrap();
        assert!(e2.contains(&yy).unwrap());
    }

    #[test]
    fn dimension_counts() {
        let r = ring(&["x", "y", "z"]);
        assert_eq!(ideal(&r, &["x*y - z"]).dimension().unwrap(), 2);
        assert_eq!(ideal(&r, &["x", "y"]).dimension().unwrap(), 1);
        assert_eq!(ideal(&r, &["1"]).dimension().unwrap(), -1);
    }
}
