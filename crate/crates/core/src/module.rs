//! Finitely presented modules over chart rings R/I.
//!
//! Kernels are computed with a module Groebner basis under a
//! position-over-term order, which eliminates the leading components.

use crate::error::{Error, Result};
use crate::groebner::{groebner, reduce, Vector, DEFAULT_PAIR_LIMIT};
use crate::ideal::IdealHandle;
use crate::poly::{MultiPoly, Ring};

pub type Matrix = Vec<Vec<MultiPoly>>;

/// All subsets of size k of 0..n, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant by cofactor expansion (matrices here are small).
pub fn det(ring: &Ring, m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    match n {
        0 => MultiPoly::one(ring),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = MultiPoly::zero(ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = m[0][j].mul(&det(ring, &minor));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

pub fn minor(ring: &Ring, m: &[Vec<MultiPoly>], rows: &[usize], cols: &[usize]) -> MultiPoly {
    let sub: Vec<Vec<MultiPoly>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
    det(ring, &sub)
}

/// Rank over the fraction field of R/I (I prime): the largest size of a
/// minor that is nonzero modulo I.
pub fn generic_rank(ideal: &IdealHandle, m: &[Vec<MultiPoly>]) -> Result<usize> {
    let rows = m.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = m[0].len();
    let ring = ideal.ring();
    let mut best = 0;
    for k in 1..=rows.min(cols) {
        let mut found = false;
        'search: for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let d = minor(ring, m, &rs, &cs);
                if !d.is_zero() && !ideal.contains(&d)? {
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            break;
        }
        best = k;
    }
    Ok(best)
}

/// Solutions a ∈ R^g of Σ a_i v_i ∈ I·R^n, as generators. `vectors[i]` is v_i.
pub fn kernel_mod(ideal: &IdealHandle, vectors: &[Vec<MultiPoly>], n: usize) -> Result<Vec<Vec<MultiPoly>>> {
    let ring = ideal.ring();
    let g = vectors.len();
    let mut gens = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut comps: Vec<MultiPoly> = v.clone();
        comps.resize(n, MultiPoly::zero(ring));
        for j in 0..g {
            comps.push(if i == j { MultiPoly::one(ring) } else { MultiPoly::zero(ring) });
        }
        gens.push(Vector::from_components(ring, &comps));
    }
    for h in ideal.gens() {
        for j in 0..n {
            gens.push(Vector::from_poly(h, j as u32));
        }
    }
    let gb = groebner(&gens, ring, false, DEFAULT_PAIR_LIMIT)?;
    let mut out = Vec::new();
    for v in gb {
        if v.min_pos().map(|p| p as usize >= n).unwrap_or(false) {
            let comps = v.components(ring, n + g);
            let sol: Vec<MultiPoly> = comps[n..].iter().map(|c| ideal.normal_form(c)).collect::<Result<_>>()?;
            if sol.iter().any(|c| !c.is_zero()) {
                out.push(sol);
            }
        }
    }
    Ok(out)
}

/// A chart coordinate ring R/I with a label recording the chart.
#[derive(Clone, Debug)]
pub struct ChartRing {
    pub label: String,
    pub ideal: IdealHandle,
}

impl ChartRing {
    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }
}

/// coker of a relation matrix (rows = generators, columns = relations).
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub chart: ChartRing,
    pub labels: Vec<String>,
    pub relations: Matrix,
}

/// Submodule of (R/I)^n given by generators.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub chart: ChartRing,
    pub rank_ambient: usize,
    pub gens: Vec<Vec<MultiPoly>>,
}

impl PresentedModule {
    pub fn new(chart: ChartRing, labels: Vec<String>, relations: Matrix) -> Result<Self> {
        let mut rel = relations;
        for row in rel.iter_mut() {
            for e in row.iter_mut() {
                *e = chart.ideal.normal_form(e)?;
            }
        }
        Ok(PresentedModule { chart, labels, relations: rel })
    }

    pub fn ngens(&self) -> usize {
        self.labels.len()
    }

    fn ncols(&self) -> usize {
        self.relations.first().map(|r| r.len()).unwrap_or(0)
    }

    /// Rank at the generic point.
    pub fn rank(&self) -> Result<usize> {
        Ok(self.ngens() - generic_rank(&self.chart.ideal, &self.relations)?)
    }

    /// Hom(M, R/I) inside (R/I)^g: functionals killing every relation.
    pub fn dual(&self) -> Result<Submodule> {
        let g = self.ngens();
        let gens = if self.ncols() == 0 {
            (0..g)
                .map(|i| {
                    (0..g)
                        .map(|j| if i == j { MultiPoly::one(self.chart.ring()) } else { MultiPoly::zero(self.chart.ring()) })
                        .collect()
                })
                .collect()
        } else {
            kernel_mod(&self.chart.ideal, &self.relations, self.ncols())?
        };
        Ok(Submodule { chart: self.chart.clone(), rank_ambient: g, gens })
    }

    /// Every functional of `d` annihilates every relation.
    pub fn pairing_is_sound(&self, d: &Submodule) -> Result<bool> {
        let ring = self.chart.ring();
        for a in &d.gens {
            for c in 0..self.ncols() {
                let mut s = MultiPoly::zero(ring);
                for i in 0..self.ngens() {
                    s = s.add(&a[i].mul(&self.relations[i][c]));
                }
                if !self.chart.ideal.contains(&s)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl Submodule {
    /// Generic rank of the submodule.
    pub fn rank(&self) -> Result<usize> {
        generic_rank(&self.chart.ideal, &self.gens)
    }

    fn module_basis(&self) -> Result<Vec<Vector>> {
        let ring = self.chart.ring();
        let mut gens: Vec<Vector> = self.gens.iter().map(|v| Vector::from_components(ring, v)).collect();
        for h in self.chart.ideal.gens() {
            for j in 0..self.rank_ambient {
                gens.push(Vector::from_poly(h, j as u32));
            }
        }
        groebner(&gens, ring, false, DEFAULT_PAIR_LIMIT)
    }

    pub fn contains(&self, v: &[MultiPoly]) -> Result<bool> {
        let ring = self.chart.ring();
        let gb = self.module_basis()?;
        Ok(reduce(&Vector::from_components(ring, v), &gb, ring).is_zero())
    }

    pub fn contains_submodule(&self, other: &Submodule) -> Result<bool> {
        let ring = self.chart.ring();
        let gb = self.module_basis()?;
        Ok(other.gens.iter().all(|v| reduce(&Vector::from_components(ring, v), &gb, ring).is_zero()))
    }

    /// {a ∈ (R/I)^n : a·s = 0 for all generators s}.
    pub fn orthogonal(&self) -> Result<Submodule> {
        let n = self.rank_ambient;
        let ring = self.chart.ring();
        let gens = if self.gens.is_empty() {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { MultiPoly::one(ring) } else { MultiPoly::zero(ring) }).collect())
                .collect()
        } else {
            let vectors: Vec<Vec<MultiPoly>> =
                (0..n).map(|i| self.gens.iter().map(|s| s[i].clone()).collect()).collect();
            kernel_mod(&self.chart.ideal, &vectors, self.gens.len())?
        };
        Ok(Submodule { chart: self.chart.clone(), rank_ambient: n, gens })
    }

    /// Saturation in the free module: the double orthogonal, which over a
    /// domain is the set of vectors some nonzero multiple of which lies in
    /// the submodule.
    pub fn saturation(&self) -> Result<Submodule> {
        self.orthogonal()?.orthogonal()
    }

    pub fn same_as(&self, other: &Submodule) -> Result<bool> {
        Ok(self.contains_submodule(other)? && other.contains_submodule(self)?)
    }

    /// Relations among the generators: a presentation of the submodule.
    pub fn presentation(&self) -> Result<PresentedModule> {
        let syz = kernel_mod(&self.chart.ideal, &self.gens, self.rank_ambient)?;
        let k = self.gens.len();
        let relations: Matrix = (0..k).map(|i| syz.iter().map(|s| s[i].clone()).collect()).collect();
        let labels = (0..k).map(|i| format!("g{i}")).collect();
        PresentedModule::new(self.chart.clone(), labels, relations)
    }

    /// Minimum valuation along `prime` of the maximal minors of the generator
    /// matrix; equals the valuation of the determinant line.
    pub fn plucker_valuation(&self, prime: &MultiPoly, cap: u32) -> Result<Option<u32>> {
        let r = self.rank()?;
        let ring = self.chart.ring();
        let mut best: Option<u32> = None;
        for gs in subsets(self.gens.len(), r) {
            for cs in subsets(self.rank_ambient, r) {
                let m: Vec<Vec<MultiPoly>> =
                    gs.iter().map(|&g| cs.iter().map(|&c| self.gens[g][c].clone()).collect()).collect();
                let d = det(ring, &m);
                if d.is_zero() || self.chart.ideal.contains(&d)? {
                    continue;
                }
                let v = valuation(&self.chart.ideal, &d, prime, cap)?;
                best = Some(best.map_or(v, |b: u32| b.min(v)));
                if best == Some(0) {
                    return Ok(best);
                }
            }
        }
        Ok(best)
    }
}

/// Valuation of h along the divisor (prime = 0) of R/I, assuming the divisor
/// is irreducible on the chart and prime is a uniformiser there, so that
/// I + (prime^k) is primary to it.
pub fn valuation(ideal: &IdealHandle, h: &MultiPoly, prime: &MultiPoly, cap: u32) -> Result<u32> {
    if ideal.contains(h)? {
        return Err(Error::Rank("valuation of zero".into()));
    }
    let mut k = 0;
    let mut pk = prime.clone();
    while k < cap {
        if !ideal.with(&[pk.clone()]).contains(h)? {
            return Ok(k);
        }
        k += 1;
        pk = pk.mul(prime);
    }
    Err(Error::Unsupported(format!("valuation exceeds cap {cap}")))
}

/// Length of the cokernel of a square matrix localised at the prime: the
/// valuation of its determinant.
pub fn length_at_prime(ideal: &IdealHandle, m: &[Vec<MultiPoly>], prime: &MultiPoly) -> Result<u32> {
    let d = det(ideal.ring(), m);
    if d.is_zero() || ideal.contains(&d)? {
        return Err(Error::Rank("map is not generically an isomorphism".into()));
    }
    valuation(ideal, &d, prime, 256)
}

/// Result of maximal-minor extraction.
#[derive(Clone, Debug)]
pub struct TopMinors {
    /// Row subsets K of size r, in lexicographic order.
    pub subsets: Vec<Vec<usize>>,
    /// Signed complementary minors, one per subset.
    pub raw: Vec<MultiPoly>,
    /// Common content (gcd), monic.
    pub content: MultiPoly,
    /// raw / content, scaled so the first nonzero entry is monic.
    pub sections: Vec<MultiPoly>,
}

/// Plücker coordinates of the kernel of the transpose of `a` (d x c), given
/// by complementary minors on a column set of full generic rank.
pub fn top_minor_sections(ideal: &IdealHandle, a: &[Vec<MultiPoly>], r: usize) -> Result<TopMinors> {
    let ring = ideal.ring();
    let d = a.len();
    let rank = generic_rank(ideal, a)?;
    if r + rank != d {
        return Err(Error::Rank(format!("requested rank {r} but the cokernel has rank {}", d - rank)));
    }
    let cols = a.first().map(|row| row.len()).unwrap_or(0);
    let mut chosen = None;
    'find: for cs in subsets(cols, rank) {
        for rs in subsets(d, rank) {
            let m = minor(ring, a, &rs, &cs);
            if !m.is_zero() && !ideal.contains(&m)? {
                chosen = Some(cs);
                break 'find;
            }
        }
    }
    let cs = chosen.unwrap_or_default();
    let subs = subsets(d, r);
    let mut raw = Vec::with_capacity(subs.len());
    for k in &subs {
        let comp: Vec<usize> = (0..d).filter(|i| !k.contains(i)).collect();
        let m = minor(ring, a, &comp, &cs);
        let sign: usize = k.iter().sum::<usize>() + (0..r).sum::<usize>();
        raw.push(if sign % 2 == 0 { m } else { m.neg() });
    }
    let (content, sections) = split_content(ring, &raw);
    Ok(TopMinors { subsets: subs, raw, content, sections })
}

/// gcd of a list and the primitive parts, normalised so that the first
/// nonzero primitive entry is monic.
pub fn split_content(ring: &Ring, v: &[MultiPoly]) -> (MultiPoly, Vec<MultiPoly>) {
    let mut g = MultiPoly::zero(ring);
    for f in v {
        g = g.gcd(f);
    }
    if g.is_zero() {
        return (g, v.to_vec());
    }
    let mut prim: Vec<MultiPoly> = v.iter().map(|f| f.exact_div(&g).expect("gcd divides")).collect();
    if let Some(first) = prim.iter().find(|f| !f.is_zero()) {
        let c = first.lc().unwrap().inv().unwrap();
        g = g.scale(&first.lc().unwrap().clone());
        for f in prim.iter_mut() {
            *f = f.scale(&c);
        }
    }
    (g, prim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, PolyRing};
    use crate::tower::TowerField;

    fn chart(vars: &[&str], gens: &[&str]) -> ChartRing {
        let f = TowerField::rational(3, vec!["s".into()]).unwrap();
        let r = PolyRing::affine(f, vars.iter().map(|s| s.to_string()).collect());
        let g = gens.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
        ChartRing { label: "test".into(), ideal: IdealHandle::new(&r, g) }
    }

    fn p(c: &ChartRing, s: &str) -> MultiPoly {
        parse_poly(c.ring(), s).unwrap()
    }

    #[test]
    fn dual_of_free_module() {
        let c = chart(&["x", "y"], &[]);
        let m = PresentedModule::new(c.clone(), vec!["a".into(), "b".into()], vec![vec![], vec![]]).unwrap();
        let d = m.dual().unwrap();
        assert_eq!(d.rank().unwrap(), 2);
        assert_eq!(m.rank().unwrap(), 2);
        let dd = d.presentation().unwrap().dual().unwrap();
        assert_eq!(dd.rank().unwrap(), 2);
    }

    #[test]
    fn dual_kills_torsion() {
        let c = chart(&["x", "y"], &[]);
        let m = PresentedModule::new(
            c.clone(),
            vec!["du".into(), "dv".into()],
            vec![vec![p(&c, "x^2")], vec![p(&c, "0")]],
        )
        .unwrap();
        let d = m.dual().unwrap();
        assert_eq!(d.rank().unwrap(), 1);
        assert!(m.pairing_is_sound(&d).unwrap());
        assert!(d.contains(&[p(&c, "0"), p(&c, "1")]).unwrap());
        assert!(!d.contains(&[p(&c, "1"), p(&c, "0")]).unwrap());
    }

    #[test]
    fn saturation_of_principal_line() {
        let c = chart(&["x", "y"], &[]);
        let s = Submodule { chart: c.clone(), rank_ambient: 1, gens: vec![vec![p(&c, "x")]] };
        let sat = s.saturation().unwrap();
        assert!(sat.contains(&[p(&c, "1")]).unwrap());
        assert!(sat.saturation().unwrap().same_as(&sat).unwrap());
    }

    #[test]
    fn diagonal_line_is_saturated() {
        let c = chart(&["x", "y"], &[]);
        let s = Submodule { chart: c.clone(), rank_ambient: 2, gens: vec![vec![p(&c, "x"), p(&c, "y")]] };
        assert!(s.saturation().unwrap().same_as(&s).unwrap());
    }

    #[test]
    fn length_of_diagonal() {
        let c = chart(&["x", "y"], &[]);
        let m = vec![vec![p(&c, "x"), p(&c, "0")], vec![p(&c, "0"), p(&c, "x^2")]];
        assert_eq!(length_at_prime(&c.ideal, &m, &p(&c, "x")).unwrap(), 3);
        let id = vec![vec![p(&c, "1"), p(&c, "0")], vec![p(&c, "0"), p(&c, "1")]];
        assert_eq!(length_at_prime(&c.ideal, &id, &p(&c, "x")).unwrap(), 0);
    }

    #[test]
    fn identity_top_minors() {
        let c = chart(&["x"], &[]);
        let a: Matrix = vec![vec![], vec![]];
        let t = top_minor_sections(&c.ideal, &a, 2).unwrap();
        assert!(t.content.render() == "1");
        assert_eq!(t.sections.len(), 1);
        assert!(matches!(top_minor_sections(&c.ideal, &a, 3), Err(Error::Rank(_))));
    }

    #[test]
    fn content_times_sections_is_raw() {
        let c = chart(&["x", "y", "u"], &[]);
        let a: Matrix = vec![
            vec![p(&c, "0"), p(&c, "u^2")],
            vec![p(&c, "x"), p(&c, "1")],
            vec![p(&c, "y"), p(&c, "0")],
        ];
        let t = top_minor_sections(&c.ideal, &a, 1).unwrap();
        for (raw, sec) in t.raw.iter().zip(&t.sections) {
            assert_eq!(*raw, t.content.mul(sec));
        }
    }
}
