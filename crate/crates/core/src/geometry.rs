//! Schemes in products of projective spaces over tower fields.

use crate::error::{Error, Result};
use crate::ideal::IdealHandle;
use crate::module::{generic_rank, subsets, Matrix};
use crate::poly::{MultiPoly, PolyRing, Ring, TermOrder};
use crate::tower::{TowerElement, TowerField};
use crate::fpoly::FpPoly;
use serde::Serialize;

/// Status of a certificate attached to a scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum Cert {
    Certified,
    Uncertified(String),
    Unknown,
}

impl Cert {
    pub fn is_certified(&self) -> bool {
        matches!(self, Cert::Certified)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Flags {
    pub reduced: Cert,
    pub r1: Cert,
    pub normal: Cert,
    pub complete_intersection: bool,
}

/// Integer multidegree, one entry per projective factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn zero(n: usize) -> Self {
        DivisorClass(vec![0; n])
    }

    pub fn from_degrees(d: &[u32]) -> Self {
        DivisorClass(d.iter().map(|&x| x as i64).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl std::fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

/// A standard affine chart: one coordinate per factor set to 1.
#[derive(Clone, Debug)]
pub struct Chart {
    pub index: usize,
    /// Global indices of the variables set to 1, one per block.
    pub units: Vec<usize>,
    pub ring: Ring,
    /// Global variable -> chart variable (None for the unit coordinates).
    pub map: Vec<Option<usize>>,
    pub label: String,
}

impl Chart {
    pub fn restrict(&self, f: &MultiPoly) -> MultiPoly {
        f.remap(&self.ring, &self.map)
    }
}

#[derive(Clone, Debug)]
pub struct SchemeDesc {
    pub ring: Ring,
    pub ideal: IdealHandle,
    pub dimension: usize,
    pub flags: Flags,
}

impl SchemeDesc {
    /// Validates and builds a scheme from homogeneous generators.
    pub fn new(ring: &Ring, gens: Vec<MultiPoly>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Validation("the generator list is empty".into()));
        }
        for g in &gens {
            if g.is_zero() {
                return Err(Error::Validation("zero generator".into()));
            }
            if !g.is_homogeneous() {
                return Err(Error::Validation(format!("generator {g} is not homogeneous in each factor")));
            }
        }
        let ideal = IdealHandle::new(ring, gens);
        let cone = ideal.dimension()?;
        let nb = ring.grading.len() as i64;
        if cone - nb < 0 {
            return Err(Error::Validation("the scheme is empty".into()));
        }
        let dimension = (cone - nb) as usize;
        let ci = ideal.gens().len() == ambient_dim(ring) - dimension;
        Ok(SchemeDesc {
            ring: ring.clone(),
            ideal,
            dimension,
            flags: Flags { reduced: Cert::Unknown, r1: Cert::Unknown, normal: Cert::Unknown, complete_intersection: ci },
        })
    }

    /// Same shape with new generators; the dimension is carried over.
    pub fn with_generators(&self, ring: &Ring, gens: Vec<MultiPoly>) -> Self {
        let ideal = IdealHandle::new(ring, gens);
        let ci = ideal.gens().len() == ambient_dim(ring) - self.dimension;
        SchemeDesc {
            ring: ring.clone(),
            ideal,
            dimension: self.dimension,
            flags: Flags { reduced: Cert::Unknown, r1: Cert::Unknown, normal: Cert::Unknown, complete_intersection: ci },
        }
    }

    pub fn field(&self) -> &TowerField {
        &self.ring.field
    }

    pub fn gens(&self) -> &[MultiPoly] {
        self.ideal.gens()
    }

    pub fn blocks(&self) -> Vec<Vec<String>> {
        self.ring.grading.iter().map(|b| b.iter().map(|&i| self.ring.vars[i].clone()).collect()).collect()
    }

    pub fn nblocks(&self) -> usize {
        self.ring.grading.len()
    }

    pub fn codim(&self) -> usize {
        ambient_dim(&self.ring) - self.dimension
    }

    pub fn render_gens(&self) -> Vec<String> {
        self.gens().iter().map(|g| g.render()).collect()
    }

    /// All standard charts, in lexicographic order of the unit coordinates.
    pub fn charts(&self) -> Vec<Chart> {
        let ring = &self.ring;
        let mut choices: Vec<Vec<usize>> = vec![vec![]];
        for b in &ring.grading {
            let mut next = Vec::new();
            for c in &choices {
                for &v in b {
                    let mut c2 = c.clone();
                    c2.push(v);
                    next.push(c2);
                }
            }
            choices = next;
        }
        choices.into_iter().enumerate().map(|(i, u)| make_chart(ring, i, u)).collect()
    }

    pub fn chart_ideal(&self, chart: &Chart) -> IdealHandle {
        IdealHandle::new(&chart.ring, self.gens().iter().map(|g| chart.restrict(g)).collect())
    }

    /// Charts meeting the scheme.
    pub fn nonempty_charts(&self) -> Result<Vec<(Chart, IdealHandle)>> {
        let mut out = Vec::new();
        for c in self.charts() {
            let i = self.chart_ideal(&c);
            if !i.is_unit()? {
                out.push((c, i));
            }
        }
        Ok(out)
    }

    /// Canonical class by adjunction.
    pub fn canonical_class(&self) -> DivisorClass {
        let mut k: Vec<i64> = self.ring.grading.iter().map(|b| -(b.len() as i64)).collect();
        for g in self.gens() {
            for (a, d) in k.iter_mut().zip(g.multidegree().unwrap()) {
                *a += d as i64;
            }
        }
        DivisorClass(k)
    }

    /// Standing hypothesis H^0(X, O_X) = K, which holds for positive
    /// dimensional complete intersections in products of projective spaces.
    pub fn global_functions_are_constants(&self) -> bool {
        self.flags.complete_intersection && self.dimension >= 1
    }

    /// Jacobian in the ring variables and every field symbol (rows =
    /// generators).
    pub fn full_jacobian(&self) -> Matrix {
        let n = self.ring.nvars();
        let m = self.field().nsyms();
        self.gens()
            .iter()
            .map(|g| {
                let mut row: Vec<MultiPoly> = (0..n).map(|v| g.derivative(v)).collect();
                row.extend((0..m).map(|i| g.symbol_derivative(i)));
                row
            })
            .collect()
    }
}

fn make_chart(ring: &Ring, index: usize, units: Vec<usize>) -> Chart {
    let n = ring.nvars();
    let mut map = vec![None; n];
    let mut vars = Vec::new();
    let mut grading = Vec::new();
    let mut sizes = Vec::new();
    for b in &ring.grading {
        let mut gb = Vec::new();
        for &v in b {
            if units.contains(&v) {
                continue;
            }
            map[v] = Some(vars.len());
            gb.push(vars.len());
            vars.push(ring.vars[v].clone());
        }
        sizes.push(gb.len());
        grading.push(gb);
    }
    let sizes: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    let label = units.iter().map(|&u| format!("{}!=0", ring.vars[u])).collect::<Vec<_>>().join(",");
    let cr = PolyRing::new(ring.field.clone(), vars, grading, TermOrder::blocks(&sizes));
    Chart { index, units, ring: cr, map, label }
}

pub fn ambient_dim(ring: &PolyRing) -> usize {
    ring.grading.iter().map(|b| b.len() - 1).sum()
}

/// K ⊆ L with every level raised by at most one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeSpec {
    pub source: TowerField,
    pub target: TowerField,
}

impl BaseChangeSpec {
    pub fn new(source: TowerField, target: TowerField) -> Result<Self> {
        if !target.contains(&source) {
            return Err(Error::Validation("target field does not contain the source field".into()));
        }
        if target.levels().iter().zip(source.levels()).any(|(a, b)| a - b > 1) {
            return Err(Error::Validation("base change is not of height one (a level is raised by more than 1)".into()));
        }
        Ok(BaseChangeSpec { source, target })
    }

    pub fn raised(&self) -> Vec<usize> {
        self.target.raised_over(&self.source)
    }

    pub fn degree_exponent(&self) -> u32 {
        self.raised().len() as u32
    }

    pub fn degree(&self) -> u64 {
        (self.source.p() as u64).pow(self.degree_exponent())
    }
}

/// The same equations over a larger field.
pub fn base_change(x: &SchemeDesc, target: &TowerField) -> SchemeDesc {
    let ring = x.ring.with_field(target.clone());
    let gens = x.gens().iter().map(|g| g.base_change(&ring)).collect();
    let mut out = x.with_generators(&ring, gens);
    out.flags.complete_intersection = x.flags.complete_intersection;
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionCertificate {
    pub status: Cert,
    pub changed: bool,
    /// Number of p-th roots or squarefree reductions for each generator.
    pub root_steps: Vec<u32>,
    /// Generators replaced through a combination with another generator.
    pub combination_roots: usize,
}

fn root_of(f: &MultiPoly) -> Option<MultiPoly> {
    if f.is_constant() {
        return None;
    }
    f.pth_root().or_else(|| f.monic().pth_root())
}

/// Radical of a principal ideal: p-th roots, then the squarefree part via
/// gcd with every derivation (ring variables and field symbols).
pub fn principal_radical(f: &MultiPoly) -> MultiPoly {
    if f.is_constant() {
        return f.clone();
    }
    if let Some(r) = root_of(f) {
        return principal_radical(&r);
    }
    let mut g = f.clone();
    for v in 0..f.ring().nvars() {
        g = g.gcd(&f.derivative(v));
    }
    for i in 0..f.ring().field.nsyms() {
        g = g.gcd(&f.symbol_derivative(i));
    }
    if g.is_constant() {
        return f.clone();
    }
    let a = f.exact_div(&g).expect("gcd divides");
    let b = principal_radical(&g);
    let c = a.gcd(&b);
    a.mul(&b).exact_div(&c).expect("gcd divides")
}

/// Reduced structure by p-th-root extraction, with a generic-smoothness
/// certificate: Z is reduced when the full Jacobian has rank codim at the
/// generic point.
pub fn reduce_structure(xl: &SchemeDesc) -> Result<(SchemeDesc, ReductionCertificate)> {
    let mut gens: Vec<MultiPoly> = xl.gens().to_vec();
    let mut steps = vec![0u32; gens.len()];
    let mut combos = 0;
    loop {
        let mut progress = false;
        for (i, g) in gens.iter_mut().enumerate() {
            while let Some(r) = root_of(g) {
                *g = r;
                steps[i] += 1;
                progress = true;
            }
            let r = principal_radical(g);
            if r.total_degree() < g.total_degree() {
                *g = r;
                steps[i] += 1;
                progress = true;
            }
        }
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                if i == j || gens[i].multidegree() != gens[j].multidegree() {
                    continue;
                }
                let c = gens[i].lc().unwrap().div(gens[j].lc().unwrap()).unwrap();
                let h = gens[i].sub(&gens[j].scale(&c));
                if h.is_zero() {
                    continue;
                }
                if let Some(r) = root_of(&h) {
                    gens[i] = r;
                    steps[i] += 1;
                    combos += 1;
                    progress = true;
                }
            }
        }
        if !progress {
            break;
        }
    }
    let changed = steps.iter().any(|&s| s > 0);
    let mut z = xl.with_generators(&xl.ring, gens);
    z.flags.complete_intersection = xl.flags.complete_intersection;
    let status = if generically_smooth(&z)? {
        Cert::Certified
    } else {
        Cert::Uncertified("the Jacobian drops rank at the generic point".into())
    };
    z.flags.reduced = status.clone();
    Ok((z, ReductionCertificate { status, changed, root_steps: steps, combination_roots: combos }))
}

/// Some maximal minor of the full Jacobian is nonzero on the scheme.
pub fn generically_smooth(z: &SchemeDesc) -> Result<bool> {
    let j = z.full_jacobian();
    let c = z.codim();
    if j.len() != c {
        return Ok(false);
    }
    let cols = j[0].len();
    for cs in subsets(cols, c) {
        let rows: Vec<usize> = (0..c).collect();
        let m = crate::module::minor(&z.ring, &j, &rows, &cs);
        if !m.is_zero() && !z.ideal.contains(&m)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A prime divisor given by one homogeneous equation.
#[derive(Clone, Debug)]
pub struct PrimeDivisor {
    pub equation: MultiPoly,
    pub class: DivisorClass,
}

impl PrimeDivisor {
    pub fn render(&self) -> String {
        format!("({} = 0)", self.equation.render())
    }
}

/// Codimension-one components of the locus where the full Jacobian drops
/// rank, returned as principal equations. Non-principal codimension-one
/// components are unsupported.
pub fn jacobian_singular_primes(z: &SchemeDesc) -> Result<Vec<PrimeDivisor>> {
    if !z.flags.complete_intersection {
        return Err(Error::Unsupported("the scheme is not a complete intersection".into()));
    }
    let j = z.full_jacobian();
    let c = z.codim();
    let cols = j[0].len();
    let rows: Vec<usize> = (0..c).collect();
    let minors: Vec<MultiPoly> = subsets(cols, c)
        .into_iter()
        .map(|cs| crate::module::minor(&z.ring, &j, &rows, &cs))
        .filter(|m| !m.is_zero())
        .collect();
    let mut g = MultiPoly::zero(&z.ring);
    for m in &minors {
        g = g.gcd(m);
    }
    let candidates = if g.is_zero() { Vec::new() } else { prime_candidates(&g) };
    let mut out = Vec::new();
    for pi in &candidates {
        if divisor_meets_in_codim_one(z, pi)? {
            out.push(PrimeDivisor { equation: pi.clone(), class: DivisorClass::from_degrees(&pi.multidegree().unwrap()) });
        }
    }
    // The residual locus must have codimension at least two.
    let residual: Vec<MultiPoly> = if g.is_zero() {
        minors.clone()
    } else {
        minors.iter().map(|m| m.exact_div(&g).unwrap()).collect()
    };
    let sigma = z.ideal.with(&residual);
    for (chart, zi) in z.nonempty_charts()? {
        let si = IdealHandle::new(&chart.ring, sigma.gens().iter().map(|f| chart.restrict(f)).collect());
        let dz = zi.dimension()?;
        let ds = si.dimension()?;
        if ds >= 0 && ds + 1 >= dz {
            return Err(Error::Unsupported(format!(
                "non-principal codimension-one singular component on chart {}",
                chart.label
            )));
        }
    }
    Ok(out)
}

/// Coarse factorisation of a homogeneous polynomial into reduced pieces:
/// coordinate factors, the content of each block of variables, and the
/// radical of what remains. Pieces are pairwise coprime but need not be
/// irreducible.
pub fn prime_candidates(g: &MultiPoly) -> Vec<MultiPoly> {
    let ring = g.ring();
    let n = ring.nvars();
    let mut min = vec![u32::MAX; n];
    for (e, _) in g.terms() {
        for (m, k) in min.iter_mut().zip(e) {
            *m = (*m).min(*k);
        }
    }
    let mut out = Vec::new();
    for (v, &k) in min.iter().enumerate() {
        if k > 0 {
            out.push(MultiPoly::var(ring, v));
        }
    }
    let mut rest = g.exact_div(&MultiPoly::term(ring, min.clone(), ring.field.one())).unwrap();
    let mut pieces = Vec::new();
    if ring.grading.len() > 1 {
        for block in &ring.grading {
            let c = block_content(&rest, block);
            if !c.is_constant() {
                while let Some(q) = rest.exact_div(&c) {
                    rest = q;
                }
                pieces.push(c);
            }
        }
    }
    pieces.push(rest);
    for piece in pieces {
        if !piece.is_constant() {
            out.push(principal_radical(&piece).monic());
        }
    }
    out
}

/// gcd of the coefficients of f seen as a polynomial in the variables
/// outside `block`.
fn block_content(f: &MultiPoly, block: &[usize]) -> MultiPoly {
    let ring = f.ring();
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<crate::poly::Term>> = Default::default();
    for (e, c) in f.terms() {
        let mut outer = e.clone();
        let mut inner = vec![0; e.len()];
        for &v in block {
            inner[v] = e[v];
            outer[v] = 0;
        }
        groups.entry(outer).or_default().push((inner, c.clone()));
    }
    let mut g = MultiPoly::zero(ring);
    for (_, terms) in groups {
        g = g.gcd(&MultiPoly::from_terms(ring, terms));
        if g.is_constant() {
            break;
        }
    }
    g
}

fn divisor_meets_in_codim_one(z: &SchemeDesc, pi: &MultiPoly) -> Result<bool> {
    for (chart, zi) in z.nonempty_charts()? {
        let d = zi.with(&[chart.restrict(pi)]);
        let dz = zi.dimension()?;
        let dd = d.dimension()?;
        if dd >= 0 && dd + 1 == dz {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, Serialize)]
pub struct R1Result {
    pub failing: Vec<String>,
    pub status: Cert,
}

/// R1 via the Jacobian criterion in variables and field symbols.
pub fn r1_test(z: &SchemeDesc) -> Result<(Vec<PrimeDivisor>, SchemeDesc)> {
    let primes = jacobian_singular_primes(z)?;
    let mut out = z.clone();
    if primes.is_empty() {
        out.flags.r1 = Cert::Certified;
        if out.flags.complete_intersection {
            out.flags.normal = Cert::Certified;
        }
    } else {
        let names: Vec<String> = primes.iter().map(|p| p.render()).collect();
        out.flags.r1 = Cert::Uncertified(format!("singular along {}", names.join(", ")));
        out.flags.normal = Cert::Uncertified("R1 fails".into());
    }
    Ok((primes, out))
}

/// An element adjoined by the closure search.
#[derive(Clone, Debug, Serialize)]
pub struct AdjoinedElement {
    /// The new field element, e.g. `r^(1/2)`.
    pub element: String,
    /// Its p-th power, an element of the previous field.
    pub pth_power: String,
    /// The rational function on the scheme it equals.
    pub function: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureStatus {
    CertifiedNormal,
    ClosureAtBound,
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub y: SchemeDesc,
    pub adjoined: Vec<AdjoinedElement>,
    pub status: ClosureStatus,
    pub conductor_candidates: Vec<PrimeDivisor>,
}

/// Splits a generator as Σ u^γ x^β P^p over the field's p-basis.
/// Keys are (symbol residues, variable residues).
fn p_decomposition(g: &MultiPoly) -> Vec<((Vec<u32>, Vec<u32>), MultiPoly)> {
    let ring = g.ring();
    let field = &ring.field;
    let p = field.p();
    let m = field.nsyms();
    let mut parts: Vec<((Vec<u32>, Vec<u32>), Vec<(Vec<u32>, TowerElement)>)> = Vec::new();
    for (e, c) in g.terms() {
        let den_p = c.den().pow(p as u64);
        let num = c.num().mul(&c.den().pow(p as u64 - 1));
        let beta: Vec<u32> = e.iter().map(|k| k % p).collect();
        let mut by_gamma: Vec<(Vec<u32>, Vec<(Vec<u32>, u32)>)> = Vec::new();
        for (u, k) in num.terms() {
            let gamma: Vec<u32> = u.iter().map(|x| x % p).collect();
            let rest: Vec<u32> = u.iter().zip(&gamma).map(|(x, y)| x - y).collect();
            match by_gamma.iter_mut().find(|(g2, _)| *g2 == gamma) {
                Some((_, v)) => v.push((rest, *k)),
                None => by_gamma.push((gamma, vec![(rest, *k)])),
            }
        }
        for (gamma, t) in by_gamma {
            let coeff = TowerElement::fraction(FpPoly::from_terms(p, m, t), den_p.clone());
            let root = coeff.frobenius_root().expect("exponents divisible by p");
            let xe: Vec<u32> = e.iter().zip(&beta).map(|(x, b)| (x - b) / p).collect();
            let key = (gamma, beta.clone());
            match parts.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push((xe, root)),
                None => parts.push((key, vec![(xe, root)])),
            }
        }
    }
    parts.into_iter().map(|(k, t)| (k, MultiPoly::from_terms(ring, t))).collect()
}

/// Bounded p-th-root closure: adjoins constants η ∈ K(Z) with η^p ∈ L that
/// show up as quotients P_β/P_α in two-term p-basis splittings of the
/// generators, then re-reduces over the enlarged field.
pub fn pth_root_closure(z: &SchemeDesc, degree_bound: u32) -> Result<Closure> {
    let mut cur = z.clone();
    let mut adjoined = Vec::new();
    for _round in 0..8 {
        let mut found: Option<(TowerField, TowerElement, usize, MultiPoly, MultiPoly, TowerElement)> = None;
        for (idx, g) in cur.gens().iter().enumerate() {
            let parts = p_decomposition(g);
            if parts.len() != 2 {
                continue;
            }
            let ((ga, ba), pa) = &parts[0];
            let ((gb, bb), pb) = &parts[1];
            if ba.iter().any(|&b| b != 0) || bb.iter().any(|&b| b != 0) {
                continue;
            }
            if pa.total_degree().max(pb.total_degree()) > degree_bound {
                continue;
            }
            // g = u^ga pa^p + u^gb pb^p; order so that the monomial piece is pa.
            let (ga, gb, pa, pb) = if pb.is_monomial() && !pa.is_monomial() { (gb, ga, pb, pa) } else { (ga, gb, pa, pb) };
            let field = cur.field().clone();
            let ua = field.monomial(ga.clone());
            let ub = field.monomial(gb.clone());
            let h = ua.div(&ub).unwrap().neg();
            let (big, eta) = field.pth_root(&h);
            if big == field {
                continue;
            }
            found = Some((big, eta, idx, pa.clone(), pb.clone(), h));
            break;
        }
        let Some((big, eta, idx, pa, pb, h)) = found else {
            break;
        };
        let ring = cur.ring.with_field(big.clone());
        let pa_b = pa.base_change(&ring);
        let pb_b = pb.base_change(&ring);
        let new_gen = pb_b.sub(&pa_b.scale(&eta));
        let mut gens: Vec<MultiPoly> = cur.gens().iter().map(|g| g.base_change(&ring)).collect();
        gens[idx] = new_gen;
        adjoined.push(AdjoinedElement {
            element: big.render(&eta),
            pth_power: cur.field().render(&h),
            function: format!("({})/({})", pb.render(), pa.render()),
        });
        let next = cur.with_generators(&ring, gens);
        let (reduced, _) = reduce_structure(&next)?;
        cur = reduced;
    }
    if !adjoined.is_empty() {
        cur.flags.reduced =
            if generically_smooth(&cur)? { Cert::Certified } else { Cert::Uncertified("closure is not reduced".into()) };
    } else {
        cur.flags.reduced = z.flags.reduced.clone();
    }
    let (primes, y) = r1_test(&cur)?;
    let status = if primes.is_empty() && y.flags.reduced.is_certified() {
        ClosureStatus::CertifiedNormal
    } else {
        ClosureStatus::ClosureAtBound
    };
    let (z_primes, _) = r1_test(z)?;
    Ok(Closure { y, adjoined, status, conductor_candidates: z_primes })
}

/// Relation matrix of Ω over X: rows = symbols raised over `base`, columns
/// = generators, entries ∂G_j/∂u_i.
pub fn relation_matrix(s: &SchemeDesc, base: &TowerField) -> (Vec<usize>, Matrix) {
    let raised = s.field().raised_over(base);
    let m = raised.iter().map(|&i| s.gens().iter().map(|g| g.symbol_derivative(i)).collect()).collect();
    (raised, m)
}

/// [K(Y) : K(X)] = p^r with r the generic rank of Ω_{Y/X}.
pub fn degree_insep(y: &SchemeDesc, x: &SchemeDesc) -> Result<u64> {
    let (raised, a) = relation_matrix(y, x.field());
    let rank = generic_rank(&y.ideal, &a)?;
    Ok((y.field().p() as u64).pow((raised.len() - rank) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn scheme(p: u32, params: &[&str], levels: Vec<u32>, blocks: &[&[&str]], gens: &[&str]) -> SchemeDesc {
        let f = TowerField::new(p, params.iter().map(|s| s.to_string()).collect(), levels).unwrap();
        let b: Vec<Vec<String>> = blocks.iter().map(|b| b.iter().map(|s| s.to_string()).collect()).collect();
        let r = PolyRing::multiprojective(f, &b);
        SchemeDesc::new(&r, gens.iter().map(|s| parse_poly(&r, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn validation_errors() {
        let f = TowerField::rational(2, vec!["s".into()]).unwrap();
        let r = PolyRing::multiprojective(f, &[vec!["x".into(), "y".into(), "z".into()]]);
        assert!(matches!(SchemeDesc::new(&r, vec![]), Err(Error::Validation(_))));
        let g = parse_poly(&r, "x^2 + y").unwrap();
        assert!(matches!(SchemeDesc::new(&r, vec![g]), Err(Error::Validation(_))));
    }

    #[test]
    fn conic_dimension_and_ci() {
        let x = scheme(5, &["s"], vec![0], &[&["x", "y", "z"]], &["x^2 + y*z"]);
        assert_eq!(x.dimension, 1);
        assert!(x.flags.complete_intersection);
        assert_eq!(x.canonical_class(), DivisorClass(vec![-1]));
    }

    #[test]
    fn reduce_square() {
        let x = scheme(2, &["s", "t"], vec![0, 0], &[&["x", "y", "z"]], &["s*x^4 + t^2*y^4 + z^4"]);
        let l = x.field().with_levels(vec![1, 1]);
        let xl = base_change(&x, &l);
        let (z, cert) = reduce_structure(&xl).unwrap();
        assert!(cert.changed);
        assert!(cert.status.is_certified());
        let expect = parse_poly(&z.ring, "s^(1/2)*x^2 + t*y^2 + z^2").unwrap();
        assert_eq!(z.gens()[0], expect);
    }

    #[test]
    fn fp_coefficients_unchanged() {
        let x = scheme(3, &["s"], vec![0], &[&["x", "y", "z"]], &["x^3 + y^3 + z^2*x"]);
        let xl = base_change(&x, &x.field().with_levels(vec![1]));
        let (z, cert) = reduce_structure(&xl).unwrap();
        assert!(!cert.changed);
        assert!(cert.status.is_certified());
        assert_eq!(z.gens(), xl.gens());
    }

    #[test]
    fn reducible_with_square_factor() {
        let x = scheme(2, &["s"], vec![0], &[&["x", "y", "z"]], &["s*x^2*z + y^2*z"]);
        let xl = base_change(&x, &x.field().with_levels(vec![1]));
        let (z, cert) = reduce_structure(&xl).unwrap();
        assert!(cert.changed);
        assert!(cert.status.is_certified());
        assert_eq!(z.gens()[0].total_degree(), 2);
    }

    #[test]
    fn smooth_conic_has_no_singular_primes() {
        let x = scheme(5, &["s"], vec![0], &[&["x", "y", "z"]], &["x^2 + y*z"]);
        assert!(jacobian_singular_primes(&x).unwrap().is_empty());
        let c = scheme(5, &["s"], vec![0], &[&["x", "y", "z"]], &["x^3 + y^3 + z^3"]);
        assert!(jacobian_singular_primes(&c).unwrap().is_empty());
    }

    #[test]
    fn degree_of_fermat_conic() {
        let x = scheme(2, &["s0", "s1"], vec![0, 0], &[&["x0", "x1", "x2"]], &["s0*x0^2 + s1*x1^2 + x2^2"]);
        let xl = base_change(&x, &x.field().with_levels(vec![1, 1]));
        let (z, _) = reduce_structure(&xl).unwrap();
        assert_eq!(degree_insep(&z, &x).unwrap(), 2);
        assert_eq!(degree_insep(&x, &x).unwrap(), 1);
    }

    #[test]
    fn relation_matrix_of_square_root() {
        let z = scheme(2, &["s", "t"], vec![1, 1], &[&["x", "y", "z"]], &["s^(1/2)*x^2 + t*y^2 + z^2"]);
        let k = z.field().with_levels(vec![0, 0]);
        let (raised, a) = relation_matrix(&z, &k);
        assert_eq!(raised, vec![0, 1]);
        assert_eq!(a[0][0].render(), "x^2");
        assert!(a[1][0].is_zero());
    }

    #[test]
    fn closure_adjoins_root_of_r() {
        let x = scheme(
            2,
            &["r", "s", "t"],
            vec![0, 0, 0],
            &[&["x", "y", "z"], &["u", "v", "w"]],
            &["s*x^2 + t*y^2 + z^2", "r*u^2 + s*v^2 + w^2"],
        );
        assert_eq!(x.dimension, 2);
        let xl = base_change(&x, &x.field().with_levels(vec![0, 1, 1]));
        let (z, cert) = reduce_structure(&xl).unwrap();
        assert!(cert.status.is_certified());
        let primes = jacobian_singular_primes(&z).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].equation.render(), "u");
        assert_eq!(primes[0].class, DivisorClass(vec![0, 1]));
        let c = pth_root_closure(&z, 8).unwrap();
        assert_eq!(c.status, ClosureStatus::CertifiedNormal);
        assert_eq!(c.adjoined.len(), 1);
        assert_eq!(c.y.field().levels(), &[1, 1, 1]);
        assert_eq!(degree_insep(&c.y, &x).unwrap(), 2);
    }
}
