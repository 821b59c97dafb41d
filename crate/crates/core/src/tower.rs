//! Parameter tower fields F_p(t_1^{1/p^e_1}, ..., t_m^{1/p^e_m}).
//!
//! An element is a reduced fraction of polynomials in the symbols
//! u_i = t_i^{1/p^e_i}. Elements carry no field tag; the field is passed
//! explicitly where levels matter (roots, coercion, printing).

use crate::error::{Error, Result};
use crate::fpoly::{inv_mod, FpPoly};
use serde::{Deserialize, Serialize};
use std::fmt;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerField {
    p: u32,
    params: Vec<String>,
    levels: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerElement {
    num: FpPoly,
    den: FpPoly,
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl TowerElement {
    pub fn from_poly(num: FpPoly) -> Self {
        let den = FpPoly::one(num.p(), num.nvars());
        TowerElement { num, den }
    }

    /// Builds num/den in canonical form. Panics on a zero denominator.
    pub fn fraction(num: FpPoly, den: FpPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let one = FpPoly::one(num.p(), num.nvars());
            return TowerElement { num, den: one };
        }
        let (num, den) = if den.as_constant().is_some() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
            }
        };
        let lc = den.lc();
        if lc == 1 {
            TowerElement { num, den }
        } else {
            let inv = inv_mod(lc, num.p());
            TowerElement { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    pub fn nsyms(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The F_p value when the element is a constant.
    pub fn as_fp(&self) -> Option<u32> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn zero_like(&self) -> Self {
        TowerElement::from_poly(FpPoly::zero(self.p(), self.nsyms()))
    }

    pub fn one_like(&self) -> Self {
        TowerElement::from_poly(FpPoly::one(self.p(), self.nsyms()))
    }

    pub fn constant_like(&self, c: u32) -> Self {
        TowerElement::from_poly(FpPoly::constant(self.p(), self.nsyms(), c))
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return TowerElement::fraction(self.num.add(&o.num), self.den.clone());
        }
        TowerElement::fraction(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        TowerElement { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return self.zero_like();
        }
        if self.den.is_one() && o.den.is_one() {
            return TowerElement { num: self.num.mul(&o.num), den: self.den.clone() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = o.den.exact_div(&g1).unwrap();
        let c = o.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        TowerElement::fraction(a.mul(&c), b.mul(&d))
    }

    pub fn scale(&self, c: u32) -> Self {
        TowerElement::fraction(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(TowerElement::fraction(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: u64) -> Self {
        TowerElement { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// Partial derivative with respect to the symbol u_i.
    pub fn partial(&self, i: usize) -> Self {
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return TowerElement::fraction(dn, self.den.clone());
        }
        TowerElement::fraction(dn.mul(&self.den).sub(&self.num.mul(&dd)), self.den.mul(&self.den))
    }

    /// Rewrites symbol exponents, e.g. for coercion between levels.
    pub fn map_exponents(&self, nsyms: usize, f: impl Fn(&[u32]) -> Vec<u32> + Copy) -> Self {
        TowerElement::fraction(self.num.map_exponents(nsyms, f), self.den.map_exponents(nsyms, f))
    }

    /// p-th root taken symbolwise inside the same representation; needs every
    /// exponent divisible by p.
    pub fn frobenius_root(&self) -> Option<Self> {
        Some(TowerElement { num: self.num.frobenius_root()?, den: self.den.frobenius_root()? })
    }

    /// Largest total degree of numerator or denominator.
    pub fn height(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }
}

impl TowerField {
    pub fn new(p: u32, params: Vec<String>, levels: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("characteristic {p} is not prime")));
        }
        if params.len() != levels.len() {
            return Err(Error::Validation(format!(
                "{} parameters but {} levels",
                params.len(),
                levels.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in &params {
            if !seen.insert(n) {
                return Err(Error::Validation(format!("duplicate parameter {n}")));
            }
        }
        Ok(TowerField { p, params, levels })
    }

    /// The rational function field F_p(t_1, ..., t_m).
    pub fn rational(p: u32, params: Vec<String>) -> Result<Self> {
        let n = params.len();
        Self::new(p, params, vec![0; n])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn nsyms(&self) -> usize {
        self.params.len()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|n| n == name)
    }

    pub fn with_levels(&self, levels: Vec<u32>) -> Self {
        assert_eq!(levels.len(), self.levels.len());
        TowerField { p: self.p, params: self.params.clone(), levels }
    }

    /// Raises the listed parameters by one level.
    pub fn raised(&self, idx: &[usize]) -> Self {
        let mut l = self.levels.clone();
        for &i in idx {
            l[i] += 1;
        }
        self.with_levels(l)
    }

    /// Whether `other` is a subfield (same parameters, levels no higher).
    pub fn contains(&self, other: &TowerField) -> bool {
        self.p == other.p
            && self.params == other.params
            && self.levels.iter().zip(&other.levels).all(|(a, b)| a >= b)
    }

    /// Exponent e with [self : base] = p^e.
    pub fn degree_exponent_over(&self, base: &TowerField) -> Option<u32> {
        if !self.contains(base) {
            return None;
        }
        Some(self.levels.iter().zip(&base.levels).map(|(a, b)| a - b).sum())
    }

    /// Indices where self is above base.
    pub fn raised_over(&self, base: &TowerField) -> Vec<usize> {
        (0..self.nsyms()).filter(|&i| self.levels[i] > base.levels[i]).collect()
    }

    pub fn join(&self, other: &TowerField) -> Self {
        let l = self.levels.iter().zip(&other.levels).map(|(a, b)| *a.max(b)).collect();
        self.with_levels(l)
    }

    pub fn zero(&self) -> TowerElement {
        TowerElement::from_poly(FpPoly::zero(self.p, self.nsyms()))
    }

    pub fn one(&self) -> TowerElement {
        TowerElement::from_poly(FpPoly::one(self.p, self.nsyms()))
    }

    pub fn constant(&self, c: i64) -> TowerElement {
        let c = c.rem_euclid(self.p as i64) as u32;
        TowerElement::from_poly(FpPoly::constant(self.p, self.nsyms(), c))
    }

    /// The symbol u_i = t_i^{1/p^{e_i}}.
    pub fn symbol(&self, i: usize) -> TowerElement {
        TowerElement::from_poly(FpPoly::var(self.p, self.nsyms(), i))
    }

    /// The parameter t_i itself.
    pub fn param(&self, i: usize) -> TowerElement {
        let k = (self.p as u64).pow(self.levels[i]);
        self.symbol(i).pow(k)
    }

    /// Monomial with the given symbol exponents.
    pub fn monomial(&self, exps: Vec<u32>) -> TowerElement {
        TowerElement::from_poly(FpPoly::monomial(self.p, exps, 1))
    }

    /// Reinterprets an element of a subfield `from` in this field.
    pub fn coerce(&self, a: &TowerElement, from: &TowerField) -> TowerElement {
        debug_assert!(self.contains(from), "coercion into a smaller field");
        if self.levels == from.levels {
            return a.clone();
        }
        let p = self.p;
        let mult: Vec<u32> = self
            .levels
            .iter()
            .zip(&from.levels)
            .map(|(a, b)| p.pow(a - b))
            .collect();
        a.map_exponents(self.nsyms(), |e| e.iter().zip(&mult).map(|(x, m)| x * m).collect())
    }

    /// Writes an element of this field in a subfield when it lies there.
    pub fn descend(&self, a: &TowerElement, to: &TowerField) -> Option<TowerElement> {
        if !self.contains(to) {
            return None;
        }
        let p = self.p;
        let div: Vec<u32> = self.levels.iter().zip(&to.levels).map(|(a, b)| p.pow(a - b)).collect();
        let ok = |f: &FpPoly| f.terms().iter().all(|(e, _)| e.iter().zip(&div).all(|(x, d)| x % d == 0));
        if !ok(a.num()) || !ok(a.den()) {
            return None;
        }
        Some(a.map_exponents(self.nsyms(), |e| e.iter().zip(&div).map(|(x, d)| x / d).collect()))
    }

    /// The unique p-th root, in the smallest tower above self containing it.
    pub fn pth_root(&self, a: &TowerElement) -> (TowerField, TowerElement) {
        let p = self.p;
        let n = self.nsyms();
        let mut raise = vec![false; n];
        for f in [a.num(), a.den()] {
            for (e, _) in f.terms() {
                for i in 0..n {
                    if e[i] % p != 0 {
                        raise[i] = true;
                    }
                }
            }
        }
        let levels: Vec<u32> = (0..n).map(|i| self.levels[i] + raise[i] as u32).collect();
        let field = self.with_levels(levels);
        let root = a.map_exponents(n, |e| {
            e.iter().enumerate().map(|(i, &x)| if raise[i] { x } else { x / p }).collect()
        });
        (field, root)
    }

    /// The p-th root if it lies in this field.
    pub fn pth_root_within(&self, a: &TowerElement) -> Option<TowerElement> {
        a.frobenius_root()
    }

    /// Display name of symbol i, e.g. `s^(1/2)`.
    pub fn symbol_name(&self, i: usize) -> String {
        render_power(&self.params[i], 1, self.p.pow(self.levels[i]))
    }

    pub fn render(&self, a: &TowerElement) -> String {
        let n = self.render_poly(a.num());
        if a.den().is_one() {
            return n;
        }
        let d = self.render_poly(a.den());
        let n = if a.num().terms().len() > 1 { format!("({n})") } else { n };
        let d = if a.den().terms().len() > 1 || !a.den().is_monomial() { format!("({d})") } else { d };
        let d = if d.contains('*') && !d.starts_with('(') { format!("({d})") } else { d };
        format!("{n}/{d}")
    }

    pub fn render_poly(&self, f: &FpPoly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = Vec::new();
        for (e, c) in f.terms() {
            let mut parts = Vec::new();
            if *c != 1 || e.iter().all(|&k| k == 0) {
                parts.push(c.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    parts.push(render_power(&self.params[i], k, self.p.pow(self.levels[i])));
                }
            }
            out.push(parts.join("*"));
        }
        out.join(" + ")
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

fn render_power(name: &str, num: u32, den: u32) -> String {
    let g = gcd_u32(num, den);
    let (a, b) = (num / g, den / g);
    match (a, b) {
        (1, 1) => name.to_string(),
        (a, 1) => format!("{name}^{a}"),
        (a, b) => format!("{name}^({a}/{b})"),
    }
}

impl fmt::Display for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nsyms()).map(|i| self.symbol_name(i)).collect();
        write!(f, "F_{}({})", self.p, names.join(", "))
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(mat: &mut [Vec<TowerElement>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = mat[r][c].inv().unwrap();
        for j in c..cols {
            mat[r][j] = mat[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in c..cols {
                    if !mat[r][j].is_zero() {
                        mat[i][j] = mat[i][j].sub(&f.mul(&mat[r][j]));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mat: &[Vec<TowerElement>]) -> usize {
    let mut m = mat.to_vec();
    rref(&mut m).len()
}

/// Basis of the right kernel {v : M v = 0}; `cols` is needed when M has no rows.
pub fn kernel(mat: &[Vec<TowerElement>], cols: usize, field: &TowerField) -> Vec<Vec<TowerElement>> {
    let mut m = mat.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m) };
    let mut out = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m[r][free].neg();
        }
        out.push(v);
    }
    out
}

/// A derivation sum_i a_i d/du_i of a tower field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDerivation {
    pub coeffs: Vec<TowerElement>,
}

impl FieldDerivation {
    /// The coordinate derivation d/du_i.
    pub fn coordinate(field: &TowerField, i: usize) -> Self {
        let mut coeffs = vec![field.zero(); field.nsyms()];
        coeffs[i] = field.one();
        FieldDerivation { coeffs }
    }

    pub fn apply(&self, a: &TowerElement) -> TowerElement {
        let mut acc = a.zero_like();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&a.partial(i)));
            }
        }
        acc
    }

    /// Whether the derivation vanishes on the subfield `base` of `field`.
    pub fn kills(&self, field: &TowerField, base: &TowerField) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || field.levels()[i] > base.levels()[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// An intermediate field base ⊆ L′ ⊆ L with L/base of height one.
#[derive(Clone, Debug)]
pub struct Subextension {
    pub ambient: TowerField,
    pub base: TowerField,
    /// Basis of L′ over base, in echelon form.
    pub basis: Vec<TowerElement>,
    /// Generators of L′ over base, smallest degree first.
    pub generators: Vec<TowerElement>,
    /// The derivations whose common constants define L′.
    pub derivations: Vec<FieldDerivation>,
    /// [L′ : base] = p^degree_exponent.
    pub degree_exponent: u32,
}

impl Subextension {
    /// Whether an element of the ambient field lies in L′.
    pub fn contains(&self, a: &TowerElement) -> bool {
        self.derivations.iter().all(|d| d.apply(a).is_zero())
    }

    /// When L′ is itself a tower field, that field.
    pub fn as_tower(&self) -> Option<TowerField> {
        let mut levels = self.base.levels().to_vec();
        for g in &self.generators {
            let (e, c) = match g.num().terms() {
                [t] if g.den().is_one() => t,
                _ => return None,
            };
            if *c == 0 {
                return None;
            }
            let nz: Vec<usize> = (0..e.len()).filter(|&i| e[i] != 0).collect();
            if nz.len() != 1 || e[nz[0]] != 1 {
                return None;
            }
            levels[nz[0]] = self.ambient.levels()[nz[0]];
        }
        let t = self.base.with_levels(levels);
        if t.degree_exponent_over(&self.base) == Some(self.degree_exponent) {
            Some(t)
        } else {
            None
        }
    }

    pub fn render_generators(&self) -> Vec<String> {
        self.generators.iter().map(|g| self.ambient.render(g)).collect()
    }
}

/// Monomials u^a with 0 <= a_i < p on the raised symbols, smallest degree first.
fn p_basis(field: &TowerField, raised: &[usize]) -> Vec<Vec<u32>> {
    let p = field.p();
    let n = field.nsyms();
    let mut out: Vec<Vec<u32>> = vec![vec![0; n]];
    for &i in raised {
        let mut next = Vec::new();
        for e in &out {
            for k in 0..p {
                let mut e2 = e.clone();
                e2[i] = k;
                next.push(e2);
            }
        }
        out = next;
    }
    out.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    out
}

/// Coordinates of `a` in the basis `basis` of L over base (height one).
/// Coordinates are elements of base written in L's representation.
pub fn p_coordinates(field: &TowerField, raised: &[usize], basis: &[Vec<u32>], a: &TowerElement) -> Vec<TowerElement> {
    let p = field.p();
    let n = field.nsyms();
    let den_p = a.den().pow(p as u64);
    let num = a.num().mul(&a.den().pow(p as u64 - 1));
    let mut buckets: Vec<Vec<(Vec<u32>, u32)>> = vec![Vec::new(); basis.len()];
    for (e, c) in num.terms() {
        let mut key = vec![0; n];
        for &i in raised {
            key[i] = e[i] % p;
        }
        let idx = basis.iter().position(|b| *b == key).expect("basis covers residues");
        let e2: Vec<u32> = e.iter().zip(&key).map(|(x, k)| x - k).collect();
        buckets[idx].push((e2, *c));
    }
    buckets
        .into_iter()
        .map(|t| TowerElement::fraction(FpPoly::from_terms(p, n, t), den_p.clone()))
        .collect()
}

/// Common constants of `ders` in L, presented over `base`.
pub fn constants_subfield(l: &TowerField, base: &TowerField, ders: &[FieldDerivation]) -> Result<Subextension> {
    if !l.contains(base) {
        return Err(Error::Precondition(format!("{base} is not a subfield of {l}")));
    }
    if l.levels().iter().zip(base.levels()).any(|(a, b)| a - b > 1) {
        return Err(Error::Precondition("extension is not of height one".into()));
    }
    for d in ders {
        if !d.kills(l, base) {
            return Err(Error::Precondition("derivation does not vanish on the base field".into()));
        }
    }
    let raised = l.raised_over(base);
    let basis = p_basis(l, &raised);
    let nb = basis.len();
    let mut rows: Vec<Vec<TowerElement>> = Vec::new();
    for d in ders {
        let images: Vec<Vec<TowerElement>> = basis
            .iter()
            .map(|e| p_coordinates(l, &raised, &basis, &d.apply(&l.monomial(e.clone()))))
            .collect();
        for b in 0..nb {
            rows.push((0..nb).map(|a| images[a][b].clone()).collect());
        }
    }
    let mut kern = kernel(&rows, nb, l);
    // Echelonise from the top-degree end so each vector has a distinct
    // largest basis monomial; the smallest such come first.
    let mut rev: Vec<Vec<TowerElement>> = kern.iter().map(|v| v.iter().rev().cloned().collect()).collect();
    if !rev.is_empty() {
        rref(&mut rev);
    }
    kern = rev.into_iter().map(|v| v.into_iter().rev().collect()).collect();
    kern.sort_by_key(|v| v.iter().rposition(|c| !c.is_zero()).unwrap_or(0));
    let elems: Vec<TowerElement> = kern
        .iter()
        .map(|v| {
            v.iter()
                .zip(&basis)
                .fold(l.zero(), |acc, (c, e)| acc.add(&c.mul(&l.monomial(e.clone()))))
        })
        .collect();
    let dim = elems.len();
    let degree_exponent = (0..=raised.len() as u32).find(|k| l.p().pow(*k) as usize == dim).ok_or_else(|| {
        Error::Consistency(format!("constants have dimension {dim}, not a power of p"))
    })?;
    let mut generators: Vec<TowerElement> = Vec::new();
    let mut span_dim = 1;
    for g in &elems {
        if span_dim == dim {
            break;
        }
        if g.as_fp().is_some() {
            continue;
        }
        let mut trial = generators.clone();
        trial.push(g.clone());
        let d = generated_dimension(l, &raised, &basis, &trial);
        if d > span_dim {
            span_dim = d;
            generators = trial;
        }
    }
    Ok(Subextension {
        ambient: l.clone(),
        base: base.clone(),
        basis: elems,
        generators,
        derivations: ders.to_vec(),
        degree_exponent,
    })
}

/// Dimension over base of base(g_1, ..., g_k).
fn generated_dimension(l: &TowerField, raised: &[usize], basis: &[Vec<u32>], gens: &[TowerElement]) -> usize {
    let p = l.p() as usize;
    let mut prods = vec![l.one()];
    for g in gens {
        let mut next = Vec::with_capacity(prods.len() * p);
        for q in &prods {
            let mut acc = q.clone();
            for _ in 0..p {
                next.push(acc.clone());
                acc = acc.mul(g);
            }
        }
        prods = next;
    }
    let mat: Vec<Vec<TowerElement>> = prods.iter().map(|q| p_coordinates(l, raised, basis, q)).collect();
    rank(&mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, levels: Vec<u32>) -> TowerField {
        TowerField::new(p, vec!["s".into(), "t".into()], levels).unwrap()
    }

    #[test]
    fn root_of_monomial_raises_levels() {
        let k = field(3, vec![0, 0]);
        let a = k.param(0).mul(&k.param(1).pow(2));
        let (f, r) = k.pth_root(&a);
        assert_eq!(f.levels(), &[1, 1]);
        assert_eq!(f.render(&r), "s^(1/3)*t^(2/3)");
        assert_eq!(r.pow(3), f.coerce(&a, &k));
    }

    #[test]
    fn root_of_constant_is_itself() {
        let k = field(3, vec![0, 0]);
        let (f, r) = k.pth_root(&k.constant(2));
        assert_eq!(f, k);
        assert_eq!(r, k.constant(2));
    }

    #[test]
    fn root_is_additive() {
        let k = field(2, vec![0, 0]);
        let (f, r) = k.pth_root(&k.param(0).add(&k.param(1)));
        assert_eq!(f.render(&r), "s^(1/2) + t^(1/2)");
    }

    #[test]
    fn fractions_are_canonical() {
        let k = field(5, vec![1, 0]);
        let a = k.symbol(0).add(&k.one());
        let b = k.symbol(1).scale(3);
        let q = a.mul(&b).div(&b.mul(&k.symbol(0))).unwrap();
        let q2 = a.div(&k.symbol(0)).unwrap();
        assert_eq!(q, q2);
        assert_eq!(q.den().lc(), 1);
    }

    #[test]
    fn derivation_quotient_rule() {
        let k = field(5, vec![1, 1]);
        let a = k.symbol(0).add(&k.symbol(1).pow(2));
        let b = k.symbol(0).mul(&k.symbol(1)).add(&k.one());
        let d = FieldDerivation::coordinate(&k, 0);
        let lhs = d.apply(&a.div(&b).unwrap());
        let rhs = d.apply(&a).mul(&b).sub(&a.mul(&d.apply(&b))).div(&b.mul(&b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constants_without_derivations_is_everything() {
        let k = field(2, vec![0, 0]);
        let l = field(2, vec![1, 1]);
        let sub = constants_subfield(&l, &k, &[]).unwrap();
        assert_eq!(sub.degree_exponent, 2);
        assert_eq!(sub.as_tower(), Some(l));
    }

    #[test]
    fn constants_of_all_coordinates_is_base() {
        let k = field(3, vec![0, 0]);
        let l = field(3, vec![1, 1]);
        let ders = vec![FieldDerivation::coordinate(&l, 0), FieldDerivation::coordinate(&l, 1)];
        let sub = constants_subfield(&l, &k, &ders).unwrap();
        assert_eq!(sub.degree_exponent, 0);
        assert!(sub.generators.is_empty());
        assert_eq!(sub.as_tower(), Some(k));
    }

    #[test]
    fn constants_of_one_coordinate() {
        let k = field(2, vec![0, 0]);
        let l = field(2, vec![1, 1]);
        let sub = constants_subfield(&l, &k, &[FieldDerivation::coordinate(&l, 1)]).unwrap();
        assert_eq!(sub.degree_exponent, 1);
        assert_eq!(sub.render_generators(), vec!["s^(1/2)".to_string()]);
        assert_eq!(sub.as_tower(), Some(field(2, vec![1, 0])));
    }

    #[test]
    fn derivation_must_kill_base() {
        let k = field(2, vec![0, 1]);
        let l = field(2, vec![1, 1]);
        let err = constants_subfield(&l, &k, &[FieldDerivation::coordinate(&l, 1)]);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn non_monomial_constants() {
        // d = d/du_0 + d/du_1 kills u_0 + u_1 (p = 2).
        let k = field(2, vec![0, 0]);
        let l = field(2, vec![1, 1]);
        let d = FieldDerivation { coeffs: vec![l.one(), l.one()] };
        let sub = constants_subfield(&l, &k, &[d]).unwrap();
        assert_eq!(sub.degree_exponent, 1);
        assert!(sub.as_tower().is_none());
        assert!(sub.contains(&l.symbol(0).add(&l.symbol(1))));
        assert!(!sub.contains(&l.symbol(0)));
    }
}
