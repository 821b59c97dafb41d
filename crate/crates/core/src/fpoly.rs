//! Sparse multivariate polynomials over a prime field F_p.
//!
//! Terms are kept sorted by graded reverse lexicographic order, largest
//! first, with no zero coefficients. This is the coefficient layer used by
//! the tower fields.

use std::cmp::Ordering;
use std::fmt;

pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverse of zero");
    pow_mod(a, (p - 2) as u64, p)
}

/// Graded reverse lexicographic comparison of exponent vectors.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    nvars: usize,
    terms: Vec<(Vec<u32>, u32)>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("u{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl FpPoly {
    pub fn zero(p: u32, nvars: usize) -> Self {
        FpPoly { p, nvars, terms: Vec::new() }
    }

    pub fn constant(p: u32, nvars: usize, c: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero(p, nvars);
        }
        FpPoly { p, nvars, terms: vec![(vec![0; nvars], c)] }
    }

    pub fn one(p: u32, nvars: usize) -> Self {
        Self::constant(p, nvars, 1)
    }

    pub fn var(p: u32, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        FpPoly { p, nvars, terms: vec![(e, 1)] }
    }

    pub fn monomial(p: u32, exps: Vec<u32>, c: u32) -> Self {
        let nvars = exps.len();
        let c = c % p;
        if c == 0 {
            return Self::zero(p, nvars);
        }
        FpPoly { p, nvars, terms: vec![(exps, c)] }
    }

    /// Builds a polynomial from unsorted terms, merging duplicates.
    pub fn from_terms(p: u32, nvars: usize, mut terms: Vec<(Vec<u32>, u32)>) -> Self {
        terms.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
        let mut out: Vec<(Vec<u32>, u32)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            let c = c % p;
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = add_mod(last.1, c, p);
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|t| t.1 != 0);
        FpPoly { p, nvars, terms: out }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.len() {
            0 => Some(0),
            1 if self.terms[0].0.iter().all(|&e| e == 0) => Some(self.terms[0].1),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lc(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn lm(&self) -> Option<&[u32]> {
        self.terms.first().map(|t| t.0.as_slice())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0[v]).max().unwrap_or(0)
    }

    pub fn has_var(&self, v: usize) -> bool {
        self.terms.iter().any(|t| t.0[v] > 0)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        FpPoly {
            p,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), p - c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let p = self.p;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match grevlex_cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = add_mod(self.terms[i].1, other.terms[j].1, p);
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        FpPoly { p, nvars: self.nvars, terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p, self.nvars);
        }
        let p = self.p;
        FpPoly {
            p,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, d)| (e.clone(), mul_mod(*d, c, p))).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &[u32], c: u32) -> Self {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p, self.nvars);
        }
        let p = self.p;
        FpPoly {
            p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, d)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), mul_mod(*d, c, p)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p, self.nvars);
        }
        if other.terms.len() == 1 {
            return self.mul_monomial(&other.terms[0].0, other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_monomial(&self.terms[0].0, self.terms[0].1);
        }
        let p = self.p;
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                acc.push((ea.iter().zip(eb).map(|(a, b)| a + b).collect(), mul_mod(*ca, *cb, p)));
            }
        }
        Self::from_terms(p, self.nvars, acc)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut r = Self::one(self.p, self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Self {
        let p = self.p;
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let k = e[v] % p;
                if k == 0 {
                    return None;
                }
                let mut e2 = e.clone();
                e2[v] -= 1;
                Some((e2, mul_mod(*c, k, p)))
            })
            .collect();
        Self::from_terms(p, self.nvars, terms)
    }

    /// Rewrites every exponent vector; the map must be injective.
    pub fn map_exponents(&self, nvars: usize, f: impl Fn(&[u32]) -> Vec<u32>) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (f(e), *c)).collect();
        Self::from_terms(self.p, nvars, terms)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Vec<u32> {
        let mut m = match self.terms.first() {
            Some(t) => t.0.clone(),
            None => return vec![0; self.nvars],
        };
        for (e, _) in &self.terms[1..] {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn div_monomial(&self, exps: &[u32]) -> Self {
        FpPoly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a - b).collect(), *c))
                .collect(),
        }
    }

    /// Coefficients with respect to `v`: entry k is the coefficient of v^k.
    pub fn coeffs_in(&self, v: usize) -> Vec<FpPoly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, u32)>> = vec![Vec::new(); d + 1];
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            let mut e2 = e.clone();
            e2[v] = 0;
            buckets[k].push((e2, *c));
        }
        buckets
            .into_iter()
            .map(|t| FpPoly { p: self.p, nvars: self.nvars, terms: t })
            .collect()
    }

    fn coeff_in(&self, v: usize, k: u32) -> FpPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[v] == k)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[v] = 0;
                (e2, *c)
            })
            .collect();
        FpPoly { p: self.p, nvars: self.nvars, terms }
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if d.terms.len() == 1 {
            let (de, dc) = &d.terms[0];
            let inv = inv_mod(*dc, self.p);
            let mut terms = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                if e.iter().zip(de).any(|(a, b)| a < b) {
                    return None;
                }
                terms.push((e.iter().zip(de).map(|(a, b)| a - b).collect(), mul_mod(*c, inv, self.p)));
            }
            return Some(FpPoly { p: self.p, nvars: self.nvars, terms });
        }
        let p = self.p;
        let (de, dc) = &d.terms[0];
        let inv = inv_mod(*dc, p);
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((re, rc)) = r.terms.first().cloned() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let qc = mul_mod(rc, inv, p);
            r = r.sub(&d.mul_monomial(&qe, qc));
            q.push((qe, qc));
        }
        Some(Self::from_terms(p, self.nvars, q))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        if lc == 1 {
            return self.clone();
        }
        self.scale(inv_mod(lc, self.p))
    }

    /// The p-th root when every exponent is divisible by p.
    pub fn frobenius_root(&self) -> Option<Self> {
        let p = self.p;
        if self.terms.iter().any(|(e, _)| e.iter().any(|&k| k % p != 0)) {
            return None;
        }
        Some(self.map_exponents(self.nvars, |e| e.iter().map(|&k| k / p).collect()))
    }

    /// Greatest common divisor, normalised to leading coefficient one.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return Self::one(self.p, self.nvars);
        }
        let ma = self.min_exponents();
        let mb = other.min_exponents();
        let mg: Vec<u32> = ma.iter().zip(&mb).map(|(a, b)| *a.min(b)).collect();
        let a = self.div_monomial(&ma);
        let b = other.div_monomial(&mb);
        let g = gcd_no_monomial(&a, &b);
        g.mul_monomial(&mg, 1).monic()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let mut parts = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if *c != 1 || is_const {
                parts.push(c.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(names[v].clone()),
                    _ => parts.push(format!("{}^{}", names[v], k)),
                }
            }
            s.push_str(&parts.join("*"));
        }
        s
    }
}

fn highest_var(a: &FpPoly) -> Option<usize> {
    (0..a.nvars).rev().find(|&v| a.has_var(v))
}

fn content_in(a: &FpPoly, v: usize) -> FpPoly {
    let mut g = FpPoly::zero(a.p, a.nvars);
    for c in a.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(&c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn prem(f: &FpPoly, g: &FpPoly, v: usize) -> FpPoly {
    let dg = g.degree_in(v);
    let lcg = g.coeff_in(v, dg);
    let mut r = f.clone();
    while !r.is_zero() && r.has_var(v) && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lcr = r.coeff_in(v, dr);
        let mut shift = vec![0; f.nvars];
        shift[v] = dr - dg;
        r = r.mul(&lcg).sub(&g.mul(&lcr).mul_monomial(&shift, 1));
    }
    r
}

fn primitive_part(a: &FpPoly, v: usize) -> FpPoly {
    let c = content_in(a, v);
    a.exact_div(&c).expect("content divides")
}

fn gcd_no_monomial(a: &FpPoly, b: &FpPoly) -> FpPoly {
    let one = FpPoly::one(a.p, a.nvars);
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return one;
    }
    if a.monic() == b.monic() {
        return a.monic();
    }
    let v = highest_var(a).max(highest_var(b)).expect("nonconstant");
    if !a.has_var(v) {
        return a.gcd(&content_in(b, v));
    }
    if !b.has_var(v) {
        return b.gcd(&content_in(a, v));
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = ca.gcd(&cb);
    let mut f = a.exact_div(&ca).expect("content divides");
    let mut g = b.exact_div(&cb).expect("content divides");
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if !r.has_var(v) {
            return c;
        }
        f = g;
        g = primitive_part(&r, v);
    }
    c.mul(&g).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> FpPoly {
        FpPoly::var(5, 3, i)
    }

    #[test]
    fn inverse_mod_prime() {
        for p in [2u32, 3, 5, 7, 13] {
            for a in 1..p {
                assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let a = x(0).add(&x(1).scale(3));
        let b = a.pow(5);
        let c = x(0).pow(5).add(&x(1).pow(5).scale(3));
        assert_eq!(b, c);
        assert_eq!(b.frobenius_root().unwrap(), a);
    }

    #[test]
    fn gcd_of_products() {
        let f = x(0).add(&x(1)).add(&FpPoly::one(5, 3));
        let g = x(0).mul(&x(2)).sub(&x(1));
        let h = x(2).add(&FpPoly::constant(5, 3, 2));
        let a = f.mul(&g).mul(&x(0));
        let b = f.mul(&h).mul(&x(0)).mul(&x(1));
        assert_eq!(a.gcd(&b), f.mul(&x(0)).monic());
        assert!(g.gcd(&h).is_one());
    }

    #[test]
    fn exact_division() {
        let f = x(0).add(&x(1));
        let g = x(0).sub(&x(2));
        let fg = f.mul(&g);
        assert_eq!(fg.exact_div(&g).unwrap(), f);
        assert!(f.exact_div(&g).is_none());
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let f = x(0).pow(5).mul(&x(1));
        assert_eq!(f.derivative(0), FpPoly::zero(5, 3));
        assert_eq!(f.derivative(1), x(0).pow(5));
    }
}
