//! Multivariate polynomials over a tower field.

use crate::error::{Error, Result};
use crate::fpoly::{grevlex_cmp, FpPoly};
use crate::tower::{FieldDerivation, TowerElement, TowerField};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

/// Block order with graded reverse lexicographic order inside each block.
/// Earlier blocks dominate, so the first block is eliminated first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    blocks: Vec<Range<usize>>,
}

impl TermOrder {
    pub fn blocks(sizes: &[usize]) -> Self {
        let mut start = 0;
        let mut blocks = Vec::new();
        for &s in sizes {
            blocks.push(start..start + s);
            start += s;
        }
        TermOrder { blocks }
    }

    pub fn grevlex(n: usize) -> Self {
        Self::blocks(&[n])
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn nvars(&self) -> usize {
        self.blocks.last().map(|r| r.end).unwrap_or(0)
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for r in &self.blocks {
            match grevlex_cmp(&a[r.clone()], &b[r.clone()]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: TowerField,
    pub vars: Vec<String>,
    /// Homogeneity blocks (projective factors), as variable index lists.
    pub grading: Vec<Vec<usize>>,
    pub order: TermOrder,
}

pub type Ring = Arc<PolyRing>;

impl PolyRing {
    pub fn new(field: TowerField, vars: Vec<String>, grading: Vec<Vec<usize>>, order: TermOrder) -> Ring {
        assert_eq!(order.nvars(), vars.len());
        Arc::new(PolyRing { field, vars, grading, order })
    }

    /// Coordinate ring of a product of projective spaces.
    pub fn multiprojective(field: TowerField, blocks: &[Vec<String>]) -> Ring {
        let mut vars = Vec::new();
        let mut grading = Vec::new();
        for b in blocks {
            grading.push((vars.len()..vars.len() + b.len()).collect());
            vars.extend(b.iter().cloned());
        }
        let sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        Self::new(field, vars, grading, TermOrder::blocks(&sizes))
    }

    /// Single grevlex block, one grading block.
    pub fn affine(field: TowerField, vars: Vec<String>) -> Ring {
        let n = vars.len();
        Self::new(field, vars, vec![(0..n).collect()], TermOrder::grevlex(n))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_field(&self, field: TowerField) -> Ring {
        Arc::new(PolyRing { field, ..self.clone() })
    }

    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.grading.iter().position(|b| b.contains(&v))
    }
}

pub type Term = (Vec<u32>, TowerElement);

#[derive(Clone)]
pub struct MultiPoly {
    ring: Ring,
    terms: Vec<Term>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Ring, c: TowerElement) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        MultiPoly { ring: ring.clone(), terms: vec![(vec![0; ring.nvars()], c)] }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        MultiPoly { ring: ring.clone(), terms: vec![(e, ring.field.one())] }
    }

    pub fn term(ring: &Ring, exps: Vec<u32>, c: TowerElement) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        MultiPoly { ring: ring.clone(), terms: vec![(exps, c)] }
    }

    pub fn from_terms(ring: &Ring, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| ring.order.cmp(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = last.1.add(&c);
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|t| !t.1.is_zero());
        MultiPoly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&k| k == 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lm(&self) -> Option<&[u32]> {
        self.terms.first().map(|t| t.0.as_slice())
    }

    pub fn lc(&self) -> Option<&TowerElement> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Per-block degrees of a term.
    pub fn term_multidegree(&self, e: &[u32]) -> Vec<u32> {
        self.ring.grading.iter().map(|b| b.iter().map(|&v| e[v]).sum()).collect()
    }

    /// Multidegree when homogeneous in every block.
    pub fn multidegree(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.iter().map(|(e, _)| self.term_multidegree(e));
        let first = it.next()?;
        for d in it {
            if d != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.multidegree().is_some()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.iter().any(|t| t.0[v] > 0)
    }

    pub fn neg(&self) -> Self {
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let ord = &self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match ord.cmp(&self.terms[i].0, &o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&o.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        MultiPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &TowerElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        if c.is_one() {
            return self.clone();
        }
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, d)| (e.clone(), d.mul(c))).collect() }
    }

    pub fn mul_term(&self, exps: &[u32], c: &TowerElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, d)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), d.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ring);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let mut acc = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            acc = acc.add(&o.mul_term(e, c));
        }
        acc
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut r = Self::one(&self.ring);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Partial derivative in a ring variable.
    pub fn derivative(&self, v: usize) -> Self {
        let p = self.ring.field.p();
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
                Some((e2, c.scale(k)))
            })
            .collect();
        Self::from_terms(&self.ring, terms)
    }

    /// Partial derivative in the field symbol u_i, applied to coefficients.
    pub fn symbol_derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.partial(i))).collect();
        Self::from_terms(&self.ring, terms)
    }

    pub fn apply_derivation(&self, d: &FieldDerivation) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), d.apply(c))).collect();
        Self::from_terms(&self.ring, terms)
    }

    /// Same polynomial in a ring with the same variables over a larger field.
    pub fn base_change(&self, ring: &Ring) -> Self {
        debug_assert_eq!(ring.vars, self.ring.vars);
        let from = &self.ring.field;
        let to = &ring.field;
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), to.coerce(c, from))).collect();
        Self::from_terms(ring, terms)
    }

    /// Rewrites in a smaller field when every coefficient lies there.
    pub fn descend(&self, ring: &Ring) -> Option<Self> {
        let from = &self.ring.field;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((e.clone(), from.descend(c, &ring.field)?));
        }
        Some(Self::from_terms(ring, terms))
    }

    /// Moves to another ring: variable `i` goes to `map[i]`, or is set to 1
    /// when `map[i]` is `None`.
    pub fn remap(&self, ring: &Ring, map: &[Option<usize>]) -> Self {
        let n = ring.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0; n];
                for (i, &k) in e.iter().enumerate() {
                    if let Some(j) = map[i] {
                        e2[j] += k;
                    }
                }
                (e2, c.clone())
            })
            .collect();
        Self::from_terms(ring, terms)
    }

    /// Substitutes polynomials (in `ring`) for every variable.
    pub fn substitute(&self, ring: &Ring, images: &[MultiPoly]) -> MultiPoly {
        let mut acc = MultiPoly::zero(ring);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(ring, ring.field.coerce(c, &self.ring.field));
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Multiplies through by the least common denominator so that every
    /// coefficient is a polynomial in the field symbols.
    pub fn clear_denominators(&self) -> MultiPoly {
        let mut l = match self.terms.first() {
            Some(t) => t.1.den().clone(),
            None => return self.clone(),
        };
        for (_, c) in &self.terms[1..] {
            if !c.den().is_one() {
                let g = l.gcd(c.den());
                l = l.mul(&c.den().exact_div(&g).unwrap());
            }
        }
        if l.is_one() {
            return self.clone();
        }
        self.scale(&TowerElement::from_poly(l))
    }

    /// Polynomial over F_p in (ring vars, field symbols) after clearing
    /// denominators; the inverse is [`MultiPoly::from_flat`].
    pub fn to_flat(&self) -> FpPoly {
        let f = self.clear_denominators();
        let n = self.ring.nvars();
        let m = self.ring.field.nsyms();
        let mut terms = Vec::new();
        for (e, c) in &f.terms {
            for (u, k) in c.num().terms() {
                let mut ex = e.clone();
                ex.extend_from_slice(u);
                terms.push((ex, *k));
            }
        }
        FpPoly::from_terms(self.ring.field.p(), n + m, terms)
    }

    pub fn from_flat(ring: &Ring, f: &FpPoly) -> MultiPoly {
        let n = ring.nvars();
        let m = ring.field.nsyms();
        let p = ring.field.p();
        let mut terms = Vec::new();
        for (e, k) in f.terms() {
            let c = TowerElement::from_poly(FpPoly::monomial(p, e[n..n + m].to_vec(), *k));
            terms.push((e[..n].to_vec(), c));
        }
        MultiPoly::from_terms(ring, terms)
    }

    /// Greatest common divisor in L[x], normalised monic.
    pub fn gcd(&self, o: &Self) -> MultiPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let g = self.to_flat().gcd(&o.to_flat());
        MultiPoly::from_flat(&self.ring, &g).monic()
    }

    /// Exact quotient in L[x], or None.
    pub fn exact_div(&self, d: &Self) -> Option<MultiPoly> {
        assert!(!d.is_zero());
        let (de, dc) = (&d.terms[0].0, &d.terms[0].1);
        let inv = dc.inv().unwrap();
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((re, rc)) = r.terms.first().cloned() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let qc = rc.mul(&inv);
            r = r.sub(&d.mul_term(&qe, &qc));
            q.push((qe, qc));
        }
        Some(MultiPoly::from_terms(&self.ring, q))
    }

    /// Root g with g^p = self and coefficients in the same field, if any.
    pub fn pth_root(&self) -> Option<MultiPoly> {
        let p = self.ring.field.p();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e.iter().any(|k| k % p != 0) {
                return None;
            }
            terms.push((e.iter().map(|k| k / p).collect(), c.frobenius_root()?));
        }
        Some(MultiPoly::from_terms(&self.ring, terms))
    }

    pub fn render(&self) -> String {
        render_poly(&self.ring, &self.terms)
    }
}

fn render_poly(ring: &PolyRing, terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let field = &ring.field;
    let mut out = Vec::new();
    for (e, c) in terms {
        let is_const = e.iter().all(|&k| k == 0);
        let mut parts = Vec::new();
        if !c.is_one() || is_const {
            let s = field.render(c);
            if c.as_fp().is_some() || (!s.contains('+') && !s.contains('/')) {
                parts.push(s);
            } else {
                parts.push(format!("({s})"));
            }
        }
        for (i, &k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(ring.vars[i].clone()),
                _ => parts.push(format!("{}^{}", ring.vars[i], k)),
            }
        }
        out.push(parts.join("*"));
    }
    out.join(" + ")
}

// ---------------------------------------------------------------- parser

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

/// Parses the plain-text polynomial grammar, e.g. `s*x^4 + t^2*y^4 + z^4`
/// or `s^(1/2)*x^2`. Rational exponents apply to field parameters only.
pub fn parse_poly(ring: &Ring, text: &str) -> Result<MultiPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, col: self.pos + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(self.ring);
        let mut sign = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = true;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let t = self.product()?;
            acc = if sign { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = acc.mul(&f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.power()?;
                    if !f.is_constant() || f.is_zero() {
                        return Err(self.err("division only by nonzero field elements"));
                    }
                    let c = f.terms[0].1.inv().unwrap();
                    acc = acc.scale(&c);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let (base, param) = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let a = self.number()?;
            self.expect(b'/')?;
            let b = self.number()?;
            self.expect(b')')?;
            let Some(i) = param else {
                return Err(self.err("rational exponents apply to field parameters only"));
            };
            let field = &self.ring.field;
            let scale = (field.p() as u64).pow(field.levels()[i]);
            if b == 0 || (a * scale) % b != 0 {
                return Err(self.err(&format!(
                    "exponent {a}/{b} of {} is not available at level {}",
                    field.params()[i],
                    field.levels()[i]
                )));
            }
            let k = a * scale / b;
            return Ok(MultiPoly::constant(self.ring, field.symbol(i).pow(k)));
        }
        let k = self.number()?;
        if k > 1 << 16 {
            return Err(self.err("exponent too large"));
        }
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<(MultiPoly, Option<usize>)> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok((e, None))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let p = self.ring.field.p() as u64;
                Ok((MultiPoly::constant(self.ring, self.ring.field.constant((n % p) as i64)), None))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(v) = self.ring.var_index(name) {
                    return Ok((MultiPoly::var(self.ring, v), None));
                }
                if let Some(i) = self.ring.field.param_index(name) {
                    return Ok((MultiPoly::constant(self.ring, self.ring.field.param(i)), Some(i)));
                }
                self.pos = start;
                Err(self.err(&format!("unknown symbol '{name}'")))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, levels: Vec<u32>) -> Ring {
        let f = TowerField::new(p, vec!["s".into(), "t".into()], levels).unwrap();
        PolyRing::multiprojective(f, &[vec!["x".into(), "y".into(), "z".into()]])
    }

    #[test]
    fn parse_and_print_round_trip() {
        let r = ring(2, vec![1, 1]);
        for s in ["s^(1/2)*x^2 + t*y^2 + z^2", "x*y + (s + t)*z^2", "(s^(1/2))/(t + 1)*x"] {
            let f = parse_poly(&r, s).unwrap();
            let g = parse_poly(&r, &f.render()).unwrap();
            assert_eq!(f, g, "{s} -> {}", f.render());
        }
    }

    #[test]
    fn parse_rejects_missing_level() {
        let r = ring(2, vec![0, 0]);
        assert!(matches!(parse_poly(&r, "s^(1/2)*x"), Err(Error::Parse { .. })));
        assert!(parse_poly(&r, "x + w").is_err());
    }

    #[test]
    fn pth_root_of_square() {
        let r = ring(2, vec![1, 1]);
        let f = parse_poly(&r, "s*x^4 + t^2*y^4 + z^4").unwrap();
        let g = f.pth_root().unwrap();
        assert_eq!(g, parse_poly(&r, "s^(1/2)*x^2 + t*y^2 + z^2").unwrap());
        assert!(g.pth_root().is_none());
    }

    #[test]
    fn multidegree_and_homogeneity() {
        let f = TowerField::rational(3, vec!["s".into()]).unwrap();
        let r = PolyRing::multiprojective(f, &[vec!["x".into(), "y".into()], vec!["u".into(), "v".into()]]);
        let a = parse_poly(&r, "x^2*u + s*y^2*v").unwrap();
        assert_eq!(a.multidegree(), Some(vec![2, 1]));
        let b = parse_poly(&r, "x^2*u + y*v").unwrap();
        assert!(!b.is_homogeneous());
    }

    #[test]
    fn gcd_over_tower_field() {
        let r = ring(3, vec![1, 0]);
        let a = parse_poly(&r, "(s^(1/3)*x + y)*(x - z)").unwrap();
        let b = parse_poly(&r, "(s^(1/3)*x + y)*(y + t*z)").unwrap();
        let g = a.gcd(&b);
        assert_eq!(g, parse_poly(&r, "s^(1/3)*x + y").unwrap().monic());
    }
}
