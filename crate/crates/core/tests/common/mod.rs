//! Input builders and an independent reducedness oracle shared by the
//! integration tests.
#![allow(dead_code)]

use insep_core::fpoly::FpPoly;
use insep_core::poly::MultiPoly;
use insep_core::tower::{p_coordinates, rank, TowerElement, TowerField};

pub fn fermat_input(p: u32, m: u32, n: u32) -> String {
    let q = p.pow(m);
    let params: Vec<String> = (0..=n).map(|i| format!("\"s{i}\"")).collect();
    let vars: Vec<String> = (0..=n + 1).map(|i| format!("\"x{i}\"")).collect();
    let mut terms: Vec<String> = (0..=n).map(|i| format!("s{i}*x{i}^{q}")).collect();
    terms.push(format!("x{}^{q}", n + 1));
    format!(
        "[field]\np = {p}\nparams = [{}]\n\n[ambient]\nblocks = [[{}]]\n\n[scheme]\ngenerators = [\"{}\"]\n\n[base_change]\nraise = [{}]\n",
        params.join(", "),
        vars.join(", "),
        terms.join(" + "),
        params.join(", ")
    )
}

pub fn fibration_input(p: u32, m: u32, n: u32) -> String {
    let q = p.pow(m);
    let qn = p.pow(n);
    format!(
        "[field]\np = {p}\nparams = [\"s\", \"t\"]\n\n[ambient]\nblocks = [[\"x\", \"y\", \"z\"], [\"u\", \"v\", \"w\"]]\n\n[scheme]\ngenerators = [\"s*x^{q} + t*y^{q} + z^{q}\", \"x*u^{qn} + y*v^{qn} + z*w^{qn}\"]\n\n[base_change]\nraise = [\"s\", \"t\"]\n"
    )
}

pub fn product_input(p: u32, m: u32, n: u32) -> String {
    let q = p.pow(m);
    let qn = p.pow(n);
    format!(
        "[field]\np = {p}\nparams = [\"r\", \"s\", \"t\"]\n\n[ambient]\nblocks = [[\"x\", \"y\", \"z\"], [\"u\", \"v\", \"w\"]]\n\n[scheme]\ngenerators = [\"s*x^{q} + t*y^{q} + z^{q}\", \"r*u^{qn} + s*v^{qn} + w^{qn}\"]\n\n[base_change]\nraise = [\"s\", \"t\"]\n"
    )
}

pub fn essential_input(p: u32) -> String {
    let d = p * p;
    format!(
        "[field]\np = {p}\nparams = [\"s\", \"t\"]\n\n[ambient]\nblocks = [[\"x\", \"y\", \"z\"]]\n\n[scheme]\ngenerators = [\"s*x^{d} + t^{p}*y^{d} + z^{d}\"]\n\n[base_change]\nraise = [\"s\", \"t\"]\n"
    )
}

// ------------------------------------------------------------ univariate

/// Dense univariate polynomial over a tower field, low degree first.
#[derive(Clone, Debug)]
pub struct Uni {
    pub c: Vec<TowerElement>,
}

impl Uni {
    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(|a| a.is_zero()) {
            self.c.pop();
        }
        self
    }

    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() { None } else { Some(self.c.len() - 1) }
    }

    pub fn monic(&self) -> Self {
        let inv = self.c.last().unwrap().inv().unwrap();
        Uni { c: self.c.iter().map(|a| a.mul(&inv)).collect() }
    }

    pub fn rem(&self, b: &Uni) -> Uni {
        let mut r = self.clone().trim();
        let db = b.deg().expect("division by zero");
        let lead_inv = b.c[db].inv().unwrap();
        while let Some(dr) = r.deg() {
            if dr < db {
                break;
            }
            let f = r.c[dr].mul(&lead_inv);
            for i in 0..=db {
                r.c[dr - db + i] = r.c[dr - db + i].sub(&f.mul(&b.c[i]));
            }
            r = r.trim();
        }
        r
    }

    pub fn gcd(&self, b: &Uni) -> Uni {
        let (mut a, mut b) = (self.clone().trim(), b.clone().trim());
        while b.deg().is_some() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.deg().is_some() { a.monic() } else { a }
    }
}

/// Whether F[w]/(h) is reduced, for h monic of degree n over a tower field F:
/// a ↦ a^p must be injective. Writing the coordinates of w^{ip} mod h in a
/// p-basis of F over F^p turns this into the rank of an F-linear system.
pub fn artinian_reduced(field: &TowerField, h: &Uni) -> bool {
    let n = h.deg().unwrap();
    if n == 0 {
        return true;
    }
    let p = field.p();
    let all: Vec<usize> = (0..field.nsyms()).collect();
    let mut basis: Vec<Vec<u32>> = vec![vec![0; field.nsyms()]];
    for &i in &all {
        let mut next = Vec::new();
        for e in &basis {
            for k in 0..p {
                let mut e2 = e.clone();
                e2[i] = k;
                next.push(e2);
            }
        }
        basis = next;
    }
    let mut cols: Vec<Vec<Vec<TowerElement>>> = Vec::new(); // [i][j][k]
    for i in 0..n {
        let mut wp = vec![field.zero(); i * p as usize + 1];
        wp[i * p as usize] = field.one();
        let red = Uni { c: wp }.rem(h);
        let mut col = Vec::new();
        for j in 0..n {
            let e = red.c.get(j).cloned().unwrap_or_else(|| field.zero());
            let coords = p_coordinates(field, &all, &basis, &e);
            col.push(coords.into_iter().map(|c| c.frobenius_root().expect("p-th power coordinate")).collect::<Vec<_>>());
        }
        cols.push(col);
    }
    let mut rows = Vec::new();
    for j in 0..n {
        for k in 0..basis.len() {
            rows.push((0..n).map(|i| cols[i][j][k].clone()).collect::<Vec<_>>());
        }
    }
    rank(&rows) == n
}

fn extend(a: &TowerElement, nsyms: usize) -> TowerElement {
    a.map_exponents(nsyms, |e| {
        let mut v = e.to_vec();
        v.resize(nsyms, 0);
        v
    })
}

/// Generic-point reducedness of the plane curve f = 0 over the field `l`
/// (f in a ring with three variables, coefficients already in `l`).
pub fn plane_curve_reduced(f: &MultiPoly, l: &TowerField) -> bool {
    assert_eq!(f.ring().nvars(), 3);
    let p = l.p();
    let m = l.nsyms();
    // Coordinate factors first.
    let mut f = f.clone();
    for v in 0..3 {
        let k = f.terms().iter().map(|(e, _)| e[v]).min().unwrap();
        if k >= 2 {
            return false;
        }
        if k == 1 {
            let mut e = vec![0; 3];
            e[v] = 1;
            f = f.exact_div(&MultiPoly::term(f.ring(), e, l.one())).unwrap();
        }
    }
    if f.is_constant() {
        return true;
    }
    // Dehomogenise at z; y is a variable that occurs, x the other one.
    let yv = if f.terms().iter().any(|(e, _)| e[1] > 0) { 1 } else { 0 };
    let xv = 1 - yv;
    // E = l(x) with x as a new transcendental symbol.
    let mut params = l.params().to_vec();
    params.push("_x".into());
    let mut levels = l.levels().to_vec();
    levels.push(0);
    let e_field = TowerField::new(p, params, levels).unwrap();
    let xs = e_field.symbol(m);
    let dy = f.degree_in(yv) as usize;
    let mut cy = vec![e_field.zero(); dy + 1];
    let mut cx: Vec<Vec<TowerElement>> = vec![vec![l.zero(); f.total_degree() as usize + 1]; dy + 1];
    for (e, a) in f.terms() {
        let t = extend(a, m + 1).mul(&xs.pow(e[xv] as u64));
        cy[e[yv] as usize] = cy[e[yv] as usize].add(&t);
        cx[e[yv] as usize][e[xv] as usize] = cx[e[yv] as usize][e[xv] as usize].add(a);
    }
    let g = Uni { c: cy }.trim();
    if !artinian_reduced(&e_field, &g.monic()) {
        return false;
    }
    // Content in x: components x = const.
    let mut content = Uni { c: vec![] };
    for c in cx {
        content = content.gcd(&Uni { c }.trim());
    }
    artinian_reduced(l, &content)
}

/// p-th root of a polynomial over a field when every exponent is divisible
/// by p and every coefficient is a p-th power there.
pub fn naive_root(f: &MultiPoly) -> Option<MultiPoly> {
    let l = &f.ring().field;
    let p = l.p();
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        if e.iter().any(|k| k % p != 0) {
            return None;
        }
        let r = l.pth_root_within(c)?;
        terms.push((e.iter().map(|k| k / p).collect(), r));
    }
    Some(MultiPoly::from_terms(f.ring(), terms))
}

pub fn fp(p: u32, n: usize, terms: Vec<(Vec<u32>, u32)>) -> FpPoly {
    FpPoly::from_terms(p, n, terms)
}

/// Rank over F_p of integer vectors read mod p.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u32) -> usize {
    let p = p as i64;
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|k| (k * m[rank][c]) % p == 1).unwrap();
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..ncols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Field of definition of a principal ideal (g) over `base`: the extension
/// generated by the coefficients of the monic generator. Only monomial
/// coefficients are handled. Returns the levels of the field when it is
/// spanned by whole symbols, and the exponent of its degree over `base`.
pub fn definition_field(g: &MultiPoly, base: &TowerField) -> (Option<Vec<u32>>, u32) {
    let l = &g.ring().field;
    let p = l.p();
    let raised = l.raised_over(base);
    let mut rows = Vec::new();
    for (_, c) in g.monic().terms() {
        assert!(c.num().is_monomial() && c.den().is_monomial(), "non-monomial coefficient");
        let en = c.num().lm().unwrap();
        let ed = c.den().lm().unwrap();
        rows.push(raised.iter().map(|&i| en[i] as i64 - ed[i] as i64).collect::<Vec<_>>());
    }
    let r = rank_mod_p(&rows, p);
    let support: Vec<usize> = (0..raised.len()).filter(|&j| rows.iter().any(|row| row[j].rem_euclid(p as i64) != 0)).collect();
    let levels = (support.len() == r).then(|| {
        let mut lv = base.levels().to_vec();
        for j in support {
            lv[raised[j]] += 1;
        }
        lv
    });
    (levels, r as u32)
}
