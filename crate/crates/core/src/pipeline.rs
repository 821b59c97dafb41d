//! Conormal presentation, the fixed and movable parts, the essential part of
//! a base change, the canonical bundle formula and the fibration.

use crate::error::{Error, Result};
use crate::geometry::{
    base_change, generically_smooth, pth_root_closure, reduce_structure, BaseChangeSpec, Cert, Closure, ClosureStatus,
    DivisorClass, PrimeDivisor, ReductionCertificate, SchemeDesc,
};
use crate::ideal::IdealHandle;
use crate::module::{split_content, subsets, top_minor_sections, ChartRing, Matrix, PresentedModule, Submodule};
use crate::poly::MultiPoly;
use crate::tower::{constants_subfield, kernel, FieldDerivation, Subextension, TowerField};

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub degree_bound: Option<u32>,
    /// Chart used for chart-level checks; defaults to the primary chart.
    pub chart: Option<usize>,
}

/// Twice the largest generator degree.
pub fn default_degree_bound(x: &SchemeDesc) -> u32 {
    2 * x.gens().iter().map(|g| g.total_degree()).max().unwrap_or(1)
}

/// Presentation of Ω over X by the adjoined symbols.
#[derive(Clone, Debug)]
pub struct ConormalData {
    /// Indices of the adjoined symbols.
    pub symbols: Vec<usize>,
    pub labels: Vec<String>,
    /// rows = symbols, columns = generators, entries ∂f_j/∂u_i.
    pub relations: Matrix,
    /// Generic rank of Ω.
    pub rank: usize,
}

impl ConormalData {
    pub fn d(&self) -> usize {
        self.symbols.len()
    }

    /// The presentation restricted to a chart.
    pub fn chart_module(&self, s: &SchemeDesc, chart: &crate::geometry::Chart) -> Result<PresentedModule> {
        let rel: Matrix = self.relations.iter().map(|row| row.iter().map(|e| chart.restrict(e)).collect()).collect();
        PresentedModule::new(ChartRing { label: chart.label.clone(), ideal: s.chart_ideal(chart) }, self.labels.clone(), rel)
    }
}

pub fn omega_presentation(z: &SchemeDesc, x: &SchemeDesc) -> Result<ConormalData> {
    if !z.flags.reduced.is_certified() {
        return Err(Error::Precondition("the scheme is not certified reduced".into()));
    }
    if !x.flags.complete_intersection {
        return Err(Error::Unsupported("the input is not a complete intersection".into()));
    }
    let (symbols, relations) = crate::geometry::relation_matrix(z, x.field());
    let labels = symbols.iter().map(|&i| format!("d({})", z.field().symbol_name(i))).collect();
    let rank = symbols.len() - crate::module::generic_rank(&z.ideal, &relations)?;
    Ok(ConormalData { symbols, labels, relations, rank })
}

#[derive(Clone, Debug)]
pub struct FixedComponent {
    pub prime: PrimeDivisor,
    pub multiplicity: u32,
    /// Chart on which the module-theoretic length was computed.
    pub chart: String,
}

#[derive(Clone, Debug)]
pub struct LinearSystemData {
    pub fixed: Vec<FixedComponent>,
    pub fixed_class: DivisorClass,
    pub fixed_certified: bool,
    /// Primitive sections, each monic; empty when 𝔐 = 0.
    pub movable: Vec<MultiPoly>,
    pub movable_class: DivisorClass,
    pub total_class: DivisorClass,
    pub conductor_candidates: Vec<PrimeDivisor>,
}

impl LinearSystemData {
    pub fn movable_is_zero(&self) -> bool {
        self.movable.is_empty()
    }

    pub fn fixed_is_zero(&self) -> bool {
        self.fixed.is_empty()
    }
}

/// Primitive top-minor sections of the conormal matrix. Empty when they
/// reduce to a single constant.
pub fn movable_sections(s: &SchemeDesc, cd: &ConormalData) -> Result<Vec<MultiPoly>> {
    if cd.d() == 0 || cd.rank == 0 {
        return Ok(Vec::new());
    }
    let tm = top_minor_sections(&s.ideal, &cd.relations, cd.rank)?;
    if tm.sections.iter().filter(|f| !f.is_zero()).all(|f| f.is_constant()) {
        return Ok(Vec::new());
    }
    Ok(tm.sections)
}

/// Nonzero sections in decreasing term order, each made monic.
fn normalise_sections(mut v: Vec<MultiPoly>) -> Vec<MultiPoly> {
    v.retain(|f| !f.is_zero());
    v.sort_by(|a, b| {
        let ord = &a.ring().order;
        ord.cmp(b.lm().unwrap(), a.lm().unwrap()).then_with(|| b.terms().len().cmp(&a.terms().len()))
    });
    v.iter().map(|f| f.monic()).collect()
}

fn proportional(ideal: &IdealHandle, a: &[MultiPoly], b: &[MultiPoly]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let c = a[i].mul(&b[j]).sub(&a[j].mul(&b[i]));
            if !ideal.contains(&c)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Plücker coordinates (r-subsets of the ambient basis, lex order) of a
/// submodule of generic rank r.
pub fn plucker_vector(m: &Submodule, r: usize) -> Result<Option<Vec<MultiPoly>>> {
    let ring = m.chart.ring();
    let n = m.rank_ambient;
    let ks = subsets(n, r);
    for gs in subsets(m.gens.len(), r) {
        let v: Vec<MultiPoly> = ks
            .iter()
            .map(|k| {
                let mat: Vec<Vec<MultiPoly>> =
                    gs.iter().map(|&g| k.iter().map(|&c| m.gens[g][c].clone()).collect()).collect();
                crate::module::det(ring, &mat)
            })
            .collect();
        let mut nonzero = false;
        for f in &v {
            if !m.chart.ideal.contains(f)? {
                nonzero = true;
                break;
            }
        }
        if nonzero {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn chart_for(s: &SchemeDesc, opts: &Options) -> Result<crate::geometry::Chart> {
    let charts = s.nonempty_charts()?;
    if let Some(c) = opts.chart {
        return charts
            .into_iter()
            .find(|(ch, _)| ch.index == c)
            .map(|(ch, _)| ch)
            .ok_or_else(|| Error::InvalidArgument(format!("chart {c} does not meet the scheme")));
    }
    charts.into_iter().next().map(|(c, _)| c).ok_or_else(|| Error::Validation("the scheme is empty".into()))
}

/// The decomposition 𝔠 = 𝔉 + 𝔐.
pub fn decompose(
    z: &SchemeDesc,
    cz: &ConormalData,
    closure: &Closure,
    cy: &ConormalData,
    opts: &Options,
) -> Result<LinearSystemData> {
    let y = &closure.y;
    let nb = z.nblocks();
    let movable = movable_sections(z, cz)?;
    let movable_class = match movable.iter().find(|f| !f.is_zero()) {
        Some(f) => DivisorClass::from_degrees(&f.multidegree().unwrap()),
        None => DivisorClass::zero(nb),
    };
    // Plücker consistency: the sections agree with the Plücker coordinates
    // of the dual of Ω on a chart.
    if !movable.is_empty() {
        let chart = chart_for(z, opts)?;
        let m = cz.chart_module(z, &chart)?;
        let dual = m.dual()?;
        let pv = plucker_vector(&dual, cz.rank)?
            .ok_or_else(|| Error::Consistency("the dual has smaller rank than Ω".into()))?;
        let sec: Vec<MultiPoly> = movable.iter().map(|f| chart.restrict(f)).collect();
        if !proportional(&m.chart.ideal, &pv, &sec)? {
            return Err(Error::Consistency(format!("minor sections and dual Plücker coordinates differ on chart {}", chart.label)));
        }
    }
    let by_subset = movable.clone();
    let movable = normalise_sections(movable);

    let mut fixed = Vec::new();
    if cy.d() > 0 {
        if cy.rank != cz.rank {
            return Err(Error::Consistency(format!("Ω has rank {} on Z but {} on the closure", cz.rank, cy.rank)));
        }
        let pos: Vec<usize> =
            cz.symbols.iter().map(|s| cy.symbols.iter().position(|t| t == s).expect("Z symbols are adjoined on Y")).collect();
        let full = if cy.rank == 0 {
            None
        } else {
            Some(top_minor_sections(&y.ideal, &cy.relations, cy.rank)?)
        };
        let restricted: Vec<MultiPoly> = match &full {
            None => vec![MultiPoly::one(&y.ring)],
            Some(tm) => tm
                .subsets
                .iter()
                .zip(&tm.sections)
                .filter(|(k, _)| k.iter().all(|i| pos.contains(i)))
                .map(|(_, f)| f.clone())
                .collect(),
        };
        let (phi, prim) = split_content(&y.ring, &restricted);
        if phi.is_zero() {
            return Err(Error::Consistency("Plücker coordinates of the closure vanish on the adjoined symbols".into()));
        }
        if !movable.is_empty() {
            let m_y: Vec<MultiPoly> = by_subset.iter().map(|f| f.base_change(&y.ring)).collect();
            if !proportional(&y.ideal, &prim, &m_y)? {
                return Err(Error::Consistency("primitive part of the closure minors differs from the movable part".into()));
            }
        }
        let conductor: Vec<MultiPoly> =
            closure.conductor_candidates.iter().map(|p| p.equation.base_change(&y.ring)).collect();
        let charts = divisor_charts(y, opts)?;
        // Prime divisors of phi on Y. Each must lie over the conductor of Z.
        for pi in crate::geometry::prime_candidates(&phi) {
            let mut over_conductor = true;
            for (chart, yi) in &charts {
                let mut j = yi.with(&[chart.restrict(&pi)]);
                for c in &conductor {
                    let c = chart.restrict(c);
                    if !c.is_constant() {
                        j = j.saturate(&c)?;
                    }
                }
                if !j.is_unit()? {
                    over_conductor = false;
                    break;
                }
            }
            if !over_conductor {
                return Err(Error::Consistency(format!("fixed part has a factor {} outside the conductor", pi.render())));
            }
            let Some((chart, yi)) =
                charts.iter().find(|(ch, yi)| meets_in_codim_one(yi, &ch.restrict(&pi)).unwrap_or(false))
            else {
                continue;
            };
            let k = crate::module::valuation(yi, &chart.restrict(&phi), &chart.restrict(&pi), 64)?;
            if k == 0 {
                continue;
            }
            let (label, len) = fixed_length(cz, y, cy, &pos, &pi, opts)?;
            if len != k {
                return Err(Error::Consistency(format!(
                    "multiplicity of ({} = 0) is {k} from minors but {len} from module lengths",
                    pi.render()
                )));
            }
            let class = DivisorClass::from_degrees(&pi.multidegree().unwrap());
            fixed.push(FixedComponent { prime: PrimeDivisor { equation: pi, class }, multiplicity: k, chart: label });
        }
    }
    let fixed_class = fixed
        .iter()
        .fold(DivisorClass::zero(nb), |acc, c| acc.add(&c.prime.class.scale(c.multiplicity as i64)));
    let total_class = fixed_class.add(&movable_class);
    Ok(LinearSystemData {
        fixed,
        fixed_class,
        fixed_certified: closure.status == ClosureStatus::CertifiedNormal,
        movable,
        movable_class,
        total_class,
        conductor_candidates: closure.conductor_candidates.clone(),
    })
}

fn divisor_charts(y: &SchemeDesc, opts: &Options) -> Result<Vec<(crate::geometry::Chart, IdealHandle)>> {
    let mut charts = y.nonempty_charts()?;
    if let Some(c) = opts.chart {
        charts.sort_by_key(|(ch, _)| if ch.index == c { 0 } else { 1 });
    }
    Ok(charts)
}

fn meets_in_codim_one(yi: &IdealHandle, pi: &MultiPoly) -> Result<bool> {
    if pi.is_constant() {
        return Ok(false);
    }
    Ok(yi.with(&[pi.clone()]).dimension()? + 1 == yi.dimension()?)
}

/// length(ℱ′/ℱ) at the divisor (π = 0) of the closure, through the Plücker
/// valuations of the two dual modules on a chart.
fn fixed_length(
    cz: &ConormalData,
    y: &SchemeDesc,
    cy: &ConormalData,
    pos: &[usize],
    pi: &MultiPoly,
    opts: &Options,
) -> Result<(String, u32)> {
    for (chart, yi) in divisor_charts(y, opts)? {
        let pi_c = chart.restrict(pi);
        if !meets_in_codim_one(&yi, &pi_c)? {
            continue;
        }
        let cr = ChartRing { label: chart.label.clone(), ideal: yi.clone() };
        let fy = cy.chart_module(y, &chart)?.dual()?;
        let proj = Submodule {
            chart: cr.clone(),
            rank_ambient: pos.len(),
            gens: fy.gens.iter().map(|v| pos.iter().map(|&i| v[i].clone()).collect()).collect(),
        };
        let rel: Matrix = cz
            .relations
            .iter()
            .map(|row| row.iter().map(|e| chart.restrict(&e.base_change(&y.ring))).collect())
            .collect();
        let fz = PresentedModule::new(cr, cz.labels.clone(), rel)?.dual()?;
        let v1 = proj.plucker_valuation(&pi_c, 64)?;
        let v2 = fz.plucker_valuation(&pi_c, 64)?;
        return match (v1, v2) {
            (Some(a), Some(b)) if a >= b => Ok((chart.label, a - b)),
            _ => Err(Error::Consistency("ℱ is not contained in ℱ′ at the divisor".into())),
        };
    }
    Err(Error::Consistency(format!("no chart meets ({} = 0) in codimension one", pi.render())))
}

#[derive(Clone, Debug)]
pub struct CbfReport {
    pub canonical_y: DivisorClass,
    pub pullback_canonical_x: DivisorClass,
    pub correction: DivisorClass,
    pub difference: DivisorClass,
    pub pass: bool,
}

/// Checks φ*K_X − K_Y = (p−1)(𝔉 + 𝔐) on multidegrees. Y and X share the
/// ambient coordinates, so the pullback keeps multidegrees.
pub fn verify_cbf(dec: &LinearSystemData, x: &SchemeDesc, y: &SchemeDesc) -> Result<CbfReport> {
    if !x.flags.complete_intersection || !y.flags.complete_intersection {
        return Err(Error::Unsupported("canonical classes need complete intersections".into()));
    }
    let p = x.field().p() as i64;
    let ky = y.canonical_class();
    let kx = x.canonical_class();
    let correction = dec.total_class.scale(p - 1);
    let difference = kx.sub(&ky);
    let pass = difference == correction;
    Ok(CbfReport { canonical_y: ky, pullback_canonical_x: kx, correction, difference, pass })
}

#[derive(Clone, Debug)]
pub struct EssentialPart {
    pub subfield: Subextension,
    /// L′ as a tower field.
    pub field: TowerField,
    /// Basis of the foliation 𝒢.
    pub foliation: Vec<FieldDerivation>,
    /// [L : L′] = p^{dim 𝒢}.
    pub degree: u64,
    /// [L′ : K].
    pub degree_over_base: u64,
    /// Z′ ⊗ L is certified reduced.
    pub reduced_after_base_change: bool,
    /// The vector-field system over L′ has only the zero solution.
    pub no_vector_fields: bool,
}

/// Constant vector fields Σ c_k ∂/∂u_k (c_k ∈ L, u_k adjoined over `base`)
/// preserving the ideal of `z`.
pub fn vector_field_solutions(z: &SchemeDesc, base: &TowerField) -> Result<Vec<FieldDerivation>> {
    let field = z.field();
    let raised = field.raised_over(base);
    let d = raised.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut columns: Vec<Vec<MultiPoly>> = Vec::with_capacity(d);
    for &k in &raised {
        let mut col = Vec::new();
        for g in z.gens() {
            col.push(z.ideal.normal_form(&g.symbol_derivative(k))?);
        }
        columns.push(col);
    }
    let mut keys: Vec<(usize, Vec<u32>)> = Vec::new();
    for col in &columns {
        for (j, f) in col.iter().enumerate() {
            for (e, _) in f.terms() {
                let key = (j, e.clone());
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    }
    let rows: Vec<Vec<_>> = keys
        .iter()
        .map(|(j, e)| {
            columns
                .iter()
                .map(|col| {
                    col[*j].terms().iter().find(|(e2, _)| e2 == e).map(|(_, c)| c.clone()).unwrap_or_else(|| field.zero())
                })
                .collect()
        })
        .collect();
    let ker = kernel(&rows, d, field);
    Ok(ker
        .into_iter()
        .map(|v| {
            let mut coeffs = vec![field.zero(); field.nsyms()];
            for (c, &k) in v.into_iter().zip(&raised) {
                coeffs[k] = c;
            }
            FieldDerivation { coeffs }
        })
        .collect())
}

/// The smallest subextension L′ over which the reduced structure is
/// already defined.
pub fn essential_part(z: &SchemeDesc, x: &SchemeDesc) -> Result<EssentialPart> {
    if !z.flags.reduced.is_certified() {
        return Err(Error::Precondition("the scheme is not certified reduced".into()));
    }
    if !x.global_functions_are_constants() {
        return Err(Error::Precondition("H^0(X, O_X) = K is not established for this input".into()));
    }
    let base = x.field();
    let l = z.field();
    let p = l.p() as u64;
    let foliation = vector_field_solutions(z, base)?;
    let subfield = constants_subfield(l, base, &foliation)?;
    let field = subfield
        .as_tower()
        .ok_or_else(|| Error::EssentialVerification("L′ is not generated by roots of the parameters".into()))?;
    let total = l.raised_over(base).len() as u32;
    if foliation.len() as u32 + subfield.degree_exponent != total {
        return Err(Error::Consistency("[L:L′][L′:K] differs from [L:K]".into()));
    }
    let (zp, _) = reduce_structure(&base_change(x, &field))?;
    let reduced_after_base_change = generically_smooth(&base_change(&zp, l))?;
    let no_vector_fields = vector_field_solutions(&zp, base)?.is_empty();
    if !reduced_after_base_change {
        return Err(Error::EssentialVerification("1.2(1): Z′ ⊗ L is not reduced".into()));
    }
    if !no_vector_fields {
        return Err(Error::EssentialVerification("1.2(3): Z′ still carries vector fields over L′".into()));
    }
    Ok(EssentialPart {
        degree: p.pow(foliation.len() as u32),
        degree_over_base: p.pow(subfield.degree_exponent),
        subfield,
        field,
        foliation,
        reduced_after_base_change,
        no_vector_fields,
    })
}

#[derive(Clone, Debug, Default)]
pub struct FibrationReport {
    pub trivial: bool,
    pub note: String,
    pub sections: Vec<String>,
    pub image_ideal: Vec<String>,
    pub image_dimension: Option<i64>,
    pub v_generators: Vec<String>,
    pub v_dimension: Option<usize>,
    pub v_status: String,
    pub function_field: Option<String>,
    pub fibre_generators: Vec<String>,
    pub w_field: Option<String>,
    /// 𝔐 of the generic fibre over K(W) relative to K(V) vanishes.
    pub movable_over_v_zero: Option<bool>,
    /// The generic fibre stays reduced over K(W).
    pub fibre_reduced_over_w: Option<bool>,
    /// The generic fibre becomes non-reduced over K(V)^{1/p}.
    pub fibre_nonreduced_over_root: Option<bool>,
}

impl FibrationReport {
    pub fn checks_pass(&self) -> bool {
        self.trivial || (self.movable_over_v_zero == Some(true) && self.fibre_reduced_over_w == Some(true))
    }
}

fn eval_fp(f: &crate::fpoly::FpPoly, images: &[crate::tower::TowerElement], target: &TowerField) -> crate::tower::TowerElement {
    let mut acc = target.zero();
    for (e, c) in f.terms() {
        let mut t = target.constant(*c as i64);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                t = t.mul(&images[i].pow(k as u64));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn eval_element(
    a: &crate::tower::TowerElement,
    images: &[crate::tower::TowerElement],
    target: &TowerField,
) -> Result<crate::tower::TowerElement> {
    eval_fp(a.num(), images, target)
        .div(&eval_fp(a.den(), images, target))
        .ok_or_else(|| Error::Unsupported("a coefficient vanishes on the generic point of V".into()))
}

/// The fibration X ⇢ V given by 𝔐.
pub fn fibration(
    dec: &LinearSystemData,
    x: &SchemeDesc,
    z: &SchemeDesc,
    target: &TowerField,
    opts: &Options,
) -> Result<FibrationReport> {
    let mut rep = FibrationReport::default();
    if dec.movable_is_zero() {
        rep.trivial = true;
        rep.note = "no fibration; base change reduced".into();
        return Ok(rep);
    }
    rep.sections = dec.movable.iter().map(|f| f.render()).collect();

    // Image of the 𝔐-map through its graph on a chart.
    let chart = chart_for(z, opts)?;
    let zi = z.chart_ideal(&chart);
    let sec: Vec<MultiPoly> = dec.movable.iter().map(|f| chart.restrict(f)).collect();
    let mut i0 = None;
    for (i, s) in sec.iter().enumerate() {
        if !zi.contains(s)? {
            i0 = Some(i);
            break;
        }
    }
    let i0 = i0.ok_or_else(|| Error::Consistency("every section vanishes on the chart".into()))?;
    let nc = chart.ring.nvars();
    let k = sec.len();
    let mut vars = chart.ring.vars.clone();
    vars.extend((0..k).filter(|&j| j != i0).map(|j| format!("_w{j}")));
    let gr = crate::poly::PolyRing::new(
        z.field().clone(),
        vars,
        vec![(0..nc + k - 1).collect()],
        crate::poly::TermOrder::blocks(&[nc, k - 1].into_iter().filter(|&s| s > 0).collect::<Vec<_>>()),
    );
    let up: Vec<Option<usize>> = (0..nc).map(Some).collect();
    let s0 = sec[i0].remap(&gr, &up);
    let mut gens: Vec<MultiPoly> = zi.gens().iter().map(|g| g.remap(&gr, &up)).collect();
    let mut w = nc;
    for (j, s) in sec.iter().enumerate() {
        if j == i0 {
            continue;
        }
        gens.push(s0.mul(&MultiPoly::var(&gr, w)).sub(&s.remap(&gr, &up)));
        w += 1;
    }
    let graph = IdealHandle::new(&gr, gens).saturate(&s0)?;
    let image = graph.eliminate(&(0..nc).collect::<Vec<_>>())?;
    let image_dim = image.dimension()?;
    rep.image_ideal = image.gb()?.iter().map(|g| g.render()).collect();
    rep.image_dimension = Some(image_dim);
    if image_dim == z.dimension as i64 {
        rep.trivial = true;
        rep.note = "the movable map is generically finite; X = V".into();
        return Ok(rep);
    }

    // V: the projection of X to the factors carrying the sections.
    let used: Vec<usize> = (0..x.nblocks()).filter(|&b| dec.movable_class.0[b] > 0).collect();
    let elim: Vec<usize> = (0..x.ring.nvars()).filter(|v| !used.iter().any(|&b| x.ring.grading[b].contains(v))).collect();
    let iv = x.ideal.eliminate(&elim)?;
    let vring = iv.ring().clone();
    let vgens: Vec<MultiPoly> = iv.gb()?.iter().map(|g| g.clear_denominators()).collect();
    let v_dim = if vgens.is_empty() {
        crate::geometry::ambient_dim(&vring)
    } else {
        SchemeDesc::new(&vring, vgens.clone())?.dimension
    };
    rep.v_generators = vgens.iter().map(|g| g.render()).collect();
    rep.v_dimension = Some(v_dim);
    rep.v_status = "function-field level".into();
    if v_dim == x.dimension {
        rep.trivial = true;
        rep.note = "V = X".into();
        return Ok(rep);
    }
    if vgens.len() > 1 {
        return Err(Error::Unsupported("generic fibre over V needs V to be a hypersurface".into()));
    }

    // K(V): solve the equation of V for a parameter occurring linearly.
    let kf = x.field();
    let p = kf.p();
    let mut pivot = None;
    if let Some(g) = vgens.first() {
        for ti in (0..kf.nsyms()).rev() {
            if kf.levels()[ti] != 0 {
                continue;
            }
            let linear = g.terms().iter().all(|(_, c)| c.den().degree_in(ti) == 0 && c.num().degree_in(ti) <= 1);
            if linear && g.terms().iter().any(|(_, c)| c.num().degree_in(ti) == 1) {
                pivot = Some(ti);
                break;
            }
        }
        if pivot.is_none() {
            return Err(Error::Unsupported("no parameter occurs linearly in the equation of V".into()));
        }
    }
    let (a_poly, b_poly) = match (vgens.first(), pivot) {
        (Some(g), Some(ti)) => {
            let ns = kf.nsyms();
            let mut at = Vec::new();
            let mut bt = Vec::new();
            for (e, c) in g.terms() {
                let mut n1 = Vec::new();
                let mut n0 = Vec::new();
                for (u, k) in c.num().terms() {
                    if u[ti] == 1 {
                        let mut u2 = u.clone();
                        u2[ti] = 0;
                        n1.push((u2, *k));
                    } else {
                        n0.push((u.clone(), *k));
                    }
                }
                let f1 = crate::fpoly::FpPoly::from_terms(p, ns, n1);
                let f0 = crate::fpoly::FpPoly::from_terms(p, ns, n0);
                if !f1.is_zero() {
                    at.push((e.clone(), crate::tower::TowerElement::fraction(f1, c.den().clone())));
                }
                if !f0.is_zero() {
                    bt.push((e.clone(), crate::tower::TowerElement::fraction(f0, c.den().clone())));
                }
            }
            (Some(MultiPoly::from_terms(&vring, at)), Some(MultiPoly::from_terms(&vring, bt)))
        }
        _ => (None, None),
    };
    // Unit coordinate per factor of V: the variable of largest exponent in
    // the leading monomial of the coefficient A.
    let mut units = Vec::new();
    for b in &vring.grading {
        let lm = a_poly.as_ref().and_then(|a| a.lm().map(|e| e.to_vec()));
        let pick = match lm {
            Some(e) => *b.iter().max_by_key(|&&v| (e[v], std::cmp::Reverse(v))).unwrap(),
            None => b[0],
        };
        units.push(pick);
    }
    let mut names = Vec::new();
    let mut levels = Vec::new();
    let mut sym_map = vec![None; kf.nsyms()];
    for i in 0..kf.nsyms() {
        if Some(i) == pivot {
            continue;
        }
        sym_map[i] = Some(names.len());
        names.push(kf.params()[i].clone());
        levels.push(kf.levels()[i]);
    }
    let mut coord_map = vec![None; vring.nvars()];
    for v in 0..vring.nvars() {
        if !units.contains(&v) {
            coord_map[v] = Some(names.len());
            names.push(vring.vars[v].clone());
            levels.push(0);
        }
    }
    let kv = TowerField::new(p, names, levels)?;
    let coord_img: Vec<_> = coord_map.iter().map(|m| m.map_or_else(|| kv.one(), |i| kv.symbol(i))).collect();
    let mut sym_img: Vec<_> = sym_map.iter().map(|m| m.map_or_else(|| kv.zero(), |i| kv.symbol(i))).collect();
    let eval_poly = |f: &MultiPoly, sym_img: &[crate::tower::TowerElement]| -> Result<crate::tower::TowerElement> {
        let mut acc = kv.zero();
        for (e, c) in f.terms() {
            let mut t = eval_element(c, sym_img, &kv)?;
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&coord_img[v].pow(k as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    };
    let mut t_value = None;
    if let (Some(a), Some(b), Some(ti)) = (&a_poly, &b_poly, pivot) {
        let av = eval_poly(a, &sym_img)?;
        let bv = eval_poly(b, &sym_img)?;
        let tv = bv.div(&av).ok_or_else(|| Error::Unsupported("coefficient of the pivot vanishes on V".into()))?.neg();
        sym_img[ti] = tv.clone();
        t_value = Some(tv);
    }
    rep.function_field = Some(match (&t_value, pivot) {
        (Some(tv), Some(ti)) => format!("{kv}, {} = {}", kf.params()[ti], kv.render(tv)),
        _ => kv.to_string(),
    });

    // Generic fibre X_ξ over K(V).
    let rest: Vec<usize> = (0..x.nblocks()).filter(|b| !used.contains(b)).collect();
    let fblocks: Vec<Vec<String>> =
        rest.iter().map(|&b| x.ring.grading[b].iter().map(|&v| x.ring.vars[v].clone()).collect()).collect();
    let fring = crate::poly::PolyRing::multiprojective(kv.clone(), &fblocks);
    let mut fgens = Vec::new();
    for g in x.gens() {
        let mut terms = Vec::new();
        for (e, c) in g.terms() {
            let mut coef = eval_element(c, &sym_img, &kv)?;
            let mut fe = vec![0u32; fring.nvars()];
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = &x.ring.vars[v];
                match fring.var_index(name) {
                    Some(j) => fe[j] += k,
                    None => {
                        let vi = vring.var_index(name).expect("variable of V");
                        coef = coef.mul(&coord_img[vi].pow(k as u64));
                    }
                }
            }
            terms.push((fe, coef));
        }
        let f = MultiPoly::from_terms(&fring, terms);
        if f.is_zero() {
            continue;
        }
        if f.is_constant() {
            return Err(Error::Consistency("the generic fibre is empty".into()));
        }
        fgens.push(f.clear_denominators());
    }
    if fgens.is_empty() {
        return Err(Error::Unsupported("the generic fibre is a whole projective space".into()));
    }
    let xi = SchemeDesc::new(&fring, fgens)?;
    rep.fibre_generators = xi.render_gens();

    // K(W): the parameters raised by the base change, with t replaced by
    // the p-th root of its value on V.
    let raised = target.raised_over(kf);
    let mut wlevels = kv.levels().to_vec();
    for &i in &raised {
        if let Some(j) = sym_map[i] {
            wlevels[j] = target.levels()[i];
        }
    }
    let mut kw = kv.with_levels(wlevels);
    if let (Some(ti), Some(tv)) = (pivot, &t_value) {
        if raised.contains(&ti) {
            let (big, _) = kw.pth_root(&kw.coerce(tv, &kv));
            kw = big;
        }
    }
    rep.w_field = Some(kw.to_string());
    let (zw, cw) = reduce_structure(&base_change(&xi, &kw))?;
    rep.fibre_reduced_over_w = Some(!cw.changed && cw.status.is_certified());
    if cw.status.is_certified() {
        let cd = omega_presentation(&zw, &xi)?;
        rep.movable_over_v_zero = Some(movable_sections(&zw, &cd)?.is_empty());
    }
    let root = kv.with_levels(kv.levels().iter().map(|l| l + 1).collect());
    let (_, cr) = reduce_structure(&base_change(&xi, &root))?;
    rep.fibre_nonreduced_over_root = Some(cr.changed);
    rep.note = "generic fibre over V computed at function-field level".into();
    Ok(rep)
}

/// All stages up to the decomposition for one base change.
#[derive(Clone, Debug)]
pub struct Stages {
    pub bc: BaseChangeSpec,
    pub xl: SchemeDesc,
    pub z: SchemeDesc,
    pub reduction: ReductionCertificate,
    pub closure: Closure,
    pub degree_insep: u64,
    pub conormal: ConormalData,
    pub closure_conormal: ConormalData,
    pub decomposition: LinearSystemData,
}

pub fn reduce_stage(x: &SchemeDesc, target: &TowerField) -> Result<(BaseChangeSpec, SchemeDesc, SchemeDesc, ReductionCertificate)> {
    if !x.flags.complete_intersection {
        return Err(Error::Unsupported("the input is not a complete intersection".into()));
    }
    let bc = BaseChangeSpec::new(x.field().clone(), target.clone())?;
    let xl = base_change(x, target);
    let (z, cert) = reduce_structure(&xl)?;
    Ok((bc, xl, z, cert))
}

pub fn run_stages(x: &SchemeDesc, target: &TowerField, opts: &Options) -> Result<Stages> {
    let (bc, xl, z, reduction) = reduce_stage(x, target)?;
    if let Cert::Uncertified(why) = &reduction.status {
        return Err(Error::Precondition(format!("reduced structure is uncertified: {why}")));
    }
    let bound = opts.degree_bound.unwrap_or_else(|| default_degree_bound(x));
    let closure = pth_root_closure(&z, bound)?;
    let degree_insep = crate::geometry::degree_insep(&closure.y, x)?;
    let conormal = omega_presentation(&z, x)?;
    let closure_conormal = omega_presentation(&closure.y, x)?;
    if (x.field().p() as u64).pow(conormal.rank as u32) != degree_insep {
        return Err(Error::Consistency("Ω-rank of Z disagrees with the degree of Y over X".into()));
    }
    let decomposition = decompose(&z, &conormal, &closure, &closure_conormal, opts)?;
    Ok(Stages { bc, xl, z, reduction, closure, degree_insep, conormal, closure_conormal, decomposition })
}

#[derive(Clone, Debug)]
pub struct TowerInequality {
    pub class_t: DivisorClass,
    pub class_tprime: DivisorClass,
    pub class_t_over_tprime: DivisorClass,
    pub difference: DivisorClass,
    pub pass: bool,
}

/// Effectivity of det ℱ′_{T/T′} + ψ* det ℱ′_{T′/S} − det ℱ′_{T/S} for
/// K ⊆ L′ ⊆ L.
pub fn tower_inequality_check(x: &SchemeDesc, l: &TowerField, lprime: &TowerField, opts: &Options) -> Result<TowerInequality> {
    if !l.contains(lprime) || !lprime.contains(x.field()) {
        return Err(Error::Precondition("the towers are not nested".into()));
    }
    let st = run_stages(x, l, opts)?;
    let stp = run_stages(x, lprime, opts)?;
    let yp = &stp.closure.y;
    let top = l.join(yp.field());
    let rel = run_stages(yp, &top, opts)?;
    let class_t = st.decomposition.total_class.clone();
    let class_tprime = stp.decomposition.total_class.clone();
    let class_t_over_tprime = rel.decomposition.total_class.clone();
    let difference = class_t_over_tprime.add(&class_tprime).sub(&class_t);
    let pass = difference.is_effective();
    Ok(TowerInequality { class_t, class_tprime, class_t_over_tprime, difference, pass })
}

/// Every stage for one base change.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub x: SchemeDesc,
    pub stages: Stages,
    pub essential: std::result::Result<EssentialPart, String>,
    pub cbf: CbfReport,
    pub fibration: std::result::Result<FibrationReport, String>,
    /// Stages that did not certify.
    pub uncertified: Vec<String>,
}

pub fn analyze(x: &SchemeDesc, target: &TowerField, opts: &Options) -> Result<Analysis> {
    let stages = run_stages(x, target, opts)?;
    let mut uncertified = Vec::new();
    if stages.closure.status != ClosureStatus::CertifiedNormal {
        uncertified.push("normalisation".to_string());
    }
    let essential = essential_part(&stages.z, x).map_err(|e| e.to_string());
    if essential.is_err() {
        uncertified.push("essential".to_string());
    }
    let cbf = verify_cbf(&stages.decomposition, x, &stages.closure.y)?;
    if !cbf.pass {
        uncertified.push("cbf".to_string());
    }
    let fibration = fibration(&stages.decomposition, x, &stages.z, target, opts).map_err(|e| e.to_string());
    match &fibration {
        Ok(f) if f.checks_pass() => {}
        _ => uncertified.push("fibration".to_string()),
    }
    Ok(Analysis { x: x.clone(), stages, essential, cbf, fibration, uncertified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, PolyRing};

    fn scheme(p: u32, params: &[&str], blocks: &[&[&str]], gens: &[String]) -> SchemeDesc {
        let f = TowerField::rational(p, params.iter().map(|s| s.to_string()).collect()).unwrap();
        let b: Vec<Vec<String>> = blocks.iter().map(|b| b.iter().map(|s| s.to_string()).collect()).collect();
        let r = PolyRing::multiprojective(f, &b);
        SchemeDesc::new(&r, gens.iter().map(|s| parse_poly(&r, s).unwrap()).collect()).unwrap()
    }

    fn fermat_conic(p: u32, m: u32) -> SchemeDesc {
        let q = p.pow(m);
        scheme(p, &["s0", "s1"], &[&["x0", "x1", "x2"]], &[format!("s0*x0^{q} + s1*x1^{q} + x2^{q}")])
    }

    #[test]
    fn fermat_conic_small() {
        let x = fermat_conic(2, 1);
        let l = x.field().with_levels(vec![1, 1]);
        let a = analyze(&x, &l, &Options::default()).unwrap();
        let d = &a.stages.decomposition;
        assert!(d.fixed_is_zero());
        assert_eq!(d.movable.iter().map(|f| f.render()).collect::<Vec<_>>(), vec!["x0", "x1"]);
        assert_eq!(d.movable_class, DivisorClass(vec![1]));
        assert!(a.cbf.pass);
        assert!(a.fibration.as_ref().unwrap().trivial);
        let e = a.essential.as_ref().unwrap();
        assert_eq!(e.field, l);
        assert!(a.uncertified.is_empty());
    }

    #[test]
    fn omega_rows_for_square_root() {
        let x = scheme(2, &["s", "t"], &[&["x", "y", "z"]], &["s*x^4 + t^2*y^4 + z^4".to_string()]);
        let l = x.field().with_levels(vec![1, 1]);
        let (_, _, z, _) = reduce_stage(&x, &l).unwrap();
        let cd = omega_presentation(&z, &x).unwrap();
        assert_eq!(cd.relations[0][0].render(), "x^2");
        assert!(cd.relations[1][0].is_zero());
        assert_eq!(cd.rank, 1);
    }

    #[test]
    fn essential_part_drops_t() {
        for p in [2u32, 3] {
            let g = format!("s*x^{} + t^{p}*y^{} + z^{}", p * p, p * p, p * p);
            let x = scheme(p, &["s", "t"], &[&["x", "y", "z"]], &[g]);
            let l = x.field().with_levels(vec![1, 1]);
            let (_, _, z, _) = reduce_stage(&x, &l).unwrap();
            let e = essential_part(&z, &x).unwrap();
            assert_eq!(e.field.levels(), &[1, 0]);
            assert_eq!(e.degree, p as u64);
            assert!(e.reduced_after_base_change && e.no_vector_fields);
        }
    }

    #[test]
    fn conic_product_small() {
        let x = scheme(
            2,
            &["r", "s", "t"],
            &[&["x", "y", "z"], &["u", "v", "w"]],
            &["s*x^2 + t*y^2 + z^2".to_string(), "r*u^2 + s*v^2 + w^2".to_string()],
        );
        let l = x.field().with_levels(vec![0, 1, 1]);
        let a = analyze(&x, &l, &Options::default()).unwrap();
        let d = &a.stages.decomposition;
        assert_eq!(d.fixed.len(), 1);
        assert_eq!(d.fixed[0].prime.equation.render(), "u");
        assert_eq!(d.fixed[0].multiplicity, 1);
        assert_eq!(d.fixed_class, DivisorClass(vec![0, 1]));
        assert_eq!(d.movable_class, DivisorClass(vec![1, 0]));
        assert!(a.cbf.pass);
        assert_eq!(a.cbf.difference, DivisorClass(vec![1, 1]));
    }

    #[test]
    fn linear_twist_fibration() {
        let x = scheme(
            2,
            &["s", "t"],
            &[&["x", "y", "z"], &["u", "v", "w"]],
            &["s*x^2 + t*y^2 + z^2".to_string(), "x*u^2 + y*v^2 + z*w^2".to_string()],
        );
        let l = x.field().with_levels(vec![1, 1]);
        let a = analyze(&x, &l, &Options::default()).unwrap();
        let f = a.fibration.as_ref().unwrap();
        assert!(!f.trivial);
        assert_eq!(f.v_generators.len(), 1);
        assert_eq!(f.movable_over_v_zero, Some(true));
        assert_eq!(f.fibre_reduced_over_w, Some(true));
        assert_eq!(f.fibre_nonreduced_over_root, Some(true));
    }

    #[test]
    fn trivial_base_change() {
        let x = scheme(3, &["s"], &[&["x", "y", "z"]], &["x^2 + y*z".to_string()]);
        let a = analyze(&x, &x.field().with_levels(vec![1]), &Options::default()).unwrap();
        assert!(a.stages.decomposition.movable_is_zero());
        assert!(a.stages.decomposition.fixed_is_zero());
        assert!(a.cbf.pass);
        assert!(a.fibration.as_ref().unwrap().trivial);
        let t = tower_inequality_check(&x, &x.field().with_levels(vec![1]), x.field(), &Options::default()).unwrap();
        assert!(t.pass);
    }
}
