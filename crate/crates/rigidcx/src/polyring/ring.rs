//! Presented commutative rings `𝕂[x₁..x_k]/I`.
//!
//! Two regimes are supported. Over a field the ring caches the reduced Gröbner basis of `I`
//! and normal forms are remainders. Over ℤ the ring must be module-finite: for every
//! variable some generator has leading term `xᵢ^e` with coefficient ±1, these generators
//! form a Gröbner basis over ℤ, and the remaining generators cut out a lattice of relations
//! on the finite monomial basis they leave. Normal forms are then Hermite-reduced
//! coordinate vectors.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::groebner::{buchberger, reduce_poly};
use super::mono::{Mono, MonomialOrder};
use super::parse::parse_poly;
use super::poly::{Poly, PolyCtx};
use crate::error::{domain, unsupported, Error, Result};
use crate::exactlin::{solve_linear, BaseRing, ExactMatrix, IntSystem, Lattice, Q};

/// Shared handle to a presented ring.
pub type Ring = Arc<PresentedRing>;

/// Arithmetic regime of a presented ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Coefficients in ℚ or 𝔽_p; Gröbner normal forms.
    Field,
    /// Coefficients in ℤ, module-finite over ℤ.
    IntegerFinite,
    /// Coefficients in ℤ, not module-finite (only the zero ideal is accepted).
    IntegerFree,
}

/// Localization data `R[s⁻¹] = R[t]/(t·s − 1)`.
#[derive(Clone, Debug)]
pub struct Localization {
    /// The ring before inverting `s`.
    pub parent: Ring,
    /// The inverted element, in the parent's variables.
    pub inverted: Poly,
    /// Index of the new variable `t`.
    pub t_var: usize,
}

/// A presented commutative ring.
#[derive(Clone, Debug)]
pub struct PresentedRing {
    base: BaseRing,
    vars: Vec<String>,
    ctx: PolyCtx,
    ideal: Vec<Poly>,
    gb: Vec<Poly>,
    regime: Regime,
    basis: Option<Vec<Mono>>,
    basis_index: HashMap<Mono, usize>,
    lattice: Option<Lattice>,
    zero_ring: bool,
    localization: Option<Localization>,
}

impl PartialEq for PresentedRing {
    fn eq(&self, o: &Self) -> bool {
        self.base == o.base && self.vars == o.vars && self.ctx == o.ctx && self.gb == o.gb && {
            match (&self.lattice, &o.lattice) {
                (Some(a), Some(b)) => a == b,
                (None, None) => true,
                _ => false,
            }
        }
    }
}

fn standard_monomials(n: usize, leads: &[Mono], bounds: &[u16]) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    loop {
        let m = Mono::from_exps(&cur);
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

impl PresentedRing {
    /// Builds `base[vars]/(gens)` with the degrevlex order.
    pub fn new(base: BaseRing, vars: Vec<String>, gens: Vec<Poly>) -> Result<Ring> {
        Self::with_order(base, vars, MonomialOrder::degrevlex(), gens)
    }

    /// Builds `base[vars]/(gens)` with a chosen order. Generators must be expressed in a
    /// context with `vars.len()` variables and this order.
    pub fn with_order(
        base: BaseRing,
        vars: Vec<String>,
        order: MonomialOrder,
        gens: Vec<Poly>,
    ) -> Result<Ring> {
        Ok(Arc::new(Self::build(base, vars, order, gens, None)?))
    }

    /// The polynomial ring `base[vars]`.
    pub fn polynomial(base: BaseRing, vars: &[&str]) -> Result<Ring> {
        Self::new(base, vars.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    /// The coefficient ring itself (no variables).
    pub fn base_ring(base: BaseRing) -> Ring {
        Self::new(base, Vec::new(), Vec::new()).expect("coefficient ring")
    }

    /// Builds `base[vars]/(gens)` from polynomial strings.
    pub fn from_strs(base: BaseRing, vars: &[&str], gens: &[&str]) -> Result<Ring> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let ctx = PolyCtx::new(names.len(), MonomialOrder::degrevlex(), base);
        let mut ps = Vec::new();
        for g in gens {
            ps.push(parse_poly(&ctx, &names, g)?);
        }
        Self::new(base, names, ps)
    }

    fn build(
        base: BaseRing,
        vars: Vec<String>,
        order: MonomialOrder,
        gens: Vec<Poly>,
        localization: Option<Localization>,
    ) -> Result<PresentedRing> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return domain(format!("duplicate variable {v}"));
            }
        }
        let n = vars.len();
        let ctx = PolyCtx::new(n, order, base);
        let mut ideal = Vec::new();
        for g in gens {
            for (m, c) in g.terms() {
                if m.len() != n {
                    return domain("generator has the wrong number of variables");
                }
                base.normalize(c.clone())?;
            }
            let g = Poly::from_terms(&ctx, g.into_terms());
            if !g.is_zero() {
                ideal.push(g);
            }
        }
        let mut r = PresentedRing {
            base,
            vars,
            ctx,
            ideal: ideal.clone(),
            gb: Vec::new(),
            regime: Regime::Field,
            basis: None,
            basis_index: HashMap::new(),
            lattice: None,
            zero_ring: false,
            localization,
        };
        if base.is_field() {
            r.gb = buchberger(&ctx, &ideal)?;
            r.zero_ring = r.gb.iter().any(|g| g.is_constant());
            r.fill_basis();
        } else {
            r.build_integer(ideal)?;
        }
        Ok(r)
    }

    fn fill_basis(&mut self) {
        let n = self.vars.len();
        let leads: Vec<Mono> = self.gb.iter().filter_map(|g| g.lm().cloned()).collect();
        let mut bounds = vec![0u16; n];
        for (i, b) in bounds.iter_mut().enumerate() {
            let pure = leads
                .iter()
                .filter(|l| l.0.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|l| l.0[i])
                .filter(|&e| e > 0)
                .min();
            match pure {
                Some(e) => *b = e,
                None => {
                    if !self.zero_ring {
                        return;
                    }
                }
            }
        }
        let mut basis = if self.zero_ring {
            Vec::new()
        } else {
            standard_monomials(n, &leads, &bounds)
        };
        basis.sort_by(|a, b| self.ctx.order.cmp(b, a));
        self.basis_index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        self.basis = Some(basis);
    }

    fn build_integer(&mut self, ideal: Vec<Poly>) -> Result<()> {
        let n = self.vars.len();
        let ctx = self.ctx;
        if ideal.is_empty() && n > 0 {
            self.regime = Regime::IntegerFree;
            return Ok(());
        }
        let mut monic: Vec<Option<Poly>> = vec![None; n];
        let mut rest = Vec::new();
        for g in &ideal {
            let lm = g.lm().unwrap().clone();
            let lc = g.lc().unwrap().clone();
            let support: Vec<usize> = (0..n).filter(|&i| lm.0[i] > 0).collect();
            if support.len() == 1 && lc.abs().is_one() && monic[support[0]].is_none() {
                let g = if lc.is_negative() { g.neg(&ctx) } else { g.clone() };
                monic[support[0]] = Some(g);
            } else {
                rest.push(g.clone());
            }
        }
        if monic.iter().any(|m| m.is_none()) {
            return unsupported(
                "ring over ZZ is not module-finite: every variable needs a generator with \
                 leading term ±x^e",
            );
        }
        self.regime = Regime::IntegerFinite;
        self.gb = monic.into_iter().map(|m| m.unwrap()).collect();
        self.gb.sort_by(|a, b| ctx.order.cmp(b.lm().unwrap(), a.lm().unwrap()));
        let bounds: Vec<u16> = (0..n)
            .map(|i| self.gb.iter().map(|g| g.lm().unwrap().0[i]).max().unwrap())
            .collect();
        let leads: Vec<Mono> = self.gb.iter().map(|g| g.lm().unwrap().clone()).collect();
        let mut basis = standard_monomials(n, &leads, &bounds);
        basis.sort_by(|a, b| ctx.order.cmp(b, a));
        self.basis_index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let dim = basis.len();
        self.basis = Some(basis.clone());
        let mut rows = Vec::new();
        for g in &rest {
            for b in &basis {
                let p = reduce_poly(&ctx, &g.mul_term(&ctx, b, &Q::one()), &self.gb);
                rows.push(self.int_coords_raw(&p));
            }
        }
        let lat = Lattice::span(dim, &rows);
        self.zero_ring = dim == 0 || (lat.rank() == dim && {
            let one = self.int_coords_raw(&Poly::one(&ctx));
            lat.contains(&one)
        });
        self.lattice = Some(lat);
        Ok(())
    }

    fn int_coords_raw(&self, p: &Poly) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.basis_index.len()];
        for (m, c) in p.terms() {
            let k = self.basis_index[m];
            v[k] = c.to_integer();
        }
        v
    }

    /// Coefficient ring.
    pub fn base(&self) -> BaseRing {
        self.base
    }

    /// Variable names.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Polynomial arithmetic context.
    pub fn ctx(&self) -> &PolyCtx {
        &self.ctx
    }

    /// Generators of the ideal as supplied.
    pub fn ideal_gens(&self) -> &[Poly] {
        &self.ideal
    }

    /// Cached Gröbner basis (the monic part over ℤ).
    pub fn groebner_basis(&self) -> &[Poly] {
        &self.gb
    }

    /// Arithmetic regime.
    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Whether the ring is the zero ring.
    pub fn is_zero_ring(&self) -> bool {
        self.zero_ring
    }

    /// Standard monomial basis when the ring is finite over its coefficients.
    pub fn basis(&self) -> Option<&[Mono]> {
        self.basis.as_deref()
    }

    /// Rank over the coefficient ring when finite (number of basis monomials).
    pub fn finite_rank(&self) -> Option<usize> {
        self.basis.as_ref().map(|b| b.len())
    }

    /// Relation lattice on the monomial basis (ℤ regime).
    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    /// Localization data, if the ring was built by [`localize`].
    pub fn localization(&self) -> Option<&Localization> {
        self.localization.as_ref()
    }

    /// Normal form of a polynomial in the ambient variables.
    pub fn nf(&self, p: &Poly) -> Poly {
        if p.is_zero() {
            return Poly::zero();
        }
        match self.regime {
            Regime::Field => {
                if self.zero_ring {
                    Poly::zero()
                } else {
                    reduce_poly(&self.ctx, p, &self.gb)
                }
            }
            Regime::IntegerFree => p.clone(),
            Regime::IntegerFinite => {
                let r = reduce_poly(&self.ctx, p, &self.gb);
                let v = self.int_coords_raw(&r);
                let v = self.lattice.as_ref().unwrap().reduce(&v);
                self.from_int_coords(&v)
            }
        }
    }

    fn from_int_coords(&self, v: &[BigInt]) -> Poly {
        let basis = self.basis.as_ref().unwrap();
        let terms = v
            .iter()
            .zip(basis.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| (m.clone(), Q::from_integer(c.clone())))
            .collect();
        Poly::from_terms(&self.ctx, terms)
    }

    /// Validates a polynomial (variable count, coefficient ring) and returns its normal form.
    pub fn element(&self, p: &Poly) -> Result<Poly> {
        for (m, c) in p.terms() {
            if m.len() != self.nvars() {
                return domain("variable mismatch");
            }
            self.base.normalize(c.clone())?;
        }
        Ok(self.nf(&Poly::from_terms(&self.ctx, p.terms().to_vec())))
    }

    /// Parses an element written in the ring's variables.
    pub fn parse(&self, text: &str) -> Result<Poly> {
        let p = parse_poly(&self.ctx, &self.vars, text)?;
        self.element(&p)
    }

    /// Formats an element.
    pub fn fmt(&self, p: &Poly) -> String {
        p.fmt_with(&self.vars)
    }

    /// Zero.
    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    /// One.
    pub fn one(&self) -> Poly {
        self.nf(&Poly::one(&self.ctx))
    }

    /// The image of an integer.
    pub fn from_int(&self, n: i64) -> Poly {
        self.nf(&Poly::from_int(&self.ctx, n))
    }

    /// The image of a coefficient.
    pub fn constant(&self, c: Q) -> Poly {
        self.nf(&Poly::constant(&self.ctx, c))
    }

    /// The variable with index `i`.
    pub fn var(&self, i: usize) -> Poly {
        self.nf(&Poly::var(&self.ctx, i))
    }

    /// Sum.
    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let s = a.add(&self.ctx, b);
        if self.regime == Regime::IntegerFinite {
            self.nf(&s)
        } else {
            s
        }
    }

    /// Difference.
    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let s = a.sub(&self.ctx, b);
        if self.regime == Regime::IntegerFinite {
            self.nf(&s)
        } else {
            s
        }
    }

    /// Negation.
    pub fn neg(&self, a: &Poly) -> Poly {
        self.nf(&a.neg(&self.ctx))
    }

    /// Product.
    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        self.nf(&a.mul(&self.ctx, b))
    }

    /// Scalar multiple.
    pub fn scale(&self, a: &Poly, c: &Q) -> Poly {
        self.nf(&a.scale(&self.ctx, c))
    }

    /// Power.
    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Whether an element (in normal form or not) is zero in the ring.
    pub fn is_zero(&self, a: &Poly) -> bool {
        self.nf(a).is_zero()
    }

    /// Equality in the ring.
    pub fn eq_elem(&self, a: &Poly, b: &Poly) -> bool {
        self.is_zero(&a.sub(&self.ctx, b))
    }

    /// Coordinates on the finite monomial basis.
    pub fn coords(&self, a: &Poly) -> Result<Vec<Q>> {
        let Some(basis) = &self.basis else {
            return unsupported("ring is not finite over its coefficients");
        };
        let a = self.nf(a);
        let mut v = vec![Q::zero(); basis.len()];
        for (m, c) in a.terms() {
            v[self.basis_index[m]] = c.clone();
        }
        Ok(v)
    }

    /// Element with the given basis coordinates.
    pub fn from_coords(&self, v: &[Q]) -> Result<Poly> {
        let Some(basis) = &self.basis else {
            return unsupported("ring is not finite over its coefficients");
        };
        let terms = v
            .iter()
            .zip(basis.iter())
            .map(|(c, m)| (m.clone(), c.clone()))
            .collect();
        Ok(self.nf(&Poly::from_terms(&self.ctx, terms)))
    }

    /// Matrix of multiplication by `a` on the finite basis (columns are images of basis
    /// elements).
    pub fn mult_matrix(&self, a: &Poly) -> Result<ExactMatrix> {
        let Some(basis) = &self.basis else {
            return unsupported("ring is not finite over its coefficients");
        };
        let mut cols = Vec::with_capacity(basis.len());
        for b in basis {
            let p = self.mul(a, &Poly::monomial(&self.ctx, b.clone(), Q::one()));
            cols.push(self.coords(&p)?);
        }
        ExactMatrix::from_cols(self.base, basis.len(), &cols)
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inverse(&self, a: &Poly) -> Result<Option<Poly>> {
        let a = self.nf(a);
        if self.zero_ring {
            return Ok(Some(Poly::zero()));
        }
        if a.is_zero() {
            return Ok(None);
        }
        if let Some(c) = a.constant_value() {
            if let Some(i) = self.base.inv(&c) {
                return Ok(Some(self.constant(i)));
            }
            if self.regime != Regime::IntegerFinite {
                return Ok(None);
            }
        }
        match self.regime {
            Regime::IntegerFree => Ok(None),
            Regime::IntegerFinite => {
                let m = self.mult_matrix(&a)?;
                let lat = self.lattice.as_ref().unwrap();
                let dim = m.rows();
                let mut rows: Vec<Vec<BigInt>> = m.to_int_rows()?;
                for (i, row) in rows.iter_mut().enumerate() {
                    for l in lat.basis() {
                        row.push(l[i].clone());
                    }
                }
                let cols = m.cols() + lat.rank();
                let sys = IntSystem::new(&rows, dim, cols);
                let one = self.int_coords_raw(&self.one());
                Ok(sys.solve(&one).map(|x| {
                    let v: Vec<BigInt> = x[..m.cols()].to_vec();
                    self.nf(&self.from_int_coords(&v))
                }))
            }
            Regime::Field => {
                if self.basis.is_some() {
                    let m = self.mult_matrix(&a)?;
                    let one = self.coords(&self.one())?;
                    Ok(solve_linear(&m, &one)?.map(|x| self.from_coords(&x).unwrap()))
                } else {
                    let sys = super::module::LinSys::new(
                        &Arc::new(self.clone()),
                        1,
                        &[vec![a.clone()]],
                        &[],
                    )?;
                    Ok(sys.solve(&[self.one()]).map(|mut v| v.remove(0)))
                }
            }
        }
    }

    /// Whether `a` is a unit.
    pub fn is_unit(&self, a: &Poly) -> Result<bool> {
        Ok(self.inverse(a)?.is_some())
    }

    /// A fresh variable name not used by the ring, derived from `stem`.
    pub fn fresh_name(&self, stem: &str) -> String {
        if !self.vars.iter().any(|v| v == stem) {
            return stem.to_string();
        }
        (1..)
            .map(|k| format!("{stem}{k}"))
            .find(|n| !self.vars.contains(n))
            .unwrap()
    }

    /// The same ring presented with extra variables appended (no new relations).
    pub fn adjoin_vars(self: &Ring, names: &[String]) -> Result<Ring> {
        let mut vars = self.vars.clone();
        vars.extend(names.iter().cloned());
        let n = vars.len();
        let ctx = PolyCtx::new(n, self.ctx.order, self.base);
        let map: Vec<usize> = (0..self.nvars()).collect();
        let gens = self.ideal.iter().map(|g| g.embed(&ctx, &map)).collect();
        PresentedRing::with_order(self.base, vars, self.ctx.order, gens)
    }
}

impl fmt::Display for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.base, self.vars.join(","))?;
        if !self.ideal.is_empty() {
            let gens: Vec<String> = self.ideal.iter().map(|g| self.fmt(g)).collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

/// A ring homomorphism given by images of the source variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Ring,
    target: Ring,
    images: Vec<Poly>,
}

impl RingMap {
    /// Builds a map, checking that every ideal generator of the source maps to zero.
    pub fn new(source: &Ring, target: &Ring, images: Vec<Poly>) -> Result<RingMap> {
        if source.base != target.base {
            return domain(format!(
                "base ring mismatch: {} vs {}",
                source.base, target.base
            ));
        }
        if images.len() != source.nvars() {
            return domain("wrong number of variable images");
        }
        let images: Vec<Poly> = images
            .iter()
            .map(|p| target.element(p))
            .collect::<Result<_>>()?;
        let m = RingMap {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for g in &source.ideal {
            if !m.apply(g).is_zero() {
                return Err(Error::Domain(format!(
                    "relation {} does not map to zero",
                    source.fmt(g)
                )));
            }
        }
        Ok(m)
    }

    /// Builds a map from image strings in the target's variables.
    pub fn parse(source: &Ring, target: &Ring, images: &[&str]) -> Result<RingMap> {
        let ims = images
            .iter()
            .map(|s| target.parse(s))
            .collect::<Result<Vec<_>>>()?;
        RingMap::new(source, target, ims)
    }

    /// The identity map.
    pub fn identity(r: &Ring) -> RingMap {
        RingMap {
            source: r.clone(),
            target: r.clone(),
            images: (0..r.nvars()).map(|i| r.var(i)).collect(),
        }
    }

    /// The structure map from the coefficient ring.
    pub fn from_base(r: &Ring) -> RingMap {
        RingMap {
            source: PresentedRing::base_ring(r.base),
            target: r.clone(),
            images: Vec::new(),
        }
    }

    /// Source ring.
    pub fn source(&self) -> &Ring {
        &self.source
    }

    /// Target ring.
    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// Images of the source variables.
    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Applies the map to an element of the source.
    pub fn apply(&self, p: &Poly) -> Poly {
        let q = p.substitute(self.target.ctx(), &self.images);
        self.target.nf(&q)
    }

    /// The composite `next ∘ self`.
    pub fn then(&self, next: &RingMap) -> Result<RingMap> {
        if !Arc::ptr_eq(&self.target, &next.source) && *self.target != *next.source {
            return domain("maps are not composable");
        }
        Ok(RingMap {
            source: self.source.clone(),
            target: next.target.clone(),
            images: self.images.iter().map(|p| next.apply(p)).collect(),
        })
    }

    /// Whether the map sends every variable to itself.
    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, p)| self.target.eq_elem(p, &self.target.var(i)))
    }
}

impl RingMap {
    /// Generators of the kernel ideal, as elements of the source.
    ///
    /// Over a field this eliminates the target variables from the graph ideal; over ℤ both
    /// rings must be module-finite and the kernel is computed as a lattice.
    pub fn kernel(&self) -> Result<Vec<Poly>> {
        let (s, t) = (&self.source, &self.target);
        let gens: Vec<Poly> = match (s.regime, t.regime) {
            (Regime::Field, Regime::Field) => {
                let nt = t.nvars();
                let n = nt + s.nvars();
                let ctx = PolyCtx::new(n, MonomialOrder::block(nt), s.base);
                let tmap: Vec<usize> = (0..nt).collect();
                let mut gens: Vec<Poly> = t.ideal.iter().map(|g| g.embed(&ctx, &tmap)).collect();
                for (i, f) in self.images.iter().enumerate() {
                    let x = Poly::var(&ctx, nt + i);
                    gens.push(x.sub(&ctx, &f.embed(&ctx, &tmap)));
                }
                let gb = buchberger(&ctx, &gens)?;
                let back: Vec<Poly> = (0..n)
                    .map(|k| if k < nt { s.zero() } else { s.var(k - nt) })
                    .collect();
                gb.iter()
                    .filter(|g| g.terms().iter().all(|(m, _)| m.0[..nt].iter().all(|&e| e == 0)))
                    .map(|g| s.nf(&g.substitute(s.ctx(), &back)))
                    .filter(|g| !g.is_zero())
                    .collect()
            }
            (Regime::IntegerFinite, Regime::IntegerFinite) => {
                let sb = s.basis.clone().unwrap_or_default();
                let tdim = t.basis_index.len();
                let mut cols: Vec<Vec<Q>> = Vec::new();
                for m in &sb {
                    let img = self.apply(&Poly::monomial(s.ctx(), m.clone(), Q::one()));
                    cols.push(t.coords(&img)?);
                }
                if let Some(l) = &t.lattice {
                    for v in l.basis() {
                        cols.push(v.iter().map(|x| Q::from_integer(x.clone())).collect());
                    }
                }
                if cols.is_empty() {
                    return Ok(Vec::new());
                }
                let m = ExactMatrix::from_cols(BaseRing::Integers, tdim, &cols)?;
                crate::exactlin::integer_kernel(&m)?
                    .iter()
                    .map(|v| {
                        let terms = sb
                            .iter()
                            .zip(v.iter())
                            .map(|(m, c)| (m.clone(), Q::from_integer(c.clone())))
                            .collect();
                        s.nf(&Poly::from_terms(s.ctx(), terms))
                    })
                    .filter(|g| !g.is_zero())
                    .collect()
            }
            _ => {
                return unsupported(
                    "ring-map kernels need a field of coefficients or module-finite rings over ZZ",
                )
            }
        };
        let vecs: Vec<Vec<Poly>> = gens
            .into_iter()
            .map(|g| {
                if s.base.is_field() {
                    vec![g.monic(s.ctx())]
                } else if g.lc().is_some_and(|c| c.is_negative()) {
                    vec![g.neg(s.ctx())]
                } else {
                    vec![g]
                }
            })
            .collect();
        Ok(super::module::prune_generators(s, 1, vecs, &[])?
            .into_iter()
            .map(|mut v| v.pop().unwrap())
            .collect())
    }

    /// Some element of the source mapping to `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &Poly) -> Result<Option<Poly>> {
        let (s, t) = (&self.source, &self.target);
        match (s.regime, t.regime) {
            (Regime::Field, Regime::Field) => {
                let nt = t.nvars();
                let n = nt + s.nvars();
                let ctx = PolyCtx::new(n, MonomialOrder::block(nt), s.base);
                let tmap: Vec<usize> = (0..nt).collect();
                let mut gens: Vec<Poly> = t.ideal.iter().map(|g| g.embed(&ctx, &tmap)).collect();
                for (i, f) in self.images.iter().enumerate() {
                    let x = Poly::var(&ctx, nt + i);
                    gens.push(x.sub(&ctx, &f.embed(&ctx, &tmap)));
                }
                let gb = buchberger(&ctx, &gens)?;
                let r = reduce_poly(&ctx, &t.nf(y).embed(&ctx, &tmap), &gb);
                if !r.terms().iter().all(|(m, _)| m.0[..nt].iter().all(|&e| e == 0)) {
                    return Ok(None);
                }
                let back: Vec<Poly> = (0..n)
                    .map(|k| if k < nt { s.zero() } else { s.var(k - nt) })
                    .collect();
                Ok(Some(s.nf(&r.substitute(s.ctx(), &back))))
            }
            (Regime::IntegerFinite, Regime::IntegerFinite) => {
                let sb = s.basis.clone().unwrap_or_default();
                let tdim = t.basis_index.len();
                let mut cols: Vec<Vec<Q>> = Vec::new();
                for m in &sb {
                    let img = self.apply(&Poly::monomial(s.ctx(), m.clone(), Q::one()));
                    cols.push(t.coords(&img)?);
                }
                if let Some(l) = &t.lattice {
                    for v in l.basis() {
                        cols.push(v.iter().map(|x| Q::from_integer(x.clone())).collect());
                    }
                }
                let target = t.coords(y)?;
                if cols.is_empty() {
                    return Ok(target.iter().all(|c| c.is_zero()).then(|| s.zero()));
                }
                let m = ExactMatrix::from_cols(BaseRing::Integers, tdim, &cols)?;
                let Some(c) = solve_linear(&m, &target)? else {
                    return Ok(None);
                };
                let terms = sb
                    .iter()
                    .zip(c.iter())
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect();
                Ok(Some(s.nf(&Poly::from_terms(s.ctx(), terms))))
            }
            _ => unsupported(
                "ring-map preimages need a field of coefficients or module-finite rings over ZZ",
            ),
        }
    }

    /// The inverse map, if this map is an isomorphism.
    pub fn inverse(&self) -> Result<Option<RingMap>> {
        let mut images = Vec::new();
        for i in 0..self.target.nvars() {
            match self.preimage(&self.target.var(i))? {
                Some(p) => images.push(p),
                None => return Ok(None),
            }
        }
        let inv = RingMap::new(&self.target, &self.source, images)?;
        let round = self.then(&inv)?;
        let injective = (0..self.source.nvars())
            .all(|i| self.source.eq_elem(&round.images[i], &self.source.var(i)));
        Ok(injective.then_some(inv))
    }
}

/// Inverts `s`: returns `R[t]/(I, t·s − 1)` with localization data recorded.
pub fn localize(r: &Ring, s: &Poly) -> Result<Ring> {
    if r.regime != Regime::Field {
        return unsupported("localization is supported over a field of coefficients");
    }
    let t = r.fresh_name("t");
    let mut vars = r.vars.clone();
    vars.push(t);
    let n = vars.len();
    let ctx = PolyCtx::new(n, r.ctx.order, r.base);
    let map: Vec<usize> = (0..r.nvars()).collect();
    let mut gens: Vec<Poly> = r.ideal.iter().map(|g| g.embed(&ctx, &map)).collect();
    let s_amb = s.embed(&ctx, &map);
    let rel = Poly::var(&ctx, n - 1)
        .mul(&ctx, &s_amb)
        .sub(&ctx, &Poly::one(&ctx));
    gens.push(rel);
    let loc = Localization {
        parent: r.clone(),
        inverted: r.nf(s),
        t_var: n - 1,
    };
    Ok(Arc::new(PresentedRing::build(
        r.base,
        vars,
        r.ctx.order,
        gens,
        Some(loc),
    )?))
}

/// The canonical map `R → R[s⁻¹]` of a localized ring.
pub fn localization_map(loc_ring: &Ring) -> Result<RingMap> {
    let Some(loc) = loc_ring.localization() else {
        return domain("ring is not a localization");
    };
    let images = (0..loc.parent.nvars()).map(|i| loc_ring.var(i)).collect();
    RingMap::new(&loc.parent, loc_ring, images)
}

/// A tensor product `B ⊗_A C` with its two structure maps.
#[derive(Clone, Debug)]
pub struct TensorRing {
    /// The presented tensor product.
    pub ring: Ring,
    /// `b ↦ b ⊗ 1`.
    pub p1: RingMap,
    /// `c ↦ 1 ⊗ c`.
    pub p2: RingMap,
}

fn tensor_names(b: &[String], c: &[String]) -> (Vec<String>, Vec<String>) {
    let clash = b.iter().any(|v| c.contains(v));
    if !clash {
        return (b.to_vec(), c.to_vec());
    }
    let tag = |v: &String, k: usize| {
        if v.ends_with(|ch: char| ch.is_ascii_digit()) {
            format!("{v}_{k}")
        } else {
            format!("{v}{k}")
        }
    };
    (
        b.iter().map(|v| tag(v, 1)).collect(),
        c.iter().map(|v| tag(v, 2)).collect(),
    )
}

/// Presents `B ⊗_A C` for A-algebras `f: A → B`, `g: A → C`.
pub fn tensor_rings(f: &RingMap, g: &RingMap) -> Result<TensorRing> {
    let (b, c) = (f.target(), g.target());
    if b.base != c.base || f.source().base != b.base {
        return domain("incompatible base rings");
    }
    if *f.source() != *g.source() {
        return domain("the two algebras have different base rings");
    }
    let (nb, nc) = tensor_names(&b.vars, &c.vars);
    let mut vars = nb;
    vars.extend(nc);
    let n = vars.len();
    let order = b.ctx.order;
    let ctx = PolyCtx::new(n, order, b.base);
    let mb: Vec<usize> = (0..b.nvars()).collect();
    let mc: Vec<usize> = (b.nvars()..n).collect();
    let mut gens: Vec<Poly> = b.ideal.iter().map(|x| x.embed(&ctx, &mb)).collect();
    gens.extend(c.ideal.iter().map(|x| x.embed(&ctx, &mc)));
    for i in 0..f.source().nvars() {
        let l = f.images[i].embed(&ctx, &mb);
        let r = g.images[i].embed(&ctx, &mc);
        gens.push(l.sub(&ctx, &r));
    }
    let ring = PresentedRing::with_order(b.base, vars, order, gens)?;
    let p1 = RingMap::new(b, &ring, (0..b.nvars()).map(|i| ring.var(i)).collect())?;
    let p2 = RingMap::new(
        c,
        &ring,
        (0..c.nvars()).map(|i| ring.var(b.nvars() + i)).collect(),
    )?;
    Ok(TensorRing { ring, p1, p2 })
}
