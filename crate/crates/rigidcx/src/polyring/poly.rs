//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Zero};

use super::mono::{Mono, MonomialOrder};
use crate::exactlin::{fmt_q, BaseRing, Q};

/// The arithmetic context of a polynomial: variable count, term order and coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyCtx {
    /// Number of variables.
    pub nvars: usize,
    /// Term order used to sort terms.
    pub order: MonomialOrder,
    /// Coefficient ring.
    pub base: BaseRing,
}

impl PolyCtx {
    /// Builds a context.
    pub fn new(nvars: usize, order: MonomialOrder, base: BaseRing) -> Self {
        PolyCtx { nvars, order, base }
    }

    fn red(&self, v: Q) -> Q {
        match self.base {
            BaseRing::PrimeField(_) => self.base.reduce(v),
            _ => v,
        }
    }

    /// Exact quotient of coefficients `a / b` in the coefficient ring.
    pub fn div_coeff(&self, a: &Q, b: &Q) -> Q {
        self.red(a / b)
    }
}

/// A polynomial: terms sorted strictly decreasing under the context order, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Q)>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    /// A constant.
    pub fn constant(ctx: &PolyCtx, c: Q) -> Poly {
        Poly::monomial(ctx, Mono::one(ctx.nvars), c)
    }

    /// The constant `n`.
    pub fn from_int(ctx: &PolyCtx, n: i64) -> Poly {
        Poly::constant(ctx, Q::from_integer(n.into()))
    }

    /// The constant one.
    pub fn one(ctx: &PolyCtx) -> Poly {
        Poly::constant(ctx, Q::one())
    }

    /// The variable `x_i`.
    pub fn var(ctx: &PolyCtx, i: usize) -> Poly {
        Poly::monomial(ctx, Mono::var(ctx.nvars, i), Q::one())
    }

    /// A single term.
    pub fn monomial(ctx: &PolyCtx, m: Mono, c: Q) -> Poly {
        let c = ctx.red(c);
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms (sorted, merged, zeros dropped).
    pub fn from_terms(ctx: &PolyCtx, mut terms: Vec<(Mono, Q)>) -> Poly {
        terms.sort_by(|a, b| ctx.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Mono, Q)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => {
                    last.1 += c;
                }
                _ => out.push((m, c)),
            }
        }
        let out = out
            .into_iter()
            .map(|(m, c)| (m, ctx.red(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { terms: out }
    }

    /// The terms, in decreasing order.
    pub fn terms(&self) -> &[(Mono, Q)] {
        &self.terms
    }

    /// Consumes the polynomial and returns its terms.
    pub fn into_terms(self) -> Vec<(Mono, Q)> {
        self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the polynomial has no non-constant terms.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    /// Leading monomial.
    pub fn lm(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    /// Leading coefficient.
    pub fn lc(&self) -> Option<&Q> {
        self.terms.first().map(|t| &t.1)
    }

    /// Maximal total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// `self + c·m·g`.
    pub fn add_scaled(&self, ctx: &PolyCtx, c: &Q, m: &Mono, g: &Poly) -> Poly {
        if c.is_zero() || g.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut gi = g.terms.iter().map(|(gm, gc)| (m.mul(gm), ctx.red(c * gc)));
        let mut cur = gi.next();
        while i < self.terms.len() || cur.is_some() {
            match (&self.terms.get(i), &cur) {
                (Some(a), Some(b)) => match ctx.order.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push((*a).clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(cur.take().unwrap());
                        cur = gi.next();
                    }
                    Ordering::Equal => {
                        let s = ctx.red(&a.1 + &b.1);
                        if !s.is_zero() {
                            out.push((a.0.clone(), s));
                        }
                        i += 1;
                        cur = gi.next();
                    }
                },
                (Some(a), None) => {
                    out.push((*a).clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(cur.take().unwrap());
                    cur = gi.next();
                }
                (None, None) => break,
            }
        }
        Poly { terms: out }
    }

    /// Sum.
    pub fn add(&self, ctx: &PolyCtx, o: &Poly) -> Poly {
        self.add_scaled(ctx, &Q::one(), &Mono::one(ctx.nvars), o)
    }

    /// Difference.
    pub fn sub(&self, ctx: &PolyCtx, o: &Poly) -> Poly {
        self.add_scaled(ctx, &-Q::one(), &Mono::one(ctx.nvars), o)
    }

    /// Negation.
    pub fn neg(&self, ctx: &PolyCtx) -> Poly {
        self.scale(ctx, &-Q::one())
    }

    /// Scalar multiple.
    pub fn scale(&self, ctx: &PolyCtx, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), ctx.red(a * c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    /// Product with a single term.
    pub fn mul_term(&self, ctx: &PolyCtx, m: &Mono, c: &Q) -> Poly {
        Poly::zero().add_scaled(ctx, c, m, self)
    }

    /// Product.
    pub fn mul(&self, ctx: &PolyCtx, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Mono, Q> = HashMap::with_capacity(self.len() * o.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let e = acc.entry(ma.mul(mb)).or_insert_with(Q::zero);
                *e += ca * cb;
            }
        }
        Poly::from_terms(ctx, acc.into_iter().collect())
    }

    /// Power with non-negative exponent.
    pub fn pow(&self, ctx: &PolyCtx, e: u32) -> Poly {
        let mut result = Poly::one(ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        result
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, ctx: &PolyCtx, i: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                let e = m2.0[i];
                m2.0[i] -= 1;
                (m2, c * Q::from_integer(e.into()))
            })
            .collect();
        Poly::from_terms(ctx, terms)
    }

    /// Substitutes `x_i ↦ images[i]`, computing in `target`.
    pub fn substitute(&self, target: &PolyCtx, images: &[Poly]) -> Poly {
        let mut cache: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut acc: Vec<Poly> = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(target, e as u32))
                    .clone();
                t = t.mul(target, &p);
                if t.is_zero() {
                    break;
                }
            }
            acc.push(t);
        }
        let all: Vec<(Mono, Q)> = acc.into_iter().flat_map(|p| p.terms).collect();
        Poly::from_terms(target, all)
    }

    /// Re-expresses the polynomial in a context with more variables or another order,
    /// sending `x_i` to `x_{var_map[i]}`.
    pub fn embed(&self, target: &PolyCtx, var_map: &[usize]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = Mono::one(target.nvars);
                for (i, &x) in m.0.iter().enumerate() {
                    e.0[var_map[i]] += x;
                }
                (e, c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Makes the leading coefficient one (over a field).
    pub fn monic(&self, ctx: &PolyCtx) -> Poly {
        match self.lc() {
            None => Poly::zero(),
            Some(c) => {
                let inv = ctx.div_coeff(&Q::one(), c);
                self.scale(ctx, &inv)
            }
        }
    }

    /// Formats the polynomial with the given variable names.
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = fmt_mono(m, names);
            if mono.is_empty() {
                s.push_str(&fmt_q(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&fmt_q(&a));
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}

/// Formats a monomial as `x^2*y` (empty string for 1).
pub fn fmt_mono(m: &Mono, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(names[i].clone());
        } else if e > 1 {
            parts.push(format!("{}^{}", names[i], e));
        }
    }
    parts.join("*")
}
