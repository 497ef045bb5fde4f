//! Graded sets, super-commutative DG algebras, their elements and homomorphisms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use smallvec::SmallVec;

use crate::error::{domain, Result};
use crate::exactlin::Q;
use crate::polyring::{tensor_rings, Poly, RMatrix, RVec, Ring, RingMap};

/// A finite list of uniquely named generators in non-positive degrees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSet {
    entries: Vec<(String, i32)>,
}

impl GradedSet {
    /// Builds a graded set, rejecting positive degrees and repeated names.
    pub fn new(entries: Vec<(String, i32)>) -> Result<GradedSet> {
        let mut s = GradedSet::default();
        for (n, d) in entries {
            s.push(n, d)?;
        }
        Ok(s)
    }

    /// Appends a generator.
    pub fn push(&mut self, name: String, degree: i32) -> Result<()> {
        if degree > 0 {
            return domain(format!("generator {name} has positive degree {degree}"));
        }
        if self.entries.iter().any(|(n, _)| *n == name) {
            return domain(format!("generator name {name} is used twice"));
        }
        self.entries.push((name, degree));
        Ok(())
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether there are no generators.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Name of generator `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.entries[i].0
    }

    /// Degree of generator `i`.
    pub fn degree(&self, i: usize) -> i32 {
        self.entries[i].1
    }

    /// All `(name, degree)` pairs in order.
    pub fn entries(&self) -> &[(String, i32)] {
        &self.entries
    }

    /// Names of the generators of degree `d`.
    pub fn in_degree(&self, d: i32) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, e)| *e == d)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    /// Index of a generator by name.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|(n, _)| n == name)
    }
}

/// A monomial in the negative-degree generators: sorted `(generator, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgMono(SmallVec<[(u32, u32); 4]>);

impl AlgMono {
    /// The empty monomial.
    pub fn one() -> AlgMono {
        AlgMono::default()
    }

    /// A single generator.
    pub fn gen(i: usize) -> AlgMono {
        AlgMono(SmallVec::from_slice(&[(i as u32, 1)]))
    }

    /// Builds a monomial from `(generator, exponent)` pairs (any order, zero exponents dropped).
    pub fn from_pairs(pairs: &[(usize, u32)]) -> AlgMono {
        let mut v: Vec<(u32, u32)> = pairs
            .iter()
            .filter(|p| p.1 > 0)
            .map(|&(g, e)| (g as u32, e))
            .collect();
        v.sort();
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        for (g, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == g => last.1 += e,
                _ => out.push((g, e)),
            }
        }
        AlgMono(out)
    }

    /// Whether this is the empty monomial.
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// The `(generator, exponent)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(g, e)| (g as usize, e))
    }

    /// Exponent of generator `i`.
    pub fn exp(&self, i: usize) -> u32 {
        self.0
            .iter()
            .find(|p| p.0 as usize == i)
            .map(|p| p.1)
            .unwrap_or(0)
    }

    fn shifted(&self, by: usize) -> AlgMono {
        AlgMono(self.0.iter().map(|&(g, e)| (g + by as u32, e)).collect())
    }
}

/// An element of a DG algebra: a finite sum of monomials with degree-zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgElem {
    terms: BTreeMap<AlgMono, Poly>,
}

impl AlgElem {
    /// The zero element.
    pub fn zero() -> AlgElem {
        AlgElem::default()
    }

    /// Builds an element from raw terms without normalization (used for diagnostics).
    pub fn from_raw_terms(terms: Vec<(AlgMono, Poly)>) -> AlgElem {
        let mut t = BTreeMap::new();
        for (m, c) in terms {
            if !c.is_zero() {
                t.insert(m, c);
            }
        }
        AlgElem { terms: t }
    }

    /// Whether the element is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The terms, sorted by monomial.
    pub fn terms(&self) -> impl Iterator<Item = (&AlgMono, &Poly)> {
        self.terms.iter()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of a monomial.
    pub fn coeff(&self, m: &AlgMono) -> Poly {
        self.terms.get(m).cloned().unwrap_or_else(Poly::zero)
    }

    /// The degree-zero part.
    pub fn scalar_part(&self) -> Poly {
        self.coeff(&AlgMono::one())
    }
}

type BasisCache = Mutex<HashMap<i32, Arc<DegreeBasis>>>;

/// Monomial basis of one degree together with an index.
#[derive(Debug)]
pub struct DegreeBasis {
    /// The monomials, in a fixed deterministic order.
    pub monos: Vec<AlgMono>,
    index: HashMap<AlgMono, usize>,
}

impl DegreeBasis {
    /// Position of a monomial in the basis.
    pub fn index_of(&self, m: &AlgMono) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.monos.len()
    }

    /// Whether the basis is empty.
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
}

/// A non-positively graded super-commutative DG algebra `R[X]` over a presented ring `R`
/// placed in degree zero. Odd generators are exterior and even ones polynomial.
pub struct DgAlgebra {
    ring: Ring,
    gens: GradedSet,
    diffs: Vec<AlgElem>,
    cache: BasisCache,
}

/// Shared handle to a DG algebra.
pub type Alg = Arc<DgAlgebra>;

impl Clone for DgAlgebra {
    fn clone(&self) -> Self {
        DgAlgebra {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            diffs: self.diffs.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl PartialEq for DgAlgebra {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.gens == other.gens && self.diffs == other.diffs
    }
}

impl fmt::Debug for DgAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DgAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring)?;
        if !self.gens.is_empty() {
            let parts: Vec<String> = (0..self.gens.len())
                .map(|i| {
                    format!(
                        "{}:{} d={}",
                        self.gens.name(i),
                        self.gens.degree(i),
                        self.fmt_elem(&self.diffs[i])
                    )
                })
                .collect();
            write!(f, "<{}>", parts.join(", "))?;
        }
        Ok(())
    }
}

fn is_odd(d: i32) -> bool {
    d.rem_euclid(2) == 1
}

impl DgAlgebra {
    /// The ring `R` as a DG algebra concentrated in degree zero.
    pub fn from_ring(ring: &Ring) -> Alg {
        Arc::new(DgAlgebra::from_parts(ring, GradedSet::default(), Vec::new()))
    }

    /// Assembles an algebra without validation; see [`dg_validate`].
    pub fn from_parts(ring: &Ring, gens: GradedSet, diffs: Vec<AlgElem>) -> DgAlgebra {
        DgAlgebra {
            ring: ring.clone(),
            gens,
            diffs,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Adjoins a generator of negative degree with the given differential, checking degree,
    /// freshness of the name and `d² = 0`.
    pub fn adjoin(&self, name: &str, degree: i32, diff: AlgElem) -> Result<Alg> {
        if degree >= 0 {
            return domain(format!(
                "generator {name} must have negative degree (degree-zero generators are ring variables)"
            ));
        }
        if self.ring.vars().iter().any(|v| v == name) {
            return domain(format!("generator name {name} clashes with a ring variable"));
        }
        let diff = self.normalize(&diff);
        if !diff.is_zero() && self.homogeneous_degree(&diff) != Some(degree + 1) {
            return domain(format!(
                "differential of {name} is not homogeneous of degree {}",
                degree + 1
            ));
        }
        if !self.d(&diff).is_zero() {
            return domain(format!("differential of {name} is not a cycle"));
        }
        let mut gens = self.gens.clone();
        gens.push(name.to_string(), degree)?;
        let mut diffs = self.diffs.clone();
        diffs.push(diff);
        Ok(Arc::new(DgAlgebra::from_parts(&self.ring, gens, diffs)))
    }

    /// The degree-zero ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The negative-degree generators.
    pub fn generators(&self) -> &GradedSet {
        &self.gens
    }

    /// Number of negative-degree generators.
    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Degree of generator `i`.
    pub fn gen_degree(&self, i: usize) -> i32 {
        self.gens.degree(i)
    }

    /// Whether generator `i` is odd.
    pub fn is_odd_gen(&self, i: usize) -> bool {
        is_odd(self.gens.degree(i))
    }

    /// `d` of generator `i`.
    pub fn gen_diff(&self, i: usize) -> &AlgElem {
        &self.diffs[i]
    }

    /// Whether every generator is odd, so that each graded piece vanishes below some degree.
    pub fn is_bounded(&self) -> bool {
        (0..self.ngens()).all(|i| self.is_odd_gen(i))
    }

    /// Lowest degree with a nonzero graded piece, when bounded.
    pub fn min_degree(&self) -> Option<i32> {
        if self.is_bounded() {
            Some((0..self.ngens()).map(|i| self.gen_degree(i)).sum())
        } else {
            None
        }
    }

    /// Degree of a monomial.
    pub fn mono_degree(&self, m: &AlgMono) -> i32 {
        m.pairs().map(|(g, e)| self.gen_degree(g) * e as i32).sum()
    }

    /// Product of monomials with its sign, or `None` when an odd generator repeats.
    pub fn mono_mul(&self, a: &AlgMono, b: &AlgMono) -> Option<(bool, AlgMono)> {
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&a.0, &b.0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push(x[i]);
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push(y[j]);
                j += 1;
            } else {
                if self.is_odd_gen(x[i].0 as usize) {
                    return None;
                }
                out.push((x[i].0, x[i].1 + y[j].1));
                i += 1;
                j += 1;
            }
        }
        let odd_a: Vec<u32> = x
            .iter()
            .filter(|p| self.is_odd_gen(p.0 as usize))
            .map(|p| p.0)
            .collect();
        let odd_b: Vec<u32> = y
            .iter()
            .filter(|p| self.is_odd_gen(p.0 as usize))
            .map(|p| p.0)
            .collect();
        let mut inversions = 0usize;
        for ga in &odd_a {
            inversions += odd_b.iter().filter(|gb| *gb < ga).count();
        }
        Some((inversions % 2 == 1, AlgMono(out)))
    }

    /// Brings an element to normal form: coefficients reduced, odd squares removed.
    pub fn normalize(&self, x: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (m, c) in &x.terms {
            if m.pairs().any(|(g, e)| g >= self.ngens() || (self.is_odd_gen(g) && e > 1)) {
                continue;
            }
            add_term(&self.ring, &mut out, m.clone(), c);
        }
        out
    }

    /// The element `c · 1` for `c ∈ R`.
    pub fn scalar(&self, c: &Poly) -> AlgElem {
        let mut out = AlgElem::zero();
        add_term(&self.ring, &mut out, AlgMono::one(), c);
        out
    }

    /// The unit.
    pub fn one(&self) -> AlgElem {
        self.scalar(&self.ring.one())
    }

    /// Generator `i`.
    pub fn gen(&self, i: usize) -> AlgElem {
        self.mono(&AlgMono::gen(i))
    }

    /// A monomial with coefficient one.
    pub fn mono(&self, m: &AlgMono) -> AlgElem {
        let mut out = AlgElem::zero();
        add_term(&self.ring, &mut out, m.clone(), &self.ring.one());
        out
    }

    /// Generator by name.
    pub fn gen_named(&self, name: &str) -> Option<AlgElem> {
        self.gens.position(name).map(|i| self.gen(i))
    }

    /// Sum.
    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            add_term(&self.ring, &mut out, m.clone(), c);
        }
        out
    }

    /// Difference.
    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        self.add(a, &self.neg(b))
    }

    /// Negation.
    pub fn neg(&self, a: &AlgElem) -> AlgElem {
        AlgElem {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    /// Multiplication by a degree-zero scalar.
    pub fn scale(&self, c: &Poly, a: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (m, x) in &a.terms {
            add_term(&self.ring, &mut out, m.clone(), &self.ring.mul(c, x));
        }
        out
    }

    /// Multiplication by a rational constant.
    pub fn scale_q(&self, c: &Q, a: &AlgElem) -> AlgElem {
        self.scale(&self.ring.constant(c.clone()), a)
    }

    /// Product.
    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((neg, m)) = self.mono_mul(ma, mb) {
                    let mut c = self.ring.mul(ca, cb);
                    if neg {
                        c = self.ring.neg(&c);
                    }
                    add_term(&self.ring, &mut out, m, &c);
                }
            }
        }
        out
    }

    /// Power.
    pub fn pow(&self, a: &AlgElem, e: u32) -> AlgElem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Degree of a homogeneous nonzero element.
    pub fn homogeneous_degree(&self, a: &AlgElem) -> Option<i32> {
        let mut degs = a.terms.keys().map(|m| self.mono_degree(m));
        let first = degs.next()?;
        if degs.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Parity sign `(−1)^{deg}` of a homogeneous element (`true` for odd).
    pub fn is_odd_elem(&self, a: &AlgElem) -> bool {
        self.homogeneous_degree(a).map(is_odd).unwrap_or(false)
    }

    /// The differential, extended by the graded Leibniz rule.
    pub fn d(&self, a: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (m, c) in &a.terms {
            let dm = self.d_mono(m);
            out = self.add(&out, &self.scale(c, &dm));
        }
        out
    }

    fn d_mono(&self, m: &AlgMono) -> AlgElem {
        let pairs: Vec<(usize, u32)> = m.pairs().collect();
        let mut out = AlgElem::zero();
        for (k, &(g, e)) in pairs.iter().enumerate() {
            let prefix = AlgMono::from_pairs(&pairs[..k]);
            let suffix = AlgMono::from_pairs(&pairs[k + 1..]);
            let mid = AlgMono::from_pairs(&[(g, e - 1)]);
            let mut left = self.mul(&self.mono(&prefix), &self.mono(&mid));
            left = self.scale(&self.ring.from_int(e as i64), &left);
            let term = self.mul(&self.mul(&left, &self.diffs[g]), &self.mono(&suffix));
            let term = if is_odd(self.mono_degree(&prefix)) {
                self.neg(&term)
            } else {
                term
            };
            out = self.add(&out, &term);
        }
        out
    }

    /// The monomial basis of degree `j` (as a free `R`-module).
    pub fn basis(&self, j: i32) -> Arc<DegreeBasis> {
        if let Some(b) = self.cache.lock().unwrap().get(&j) {
            return b.clone();
        }
        let mut monos = Vec::new();
        if j <= 0 {
            let mut cur: Vec<(usize, u32)> = Vec::new();
            self.enumerate(0, j, &mut cur, &mut monos);
        }
        monos.sort();
        let index = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let b = Arc::new(DegreeBasis { monos, index });
        self.cache.lock().unwrap().insert(j, b.clone());
        b
    }

    fn enumerate(&self, g: usize, rem: i32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<AlgMono>) {
        if g == self.ngens() {
            if rem == 0 {
                out.push(AlgMono::from_pairs(cur));
            }
            return;
        }
        let deg = self.gen_degree(g);
        let max = if self.is_odd_gen(g) {
            1
        } else {
            (rem / deg).max(0) as u32
        };
        for e in 0..=max {
            let next = rem - deg * e as i32;
            if next > 0 {
                break;
            }
            if e > 0 {
                cur.push((g, e));
            }
            self.enumerate(g + 1, next, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }

    /// Rank of the degree-`j` piece over `R`.
    pub fn rank(&self, j: i32) -> usize {
        self.basis(j).len()
    }

    /// Coordinates of a homogeneous element of degree `j`.
    pub fn coords(&self, a: &AlgElem, j: i32) -> Result<RVec> {
        let b = self.basis(j);
        let mut v = vec![Poly::zero(); b.len()];
        for (m, c) in &a.terms {
            match b.index_of(m) {
                Some(i) => v[i] = self.ring.add(&v[i], c),
                None => return domain(format!("element has a term outside degree {j}")),
            }
        }
        Ok(v)
    }

    /// The element with the given coordinates in degree `j`.
    pub fn from_coords(&self, j: i32, v: &[Poly]) -> AlgElem {
        let b = self.basis(j);
        let mut out = AlgElem::zero();
        for (m, c) in b.monos.iter().zip(v.iter()) {
            add_term(&self.ring, &mut out, m.clone(), c);
        }
        out
    }

    /// Matrix of `d: E^j → E^{j+1}`.
    pub fn diff_matrix(&self, j: i32) -> RMatrix {
        let src = self.basis(j);
        let cols: Vec<RVec> = src
            .monos
            .iter()
            .map(|m| self.coords(&self.d_mono(m), j + 1).expect("homogeneous differential"))
            .collect();
        RMatrix::from_cols(self.rank(j + 1), &cols)
    }

    /// Matrix of left multiplication by a homogeneous `a` of degree `k`: `E^j → E^{j+k}`.
    pub fn mult_matrix(&self, a: &AlgElem, j: i32) -> Result<RMatrix> {
        let k = self.homogeneous_degree(a).unwrap_or(0);
        let src = self.basis(j);
        let mut cols = Vec::with_capacity(src.len());
        for m in &src.monos {
            cols.push(self.coords(&self.mul(a, &self.mono(m)), j + k)?);
        }
        Ok(RMatrix::from_cols(self.rank(j + k), &cols))
    }

    /// Renders an element with generator and variable names.
    pub fn fmt_elem(&self, a: &AlgElem) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = a
            .terms
            .iter()
            .map(|(m, c)| {
                let cs = self.ring.fmt(c);
                if m.is_one() {
                    return cs;
                }
                let ms: Vec<String> = m
                    .pairs()
                    .map(|(g, e)| {
                        let n = if g < self.ngens() {
                            self.gens.name(g).to_string()
                        } else {
                            format!("g{g}")
                        };
                        if e == 1 {
                            n
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
                let ms = ms.join("*");
                if c.is_constant() && c.constant_value() == Some(Q::from_integer(1.into())) {
                    ms
                } else if c.len() == 1 {
                    format!("{cs}*{ms}")
                } else {
                    format!("({cs})*{ms}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn add_term(r: &Ring, out: &mut AlgElem, m: AlgMono, c: &Poly) {
    let c = r.nf(c);
    if c.is_zero() {
        return;
    }
    let entry = out.terms.entry(m);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = r.add(o.get(), &c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Diagnostic report of [`dg_validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// One line per failed identity.
    pub failures: Vec<String>,
}

impl ValidationReport {
    /// Whether every check passed.
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks degrees, exterior relations, `d² = 0`, the Leibniz rule and super-commutativity on
/// generators; lists each failed identity.
pub fn dg_validate(a: &DgAlgebra) -> ValidationReport {
    let mut failures = Vec::new();
    let n = a.ngens();
    for i in 0..n {
        let name = a.gens.name(i);
        let deg = a.gen_degree(i);
        if deg >= 0 {
            failures.push(format!("generator {name} has non-negative degree {deg}"));
        }
        if a.ring.vars().iter().any(|v| v == name) {
            failures.push(format!("generator {name} clashes with a ring variable"));
        }
        let raw = &a.diffs[i];
        for (m, _) in raw.terms() {
            if let Some((g, _)) = m.pairs().find(|&(g, e)| g < n && a.is_odd_gen(g) && e > 1) {
                failures.push(format!(
                    "d({name}) contains the square of the odd generator {}",
                    a.gens.name(g)
                ));
            }
            if m.pairs().any(|(g, _)| g >= n) {
                failures.push(format!("d({name}) uses an unknown generator"));
            }
            if a.mono_degree(m) != deg + 1 {
                failures.push(format!(
                    "d({name}) has a term of degree {} instead of {}",
                    a.mono_degree(m),
                    deg + 1
                ));
            }
        }
        let norm = a.normalize(raw);
        if !a.d(&norm).is_zero() {
            failures.push(format!("d²({name}) ≠ 0"));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a.gen(i), a.gen(j));
            let lhs = a.d(&a.mul(&x, &y));
            let mut rhs = a.mul(&a.d(&x), &y);
            let t = a.mul(&x, &a.d(&y));
            rhs = if a.is_odd_gen(i) {
                a.sub(&rhs, &t)
            } else {
                a.add(&rhs, &t)
            };
            if lhs != rhs {
                failures.push(format!(
                    "Leibniz rule fails on {}·{}",
                    a.gens.name(i),
                    a.gens.name(j)
                ));
            }
            let xy = a.mul(&x, &y);
            let yx = a.mul(&y, &x);
            let expected = if a.is_odd_gen(i) && a.is_odd_gen(j) {
                a.neg(&yx)
            } else {
                yx
            };
            if xy != expected {
                failures.push(format!(
                    "super-commutativity fails on {}·{}",
                    a.gens.name(i),
                    a.gens.name(j)
                ));
            }
        }
    }
    ValidationReport { failures }
}

/// A homomorphism of DG algebras: a ring map in degree zero plus images of the generators.
#[derive(Clone, Debug)]
pub struct AlgMap {
    source: Alg,
    target: Alg,
    ring_map: RingMap,
    images: Vec<AlgElem>,
}

impl AlgMap {
    /// Builds a map, checking degrees and compatibility with the differentials.
    pub fn new(source: &Alg, target: &Alg, ring_map: RingMap, images: Vec<AlgElem>) -> Result<AlgMap> {
        if **ring_map.source() != **source.ring() || **ring_map.target() != **target.ring() {
            return domain("degree-zero map does not match the algebras");
        }
        if images.len() != source.ngens() {
            return domain("wrong number of generator images");
        }
        let images: Vec<AlgElem> = images.iter().map(|x| target.normalize(x)).collect();
        for (i, img) in images.iter().enumerate() {
            if !img.is_zero() && target.homogeneous_degree(img) != Some(source.gen_degree(i)) {
                return domain(format!(
                    "image of {} has the wrong degree",
                    source.generators().name(i)
                ));
            }
        }
        let m = AlgMap {
            source: source.clone(),
            target: target.clone(),
            ring_map,
            images,
        };
        for i in 0..source.ngens() {
            let lhs = target.d(&m.images[i]);
            let rhs = m.apply(source.gen_diff(i));
            if lhs != rhs {
                return domain(format!(
                    "map does not commute with d on {}",
                    source.generators().name(i)
                ));
            }
        }
        Ok(m)
    }

    /// The identity of an algebra.
    pub fn identity(a: &Alg) -> AlgMap {
        AlgMap {
            source: a.clone(),
            target: a.clone(),
            ring_map: RingMap::identity(a.ring()),
            images: (0..a.ngens()).map(|i| a.gen(i)).collect(),
        }
    }

    /// Source algebra.
    pub fn source(&self) -> &Alg {
        &self.source
    }

    /// Target algebra.
    pub fn target(&self) -> &Alg {
        &self.target
    }

    /// Degree-zero ring map.
    pub fn ring_map(&self) -> &RingMap {
        &self.ring_map
    }

    /// Images of the generators.
    pub fn images(&self) -> &[AlgElem] {
        &self.images
    }

    /// Image of a monomial.
    pub fn apply_mono(&self, m: &AlgMono) -> AlgElem {
        let t = &self.target;
        let mut acc = t.one();
        for (g, e) in m.pairs() {
            for _ in 0..e {
                acc = t.mul(&acc, &self.images[g]);
            }
        }
        acc
    }

    /// Image of an element.
    pub fn apply(&self, a: &AlgElem) -> AlgElem {
        let t = &self.target;
        let mut out = AlgElem::zero();
        for (m, c) in a.terms() {
            let img = t.scale(&self.ring_map.apply(c), &self.apply_mono(m));
            out = t.add(&out, &img);
        }
        out
    }

    /// The composite `next ∘ self`.
    pub fn then(&self, next: &AlgMap) -> Result<AlgMap> {
        if *self.target != *next.source {
            return domain("algebra maps are not composable");
        }
        Ok(AlgMap {
            source: self.source.clone(),
            target: next.target.clone(),
            ring_map: self.ring_map.then(&next.ring_map)?,
            images: self.images.iter().map(|x| next.apply(x)).collect(),
        })
    }

    /// Matrix of the map `E^j → F^j` on monomial bases.
    pub fn matrix(&self, j: i32) -> Result<RMatrix> {
        let src = self.source.basis(j);
        let mut cols = Vec::with_capacity(src.len());
        for m in &src.monos {
            cols.push(self.target.coords(&self.apply_mono(m), j)?);
        }
        Ok(RMatrix::from_cols(self.target.rank(j), &cols))
    }
}

/// A tensor product of DG algebras over the common base ring with its two inclusions.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    /// The product algebra; generators of the left factor come first.
    pub alg: Alg,
    /// `b ↦ b ⊗ 1`.
    pub left: AlgMap,
    /// `c ↦ 1 ⊗ c`.
    pub right: AlgMap,
}

fn tag_names(a: &GradedSet, b: &GradedSet, reserved: &[String]) -> (Vec<String>, Vec<String>) {
    let clash = a
        .entries()
        .iter()
        .any(|(n, _)| b.position(n).is_some() || reserved.contains(n))
        || b.entries().iter().any(|(n, _)| reserved.contains(n));
    let tag = |v: &str, k: usize| {
        if v.ends_with(|ch: char| ch.is_ascii_digit()) {
            format!("{v}_{k}")
        } else {
            format!("{v}{k}")
        }
    };
    if !clash {
        return (
            a.entries().iter().map(|e| e.0.clone()).collect(),
            b.entries().iter().map(|e| e.0.clone()).collect(),
        );
    }
    (
        a.entries().iter().map(|e| tag(&e.0, 1)).collect(),
        b.entries().iter().map(|e| tag(&e.0, 2)).collect(),
    )
}

/// `B ⊗ C` over the base ring of coefficients, with the sign rule
/// `(b₁⊗c₁)(b₂⊗c₂) = (−1)^{|c₁||b₂|} b₁b₂ ⊗ c₁c₂`.
pub fn tensor_algebras(b: &Alg, c: &Alg) -> Result<TensorAlgebra> {
    if b.ring().base() != c.ring().base() {
        return domain("algebras have different base rings");
    }
    let tr = tensor_rings(&RingMap::from_base(b.ring()), &RingMap::from_base(c.ring()))?;
    let ring = tr.ring.clone();
    let (nb, nc) = tag_names(&b.gens, &c.gens, ring.vars());
    let mut gens = GradedSet::default();
    for (i, n) in nb.iter().enumerate() {
        gens.push(n.clone(), b.gen_degree(i))?;
    }
    for (i, n) in nc.iter().enumerate() {
        gens.push(n.clone(), c.gen_degree(i))?;
    }
    let embed = |x: &AlgElem, map: &RingMap, shift: usize| -> AlgElem {
        let mut out = AlgElem::zero();
        for (m, coeff) in x.terms() {
            add_term(&ring, &mut out, m.shifted(shift), &map.apply(coeff));
        }
        out
    };
    let mut diffs: Vec<AlgElem> = b.diffs.iter().map(|x| embed(x, &tr.p1, 0)).collect();
    diffs.extend(c.diffs.iter().map(|x| embed(x, &tr.p2, b.ngens())));
    let alg = Arc::new(DgAlgebra::from_parts(&ring, gens, diffs));
    let left = AlgMap {
        source: b.clone(),
        target: alg.clone(),
        ring_map: tr.p1.clone(),
        images: (0..b.ngens()).map(|i| alg.gen(i)).collect(),
    };
    let right = AlgMap {
        source: c.clone(),
        target: alg.clone(),
        ring_map: tr.p2.clone(),
        images: (0..c.ngens()).map(|i| alg.gen(b.ngens() + i)).collect(),
    };
    Ok(TensorAlgebra { alg, left, right })
}
