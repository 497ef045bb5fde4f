//! The declaration language read by the command-line front end.
//!
//! A program is a sequence of `;`-terminated statements; `#` starts a comment. Declarations
//! bind names to rings, maps, modules, integer matrices and module homomorphisms; every other
//! statement is a job for one verb.
//!
//! ```text
//! ring B = QQ[x] / (x^2);
//! ring C = QQ[x, y] order lex;
//! ring L = localize C at (x);
//! map g : B -> C = (x);
//! module M over B = free 1;
//! module N over B = B^2 / ((x, 0), (0, x));
//! module K over B = cyclic (x);
//! module W over C = omega 2;
//! matrix S = [[2, 0], [0, 3]];
//! hom phi : M -> N = [[x], [0]];
//! sq B over QQ module M window -4 0;
//! ```

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{BaseRing, ExactMatrix, Q};
use crate::polyring::{
    localize, parse_poly, FpModule, MonomialOrder, Poly, PolyCtx, PresentedRing, RMatrix, RVec, Ring, RingMap,
};
use crate::smoothdiff::omega_power;

/// How a rigidifier is altered before `verify-rigid` checks it.
#[derive(Clone, Debug)]
pub enum Perturbation {
    /// Keep the computed rigidifier.
    None,
    /// Replace it by zero.
    Zero,
    /// Multiply it by `c ⊗ 1`.
    Scale(Poly),
}

/// Options of a squaring job.
#[derive(Clone, Debug)]
pub struct SqOptions {
    /// The coefficient ring `A`.
    pub over: BaseRing,
    /// The degree in which the module is placed.
    pub degree: i32,
    /// The requested window, if given in the statement.
    pub window: Option<(i32, i32)>,
    /// The resolution bound, if given in the statement.
    pub bound: Option<i32>,
    /// Use the flat route.
    pub flat: bool,
}

/// A job of the oracle verb.
#[derive(Clone, Debug)]
pub enum OracleJob {
    /// Compare the reduced Gröbner basis of a ring's ideal with the unoptimized loop.
    Groebner(Ring),
    /// Compare Smith invariants with determinantal divisors.
    Snf(ExactMatrix),
    /// Compare syzygies with Schreyer's construction.
    Syz(Ring, Vec<Poly>),
    /// Compare the squaring of `B` over its coefficients with a direct expansion.
    Sq(Ring, SqOptions),
}

/// One job, with every referenced object resolved.
#[derive(Clone, Debug)]
pub enum Job {
    /// Reduced Gröbner basis of the ring's defining ideal.
    Groebner(Ring),
    /// Smith normal form of an integer matrix.
    Snf(ExactMatrix),
    /// Cohomology of the Koszul complex on a sequence.
    Koszul(Ring, Vec<Poly>),
    /// Semifree resolution of the ring over its coefficients, up to `bound`.
    Resolve { ring: Ring, bound: i32 },
    /// Cohomology of the square of a module.
    Sq { ring: Ring, module: FpModule, opts: SqOptions },
    /// The square of a module homomorphism.
    SqMor { ring: Ring, src: FpModule, tgt: FpModule, phi: RMatrix, opts: SqOptions },
    /// Cup-product coherence along a polynomial tower.
    Cup(RingMap),
    /// The `k`-th exterior power of the differentials of a map.
    Omega(RingMap, i32),
    /// `Ext^p` computed from the Koszul complex on a regular sequence.
    Ext { ring: Ring, seq: Vec<Poly>, module: FpModule, p: i32 },
    /// The diagonal idempotent of an étale map.
    Etale(RingMap),
    /// The rigid complex transported along a finite free map.
    FlatShriek(RingMap),
    /// The rigid complex of top forms along a smooth map.
    Sharp(RingMap),
    /// Trace rigidity along a finite free map, with an optional scan of unit multiples.
    Trace { map: RingMap, scan: Option<i64> },
    /// Builds and verifies a rigid complex for an algebra.
    RigidExists(Ring),
    /// Verifies the rigid complex of an algebra after a perturbation of its rigidifier.
    VerifyRigid { ring: Ring, perturbation: Perturbation },
    /// A comparison against a brute-force oracle.
    Oracle(OracleJob),
}

/// A job together with the verb and the line it came from.
#[derive(Clone, Debug)]
pub struct JobSpec {
    /// The verb, as written.
    pub verb: String,
    /// The statement's first line (1-based).
    pub line: usize,
    /// The resolved job.
    pub job: Job,
}

/// Every verb accepted as a statement.
pub const VERBS: &[&str] = &[
    "groebner", "snf", "koszul", "resolve", "sq", "sq-mor", "cup", "omega", "ext", "etale",
    "flat-shriek", "sharp", "trace", "rigid-exists", "verify-rigid", "oracle",
];

#[derive(Clone, Debug)]
struct Hom {
    src: FpModule,
    tgt: FpModule,
    matrix: RMatrix,
}

#[derive(Default)]
struct Env {
    rings: BTreeMap<String, Ring>,
    maps: BTreeMap<String, RingMap>,
    modules: BTreeMap<String, FpModule>,
    matrices: BTreeMap<String, ExactMatrix>,
    homs: BTreeMap<String, Hom>,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    default_base: BaseRing,
    env: &'a mut Env,
}

fn line_col(chars: &[char], pos: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for &c in &chars[..pos.min(chars.len())] {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

impl<'a> Cursor<'a> {
    fn err_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T> {
        let (line, column) = line_col(&self.chars, pos);
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        self.err_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c == '#' {
                while self.pos < self.chars.len() && self.chars[self.pos] != '\n' {
                    self.pos += 1;
                }
            } else if c.is_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn eat_arrow(&mut self) -> Result<()> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&'-') && self.chars.get(self.pos + 1) == Some(&'>') {
            self.pos += 2;
            Ok(())
        } else {
            self.err("expected '->'")
        }
    }

    /// A word: letters, digits, underscores and inner hyphens.
    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            let inner_hyphen = c == '-'
                && self.pos > start
                && self.chars.get(self.pos + 1).is_some_and(|n| n.is_alphabetic());
            if c.is_alphanumeric() || c == '_' || inner_hyphen {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos || self.chars[start].is_ascii_digit() {
            self.pos = start;
            return self.err("expected a name");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn peek_word(&mut self) -> Option<String> {
        let save = self.pos;
        let w = self.word().ok();
        self.pos = save;
        w
    }

    fn keyword(&mut self, k: &str) -> Result<()> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.word() {
            Ok(w) if w == k => Ok(()),
            _ => self.err_at(at, format!("expected '{k}'")),
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if self.peek_word().as_deref() == Some(k) {
            let _ = self.word();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| self.err_at(start, "expected an integer"))
    }

    fn small_int(&mut self) -> Result<i32> {
        let at = self.pos;
        let v = self.int()?;
        i32::try_from(v).or_else(|_| self.err_at(at, "integer out of range"))
    }

    /// The raw text between a balanced pair of delimiters, with the position of its first
    /// character. The cursor must be on the opening delimiter.
    fn balanced(&mut self, open: char, close: char) -> Result<(String, usize)> {
        self.skip_ws();
        let at = self.pos;
        self.expect(open)?;
        let start = self.pos;
        let mut depth = 1;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    let text = self.chars[start..self.pos].iter().collect();
                    self.pos += 1;
                    return Ok((text, start));
                }
            }
            self.pos += 1;
        }
        self.err_at(at, format!("unclosed '{open}'"))
    }

    fn split_top(text: &str, start: usize) -> Vec<(String, usize)> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut begin = 0;
        for (i, &c) in chars.iter().enumerate() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => {
                    out.push((chars[begin..i].iter().collect(), start + begin));
                    begin = i + 1;
                }
                _ => {}
            }
        }
        let last: String = chars[begin..].iter().collect();
        if !(out.is_empty() && last.trim().is_empty()) {
            out.push((last, start + begin));
        }
        out
    }

    fn poly_at(&self, ctx: &PolyCtx, names: &[String], text: &str, start: usize) -> Result<Poly> {
        parse_poly(ctx, names, text).or_else(|e| match e {
            Error::Parse { column, message, .. } => self.err_at(start + column - 1, message),
            other => Err(other),
        })
    }

    fn poly_in(&self, r: &Ring, text: &str, start: usize) -> Result<Poly> {
        Ok(r.nf(&self.poly_at(r.ctx(), r.vars(), text, start)?))
    }

    /// `( p₁, …, p_k )` parsed in `r`.
    fn poly_list(&mut self, r: &Ring) -> Result<Vec<Poly>> {
        let (text, start) = self.balanced('(', ')')?;
        Self::split_top(&text, start)
            .into_iter()
            .map(|(t, s)| self.poly_in(r, &t, s))
            .collect()
    }

    /// `[[a, b], [c, d]]` with entries parsed by `entry`.
    fn matrix_rows<T>(&mut self, mut entry: impl FnMut(&Self, &str, usize) -> Result<T>) -> Result<Vec<Vec<T>>> {
        let (text, start) = self.balanced('[', ']')?;
        let mut rows = Vec::new();
        for (row, s) in Self::split_top(&text, start) {
            let trimmed = row.trim_start();
            let lead = row.len() - trimmed.len();
            if !trimmed.starts_with('[') || !trimmed.trim_end().ends_with(']') {
                return self.err_at(s, "expected a bracketed row");
            }
            let inner = &trimmed.trim_end()[1..trimmed.trim_end().len() - 1];
            let inner_start = s + row[..lead].chars().count() + 1;
            let mut out = Vec::new();
            for (t, ts) in Self::split_top(inner, inner_start) {
                out.push(entry(self, &t, ts)?);
            }
            rows.push(out);
        }
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return self.err_at(start, "rows of different lengths");
        }
        Ok(rows)
    }

    fn base_ring(&mut self) -> Result<BaseRing> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let w = self.word()?;
        match w.as_str() {
            "QQ" => Ok(BaseRing::Rationals),
            "ZZ" => Ok(BaseRing::Integers),
            "Fp" | "GF" => {
                self.expect('(')?;
                let p_at = self.pos;
                let p = self.int()?;
                self.expect(')')?;
                u64::try_from(p)
                    .ok()
                    .and_then(|p| BaseRing::prime_field(p).ok())
                    .map_or_else(|| self.err_at(p_at, "expected a prime"), Ok)
            }
            _ => self.err_at(at, format!("unknown coefficient ring '{w}'")),
        }
    }

    fn name_of<T: Clone>(&mut self, pick: impl Fn(&Env) -> &BTreeMap<String, T>) -> Result<T> {
        self.skip_ws();
        let at = self.pos;
        let n = self.word()?;
        let table = pick(self.env);
        match table.get(&n) {
            Some(v) => Ok(v.clone()),
            None => self.err_at(at, format!("undefined symbol {n}")),
        }
    }

    fn ring(&mut self) -> Result<Ring> {
        self.name_of(|e| &e.rings)
    }

    /// A map name, or a ring name standing for its structure map over the coefficients.
    fn map_or_ring(&mut self) -> Result<RingMap> {
        self.skip_ws();
        let at = self.pos;
        let n = self.word()?;
        if let Some(f) = self.env.maps.get(&n) {
            return Ok(f.clone());
        }
        if let Some(r) = self.env.rings.get(&n) {
            return Ok(RingMap::from_base(r));
        }
        self.err_at(at, format!("undefined symbol {n}"))
    }

    fn module_over(&mut self, r: &Ring) -> Result<FpModule> {
        self.skip_ws();
        let at = self.pos;
        let n = self.word()?;
        if let Some(m) = self.env.modules.get(&n) {
            if **m.ring() != **r {
                return self.err_at(at, format!("module {n} is not over the job's ring"));
            }
            return Ok(m.clone());
        }
        match self.env.rings.get(&n) {
            Some(b) if **b == **r => Ok(FpModule::free(r, 1)),
            Some(_) => self.err_at(at, format!("{n} is not the job's ring")),
            None => self.err_at(at, format!("undefined symbol {n}")),
        }
    }

    fn end(&mut self) -> Result<()> {
        self.expect(';')
    }

    fn ring_decl(&mut self) -> Result<()> {
        let name = self.word()?;
        self.expect('=')?;
        if self.eat_keyword("localize") {
            let r = self.ring()?;
            self.keyword("at")?;
            let s = self.poly_list(&r)?;
            if s.len() != 1 {
                return self.err("localize inverts exactly one element");
            }
            let l = localize(&r, &s[0])?;
            self.env.rings.insert(name, l);
            return self.end();
        }
        let base = if self.peek() == Some('[') {
            self.default_base
        } else {
            self.base_ring()?
        };
        let (vars_text, vstart) = self.balanced('[', ']')?;
        let mut vars = Vec::new();
        for (v, s) in Self::split_top(&vars_text, vstart) {
            let v = v.trim().to_string();
            if v.is_empty() || !v.chars().all(|c| c.is_alphanumeric() || c == '_') || v.starts_with(|c: char| c.is_ascii_digit()) {
                return self.err_at(s, "malformed variable name");
            }
            if vars.contains(&v) {
                return self.err_at(s, format!("variable {v} declared twice"));
            }
            vars.push(v);
        }
        let mut gen_texts = Vec::new();
        if self.eat('/') {
            let (text, start) = self.balanced('(', ')')?;
            gen_texts = Self::split_top(&text, start);
        }
        let order = if self.eat_keyword("order") {
            let at = self.pos;
            match self.word()?.as_str() {
                "lex" => MonomialOrder::lex(),
                "degrevlex" => MonomialOrder::degrevlex(),
                _ => return self.err_at(at, "expected 'lex' or 'degrevlex'"),
            }
        } else {
            MonomialOrder::degrevlex()
        };
        let ctx = PolyCtx::new(vars.len(), order, base);
        let gens = gen_texts
            .iter()
            .map(|(t, s)| self.poly_at(&ctx, &vars, t, *s))
            .collect::<Result<Vec<_>>>()?;
        let r = PresentedRing::with_order(base, vars, order, gens)?;
        self.env.rings.insert(name, r);
        self.end()
    }

    fn map_decl(&mut self) -> Result<()> {
        let name = self.word()?;
        self.expect(':')?;
        let src = self.ring()?;
        self.eat_arrow()?;
        let tgt = self.ring()?;
        self.expect('=')?;
        let at = self.pos;
        let images = self.poly_list(&tgt)?;
        if images.len() != src.nvars() {
            return self.err_at(at, format!("expected {} images", src.nvars()));
        }
        let f = RingMap::new(&src, &tgt, images)?;
        self.env.maps.insert(name, f);
        self.end()
    }

    fn vector_list(&mut self, r: &Ring, n: usize) -> Result<Vec<RVec>> {
        let (text, start) = self.balanced('(', ')')?;
        let mut out = Vec::new();
        for (v, s) in Self::split_top(&text, start) {
            let trimmed = v.trim();
            let lead = v.chars().take_while(|c| c.is_whitespace()).count();
            if !(trimmed.starts_with('(') && trimmed.ends_with(')')) {
                return self.err_at(s, "expected a parenthesized vector");
            }
            let inner = &trimmed[1..trimmed.len() - 1];
            let entries = Self::split_top(inner, s + lead + 1);
            if entries.len() != n {
                return self.err_at(s, format!("expected a vector of length {n}"));
            }
            out.push(entries.iter().map(|(t, ts)| self.poly_in(r, t, *ts)).collect::<Result<_>>()?);
        }
        Ok(out)
    }

    fn module_decl(&mut self) -> Result<()> {
        let name = self.word()?;
        self.keyword("over")?;
        let r = self.ring()?;
        self.expect('=')?;
        let at = {
            self.skip_ws();
            self.pos
        };
        let m = if self.eat_keyword("free") {
            let n = self.int()?;
            FpModule::free(&r, usize::try_from(n).or_else(|_| self.err_at(at, "negative rank"))?)
        } else if self.eat_keyword("cyclic") {
            let ideal = self.poly_list(&r)?;
            FpModule::cyclic(&r, &ideal)
        } else if self.eat_keyword("omega") {
            let save = self.pos;
            let u = match self.peek_word().and_then(|w| self.env.maps.get(&w).cloned()) {
                Some(f) => {
                    let _ = self.word();
                    f
                }
                None => {
                    self.pos = save;
                    RingMap::from_base(&r)
                }
            };
            let k = self.small_int()?;
            let m = omega_power(&u, k)?;
            if **m.ring() != *r {
                return self.err_at(at, "the map does not end in the module's ring");
            }
            m
        } else {
            let b = self.ring()?;
            if *b != *r {
                return self.err_at(at, "the free module must be over the module's ring");
            }
            let n = if self.eat('^') { self.int()? } else { 1 };
            let n = usize::try_from(n).or_else(|_| self.err_at(at, "negative rank"))?;
            let rels = if self.eat('/') { self.vector_list(&r, n)? } else { Vec::new() };
            FpModule::new(&r, n, rels)?
        };
        self.env.modules.insert(name, m);
        self.end()
    }

    fn matrix_decl(&mut self) -> Result<()> {
        let name = self.word()?;
        self.expect('=')?;
        let rows = self.matrix_rows(|c, t, s| {
            t.trim()
                .parse::<Q>()
                .or_else(|_| c.err_at(s, format!("malformed number '{}'", t.trim())))
        })?;
        let integral = rows.iter().flatten().all(|x| x.is_integer());
        let base = if integral { BaseRing::Integers } else { BaseRing::Rationals };
        let m = ExactMatrix::from_rows(base, rows)?;
        self.env.matrices.insert(name, m);
        self.end()
    }

    fn hom_decl(&mut self) -> Result<()> {
        let name = self.word()?;
        self.expect(':')?;
        let src = self.name_of(|e| &e.modules)?;
        self.eat_arrow()?;
        let tgt = self.name_of(|e| &e.modules)?;
        if **src.ring() != **tgt.ring() {
            return self.err("source and target are over different rings");
        }
        self.expect('=')?;
        let at = self.pos;
        let r = src.ring().clone();
        let rows = self.matrix_rows(|c, t, s| c.poly_in(&r, t, s))?;
        if rows.len() != tgt.ngens() || rows.iter().any(|row| row.len() != src.ngens()) {
            return self.err_at(at, format!("expected a {} × {} matrix", tgt.ngens(), src.ngens()));
        }
        let mut matrix = RMatrix::zeros(tgt.ngens(), src.ngens());
        for (i, row) in rows.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                matrix.set(i, j, x);
            }
        }
        self.env.homs.insert(name, Hom { src, tgt, matrix });
        self.end()
    }

    fn check_over(&self, r: &Ring, opts: &SqOptions, at: usize) -> Result<()> {
        if r.base() != opts.over {
            return self.err_at(at, format!("{} is not an algebra over {}", r.vars().join(","), opts.over));
        }
        Ok(())
    }

    fn job(&mut self, verb: &str) -> Result<Job> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let job = match verb {
            "groebner" => Job::Groebner(self.ring()?),
            "snf" => Job::Snf(self.name_of(|e| &e.matrices)?),
            "koszul" => {
                let r = self.ring()?;
                Job::Koszul(r.clone(), self.poly_list(&r)?)
            }
            "resolve" => {
                let ring = self.ring()?;
                let bound = if self.eat_keyword("bound") { self.small_int()? } else { 4 };
                Job::Resolve { ring, bound }
            }
            "sq" => {
                let ring = self.ring()?;
                let opts = self.sq_options_with_module(&ring, at)?;
                Job::Sq { ring, module: opts.0, opts: opts.1 }
            }
            "sq-mor" => {
                let ring = self.ring()?;
                self.keyword("over")?;
                let over = self.base_ring()?;
                self.keyword("hom")?;
                let hom = self.name_of(|e| &e.homs)?;
                let opts = SqOptions { over, degree: 0, window: None, bound: None, flat: false };
                let opts = self.trailing_sq_options(opts)?;
                self.check_over(&ring, &opts, at)?;
                if **hom.src.ring() != *ring {
                    return self.err_at(at, "the homomorphism is not over the job's ring");
                }
                Job::SqMor { ring, src: hom.src, tgt: hom.tgt, phi: hom.matrix, opts }
            }
            "cup" => Job::Cup(self.map_or_ring()?),
            "omega" => {
                let u = self.map_or_ring()?;
                Job::Omega(u, self.small_int()?)
            }
            "ext" => {
                let ring = self.ring()?;
                let seq = self.poly_list(&ring)?;
                self.keyword("module")?;
                let module = self.module_over(&ring)?;
                self.keyword("degree")?;
                let p = self.small_int()?;
                Job::Ext { ring, seq, module, p }
            }
            "etale" => Job::Etale(self.map_or_ring()?),
            "flat-shriek" => Job::FlatShriek(self.map_or_ring()?),
            "sharp" => Job::Sharp(self.map_or_ring()?),
            "trace" => {
                let map = self.map_or_ring()?;
                let scan = if self.eat_keyword("scan") { Some(self.int()?) } else { None };
                Job::Trace { map, scan }
            }
            "rigid-exists" => Job::RigidExists(self.ring()?),
            "verify-rigid" => {
                let ring = self.ring()?;
                let perturbation = if self.eat_keyword("rho") {
                    let pat = self.pos;
                    match self.word()?.as_str() {
                        "zero" => Perturbation::Zero,
                        "scale" => {
                            let c = self.poly_list(&ring)?;
                            if c.len() != 1 {
                                return self.err_at(pat, "scale takes one element");
                            }
                            Perturbation::Scale(c[0].clone())
                        }
                        _ => return self.err_at(pat, "expected 'zero' or 'scale'"),
                    }
                } else {
                    Perturbation::None
                };
                Job::VerifyRigid { ring, perturbation }
            }
            "oracle" => {
                let vat = {
                    self.skip_ws();
                    self.pos
                };
                let sub = self.word()?;
                Job::Oracle(match sub.as_str() {
                    "groebner" => OracleJob::Groebner(self.ring()?),
                    "snf" => OracleJob::Snf(self.name_of(|e| &e.matrices)?),
                    "syz" => {
                        let r = self.ring()?;
                        let elems = self.poly_list(&r)?;
                        OracleJob::Syz(r, elems)
                    }
                    "sq" => {
                        let ring = self.ring()?;
                        let (module, opts) = self.sq_options_with_module(&ring, at)?;
                        if module.ngens() != 1 || !module.relations().is_empty() || opts.degree != 0 {
                            return self.err_at(at, "the squaring oracle takes M = B in degree 0");
                        }
                        OracleJob::Sq(ring, opts)
                    }
                    _ => return self.err_at(vat, format!("no oracle for '{sub}'")),
                })
            }
            _ => unreachable!("verbs are checked before dispatch"),
        };
        self.end()?;
        Ok(job)
    }

    fn trailing_sq_options(&mut self, mut opts: SqOptions) -> Result<SqOptions> {
        loop {
            if self.eat_keyword("degree") {
                opts.degree = self.small_int()?;
            } else if self.eat_keyword("window") {
                opts.window = Some((self.small_int()?, self.small_int()?));
            } else if self.eat_keyword("bound") {
                opts.bound = Some(self.small_int()?);
            } else if self.eat_keyword("flat") {
                opts.flat = true;
            } else {
                return Ok(opts);
            }
        }
    }

    fn sq_options_with_module(&mut self, ring: &Ring, at: usize) -> Result<(FpModule, SqOptions)> {
        self.keyword("over")?;
        let over = self.base_ring()?;
        self.keyword("module")?;
        let module = self.module_over(ring)?;
        let opts = SqOptions { over, degree: 0, window: None, bound: None, flat: false };
        let opts = self.trailing_sq_options(opts)?;
        self.check_over(ring, &opts, at)?;
        Ok((module, opts))
    }
}

/// Parses a program: declarations are evaluated in order and every job statement is returned
/// with its references resolved. `default_base` is used by rings declared without one.
pub fn parse_input(text: &str, default_base: BaseRing) -> Result<Vec<JobSpec>> {
    let mut env = Env::default();
    let mut c = Cursor { chars: text.chars().collect(), pos: 0, default_base, env: &mut env };
    let mut jobs = Vec::new();
    while c.peek().is_some() {
        let at = c.pos;
        let (line, _) = line_col(&c.chars, at);
        let w = c.word()?;
        match w.as_str() {
            "ring" => c.ring_decl()?,
            "map" => c.map_decl()?,
            "module" => c.module_decl()?,
            "matrix" => c.matrix_decl()?,
            "hom" => c.hom_decl()?,
            v if VERBS.contains(&v) => {
                let job = c.job(v)?;
                jobs.push(JobSpec { verb: v.to_string(), line, job });
            }
            _ => return c.err_at(at, format!("unknown verb '{w}'")),
        }
    }
    Ok(jobs)
}
