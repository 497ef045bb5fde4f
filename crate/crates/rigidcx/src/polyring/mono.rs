//! Monomials and monomial orders.

use std::cmp::Ordering;

use smallvec::SmallVec;

/// An exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(pub SmallVec<[u16; 8]>);

impl Mono {
    /// The monomial 1 in `n` variables.
    pub fn one(n: usize) -> Mono {
        Mono(SmallVec::from_elem(0, n))
    }

    /// The variable `x_i` in `n` variables.
    pub fn var(n: usize, i: usize) -> Mono {
        let mut m = Mono::one(n);
        m.0[i] = 1;
        m
    }

    /// Builds a monomial from exponents.
    pub fn from_exps(e: &[u16]) -> Mono {
        Mono(SmallVec::from_slice(e))
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the empty exponent vector.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// True when every exponent is zero.
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Product.
    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Whether `self` divides `o`.
    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// Quotient `o / self`; caller guarantees divisibility.
    pub fn div_into(&self, o: &Mono) -> Mono {
        Mono(o.0.iter().zip(self.0.iter()).map(|(b, a)| b - a).collect())
    }

    /// Least common multiple.
    pub fn lcm(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    /// Whether the supports are disjoint.
    pub fn coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Kind of monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Lexicographic order, `x₀ > x₁ > …`.
    Lex,
    /// Degree reverse lexicographic order, `x₀ > x₁ > …`.
    DegRevLex,
    /// Elimination order: degrevlex on the first `k` variables, ties broken by degrevlex on
    /// the rest. Used internally for ring-map kernels.
    Block(usize),
}

/// A monomial order on the declared variable ranking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    /// The kind of order.
    pub kind: OrderKind,
}

impl MonomialOrder {
    /// Lexicographic order.
    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex }
    }

    /// Degree reverse lexicographic order.
    pub fn degrevlex() -> Self {
        MonomialOrder {
            kind: OrderKind::DegRevLex,
        }
    }

    /// Elimination order for the first `k` variables.
    pub fn block(k: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Block(k),
        }
    }

    /// Compares two monomials (`Greater` means `a > b`).
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match self.kind {
            OrderKind::Lex => a.0.cmp(&b.0),
            OrderKind::DegRevLex => drl(&a.0, &b.0),
            OrderKind::Block(k) => {
                let k = k.min(a.0.len());
                drl(&a.0[..k], &b.0[..k]).then_with(|| drl(&a.0[k..], &b.0[k..]))
            }
        }
    }

    /// Whether the order refines total degree.
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self.kind, OrderKind::DegRevLex)
    }
}

fn drl(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (0..a.len()).rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

/// How module terms `(component, monomial)` are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleOrder {
    /// Position over term: a smaller component index is larger.
    Pot,
    /// Term over position: monomials first, then smaller component index is larger.
    Top,
}

/// Compares module terms under a monomial order and a module order.
pub fn cmp_mterm(
    order: &MonomialOrder,
    morder: ModuleOrder,
    ca: usize,
    a: &Mono,
    cb: usize,
    b: &Mono,
) -> Ordering {
    match morder {
        ModuleOrder::Pot => cb.cmp(&ca).then_with(|| order.cmp(a, b)),
        ModuleOrder::Top => order.cmp(a, b).then_with(|| cb.cmp(&ca)),
    }
}
