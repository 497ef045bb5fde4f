//! Presented commutative rings, Gröbner bases, syzygies and finitely presented modules.
//!
//! Rings over ℚ or 𝔽_p carry a reduced Gröbner basis in a fixed monomial order (degrevlex in
//! the declared variable order unless chosen otherwise). Rings over ℤ must be finite as
//! ℤ-modules and are handled by integer linear algebra on a monomial basis.

mod groebner;
mod module;
mod mono;
mod parse;
mod poly;
mod ring;

pub use groebner::{buchberger, is_groebner, module_groebner, reduce_poly, MTerm, MVec, ModCtx, Reducer};
pub use module::{
    hilbert_numerator, prune_generators, syzygies, unit_vec, vec_add, vec_is_zero, vec_scale,
    vec_sub, zero_vec, FpModule, IncrementalSpan, LinSys, ModuleInvariants, PrunedModule, RMatrix,
    RVec,
};
pub use mono::{cmp_mterm, ModuleOrder, Mono, MonomialOrder, OrderKind};
pub use parse::parse_poly;
pub use poly::{fmt_mono, Poly, PolyCtx};
pub use ring::{
    localization_map, localize, tensor_rings, Localization, PresentedRing, Regime, Ring, RingMap,
    TensorRing,
};
