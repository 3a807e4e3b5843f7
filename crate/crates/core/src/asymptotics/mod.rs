//! Exact constants of the asymptotic expansions and interval certificates
//! for the explicit two-sided bounds.
//!
//! With `g(n) = (27/4)^n / n^{3/2}` every counting sequence behaves like
//! `C g(n) (1 + s/n + O(1/n^2))`. For pairs whose shortest walk has `k`
//! branches the leading constant is `243 t_k / (4 sqrt(3 pi))`.

mod certify;
mod constants;

pub use certify::{
    empirical_second_order, leading_constant, leading_constant_k, parse_cert_ids, ratio_cn,
    robbins_bounds, BoundCertificate, CertId, CertificateRecord, Certifier, Verdict,
    DEFAULT_PRECISION_CAP, START_PRECISION,
};
pub use constants::{
    rational_interval, s_by_recurrence, s_constant, t_by_recurrence, t_closed, t_constant,
    ConstantFamily, RationalConstant,
};
