//! Hyperarithmetical codes: the closure functions, certified codes in `I`,
//! and the checks relating them to the fixed point of `psi`.

mod algebra;
mod bounded;
mod cert;
mod check;
mod equations;
mod json;
mod pool;
mod programs;

pub use algebra::{build_arithmetical, AlgebraError, SetExpr};
pub use bounded::{hset_member_bounded, BoundedHset};
pub use cert::{
    co_singleton, complement, constantize, hset_member, row, u1, union_of, Cert, EmptyUnion,
    HypCert, Shape,
};
pub use check::{in_I_check, in_i_report, in_i_stage_finite, InIFailure, SAMPLED_ARGS};
pub use equations::{
    abbrev, compare, sweep_co_singleton_cover, sweep_co_singleton_values,
    sweep_complement_f_children, sweep_complement_fixed_point, sweep_complement_g,
    sweep_complement_prime_fixed_point, sweep_g0_constant, sweep_u2_shape, sweep_union_fixed_point,
    sweep_union_specialized, sweep_union_transformer, union_corpus, Check, Failure, Sweep,
    MAX_RECORDED_FAILURES,
};
pub use json::{cert_from_json, cert_to_json, from_json, to_json, CertError, CertJson, ShapeJson};
pub use pool::{
    reduction_identity_check, shipped_pool, CodePool, QStar, ReductionMismatch, ReductionReport,
};
pub use programs::{
    co_singleton_h, co_singleton_r, complement_f, complement_f_rhs, complement_g, complement_x, f0,
    g0, programs, u2_index, u3_index, union_body, union_phi_reference, Programs,
};
