//! Spectra of periodic words: transfer polynomials, fixed points, Bloch curves.

mod bloch;
mod fixed_point;
mod transfer;

pub use bloch::{
    bloch_curve, bloch_matrix, bloch_matrix_eigs, isolated_points, principal_sqrt, support_union, CurveGap,
    CurvePoint, IsolatedPoint, SpectralCurve, TaggedPoint, WordSpectrum, DEFAULT_THETA_STEPS,
};
pub use fixed_point::{
    classify_multiplier, continued_fraction_f, fixed_points, fixed_points_with, mobius_fixed_points,
    stable_fixed_points, Branch, FixedPointPair, MARGINAL_BAND,
};
pub use transfer::{
    pqr, pqr_exact, q_closed_form, q_closed_form_exact, q_closed_form_word, transfer_polynomials,
    transfer_polynomials_exact, transfer_polynomials_of, Pqr, TransferWord,
};
