//! Finite polylogarithms over `F_p`, p-adic polylogarithm series and the
//! mod-p shadow of the modified polylogarithm.

mod finite;
mod series;
mod transform;

pub use finite::{
    closed_form_li, finite_li_eval, finite_li_roots, modified_polylog_mod_p, FiniteLi, Fp, FpPoly,
};
pub use series::{li1, modified_polylog_series, polylog_series};
