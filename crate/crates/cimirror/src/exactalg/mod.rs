//! Exact arithmetic kernel: rationals, multivariate polynomials, rational
//! functions, truncated q-series and log-decorated series.

pub mod linalg;
pub mod mpoly;
pub mod rat;
pub mod ratfunc;
pub mod series;

pub use mpoly::{Context, Ctx, MPoly, Mono};
pub use rat::{fmt_rat, int, parse_rat, rat, Rat};
pub use ratfunc::{RatFunc, RatFuncError};
pub use series::{series_exp, series_mul, series_revert, Coeff, LogSeries, QSeries, SeriesError};

/// Evaluates a rational function at a named assignment.
pub fn ratfunc_eval(f: &RatFunc, assignment: &[(&str, Rat)]) -> Result<Rat, RatFuncError> {
    let ctx = f.ctx();
    let mut vals = vec![Rat::from_integer(0.into()); ctx.len()];
    let mut seen = vec![false; ctx.len()];
    for (name, v) in assignment {
        if let Some(i) = ctx.index(name) {
            vals[i] = v.clone();
            seen[i] = true;
        }
    }
    for (i, s) in seen.iter().enumerate() {
        if !s && (f.numer().involves(i) || f.denom_factors().any(|(p, _)| p.involves(i))) {
            return Err(RatFuncError::Unassigned(ctx.names()[i].clone()));
        }
    }
    f.eval(&vals)
}
