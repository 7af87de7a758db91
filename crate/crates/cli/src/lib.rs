//! Library side of the `digit-moments` command: figure presets, CSV
//! tables, period-average reports and the check suites.

pub mod checks;
pub mod presets;
pub mod table;

use std::fmt::Write as _;

use rug::Float;

use digit_moments::asymptotics::{
    average_estimate, average_with_extrapolation, fourier_coefficient, FourierOptions, PeriodWindow, Weighting,
};
use digit_moments::dirichlet::KempnerConstantsStore;
use digit_moments::moments::{moments_recurrence, Scaling};
use digit_moments::{DigitSet, Error, Precision, Result};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

/// Exit status for a library error: 2 for bad input, 3 when the input
/// is valid but the requested accuracy cannot be reached.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InfeasibleTolerance { .. } | Error::BudgetExceeded { .. } | Error::PrecisionExhausted(_) => {
            EXIT_INFEASIBLE
        }
        Error::Io(_) => EXIT_FAILURE,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Clone)]
pub struct AverageRequest {
    pub digit_set: DigitSet,
    pub s: f64,
    pub scaling: Scaling,
    pub window: PeriodWindow,
    pub weighting: Weighting,
    pub extrapolate: bool,
    pub precision: Precision,
}

pub fn average_report(req: &AverageRequest, store: &KempnerConstantsStore) -> Result<String> {
    let d = &req.digit_set;
    let mut out = String::new();
    let m_max = *req.window.members(req.weighting).end() as usize;
    let seq = moments_recurrence(d, req.s, m_max, req.precision, req.scaling)?;
    let show = |x: &Float| x.to_string_radix(10, Some(12));
    writeln!(
        out,
        "base {} digits {:?} s {} scale {} weighting {}",
        d.base(),
        d.allowed(),
        req.s,
        req.scaling,
        req.weighting
    )
    .unwrap();
    if req.extrapolate {
        let (prev, last) = average_with_extrapolation(&seq, req.window, req.weighting)?;
        writeln!(out, "a_p     {} over {}", show(&last.value), last.window).unwrap();
        writeln!(out, "a_p-1   {} over {}", show(&prev.value), prev.window).unwrap();
        if let Some(x) = &last.extrapolated {
            writeln!(out, "extrap  {}", show(x)).unwrap();
        }
    } else {
        let a = average_estimate(&seq, req.window, req.weighting)?;
        writeln!(out, "a_p     {} over {}", show(&a.value), a.window).unwrap();
    }
    match target(req, store) {
        Ok(line) => out.push_str(&line),
        Err(e) => writeln!(out, "target  unavailable ({e})").unwrap(),
    }
    Ok(out)
}

/// `c_0` times the factor relating `m^s` scaling to the chosen one.
fn target(req: &AverageRequest, store: &KempnerConstantsStore) -> Result<String> {
    let factor = req.scaling.average_factor(req.s, req.precision).ok_or_else(|| {
        Error::InvalidArgument(format!("no average target for scale {} at s = {}", req.scaling, req.s))
    })?;
    let opts = FourierOptions {
        tol: 1e-11,
        precision: Precision::DEFAULT,
        ..Default::default()
    };
    let c0 = fourier_coefficient(&req.digit_set, req.s, 0, &opts, Some(store))?;
    let value = Float::with_val(req.precision.bits(), &c0.value.re * &factor);
    let kind = if c0.certified { "error" } else { "estimated error" };
    Ok(format!(
        "target  {} (c_0 via {}, {} {:.1e})\n",
        value.to_string_radix(10, Some(12)),
        c0.method,
        kind,
        c0.error * factor.to_f64()
    ))
}
