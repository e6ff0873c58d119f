//! Sweep evaluation. Points run in parallel and come back in grid order.

use hsc_core::bellmeas::{bell_report, optimal_squeezing_with, Encoding, LogicalBasis};
use hsc_core::codes::{
    amplitude_for_mean_photon_with, loss_decomposition, minimal_cutoff, DisplacedFamily, Parity,
};
use hsc_core::fock::OperatorOptions;
use hsc_core::generation::{sweep_point_with, NbarVariant};
use hsc_core::loss::{compensation_optimum_with, Code};
use hsc_core::{Error, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Amplitude;

/// A table row together with the error that spoiled it, if any. Spoiled
/// rows keep their grid coordinates and carry `NaN` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<R> {
    pub row: R,
    pub error: Option<Error>,
}

impl<R> Point<R> {
    fn from_result(res: Result<R, Error>, blank: impl FnOnce() -> R) -> Self {
        match res {
            Ok(row) => Point { row, error: None },
            Err(e) => Point { row: blank(), error: Some(e) },
        }
    }
}

/// `t,xi,alpha_i,p_pi,p_piprime,p_total,fidelity`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenSweepRow {
    pub t: f64,
    pub xi: f64,
    pub alpha_i: f64,
    pub p_pi: f64,
    pub p_piprime: f64,
    pub p_total: f64,
    pub fidelity: f64,
}

/// `nbar,xi_star,p_star`; `alpha` goes to the metadata file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellOptimalRow {
    pub nbar: f64,
    pub xi_star: f64,
    pub p_star: f64,
    #[serde(skip)]
    pub alpha: f64,
}

/// `nbar,code,eta,xi_star,p_success`; `alpha` goes to the metadata file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossCompRow {
    pub nbar: f64,
    pub code: &'static str,
    pub eta: f64,
    pub xi_star: f64,
    pub p_success: f64,
    #[serde(skip)]
    pub alpha: f64,
}

/// Codeword summary at one `(α, ξ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateInfoRow {
    /// `⟨n̂⟩` of `|C⁺⟩`.
    pub nbar: f64,
    pub xi: f64,
    pub alpha: f64,
    /// `⟨n̂⟩` of `|C⁻⟩`.
    pub nbar_odd: f64,
    /// Unnormalized norms `N±`.
    pub norm_even: f64,
    pub norm_odd: f64,
    /// `|c|` and `d` of `â|C⁺⟩ = c|C⁻⟩ + d|C̃⁺⟩`.
    pub loss_c: f64,
    pub loss_d: f64,
    /// Smallest cutoff meeting the tail tolerance.
    pub min_cutoff: usize,
    /// Hybrid Bell measurement success.
    pub bell_success: f64,
}

/// Generation sweep: for each `ξ`, `α_i` realizes `nbar` through `variant`.
pub fn gen_sweep(
    nbar: f64,
    xi_list: &[f64],
    t_grid: &[f64],
    variant: NbarVariant,
    cutoff: usize,
    opts: OperatorOptions,
) -> Vec<Point<GenSweepRow>> {
    let alphas: Vec<Result<f64, Error>> = xi_list
        .par_iter()
        .map(|&xi| amplitude_for_mean_photon_with(nbar, xi, Parity::Even, cutoff, opts))
        .collect();
    let points: Vec<(usize, f64)> = (0..xi_list.len()).flat_map(|i| t_grid.iter().map(move |&t| (i, t))).collect();
    points
        .par_iter()
        .map(|&(i, t)| {
            let xi = xi_list[i];
            let res = alphas[i].clone().and_then(|a| sweep_point_with(t, xi, a, cutoff, variant, opts));
            let alpha_i = match (&alphas[i], variant) {
                (Ok(a), NbarVariant::Initial) => *a,
                (Ok(a), NbarVariant::Final) => a / t.sqrt(),
                (Err(_), _) => f64::NAN,
            };
            let res = res.map(|r| GenSweepRow {
                t: r.t,
                xi: r.xi,
                alpha_i: r.alpha_i,
                p_pi: r.p_pi,
                p_piprime: r.p_piprime,
                p_total: r.p_total,
                fidelity: r.fidelity,
            });
            Point::from_result(res, || GenSweepRow {
                t,
                xi,
                alpha_i,
                p_pi: f64::NAN,
                p_piprime: f64::NAN,
                p_total: f64::NAN,
                fidelity: f64::NAN,
            })
        })
        .collect()
}

/// Optimal squeezing for each `n̄`.
pub fn bell_optimal(nbar: &[f64], xi_grid: &[f64], cutoff: usize, opts: OperatorOptions) -> Vec<Point<BellOptimalRow>> {
    nbar.par_iter()
        .map(|&n| {
            let res = optimal_squeezing_with(n, xi_grid, cutoff, opts)
                .map(|o| BellOptimalRow { nbar: n, xi_star: o.xi_star, p_star: o.p_star, alpha: o.alpha_star });
            Point::from_result(res, || BellOptimalRow { nbar: n, xi_star: f64::NAN, p_star: f64::NAN, alpha: f64::NAN })
        })
        .collect()
}

/// Compensation optimum for each `(n̄, code, η)`, nested in that order.
pub fn loss_comp(
    nbar: &[f64],
    codes: &[Code],
    eta: &[f64],
    xi_grid: &[f64],
    cutoff: usize,
    opts: OperatorOptions,
) -> Vec<Point<LossCompRow>> {
    let mut points = Vec::new();
    for &n in nbar {
        for &code in codes {
            for &e in eta {
                points.push((n, code, e));
            }
        }
    }
    points
        .par_iter()
        .map(|&(n, code, e)| {
            let res = compensation_optimum_with(code, n, e, xi_grid, cutoff, opts).map(|r| LossCompRow {
                nbar: n,
                code: code.name(),
                eta: e,
                xi_star: r.xi_star,
                p_success: r.p_success,
                alpha: r.alpha,
            });
            Point::from_result(res, || LossCompRow {
                nbar: n,
                code: code.name(),
                eta: e,
                xi_star: f64::NAN,
                p_success: f64::NAN,
                alpha: f64::NAN,
            })
        })
        .collect()
}

/// Codeword properties over amplitudes × squeezings.
pub fn state_info(amplitude: &Amplitude, xi_list: &[f64], cutoff: usize, opts: OperatorOptions) -> Vec<Point<StateInfoRow>> {
    let (values, by_nbar) = match amplitude {
        Amplitude::Alpha(v) => (v.as_slice(), false),
        Amplitude::Nbar(v) => (v.as_slice(), true),
    };
    let points: Vec<(f64, f64)> = values.iter().flat_map(|&v| xi_list.iter().map(move |&xi| (v, xi))).collect();
    points
        .par_iter()
        .map(|&(v, xi)| {
            let res = (|| {
                let alpha = if by_nbar { amplitude_for_mean_photon_with(v, xi, Parity::Even, cutoff, opts)? } else { v };
                let a = C64::new(alpha, 0.0);
                let fam = DisplacedFamily::new(C64::new(xi, 0.0), cutoff, opts);
                let even = fam.cat(a, Parity::Even)?;
                let odd = if alpha > 0.0 { fam.cat(a, Parity::Odd)?.mean_photon() } else { f64::NAN };
                let dec = if alpha > 0.0 { Some(loss_decomposition(a, C64::new(xi, 0.0), Parity::Even, cutoff)?) } else { None };
                let bell = if alpha > 0.0 {
                    bell_report(Encoding::Hybrid, &LogicalBasis::with_options(alpha, xi, cutoff, opts)?)?.success
                } else {
                    f64::NAN
                };
                Ok(StateInfoRow {
                    nbar: even.mean_photon(),
                    xi,
                    alpha,
                    nbar_odd: odd,
                    norm_even: fam.cat_norm(a, Parity::Even),
                    norm_odd: fam.cat_norm(a, Parity::Odd),
                    loss_c: dec.as_ref().map_or(f64::NAN, |d| d.c.norm()),
                    loss_d: dec.as_ref().map_or(f64::NAN, |d| d.d.re),
                    min_cutoff: minimal_cutoff(a, C64::new(xi, 0.0), cutoff, opts)?,
                    bell_success: bell,
                })
            })();
            Point::from_result(res, || StateInfoRow {
                nbar: if by_nbar { v } else { f64::NAN },
                xi,
                alpha: if by_nbar { f64::NAN } else { v },
                nbar_odd: f64::NAN,
                norm_even: f64::NAN,
                norm_odd: f64::NAN,
                loss_c: f64::NAN,
                loss_d: f64::NAN,
                min_cutoff: 0,
                bell_success: f64::NAN,
            })
        })
        .collect()
}
