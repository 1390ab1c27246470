//! Eigenvalue comparison inequalities and Weyl-law sanity checks.
//!
//! Every check produces [`InequalityReport`] rows stating `lhs >= rhs`, with
//! `slack = lhs - rhs` and `holds` iff `slack >= -tol`. Closed-form spectra
//! use `tol = 1e-10`. Finite-element spectra use twice a Richardson estimate
//! of the discretization error, obtained from meshes of size `h` and `2h`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use libm::{fabs, sinh, sqrt, tanh};

use crate::closed_form::{CanonicalDomain, EigenSequence, ModeLabel, ProblemKind, Provenance};
use crate::error::{Error, Result};
use crate::fem;
use crate::geometry::{DomainKind, DomainSpec, GeometricConstants, Point2, geometric_constants};
use crate::specfun::{bessel_prime_zeros, robin_zeros};

/// Tolerance for comparisons between closed-form values.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `sigma_k >= h_min mu_k / (2 r_max sqrt(mu_k) + C0)`.
    KuttlerSigillito,
    /// `mu_k / sigma_1 >= (lambda_k^alpha - mu_k) / alpha`.
    RobinComparison,
    /// `mu_k / sigma_1 >= d lambda_k / d alpha` at `alpha = 0`.
    RobinDerivative,
}

impl Theorem {
    pub fn id(&self) -> &'static str {
        match self {
            Theorem::KuttlerSigillito => "kuttler_sigillito",
            Theorem::RobinComparison => "robin_comparison",
            Theorem::RobinDerivative => "robin_derivative",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Where the eigenvalues of a check come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumSource {
    ClosedForm,
    Fem { h: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub theorem: Theorem,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub holds: bool,
    /// The bound is vacuous (`h_min <= 0` for Kuttler-Sigillito).
    pub trivial: bool,
    pub lhs_provenance: Provenance,
    pub rhs_provenance: Provenance,
}

impl InequalityReport {
    pub fn new(
        theorem: Theorem,
        k: usize,
        lhs: f64,
        rhs: f64,
        tol: f64,
        lhs_provenance: Provenance,
        rhs_provenance: Provenance,
    ) -> Self {
        let slack = lhs - rhs;
        InequalityReport {
            theorem,
            k,
            lhs,
            rhs,
            slack,
            tol,
            holds: slack >= -tol,
            trivial: false,
            lhs_provenance,
            rhs_provenance,
        }
    }
}

/// `h_min mu / (2 r_max sqrt(mu) + C0)`, zero at `mu = 0`.
pub fn ks_bound(mu: f64, constants: &GeometricConstants) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    constants.h_min * mu / (2.0 * constants.r_max * sqrt(mu) + constants.c0)
}

/// The Kuttler-Sigillito comparison for given spectra, one row per `k <= count`.
pub fn verify_ks_spectra(
    constants: &GeometricConstants,
    sigma: &EigenSequence,
    mu: &EigenSequence,
    count: usize,
    tolerances: &[f64],
) -> Result<Vec<InequalityReport>> {
    if sigma.kind != ProblemKind::SteklovDirichlet || mu.kind != ProblemKind::NeumannDirichlet {
        return Err(Error::MismatchedSpectra(format!(
            "expected steklov and neumann-dirichlet spectra, got {} and {}",
            sigma.kind, mu.kind
        )));
    }
    if sigma.len() < count || mu.len() < count || tolerances.len() < count {
        return Err(Error::MismatchedSpectra(format!(
            "need {count} entries, have {} sigma and {} mu",
            sigma.len(),
            mu.len()
        )));
    }
    let trivial = constants.h_min <= 0.0;
    Ok((1..=count)
        .map(|k| {
            let rhs = ks_bound(mu.entries[k - 1].value, constants);
            let mut r = InequalityReport::new(
                Theorem::KuttlerSigillito,
                k,
                sigma.entries[k - 1].value,
                rhs,
                tolerances[k - 1],
                sigma.provenance,
                mu.provenance,
            );
            r.trivial = trivial;
            r
        })
        .collect())
}

/// Eigenvalues on meshes of size `h` and `2h` and the per-eigenvalue
/// Richardson error estimate `|x_h - x_2h| / 3` of a second-order method.
pub fn fem_with_error(domain: &DomainSpec, kind: ProblemKind, h: f64, count: usize) -> Result<(EigenSequence, Vec<f64>)> {
    let fine = fem::domain_spectrum(domain, kind, h, count)?;
    let coarse = fem::domain_spectrum(domain, kind, 2.0 * h, count)?;
    let errors = fine.entries.iter().zip(&coarse.entries).map(|(f, c)| fabs(f.value - c.value) / 3.0).collect();
    Ok((fine, errors))
}

fn closed_form_domain(domain: &DomainSpec) -> Result<CanonicalDomain> {
    CanonicalDomain::recognize(domain)
        .ok_or_else(|| Error::Unsupported("no closed form for this domain and partition".into()))
}

/// The Kuttler-Sigillito inequality for `k = 1..=count` on a Euclidean domain
/// with base point `p`.
pub fn verify_ks(domain: &DomainSpec, p: Point2, count: usize, source: SpectrumSource) -> Result<Vec<InequalityReport>> {
    if !domain.is_euclidean() {
        return Err(Error::Unsupported(
            "mixed spectra on the hyperbolic disk have no closed form; use hyperbolic_mu_upper_bound".into(),
        ));
    }
    let constants = geometric_constants(domain, p, 0.0)?;
    match source {
        SpectrumSource::ClosedForm => {
            let canonical = closed_form_domain(domain)?;
            let sigma = canonical.spectrum(ProblemKind::SteklovDirichlet, count)?;
            let mu = canonical.spectrum(ProblemKind::NeumannDirichlet, count)?;
            verify_ks_spectra(&constants, &sigma, &mu, count, &alloc::vec![CLOSED_FORM_TOLERANCE; count])
        }
        SpectrumSource::Fem { h } => {
            let (sigma, sigma_err) = fem_with_error(domain, ProblemKind::SteklovDirichlet, h, count)?;
            let (mu, mu_err) = fem_with_error(domain, ProblemKind::NeumannDirichlet, h, count)?;
            let tol: Vec<f64> = (0..count)
                .map(|i| {
                    let m = mu.entries[i].value;
                    let bound_err = fabs(ks_bound(m + mu_err[i], &constants) - ks_bound(m, &constants));
                    2.0 * (sigma_err[i] + bound_err)
                })
                .collect();
            verify_ks_spectra(&constants, &sigma, &mu, count, &tol)
        }
    }
}

/// `R mu / (2 R sqrt(mu) + C0)` for the geodesic ball of radius `R` in the
/// simply connected plane of curvature `kappa`, with `C0 = 2` for
/// `kappa >= 0` and `C0 = 1 + R cot_kappa(R)` for `kappa < 0`.
pub fn ball_corollary_bound(radius: f64, kappa: f64, mu: f64) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    radius * mu / (2.0 * radius * sqrt(mu) + ball_c0(radius, kappa))
}

fn ball_c0(radius: f64, kappa: f64) -> f64 {
    if kappa >= 0.0 {
        2.0
    } else {
        let s = sqrt(-kappa);
        1.0 + radius * s / tanh(radius * s) / s
    }
}

/// Largest `mu_k(R)` compatible with the ball bound on the hyperbolic disk:
/// the root of `R mu / (2 R sqrt(mu) + 1 + R coth R) = sigma_k(R)`.
pub fn hyperbolic_mu_upper_bound(radius: f64, k: usize) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k}: the bound needs k >= 2")));
    }
    let sigma = (k / 2) as f64 / sinh(radius);
    let f = |mu: f64| ball_corollary_bound(radius, -1.0, mu);
    let mut hi = 1.0;
    while f(hi) < sigma {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < sigma {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The Robin comparison for given spectra, one row per `k <= count`.
pub fn verify_robin(
    sigma1: f64,
    mu: &EigenSequence,
    lambda: &EigenSequence,
    alpha: f64,
    count: usize,
    tolerances: &[f64],
) -> Result<Vec<InequalityReport>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha}: the ratio (lambda - mu) / alpha needs alpha > 0"
        )));
    }
    if !(sigma1 > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma_1 = {sigma1} must be positive")));
    }
    if mu.kind != ProblemKind::NeumannDirichlet || lambda.kind != (ProblemKind::RobinDirichlet { alpha }) {
        return Err(Error::MismatchedSpectra(format!(
            "expected neumann-dirichlet and robin(alpha={alpha}) spectra, got {} and {}",
            mu.kind, lambda.kind
        )));
    }
    if mu.len() < count || lambda.len() < count || tolerances.len() < count {
        return Err(Error::MismatchedSpectra(format!("need {count} entries of each spectrum")));
    }
    Ok((1..=count)
        .map(|k| {
            let (m, l) = (mu.entries[k - 1].value, lambda.entries[k - 1].value);
            InequalityReport::new(
                Theorem::RobinComparison,
                k,
                m / sigma1,
                (l - m) / alpha,
                tolerances[k - 1],
                mu.provenance,
                lambda.provenance,
            )
        })
        .collect())
}

/// The Robin comparison on a domain whose Dirichlet part is nonempty.
/// `sigma_1` comes from the closed form when the domain is canonical and from
/// the finite-element solve otherwise.
pub fn verify_robin_on(domain: &DomainSpec, alpha: f64, count: usize, source: SpectrumSource) -> Result<Vec<InequalityReport>> {
    if !domain.has_dirichlet_boundary() {
        return Err(Error::InvalidArgument("the Robin comparison needs a nonempty Dirichlet part".into()));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha}: the ratio (lambda - mu) / alpha needs alpha > 0"
        )));
    }
    let robin = ProblemKind::RobinDirichlet { alpha };
    let exact_sigma1 = CanonicalDomain::recognize(domain)
        .and_then(|c| c.spectrum(ProblemKind::SteklovDirichlet, 1).ok())
        .and_then(|s| s.value(1));
    match source {
        SpectrumSource::ClosedForm => {
            let canonical = closed_form_domain(domain)?;
            let sigma1 = exact_sigma1.ok_or_else(|| Error::Unsupported("no closed-form sigma_1".into()))?;
            let mu = canonical.spectrum(ProblemKind::NeumannDirichlet, count)?;
            let lambda = canonical.spectrum(robin, count)?;
            verify_robin(sigma1, &mu, &lambda, alpha, count, &alloc::vec![CLOSED_FORM_TOLERANCE; count])
        }
        SpectrumSource::Fem { h } => {
            let (mu, mu_err) = fem_with_error(domain, ProblemKind::NeumannDirichlet, h, count)?;
            let (lambda, lambda_err) = fem_with_error(domain, robin, h, count)?;
            let (sigma1, sigma_err) = match exact_sigma1 {
                Some(s) => (s, 0.0),
                None => {
                    let (s, e) = fem_with_error(domain, ProblemKind::SteklovDirichlet, h, 1)?;
                    (s.entries[0].value, e[0])
                }
            };
            let tol: Vec<f64> = (0..count)
                .map(|i| {
                    let m = mu.entries[i].value;
                    let lhs_err = mu_err[i] / sigma1 + m * sigma_err / (sigma1 * sigma1);
                    let rhs_err = (lambda_err[i] + mu_err[i]) / alpha;
                    2.0 * (lhs_err + rhs_err)
                })
                .collect();
            verify_robin(sigma1, &mu, &lambda, alpha, count, &tol)
        }
    }
}

/// `d (j^alpha_{l,m})^2 / d alpha` at `alpha = 0`, that is `2 j'^2 / (j'^2 - l^2)`.
pub fn robin_derivative_formula(order: u32, index: u32) -> Result<f64> {
    crate::specfun::robin_eigenvalue_derivative_at_zero(order, index)
}

/// Richardson-extrapolated one-sided difference of `alpha -> (j^alpha_{l,m})^2`
/// at zero with step `step`.
pub fn robin_derivative_difference(order: u32, index: u32, step: f64) -> Result<f64> {
    let at = |alpha: f64| -> Result<f64> {
        let z = robin_zeros(order, index, alpha)?[index as usize - 1];
        Ok(z * z)
    };
    let base = at(0.0)?;
    let d1 = (at(step)? - base) / step;
    let d2 = (at(0.5 * step)? - base) / (0.5 * step);
    Ok(2.0 * d2 - d1)
}

/// The derivative form of the Robin comparison on the half disk of radius
/// `radius`, where `sigma_1 = 1 / radius`: per Neumann-Dirichlet mode,
/// `mu_k / sigma_1 >= d lambda_k / d alpha (0)`.
pub fn verify_robin_derivative_half_disk(radius: f64, count: usize) -> Result<Vec<InequalityReport>> {
    let canonical = CanonicalDomain::HalfDisk { radius };
    let mu = canonical.spectrum(ProblemKind::NeumannDirichlet, count)?;
    let sigma1 = 1.0 / radius;
    mu.entries
        .iter()
        .map(|e| {
            let ModeLabel::Bessel { l, m } = e.label else {
                unreachable!("half-disk modes carry Bessel labels")
            };
            // lambda(alpha) = (j^{alpha R} / R)^2, so the derivative picks up a factor 1 / R.
            let rhs = robin_derivative_formula(l, m)? / radius;
            Ok(InequalityReport::new(
                Theorem::RobinDerivative,
                e.k,
                e.value / sigma1,
                rhs,
                CLOSED_FORM_TOLERANCE,
                Provenance::ClosedForm,
                Provenance::ClosedForm,
            ))
        })
        .collect()
}

/// Least-squares slope of a spectrum against its index, compared with the
/// leading Weyl coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylReport {
    pub kind: ProblemKind,
    /// 1-based index range used by the fit.
    pub fit_range: (usize, usize),
    pub fitted_slope: f64,
    /// `pi / |F|` for Steklov spectra, `4 pi / area` otherwise.
    pub expected_slope: f64,
    pub relative_error: f64,
    /// The alternative Neumann constant `(2 pi)^2 (2 / (pi area))^(1/2)`,
    /// reported for comparison only.
    pub printed_neumann_slope: Option<f64>,
}

impl WeylReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.relative_error <= tol
    }
}

pub const WEYL_MIN_LENGTH: usize = 100;

/// Fits `x_k = a + b k` over the upper half of the spectrum.
pub fn weyl_check(spectrum: &EigenSequence, domain: &DomainSpec) -> Result<WeylReport> {
    let n = spectrum.len();
    if n < WEYL_MIN_LENGTH {
        return Err(Error::SpectrumTooShort {
            len: n,
            min: WEYL_MIN_LENGTH,
        });
    }
    if matches!(domain.kind(), DomainKind::HyperbolicDisk { .. }) {
        return Err(Error::Unsupported("Weyl check is planar only".into()));
    }
    let start = n / 2 + 1;
    let points: Vec<(f64, f64)> = spectrum.entries[start - 1..].iter().map(|e| (e.k as f64, e.value)).collect();
    let count = points.len() as f64;
    let mean_k = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_v = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_k) * (p.1 - mean_v)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_k) * (p.0 - mean_k)).sum();
    let slope = sxy / sxx;
    if !(slope > 0.0 && slope.is_finite()) {
        return Err(Error::FitFailed(format!("tail slope {slope} is not positive")));
    }
    let (expected, printed) = match spectrum.kind {
        ProblemKind::SteklovDirichlet => {
            let free = domain.free_length();
            if !(free > 0.0) {
                return Err(Error::EmptyFreeBoundary);
            }
            (PI / free, None)
        }
        _ => {
            let area = domain.area();
            (4.0 * PI / area, Some(4.0 * PI * PI * sqrt(2.0 / (PI * area))))
        }
    };
    Ok(WeylReport {
        kind: spectrum.kind,
        fit_range: (start, n),
        fitted_slope: slope,
        expected_slope: expected,
        relative_error: fabs(slope - expected) / expected,
        printed_neumann_slope: printed,
    })
}

/// First `count` values `j'_{l,1}` for `l = 1..=count`.
pub fn first_derivative_zeros(count: u32) -> Result<Vec<f64>> {
    (1..=count).map(|l| Ok(bessel_prime_zeros(l, 1)?[0])).collect()
}
