//! Exact two-layer step-index cylindrical waveguide solver.
//!
//! Solves the full-vector HE11 characteristic equation (Bessel J inside,
//! modified Bessel K outside) for the fundamental mode of a core/cladding
//! cylinder, and evaluates the azimuthally averaged field intensity and the
//! Poynting power fraction carried outside the core. For an air-clad
//! nanofiber set `n_clad = 1`.

use crate::error::{Error, Result};
use crate::special::{
    bessel_j0, bessel_j1, bessel_k0_scaled, bessel_k1_scaled, integrate_panels,
};
use std::f64::consts::PI;

/// Single-mode cutoff of the normalized frequency (first zero of J₀).
pub const SINGLE_MODE_V_CUTOFF: f64 = 2.405;

/// Sellmeier coefficients (Bᵢ, λᵢ in µm) for fused silica, Malitson 1965.
/// Single source of truth for the silica index used anywhere in the crate.
pub const FUSED_SILICA_SELLMEIER: [(f64, f64); 3] = [
    (0.696_166_3, 0.068_404_3),
    (0.407_942_6, 0.116_241_4),
    (0.897_479_4, 9.896_161),
];

/// Refractive-index model for the fiber material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialModel {
    /// Three-term Sellmeier dispersion of fused silica.
    FusedSilica,
    /// Wavelength-independent index (tests, hypothetical materials).
    Constant(f64),
}

impl MaterialModel {
    pub fn index(&self, wavelength_um: f64) -> f64 {
        match self {
            MaterialModel::Constant(n) => *n,
            MaterialModel::FusedSilica => {
                let l2 = wavelength_um * wavelength_um;
                let mut n2 = 1.0;
                for (b, l) in FUSED_SILICA_SELLMEIER {
                    n2 += b * l2 / (l2 - l * l);
                }
                n2.sqrt()
            }
        }
    }
}

/// Step-index cylinder: core radius, vacuum wavelength and the two indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberGeometry {
    pub radius_um: f64,
    pub wavelength_um: f64,
    pub n_core: f64,
    pub n_clad: f64,
}

impl FiberGeometry {
    /// Validates `radius, wavelength > 0` and `n_core >= n_clad >= 1`.
    /// Equal indices are accepted (zero contrast, V = 0) but cannot guide.
    pub fn new(radius_um: f64, wavelength_um: f64, n_core: f64, n_clad: f64) -> Result<Self> {
        if !(radius_um > 0.0) || !(wavelength_um > 0.0) {
            return Err(Error::parameter(format!(
                "radius ({radius_um} um) and wavelength ({wavelength_um} um) must be positive"
            )));
        }
        if !(n_clad >= 1.0) || !(n_core >= n_clad) {
            return Err(Error::parameter(format!(
                "need n_core >= n_clad >= 1, got n_core={n_core}, n_clad={n_clad}"
            )));
        }
        Ok(Self {
            radius_um,
            wavelength_um,
            n_core,
            n_clad,
        })
    }

    /// Air-clad nanofiber of the given material.
    pub fn nanofiber(radius_um: f64, wavelength_um: f64, material: MaterialModel) -> Result<Self> {
        Self::new(radius_um, wavelength_um, material.index(wavelength_um), 1.0)
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength_um
    }
}

/// Normalized frequency V = k·a·sqrt(n_core² − n_clad²).
pub fn v_number(geom: &FiberGeometry) -> f64 {
    geom.wavenumber() * geom.radius_um * (geom.n_core * geom.n_core - geom.n_clad * geom.n_clad).sqrt()
}

/// True iff V < 2.405 (strict: the boundary itself counts as multimode).
pub fn is_single_mode(geom: &FiberGeometry) -> bool {
    v_number(geom) < SINGLE_MODE_V_CUTOFF
}

/// Value of the exact ν = 1 hybrid-mode characteristic equation at a trial
/// effective index. HE11 is its root of largest n_eff in (n_clad, n_core);
/// the function is pole-free for core parameters u below the first zero of J₁.
pub fn he11_characteristic(geom: &FiberGeometry, n_eff: f64) -> f64 {
    let k = geom.wavenumber();
    let a = geom.radius_um;
    let n1 = geom.n_core;
    let n2 = geom.n_clad;
    let beta = k * n_eff;
    let u = a * (k * k * n1 * n1 - beta * beta).sqrt();
    let w = a * (beta * beta - k * k * n2 * n2).sqrt();

    let j1 = bessel_j1(u);
    let j1p = bessel_j0(u) - j1 / u;
    let x = j1p / (u * j1);
    // K₁'(w)/(w K₁(w)) from exponentially scaled ratios (stable at huge w)
    let kr = bessel_k0_scaled(w) / bessel_k1_scaled(w); // K0/K1
    let y = -(kr + 1.0 / w) / w;

    let inv2 = 1.0 / (u * u) + 1.0 / (w * w);
    (x + y) * (n1 * n1 * x + n2 * n2 * y) - n_eff * n_eff * inv2 * inv2
}

// Radial profiles of the six HE11 field components in the convention where
// E_phi, E_z, H_r are real and E_r, H_phi, H_z imaginary (amplitude A = 1,
// natural units eps0 = mu0 = 1). Enough to evaluate |E|^2 and S_z.
#[derive(Debug, Clone, Copy)]
struct FieldCoefficients {
    k: f64,
    beta: f64,
    p: f64,
    q: f64,
    w: f64,
    s: f64,
    /// e^(w) J1(u) / K1e(w): outside profile is out_scale * e^{-q r} * K1e(q r)
    k1e_w: f64,
    j1_u: f64,
    intensity_norm: f64,
}

struct FieldSample {
    er_im: f64,
    ephi: f64,
    ez: f64,
    hr: f64,
    hphi_im: f64,
}

impl FieldCoefficients {
    fn sample(&self, geom: &FiberGeometry, r: f64) -> FieldSample {
        let r = r.max(1e-12 * geom.radius_um);
        let (psi, dpsi, prefac, n_loc) = if r < geom.radius_um {
            let pr = self.p * r;
            let j1 = bessel_j1(pr);
            let psi = j1;
            let dpsi = self.p * (bessel_j0(pr) - j1 / pr);
            (psi, dpsi, self.beta / (self.p * self.p), geom.n_core)
        } else {
            let qr = self.q * r;
            // scaled evaluation: K1(qr)/K1(w) = e^{-(qr-w)} K1e(qr)/K1e(w)
            let g = self.j1_u * (-(qr - self.w)).exp() / self.k1e_w;
            let k1e = bessel_k1_scaled(qr);
            let psi = g * k1e;
            let dpsi = -g * self.q * (bessel_k0_scaled(qr) + k1e / qr);
            (psi, dpsi, -self.beta / (self.q * self.q), geom.n_clad)
        };
        let s = self.s;
        let (k, beta) = (self.k, self.beta);
        let n2 = n_loc * n_loc;
        FieldSample {
            er_im: -prefac * (dpsi - s * psi / r),
            ephi: prefac * (psi / r - s * dpsi),
            ez: psi,
            hr: prefac * (beta * s * dpsi / k - k * n2 * psi / (beta * r)),
            hphi_im: -prefac * (k * n2 * dpsi / beta - beta * s * psi / (k * r)),
        }
    }

    fn e_squared(&self, geom: &FiberGeometry, r: f64) -> f64 {
        let f = self.sample(geom, r);
        f.er_im * f.er_im + f.ephi * f.ephi + f.ez * f.ez
    }

    fn poynting_z(&self, geom: &FiberGeometry, r: f64) -> f64 {
        let f = self.sample(geom, r);
        0.5 * (f.er_im * f.hphi_im - f.ephi * f.hr)
    }
}

/// Solved fundamental mode with cached field coefficients.
#[derive(Debug, Clone)]
pub struct GuidedMode {
    pub geometry: FiberGeometry,
    pub n_eff: f64,
    /// Propagation constant β = (2π/λ)·n_eff, rad/µm.
    pub beta_rad_per_um: f64,
    /// Fraction of the guided Poynting flux carried outside r = a.
    pub power_fraction_outside: f64,
    field: FieldCoefficients,
}

/// Default number of scan points used to bracket the HE11 root.
pub const DEFAULT_SCAN_POINTS: usize = 2000;

/// Solve the HE11 mode with the default scan resolution.
pub fn solve_he11(geom: &FiberGeometry) -> Result<GuidedMode> {
    solve_he11_scanned(geom, DEFAULT_SCAN_POINTS)
}

/// Solve the HE11 mode: bracket scan of the characteristic equation followed
/// by bisection. The scan is uniform in the core parameter u (which
/// concentrates points near n_core where the root sits for thick fibers);
/// HE11 is the first sign change from u = 0.
pub fn solve_he11_scanned(geom: &FiberGeometry, scan_points: usize) -> Result<GuidedMode> {
    let geom = FiberGeometry::new(geom.radius_um, geom.wavelength_um, geom.n_core, geom.n_clad)?;
    if geom.n_core == geom.n_clad {
        return Err(Error::parameter(
            "zero index contrast cannot guide a mode".to_string(),
        ));
    }
    let v = v_number(&geom);
    let k = geom.wavenumber();
    let a = geom.radius_um;
    // HE11's u stays below the LP01 limit 2.405; cap safely below the first
    // pole of the characteristic function at j_{1,1} = 3.8317.
    let u_cap = (v * (1.0 - 1e-12)).min(3.80);
    let u_lo_edge = u_cap * 1e-9;

    let n_eff_of_u = |u: f64| -> f64 {
        let t = u / (k * a);
        (geom.n_core * geom.n_core - t * t).sqrt()
    };
    let f_of_u = |u: f64| he11_characteristic(&geom, n_eff_of_u(u));

    let n = scan_points.max(16);
    let step = (u_cap - u_lo_edge) / n as f64;
    let mut bracket = None;
    let mut prev_u = u_lo_edge;
    let mut prev_f = f_of_u(prev_u);
    for i in 1..=n {
        let u = u_lo_edge + step * i as f64;
        let f = f_of_u(u);
        if prev_f.is_finite() && f.is_finite() && prev_f * f <= 0.0 {
            bracket = Some((prev_u, u));
            break;
        }
        prev_u = u;
        prev_f = f;
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::numerical(format!(
            "HE11 root not bracketed: scanned u in ({u_lo_edge:.3e}, {u_cap:.6}) with {n} points, V = {v:.6}"
        ))
    })?;

    let mut flo = f_of_u(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bisected to machine resolution
        }
        let fmid = f_of_u(mid);
        if flo * fmid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    let u_root = 0.5 * (lo + hi);
    let residual = f_of_u(u_root);
    if residual.abs() >= 1e-10 {
        return Err(Error::numerical(format!(
            "HE11 refinement stalled: |residual| = {:.3e} at u = {u_root:.12} (bracket [{lo:.12}, {hi:.12}])",
            residual.abs()
        )));
    }

    let n_eff = n_eff_of_u(u_root);
    let beta = k * n_eff;
    let p = (k * k * geom.n_core * geom.n_core - beta * beta).sqrt();
    let q = (beta * beta - k * k * geom.n_clad * geom.n_clad).sqrt();
    let (u, w) = (p * a, q * a);

    let j1 = bessel_j1(u);
    let j1p = bessel_j0(u) - j1 / u;
    let x = j1p / (u * j1);
    let k1e = bessel_k1_scaled(w);
    let y = -(bessel_k0_scaled(w) / k1e + 1.0 / w) / w;
    let s = (1.0 / (u * u) + 1.0 / (w * w)) / (x + y);

    let mut field = FieldCoefficients {
        k,
        beta,
        p,
        q,
        w,
        s,
        k1e_w: k1e,
        j1_u: j1,
        intensity_norm: 1.0,
    };

    // cross-section quadratures for normalization and the power split
    let tail = 45.0 / q;
    let e2_in = integrate_panels(|r| field.e_squared(&geom, r) * 2.0 * PI * r, 0.0, a, 8);
    let e2_out = integrate_panels(|r| field.e_squared(&geom, r) * 2.0 * PI * r, a, a + tail, 40);
    let sz_in = integrate_panels(|r| field.poynting_z(&geom, r) * 2.0 * PI * r, 0.0, a, 8);
    let sz_out = integrate_panels(|r| field.poynting_z(&geom, r) * 2.0 * PI * r, a, a + tail, 40);

    let total_flux = sz_in + sz_out;
    let fraction = sz_out / total_flux;
    if !(fraction > 0.0 && fraction < 1.0) || !total_flux.is_finite() {
        return Err(Error::numerical(format!(
            "power quadrature failed: inside flux {sz_in:.3e}, outside flux {sz_out:.3e}"
        )));
    }
    field.intensity_norm = 1.0 / (e2_in + e2_out);

    Ok(GuidedMode {
        geometry: geom,
        n_eff,
        beta_rad_per_um: beta,
        power_fraction_outside: fraction,
        field,
    })
}

impl GuidedMode {
    /// Azimuthally averaged |E|² at radius r, normalized so the cross-section
    /// integral ∫ I(r) 2πr dr equals 1. Discontinuous at r = a (the normal
    /// field jumps by n_core²/n_clad²); at exactly r = a the outside limit is
    /// reported.
    pub fn intensity_at(&self, r_um: f64) -> f64 {
        assert!(r_um >= 0.0, "radius must be non-negative");
        self.field.e_squared(&self.geometry, r_um) * self.field.intensity_norm
    }

    /// Time-averaged axial Poynting density at radius r (arbitrary units).
    pub fn poynting_at(&self, r_um: f64) -> f64 {
        assert!(r_um >= 0.0, "radius must be non-negative");
        self.field.poynting_z(&self.geometry, r_um)
    }

    /// Fraction of guided power outside the core, from the Poynting quadrature.
    pub fn power_fraction_outside(&self) -> f64 {
        self.power_fraction_outside
    }

    /// Residual of the characteristic equation at the solved n_eff.
    pub fn residual(&self) -> f64 {
        he11_characteristic(&self.geometry, self.n_eff)
    }
}
