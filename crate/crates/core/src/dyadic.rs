//! Smooth dyadic resolutions of unity on frequency space.
//!
//! Three band systems are provided, all built from one smooth radial cutoff
//! `phi0` with `phi0 = 1` on `|xi| <= 1` and `phi0 = 0` on `|xi| >= 3/2`:
//!
//! * the 1-d dyadic system `phi(j, .)`, a partition of unity subordinate to
//!   the annuli `2^(j-1) < |xi| < 3 * 2^(j-1)`,
//! * the isotropic cube system `psi(j, .)` in d dimensions, built from the
//!   tensorised cutoff `psi0(x) = prod_i phi0(x_i)`,
//! * the dominating-mixed tensor system `phi_tensor(kbar, .)`, products of
//!   one 1-d band per axis.
//!
//! Both multi-dimensional systems telescope: summing the first `J + 1` bands
//! reproduces the dilated cutoff `psi0(2^-J x)`, so they form exact
//! resolutions of unity on any bounded frequency set once `J` is large
//! enough. The cutoff transitions with the classical `exp(-1/s)` smooth step,
//! which keeps every band C-infinity while making the plateau and support
//! bounds exact (not merely approximate) in floating point.

/// `exp(-1/s)` for `s > 0`, extended by zero. Building block of the step.
fn ramp(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth monotone step: 0 for `s <= 0`, 1 for `s >= 1`, C-infinity.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let num = ramp(s);
        num / (num + ramp(1.0 - s))
    }
}

/// Base cutoff: 1 on `|xi| <= 1`, 0 on `|xi| >= 3/2`, smooth and even.
pub fn cutoff(xi: f64) -> f64 {
    smooth_step((1.5 - xi.abs()) / 0.5)
}

/// Exact dyadic scale factor `2^-j`.
#[inline]
fn half_pow(j: u32) -> f64 {
    0.5f64.powi(j as i32)
}

/// 1-d dyadic band `phi_j`. Level 0 is the cutoff itself; for `j >= 1`
/// the band is `phi0(2^-j xi) - phi0(2^-j+1 xi)`, supported in
/// `2^(j-1) < |xi| < 3 * 2^(j-1)` and equal to 1 on `(3/4) 2^j <= |xi| <= 2^j`.
pub fn phi(j: u32, xi: f64) -> f64 {
    if j == 0 {
        cutoff(xi)
    } else {
        cutoff(xi * half_pow(j)) - cutoff(xi * half_pow(j - 1))
    }
}

/// Fattened band `phi_(j-1) + phi_j + phi_(j+1)` (with `phi_(-1) = 0`),
/// identically 1 on the support of `phi_j`.
pub fn phi_fat(j: u32, xi: f64) -> f64 {
    let lower = if j == 0 { 0.0 } else { phi(j - 1, xi) };
    lower + phi(j, xi) + phi(j + 1, xi)
}

/// Tensorised cutoff `psi0(x) = prod_i phi0(x_i)`.
pub fn cutoff_tensor(x: &[f64]) -> f64 {
    x.iter().map(|&v| cutoff(v)).product()
}

/// Isotropic cube band `psi_j` in `x.len()` dimensions: `psi0` at level 0,
/// `psi0(2^-j x) - psi0(2^-j+1 x)` for `j >= 1`. Supported in the cube shell
/// `2^(j-1) < sup_i |x_i| < 3 * 2^(j-1)`.
pub fn psi(j: u32, x: &[f64]) -> f64 {
    if j == 0 {
        cutoff_tensor(x)
    } else {
        let a: f64 = x.iter().map(|&v| cutoff(v * half_pow(j))).product();
        let b: f64 = x.iter().map(|&v| cutoff(v * half_pow(j - 1))).product();
        a - b
    }
}

/// Dominating-mixed band `phi_kbar(x) = prod_i phi(k_i, x_i)`.
pub fn phi_tensor(k: &[u32], x: &[f64]) -> f64 {
    debug_assert_eq!(k.len(), x.len());
    k.iter().zip(x).map(|(&ki, &xi)| phi(ki, xi)).product()
}

/// Fattened tensor band `prod_i phi_fat(k_i, x_i)`.
pub fn phi_tensor_fat(k: &[u32], x: &[f64]) -> f64 {
    debug_assert_eq!(k.len(), x.len());
    k.iter().zip(x).map(|(&ki, &xi)| phi_fat(ki, xi)).product()
}

/// Closure of the support of `phi(j, .)` as an interval in `|xi|`.
pub fn phi_support(j: u32) -> (f64, f64) {
    if j == 0 {
        (0.0, 1.5)
    } else {
        let base = 2.0f64.powi(j as i32 - 1);
        (base, 3.0 * base)
    }
}

/// Interval of `|xi|` on which `phi(j, .)` is identically 1.
pub fn phi_plateau(j: u32) -> (f64, f64) {
    if j == 0 {
        (0.0, 1.0)
    } else {
        let top = 2.0f64.powi(j as i32);
        (0.75 * top, top)
    }
}
