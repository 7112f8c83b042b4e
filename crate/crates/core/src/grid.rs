//! Periodic sampling grids and grid functions.
//!
//! A `Grid` models the torus `prod_i [0, L_i)` sampled at `n_i` equispaced
//! points per axis (`n_i` a power of two). The associated frequency lattice
//! on axis `i` is `{2 pi m / L_i : m = -n_i/2 .. n_i/2 - 1}`; grids whose
//! period is `2 pi * 2^m` therefore carry the dyadic lattice with spacing
//! `2^-m`, on which dyadic band edges and the generators' modulation
//! frequencies fall exactly.
//!
//! The discrete Fourier transform is unitarily normalised, so Parseval holds
//! exactly up to round-off and `idft(dft(f)) = f`. L_p quadrature is the
//! Riemann sum `(prod_i h_i * sum |f|^p)^(1/p)` with `h_i = L_i / n_i`.

use ndarray::{ArrayD, Axis, IxDyn};
use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::cell::RefCell;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::{Error, Result};

const FILE_MAGIC: &[u8; 4] = b"MXGF";
const FILE_VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: Vec<usize>,
    period: Vec<f64>,
}

impl Grid {
    /// Grid with `n[i]` samples and period `period[i]` on axis `i`.
    pub fn new(n: &[usize], period: &[f64]) -> Result<Grid> {
        if n.is_empty() || n.len() != period.len() {
            return Err(Error::InvalidGrid(
                "need one sample count and one period per axis".into(),
            ));
        }
        for (ax, &ni) in n.iter().enumerate() {
            if ni < 2 || !ni.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "axis {ax}: sample count {ni} is not a power of two >= 2"
                )));
            }
        }
        for (ax, &li) in period.iter().enumerate() {
            if !(li.is_finite() && li > 0.0) {
                return Err(Error::InvalidGrid(format!("axis {ax}: period {li} invalid")));
            }
        }
        let total: usize = n.iter().product();
        if total > 1 << 28 {
            return Err(Error::InvalidGrid(format!("grid with {total} samples is too large")));
        }
        Ok(Grid {
            n: n.to_vec(),
            period: period.to_vec(),
        })
    }

    /// Isotropic grid: `n` samples and period `period` on every axis.
    pub fn uniform(d: usize, n: usize, period: f64) -> Result<Grid> {
        Grid::new(&vec![n; d], &vec![period; d])
    }

    /// Grid whose frequency lattice has spacing `2^-m[i]` on axis `i`
    /// (period `2 pi 2^m[i]`). All dyadic band arithmetic is exact here.
    pub fn dyadic(n: &[usize], m: &[i32]) -> Result<Grid> {
        if n.len() != m.len() {
            return Err(Error::InvalidGrid("need one lattice exponent per axis".into()));
        }
        let period: Vec<f64> = m
            .iter()
            .map(|&mi| 2.0 * std::f64::consts::PI * 2.0f64.powi(mi))
            .collect();
        Grid::new(n, &period)
    }

    /// Isotropic dyadic grid: spacing `2^-m` on every axis.
    pub fn dyadic_uniform(d: usize, n: usize, m: i32) -> Result<Grid> {
        Grid::dyadic(&vec![n; d], &vec![m; d])
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn period(&self) -> &[f64] {
        &self.period
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sample spacing `h_i = L_i / n_i`.
    pub fn spacing(&self, axis: usize) -> f64 {
        self.period[axis] / self.n[axis] as f64
    }

    /// Volume of one grid cell, `prod_i h_i`.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|ax| self.spacing(ax)).product()
    }

    /// Frequency lattice spacing `2 pi / L_i`.
    pub fn freq_step(&self, axis: usize) -> f64 {
        2.0 * std::f64::consts::PI / self.period[axis]
    }

    /// Largest frequency magnitude representable on the axis, `pi n_i / L_i`.
    pub fn nyquist(&self, axis: usize) -> f64 {
        self.freq_step(axis) * (self.n[axis] / 2) as f64
    }

    /// Signed frequency of FFT bin `idx` on the axis (natural FFT order:
    /// `0, 1, .., n/2 - 1, -n/2, .., -1`, times the lattice spacing).
    pub fn freq_at(&self, axis: usize, idx: usize) -> f64 {
        let n = self.n[axis];
        debug_assert!(idx < n);
        let m = if idx < n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        };
        m as f64 * self.freq_step(axis)
    }

    /// All signed frequencies of the axis in natural FFT order.
    pub fn freqs(&self, axis: usize) -> Vec<f64> {
        (0..self.n[axis]).map(|i| self.freq_at(axis, i)).collect()
    }

    /// Spatial coordinate of sample `idx` on the axis.
    pub fn coord_at(&self, axis: usize, idx: usize) -> f64 {
        self.spacing(axis) * idx as f64
    }

    /// Smallest `J` with `2^J >= nyquist(axis)`: bands above `J` vanish on
    /// the axis lattice.
    pub fn max_level_axis(&self, axis: usize) -> u32 {
        let nyq = self.nyquist(axis);
        let mut j = 0u32;
        while 2.0f64.powi(j as i32) < nyq {
            j += 1;
        }
        j
    }

    /// Smallest `J` such that every isotropic band above `J` vanishes on the
    /// whole frequency lattice.
    pub fn max_level(&self) -> u32 {
        (0..self.dim())
            .map(|ax| self.max_level_axis(ax))
            .max()
            .unwrap()
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, dir: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, dir))
}

/// In-place unnormalised transform along every axis.
fn transform_all_axes(data: &mut ArrayD<Complex64>, dir: FftDirection) {
    let ndim = data.ndim();
    for ax in 0..ndim {
        let n = data.shape()[ax];
        let fft = plan(n, dir);
        let mut buf = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        for mut lane in data.lanes_mut(Axis(ax)) {
            if let Some(slice) = lane.as_slice_mut() {
                fft.process_with_scratch(slice, &mut scratch);
            } else {
                for (b, v) in buf.iter_mut().zip(lane.iter()) {
                    *b = *v;
                }
                fft.process_with_scratch(&mut buf, &mut scratch);
                for (v, b) in lane.iter_mut().zip(buf.iter()) {
                    *v = *b;
                }
            }
        }
    }
}

fn scale_unitary(data: &mut ArrayD<Complex64>) {
    let total: usize = data.shape().iter().product();
    let s = 1.0 / (total as f64).sqrt();
    data.mapv_inplace(|v| v * s);
}

/// Unitary inverse transform of raw coefficients, reusing the buffer.
pub(crate) fn idft_in_place(coef: &mut ArrayD<Complex64>) {
    transform_all_axes(coef, FftDirection::Inverse);
    scale_unitary(coef);
}

/// Complex-valued function sampled on a periodic grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Grid,
    data: ArrayD<Complex64>,
}

/// Frequency-side coefficients of a grid function (unitary normalisation,
/// natural FFT bin order).
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    coef: ArrayD<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: &Grid) -> GridFunction {
        GridFunction {
            grid: grid.clone(),
            data: ArrayD::default(IxDyn(grid.n())),
        }
    }

    /// Sample a closed-form function at the grid points.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(&[f64]) -> Complex64) -> GridFunction {
        let mut out = GridFunction::zeros(grid);
        let mut x = vec![0.0; grid.dim()];
        for (idx, v) in out.data.indexed_iter_mut() {
            for (ax, xi) in x.iter_mut().enumerate() {
                *xi = grid.coord_at(ax, idx[ax]);
            }
            *v = f(&x);
        }
        out
    }

    /// Build from raw samples in row-major order.
    pub fn from_samples(grid: &Grid, samples: Vec<Complex64>) -> Result<GridFunction> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                samples.len(),
                grid.len()
            )));
        }
        let data = ArrayD::from_shape_vec(IxDyn(grid.n()), samples)
            .map_err(|e| Error::GridMismatch(e.to_string()))?;
        Ok(GridFunction {
            grid: grid.clone(),
            data,
        })
    }

    /// Build a band-limited function by sampling its Fourier coefficients on
    /// the frequency lattice (then one inverse transform).
    pub fn from_spectrum_fn(grid: &Grid, f: impl FnMut(&[f64]) -> Complex64) -> GridFunction {
        Spectrum::from_fn(grid, f).idft()
    }

    pub(crate) fn from_parts(grid: &Grid, data: ArrayD<Complex64>) -> GridFunction {
        debug_assert_eq!(data.shape(), grid.n());
        GridFunction {
            grid: grid.clone(),
            data,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &ArrayD<Complex64> {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.data
    }

    pub fn into_data(self) -> ArrayD<Complex64> {
        self.data
    }

    /// Unitary forward transform.
    pub fn dft(&self) -> Spectrum {
        let mut coef = self.data.clone();
        transform_all_axes(&mut coef, FftDirection::Forward);
        scale_unitary(&mut coef);
        Spectrum {
            grid: self.grid.clone(),
            coef,
        }
    }

    /// Apply a real frequency multiplier: `idft(m(omega) * dft(f))`.
    pub fn apply_multiplier(&self, mut m: impl FnMut(&[f64]) -> f64) -> GridFunction {
        let mut spec = self.dft();
        let mut w = vec![0.0; self.grid.dim()];
        for (idx, v) in spec.coef.indexed_iter_mut() {
            for (ax, wi) in w.iter_mut().enumerate() {
                *wi = spec.grid.freq_at(ax, idx[ax]);
            }
            *v *= m(&w);
        }
        spec.idft()
    }

    /// Riemann-sum L_p quasi-norm; `p = inf` takes the sample maximum.
    /// Rejects `p <= 0` and NaN.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_of_abs(self.data.iter().map(|v| v.norm()), p, self.grid.cell_volume())
    }

    /// Pointwise absolute value (real output stored as complex).
    pub fn abs(&self) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            data: self.data.mapv(|v| Complex64::new(v.norm(), 0.0)),
        }
    }

    /// Largest |f| over the grid.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Relative L_2 distance to another function on the same grid.
    pub fn rel_l2_distance(&self, other: &GridFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("functions live on different grids".into()));
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            num += (a - b).norm_sqr();
            den += b.norm_sqr();
        }
        if den == 0.0 {
            return Err(Error::InvalidArgument("reference function is identically zero".into()));
        }
        Ok((num / den).sqrt())
    }

    /// Serialized container: magic, version, axis count, per-axis sample
    /// counts and periods, then row-major interleaved re/im doubles, all
    /// little-endian.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(FILE_MAGIC)?;
        w.write_all(&FILE_VERSION.to_le_bytes())?;
        w.write_all(&(self.grid.dim() as u16).to_le_bytes())?;
        for &ni in self.grid.n() {
            w.write_all(&(ni as u64).to_le_bytes())?;
        }
        for &li in self.grid.period() {
            w.write_all(&li.to_le_bytes())?;
        }
        let view = self
            .data
            .as_slice()
            .expect("grid data is stored contiguously");
        let mut buf = Vec::with_capacity(view.len() * 16);
        for v in view {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<GridFunction> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != FILE_MAGIC {
            return Err(Error::Format("bad magic; not a grid-function file".into()));
        }
        let mut b2 = [0u8; 2];
        r.read_exact(&mut b2)?;
        let version = u16::from_le_bytes(b2);
        if version != FILE_VERSION {
            return Err(Error::Format(format!("unsupported container version {version}")));
        }
        r.read_exact(&mut b2)?;
        let d = u16::from_le_bytes(b2) as usize;
        if d == 0 || d > 8 {
            return Err(Error::Format(format!("implausible axis count {d}")));
        }
        let mut b8 = [0u8; 8];
        let mut n = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut b8)?;
            let ni = u64::from_le_bytes(b8);
            if ni > (1 << 24) {
                return Err(Error::Format(format!("implausible axis length {ni}")));
            }
            n.push(ni as usize);
        }
        let mut period = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut b8)?;
            period.push(f64::from_le_bytes(b8));
        }
        let grid = Grid::new(&n, &period)
            .map_err(|e| Error::Format(format!("invalid grid in file: {e}")))?;
        let total = grid.len();
        let mut raw = vec![0u8; total * 16];
        r.read_exact(&mut raw)?;
        let mut samples = Vec::with_capacity(total);
        for chunk in raw.chunks_exact(16) {
            let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
            let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
            samples.push(Complex64::new(re, im));
        }
        GridFunction::from_samples(&grid, samples)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut f)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GridFunction> {
        let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
        GridFunction::read_from(&mut f)
    }
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coef(&self) -> &ArrayD<Complex64> {
        &self.coef
    }

    pub fn coef_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.coef
    }

    /// Sample closed-form coefficients on the frequency lattice.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(&[f64]) -> Complex64) -> Spectrum {
        let mut coef = ArrayD::default(IxDyn(grid.n()));
        let mut w = vec![0.0; grid.dim()];
        for (idx, v) in coef.indexed_iter_mut() {
            for (ax, wi) in w.iter_mut().enumerate() {
                *wi = grid.freq_at(ax, idx[ax]);
            }
            *v = f(&w);
        }
        Spectrum {
            grid: grid.clone(),
            coef,
        }
    }

    pub fn from_coef(grid: &Grid, coef: ArrayD<Complex64>) -> Result<Spectrum> {
        if coef.shape() != grid.n() {
            return Err(Error::GridMismatch("coefficient shape does not match grid".into()));
        }
        Ok(Spectrum {
            grid: grid.clone(),
            coef,
        })
    }

    /// Unitary inverse transform.
    pub fn idft(&self) -> GridFunction {
        let mut data = self.coef.clone();
        transform_all_axes(&mut data, FftDirection::Inverse);
        scale_unitary(&mut data);
        GridFunction {
            grid: self.grid.clone(),
            data,
        }
    }

    /// Sum of |coefficient|^2 (equals the squared L_2 sample sum).
    pub fn energy(&self) -> f64 {
        self.coef.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Shared L_p reduction over precomputed magnitudes.
pub(crate) fn lp_of_abs(
    mags: impl Iterator<Item = f64>,
    p: f64,
    cell_volume: f64,
) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidSpace(format!(
            "L_p quadrature requires p > 0, got {p}"
        )));
    }
    if p == f64::INFINITY {
        return Ok(mags.fold(0.0, f64::max));
    }
    let mut acc = 0.0;
    if p == 1.0 {
        for m in mags {
            acc += m;
        }
    } else if p == 2.0 {
        for m in mags {
            acc += m * m;
        }
    } else if p == p.trunc() && p <= 32.0 {
        let ip = p as i32;
        for m in mags {
            acc += m.powi(ip);
        }
    } else {
        for m in mags {
            acc += m.powf(p);
        }
    }
    Ok((cell_volume * acc).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::uniform(2, 0, 1.0).is_err());
        assert!(Grid::uniform(2, 12, 1.0).is_err());
        assert!(Grid::uniform(2, 16, -1.0).is_err());
        assert!(Grid::new(&[16, 16], &[1.0]).is_err());
        let g = Grid::dyadic_uniform(2, 16, 2).unwrap();
        assert_relative_eq!(g.freq_step(0), 0.25);
        assert_relative_eq!(g.nyquist(0), 2.0);
        assert_relative_eq!(g.period()[0], 8.0 * PI);
        assert_eq!(g.max_level(), 1);
    }

    #[test]
    fn freq_ordering_is_fft_natural() {
        let g = Grid::dyadic_uniform(1, 8, 0).unwrap();
        let f = g.freqs(0);
        assert_eq!(f, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn max_level_covers_lattice() {
        // every band above max_level vanishes at the most extreme lattice point
        for m in [-2i32, 0, 3] {
            for n in [8usize, 64] {
                let g = Grid::dyadic_uniform(2, n, m).unwrap();
                let jmax = g.max_level();
                let worst = [-g.nyquist(0), -g.nyquist(1)];
                for j in (jmax + 1)..(jmax + 4) {
                    assert_eq!(crate::dyadic::psi(j, &worst), 0.0, "m={m} n={n} j={j}");
                }
                // and the first jmax+1 bands sum to one there
                let s: f64 = (0..=jmax).map(|j| crate::dyadic::psi(j, &worst)).sum();
                assert_relative_eq!(s, 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn dft_parseval_and_roundtrip() {
        let g = Grid::uniform(2, 16, 3.0).unwrap();
        let f = GridFunction::from_fn(&g, |x| {
            c((2.1 * x[0]).sin() + 0.3, (x[0] * x[1]).cos() - 0.7)
        });
        let spec = f.dft();
        let back = spec.idft();
        let spatial: f64 = f.data().iter().map(|v| v.norm_sqr()).sum();
        assert_relative_eq!(spec.energy(), spatial, max_relative = 1e-12);
        assert!(f.rel_l2_distance(&back).unwrap() < 1e-13);
    }

    #[test]
    fn constant_concentrates_at_zero_frequency() {
        let g = Grid::uniform(2, 8, 1.0).unwrap();
        let f = GridFunction::from_fn(&g, |_| c(1.0, 0.0));
        let spec = f.dft();
        for (idx, v) in spec.coef().indexed_iter() {
            if idx[0] == 0 && idx[1] == 0 {
                assert_relative_eq!(v.re, 8.0, max_relative = 1e-12); // sqrt(64)
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_mode_has_unit_modulus_and_exact_bin() {
        // e^{i w x} with w on the lattice occupies exactly one bin
        let g = Grid::dyadic_uniform(1, 32, 1).unwrap();
        let w0 = 3.5; // = 7 * 0.5, on the lattice
        let f = GridFunction::from_fn(&g, |x| (c(0.0, w0 * x[0])).exp());
        let spec = f.dft();
        let mut hits = 0;
        for (idx, v) in spec.coef().indexed_iter() {
            if v.norm() > 1e-9 {
                hits += 1;
                assert_relative_eq!(g.freq_at(0, idx[0]), w0);
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn lp_norm_known_values() {
        let g = Grid::uniform(1, 8, 2.0).unwrap(); // h = 1/4
        let f = GridFunction::from_fn(&g, |x| if x[0] == 0.0 { c(2.0, 0.0) } else { c(0.0, 0.0) });
        assert_relative_eq!(f.lp_norm(1.0).unwrap(), 0.5);
        assert_relative_eq!(f.lp_norm(2.0).unwrap(), 1.0);
        assert_relative_eq!(f.lp_norm(f64::INFINITY).unwrap(), 2.0);
        // p < 1 quasi-norm still well defined
        assert_relative_eq!(f.lp_norm(0.5).unwrap(), (0.25f64 * 2.0f64.sqrt()).powf(2.0) , max_relative = 1e-12);
        assert!(f.lp_norm(0.0).is_err());
        assert!(f.lp_norm(-2.0).is_err());
        assert!(f.lp_norm(f64::NAN).is_err());
    }

    #[test]
    fn lp_scaling_homogeneity() {
        let g = Grid::uniform(2, 16, 5.0).unwrap();
        let f = GridFunction::from_fn(&g, |x| c((x[0] - x[1]).sin(), x[0].cos()));
        let mut g3 = f.clone();
        g3.data_mut().mapv_inplace(|v| v * 3.0);
        for p in [0.5, 1.0, 2.0, 4.0, 7.3, f64::INFINITY] {
            assert_relative_eq!(
                g3.lp_norm(p).unwrap(),
                3.0 * f.lp_norm(p).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn multiplier_identity_and_projection() {
        let g = Grid::dyadic_uniform(2, 16, 0).unwrap();
        let f = GridFunction::from_fn(&g, |x| c((x[0]).sin() + (2.0 * x[1]).cos(), 0.2));
        let same = f.apply_multiplier(|_| 1.0);
        assert!(same.rel_l2_distance(&f).unwrap() < 1e-13);
        // two disjoint half-space projections sum back to f
        let lo = f.apply_multiplier(|w| if w[0] < 0.0 { 1.0 } else { 0.0 });
        let hi = f.apply_multiplier(|w| if w[0] < 0.0 { 0.0 } else { 1.0 });
        let mut sum = lo.clone();
        for (s, h) in sum.data_mut().iter_mut().zip(hi.data().iter()) {
            *s += h;
        }
        assert!(sum.rel_l2_distance(&f).unwrap() < 1e-12);
    }

    #[test]
    fn multiplier_composition_matches_product() {
        let g = Grid::dyadic_uniform(2, 16, 1).unwrap();
        let f = GridFunction::from_fn(&g, |x| c((1.3 * x[0]).sin(), (0.4 * x[1]).cos()));
        let m1 = |w: &[f64]| crate::dyadic::cutoff(w[0] / 4.0);
        let m2 = |w: &[f64]| crate::dyadic::cutoff(w[1] / 2.0);
        let a = f.apply_multiplier(m1).apply_multiplier(m2);
        let b = f.apply_multiplier(|w| m1(w) * m2(w));
        assert!(a.rel_l2_distance(&b).unwrap() < 1e-12);
    }

    #[test]
    fn serialization_roundtrip_bitexact() {
        let g = Grid::new(&[8, 16], &[2.0, 6.5]).unwrap();
        let f = GridFunction::from_fn(&g, |x| c(x[0] * 7.0 - x[1], (x[0] * x[1]).tan()));
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let back = GridFunction::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back.grid(), f.grid());
        for (a, b) in back.data().iter().zip(f.data().iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn serialization_rejects_garbage() {
        let junk = b"NOPE0000000000000000".to_vec();
        assert!(matches!(
            GridFunction::read_from(&mut junk.as_slice()),
            Err(Error::Format(_))
        ));
        let mut truncated = Vec::new();
        let g = Grid::uniform(1, 8, 1.0).unwrap();
        GridFunction::zeros(&g).write_to(&mut truncated).unwrap();
        truncated.truncate(truncated.len() - 5);
        assert!(GridFunction::read_from(&mut truncated.as_slice()).is_err());
    }

    #[test]
    fn tensor_product_spectrum_factorises() {
        // dft of f1 (x) f2 equals the tensor product of the 1-d dfts
        let g1 = Grid::dyadic_uniform(1, 16, 0).unwrap();
        let g2 = Grid::dyadic_uniform(2, 16, 0).unwrap();
        let u = |x: f64| c((x).sin() + 0.5, 0.3 * x.cos());
        let v = |x: f64| c((2.0 * x).cos(), -0.2);
        let f1 = GridFunction::from_fn(&g1, |x| u(x[0]));
        let f2 = GridFunction::from_fn(&g1, |x| v(x[0]));
        let f = GridFunction::from_fn(&g2, |x| u(x[0]) * v(x[1]));
        let s1 = f1.dft();
        let s2 = f2.dft();
        let s = f.dft();
        for (idx, val) in s.coef().indexed_iter() {
            let expect = s1.coef()[[idx[0]]] * s2.coef()[[idx[1]]];
            assert!((val - expect).norm() < 1e-12);
        }
    }
}
