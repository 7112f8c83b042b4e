//! Discrete maximal operators on periodic grids.
//!
//! Three variants, all returning nonnegative real-valued grid functions:
//!
//! * [`hl_max`]: cell averages of `|f|` over axis-parallel windows of
//!   `2^m` cells per axis, maximised over every placement containing the
//!   point. Restricting to dyadic sizes keeps the cost at
//!   `O(N log n)` and changes the full supremum by at most a factor 2.
//! * [`dir_max`]: the one-dimensional centred-interval maximal function
//!   along a single axis, all radii.
//! * [`peetre_max`]: a shift-penalised supremum
//!   `sup_z |f(x - z)| / prod_i (1 + |s_i z_i|^a)` over the whole lattice,
//!   evaluated exhaustively (quadratic cost; intended for small grids and
//!   oracle checks).
//!
//! Windows wrap around periodically everywhere. None of these operators
//! participate in the norm engines; they exist for the boundedness
//! experiments and as reference objects in their own right.

use ndarray::{ArrayD, Axis, IxDyn};
use num_complex::Complex64;

use crate::{Error, GridFunction, Result};

/// Apply a 1-d in-place transform along every lane of the given axis,
/// copying through a contiguous buffer when needed.
fn for_each_lane(data: &mut ArrayD<f64>, axis: usize, mut op: impl FnMut(&mut [f64])) {
    let n = data.shape()[axis];
    let mut buf = vec![0.0; n];
    for mut lane in data.lanes_mut(Axis(axis)) {
        if let Some(slice) = lane.as_slice_mut() {
            op(slice);
        } else {
            for (b, v) in buf.iter_mut().zip(lane.iter()) {
                *b = *v;
            }
            op(&mut buf);
            for (v, b) in lane.iter_mut().zip(buf.iter()) {
                *v = *b;
            }
        }
    }
}

/// Replace `lane[s]` with the periodic window sum starting at `s`:
/// `sum_{o < w} lane[(s + o) mod n]`.
fn sliding_sum(lane: &mut [f64], w: usize, scratch: &mut Vec<f64>) {
    let n = lane.len();
    scratch.clear();
    scratch.extend_from_slice(lane);
    let mut acc: f64 = scratch[..w].iter().sum();
    for s in 0..n {
        lane[s] = acc;
        acc += scratch[(s + w) % n] - scratch[s];
    }
}

/// Replace `lane[x]` with `max_{s in [x-w+1, x]} lane[s mod n]` (the best
/// window start whose length-`w` window still covers `x`), via a monotone
/// deque over the doubled lane.
fn sliding_max(lane: &mut [f64], w: usize, scratch: &mut Vec<f64>) {
    let n = lane.len();
    scratch.clear();
    scratch.extend_from_slice(lane);
    scratch.extend_from_slice(lane);
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    for p in 0..2 * n {
        while deque.front().is_some_and(|&front| front + w <= p) {
            deque.pop_front();
        }
        while deque.back().is_some_and(|&back| scratch[back] <= scratch[p]) {
            deque.pop_back();
        }
        deque.push_back(p);
        // position p in the doubled lane answers x = p - n, whose admissible
        // starts are p - w + 1 ..= p
        if p >= n {
            lane[p - n] = scratch[*deque.front().expect("deque holds p")];
        }
    }
}

fn abs_field(f: &GridFunction) -> ArrayD<f64> {
    f.data().mapv(|v| v.norm())
}

fn wrap_real(f: &GridFunction, data: ArrayD<f64>) -> GridFunction {
    GridFunction::from_parts(f.grid(), data.mapv(|v| Complex64::new(v, 0.0)))
}

/// Hardy-Littlewood style maximal function over dyadic cell cubes.
pub fn hl_max(f: &GridFunction) -> GridFunction {
    let grid = f.grid();
    let d = grid.dim();
    let abs = abs_field(f);
    // the one-cell window reproduces |f| exactly
    let mut out = abs.clone();
    let m_max = grid
        .n()
        .iter()
        .map(|&ni| ni.trailing_zeros())
        .min()
        .unwrap_or(0);
    let mut scratch = Vec::new();
    for m in 1..=m_max {
        let w = 1usize << m;
        let mut box_sum = abs.clone();
        for ax in 0..d {
            for_each_lane(&mut box_sum, ax, |lane| sliding_sum(lane, w, &mut scratch));
        }
        for ax in 0..d {
            for_each_lane(&mut box_sum, ax, |lane| sliding_max(lane, w, &mut scratch));
        }
        let inv_cells = 1.0 / (w as f64).powi(d as i32);
        for (o, b) in out.iter_mut().zip(box_sum.iter()) {
            let avg = b * inv_cells;
            if avg > *o {
                *o = avg;
            }
        }
    }
    wrap_real(f, out)
}

/// Centred-interval maximal function along one axis (all radii up to half
/// the period, plus the full-circle mean).
pub fn dir_max(f: &GridFunction, axis: usize) -> Result<GridFunction> {
    let grid = f.grid();
    if axis >= grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "axis {} out of range for dimension {}",
            axis,
            grid.dim()
        )));
    }
    let mut out = abs_field(f);
    let n = grid.n()[axis];
    let r_max = (n - 1) / 2;
    let mut prefix = vec![0.0; 3 * n + 1];
    for_each_lane(&mut out, axis, |lane| {
        // prefix sums over three periods so a centred window never straddles
        // the array boundary: window [x - r, x + r] lives at start x + n - r
        for i in 0..3 * n {
            prefix[i + 1] = prefix[i] + lane[i % n];
        }
        let total = prefix[n];
        for (x, v) in lane.iter_mut().enumerate() {
            // radius 0 is the sample itself, already in *v
            let mut best = *v;
            for r in 1..=r_max {
                let start = x + n - r;
                let avg = (prefix[start + 2 * r + 1] - prefix[start]) / (2 * r + 1) as f64;
                if avg > best {
                    best = avg;
                }
            }
            let mean = total / n as f64;
            if mean > best {
                best = mean;
            }
            *v = best;
        }
    });
    Ok(wrap_real(f, out))
}

/// Shift-penalised maximal function
/// `sup_z |f(x - z)| / prod_i (1 + |scale_i z_i|^a)` with the shift `z`
/// running over the symmetric fundamental domain of the lattice.
/// Exhaustive: quadratic in the number of grid points.
pub fn peetre_max(f: &GridFunction, a: f64, scales: &[f64]) -> Result<GridFunction> {
    let grid = f.grid();
    let d = grid.dim();
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "decay exponent must be positive and finite, got {a}"
        )));
    }
    if scales.len() != d {
        return Err(Error::InvalidArgument(format!(
            "{} scales for dimension {d}",
            scales.len()
        )));
    }
    if scales.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(Error::InvalidArgument(
            "scales must be positive and finite".into(),
        ));
    }
    let abs = abs_field(f);
    let n = grid.n().to_vec();
    let total: usize = n.iter().product();
    // per-axis penalty of an index offset, offsets reduced to (-n/2, n/2]
    let penalty: Vec<Vec<f64>> = (0..d)
        .map(|ax| {
            let h = grid.spacing(ax);
            (0..n[ax])
                .map(|r| {
                    let signed = if r <= n[ax] / 2 {
                        r as f64
                    } else {
                        r as f64 - n[ax] as f64
                    };
                    1.0 + (scales[ax] * signed.abs() * h).powf(a)
                })
                .collect()
        })
        .collect();
    let strides = {
        let mut s = vec![1usize; d];
        for ax in (0..d.saturating_sub(1)).rev() {
            s[ax] = s[ax + 1] * n[ax + 1];
        }
        s
    };
    let abs_flat = abs.as_slice().expect("row-major storage");
    let mut out = vec![0.0f64; total];
    let mut z = vec![0usize; d];
    loop {
        let inv_pen = 1.0
            / (0..d)
                .map(|ax| penalty[ax][z[ax]])
                .product::<f64>();
        // visit every x in row-major order, tracking the flat index of x - z
        let mut x = vec![0usize; d];
        let mut src_digit: Vec<usize> = (0..d).map(|ax| (n[ax] - z[ax]) % n[ax]).collect();
        let mut src: usize = src_digit
            .iter()
            .zip(&strides)
            .map(|(digit, s)| digit * s)
            .sum();
        for o in out.iter_mut() {
            let cand = abs_flat[src] * inv_pen;
            if cand > *o {
                *o = cand;
            }
            for ax in (0..d).rev() {
                x[ax] += 1;
                src_digit[ax] += 1;
                src += strides[ax];
                if src_digit[ax] == n[ax] {
                    src_digit[ax] = 0;
                    src -= n[ax] * strides[ax];
                }
                if x[ax] < n[ax] {
                    break;
                }
                x[ax] = 0;
            }
        }
        // advance the shift
        let mut done = true;
        for ax in (0..d).rev() {
            z[ax] += 1;
            if z[ax] < n[ax] {
                done = false;
                break;
            }
            z[ax] = 0;
        }
        if done {
            break;
        }
    }
    let out = ArrayD::from_shape_vec(IxDyn(&n), out).expect("shape matches length");
    Ok(wrap_real(f, out))
}
