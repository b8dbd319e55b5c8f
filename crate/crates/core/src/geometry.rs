//! Boundary curves, arclength tables, curvature wells and the flux constant.
//!
//! Arclength `s` is measured counter-clockwise from the upper intersection
//! of the boundary with the vertical symmetry axis, on `[-L, L)` where `2L`
//! is the perimeter. The right well sits at `s_r < 0`, the left one at
//! `s_l > 0`, and the bottom axis point at `s = +-L`.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::quad::{adaptive, GaussRule};
use crate::linalg::roots::{brent, golden_min};
use crate::linalg::{PeriodicQuintic, PeriodicSpline};

/// Smallest sample count accepted by [`reparametrize`].
pub const MIN_TABLE_SAMPLES: usize = 512;

#[derive(Debug, Clone)]
pub enum BoundaryCurve {
    Ellipse { a: f64, b: f64 },
    Sampled(Arc<SampledCurve>),
}

/// Closed curve through ordered points, interpolated by periodic quintic
/// splines on uniform knots spaced at the mean chord length. Quintic rather
/// than cubic so that the curvature has continuous second derivatives.
#[derive(Debug)]
pub struct SampledCurve {
    points: Vec<(f64, f64)>,
    knots: Vec<f64>,
    x: PeriodicQuintic,
    y: PeriodicQuintic,
    period: f64,
}

impl SampledCurve {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

impl BoundaryCurve {
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidCurve(format!("ellipse semi-axes must be positive, got ({a}, {b})")));
        }
        Ok(Self::Ellipse { a, b })
    }

    pub fn circle(r: f64) -> Result<Self> {
        Self::ellipse(r, r)
    }

    /// Builds a sampled curve. The point list is closed implicitly; a repeated
    /// final point equal to the first is dropped.
    pub fn sampled(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() >= 2 && points.first() == points.last() {
            points.pop();
        }
        if points.len() < 8 {
            return Err(Error::InvalidCurve("a sampled curve needs at least 8 points".into()));
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::InvalidCurve("non-finite coordinate".into()));
        }
        let n = points.len();
        let area = shoelace(&points);
        if !(area > 0.0) {
            return Err(Error::InvalidCurve(
                "curve is not counter-clockwise (signed area is not positive)".into(),
            ));
        }
        if let Some((i, j)) = first_self_intersection(&points) {
            return Err(Error::InvalidCurve(format!("segments {i} and {j} intersect")));
        }
        let mut period = 0.0;
        for i in 0..n {
            let (p, q) = (points[i], points[(i + 1) % n]);
            let d = ((q.0 - p.0).powi(2) + (q.1 - p.1).powi(2)).sqrt();
            if d == 0.0 {
                return Err(Error::InvalidCurve(format!("repeated point at index {i}")));
            }
            period += d;
        }
        let knots: Vec<f64> = (0..n).map(|i| period * i as f64 / n as f64).collect();
        let x = PeriodicQuintic::new(&points.iter().map(|p| p.0).collect::<Vec<_>>(), period)?;
        let y = PeriodicQuintic::new(&points.iter().map(|p| p.1).collect::<Vec<_>>(), period)?;
        Ok(Self::Sampled(Arc::new(SampledCurve { points, knots, x, y, period })))
    }

    /// Reads whitespace-separated `x y` pairs, one per line. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut pts = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<f64>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(x)), Some(Ok(y)), None) => pts.push((x, y)),
                _ => {
                    return Err(Error::InvalidCurve(format!(
                        "{}:{}: expected two numbers",
                        path.display(),
                        k + 1
                    )))
                }
            }
        }
        Self::sampled(pts)
    }

    /// Uniform dilation by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        match self {
            Self::Ellipse { a, b } => Self::ellipse(lambda * a, lambda * b),
            Self::Sampled(c) => Self::sampled(c.points.iter().map(|p| (lambda * p.0, lambda * p.1)).collect()),
        }
    }

    pub fn period(&self) -> f64 {
        match self {
            Self::Ellipse { .. } => 2.0 * PI,
            Self::Sampled(c) => c.period,
        }
    }

    /// Position and first two parameter derivatives.
    pub fn jet(&self, t: f64) -> [(f64, f64); 3] {
        match self {
            Self::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                [(a * c, b * s), (-a * s, b * c), (-a * c, -b * s)]
            }
            Self::Sampled(cv) => {
                let (x, dx, ddx) = cv.x.eval3(t);
                let (y, dy, ddy) = cv.y.eval3(t);
                [(x, y), (dx, dy), (ddx, ddy)]
            }
        }
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        self.jet(t)[0]
    }

    fn speed(&self, t: f64) -> f64 {
        let d = self.jet(t)[1];
        (d.0 * d.0 + d.1 * d.1).sqrt()
    }

    /// Signed curvature at parameter `t`; positive on convex arcs of a
    /// counter-clockwise curve.
    pub fn curvature(&self, t: f64) -> Result<f64> {
        if let Self::Ellipse { a, b } = self {
            let (s, c) = t.sin_cos();
            let q = a * a * s * s + b * b * c * c;
            return Ok(a * b / (q * q.sqrt()));
        }
        let [_, d1, d2] = self.jet(t);
        let sp2 = d1.0 * d1.0 + d1.1 * d1.1;
        if sp2.sqrt() < 1e-12 {
            return Err(Error::InvalidCurve(format!("degenerate parametrization at t = {t}")));
        }
        Ok((d1.0 * d2.1 - d1.1 * d2.0) / (sp2 * sp2.sqrt()))
    }

    /// Length of the parameter arc `[t0, t1]`.
    fn arc(&self, t0: f64, t1: f64) -> f64 {
        thread_local! {
            static RULE: GaussRule = GaussRule::new(20);
        }
        RULE.with(|r| r.integrate(t0, t1, |t| self.speed(t)))
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Self::Ellipse { .. } => adaptive(0.0, 2.0 * PI, 1e-14, |t| self.speed(t)),
            Self::Sampled(c) => {
                let n = c.knots.len();
                let rule = GaussRule::new(10);
                (0..n)
                    .map(|i| {
                        let t1 = if i + 1 < n { c.knots[i + 1] } else { c.period };
                        rule.integrate(c.knots[i], t1, |t| self.speed(t))
                    })
                    .sum()
            }
        }
    }

    /// Enclosed area by Green's theorem.
    pub fn area(&self) -> f64 {
        match self {
            Self::Ellipse { a, b } => PI * a * b,
            Self::Sampled(c) => {
                let n = c.knots.len();
                let rule = GaussRule::new(10);
                (0..n)
                    .map(|i| {
                        let t1 = if i + 1 < n { c.knots[i + 1] } else { c.period };
                        rule.integrate(c.knots[i], t1, |t| {
                            let [p, d, _] = self.jet(t);
                            0.5 * (p.0 * d.1 - p.1 * d.0)
                        })
                    })
                    .sum()
            }
        }
    }

    /// Maximal distance between the point set and its mirror image in the
    /// vertical axis, relative to the curve size.
    pub fn symmetry_defect(&self) -> f64 {
        match self {
            Self::Ellipse { .. } => 0.0,
            Self::Sampled(c) => {
                let diam = c.period / PI;
                let worst = c
                    .points
                    .iter()
                    .map(|p| {
                        c.points
                            .iter()
                            .map(|q| ((q.0 + p.0).powi(2) + (q.1 - p.1).powi(2)).sqrt())
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max);
                worst / diam
            }
        }
    }

    /// Parameter of the upper intersection with the vertical axis.
    fn top_parameter(&self) -> Result<f64> {
        match self {
            Self::Ellipse { .. } => Ok(0.5 * PI),
            Self::Sampled(c) => {
                let n = c.knots.len();
                let mut best: Option<(f64, f64)> = None;
                let m = 4 * n;
                let h = c.period / m as f64;
                for k in 0..m {
                    let t0 = k as f64 * h;
                    let t1 = t0 + h;
                    let (x0, x1) = (self.point(t0).0, self.point(t1).0);
                    if x0 == 0.0 || x0.signum() != x1.signum() {
                        let t = if x0 == 0.0 { t0 } else { brent(|t| self.point(t).0, t0, t1, 1e-15)? };
                        let y = self.point(t).1;
                        if best.is_none_or(|(_, yb)| y > yb) {
                            best = Some((t, y));
                        }
                    }
                }
                best.map(|b| b.0).ok_or_else(|| {
                    Error::InvalidCurve("curve does not cross the vertical axis".into())
                })
            }
        }
    }
}

fn shoelace(p: &[(f64, f64)]) -> f64 {
    let n = p.len();
    0.5 * (0..n).map(|i| p[i].0 * p[(i + 1) % n].1 - p[(i + 1) % n].0 * p[i].1).sum::<f64>()
}

fn first_self_intersection(p: &[(f64, f64)]) -> Option<(usize, usize)> {
    let n = p.len();
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    for i in 0..n {
        let (a, b) = (p[i], p[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (p[j], p[(j + 1) % n]);
            // bounding-box rejection keeps this affordable
            if a.0.max(b.0) < c.0.min(d.0)
                || c.0.max(d.0) < a.0.min(b.0)
                || a.1.max(b.1) < c.1.min(d.1)
                || c.1.max(d.1) < a.1.min(b.1)
            {
                continue;
            }
            let d1 = cross(a, b, c);
            let d2 = cross(a, b, d);
            let d3 = cross(c, d, a);
            let d4 = cross(c, d, b);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                return Some((i, j));
            }
        }
    }
    None
}

/// Curvature sampled on a uniform arclength grid.
#[derive(Debug, Clone)]
pub struct ArcLengthTable {
    /// Nodes `s_j = -L + j * 2L / n`.
    pub s: Vec<f64>,
    pub kappa: Vec<f64>,
    /// Half-length of the boundary.
    pub l: f64,
    params: Vec<f64>,
    curve: BoundaryCurve,
    spline: PeriodicSpline,
}

impl ArcLengthTable {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn ds(&self) -> f64 {
        2.0 * self.l / self.s.len() as f64
    }

    pub fn curve(&self) -> &BoundaryCurve {
        &self.curve
    }

    /// Wraps `s` into `[-L, L)`.
    pub fn wrap(&self, s: f64) -> f64 {
        (s + self.l).rem_euclid(2.0 * self.l) - self.l
    }

    /// Curve parameter at arclength `s`, by Newton iteration from the
    /// nearest table node.
    pub fn param_at(&self, s: f64) -> f64 {
        let s = self.wrap(s);
        let j = (((s + self.l) / self.ds()).round() as usize) % self.len();
        // nearest node, possibly the wrapped one
        let mut sj = self.s[j];
        if s - sj > self.l {
            sj += 2.0 * self.l;
        } else if sj - s > self.l {
            sj -= 2.0 * self.l;
        }
        let tj = self.params[j];
        let mut t = tj + (s - sj) / self.curve.speed(tj);
        for _ in 0..30 {
            let f = self.curve.arc(tj, t) - (s - sj);
            let dt = f / self.curve.speed(t);
            t -= dt;
            if dt.abs() < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }

    /// Curvature at arbitrary `s` through the underlying curve.
    pub fn kappa_exact(&self, s: f64) -> f64 {
        let t = self.param_at(s);
        self.curve.curvature(t).unwrap_or(f64::NAN)
    }

    /// Cubic-spline interpolant of the samples, with two derivatives.
    pub fn kappa_jet(&self, s: f64) -> (f64, f64, f64) {
        self.spline.eval3(s)
    }

    pub fn kappa_at(&self, s: f64) -> f64 {
        self.spline.eval(s)
    }

    pub fn point_at(&self, s: f64) -> (f64, f64) {
        self.curve.point(self.param_at(s))
    }

    /// Periodic trapezoid approximation of the total curvature.
    pub fn turning_integral(&self) -> f64 {
        self.kappa.iter().sum::<f64>() * self.ds()
    }

    /// `max_j |kappa(s_j) - kappa(-s_j)|` over the table.
    pub fn mirror_defect(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|j| {
                let m = (n - j) % n;
                (self.kappa[j] - self.kappa[m]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Resamples the curvature on a uniform arclength grid of `n` points.
pub fn reparametrize(curve: &BoundaryCurve, n: usize) -> Result<ArcLengthTable> {
    if n < MIN_TABLE_SAMPLES {
        return Err(Error::Precondition(format!("table needs at least {MIN_TABLE_SAMPLES} samples, got {n}")));
    }
    let perim = curve.perimeter();
    let l = 0.5 * perim;
    let ds = perim / n as f64;
    let t_top = curve.top_parameter()?;
    let period = curve.period();
    let t_bottom = march_long(curve, t_top, l);
    // start at s = -L (the bottom point) and march counter-clockwise
    let t_start = t_bottom - period;
    let mut params = Vec::with_capacity(n);
    let mut t = t_start;
    params.push(t);
    for _ in 1..n {
        let guess = t + ds / curve.speed(t);
        t = march(curve, t, ds, guess);
        params.push(t);
    }
    let closing = curve.arc(t, t_start + period);
    if (closing - ds).abs() > 1e-8 * ds {
        return Err(Error::Numerical(format!(
            "arclength inversion drifted: closing step {closing} vs {ds}"
        )));
    }
    let s: Vec<f64> = (0..n).map(|j| -l + j as f64 * ds).collect();
    let kappa = params.iter().map(|&t| curve.curvature(t)).collect::<Result<Vec<_>>>()?;
    let spline = PeriodicSpline::uniform(-l, kappa.clone(), perim)?;
    Ok(ArcLengthTable { s, kappa, l, params, curve: curve.clone(), spline })
}

/// As [`march`] for long arcs, split so each Gauss panel stays short.
fn march_long(curve: &BoundaryCurve, t0: f64, len: f64) -> f64 {
    let pieces = 256;
    let step = len / pieces as f64;
    let mut t = t0;
    for _ in 0..pieces {
        let g = t + step / curve.speed(t);
        t = march(curve, t, step, g);
    }
    t
}

/// Parameter `t` with `arc(t0, t) = len`, by Newton's method.
fn march(curve: &BoundaryCurve, t0: f64, len: f64, guess: f64) -> f64 {
    let mut t = guess;
    for _ in 0..50 {
        let f = curve.arc(t0, t) - len;
        let dt = f / curve.speed(t);
        t -= dt;
        if dt.abs() < 1e-15 * (1.0 + t.abs()) {
            break;
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellData {
    pub s_r: f64,
    pub s_l: f64,
    pub kappa_max: f64,
    pub kappa_min: f64,
    /// `-kappa''(s_r)`.
    pub k2: f64,
    /// `-kappa''(s_l)`.
    pub k2_left: f64,
    pub symmetric: bool,
}

/// Tolerances for well detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellTolerances {
    /// Maxima closer than `separation * L` are the same point.
    pub separation: f64,
    /// Maxima within this of the global maximum count as global.
    pub level: f64,
}

impl Default for WellTolerances {
    fn default() -> Self {
        Self { separation: 1e-3, level: 1e-8 }
    }
}

pub fn locate_wells(table: &ArcLengthTable) -> Result<WellData> {
    locate_wells_with(table, WellTolerances::default())
}

pub fn locate_wells_with(table: &ArcLengthTable, tol: WellTolerances) -> Result<WellData> {
    let n = table.len();
    let k = &table.kappa;
    let kmax_grid = k.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let kmin = k.iter().cloned().fold(f64::INFINITY, f64::min);
    if kmax_grid - kmin <= 1e-10 * kmax_grid.abs().max(1.0) {
        return Err(Error::NoWells);
    }
    let ds = table.ds();
    let mut maxima = Vec::new();
    for j in 0..n {
        let (a, b, c) = (k[(j + n - 1) % n], k[j], k[(j + 1) % n]);
        if b > a && b >= c {
            // quadratic vertex, then golden refinement on the exact curvature
            let den = a - 2.0 * b + c;
            let off = if den < 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            let s0 = table.s[j] + off * ds;
            let (sg, _) = golden_min(|s| -table.kappa_exact(s), s0 - ds, s0 + ds, 1e-9);
            // polish on the symmetric difference quotient, whose root is
            // located to rounding level rather than sqrt(eps)
            let hd = 1e-4 * table.l;
            let slope = |s: f64| table.kappa_exact(s + hd) - table.kappa_exact(s - hd);
            // rounding noise in sampled curvature can leave sg several 1e-6 L off
            let bracket = [1e-6, 1e-5, 1e-4]
                .iter()
                .map(|f| (f * table.l).min(ds))
                .find(|&w| slope(sg - w) > 0.0 && slope(sg + w) < 0.0);
            let s = match bracket {
                Some(w) => brent(slope, sg - w, sg + w, 1e-15)?,
                None => sg,
            };
            maxima.push((table.wrap(s), table.kappa_exact(s)));
        }
    }
    let kmax = maxima.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);
    let mut global: Vec<(f64, f64)> = Vec::new();
    for &(s, kv) in &maxima {
        if kmax - kv > tol.level * kmax.abs().max(1.0) {
            continue;
        }
        let dup = global.iter().any(|g| {
            let d = (g.0 - s).abs();
            d.min(2.0 * table.l - d) < tol.separation * table.l
        });
        if !dup {
            global.push((s, kv));
        }
    }
    let on_axis = |s: f64| s.abs() < tol.separation * table.l || table.l - s.abs() < tol.separation * table.l;
    if let Some(g) = global.iter().find(|g| on_axis(g.0)) {
        return Err(Error::Assumption(format!(
            "curvature maximum on the symmetry axis at s = {}",
            g.0
        )));
    }
    if global.len() != 2 {
        return Err(Error::Assumption(format!(
            "curvature maximum attained at {} points, expected exactly two",
            global.len()
        )));
    }
    global.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (s_r, s_l) = (global[0].0, global[1].0);
    if !(s_r < 0.0 && s_l > 0.0) {
        return Err(Error::Assumption(format!(
            "both curvature maxima on one side of the axis (s = {s_r}, {s_l})"
        )));
    }
    let k2 = -second_derivative(table, s_r);
    let k2_left = -second_derivative(table, s_l);
    if !(k2 > 0.0 && k2_left > 0.0) {
        return Err(Error::Assumption(format!(
            "degenerate curvature maximum (k2 = {k2}, {k2_left})"
        )));
    }
    let symmetric = (s_r + s_l).abs() <= 1e-6 && table.mirror_defect() <= 1e-6 * kmax.abs().max(1.0);
    Ok(WellData { s_r, s_l, kappa_max: kmax, kappa_min: kmin, k2, k2_left, symmetric })
}

/// Five-point stencil on the exact curvature at steps `h` and `h/2`, with
/// one Richardson level.
fn second_derivative(table: &ArcLengthTable, s: f64) -> f64 {
    let h = match table.curve() {
        BoundaryCurve::Ellipse { .. } => 1e-3 * table.l,
        BoundaryCurve::Sampled(c) => (1e-3 * table.l).max(6.0 * c.period / c.knots.len() as f64),
    };
    let f = |x: f64| table.kappa_exact(x);
    let d = |h: f64| (-f(s + 2.0 * h) + 16.0 * f(s + h) - 30.0 * f(s) + 16.0 * f(s - h) - f(s - 2.0 * h)) / (12.0 * h * h);
    let (coarse, fine) = (d(h), d(0.5 * h));
    fine + (fine - coarse) / 15.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxConstant {
    pub gamma0: f64,
    pub area: f64,
    /// Half-length of the boundary.
    pub l: f64,
}

pub fn flux_constant(curve: &BoundaryCurve) -> FluxConstant {
    let area = curve.area();
    let l = 0.5 * curve.perimeter();
    FluxConstant { gamma0: area / (2.0 * l), area, l }
}

/// Everything the downstream modules need from the boundary.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub table: ArcLengthTable,
    pub wells: WellData,
    pub flux: FluxConstant,
}

impl Geometry {
    pub fn new(curve: &BoundaryCurve, n: usize) -> Result<Self> {
        let table = reparametrize(curve, n)?;
        let wells = locate_wells(&table)?;
        let flux = flux_constant(curve);
        Ok(Self { table, wells, flux })
    }

    pub fn l(&self) -> f64 {
        self.table.l
    }
}

/// Complete elliptic integral of the second kind `E(m)`, `m = k^2`, by the
/// arithmetic-geometric mean.
pub fn elliptic_e(m: f64) -> f64 {
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut sum = 0.5 * c * c;
    let mut p = 0.5;
    for _ in 0..40 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        p *= 2.0;
        sum += p * c * c;
        a = an;
        b = bn;
        if c.abs() < 1e-17 {
            break;
        }
    }
    PI / (2.0 * a) * (1.0 - sum)
}

/// Perimeter of the ellipse with semi-axes `a`, `b`.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    4.0 * a * elliptic_e(1.0 - (b / a).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agm_perimeter() {
        assert!((ellipse_perimeter(1.0, 1.0) - 2.0 * PI).abs() < 1e-14);
        assert!((ellipse_perimeter(2.0, 1.0) - 9.688_448_220_547_675).abs() < 1e-12);
    }

    #[test]
    fn clockwise_curve_rejected() {
        let pts: Vec<(f64, f64)> = (0..32)
            .map(|k| {
                let t = -2.0 * PI * k as f64 / 32.0;
                (t.cos(), t.sin())
            })
            .collect();
        assert!(matches!(BoundaryCurve::sampled(pts), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn figure_eight_rejected() {
        let pts: Vec<(f64, f64)> = (0..64)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 64.0;
                ((2.0 * t).sin() + 0.01, t.sin())
            })
            .collect();
        assert!(BoundaryCurve::sampled(pts).is_err());
    }

    #[test]
    fn small_table_rejected() {
        let c = BoundaryCurve::ellipse(2.0, 1.0).unwrap();
        assert!(reparametrize(&c, 100).is_err());
    }
}
