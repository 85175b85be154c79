//! Root counting and lattice sign changes.
//!
//! Counts are kept in half-units (twice the count) so that roots sitting on
//! an interval endpoint, which carry weight 1/2, stay exact integers.
//!
//! [`count_roots`] scans a uniform grid, bisects every strict sign change,
//! and additionally looks for pairs of roots hidden inside a single cell: if
//! the function keeps its sign at both ends of a cell but its derivative
//! changes sign in the direction of zero, the extremum is located and, when
//! it lies on the other side of zero, both roots are bisected. Even-order
//! tangencies are not counted.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::poly::{evaluate_grid_pair, evaluation_scale, prefers_synthesis, SeriesRef, TrigPolySample};
use crate::synthesis::GridPlan;
use crate::{Error, Result};

pub const DEFAULT_OVERSAMPLE: usize = 16;
pub const MIN_OVERSAMPLE: usize = 4;
pub const BISECTION_WIDTH: f64 = 1e-13;
pub const BISECTION_MAX_ITER: u32 = 60;

/// Default residual bound for reported roots, `1e-10·(1+|u|+2√n)`.
pub fn default_root_tolerance(poly: &TrigPolySample) -> f64 {
    1e-10 * evaluation_scale(poly.u(), poly.n())
}

/// `2·(1/2 - sgn(xa·xb)/2)`: 0 for equal signs, 1 if either value is zero, 2 for a strict sign change.
pub fn sign_change_indicator(xa: f64, xb: f64) -> Result<u8> {
    if xa.is_nan() || xb.is_nan() {
        return Err(Error::InvalidArgument("sign change of NaN"));
    }
    let prod = xa * xb;
    Ok(if xa == 0.0 || xb == 0.0 {
        1
    } else if prod < 0.0 || (xa < 0.0) != (xb < 0.0) {
        2
    } else {
        0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    Interior,
    Endpoint,
}

impl RootKind {
    /// Weight in half-units.
    pub fn weight(self) -> u64 {
        match self {
            RootKind::Interior => 2,
            RootKind::Endpoint => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootLocation {
    pub t: f64,
    pub kind: RootKind,
}

/// A root count in half-units together with the located roots.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootTally {
    pub half_units: u64,
    pub roots: Vec<RootLocation>,
}

impl RootTally {
    pub fn count(&self) -> f64 {
        self.half_units as f64 / 2.0
    }

    /// Count with boundary roots at full weight.
    pub fn unweighted(&self) -> usize {
        self.roots.len()
    }

    fn push(&mut self, t: f64, kind: RootKind) {
        self.half_units += kind.weight();
        self.roots.push(RootLocation { t, kind });
    }
}

/// Which lattice-aligned interval to use for `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Snap {
    /// `[a_n, b_n] ⊇ [a, b]`: floor `a`, ceil `b`.
    #[default]
    Outer,
    /// `[a'_n, b'_n] ⊆ [a, b]`: ceil `a`, floor `b`.
    Inner,
}

/// The lattice `(δ/n)ℤ` restricted to a snapped copy of `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub n: usize,
    pub snap: Snap,
    first: i64,
    last: i64,
}

impl LatticeSpec {
    pub fn mesh(&self) -> f64 {
        self.delta / self.n as f64
    }

    pub fn node(&self, k: i64) -> f64 {
        self.mesh() * k as f64
    }

    /// Snapped left endpoint.
    pub fn start(&self) -> f64 {
        self.node(self.first)
    }

    /// Snapped right endpoint.
    pub fn end(&self) -> f64 {
        self.node(self.last)
    }

    /// Lattice indices of the snapped endpoints.
    pub fn index_range(&self) -> (i64, i64) {
        (self.first, self.last)
    }

    pub fn cells(&self) -> usize {
        (self.last - self.first) as usize
    }
}

// Absorbs rounding in a·n/δ when a sits on the lattice up to an ulp or so.
fn lattice_coordinate(x: f64, n: usize, delta: f64) -> f64 {
    let q = x * n as f64 / delta;
    let r = libm::round(q);
    if (q - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        q
    }
}

/// Snaps `[a, b] ⊆ [0, 2π]` to the lattice of mesh `δ/n`.
pub fn snap_interval(a: f64, b: f64, delta: f64, n: usize, snap: Snap) -> Result<LatticeSpec> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("interval endpoints must be finite"));
    }
    if b <= a {
        return Err(Error::InvalidArgument("interval needs a < b"));
    }
    if a < 0.0 || b > 2.0 * PI {
        return Err(Error::InvalidArgument("interval must lie in [0, 2π]"));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument("delta must be positive and finite"));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("degree n must be at least 1"));
    }
    let qa = lattice_coordinate(a, n, delta);
    let qb = lattice_coordinate(b, n, delta);
    let (first, last) = match snap {
        Snap::Outer => (libm::floor(qa), libm::ceil(qb)),
        Snap::Inner => (libm::ceil(qa), libm::floor(qb)),
    };
    if last < first {
        return Err(Error::InvalidArgument("interval contains no lattice node pair"));
    }
    Ok(LatticeSpec {
        a,
        b,
        delta,
        n,
        snap,
        first: first as i64,
        last: last as i64,
    })
}

/// Sum of sign-change indicators over consecutive lattice nodes between the
/// snapped endpoints.
///
/// Roots are located only to their lattice cell: a strict sign change is
/// reported at the cell midpoint, a zero at its node. The two endpoint values
/// are taken as zero when within [`default_root_tolerance`], matching
/// [`count_roots`].
pub fn count_lattice_sign_changes(poly: &TrigPolySample, lattice: &LatticeSpec) -> Result<RootTally> {
    LatticeCounter::new(*lattice)?.count(poly)
}

/// Real roots of `X_n` on `[a, b]` with the half-weight endpoint convention.
///
/// The grid has `⌈oversample·(n+1)·(b-a)/(2π)⌉ + 1` nodes. The polynomial is
/// `2π`-periodic, so `[a, b]` may extend past `2π` (snapped intervals do).
/// For many samples on the same interval, build a [`RootCounter`] once.
pub fn count_roots(
    poly: &TrigPolySample,
    a: f64,
    b: f64,
    oversample: usize,
    root_tolerance: f64,
) -> Result<RootTally> {
    RootCounter::new(poly.n(), a, b, oversample)?.count(poly, root_tolerance)
}

/// Roots of the `j`-th derivative on `[a, b]` using `nodes` grid points.
///
/// Endpoint roots are reported with [`RootKind::Endpoint`]; callers wanting
/// full boundary weight use [`RootTally::unweighted`].
pub fn count_derivative_roots(
    poly: &TrigPolySample,
    j: u32,
    a: f64,
    b: f64,
    nodes: usize,
    root_tolerance: f64,
) -> Result<RootTally> {
    RootCounter::with_nodes(poly.n(), a, b, nodes)?.count_derivative(poly, j, root_tolerance)
}

/// Root counting on a fixed interval and grid for degree-`n` samples.
///
/// Large grids are evaluated through a precomputed [`GridPlan`], so reusing
/// one counter across many samples is much cheaper than calling
/// [`count_roots`] each time. Results do not depend on which path is used
/// beyond rounding.
#[derive(Debug, Clone)]
pub struct RootCounter {
    n: usize,
    a: f64,
    b: f64,
    nodes: usize,
    plan: Option<GridPlan>,
}

impl RootCounter {
    pub fn new(n: usize, a: f64, b: f64, oversample: usize) -> Result<Self> {
        if oversample < MIN_OVERSAMPLE {
            return Err(Error::InvalidArgument("oversample below 4 cannot resolve the top frequency"));
        }
        check_interval(a, b)?;
        Self::with_nodes(n, a, b, grid_nodes(n, a, b, oversample))
    }

    pub fn with_nodes(n: usize, a: f64, b: f64, nodes: usize) -> Result<Self> {
        check_interval(a, b)?;
        if n == 0 {
            return Err(Error::InvalidArgument("degree n must be at least 1"));
        }
        if nodes < 2 {
            return Err(Error::InvalidArgument("need at least two grid nodes"));
        }
        let plan = if prefers_synthesis(n, nodes) {
            Some(GridPlan::new(n, a, step_of(a, b, nodes), nodes)?)
        } else {
            None
        };
        Ok(Self { n, a, b, nodes, plan })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Roots of `X_n`, each located to [`BISECTION_WIDTH`].
    pub fn count(&self, poly: &TrigPolySample, root_tolerance: f64) -> Result<RootTally> {
        let d = poly.derivative(1);
        self.run(poly.series(), d.series(), root_tolerance, true)
    }

    /// Half-unit count of the roots of `X_n` without locating them.
    ///
    /// Agrees exactly with `count(..).half_units`; only cells that may hide a
    /// pair of roots need extra work.
    pub fn count_half_units(&self, poly: &TrigPolySample, root_tolerance: f64) -> Result<u64> {
        let d = poly.derivative(1);
        Ok(self.run(poly.series(), d.series(), root_tolerance, false)?.half_units)
    }

    /// Roots of the `j`-th derivative.
    pub fn count_derivative(&self, poly: &TrigPolySample, j: u32, root_tolerance: f64) -> Result<RootTally> {
        let f = poly.derivative(j);
        let df = poly.derivative(j + 1);
        self.run(f.series(), df.series(), root_tolerance, true)
    }

    fn run(&self, f: SeriesRef<'_>, df: SeriesRef<'_>, tol: f64, locate: bool) -> Result<RootTally> {
        if f.cos_coef.len() != self.n {
            return Err(Error::InvalidArgument("counter degree does not match the polynomial"));
        }
        let step = step_of(self.a, self.b, self.nodes);
        let (v, d) = match &self.plan {
            Some(plan) => (plan.synthesize(f)?, plan.synthesize(df)?),
            None => evaluate_grid_pair(f, df, self.a, step, self.nodes)?,
        };
        scan(f, df, self.a, self.b, &v, &d, tol, locate)
    }
}

/// Lattice sign-change counting for a fixed lattice, reusable across samples.
#[derive(Debug, Clone)]
pub struct LatticeCounter {
    lattice: LatticeSpec,
    plan: Option<GridPlan>,
}

impl LatticeCounter {
    pub fn new(lattice: LatticeSpec) -> Result<Self> {
        let nodes = lattice.cells() + 1;
        let plan = if lattice.cells() > 0 && prefers_synthesis(lattice.n, nodes) {
            Some(GridPlan::new(lattice.n, lattice.start(), lattice.mesh(), nodes)?)
        } else {
            None
        };
        Ok(Self { lattice, plan })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn count(&self, poly: &TrigPolySample) -> Result<RootTally> {
        if poly.n() != self.lattice.n {
            return Err(Error::InvalidArgument("lattice degree does not match the polynomial"));
        }
        let lattice = &self.lattice;
        let mut tally = RootTally::default();
        let cells = lattice.cells();
        if cells == 0 {
            return Ok(tally);
        }
        let grid = match &self.plan {
            Some(plan) => plan.evaluate(poly)?,
            None => poly.evaluate_on_grid(lattice.start(), lattice.mesh(), cells + 1)?,
        };
        let mut v = grid.values.clone();
        // Endpoint values within rounding of zero are zeros, as in the root
        // counter; otherwise a root on the boundary could count twice here.
        let tol = default_root_tolerance(poly);
        for i in [0, cells] {
            if v[i].abs() <= tol {
                v[i] = 0.0;
            }
        }
        for i in 0..cells {
            let ind = sign_change_indicator(v[i], v[i + 1])?;
            tally.half_units += ind as u64;
            if ind == 2 {
                tally.roots.push(RootLocation {
                    t: grid.node(i) + 0.5 * grid.step,
                    kind: RootKind::Interior,
                });
            }
        }
        for (i, &x) in v.iter().enumerate() {
            if x == 0.0 {
                let kind = if i == 0 || i == cells { RootKind::Endpoint } else { RootKind::Interior };
                tally.roots.push(RootLocation { t: grid.node(i), kind });
            }
        }
        tally.roots.sort_by(|p, q| p.t.total_cmp(&q.t));
        Ok(tally)
    }
}

fn step_of(a: f64, b: f64, nodes: usize) -> f64 {
    (b - a) / (nodes - 1) as f64
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("interval endpoints must be finite"));
    }
    if b <= a {
        return Err(Error::InvalidArgument("interval needs a < b"));
    }
    Ok(())
}

pub fn grid_nodes(n: usize, a: f64, b: f64, oversample: usize) -> usize {
    let cells = libm::ceil(oversample as f64 * (n + 1) as f64 * (b - a) / (2.0 * PI));
    (cells as usize).max(1) + 1
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let lo_negative = flo < 0.0;
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[allow(clippy::too_many_arguments)]
fn scan(
    f: SeriesRef<'_>,
    df: SeriesRef<'_>,
    a: f64,
    b: f64,
    v: &[f64],
    d: &[f64],
    endpoint_tol: f64,
    locate: bool,
) -> Result<RootTally> {
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::Numerical("non-finite polynomial value"));
    }
    let last = v.len() - 1;
    let step = step_of(a, b, v.len());
    let node = |i: usize| if i == last { b } else { a + i as f64 * step };
    let is_zero = |i: usize| {
        if i == 0 || i == last {
            v[i].abs() <= endpoint_tol
        } else {
            v[i] == 0.0
        }
    };

    let mut tally = RootTally::default();
    let push = |tally: &mut RootTally, t: &dyn Fn() -> f64, kind: RootKind| {
        if locate {
            tally.push(t(), kind);
        } else {
            tally.half_units += kind.weight();
        }
    };
    if is_zero(0) {
        push(&mut tally, &|| a, RootKind::Endpoint);
    }
    for i in 0..last {
        let (lo, hi) = (node(i), node(i + 1));
        let (zl, zr) = (is_zero(i), is_zero(i + 1));
        if zl != zr {
            // A zero node next to a nonzero one: the side of the zero facing
            // the cell takes the sign of the derivative there.
            let (side, other) = if zl { (d[i], v[i + 1]) } else { (-d[i + 1], v[i]) };
            if side != 0.0 && (side < 0.0) != (other < 0.0) {
                let flo = if zl { side } else { v[i] };
                push(&mut tally, &|| bisect(|t| f.evaluate(t), lo, hi, flo), RootKind::Interior);
            }
        } else if !zl {
            if (v[i] < 0.0) != (v[i + 1] < 0.0) {
                push(&mut tally, &|| bisect(|t| f.evaluate(t), lo, hi, v[i]), RootKind::Interior);
            } else if heads_to_zero(v[i], d[i], d[i + 1]) {
                let t_ext = bisect(|t| df.evaluate(t), lo, hi, d[i]);
                let fe = f.evaluate(t_ext);
                if fe != 0.0 && (fe < 0.0) != (v[i] < 0.0) {
                    push(&mut tally, &|| bisect(|t| f.evaluate(t), lo, t_ext, v[i]), RootKind::Interior);
                    push(&mut tally, &|| bisect(|t| f.evaluate(t), t_ext, hi, fe), RootKind::Interior);
                }
            }
        }
        if zr {
            let kind = if i + 1 == last { RootKind::Endpoint } else { RootKind::Interior };
            push(&mut tally, &|| hi, kind);
        }
    }
    Ok(tally)
}

// The derivative changes sign inside the cell and the extremum lies between
// the cell values and zero.
fn heads_to_zero(value: f64, d_left: f64, d_right: f64) -> bool {
    if value > 0.0 {
        d_left < 0.0 && d_right > 0.0
    } else {
        d_left > 0.0 && d_right < 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::CoefficientFamily;
    use crate::rng::seeded;
    use alloc::vec;
    use proptest::prelude::*;

    fn cosine() -> TrigPolySample {
        TrigPolySample::new(0.0, vec![1.0], vec![0.0]).unwrap()
    }

    fn gaussian_poly(n: usize, u: f64, seed: u64) -> TrigPolySample {
        TrigPolySample::sample(CoefficientFamily::Gaussian, n, u, &mut seeded(seed)).unwrap()
    }

    #[test]
    fn zero_endpoint_with_nearby_root() {
        // cos t - 1 + tan(ε/2) sin t vanishes at 0 and ε, both inside the first cell
        let eps = 0.05;
        let p = TrigPolySample::new(-1.0, vec![1.0], vec![libm::tan(eps / 2.0)]).unwrap();
        assert_eq!(p.evaluate(0.0), 0.0);
        let tally = count_roots(&p, 0.0, 2.0 * PI, DEFAULT_OVERSAMPLE, default_root_tolerance(&p)).unwrap();
        assert_eq!(tally.half_units, 4, "{tally:?}");
        assert!((tally.roots[1].t - eps).abs() < 1e-12);
        // the mirror image: a zero at the right end of a cell
        let q = TrigPolySample::new(-1.0, vec![1.0], vec![-libm::tan(eps / 2.0)]).unwrap();
        let tally = count_roots(&q, 1.0, 2.0 * PI, DEFAULT_OVERSAMPLE, default_root_tolerance(&q)).unwrap();
        assert_eq!(tally.half_units, 3, "{tally:?}");
        let lattice = snap_interval(0.0, 2.0 * PI, 0.01, 1, Snap::Outer).unwrap();
        let lat = count_lattice_sign_changes(&p, &lattice).unwrap();
        assert!(lat.half_units <= count_roots(&p, lattice.start(), lattice.end(), 16, 1e-10).unwrap().half_units);
    }

    #[test]
    fn counter_paths_agree() {
        // n = 120 on [0, 2π] goes through the FFT plan; a short interval does not.
        let mut rng = seeded(31);
        let counter = RootCounter::new(120, 0.0, 2.0 * PI, DEFAULT_OVERSAMPLE).unwrap();
        assert!(counter.plan.is_some());
        for _ in 0..50 {
            let p = TrigPolySample::sample(CoefficientFamily::Rademacher, 120, 0.3, &mut rng).unwrap();
            let tol = default_root_tolerance(&p);
            let full = counter.count(&p, tol).unwrap();
            assert_eq!(counter.count_half_units(&p, tol).unwrap(), full.half_units);
            for r in &full.roots {
                assert!(p.evaluate(r.t).abs() < 1e-8, "{}", p.evaluate(r.t));
            }
            // the same roots seen through per-node evaluation, one short piece at a time
            let mut pieces = 0;
            for w in 0..8 {
                let (lo, hi) = (w as f64 * PI / 4.0, (w + 1) as f64 * PI / 4.0);
                let c = RootCounter::new(120, lo, hi, DEFAULT_OVERSAMPLE).unwrap();
                assert!(c.plan.is_none());
                pieces += c.count(&p, 0.0).unwrap().half_units;
            }
            assert_eq!(pieces, full.half_units);
        }
    }

    #[test]
    fn indicator_values() {
        assert_eq!(sign_change_indicator(1.0, 2.0).unwrap(), 0);
        assert_eq!(sign_change_indicator(0.0, 5.0).unwrap(), 1);
        assert_eq!(sign_change_indicator(-1.0, 3.0).unwrap(), 2);
        assert_eq!(sign_change_indicator(-0.0, 3.0).unwrap(), 1);
        assert_eq!(sign_change_indicator(-1e-300, 1e-300).unwrap(), 2);
        assert!(sign_change_indicator(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn snap_examples() {
        let l = snap_interval(0.0, 2.0 * PI, 1.0, 10, Snap::Outer).unwrap();
        assert_eq!(l.start(), 0.0);
        assert!((l.end() - 6.3).abs() < 1e-15);
        assert_eq!(l.index_range(), (0, 63));
        let l = snap_interval(0.35, 0.65, 1.0, 10, Snap::Outer).unwrap();
        assert!((l.start() - 0.3).abs() < 1e-15 && (l.end() - 0.7).abs() < 1e-15);
        assert_eq!(l.index_range(), (3, 7));
        let l = snap_interval(0.35, 0.65, 1.0, 10, Snap::Inner).unwrap();
        assert_eq!(l.index_range(), (4, 6));
        let l = snap_interval(0.5, 1.0, 1.0, 4, Snap::Outer).unwrap();
        assert_eq!(l.start(), 0.5);
        // 0.3/0.1 rounds to 2.9999999999999996
        let l = snap_interval(0.3, 0.55, 0.1, 1, Snap::Outer).unwrap();
        assert_eq!(l.index_range().0, 3);
    }

    #[test]
    fn snap_rejects_bad_input() {
        assert!(snap_interval(1.0, 0.5, 1.0, 10, Snap::Outer).is_err());
        assert!(snap_interval(1.0, 1.0, 1.0, 10, Snap::Outer).is_err());
        assert!(snap_interval(0.0, 7.0, 1.0, 10, Snap::Outer).is_err());
        assert!(snap_interval(0.0, 1.0, 0.0, 10, Snap::Outer).is_err());
        assert!(snap_interval(0.0, 1.0, 1.0, 0, Snap::Outer).is_err());
        assert!(snap_interval(0.31, 0.32, 1.0, 10, Snap::Inner).is_err());
    }

    #[test]
    fn lattice_constant_has_no_changes() {
        let p = TrigPolySample::new(5.0, vec![0.0], vec![0.0]).unwrap();
        let l = snap_interval(0.0, 2.0 * PI, 0.1, 1, Snap::Outer).unwrap();
        assert_eq!(count_lattice_sign_changes(&p, &l).unwrap().half_units, 0);
    }

    #[test]
    fn lattice_cosine() {
        // mesh δ/n = π/8
        let l = snap_interval(0.0, 2.0 * PI, PI / 8.0, 1, Snap::Outer).unwrap();
        assert_eq!(l.cells(), 16);
        let t = count_lattice_sign_changes(&cosine(), &l).unwrap();
        assert_eq!(t.half_units, 4);
    }

    #[test]
    fn lattice_single_cell() {
        let p = gaussian_poly(9, 0.1, 4);
        let l = snap_interval(0.35, 0.65, 1.0, 9, Snap::Inner).unwrap();
        let (k0, k1) = l.index_range();
        assert_eq!(k1 - k0, 1);
        let t = count_lattice_sign_changes(&p, &l).unwrap();
        let want = sign_change_indicator(p.evaluate(l.start()), p.evaluate(l.start() + l.mesh())).unwrap();
        assert_eq!(t.half_units, want as u64);
    }

    #[test]
    fn cosine_roots_full_period() {
        let p = cosine();
        let t = count_roots(&p, 0.0, 2.0 * PI, 16, default_root_tolerance(&p)).unwrap();
        assert_eq!(t.half_units, 4);
        assert_eq!(t.roots.len(), 2);
        assert!((t.roots[0].t - PI / 2.0).abs() < 1e-12);
        assert!((t.roots[1].t - 1.5 * PI).abs() < 1e-12);
        assert!(t.roots.iter().all(|r| r.kind == RootKind::Interior));
    }

    #[test]
    fn cosine_roots_at_endpoints() {
        let p = cosine();
        let t = count_roots(&p, PI / 2.0, 1.5 * PI, 16, default_root_tolerance(&p)).unwrap();
        assert_eq!(t.half_units, 2);
        assert_eq!(t.roots.len(), 2);
        assert!(t.roots.iter().all(|r| r.kind == RootKind::Endpoint));
    }

    #[test]
    fn constant_has_no_roots() {
        let p = TrigPolySample::new(1.0, vec![0.0], vec![0.0]).unwrap();
        let t = count_roots(&p, 0.0, 2.0 * PI, 16, 1e-10).unwrap();
        assert_eq!(t.half_units, 0);
        assert!(t.roots.is_empty());
    }

    #[test]
    fn low_oversample_rejected() {
        let p = cosine();
        assert!(count_roots(&p, 0.0, 1.0, 3, 1e-10).is_err());
        assert!(count_roots(&p, 1.0, 0.5, 16, 1e-10).is_err());
    }

    #[test]
    fn hidden_pair_is_found() {
        // 0.99 - cos t has two roots ±0.1415 around 2π, both inside a single cell.
        let p = TrigPolySample::new(0.99, vec![-1.0], vec![0.0]).unwrap();
        let t = count_derivative_roots(&p, 0, 5.9, 6.6, 2, 1e-12).unwrap();
        assert_eq!(t.half_units, 4, "{t:?}");
        let r = (0.99f64).acos();
        assert!((t.roots[0].t - (2.0 * PI - r)).abs() < 1e-12);
        assert!((t.roots[1].t - (2.0 * PI + r)).abs() < 1e-12);
        let p = TrigPolySample::new(1.01, vec![-1.0], vec![0.0]).unwrap();
        let t = count_derivative_roots(&p, 0, 5.9, 6.6, 2, 1e-12).unwrap();
        assert_eq!(t.half_units, 0);
    }

    #[test]
    fn derivative_roots_of_cosine() {
        // d/dt cos = -sin vanishes at 0, π, 2π
        let t = count_derivative_roots(&cosine(), 1, 0.0, 2.0 * PI, 64, 1e-12).unwrap();
        assert_eq!(t.unweighted(), 3);
        assert_eq!(t.half_units, 4);
    }

    #[test]
    fn refined_roots_have_small_residuals() {
        for seed in 0..20 {
            let p = gaussian_poly(300, 0.4, seed);
            let tol = default_root_tolerance(&p);
            let t = count_roots(&p, 0.0, 2.0 * PI, 16, tol).unwrap();
            assert_eq!(t.half_units, 2 * t.roots.len() as u64);
            for w in t.roots.windows(2) {
                assert!(w[0].t < w[1].t);
            }
            for r in &t.roots {
                assert!(p.evaluate(r.t).abs() <= tol, "residual at {}", r.t);
            }
        }
    }

    #[test]
    fn refinement_agreement() {
        let mut disagree = 0;
        let trials = 10_000;
        for seed in 0..trials {
            let n = 8 + (seed as usize % 57);
            let p = gaussian_poly(n, 0.0, 1_000 + seed);
            let c16 = count_roots(&p, 0.0, 2.0 * PI, 16, 1e-10).unwrap().half_units;
            let c64 = count_roots(&p, 0.0, 2.0 * PI, 64, 1e-10).unwrap().half_units;
            if c16 != c64 {
                disagree += 1;
            }
        }
        assert!(disagree as f64 <= 0.001 * trials as f64, "{disagree} disagreements");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lattice_below_roots(seed in any::<u64>(), n in 1usize..120, u in -2.0f64..2.0,
                               delta in 0.05f64..2.0, a in 0.0f64..3.0, len in 0.2f64..3.2) {
            let p = gaussian_poly(n, u, seed);
            let b = (a + len).min(2.0 * PI);
            let l = snap_interval(a, b, delta, n, Snap::Outer).unwrap();
            let lat = count_lattice_sign_changes(&p, &l).unwrap();
            let roots = count_roots(&p, l.start(), l.end(), 16, default_root_tolerance(&p)).unwrap();
            prop_assert!(lat.half_units <= roots.half_units);
        }

        #[test]
        fn lattice_below_roots_with_exact_zeros(seed in any::<u64>(), half in 1usize..300, delta in 0.02f64..0.5) {
            // Rademacher at u = 0 and even n often has X(0) = 0 exactly
            let n = 2 * half;
            let mut rng = seeded(seed);
            let p = TrigPolySample::sample(CoefficientFamily::Rademacher, n, 0.0, &mut rng).unwrap();
            let l = snap_interval(0.0, 2.0 * PI, delta, n, Snap::Outer).unwrap();
            let lat = count_lattice_sign_changes(&p, &l).unwrap();
            let roots = count_roots(&p, l.start(), l.end(), 16, default_root_tolerance(&p)).unwrap();
            prop_assert!(lat.half_units <= roots.half_units, "{} > {}", lat.half_units, roots.half_units);
        }

        #[test]
        fn nesting(seed in any::<u64>(), n in 1usize..120, delta in 0.05f64..1.0,
                   a in 0.0f64..3.0, len in 0.5f64..3.2) {
            let p = gaussian_poly(n, 0.3, seed);
            let b = (a + len).min(2.0 * PI);
            let tol = default_root_tolerance(&p);
            let outer = snap_interval(a, b, delta, n, Snap::Outer).unwrap();
            let inner = match snap_interval(a, b, delta, n, Snap::Inner) {
                Ok(l) if l.cells() > 0 => l,
                _ => return Ok(()),
            };
            let c_in = count_roots(&p, inner.start(), inner.end(), 16, tol).unwrap().half_units;
            let c = count_roots(&p, a, b, 16, tol).unwrap().half_units;
            let c_out = count_roots(&p, outer.start(), outer.end(), 16, tol).unwrap().half_units;
            prop_assert!(c_in <= c && c <= c_out, "{} {} {}", c_in, c, c_out);
        }

        #[test]
        fn doubling_oversample_never_loses_roots(seed in any::<u64>(), n in 1usize..100) {
            let p = gaussian_poly(n, 0.0, seed);
            let tol = default_root_tolerance(&p);
            let c1 = count_roots(&p, 0.0, 2.0 * PI, 16, tol).unwrap().half_units;
            let c2 = count_roots(&p, 0.0, 2.0 * PI, 32, tol).unwrap().half_units;
            prop_assert!(c2 >= c1);
        }
    }
}
