//! Numerical parallel transport for `f' = A(z, ż) f` with
//! `A = λ⁻¹ Σ_{i<j} M_ij (ż_i − ż_j)/(z_i − z_j)`, integrated by classical RK4.
//!
//! The monodromy operator of a loop is `Ψ(1)⁻¹`, so that a simple loop around
//! `z_i = z_j` has eigenvalues `exp(−2πiμ)` for `μ` the residue eigenvalues.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::connection::ConnectionForm;
use crate::error::{Error, Result};
use crate::par;
use crate::spectra::PhaseMultiset;

pub type ApproxMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// A closed-form curve `s ↦ z(s)`, `s ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// `z_moving` runs once counterclockwise around `z_center`; the start
    /// configuration fixes the radius and initial angle.
    Circle {
        start: Vec<Complex64>,
        moving: usize,
        center: usize,
    },
    /// Straight segment between two configurations.
    Line { from: Vec<Complex64>, to: Vec<Complex64> },
    /// `(e^{2πis}z₁, e^{2πis}z₂, e^{2πis}z₃, z₄, z₅, z₆)`.
    Dilation { start: Vec<Complex64> },
}

impl Curve {
    /// Position and velocity at `s`.
    pub fn eval(&self, s: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        match self {
            Curve::Circle { start, moving, center } => {
                let (m, o) = (moving - 1, center - 1);
                let w = cis(2.0 * PI * s);
                let r = start[m] - start[o];
                let mut z = start.clone();
                let mut dz = vec![Complex64::default(); z.len()];
                z[m] = start[o] + r * w;
                dz[m] = r * w * c(0.0, 2.0 * PI);
                (z, dz)
            }
            Curve::Line { from, to } => {
                let z = from.iter().zip(to).map(|(a, b)| a + (b - a) * s).collect();
                let dz = from.iter().zip(to).map(|(a, b)| b - a).collect();
                (z, dz)
            }
            Curve::Dilation { start } => {
                let w = cis(2.0 * PI * s);
                let mut z = start.clone();
                let mut dz = vec![Complex64::default(); z.len()];
                for m in 0..3 {
                    z[m] = start[m] * w;
                    dz[m] = start[m] * w * c(0.0, 2.0 * PI);
                }
                (z, dz)
            }
        }
    }

    pub fn start(&self) -> Vec<Complex64> {
        self.eval(0.0).0
    }

    pub fn end(&self) -> Vec<Complex64> {
        self.eval(1.0).0
    }
}

/// A curve placed on the global time interval `[t0, t1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub curve: Curve,
    pub t0: f64,
    pub t1: f64,
}

/// A chain of segments avoiding every diagonal by `clearance`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    segments: Vec<Segment>,
    clearance: f64,
}

const CLEARANCE_SAMPLES: usize = 256;
const CHAIN_TOL: f64 = 1e-9;

fn min_distance(z: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..z.len() {
        for b in a + 1..z.len() {
            best = best.min((z[a] - z[b]).norm());
        }
    }
    best
}

impl PathSpec {
    /// Places the curves on equal time slices of `[0, 1]` and validates the chain.
    pub fn new(curves: Vec<Curve>, clearance: f64) -> Result<Self> {
        if curves.is_empty() {
            return Err(Error::Invalid("path needs at least one segment".into()));
        }
        if clearance.is_nan() || clearance <= 0.0 {
            return Err(Error::Invalid(format!("clearance must be positive, got {clearance}")));
        }
        let n = curves.len() as f64;
        let segments: Vec<Segment> = curves
            .into_iter()
            .enumerate()
            .map(|(i, curve)| Segment {
                curve,
                t0: i as f64 / n,
                t1: (i + 1) as f64 / n,
            })
            .collect();
        for (i, pair) in segments.windows(2).enumerate() {
            let (a, b) = (pair[0].curve.end(), pair[1].curve.start());
            if a.iter().zip(&b).any(|(x, y)| (x - y).norm() > CHAIN_TOL) {
                return Err(Error::Discontinuous(i + 1));
            }
        }
        for seg in &segments {
            for s in 0..=CLEARANCE_SAMPLES {
                let u = s as f64 / CLEARANCE_SAMPLES as f64;
                let d = min_distance(&seg.curve.eval(u).0);
                if d < clearance {
                    return Err(Error::Clearance {
                        clearance,
                        found: d,
                        t: seg.t0 + u * (seg.t1 - seg.t0),
                    });
                }
            }
        }
        Ok(Self { segments, clearance })
    }

    /// Declares half the sampled least distance to the diagonals as clearance.
    pub fn with_half_clearance(curves: Vec<Curve>) -> Result<Self> {
        let least = curves
            .iter()
            .flat_map(|c| (0..=CLEARANCE_SAMPLES).map(move |s| min_distance(&c.eval(s as f64 / CLEARANCE_SAMPLES as f64).0)))
            .fold(f64::INFINITY, f64::min);
        PathSpec::new(curves, least / 2.0)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    pub fn start(&self) -> Vec<Complex64> {
        self.segments[0].curve.start()
    }

    pub fn end(&self) -> Vec<Complex64> {
        self.segments.last().expect("nonempty").curve.end()
    }

    pub fn is_closed(&self) -> bool {
        self.start().iter().zip(self.end()).all(|(a, b)| (a - b).norm() <= CHAIN_TOL)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &PathSpec) -> Result<PathSpec> {
        let curves = self
            .segments
            .iter()
            .chain(&other.segments)
            .map(|s| s.curve.clone())
            .collect();
        PathSpec::new(curves, self.clearance.min(other.clearance))
    }

    /// `z_i` circles `z_j` once at `radius` (default: a quarter of the least
    /// distance among the other coordinates). `i`, `j` are 1-based.
    pub fn pure_braid_loop(base: &[Complex64], i: usize, j: usize, radius: Option<f64>) -> Result<PathSpec> {
        let n = base.len();
        for x in [i, j] {
            if x == 0 || x > n {
                return Err(Error::IndexOutOfRange { index: x, max: n });
            }
        }
        if i == j {
            return Err(Error::RepeatedIndex(i));
        }
        let fixed: Vec<Complex64> = (0..n).filter(|&m| m != i - 1).map(|m| base[m]).collect();
        let r = radius.unwrap_or_else(|| default_radius(&fixed));
        let mut start = base.to_vec();
        start[i - 1] = base[j - 1] + r;
        PathSpec::new(
            vec![Curve::Circle {
                start,
                moving: i,
                center: j,
            }],
            r / 2.0,
        )
    }

    /// The triple dilation loop based at `base`.
    pub fn triple_dilation(base: &[Complex64]) -> Result<PathSpec> {
        PathSpec::with_half_clearance(vec![Curve::Dilation { start: base.to_vec() }])
    }

    /// Rectangle `z_i → z_i + a → (z_j + ib) → back`, a contractible loop.
    pub fn rectangle(base: &[Complex64], i: usize, j: usize, a: f64, b: f64) -> Result<PathSpec> {
        let mut corners = vec![base.to_vec()];
        let moves = [(i, c(a, 0.0)), (j, c(0.0, b)), (i, c(-a, 0.0)), (j, c(0.0, -b))];
        for (m, d) in moves {
            let mut next = corners.last().expect("nonempty").clone();
            next[m - 1] += d;
            corners.push(next);
        }
        let curves = corners
            .windows(2)
            .map(|w| Curve::Line {
                from: w[0].clone(),
                to: w[1].clone(),
            })
            .collect();
        PathSpec::with_half_clearance(curves)
    }

    /// Out along a straight line and straight back.
    pub fn degenerate(base: &[Complex64], direction: &[Complex64]) -> Result<PathSpec> {
        let far: Vec<Complex64> = base.iter().zip(direction).map(|(a, d)| a + d).collect();
        PathSpec::with_half_clearance(vec![
            Curve::Line {
                from: base.to_vec(),
                to: far.clone(),
            },
            Curve::Line {
                from: far,
                to: base.to_vec(),
            },
        ])
    }
}

/// A quarter of the least pairwise distance.
pub fn default_radius(points: &[Complex64]) -> f64 {
    min_distance(points) / 4.0
}

/// Classical RK4 with a fixed number of steps per segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    steps: usize,
    pub richardson: bool,
    pub tolerance: f64,
}

pub const MIN_STEPS: usize = 16;

impl IntegratorConfig {
    pub fn new(steps: usize) -> Result<Self> {
        if steps < MIN_STEPS {
            return Err(Error::Invalid(format!("need at least {MIN_STEPS} steps, got {steps}")));
        }
        Ok(Self {
            steps,
            richardson: false,
            tolerance: 1e-6,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn doubled(&self) -> Self {
        Self {
            steps: self.steps * 2,
            ..*self
        }
    }
}

/// The residue operators `M_ij` and `λ`, demoted to doubles.
#[derive(Clone, Debug)]
pub struct NumericForm {
    pub dim: usize,
    pub lambda: Complex64,
    pub ops: Vec<((usize, usize), ApproxMatrix)>,
}

impl NumericForm {
    pub fn from_form(form: &ConnectionForm) -> Self {
        let dim = form.dim();
        let (lr, li) = form.lambda().to_f64_pair();
        let ops = form
            .ops()
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&p, m)| {
                let data = m.to_f64_pairs().into_iter().map(|(a, b)| c(a, b));
                (p, DMatrix::from_row_iterator(dim, dim, data))
            })
            .collect();
        Self {
            dim,
            lambda: c(lr, li),
            ops,
        }
    }

    /// `A(z, ż)`.
    pub fn matrix(&self, z: &[Complex64], dz: &[Complex64]) -> ApproxMatrix {
        let mut a = DMatrix::zeros(self.dim, self.dim);
        for ((i, j), m) in &self.ops {
            let w = (dz[i - 1] - dz[j - 1]) / (z[i - 1] - z[j - 1]) / self.lambda;
            a += m * w;
        }
        a
    }
}

/// `A` at the RK4 nodes `s_n, s_n + h/2, s_n + h` of one segment.
fn node_matrices(form: &NumericForm, curve: &Curve, steps: usize) -> Vec<ApproxMatrix> {
    par::map_range(2 * steps + 1, |q| {
        let (z, dz) = curve.eval(q as f64 / (2 * steps) as f64);
        form.matrix(&z, &dz)
    })
}

fn rk4_column(nodes: &[ApproxMatrix], steps: usize, mut f: nalgebra::DVector<Complex64>) -> nalgebra::DVector<Complex64> {
    let h = Complex64::from(1.0 / steps as f64);
    let half = h * 0.5;
    for n in 0..steps {
        let (a0, am, a1) = (&nodes[2 * n], &nodes[2 * n + 1], &nodes[2 * n + 2]);
        let k1 = a0 * &f;
        let k2 = am * (&f + &k1 * half);
        let k3 = am * (&f + &k2 * half);
        let k4 = a1 * (&f + &k3 * h);
        let two = Complex64::from(2.0);
        f += (k1 + k2 * two + k3 * two + k4) * (h / 6.0);
    }
    f
}

/// The fundamental solution `Ψ(1)` with `Ψ(0) = I`.
pub fn transport(path: &PathSpec, form: &NumericForm, cfg: &IntegratorConfig) -> Result<ApproxMatrix> {
    let d = form.dim;
    let mut psi = ApproxMatrix::identity(d, d);
    for seg in path.segments() {
        let nodes = node_matrices(form, &seg.curve, cfg.steps);
        if let Some(q) = nodes.iter().position(|m| m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite())) {
            let u = q as f64 / (2 * cfg.steps) as f64;
            return Err(Error::NonFinite(seg.t0 + u * (seg.t1 - seg.t0)));
        }
        let columns = par::map_range(d, |col| rk4_column(&nodes, cfg.steps, psi.column(col).into_owned()));
        for (col, v) in columns.into_iter().enumerate() {
            psi.set_column(col, &v);
        }
        if psi.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::NonFinite(seg.t1));
        }
    }
    Ok(psi)
}

/// `Ψ(1)` together with the Richardson estimate `|Ψ_h − Ψ_{h/2}|_max / 15`.
#[derive(Clone, Debug)]
pub struct Transport {
    pub psi: ApproxMatrix,
    pub error_estimate: Option<f64>,
}

pub fn transport_with_estimate(path: &PathSpec, form: &NumericForm, cfg: &IntegratorConfig) -> Result<Transport> {
    let psi = transport(path, form, cfg)?;
    let error_estimate = if cfg.richardson {
        let fine = transport(path, form, &cfg.doubled())?;
        Some(max_abs(&(&psi - &fine)) / 15.0)
    } else {
        None
    };
    Ok(Transport { psi, error_estimate })
}

/// `Ψ(1)⁻¹`.
pub fn monodromy(path: &PathSpec, form: &NumericForm, cfg: &IntegratorConfig) -> Result<ApproxMatrix> {
    if !path.is_closed() {
        return Err(Error::Invalid("monodromy needs a closed path".into()));
    }
    transport(path, form, cfg)?
        .try_inverse()
        .ok_or_else(|| Error::Invalid("transport is singular".into()))
}

pub fn max_abs(m: &ApproxMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Eigenvalues with multiplicity via the complex Schur form.
pub fn spectrum_approx(m: &ApproxMatrix, tol: f64) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let schur = m.clone().try_schur(tol.min(1e-12), 10_000).ok_or(Error::NoConvergence)?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// `μ ∈ [0, 1)` with `z = |z|·exp(−2πiμ)`.
pub fn phase_of(z: Complex64) -> f64 {
    let mu = -z.arg() / (2.0 * PI);
    mu - mu.floor()
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn match_with_shift(numeric: &[f64], exact: &[f64], shift: f64, tol: f64) -> Option<f64> {
    if numeric.len() != exact.len() {
        return None;
    }
    let mut used = vec![false; exact.len()];
    let mut worst: f64 = 0.0;
    for &x in numeric {
        let (best, gap) = exact
            .iter()
            .enumerate()
            .filter(|(n, _)| !used[*n])
            .map(|(n, &e)| (n, circular_gap(x, e + shift)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if gap > tol {
            return None;
        }
        used[best] = true;
        worst = worst.max(gap);
    }
    Some(worst)
}

fn expand(exact: &PhaseMultiset) -> Vec<f64> {
    exact
        .items()
        .iter()
        .flat_map(|&(q, m)| std::iter::repeat_n(*q.numer() as f64 / *q.denom() as f64, m as usize))
        .collect()
}

/// Largest phase gap when the numerical phases equal `exact` on the nose.
pub fn match_phases(numeric: &[f64], exact: &PhaseMultiset, tol: f64) -> Option<f64> {
    match_with_shift(numeric, &expand(exact), 0.0, tol)
}

/// A common shift `s` and the worst gap, with `numeric ≈ exact + s`.
pub fn match_phases_projective(numeric: &[f64], exact: &PhaseMultiset, tol: f64) -> Option<(f64, f64)> {
    let e = expand(exact);
    let anchor = *numeric.first()?;
    e.iter()
        .filter_map(|&x| {
            let s = (anchor - x).rem_euclid(1.0);
            match_with_shift(numeric, &e, s, tol).map(|gap| (s, gap))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Phases of the monodromy eigenvalues.
pub fn monodromy_phases(path: &PathSpec, form: &NumericForm, cfg: &IntegratorConfig) -> Result<Vec<f64>> {
    let m = monodromy(path, form, cfg)?;
    Ok(spectrum_approx(&m, cfg.tolerance)?.into_iter().map(phase_of).collect())
}

/// `|Ψ(1) − I|_max` for a contractible loop.
pub fn check_flatness(rect: &PathSpec, form: &NumericForm, cfg: &IntegratorConfig) -> Result<f64> {
    let psi = transport(rect, form, cfg)?;
    Ok(max_abs(&(psi - ApproxMatrix::identity(form.dim, form.dim))))
}

/// Deviations at `steps, 2·steps, …` and their successive ratios.
#[derive(Clone, Debug, PartialEq)]
pub struct RichardsonReport {
    pub steps: Vec<usize>,
    pub deviations: Vec<f64>,
    pub ratios: Vec<f64>,
}

pub fn richardson_sequence(rect: &PathSpec, form: &NumericForm, steps: usize, refinements: usize) -> Result<RichardsonReport> {
    let mut cfg = IntegratorConfig::new(steps)?;
    let mut out = RichardsonReport {
        steps: Vec::new(),
        deviations: Vec::new(),
        ratios: Vec::new(),
    };
    for _ in 0..=refinements {
        out.steps.push(cfg.steps);
        out.deviations.push(check_flatness(rect, form, &cfg)?);
        cfg = cfg.doubled();
    }
    out.ratios = out.deviations.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(out)
}

/// `|det Ψ(1) − exp(∮ tr A)|`, the integral by Simpson's rule on the RK4 nodes.
pub fn liouville_defect(path: &PathSpec, form: &NumericForm, cfg: &IntegratorConfig) -> Result<f64> {
    let psi = transport(path, form, cfg)?;
    let mut integral = Complex64::default();
    for seg in path.segments() {
        let nodes = node_matrices(form, &seg.curve, cfg.steps);
        let h = 1.0 / cfg.steps as f64;
        for n in 0..cfg.steps {
            let tr = |q: usize| nodes[q].trace();
            integral += (tr(2 * n) + tr(2 * n + 1) * 4.0 + tr(2 * n + 2)) * (h / 6.0);
        }
    }
    Ok((psi.determinant() - integral.exp()).norm())
}

/// `|Ψ(p₁∘p₂) − Ψ(p₂)Ψ(p₁)|_max`.
pub fn multiplicativity_defect(p1: &PathSpec, p2: &PathSpec, form: &NumericForm, cfg: &IntegratorConfig) -> Result<f64> {
    let whole = transport(&p1.concat(p2)?, form, cfg)?;
    let parts = transport(p2, form, cfg)? * transport(p1, form, cfg)?;
    Ok(max_abs(&(whole - parts)))
}

/// Base configuration for the pure-braid loop.
pub fn braid_base() -> Vec<Complex64> {
    vec![c(0.0, 0.0), c(1.0, 0.0), c(2.5, 0.5), c(-1.5, 1.0), c(3.0, -2.0), c(-2.0, -2.0)]
}

/// Base configuration for the triple dilation: three points near the origin.
pub fn dilation_base() -> Vec<Complex64> {
    vec![c(0.1, 0.0), c(0.0, 0.3), c(-0.2, 0.1), c(3.0, 0.0), c(0.0, 4.0), c(-3.0, -3.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::LambdaPreset;

    fn form(k: u32) -> NumericForm {
        NumericForm::from_form(&ConnectionForm::with_preset(2, k, LambdaPreset::Hitchin).unwrap())
    }

    #[test]
    fn config_rejects_few_steps() {
        assert!(IntegratorConfig::new(15).is_err());
        assert_eq!(IntegratorConfig::new(16).unwrap().doubled().steps(), 32);
    }

    #[test]
    fn path_validation() {
        let base = braid_base();
        let p = PathSpec::pure_braid_loop(&base, 1, 2, None).unwrap();
        assert!(p.is_closed());
        assert!((p.clearance() - default_radius(&base[1..]) / 2.0).abs() < 1e-15);
        assert!(matches!(
            PathSpec::pure_braid_loop(&base, 1, 2, Some(1.2)),
            Err(Error::Clearance { .. })
        ));
        let a = Curve::Line {
            from: base.clone(),
            to: base.iter().map(|z| z + 0.1).collect(),
        };
        let b = Curve::Line {
            from: base.clone(),
            to: base.clone(),
        };
        assert_eq!(PathSpec::new(vec![a, b], 0.1), Err(Error::Discontinuous(1)));
    }

    #[test]
    fn spectrum_of_diagonal() {
        let d = ApproxMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]));
        let mut ev = spectrum_approx(&d, 1e-12).unwrap();
        ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        let want = [c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
        let id = spectrum_approx(&ApproxMatrix::identity(3, 3), 1e-12).unwrap();
        assert!(id.iter().all(|z| (z - 1.0).norm() < 1e-14));
    }

    #[test]
    fn level_one_transport_is_trivial() {
        let f = form(1);
        let p = PathSpec::pure_braid_loop(&braid_base(), 1, 2, None).unwrap();
        let psi = transport(&p, &f, &IntegratorConfig::new(64).unwrap()).unwrap();
        assert!(max_abs(&(psi - ApproxMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn sign_convention() {
        // Ψ(1) itself carries exp(+2πiμ); its inverse carries exp(−2πiμ)
        let f = form(2);
        let exact = ConnectionForm::with_preset(2, 2, LambdaPreset::Hitchin).unwrap();
        let res = exact.m(1, 2).scale(&exact.lambda().inv().unwrap());
        let phases = PhaseMultiset::from_pairs(res.diagonal().iter().map(|r| {
            let q = r.re();
            use num_traits::ToPrimitive;
            (num_rational::Rational64::new(q.numer().to_i64().unwrap(), q.denom().to_i64().unwrap()), 1)
        }));
        let p = PathSpec::pure_braid_loop(&braid_base(), 1, 2, None).unwrap();
        let cfg = IntegratorConfig::new(400).unwrap();
        let mono = monodromy_phases(&p, &f, &cfg).unwrap();
        assert!(match_phases(&mono, &phases, 1e-6).is_some());
        let psi = transport(&p, &f, &cfg).unwrap();
        let forward: Vec<f64> = spectrum_approx(&psi, 1e-12).unwrap().into_iter().map(phase_of).collect();
        assert!(match_phases(&forward, &phases.shifted(num_rational::Rational64::new(0, 1)), 1e-6).is_none());
    }

    #[test]
    fn degenerate_loop_cancels() {
        let f = form(2);
        let base = braid_base();
        let dir = vec![c(0.3, 0.1), c(0.0, 0.0), c(0.0, 0.2), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let p = PathSpec::degenerate(&base, &dir).unwrap();
        assert!(check_flatness(&p, &f, &IntegratorConfig::new(64).unwrap()).unwrap() < 1e-10);
    }

    #[test]
    fn liouville_and_multiplicativity() {
        let f = form(2);
        let cfg = IntegratorConfig::new(128).unwrap();
        let p = PathSpec::pure_braid_loop(&braid_base(), 1, 2, None).unwrap();
        assert!(liouville_defect(&p, &f, &cfg).unwrap() < 1e-6);
        let q = PathSpec::rectangle(&p.end(), 3, 4, 0.5, 0.5).unwrap();
        assert!(multiplicativity_defect(&p, &q, &f, &cfg).unwrap() < 1e-8);
    }
}
