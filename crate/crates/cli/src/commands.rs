use std::time::Instant;

use num_rational::Rational64;
use serde_json::{json, Value};

use hitchin::connection::{verify_braid_relations, verify_heisenberg_invariance, ConnectionForm, LambdaPreset};
use hitchin::holonomy::{
    braid_base, check_flatness, dilation_base, match_phases, match_phases_projective, monodromy_phases,
    richardson_sequence, IntegratorConfig, NumericForm, PathSpec,
};
use hitchin::kummer::{find_intertwiner, seeded_configurations, verify_flat_section, verify_symbolic_family};
use hitchin::linalg::ExactMatrix;
use hitchin::spectra::{
    compare_projective, dehn_twist_phases, nonseparating_closed_form, nonseparating_constructive, separating_closed_form,
    separating_spectrum, verify_r123, verlinde_dimension, verlinde_enumerate, PhaseMultiset, TrivalentGraph,
};
use hitchin::spin::{Half, SpinRep};
use hitchin::{Error, ExactScalar, Result};

use crate::report::{integer, phases, rational, rational64, scalar, Check};

/// Which loop the `holonomy` command integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LoopKind {
    /// `z_1` once around `z_2`.
    Braid,
    /// `(z_1, z_2, z_3)` rotated once about the origin.
    Dilation,
    /// The dilation loop traversed twice.
    DilationTwice,
}

/// Parameters shared by all commands.
#[derive(Clone, Debug)]
pub struct Params {
    pub g: usize,
    pub k: u32,
    pub lambda: LambdaPreset,
    pub seed: u64,
    pub steps: usize,
    pub tolerance: f64,
    pub graph: TrivalentGraph,
    pub loop_kind: LoopKind,
}

fn timed(f: impl FnOnce() -> Result<Check>) -> Result<Check> {
    let start = Instant::now();
    let mut c = f()?;
    c.millis = start.elapsed().as_millis();
    Ok(c)
}

fn require_genus_two(p: &Params) -> Result<()> {
    if p.g == 2 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("this command is implemented for g = 2, got g = {}", p.g)))
    }
}

fn require_level(p: &Params) -> Result<()> {
    if p.k >= 1 {
        Ok(())
    } else {
        Err(Error::Invalid("level k must be at least 1".into()))
    }
}

fn form(p: &Params) -> Result<ConnectionForm> {
    ConnectionForm::with_preset(p.g, p.k, p.lambda)
}

pub fn verify_spin(p: &Params) -> Result<Vec<Check>> {
    let c = timed(|| {
        let rep = SpinRep::new(p.g, Half::Plus)?;
        let minus = ExactMatrix::scalar(rep.dim(), &ExactScalar::from_int(-1));
        let squares: Vec<Value> = rep
            .pairs()
            .filter(|&(j, k)| rep.pair(j, k) * rep.pair(j, k) != minus)
            .map(|(j, k)| json!([j, k]))
            .collect();
        let brackets: Vec<Value> = rep.bracket_failures().iter().map(|q| json!([q.0, q.1, q.2, q.3])).collect();
        Ok(Check::new("spin", squares.is_empty() && brackets.is_empty())
            .with("dim", json!(rep.dim()))
            .with("generators", json!(rep.pairs().count()))
            .with("square_failures", Value::Array(squares))
            .with("bracket_failures", Value::Array(brackets)))
    })?;
    Ok(vec![c])
}

pub fn verify_braid(p: &Params) -> Result<Vec<Check>> {
    let c = timed(|| {
        let rep = verify_braid_relations(&form(p)?);
        let failures: Vec<Value> = rep.failures.iter().map(|f| Value::String(format!("{f:?}"))).collect();
        Ok(Check::new("braid", rep.passed())
            .with("checked", json!(rep.checked))
            .with("failures", Value::Array(failures)))
    })?;
    Ok(vec![c])
}

pub fn verify_invariance(p: &Params) -> Result<Vec<Check>> {
    let c = timed(|| {
        let rep = SpinRep::new(p.g, Half::Plus)?;
        let r = verify_heisenberg_invariance(&rep, &ConnectionForm::new(&rep, p.k, p.lambda.value(p.k))?)?;
        let failures: Vec<Value> = r.failures.iter().map(|&(y, i, j)| json!([y, i, j])).collect();
        Ok(Check::new("invariance", r.failures.is_empty())
            .with("checked", json!(r.checked))
            .with("failures", Value::Array(failures)))
    })?;
    Ok(vec![c])
}

pub fn verify_kummer(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    let rep = SpinRep::new(2, Half::Plus)?;
    let phi = find_intertwiner(&rep)?;
    let draws = seeded_configurations(p.seed, 6);
    let mut checks = Vec::new();
    for (n, z) in draws[..5].iter().enumerate() {
        checks.push(timed(|| {
            let r = verify_flat_section(&rep, &phi, z)?;
            let zs: Vec<Value> = z.iter().map(scalar).collect();
            let plus: Vec<Value> = r.residuals_plus.iter().map(rational).collect();
            let minus: Vec<Value> = r.residuals_minus.iter().map(rational).collect();
            Ok(Check::new(format!("flat_section_{n}"), r.passed())
                .with("z", Value::Array(zs))
                .with("residuals_plus", Value::Array(plus))
                .with("residuals_minus", Value::Array(minus))
                .with("winning_sign", json!(r.winning_sign))
                .with("fitted_euler_coefficient", r.fitted_coefficient.as_ref().map_or(Value::Null, scalar)))
        })?);
    }
    checks.push(timed(|| {
        let rest = &draws[5][1..];
        let r = verify_symbolic_family(&rep, &phi, rest)?;
        Ok(Check::new("symbolic_family", r.passed())
            .with("base", Value::Array(rest.iter().map(scalar).collect()))
            .with("vanishes", json!(r.vanishes))
            .with("intertwiner_sign", json!(phi.sign)))
    })?);
    Ok(checks)
}

pub fn spectrum_nonseparating(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    require_level(p)?;
    let c = timed(|| {
        let closed = nonseparating_closed_form(p.k);
        let built = nonseparating_constructive(p.k)?;
        let shift = compare_projective(&built, &closed);
        Ok(Check::new("nonseparating", shift.is_some())
            .with("items", phases(&closed))
            .with("constructive", phases(&built))
            .with("shift", shift.map_or(Value::Null, rational64))
            .with("total", json!(closed.total())))
    })?;
    Ok(vec![c])
}

pub fn spectrum_separating(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    require_level(p)?;
    let c = timed(|| {
        let built = separating_spectrum(p.k)?;
        let closed = separating_closed_form(p.k);
        Ok(Check::new("separating", built == closed)
            .with("items", phases(&built))
            .with("total", json!(built.total())))
    })?;
    Ok(vec![c])
}

pub fn verify_r123_cmd(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    let c = timed(|| {
        let r = verify_r123(p.k)?;
        Ok(Check::new("r123", r.passed())
            .with("lambda_k", scalar(&r.lambda_k))
            .with("residual", rational(&r.residual)))
    })?;
    Ok(vec![c])
}

pub fn verlinde(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    let c = timed(|| {
        let labels = verlinde_enumerate(p.graph, p.k);
        let expected = verlinde_dimension(p.k);
        Ok(Check::new(format!("verlinde_{}", p.graph.name()), labels.len() as u64 == expected)
            .with("graph", json!(p.graph.name()))
            .with("count", json!(labels.len()))
            .with("expected", integer(&expected.into())))
    })?;
    Ok(vec![c])
}

pub fn compare_spectra(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    require_level(p)?;
    let c = timed(|| {
        let (edge, monodromy) = match p.graph {
            TrivalentGraph::Theta => (0, nonseparating_constructive(p.k)?),
            TrivalentGraph::Dumbbell => (2, separating_spectrum(p.k)?),
        };
        let twist = dehn_twist_phases(p.graph, edge, p.k)?;
        let shift = compare_projective(&twist, &monodromy);
        Ok(Check::new(format!("compare_{}", p.graph.name()), shift.is_some())
            .with("dehn_twist", phases(&twist))
            .with("monodromy", phases(&monodromy))
            .with("shift", shift.map_or(Value::Null, rational64)))
    })?;
    Ok(vec![c])
}

fn residue_phases(form: &ConnectionForm) -> Result<PhaseMultiset> {
    let inv = form.lambda().inv().ok_or_else(|| Error::Invalid("lambda must be nonzero".into()))?;
    let mut out = PhaseMultiset::new();
    for r in form.m(1, 2).scale(&inv).diagonal() {
        let q = r.re();
        match (i64::try_from(q.numer()), i64::try_from(q.denom())) {
            (Ok(n), Ok(d)) if r.is_real() => out.insert(Rational64::new(n, d), 1),
            _ => return Err(Error::Invalid(format!("residue eigenvalue {r} is not a small rational"))),
        }
    }
    Ok(out)
}

pub fn holonomy(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    let c = timed(|| {
        let exact_form = form(p)?;
        let num = NumericForm::from_form(&exact_form);
        let cfg = IntegratorConfig::new(p.steps)?.with_tolerance(p.tolerance);
        let (name, path, expected, projective) = match p.loop_kind {
            LoopKind::Braid => (
                "braid_loop",
                PathSpec::pure_braid_loop(&braid_base(), 1, 2, None)?,
                residue_phases(&exact_form)?,
                false,
            ),
            LoopKind::Dilation => (
                "dilation_loop",
                PathSpec::triple_dilation(&dilation_base())?,
                separating_closed_form(p.k),
                true,
            ),
            LoopKind::DilationTwice => {
                let once = PathSpec::triple_dilation(&dilation_base())?;
                ("dilation_loop_twice", once.concat(&once)?, separating_closed_form(p.k), true)
            }
        };
        let observed = monodromy_phases(&path, &num, &cfg)?;
        let (passed, gap, shift) = if projective {
            match match_phases_projective(&observed, &expected, p.tolerance) {
                Some((s, g)) => (true, Some(g), Some(s)),
                None => (false, None, None),
            }
        } else {
            let g = match_phases(&observed, &expected, p.tolerance);
            (g.is_some(), g, None)
        };
        let mut sorted = observed.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Check::new(name, passed)
            .with("expected", phases(&expected))
            .with("observed_phases", json!(sorted))
            .with("worst_gap", json!(gap))
            .with("shift", json!(shift))
            .with("steps", json!(p.steps)))
    })?;
    Ok(vec![c])
}

pub fn flatness(p: &Params) -> Result<Vec<Check>> {
    require_genus_two(p)?;
    let exact_form = form(p)?;
    let rect = PathSpec::rectangle(&braid_base(), 1, 2, 0.8, 0.5)?;
    let cfg = IntegratorConfig::new(p.steps)?;
    let flat = timed(|| {
        let num = NumericForm::from_form(&exact_form);
        let dev = check_flatness(&rect, &num, &cfg)?;
        let rich = richardson_sequence(&rect, &num, 32, 3)?;
        Ok(Check::new("rectangle", dev < p.tolerance)
            .with("deviation", json!(dev))
            .with("richardson_steps", json!(rich.steps))
            .with("richardson_ratios", json!(rich.ratios)))
    })?;
    let control = timed(|| {
        let delta = ExactScalar::from_int(16);
        let bad = NumericForm::from_form(&exact_form.perturbed(1, 2, 0, 1, &delta));
        let dev = check_flatness(&rect, &bad, &cfg)?;
        let applicable = p.k >= 2;
        Ok(Check::new("perturbed_control", !applicable || dev > 1e-3)
            .with("deviation", json!(dev))
            .with("applicable", json!(applicable)))
    })?;
    Ok(vec![flat, control])
}

/// Every check that applies to `(g, k)`.
pub fn all(p: &Params) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut add = |prefix: &str, cs: Vec<Check>| {
        for mut c in cs {
            c.name = format!("{prefix}.{}", c.name);
            checks.push(c);
        }
    };
    add("verify-spin", verify_spin(p)?);
    add("verify-braid", verify_braid(p)?);
    add("verify-invariance", verify_invariance(p)?);
    if p.g == 2 {
        add("verify-kummer", verify_kummer(p)?);
        add("verify-r123", verify_r123_cmd(p)?);
        for graph in [TrivalentGraph::Theta, TrivalentGraph::Dumbbell] {
            let q = Params { graph, ..p.clone() };
            add("verlinde", verlinde(&q)?);
        }
        if p.k >= 1 {
            add("spectrum-nonseparating", spectrum_nonseparating(p)?);
            add("spectrum-separating", spectrum_separating(p)?);
            for graph in [TrivalentGraph::Theta, TrivalentGraph::Dumbbell] {
                let q = Params { graph, ..p.clone() };
                add("compare-spectra", compare_spectra(&q)?);
            }
        }
        for loop_kind in [LoopKind::Braid, LoopKind::DilationTwice] {
            let q = Params { loop_kind, ..p.clone() };
            add("holonomy", holonomy(&q)?);
        }
        add("flatness", flatness(p)?);
    }
    Ok(checks)
}
