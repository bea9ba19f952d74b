//! Acceptance criteria for the genus-two connection, each run end to end and
//! reported as a single PASS/FAIL line.

use std::time::{Duration, Instant};

use hitchin::connection::{
    k2_eigenspace_decomposition, verify_braid_relations, verify_heisenberg_invariance, ConnectionForm, LambdaPreset,
};
use hitchin::holonomy::{
    braid_base, check_flatness, dilation_base, match_phases, match_phases_projective, monodromy_phases,
    richardson_sequence, IntegratorConfig, NumericForm, PathSpec,
};
use hitchin::kummer::{find_intertwiner, seeded_configurations, solve_intertwiner, verify_flat_section, verify_symbolic_family};
use hitchin::linalg::ExactMatrix;
use hitchin::spectra::{
    compare_projective, dehn_twist_phases, nonseparating_closed_form, nonseparating_constructive, nonseparating_spectrum,
    primitive_decomposition, separating_closed_form, separating_spectrum, verify_r123, verlinde_dimension,
    verlinde_enumerate, PhaseMultiset, TrivalentGraph,
};
use hitchin::spin::{clifford_generator, Half, SpinRep};
use hitchin::{ExactScalar, Result};
use num_rational::Rational64;
use num_traits::ToPrimitive;

/// Seed for the pseudo-random Kummer configurations.
pub const KUMMER_SEED: u64 = 20_240_611;

/// Result of one criterion.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// A named check with an optional wall-clock budget.
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub budget: Option<Duration>,
    pub run: fn() -> Result<(bool, String)>,
}

impl Criterion {
    pub fn evaluate(&self) -> Outcome {
        let start = Instant::now();
        let result = (self.run)();
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(b) = self.budget {
            if elapsed > b {
                passed = false;
                detail.push_str(&format!("; exceeded budget {}s", b.as_secs()));
            }
        }
        Outcome {
            id: self.id,
            title: self.title,
            passed,
            detail,
            elapsed,
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: "1", title: "spin representation g=2,3", budget: Some(Duration::from_secs(10)), run: spin },
        Criterion { id: "2", title: "Clifford relations g<=3", budget: None, run: clifford },
        Criterion { id: "3", title: "infinitesimal pure braid relations", budget: Some(Duration::from_secs(120)), run: braid },
        Criterion { id: "4", title: "Heisenberg invariance g=2, k<=4", budget: None, run: invariance },
        Criterion { id: "5", title: "Kummer quartic is a flat section", budget: Some(Duration::from_secs(120)), run: kummer },
        Criterion { id: "6", title: "non-separating spectrum k=1..6", budget: None, run: nonseparating },
        Criterion { id: "7", title: "R123, primitive decomposition, separating spectrum k=1..6", budget: None, run: separating },
        Criterion { id: "8", title: "Verlinde counts and Dehn-twist spectra", budget: None, run: verlinde },
        Criterion { id: "9", title: "levels one and two", budget: None, run: low_levels },
        Criterion { id: "10a", title: "pure-braid loop holonomy k=1..3", budget: Some(Duration::from_secs(180)), run: braid_loops },
        Criterion { id: "10b", title: "triple-dilation loop holonomy k=1..3", budget: Some(Duration::from_secs(180)), run: dilation_loops },
        Criterion { id: "10c", title: "contractible rectangle and RK4 order", budget: Some(Duration::from_secs(60)), run: rectangle },
    ]
}

pub fn run_all() -> Vec<Outcome> {
    criteria().iter().map(Criterion::evaluate).collect()
}

fn spin() -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    for g in [2, 3] {
        let rep = SpinRep::new(g, Half::Plus)?;
        let minus = ExactMatrix::scalar(rep.dim(), &ExactScalar::from_int(-1));
        let squares = rep.pairs().filter(|&(j, k)| rep.pair(j, k) * rep.pair(j, k) != minus).count();
        let brackets = rep.bracket_failures().len();
        ok &= squares == 0 && brackets == 0;
        notes.push(format!("g={g}: square failures {squares}, bracket failures {brackets}"));
    }
    Ok((ok, notes.join("; ")))
}

fn clifford() -> Result<(bool, String)> {
    let mut failures = 0;
    let mut checked = 0;
    for g in 1..=3 {
        let gens: Vec<ExactMatrix> = (1..=2 * g + 2).map(|k| clifford_generator(g, k)).collect::<Result<_>>()?;
        let id = ExactMatrix::identity(gens[0].rows());
        for a in 0..gens.len() {
            checked += 1;
            failures += usize::from(&gens[a] * &gens[a] != id);
            for b in a + 1..gens.len() {
                checked += 1;
                failures += usize::from(!(&(&gens[a] * &gens[b]) + &(&gens[b] * &gens[a])).is_zero());
            }
        }
    }
    Ok((failures == 0, format!("{checked} relations, {failures} failures")))
}

fn braid() -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    for (g, k) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
        let rep = verify_braid_relations(&ConnectionForm::with_preset(g, k, LambdaPreset::Hitchin)?);
        ok &= rep.passed();
        notes.push(format!("g={g} k={k}: {}/{}", rep.checked - rep.failures.len(), rep.checked));
    }
    Ok((ok, notes.join("; ")))
}

fn invariance() -> Result<(bool, String)> {
    let rep = SpinRep::new(2, Half::Plus)?;
    let mut notes = Vec::new();
    let mut ok = true;
    for k in 1..=4 {
        let r = verify_heisenberg_invariance(&rep, &ConnectionForm::new(&rep, k, LambdaPreset::Hitchin.value(k))?)?;
        ok &= r.failures.is_empty();
        notes.push(format!("k={k}: {} failures", r.failures.len()));
    }
    Ok((ok, notes.join("; ")))
}

fn kummer() -> Result<(bool, String)> {
    let rep = SpinRep::new(2, Half::Plus)?;
    let nonzero = [1i8, -1]
        .iter()
        .map(|&s| solve_intertwiner(&rep, s).map(|x| x.is_some()))
        .collect::<Result<Vec<bool>>>()?;
    let unique = nonzero.iter().filter(|&&b| b).count() == 1;
    let phi = find_intertwiner(&rep)?;
    let mut passed = 0;
    let configs = seeded_configurations(KUMMER_SEED, 5);
    for z in &configs {
        passed += usize::from(verify_flat_section(&rep, &phi, z)?.passed());
    }
    let base: Vec<ExactScalar> = [2, -3, 5, 7, -11].iter().map(|&x| ExactScalar::from_int(x)).collect();
    let symbolic = verify_symbolic_family(&rep, &phi, &base)?.passed();
    let ok = unique && passed == configs.len() && symbolic;
    Ok((
        ok,
        format!(
            "intertwiner sign {:+}, unique: {unique}; seeded points {passed}/{}; symbolic family: {symbolic}",
            phi.sign,
            configs.len()
        ),
    ))
}

fn nonseparating() -> Result<(bool, String)> {
    let mut ok = true;
    for k in 1..=6 {
        let built = nonseparating_constructive(k)?;
        let closed = nonseparating_closed_form(k);
        ok &= compare_projective(&built, &closed).is_some() && closed.total() == verlinde_dimension(k);
    }
    Ok((ok, format!("k=6 spectrum {}", nonseparating_closed_form(6))))
}

fn separating() -> Result<(bool, String)> {
    let mut ok = true;
    let mut lambdas = Vec::new();
    for k in 1..=6u32 {
        let r = verify_r123(k)?;
        ok &= r.passed();
        lambdas.push(format!("{}", r.lambda_k));
        for p in primitive_decomposition(k)? {
            let m = (k - 2 * p.l + 1) as usize;
            ok &= p.basis.len() == m * m;
            ok &= p.qxq_eigenvalue == ExactScalar::from_int((p.l * (k - p.l + 1)) as i64);
        }
        ok &= separating_spectrum(k)? == separating_closed_form(k);
    }
    Ok((ok, format!("lambda_k = [{}]", lambdas.join(", "))))
}

fn verlinde() -> Result<(bool, String)> {
    let mut ok = (0..=12).all(|k| verlinde_enumerate(TrivalentGraph::Theta, k).len() as u64 == verlinde_dimension(k));
    for k in 1..=8 {
        let mono = nonseparating_spectrum(k)?;
        for e in 0..3 {
            ok &= compare_projective(&dehn_twist_phases(TrivalentGraph::Theta, e, k)?, &mono).is_some();
        }
        ok &= compare_projective(&dehn_twist_phases(TrivalentGraph::Dumbbell, 2, k)?, &separating_spectrum(k)?).is_some();
    }
    Ok((ok, "theta counts k<=12, twist spectra k<=8".into()))
}

fn low_levels() -> Result<(bool, String)> {
    let form = ConnectionForm::with_preset(2, 1, LambdaPreset::Hitchin)?;
    let zero = form.ops().values().all(ExactMatrix::is_zero);
    let k2 = k2_eigenspace_decomposition(&SpinRep::new(2, Half::Plus)?)?;
    let ok = zero && k2.lines.len() == 10 && k2.integral;
    Ok((ok, format!("k=1 form zero: {zero}; k=2 eigenlines {}, integral: {}", k2.lines.len(), k2.integral)))
}

fn residue_phases(form: &ConnectionForm, i: usize, j: usize) -> Result<PhaseMultiset> {
    let res = form.m(i, j).scale(&form.lambda().inv().expect("nonzero lambda"));
    let mut pairs = Vec::new();
    for r in res.diagonal() {
        let q = r.re();
        let (Some(n), Some(d)) = (q.numer().to_i64(), q.denom().to_i64()) else {
            return Err(hitchin::Error::Invalid("residue eigenvalue too large".into()));
        };
        pairs.push((Rational64::new(n, d), 1));
    }
    Ok(PhaseMultiset::from_pairs(pairs))
}

const LOOP_TOL: f64 = 1e-6;

fn braid_loops() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    let cfg = IntegratorConfig::new(512)?;
    for k in 1..=3 {
        let form = ConnectionForm::with_preset(2, k, LambdaPreset::Hitchin)?;
        let exact = residue_phases(&form, 1, 2)?;
        let path = PathSpec::pure_braid_loop(&braid_base(), 1, 2, None)?;
        let phases = monodromy_phases(&path, &NumericForm::from_form(&form), &cfg)?;
        let gap = match_phases(&phases, &exact, LOOP_TOL);
        ok &= gap.is_some();
        notes.push(format!("k={k}: worst gap {}", gap.map_or("none".into(), |g| format!("{g:.1e}"))));
    }
    Ok((ok, notes.join("; ")))
}

fn dilation_loops() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    let cfg = IntegratorConfig::new(800)?;
    for k in 1..=3 {
        let form = NumericForm::from_form(&ConnectionForm::with_preset(2, k, LambdaPreset::Hitchin)?);
        let path = PathSpec::triple_dilation(&dilation_base())?;
        let phases = monodromy_phases(&path, &form, &cfg)?;
        let hit = match_phases_projective(&phases, &separating_closed_form(k), LOOP_TOL);
        ok &= hit.is_some();
        let mut shown: Vec<String> = phases.iter().map(|p| format!("{p:.4}")).collect();
        shown.sort();
        shown.dedup();
        let twice = monodromy_phases(&path.concat(&path)?, &form, &cfg)?;
        let doubled = match_phases_projective(&twice, &separating_closed_form(k), LOOP_TOL).is_some();
        notes.push(match hit {
            Some((s, g)) => format!("k={k}: shift {s:.4}, gap {g:.1e}"),
            None => format!(
                "k={k}: no shift aligns, observed phases {{{}}} (loop traversed twice matches: {doubled})",
                shown.join(", ")
            ),
        });
    }
    Ok((ok, notes.join("; ")))
}

fn rectangle() -> Result<(bool, String)> {
    let form = NumericForm::from_form(&ConnectionForm::with_preset(2, 2, LambdaPreset::Hitchin)?);
    let rect = PathSpec::rectangle(&braid_base(), 1, 2, 0.8, 0.5)?;
    let dev = check_flatness(&rect, &form, &IntegratorConfig::new(512)?)?;
    let rich = richardson_sequence(&rect, &form, 32, 3)?;
    let order_ok = rich.ratios.iter().all(|r| (12.0..20.0).contains(r));
    let shown: Vec<String> = rich.ratios.iter().map(|r| format!("{r:.1}")).collect();
    Ok((
        dev < LOOP_TOL && order_ok,
        format!("deviation {dev:.1e} at 512 steps; halving ratios [{}]", shown.join(", ")),
    ))
}
