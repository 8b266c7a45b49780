use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use qgv_core::axioms::{run_suite, AxiomId, AxiomReport, SuiteInputs, Verdict};
use qgv_core::continuation::{fit_spectral, FitOptions, TimeMomentumData};
use qgv_core::correlator::{reduce_to_differences, CorrelatorFamily, FieldIndex, TestFunction};
use qgv_core::free_field::{ChargedScalar, FeynmanPhoton, FreeMaxwell, FreeScalar, ScalarVariant, SpinorToy};
use qgv_core::lattice::{
    generate, plaquette_mean, read_ensemble, write_ensemble, Action, Ensemble, LatticeFamily, Observable, RunParams, Start,
    Thermalization,
};
use qgv_core::reconstruction::{build_physical, PhysicalOptions, QuotientBackend};
use qgv_core::stats::{jackknife_mean, DEFAULT_BINS};

use crate::config::{BackendName, FreeField, FreeTheory, LatticeTheory, RunConfig, StartName, Theory, VariantName};
use crate::error::CliError;

pub const ENSEMBLE_FILE: &str = "ensemble.qgv";
pub const CHECK_FILE: &str = "check.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Resolved inputs shared by every command.
pub struct Context {
    pub config: RunConfig,
    pub out: PathBuf,
    pub format: Option<Format>,
}

impl Context {
    pub fn seed(&self) -> Result<u64, CliError> {
        self.config.seed.ok_or_else(|| CliError::Config("missing field `seed`".into()))
    }

    /// SHA-256 over the command and the effective configuration (output location excluded).
    pub fn provenance_hash(&self, command: &str) -> String {
        let c = &self.config;
        let doc = json!({ "command": command, "theory": c.theory, "seed": c.seed, "check": c.check, "basis": c.basis });
        hex::encode(Sha256::digest(doc.to_string().as_bytes()))
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        fs::write(&path, serde_json::to_string_pretty(value).map_err(qgv_core::Error::from)?)?;
        Ok(path)
    }

    fn write_csv(&self, name: &str, rows: &[(f64, f64, f64)]) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        let mut text = String::from("x,y,yerr\n");
        for (x, y, e) in rows {
            writeln!(text, "{x:e},{y:e},{e:e}").expect("write to string");
        }
        fs::write(&path, text)?;
        Ok(path)
    }
}

fn lattice_theory(cfg: &RunConfig) -> Result<&LatticeTheory, CliError> {
    match &cfg.theory {
        Theory::Lattice(l) => Ok(l),
        Theory::Free(_) => Err(CliError::Config("this command needs kind = \"lattice\"".into())),
    }
}

fn free_theory(cfg: &RunConfig) -> Result<&FreeTheory, CliError> {
    match &cfg.theory {
        Theory::Free(f) => Ok(f),
        Theory::Lattice(_) => Err(CliError::Config("this command needs kind = \"free\"".into())),
    }
}

pub fn run_params(l: &LatticeTheory, seed: u64) -> RunParams {
    let action = match (l.kappa, l.lambda) {
        (Some(k), Some(lam)) => Action::higgs(l.beta, k, lam),
        _ => Action::pure_gauge(l.beta),
    };
    let mut p = RunParams::new(&l.dims, l.group.into(), action, seed, l.configs);
    p.sweeps_per_config = l.sweeps_per_config;
    p.start = match l.start {
        StartName::Hot => Start::Hot,
        StartName::Cold => Start::Cold,
    };
    if let Some(sweeps) = l.thermalization {
        p.thermalization = Thermalization::Fixed { sweeps };
    }
    p
}

/// The configured ensemble: an explicit file, a previous `simulate` output, or a fresh run.
fn ensemble(ctx: &Context) -> Result<Ensemble, CliError> {
    let l = lattice_theory(&ctx.config)?;
    if let Some(path) = &l.ensemble {
        return Ok(read_ensemble(path)?);
    }
    let stored = ctx.out.join(ENSEMBLE_FILE);
    if stored.exists() {
        let ens = read_ensemble(&stored)?;
        if ens.provenance.params == run_params(l, ctx.seed()?) {
            return Ok(ens);
        }
        log::info!("{} was generated with other parameters; regenerating", stored.display());
    }
    Ok(generate(&run_params(l, ctx.seed()?))?)
}

fn free_family(f: &FreeTheory) -> Result<Arc<dyn CorrelatorFamily>, CliError> {
    let mass = f.mass.unwrap_or(1.0);
    let variant = match f.variant {
        VariantName::Standard => ScalarVariant::Standard,
        VariantName::SignFlipped => ScalarVariant::SignFlipped,
        VariantName::TimeReflected => ScalarVariant::TimeReflected,
        VariantName::ConstantShift => ScalarVariant::ConstantShift { shift: f.shift.unwrap_or(0.0) },
    };
    Ok(match f.field {
        FreeField::Scalar => Arc::new(FreeScalar::with_variant(mass, variant)?),
        FreeField::ChargedScalar => Arc::new(ChargedScalar::new(mass)?),
        FreeField::Maxwell => Arc::new(FreeMaxwell::new()),
        FreeField::FeynmanPhoton => Arc::new(FeynmanPhoton::new()),
        FreeField::Spinor => Arc::new(SpinorToy::new(mass)?),
    })
}

fn family(ctx: &Context) -> Result<Arc<dyn CorrelatorFamily>, CliError> {
    match &ctx.config.theory {
        Theory::Free(f) => free_family(f),
        Theory::Lattice(_) => Ok(Arc::new(LatticeFamily::standard(Arc::new(ensemble(ctx)?))?)),
    }
}

pub fn parse_axioms(names: &[String]) -> Result<Vec<AxiomId>, CliError> {
    let mut out = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(AxiomId::EUCLIDEAN);
            continue;
        }
        let a = AxiomId::parse(n).ok_or_else(|| {
            let valid: Vec<&str> = AxiomId::EUCLIDEAN.iter().map(|a| a.name()).collect();
            CliError::Usage(format!("unknown axiom `{n}`; valid names: all, {}", valid.join(", ")))
        })?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    Ok(out)
}

pub fn simulate(ctx: &Context) -> Result<i32, CliError> {
    let l = lattice_theory(&ctx.config)?;
    let params = run_params(l, ctx.seed()?);
    let ens = generate(&params)?;
    fs::create_dir_all(&ctx.out)?;
    let path = ctx.out.join(ENSEMBLE_FILE);
    write_ensemble(&path, &ens)?;
    let p = &ens.provenance;
    ctx.write_json(
        "simulate.json",
        &json!({
            "provenance_hash": ctx.provenance_hash("simulate"),
            "ensemble": path,
            "content_hash": p.content_hash,
            "configs": ens.len(),
            "thermalization_sweeps": p.thermalization_sweeps,
            "tau_int_plaquette": p.tau_int_plaquette,
            "link_acceptance": p.link_acceptance,
            "matter_acceptance": p.matter_acceptance,
        }),
    )?;
    println!("content_hash {}", p.content_hash);
    Ok(0)
}

#[derive(Serialize)]
struct Measurement {
    label: String,
    mean: f64,
    error: f64,
}

pub fn measure(ctx: &Context) -> Result<i32, CliError> {
    let ens = ensemble(ctx)?;
    let mut observables = vec![Observable::PLAQUETTE, Observable::ActionDensity, Observable::WilsonLoop { r: 1, t: 2 }, Observable::WilsonLoop { r: 2, t: 2 }];
    if ens.has_matter() {
        observables.push(Observable::PhiSquared);
    }
    let bins = DEFAULT_BINS.min(ens.len());
    let mut rows = Vec::new();
    for o in &observables {
        let series: Vec<f64> = ens
            .configs
            .iter()
            .map(|c| o.field(c).map(|v| v.iter().sum::<f64>() / v.len() as f64))
            .collect::<Result<_, _>>()?;
        let jk = jackknife_mean(&series, bins)?;
        rows.push(Measurement { label: o.label(), mean: jk.value, error: jk.error });
    }
    let history: Vec<(f64, f64, f64)> = ens.configs.iter().enumerate().map(|(k, c)| (k as f64, plaquette_mean(c), 0.0)).collect();
    let csv = ctx.write_csv("plaquette_history.csv", &history)?;
    let doc = json!({
        "provenance_hash": ctx.provenance_hash("measure"),
        "content_hash": ens.provenance.content_hash,
        "configs": ens.len(),
        "observables": rows,
        "plot_data": csv,
    });
    ctx.write_json("measure.json", &doc)?;
    match ctx.format {
        Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&doc).map_err(qgv_core::Error::from)?),
        Some(Format::Csv) => {
            println!("label,mean,error");
            for r in &rows {
                println!("{},{:e},{:e}", r.label, r.mean, r.error);
            }
        }
        None => {
            for r in &rows {
                println!("{:<12} {:>14.8} ± {:.2e}", r.label, r.mean, r.error);
            }
        }
    }
    Ok(0)
}

fn summary(reports: &[AxiomReport], format: Option<Format>) -> String {
    let mut s = String::new();
    match format {
        Some(Format::Json) => s = serde_json::to_string_pretty(reports).expect("reports serialize"),
        Some(Format::Csv) => {
            s.push_str("family,axiom,verdict,tolerance,reason\n");
            for r in reports {
                let _ = writeln!(s, "{},{},{:?},{:e},{}", r.family, r.axiom.name(), r.verdict, r.tolerance, r.reason.as_deref().unwrap_or(""));
            }
        }
        None => {
            for r in reports {
                let verdict = match r.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Inapplicable => "n/a",
                };
                let _ = writeln!(s, "{:<24} {:<5} {}", r.axiom.name(), verdict, r.reason.as_deref().unwrap_or(""));
            }
            let failed = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
            let _ = writeln!(s, "{failed} of {} axioms fail", reports.len());
        }
    }
    s
}

fn failure_exit(reports: &[AxiomReport]) -> i32 {
    i32::from(reports.iter().any(|r| r.verdict == Verdict::Fail))
}

pub fn check(ctx: &Context, axioms: Option<&[String]>) -> Result<i32, CliError> {
    let names: Vec<String> = axioms.map(<[String]>::to_vec).or_else(|| ctx.config.check.axioms.clone()).unwrap_or_else(|| vec!["all".into()]);
    let axioms = parse_axioms(&names)?;
    let fam = family(ctx)?;
    let reports = run_suite(fam.clone(), &axioms, &SuiteInputs::default());
    ctx.write_json(
        CHECK_FILE,
        &json!({ "provenance_hash": ctx.provenance_hash("check"), "family": fam.describe(), "reports": reports }),
    )?;
    print!("{}", summary(&reports, ctx.format));
    Ok(failure_exit(&reports))
}

pub fn report(ctx: &Context) -> Result<i32, CliError> {
    let path = ctx.out.join(CHECK_FILE);
    let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("{}: {e}; run `qgv check` first", path.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(qgv_core::Error::from)?;
    let reports: Vec<AxiomReport> = serde_json::from_value(doc["reports"].clone()).map_err(qgv_core::Error::from)?;
    if ctx.format.is_none() {
        println!("provenance {}", doc["provenance_hash"].as_str().unwrap_or("?"));
    }
    print!("{}", summary(&reports, ctx.format));
    Ok(failure_exit(&reports))
}

fn tests_of(ctx: &Context) -> Result<(Vec<TestFunction>, &crate::config::BasisSection), CliError> {
    let basis = ctx.config.basis.as_ref().ok_or_else(|| CliError::Config("missing section `basis`".into()))?;
    Ok((basis.tests.iter().map(|t| TestFunction::gaussian([t[0], t[1], t[2], t[3]], t[4])).collect(), basis))
}

pub fn reconstruct(ctx: &Context) -> Result<i32, CliError> {
    free_theory(&ctx.config)?;
    let (tests, basis) = tests_of(ctx)?;
    let fam = family(ctx)?;
    let opts = PhysicalOptions {
        elementary_degree: basis.degree / 2,
        composites: basis.composites,
        backend: match basis.backend {
            BackendName::Eigen => QuotientBackend::Eigen,
            BackendName::PivotedCholesky => QuotientBackend::PivotedCholesky,
        },
        ..Default::default()
    };
    let space = build_physical(fam.clone(), &tests, &opts)?;
    let g = &space.borchers.gram;
    let spectrum: Vec<(f64, f64, f64)> = (0..g.dim()).map(|k| (k as f64, g.eigenvalues[k], g.eigen_errors[k])).collect();
    let csv = ctx.write_csv("spectrum.csv", &spectrum)?;
    let metric: Vec<Vec<[f64; 2]>> =
        (0..space.dim()).map(|i| (0..space.dim()).map(|j| [space.metric[(i, j)].re, space.metric[(i, j)].im]).collect()).collect();
    let coords: Vec<Vec<[f64; 2]>> = (0..space.dim())
        .map(|i| (0..space.basis().len()).map(|j| [space.coords[(i, j)].re, space.coords[(i, j)].im]).collect())
        .collect();
    let path = ctx.write_json(
        "physical_space.json",
        &json!({
            "provenance_hash": ctx.provenance_hash("reconstruct"),
            "family": fam.describe(),
            "generators": space.basis(),
            "dim": space.dim(),
            "null_dim": space.null_dim,
            "backend": space.backend,
            "gram_spectrum": space.spectrum,
            "metric": metric,
            "coords": coords,
            "vacuum_index": space.vacuum,
            "plot_data": csv,
        }),
    )?;
    println!("dim {} (null {}) -> {}", space.dim(), space.null_dim, path.display());
    Ok(0)
}

pub fn continue_(ctx: &Context) -> Result<i32, CliError> {
    free_theory(&ctx.config)?;
    let fam = family(ctx)?;
    let label = fam.catalog().fields.first().map(|f| f.label.clone()).ok_or_else(|| CliError::Config("family has no fields".into()))?;
    let idx = FieldIndex::scalar(&label, 2);
    let form = reduce_to_differences(fam.as_ref(), &idx, ctx.config.seed.unwrap_or(3))?;
    let (taus, momenta) = (TimeMomentumData::default_taus(), TimeMomentumData::default_momenta());
    let opts = FitOptions::default();
    let fit = fit_spectral(&form, &idx, &taus, &momenta, &opts)?;
    let data = TimeMomentumData::sample(&form, &idx, &taus, &[[0.0; 3]])?;
    let rows: Vec<(f64, f64, f64)> = taus.iter().zip(&data.values[0]).map(|(&t, &v)| (t, v, 0.0)).collect();
    let model_rows: Vec<(f64, f64, f64)> = taus.iter().map(|&t| (t, fit.model.laplace(t, 0.0), 0.0)).collect();
    let data_csv = ctx.write_csv("time_momentum_data.csv", &rows)?;
    let model_csv = ctx.write_csv("time_momentum_model.csv", &model_rows)?;
    let path = ctx.write_json(
        "spectral_model.json",
        &json!({
            "provenance_hash": ctx.provenance_hash("continue"),
            "family": fam.describe(),
            "model": fit.model,
            "residual": fit.residual,
            "accepted": fit.accepted(&opts),
            "condition": fit.condition,
            "covariance": fit.covariance,
            "plot_data": [data_csv, model_csv],
        }),
    )?;
    let poles: Vec<String> = fit.model.poles.iter().map(|p| format!("μ²={:.6} Z={:.6}", p.mass_sq, p.weight)).collect();
    println!("{} -> {}", poles.join(", "), path.display());
    Ok(0)
}
