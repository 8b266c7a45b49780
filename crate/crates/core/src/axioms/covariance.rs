//! Euclidean covariance: `S(f∘g⁻¹) = D(g) S(f)` slot by slot.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::probes::{components_of, product_tuples, slot_matrices, with_components, Probe};
use super::report::{AxiomId, AxiomReport, ReportBuilder};
use crate::correlator::{smear, smear_samples, CorrelatorFamily, HypercubicElement, SymmetryGroup, TestFunction};
use crate::error::{Error, Result};
use crate::stats::jackknife_error;
use crate::symmetry::{random_euclidean, vector_rep_matrix, SpacetimeRep};

#[derive(Clone, Copy, Debug)]
pub struct CovarianceOptions {
    pub trials: usize,
    pub seed: u64,
    /// Scale of random translations (continuous group).
    pub shift: f64,
}

impl Default for CovarianceOptions {
    fn default() -> Self {
        Self { trials: 6, seed: 1, shift: 1.0 }
    }
}

enum Motion {
    Continuous(SpacetimeRep<f64>),
    Lattice(HypercubicElement),
}

struct Outcome {
    diff: f64,
    scale: f64,
    sigma: f64,
}

fn transform_args(fam: &dyn CorrelatorFamily, args: &[TestFunction], motion: &Motion) -> Result<Vec<TestFunction>> {
    match motion {
        Motion::Continuous(rep) => {
            let r = vector_rep_matrix(rep);
            let a = rep.translation();
            Ok(args.iter().map(|f| f.pullback(&r, &a)).collect())
        }
        Motion::Lattice(el) => args
            .iter()
            .map(|f| Ok(TestFunction::Grid(f.grid()?.pullback_hypercubic(el, fam.site_offset())?)))
            .collect(),
    }
}

fn compare(fam: &dyn CorrelatorFamily, probe: &Probe, motion: &Motion) -> Result<Outcome> {
    let (r, rep) = match motion {
        Motion::Continuous(rep) => (vector_rep_matrix(rep), Some(rep)),
        Motion::Lattice(el) => (el.matrix(), None),
    };
    let mats = slot_matrices(&probe.idx, fam.catalog(), &r, rep)?;
    let moved = transform_args(fam, &probe.args, motion)?;
    let lhs = smear(fam, &probe.idx, &moved)?;
    let lhs_samples = smear_samples(fam, &probe.idx, &moved)?;
    let target = components_of(&probe.idx);
    let dims: Vec<usize> = mats.iter().map(|m| m.ncols()).collect();
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut scale = lhs.value.norm();
    let mut var = lhs.stderr.powi(2);
    let mut rhs_samples: Option<Vec<Complex64>> = lhs_samples.as_ref().map(|s| vec![Complex64::new(0.0, 0.0); s.len()]);
    for src in product_tuples(&dims) {
        let coef: Complex64 = (0..src.len()).map(|i| mats[i][(target[i], src[i])]).product();
        if coef.norm() < 1e-14 {
            continue;
        }
        let idx = with_components(&probe.idx, &src);
        let v = smear(fam, &idx, &probe.args)?;
        rhs += coef * v.value;
        scale = scale.max((coef * v.value).norm());
        var += (coef.norm() * v.stderr).powi(2);
        if let Some(acc) = rhs_samples.as_mut() {
            if let Some(s) = smear_samples(fam, &idx, &probe.args)? {
                for (a, x) in acc.iter_mut().zip(s) {
                    *a += coef * x;
                }
            }
        }
    }
    let diff = (lhs.value - rhs).norm();
    // correlated replicas give the error of the difference directly
    let sigma = match (lhs_samples, rhs_samples) {
        (Some(l), Some(r)) => jackknife_error(&l.iter().zip(&r).map(|(a, b)| (a - b).norm()).collect::<Vec<_>>()).max(
            jackknife_error(&l.iter().zip(&r).map(|(a, b)| (a - b).re).collect::<Vec<_>>()),
        ),
        _ => var.sqrt(),
    };
    Ok(Outcome { diff, scale, sigma })
}

pub fn check_euclidean_covariance(fam: &dyn CorrelatorFamily, probes: &[Probe], opts: &CovarianceOptions) -> Result<AxiomReport> {
    let mut b = ReportBuilder::new(AxiomId::EuclideanCovariance, fam);
    if probes.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let group = fam.symmetry_group();
    b.note(match group {
        SymmetryGroup::Continuous => "subgroup tested: SO(4) ⋉ R⁴ (random Haar rotations, Gaussian translations)",
        SymmetryGroup::Hypercubic => "subgroup tested: hypercubic signed axis permutations ⋉ lattice translations",
    });

    // identity motion must reproduce values bit for bit
    let mut identity_defect: f64 = 0.0;
    for p in probes {
        let motion = match group {
            SymmetryGroup::Continuous => Motion::Continuous(SpacetimeRep::identity(fam.metric())),
            SymmetryGroup::Hypercubic => Motion::Lattice(HypercubicElement::identity(p.args[0].dimension())),
        };
        let moved = transform_args(fam, &p.args, &motion)?;
        let a = smear(fam, &p.idx, &p.args)?.value;
        let c = smear(fam, &p.idx, &moved)?.value;
        identity_defect = identity_defect.max((a - c).norm());
    }
    b.set("identity_defect", identity_defect);

    let mut worst_rel: f64 = 0.0;
    let mut worst_sigma_ratio: f64 = 0.0;
    let mut worst_diff: f64 = 0.0;
    let mut worst_sigma: f64 = 0.0;

    for _ in 0..opts.trials {
        for p in probes {
            let motion = match group {
                SymmetryGroup::Continuous => Motion::Continuous(random_euclidean(&mut rng, opts.shift)),
                SymmetryGroup::Hypercubic => {
                    let g = p.args[0].grid()?;
                    Motion::Lattice(HypercubicElement::random(g.dims.len(), &g.dims, &mut rng))
                }
            };
            let o = compare(fam, p, &motion)?;
            worst_rel = worst_rel.max(if o.scale > 0.0 { o.diff / o.scale } else { o.diff });
            if o.diff > worst_diff {
                worst_diff = o.diff;
                worst_sigma = o.sigma;
            }
            if o.sigma > 0.0 {
                worst_sigma_ratio = worst_sigma_ratio.max(o.diff / o.sigma);
            }
        }
    }
    b.set("max_relative_discrepancy", worst_rel);
    b.set("max_discrepancy_sigmas", worst_sigma_ratio);
    b.set("max_discrepancy", worst_diff);
    b.set("trials", opts.trials as f64);
    b.set("probes", probes.len() as f64);
    if fam.source().is_statistical() {
        Ok(b.judge(worst_sigma_ratio, 3.0, worst_sigma))
    } else if identity_defect != 0.0 {
        Ok(b.fail(1e-8, 0.0, "identity_not_exact"))
    } else {
        Ok(b.judge(worst_rel, 1e-8, 0.0))
    }
}
