//! The verification suite. Every claim in [`CLAIMS`] is covered by exactly one
//! entry of [`CHECKS`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hardyspace::QuadratureConfig;

use crate::config::{ExperimentConfig, Params, DEFAULT_SEED};
use crate::error::{HarnessError, Result};
use crate::report::{CheckReport, Status};

mod constant_checks;
pub mod families;
mod hardy_checks;
mod lorentz_checks;
mod norm_checks;
mod rearrange_checks;

/// Inputs shared by every check.
pub struct Ctx<'a> {
    pub params: Params<'a>,
    pub quad: QuadratureConfig,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Ctx<'_> {
    /// `--tol` when given, the pinned tolerance otherwise.
    pub fn tol(&self, pinned: f64) -> f64 {
        self.tol.unwrap_or(pinned)
    }

    /// ChaCha8 stream keyed by the check name, so checks draw independent
    /// sequences from one seed.
    pub fn rng(&self, stream: &str) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(stream));
        rng
    }

    pub fn prng_note(&self, stream: &str) -> String {
        format!("prng ChaCha8 seed {} stream {:#018x}", self.seed, fnv1a(stream))
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub type CheckFn = fn(&Ctx) -> Result<CheckReport>;

pub struct CheckDef {
    pub name: &'static str,
    pub claim: &'static str,
    /// Tied to a recorded discrepancy; the only checks allowed to report
    /// `discrepancy-logged`.
    pub ledger: bool,
    pub run: CheckFn,
}

/// Claims of the source material that the suite must cover.
pub const CLAIMS: &[&str] = &[
    "hardy operator norm p' approached by power-log family",
    "power-log family norms in closed form",
    "printed lower bound for power-weight constant",
    "hardy inequality with measure dt/t",
    "convolution average bounded by p^2/(p-1)",
    "tail quasinorm and marcinkiewicz norm sandwich",
    "f** equals hardy average of f*",
    "f** as supremum over sets of measure t",
    "rearrangement is equimeasurable",
    "mixed norm factorizes over tensor products",
    "dilation covariance and exponent relation",
    "box hardy operator on tensor products",
    "bradley functional brackets the hardy constant",
    "gamma of power weights",
    "mazja functional for q < p",
    "stepanov functionals",
    "muckenhoupt-type constant",
    "two printed forms of the power-weight constant",
    "product constant over axes",
    "admissible exponent relation",
    "slowly varying factor ratio bounded",
    "quasinorm equivalence sandwich",
    "left constant exactness family",
    "power-weight lorentz sandwich",
    "empirical k(v,h) lower bound",
    "grand lebesgue norm with dirac psi",
    "natural function of a family",
    "anisotropic grand lebesgue hardy inequality",
    "fundamental functions",
    "printed tail term of g**",
];

pub const CHECKS: &[CheckDef] = &[
    CheckDef { name: "hardy_sharp", claim: CLAIMS[0], ledger: false, run: hardy_checks::hardy_sharp },
    CheckDef { name: "power_log_norms", claim: CLAIMS[1], ledger: true, run: hardy_checks::power_log_norms },
    CheckDef { name: "power_weight_lower_bound", claim: CLAIMS[2], ledger: true, run: hardy_checks::power_weight_lower_bound },
    CheckDef { name: "hardy_nu", claim: CLAIMS[3], ledger: false, run: hardy_checks::hardy_nu },
    CheckDef { name: "beesack", claim: CLAIMS[4], ledger: false, run: hardy_checks::beesack },
    CheckDef { name: "marcinkiewicz_sandwich", claim: CLAIMS[5], ledger: false, run: rearrange_checks::marcinkiewicz_sandwich },
    CheckDef { name: "double_star_identity", claim: CLAIMS[6], ledger: false, run: rearrange_checks::double_star_identity },
    CheckDef { name: "max_integral_form", claim: CLAIMS[7], ledger: false, run: rearrange_checks::max_integral_form },
    CheckDef { name: "equimeasurability", claim: CLAIMS[8], ledger: false, run: rearrange_checks::equimeasurability },
    CheckDef { name: "factorization", claim: CLAIMS[9], ledger: false, run: norm_checks::factorization },
    CheckDef { name: "scaling", claim: CLAIMS[10], ledger: false, run: norm_checks::scaling },
    CheckDef { name: "box_hardy", claim: CLAIMS[11], ledger: false, run: hardy_checks::box_hardy },
    CheckDef { name: "bradley_bracket", claim: CLAIMS[12], ledger: false, run: constant_checks::bradley_bracket },
    CheckDef { name: "gamma_closed_form", claim: CLAIMS[13], ledger: false, run: constant_checks::gamma_closed_form },
    CheckDef { name: "mazja_example", claim: CLAIMS[14], ledger: false, run: constant_checks::mazja_example },
    CheckDef { name: "stepanov_example", claim: CLAIMS[15], ledger: false, run: constant_checks::stepanov_example },
    CheckDef { name: "muckenhoupt_example", claim: CLAIMS[16], ledger: false, run: constant_checks::muckenhoupt_example },
    CheckDef { name: "k0_forms", claim: CLAIMS[17], ledger: true, run: constant_checks::k0_forms },
    CheckDef { name: "k_multi", claim: CLAIMS[18], ledger: false, run: constant_checks::k_multi },
    CheckDef { name: "exponent_relation", claim: CLAIMS[19], ledger: false, run: constant_checks::exponent_relation },
    CheckDef { name: "slowly_varying", claim: CLAIMS[20], ledger: false, run: constant_checks::slowly_varying },
    CheckDef { name: "lorentz_sandwich", claim: CLAIMS[21], ledger: false, run: lorentz_checks::lorentz_sandwich },
    CheckDef { name: "exactness_family", claim: CLAIMS[22], ledger: true, run: lorentz_checks::exactness_family },
    CheckDef { name: "power_weight_sandwich", claim: CLAIMS[23], ledger: false, run: lorentz_checks::power_weight_sandwich },
    CheckDef { name: "kvh_estimate", claim: CLAIMS[24], ledger: false, run: lorentz_checks::kvh_estimate },
    CheckDef { name: "grand_lebesgue_dirac", claim: CLAIMS[25], ledger: false, run: norm_checks::grand_lebesgue_dirac },
    CheckDef { name: "natural_function", claim: CLAIMS[26], ledger: false, run: norm_checks::natural_function },
    CheckDef { name: "agls_hardy", claim: CLAIMS[27], ledger: false, run: norm_checks::agls_hardy },
    CheckDef { name: "fundamental_functions", claim: CLAIMS[28], ledger: false, run: lorentz_checks::fundamental_functions },
    CheckDef { name: "printed_tail_term", claim: CLAIMS[29], ledger: true, run: lorentz_checks::printed_tail_term },
];

pub fn find(name: &str) -> Option<&'static CheckDef> {
    CHECKS.iter().find(|c| c.name == name)
}

/// Claims with a coverage count other than one.
pub fn coverage_gaps() -> Vec<(&'static str, usize)> {
    CLAIMS
        .iter()
        .map(|&claim| (claim, CHECKS.iter().filter(|c| c.claim == claim).count()))
        .filter(|&(_, n)| n != 1)
        .collect()
}

fn execute(def: &CheckDef, ctx: &Ctx) -> CheckReport {
    let mut report = match (def.run)(ctx) {
        Ok(r) => r,
        Err(e) => {
            let mut r = CheckReport::new(def.name);
            r.status = Status::Fail;
            r.note = format!("error: {e}");
            r
        }
    };
    report.check_name = def.name.to_string();
    if report.status == Status::DiscrepancyLogged && !def.ledger {
        report.status = Status::Fail;
        report.add_note("discrepancy-logged status on a check without a recorded discrepancy");
    }
    report
}

fn context(cfg: &ExperimentConfig) -> Ctx<'_> {
    Ctx {
        params: Params(&cfg.params),
        quad: cfg.quad_config(),
        tol: cfg.tol,
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
    }
}

/// Run the configured check, or every check for `all`, in registry order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let ctx = context(cfg);
    if cfg.check == "all" {
        let gaps = coverage_gaps();
        let mut reports: Vec<CheckReport> = CHECKS.par_iter().map(|d| execute(d, &ctx)).collect();
        if !gaps.is_empty() {
            let mut r = CheckReport::new("coverage");
            r.require(false, || format!("claims without exactly one check: {gaps:?}"));
            reports.push(r);
        }
        return Ok(reports);
    }
    let def = find(&cfg.check).ok_or_else(|| HarnessError::UnknownCheck(cfg.check.clone()))?;
    Ok(vec![execute(def, &ctx)])
}

/// Convenience wrapper for one named check with default settings.
pub fn run_check(name: &str) -> Result<CheckReport> {
    Ok(run_experiment(&ExperimentConfig::named(name))?.remove(0))
}

pub(crate) fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}
