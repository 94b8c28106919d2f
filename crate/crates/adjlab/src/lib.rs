//! Command line front end, JSON and DOT formats, and the acceptance checks for `adjlab-core`.

pub mod acceptance;
pub mod dot;
pub mod json;

use adjlab_core::cover::CoverError;
use adjlab_core::curves::CurveError;
use adjlab_core::scenarios::ScenarioError;
use adjlab_core::surface::SurfaceError;
use adjlab_core::NumError;

/// Environment variable overriding the refinement budget of every context.
pub const BUDGET_VAR: &str = "ADJLAB_PRECISION_BUDGET";

pub fn is_precision_exhausted(e: &ScenarioError) -> bool {
    let num = |n: &NumError| matches!(n, NumError::PrecisionExhausted { .. });
    let surface = |s: &SurfaceError| matches!(s, SurfaceError::Num(n) if num(n));
    match e {
        ScenarioError::Num(n) => num(n),
        ScenarioError::Surface(s) => surface(s),
        ScenarioError::Curve(CurveError::Num(n)) => num(n),
        ScenarioError::Cover(CoverError::Num(n)) => num(n),
        ScenarioError::Cover(CoverError::Surface(s)) => surface(s),
        _ => false,
    }
}

/// Budget from [`BUDGET_VAR`], if set.
pub fn budget_from_env() -> Result<Option<u32>, String> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("{BUDGET_VAR} must be a non-negative integer, got `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(err) => Err(format!("{BUDGET_VAR}: {err}")),
    }
}
