//! JSON documents for scenarios and run traces.
//!
//! Numbers are exact strings. A value is either a rational (`"3/4"`, `"-2"`,
//! `0.25`-style decimals, or a JSON integer) or an object
//! `{"q": "1", "gens": {"sqrt2_half": "-1"}}` for `q + sum(c * g)`.

use std::collections::BTreeMap;

use adjlab_core::cover::{CoverState, Location, StepKind, StepRecord, Trigger, UpDiv};
use adjlab_core::curves::{BranchData, CurveCover, FiberData, Tower};
use adjlab_core::exactnum::{parse_rational, GeneratorInfo};
use adjlab_core::scenarios::{
    context_from_info, Check, Expected, Outcome, Payload, Scenario, ScenarioError, Spot, SpotTarget, Verdict,
};
use adjlab_core::surface::{root_model, Site, SncModel};
use adjlab_core::{Context, ExtReal, NumError};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad number `{text}`: {source}")]
    Number { text: String, source: NumError },
    #[error("unknown divisor `{0}`")]
    UnknownDivisor(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ScenarioError),
}

impl InputError {
    pub fn is_precision_exhausted(&self) -> bool {
        match self {
            InputError::Model(e) => crate::is_precision_exhausted(e),
            InputError::Number { source, .. } => matches!(source, NumError::PrecisionExhausted { .. }),
            _ => false,
        }
    }
}

fn model_err(e: impl Into<ScenarioError>) -> InputError {
    InputError::Model(e.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueDoc {
    Int(i64),
    Text(String),
    Full {
        q: String,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        gens: BTreeMap<String, String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        approx: Option<f64>,
    },
}

impl ValueDoc {
    /// Exact form; with `approx` set, also a decimal midpoint of the current enclosure.
    pub fn of(v: &ExtReal, approx: Option<&Context>) -> ValueDoc {
        let approx = approx.and_then(|ctx| {
            let (lo, hi) = ctx.enclose(v).ok()?;
            ((lo + hi) / parse_rational("2").ok()?).to_f64()
        });
        ValueDoc::Full {
            q: v.rational_part().to_string(),
            gens: v.coeffs().map(|(k, c)| (k.to_string(), c.to_string())).collect(),
            approx,
        }
    }

    pub fn value(&self, ctx: &Context) -> Result<ExtReal, InputError> {
        let num = |text: &str| parse_rational(text).map_err(|source| InputError::Number { text: text.into(), source });
        match self {
            ValueDoc::Int(n) => Ok(ExtReal::integer(*n)),
            ValueDoc::Text(t) => Ok(ExtReal::rational(num(t)?)),
            ValueDoc::Full { q, gens, .. } => {
                let terms = gens.iter().map(|(k, c)| Ok((k.as_str(), num(c)?))).collect::<Result<Vec<_>, InputError>>()?;
                ctx.value(num(q)?, terms).map_err(|source| InputError::Number { text: q.clone(), source })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    /// Ascending coefficients of a polynomial with a simple root in `(lo, hi)`.
    pub polynomial: Vec<String>,
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchDoc {
    pub m: u32,
    pub d: ValueDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub degree: u32,
    #[serde(default)]
    pub fibers: BTreeMap<String, Vec<BranchDoc>>,
}

/// A named point and the divisors through it (none, one, or two).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub name: String,
    #[serde(default)]
    pub on: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub divisors: Vec<String>,
    #[serde(default)]
    pub points: Vec<PointDoc>,
    /// Points blown up in order after the configuration is built.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blowups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PunctureDoc {
    pub sheet: usize,
    pub point: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    #[serde(default = "two")]
    pub sheets: usize,
    pub model: ModelDoc,
    /// Base divisors forming the boundary support.
    pub boundary: Vec<String>,
    /// Per-divisor sheet multiplicities.
    pub mults: BTreeMap<String, Vec<ValueDoc>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub punctures: Vec<PunctureDoc>,
}

fn two() -> usize {
    2
}

fn default_cap() -> usize {
    adjlab_core::scenarios::DEFAULT_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PayloadDoc {
    Curve(CurveDoc),
    Tower { upper: CurveDoc, lower: CurveDoc },
    Cover(CoverDoc),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictDoc {
    Stabilizes,
    Diverges,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetDoc {
    Discriminant { point: String },
    Moduli { point: String, branch: usize },
    DdivDivisor { divisor: String },
    DdivPoint { point: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpotDoc {
    pub target: TargetDoc,
    pub value: ValueDoc,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowups: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturations: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spots: Vec<SpotDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorDoc>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    pub payload: PayloadDoc,
    #[serde(default)]
    pub expected: ExpectedDoc,
}

pub fn model_doc(model: &SncModel) -> ModelDoc {
    let root = root_model(model);
    let name = |d| root.divisor(d).map(|d| d.name.clone()).unwrap_or_default();
    ModelDoc {
        divisors: root.divisors().iter().map(|d| d.name.clone()).collect(),
        points: root
            .points()
            .map(|p| PointDoc { name: p.name.clone(), on: p.site.divisors().map(name).collect() })
            .collect(),
        blowups: model.tree().iter().map(|n| n.point.name.clone()).collect(),
    }
}

pub fn build_model(doc: &ModelDoc) -> Result<SncModel, InputError> {
    let mut m = SncModel::new();
    for d in &doc.divisors {
        if m.divisor_by_name(d).is_some() {
            return Err(InputError::Invalid(format!("divisor `{d}` declared twice")));
        }
        m.add_divisor(d.clone());
    }
    for p in &doc.points {
        if m.point_by_name(&p.name).is_some() {
            return Err(InputError::Invalid(format!("point `{}` declared twice", p.name)));
        }
        let ids = p
            .on
            .iter()
            .map(|d| m.divisor_by_name(d).ok_or_else(|| InputError::UnknownDivisor(d.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        match ids[..] {
            [] => {
                m.add_off_point(p.name.clone());
            }
            [a] => {
                m.add_free_point(a, p.name.clone()).map_err(model_err)?;
            }
            [a, b] => {
                m.add_crossing(a, b, p.name.clone()).map_err(model_err)?;
            }
            _ => return Err(InputError::Invalid(format!("point `{}` lies on more than two divisors", p.name))),
        }
    }
    for name in &doc.blowups {
        let p = m.point_by_name(name).ok_or_else(|| InputError::UnknownPoint(name.clone()))?;
        m.blow_up_in_place(p).map_err(model_err)?;
    }
    Ok(m)
}

fn curve_doc(c: &CurveCover) -> CurveDoc {
    CurveDoc {
        degree: c.degree(),
        fibers: c
            .fibers()
            .iter()
            .map(|(z, f)| {
                let branches = f
                    .branches()
                    .iter()
                    .map(|b| BranchDoc { m: b.m(), d: ValueDoc::of(b.d(), None), point: b.point().map(String::from) })
                    .collect();
                (z.clone(), branches)
            })
            .collect(),
    }
}

fn build_curve(doc: &CurveDoc, ctx: &Context) -> Result<CurveCover, InputError> {
    let mut fibers = BTreeMap::new();
    for (z, branches) in &doc.fibers {
        let mut out = Vec::new();
        for b in branches {
            let mut branch = BranchData::new(b.m, b.d.value(ctx)?).map_err(model_err)?;
            if let Some(p) = &b.point {
                branch = branch.at(p.clone());
            }
            out.push(branch);
        }
        fibers.insert(z.clone(), FiberData::new(out).map_err(model_err)?);
    }
    CurveCover::new(doc.degree, fibers).map_err(model_err)
}

fn cover_doc(s: &CoverState) -> CoverDoc {
    let base = s.base();
    let name = |d| base.divisor(d).map(|d| d.name.clone()).unwrap_or_default();
    CoverDoc {
        sheets: s.sheets(),
        model: model_doc(base),
        boundary: s.delta().iter().map(|d| name(*d)).collect(),
        mults: base
            .divisor_ids()
            .map(|d| {
                let row = s.sheet_mults(d).iter().map(|v| ValueDoc::of(v.as_ref().unwrap_or(&ExtReal::zero()), None)).collect();
                (name(d), row)
            })
            .collect(),
        punctures: s
            .punctures()
            .iter()
            .map(|(sheet, p)| PunctureDoc {
                sheet: *sheet,
                point: base.point(*p).map(|p| p.name.clone()).unwrap_or_default(),
            })
            .collect(),
    }
}

fn build_cover(doc: &CoverDoc, ctx: &Context) -> Result<CoverState, InputError> {
    let base = build_model(&doc.model)?;
    let div = |n: &String| base.divisor_by_name(n).ok_or_else(|| InputError::UnknownDivisor(n.clone()));
    let delta = doc.boundary.iter().map(div).collect::<Result<_, _>>()?;
    let mut table = BTreeMap::new();
    for (n, row) in &doc.mults {
        table.insert(div(n)?, row.iter().map(|v| v.value(ctx)).collect::<Result<Vec<_>, _>>()?);
    }
    let punctures = doc
        .punctures
        .iter()
        .map(|p| Ok((p.sheet, base.point_by_name(&p.point).ok_or_else(|| InputError::UnknownPoint(p.point.clone()))?)))
        .collect::<Result<Vec<_>, InputError>>()?;
    CoverState::new(base, delta, doc.sheets, table, punctures, ctx).map_err(model_err)
}

fn target_doc(t: &SpotTarget) -> TargetDoc {
    match t.clone() {
        SpotTarget::Discriminant { point } => TargetDoc::Discriminant { point },
        SpotTarget::Moduli { point, branch } => TargetDoc::Moduli { point, branch },
        SpotTarget::DdivDivisor { divisor } => TargetDoc::DdivDivisor { divisor },
        SpotTarget::DdivPoint { point } => TargetDoc::DdivPoint { point },
    }
}

fn target(t: &TargetDoc) -> SpotTarget {
    match t.clone() {
        TargetDoc::Discriminant { point } => SpotTarget::Discriminant { point },
        TargetDoc::Moduli { point, branch } => SpotTarget::Moduli { point, branch },
        TargetDoc::DdivDivisor { divisor } => SpotTarget::DdivDivisor { divisor },
        TargetDoc::DdivPoint { point } => SpotTarget::DdivPoint { point },
    }
}

impl ScenarioDoc {
    pub fn from_scenario(s: &Scenario) -> Result<ScenarioDoc, InputError> {
        let generators = s
            .context
            .generator_info()
            .into_iter()
            .map(|g| {
                let polynomial = g
                    .polynomial
                    .ok_or_else(|| InputError::Invalid(format!("generator `{}` has no defining polynomial", g.name)))?;
                Ok(GeneratorDoc {
                    name: g.name,
                    polynomial: polynomial.iter().map(|c| c.to_string()).collect(),
                    lo: g.lo.to_string(),
                    hi: g.hi.to_string(),
                })
            })
            .collect::<Result<_, InputError>>()?;
        let payload = match &s.payload {
            Payload::Curve(c) => PayloadDoc::Curve(curve_doc(c)),
            Payload::Tower(t) => PayloadDoc::Tower { upper: curve_doc(&t.upper), lower: curve_doc(&t.lower) },
            Payload::Cover(c) => PayloadDoc::Cover(cover_doc(c)),
        };
        let e = &s.expected;
        Ok(ScenarioDoc {
            name: s.name.clone(),
            generators,
            cap: s.cap,
            payload,
            expected: ExpectedDoc {
                verdict: e.verdict.map(|v| match v {
                    Verdict::Stabilizes => VerdictDoc::Stabilizes,
                    Verdict::Diverges => VerdictDoc::Diverges,
                }),
                blowups: e.blowups,
                saturations: e.saturations,
                spots: e
                    .spots
                    .iter()
                    .map(|sp| SpotDoc {
                        target: target_doc(&sp.target),
                        value: ValueDoc::of(&sp.value, None),
                        provenance: sp.provenance.clone(),
                    })
                    .collect(),
            },
        })
    }

    /// Builds the scenario; `budget` overrides the refinement budget of the context.
    pub fn into_scenario(&self, budget: Option<u32>) -> Result<Scenario, InputError> {
        let num = |text: &String| parse_rational(text).map_err(|source| InputError::Number { text: text.clone(), source });
        let infos = self
            .generators
            .iter()
            .map(|g| {
                Ok(GeneratorInfo {
                    name: g.name.clone(),
                    lo: num(&g.lo)?,
                    hi: num(&g.hi)?,
                    polynomial: Some(g.polynomial.iter().map(num).collect::<Result<_, _>>()?),
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        let mut ctx = context_from_info(&infos).map_err(model_err)?;
        if let Some(b) = budget {
            ctx = ctx.with_budget(b);
        }
        let payload = match &self.payload {
            PayloadDoc::Curve(c) => Payload::Curve(build_curve(c, &ctx)?),
            PayloadDoc::Tower { upper, lower } => {
                Payload::Tower(Tower::new(build_curve(upper, &ctx)?, build_curve(lower, &ctx)?).map_err(model_err)?)
            }
            PayloadDoc::Cover(c) => Payload::Cover(build_cover(c, &ctx)?),
        };
        let e = &self.expected;
        let spots = e
            .spots
            .iter()
            .map(|sp| Ok(Spot { target: target(&sp.target), value: sp.value.value(&ctx)?, provenance: sp.provenance.clone() }))
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(Scenario {
            name: self.name.clone(),
            context: ctx,
            payload,
            cap: self.cap,
            expected: Expected {
                verdict: e.verdict.map(|v| match v {
                    VerdictDoc::Stabilizes => Verdict::Stabilizes,
                    VerdictDoc::Diverges => Verdict::Diverges,
                }),
                blowups: e.blowups,
                saturations: e.saturations,
                spots,
            },
        })
    }
}

pub fn parse_scenario(text: &str, budget: Option<u32>) -> Result<Scenario, InputError> {
    let doc: ScenarioDoc = serde_json::from_str(text)?;
    doc.into_scenario(budget)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriggerDoc {
    pub chosen: String,
    pub chosen_mult: ValueDoc,
    pub partner: String,
    pub partner_mult: ValueDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub kind: String,
    /// `point`, `divisor` or `upstairs`.
    pub at: String,
    pub location: String,
    pub crepant_mults: Vec<Option<ValueDoc>>,
    pub ddiv_mult: ValueDoc,
    pub shift: ValueDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<ValueDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptional: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trigger: Option<TriggerDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub what: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub scenario: String,
    /// `stabilizes`, `diverges`, or absent when no stabilization ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictDoc>,
    pub blowups: usize,
    pub saturations: usize,
    pub steps: Vec<StepDoc>,
    pub checks: Vec<CheckDoc>,
    pub passed: bool,
}

fn step_kind(k: StepKind) -> &'static str {
    match k {
        StepKind::Blowup => "blowup",
        StepKind::Saturation => "saturation",
        StepKind::Normalization => "normalization",
    }
}

fn step_doc(r: &StepRecord, state: &CoverState, approx: Option<&Context>) -> StepDoc {
    let v = |x: &ExtReal| ValueDoc::of(x, approx);
    let (at, location) = match &r.location {
        Location::Point { name, .. } => ("point", name.clone()),
        Location::Divisor { name, .. } => ("divisor", name.clone()),
        Location::Upstairs { name, .. } => ("upstairs", name.clone()),
    };
    let up = |u: UpDiv| state.updiv_name(u);
    StepDoc {
        kind: step_kind(r.kind).into(),
        at: at.into(),
        location,
        crepant_mults: r.crepant_mults.iter().map(|m| m.as_ref().map(v)).collect(),
        ddiv_mult: v(&r.ddiv_mult),
        shift: v(&r.shift),
        predicted: r.predicted.as_ref().map(v),
        exceptional: r.exceptional.and_then(|e| state.base().divisor(e).ok()).map(|d| d.name.clone()),
        trigger: r.trigger.as_ref().map(|Trigger { chosen, chosen_mult, partner, partner_mult }| TriggerDoc {
            chosen: up(*chosen),
            chosen_mult: v(chosen_mult),
            partner: up(*partner),
            partner_mult: v(partner_mult),
        }),
    }
}

fn check_doc(c: &Check) -> CheckDoc {
    CheckDoc { what: c.what.clone(), expected: c.expected.clone(), actual: c.actual.clone(), ok: c.ok }
}

impl TraceDoc {
    pub fn new(s: &Scenario, out: &Outcome, approx: bool) -> TraceDoc {
        let ctx = approx.then_some(&s.context);
        let (steps, blowups, saturations) = match &out.stabilization {
            Some(run) => (
                run.trace().iter().map(|r| step_doc(r, run.state(), ctx)).collect(),
                run.blowups(),
                run.saturations(),
            ),
            None => (Vec::new(), 0, 0),
        };
        TraceDoc {
            scenario: s.name.clone(),
            verdict: out.verdict().map(|v| match v {
                Verdict::Stabilizes => VerdictDoc::Stabilizes,
                Verdict::Diverges => VerdictDoc::Diverges,
            }),
            blowups,
            saturations,
            steps,
            checks: out.checks.iter().map(check_doc).collect(),
            passed: out.passed(),
        }
    }
}

/// Crossing, free or off, for display.
pub fn site_kind(site: &Site) -> &'static str {
    match site {
        Site::Crossing(..) => "crossing",
        Site::Free(_) => "free",
        Site::Off => "off",
    }
}
