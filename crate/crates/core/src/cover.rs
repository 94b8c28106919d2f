//! Unramified covers of SNC surface models and the blowup algorithm that
//! makes the divisorial part of adjunction stable.
//!
//! A cover with `n` sheets is `n` disjoint copies of the base, so an
//! upstairs prime divisor is a pair (base divisor, sheet). Upstairs points
//! may be deleted (punctured), which models a cover that is surjective but
//! not proper.
//!
//! The divisorial part at a base divisor is the largest multiplicity among
//! its sheets. Over a blown-up point it is the largest per-sheet crepant
//! value `sum(mults through the point) - 1` among sheets whose point is not
//! punctured.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::exactnum::{Context, ExtReal, NumError};
use crate::surface::{
    codiscrepancy_on, explore, BDivTrace, DivId, Divergence, Exploration, PointId, SncModel, SurfaceError,
};

/// Depth at which a stabilized state is checked against `B(Z, D_div)`.
pub const VERIFY_DEPTH: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("a cover needs at least two sheets")]
    TooFewSheets,
    #[error("multiplicity table for divisor {0} is missing or has the wrong number of sheets")]
    TableShape(DivId),
    #[error("upstairs divisor {0:?} has multiplicity above 1")]
    NotGlc(UpDiv),
    #[error("upstairs divisor {0:?} lies off the boundary support but has nonzero multiplicity")]
    OffSupport(UpDiv),
    #[error("puncture on sheet {sheet} is not at a recorded point ({point})")]
    BadPuncture { sheet: usize, point: PointId },
    #[error("boundary divisor {0} is not normalized")]
    NotNormalized(DivId),
    #[error("every preimage of point {0} is punctured")]
    EmptyFiber(PointId),
    #[error("saturation of {div:?} is illegal{}", partner.map(|p| format!(": disjoint sub-1 partner {p:?}")).unwrap_or_default())]
    SaturationIllegal { div: UpDiv, partner: Option<UpDiv> },
    #[error("stabilization needs a proper cover; this one has punctures")]
    NotProper,
    #[error("stabilized state failed verification: {0}")]
    PostconditionFailed(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Upstairs prime divisor: the copy of a base divisor on one sheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpDiv {
    pub base: DivId,
    pub sheet: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverState {
    base: SncModel,
    delta: BTreeSet<DivId>,
    sheets: usize,
    // missing entries are upstairs divisors removed together with a punctured point
    up_mult: BTreeMap<UpDiv, ExtReal>,
    punctures: BTreeSet<(usize, PointId)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Divisor(DivId),
    /// The exceptional divisor of the blowup of this point.
    Point(PointId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Blowup,
    Saturation,
    Normalization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Point { id: PointId, name: String },
    Divisor { id: DivId, name: String },
    Upstairs { div: UpDiv, name: String },
}

/// The pair of sub-1 upstairs divisors that made the algorithm blow up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trigger {
    pub chosen: UpDiv,
    pub chosen_mult: ExtReal,
    pub partner: UpDiv,
    pub partner_mult: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    pub location: Location,
    /// Per sheet; `None` where the sheet has no preimage.
    pub crepant_mults: Vec<Option<ExtReal>>,
    /// Largest of `crepant_mults`.
    pub ddiv_mult: ExtReal,
    pub shift: ExtReal,
    /// For blowups: the codiscrepancy predicted from the divisorial part through the point.
    pub predicted: Option<ExtReal>,
    pub exceptional: Option<DivId>,
    pub trigger: Option<Trigger>,
}

impl StepRecord {
    /// Whether the blowup found the divisorial part equal to its prediction.
    pub fn bp_ok(&self) -> Option<bool> {
        self.predicted.as_ref().map(|p| *p == self.ddiv_mult)
    }
}

fn max_present(ctx: &Context, values: &[Option<ExtReal>]) -> Result<Option<ExtReal>, NumError> {
    ctx.max(values.iter().flatten())
}

impl CoverState {
    /// Builds a cover from a per-divisor table of sheet multiplicities.
    pub fn new(
        base: SncModel,
        delta: BTreeSet<DivId>,
        sheets: usize,
        table: BTreeMap<DivId, Vec<ExtReal>>,
        punctures: impl IntoIterator<Item = (usize, PointId)>,
        ctx: &Context,
    ) -> Result<Self, CoverError> {
        if sheets < 2 {
            return Err(CoverError::TooFewSheets);
        }
        base.validate()?;
        for d in &delta {
            base.divisor(*d)?;
        }
        let mut up_mult = BTreeMap::new();
        for d in base.divisor_ids() {
            let row = table.get(&d).filter(|r| r.len() == sheets).ok_or(CoverError::TableShape(d))?;
            for (sheet, v) in row.iter().enumerate() {
                up_mult.insert(UpDiv { base: d, sheet }, v.clone());
            }
        }
        if let Some(d) = table.keys().find(|d| base.divisor(**d).is_err()) {
            return Err(CoverError::TableShape(*d));
        }
        let punctures: BTreeSet<(usize, PointId)> = punctures.into_iter().collect();
        for &(sheet, point) in &punctures {
            if sheet >= sheets || base.point(point).is_err() {
                return Err(CoverError::BadPuncture { sheet, point });
            }
        }
        let state = CoverState { base, delta, sheets, up_mult, punctures };
        state.check_glc(ctx)?;
        Ok(state)
    }

    pub fn base(&self) -> &SncModel {
        &self.base
    }

    pub fn delta(&self) -> &BTreeSet<DivId> {
        &self.delta
    }

    pub fn sheets(&self) -> usize {
        self.sheets
    }

    pub fn mult(&self, div: UpDiv) -> Option<&ExtReal> {
        self.up_mult.get(&div)
    }

    pub fn up_mults(&self) -> impl Iterator<Item = (UpDiv, &ExtReal)> {
        self.up_mult.iter().map(|(k, v)| (*k, v))
    }

    /// Sheet multiplicities of one base divisor (`None` for removed copies).
    pub fn sheet_mults(&self, div: DivId) -> Vec<Option<ExtReal>> {
        (0..self.sheets).map(|sheet| self.up_mult.get(&UpDiv { base: div, sheet }).cloned()).collect()
    }

    pub fn punctures(&self) -> &BTreeSet<(usize, PointId)> {
        &self.punctures
    }

    pub fn is_punctured(&self, sheet: usize, point: PointId) -> bool {
        self.punctures.contains(&(sheet, point))
    }

    pub fn is_proper(&self) -> bool {
        self.punctures.is_empty()
    }

    pub fn updiv_name(&self, div: UpDiv) -> String {
        let base = self.base.divisor(div.base).map(|d| d.name.as_str()).unwrap_or("?");
        format!("{base}@{}", div.sheet)
    }

    /// Multiplicities at most 1 over the boundary support and 0 elsewhere.
    pub fn check_glc(&self, ctx: &Context) -> Result<(), CoverError> {
        let one = ExtReal::one();
        for (div, v) in &self.up_mult {
            if self.delta.contains(&div.base) {
                if !ctx.le(v, &one)? {
                    return Err(CoverError::NotGlc(*div));
                }
            } else if !v.is_zero() {
                return Err(CoverError::OffSupport(*div));
            }
        }
        Ok(())
    }

    /// First boundary divisor whose largest sheet multiplicity is not 1.
    pub fn first_unnormalized(&self, ctx: &Context) -> Result<Option<DivId>, CoverError> {
        for &d in &self.delta {
            let top = max_present(ctx, &self.sheet_mults(d))?;
            if top.is_none_or(|t| !t.is_rational() || t != ExtReal::one()) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    pub fn is_normalized(&self, ctx: &Context) -> Result<bool, CoverError> {
        Ok(self.first_unnormalized(ctx)?.is_none())
    }

    fn require_normalized(&self, ctx: &Context) -> Result<(), CoverError> {
        match self.first_unnormalized(ctx)? {
            Some(d) => Err(CoverError::NotNormalized(d)),
            None => Ok(()),
        }
    }

    /// Per-sheet crepant values over a point; `None` on punctured sheets.
    pub fn point_values(&self, point: PointId) -> Result<Vec<Option<ExtReal>>, CoverError> {
        let p = self.base.point(point)?;
        Ok((0..self.sheets)
            .map(|sheet| {
                if self.is_punctured(sheet, point) {
                    return None;
                }
                let mut acc = ExtReal::integer(-1);
                for d in p.site.divisors() {
                    acc = &acc + self.up_mult.get(&UpDiv { base: d, sheet })?;
                }
                Some(acc)
            })
            .collect())
    }

    /// Multiplicity of the divisorial part at a base divisor, or at the exceptional over a point.
    pub fn ddiv_mult_at(&self, target: Target, ctx: &Context) -> Result<ExtReal, CoverError> {
        match target {
            Target::Divisor(d) => {
                self.base.divisor(d)?;
                max_present(ctx, &self.sheet_mults(d))?.ok_or(CoverError::TableShape(d))
            }
            Target::Point(p) => max_present(ctx, &self.point_values(p)?)?.ok_or(CoverError::EmptyFiber(p)),
        }
    }

    /// `B(Z, D_div)` at the exceptional over `point`.
    pub fn predicted_at(&self, point: PointId, ctx: &Context) -> Result<ExtReal, CoverError> {
        let p = self.base.point(point)?;
        let mut acc = ExtReal::integer(-1);
        for d in p.site.divisors() {
            acc = &acc + &self.ddiv_mult_at(Target::Divisor(d), ctx)?;
        }
        Ok(acc)
    }

    /// Whether the divisorial part over `point` matches its prediction.
    pub fn bp_point_ok(&self, point: PointId, ctx: &Context) -> Result<bool, CoverError> {
        Ok(self.ddiv_mult_at(Target::Point(point), ctx)? == self.predicted_at(point, ctx)?)
    }

    /// Local BP criterion at a crossing: `max_s(u_s + v_s) = max_s u_s + max_s v_s`,
    /// the left side over sheets where the point is not punctured.
    pub fn bp_local_ok(&self, crossing: PointId, ctx: &Context) -> Result<bool, CoverError> {
        self.bp_point_ok(crossing, ctx)
    }

    /// Crossings where the local criterion fails, in id order.
    pub fn bp_violations(&self, ctx: &Context) -> Result<Vec<PointId>, CoverError> {
        let mut out = Vec::new();
        for p in self.base.crossings() {
            if !self.bp_local_ok(p.id, ctx)? {
                out.push(p.id);
            }
        }
        Ok(out)
    }

    /// Raises every boundary divisor whose largest sheet multiplicity `mu` is
    /// below 1 by `(1 - mu)` on all sheets.
    pub fn normalize(&self, ctx: &Context) -> Result<(CoverState, Vec<StepRecord>), CoverError> {
        self.check_glc(ctx)?;
        let mut next = self.clone();
        let mut records = Vec::new();
        let one = ExtReal::one();
        for &d in &self.delta {
            let mults = self.sheet_mults(d);
            let top = max_present(ctx, &mults)?.ok_or(CoverError::TableShape(d))?;
            if top == one {
                continue;
            }
            let shift = &one - &top;
            for (sheet, v) in mults.iter().enumerate() {
                if let Some(v) = v {
                    next.up_mult.insert(UpDiv { base: d, sheet }, v + &shift);
                }
            }
            records.push(StepRecord {
                kind: StepKind::Normalization,
                location: Location::Divisor { id: d, name: self.base.divisor(d)?.name.clone() },
                crepant_mults: mults,
                ddiv_mult: top,
                shift,
                predicted: None,
                exceptional: None,
                trigger: None,
            });
        }
        Ok((next, records))
    }

    /// Blows up a recorded point of the base and every surviving preimage,
    /// then renormalizes the new exceptional divisor.
    pub fn blowup_step(&self, point: PointId, ctx: &Context) -> Result<(CoverState, StepRecord), CoverError> {
        self.require_normalized(ctx)?;
        let name = self.base.point(point)?.name.clone();
        let crepant = self.point_values(point)?;
        let top = max_present(ctx, &crepant)?.ok_or(CoverError::EmptyFiber(point))?;
        let predicted = self.predicted_at(point, ctx)?;
        let shift = &ExtReal::one() - &top;

        let mut next = self.clone();
        let (e, fresh) = next.base.blow_up_in_place(point)?;
        for (sheet, value) in crepant.iter().enumerate() {
            next.punctures.remove(&(sheet, point));
            match value {
                Some(b) => {
                    next.up_mult.insert(UpDiv { base: e, sheet }, b + &shift);
                }
                None => {
                    for f in &fresh {
                        next.punctures.insert((sheet, *f));
                    }
                }
            }
        }
        next.delta.insert(e);
        let record = StepRecord {
            kind: StepKind::Blowup,
            location: Location::Point { id: point, name },
            crepant_mults: crepant,
            ddiv_mult: top,
            shift,
            predicted: Some(predicted),
            exceptional: Some(e),
            trigger: None,
        };
        Ok((next, record))
    }

    /// Upstairs boundary divisors with multiplicity below 1, in id order.
    pub fn sub_one(&self, ctx: &Context) -> Result<Vec<(UpDiv, ExtReal)>, CoverError> {
        let one = ExtReal::one();
        let mut out = Vec::new();
        for (div, v) in &self.up_mult {
            if self.delta.contains(&div.base) && ctx.lt(v, &one)? {
                out.push((*div, v.clone()));
            }
        }
        Ok(out)
    }

    /// Whether two upstairs divisors over distinct base divisors meet.
    pub fn intersect_upstairs(&self, a: UpDiv, b: UpDiv) -> bool {
        a.sheet == b.sheet
            && self
                .base
                .crossings_between(a.base, b.base)
                .any(|p| !self.is_punctured(a.sheet, p.id))
    }

    /// Sub-1 divisors whose base images cross the image of `div` but which miss `div` upstairs.
    pub fn blocking_partners(&self, div: UpDiv, ctx: &Context) -> Result<Vec<(UpDiv, ExtReal)>, CoverError> {
        Ok(self
            .sub_one(ctx)?
            .into_iter()
            .filter(|(other, _)| {
                other.base != div.base && self.base.cross(div.base, other.base) && !self.intersect_upstairs(div, *other)
            })
            .collect())
    }

    /// Replaces the multiplicity of `div` by 1 when it meets every sub-1
    /// divisor whose image crosses its own.
    pub fn saturate(&self, div: UpDiv, ctx: &Context) -> Result<(CoverState, StepRecord), CoverError> {
        self.require_normalized(ctx)?;
        let illegal = |partner| CoverError::SaturationIllegal { div, partner };
        if !self.delta.contains(&div.base) {
            return Err(illegal(None));
        }
        let current = self.up_mult.get(&div).ok_or_else(|| illegal(None))?;
        let one = ExtReal::one();
        if !ctx.lt(current, &one)? {
            return Err(illegal(None));
        }
        if let Some((partner, _)) = self.blocking_partners(div, ctx)?.first() {
            return Err(illegal(Some(*partner)));
        }
        let mults = self.sheet_mults(div.base);
        let top = max_present(ctx, &mults)?.ok_or(CoverError::TableShape(div.base))?;
        let shift = &one - current;
        let mut next = self.clone();
        next.up_mult.insert(div, one);
        let record = StepRecord {
            kind: StepKind::Saturation,
            location: Location::Upstairs { div, name: self.updiv_name(div) },
            crepant_mults: mults,
            ddiv_mult: top,
            shift,
            predicted: None,
            exceptional: None,
            trigger: None,
        };
        Ok((next, record))
    }

    /// Divisorial part as a b-divisor on the depth-`depth` exploration of the base.
    pub fn ddiv_bdiv(
        &self,
        depth: u32,
        expand_declared: bool,
        ctx: &Context,
    ) -> Result<(Exploration, BDivTrace), CoverError> {
        let expl = explore(&self.base, depth, expand_declared);
        let mut per_sheet: Vec<BTreeMap<DivId, Option<ExtReal>>> = (0..self.sheets)
            .map(|sheet| {
                expl.base_divisors()
                    .map(|d| (d, self.up_mult.get(&UpDiv { base: d, sheet }).cloned()))
                    .collect()
            })
            .collect();
        let mut entries = Vec::new();
        for d in expl.base_divisors() {
            entries.push((d, 0, self.ddiv_mult_at(Target::Divisor(d), ctx)?));
        }
        for node in expl.nodes() {
            let mut values = Vec::with_capacity(self.sheets);
            for (sheet, table) in per_sheet.iter_mut().enumerate() {
                let value = if self.is_punctured(sheet, node.root) {
                    None
                } else {
                    node.point
                        .site
                        .divisors()
                        .try_fold(ExtReal::integer(-1), |acc, d| table[&d].as_ref().map(|v| &acc + v))
                };
                table.insert(node.exceptional, value.clone());
                values.push(value);
            }
            let top = max_present(ctx, &values)?.ok_or(CoverError::EmptyFiber(node.root))?;
            entries.push((node.exceptional, node.level, top));
        }
        Ok((expl, BDivTrace::leveled(entries)))
    }

    /// Compares the divisorial part with `B(Z, D_div)` to `depth`; returns the shallowest difference.
    pub fn verify_bp(&self, depth: u32, expand_declared: bool, ctx: &Context) -> Result<Option<Divergence>, CoverError> {
        let (expl, actual) = self.ddiv_bdiv(depth, expand_declared, ctx)?;
        let on_base = BDivTrace::from_fn(&self.base, |d| actual.mult(d).cloned().unwrap_or_default());
        let predicted = codiscrepancy_on(&expl, &on_base)?;
        Ok(crate::surface::bdiv_equal(&actual, &predicted, depth)?)
    }

    /// Progress measure of the stabilization loop, `None` once nothing is below 1.
    pub fn progress(&self, ctx: &Context) -> Result<Option<Progress>, CoverError> {
        let sub = self.sub_one(ctx)?;
        let Some(min) = ctx.min(sub.iter().map(|(_, v)| v))? else {
            return Ok(None);
        };
        let mut at_min = 0;
        let mut bad = 0;
        for (div, v) in &sub {
            if *v == min {
                at_min += 1;
                for (partner, _) in self.blocking_partners(*div, ctx)? {
                    bad += self.base.crossings_between(div.base, partner.base).count();
                }
            }
        }
        Ok(Some(Progress { min_mult: min, at_min, bad_crossings: bad }))
    }

    /// One iteration of the stabilization loop on a normalized state: saturate
    /// the smallest-id divisor of least sub-1 multiplicity if legal, otherwise
    /// blow up its smallest-id crossing with the smallest-id blocking partner;
    /// then renormalize. `None` when nothing is below 1.
    pub fn step(&self, ctx: &Context) -> Result<Option<(CoverState, Vec<StepRecord>)>, CoverError> {
        let sub = self.sub_one(ctx)?;
        let Some(min) = ctx.min(sub.iter().map(|(_, v)| v))? else {
            return Ok(None);
        };
        let (chosen, chosen_mult) = sub.into_iter().find(|(_, v)| *v == min).expect("minimum is attained");
        let partners = self.blocking_partners(chosen, ctx)?;
        let (next, record) = match partners.into_iter().next() {
            None => self.saturate(chosen, ctx)?,
            Some((partner, partner_mult)) => {
                let crossing = self
                    .base
                    .crossings_between(chosen.base, partner.base)
                    .map(|p| p.id)
                    .min()
                    .expect("partners cross");
                let (next, mut record) = self.blowup_step(crossing, ctx)?;
                record.trigger = Some(Trigger { chosen, chosen_mult, partner, partner_mult });
                (next, record)
            }
        };
        let (next, extra) = next.normalize(ctx)?;
        let mut records = alloc::vec![record];
        records.extend(extra);
        Ok(Some((next, records)))
    }

    /// Runs the stabilization algorithm for at most `cap` blowups and saturations.
    pub fn stabilize(&self, cap: usize, ctx: &Context) -> Result<Stabilization, CoverError> {
        if !self.is_proper() {
            return Err(CoverError::NotProper);
        }
        let (mut state, mut trace) = self.normalize(ctx)?;
        for _ in 0..cap {
            match state.step(ctx)? {
                Some((next, records)) => {
                    trace.extend(records);
                    state = next;
                }
                None => break,
            }
        }
        if state.sub_one(ctx)?.is_empty() {
            state.check_stable(ctx)?;
            Ok(Stabilization::Stabilized { state, trace })
        } else {
            Ok(Stabilization::NotStabilized { state, trace })
        }
    }

    fn check_stable(&self, ctx: &Context) -> Result<(), CoverError> {
        if let Some(p) = self.bp_violations(ctx)?.first() {
            return Err(CoverError::PostconditionFailed(format!("local criterion fails at {p}")));
        }
        if let Some(d) = self.verify_bp(VERIFY_DEPTH, false, ctx)? {
            return Err(CoverError::PostconditionFailed(format!(
                "divisorial part differs from B(Z, D_div) at {} (level {})",
                d.div, d.level
            )));
        }
        Ok(())
    }
}

/// Lexicographic progress of the stabilization loop: the smallest sub-1
/// multiplicity grows, then the number of divisors attaining it drops, then
/// the number of crossings where those divisors meet a disjoint sub-1 partner drops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progress {
    pub min_mult: ExtReal,
    pub at_min: usize,
    pub bad_crossings: usize,
}

impl Progress {
    /// Strictly better than `prev`. `None` (nothing below 1) beats everything.
    pub fn improves_on(next: Option<&Progress>, prev: &Progress, ctx: &Context) -> Result<bool, NumError> {
        let Some(next) = next else { return Ok(true) };
        Ok(match ctx.compare(&next.min_mult, &prev.min_mult)? {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (next.at_min, next.bad_crossings) < (prev.at_min, prev.bad_crossings),
        })
    }
}

#[derive(Debug, Clone)]
pub enum Stabilization {
    Stabilized { state: CoverState, trace: Vec<StepRecord> },
    NotStabilized { state: CoverState, trace: Vec<StepRecord> },
}

impl Stabilization {
    pub fn is_stabilized(&self) -> bool {
        matches!(self, Stabilization::Stabilized { .. })
    }

    pub fn state(&self) -> &CoverState {
        match self {
            Stabilization::Stabilized { state, .. } | Stabilization::NotStabilized { state, .. } => state,
        }
    }

    pub fn trace(&self) -> &[StepRecord] {
        match self {
            Stabilization::Stabilized { trace, .. } | Stabilization::NotStabilized { trace, .. } => trace,
        }
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.trace().iter().filter(|r| r.kind == kind).count()
    }

    pub fn blowups(&self) -> usize {
        self.count(StepKind::Blowup)
    }

    pub fn saturations(&self) -> usize {
        self.count(StepKind::Saturation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EuclidOutcome {
    /// Reached equal entries after `steps` subtractions.
    Equal { steps: usize, pairs: Vec<(ExtReal, ExtReal)> },
    /// No equality within the cap.
    Diverged { pairs: Vec<(ExtReal, ExtReal)> },
}

impl EuclidOutcome {
    pub fn pairs(&self) -> &[(ExtReal, ExtReal)] {
        match self {
            EuclidOutcome::Equal { pairs, .. } | EuclidOutcome::Diverged { pairs } => pairs,
        }
    }

    pub fn steps(&self) -> Option<usize> {
        match self {
            EuclidOutcome::Equal { steps, .. } => Some(*steps),
            EuclidOutcome::Diverged { .. } => None,
        }
    }
}

/// Subtractive Euclid: replace the larger entry by the difference until the entries agree.
///
/// `pairs` lists every visited pair, starting with the input.
pub fn euclid_oracle(alpha: &ExtReal, beta: &ExtReal, cap: usize, ctx: &Context) -> Result<EuclidOutcome, NumError> {
    let (mut a, mut b) = (alpha.clone(), beta.clone());
    let mut pairs = alloc::vec![(a.clone(), b.clone())];
    for steps in 0..=cap {
        match ctx.compare(&a, &b)? {
            Ordering::Equal => return Ok(EuclidOutcome::Equal { steps, pairs }),
            _ if steps == cap => break,
            Ordering::Less => b = b.try_sub(&a)?,
            Ordering::Greater => a = a.try_sub(&b)?,
        }
        pairs.push((a.clone(), b.clone()));
    }
    Ok(EuclidOutcome::Diverged { pairs })
}
