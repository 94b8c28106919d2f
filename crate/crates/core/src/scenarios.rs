//! Canned worked examples and seeded random generators.
//!
//! Random generation uses PCG32 (`rand_pcg::Lcg64Xsh32`): the state advances
//! by `s <- s * 6364136223846793005 + inc` (mod 2^64) and each output is the
//! xorshift-high, random-rotate of the old state. Streams are created with
//! `Lcg64Xsh32::new(seed, STREAM)`, and a draw below `n` is `next_u32() % n`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rand_pcg::rand_core::Rng;
use rand_pcg::Lcg64Xsh32;
use thiserror::Error;

use crate::cover::{CoverError, CoverState, Stabilization, Target};
use crate::curves::{
    discriminant_mult, discriminant_mult_oracle, fiber_moduli, BranchData, CurveCover, CurveError, FiberData, Tower,
};
use crate::exactnum::{ratio, Context, ExtReal, Generator, GeneratorInfo, NumError};
use crate::surface::{BDivTrace, SncModel, SurfaceError};

/// Stream selector for every generator in this module.
pub const STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

/// Default loop cap for cover scenarios.
pub const DEFAULT_CAP: usize = 10_000;

/// Boundary multiplicities used by the curve grids.
pub fn d_grid() -> Vec<ExtReal> {
    [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)]
        .into_iter()
        .map(|(n, d)| ExtReal::ratio(n, d))
        .collect()
}

/// Partitions of `n` in non-increasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("unknown name `{0}` in spot check")]
    UnknownName(String),
    #[error("spot check {0:?} does not apply to this payload")]
    SpotKind(SpotTarget),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Curve(CurveCover),
    Tower(Tower),
    Cover(CoverState),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Curve(_) => "curve",
            Payload::Tower(_) => "tower",
            Payload::Cover(_) => "cover",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stabilizes,
    Diverges,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stabilizes => "stabilizes",
            Verdict::Diverges => "diverges",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpotTarget {
    /// Discriminant multiplicity over a marked base point of a curve cover.
    Discriminant { point: String },
    /// Moduli multiplicity of one branch over a marked base point.
    Moduli { point: String, branch: usize },
    /// Divisorial part at a base divisor of a cover.
    DdivDivisor { divisor: String },
    /// Divisorial part at the exceptional over a recorded point of a cover.
    DdivPoint { point: String },
}

impl fmt::Display for SpotTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpotTarget::Discriminant { point } => write!(f, "discriminant at {point}"),
            SpotTarget::Moduli { point, branch } => write!(f, "moduli at {point} branch {branch}"),
            SpotTarget::DdivDivisor { divisor } => write!(f, "D_div at {divisor}"),
            SpotTarget::DdivPoint { point } => write!(f, "D_div over {point}"),
        }
    }
}

/// An expected value and a free-form note on where it comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spot {
    pub target: SpotTarget,
    pub value: ExtReal,
    pub provenance: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expected {
    pub verdict: Option<Verdict>,
    pub blowups: Option<usize>,
    pub saturations: Option<usize>,
    pub spots: Vec<Spot>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub context: Context,
    pub payload: Payload,
    pub cap: usize,
    pub expected: Expected,
}

/// Result of checking one expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub what: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub stabilization: Option<Stabilization>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }

    pub fn verdict(&self) -> Option<Verdict> {
        self.stabilization.as_ref().map(|s| if s.is_stabilized() { Verdict::Stabilizes } else { Verdict::Diverges })
    }
}

fn check(what: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check { what: what.into(), ok: expected == actual, expected, actual }
}

impl Scenario {
    /// Runs the payload's pipeline and evaluates every expectation. `cap` overrides the scenario cap.
    pub fn run(&self, cap: Option<usize>) -> Result<Outcome, ScenarioError> {
        let ctx = &self.context;
        let mut checks = Vec::new();
        let mut stabilization = None;
        match &self.payload {
            Payload::Curve(cover) => {
                for (z, fiber) in cover.fibers() {
                    let formula = discriminant_mult(fiber, ctx)?;
                    let oracle = discriminant_mult_oracle(fiber, ctx)?;
                    checks.push(check(format!("discriminant formula vs oracle at {z}"), oracle, formula));
                }
            }
            Payload::Tower(tower) => {
                let t = tower.transitivity_check(ctx)?;
                checks.push(check("transitivity", true, t.holds));
                let a = tower.moduli_additivity_check(ctx)?;
                checks.push(check("moduli additivity", true, a.holds));
            }
            Payload::Cover(state) => {
                if state.is_proper() {
                    let run = state.stabilize(cap.unwrap_or(self.cap), ctx)?;
                    if let Some(v) = self.expected.verdict {
                        let actual = if run.is_stabilized() { Verdict::Stabilizes } else { Verdict::Diverges };
                        checks.push(check("verdict", v, actual));
                    }
                    if let Some(n) = self.expected.blowups {
                        checks.push(check("blowups", n, run.blowups()));
                    }
                    if let Some(n) = self.expected.saturations {
                        checks.push(check("saturations", n, run.saturations()));
                    }
                    stabilization = Some(run);
                } else if let Some(v) = self.expected.verdict {
                    checks.push(check("verdict", v, "not proper"));
                }
            }
        }
        for spot in &self.expected.spots {
            let actual = self.evaluate(&spot.target)?;
            let what = if spot.provenance.is_empty() {
                format!("{}", spot.target)
            } else {
                format!("{} ({})", spot.target, spot.provenance)
            };
            checks.push(check(what, &spot.value, actual));
        }
        Ok(Outcome { stabilization, checks })
    }

    /// Value of a spot target on the initial payload.
    pub fn evaluate(&self, target: &SpotTarget) -> Result<ExtReal, ScenarioError> {
        let ctx = &self.context;
        let unknown = |s: &str| ScenarioError::UnknownName(s.into());
        match (&self.payload, target) {
            (Payload::Curve(c), SpotTarget::Discriminant { point }) => Ok(discriminant_mult(&c.fiber(point), ctx)?),
            (Payload::Curve(c), SpotTarget::Moduli { point, branch }) => {
                let (_, mods) = fiber_moduli(&c.fiber(point), ctx)?;
                mods.get(*branch).cloned().ok_or_else(|| unknown(point))
            }
            (Payload::Tower(t), SpotTarget::Discriminant { point }) => {
                Ok(discriminant_mult(&t.compose()?.fiber(point), ctx)?)
            }
            (Payload::Cover(s), SpotTarget::DdivDivisor { divisor }) => {
                let d = s.base().divisor_by_name(divisor).ok_or_else(|| unknown(divisor))?;
                Ok(s.ddiv_mult_at(Target::Divisor(d), ctx)?)
            }
            (Payload::Cover(s), SpotTarget::DdivPoint { point }) => {
                let p = s.base().point_by_name(point).ok_or_else(|| unknown(point))?;
                Ok(s.ddiv_mult_at(Target::Point(p), ctx)?)
            }
            (_, t) => Err(ScenarioError::SpotKind(t.clone())),
        }
    }
}

/// Context with the two fixed irrational generators `sqrt2_half` and `sqrt3_third`.
pub fn irrational_context() -> Context {
    let sqrt2_half = Generator::algebraic("sqrt2_half", vec![ratio(-1, 1), ratio(0, 1), ratio(2, 1)], ratio(70, 100), ratio(71, 100));
    let sqrt3_third = Generator::algebraic("sqrt3_third", vec![ratio(-1, 1), ratio(0, 1), ratio(3, 1)], ratio(57, 100), ratio(58, 100));
    Context::new(vec![sqrt2_half.expect("valid"), sqrt3_third.expect("valid")]).expect("distinct names")
}

/// Rebuilds a context from serialized generator declarations.
pub fn context_from_info(infos: &[GeneratorInfo]) -> Result<Context, NumError> {
    let gens = infos
        .iter()
        .map(|g| match &g.polynomial {
            Some(p) => Generator::algebraic(g.name.clone(), p.clone(), g.lo.clone(), g.hi.clone()),
            None => Err(NumError::RefinerContract(g.name.clone())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Context::new(gens)
}

/// One base point `z` with branches `(m_i, d_i)`.
pub fn example2(ms: &[u32], ds: &[ExtReal]) -> Result<Scenario, ScenarioError> {
    let ctx = Context::rational();
    let fiber = FiberData::new(
        ms.iter().zip(ds).map(|(m, d)| BranchData::new(*m, d.clone())).collect::<Result<Vec<_>, _>>()?,
    )?;
    let expected = discriminant_mult_oracle(&fiber, &ctx)?;
    let cover = crate::curves::single_fiber_cover("z", fiber)?;
    Ok(Scenario {
        name: "example2".into(),
        context: ctx,
        payload: Payload::Curve(cover),
        cap: DEFAULT_CAP,
        expected: Expected {
            spots: vec![Spot {
                target: SpotTarget::Discriminant { point: "z".into() },
                value: expected,
                provenance: "lc threshold oracle".into(),
            }],
            ..Expected::default()
        },
    })
}

/// Galois fibre: `count` branches of multiplicity `m`, each with boundary `d`.
pub fn example3_galois(m: u32, d: &ExtReal, count: u32) -> Result<Scenario, ScenarioError> {
    let fiber = FiberData::uniform(&vec![m; count as usize], d)?;
    let cover = crate::curves::single_fiber_cover("z", fiber)?;
    let spots = (0..count as usize)
        .map(|branch| Spot {
            target: SpotTarget::Moduli { point: "z".into(), branch },
            value: ExtReal::zero(),
            provenance: "Galois fibres carry no moduli part".into(),
        })
        .collect();
    Ok(Scenario {
        name: "example3".into(),
        context: Context::rational(),
        payload: Payload::Curve(cover),
        cap: DEFAULT_CAP,
        expected: Expected { spots, ..Expected::default() },
    })
}

/// One base curve `C` whose two sheets carry `(1, 0)`, with free points `p`
/// and `q`. When `punctured`, the sheet-0 preimage of `p` is deleted.
pub fn example4(punctured: bool) -> Scenario {
    let ctx = Context::rational();
    let mut m = SncModel::new();
    let c = m.add_divisor("C");
    let p = m.add_free_point(c, "p").expect("C exists");
    m.add_free_point(c, "q").expect("C exists");
    let mut table = BTreeMap::new();
    table.insert(c, vec![ExtReal::one(), ExtReal::zero()]);
    let punctures: Vec<(usize, _)> = if punctured { vec![(0, p)] } else { Vec::new() };
    let state = CoverState::new(m, [c].into_iter().collect(), 2, table, punctures, &ctx).expect("valid configuration");
    let mut spots = vec![
        Spot {
            target: SpotTarget::DdivDivisor { divisor: "C".into() },
            value: ExtReal::one(),
            provenance: "largest sheet multiplicity".into(),
        },
        Spot {
            target: SpotTarget::DdivPoint { point: "q".into() },
            value: ExtReal::zero(),
            provenance: "codiscrepancy of (Z, C)".into(),
        },
    ];
    spots.push(if punctured {
        Spot {
            target: SpotTarget::DdivPoint { point: "p".into() },
            value: ExtReal::integer(-1),
            provenance: "codiscrepancy of (Z, 0)".into(),
        }
    } else {
        Spot {
            target: SpotTarget::DdivPoint { point: "p".into() },
            value: ExtReal::zero(),
            provenance: "codiscrepancy of (Z, C)".into(),
        }
    });
    Scenario {
        name: if punctured { "example4_punctured" } else { "example4" }.into(),
        context: ctx,
        payload: Payload::Cover(state),
        cap: DEFAULT_CAP,
        expected: Expected {
            verdict: (!punctured).then_some(Verdict::Stabilizes),
            blowups: (!punctured).then_some(0),
            saturations: None,
            spots,
        },
    }
}

/// Two base curves `C1`, `C2` crossing once at `p`; sheet multiplicities
/// `(d1, 1)` over `C1` and `(1, d2)` over `C2`.
pub fn example5_state(d1: ExtReal, d2: ExtReal, ctx: &Context) -> Result<CoverState, CoverError> {
    let mut m = SncModel::new();
    let c1 = m.add_divisor("C1");
    let c2 = m.add_divisor("C2");
    m.add_crossing(c1, c2, "p")?;
    let mut table = BTreeMap::new();
    table.insert(c1, vec![d1, ExtReal::one()]);
    table.insert(c2, vec![ExtReal::one(), d2]);
    CoverState::new(m, [c1, c2].into_iter().collect(), 2, table, [], ctx)
}

/// Example-5 scenario; `expected` is filled from the Euclid oracle on the co-multiplicities.
pub fn example5(d1: ExtReal, d2: ExtReal, ctx: &Context, cap: usize) -> Result<Scenario, ScenarioError> {
    let state = example5_state(d1.clone(), d2.clone(), ctx)?;
    let one = ExtReal::one();
    let crossing = Spot {
        target: SpotTarget::DdivPoint { point: "p".into() },
        value: ctx.max([&d1, &d2])?.expect("two values"),
        provenance: "max of the two crepant values".into(),
    };
    let both_sub_one = ctx.lt(&d1, &one)? && ctx.lt(&d2, &one)?;
    let expected = if both_sub_one {
        let euclid = crate::cover::euclid_oracle(&one.try_sub(&d1)?, &one.try_sub(&d2)?, cap / 2, ctx)?;
        match euclid.steps() {
            Some(steps) => Expected {
                verdict: Some(Verdict::Stabilizes),
                blowups: Some(steps + 1),
                saturations: None,
                spots: vec![crossing],
            },
            None => Expected { verdict: Some(Verdict::Diverges), blowups: None, saturations: None, spots: vec![crossing] },
        }
    } else {
        Expected { verdict: Some(Verdict::Stabilizes), spots: vec![crossing], ..Expected::default() }
    };
    let name = if d1.is_rational() && d2.is_rational() {
        "example5_rational"
    } else if d1 == d2 {
        "example5_equal"
    } else {
        "example5_irrational"
    };
    Ok(Scenario { name: name.into(), context: ctx.clone(), payload: Payload::Cover(state), cap, expected })
}

/// Names accepted by [`canned`].
pub const CANNED: [&str; 8] = [
    "example2",
    "example2_mixed",
    "example3",
    "example4",
    "example4_punctured",
    "example5_rational",
    "example5_equal",
    "example5_irrational",
];

pub fn canned(name: &str) -> Option<Scenario> {
    let q = ExtReal::ratio;
    let s = match name {
        "example2" => example2(&[2], &[q(0, 1)]).ok()?,
        "example2_mixed" => {
            let mut s = example2(&[3, 1], &[q(1, 3), q(7, 9)]).ok()?;
            s.name = "example2_mixed".into();
            s
        }
        "example3" => example3_galois(2, &q(1, 3), 2).ok()?,
        "example4" => example4(false),
        "example4_punctured" => example4(true),
        "example5_rational" => example5(q(3, 4), q(1, 2), &Context::rational(), DEFAULT_CAP).ok()?,
        "example5_equal" => {
            let ctx = irrational_context();
            let d = ctx.generator("sqrt2_half").ok()?;
            example5(d.clone(), d, &ctx, DEFAULT_CAP).ok()?
        }
        "example5_irrational" => {
            let ctx = irrational_context();
            let d1 = ctx.generator("sqrt2_half").ok()?;
            let d2 = ctx.generator("sqrt3_third").ok()?;
            example5(d1, d2, &ctx, 50).ok()?
        }
        _ => return None,
    };
    Some(s)
}

fn rng(seed: u64) -> Lcg64Xsh32 {
    Lcg64Xsh32::new(seed, STREAM)
}

fn below(rng: &mut Lcg64Xsh32, n: u32) -> u32 {
    rng.next_u32() % n
}

fn random_ratio(rng: &mut Lcg64Xsh32, denominator_bound: u32, signed: bool) -> ExtReal {
    let den = 1 + below(rng, denominator_bound);
    let num = i64::from(below(rng, den + 1));
    let num = if signed && below(rng, 2) == 1 { -num } else { num };
    ExtReal::ratio(num, i64::from(den))
}

fn random_model(rng: &mut Lcg64Xsh32, max_divisors: u32, max_crossings: u32) -> SncModel {
    let mut m = SncModel::new();
    let n = 1 + below(rng, max_divisors.max(1));
    let ids: Vec<_> = (0..n).map(|i| m.add_divisor(format!("C{i}"))).collect();
    if n >= 2 {
        let crossings = below(rng, max_crossings + 1);
        for k in 0..crossings {
            let a = below(rng, n);
            let mut b = below(rng, n - 1);
            if b >= a {
                b += 1;
            }
            let (a, b) = (a.min(b), a.max(b));
            m.add_crossing(ids[a as usize], ids[b as usize], format!("p{k}")).expect("distinct divisors");
        }
    }
    m
}

/// Random proper double cover: every base divisor lies in the boundary and
/// every sheet multiplicity is a rational in `[0, 1]` with denominator at most `denominator_bound`.
pub fn random_cover(seed: u64, max_divisors: u32, max_crossings: u32, denominator_bound: u32) -> Scenario {
    let mut rng = rng(seed);
    let ctx = Context::rational();
    let model = random_model(&mut rng, max_divisors, max_crossings);
    let mut table = BTreeMap::new();
    let delta: BTreeSet<_> = model.divisor_ids().collect();
    for d in &delta {
        table.insert(*d, (0..2).map(|_| random_ratio(&mut rng, denominator_bound.max(1), false)).collect());
    }
    let state = CoverState::new(model, delta, 2, table, [], &ctx).expect("generated cover is valid");
    Scenario {
        name: format!("random_cover_{seed}"),
        context: ctx,
        payload: Payload::Cover(state),
        cap: DEFAULT_CAP,
        expected: Expected { verdict: Some(Verdict::Stabilizes), ..Expected::default() },
    }
}

fn random_partition(rng: &mut Lcg64Xsh32, n: u32) -> Vec<u32> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let part = 1 + below(rng, left);
        parts.push(part);
        left -= part;
    }
    parts
}

/// Random two-level tower `X -> Y -> Z` with both degrees at most `max_degree`
/// and boundary values drawn from [`d_grid`].
pub fn random_tower(seed: u64, max_degree: u32) -> Scenario {
    let mut rng = rng(seed);
    let grid = d_grid();
    let lower_degree = 1 + below(&mut rng, max_degree.max(1));
    let upper_degree = 1 + below(&mut rng, max_degree.max(1));
    let mut lower = BTreeMap::new();
    let mut upper = BTreeMap::new();
    for j in 0..1 + below(&mut rng, 2) {
        let mut branches = Vec::new();
        for (i, m) in random_partition(&mut rng, lower_degree).into_iter().enumerate() {
            let y = format!("y{j}_{i}");
            let branch = BranchData::new(m, ExtReal::zero()).expect("positive").at(y.clone());
            branches.push(branch);
            if below(&mut rng, 4) != 0 {
                let fiber = random_partition(&mut rng, upper_degree)
                    .into_iter()
                    .map(|m| BranchData::new(m, grid[below(&mut rng, grid.len() as u32) as usize].clone()))
                    .collect::<Result<Vec<_>, _>>()
                    .expect("positive");
                upper.insert(y, FiberData::new(fiber).expect("nonempty"));
            }
        }
        lower.insert(format!("z{j}"), FiberData::new(branches).expect("nonempty"));
    }
    let tower = Tower::new(
        CurveCover::new(upper_degree, upper).expect("partitions"),
        CurveCover::new(lower_degree, lower).expect("partitions"),
    )
    .expect("every marked point named once");
    Scenario {
        name: format!("random_tower_{seed}"),
        context: Context::rational(),
        payload: Payload::Tower(tower),
        cap: DEFAULT_CAP,
        expected: Expected::default(),
    }
}

/// Random model with a blowup history and declared free and off points, plus
/// a boundary trace with signed rational entries.
pub fn random_trace(seed: u64) -> (SncModel, BDivTrace) {
    let mut rng = rng(seed);
    let mut model = random_model(&mut rng, 4, 5);
    let first = model.divisor_ids().next().expect("at least one divisor");
    if below(&mut rng, 2) == 1 {
        model.add_free_point(first, "f").expect("divisor exists");
    }
    if below(&mut rng, 2) == 1 {
        model.add_off_point("o");
    }
    for _ in 0..below(&mut rng, 3) {
        let points: Vec<_> = model.points().map(|p| p.id).collect();
        if points.is_empty() {
            break;
        }
        let p = points[below(&mut rng, points.len() as u32) as usize];
        model.blow_up_in_place(p).expect("recorded point");
    }
    let trace = BDivTrace::from_fn(&model, |_| random_ratio(&mut rng, 12, true));
    (model, trace)
}

/// Least common multiple of the denominators of rational values.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a ExtReal>) -> Result<BigInt, NumError> {
    let mut acc = BigInt::from(1);
    for v in values {
        acc = acc.lcm(&v.denominator()?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn canned_scenarios_meet_their_expectations() {
        for name in CANNED {
            let s = canned(name).unwrap();
            let out = s.run(None).unwrap();
            assert!(out.passed(), "{name}: {:?}", out.first_failure());
        }
    }

    #[test]
    fn example5_expectation_comes_from_euclid() {
        let s = canned("example5_rational").unwrap();
        assert_eq!(s.expected.blowups, Some(2));
        assert_eq!(s.expected.verdict, Some(Verdict::Stabilizes));
        let s = canned("example5_irrational").unwrap();
        assert_eq!(s.expected.verdict, Some(Verdict::Diverges));
        assert_eq!(s.cap, 50);
    }

    #[test]
    fn cap_zero_is_a_mismatch() {
        let out = canned("example5_rational").unwrap().run(Some(0)).unwrap();
        assert!(!out.passed());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_cover(7, 4, 5, 12).payload, random_cover(7, 4, 5, 12).payload);
        assert_eq!(random_tower(7, 4).payload, random_tower(7, 4).payload);
        assert_eq!(random_trace(7), random_trace(7));
    }

    #[test]
    fn seed_one_cover_stabilizes() {
        let out = random_cover(1, 4, 5, 12).run(None).unwrap();
        assert!(out.passed(), "{:?}", out.first_failure());
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [ExtReal::ratio(1, 4), ExtReal::ratio(5, 6), ExtReal::one()];
        assert_eq!(denominator_lcm(&v).unwrap(), BigInt::from(12));
    }
}
