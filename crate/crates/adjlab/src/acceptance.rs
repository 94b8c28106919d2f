//! The eleven acceptance criteria, shared by the `acceptance` test target and `adjlab verify-all`.
//!
//! All comparisons are exact; no tolerances are involved anywhere.

use std::cmp::Ordering;
use std::fmt;

use adjlab_core::cover::{euclid_oracle, CoverState, StepKind, Target, VERIFY_DEPTH};
use adjlab_core::curves::{
    crepant_pullback, discriminant_mult, discriminant_mult_oracle, fiber_moduli, klt_over_point, lc_over_point,
    BranchData, FiberData,
};
use adjlab_core::scenarios::{
    d_grid, denominator_lcm, example4, example5_state, irrational_context, partitions, random_cover, random_trace,
    random_tower, Payload,
};
use adjlab_core::surface::{
    bdiv_equal, cartier_closure, codiscrepancy_on, codiscrepancy_recursive, codiscrepancy_total_transform, explore,
    BDivTrace, Exploration,
};
use adjlab_core::{Context, ExtReal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Small,
    Full,
}

impl Grid {
    pub fn towers(self) -> u64 {
        match self {
            Grid::Small => 200,
            Grid::Full => 2_000,
        }
    }

    pub fn covers(self) -> u64 {
        match self {
            Grid::Small => 50,
            Grid::Full => 500,
        }
    }

    pub fn traces(self) -> u64 {
        match self {
            Grid::Small => 100,
            Grid::Full => 500,
        }
    }
}

pub const TITLES: [&str; 11] = [
    "formula matches lc-threshold oracle",
    "boundary-free and equal-boundary specializations",
    "Galois fibres have zero moduli part",
    "crepant pull-back round trip",
    "tower transitivity and moduli additivity",
    "general properties",
    "rational unramified double cover stabilizes",
    "irrational unramified double cover diverges like Euclid",
    "first blowup arithmetic",
    "punctured and unpunctured single-curve cover",
    "codiscrepancy routes agree",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {mark}: {} ({})", self.id, self.title, self.detail)
    }
}

type Res = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: impl fmt::Display) -> String {
    err.to_string()
}

pub fn run(id: usize, grid: Grid) -> CriterionResult {
    let outcome = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(grid),
        6 => c6(grid),
        7 => c7(grid),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(grid),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("?"), passed, detail }
}

pub fn run_all(grid: Grid) -> Vec<CriterionResult> {
    (1..=11).map(|id| run(id, grid)).collect()
}

fn fiber(ms: &[u32], ds: &[ExtReal]) -> Result<FiberData, String> {
    FiberData::new(ms.iter().zip(ds).map(|(m, d)| BranchData::new(*m, d.clone())).collect::<Result<_, _>>().map_err(e)?)
        .map_err(e)
}

/// Every fibre of degree at most 6 with boundary values from the grid.
///
/// A fibre is a multiset of branches, so branches with equal multiplicity
/// get non-decreasing grid indices and each fibre is visited once.
fn for_each_grid_fiber(mut f: impl FnMut(&FiberData) -> Result<(), String>) -> Result<usize, String> {
    fn go(
        ms: &[u32],
        grid: &[ExtReal],
        ds: &mut Vec<ExtReal>,
        last: usize,
        f: &mut dyn FnMut(&FiberData) -> Result<(), String>,
    ) -> Result<usize, String> {
        let i = ds.len();
        if i == ms.len() {
            f(&fiber(ms, ds)?)?;
            return Ok(1);
        }
        let start = if i > 0 && ms[i] == ms[i - 1] { last } else { 0 };
        let mut n = 0;
        for k in start..grid.len() {
            ds.push(grid[k].clone());
            n += go(ms, grid, ds, k, f)?;
            ds.pop();
        }
        Ok(n)
    }
    let grid = d_grid();
    let mut count = 0;
    for n in 1..=6 {
        for ms in partitions(n) {
            count += go(&ms, &grid, &mut Vec::new(), 0, &mut f)?;
        }
    }
    Ok(count)
}

fn c1() -> Res {
    let ctx = Context::rational();
    let n = for_each_grid_fiber(|f| {
        let formula = discriminant_mult(f, &ctx).map_err(e)?;
        let oracle = discriminant_mult_oracle(f, &ctx).map_err(e)?;
        ensure(formula == oracle, || format!("{f:?}: formula {formula}, oracle {oracle}"))
    })?;
    Ok(format!("{n} fibres"))
}

fn c2() -> Res {
    let ctx = Context::rational();
    for m in 1..=6u32 {
        let d = discriminant_mult(&fiber(&[m], &[ExtReal::zero()])?, &ctx).map_err(e)?;
        let want = ExtReal::ratio(i64::from(m) - 1, i64::from(m));
        ensure(d == want, || format!("m = {m}: {d} != {want}"))?;
    }
    let mut checked = 0;
    for n in 1..=6 {
        for ms in partitions(n) {
            let top = *ms.iter().max().expect("nonempty");
            let zeros = vec![ExtReal::zero(); ms.len()];
            let d = discriminant_mult(&fiber(&ms, &zeros)?, &ctx).map_err(e)?;
            let want = ExtReal::ratio(i64::from(top) - 1, i64::from(top));
            ensure(d == want, || format!("{ms:?} with zero boundary: {d} != {want}"))?;
            for dv in d_grid() {
                let f = fiber(&ms, &vec![dv.clone(); ms.len()])?;
                let (_, mods) = fiber_moduli(&f, &ctx).map_err(e)?;
                let all_equal = ms.iter().all(|&m| m == top);
                for (mi, mv) in ms.iter().zip(&mods) {
                    let ratio = ExtReal::ratio(i64::from(*mi), i64::from(top));
                    let want = (&dv - &ExtReal::one()).try_sub(&(&dv - &ExtReal::one()).scale(ratio.rational_part())).map_err(e)?;
                    ensure(*mv == want, || format!("{ms:?}, d = {dv}: moduli {mv} != {want}"))?;
                    ensure(ctx.le(mv, &ExtReal::zero()).map_err(e)?, || format!("{ms:?}, d = {dv}: moduli {mv} > 0"))?;
                }
                let all_zero = mods.iter().all(ExtReal::is_zero);
                if dv == ExtReal::one() {
                    // (d - 1) vanishes, so every moduli multiplicity is 0 whatever the m_i
                    ensure(all_zero, || format!("{ms:?}, d = 1: nonzero moduli"))?;
                } else {
                    ensure(all_zero == all_equal, || format!("{ms:?}, d = {dv}: all-zero {all_zero}, equal m_i {all_equal}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("m = 1..6 and {checked} equal-boundary fibres"))
}

fn c3() -> Res {
    let ctx = Context::rational();
    let mut n = 0;
    for m in 1..=4u32 {
        for d in d_grid() {
            for count in 1..=3usize {
                let f = FiberData::uniform(&vec![m; count], &d).map_err(e)?;
                let (_, mods) = fiber_moduli(&f, &ctx).map_err(e)?;
                ensure(mods.iter().all(ExtReal::is_zero), || format!("m = {m}, d = {d}, count = {count}: {mods:?}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} Galois fibres"))
}

fn c4() -> Res {
    let ctx = Context::rational();
    let mut n = 0;
    for deg in 1..=6 {
        for ms in partitions(deg) {
            for q in d_grid() {
                let f = crepant_pullback(&ms, &q).map_err(e)?;
                let d = discriminant_mult(&f, &ctx).map_err(e)?;
                ensure(d == q, || format!("{ms:?}, q = {q}: got {d}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} pull-backs"))
}

fn towers(grid: Grid) -> impl Iterator<Item = (u64, adjlab_core::curves::Tower)> {
    (0..grid.towers()).map(|seed| match random_tower(seed, 4).payload {
        Payload::Tower(t) => (seed, t),
        _ => unreachable!("random_tower builds towers"),
    })
}

fn c5(grid: Grid) -> Res {
    let ctx = Context::rational();
    let (mut points, mut witnesses) = (0, 0);
    for (seed, t) in towers(grid) {
        let tr = t.transitivity_check(&ctx).map_err(e)?;
        ensure(tr.holds, || format!("seed {seed}: transitivity fails {:?}", tr.points))?;
        let ad = t.moduli_additivity_check(&ctx).map_err(e)?;
        ensure(ad.holds, || format!("seed {seed}: additivity fails at {:?}", ad.first_failure.map(|i| &ad.witnesses[i])))?;
        points += tr.points.len();
        witnesses += ad.witnesses.len();
    }
    Ok(format!("{} towers, {points} base points, {witnesses} branches", grid.towers()))
}

/// Shifts used for semiadditivity and to push boundaries past 1 for the lc test.
fn shifts() -> Vec<ExtReal> {
    [(-1, 1), (-1, 3), (1, 4), (1, 2)].into_iter().map(|(n, d)| ExtReal::ratio(n, d)).collect()
}

fn general_properties(f: &FiberData, ctx: &Context) -> Result<(), String> {
    let zero = ExtReal::zero();
    let one = ExtReal::one();
    let d = discriminant_mult(f, ctx).map_err(e)?;
    let ds: Vec<&ExtReal> = f.branches().iter().map(BranchData::d).collect();
    if ds.iter().all(|x| ctx.le(&zero, x).unwrap_or(false)) {
        ensure(ctx.le(&zero, &d).map_err(e)?, || format!("{f:?}: effective boundary, discriminant {d}"))?;
        if ds.iter().all(|x| ctx.le(x, &one).unwrap_or(false)) {
            ensure(ctx.le(&d, &one).map_err(e)?, || format!("{f:?}: boundary, discriminant {d}"))?;
        }
    }
    ensure(d.is_rational(), || format!("{f:?}: discriminant {d} not rational"))?;
    let mut bound = denominator_lcm(ds.iter().copied()).map_err(e)?;
    for b in f.branches() {
        bound *= b.m();
    }
    ensure(&bound % d.denominator().map_err(e)? == 0.into(), || format!("{f:?}: denominator of {d} does not divide {bound}"))?;
    for fib in std::iter::once(Ok(f.clone())).chain(shifts().iter().map(|t| f.shifted(t))) {
        let fib = fib.map_err(e)?;
        let dd = discriminant_mult(&fib, ctx).map_err(e)?;
        ensure(lc_over_point(&fib, ctx).map_err(e)? == ctx.le(&dd, &one).map_err(e)?, || format!("{fib:?}: lc mismatch"))?;
        ensure(klt_over_point(&fib, ctx).map_err(e)? == ctx.lt(&dd, &one).map_err(e)?, || format!("{fib:?}: klt mismatch"))?;
    }
    for t in shifts() {
        let shifted = discriminant_mult(&f.shifted(&t).map_err(e)?, ctx).map_err(e)?;
        ensure(shifted == &d + &t, || format!("{f:?}: shift by {t} gives {shifted}, not {d} + {t}"))?;
    }
    Ok(())
}

fn c6(grid: Grid) -> Res {
    let ctx = Context::rational();
    let fibres = for_each_grid_fiber(|f| general_properties(f, &ctx))?;
    let mut tower_fibres = 0;
    for (seed, t) in towers(grid) {
        let composite = t.compose().map_err(e)?;
        for z in t.lower.fibers().keys() {
            general_properties(&composite.fiber(z), &ctx).map_err(|m| format!("tower {seed}: {m}"))?;
            general_properties(&t.lower_with_discriminant(z, &ctx).map_err(e)?, &ctx)
                .map_err(|m| format!("tower {seed}: {m}"))?;
            tower_fibres += 2;
        }
    }
    Ok(format!("{fibres} grid fibres, {tower_fibres} tower fibres"))
}

fn final_checks(state: &CoverState, ctx: &Context) -> Result<(), String> {
    let violations = state.bp_violations(ctx).map_err(e)?;
    ensure(violations.is_empty(), || format!("local criterion fails at {violations:?}"))?;
    let d = state.verify_bp(VERIFY_DEPTH, false, ctx).map_err(e)?;
    ensure(d.is_none(), || format!("depth-{VERIFY_DEPTH} comparison diverges: {d:?}"))
}

fn c7(grid: Grid) -> Res {
    let ctx = Context::rational();
    let (d1, d2) = (ExtReal::ratio(3, 4), ExtReal::ratio(1, 2));
    let one = ExtReal::one();
    let run = example5_state(d1.clone(), d2.clone(), &ctx).map_err(e)?.stabilize(10_000, &ctx).map_err(e)?;
    let euclid = euclid_oracle(&(&one - &d1), &(&one - &d2), 100, &ctx).map_err(e)?;
    let mut problems = Vec::new();
    if !run.is_stabilized() {
        problems.push("not stabilized".to_string());
    }
    if euclid.steps() != Some(1) {
        problems.push(format!("Euclid oracle gives {:?} steps, expected 1", euclid.steps()));
    }
    if Some(run.blowups()) != euclid.steps().map(|s| s + 1) || run.blowups() != 2 {
        problems.push(format!("{} blowups, expected 2", run.blowups()));
    }
    if run.saturations() != 2 {
        let order: Vec<&str> = run
            .trace()
            .iter()
            .filter(|r| r.kind != StepKind::Normalization)
            .map(|r| if r.kind == StepKind::Blowup { "B" } else { "S" })
            .collect();
        problems.push(format!("{} saturations, expected 2 (step order {})", run.saturations(), order.join("")));
    }
    if let Err(m) = final_checks(run.state(), &ctx) {
        problems.push(m);
    }
    for seed in 1..=grid.covers() {
        let Payload::Cover(s) = random_cover(seed, 4, 5, 12).payload else { unreachable!() };
        let lcm = denominator_lcm(s.up_mults().map(|(_, v)| v)).map_err(e)?;
        let r = s.stabilize(10_000, &ctx).map_err(e)?;
        if !r.is_stabilized() {
            problems.push(format!("random cover {seed} not stabilized within 10000 steps"));
            continue;
        }
        let all = r.state().up_mults().map(|(_, v)| v.clone()).chain(
            r.trace().iter().flat_map(|rec| rec.crepant_mults.iter().flatten().cloned().chain([rec.ddiv_mult.clone(), rec.shift.clone()])),
        );
        for v in all {
            if &lcm % v.denominator().map_err(e)? != 0.into() {
                problems.push(format!("random cover {seed}: {v} has denominator not dividing {lcm}"));
                break;
            }
        }
    }
    if problems.is_empty() {
        Ok(format!(
            "2 blowups, 2 saturations, final state verified; {} random covers stabilized",
            grid.covers()
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn sorted_pair(a: ExtReal, b: ExtReal, ctx: &Context) -> Result<(ExtReal, ExtReal), String> {
    Ok(if ctx.compare(&a, &b).map_err(e)? == Ordering::Greater { (b, a) } else { (a, b) })
}

fn c8() -> Res {
    let ctx = irrational_context();
    let d1 = ctx.generator("sqrt2_half").map_err(e)?;
    let d2 = ctx.generator("sqrt3_third").map_err(e)?;
    let one = ExtReal::one();
    let run = example5_state(d1.clone(), d2.clone(), &ctx).map_err(e)?.stabilize(50, &ctx).map_err(e)?;
    ensure(!run.is_stabilized(), || "stabilized, expected divergence at cap 50".into())?;
    let euclid = euclid_oracle(&(&one - &d1), &(&one - &d2), 50, &ctx).map_err(e)?;
    ensure(euclid.steps().is_none(), || format!("Euclid reached equality after {:?} steps", euclid.steps()))?;
    let triggers: Vec<_> = run.trace().iter().filter_map(|r| r.trigger.as_ref()).collect();
    ensure(!triggers.is_empty(), || "no blowups recorded".into())?;
    for (k, t) in triggers.iter().enumerate() {
        let got = sorted_pair(&one - &t.chosen_mult, &one - &t.partner_mult, &ctx)?;
        let (a, b) = euclid.pairs()[k].clone();
        let want = sorted_pair(a, b, &ctx)?;
        ensure(got == want, || format!("blowup {k}: co-multiplicities {got:?}, Euclid {want:?}"))?;
    }
    let mut values: Vec<ExtReal> = run.state().up_mults().map(|(_, v)| v.clone()).collect();
    for r in run.trace() {
        values.extend(r.crepant_mults.iter().flatten().cloned());
        values.push(r.ddiv_mult.clone());
    }
    for v in &values {
        if !v.is_rational() {
            ensure(ctx.compare(v, &one).map_err(e)? != Ordering::Equal, || format!("{v} equals 1"))?;
        }
    }
    Ok(format!(
        "not stabilized at cap 50; {} blowups follow Euclid step for step; {} values checked",
        triggers.len(),
        values.len()
    ))
}

fn c9() -> Res {
    let ictx = irrational_context();
    let rctx = Context::rational();
    let mut cases: Vec<(ExtReal, ExtReal, &Context)> = Vec::new();
    let grid: Vec<ExtReal> = d_grid().into_iter().filter(|d| !d.is_zero() && *d != ExtReal::one()).collect();
    for a in &grid {
        for b in &grid {
            if rctx.lt(b, a).map_err(e)? {
                cases.push((a.clone(), b.clone(), &rctx));
            }
        }
    }
    cases.push((ictx.generator("sqrt2_half").map_err(e)?, ictx.generator("sqrt3_third").map_err(e)?, &ictx));
    let one = ExtReal::one();
    for (d1, d2, ctx) in &cases {
        let s = example5_state(d1.clone(), d2.clone(), ctx).map_err(e)?;
        let p = s.base().point_by_name("p").ok_or("no point p")?;
        let (next, rec) = s.blowup_step(p, ctx).map_err(e)?;
        let tag = format!("({d1}, {d2})");
        ensure(rec.crepant_mults == vec![Some(d1.clone()), Some(d2.clone())], || format!("{tag}: crepant {:?}", rec.crepant_mults))?;
        let max = ctx.max([d1, d2]).map_err(e)?.expect("two values");
        ensure(rec.ddiv_mult == *d1 && rec.ddiv_mult == max, || format!("{tag}: D_div {}", rec.ddiv_mult))?;
        let ex = rec.exceptional.ok_or("no exceptional")?;
        let want = vec![Some(one.clone()), Some(&(&one + d2) - d1)];
        ensure(next.sheet_mults(ex) == want, || format!("{tag}: sheet mults {:?}", next.sheet_mults(ex)))?;
        let c1 = next.base().divisor_by_name("C1").ok_or("no C1")?;
        let c1_e: Vec<_> = next.base().crossings_between(c1, ex).map(|p| p.id).collect();
        let violations = next.bp_violations(ctx).map_err(e)?;
        ensure(violations == c1_e && c1_e.len() == 1, || format!("{tag}: violations {violations:?}, expected {c1_e:?}"))?;
    }
    Ok(format!("{} pairs", cases.len()))
}

fn first_level_value(expl: &Exploration, trace: &BDivTrace, root: &str) -> Result<ExtReal, String> {
    let node = expl
        .nodes()
        .iter()
        .find(|n| n.level == 1 && n.point.name == root)
        .ok_or_else(|| format!("no exceptional over {root}"))?;
    trace.mult(node.exceptional).cloned().map_err(e)
}

fn c10() -> Res {
    let ctx = Context::rational();
    let depth = 3;
    // unpunctured: stable, and D_div is B(Z, C) = closure(C) + B(Z, 0)
    let Payload::Cover(whole) = example4(false).payload else { unreachable!() };
    let run = whole.stabilize(10, &ctx).map_err(e)?;
    ensure(run.is_stabilized() && run.blowups() == 0, || "unpunctured cover needs blowups".into())?;
    final_checks(run.state(), &ctx)?;
    let (expl, ddiv) = whole.ddiv_bdiv(depth, true, &ctx).map_err(e)?;
    let c = whole.base().divisor_by_name("C").ok_or("no C")?;
    let c_trace = BDivTrace::from_fn(whole.base(), |d| if d == c { ExtReal::one() } else { ExtReal::zero() });
    let zero_trace = BDivTrace::from_fn(whole.base(), |_| ExtReal::zero());
    let b_c = codiscrepancy_on(&expl, &c_trace).map_err(e)?;
    let b_0 = codiscrepancy_on(&expl, &zero_trace).map_err(e)?;
    let closure_plus = cartier_closure(&expl, &c_trace).map_err(e)?.try_add(&b_0).map_err(e)?;
    ensure(bdiv_equal(&ddiv, &b_c, depth).map_err(e)?.is_none(), || "unpunctured D_div differs from B(Z, C)".into())?;
    ensure(bdiv_equal(&ddiv, &closure_plus, depth).map_err(e)?.is_none(), || "unpunctured D_div differs from closure(C) + B(Z, 0)".into())?;
    ensure(whole.ddiv_mult_at(Target::Divisor(c), &ctx).map_err(e)? == ExtReal::one(), || "D_div at C is not 1".into())?;

    // punctured over p: B(Z, 0) in the subtree over p, B(Z, C) elsewhere
    let Payload::Cover(cut) = example4(true).payload else { unreachable!() };
    let (expl, ddiv) = cut.ddiv_bdiv(depth, true, &ctx).map_err(e)?;
    let b_c = codiscrepancy_on(&expl, &c_trace).map_err(e)?;
    let b_0 = codiscrepancy_on(&expl, &zero_trace).map_err(e)?;
    let p = cut.base().point_by_name("p").ok_or("no p")?;
    let mut over_p = 0;
    let mut elsewhere = 0;
    for node in expl.nodes() {
        let got = ddiv.mult(node.exceptional).map_err(e)?;
        let (want, label) = if node.root == p { (b_0.mult(node.exceptional).map_err(e)?, "B(Z, 0)") } else { (b_c.mult(node.exceptional).map_err(e)?, "B(Z, C)") };
        ensure(got == want, || format!("punctured: {} over {} is {got}, {label} gives {want}", node.exceptional, node.point.name))?;
        if node.root == p {
            over_p += 1;
        } else {
            elsewhere += 1;
        }
    }
    let at_p = first_level_value(&expl, &ddiv, "p")?;
    ensure(at_p == ExtReal::integer(-1), || format!("punctured: value over p is {at_p}, expected -1"))?;
    let at_q = first_level_value(&expl, &ddiv, "q")?;
    let zero_q = first_level_value(&expl, &b_0, "q")?;
    let relative = &at_q - &zero_q;
    ensure(relative == ExtReal::one(), || format!("punctured: value over q relative to B(Z, 0) is {relative}, expected 1"))?;
    ensure(cut.ddiv_mult_at(Target::Divisor(c), &ctx).map_err(e)? == ExtReal::one(), || "punctured: D_div at C is not 1".into())?;
    Ok(format!("depth {depth}; punctured tree: {over_p} nodes over p, {elsewhere} elsewhere"))
}

fn c11(grid: Grid) -> Res {
    let mut nodes = 0;
    for seed in 0..grid.traces() {
        let (model, trace) = random_trace(seed);
        let expl = explore(&model, 4, true);
        let a = codiscrepancy_recursive(&expl, &trace).map_err(e)?;
        let b = codiscrepancy_total_transform(&expl, &trace).map_err(e)?;
        for (id, entry) in a.iter() {
            let other = b.get(id).ok_or_else(|| format!("seed {seed}: {id} missing from total transform"))?;
            ensure(entry.mult == other.mult, || format!("seed {seed}: {id} recursive {} total {}", entry.mult, other.mult))?;
        }
        ensure(a.len() == b.len(), || format!("seed {seed}: tree sizes differ"))?;
        nodes += a.len();
    }
    Ok(format!("{} traces, {nodes} divisors to depth 4", grid.traces()))
}
