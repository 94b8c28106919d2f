//! Adjunction for finite separable coverings of curves in characteristic 0.
//!
//! Over a base point `p` the fibre is `f^*p = sum(m_i p_i)` and the
//! boundary has multiplicity `d_i` at `p_i`. The ramification index is
//! always `m_i - 1`. The discriminant (divisorial part) at `p` is
//! `max_i (m_i - 1 + d_i) / m_i`, and the moduli part at `p_i` is the
//! pointwise trace `d_i + m_i - 1 - m_i d'`. Moduli multiplicities are
//! raw traces; no global linear-equivalence normalization is applied.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::exactnum::{Context, ExtReal, NumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("covering multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("fibre has no branches")]
    EmptyFiber,
    #[error("fibre over `{point}` has total multiplicity {found}, expected degree {expected}")]
    DegreeMismatch { point: String, expected: u32, found: u32 },
    #[error("branch {index} has multiplicity above 1; the pair is not lc over the point")]
    NotGlc { index: usize },
    #[error("tower mismatch: {0}")]
    TowerMismatch(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// One point `p_i` of a fibre: covering multiplicity `m_i` and boundary multiplicity `d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchData {
    m: u32,
    d: ExtReal,
    point: Option<String>,
}

impl BranchData {
    pub fn new(m: u32, d: ExtReal) -> Result<Self, CurveError> {
        if m == 0 {
            return Err(CurveError::ZeroMultiplicity);
        }
        Ok(BranchData { m, d, point: None })
    }

    /// Names the upstairs point; needed when the branch is a base point of a tower's upper level.
    pub fn at(mut self, point: impl Into<String>) -> Self {
        self.point = Some(point.into());
        self
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> &ExtReal {
        &self.d
    }

    pub fn point(&self) -> Option<&str> {
        self.point.as_deref()
    }

    /// Ramification index (characteristic 0).
    pub fn ramification(&self) -> u32 {
        self.m - 1
    }

    fn m_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberData {
    branches: Vec<BranchData>,
}

impl FiberData {
    pub fn new(branches: Vec<BranchData>) -> Result<Self, CurveError> {
        if branches.is_empty() {
            return Err(CurveError::EmptyFiber);
        }
        Ok(FiberData { branches })
    }

    /// Fibre with the given multiplicities and a single boundary value on every branch.
    pub fn uniform(ms: &[u32], d: &ExtReal) -> Result<Self, CurveError> {
        let branches = ms
            .iter()
            .map(|&m| BranchData::new(m, d.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        FiberData::new(branches)
    }

    /// Unramified fibre of a degree-`degree` cover with zero boundary.
    pub fn etale(degree: u32) -> Self {
        FiberData {
            branches: (0..degree.max(1))
                .map(|_| BranchData { m: 1, d: ExtReal::zero(), point: None })
                .collect(),
        }
    }

    pub fn branches(&self) -> &[BranchData] {
        &self.branches
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.branches.iter().map(|b| b.m).sum()
    }

    /// Replaces every `d_i` by `d_i + m_i t`, i.e. adds the pull-back of `t p`.
    pub fn shifted(&self, t: &ExtReal) -> Result<FiberData, CurveError> {
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(BranchData {
                    m: b.m,
                    d: b.d.try_add(&t.scale(&b.m_rational()))?,
                    point: b.point.clone(),
                })
            })
            .collect::<Result<Vec<_>, NumError>>()?;
        Ok(FiberData { branches })
    }
}

/// A finite cover `C -> C'` given by its marked fibres.
///
/// Unmarked base points carry implicit unramified fibres with zero boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCover {
    degree: u32,
    fibers: BTreeMap<String, FiberData>,
}

impl CurveCover {
    pub fn new(degree: u32, fibers: BTreeMap<String, FiberData>) -> Result<Self, CurveError> {
        if degree == 0 {
            return Err(CurveError::ZeroMultiplicity);
        }
        for (point, fiber) in &fibers {
            let found = fiber.total_multiplicity();
            if found != degree {
                return Err(CurveError::DegreeMismatch { point: point.clone(), expected: degree, found });
            }
        }
        Ok(CurveCover { degree, fibers })
    }

    /// The identity cover (degree 1, nothing marked).
    pub fn identity() -> Self {
        CurveCover { degree: 1, fibers: BTreeMap::new() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn fibers(&self) -> &BTreeMap<String, FiberData> {
        &self.fibers
    }

    pub fn fiber(&self, point: &str) -> Cow<'_, FiberData> {
        match self.fibers.get(point) {
            Some(f) => Cow::Borrowed(f),
            None => Cow::Owned(FiberData::etale(self.degree)),
        }
    }
}

fn branch_ratio(b: &BranchData) -> ExtReal {
    // (m - 1 + d) / m
    let numer = &ExtReal::integer(i64::from(b.m) - 1) + &b.d;
    numer.scale(&BigRational::new(BigInt::from(1), BigInt::from(b.m)))
}

/// Multiplicity of the divisorial part at the base point.
pub fn discriminant_mult(fiber: &FiberData, ctx: &Context) -> Result<ExtReal, CurveError> {
    let values: Vec<ExtReal> = fiber.branches.iter().map(branch_ratio).collect();
    Ok(ctx.max(&values)?.expect("fibres are nonempty"))
}

/// The discriminant via the lc threshold: `1 - t` where `t` is the largest
/// value keeping every `d_i + t m_i <= 1`.
pub fn discriminant_mult_oracle(fiber: &FiberData, ctx: &Context) -> Result<ExtReal, CurveError> {
    let one = ExtReal::one();
    let mut thresholds = Vec::with_capacity(fiber.branches.len());
    for (index, b) in fiber.branches.iter().enumerate() {
        if !ctx.le(&b.d, &one)? {
            return Err(CurveError::NotGlc { index });
        }
        let slack = &one - &b.d;
        thresholds.push(slack.scale(&BigRational::new(BigInt::from(1), BigInt::from(b.m))));
    }
    let t = ctx.min(&thresholds)?.expect("fibres are nonempty");
    Ok(&one - &t)
}

/// Moduli-part multiplicity at the branch: `d_i + m_i - 1 - m_i d'`.
pub fn moduli_mult(branch: &BranchData, d_prime: &ExtReal) -> ExtReal {
    let m = branch.m_rational();
    let base = &branch.d + &ExtReal::integer(i64::from(branch.m) - 1);
    &base - &d_prime.scale(&m)
}

/// Discriminant and moduli multiplicities of every branch of a fibre.
pub fn fiber_moduli(fiber: &FiberData, ctx: &Context) -> Result<(ExtReal, Vec<ExtReal>), CurveError> {
    let d_prime = discriminant_mult(fiber, ctx)?;
    let mods = fiber.branches.iter().map(|b| moduli_mult(b, &d_prime)).collect();
    Ok((d_prime, mods))
}

/// Crepant pull-back of `d_base`: `d_i = m_i d_base - (m_i - 1)`.
pub fn crepant_pullback(ms: &[u32], d_base: &ExtReal) -> Result<FiberData, CurveError> {
    let branches = ms
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(CurveError::ZeroMultiplicity);
            }
            let d = &d_base.scale_int(i64::from(m)) - &ExtReal::integer(i64::from(m) - 1);
            BranchData::new(m, d)
        })
        .collect::<Result<Vec<_>, _>>()?;
    FiberData::new(branches)
}

pub fn lc_over_point(fiber: &FiberData, ctx: &Context) -> Result<bool, CurveError> {
    let one = ExtReal::one();
    for b in &fiber.branches {
        if !ctx.le(&b.d, &one)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn klt_over_point(fiber: &FiberData, ctx: &Context) -> Result<bool, CurveError> {
    let one = ExtReal::one();
    for b in &fiber.branches {
        if !ctx.lt(&b.d, &one)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Two stacked covers `X -> Y -> Z`.
///
/// Branches of `lower` fibres name the points of `Y` they represent; every
/// marked point of `upper` must be named exactly once. Boundary values on
/// `lower` are ignored: the boundary on `Y` is the discriminant of `upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub upper: CurveCover,
    pub lower: CurveCover,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityPoint {
    pub point: String,
    /// Discriminant of the composite cover.
    pub composite: ExtReal,
    /// Discriminant of the lower cover with boundary `D_Y`.
    pub via_lower: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityReport {
    pub holds: bool,
    pub points: Vec<TransitivityPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityWitness {
    pub base_point: String,
    /// Upstairs point of `Y`, if named.
    pub middle_point: Option<String>,
    pub branch: usize,
    pub composite: ExtReal,
    pub upper: ExtReal,
    pub lower: ExtReal,
    pub m_upper: u32,
}

impl AdditivityWitness {
    pub fn holds(&self) -> bool {
        let rhs = &self.upper + &self.lower.scale_int(i64::from(self.m_upper));
        self.composite == rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityReport {
    pub holds: bool,
    pub witnesses: Vec<AdditivityWitness>,
    pub first_failure: Option<usize>,
}

impl Tower {
    pub fn new(upper: CurveCover, lower: CurveCover) -> Result<Self, CurveError> {
        let tower = Tower { upper, lower };
        tower.validate()?;
        Ok(tower)
    }

    fn validate(&self) -> Result<(), CurveError> {
        let mut named = BTreeSet::new();
        for fiber in self.lower.fibers.values() {
            for b in &fiber.branches {
                if let Some(y) = &b.point {
                    if !named.insert(y.clone()) {
                        return Err(CurveError::TowerMismatch(alloc::format!(
                            "point `{y}` of the middle curve is named twice"
                        )));
                    }
                }
            }
        }
        for y in self.upper.fibers.keys() {
            if !named.contains(y) {
                return Err(CurveError::TowerMismatch(alloc::format!(
                    "marked point `{y}` of the middle curve lies over no marked base point"
                )));
            }
        }
        Ok(())
    }

    fn upper_fiber(&self, branch: &BranchData) -> Cow<'_, FiberData> {
        match &branch.point {
            Some(y) => self.upper.fiber(y),
            None => Cow::Owned(FiberData::etale(self.upper.degree)),
        }
    }

    /// The composite cover `X -> Z`.
    pub fn compose(&self) -> Result<CurveCover, CurveError> {
        self.validate()?;
        let mut fibers = BTreeMap::new();
        for (z, lower_fiber) in &self.lower.fibers {
            let mut branches = Vec::new();
            for lb in &lower_fiber.branches {
                for ub in self.upper_fiber(lb).branches() {
                    branches.push(BranchData {
                        m: ub.m * lb.m,
                        d: ub.d.clone(),
                        point: ub.point.clone(),
                    });
                }
            }
            fibers.insert(z.clone(), FiberData::new(branches)?);
        }
        CurveCover::new(self.upper.degree * self.lower.degree, fibers)
    }

    /// The lower fibre over `z` with boundary replaced by the discriminant of the upper cover.
    pub fn lower_with_discriminant(&self, z: &str, ctx: &Context) -> Result<FiberData, CurveError> {
        let fiber = self.lower.fiber(z);
        let branches = fiber
            .branches
            .iter()
            .map(|lb| {
                Ok(BranchData {
                    m: lb.m,
                    d: discriminant_mult(&self.upper_fiber(lb), ctx)?,
                    point: lb.point.clone(),
                })
            })
            .collect::<Result<Vec<_>, CurveError>>()?;
        FiberData::new(branches)
    }

    /// Compares both routes to the discriminant on `Z` at every marked base point.
    pub fn transitivity_check(&self, ctx: &Context) -> Result<TransitivityReport, CurveError> {
        let composite = self.compose()?;
        let mut points = Vec::new();
        for z in self.lower.fibers.keys() {
            let direct = discriminant_mult(&composite.fiber(z), ctx)?;
            let via_lower = discriminant_mult(&self.lower_with_discriminant(z, ctx)?, ctx)?;
            points.push(TransitivityPoint { point: z.clone(), composite: direct, via_lower });
        }
        let holds = points.iter().all(|p| p.composite == p.via_lower);
        Ok(TransitivityReport { holds, points })
    }

    /// Checks `M_{X/Z} = M_{X/Y} + m_upper * M_{Y/Z}` at every upstairs branch over marked base points.
    pub fn moduli_additivity_check(&self, ctx: &Context) -> Result<AdditivityReport, CurveError> {
        let composite = self.compose()?;
        let mut witnesses = Vec::new();
        for (z, lower_fiber) in &self.lower.fibers {
            let d_z = discriminant_mult(&composite.fiber(z), ctx)?;
            let lower_fiber_y = self.lower_with_discriminant(z, ctx)?;
            let d_z_lower = discriminant_mult(&lower_fiber_y, ctx)?;
            for (lb, lb_y) in lower_fiber.branches.iter().zip(lower_fiber_y.branches()) {
                let upper_fiber = self.upper_fiber(lb);
                let d_y = lb_y.d();
                let lower_mod = moduli_mult(lb_y, &d_z_lower);
                for (i, ub) in upper_fiber.branches().iter().enumerate() {
                    let comp_branch = BranchData { m: ub.m * lb.m, d: ub.d.clone(), point: None };
                    witnesses.push(AdditivityWitness {
                        base_point: z.clone(),
                        middle_point: lb.point.clone(),
                        branch: i,
                        composite: moduli_mult(&comp_branch, &d_z),
                        upper: moduli_mult(ub, d_y),
                        lower: lower_mod.clone(),
                        m_upper: ub.m,
                    });
                }
            }
        }
        let first_failure = witnesses.iter().position(|w| !w.holds());
        Ok(AdditivityReport { holds: first_failure.is_none(), witnesses, first_failure })
    }
}

/// Builds a single-fibre cover over the point `p`.
pub fn single_fiber_cover(point: &str, fiber: FiberData) -> Result<CurveCover, CurveError> {
    let degree = fiber.total_multiplicity();
    let mut fibers = BTreeMap::new();
    fibers.insert(point.to_string(), fiber);
    CurveCover::new(degree, fibers)
}

/// Lower-level fibre whose branches name the given middle points.
pub fn named_fiber(branches: &[(u32, &str)]) -> Result<FiberData, CurveError> {
    FiberData::new(
        branches
            .iter()
            .map(|&(m, y)| Ok(BranchData::new(m, ExtReal::zero())?.at(y)))
            .collect::<Result<Vec<_>, CurveError>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fib(branches: &[(u32, ExtReal)]) -> FiberData {
        FiberData::new(
            branches
                .iter()
                .map(|(m, d)| BranchData::new(*m, d.clone()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> ExtReal {
        ExtReal::ratio(n, d)
    }

    #[test]
    fn double_cover_without_boundary() {
        let ctx = Context::rational();
        let f = fib(&[(2, q(0, 1))]);
        assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q(1, 2));
        assert_eq!(discriminant_mult_oracle(&f, &ctx).unwrap(), q(1, 2));
    }

    #[test]
    fn identity_branch_keeps_boundary() {
        let ctx = Context::rational();
        for (n, d) in [(-3, 2), (0, 1), (2, 7), (1, 1)] {
            let f = fib(&[(1, q(n, d))]);
            assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q(n, d));
        }
    }

    #[test]
    fn mixed_fibre_takes_the_larger_ratio() {
        // max(3/4, 7/9)
        let ctx = Context::rational();
        let f = fib(&[(2, q(1, 2)), (3, q(1, 3))]);
        assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q(7, 9));
        assert_eq!(discriminant_mult_oracle(&f, &ctx).unwrap(), q(7, 9));
    }

    #[test]
    fn oracle_on_lc_boundary_and_rejection() {
        let ctx = Context::rational();
        assert_eq!(discriminant_mult_oracle(&fib(&[(1, q(1, 1))]), &ctx).unwrap(), q(1, 1));
        assert_eq!(
            discriminant_mult_oracle(&fib(&[(1, q(0, 1)), (2, q(3, 2))]), &ctx).unwrap_err(),
            CurveError::NotGlc { index: 1 }
        );
    }

    #[test]
    fn moduli_of_degree_three_fibre() {
        let ctx = Context::rational();
        let f = fib(&[(1, q(0, 1)), (2, q(0, 1))]);
        let (dp, mods) = fiber_moduli(&f, &ctx).unwrap();
        assert_eq!(dp, q(1, 2));
        assert_eq!(mods, vec![q(-1, 2), q(0, 1)]);
    }

    #[test]
    fn single_branch_has_no_moduli() {
        let ctx = Context::rational();
        for m in 1..=5 {
            let f = fib(&[(m, q(1, 3))]);
            let (_, mods) = fiber_moduli(&f, &ctx).unwrap();
            assert_eq!(mods, vec![ExtReal::zero()]);
        }
    }

    #[test]
    fn galois_fibre_has_no_moduli() {
        let ctx = Context::rational();
        let f = fib(&[(2, q(1, 3)), (2, q(1, 3))]);
        let (dp, mods) = fiber_moduli(&f, &ctx).unwrap();
        assert_eq!(dp, q(2, 3));
        assert!(mods.iter().all(ExtReal::is_zero));
    }

    #[test]
    fn crepant_pullbacks() {
        let ctx = Context::rational();
        assert_eq!(crepant_pullback(&[2], &q(1, 2)).unwrap(), fib(&[(2, q(0, 1))]));
        assert_eq!(crepant_pullback(&[1, 1], &q(2, 5)).unwrap(), fib(&[(1, q(2, 5)), (1, q(2, 5))]));
        assert_eq!(crepant_pullback(&[3], &q(1, 1)).unwrap(), fib(&[(3, q(1, 1))]));
        let f = crepant_pullback(&[1, 2, 3], &q(-1, 4)).unwrap();
        assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q(-1, 4));
    }

    #[test]
    fn lc_and_klt() {
        let ctx = Context::rational();
        let f = fib(&[(2, q(1, 1))]);
        assert!(lc_over_point(&f, &ctx).unwrap());
        assert!(!klt_over_point(&f, &ctx).unwrap());
        assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q(1, 1));

        let f = fib(&[(2, q(3, 2))]);
        assert!(!lc_over_point(&f, &ctx).unwrap());
        assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q(5, 4));

        let f = fib(&[(3, q(1, 2))]);
        assert!(klt_over_point(&f, &ctx).unwrap());
        assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q(5, 6));
    }

    #[test]
    fn degree_is_checked() {
        let mut fibers = BTreeMap::new();
        fibers.insert("p".into(), fib(&[(1, q(0, 1))]));
        assert!(matches!(CurveCover::new(2, fibers), Err(CurveError::DegreeMismatch { .. })));
        assert_eq!(BranchData::new(0, q(0, 1)).unwrap_err(), CurveError::ZeroMultiplicity);
        assert_eq!(FiberData::new(vec![]).unwrap_err(), CurveError::EmptyFiber);
    }

    fn six_to_one() -> Tower {
        let upper = single_fiber_cover("y", fib(&[(2, q(0, 1))])).unwrap();
        let lower = single_fiber_cover("z", named_fiber(&[(3, "y")]).unwrap()).unwrap();
        Tower::new(upper, lower).unwrap()
    }

    #[test]
    fn identity_tower() {
        let ctx = Context::rational();
        let t = Tower::new(CurveCover::identity(), CurveCover::identity()).unwrap();
        assert_eq!(t.compose().unwrap(), CurveCover::identity());
        assert!(t.transitivity_check(&ctx).unwrap().holds);
        assert!(t.moduli_additivity_check(&ctx).unwrap().holds);
    }

    #[test]
    fn six_to_one_tower() {
        let ctx = Context::rational();
        let t = six_to_one();
        let c = t.compose().unwrap();
        assert_eq!(c.degree(), 6);
        assert_eq!(c.fiber("z").branches()[0].m(), 6);
        assert_eq!(c.fiber("z").branches()[0].d(), &q(0, 1));
        let report = t.transitivity_check(&ctx).unwrap();
        assert!(report.holds);
        assert_eq!(report.points[0].composite, q(5, 6));
        assert_eq!(report.points[0].via_lower, q(5, 6));
        let add = t.moduli_additivity_check(&ctx).unwrap();
        assert!(add.holds);
        assert_eq!(add.witnesses.len(), 1);
    }

    #[test]
    fn tower_with_lower_identity_is_trivial() {
        let ctx = Context::rational();
        let upper = single_fiber_cover("y", fib(&[(1, q(1, 4)), (2, q(1, 2))])).unwrap();
        let lower = single_fiber_cover("z", named_fiber(&[(1, "y")]).unwrap()).unwrap();
        let t = Tower::new(upper, lower).unwrap();
        let add = t.moduli_additivity_check(&ctx).unwrap();
        assert!(add.holds);
        for w in &add.witnesses {
            assert_eq!(w.composite, w.upper);
            assert!(w.lower.is_zero());
        }
    }

    #[test]
    fn unnamed_upper_point_is_a_mismatch() {
        let upper = single_fiber_cover("y", fib(&[(2, q(0, 1))])).unwrap();
        let lower = single_fiber_cover("z", named_fiber(&[(3, "other")]).unwrap()).unwrap();
        assert!(matches!(Tower::new(upper, lower), Err(CurveError::TowerMismatch(_))));
    }

    #[test]
    fn twice_named_point_is_a_mismatch() {
        let upper = CurveCover::new(2, BTreeMap::new()).unwrap();
        let lower = single_fiber_cover("z", named_fiber(&[(1, "y"), (1, "y")]).unwrap()).unwrap();
        assert!(matches!(Tower::new(upper, lower), Err(CurveError::TowerMismatch(_))));
    }
}
