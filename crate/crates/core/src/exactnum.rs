//! Exact multiplicities of the form `q0 + sum(q_k * g_k)`.
//!
//! The `g_k` are named real generators declared inside a [`Context`]. The
//! generators are assumed to be linearly independent over the rationals
//! together with `1`, so two values are equal exactly when their rational
//! parts and coefficient maps agree. Strict order is decided by evaluating
//! the difference on interval enclosures of the generators, refining them
//! until zero is excluded or the refinement budget runs out.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use core::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Default number of refinement rounds a single comparison may spend.
pub const DEFAULT_REFINEMENT_BUDGET: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("values from different generator contexts were combined")]
    ContextMismatch,
    #[error("refinement budget of {budget} rounds exhausted before the order was decided")]
    PrecisionExhausted { budget: u32 },
    #[error("value is not rational")]
    NotRational,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has an empty enclosure (lo >= hi)")]
    EmptyEnclosure(String),
    #[error("refiner of generator `{0}` did not halve its enclosure")]
    RefinerContract(String),
    #[error("generator `{0}`: defining polynomial has no sign change on the enclosure")]
    NoSignChange(String),
    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.71"`.
pub fn parse_rational(text: &str) -> Result<BigRational, NumError> {
    let s = text.trim();
    let bad = || NumError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut digits = String::from(int_digits);
        digits.push_str(frac);
        let magnitude: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u8), frac.len());
        let value = BigRational::new(magnitude, scale);
        return Ok(if negative { -value } else { value });
    }
    let int: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(int))
}

/// Shorthand for `n/d` with machine integers.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Produces strictly tighter enclosures of one real generator.
///
/// Each call receives the current enclosure `(lo, hi)` and must return a
/// sub-interval whose width is at most half of `hi - lo`. The context
/// checks this and reports [`NumError::RefinerContract`] otherwise.
pub trait Refiner: Send + Sync {
    fn refine(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational);
}

impl<F> Refiner for F
where
    F: Fn(&BigRational, &BigRational) -> (BigRational, BigRational) + Send + Sync,
{
    fn refine(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        self(lo, hi)
    }
}

/// Bisection against a polynomial with a simple root in the enclosure.
#[derive(Debug, Clone)]
pub struct PolynomialRoot {
    /// Coefficients in ascending degree.
    coeffs: Vec<BigRational>,
}

impl PolynomialRoot {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        PolynomialRoot { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn sign(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }
}

impl Refiner for PolynomialRoot {
    fn refine(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(BigInt::from(2u8));
        let mid = (lo + hi) / &two;
        let at_lo = self.sign(lo);
        match self.sign(&mid) {
            // rational root: keep a centred interval of half the width
            Ordering::Equal => {
                let quarter = (hi - lo) / (&two * &two);
                (&mid - &quarter, &mid + &quarter)
            }
            s if s == at_lo => (mid, hi.clone()),
            _ => (lo.clone(), mid),
        }
    }
}

/// Declaration of a named real generator.
pub struct Generator {
    name: String,
    lo: BigRational,
    hi: BigRational,
    refiner: Box<dyn Refiner>,
    polynomial: Option<PolynomialRoot>,
}

impl Generator {
    pub fn new(
        name: impl Into<String>,
        lo: BigRational,
        hi: BigRational,
        refiner: Box<dyn Refiner>,
    ) -> Result<Self, NumError> {
        let name = name.into();
        if lo >= hi {
            return Err(NumError::EmptyEnclosure(name));
        }
        Ok(Generator { name, lo, hi, refiner, polynomial: None })
    }

    /// A root of the polynomial with ascending `coeffs` isolated by `(lo, hi)`.
    pub fn algebraic(
        name: impl Into<String>,
        coeffs: Vec<BigRational>,
        lo: BigRational,
        hi: BigRational,
    ) -> Result<Self, NumError> {
        let name = name.into();
        if lo >= hi {
            return Err(NumError::EmptyEnclosure(name));
        }
        let poly = PolynomialRoot::new(coeffs);
        let (a, b) = (poly.sign(&lo), poly.sign(&hi));
        if a == Ordering::Equal || b == Ordering::Equal || a == b {
            return Err(NumError::NoSignChange(name));
        }
        Ok(Generator {
            name,
            lo,
            hi,
            refiner: Box::new(poly.clone()),
            polynomial: Some(poly),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// Snapshot of one generator declaration, for serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub name: String,
    pub lo: BigRational,
    pub hi: BigRational,
    pub polynomial: Option<Vec<BigRational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextId(u64);

static NEXT_CONTEXT: AtomicU64 = AtomicU64::new(1);

struct Slot {
    name: String,
    refiner: Box<dyn Refiner>,
    polynomial: Option<PolynomialRoot>,
    initial: (BigRational, BigRational),
    enclosure: spin::Mutex<(BigRational, BigRational)>,
}

struct Inner {
    id: ContextId,
    slots: Vec<Slot>,
    refinements: AtomicU64,
}

/// A set of declared generators together with their cached enclosures.
///
/// Cloning is cheap and clones share the enclosure cache. Enclosures only
/// ever shrink, so concurrent comparisons observe monotonically tighter
/// intervals.
#[derive(Clone)]
pub struct Context {
    inner: Arc<Inner>,
    budget: u32,
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("id", &self.inner.id)
            .field("generators", &self.generator_names().collect::<Vec<_>>())
            .field("budget", &self.budget)
            .finish()
    }
}

impl Default for Context {
    fn default() -> Self {
        Context::rational()
    }
}

impl Context {
    /// A context without generators; only rational values live here.
    pub fn rational() -> Self {
        Context::new(Vec::new()).expect("empty context is valid")
    }

    pub fn new(generators: Vec<Generator>) -> Result<Self, NumError> {
        let mut slots: Vec<Slot> = Vec::with_capacity(generators.len());
        for g in generators {
            if slots.iter().any(|s| s.name == g.name) {
                return Err(NumError::DuplicateGenerator(g.name));
            }
            slots.push(Slot {
                name: g.name,
                refiner: g.refiner,
                polynomial: g.polynomial,
                initial: (g.lo.clone(), g.hi.clone()),
                enclosure: spin::Mutex::new((g.lo, g.hi)),
            });
        }
        let id = ContextId(NEXT_CONTEXT.fetch_add(1, AtomicOrdering::Relaxed));
        Ok(Context {
            inner: Arc::new(Inner { id, slots, refinements: AtomicU64::new(0) }),
            budget: DEFAULT_REFINEMENT_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u32) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn id(&self) -> ContextId {
        self.inner.id
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.inner.slots.iter().map(|s| s.name.as_str())
    }

    /// Declarations as originally supplied (initial enclosures).
    pub fn generator_info(&self) -> Vec<GeneratorInfo> {
        self.inner
            .slots
            .iter()
            .map(|s| GeneratorInfo {
                name: s.name.clone(),
                lo: s.initial.0.clone(),
                hi: s.initial.1.clone(),
                polynomial: s.polynomial.as_ref().map(|p| p.coeffs().to_vec()),
            })
            .collect()
    }

    /// Total refinement calls performed by this context so far.
    pub fn refinements(&self) -> u64 {
        self.inner.refinements.load(AtomicOrdering::Relaxed)
    }

    fn slot(&self, name: &str) -> Result<&Slot, NumError> {
        self.inner
            .slots
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| NumError::UnknownGenerator(name.to_string()))
    }

    /// Current enclosure of a generator.
    pub fn enclosure_of(&self, name: &str) -> Result<(BigRational, BigRational), NumError> {
        Ok(self.slot(name)?.enclosure.lock().clone())
    }

    /// The value `1 * g` for the generator called `name`.
    pub fn generator(&self, name: &str) -> Result<ExtReal, NumError> {
        self.slot(name)?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), BigRational::one());
        Ok(ExtReal { ctx: Some(self.id()), rational: BigRational::zero(), coeffs })
    }

    /// Builds `q0 + sum(q_k * g_k)` from named terms.
    pub fn value<'a, I>(&self, rational: BigRational, terms: I) -> Result<ExtReal, NumError>
    where
        I: IntoIterator<Item = (&'a str, BigRational)>,
    {
        let mut coeffs: BTreeMap<String, BigRational> = BTreeMap::new();
        for (name, q) in terms {
            self.slot(name)?;
            let entry = coeffs.entry(name.to_string()).or_insert_with(BigRational::zero);
            *entry += q;
        }
        Ok(ExtReal::from_parts(Some(self.id()), rational, coeffs))
    }

    fn check(&self, a: &ExtReal) -> Result<(), NumError> {
        match a.ctx {
            Some(id) if id != self.id() => Err(NumError::ContextMismatch),
            _ => Ok(()),
        }
    }

    fn refine(&self, name: &str) -> Result<(), NumError> {
        let slot = self.slot(name)?;
        let mut enc = slot.enclosure.lock();
        let (lo, hi) = (&enc.0, &enc.1);
        let (nlo, nhi) = slot.refiner.refine(lo, hi);
        let two = BigRational::from_integer(BigInt::from(2u8));
        let ok = nlo < nhi && &nlo >= lo && &nhi <= hi && (&nhi - &nlo) * &two <= hi - lo;
        if !ok {
            return Err(NumError::RefinerContract(slot.name.clone()));
        }
        *enc = (nlo, nhi);
        self.inner.refinements.fetch_add(1, AtomicOrdering::Relaxed);
        Ok(())
    }

    /// Interval enclosure of `a` from the current generator enclosures.
    pub fn enclose(&self, a: &ExtReal) -> Result<(BigRational, BigRational), NumError> {
        self.check(a)?;
        let mut lo = a.rational.clone();
        let mut hi = a.rational.clone();
        for (name, q) in &a.coeffs {
            let (glo, ghi) = self.enclosure_of(name)?;
            if q.is_positive() {
                lo += q * glo;
                hi += q * ghi;
            } else {
                lo += q * ghi;
                hi += q * glo;
            }
        }
        Ok((lo, hi))
    }

    /// Sign of `a`. Zero is decided symbolically; strict signs by refinement.
    pub fn sign(&self, a: &ExtReal) -> Result<Ordering, NumError> {
        self.check(a)?;
        if a.coeffs.is_empty() {
            return Ok(a.rational.cmp(&BigRational::zero()));
        }
        let zero = BigRational::zero();
        for round in 0..=self.budget {
            let (lo, hi) = self.enclose(a)?;
            if lo > zero {
                return Ok(Ordering::Greater);
            }
            if hi < zero {
                return Ok(Ordering::Less);
            }
            if round == self.budget {
                break;
            }
            for name in a.coeffs.keys() {
                self.refine(name)?;
            }
        }
        Err(NumError::PrecisionExhausted { budget: self.budget })
    }

    pub fn compare(&self, a: &ExtReal, b: &ExtReal) -> Result<Ordering, NumError> {
        if a.coeffs.is_empty() && b.coeffs.is_empty() {
            self.check(a)?;
            self.check(b)?;
            return Ok(a.rational.cmp(&b.rational));
        }
        self.sign(&a.try_sub(b)?)
    }

    pub fn lt(&self, a: &ExtReal, b: &ExtReal) -> Result<bool, NumError> {
        Ok(self.compare(a, b)? == Ordering::Less)
    }

    pub fn le(&self, a: &ExtReal, b: &ExtReal) -> Result<bool, NumError> {
        Ok(self.compare(a, b)? != Ordering::Greater)
    }

    /// Largest element; `None` for an empty iterator.
    pub fn max<'a, I>(&self, values: I) -> Result<Option<ExtReal>, NumError>
    where
        I: IntoIterator<Item = &'a ExtReal>,
    {
        let mut best: Option<&ExtReal> = None;
        for v in values {
            best = match best {
                Some(b) if self.compare(v, b)? != Ordering::Greater => Some(b),
                _ => Some(v),
            };
        }
        Ok(best.cloned())
    }

    /// Smallest element; `None` for an empty iterator.
    pub fn min<'a, I>(&self, values: I) -> Result<Option<ExtReal>, NumError>
    where
        I: IntoIterator<Item = &'a ExtReal>,
    {
        let mut best: Option<&ExtReal> = None;
        for v in values {
            best = match best {
                Some(b) if self.compare(v, b)? != Ordering::Less => Some(b),
                _ => Some(v),
            };
        }
        Ok(best.cloned())
    }
}

/// `q0 + sum(q_k * g_k)` in canonical form (no zero coefficient stored).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtReal {
    ctx: Option<ContextId>,
    rational: BigRational,
    coeffs: BTreeMap<String, BigRational>,
}

impl Default for ExtReal {
    fn default() -> Self {
        ExtReal::zero()
    }
}

impl From<BigRational> for ExtReal {
    fn from(q: BigRational) -> Self {
        ExtReal::rational(q)
    }
}

impl From<i64> for ExtReal {
    fn from(n: i64) -> Self {
        ExtReal::integer(n)
    }
}

impl ExtReal {
    fn from_parts(
        ctx: Option<ContextId>,
        rational: BigRational,
        mut coeffs: BTreeMap<String, BigRational>,
    ) -> Self {
        coeffs.retain(|_, q| !q.is_zero());
        let ctx = if coeffs.is_empty() { None } else { ctx };
        ExtReal { ctx, rational, coeffs }
    }

    pub fn rational(q: BigRational) -> Self {
        ExtReal { ctx: None, rational: q, coeffs: BTreeMap::new() }
    }

    pub fn integer(n: i64) -> Self {
        ExtReal::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExtReal::rational(ratio(n, d))
    }

    pub fn zero() -> Self {
        ExtReal::integer(0)
    }

    pub fn one() -> Self {
        ExtReal::integer(1)
    }

    pub fn context(&self) -> Option<ContextId> {
        self.ctx
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&str, &BigRational)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn coeff(&self, name: &str) -> BigRational {
        self.coeffs.get(name).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.rational.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    /// Positive denominator of a rational value.
    pub fn denominator(&self) -> Result<BigInt, NumError> {
        self.as_rational()
            .map(|q| q.denom().clone())
            .ok_or(NumError::NotRational)
    }

    fn join_ctx(&self, other: &ExtReal) -> Result<Option<ContextId>, NumError> {
        match (self.ctx, other.ctx) {
            (Some(a), Some(b)) if a != b => Err(NumError::ContextMismatch),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn combine(&self, other: &ExtReal, sign: i8) -> Result<ExtReal, NumError> {
        let ctx = self.join_ctx(other)?;
        let mut coeffs = self.coeffs.clone();
        for (name, q) in &other.coeffs {
            let entry = coeffs.entry(name.clone()).or_insert_with(BigRational::zero);
            if sign > 0 {
                *entry += q;
            } else {
                *entry -= q;
            }
        }
        let rational = if sign > 0 {
            &self.rational + &other.rational
        } else {
            &self.rational - &other.rational
        };
        Ok(ExtReal::from_parts(ctx, rational, coeffs))
    }

    pub fn try_add(&self, other: &ExtReal) -> Result<ExtReal, NumError> {
        self.combine(other, 1)
    }

    pub fn try_sub(&self, other: &ExtReal) -> Result<ExtReal, NumError> {
        self.combine(other, -1)
    }

    pub fn scale(&self, q: &BigRational) -> ExtReal {
        let coeffs = self.coeffs.iter().map(|(k, v)| (k.clone(), v * q)).collect();
        ExtReal::from_parts(self.ctx, &self.rational * q, coeffs)
    }

    pub fn scale_int(&self, n: i64) -> ExtReal {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }
}

fn expect_same(r: Result<ExtReal, NumError>) -> ExtReal {
    match r {
        Ok(v) => v,
        Err(e) => panic!("ExtReal arithmetic: {e}"),
    }
}

// Operator forms panic on context mismatch; use `try_add`/`try_sub` to handle it.
impl Add<&ExtReal> for &ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: &ExtReal) -> ExtReal {
        expect_same(self.try_add(rhs))
    }
}

impl Sub<&ExtReal> for &ExtReal {
    type Output = ExtReal;
    fn sub(self, rhs: &ExtReal) -> ExtReal {
        expect_same(self.try_sub(rhs))
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        &self + &rhs
    }
}

impl Sub for ExtReal {
    type Output = ExtReal;
    fn sub(self, rhs: ExtReal) -> ExtReal {
        &self - &rhs
    }
}

impl AddAssign<&ExtReal> for ExtReal {
    fn add_assign(&mut self, rhs: &ExtReal) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ExtReal> for ExtReal {
    fn sub_assign(&mut self, rhs: &ExtReal) {
        *self = &*self - rhs;
    }
}

impl Neg for &ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        self.scale_int(-1)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        -&self
    }
}

impl fmt::Display for ExtReal {
    /// `3/4`, or `1 - 1·sqrt2_half + 1·sqrt3_third`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "{}", self.rational);
        }
        let mut first = true;
        if !self.rational.is_zero() {
            write!(f, "{}", self.rational)?;
            first = false;
        }
        for (name, q) in &self.coeffs {
            let body = format!("{}·{}", q.abs(), name);
            match (first, q.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example5_ctx() -> Context {
        Context::new(alloc::vec![
            Generator::algebraic(
                "sqrt2_half",
                alloc::vec![ratio(-1, 1), ratio(0, 1), ratio(2, 1)],
                ratio(70, 100),
                ratio(71, 100),
            )
            .unwrap(),
            Generator::algebraic(
                "sqrt3_third",
                alloc::vec![ratio(-1, 1), ratio(0, 1), ratio(3, 1)],
                ratio(57, 100),
                ratio(58, 100),
            )
            .unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn halves_sum_to_one() {
        assert_eq!(ExtReal::ratio(1, 2) + ExtReal::ratio(1, 2), ExtReal::one());
    }

    #[test]
    fn generator_cancels() {
        let ctx = example5_ctx();
        let d1 = ctx.generator("sqrt2_half").unwrap();
        let sum = &d1 + &(&ExtReal::one() - &d1);
        assert_eq!(sum, ExtReal::one());
        assert!(sum.is_rational());
        assert_eq!(sum.context(), None);
    }

    #[test]
    fn bookkeeping_of_one_plus_d2_minus_d1() {
        let ctx = example5_ctx();
        let d1 = ctx.generator("sqrt2_half").unwrap();
        let d2 = ctx.generator("sqrt3_third").unwrap();
        let v = &(&ExtReal::one() + &d2) - &d1;
        assert_eq!(v.rational_part(), &ratio(1, 1));
        assert_eq!(v.coeff("sqrt2_half"), ratio(-1, 1));
        assert_eq!(v.coeff("sqrt3_third"), ratio(1, 1));
        assert_eq!(v.to_string(), "1 - 1·sqrt2_half + 1·sqrt3_third");
    }

    #[test]
    fn rational_comparison() {
        let ctx = Context::rational();
        assert_eq!(
            ctx.compare(&ExtReal::ratio(3, 4), &ExtReal::ratio(1, 2)).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn symbolic_equality_needs_no_refinement() {
        let ctx = example5_ctx();
        let d1 = ctx.generator("sqrt2_half").unwrap();
        let before = ctx.refinements();
        assert_eq!(ctx.compare(&d1, &d1.clone()).unwrap(), Ordering::Equal);
        assert_eq!(ctx.refinements(), before);
    }

    #[test]
    fn disjoint_enclosures_decide_without_refinement() {
        let ctx = example5_ctx();
        let d1 = ctx.generator("sqrt2_half").unwrap();
        let d2 = ctx.generator("sqrt3_third").unwrap();
        assert_eq!(ctx.compare(&d1, &d2).unwrap(), Ordering::Greater);
        assert_eq!(ctx.compare(&d2, &d1).unwrap(), Ordering::Less);
        assert_eq!(ctx.refinements(), 0);
    }

    #[test]
    fn close_values_force_refinement() {
        let ctx = example5_ctx();
        let d1 = ctx.generator("sqrt2_half").unwrap();
        // sqrt(2)/2 = 0.70710678..., so 7071/10000 < d1 < 7072/10000
        let below = ExtReal::ratio(7071, 10000);
        let above = ExtReal::ratio(7072, 10000);
        assert_eq!(ctx.compare(&d1, &below).unwrap(), Ordering::Greater);
        assert_eq!(ctx.compare(&d1, &above).unwrap(), Ordering::Less);
        assert!(ctx.refinements() > 0);
        let (lo, hi) = ctx.enclosure_of("sqrt2_half").unwrap();
        assert!(lo > ratio(7071, 10000) && hi < ratio(7072, 10000));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let ctx = example5_ctx().with_budget(3);
        let d1 = ctx.generator("sqrt2_half").unwrap();
        let err = ctx.compare(&d1, &ExtReal::ratio(70710678, 100000000)).unwrap_err();
        assert_eq!(err, NumError::PrecisionExhausted { budget: 3 });
    }

    #[test]
    fn rationality_and_denominators() {
        let ctx = example5_ctx();
        let d1 = ctx.generator("sqrt2_half").unwrap();
        let q = ExtReal::ratio(3, 4);
        assert!(q.is_rational());
        assert_eq!(q.denominator().unwrap(), BigInt::from(4));
        assert!(!d1.is_rational());
        assert_eq!(d1.denominator(), Err(NumError::NotRational));
        let back = &(&d1 - &d1) + &ExtReal::ratio(2, 3);
        assert!(back.is_rational());
        assert_eq!(back.denominator().unwrap(), BigInt::from(3));
    }

    #[test]
    fn mixing_contexts_fails() {
        let a = example5_ctx();
        let b = example5_ctx();
        let x = a.generator("sqrt2_half").unwrap();
        let y = b.generator("sqrt2_half").unwrap();
        assert_eq!(x.try_add(&y), Err(NumError::ContextMismatch));
        assert_eq!(a.compare(&x, &y), Err(NumError::ContextMismatch));
        // rationals are context free
        assert!(x.try_add(&ExtReal::one()).is_ok());
    }

    #[test]
    fn unknown_generator() {
        let ctx = Context::rational();
        assert_eq!(
            ctx.generator("pi").unwrap_err(),
            NumError::UnknownGenerator("pi".into())
        );
    }

    #[test]
    fn polynomial_declaration_checks_sign_change() {
        let err = Generator::algebraic(
            "bad",
            alloc::vec![ratio(-1, 1), ratio(0, 1), ratio(2, 1)],
            ratio(8, 10),
            ratio(9, 10),
        )
        .err()
        .unwrap();
        assert_eq!(err, NumError::NoSignChange("bad".into()));
        assert!(matches!(
            Generator::algebraic("e", alloc::vec![], ratio(1, 1), ratio(1, 1)),
            Err(NumError::EmptyEnclosure(_))
        ));
    }

    #[test]
    fn lazy_refiner_is_rejected() {
        let g = Generator::new(
            "lazy",
            ratio(0, 1),
            ratio(1, 1),
            Box::new(|lo: &BigRational, hi: &BigRational| (lo.clone(), hi.clone())),
        )
        .unwrap();
        let ctx = Context::new(alloc::vec![g]).unwrap();
        let x = ctx.generator("lazy").unwrap();
        assert_eq!(
            ctx.compare(&x, &ExtReal::ratio(1, 2)),
            Err(NumError::RefinerContract("lazy".into()))
        );
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), ratio(-2, 1));
        assert_eq!(parse_rational("0.70").unwrap(), ratio(7, 10));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }
}
