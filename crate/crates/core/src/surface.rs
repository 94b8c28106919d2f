//! Combinatorial nonsingular surfaces with SNC divisor configurations.
//!
//! A model records prime divisors, named points (crossings of two
//! divisors, declared free points on one divisor, declared points off every
//! divisor) and the history of point blowups. Only incidence is stored.
//!
//! b-divisors are represented by their traces on a finite exploration tree:
//! starting from a model, every crossing point is blown up, then every
//! crossing of the result, and so on to a fixed depth.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::exactnum::{ExtReal, NumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("no such point: {0}")]
    NoSuchPoint(PointId),
    #[error("no such divisor: {0}")]
    NoSuchDivisor(DivId),
    #[error("a divisor cannot cross itself ({0})")]
    SelfCrossing(DivId),
    #[error("b-divisor traces live on different trees (first difference at {0})")]
    TreeMismatch(DivId),
    #[error("trace has no value on divisor {0}")]
    TraceNotTotal(DivId),
    #[error("recursive and total-transform codiscrepancies disagree on {div}: {recursive} vs {total}")]
    RouteMismatch { div: DivId, recursive: Box<ExtReal>, total: Box<ExtReal> },
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub u32);

impl fmt::Display for DivId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D#{}", self.0)
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Original,
    /// Created by the blowup recorded at this index of the model's tree.
    Exceptional { node: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDiv {
    pub id: DivId,
    pub name: String,
    pub origin: Origin,
}

/// Where a named point sits in the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    /// Transversal crossing of two distinct divisors, stored with the smaller id first.
    Crossing(DivId, DivId),
    /// A point on exactly one divisor.
    Free(DivId),
    /// A point on no divisor.
    Off,
}

impl Site {
    pub fn divisors(&self) -> impl Iterator<Item = DivId> {
        let (a, b) = match *self {
            Site::Crossing(a, b) => (Some(a), Some(b)),
            Site::Free(a) => (Some(a), None),
            Site::Off => (None, None),
        };
        a.into_iter().chain(b)
    }

    pub fn contains(&self, div: DivId) -> bool {
        self.divisors().any(|d| d == div)
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self, Site::Crossing(..))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub id: PointId,
    pub name: String,
    pub site: Site,
}

/// One recorded blowup: the centre as it was, and the divisor it created.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupNode {
    pub point: Point,
    pub exceptional: DivId,
    /// The earlier blowup whose exceptional divisor contained the centre, if any.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SncModel {
    divisors: Vec<PrimeDiv>,
    points: BTreeMap<PointId, Point>,
    tree: Vec<BlowupNode>,
    next_point: u32,
}

impl SncModel {
    pub fn new() -> Self {
        SncModel::default()
    }

    pub fn add_divisor(&mut self, name: impl Into<String>) -> DivId {
        let id = DivId(self.divisors.len() as u32);
        self.divisors.push(PrimeDiv { id, name: name.into(), origin: Origin::Original });
        id
    }

    fn push_point(&mut self, name: String, site: Site) -> PointId {
        let id = PointId(self.next_point);
        self.next_point += 1;
        self.points.insert(id, Point { id, name, site });
        id
    }

    fn check_div(&self, d: DivId) -> Result<(), SurfaceError> {
        if (d.0 as usize) < self.divisors.len() {
            Ok(())
        } else {
            Err(SurfaceError::NoSuchDivisor(d))
        }
    }

    pub fn add_crossing(&mut self, a: DivId, b: DivId, name: impl Into<String>) -> Result<PointId, SurfaceError> {
        self.check_div(a)?;
        self.check_div(b)?;
        if a == b {
            return Err(SurfaceError::SelfCrossing(a));
        }
        let site = if a < b { Site::Crossing(a, b) } else { Site::Crossing(b, a) };
        Ok(self.push_point(name.into(), site))
    }

    pub fn add_free_point(&mut self, on: DivId, name: impl Into<String>) -> Result<PointId, SurfaceError> {
        self.check_div(on)?;
        Ok(self.push_point(name.into(), Site::Free(on)))
    }

    pub fn add_off_point(&mut self, name: impl Into<String>) -> PointId {
        self.push_point(name.into(), Site::Off)
    }

    pub fn divisors(&self) -> &[PrimeDiv] {
        &self.divisors
    }

    pub fn divisor(&self, id: DivId) -> Result<&PrimeDiv, SurfaceError> {
        self.divisors.get(id.0 as usize).ok_or(SurfaceError::NoSuchDivisor(id))
    }

    pub fn divisor_by_name(&self, name: &str) -> Option<DivId> {
        self.divisors.iter().find(|d| d.name == name).map(|d| d.id)
    }

    pub fn divisor_ids(&self) -> impl Iterator<Item = DivId> + '_ {
        self.divisors.iter().map(|d| d.id)
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.points.values()
    }

    pub fn point(&self, id: PointId) -> Result<&Point, SurfaceError> {
        self.points.get(&id).ok_or(SurfaceError::NoSuchPoint(id))
    }

    pub fn point_by_name(&self, name: &str) -> Option<PointId> {
        self.points.values().find(|p| p.name == name).map(|p| p.id)
    }

    pub fn crossings(&self) -> impl Iterator<Item = &Point> {
        self.points.values().filter(|p| p.site.is_crossing())
    }

    /// Crossing points of two divisors, in id order.
    pub fn crossings_between(&self, a: DivId, b: DivId) -> impl Iterator<Item = &Point> {
        self.crossings().filter(move |p| a != b && p.site.contains(a) && p.site.contains(b))
    }

    pub fn cross(&self, a: DivId, b: DivId) -> bool {
        self.crossings_between(a, b).next().is_some()
    }

    pub fn tree(&self) -> &[BlowupNode] {
        &self.tree
    }

    /// Blows up a recorded point, returning the new model and its exceptional divisor.
    pub fn blow_up(&self, point: PointId) -> Result<(SncModel, DivId), SurfaceError> {
        let mut next = self.clone();
        let (e, _) = next.blow_up_in_place(point)?;
        Ok((next, e))
    }

    /// Blows up `point` in place; returns the exceptional divisor and the new points on it.
    pub fn blow_up_in_place(&mut self, point: PointId) -> Result<(DivId, Vec<PointId>), SurfaceError> {
        let centre = self.points.remove(&point).ok_or(SurfaceError::NoSuchPoint(point))?;
        let node = self.tree.len();
        let e = DivId(self.divisors.len() as u32);
        let e_name = format!("E{}", node + 1);
        self.divisors.push(PrimeDiv { id: e, name: e_name.clone(), origin: Origin::Exceptional { node } });
        let parent = centre
            .site
            .divisors()
            .filter_map(|d| match self.divisors[d.0 as usize].origin {
                Origin::Exceptional { node } => Some(node),
                Origin::Original => None,
            })
            .max();
        let mut fresh = Vec::new();
        for d in centre.site.divisors() {
            let name = format!("{}^{}", self.divisors[d.0 as usize].name, e_name);
            fresh.push(self.push_point(name, Site::Crossing(d, e)));
        }
        self.tree.push(BlowupNode { point: centre, exceptional: e, parent });
        Ok((e, fresh))
    }

    /// Checks the SNC bookkeeping constructively.
    pub fn validate(&self) -> Result<(), SurfaceError> {
        for (i, d) in self.divisors.iter().enumerate() {
            debug_assert_eq!(d.id.0 as usize, i);
        }
        for p in self.points.values() {
            for d in p.site.divisors() {
                self.check_div(d)?;
            }
            if let Site::Crossing(a, b) = p.site {
                if a >= b {
                    return Err(SurfaceError::SelfCrossing(a));
                }
            }
        }
        for node in &self.tree {
            if self.points.contains_key(&node.point.id) {
                return Err(SurfaceError::NoSuchPoint(node.point.id));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// 0 for divisors of the starting model, `k` for exceptionals created at exploration level `k`.
    pub level: u32,
    pub mult: ExtReal,
}

/// A finite assignment of multiplicities to the divisors of a model or exploration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BDivTrace {
    depth: u32,
    entries: BTreeMap<DivId, TraceEntry>,
}

impl BDivTrace {
    /// A depth-0 trace that must be total on the model's divisors.
    pub fn on_model(model: &SncModel, mults: BTreeMap<DivId, ExtReal>) -> Result<Self, SurfaceError> {
        for id in model.divisor_ids() {
            if !mults.contains_key(&id) {
                return Err(SurfaceError::TraceNotTotal(id));
            }
        }
        let entries = mults
            .into_iter()
            .map(|(id, mult)| (id, TraceEntry { level: 0, mult }))
            .collect();
        Ok(BDivTrace { depth: 0, entries })
    }

    pub fn from_fn(model: &SncModel, mut f: impl FnMut(DivId) -> ExtReal) -> Self {
        let entries = model
            .divisor_ids()
            .map(|id| (id, TraceEntry { level: 0, mult: f(id) }))
            .collect();
        BDivTrace { depth: 0, entries }
    }

    /// A trace from explicit `(divisor, level, multiplicity)` entries.
    pub fn leveled(entries: impl IntoIterator<Item = (DivId, u32, ExtReal)>) -> Self {
        let mut out = BDivTrace::default();
        for (div, level, mult) in entries {
            out.insert(div, level, mult);
        }
        out
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, div: DivId) -> Option<&TraceEntry> {
        self.entries.get(&div)
    }

    pub fn mult(&self, div: DivId) -> Result<&ExtReal, SurfaceError> {
        self.entries.get(&div).map(|e| &e.mult).ok_or(SurfaceError::TraceNotTotal(div))
    }

    pub fn iter(&self) -> impl Iterator<Item = (DivId, &TraceEntry)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    fn insert(&mut self, div: DivId, level: u32, mult: ExtReal) {
        self.depth = self.depth.max(level);
        self.entries.insert(div, TraceEntry { level, mult });
    }

    /// Entrywise sum of two traces on the same tree.
    pub fn try_add(&self, other: &BDivTrace) -> Result<BDivTrace, SurfaceError> {
        let mut out = BDivTrace { depth: self.depth.max(other.depth), entries: BTreeMap::new() };
        for (id, e) in &self.entries {
            let o = other.entries.get(id).ok_or(SurfaceError::TreeMismatch(*id))?;
            out.entries.insert(*id, TraceEntry { level: e.level, mult: e.mult.try_add(&o.mult)? });
        }
        if let Some(id) = other.entries.keys().find(|k| !self.entries.contains_key(k)) {
            return Err(SurfaceError::TreeMismatch(*id));
        }
        Ok(out)
    }
}

/// An exceptional divisor of an exploration and the point it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreNode {
    pub exceptional: DivId,
    pub point: Point,
    pub level: u32,
    /// The point of the starting model this node lies over.
    pub root: PointId,
}

/// The depth-`k` tree obtained by repeatedly blowing up every crossing.
#[derive(Debug, Clone)]
pub struct Exploration {
    model: SncModel,
    base_divisors: usize,
    nodes: Vec<ExploreNode>,
    depth: u32,
}

impl Exploration {
    /// The model after all blowups of the exploration.
    pub fn model(&self) -> &SncModel {
        &self.model
    }

    pub fn nodes(&self) -> &[ExploreNode] {
        &self.nodes
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn base_divisors(&self) -> impl Iterator<Item = DivId> {
        (0..self.base_divisors as u32).map(DivId)
    }

    pub fn is_base(&self, div: DivId) -> bool {
        (div.0 as usize) < self.base_divisors
    }
}

/// Explores `model` to `depth`. At the first level declared free and off
/// points are blown up as well when `expand_declared` is set; deeper levels
/// expand crossings only.
pub fn explore(model: &SncModel, depth: u32, expand_declared: bool) -> Exploration {
    let mut current = model.clone();
    let mut roots: BTreeMap<PointId, PointId> = model.points().map(|p| (p.id, p.id)).collect();
    let mut nodes = Vec::new();
    for level in 1..=depth {
        let targets: Vec<PointId> = current
            .points()
            .filter(|p| p.site.is_crossing() || (level == 1 && expand_declared))
            .map(|p| p.id)
            .collect();
        for pid in targets {
            let point = current.point(pid).expect("listed above").clone();
            let root = roots[&pid];
            let (e, fresh) = current.blow_up_in_place(pid).expect("point exists");
            for f in fresh {
                roots.insert(f, root);
            }
            nodes.push(ExploreNode { exceptional: e, point, level, root });
        }
    }
    Exploration { model: current, base_divisors: model.divisors().len(), nodes, depth }
}

/// Codiscrepancy of a single blowup: the sum of the multiplicities through the point, minus 1.
pub fn codiscrepancy_step(model: &SncModel, parent: &BDivTrace, point: PointId) -> Result<ExtReal, SurfaceError> {
    let p = model.point(point)?;
    let mut acc = ExtReal::integer(-1);
    for d in p.site.divisors() {
        acc = acc.try_add(parent.mult(d)?)?;
    }
    Ok(acc)
}

fn check_total(expl: &Exploration, trace: &BDivTrace) -> Result<(), SurfaceError> {
    for d in expl.base_divisors() {
        trace.mult(d)?;
    }
    Ok(())
}

fn extend_by(
    expl: &Exploration,
    trace: &BDivTrace,
    shift: i64,
) -> Result<BDivTrace, SurfaceError> {
    check_total(expl, trace)?;
    let mut out = BDivTrace::default();
    for d in expl.base_divisors() {
        out.insert(d, 0, trace.mult(d)?.clone());
    }
    for node in &expl.nodes {
        let mut acc = ExtReal::integer(shift);
        for d in node.point.site.divisors() {
            acc = acc.try_add(out.mult(d)?)?;
        }
        out.insert(node.exceptional, node.level, acc);
    }
    out.depth = expl.depth;
    Ok(out)
}

/// Codiscrepancy b-divisor by the one-step recursion.
pub fn codiscrepancy_recursive(expl: &Exploration, trace: &BDivTrace) -> Result<BDivTrace, SurfaceError> {
    extend_by(expl, trace, -1)
}

/// Pull-back closure: every exceptional gets the multiplicity of the total transform.
pub fn cartier_closure(expl: &Exploration, trace: &BDivTrace) -> Result<BDivTrace, SurfaceError> {
    extend_by(expl, trace, 0)
}

/// Codiscrepancy b-divisor by pulling back `K` and the boundary through the whole tower.
///
/// For every divisor `F` of the explored model this tracks the integer
/// coefficient of `F` in the total transform of each starting divisor, and
/// the coefficient of `F` in the relative canonical divisor; the value is
/// `sum_C d_C coef_C(F) - k_F`.
pub fn codiscrepancy_total_transform(expl: &Exploration, trace: &BDivTrace) -> Result<BDivTrace, SurfaceError> {
    check_total(expl, trace)?;
    let base = expl.base_divisors;
    let mut coef: BTreeMap<DivId, Vec<i64>> = BTreeMap::new();
    let mut canon: BTreeMap<DivId, i64> = BTreeMap::new();
    for d in expl.base_divisors() {
        let mut v = alloc::vec![0i64; base];
        v[d.0 as usize] = 1;
        coef.insert(d, v);
        canon.insert(d, 0);
    }
    for node in &expl.nodes {
        let mut v = alloc::vec![0i64; base];
        let mut k = 1i64;
        for d in node.point.site.divisors() {
            for (acc, c) in v.iter_mut().zip(&coef[&d]) {
                *acc += c;
            }
            k += canon[&d];
        }
        coef.insert(node.exceptional, v);
        canon.insert(node.exceptional, k);
    }
    let mut levels: BTreeMap<DivId, u32> = expl.base_divisors().map(|d| (d, 0)).collect();
    for node in &expl.nodes {
        levels.insert(node.exceptional, node.level);
    }
    let mut out = BDivTrace::default();
    for (div, v) in &coef {
        let mut acc = ExtReal::integer(-canon[div]);
        for (c_idx, &c) in v.iter().enumerate() {
            if c != 0 {
                acc = acc.try_add(&trace.mult(DivId(c_idx as u32))?.scale_int(c))?;
            }
        }
        if expl.is_base(*div) {
            // strict transforms keep their boundary multiplicity
            acc = trace.mult(*div)?.clone();
        }
        out.insert(*div, levels[div], acc);
    }
    out.depth = expl.depth;
    Ok(out)
}

/// Codiscrepancy b-divisor on an existing exploration, computed by both routes.
pub fn codiscrepancy_on(expl: &Exploration, trace: &BDivTrace) -> Result<BDivTrace, SurfaceError> {
    let recursive = codiscrepancy_recursive(expl, trace)?;
    let total = codiscrepancy_total_transform(expl, trace)?;
    for (id, e) in recursive.iter() {
        let t = total.get(id).ok_or(SurfaceError::TreeMismatch(id))?;
        if t.mult != e.mult {
            return Err(SurfaceError::RouteMismatch { div: id, recursive: Box::new(e.mult.clone()), total: Box::new(t.mult.clone()) });
        }
    }
    Ok(recursive)
}

/// `B(model, trace)` on the depth-`depth` crossing tree.
pub fn codiscrepancy_bdiv(model: &SncModel, trace: &BDivTrace, depth: u32) -> Result<BDivTrace, SurfaceError> {
    codiscrepancy_on(&explore(model, depth, false), trace)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub div: DivId,
    pub level: u32,
    pub left: ExtReal,
    pub right: ExtReal,
}

/// Exact comparison up to `depth`; returns the shallowest differing divisor.
pub fn bdiv_equal(a: &BDivTrace, b: &BDivTrace, depth: u32) -> Result<Option<Divergence>, SurfaceError> {
    let keep = |t: &BDivTrace| -> BTreeMap<DivId, TraceEntry> {
        t.entries.iter().filter(|(_, e)| e.level <= depth).map(|(k, v)| (*k, v.clone())).collect()
    };
    let (ka, kb) = (keep(a), keep(b));
    if let Some(id) = ka.keys().find(|k| !kb.contains_key(k)).or_else(|| kb.keys().find(|k| !ka.contains_key(k))) {
        return Err(SurfaceError::TreeMismatch(*id));
    }
    let mut first: Option<Divergence> = None;
    for (id, ea) in &ka {
        let eb = &kb[id];
        if ea.mult != eb.mult {
            let better = first.as_ref().is_none_or(|f| ea.level < f.level);
            if better {
                first = Some(Divergence { div: *id, level: ea.level, left: ea.mult.clone(), right: eb.mult.clone() });
            }
        }
    }
    Ok(first)
}

/// Forgets exceptional multiplicities: the trace on the original divisors.
pub fn pushforward_trace(model: &SncModel, trace: &BDivTrace) -> Result<BDivTrace, SurfaceError> {
    let mut out = BDivTrace::default();
    for d in model.divisors().iter().filter(|d| d.origin == Origin::Original) {
        out.insert(d.id, 0, trace.mult(d.id)?.clone());
    }
    Ok(out)
}

/// The original model: every blowup of the tree undone.
pub fn root_model(model: &SncModel) -> SncModel {
    let mut root = SncModel::new();
    let originals: Vec<&PrimeDiv> = model.divisors().iter().filter(|d| d.origin == Origin::Original).collect();
    root.divisors = originals.into_iter().cloned().collect();
    let mut points: BTreeMap<PointId, Point> = BTreeMap::new();
    for node in model.tree() {
        if node.point.site.divisors().all(|d| (d.0 as usize) < root.divisors.len()) {
            points.insert(node.point.id, node.point.clone());
        }
    }
    for p in model.points() {
        if p.site.divisors().all(|d| (d.0 as usize) < root.divisors.len()) {
            points.insert(p.id, p.clone());
        }
    }
    root.next_point = points.keys().next_back().map_or(0, |p| p.0 + 1);
    root.points = points;
    root
}

/// Divisorial part of adjunction for a birational contraction onto the
/// root model: the codiscrepancy b-divisor of the pushed-forward boundary.
pub fn birational_div_adj(model: &SncModel, trace: &BDivTrace, depth: u32) -> Result<BDivTrace, SurfaceError> {
    let root = root_model(model);
    let pushed = pushforward_trace(model, trace)?;
    codiscrepancy_bdiv(&root, &pushed, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_curves() -> (SncModel, DivId, DivId, PointId) {
        let mut m = SncModel::new();
        let c1 = m.add_divisor("C1");
        let c2 = m.add_divisor("C2");
        let p = m.add_crossing(c1, c2, "p").unwrap();
        (m, c1, c2, p)
    }

    fn trace(model: &SncModel, vals: &[ExtReal]) -> BDivTrace {
        let mults = model.divisor_ids().zip(vals.iter().cloned()).collect();
        BDivTrace::on_model(model, mults).unwrap()
    }

    #[test]
    fn blowing_up_a_crossing_separates_the_curves() {
        let (m, c1, c2, p) = two_curves();
        let (m2, e) = m.blow_up(p).unwrap();
        assert!(!m2.cross(c1, c2));
        assert!(m2.cross(c1, e));
        assert!(m2.cross(c2, e));
        assert_eq!(m2.crossings().count(), 2);
        assert_eq!(m2.divisor(e).unwrap().origin, Origin::Exceptional { node: 0 });
        m2.validate().unwrap();
        // the original model is untouched
        assert!(m.cross(c1, c2));
    }

    #[test]
    fn blowing_up_free_and_off_points() {
        let mut m = SncModel::new();
        let c1 = m.add_divisor("C1");
        let q = m.add_free_point(c1, "q").unwrap();
        let o = m.add_off_point("o");
        let (m2, e) = m.blow_up(q).unwrap();
        assert!(m2.cross(c1, e));
        assert_eq!(m2.crossings().filter(|p| p.site.contains(e)).count(), 1);
        let (m3, f) = m2.blow_up(o).unwrap();
        assert_eq!(m3.crossings().filter(|p| p.site.contains(f)).count(), 0);
        assert_eq!(m.blow_up(PointId(99)).unwrap_err(), SurfaceError::NoSuchPoint(PointId(99)));
    }

    #[test]
    fn tree_records_infinitely_near_points() {
        let (m, c1, _, p) = two_curves();
        let (m, e1) = m.blow_up(p).unwrap();
        let p1 = m.crossings_between(c1, e1).next().unwrap().id;
        let (m, _) = m.blow_up(p1).unwrap();
        assert_eq!(m.tree()[0].parent, None);
        assert_eq!(m.tree()[1].parent, Some(0));
    }

    #[test]
    fn step_values() {
        let (m, _, _, p) = two_curves();
        assert_eq!(codiscrepancy_step(&m, &trace(&m, &[ExtReal::one(), ExtReal::one()]), p).unwrap(), ExtReal::one());
        let t = trace(&m, &[ExtReal::ratio(2, 3), ExtReal::ratio(1, 5)]);
        assert_eq!(codiscrepancy_step(&m, &t, p).unwrap(), ExtReal::ratio(-2, 15));
        let mut m = m;
        let o = m.add_off_point("o");
        assert_eq!(codiscrepancy_step(&m, &t, o).unwrap(), ExtReal::integer(-1));
    }

    #[test]
    fn reduced_boundary_stays_reduced() {
        let (m, ..) = two_curves();
        let b = codiscrepancy_bdiv(&m, &trace(&m, &[ExtReal::one(), ExtReal::one()]), 4).unwrap();
        assert_eq!(b.len(), 2 + 1 + 2 + 4 + 8);
        assert!(b.iter().all(|(_, e)| e.mult == ExtReal::one()));
    }

    #[test]
    fn zero_and_one_give_zero() {
        let (m, ..) = two_curves();
        let b = codiscrepancy_bdiv(&m, &trace(&m, &[ExtReal::zero(), ExtReal::one()]), 1).unwrap();
        assert_eq!(b.mult(DivId(2)).unwrap(), &ExtReal::zero());
    }

    #[test]
    fn both_routes_agree_at_depth_two() {
        let (m, ..) = two_curves();
        let t = trace(&m, &[ExtReal::ratio(3, 4), ExtReal::ratio(1, 2)]);
        let expl = explore(&m, 2, false);
        let r = codiscrepancy_recursive(&expl, &t).unwrap();
        let s = codiscrepancy_total_transform(&expl, &t).unwrap();
        assert_eq!(r, s);
        assert_eq!(r.mult(DivId(2)).unwrap(), &ExtReal::ratio(1, 4));
    }

    #[test]
    fn bdiv_equal_reports_shallowest() {
        let (m, ..) = two_curves();
        let a = codiscrepancy_bdiv(&m, &trace(&m, &[ExtReal::one(), ExtReal::one()]), 2).unwrap();
        assert_eq!(bdiv_equal(&a, &a, 2).unwrap(), None);
        let b = codiscrepancy_bdiv(&m, &trace(&m, &[ExtReal::ratio(1, 2), ExtReal::one()]), 2).unwrap();
        let d = bdiv_equal(&a, &b, 2).unwrap().unwrap();
        assert_eq!(d.level, 0);
        assert_eq!(d.div, DivId(0));
        let shallow = codiscrepancy_bdiv(&m, &trace(&m, &[ExtReal::one(), ExtReal::one()]), 1).unwrap();
        assert!(matches!(bdiv_equal(&a, &shallow, 2), Err(SurfaceError::TreeMismatch(_))));
        assert_eq!(bdiv_equal(&a, &shallow, 1).unwrap(), None);
    }

    #[test]
    fn pushforward_forgets_exceptionals() {
        let (m, _, _, p) = two_curves();
        let t = trace(&m, &[ExtReal::ratio(1, 3), ExtReal::ratio(1, 2)]);
        assert_eq!(pushforward_trace(&m, &t).unwrap(), t);
        let (m2, e) = m.blow_up(p).unwrap();
        let mut mults: BTreeMap<DivId, ExtReal> = BTreeMap::new();
        mults.insert(DivId(0), ExtReal::ratio(1, 3));
        mults.insert(DivId(1), ExtReal::ratio(1, 2));
        mults.insert(e, ExtReal::integer(7));
        let t2 = BDivTrace::on_model(&m2, mults).unwrap();
        assert_eq!(pushforward_trace(&m2, &t2).unwrap(), t);
        assert_eq!(root_model(&m2), m);
    }

    #[test]
    fn crepant_round_trip_through_pushforward() {
        let (m, ..) = two_curves();
        let t = trace(&m, &[ExtReal::ratio(2, 5), ExtReal::ratio(-1, 3)]);
        let expl = explore(&m, 1, false);
        let crepant = codiscrepancy_on(&expl, &t).unwrap();
        let recomputed = birational_div_adj(expl.model(), &crepant, 1).unwrap();
        assert_eq!(recomputed, crepant);
    }

    #[test]
    fn totality_is_enforced() {
        let (m, ..) = two_curves();
        let mut mults = BTreeMap::new();
        mults.insert(DivId(0), ExtReal::one());
        assert_eq!(BDivTrace::on_model(&m, mults).unwrap_err(), SurfaceError::TraceNotTotal(DivId(1)));
        let mut bad = SncModel::new();
        let c = bad.add_divisor("C");
        assert_eq!(bad.add_crossing(c, c, "x").unwrap_err(), SurfaceError::SelfCrossing(c));
    }
}
