//! McNaughton functions as polyhedral complexes with one integer affine
//! form per cell.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::formula::{BinaryOp, EventFormula, Formula, VarContext};
use crate::polytope::{Halfspace, Polytope};
use crate::rational::{in_unit_interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCell {
    pub polytope: Polytope,
    pub form: AffineForm,
}

/// Continuous piecewise-linear function on `[0,1]^n`. Cells are
/// full-dimensional, cover the cube and overlap only on boundaries.
#[derive(Debug, Clone)]
pub struct PwlFunction {
    context: VarContext,
    cells: Vec<LinearCell>,
}

/// How a complex is built. The default merges adjacent cells that carry the
/// same forms whenever their union is convex; other settings exist to
/// cross-check that results do not depend on the subdivision.
#[derive(Debug, Clone)]
pub struct Strategy {
    pub coalesce: bool,
    /// Overlay the functions in reverse order.
    pub reverse: bool,
    /// Additional hyperplanes to split every cell by.
    pub extra_cuts: Vec<Halfspace>,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            coalesce: true,
            reverse: false,
            extra_cuts: Vec::new(),
        }
    }
}

type Cells<T> = Vec<(Polytope, T)>;

// Full-dimensional part of `a ∩ b`, if any.
fn interior_meet(a: &Polytope, b: &Polytope) -> Option<Polytope> {
    let hs = b.halfspaces();
    if hs
        .iter()
        .any(|h| a.vertices().iter().all(|v| !h.slack(v).is_positive()))
    {
        return None;
    }
    let mut cur = a.clone();
    for h in hs {
        cur = cur.split(h).0?;
    }
    Some(cur)
}

fn overlay<T: Clone, U: Clone>(a: &Cells<T>, b: &Cells<U>) -> Cells<(T, U)> {
    let mut out = Vec::new();
    for (pa, ta) in a {
        for (pb, tb) in b {
            if let Some(p) = interior_meet(pa, pb) {
                out.push((p, (ta.clone(), tb.clone())));
            }
        }
    }
    out
}

fn cut_all<T: Clone>(cells: Cells<T>, h: &Halfspace) -> Cells<T> {
    let mut out = Vec::with_capacity(cells.len());
    for (p, t) in cells {
        match p.split(h) {
            (Some(lo), Some(hi)) => {
                out.push((lo, t.clone()));
                out.push((hi, t));
            }
            (Some(q), None) | (None, Some(q)) => out.push((q, t)),
            (None, None) => {}
        }
    }
    out
}

// Polytope covering exactly the union of `members` when that union is
// convex; `others` are the remaining cells of the complex.
fn try_merge(members: &[&Polytope], others: &[&Polytope]) -> Option<Polytope> {
    let dim = members[0].dim();
    let mut candidates: Vec<_> = members.iter().flat_map(|p| p.vertices().iter().cloned()).collect();
    candidates.sort();
    candidates.dedup();
    let mut env: Vec<Halfspace> = crate::polytope::cube_halfspaces(dim);
    for p in members {
        env.extend(p.halfspaces().iter().cloned());
    }
    env.sort();
    env.dedup();
    env.retain(|h| candidates.iter().all(|v| h.contains(v)));
    // The envelope contains the union; it equals the union exactly when no
    // other cell of the complex reaches into it.
    if others.iter().any(|o| o.overlaps_interior(&env)) {
        return None;
    }
    let vertices = candidates
        .into_iter()
        .filter(|v| {
            let tight: Vec<Vec<Rational>> = env
                .iter()
                .filter(|h| h.slack(v).is_zero())
                .map(|h| h.normal.clone())
                .collect();
            crate::polytope::rank(&tight) == dim
        })
        .collect();
    Some(Polytope::from_vertices_and_halfspaces(dim, vertices, env))
}

fn shares_facet(a: &Polytope, b: &Polytope) -> bool {
    let shared = a
        .vertices()
        .iter()
        .filter(|v| b.vertices().binary_search(v).is_ok())
        .count();
    shared >= a.dim().max(1)
}

/// Merges same-labelled cells whose union is convex.
fn coalesce<T: Ord + Clone>(cells: Cells<T>) -> Cells<T> {
    let mut groups: BTreeMap<T, Vec<Polytope>> = BTreeMap::new();
    for (p, t) in cells {
        groups.entry(t).or_default().push(p);
    }
    let labels: Vec<T> = groups.keys().cloned().collect();
    for label in &labels {
        if groups[label].len() < 2 {
            continue;
        }
        let group = groups.remove(label).unwrap();
        let others: Vec<Polytope> = groups.values().flatten().cloned().collect();
        let other_refs: Vec<&Polytope> = others.iter().collect();
        let merged = merge_group(group, &other_refs);
        groups.insert(label.clone(), merged);
    }
    groups
        .into_iter()
        .flat_map(|(t, ps)| ps.into_iter().map(move |p| (p, t.clone())))
        .collect()
}

fn merge_group(mut group: Vec<Polytope>, others: &[&Polytope]) -> Vec<Polytope> {
    {
        let all: Vec<&Polytope> = group.iter().collect();
        if let Some(m) = try_merge(&all, others) {
            return vec![m];
        }
    }
    'outer: loop {
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                if !shares_facet(&group[i], &group[j]) {
                    continue;
                }
                let rest: Vec<&Polytope> = others
                    .iter()
                    .copied()
                    .chain(
                        group
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != i && k != j)
                            .map(|(_, p)| p),
                    )
                    .collect();
                if let Some(m) = try_merge(&[&group[i], &group[j]], &rest) {
                    group.swap_remove(j);
                    group[i] = m;
                    continue 'outer;
                }
            }
        }
        return group;
    }
}

// Splits by `h(x) <= 0`, labelling the two sides.
fn split_labelled(
    p: Polytope,
    h: &AffineForm,
    below: AffineForm,
    above: AffineForm,
    out: &mut Cells<AffineForm>,
) {
    match p.split(&h.nonpositive()) {
        (Some(lo), Some(hi)) => {
            out.push((lo, below));
            out.push((hi, above));
        }
        (Some(q), None) => out.push((q, below)),
        (None, Some(q)) => out.push((q, above)),
        (None, None) => {}
    }
}

fn binary_step(op: BinaryOp, p: Polytope, f: &AffineForm, g: &AffineForm, out: &mut Cells<AffineForm>) {
    let one = AffineForm::constant(f.arity(), 1);
    let zero = AffineForm::constant(f.arity(), 0);
    let sum = f.add(g);
    let diff = f.sub(g);
    match op {
        BinaryOp::OPlus => split_labelled(p, &sum.shift(-1), sum.clone(), one, out),
        BinaryOp::OTimes => split_labelled(p, &sum.shift(-1), zero, sum.shift(-1), out),
        BinaryOp::Imp => split_labelled(p, &diff, one, g.sub(f).shift(1), out),
        BinaryOp::Or => split_labelled(p, &diff, g.clone(), f.clone(), out),
        BinaryOp::And => split_labelled(p, &diff, f.clone(), g.clone(), out),
        BinaryOp::Iff => split_labelled(p, &diff, diff.shift(1), g.sub(f).shift(1), out),
    }
}

/// Cell lists per subformula; repeated subtrees are converted once.
struct Builder<'a> {
    ctx: &'a VarContext,
    coalesce: bool,
    memo: HashMap<&'a EventFormula, Cells<AffineForm>>,
}

impl<'a> Builder<'a> {
    fn build(&mut self, f: &'a EventFormula) -> Result<Cells<AffineForm>> {
        let n = self.ctx.len();
        let cube = || Polytope::cube(n);
        match f {
            Formula::Atom(a) => {
                let i = self.ctx.index_of(a).ok_or_else(|| Error::UnknownVariable(a.clone()))?;
                return Ok(vec![(cube(), AffineForm::projection(n, i))]);
            }
            Formula::Bot => return Ok(vec![(cube(), AffineForm::constant(n, 0))]),
            Formula::Top => return Ok(vec![(cube(), AffineForm::constant(n, 1))]),
            Formula::Neg(g) => {
                return Ok(self.build(g)?.into_iter().map(|(p, l)| (p, l.complement())).collect());
            }
            _ => {}
        }
        if let Some(c) = self.memo.get(f) {
            return Ok(c.clone());
        }
        let cells = match f {
            Formula::Power(g, k) => {
                let k = *k as i64;
                let mut out = Vec::new();
                for (p, l) in self.build(g)? {
                    let s = l.scale(k).shift(1 - k);
                    split_labelled(p, &s, AffineForm::constant(n, 0), s.clone(), &mut out);
                }
                out
            }
            Formula::Multiple(k, g) => {
                let k = *k as i64;
                let mut out = Vec::new();
                for (p, l) in self.build(g)? {
                    let s = l.scale(k);
                    split_labelled(p, &s.shift(-1), s.clone(), AffineForm::constant(n, 1), &mut out);
                }
                out
            }
            _ => {
                let (op, l, r) = f.as_binary().expect("binary node");
                let lc = self.build(l)?;
                let rc = self.build(r)?;
                let mut out = Vec::new();
                for (p, (fl, fr)) in overlay(&lc, &rc) {
                    binary_step(op, p, &fl, &fr, &mut out);
                }
                out
            }
        };
        let cells = if self.coalesce { coalesce(cells) } else { cells };
        self.memo.insert(f, cells.clone());
        Ok(cells)
    }
}

/// The McNaughton function of `f` over the variables of `ctx`.
pub fn mcnaughton(f: &EventFormula, ctx: &VarContext) -> Result<PwlFunction> {
    mcnaughton_with(f, ctx, &Strategy::default())
}

pub fn mcnaughton_with(f: &EventFormula, ctx: &VarContext, strategy: &Strategy) -> Result<PwlFunction> {
    for a in f.atoms() {
        if ctx.index_of(a).is_none() {
            return Err(Error::UnknownVariable(a.clone()));
        }
    }
    let mut cells = Builder {
        ctx,
        coalesce: strategy.coalesce,
        memo: HashMap::new(),
    }
    .build(f)?;
    for h in &strategy.extra_cuts {
        if h.normal.len() != ctx.len() {
            return Err(Error::ArityMismatch {
                expected: ctx.len(),
                found: h.normal.len(),
            });
        }
        cells = cut_all(cells, h);
    }
    Ok(PwlFunction {
        context: ctx.clone(),
        cells: cells
            .into_iter()
            .map(|(polytope, form)| LinearCell { polytope, form })
            .collect(),
    })
}

impl PwlFunction {
    pub fn context(&self) -> &VarContext {
        &self.context
    }

    pub fn arity(&self) -> usize {
        self.context.len()
    }

    pub fn cells(&self) -> &[LinearCell] {
        &self.cells
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity() {
            return Err(Error::DimensionMismatch {
                expected: self.arity(),
                found: point.len(),
            });
        }
        if !point.iter().all(in_unit_interval) {
            return Err(Error::OutsideCube);
        }
        self.cells
            .iter()
            .find(|c| c.polytope.contains(point))
            .map(|c| c.form.eval(point))
            .ok_or_else(|| Error::Internal("cells do not cover the cube".into()))
    }

    /// Pieces of `{x : f(x) = 1}`, one per cell that reaches 1, with pieces
    /// contained in other pieces dropped.
    pub fn oneset(&self) -> Vec<Polytope> {
        let mut pieces: Vec<Polytope> = Vec::new();
        for c in &self.cells {
            if let Some(p) = c.polytope.intersect_halfspace(&c.form.complement().nonpositive()) {
                pieces.push(p);
            }
        }
        let mut keep: Vec<Polytope> = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            let covered = pieces.iter().enumerate().any(|(j, q)| {
                j != i && p.is_subset_of(q) && (!q.is_subset_of(p) || j < i)
            });
            if !covered {
                keep.push(p.clone());
            }
        }
        keep
    }

    /// Whether the function is constantly 1.
    pub fn is_tautology(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.polytope.vertices().iter().all(|v| c.form.eval(v).is_one()))
    }
}

/// A complex on which each of several functions is affine.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub cells: Vec<Polytope>,
    /// `forms[c][i]` is the form of function `i` on cell `c`.
    pub forms: Vec<Vec<AffineForm>>,
}

impl Refinement {
    /// Distinct vertices of all cells, sorted.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let mut vs: Vec<Vec<Rational>> = self
            .cells
            .iter()
            .flat_map(|c| c.vertices().iter().cloned())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

pub fn common_refinement(fs: &[PwlFunction]) -> Result<Refinement> {
    common_refinement_with(fs, &Strategy::default())
}

pub fn common_refinement_with(fs: &[PwlFunction], strategy: &Strategy) -> Result<Refinement> {
    let first = fs.first().ok_or(Error::EmptyInput)?;
    let n = first.arity();
    if let Some(f) = fs.iter().find(|f| f.context != first.context) {
        return Err(Error::ArityMismatch {
            expected: n,
            found: f.arity(),
        });
    }
    let k = fs.len();
    let order: Vec<usize> = if strategy.reverse {
        (0..k).rev().collect()
    } else {
        (0..k).collect()
    };
    let mut acc: Cells<Vec<Option<AffineForm>>> = vec![(Polytope::cube(n), vec![None; k])];
    for &i in &order {
        let cells: Cells<AffineForm> = fs[i]
            .cells
            .iter()
            .map(|c| (c.polytope.clone(), c.form.clone()))
            .collect();
        acc = overlay(&acc, &cells)
            .into_iter()
            .map(|(p, (mut forms, f))| {
                forms[i] = Some(f);
                (p, forms)
            })
            .collect();
        if strategy.coalesce {
            acc = coalesce(acc);
        }
    }
    for h in &strategy.extra_cuts {
        acc = cut_all(acc, h);
    }
    let (cells, forms) = acc
        .into_iter()
        .map(|(p, fs)| (p, fs.into_iter().map(|f| f.expect("all functions overlaid")).collect()))
        .unzip();
    Ok(Refinement { cells, forms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_event;
    use crate::rational::{int, rat};

    fn f(text: &str) -> (PwlFunction, VarContext) {
        let phi = parse_event(text).unwrap();
        let ctx = VarContext::of_formulas([&phi]);
        (mcnaughton(&phi, &ctx).unwrap(), ctx)
    }

    #[test]
    fn join_sum_values() {
        let ctx = VarContext::from_names(["x", "y"]);
        let or = mcnaughton(&parse_event("x | y").unwrap(), &ctx).unwrap();
        let plus = mcnaughton(&parse_event("x + y").unwrap(), &ctx).unwrap();
        let half = [rat(1, 2), rat(1, 2)];
        assert_eq!(or.evaluate(&half).unwrap(), rat(1, 2));
        assert_eq!(plus.evaluate(&half).unwrap(), int(1));
        assert_eq!(plus.evaluate(&[int(0), int(0)]).unwrap(), int(0));
    }

    #[test]
    fn top_is_single_constant_cell() {
        let (t, _) = f("1");
        assert_eq!(t.cells().len(), 1);
        assert_eq!(t.cells()[0].form, AffineForm::constant(0, 1));
    }

    #[test]
    fn truncations() {
        let (g, _) = f("(x + x) * x");
        assert_eq!(g.evaluate(&[rat(3, 10)]).unwrap(), int(0));
        let (h, _) = f("2.x * ~x");
        assert_eq!(h.evaluate(&[rat(2, 5)]).unwrap(), rat(2, 5));
        let (id, _) = f("x -> x");
        assert!(id.is_tautology());
    }

    #[test]
    fn evaluate_errors() {
        let (g, _) = f("x");
        assert!(matches!(g.evaluate(&[int(0), int(0)]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(g.evaluate(&[rat(3, 2)]), Err(Error::OutsideCube));
        let ctx = VarContext::from_names(["x"]);
        assert_eq!(
            mcnaughton(&parse_event("y").unwrap(), &ctx).unwrap_err(),
            Error::UnknownVariable("y".into())
        );
    }

    #[test]
    fn onesets() {
        let (g, _) = f("x + x");
        let os = g.oneset();
        assert_eq!(os.len(), 1);
        assert_eq!(os[0].vertices(), &[vec![rat(1, 2)], vec![int(1)]]);
        let (b, _) = f("0");
        assert!(b.oneset().is_empty());
        let (em, _) = f("x | ~x");
        let mut os: Vec<_> = em.oneset().iter().map(|p| p.vertices().to_vec()).collect();
        os.sort();
        assert_eq!(os, vec![vec![vec![int(0)]], vec![vec![int(1)]]]);
    }

    #[test]
    fn coalescing_keeps_single_cell_for_affine_results() {
        // x ⊕ ¬x is constantly 1 after the split.
        let (g, _) = f("x + ~x");
        assert_eq!(g.cells().len(), 1);
        let (h, _) = f("(x | y) | (x & y)");
        assert_eq!(h.cells().len(), 2);
    }

    #[test]
    fn refinement_contains_join_sum_vertex() {
        let ctx = VarContext::from_names(["x", "y"]);
        let fs: Vec<_> = ["x | y", "x + y"]
            .iter()
            .map(|t| mcnaughton(&parse_event(t).unwrap(), &ctx).unwrap())
            .collect();
        let r = common_refinement(&fs).unwrap();
        assert!(r.vertices().contains(&vec![rat(1, 2), rat(1, 2)]));
        let top = mcnaughton(&Formula::Top, &ctx).unwrap();
        let r = common_refinement(&[top]).unwrap();
        assert_eq!(r.cells, vec![Polytope::cube(2)]);
    }
}
