//! Łukasiewicz formulas: the AST shared by event formulas and modal formulas,
//! normalization to the `{⊕, ¬, ⊥}` basis, and pointwise evaluation.

mod parser;
mod print;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

pub use parser::{parse_event, AtomSyntax, Parser};
pub(crate) use parser::{syntax, Token};

/// Formula tree over an atom type. Event formulas use variable names as
/// atoms; modal formulas use event formulas (read as `P(φ)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula<A> {
    Atom(A),
    Bot,
    Top,
    Neg(Box<Formula<A>>),
    OPlus(Box<Formula<A>>, Box<Formula<A>>),
    OTimes(Box<Formula<A>>, Box<Formula<A>>),
    Imp(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Iff(Box<Formula<A>>, Box<Formula<A>>),
    /// `φ^n`, the n-fold `⊙`. Always `n >= 1`.
    Power(Box<Formula<A>>, u32),
    /// `n.φ`, the n-fold `⊕`. Always `n >= 1`.
    Multiple(u32, Box<Formula<A>>),
}

pub type EventFormula = Formula<String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    OPlus,
    OTimes,
    Imp,
    Or,
    And,
    Iff,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::OPlus => "+",
            BinaryOp::OTimes => "*",
            BinaryOp::Imp => "->",
            BinaryOp::Or => "|",
            BinaryOp::And => "&",
            BinaryOp::Iff => "<->",
        }
    }

    /// The operation on the standard MV-algebra `[0,1]`.
    pub fn apply(self, a: &Rational, b: &Rational) -> Rational {
        let one = Rational::one();
        let zero = Rational::zero();
        match self {
            BinaryOp::OPlus => (a + b).min(one),
            BinaryOp::OTimes => (a + b - one).max(zero),
            BinaryOp::Imp => (one - a + b).min(Rational::one()),
            BinaryOp::Or => a.max(b).clone(),
            BinaryOp::And => a.min(b).clone(),
            BinaryOp::Iff => one - (a - b).abs(),
        }
    }
}

impl<A> Formula<A> {
    pub fn atom(a: A) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Self) -> Self {
        Formula::Neg(Box::new(f))
    }

    pub fn binary(op: BinaryOp, l: Self, r: Self) -> Self {
        let (l, r) = (Box::new(l), Box::new(r));
        match op {
            BinaryOp::OPlus => Formula::OPlus(l, r),
            BinaryOp::OTimes => Formula::OTimes(l, r),
            BinaryOp::Imp => Formula::Imp(l, r),
            BinaryOp::Or => Formula::Or(l, r),
            BinaryOp::And => Formula::And(l, r),
            BinaryOp::Iff => Formula::Iff(l, r),
        }
    }

    pub fn oplus(l: Self, r: Self) -> Self {
        Self::binary(BinaryOp::OPlus, l, r)
    }

    pub fn otimes(l: Self, r: Self) -> Self {
        Self::binary(BinaryOp::OTimes, l, r)
    }

    pub fn imp(l: Self, r: Self) -> Self {
        Self::binary(BinaryOp::Imp, l, r)
    }

    pub fn or(l: Self, r: Self) -> Self {
        Self::binary(BinaryOp::Or, l, r)
    }

    pub fn and(l: Self, r: Self) -> Self {
        Self::binary(BinaryOp::And, l, r)
    }

    pub fn iff(l: Self, r: Self) -> Self {
        Self::binary(BinaryOp::Iff, l, r)
    }

    pub fn power(f: Self, n: u32) -> Self {
        assert!(n >= 1, "power exponent must be positive");
        Formula::Power(Box::new(f), n)
    }

    pub fn multiple(n: u32, f: Self) -> Self {
        assert!(n >= 1, "multiple must be positive");
        Formula::Multiple(n, Box::new(f))
    }

    /// Splits a binary node into its operator and operands.
    pub fn as_binary(&self) -> Option<(BinaryOp, &Self, &Self)> {
        let (op, l, r) = match self {
            Formula::OPlus(l, r) => (BinaryOp::OPlus, l, r),
            Formula::OTimes(l, r) => (BinaryOp::OTimes, l, r),
            Formula::Imp(l, r) => (BinaryOp::Imp, l, r),
            Formula::Or(l, r) => (BinaryOp::Or, l, r),
            Formula::And(l, r) => (BinaryOp::And, l, r),
            Formula::Iff(l, r) => (BinaryOp::Iff, l, r),
            _ => return None,
        };
        Some((op, l.as_ref(), r.as_ref()))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => 0,
            Formula::Neg(f) | Formula::Power(f, _) | Formula::Multiple(_, f) => 1 + f.depth(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                1 + l.depth().max(r.depth())
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => 1,
            Formula::Neg(f) | Formula::Power(f, _) | Formula::Multiple(_, f) => 1 + f.size(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                1 + l.size() + r.size()
            }
        }
    }

    /// Replaces every atom by a formula over a new atom type.
    pub fn try_map_atoms<B, F>(&self, f: &mut F) -> Result<Formula<B>>
    where
        F: FnMut(&A) -> Result<Formula<B>>,
    {
        Ok(match self {
            Formula::Atom(a) => f(a)?,
            Formula::Bot => Formula::Bot,
            Formula::Top => Formula::Top,
            Formula::Neg(x) => Formula::neg(x.try_map_atoms(f)?),
            Formula::Power(x, n) => Formula::Power(Box::new(x.try_map_atoms(f)?), *n),
            Formula::Multiple(n, x) => Formula::Multiple(*n, Box::new(x.try_map_atoms(f)?)),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                Formula::binary(op, l.try_map_atoms(f)?, r.try_map_atoms(f)?)
            }
        })
    }

    pub fn map_atoms<B, F>(&self, mut f: F) -> Formula<B>
    where
        F: FnMut(&A) -> Formula<B>,
    {
        self.try_map_atoms(&mut |a| Ok(f(a)))
            .expect("infallible atom map")
    }

    fn visit_atoms<'a>(&'a self, out: &mut Vec<&'a A>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::Bot | Formula::Top => {}
            Formula::Neg(f) | Formula::Power(f, _) | Formula::Multiple(_, f) => f.visit_atoms(out),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                l.visit_atoms(out);
                r.visit_atoms(out);
            }
        }
    }

    /// Distinct atoms in order of first occurrence.
    pub fn atoms(&self) -> Vec<&A>
    where
        A: PartialEq,
    {
        let mut all = Vec::new();
        self.visit_atoms(&mut all);
        let mut out: Vec<&A> = Vec::new();
        for a in all {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    /// Rewrites into the primitive basis `{⊕, ¬, ⊥}` using the standard
    /// definitions of the derived connectives. Double negations are kept.
    pub fn normalize(&self) -> Self
    where
        A: Clone,
    {
        let neg = Formula::neg;
        let oplus = Formula::oplus;
        let imp = |a: Self, b: Self| oplus(neg(a), b);
        let or = |a: Self, b: Self| {
            let ab = imp(a, b.clone());
            imp(ab, b)
        };
        match self {
            Formula::Atom(a) => Formula::Atom(a.clone()),
            Formula::Bot => Formula::Bot,
            Formula::Top => neg(Formula::Bot),
            Formula::Neg(f) => neg(f.normalize()),
            Formula::OPlus(l, r) => oplus(l.normalize(), r.normalize()),
            Formula::Imp(l, r) => imp(l.normalize(), r.normalize()),
            Formula::Or(l, r) => or(l.normalize(), r.normalize()),
            Formula::And(l, r) => neg(or(neg(l.normalize()), neg(r.normalize()))),
            Formula::OTimes(l, r) => neg(oplus(neg(l.normalize()), neg(r.normalize()))),
            Formula::Iff(l, r) => {
                let (l, r) = (l.normalize(), r.normalize());
                let lr = imp(l.clone(), r.clone());
                let rl = imp(r, l);
                neg(or(neg(lr), neg(rl)))
            }
            Formula::Power(f, n) => {
                let f = f.normalize();
                let otimes = |a: Self, b: Self| neg(oplus(neg(a), neg(b)));
                (1..*n).fold(f.clone(), |acc, _| otimes(acc, f.clone()))
            }
            Formula::Multiple(n, f) => {
                let f = f.normalize();
                (1..*n).fold(f.clone(), |acc, _| oplus(acc, f.clone()))
            }
        }
    }

    /// Unfolds `Power` and `Multiple` into repeated `⊙` and `⊕`, keeping
    /// every other connective as written.
    pub fn unfold_repetitions(&self) -> Self
    where
        A: Clone,
    {
        match self {
            Formula::Atom(a) => Formula::Atom(a.clone()),
            Formula::Bot => Formula::Bot,
            Formula::Top => Formula::Top,
            Formula::Neg(f) => Formula::neg(f.unfold_repetitions()),
            Formula::Power(f, n) => {
                let f = f.unfold_repetitions();
                (1..*n).fold(f.clone(), |acc, _| Formula::otimes(acc, f.clone()))
            }
            Formula::Multiple(n, f) => {
                let f = f.unfold_repetitions();
                (1..*n).fold(f.clone(), |acc, _| Formula::oplus(acc, f.clone()))
            }
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                Formula::binary(op, l.unfold_repetitions(), r.unfold_repetitions())
            }
        }
    }

    /// Value in the standard MV-algebra under an atom valuation.
    pub fn eval_with<F>(&self, val: &F) -> Rational
    where
        F: Fn(&A) -> Rational,
    {
        match self {
            Formula::Atom(a) => val(a),
            Formula::Bot => Rational::zero(),
            Formula::Top => Rational::one(),
            Formula::Neg(f) => Rational::one() - f.eval_with(val),
            Formula::Power(f, n) => {
                let n = int(*n as i64);
                let v = f.eval_with(val);
                (&n * v - (n - Rational::one())).max(Rational::zero())
            }
            Formula::Multiple(n, f) => (int(*n as i64) * f.eval_with(val)).min(Rational::one()),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                op.apply(&l.eval_with(val), &r.eval_with(val))
            }
        }
    }
}

impl<A: AtomSyntax> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        print::write_formula(self, &mut out);
        f.write_str(&out)
    }
}

impl<A: AtomSyntax> Formula<A> {
    /// Fully parenthesized text with fixed operator spelling.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl EventFormula {
    pub fn var(name: &str) -> Self {
        Formula::Atom(name.to_string())
    }

    /// Evaluates at a point whose coordinates follow `ctx`.
    pub fn eval(&self, ctx: &VarContext, point: &[Rational]) -> Result<Rational> {
        if point.len() != ctx.len() {
            return Err(Error::DimensionMismatch {
                expected: ctx.len(),
                found: point.len(),
            });
        }
        for a in self.atoms() {
            if ctx.index_of(a).is_none() {
                return Err(Error::UnknownVariable(a.clone()));
            }
        }
        Ok(self.eval_with(&|name: &String| point[ctx.index_of(name).unwrap()].clone()))
    }
}

/// Ordered, duplicate-free list of variable names; positions are 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ctx = Self::new();
        for n in names {
            ctx.insert(n.into());
        }
        ctx
    }

    /// Variables of the formulas in order of first occurrence.
    pub fn of_formulas<'a, I>(formulas: I) -> Self
    where
        I: IntoIterator<Item = &'a EventFormula>,
    {
        let mut ctx = Self::new();
        for f in formulas {
            ctx.extend_with(f);
        }
        ctx
    }

    pub fn extend_with(&mut self, f: &EventFormula) {
        for a in f.atoms() {
            self.insert(a.clone());
        }
    }

    /// Appends `name` unless present; returns its position.
    pub fn insert(&mut self, name: String) -> usize {
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
