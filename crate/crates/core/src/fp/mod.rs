//! The probability logic FP(Ł,Ł): modal formulas over `P(event)` atoms,
//! translation to plain Łukasiewicz formulas, and decision of consequence
//! through the coherent set of the events involved.

mod chi;
mod subst;

use indexmap::IndexMap;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coherence::{coherent_set_with, CoherentSet, EventList};
use crate::error::{Error, Result};
use crate::formula::{syntax, AtomSyntax, EventFormula, Formula, Parser, Token, VarContext};
use crate::limits::Limits;
use crate::pwl::{common_refinement, mcnaughton};
use crate::rational::{format_rational, Point, Rational};

pub use chi::{chi_synthesis, oneset_equals};
pub use subst::{
    is_prob_substitution, is_prob_substitution_with, verify_generality, verify_generality_with, verify_unifier,
    verify_unifier_with, ProbSubstitution, SubstitutionCheck, UnificationProblem,
};

/// Outer Łukasiewicz formula whose atoms are events under `P`.
pub type ModalFormula = Formula<EventFormula>;

impl AtomSyntax for EventFormula {
    fn parse_atom(p: &mut Parser) -> Result<Option<Self>> {
        match p.peek().clone() {
            Token::Modal => {
                if p.modal_depth > 0 {
                    return Err(syntax(p.offset(), "nested modality"));
                }
                p.bump();
                p.expect(Token::LParen)?;
                p.modal_depth += 1;
                let inner = p.formula::<String>();
                p.modal_depth -= 1;
                let inner = inner?;
                p.expect(Token::RParen)?;
                Ok(Some(inner))
            }
            Token::Ident(name) => Err(syntax(
                p.offset(),
                format!("event variable `{name}` must appear inside P(...)"),
            )),
            _ => Ok(None),
        }
    }

    fn write_atom(&self, out: &mut String) {
        out.push_str("P(");
        out.push_str(&self.canonical());
        out.push(')');
    }
}

pub fn parse_modal(text: &str) -> Result<ModalFormula> {
    Parser::new(text)?.parse_complete()
}

/// Assigns a fresh variable `p1, p2, …` to each syntactically distinct
/// event, in order of first use.
#[derive(Debug, Clone, Default)]
pub struct TranslationContext {
    vars: IndexMap<String, (String, EventFormula)>,
}

impl TranslationContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variable_for(&mut self, event: &EventFormula) -> String {
        let key = event.canonical();
        let next = self.vars.len() + 1;
        self.vars
            .entry(key)
            .or_insert_with(|| (format!("p{next}"), event.clone()))
            .0
            .clone()
    }

    /// Registers every atom of `f` without translating it.
    pub fn register(&mut self, f: &ModalFormula) {
        for e in f.atoms() {
            self.variable_for(e);
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn events(&self) -> Vec<EventFormula> {
        self.vars.values().map(|(_, e)| e.clone()).collect()
    }

    pub fn variables(&self) -> VarContext {
        VarContext::from_names(self.vars.values().map(|(v, _)| v.clone()))
    }
}

/// Replaces each `P(φ)` by its fresh variable, extending `ctx` as needed.
pub fn translate(f: &ModalFormula, ctx: &mut TranslationContext) -> EventFormula {
    f.map_atoms(|e| Formula::Atom(ctx.variable_for(e)))
}

/// A coherent book on the events of a query, listed with their events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub events: Vec<EventFormula>,
    pub prices: Vec<Rational>,
}

impl Countermodel {
    pub fn price_of(&self, event: &EventFormula) -> Option<&Rational> {
        self.events.iter().position(|e| e == event).map(|i| &self.prices[i])
    }

    /// Value of a modal formula when each `P(φ)` takes its price.
    pub fn eval(&self, f: &ModalFormula) -> Result<Rational> {
        f.try_map_atoms(&mut |e: &EventFormula| {
            self.price_of(e)
                .map(|p| Formula::Atom(p.clone()))
                .ok_or_else(|| Error::DomainMismatch(format!("P({})", e.canonical())))
        })
        .map(|g: Formula<Rational>| g.eval_with(&|q: &Rational| q.clone()))
    }

    pub fn to_json(&self) -> IndexMap<String, String> {
        self.events
            .iter()
            .zip(&self.prices)
            .map(|(e, p)| (e.canonical(), format_rational(p)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Consequence {
    pub holds: bool,
    pub countermodel: Option<Countermodel>,
}

impl Consequence {
    pub fn to_json(&self) -> ConsequenceJson {
        ConsequenceJson {
            holds: self.holds,
            countermodel: self.countermodel.as_ref().map(Countermodel::to_json),
            exponent: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsequenceJson {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<IndexMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
}

fn check_query(fs: &[&ModalFormula], ctx: &TranslationContext, limits: &Limits) -> Result<()> {
    limits.check_events(ctx.len())?;
    let events = ctx.events();
    limits.check_vars(VarContext::of_formulas(&events).len())?;
    for e in &events {
        limits.check_depth(e)?;
    }
    for f in fs {
        limits.check_depth(f)?;
    }
    Ok(())
}

pub(crate) fn coherent_set_of(ctx: &TranslationContext, limits: &Limits) -> Result<CoherentSet> {
    coherent_set_with(&EventList::new(ctx.events())?, limits, &Default::default())
}

/// Decides `premise ⊢ conclusion`; a failing query comes with a coherent
/// book under which the premise takes value 1 and the conclusion less.
pub fn decide_consequence(premise: &ModalFormula, conclusion: &ModalFormula) -> Result<Consequence> {
    decide_consequence_with(premise, conclusion, &Limits::default())
}

pub fn decide_consequence_with(
    premise: &ModalFormula,
    conclusion: &ModalFormula,
    limits: &Limits,
) -> Result<Consequence> {
    let mut ctx = TranslationContext::new();
    let phi = translate(premise, &mut ctx);
    let psi = translate(conclusion, &mut ctx);
    check_query(&[premise, conclusion], &ctx, limits)?;
    let events = ctx.events();
    let vars = ctx.variables();
    if events.is_empty() {
        let one = Rational::one();
        let holds = phi.eval(&vars, &[])? < one || psi.eval(&vars, &[])? == one;
        let countermodel = (!holds).then(|| Countermodel {
            events: vec![],
            prices: vec![],
        });
        return Ok(Consequence { holds, countermodel });
    }
    let set = coherent_set_of(&ctx, limits)?;
    let f_phi = mcnaughton(&phi, &vars)?;
    let f_psi = mcnaughton(&psi, &vars)?;
    let refinement = common_refinement(&[f_phi, f_psi])?;
    for (cell, forms) in refinement.cells.iter().zip(&refinement.forms) {
        let (l_phi, l_psi) = (&forms[0], &forms[1]);
        if l_psi.is_constant() && l_psi.constant.is_one() {
            continue;
        }
        let Some(mut piece) = cell.intersect_halfspace(&l_phi.complement().nonpositive()) else {
            continue;
        };
        let mut empty = false;
        for h in set.polytope().halfspaces() {
            match piece.intersect_halfspace(h) {
                Some(p) => piece = p,
                None => {
                    empty = true;
                    break;
                }
            }
        }
        if empty {
            continue;
        }
        if let Some(v) = piece.vertices().iter().find(|v| !l_psi.eval(v).is_one()) {
            let cm = Countermodel {
                events: events.clone(),
                prices: v.clone(),
            };
            verify_countermodel(&cm, &set, &phi, &psi, &vars, v)?;
            return Ok(Consequence {
                holds: false,
                countermodel: Some(cm),
            });
        }
    }
    Ok(Consequence {
        holds: true,
        countermodel: None,
    })
}

fn verify_countermodel(
    cm: &Countermodel,
    set: &CoherentSet,
    phi: &EventFormula,
    psi: &EventFormula,
    vars: &VarContext,
    v: &Point,
) -> Result<()> {
    let ok = set.contains(&cm.prices) && phi.eval(vars, v)?.is_one() && !psi.eval(vars, v)?.is_one();
    if ok {
        Ok(())
    } else {
        Err(Error::Internal("countermodel failed to verify".into()))
    }
}

/// Premises are combined by `∧`; no premises means `⊤`.
pub fn decide_consequence_from(premises: &[ModalFormula], conclusion: &ModalFormula) -> Result<Consequence> {
    decide_consequence_with(&conjunction(premises), conclusion, &Limits::default())
}

pub fn conjunction(fs: &[ModalFormula]) -> ModalFormula {
    let mut it = fs.iter().cloned();
    match it.next() {
        None => Formula::Top,
        Some(first) => it.fold(first, Formula::and),
    }
}

pub fn is_theorem(f: &ModalFormula) -> Result<Consequence> {
    decide_consequence(&Formula::Top, f)
}

pub fn is_theorem_with(f: &ModalFormula, limits: &Limits) -> Result<Consequence> {
    decide_consequence_with(&Formula::Top, f, limits)
}

/// Largest exponent tried before giving up.
pub const MAX_EXPONENT: u32 = 1 << 16;

/// Whether `⊢ premise^n → conclusion`.
pub fn is_deduction_exponent(premise: &ModalFormula, conclusion: &ModalFormula, n: u32, limits: &Limits) -> Result<bool> {
    let f = Formula::imp(Formula::power(premise.clone(), n), conclusion.clone());
    let mut relaxed = *limits;
    relaxed.max_depth = relaxed.max_depth.saturating_add(2);
    Ok(is_theorem_with(&f, &relaxed)?.holds)
}

/// The least `n` with `⊢ premise^n → conclusion`, or `None` when the
/// conclusion does not follow from the premise at all.
pub fn local_deduction_exponent(premise: &ModalFormula, conclusion: &ModalFormula) -> Result<Option<u32>> {
    local_deduction_exponent_with(premise, conclusion, &Limits::default())
}

pub fn local_deduction_exponent_with(
    premise: &ModalFormula,
    conclusion: &ModalFormula,
    limits: &Limits,
) -> Result<Option<u32>> {
    if !decide_consequence_with(premise, conclusion, limits)?.holds {
        return Ok(None);
    }
    // premise^(n+1) <= premise^n, so success is upward closed in n.
    let works = |n: u32| is_deduction_exponent(premise, conclusion, n, limits);
    if works(1)? {
        return Ok(Some(1));
    }
    let mut fail = 1;
    let mut hi = 2;
    while !works(hi)? {
        fail = hi;
        if hi >= MAX_EXPONENT {
            return Err(Error::ExponentBound(MAX_EXPONENT as u64));
        }
        hi = (hi * 2).min(MAX_EXPONENT);
    }
    while hi - fail > 1 {
        let mid = fail + (hi - fail) / 2;
        if works(mid)? {
            hi = mid;
        } else {
            fail = mid;
        }
    }
    Ok(Some(hi))
}

pub(crate) fn ground_value(f: &EventFormula) -> Rational {
    f.eval_with(&|_: &String| Rational::zero())
}
