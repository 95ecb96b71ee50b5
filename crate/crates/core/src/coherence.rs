//! Coherent sets of event lists, coherence verdicts with certificates, and
//! coherent extension intervals.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{parse_event, EventFormula, VarContext};
use crate::limits::Limits;
use crate::polytope::{Halfspace, MembershipCertificate, Polytope};
use crate::pwl::{common_refinement_with, mcnaughton_with, PwlFunction, Strategy};
use crate::rational::{dot, format_point, format_rational, in_unit_interval, primitive, Point, Rational};

/// Ordered list of events over a shared variable context. Duplicates are
/// kept as separate coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventList {
    events: Vec<EventFormula>,
    context: VarContext,
}

impl EventList {
    pub fn new(events: Vec<EventFormula>) -> Result<Self> {
        let context = VarContext::of_formulas(&events);
        Self::with_context(events, context)
    }

    /// Uses `context` for the variables; it may contain extra names.
    pub fn with_context(events: Vec<EventFormula>, context: VarContext) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptyEventList);
        }
        for e in &events {
            for a in e.atoms() {
                if context.index_of(a).is_none() {
                    return Err(Error::UnknownVariable(a.clone()));
                }
            }
        }
        Ok(EventList { events, context })
    }

    pub fn parse<S: AsRef<str>>(texts: &[S]) -> Result<Self> {
        let events = texts
            .iter()
            .map(|t| parse_event(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(events)
    }

    pub fn events(&self) -> &[EventFormula] {
        &self.events
    }

    pub fn context(&self) -> &VarContext {
        &self.context
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// A copy with `e` appended; new variables extend the context.
    pub fn extended(&self, e: EventFormula) -> Self {
        let mut context = self.context.clone();
        context.extend_with(&e);
        let mut events = self.events.clone();
        events.push(e);
        EventList { events, context }
    }
}

/// Prices for the events of an [`EventList`], by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Book {
    prices: Vec<Rational>,
}

impl Book {
    pub fn new(prices: Vec<Rational>) -> Result<Self> {
        if let Some(p) = prices.iter().find(|p| !in_unit_interval(p)) {
            return Err(Error::PriceOutOfRange(format_rational(p)));
        }
        Ok(Book { prices })
    }

    pub fn prices(&self) -> &[Rational] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateWitness {
    /// Valuations of the variables.
    pub points: Vec<Point>,
    pub weights: Vec<Rational>,
}

/// Stakes on each event such that, whatever the valuation, the total
/// payoff `Σ stakes[i]·(price[i] - value[i])` is at most `-guaranteed_loss`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DutchBook {
    pub stakes: Vec<Rational>,
    pub guaranteed_loss: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceVerdict {
    pub coherent: bool,
    pub state_witness: Option<StateWitness>,
    pub dutch_book: Option<DutchBook>,
}

/// The convex hull of the joint values of the events over `[0,1]^n`.
#[derive(Debug, Clone)]
pub struct CoherentSet {
    events: EventList,
    polytope: Polytope,
    functions: Vec<PwlFunction>,
    /// A valuation mapped onto each polytope vertex.
    preimages: Vec<Point>,
    /// Images of every refinement vertex.
    images: Vec<Point>,
}

pub fn coherent_set(events: &EventList) -> Result<CoherentSet> {
    coherent_set_with(events, &Limits::default(), &Strategy::default())
}

pub fn coherent_set_with(events: &EventList, limits: &Limits, strategy: &Strategy) -> Result<CoherentSet> {
    limits.check_events(events.len())?;
    limits.check_vars(events.context().len())?;
    for e in events.events() {
        limits.check_depth(e)?;
    }
    let ctx = events.context();
    let functions = events
        .events()
        .iter()
        .map(|e| mcnaughton_with(e, ctx, strategy))
        .collect::<Result<Vec<_>>>()?;
    let refinement = common_refinement_with(&functions, strategy)?;
    let mut by_valuation: BTreeMap<Point, Point> = BTreeMap::new();
    for (cell, forms) in refinement.cells.iter().zip(&refinement.forms) {
        for v in cell.vertices() {
            by_valuation
                .entry(v.clone())
                .or_insert_with(|| forms.iter().map(|f| f.eval(v)).collect());
        }
    }
    let mut preimage_of: BTreeMap<Point, Point> = BTreeMap::new();
    for (v, img) in &by_valuation {
        preimage_of.entry(img.clone()).or_insert_with(|| v.clone());
    }
    let images: Vec<Point> = preimage_of.keys().cloned().collect();
    let polytope = Polytope::hull_capped(&images, limits.max_events)?;
    let preimages = polytope.vertices().iter().map(|v| preimage_of[v].clone()).collect();
    Ok(CoherentSet {
        events: events.clone(),
        polytope,
        functions,
        preimages,
        images,
    })
}

pub fn check_book(events: &EventList, book: &Book) -> Result<CoherenceVerdict> {
    coherent_set(events)?.check(book)
}

/// The coherent prices for `psi` given a coherent book on `events`.
pub fn extension_interval(events: &EventList, book: &Book, psi: &EventFormula) -> Result<(Rational, Rational)> {
    extension_interval_with(events, book, psi, &Limits::default())
}

pub fn extension_interval_with(
    events: &EventList,
    book: &Book,
    psi: &EventFormula,
    limits: &Limits,
) -> Result<(Rational, Rational)> {
    let set = coherent_set_with(events, limits, &Strategy::default())?;
    let verdict = set.check(book)?;
    if let Some(db) = verdict.dutch_book {
        return Err(Error::Incoherent(Box::new(db)));
    }
    let wider = coherent_set_with(&events.extended(psi.clone()), limits, &Strategy::default())?;
    let k = events.len();
    let mut slice = wider.polytope.clone();
    for (i, price) in book.prices().iter().enumerate() {
        let mut e = vec![Rational::zero(); k + 1];
        e[i] = Rational::one();
        let upper = Halfspace::new(e, price.clone());
        for h in [upper.clone(), upper.flipped()] {
            slice = slice
                .intersect_halfspace(&h)
                .ok_or_else(|| Error::Internal("coherent book has an empty fiber".into()))?;
        }
    }
    let lo = slice.vertices().iter().map(|v| &v[k]).min().cloned();
    let hi = slice.vertices().iter().map(|v| &v[k]).max().cloned();
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::Internal("empty fiber".into())),
    }
}

impl CoherentSet {
    pub fn events(&self) -> &EventList {
        &self.events
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn functions(&self) -> &[PwlFunction] {
        &self.functions
    }

    /// Valuation whose image is the `i`-th polytope vertex.
    pub fn preimages(&self) -> &[Point] {
        &self.preimages
    }

    /// Distinct images of all refinement vertices.
    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn contains(&self, prices: &[Rational]) -> bool {
        self.polytope.contains(prices)
    }

    pub fn has_boolean_vertex(&self) -> bool {
        self.polytope.has_boolean_vertex()
    }

    /// Decides coherence of `book` and returns a verified certificate.
    pub fn check(&self, book: &Book) -> Result<CoherenceVerdict> {
        let k = self.events.len();
        if book.len() != k {
            return Err(Error::BookSize {
                expected: k,
                found: book.len(),
            });
        }
        let verdict = match self.polytope.membership(book.prices())? {
            MembershipCertificate::Inside { weights } => {
                let (points, weights) = self
                    .preimages
                    .iter()
                    .zip(weights)
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(p, w)| (p.clone(), w))
                    .unzip();
                CoherenceVerdict {
                    coherent: true,
                    state_witness: Some(StateWitness { points, weights }),
                    dutch_book: None,
                }
            }
            MembershipCertificate::Outside { normal, margin, .. } => {
                let neg: Vec<Rational> = normal.iter().map(|x| -x).collect();
                let stakes = primitive(&neg);
                let scale = neg
                    .iter()
                    .zip(&stakes)
                    .find(|(_, s)| !s.is_zero())
                    .map(|(n, s)| n / s)
                    .ok_or_else(|| Error::Internal("zero separator".into()))?;
                CoherenceVerdict {
                    coherent: false,
                    state_witness: None,
                    dutch_book: Some(DutchBook {
                        stakes,
                        guaranteed_loss: margin / scale,
                    }),
                }
            }
        };
        if !verdict.verify(self, book) {
            return Err(Error::Internal("coherence certificate failed to verify".into()));
        }
        Ok(verdict)
    }
}

impl StateWitness {
    /// Whether the weighted valuations reproduce every price exactly.
    pub fn verify(&self, set: &CoherentSet, book: &Book) -> bool {
        if self.points.len() != self.weights.len()
            || self.weights.iter().any(|w| !w.is_positive())
            || self.weights.iter().sum::<Rational>() != Rational::one()
        {
            return false;
        }
        set.functions.iter().zip(book.prices()).all(|(f, price)| {
            let mut acc = Rational::zero();
            for (p, w) in self.points.iter().zip(&self.weights) {
                match f.evaluate(p) {
                    Ok(v) => acc += w * v,
                    Err(_) => return false,
                }
            }
            acc == *price
        })
    }
}

impl DutchBook {
    /// The bettor's payoff against the values `values`.
    pub fn payoff(&self, book: &Book, values: &[Rational]) -> Rational {
        let diff: Vec<Rational> = book.prices().iter().zip(values).map(|(b, v)| b - v).collect();
        dot(&self.stakes, &diff)
    }

    /// Checks the sure loss at every refinement vertex, which suffices
    /// because the payoff is affine on each refinement cell.
    pub fn verify(&self, set: &CoherentSet, book: &Book) -> bool {
        let bound = -&self.guaranteed_loss;
        self.guaranteed_loss.is_positive()
            && self.stakes.len() == book.len()
            && set.images.iter().all(|img| self.payoff(book, img) <= bound)
    }
}

impl CoherenceVerdict {
    pub fn verify(&self, set: &CoherentSet, book: &Book) -> bool {
        match (&self.state_witness, &self.dutch_book) {
            (Some(w), None) => self.coherent && w.verify(set, book),
            (None, Some(d)) => !self.coherent && d.verify(set, book),
            _ => false,
        }
    }

    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            coherent: self.coherent,
            witness: self.state_witness.as_ref().map(|w| WitnessJson {
                points: w.points.iter().map(|p| format_point(p)).collect(),
                weights: format_point(&w.weights),
            }),
            dutch_book: self.dutch_book.as_ref().map(|d| DutchBookJson {
                stakes: format_point(&d.stakes),
                guaranteed_loss: format_rational(&d.guaranteed_loss),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub points: Vec<Vec<String>>,
    pub weights: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DutchBookJson {
    pub stakes: Vec<String>,
    pub guaranteed_loss: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub coherent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dutch_book: Option<DutchBookJson>,
}
