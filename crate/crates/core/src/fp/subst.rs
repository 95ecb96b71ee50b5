//! Probabilistic substitutions and verification of unifiers.

use indexmap::IndexMap;

use crate::coherence::{coherent_set_with, EventList};
use crate::error::{Error, Result};
use crate::formula::{EventFormula, Formula};
use crate::limits::Limits;
use crate::pwl::{common_refinement, mcnaughton};
use crate::rational::Point;

use super::{coherent_set_of, ground_value, is_theorem_with, parse_modal, translate, ModalFormula, TranslationContext};

/// Map from atoms `P(φ)` to modal formulas, keyed by the canonical text of φ.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProbSubstitution {
    map: IndexMap<String, (EventFormula, ModalFormula)>,
}

impl ProbSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity<'a, I: IntoIterator<Item = &'a EventFormula>>(atoms: I) -> Self {
        let mut s = Self::new();
        for a in atoms {
            s.insert(a.clone(), Formula::Atom(a.clone()));
        }
        s
    }

    /// Parses `(atom, image)` pairs such as `("P(x)", "P(y) + P(y)")`.
    pub fn parse<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let mut s = Self::new();
        for (atom, image) in pairs {
            let a = match parse_modal(atom.as_ref())? {
                Formula::Atom(e) => e,
                other => {
                    return Err(Error::DomainMismatch(format!(
                        "`{}` is not an atomic modal formula",
                        other.canonical()
                    )))
                }
            };
            s.insert(a, parse_modal(image.as_ref())?);
        }
        Ok(s)
    }

    pub fn insert(&mut self, atom: EventFormula, image: ModalFormula) {
        self.map.insert(atom.canonical(), (atom, image));
    }

    pub fn get(&self, atom: &EventFormula) -> Option<&ModalFormula> {
        self.map.get(&atom.canonical()).map(|(_, f)| f)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &EventFormula> {
        self.map.values().map(|(a, _)| a)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, atom: &EventFormula) -> Result<&ModalFormula> {
        self.get(atom)
            .ok_or_else(|| Error::DomainMismatch(format!("P({})", atom.canonical())))
    }

    pub fn apply(&self, f: &ModalFormula) -> Result<ModalFormula> {
        f.try_map_atoms(&mut |a: &EventFormula| self.image(a).cloned())
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn after(&self, inner: &ProbSubstitution) -> Result<ProbSubstitution> {
        let mut out = Self::new();
        for (a, image) in inner.map.values() {
            out.insert(a.clone(), self.apply(image)?);
        }
        Ok(out)
    }
}

/// Identities `lhs = rhs` over a declared set of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnificationProblem {
    atoms: Vec<EventFormula>,
    identities: Vec<(ModalFormula, ModalFormula)>,
}

impl UnificationProblem {
    /// Atoms are those of the identities, in order of first occurrence.
    pub fn new(identities: Vec<(ModalFormula, ModalFormula)>) -> Result<Self> {
        let mut atoms: Vec<EventFormula> = Vec::new();
        for (l, r) in &identities {
            for a in l.atoms().into_iter().chain(r.atoms()) {
                if !atoms.contains(a) {
                    atoms.push(a.clone());
                }
            }
        }
        Self::with_atoms(atoms, identities)
    }

    pub fn with_atoms(atoms: Vec<EventFormula>, identities: Vec<(ModalFormula, ModalFormula)>) -> Result<Self> {
        for (l, r) in &identities {
            for a in l.atoms().into_iter().chain(r.atoms()) {
                if !atoms.contains(a) {
                    return Err(Error::DomainMismatch(format!("P({}) is not declared", a.canonical())));
                }
            }
        }
        Ok(UnificationProblem { atoms, identities })
    }

    pub fn atoms(&self) -> &[EventFormula] {
        &self.atoms
    }

    pub fn identities(&self) -> &[(ModalFormula, ModalFormula)] {
        &self.identities
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionCheck {
    pub holds: bool,
    /// Image of a coherent book that falls outside the coherent set of the
    /// original events.
    pub witness: Option<Point>,
}

/// Decides whether `sigma` maps every coherent book on the events of its
/// images into the coherent set of `events`.
pub fn is_prob_substitution(sigma: &ProbSubstitution, events: &EventList) -> Result<SubstitutionCheck> {
    is_prob_substitution_with(sigma, events, &Limits::default())
}

pub fn is_prob_substitution_with(
    sigma: &ProbSubstitution,
    events: &EventList,
    limits: &Limits,
) -> Result<SubstitutionCheck> {
    let images = events
        .events()
        .iter()
        .map(|e| sigma.image(e).cloned())
        .collect::<Result<Vec<_>>>()?;
    let target = coherent_set_with(events, limits, &Default::default())?;
    let mut ctx = TranslationContext::new();
    let translated: Vec<EventFormula> = images.iter().map(|r| translate(r, &mut ctx)).collect();
    for r in &images {
        limits.check_depth(r)?;
    }
    let check = |point: Point| SubstitutionCheck {
        holds: false,
        witness: Some(point),
    };
    if ctx.is_empty() {
        let point: Point = translated.iter().map(ground_value).collect();
        if target.contains(&point) {
            return Ok(SubstitutionCheck {
                holds: true,
                witness: None,
            });
        }
        return Ok(check(point));
    }
    let source = coherent_set_of(&ctx, limits)?;
    let vars = ctx.variables();
    let fs = translated
        .iter()
        .map(|r| mcnaughton(r, &vars))
        .collect::<Result<Vec<_>>>()?;
    let refinement = common_refinement(&fs)?;
    for (cell, forms) in refinement.cells.iter().zip(&refinement.forms) {
        let Some(piece) = cell.intersect(source.polytope()) else {
            continue;
        };
        for v in piece.vertices() {
            let point: Point = forms.iter().map(|f| f.eval(v)).collect();
            if !target.contains(&point) {
                return Ok(check(point));
            }
        }
    }
    Ok(SubstitutionCheck {
        holds: true,
        witness: None,
    })
}

/// `sigma` is a probabilistic substitution and makes every identity of
/// `problem` provable.
pub fn verify_unifier(problem: &UnificationProblem, sigma: &ProbSubstitution) -> Result<bool> {
    verify_unifier_with(problem, sigma, &Limits::default())
}

pub fn verify_unifier_with(problem: &UnificationProblem, sigma: &ProbSubstitution, limits: &Limits) -> Result<bool> {
    if problem.atoms.is_empty() {
        for (l, r) in &problem.identities {
            if !is_theorem_with(&Formula::iff(l.clone(), r.clone()), limits)?.holds {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let events = EventList::new(problem.atoms.clone())?;
    if !is_prob_substitution_with(sigma, &events, limits)?.holds {
        return Ok(false);
    }
    for (l, r) in &problem.identities {
        let f = Formula::iff(sigma.apply(l)?, sigma.apply(r)?);
        if !is_theorem_with(&f, limits)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `sigma = delta ∘ tau` holds provably on every atom of `problem`.
pub fn verify_generality(
    sigma: &ProbSubstitution,
    tau: &ProbSubstitution,
    delta: &ProbSubstitution,
    problem: &UnificationProblem,
) -> Result<bool> {
    verify_generality_with(sigma, tau, delta, problem, &Limits::default())
}

pub fn verify_generality_with(
    sigma: &ProbSubstitution,
    tau: &ProbSubstitution,
    delta: &ProbSubstitution,
    problem: &UnificationProblem,
    limits: &Limits,
) -> Result<bool> {
    let mut pairs = Vec::with_capacity(problem.atoms.len());
    for a in &problem.atoms {
        let lhs = sigma.image(a)?.clone();
        let rhs = delta.apply(tau.image(a)?)?;
        pairs.push((lhs, rhs));
    }
    for (lhs, rhs) in pairs {
        if !is_theorem_with(&Formula::iff(lhs, rhs), limits)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}
