//! Exact de Finetti coherence for books on Łukasiewicz events, and a
//! decision procedure for the two-layer probability logic FP(Ł,Ł) built on
//! rational polyhedral geometry.

pub mod affine;
pub mod cli;
pub mod coherence;
pub mod error;
pub mod formula;
pub mod fp;
pub mod limits;
pub mod polytope;
pub mod pwl;
pub mod rational;

pub use affine::AffineForm;
pub use coherence::{
    check_book, coherent_set, extension_interval, Book, CoherenceVerdict, CoherentSet, DutchBook, EventList,
    StateWitness,
};
pub use error::{Error, Result};
pub use fp::{
    decide_consequence, local_deduction_exponent, parse_modal, translate, Consequence, Countermodel, ModalFormula,
    ProbSubstitution, TranslationContext, UnificationProblem,
};
pub use formula::{parse_event, EventFormula, Formula, VarContext};
pub use limits::Limits;
pub use polytope::{convex_hull, Halfspace, MembershipCertificate, Polytope};
pub use pwl::{common_refinement, mcnaughton, PwlFunction, Refinement};
pub use rational::{format_rational, parse_rational, Point, Rational};
