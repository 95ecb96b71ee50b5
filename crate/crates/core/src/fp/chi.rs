//! Formulas whose onesets are prescribed rational polytopes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::formula::{EventFormula, Formula, VarContext};
use crate::polytope::Polytope;
use crate::pwl::{mcnaughton, PwlFunction};

fn oplus(a: EventFormula, b: EventFormula) -> EventFormula {
    match (a, b) {
        (Formula::Bot, x) | (x, Formula::Bot) => x,
        (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
        (a, b) => Formula::oplus(a, b),
    }
}

fn otimes(a: EventFormula, b: EventFormula) -> EventFormula {
    match (a, b) {
        (Formula::Top, x) | (x, Formula::Top) => x,
        (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
        (a, b) => Formula::otimes(a, b),
    }
}

/// Builds terms for `min(1, max(0, ℓ))` with integer affine `ℓ`.
struct Truncations<'a> {
    names: &'a [String],
    memo: HashMap<AffineForm, EventFormula>,
}

impl Truncations<'_> {
    fn term(&mut self, l: &AffineForm) -> EventFormula {
        if let Some(t) = self.memo.get(l) {
            return t.clone();
        }
        let t = self.build(l);
        self.memo.insert(l.clone(), t.clone());
        t
    }

    fn build(&mut self, l: &AffineForm) -> EventFormula {
        let lo: BigInt = &l.constant + l.coefficients.iter().filter(|c| c.is_negative()).sum::<BigInt>();
        let hi: BigInt = &l.constant + l.coefficients.iter().filter(|c| c.is_positive()).sum::<BigInt>();
        if lo >= BigInt::one() {
            return Formula::Top;
        }
        if hi <= BigInt::zero() {
            return Formula::Bot;
        }
        let n = l.arity();
        let i = (0..n)
            .rev()
            .find(|&i| !l.coefficients[i].is_zero())
            .expect("non-constant form");
        let x = Formula::Atom(self.names[i].clone());
        let xi = AffineForm::projection(n, i);
        if *l == xi {
            return x;
        }
        if *l == xi.complement() {
            return Formula::neg(x);
        }
        // With ℓ = u + y for y ∈ [0,1]: T(ℓ) = (T(u) ⊕ y) ⊙ T(u + 1).
        let (u, y) = if l.coefficients[i].is_positive() {
            (l.sub(&xi), x)
        } else {
            (l.add(&xi).shift(-1), Formula::neg(x))
        };
        let low = self.term(&u);
        let high = self.term(&u.shift(1));
        otimes(oplus(low, y), high)
    }
}

/// A formula whose McNaughton function takes value 1 exactly on `p`.
///
/// One truncated term `min(1, max(0, 1 + b - a·x))` per halfspace
/// `a·x <= b` of `p`, in lexicographic order, joined by `∧`.
pub fn chi_synthesis(p: &Polytope, ctx: &VarContext) -> Result<EventFormula> {
    if p.dim() != ctx.len() {
        return Err(Error::DimensionMismatch {
            expected: ctx.len(),
            found: p.dim(),
        });
    }
    if !p.is_in_unit_cube() {
        return Err(Error::NotInCube);
    }
    let mut halfspaces = p.halfspaces().to_vec();
    halfspaces.sort();
    let mut builder = Truncations {
        names: ctx.names(),
        memo: HashMap::new(),
    };
    let mut chi: Option<EventFormula> = None;
    for h in &halfspaces {
        let cube_max: num_rational::BigRational = h.normal.iter().filter(|a| a.is_positive()).sum();
        if cube_max <= h.offset {
            continue;
        }
        let l = AffineForm {
            constant: (num_rational::BigRational::one() + &h.offset).to_integer(),
            coefficients: h.normal.iter().map(|a| -a.to_integer()).collect(),
        };
        let t = builder.term(&l);
        chi = Some(match chi {
            None => t,
            Some(c) => Formula::and(c, t),
        });
    }
    let chi = chi.unwrap_or(Formula::Top);
    let f = mcnaughton(&chi, ctx)?;
    if !oneset_equals(&f, p) {
        return Err(Error::Internal("synthesized formula has the wrong oneset".into()));
    }
    Ok(chi)
}

/// Whether `{x : f(x) = 1}` is exactly `p`.
pub fn oneset_equals(f: &PwlFunction, p: &Polytope) -> bool {
    if f.arity() != p.dim() {
        return false;
    }
    // f = 1 on p: on each cell, the form is 1 at every vertex of cell ∩ p.
    for c in f.cells() {
        let Some(piece) = c.polytope.intersect(p) else {
            continue;
        };
        if piece.vertices().iter().any(|v| !c.form.eval(v).is_one()) {
            return false;
        }
    }
    f.oneset().iter().all(|q| q.is_subset_of(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_event;
    use crate::polytope::convex_hull;
    use crate::rational::{int, rat};

    #[test]
    fn half_interval() {
        let ctx = VarContext::from_names(["x"]);
        let p = convex_hull(&[vec![rat(1, 2)], vec![int(1)]]).unwrap();
        let chi = chi_synthesis(&p, &ctx).unwrap();
        let f = mcnaughton(&chi, &ctx).unwrap();
        let g = mcnaughton(&parse_event("x + x").unwrap(), &ctx).unwrap();
        for k in 0..=10 {
            let v = [rat(k, 10)];
            assert_eq!(f.evaluate(&v).unwrap().is_one(), g.evaluate(&v).unwrap().is_one());
        }
    }

    #[test]
    fn cube_gives_top() {
        let ctx = VarContext::from_names(["x", "y"]);
        assert_eq!(chi_synthesis(&Polytope::cube(2), &ctx).unwrap(), Formula::Top);
    }

    #[test]
    fn join_sum_triangle_roundtrip() {
        let ctx = VarContext::from_names(["p1", "p2"]);
        let p = convex_hull(&[vec![int(0), int(0)], vec![int(1), int(1)], vec![rat(1, 2), int(1)]]).unwrap();
        let chi = chi_synthesis(&p, &ctx).unwrap();
        assert!(oneset_equals(&mcnaughton(&chi, &ctx).unwrap(), &p));
    }

    #[test]
    fn rejects_points_outside_cube() {
        let ctx = VarContext::from_names(["x"]);
        let p = convex_hull(&[vec![int(0)], vec![int(2)]]).unwrap();
        assert_eq!(chi_synthesis(&p, &ctx), Err(Error::NotInCube));
    }

    #[test]
    fn single_points() {
        let ctx = VarContext::from_names(["x", "y"]);
        let p = convex_hull(&[vec![rat(1, 3), rat(2, 3)]]).unwrap();
        let chi = chi_synthesis(&p, &ctx).unwrap();
        assert!(oneset_equals(&mcnaughton(&chi, &ctx).unwrap(), &p));
    }
}
