//! Random formula generators and pointwise oracles shared by the
//! integration tests.
#![allow(dead_code)]

use coh_core::formula::Formula;
use coh_core::rational::{int, rat, Point, Rational};
use coh_core::{EventFormula, ModalFormula};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn formula<A: Clone>(&mut self, atoms: &[A], depth: usize) -> Formula<A> {
        if depth == 0 || self.rng.gen_ratio(1, 4) {
            return match self.rng.gen_range(0..20) {
                0 => Formula::Bot,
                1 => Formula::Top,
                _ => Formula::Atom(atoms[self.rng.gen_range(0..atoms.len())].clone()),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 => Formula::neg(self.formula(atoms, d)),
            1 => Formula::power(self.formula(atoms, d), self.rng.gen_range(2..=3)),
            2 => Formula::multiple(self.rng.gen_range(2..=3), self.formula(atoms, d)),
            k => {
                let l = self.formula(atoms, d);
                let r = self.formula(atoms, d);
                match k {
                    3 | 4 => Formula::oplus(l, r),
                    5 => Formula::otimes(l, r),
                    6 => Formula::imp(l, r),
                    7 => Formula::or(l, r),
                    8 => Formula::and(l, r),
                    _ => Formula::iff(l, r),
                }
            }
        }
    }

    pub fn event(&mut self, vars: &[&str], depth: usize) -> EventFormula {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        self.formula(&names, depth)
    }

    /// An event that mentions at least one variable.
    pub fn proper_event(&mut self, vars: &[&str], depth: usize) -> EventFormula {
        loop {
            let e = self.event(vars, depth);
            if !e.atoms().is_empty() {
                return e;
            }
        }
    }

    pub fn modal(&mut self, atoms: &[EventFormula], depth: usize) -> ModalFormula {
        self.formula(atoms, depth)
    }

    pub fn event_list(&mut self, max_events: usize, vars: &[&str], depth: usize) -> Vec<EventFormula> {
        let k = self.rng.gen_range(1..=max_events);
        (0..k).map(|_| self.proper_event(vars, depth)).collect()
    }

    pub fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs[self.rng.gen_range(0..xs.len())].clone()
    }
}

/// Reduced fractions in [0,1] with denominator at most `n`.
pub fn farey(n: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=n).flat_map(|d| (0..=d).map(move |k| rat(k, d))).collect();
    out.sort();
    out.dedup();
    out
}

/// All points of `values^k`.
pub fn grid(values: &[Rational], k: usize) -> Vec<Point> {
    let mut pts: Vec<Point> = vec![vec![]];
    for _ in 0..k {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    pts
}

/// Pointwise value through the primitive basis only: `x ⊕ y = min(1, x+y)`,
/// `¬x = 1 - x`, `⊥ = 0`.
pub fn oracle<A: Clone, F: Fn(&A) -> Rational>(f: &Formula<A>, val: &F) -> Rational {
    fn go<A, F: Fn(&A) -> Rational>(f: &Formula<A>, val: &F) -> Rational {
        match f {
            Formula::Atom(a) => val(a),
            Formula::Bot => Rational::zero(),
            Formula::Neg(g) => Rational::one() - go(g, val),
            Formula::OPlus(a, b) => (go(a, val) + go(b, val)).min(Rational::one()),
            _ => unreachable!("not in the primitive basis"),
        }
    }
    go(&f.normalize(), val)
}

pub fn oracle_event(f: &EventFormula, names: &[String], point: &[Rational]) -> Rational {
    oracle(f, &|a: &String| point[names.iter().position(|n| n == a).expect("known variable")].clone())
}

pub fn zero() -> Rational {
    int(0)
}
