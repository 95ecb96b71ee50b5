//! Double-description method for polyhedral cones `{y : A y >= 0}`.

use num_traits::{Signed, Zero};

use super::bitset::BitSet;
use crate::rational::{dot, primitive, Rational};

#[derive(Debug, Clone)]
pub(crate) struct ConeGenerators {
    /// Basis of the lineality space.
    pub lineality: Vec<Vec<Rational>>,
    /// Extreme rays of the cone modulo its lineality space.
    pub rays: Vec<Vec<Rational>>,
}

fn axpy(y: &[Rational], a: &Rational, x: &[Rational]) -> Vec<Rational> {
    y.iter().zip(x).map(|(yi, xi)| yi - a * xi).collect()
}

/// Minimal generators of `{y in R^dim : row·y >= 0 for every row}`.
pub(crate) fn cone_generators(dim: usize, rows: &[Vec<Rational>]) -> ConeGenerators {
    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut e = vec![Rational::zero(); dim];
            e[i] = Rational::from_integer(1.into());
            e
        })
        .collect();
    let mut rays: Vec<(Vec<Rational>, BitSet)> = Vec::new();

    for (ri, row) in rows.iter().enumerate() {
        if let Some(j) = lineality.iter().position(|l| !dot(row, l).is_zero()) {
            let mut l0 = lineality.remove(j);
            let mut s0 = dot(row, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let s = dot(row, l);
                if !s.is_zero() {
                    *l = axpy(l, &(s / &s0), &l0);
                }
            }
            for (r, z) in rays.iter_mut() {
                let s = dot(row, r);
                if !s.is_zero() {
                    *r = primitive(&axpy(r, &(s / &s0), &l0));
                }
                z.insert(ri);
            }
            // l0 vanished on every earlier row.
            let mut z = BitSet::new(rows.len());
            for k in 0..ri {
                z.insert(k);
            }
            rays.push((primitive(&l0), z));
            continue;
        }

        let signs: Vec<Rational> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let mut next: Vec<(Vec<Rational>, BitSet)> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if signs[i].is_zero() {
                    z.insert(ri);
                }
            }
            continue;
        }
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].1.intersection(&rays[n].1);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, (_, z))| k == p || k == n || !common.is_subset(z));
                if !adjacent {
                    continue;
                }
                let sp = &signs[p];
                let sn = -&signs[n];
                let ray: Vec<Rational> = rays[p]
                    .0
                    .iter()
                    .zip(&rays[n].0)
                    .map(|(a, b)| sn.clone() * a + sp * b)
                    .collect();
                let mut z = common;
                z.insert(ri);
                next.push((primitive(&ray), z));
            }
        }
        for (i, (r, mut z)) in rays.into_iter().enumerate() {
            if signs[i].is_negative() {
                continue;
            }
            if signs[i].is_zero() {
                z.insert(ri);
            }
            next.push((r, z));
        }
        rays = next;
    }

    ConeGenerators {
        lineality,
        rays: rays.into_iter().map(|(r, _)| r).collect(),
    }
}
