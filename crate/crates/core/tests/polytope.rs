mod common;

use coh_core::affine::AffineForm;
use coh_core::polytope::{convex_hull, MembershipCertificate, Polytope};
use coh_core::rational::{int, rat, Point, Rational};
use coh_core::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::{farey, Gen};

fn p(xs: &[(i64, i64)]) -> Point {
    xs.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn sorted(mut vs: Vec<Point>) -> Vec<Point> {
    vs.sort();
    vs
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

// Planar oracle: q is redundant iff it lies in a triangle (possibly
// degenerate) spanned by three of the other points.
fn redundant_2d(q: &Point, others: &[Point]) -> bool {
    let n = others.len();
    if others.contains(q) {
        return true;
    }
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let (a, b, c) = (&others[i], &others[j], &others[k]);
                let s = [cross(a, b, q), cross(b, c, q), cross(c, a, q)];
                let inside = s.iter().all(|t| !t.is_negative()) || s.iter().all(|t| !t.is_positive());
                let between = |u: &Point, v: &Point| {
                    cross(u, v, q).is_zero()
                        && (0..2).all(|d| (&q[d] - &u[d]) * (&q[d] - &v[d]) <= Rational::zero())
                };
                let degenerate = cross(a, b, c).is_zero();
                if (!degenerate && inside) || (degenerate && (between(a, b) || between(b, c) || between(a, c))) {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn hull_drops_edge_point() {
    let pts = vec![p(&[(0, 1), (0, 1)]), p(&[(1, 1), (1, 1)]), p(&[(1, 2), (1, 1)]), p(&[(3, 4), (1, 1)])];
    let h = convex_hull(&pts).unwrap();
    let want = sorted(vec![p(&[(0, 1), (0, 1)]), p(&[(1, 1), (1, 1)]), p(&[(1, 2), (1, 1)])]);
    assert_eq!(sorted(h.vertices().to_vec()), want);
    for (i, q) in pts.iter().enumerate() {
        let others: Vec<Point> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
        assert_eq!(redundant_2d(q, &others), !want.contains(q));
    }
}

#[test]
fn hull_trivial_cases() {
    let one = convex_hull(&[p(&[(1, 3), (2, 3)])]).unwrap();
    assert_eq!(one.vertices(), [p(&[(1, 3), (2, 3)])]);
    let corners = vec![p(&[(0, 1), (0, 1)]), p(&[(0, 1), (1, 1)]), p(&[(1, 1), (0, 1)]), p(&[(1, 1), (1, 1)])];
    assert_eq!(convex_hull(&corners).unwrap(), Polytope::cube(2));
    assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
    assert!(matches!(
        convex_hull(&[vec![int(0)], vec![int(0), int(1)]]),
        Err(Error::RaggedDimensions)
    ));
}

#[test]
fn centre_of_square_uses_lexmin_weights() {
    let c = p(&[(1, 2), (1, 2)]);
    let sq = Polytope::cube(2);
    let cert = sq.membership(&c).unwrap();
    assert!(cert.verify(&sq, &c));
    assert_eq!(
        cert,
        MembershipCertificate::Inside {
            weights: vec![int(0), rat(1, 2), rat(1, 2), int(0)]
        }
    );
}

#[test]
fn separator_for_triangle() {
    let tri = convex_hull(&[p(&[(0, 1), (0, 1)]), p(&[(1, 1), (1, 1)]), p(&[(1, 2), (1, 1)])]).unwrap();
    let q = p(&[(1, 1), (0, 1)]);
    let cert = tri.membership(&q).unwrap();
    assert!(cert.verify(&tri, &q));
    assert_eq!(
        cert,
        MembershipCertificate::Outside {
            normal: vec![int(1), int(-1)],
            threshold: int(0),
            margin: int(1)
        }
    );
}

#[test]
fn separator_for_interval() {
    let half = convex_hull(&[vec![rat(1, 2)], vec![int(1)]]).unwrap();
    let q = vec![rat(1, 4)];
    let cert = half.membership(&q).unwrap();
    assert!(cert.verify(&half, &q));
    match cert {
        MembershipCertificate::Outside { normal, threshold, margin } => {
            // the integer row -2x <= -1
            assert_eq!(normal, vec![int(-2)]);
            assert_eq!(threshold, int(-1));
            assert_eq!(margin, rat(1, 2));
        }
        other => panic!("expected a separator, got {other:?}"),
    }
    assert!(matches!(half.membership(&[int(0), int(0)]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn projections() {
    let c = convex_hull(&[
        p(&[(0, 1), (0, 1), (0, 1)]),
        p(&[(1, 1), (0, 1), (0, 1)]),
        p(&[(1, 1), (1, 1), (1, 1)]),
        p(&[(1, 1), (1, 2), (0, 1)]),
    ])
    .unwrap();
    let face = convex_hull(&[p(&[(0, 1), (0, 1)]), p(&[(1, 1), (0, 1)]), p(&[(1, 1), (1, 1)])]).unwrap();
    assert_eq!(c.project(&[0, 2]).unwrap(), face);
    assert_eq!(c.project(&[0, 1, 2]).unwrap(), c);
    assert!(matches!(c.project(&[]), Err(Error::InvalidCoordinates(_))));
    assert!(matches!(c.project(&[3]), Err(Error::InvalidCoordinates(_))));
}

#[test]
fn affine_images() {
    let tri = convex_hull(&[p(&[(0, 1), (0, 1)]), p(&[(1, 1), (1, 1)]), p(&[(1, 2), (1, 1)])]).unwrap();
    let id = [AffineForm::projection(2, 0), AffineForm::projection(2, 1)];
    assert_eq!(tri.affine_image(&id).unwrap(), tri);
    let swap = [AffineForm::projection(2, 1), AffineForm::projection(2, 0)];
    let swapped = tri.affine_image(&swap).unwrap();
    let want: Vec<Point> = tri.vertices().iter().map(|v| vec![v[1].clone(), v[0].clone()]).collect();
    assert_eq!(swapped, convex_hull(&want).unwrap());
    let unit = Polytope::cube(1);
    let doubled = unit.affine_image(&[AffineForm::projection(1, 0).scale(2)]).unwrap();
    assert_eq!(sorted(doubled.vertices().to_vec()), vec![vec![int(0)], vec![int(2)]]);
    assert!(tri.affine_image(&[AffineForm::projection(3, 0)]).is_err());
}

fn random_hull(g: &mut Gen) -> Polytope {
    let values = farey(4);
    let dim = g.rng.gen_range(1..=4);
    let n = g.rng.gen_range(1..=8);
    let pts: Vec<Point> = (0..n).map(|_| (0..dim).map(|_| g.pick(&values)).collect()).collect();
    convex_hull(&pts).unwrap()
}

// Rank of a set of rational vectors, by plain Gaussian elimination.
fn rank(rows: &[Point]) -> usize {
    let mut m: Vec<Point> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn affine_rank(pts: &[&Point]) -> usize {
    match pts.split_first() {
        None => 0,
        Some((o, rest)) => rank(
            &rest
                .iter()
                .map(|q| q.iter().zip(o.iter()).map(|(a, b)| a - b).collect())
                .collect::<Vec<_>>(),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hull_is_idempotent(seed in any::<u64>()) {
        let h = random_hull(&mut Gen::new(seed));
        prop_assert_eq!(convex_hull(h.vertices()).unwrap(), h);
    }

    #[test]
    fn representations_agree(seed in any::<u64>()) {
        let h = random_hull(&mut Gen::new(seed));
        let k = affine_rank(&h.vertices().iter().collect::<Vec<_>>());
        prop_assert_eq!(h.affine_dim(), k);
        for hs in h.halfspaces() {
            prop_assert!(hs.normal.iter().all(|a| a.is_integer()) && hs.offset.is_integer());
            let content = hs
                .normal
                .iter()
                .chain([&hs.offset])
                .fold(BigInt::zero(), |g, a| num_integer::Integer::gcd(&g, &a.to_integer()));
            prop_assert!(content.is_one());
            prop_assert!(h.vertices().iter().all(|v| hs.contains(v)));
            let tight: Vec<&Point> = h.vertices().iter().filter(|v| hs.slack(v).is_zero()).collect();
            // a facet, or an equation pinning the affine hull
            prop_assert!(affine_rank(&tight) + 1 >= k || tight.len() == h.vertices().len());
        }
        for v in h.vertices() {
            let others: Vec<Point> = h.vertices().iter().filter(|w| *w != v).cloned().collect();
            if !others.is_empty() {
                prop_assert!(!convex_hull(&others).unwrap().contains(v));
            }
        }
    }

    #[test]
    fn projections_compose(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let h = random_hull(&mut g);
        let all: Vec<usize> = (0..h.dim()).collect();
        let s: Vec<usize> = all.iter().copied().filter(|_| g.rng.gen_bool(0.7)).collect();
        prop_assume!(!s.is_empty());
        let t: Vec<usize> = (0..s.len()).filter(|_| g.rng.gen_bool(0.6)).collect();
        prop_assume!(!t.is_empty());
        let direct: Vec<usize> = t.iter().map(|&i| s[i]).collect();
        let ps = h.project(&s).unwrap();
        prop_assert_eq!(ps.project(&t).unwrap(), h.project(&direct).unwrap());
        for v in h.vertices() {
            let image: Point = s.iter().map(|&i| v[i].clone()).collect();
            prop_assert!(ps.contains(&image));
        }
    }

    #[test]
    fn certificates_verify(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let h = random_hull(&mut g);
        let values = farey(5);
        for _ in 0..6 {
            let q: Point = (0..h.dim()).map(|_| g.pick(&values)).collect();
            let cert = h.membership(&q).unwrap();
            prop_assert!(cert.verify(&h, &q));
            prop_assert_eq!(cert.is_inside(), h.contains(&q));
        }
    }
}
