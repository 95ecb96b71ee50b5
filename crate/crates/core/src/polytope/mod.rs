//! Exact rational convex polytopes kept in both vertex and halfspace form.
//!
//! Every [`Polytope`] carries its full (irredundant) vertex list and a
//! halfspace list that defines the same set. Vertex lists are kept sorted,
//! so two polytopes are equal exactly when their vertex lists are equal.

mod bitset;
mod dd;
pub mod lp;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::rational::{dot, format_point, format_rational, int, primitive, Point, Rational};

use bitset::BitSet;
use lp::LpOutcome;

/// Default cap on the ambient dimension of vertex/halfspace conversion.
pub const MAX_DIM: usize = 6;

/// The closed halfspace `normal·x <= offset`, scaled to a primitive integer row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Self {
        let mut row = normal;
        row.push(offset);
        let mut row = primitive(&row);
        let offset = row.pop().expect("nonempty row");
        Halfspace { normal: row, offset }
    }

    /// `offset - normal·p`; nonnegative exactly on the halfspace.
    pub fn slack(&self, p: &[Rational]) -> Rational {
        &self.offset - dot(&self.normal, p)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        !self.slack(p).is_negative()
    }

    /// The opposite closed halfspace `normal·x >= offset`.
    pub fn flipped(&self) -> Self {
        Halfspace {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -&self.offset,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.normal.iter().map(format_rational).collect();
        write!(f, "[{}]·x <= {}", terms.join(", "), format_rational(&self.offset))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipCertificate {
    /// Convex weights over the polytope's vertex list.
    Inside { weights: Vec<Rational> },
    /// `normal·v <= threshold` on every vertex while `normal·p = threshold + margin`.
    Outside {
        normal: Vec<Rational>,
        threshold: Rational,
        margin: Rational,
    },
}

impl MembershipCertificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipCertificate::Inside { .. })
    }

    /// Re-checks the certificate against `poly` and `p` by exact arithmetic.
    pub fn verify(&self, poly: &Polytope, p: &[Rational]) -> bool {
        match self {
            MembershipCertificate::Inside { weights } => {
                if weights.len() != poly.vertices.len()
                    || weights.iter().any(Signed::is_negative)
                    || weights.iter().sum::<Rational>() != Rational::one()
                {
                    return false;
                }
                (0..poly.dim).all(|i| {
                    let coord: Rational = weights
                        .iter()
                        .zip(&poly.vertices)
                        .map(|(w, v)| w * &v[i])
                        .sum();
                    coord == p[i]
                })
            }
            MembershipCertificate::Outside {
                normal,
                threshold,
                margin,
            } => {
                margin.is_positive()
                    && poly.vertices.iter().all(|v| dot(normal, v) <= *threshold)
                    && dot(normal, p) == threshold + margin
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    affine_dim: usize,
    vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

pub(crate) fn rank(vectors: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = vectors.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let prow = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot;
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

pub(crate) fn affine_rank(points: &[&Point]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<Vec<Rational>> = rest
                .iter()
                .map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect())
                .collect();
            rank(&diffs)
        }
    }
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        let prow = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot;
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
    det
}

fn check_points(points: &[Point]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::RaggedDimensions);
    }
    Ok(dim)
}

/// Irredundant convex hull of a finite point set.
pub fn convex_hull(points: &[Point]) -> Result<Polytope> {
    Polytope::hull_capped(points, MAX_DIM)
}

impl Polytope {
    fn incidence_of(vertices: &[Point], halfspaces: &[Halfspace]) -> Vec<BitSet> {
        vertices
            .iter()
            .map(|v| {
                let mut s = BitSet::new(halfspaces.len());
                for (i, h) in halfspaces.iter().enumerate() {
                    if h.slack(v).is_zero() {
                        s.insert(i);
                    }
                }
                s
            })
            .collect()
    }

    /// Assembles a polytope from a complete vertex list and a defining
    /// halfspace list, dropping halfspaces that cannot be facets.
    fn from_parts(dim: usize, mut vertices: Vec<Point>, halfspaces: Vec<Halfspace>) -> Self {
        vertices.sort();
        vertices.dedup();
        let refs: Vec<&Point> = vertices.iter().collect();
        let affine_dim = affine_rank(&refs);
        let mut hs: Vec<Halfspace> = halfspaces.into_iter().filter(|h| !h.is_trivial()).collect();
        hs.sort();
        hs.dedup();
        let hs = hs
            .into_iter()
            .filter(|h| {
                let tight = vertices.iter().filter(|v| h.slack(v).is_zero()).count();
                tight > 0 && tight >= affine_dim
            })
            .collect();
        Polytope {
            dim,
            affine_dim,
            vertices,
            halfspaces: hs,
        }
    }

    pub fn cube(dim: usize) -> Self {
        let mut vertices = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            vertices.push((0..dim).map(|i| int(((mask >> i) & 1) as i64)).collect());
        }
        Self::from_parts(dim, vertices, cube_halfspaces(dim))
    }

    pub fn hull_capped(points: &[Point], cap: usize) -> Result<Self> {
        let dim = check_points(points)?;
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() == 1 {
            let p = &pts[0];
            let mut hs = Vec::with_capacity(2 * dim);
            for i in 0..dim {
                let mut e = vec![Rational::zero(); dim];
                e[i] = Rational::one();
                let h = Halfspace::new(e, p[i].clone());
                hs.push(h.flipped());
                hs.push(h);
            }
            return Ok(Self::from_parts(dim, pts, hs));
        }
        // Valid inequalities (a, b) with a·v <= b form the cone {(a,b) : b - a·v >= 0}.
        let rows: Vec<Vec<Rational>> = pts
            .iter()
            .map(|v| {
                let mut r: Vec<Rational> = v.iter().map(|x| -x).collect();
                r.push(Rational::one());
                r
            })
            .collect();
        let gens = dd::cone_generators(dim + 1, &rows);
        let mut hs = Vec::new();
        let split = |g: &Vec<Rational>| (g[..dim].to_vec(), g[dim].clone());
        for g in &gens.lineality {
            let (a, b) = split(g);
            let h = Halfspace::new(a, b);
            if !h.is_trivial() {
                hs.push(h.flipped());
                hs.push(h);
            }
        }
        for g in &gens.rays {
            let (a, b) = split(g);
            let h = Halfspace::new(a, b);
            if !h.is_trivial() {
                hs.push(h);
            }
        }
        let vertices: Vec<Point> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<Rational>> = hs
                    .iter()
                    .filter(|h| h.slack(p).is_zero())
                    .map(|h| h.normal.clone())
                    .collect();
                rank(&tight) == dim
            })
            .collect();
        Ok(Self::from_parts(dim, vertices, hs))
    }

    /// Polytope `{x : h·x <= offset for all h}`; `None` when empty.
    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Option<Self>> {
        if dim > MAX_DIM {
            return Err(Error::DimensionCap { dim, cap: MAX_DIM });
        }
        if halfspaces.iter().any(|h| h.normal.len() != dim) {
            return Err(Error::RaggedDimensions);
        }
        let mut rows: Vec<Vec<Rational>> = halfspaces
            .iter()
            .map(|h| {
                let mut r = vec![h.offset.clone()];
                r.extend(h.normal.iter().map(|x| -x));
                r
            })
            .collect();
        let mut t = vec![Rational::zero(); dim + 1];
        t[0] = Rational::one();
        rows.push(t);
        let gens = dd::cone_generators(dim + 1, &rows);
        let vertices: Vec<Point> = gens
            .rays
            .iter()
            .filter(|r| r[0].is_positive())
            .map(|r| r[1..].iter().map(|x| x / &r[0]).collect())
            .collect();
        if vertices.is_empty() {
            return Ok(None);
        }
        if !gens.lineality.is_empty() || gens.rays.iter().any(|r| r[0].is_zero()) {
            return Err(Error::Unbounded);
        }
        Ok(Some(Self::from_parts(dim, vertices, halfspaces.to_vec())))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim && self.halfspaces.iter().all(|h| h.contains(p))
    }

    pub fn is_subset_of(&self, other: &Polytope) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    pub fn is_in_unit_cube(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(crate::rational::in_unit_interval))
    }

    pub fn has_boolean_vertex(&self) -> bool {
        self.vertices
            .iter()
            .any(|v| v.iter().all(|x| x.is_zero() || x.is_one()))
    }

    // Points where the segment between adjacent vertices u (strictly inside
    // `h`) and w (strictly outside) crosses the boundary of `h`.
    fn crossings(&self, h: &Halfspace, slack: &[Rational]) -> Vec<Point> {
        let inside: Vec<usize> = (0..slack.len()).filter(|&i| slack[i].is_positive()).collect();
        let outside: Vec<usize> = (0..slack.len()).filter(|&i| slack[i].is_negative()).collect();
        if inside.is_empty() || outside.is_empty() {
            return Vec::new();
        }
        let inc = Self::incidence_of(&self.vertices, &self.halfspaces);
        let mut out = Vec::new();
        for &u in &inside {
            for &w in &outside {
                let common = inc[u].intersection(&inc[w]);
                let adjacent = inc
                    .iter()
                    .enumerate()
                    .all(|(z, s)| z == u || z == w || !common.is_subset(s));
                if !adjacent {
                    continue;
                }
                let t = &slack[u] / (&slack[u] - &slack[w]);
                let p: Point = self.vertices[u]
                    .iter()
                    .zip(&self.vertices[w])
                    .map(|(a, b)| a + &t * (b - a))
                    .collect();
                debug_assert!(h.slack(&p).is_zero());
                out.push(p);
            }
        }
        out
    }

    fn side(&self, h: &Halfspace, slack: &[Rational], cross: &[Point]) -> Self {
        let mut verts: Vec<Point> = self
            .vertices
            .iter()
            .zip(slack)
            .filter(|(_, s)| !s.is_negative())
            .map(|(v, _)| v.clone())
            .collect();
        verts.extend(cross.iter().cloned());
        let mut hs = self.halfspaces.clone();
        hs.push(h.clone());
        Self::from_parts(self.dim, verts, hs)
    }

    /// `self ∩ h`, possibly lower-dimensional; `None` when empty.
    pub fn intersect_halfspace(&self, h: &Halfspace) -> Option<Self> {
        let slack: Vec<Rational> = self.vertices.iter().map(|v| h.slack(v)).collect();
        if slack.iter().all(|s| !s.is_negative()) {
            return Some(self.clone());
        }
        if slack.iter().all(Signed::is_negative) {
            return None;
        }
        let cross = self.crossings(h, &slack);
        Some(self.side(h, &slack, &cross))
    }

    pub fn intersect(&self, other: &Polytope) -> Option<Self> {
        let mut cur = self.clone();
        for h in &other.halfspaces {
            cur = cur.intersect_halfspace(h)?;
        }
        Some(cur)
    }

    /// Splits by the hyperplane of `h` into the pieces inside and outside
    /// `h`. A piece is returned only if some vertex lies strictly on its
    /// side, so pieces keep the dimension of `self`.
    pub fn split(&self, h: &Halfspace) -> (Option<Self>, Option<Self>) {
        let slack: Vec<Rational> = self.vertices.iter().map(|v| h.slack(v)).collect();
        let any_in = slack.iter().any(Signed::is_positive);
        let any_out = slack.iter().any(Signed::is_negative);
        match (any_in, any_out) {
            (true, false) | (false, false) => (Some(self.clone()), None),
            (false, true) => (None, Some(self.clone())),
            (true, true) => {
                let cross = self.crossings(h, &slack);
                let lower = self.side(h, &slack, &cross);
                let flipped = h.flipped();
                let neg: Vec<Rational> = slack.iter().map(|s| -s).collect();
                let upper = self.side(&flipped, &neg, &cross);
                (Some(lower), Some(upper))
            }
        }
    }

    /// Whether `self ∩ {x : h(x) for h in halfspaces}` has positive volume.
    pub(crate) fn overlaps_interior(&self, halfspaces: &[Halfspace]) -> bool {
        if halfspaces
            .iter()
            .any(|h| self.vertices.iter().all(|v| !h.slack(v).is_positive()))
        {
            return false;
        }
        let mut cur = self.clone();
        for h in halfspaces {
            match cur.split(h).0 {
                Some(p) => cur = p,
                None => return false,
            }
        }
        true
    }

    /// Decides membership and returns an exactly verified certificate.
    ///
    /// Inside points get the lexicographically smallest convex weight vector
    /// over the sorted vertex list; outside points get the most violated
    /// halfspace as separator.
    pub fn membership(&self, p: &[Rational]) -> Result<MembershipCertificate> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        let mut worst: Option<(&Halfspace, Rational)> = None;
        for h in &self.halfspaces {
            let v = -h.slack(p);
            if v.is_positive() && worst.as_ref().is_none_or(|(_, w)| v > *w) {
                worst = Some((h, v));
            }
        }
        let cert = match worst {
            Some((h, margin)) => MembershipCertificate::Outside {
                normal: h.normal.clone(),
                threshold: h.offset.clone(),
                margin,
            },
            None => MembershipCertificate::Inside {
                weights: self.lexmin_weights(p)?,
            },
        };
        if !cert.verify(self, p) {
            return Err(Error::Internal("membership certificate failed to verify".into()));
        }
        Ok(cert)
    }

    fn lexmin_weights(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        let m = self.vertices.len();
        if m == 1 {
            return Ok(vec![Rational::one()]);
        }
        let mut a: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| self.vertices.iter().map(|v| v[i].clone()).collect())
            .collect();
        a.push(vec![Rational::one(); m]);
        let mut b: Vec<Rational> = p.to_vec();
        b.push(Rational::one());
        let solve = |a: &[Vec<Rational>], b: &[Rational], c: &[Rational]| match lp::minimize(c, a, b) {
            LpOutcome::Optimal { x, .. } => Ok(x),
            _ => Err(Error::Internal("weight LP failed on an inside point".into())),
        };
        let mut x = solve(&a, &b, &vec![Rational::zero(); m])?;
        for j in 0..m {
            if !x[j].is_zero() {
                let mut c = vec![Rational::zero(); m];
                c[j] = Rational::one();
                x = solve(&a, &b, &c)?;
            }
            let mut row = vec![Rational::zero(); m];
            row[j] = Rational::one();
            a.push(row);
            b.push(x[j].clone());
        }
        Ok(x)
    }

    pub fn project(&self, coords: &[usize]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidCoordinates("empty coordinate set".into()));
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= self.dim) {
            return Err(Error::InvalidCoordinates(format!(
                "coordinate {bad} out of range for dimension {}",
                self.dim
            )));
        }
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| coords.iter().map(|&c| v[c].clone()).collect())
            .collect();
        Self::hull_capped(&pts, self.dim.max(MAX_DIM))
    }

    pub fn affine_image(&self, forms: &[AffineForm]) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::EmptyInput);
        }
        for f in forms {
            if f.arity() != self.dim {
                return Err(Error::ArityMismatch {
                    expected: self.dim,
                    found: f.arity(),
                });
            }
        }
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| forms.iter().map(|f| f.eval(v)).collect())
            .collect();
        Self::hull_capped(&pts, self.dim.max(MAX_DIM))
    }

    fn pulling_simplices(&self) -> Vec<Vec<usize>> {
        let inc = Self::incidence_of(&self.vertices, &self.halfspaces);
        let ids: Vec<usize> = (0..self.vertices.len()).collect();
        self.pull(&ids, self.affine_dim, &inc)
    }

    fn pull(&self, ids: &[usize], d: usize, inc: &[BitSet]) -> Vec<Vec<usize>> {
        if ids.len() == d + 1 {
            return vec![ids.to_vec()];
        }
        let v0 = ids[0];
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for h in 0..self.halfspaces.len() {
            if inc[v0].contains(h) {
                continue;
            }
            let face: Vec<usize> = ids.iter().copied().filter(|&v| inc[v].contains(h)).collect();
            if face.len() < d || facets.contains(&face) {
                continue;
            }
            let pts: Vec<&Point> = face.iter().map(|&i| &self.vertices[i]).collect();
            if affine_rank(&pts) == d - 1 {
                facets.push(face);
            }
        }
        let mut out = Vec::new();
        for face in facets {
            for mut s in self.pull(&face, d - 1, inc) {
                s.insert(0, v0);
                out.push(s);
            }
        }
        out
    }

    /// Exact volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> Rational {
        if !self.is_full_dimensional() {
            return Rational::zero();
        }
        if self.dim == 0 {
            return Rational::one();
        }
        let fact: Rational = (1..=self.dim as i64).map(int).product();
        let mut total = Rational::zero();
        for s in self.pulling_simplices() {
            let v0 = &self.vertices[s[0]];
            let m: Vec<Vec<Rational>> = s[1..]
                .iter()
                .map(|&i| self.vertices[i].iter().zip(v0).map(|(a, b)| a - b).collect())
                .collect();
            total += determinant(m).abs();
        }
        total / fact
    }

    pub(crate) fn from_vertices_and_halfspaces(
        dim: usize,
        vertices: Vec<Point>,
        halfspaces: Vec<Halfspace>,
    ) -> Self {
        Self::from_parts(dim, vertices, halfspaces)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            vertices: self.vertices.iter().map(|v| format_point(v)).collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfspaceJson {
                    normal: format_point(&h.normal),
                    offset: format_rational(&h.offset),
                })
                .collect(),
        }
    }
}

pub(crate) fn cube_halfspaces(dim: usize) -> Vec<Halfspace> {
    let mut hs = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        let mut e = vec![Rational::zero(); dim];
        e[i] = Rational::one();
        let upper = Halfspace::new(e, Rational::one());
        hs.push(Halfspace::new(upper.flipped().normal, Rational::zero()));
        hs.push(upper);
    }
    hs
}

#[derive(Debug, Clone, Serialize)]
pub struct HalfspaceJson {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolytopeJson {
    pub vertices: Vec<Vec<String>>,
    pub halfspaces: Vec<HalfspaceJson>,
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({})", format_point(v).join(", ")))
            .collect();
        write!(f, "co{{{}}}", vs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pt(xs: &[(i64, i64)]) -> Point {
        xs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    fn join_sum() -> Polytope {
        convex_hull(&[pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (1, 1)]), pt(&[(1, 2), (1, 1)])]).unwrap()
    }

    #[test]
    fn hull_drops_edge_interior_point() {
        let p = convex_hull(&[
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (1, 1)]),
            pt(&[(1, 2), (1, 1)]),
            pt(&[(3, 4), (1, 1)]),
        ])
        .unwrap();
        assert_eq!(p, join_sum());
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.halfspaces().len(), 3);
    }

    #[test]
    fn hull_of_single_point_and_square() {
        let p = convex_hull(&[pt(&[(1, 3), (2, 3)])]).unwrap();
        assert_eq!(p.vertices(), &[pt(&[(1, 3), (2, 3)])]);
        assert_eq!(p.affine_dim(), 0);
        assert!(p.contains(&pt(&[(1, 3), (2, 3)])));
        assert!(!p.contains(&pt(&[(1, 3), (1, 3)])));
        let sq = convex_hull(Polytope::cube(2).vertices()).unwrap();
        assert_eq!(sq, Polytope::cube(2));
        assert_eq!(sq.halfspaces().len(), 4);
    }

    #[test]
    fn hull_errors() {
        assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
        assert_eq!(
            convex_hull(&[pt(&[(0, 1)]), pt(&[(0, 1), (1, 1)])]),
            Err(Error::RaggedDimensions)
        );
        let big = vec![vec![int(0); 7]];
        assert!(matches!(convex_hull(&big), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn lower_dimensional_hull_has_equalities() {
        let seg = convex_hull(&[pt(&[(0, 1), (0, 1), (0, 1)]), pt(&[(1, 1), (1, 1), (1, 1)])]).unwrap();
        assert_eq!(seg.affine_dim(), 1);
        assert!(seg.contains(&pt(&[(1, 2), (1, 2), (1, 2)])));
        assert!(!seg.contains(&pt(&[(1, 2), (1, 2), (1, 3)])));
    }

    #[test]
    fn membership_inside_square_uses_lexmin_weights() {
        let sq = Polytope::cube(2);
        let cert = sq.membership(&pt(&[(1, 2), (1, 2)])).unwrap();
        // Vertex order: (0,0) (0,1) (1,0) (1,1).
        assert_eq!(
            cert,
            MembershipCertificate::Inside {
                weights: vec![rat(0, 1), rat(1, 2), rat(1, 2), rat(0, 1)]
            }
        );
    }

    #[test]
    fn membership_outside_triangle() {
        let cert = join_sum().membership(&pt(&[(1, 1), (0, 1)])).unwrap();
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
    fn membership_outside_interval() {
        let iv = convex_hull(&[pt(&[(1, 2)]), pt(&[(1, 1)])]).unwrap();
        match iv.membership(&pt(&[(1, 4)])).unwrap() {
            MembershipCertificate::Outside { normal, threshold, margin } => {
                // -2x <= -1 at x = 1/4 is violated by 1/2.
                assert_eq!(normal, vec![int(-2)]);
                assert_eq!(threshold, int(-1));
                assert_eq!(margin, rat(1, 2));
            }
            other => panic!("{other:?}"),
        }
        assert!(iv.membership(&pt(&[(1, 4), (1, 4)])).is_err());
    }

    #[test]
    fn sum_product_meet_projection() {
        let p = convex_hull(&[
            pt(&[(0, 1), (0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1), (0, 1)]),
            pt(&[(1, 1), (1, 1), (1, 1)]),
            pt(&[(1, 1), (1, 2), (0, 1)]),
        ])
        .unwrap();
        let q = p.project(&[0, 2]).unwrap();
        let want = convex_hull(&[pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)]), pt(&[(1, 1), (1, 1)])]).unwrap();
        assert_eq!(q, want);
        assert_eq!(p.project(&[0, 1, 2]).unwrap(), p);
        assert!(p.project(&[]).is_err());
        assert!(p.project(&[3]).is_err());
    }

    #[test]
    fn affine_images() {
        let unit = Polytope::cube(1);
        let id = unit.affine_image(&[AffineForm::projection(1, 0)]).unwrap();
        assert_eq!(id, unit);
        let twice = unit.affine_image(&[AffineForm::projection(1, 0).scale(2)]).unwrap();
        assert_eq!(twice.vertices(), &[pt(&[(0, 1)]), pt(&[(2, 1)])]);
        let swap = join_sum()
            .affine_image(&[AffineForm::projection(2, 1), AffineForm::projection(2, 0)])
            .unwrap();
        let want = convex_hull(&[pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (1, 1)]), pt(&[(1, 1), (1, 2)])]).unwrap();
        assert_eq!(swap, want);
        assert!(unit.affine_image(&[AffineForm::projection(2, 0)]).is_err());
    }

    #[test]
    fn split_and_intersect() {
        let sq = Polytope::cube(2);
        // x + y <= 1
        let h = Halfspace::new(vec![int(1), int(1)], int(1));
        let (lo, hi) = sq.split(&h);
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        assert_eq!(lo.vertices().len(), 3);
        assert_eq!(hi.vertices().len(), 3);
        assert_eq!(lo.volume() + hi.volume(), int(1));
        // Touching only along the diagonal: lower-dimensional intersection.
        let diag = lo.intersect(&hi).unwrap();
        assert_eq!(diag.affine_dim(), 1);
        assert!(!lo.overlaps_interior(hi.halfspaces()));
    }

    #[test]
    fn from_halfspaces_enumerates_vertices() {
        let hs = cube_halfspaces(3);
        let c = Polytope::from_halfspaces(3, &hs).unwrap().unwrap();
        assert_eq!(c, Polytope::cube(3));
        let mut empty = cube_halfspaces(1);
        empty.push(Halfspace::new(vec![int(1)], int(-1)));
        assert_eq!(Polytope::from_halfspaces(1, &empty).unwrap(), None);
        let open = vec![Halfspace::new(vec![int(1)], int(1))];
        assert_eq!(Polytope::from_halfspaces(1, &open), Err(Error::Unbounded));
    }

    #[test]
    fn volumes() {
        assert_eq!(Polytope::cube(3).volume(), int(1));
        assert_eq!(join_sum().volume(), rat(1, 4));
        let simplex = convex_hull(&[
            pt(&[(0, 1), (0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1), (0, 1)]),
            pt(&[(0, 1), (0, 1), (1, 1)]),
        ])
        .unwrap();
        assert_eq!(simplex.volume(), rat(1, 6));
    }
}
