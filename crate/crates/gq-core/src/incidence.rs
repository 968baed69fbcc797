//! Finite point-line incidence structures, the generalized quadrangle axioms,
//! and the collinearity machinery (perp, span, partial ovoids).
//!
//! Points are `0..point_count`; a line is a sorted list of point indices.
//! Structures are canonicalized on construction: each line sorted ascending,
//! the line list sorted lexicographically, duplicates rejected.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("line {line} contains point {point} outside 0..{points}")]
    PointOutOfRange { line: usize, point: usize, points: usize },
    #[error("line {line} has a repeated point")]
    RepeatedPoint { line: usize },
    #[error("line {line} has {got} points; at least 2 required")]
    ShortLine { line: usize, got: usize },
    #[error("two lines share the same point set {0:?}")]
    DuplicateLine(Vec<usize>),
    #[error("cannot transpose: point {0} lies on fewer than 2 lines")]
    ThinPencil(usize),
    #[error("bad json: {0}")]
    Json(String),
}

/// Errors raised while checking the generalized quadrangle axioms.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GqError {
    #[error("structure has no points or no lines")]
    Empty,
    #[error("line {line} has {got} points, expected {expected}")]
    NotUniformLineSize { line: usize, got: usize, expected: usize },
    #[error("point {point} lies on {got} lines, expected {expected}")]
    NotUniformPointDegree { point: usize, got: usize, expected: usize },
    #[error("structure contains a triangle or digon (witness points {witness:?})")]
    ContainsTriangleOrDigon { witness: Vec<usize> },
    #[error("GQ axiom fails at point {point}, line {line}: {witnesses} collinear witnesses")]
    GQAxiomFails { point: usize, line: usize, witnesses: usize },
    #[error("point/line counts do not match (s+1)(st+1), (t+1)(st+1)")]
    CountMismatch,
    #[error("operation needs a nonempty point set")]
    EmptyInput,
    #[error("operation requires a thick quadrangle (s,t >= 2), found ({s},{t})")]
    NotThick { s: usize, t: usize },
}

/// The order (s,t) of a generalized quadrangle: lines carry s+1 points,
/// points carry t+1 lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GQOrder {
    pub s: usize,
    pub t: usize,
}

impl GQOrder {
    pub fn is_thick(&self) -> bool {
        self.s >= 2 && self.t >= 2
    }

    /// Expected point count (s+1)(st+1).
    pub fn point_count(&self) -> usize {
        (self.s + 1) * (self.s * self.t + 1)
    }

    /// Expected line count (t+1)(st+1).
    pub fn line_count(&self) -> usize {
        (self.t + 1) * (self.s * self.t + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct RawStructure {
    name: String,
    points: usize,
    lines: Vec<Vec<usize>>,
}

/// A finite point-line incidence structure with canonical line ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    name: String,
    point_count: usize,
    lines: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    pub fn new(
        name: impl Into<String>,
        point_count: usize,
        mut lines: Vec<Vec<usize>>,
    ) -> Result<Self, IncidenceError> {
        for line in lines.iter_mut() {
            line.sort_unstable();
        }
        lines.sort();
        for (i, line) in lines.iter().enumerate() {
            if line.len() < 2 {
                return Err(IncidenceError::ShortLine { line: i, got: line.len() });
            }
            for w in line.windows(2) {
                if w[0] == w[1] {
                    return Err(IncidenceError::RepeatedPoint { line: i });
                }
            }
            if let Some(&p) = line.iter().find(|&&p| p >= point_count) {
                return Err(IncidenceError::PointOutOfRange { line: i, point: p, points: point_count });
            }
            if i > 0 && lines[i - 1] == *line {
                return Err(IncidenceError::DuplicateLine(line.clone()));
            }
        }
        Ok(IncidenceStructure { name: name.into(), point_count, lines })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &[usize] {
        &self.lines[i]
    }

    /// The point-line dual: points become lines and vice versa.
    pub fn transpose(&self) -> Result<IncidenceStructure, IncidenceError> {
        let mut pencils = vec![Vec::new(); self.point_count];
        for (li, line) in self.lines.iter().enumerate() {
            for &p in line {
                pencils[p].push(li);
            }
        }
        if let Some(p) = pencils.iter().position(|pen| pen.len() < 2) {
            return Err(IncidenceError::ThinPencil(p));
        }
        IncidenceStructure::new(format!("{}^dual", self.name), self.lines.len(), pencils)
    }

    /// Relabels points through `map` (old index -> new index, a bijection).
    pub fn relabel(&self, map: &[usize]) -> Result<IncidenceStructure, IncidenceError> {
        assert_eq!(map.len(), self.point_count);
        let lines = self
            .lines
            .iter()
            .map(|line| line.iter().map(|&p| map[p]).collect())
            .collect();
        IncidenceStructure::new(self.name.clone(), self.point_count, lines)
    }

    /// Serializes to the canonical JSON interchange form
    /// `{"name": .., "points": .., "lines": [[..],..]}`.
    pub fn to_json(&self) -> String {
        let raw = RawStructure {
            name: self.name.clone(),
            points: self.point_count,
            lines: self.lines.clone(),
        };
        serde_json::to_string(&raw).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, IncidenceError> {
        let raw: RawStructure =
            serde_json::from_str(text).map_err(|e| IncidenceError::Json(e.to_string()))?;
        IncidenceStructure::new(raw.name, raw.points, raw.lines)
    }
}

/// A validated generalized quadrangle: the structure together with its order
/// and precomputed collinearity rows (reflexive, one bitset per point).
#[derive(Debug, Clone)]
pub struct Gq {
    structure: IncidenceStructure,
    order: GQOrder,
    collinear: Vec<BitSet>,
    lines_through: Vec<Vec<usize>>,
    line_index: HashMap<Vec<usize>, usize>,
}

/// Checks the generalized quadrangle axioms and returns the validated
/// geometry. Thin quadrangles (s=1 or t=1) pass as long as line sizes and
/// point degrees are uniform; thickness is recorded in the order.
pub fn validate_gq(structure: &IncidenceStructure) -> Result<Gq, GqError> {
    let n = structure.point_count();
    let lines = structure.lines();
    if n == 0 || lines.is_empty() {
        return Err(GqError::Empty);
    }

    let s = lines[0].len() - 1;
    for (i, line) in lines.iter().enumerate() {
        if line.len() != s + 1 {
            return Err(GqError::NotUniformLineSize { line: i, got: line.len(), expected: s + 1 });
        }
    }

    let mut lines_through = vec![Vec::new(); n];
    for (li, line) in lines.iter().enumerate() {
        for &p in line {
            lines_through[p].push(li);
        }
    }
    let t = lines_through[0].len().saturating_sub(1);
    for (p, pencil) in lines_through.iter().enumerate() {
        if pencil.len() != t + 1 {
            return Err(GqError::NotUniformPointDegree { point: p, got: pencil.len(), expected: t + 1 });
        }
    }

    // Digon check: no pair of points on two distinct lines.
    let mut collinear: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    for p in 0..n {
        collinear[p].insert(p);
    }
    for line in lines {
        for (ai, &a) in line.iter().enumerate() {
            for &b in &line[ai + 1..] {
                if collinear[a].contains(b) {
                    return Err(GqError::ContainsTriangleOrDigon { witness: vec![a, b] });
                }
                collinear[a].insert(b);
                collinear[b].insert(a);
            }
        }
    }

    // Unique-witness axiom; two witnesses exhibit a triangle.
    for p in 0..n {
        for (li, line) in lines.iter().enumerate() {
            if line.contains(&p) {
                continue;
            }
            let witnesses: Vec<usize> =
                line.iter().copied().filter(|&x| collinear[p].contains(x)).collect();
            match witnesses.len() {
                1 => {}
                0 => return Err(GqError::GQAxiomFails { point: p, line: li, witnesses: 0 }),
                _ => {
                    let mut w = vec![p];
                    w.extend_from_slice(&witnesses[..2]);
                    return Err(GqError::ContainsTriangleOrDigon { witness: w });
                }
            }
        }
    }

    let order = GQOrder { s, t };
    if n != order.point_count() || lines.len() != order.line_count() {
        return Err(GqError::CountMismatch);
    }

    let line_index = lines
        .iter()
        .enumerate()
        .map(|(i, line)| (line.clone(), i))
        .collect();

    Ok(Gq {
        structure: structure.clone(),
        order,
        collinear,
        lines_through,
        line_index,
    })
}

impl Gq {
    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn order(&self) -> GQOrder {
        self.order
    }

    pub fn point_count(&self) -> usize {
        self.structure.point_count()
    }

    pub fn line_count(&self) -> usize {
        self.structure.line_count()
    }

    /// Whether `x ~ y`: equal or joined by a line.
    pub fn collinear(&self, x: usize, y: usize) -> bool {
        self.collinear[x].contains(y)
    }

    /// The perp row of a single point as a bitset (includes the point itself).
    pub fn perp_row(&self, p: usize) -> &BitSet {
        &self.collinear[p]
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.lines_through[p]
    }

    pub fn line_points(&self, li: usize) -> &[usize] {
        self.structure.line(li)
    }

    /// Index of the line with exactly this (sorted) point set.
    pub fn line_index_of(&self, points: &[usize]) -> Option<usize> {
        self.line_index.get(points).copied()
    }

    /// The unique line through two distinct collinear points.
    pub fn line_through_pair(&self, x: usize, y: usize) -> Option<usize> {
        self.lines_through[x]
            .iter()
            .copied()
            .find(|&li| self.structure.line(li).contains(&y))
    }

    /// perp(pts) = points collinear (under ~, including equality) with every
    /// member of `pts`.
    pub fn perp(&self, pts: &[usize]) -> Result<Vec<usize>, GqError> {
        Ok(self.perp_bits(pts)?.to_vec())
    }

    fn perp_bits(&self, pts: &[usize]) -> Result<BitSet, GqError> {
        let mut it = pts.iter();
        let first = *it.next().ok_or(GqError::EmptyInput)?;
        let mut acc = self.collinear[first].clone();
        for &p in it {
            acc.intersect_with(&self.collinear[p]);
        }
        Ok(acc)
    }

    /// span(pts) = perp(perp(pts)). When perp(pts) is empty the span is the
    /// whole point set (the intersection over an empty family).
    pub fn span(&self, pts: &[usize]) -> Result<Vec<usize>, GqError> {
        let perp = self.perp(pts)?;
        if perp.is_empty() {
            return Ok((0..self.point_count()).collect());
        }
        self.perp(&perp)
    }

    /// Whether `pts` is pairwise noncollinear, and whether its size respects
    /// the 1+st partial ovoid bound.
    pub fn is_partial_ovoid(&self, pts: &[usize]) -> PartialOvoidReport {
        let mut ok = true;
        'outer: for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i + 1..] {
                if x != y && self.collinear(x, y) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        PartialOvoidReport {
            is_partial_ovoid: ok,
            within_bound: pts.len() <= 1 + self.order.s * self.order.t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartialOvoidReport {
    pub is_partial_ovoid: bool,
    pub within_bound: bool,
}

/// Shape of a thin structure: a grid, a dual grid, or neither.
/// Parameters are reported with the smaller one first; a grid with
/// parameters (a,b) is the same incidence structure as one with (b,a).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridShape {
    Grid(usize, usize),
    DualGrid(usize, usize),
    NotThin,
}

/// Decides whether the structure is a grid or a dual grid by testing the
/// coordinatized description: two parallel classes of lines, each covering
/// every point exactly once, any two lines from different classes meeting
/// in exactly one point.
pub fn classify_thin(structure: &IncidenceStructure) -> GridShape {
    if let Some((a, b)) = grid_parameters(structure) {
        return GridShape::Grid(a, b);
    }
    if let Ok(dual) = structure.transpose() {
        if let Some((a, b)) = grid_parameters(&dual) {
            return GridShape::DualGrid(a, b);
        }
    }
    GridShape::NotThin
}

fn grid_parameters(structure: &IncidenceStructure) -> Option<(usize, usize)> {
    let n = structure.point_count();
    let lines = structure.lines();
    if n == 0 || lines.len() < 2 {
        return None;
    }
    let mut degree = vec![0usize; n];
    for line in lines {
        for &p in line {
            degree[p] += 1;
        }
    }
    if degree.iter().any(|&d| d != 2) {
        return None;
    }
    let disjoint = |a: &[usize], b: &[usize]| a.iter().all(|p| !b.contains(p));
    let mut class_a = vec![0usize];
    let mut class_b = Vec::new();
    for li in 1..lines.len() {
        if disjoint(&lines[li], &lines[0]) {
            class_a.push(li);
        } else {
            class_b.push(li);
        }
    }
    if class_b.is_empty() {
        return None;
    }
    for class in [&class_a, &class_b] {
        let mut covered = vec![false; n];
        for &li in class.iter() {
            for &p in &lines[li] {
                if covered[p] {
                    return None;
                }
                covered[p] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return None;
        }
    }
    for &la in &class_a {
        if lines[la].len() != class_b.len() {
            return None;
        }
        for &lb in &class_b {
            let common = lines[la].iter().filter(|p| lines[lb].contains(p)).count();
            if common != 1 {
                return None;
            }
        }
    }
    if class_b.iter().any(|&lb| lines[lb].len() != class_a.len()) {
        return None;
    }
    let a = class_a.len() - 1;
    let b = class_b.len() - 1;
    Some((a.min(b), a.max(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_dual_grid, construct_grid, construct_w};

    fn fano() -> IncidenceStructure {
        IncidenceStructure::new(
            "fano",
            7,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![0, 5, 6],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
                vec![2, 4, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn smallest_grid_is_a_thin_gq() {
        let g = construct_grid(1, 1);
        let gq = validate_gq(&g).unwrap();
        assert_eq!(gq.order(), GQOrder { s: 1, t: 1 });
        assert_eq!(gq.point_count(), 4);
        assert_eq!(gq.line_count(), 4);
        assert!(!gq.order().is_thick());
    }

    #[test]
    fn w2_is_a_gq_of_order_2_2() {
        let w2 = construct_w(2).unwrap();
        let gq = validate_gq(&w2).unwrap();
        assert_eq!(gq.order(), GQOrder { s: 2, t: 2 });
        assert_eq!(gq.point_count(), 15);
        assert_eq!(gq.line_count(), 15);
    }

    #[test]
    fn fano_plane_has_triangles() {
        match validate_gq(&fano()) {
            Err(GqError::ContainsTriangleOrDigon { .. }) => {}
            other => panic!("expected triangle/digon, got {other:?}"),
        }
    }

    #[test]
    fn digon_is_rejected() {
        // uniform sizes and degrees, but points 0,1 lie on two common lines
        let s = IncidenceStructure::new(
            "digon",
            6,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![2, 4, 5], vec![3, 4, 5]],
        )
        .unwrap();
        match validate_gq(&s) {
            Err(GqError::ContainsTriangleOrDigon { .. }) => {}
            other => panic!("expected triangle/digon, got {other:?}"),
        }
    }

    #[test]
    fn perp_sizes_in_w2() {
        let gq = validate_gq(&construct_w(2).unwrap()).unwrap();
        // single point: 1 + s(t+1)
        let p = gq.perp(&[0]).unwrap();
        assert_eq!(p.len(), 1 + 2 * 3);
        // collinear pair: the joining line
        let line = gq.line_points(0).to_vec();
        let p = gq.perp(&[line[0], line[1]]).unwrap();
        assert_eq!(p, line);
        // noncollinear pair: t+1 points
        let x = 0;
        let y = (0..15).find(|&y| !gq.collinear(x, y)).unwrap();
        assert_eq!(gq.perp(&[x, y]).unwrap().len(), 3);
    }

    #[test]
    fn perp_is_antitone_and_span_is_a_closure() {
        let gq = validate_gq(&construct_w(2).unwrap()).unwrap();
        let small = vec![0, 1];
        let large = vec![0, 1, 2];
        let perp_small = gq.perp(&small).unwrap();
        let perp_large = gq.perp(&large).unwrap();
        assert!(perp_large.iter().all(|p| perp_small.contains(p)));
        let span = gq.span(&small).unwrap();
        assert!(small.iter().all(|p| span.contains(p)));
        assert_eq!(gq.perp(&span).unwrap(), perp_small);
    }

    #[test]
    fn empty_input_is_rejected() {
        let gq = validate_gq(&construct_grid(1, 1)).unwrap();
        assert_eq!(gq.perp(&[]), Err(GqError::EmptyInput));
    }

    #[test]
    fn partial_ovoid_reports() {
        let gq = validate_gq(&construct_w(2).unwrap()).unwrap();
        assert!(gq.is_partial_ovoid(&[3]).is_partial_ovoid);
        let line = gq.line_points(0);
        assert!(!gq.is_partial_ovoid(line).is_partial_ovoid);
    }

    #[test]
    fn classify_thin_round_trips_grids() {
        for a in 1..=6 {
            for b in 1..=6 {
                let g = construct_grid(a, b);
                assert_eq!(classify_thin(&g), GridShape::Grid(a.min(b), a.max(b)));
                let d = construct_dual_grid(a, b);
                // the 4-cycle is self-dual, so the (1,1) dual grid reports
                // as the (1,1) grid
                let expected = if (a, b) == (1, 1) {
                    GridShape::Grid(1, 1)
                } else {
                    GridShape::DualGrid(a.min(b), a.max(b))
                };
                assert_eq!(classify_thin(&d), expected);
            }
        }
    }

    #[test]
    fn w2_is_not_thin() {
        assert_eq!(classify_thin(&construct_w(2).unwrap()), GridShape::NotThin);
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let g = construct_grid(2, 3);
        let json = g.to_json();
        let back = IncidenceStructure::from_json(&json).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn transpose_twice_is_isomorphic() {
        // line relabeling makes the double transpose equal only up to
        // isomorphism
        let g = construct_grid(2, 4);
        let tt = g.transpose().unwrap().transpose().unwrap();
        assert_eq!(tt.point_count(), g.point_count());
        assert_eq!(tt.line_count(), g.line_count());
        assert_eq!(classify_thin(&tt), classify_thin(&g));
    }
}
