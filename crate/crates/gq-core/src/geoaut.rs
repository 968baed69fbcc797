//! Automorphism groups of incidence structures, fixed substructures of a
//! single automorphism, Benson-type counting, and the eight-way fixed
//! substructure classification.
//!
//! The automorphism search runs on the bipartite point/line incidence graph:
//! vertices are colored by degree, colors are refined by neighborhood
//! multisets to a fixed point, and the search branches on the smallest
//! non-singleton color class (lowest vertex first). Branching individualizes
//! a vertex on one side and each candidate image on the other; every leaf is
//! verified against the incidence relation, so refinement only ever prunes.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::incidence::{classify_thin, validate_gq, Gq, GridShape, IncidenceStructure};
use crate::perm::{PermGroup, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeoAutError {
    #[error("structure too large for automorphism search: {0} points")]
    TooLarge(usize),
    #[error("permutation degree {0} does not match point count {1}")]
    DomainMismatch(usize, usize),
    #[error("permutation is not an automorphism of the structure")]
    NotAutomorphism,
    #[error("Benson's congruence requires a thick quadrangle, found ({s},{t})")]
    ThinStructure { s: usize, t: usize },
    #[error("no classification case applies: {0}")]
    NoCaseApplies(String),
}

/// Whether `g` (on points) maps every line's point set to a line's point set.
pub fn is_automorphism(
    structure: &IncidenceStructure,
    g: &Permutation,
) -> Result<bool, GeoAutError> {
    if g.degree() != structure.point_count() {
        return Err(GeoAutError::DomainMismatch(g.degree(), structure.point_count()));
    }
    let index: HashMap<&[usize], usize> = structure
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_slice(), i))
        .collect();
    Ok(structure.lines().iter().all(|line| {
        let mut image: Vec<usize> = line.iter().map(|&p| g.apply(p)).collect();
        image.sort_unstable();
        index.contains_key(image.as_slice())
    }))
}

/// The permutation of line indices induced by a point automorphism.
pub fn induced_line_perm(
    structure: &IncidenceStructure,
    g: &Permutation,
) -> Result<Permutation, GeoAutError> {
    let index: HashMap<&[usize], usize> = structure
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_slice(), i))
        .collect();
    let mut images = Vec::with_capacity(structure.line_count());
    for line in structure.lines() {
        let mut image: Vec<usize> = line.iter().map(|&p| g.apply(p)).collect();
        image.sort_unstable();
        let li = *index
            .get(image.as_slice())
            .ok_or(GeoAutError::NotAutomorphism)?;
        images.push(li);
    }
    Permutation::from_images(images).map_err(|_| GeoAutError::NotAutomorphism)
}

const MAX_POINTS: usize = 512;

/// Computes the full automorphism group acting on points. Complete
/// backtracking over the incidence graph; the returned group carries the
/// verified element list.
pub fn automorphism_group(structure: &IncidenceStructure) -> Result<PermGroup, GeoAutError> {
    let n = structure.point_count();
    if n > MAX_POINTS {
        return Err(GeoAutError::TooLarge(n));
    }
    let graph = IncGraph::new(structure);
    let mut base = graph.initial_coloring();
    graph.refine(&mut base);
    let mut out = Vec::new();
    graph.search(&base, &base, n, &mut out);
    out.sort();
    out.dedup();
    Ok(PermGroup::from_elements(n, out))
}

struct IncGraph {
    point_count: usize,
    vertex_count: usize,
    adj: Vec<Vec<usize>>,
}

impl IncGraph {
    fn new(structure: &IncidenceStructure) -> Self {
        let p = structure.point_count();
        let v = p + structure.line_count();
        let mut adj = vec![Vec::new(); v];
        for (li, line) in structure.lines().iter().enumerate() {
            for &pt in line {
                adj[pt].push(p + li);
                adj[p + li].push(pt);
            }
        }
        IncGraph { point_count: p, vertex_count: v, adj }
    }

    /// Points and lines start in separate color families, keyed by degree.
    fn initial_coloring(&self) -> Vec<u64> {
        (0..self.vertex_count)
            .map(|v| {
                let side = if v < self.point_count { 0u64 } else { 1u64 };
                side << 32 | self.adj[v].len() as u64
            })
            .collect()
    }

    /// Equitable refinement: the new color of a vertex is the rank of
    /// (old color, sorted neighbor colors) among all such signatures.
    /// Deterministic, so corresponding classes on both search sides receive
    /// the same color ids.
    fn refine(&self, colors: &mut Vec<u64>) {
        let mut scratch: Vec<u64> = Vec::new();
        loop {
            let mut signatures: Vec<(u64, Vec<u64>)> = Vec::with_capacity(self.vertex_count);
            for v in 0..self.vertex_count {
                scratch.clear();
                scratch.extend(self.adj[v].iter().map(|&u| colors[u]));
                scratch.sort_unstable();
                signatures.push((colors[v], scratch.clone()));
            }
            let mut sorted: Vec<&(u64, Vec<u64>)> = signatures.iter().collect();
            sorted.sort();
            sorted.dedup();
            let rank: HashMap<&(u64, Vec<u64>), u64> =
                sorted.iter().enumerate().map(|(i, s)| (*s, i as u64)).collect();
            let old_classes = {
                let mut c: Vec<u64> = colors.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            };
            for v in 0..self.vertex_count {
                colors[v] = rank[&signatures[v]];
            }
            if rank.len() == old_classes {
                return;
            }
        }
    }

    fn class_profile(colors: &[u64]) -> Vec<(u64, usize)> {
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for &c in colors {
            *counts.entry(c).or_insert(0) += 1;
        }
        let mut profile: Vec<(u64, usize)> = counts.into_iter().collect();
        profile.sort_unstable();
        profile
    }

    /// Smallest non-singleton class (ties: lowest color id); None if discrete.
    fn target_class(colors: &[u64]) -> Option<u64> {
        let profile = Self::class_profile(colors);
        profile
            .iter()
            .filter(|&&(_, count)| count > 1)
            .min_by_key(|&&(color, count)| (count, color))
            .map(|&(color, _)| color)
    }

    fn search(&self, c1: &[u64], c2: &[u64], fresh: usize, out: &mut Vec<Permutation>) {
        if Self::class_profile(c1) != Self::class_profile(c2) {
            return;
        }
        let Some(target) = Self::target_class(c1) else {
            // both discrete: map by matching colors, then verify
            let mut by_color: HashMap<u64, usize> =
                c2.iter().enumerate().map(|(v, &c)| (c, v)).collect();
            let mut map = vec![usize::MAX; self.vertex_count];
            for (v, &c) in c1.iter().enumerate() {
                match by_color.remove(&c) {
                    Some(u) => map[v] = u,
                    None => return,
                }
            }
            if self.is_graph_automorphism(&map) {
                let images: Vec<usize> = map[..self.point_count].to_vec();
                if images.iter().all(|&u| u < self.point_count) {
                    if let Ok(p) = Permutation::from_images(images) {
                        out.push(p);
                    }
                }
            }
            return;
        };
        let v = (0..self.vertex_count)
            .find(|&v| c1[v] == target)
            .expect("target class is nonempty");
        let candidates: Vec<usize> =
            (0..self.vertex_count).filter(|&u| c2[u] == target).collect();
        for u in candidates {
            let mut d1 = c1.to_vec();
            let mut d2 = c2.to_vec();
            d1[v] = u64::MAX - fresh as u64;
            d2[u] = u64::MAX - fresh as u64;
            self.refine(&mut d1);
            self.refine(&mut d2);
            self.search(&d1, &d2, fresh + 1, out);
        }
    }

    fn is_graph_automorphism(&self, map: &[usize]) -> bool {
        for v in 0..self.vertex_count {
            let mut image: Vec<usize> = self.adj[v].iter().map(|&u| map[u]).collect();
            image.sort_unstable();
            let mut expected: Vec<usize> = self.adj[map[v]].clone();
            expected.sort_unstable();
            if image != expected {
                return false;
            }
        }
        true
    }
}

/// The six-way partition of points and lines under one automorphism:
/// fixed / moved-but-incident-with-image / moved-far.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPartition {
    pub p0: Vec<usize>,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub l0: Vec<usize>,
    pub l1: Vec<usize>,
    pub l2: Vec<usize>,
}

pub fn fixed_partition(gq: &Gq, g: &Permutation) -> Result<FixedPartition, GeoAutError> {
    if g.degree() != gq.point_count() {
        return Err(GeoAutError::DomainMismatch(g.degree(), gq.point_count()));
    }
    if !is_automorphism(gq.structure(), g)? {
        return Err(GeoAutError::NotAutomorphism);
    }
    let line_perm = induced_line_perm(gq.structure(), g)?;
    let (mut p0, mut p1, mut p2) = (Vec::new(), Vec::new(), Vec::new());
    for p in 0..gq.point_count() {
        let q = g.apply(p);
        if q == p {
            p0.push(p);
        } else if gq.collinear(p, q) {
            p1.push(p);
        } else {
            p2.push(p);
        }
    }
    let concurrent = |a: usize, b: usize| -> bool {
        gq.line_points(a).iter().any(|p| gq.line_points(b).contains(p))
    };
    let (mut l0, mut l1, mut l2) = (Vec::new(), Vec::new(), Vec::new());
    for l in 0..gq.line_count() {
        let m = line_perm.apply(l);
        if m == l {
            l0.push(l);
        } else if concurrent(l, m) {
            l1.push(l);
        } else {
            l2.push(l);
        }
    }
    Ok(FixedPartition { p0, p1, p2, l0, l1, l2 })
}

/// Both sides of the fixed-count identity together with its residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BensonReport {
    pub point_side: usize,
    pub line_side: usize,
    pub target: usize,
    pub modulus: usize,
    pub residue: usize,
    pub sides_equal: bool,
    pub congruent: bool,
}

impl BensonReport {
    pub fn holds(&self) -> bool {
        self.sides_equal && self.congruent
    }
}

/// Evaluates (1+t)|P0| + |P1| = (1+s)|L0| + |L1| and its congruence to
/// (s+1)(t+1) modulo s+t. Thick quadrangles only.
pub fn benson_check(gq: &Gq, g: &Permutation) -> Result<BensonReport, GeoAutError> {
    let order = gq.order();
    if !order.is_thick() {
        return Err(GeoAutError::ThinStructure { s: order.s, t: order.t });
    }
    let part = fixed_partition(gq, g)?;
    Ok(benson_from_partition(gq, &part))
}

/// Same computation from a precomputed partition (used by exhaustive sweeps).
pub fn benson_from_partition(gq: &Gq, part: &FixedPartition) -> BensonReport {
    let order = gq.order();
    let (s, t) = (order.s, order.t);
    let point_side = (1 + t) * part.p0.len() + part.p1.len();
    let line_side = (1 + s) * part.l0.len() + part.l1.len();
    let modulus = s + t;
    let target = (s + 1) * (t + 1);
    BensonReport {
        point_side,
        line_side,
        target,
        modulus,
        residue: point_side % modulus,
        sides_equal: point_side == line_side,
        congruent: point_side % modulus == target % modulus,
    }
}

/// The classification of a fixed substructure, with enough witness data to
/// re-verify the case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum SubstructureClass {
    /// no fixed points, no fixed lines
    C0,
    /// no fixed lines; fixed points pairwise noncollinear
    C1,
    /// no fixed points; fixed lines pairwise nonconcurrent
    #[serde(rename = "C1'")]
    C1Dual,
    /// a fixed point collinear with every fixed point, on every fixed line
    C2 { point: usize },
    /// a fixed line concurrent with every fixed line, through every fixed point
    #[serde(rename = "C2'")]
    C2Dual { line: usize },
    /// the fixed substructure is a grid
    C3 { s1: usize, s2: usize },
    /// the fixed substructure is a dual grid
    #[serde(rename = "C3'")]
    C3Dual { t1: usize, t2: usize },
    /// the fixed substructure is a subquadrangle with both parameters >= 2
    C4 { s: usize, t: usize },
}

impl SubstructureClass {
    pub fn tag(&self) -> &'static str {
        match self {
            SubstructureClass::C0 => "C0",
            SubstructureClass::C1 => "C1",
            SubstructureClass::C1Dual => "C1'",
            SubstructureClass::C2 { .. } => "C2",
            SubstructureClass::C2Dual { .. } => "C2'",
            SubstructureClass::C3 { .. } => "C3",
            SubstructureClass::C3Dual { .. } => "C3'",
            SubstructureClass::C4 { .. } => "C4",
        }
    }
}

/// The fixed substructure as a standalone incidence object: fixed points,
/// and the traces of fixed lines on them.
#[derive(Debug, Clone)]
pub struct FixedSubstructure {
    /// fixed point indices in the ambient structure
    pub points: Vec<usize>,
    /// (ambient line index, trace as positions into `points`)
    pub lines: Vec<(usize, Vec<usize>)>,
}

pub fn fixed_substructure(gq: &Gq, part: &FixedPartition) -> FixedSubstructure {
    let rank: HashMap<usize, usize> =
        part.p0.iter().copied().enumerate().map(|(r, p)| (p, r)).collect();
    let lines = part
        .l0
        .iter()
        .map(|&li| {
            let trace: Vec<usize> = gq
                .line_points(li)
                .iter()
                .filter_map(|p| rank.get(p).copied())
                .collect();
            (li, trace)
        })
        .collect();
    FixedSubstructure { points: part.p0.clone(), lines }
}

impl FixedSubstructure {
    /// The substructure as an incidence structure, if every trace is a
    /// legitimate line (at least two points).
    fn as_structure(&self) -> Option<IncidenceStructure> {
        if self.points.is_empty() || self.lines.is_empty() {
            return None;
        }
        if self.lines.iter().any(|(_, trace)| trace.len() < 2) {
            return None;
        }
        IncidenceStructure::new(
            "fixed",
            self.points.len(),
            self.lines.iter().map(|(_, t)| t.clone()).collect(),
        )
        .ok()
    }
}

/// Decides the applicable case in the fixed order C0, C1, C1', C2, C2', C3,
/// C3', C4 and re-verifies the witness. `NoCaseApplies` signals an
/// implementation bug rather than a data condition.
pub fn classify_fixed_substructure(
    gq: &Gq,
    g: &Permutation,
) -> Result<SubstructureClass, GeoAutError> {
    let part = fixed_partition(gq, g)?;
    classify_partition(gq, &part)
}

pub fn classify_partition(
    gq: &Gq,
    part: &FixedPartition,
) -> Result<SubstructureClass, GeoAutError> {
    let p0 = &part.p0;
    let l0 = &part.l0;
    if p0.is_empty() && l0.is_empty() {
        return Ok(SubstructureClass::C0);
    }
    let pairwise_noncollinear = |pts: &[usize]| -> bool {
        pts.iter().enumerate().all(|(i, &x)| {
            pts[i + 1..].iter().all(|&y| !gq.collinear(x, y))
        })
    };
    if l0.is_empty() {
        if pairwise_noncollinear(p0) {
            return Ok(SubstructureClass::C1);
        }
        return Err(GeoAutError::NoCaseApplies(
            "no fixed lines but collinear fixed points".into(),
        ));
    }
    let concurrent = |a: usize, b: usize| -> bool {
        gq.line_points(a).iter().any(|p| gq.line_points(b).contains(p))
    };
    if p0.is_empty() {
        let pairwise_nonconcurrent = l0
            .iter()
            .enumerate()
            .all(|(i, &a)| l0[i + 1..].iter().all(|&b| !concurrent(a, b)));
        if pairwise_nonconcurrent {
            return Ok(SubstructureClass::C1Dual);
        }
        return Err(GeoAutError::NoCaseApplies(
            "no fixed points but concurrent fixed lines".into(),
        ));
    }
    // C2: a fixed point collinear with all fixed points and on all fixed lines
    if let Some(&p) = p0.iter().find(|&&p| {
        p0.iter().all(|&q| gq.collinear(p, q))
            && l0.iter().all(|&li| gq.line_points(li).contains(&p))
    }) {
        return Ok(SubstructureClass::C2 { point: p });
    }
    // C2': a fixed line meeting all fixed lines and containing all fixed points
    if let Some(&l) = l0.iter().find(|&&l| {
        l0.iter().all(|&m| m == l || concurrent(l, m))
            && p0.iter().all(|&p| gq.line_points(l).contains(&p))
    }) {
        return Ok(SubstructureClass::C2Dual { line: l });
    }
    let sub = fixed_substructure(gq, part);
    if let Some(structure) = sub.as_structure() {
        match classify_thin(&structure) {
            GridShape::Grid(a, b) => return Ok(SubstructureClass::C3 { s1: a, s2: b }),
            GridShape::DualGrid(a, b) => {
                return Ok(SubstructureClass::C3Dual { t1: a, t2: b })
            }
            GridShape::NotThin => {}
        }
        if let Ok(subgq) = validate_gq(&structure) {
            let order = subgq.order();
            if order.is_thick() {
                return Ok(SubstructureClass::C4 { s: order.s, t: order.t });
            }
        }
    }
    Err(GeoAutError::NoCaseApplies(format!(
        "|P0|={}, |L0|={}",
        p0.len(),
        l0.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_grid, construct_w, ProjectiveSpace};
    use crate::perm::DEFAULT_CAP;

    fn w2() -> Gq {
        validate_gq(&construct_w(2).unwrap()).unwrap()
    }

    /// Brute-force oracle: all n! point maps preserving the line set.
    fn brute_automorphisms(structure: &IncidenceStructure) -> Vec<Permutation> {
        let n = structure.point_count();
        let mut out = Vec::new();
        let mut images: Vec<usize> = (0..n).collect();
        permute(&mut images, 0, &mut |candidate| {
            let p = Permutation::from_images(candidate.to_vec()).unwrap();
            if is_automorphism(structure, &p).unwrap() {
                out.push(p);
            }
        });
        out.sort();
        out
    }

    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn small_grid_group_matches_brute_force() {
        let grid = construct_grid(1, 1);
        let aut = automorphism_group(&grid).unwrap();
        assert_eq!(aut.order(DEFAULT_CAP).unwrap(), 8);
        let brute = brute_automorphisms(&grid);
        assert_eq!(aut.enumerate(DEFAULT_CAP).unwrap(), &brute[..]);
    }

    #[test]
    fn grid_2x3_matches_brute_force() {
        let grid = construct_grid(1, 2);
        let aut = automorphism_group(&grid).unwrap();
        let brute = brute_automorphisms(&grid);
        assert_eq!(aut.enumerate(DEFAULT_CAP).unwrap(), &brute[..]);
    }

    #[test]
    fn w2_automorphism_group_has_order_720() {
        let w = construct_w(2).unwrap();
        let aut = automorphism_group(&w).unwrap();
        assert_eq!(aut.order(DEFAULT_CAP).unwrap(), 720);
        for gen in aut.generators() {
            assert!(is_automorphism(&w, gen).unwrap());
        }
    }

    #[test]
    fn aut_order_is_invariant_under_relabeling() {
        let w = construct_w(2).unwrap();
        // a fixed scramble of the 15 points
        let map: Vec<usize> = (0..15).map(|i| (7 * i + 3) % 15).collect();
        let relabeled = w.relabel(&map).unwrap();
        let a = automorphism_group(&w).unwrap().order(DEFAULT_CAP).unwrap();
        let b = automorphism_group(&relabeled).unwrap().order(DEFAULT_CAP).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transposition_of_grid_points_is_not_automorphism() {
        let w = construct_w(2).unwrap();
        let swap = Permutation::from_cycles(15, &[vec![0, 1]]).unwrap();
        // 0 and 1 are not equivalent under any automorphism fixing the rest
        assert!(!is_automorphism(&w, &swap).unwrap());
    }

    fn transvection_on_w2() -> Permutation {
        // x -> x + B(x, e1) e1 over GF(2)
        let space = ProjectiveSpace::new(3, 2).unwrap();
        let m = vec![
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ];
        space.matrix_perm(&m).unwrap()
    }

    #[test]
    fn fixed_partition_of_identity_and_transvection() {
        let gq = w2();
        let id = Permutation::identity(15);
        let part = fixed_partition(&gq, &id).unwrap();
        assert_eq!(part.p0.len(), 15);
        assert!(part.p1.is_empty() && part.p2.is_empty());

        let tv = transvection_on_w2();
        assert!(is_automorphism(gq.structure(), &tv).unwrap());
        let part = fixed_partition(&gq, &tv).unwrap();
        assert_eq!(part.p0.len(), 7); // the perp of the center
        assert_eq!(part.l0.len(), 3);
    }

    #[test]
    fn fixed_point_free_rotation_of_grid() {
        let grid = construct_grid(2, 2);
        let gq = validate_gq(&grid).unwrap();
        // rotate both parallel classes
        let rot = Permutation::from_images(vec![4, 5, 3, 7, 8, 6, 1, 2, 0]).unwrap();
        assert!(is_automorphism(&grid, &rot).unwrap());
        let part = fixed_partition(&gq, &rot).unwrap();
        assert!(part.p0.is_empty());
    }

    #[test]
    fn benson_on_identity_of_w2() {
        let gq = w2();
        let report = benson_check(&gq, &Permutation::identity(15)).unwrap();
        assert_eq!(report.point_side, 45);
        assert_eq!(report.residue, 1);
        assert!(report.holds());
    }

    #[test]
    fn benson_rejects_thin_structures() {
        let gq = validate_gq(&construct_grid(2, 2)).unwrap();
        assert!(matches!(
            benson_check(&gq, &Permutation::identity(9)),
            Err(GeoAutError::ThinStructure { .. })
        ));
    }

    #[test]
    fn benson_holds_for_all_720_automorphisms_of_w2() {
        let gq = w2();
        let aut = automorphism_group(gq.structure()).unwrap();
        for g in aut.enumerate(DEFAULT_CAP).unwrap() {
            let report = benson_check(&gq, g).unwrap();
            assert!(report.holds(), "violation at {g}");
        }
    }

    #[test]
    fn classification_of_identity_and_transvection() {
        let gq = w2();
        let id = Permutation::identity(15);
        assert_eq!(
            classify_fixed_substructure(&gq, &id).unwrap(),
            SubstructureClass::C4 { s: 2, t: 2 }
        );
        let tv = transvection_on_w2();
        match classify_fixed_substructure(&gq, &tv).unwrap() {
            SubstructureClass::C2 { point } => {
                let part = fixed_partition(&gq, &tv).unwrap();
                for &li in &part.l0 {
                    assert!(gq.line_points(li).contains(&point));
                }
            }
            other => panic!("expected C2, got {other:?}"),
        }
    }

    #[test]
    fn classification_is_exhaustive_on_aut_w2() {
        let gq = w2();
        let aut = automorphism_group(gq.structure()).unwrap();
        for g in aut.enumerate(DEFAULT_CAP).unwrap() {
            classify_fixed_substructure(&gq, g).unwrap();
        }
    }

    #[test]
    fn fixed_point_free_grid_rotation_classifies_c0() {
        let grid = construct_grid(2, 2);
        let gq = validate_gq(&grid).unwrap();
        let rot = Permutation::from_images(vec![4, 5, 3, 7, 8, 6, 1, 2, 0]).unwrap();
        let part = fixed_partition(&gq, &rot).unwrap();
        assert_eq!(classify_partition(&gq, &part).unwrap(), SubstructureClass::C0);
    }
}
