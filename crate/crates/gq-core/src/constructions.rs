//! Concrete quadrangles from finite-field linear algebra: the symplectic
//! quadrangles W(q), the elliptic quadrangles Q-(5,q), grids and dual grids,
//! and the Payne derivation at a regular point.
//!
//! Field representations are pinned so that serialized structures are
//! reproducible bit for bit: GF(4) = F2[x]/(x^2+x+1), GF(8) = F2[x]/(x^3+x+1),
//! GF(9) = F3[x]/(x^2+1). The symplectic form is
//! B(x,y) = x0*y1 - x1*y0 + x2*y3 - x3*y2 and the elliptic quadric is
//! Q(x) = x0*x1 + x2*x3 + f(x4,x5) with f irreducible over GF(q).

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::incidence::{validate_gq, Gq, GqError, IncidenceError, IncidenceStructure};
use crate::perm::{closure, PermGroup, Permutation, DEFAULT_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unsupported field order {0}")]
    UnsupportedField(usize),
    #[error("field axioms failed for order {0}: {1}")]
    FieldAxiomFailure(usize, String),
    #[error("operation requires a quadrangle of order (s,s)")]
    NotSquareOrder,
    #[error("point {0} is not a regular point")]
    NotRegularPoint(usize),
    #[error("derived structure failed validation: {0}")]
    ValidationFailed(GqError),
    #[error("construction produced an invalid structure: {0}")]
    BadStructure(IncidenceError),
    #[error("elation group construction failed: {0}")]
    ConstructionFailed(String),
}

impl From<GqError> for ConstructionError {
    fn from(e: GqError) -> Self {
        ConstructionError::ValidationFailed(e)
    }
}

impl From<IncidenceError> for ConstructionError {
    fn from(e: IncidenceError) -> Self {
        ConstructionError::BadStructure(e)
    }
}

/// A small finite field with exhaustively verified tables.
/// Elements are encoded as 0..q; for extension fields the encoding is the
/// base-p digit expansion of the coordinate vector.
#[derive(Debug, Clone)]
pub struct FiniteField {
    q: usize,
    p: usize,
    degree: usize,
    add_table: Vec<usize>,
    mul_table: Vec<usize>,
    neg_table: Vec<usize>,
    inv_table: Vec<usize>,
}

const SUPPORTED_Q: &[usize] = &[2, 3, 4, 5, 7, 8, 9, 11];

/// Monic irreducible polynomials (low degree coefficient first, without the
/// leading 1) for the supported extension fields.
fn irreducible(q: usize) -> Option<(usize, &'static [usize])> {
    match q {
        4 => Some((2, &[1, 1])),    // x^2 + x + 1 over F2
        8 => Some((2, &[1, 1, 0])), // x^3 + x + 1 over F2
        9 => Some((3, &[1, 0])),    // x^2 + 1 over F3
        _ => None,
    }
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, ConstructionError> {
        if !SUPPORTED_Q.contains(&q) {
            return Err(ConstructionError::UnsupportedField(q));
        }
        let (p, degree, poly): (usize, usize, Vec<usize>) = match irreducible(q) {
            Some((p, tail)) => (p, tail.len(), tail.to_vec()),
            None => (q, 1, Vec::new()),
        };

        // Element i <-> digit vector of i in base p, length `degree`.
        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; degree];
            for slot in d.iter_mut() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let undigits = |d: &[usize]| -> usize {
            d.iter().rev().fold(0, |acc, &c| acc * p + c)
        };

        let add = |a: usize, b: usize| -> usize {
            let (da, db) = (digits(a), digits(b));
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&sum)
        };
        let mul = |a: usize, b: usize| -> usize {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0usize; 2 * degree - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // reduce modulo the irreducible: x^degree = -poly
            for k in (degree..prod.len()).rev() {
                let coeff = prod[k];
                if coeff == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, &c) in poly.iter().enumerate() {
                    let idx = k - degree + i;
                    prod[idx] = (prod[idx] + (p - c % p) % p * coeff) % p;
                }
            }
            undigits(&prod[..degree])
        };

        let mut add_table = vec![0; q * q];
        let mut mul_table = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add_table[a * q + b] = add(a, b);
                mul_table[a * q + b] = mul(a, b);
            }
        }
        let mut neg_table = vec![0; q];
        for a in 0..q {
            neg_table[a] = (0..q)
                .find(|&b| add_table[a * q + b] == 0)
                .expect("additive inverse exists");
        }
        let mut inv_table = vec![0; q];
        for a in 1..q {
            inv_table[a] = (1..q)
                .find(|&b| mul_table[a * q + b] == 1)
                .ok_or_else(|| {
                    ConstructionError::FieldAxiomFailure(q, format!("{a} has no inverse"))
                })?;
        }

        let field = FiniteField { q, p, degree, add_table, mul_table, neg_table, inv_table };
        field.verify_axioms()?;
        Ok(field)
    }

    fn verify_axioms(&self) -> Result<(), ConstructionError> {
        let q = self.q;
        let fail = |msg: String| ConstructionError::FieldAxiomFailure(q, msg);
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(fail(format!("identity laws fail at {a}")));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(fail(format!("commutativity fails at ({a},{b})")));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(fail(format!("additive associativity fails at ({a},{b},{c})")));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(fail(format!("multiplicative associativity fails at ({a},{b},{c})")));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(fail(format!("distributivity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add_table[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg_table[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0, "zero has no inverse");
        self.inv_table[a]
    }
}

/// The points of PG(d,q): normalized coordinate vectors (first nonzero
/// coordinate 1), sorted, with an index for fast lookup.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    field: FiniteField,
    dim: usize,
    points: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ProjectiveSpace {
    pub fn new(dim: usize, q: usize) -> Result<Self, ConstructionError> {
        let field = FiniteField::new(q)?;
        let len = dim + 1;
        let mut points = Vec::new();
        let mut vec = vec![0usize; len];
        loop {
            if !vec.iter().all(|&c| c == 0) {
                let norm = normalize(&field, &vec);
                if norm == vec {
                    points.push(vec.clone());
                }
            }
            let mut i = 0;
            loop {
                if i == len {
                    points.sort();
                    let index = points.iter().cloned().zip(0..).collect();
                    let mut space = ProjectiveSpace { field, dim, points, index };
                    space.index = space
                        .points
                        .iter()
                        .cloned()
                        .enumerate()
                        .map(|(i, p)| (p, i))
                        .collect();
                    let expected = (space.field.q.pow(len as u32) - 1) / (space.field.q - 1);
                    assert_eq!(space.points.len(), expected);
                    return Ok(space);
                }
                vec[i] += 1;
                if vec[i] < field.order() {
                    break;
                }
                vec[i] = 0;
                i += 1;
            }
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn index_of(&self, v: &[usize]) -> Option<usize> {
        self.index.get(&normalize(&self.field, v)).copied()
    }

    /// The projective line through two distinct points, as sorted indices.
    pub fn line_through(&self, a: usize, b: usize) -> Vec<usize> {
        let f = &self.field;
        let pa = &self.points[a];
        let pb = &self.points[b];
        let mut out = vec![a];
        for lambda in 0..f.order() {
            let combo: Vec<usize> = pa
                .iter()
                .zip(pb)
                .map(|(&x, &y)| f.add(f.mul(lambda, x), y))
                .collect();
            out.push(self.index_of(&combo).expect("combination is a projective point"));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The permutation of projective points induced by an invertible matrix
    /// (acting on column vectors).
    pub fn matrix_perm(&self, m: &[Vec<usize>]) -> Result<Permutation, ConstructionError> {
        let f = &self.field;
        let n = self.dim + 1;
        let mut images = Vec::with_capacity(self.points.len());
        for pt in &self.points {
            let mut out = vec![0usize; n];
            for (r, row) in m.iter().enumerate() {
                let mut acc = 0;
                for (c, &coef) in row.iter().enumerate() {
                    acc = f.add(acc, f.mul(coef, pt[c]));
                }
                out[r] = acc;
            }
            let idx = self
                .index_of(&out)
                .ok_or_else(|| ConstructionError::ConstructionFailed("singular matrix".into()))?;
            images.push(idx);
        }
        Permutation::from_images(images)
            .map_err(|_| ConstructionError::ConstructionFailed("matrix action is not a bijection".into()))
    }
}

fn normalize(f: &FiniteField, v: &[usize]) -> Vec<usize> {
    let lead = v.iter().position(|&c| c != 0).expect("nonzero vector");
    let scale = f.inv(v[lead]);
    v.iter().map(|&c| f.mul(scale, c)).collect()
}

/// The symplectic form x0*y1 - x1*y0 + x2*y3 - x3*y2.
fn symplectic_form(f: &FiniteField, x: &[usize], y: &[usize]) -> usize {
    let m = |a: usize, b: usize| f.mul(a, b);
    let mut acc = f.sub(m(x[0], y[1]), m(x[1], y[0]));
    acc = f.add(acc, f.sub(m(x[2], y[3]), m(x[3], y[2])));
    acc
}

/// W(q): points of PG(3,q), lines the totally isotropic lines of the
/// symplectic form. A generalized quadrangle of order (q,q).
pub fn construct_w(q: usize) -> Result<IncidenceStructure, ConstructionError> {
    if ![2, 3, 4].contains(&q) {
        return Err(ConstructionError::UnsupportedField(q));
    }
    let space = ProjectiveSpace::new(3, q)?;
    let f = space.field();
    let n = space.point_count();
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if symplectic_form(f, &space.points()[a], &space.points()[b]) == 0 {
                lines.insert(space.line_through(a, b));
            }
        }
    }
    Ok(IncidenceStructure::new(
        format!("W({q})"),
        n,
        lines.into_iter().collect(),
    )?)
}

/// Coefficients (a,b,c) of an irreducible binary quadratic a*u^2+b*uv+c*v^2.
fn elliptic_binary_form(q: usize) -> Option<(usize, usize, usize)> {
    match q {
        2 => Some((1, 1, 1)),
        3 => Some((1, 1, 2)),
        _ => None,
    }
}

/// Q-(5,q): the elliptic quadric x0*x1 + x2*x3 + f(x4,x5) in PG(5,q) with its
/// fully contained lines. A generalized quadrangle of order (q,q^2).
pub fn construct_elliptic_q5(q: usize) -> Result<IncidenceStructure, ConstructionError> {
    let (fa, fb, fc) =
        elliptic_binary_form(q).ok_or(ConstructionError::UnsupportedField(q))?;
    let space = ProjectiveSpace::new(5, q)?;
    let f = space.field();
    let quadric_value = |x: &[usize]| -> usize {
        let mut acc = f.mul(x[0], x[1]);
        acc = f.add(acc, f.mul(x[2], x[3]));
        acc = f.add(acc, f.mul(fa, f.mul(x[4], x[4])));
        acc = f.add(acc, f.mul(fb, f.mul(x[4], x[5])));
        f.add(acc, f.mul(fc, f.mul(x[5], x[5])))
    };
    let on_quadric: Vec<usize> = (0..space.point_count())
        .filter(|&i| quadric_value(&space.points()[i]) == 0)
        .collect();
    let rank: HashMap<usize, usize> =
        on_quadric.iter().copied().enumerate().map(|(r, i)| (i, r)).collect();

    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (ra, &a) in on_quadric.iter().enumerate() {
        for &b in &on_quadric[ra + 1..] {
            let line = space.line_through(a, b);
            if line.iter().all(|&i| rank.contains_key(&i)) {
                lines.insert(line.iter().map(|i| rank[i]).collect());
            }
        }
    }
    Ok(IncidenceStructure::new(
        format!("Q-(5,{q})"),
        on_quadric.len(),
        lines.into_iter().collect(),
    )?)
}

/// Exhaustively confirms that no plane of PG(5,q) lies on the quadric, by
/// trying to extend each quadric line by each point off it. Used as the
/// minus-type sanity check at small q.
pub fn elliptic_has_no_planes(q: usize) -> Result<bool, ConstructionError> {
    let (fa, fb, fc) =
        elliptic_binary_form(q).ok_or(ConstructionError::UnsupportedField(q))?;
    let space = ProjectiveSpace::new(5, q)?;
    let f = space.field();
    let quadric_value = |x: &[usize]| -> usize {
        let mut acc = f.mul(x[0], x[1]);
        acc = f.add(acc, f.mul(x[2], x[3]));
        acc = f.add(acc, f.mul(fa, f.mul(x[4], x[4])));
        acc = f.add(acc, f.mul(fb, f.mul(x[4], x[5])));
        f.add(acc, f.mul(fc, f.mul(x[5], x[5])))
    };
    let on: Vec<bool> = space.points().iter().map(|p| quadric_value(p) == 0).collect();
    let quadric_points: Vec<usize> =
        (0..space.point_count()).filter(|&i| on[i]).collect();
    for (ra, &a) in quadric_points.iter().enumerate() {
        for &b in &quadric_points[ra + 1..] {
            let line = space.line_through(a, b);
            if !line.iter().all(|&i| on[i]) {
                continue;
            }
            // plane spanned by the line and an external quadric point
            for &c in &quadric_points {
                if line.contains(&c) {
                    continue;
                }
                let mut plane_on_quadric = true;
                'plane: for &x in &line {
                    for y in space.line_through(x, c) {
                        if !on[y] {
                            plane_on_quadric = false;
                            break 'plane;
                        }
                    }
                }
                if plane_on_quadric {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The grid with parameters (s1,s2): points x_{i,j}, one line per row and
/// one per column.
pub fn construct_grid(s1: usize, s2: usize) -> IncidenceStructure {
    assert!(s1 >= 1 && s2 >= 1);
    let cols = s2 + 1;
    let mut lines = Vec::new();
    for i in 0..=s1 {
        lines.push((0..=s2).map(|j| i * cols + j).collect());
    }
    for j in 0..=s2 {
        lines.push((0..=s1).map(|i| i * cols + j).collect());
    }
    IncidenceStructure::new(format!("grid({s1},{s2})"), (s1 + 1) * (s2 + 1), lines)
        .expect("grid construction is valid")
}

/// The dual grid with parameters (t1,t2): the point-line dual of the grid
/// with parameters (t2,t1).
pub fn construct_dual_grid(t1: usize, t2: usize) -> IncidenceStructure {
    let grid = construct_grid(t2, t1);
    let dual = grid.transpose().expect("grids have degree 2 everywhere");
    IncidenceStructure::new(
        format!("dualgrid({t1},{t2})"),
        dual.point_count(),
        dual.lines().to_vec(),
    )
    .expect("dual grid construction is valid")
}

/// Whether `p` is a regular point of a quadrangle of order (s,s): every span
/// {p,x}^perp-perp with x not collinear to p has the maximal size t+1.
pub fn is_regular_point(gq: &Gq, p: usize) -> Result<bool, ConstructionError> {
    let order = gq.order();
    if order.s != order.t {
        return Err(ConstructionError::NotSquareOrder);
    }
    for x in 0..gq.point_count() {
        if gq.collinear(p, x) {
            continue;
        }
        if gq.span(&[p, x]).expect("nonempty").len() != order.t + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Payne derived structure at a regular point `p`: points not collinear
/// with p; lines are the traces of lines missing p together with the spans
/// {p,x}^perp-perp punctured at p. For order (q,q) input the result has
/// order (q-1, q+1).
pub fn payne_derive(gq: &Gq, p: usize) -> Result<Gq, ConstructionError> {
    if !is_regular_point(gq, p)? {
        return Err(ConstructionError::NotRegularPoint(p));
    }
    let n = gq.point_count();
    let keep: Vec<usize> = (0..n).filter(|&x| !gq.collinear(p, x)).collect();
    let rank: HashMap<usize, usize> =
        keep.iter().copied().enumerate().map(|(r, x)| (x, r)).collect();

    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for li in 0..gq.line_count() {
        let pts = gq.line_points(li);
        if pts.contains(&p) {
            continue;
        }
        let trace: Vec<usize> =
            pts.iter().filter_map(|x| rank.get(x).copied()).collect();
        lines.insert(trace);
    }
    let mut seen = vec![false; keep.len()];
    for (r, &x) in keep.iter().enumerate() {
        if seen[r] {
            continue;
        }
        let span = gq.span(&[p, x]).expect("nonempty");
        let punctured: Vec<usize> = span
            .iter()
            .filter(|&&y| y != p)
            .map(|y| rank[y])
            .collect();
        for &row in &punctured {
            seen[row] = true;
        }
        lines.insert(punctured);
    }

    let structure = IncidenceStructure::new(
        format!("payne({},{p})", gq.structure().name()),
        keep.len(),
        lines.into_iter().collect(),
    )?;
    Ok(validate_gq(&structure)?)
}

/// A Payne derived quadrangle together with its elation Singer group and the
/// bookkeeping that ties derived points back to the ambient W(q).
#[derive(Debug, Clone)]
pub struct ElationSinger {
    pub ambient: Gq,
    pub base_point: usize,
    pub derived: Gq,
    /// derived point index -> ambient point index
    pub derived_points: Vec<usize>,
    pub group: PermGroup,
}

/// Builds the group of q^3 symplectic collineations of W(q) fixing the base
/// point and every line through it, restricted to the derived quadrangle.
/// Regularity and the automorphism property are verified, not assumed.
pub fn construct_elation_singer(q: usize) -> Result<ElationSinger, ConstructionError> {
    if ![2, 4].contains(&q) {
        return Err(ConstructionError::UnsupportedField(q));
    }
    let ambient = validate_gq(&construct_w(q)?)?;
    let space = ProjectiveSpace::new(3, q)?;
    let base = space
        .index_of(&[1, 0, 0, 0])
        .expect("e1 is a projective point");

    match elation_group_from_matrices(&ambient, &space, base) {
        Ok(result) => result_to_singer(ambient, base, result),
        Err(_) => {
            let perms = elation_group_from_stabilizer(&ambient, base)?;
            result_to_singer(ambient, base, perms)
        }
    }
}

fn result_to_singer(
    ambient: Gq,
    base: usize,
    perms: Vec<Permutation>,
) -> Result<ElationSinger, ConstructionError> {
    let derived = payne_derive(&ambient, base)?;
    let keep: Vec<usize> = (0..ambient.point_count())
        .filter(|&x| !ambient.collinear(base, x))
        .collect();
    let rank: HashMap<usize, usize> =
        keep.iter().copied().enumerate().map(|(r, x)| (x, r)).collect();

    let mut restricted = Vec::with_capacity(perms.len());
    for g in &perms {
        let images: Vec<usize> = keep
            .iter()
            .map(|&x| {
                rank.get(&g.apply(x)).copied().ok_or_else(|| {
                    ConstructionError::ConstructionFailed(
                        "elation does not stabilize the derived point set".into(),
                    )
                })
            })
            .collect::<Result<_, _>>()?;
        restricted.push(Permutation::from_images(images).map_err(|_| {
            ConstructionError::ConstructionFailed("restriction is not a bijection".into())
        })?);
    }
    restricted.sort();
    restricted.dedup();

    let expected = keep.len();
    if restricted.len() != expected {
        return Err(ConstructionError::ConstructionFailed(format!(
            "expected {expected} elations, found {}",
            restricted.len()
        )));
    }
    for g in &restricted {
        if !line_preserving(&derived, g) {
            return Err(ConstructionError::ConstructionFailed(
                "elation is not an automorphism of the derived structure".into(),
            ));
        }
    }
    let group = PermGroup::from_elements(expected, restricted);
    let elems = group
        .enumerate(DEFAULT_CAP)
        .map_err(|e| ConstructionError::ConstructionFailed(e.to_string()))?;
    if elems.len() != expected {
        return Err(ConstructionError::ConstructionFailed(
            "elation set is not closed under composition".into(),
        ));
    }
    let domain: Vec<usize> = (0..expected).collect();
    let regular = group
        .is_regular_on(&domain, DEFAULT_CAP)
        .map_err(|e| ConstructionError::ConstructionFailed(e.to_string()))?;
    if !regular {
        return Err(ConstructionError::ConstructionFailed(
            "elation group is not regular on the derived points".into(),
        ));
    }
    Ok(ElationSinger { ambient, base_point: base, derived, derived_points: keep, group })
}

fn line_preserving(gq: &Gq, g: &Permutation) -> bool {
    (0..gq.line_count()).all(|li| {
        let mut image: Vec<usize> =
            gq.line_points(li).iter().map(|&p| g.apply(p)).collect();
        image.sort_unstable();
        gq.line_index_of(&image).is_some()
    })
}

/// Primary route: unipotent symplectic matrices fixing e1 and stabilizing
/// every totally isotropic line through it:
///   e1 -> e1, e2 -> c*e1 + e2 + b*e3 - a*e4, e3 -> a*e1 + e3, e4 -> b*e1 + e4.
fn elation_group_from_matrices(
    ambient: &Gq,
    space: &ProjectiveSpace,
    base: usize,
) -> Result<Vec<Permutation>, ConstructionError> {
    let f = space.field();
    let q = f.order();
    let mut perms = Vec::with_capacity(q * q * q);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let m = vec![
                    vec![1, c, a, b],
                    vec![0, 1, 0, 0],
                    vec![0, b, 1, 0],
                    vec![0, f.neg(a), 0, 1],
                ];
                let perm = space.matrix_perm(&m)?;
                if perm.apply(base) != base || !line_preserving(ambient, &perm) {
                    return Err(ConstructionError::ConstructionFailed(
                        "matrix is not an elation".into(),
                    ));
                }
                for &li in ambient.lines_through(base) {
                    let mut image: Vec<usize> =
                        ambient.line_points(li).iter().map(|&p| perm.apply(p)).collect();
                    image.sort_unstable();
                    if ambient.line_index_of(&image) != Some(li) {
                        return Err(ConstructionError::ConstructionFailed(
                            "matrix moves a line through the base point".into(),
                        ));
                    }
                }
                perms.push(perm);
            }
        }
    }
    perms.sort();
    perms.dedup();
    if perms.len() != q * q * q {
        return Err(ConstructionError::ConstructionFailed(format!(
            "expected {} matrices, got {}",
            q * q * q,
            perms.len()
        )));
    }
    Ok(perms)
}

/// Fallback route: the elations about `base` found inside the stabilizer of
/// `base` in the full automorphism group (fix all lines through the point,
/// fix no point off its perp except the identity).
pub fn elation_group_from_stabilizer(
    ambient: &Gq,
    base: usize,
) -> Result<Vec<Permutation>, ConstructionError> {
    let aut = crate::geoaut::automorphism_group(ambient.structure())
        .map_err(|e| ConstructionError::ConstructionFailed(e.to_string()))?;
    let elems = aut
        .enumerate(DEFAULT_CAP)
        .map_err(|e| ConstructionError::ConstructionFailed(e.to_string()))?;
    let perp = ambient.perp_row(base);
    let is_elation = |g: &Permutation| -> bool {
        if g.apply(base) != base {
            return false;
        }
        for &li in ambient.lines_through(base) {
            let mut image: Vec<usize> =
                ambient.line_points(li).iter().map(|&p| g.apply(p)).collect();
            image.sort_unstable();
            if ambient.line_index_of(&image) != Some(li) {
                return false;
            }
        }
        g.is_identity()
            || (0..ambient.point_count())
                .filter(|&x| !perp.contains(x))
                .all(|x| g.apply(x) != x)
    };
    let mut elations: Vec<Permutation> =
        elems.iter().filter(|g| is_elation(g)).cloned().collect();
    elations.sort();
    let closed = closure(ambient.point_count(), &greedy(&elations), DEFAULT_CAP)
        .map_err(|e| ConstructionError::ConstructionFailed(e.to_string()))?;
    if closed != elations {
        return Err(ConstructionError::ConstructionFailed(
            "elation set is not a group".into(),
        ));
    }
    Ok(elations)
}

fn greedy(elements: &[Permutation]) -> Vec<Permutation> {
    if elements.is_empty() {
        return Vec::new();
    }
    crate::perm::greedy_generators(elements[0].degree(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{classify_thin, GQOrder, GridShape};

    #[test]
    fn field_tables_verify_for_all_supported_orders() {
        for &q in SUPPORTED_Q {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.order(), q);
        }
        assert!(matches!(
            FiniteField::new(6),
            Err(ConstructionError::UnsupportedField(6))
        ));
    }

    #[test]
    fn gf4_has_characteristic_two() {
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.characteristic(), 2);
        for a in 0..4 {
            assert_eq!(f.add(a, a), 0);
        }
        // the generator x satisfies x^2 = x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn w_census() {
        for (q, points) in [(2, 15), (3, 40), (4, 85)] {
            let w = construct_w(q).unwrap();
            let gq = validate_gq(&w).unwrap();
            assert_eq!(gq.order(), GQOrder { s: q, t: q });
            assert_eq!(gq.point_count(), points);
            assert_eq!(gq.line_count(), points);
        }
        assert!(matches!(construct_w(5), Err(ConstructionError::UnsupportedField(5))));
    }

    #[test]
    fn elliptic_census() {
        let q2 = validate_gq(&construct_elliptic_q5(2).unwrap()).unwrap();
        assert_eq!(q2.order(), GQOrder { s: 2, t: 4 });
        assert_eq!(q2.point_count(), 27);
        assert_eq!(q2.line_count(), 45);

        let q3 = validate_gq(&construct_elliptic_q5(3).unwrap()).unwrap();
        assert_eq!(q3.order(), GQOrder { s: 3, t: 9 });
        assert_eq!(q3.point_count(), 112);
        assert_eq!(q3.line_count(), 280);
    }

    #[test]
    fn elliptic_quadric_is_line_maximal_at_q2() {
        assert!(elliptic_has_no_planes(2).unwrap());
    }

    #[test]
    fn regular_points() {
        // every point of the symplectic quadrangle is regular: the span of a
        // noncollinear pair is the double orthocomplement, a full projective
        // line of q+1 points
        for q in [2, 3, 4] {
            let w = validate_gq(&construct_w(q).unwrap()).unwrap();
            assert!(is_regular_point(&w, 0).unwrap(), "W({q}) point 0");
        }
        // the dual of W(3) has no regular point (odd q)
        let dual = validate_gq(&construct_w(3).unwrap().transpose().unwrap()).unwrap();
        assert!(!is_regular_point(&dual, 0).unwrap());
        // the operation rejects non-square orders
        let q52 = validate_gq(&construct_elliptic_q5(2).unwrap()).unwrap();
        assert!(matches!(
            is_regular_point(&q52, 0),
            Err(ConstructionError::NotSquareOrder)
        ));
    }

    #[test]
    fn payne_derivation_of_w2_is_thin() {
        let w2 = validate_gq(&construct_w(2).unwrap()).unwrap();
        let derived = payne_derive(&w2, 0).unwrap();
        assert_eq!(derived.order(), GQOrder { s: 1, t: 3 });
        assert_eq!(derived.point_count(), 8);
        assert_eq!(
            classify_thin(derived.structure()),
            GridShape::DualGrid(3, 3)
        );
    }

    #[test]
    fn payne_derivation_of_w3_yields_a_2_4_quadrangle() {
        let w3 = validate_gq(&construct_w(3).unwrap()).unwrap();
        let derived = payne_derive(&w3, 0).unwrap();
        assert_eq!(derived.order(), GQOrder { s: 2, t: 4 });
        assert_eq!(derived.point_count(), 27);
        assert_eq!(derived.line_count(), 45);
    }

    #[test]
    fn payne_derivation_rejects_irregular_points() {
        let dual = validate_gq(&construct_w(3).unwrap().transpose().unwrap()).unwrap();
        assert!(matches!(
            payne_derive(&dual, 0),
            Err(ConstructionError::NotRegularPoint(0))
        ));
    }

    #[test]
    fn payne_derived_w4_has_order_3_5() {
        let w4 = validate_gq(&construct_w(4).unwrap()).unwrap();
        let derived = payne_derive(&w4, 0).unwrap();
        assert_eq!(derived.order(), GQOrder { s: 3, t: 5 });
        assert_eq!(derived.point_count(), 64);
        assert_eq!(derived.line_count(), 96);
    }

    #[test]
    fn elation_singer_at_q2() {
        let es = construct_elation_singer(2).unwrap();
        assert_eq!(es.group.order(DEFAULT_CAP).unwrap(), 8);
        let domain: Vec<usize> = (0..8).collect();
        assert!(es.group.is_regular_on(&domain, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn elation_fallback_agrees_with_matrices_at_q2() {
        let es = construct_elation_singer(2).unwrap();
        let fallback = elation_group_from_stabilizer(&es.ambient, es.base_point).unwrap();
        assert_eq!(fallback.len(), 8);
        // restrict the fallback to derived points and compare element sets
        let rank: HashMap<usize, usize> = es
            .derived_points
            .iter()
            .copied()
            .enumerate()
            .map(|(r, x)| (x, r))
            .collect();
        let mut restricted: Vec<Permutation> = fallback
            .iter()
            .map(|g| {
                Permutation::from_images(
                    es.derived_points
                        .iter()
                        .map(|&x| rank[&g.apply(x)])
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        restricted.sort();
        assert_eq!(restricted, es.group.enumerate(DEFAULT_CAP).unwrap());
    }

    #[test]
    fn elation_singer_at_q4() {
        let es = construct_elation_singer(4).unwrap();
        assert_eq!(es.group.order(DEFAULT_CAP).unwrap(), 64);
        let domain: Vec<usize> = (0..64).collect();
        assert!(es.group.is_regular_on(&domain, DEFAULT_CAP).unwrap());
        // a 2-group, hence solvable
        for g in es.group.enumerate(DEFAULT_CAP).unwrap() {
            assert!(g.order().is_power_of_two());
        }
    }

    #[test]
    fn grid_constructions() {
        let g = construct_grid(1, 1);
        assert_eq!(g.point_count(), 4);
        assert_eq!(g.line_count(), 4);
        let gq = validate_gq(&construct_grid(2, 2)).unwrap();
        assert_eq!(gq.order(), GQOrder { s: 2, t: 1 });
        let dual = validate_gq(&construct_dual_grid(3, 3)).unwrap();
        assert_eq!(dual.order(), GQOrder { s: 1, t: 3 });
    }
}
