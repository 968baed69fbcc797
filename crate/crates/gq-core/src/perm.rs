//! A self-contained permutation group engine for groups of order up to a few
//! million acting on up to ~10^3 points.
//!
//! There is deliberately no Schreier-Sims machinery here. At this scale full
//! closure enumeration is affordable and every order, centralizer and
//! normalizer is computed by exhaustive filtering, which keeps results easy
//! to audit. Enumeration order is always lexicographic on image sequences,
//! so repeated runs produce identical lists.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default enumeration cap: covers every group used at desk scale.
pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation domains differ: {0} vs {1}")]
    DomainMismatch(usize, usize),
    #[error("image sequence is not a bijection")]
    NotBijective,
    #[error("enumeration cap {cap} exceeded{}", match search_space { Some(n) => format!(" (search space ~{n})"), None => String::new() })]
    CapExceeded { cap: usize, search_space: Option<u128> },
    #[error("group is not transitive on its domain")]
    NotTransitive,
    #[error("bad json: {0}")]
    Json(String),
}

fn cap_err(cap: usize) -> PermError {
    PermError::CapExceeded { cap, search_space: None }
}

/// A permutation of `0..degree`, stored in image form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective);
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..degree` from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(PermError::NotBijective);
                }
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Right-action composition: `x^(a.compose(b)) = (x^a)^b`.
    pub fn compose(&self, then: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), then.degree());
        Permutation {
            images: self.images.iter().map(|&x| then.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// The conjugate `a^-1 * self * a`.
    pub fn conjugate_by(&self, a: &Permutation) -> Permutation {
        a.inverse().compose(self).compose(a)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn pow(&self, mut e: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> usize {
        self.cycles_with_fixed()
            .iter()
            .map(|c| c.len())
            .fold(1usize, lcm)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] == i).collect()
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(i, &x)| i == x)
    }

    fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// Nontrivial cycles, each rotated to start at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.images).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, PermError> {
        let images: Vec<usize> =
            serde_json::from_str(text).map_err(|e| PermError::Json(e.to_string()))?;
        Permutation::from_images(images)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Breadth-first closure of a generating set, returned sorted
/// lexicographically on image sequences.
pub fn closure(degree: usize, gens: &[Permutation], cap: usize) -> Result<Vec<Permutation>, PermError> {
    let mut seen: HashSet<Permutation> = HashSet::new();
    let id = Permutation::identity(degree);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for gen in gens {
                let h = g.compose(gen);
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        return Err(cap_err(cap));
                    }
                    seen.insert(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    Ok(elements)
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    domain: usize,
    generators: Vec<Vec<usize>>,
}

/// A finitely generated permutation group with a lazily populated element
/// cache. Groups are immutable after construction; the cache is written once
/// and read concurrently thereafter.
#[derive(Debug)]
pub struct PermGroup {
    domain: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Vec<Permutation>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let out = PermGroup {
            domain: self.domain,
            generators: self.generators.clone(),
            elements: OnceLock::new(),
        };
        if let Some(e) = self.elements.get() {
            let _ = out.elements.set(e.clone());
        }
        out
    }
}

impl PermGroup {
    pub fn from_generators(domain: usize, gens: Vec<Permutation>) -> Result<Self, PermError> {
        let mut unique = Vec::new();
        for g in gens {
            if g.degree() != domain {
                return Err(PermError::DomainMismatch(g.degree(), domain));
            }
            if !g.is_identity() && !unique.contains(&g) {
                unique.push(g);
            }
        }
        if unique.is_empty() {
            unique.push(Permutation::identity(domain));
        }
        Ok(PermGroup { domain, generators: unique, elements: OnceLock::new() })
    }

    pub fn trivial(domain: usize) -> Self {
        PermGroup {
            domain,
            generators: vec![Permutation::identity(domain)],
            elements: OnceLock::new(),
        }
    }

    /// Builds a group from a complete, closed element list. The caller
    /// guarantees closure; a small greedy generating set is derived from the
    /// list so the group can be reported compactly.
    pub fn from_elements(domain: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let gens = greedy_generators(domain, &elements);
        let group = PermGroup { domain, generators: gens, elements: OnceLock::new() };
        let _ = group.elements.set(elements);
        group
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted lexicographically on image sequences.
    pub fn enumerate(&self, cap: usize) -> Result<&[Permutation], PermError> {
        if let Some(e) = self.elements.get() {
            return if e.len() <= cap { Ok(e) } else { Err(cap_err(cap)) };
        }
        let elements = closure(self.domain, &self.generators, cap)?;
        let _ = self.elements.set(elements);
        Ok(self.elements.get().expect("just set"))
    }

    pub fn order(&self, cap: usize) -> Result<usize, PermError> {
        Ok(self.enumerate(cap)?.len())
    }

    pub fn contains(&self, g: &Permutation, cap: usize) -> Result<bool, PermError> {
        let elems = self.enumerate(cap)?;
        Ok(elems.binary_search(g).is_ok())
    }

    /// Orbit of a point under the generators, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.domain];
        seen[point] = true;
        let mut stack = vec![point];
        let mut orbit = vec![point];
        while let Some(p) = stack.pop() {
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                    stack.push(q);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits of the points in `subset`, each orbit computed in the full
    /// domain and reported sorted.
    pub fn orbits(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.domain];
        let mut out = Vec::new();
        for &p in subset {
            if assigned[p] {
                continue;
            }
            let orbit = self.orbit(p);
            for &q in &orbit {
                assigned[q] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive_on(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return true;
        }
        let orbit = self.orbit(set[0]);
        set.iter().all(|p| orbit.binary_search(p).is_ok()) && orbit.len() == set.len()
    }

    pub fn is_regular_on(&self, set: &[usize], cap: usize) -> Result<bool, PermError> {
        Ok(self.is_transitive_on(set) && self.order(cap)? == set.len())
    }

    /// Semiregular on `set`: no nonidentity element fixes a point of `set`.
    pub fn is_semiregular_on(&self, set: &[usize], cap: usize) -> Result<bool, PermError> {
        let elems = self.enumerate(cap)?;
        Ok(elems
            .iter()
            .filter(|g| !g.is_identity())
            .all(|g| set.iter().all(|&p| g.apply(p) != p)))
    }

    pub fn stabilizer(&self, point: usize, cap: usize) -> Result<PermGroup, PermError> {
        let elems = self.enumerate(cap)?;
        let fixed: Vec<Permutation> =
            elems.iter().filter(|g| g.apply(point) == point).cloned().collect();
        Ok(PermGroup::from_elements(self.domain, fixed))
    }

    pub fn centralizer_of(&self, x: &Permutation, cap: usize) -> Result<PermGroup, PermError> {
        let elems = self.enumerate(cap)?;
        let fixed: Vec<Permutation> =
            elems.iter().filter(|g| g.commutes_with(x)).cloned().collect();
        Ok(PermGroup::from_elements(self.domain, fixed))
    }

    /// Conjugacy classes as (representative, class size), classes ordered by
    /// their lexicographically least member.
    pub fn conjugacy_classes(&self, cap: usize) -> Result<Vec<(Permutation, usize)>, PermError> {
        let elems = self.enumerate(cap)?;
        let index: HashMap<&Permutation, usize> =
            elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut visited = vec![false; elems.len()];
        let mut out = Vec::new();
        for start in 0..elems.len() {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut class = vec![start];
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for gen in &self.generators {
                    let conj = elems[i].conjugate_by(gen);
                    let j = index[&conj];
                    if !visited[j] {
                        visited[j] = true;
                        class.push(j);
                        stack.push(j);
                    }
                }
            }
            out.push((elems[start].clone(), class.len()));
        }
        Ok(out)
    }

    /// Normalizer of `h` in this group, by exhaustive filtering.
    pub fn normalizer_of(&self, h: &PermGroup, cap: usize) -> Result<PermGroup, PermError> {
        let elems = self.enumerate(cap)?;
        let h_elems = h.enumerate(cap)?;
        let h_set: HashSet<&Permutation> = h_elems.iter().collect();
        let normalizing: Vec<Permutation> = elems
            .iter()
            .filter(|g| {
                h.generators
                    .iter()
                    .all(|x| h_set.contains(&x.conjugate_by(g)))
            })
            .cloned()
            .collect();
        Ok(PermGroup::from_elements(self.domain, normalizing))
    }

    /// Primitivity on the full domain via the minimal block-system closure:
    /// for each pair {0, b}, the join of the partition generated by merging
    /// the pair must be the trivial partition.
    pub fn is_primitive(&self) -> Result<bool, PermError> {
        let n = self.domain;
        if !self.is_transitive_on(&(0..n).collect::<Vec<_>>()) {
            return Err(PermError::NotTransitive);
        }
        if n <= 2 {
            return Ok(true);
        }
        for b in 1..n {
            if self.minimal_block_size(0, b) < n {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn minimal_block_size(&self, a: usize, b: usize) -> usize {
        let n = self.domain;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut queue = vec![(a, b)];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
        while let Some((x, y)) = queue.pop() {
            for g in &self.generators {
                let (gx, gy) = (g.apply(x), g.apply(y));
                let (rx, ry) = (find(&mut parent, gx), find(&mut parent, gy));
                if rx != ry {
                    parent[rx] = ry;
                    queue.push((gx, gy));
                }
            }
        }
        let root = find(&mut parent, a);
        (0..n).filter(|&x| find(&mut parent, x) == root).count()
    }

    /// A Sylow p-subgroup, found by iterated normalizer extension from a
    /// p-element.
    pub fn sylow_subgroup(&self, p: usize, cap: usize) -> Result<PermGroup, PermError> {
        assert!(p >= 2, "p must be a prime");
        let elems = self.enumerate(cap)?;
        let mut target = 1usize;
        {
            let mut order = elems.len();
            while order % p == 0 {
                order /= p;
                target *= p;
            }
        }
        if target == 1 {
            return Ok(PermGroup::trivial(self.domain));
        }
        let p_part = |g: &Permutation| -> Option<Permutation> {
            let ord = g.order();
            if ord % p != 0 {
                return None;
            }
            let mut m = ord;
            while m % p == 0 {
                m /= p;
            }
            Some(g.pow(m))
        };
        let seed = elems
            .iter()
            .filter_map(|g| p_part(g))
            .find(|g| !g.is_identity())
            .expect("p divides the group order, so a p-element exists");
        let mut current = PermGroup::from_elements(
            self.domain,
            closure(self.domain, std::slice::from_ref(&seed), cap)?,
        );
        while current.order(cap)? < target {
            let normalizer = self.normalizer_of(&current, cap)?;
            let current_elems: HashSet<&Permutation> =
                current.enumerate(cap)?.iter().collect();
            let extension = normalizer
                .enumerate(cap)?
                .iter()
                .filter_map(|g| p_part(g))
                .find(|y| !current_elems.contains(y))
                .expect("a proper p-subgroup grows inside its normalizer");
            let mut gens = current.generators.clone();
            gens.push(extension);
            current = PermGroup::from_elements(self.domain, closure(self.domain, &gens, cap)?);
        }
        Ok(current)
    }

    /// All subgroups of order exactly `n`, by breadth-first closure over
    /// generated subsets with Lagrange pruning.
    pub fn subgroups_of_order(&self, n: usize, cap: usize) -> Result<Vec<PermGroup>, PermError> {
        let elems = self.enumerate(cap)?.to_vec();
        let total = elems.len();
        if n == 0 || total % n != 0 {
            return Ok(Vec::new());
        }
        let candidates: Vec<&Permutation> = elems
            .iter()
            .filter(|g| !g.is_identity() && n % g.order() == 0)
            .collect();
        let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
        let trivial: Vec<Permutation> = vec![Permutation::identity(self.domain)];
        seen.insert(trivial.clone());
        let mut queue = vec![trivial];
        let mut found = Vec::new();
        let mut nodes = 0usize;
        while let Some(current) = queue.pop() {
            nodes += 1;
            if nodes > cap {
                return Err(cap_err(cap));
            }
            if current.len() == n {
                found.push(current);
                continue;
            }
            for &x in &candidates {
                if current.binary_search(x).is_ok() {
                    continue;
                }
                let mut gens: Vec<Permutation> =
                    greedy_generators(self.domain, &current);
                gens.push(x.clone());
                let Ok(closed) = closure(self.domain, &gens, n + 1) else {
                    continue;
                };
                if closed.len() > n || n % closed.len() != 0 {
                    continue;
                }
                if seen.insert(closed.clone()) {
                    queue.push(closed);
                }
            }
        }
        found.sort();
        Ok(found
            .into_iter()
            .map(|elements| PermGroup::from_elements(self.domain, elements))
            .collect())
    }

    /// A small generating set derived greedily from the element list.
    pub fn minimal_generators(&self, cap: usize) -> Result<Vec<Permutation>, PermError> {
        let elems = self.enumerate(cap)?;
        Ok(greedy_generators(self.domain, elems))
    }

    /// Enumerates Aut(G) by assigning generator images over elements of
    /// matching order, pruning on multiplicativity via a graph closure in
    /// G x G.
    pub fn group_automorphisms(&self, cap: usize) -> Result<Vec<GroupAutomorphism>, PermError> {
        let elems = self.enumerate(cap)?.to_vec();
        let n = elems.len();
        let index: HashMap<Permutation, usize> =
            elems.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let gens = greedy_generators(self.domain, &elems);
        let gen_idx: Vec<usize> = gens.iter().map(|g| index[g]).collect();
        let orders: Vec<usize> = elems.iter().map(|g| g.order()).collect();

        // Candidate images share the generator's order; bail out early if the
        // raw assignment space dwarfs the cap.
        let mut space: u128 = 1;
        for &gi in &gen_idx {
            let count = orders.iter().filter(|&&o| o == orders[gi]).count() as u128;
            space = space.saturating_mul(count);
        }
        if space > cap as u128 {
            return Err(PermError::CapExceeded { cap, search_space: Some(space) });
        }

        let mul = |a: usize, b: usize| -> usize { index[&elems[a].compose(&elems[b])] };

        // Graph of a partial homomorphism: pairs (x, y) closed under products
        // of the assigned generator pairs. A conflict in either coordinate
        // kills the branch.
        struct Search<'a> {
            n: usize,
            gen_idx: &'a [usize],
            orders: &'a [usize],
            mul: &'a dyn Fn(usize, usize) -> usize,
            out: Vec<Vec<usize>>,
        }
        impl Search<'_> {
            fn close(&self, pairs: &[(usize, usize)]) -> Option<Vec<(usize, usize)>> {
                let mut fwd: HashMap<usize, usize> = HashMap::new();
                let mut bwd: HashMap<usize, usize> = HashMap::new();
                let id = self.orders.iter().position(|&o| o == 1).expect("identity");
                let mut list = vec![(id, id)];
                fwd.insert(id, id);
                bwd.insert(id, id);
                let mut frontier = vec![(id, id)];
                while let Some((a, b)) = frontier.pop() {
                    for &(g, h) in pairs {
                        let (xa, xb) = ((self.mul)(a, g), (self.mul)(b, h));
                        match fwd.get(&xa) {
                            Some(&prev) if prev != xb => return None,
                            Some(_) => continue,
                            None => {}
                        }
                        if bwd.contains_key(&xb) {
                            return None;
                        }
                        fwd.insert(xa, xb);
                        bwd.insert(xb, xa);
                        list.push((xa, xb));
                        frontier.push((xa, xb));
                    }
                }
                Some(list)
            }

            fn assign(&mut self, level: usize, chosen: &mut Vec<(usize, usize)>) {
                if level == self.gen_idx.len() {
                    if let Some(graph) = self.close(chosen) {
                        if graph.len() == self.n {
                            let mut table = vec![usize::MAX; self.n];
                            for (a, b) in graph {
                                table[a] = b;
                            }
                            self.out.push(table);
                        }
                    }
                    return;
                }
                let g = self.gen_idx[level];
                for h in 0..self.n {
                    if self.orders[h] != self.orders[g] {
                        continue;
                    }
                    chosen.push((g, h));
                    if self.close(chosen).is_some() {
                        self.assign(level + 1, chosen);
                    }
                    chosen.pop();
                }
            }
        }

        let mut search = Search { n, gen_idx: &gen_idx, orders: &orders, mul: &mul, out: Vec::new() };
        search.assign(0, &mut Vec::new());
        let mut tables = search.out;
        tables.sort();
        Ok(tables
            .into_iter()
            .map(|table| {
                let gen_images = gen_idx.iter().map(|&g| (g, table[g])).collect();
                GroupAutomorphism { table, gen_images }
            })
            .collect())
    }

    pub fn to_json(&self) -> String {
        let raw = GroupJson {
            domain: self.domain,
            generators: self.generators.iter().map(|g| g.images.clone()).collect(),
        };
        serde_json::to_string(&raw).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, PermError> {
        let raw: GroupJson =
            serde_json::from_str(text).map_err(|e| PermError::Json(e.to_string()))?;
        let gens = raw
            .generators
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<Vec<_>, _>>()?;
        for g in &gens {
            if g.degree() != raw.domain {
                return Err(PermError::DomainMismatch(g.degree(), raw.domain));
            }
        }
        PermGroup::from_generators(raw.domain, gens)
    }
}

/// Greedy generating set: walk the sorted element list and keep each element
/// that enlarges the generated subgroup.
pub fn greedy_generators(domain: usize, elements: &[Permutation]) -> Vec<Permutation> {
    if elements.len() <= 1 {
        return vec![Permutation::identity(domain)];
    }
    let mut gens: Vec<Permutation> = Vec::new();
    let mut generated: HashSet<Permutation> = HashSet::new();
    generated.insert(Permutation::identity(domain));
    for g in elements {
        if generated.contains(g) {
            continue;
        }
        gens.push(g.clone());
        let closed = closure(domain, &gens, elements.len())
            .expect("closure of a subset cannot exceed the group order");
        generated = closed.into_iter().collect();
        if generated.len() == elements.len() {
            break;
        }
    }
    gens
}

/// An automorphism of a finite group, stored as a permutation table on the
/// indices of the parent group's sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupAutomorphism {
    table: Vec<usize>,
    gen_images: Vec<(usize, usize)>,
}

impl GroupAutomorphism {
    pub fn identity(n: usize) -> Self {
        GroupAutomorphism { table: (0..n).collect(), gen_images: Vec::new() }
    }

    pub fn from_table(table: Vec<usize>) -> Self {
        GroupAutomorphism { table, gen_images: Vec::new() }
    }

    pub fn apply(&self, elem_index: usize) -> usize {
        self.table[elem_index]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn gen_images(&self) -> &[(usize, usize)] {
        &self.gen_images
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn order(&self) -> usize {
        Permutation::from_images(self.table.clone())
            .expect("table is a bijection")
            .order()
    }

    pub fn compose(&self, then: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism {
            table: self.table.iter().map(|&x| then.table[x]).collect(),
            gen_images: Vec::new(),
        }
    }

    pub fn inverse(&self) -> GroupAutomorphism {
        let mut table = vec![0; self.table.len()];
        for (i, &x) in self.table.iter().enumerate() {
            table[x] = i;
        }
        GroupAutomorphism { table, gen_images: Vec::new() }
    }
}
