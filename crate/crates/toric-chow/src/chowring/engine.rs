//! The graded-piece engine.
//!
//! For a homogeneous degree delta, the degree-delta part of the presented
//! ring is the cokernel of the lattice spanned by (monomial x relation)
//! inside the free module on the degree-delta monomials. Each such
//! cokernel is computed exactly by a Smith normal form, so comparisons of
//! presentations are certificates: disagreement of invariant factors at
//! any degree proves non-isomorphism as graded groups.
//!
//! Generators of degree zero are supported when they close into a finite
//! group under the relations (which is how classifying-stack and
//! torsion-box generators arise). The engine folds them into a group ring
//! over that finite group: the monomial basis at each degree is the set of
//! positive-degree monomials times a group element.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{GradedPresentation, Poly};
use crate::intlin::{self, IntMatrix};
use crate::{Error, Result};

/// Invariant factors of one graded piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupClass {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupClass {
    pub fn trivial() -> Self {
        GroupClass { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for GroupClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for m in &self.torsion {
            parts.push(format!("Z/{}", m));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Map from occurring degree to invariant factors, up to a bound.
pub type GradedGroupTable = BTreeMap<BigRational, GroupClass>;

/// Canonical invariant-factor chain of a direct sum of cyclic groups.
pub fn canonical_invariant_factors(orders: &[BigInt]) -> Vec<BigInt> {
    let mut by_prime: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for m in orders {
        let mut m = m.clone();
        assert!(m > BigInt::one(), "orders must exceed 1");
        let mut p = BigInt::from(2);
        while &p * &p <= m {
            let mut e = 0u32;
            while m.mod_floor(&p).is_zero() {
                m /= &p;
                e += 1;
            }
            if e > 0 {
                by_prime.entry(p.clone()).or_default().push(e);
            }
            p += 1;
        }
        if m > BigInt::one() {
            by_prime.entry(m).or_default().push(1);
        }
    }
    let mut chain_len = 0;
    for exps in by_prime.values_mut() {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        chain_len = chain_len.max(exps.len());
    }
    // Factor k from the end multiplies the k-th largest power of each prime.
    let mut chain = vec![BigInt::one(); chain_len];
    for (p, exps) in &by_prime {
        for (k, &e) in exps.iter().enumerate() {
            let idx = chain_len - 1 - k;
            chain[idx] *= p.pow(e);
        }
    }
    chain.retain(|c| !c.is_one());
    chain
}

/// Finite group structure detected on the degree-0 generators.
struct TGroup {
    /// Element 0 is the identity; element i+1 corresponds to the i-th
    /// degree-0 generator.
    size: usize,
    gen_elem: Vec<usize>,
    gen_index: Vec<usize>, // generator index per degree-0 generator slot
    table: Vec<Vec<usize>>,
}

impl TGroup {
    fn trivial() -> Self {
        TGroup { size: 1, gen_elem: Vec::new(), gen_index: Vec::new(), table: vec![vec![0]] }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    fn pow(&self, a: usize, mut e: u32) -> usize {
        let mut acc = 0;
        while e > 0 {
            acc = self.mul(acc, a);
            e -= 1;
        }
        acc
    }

    /// Fold the degree-0 part of an exponent vector into a group element.
    fn fold(&self, exps: &[u32]) -> usize {
        let mut acc = 0;
        for (slot, &g) in self.gen_index.iter().enumerate() {
            if exps[g] > 0 {
                acc = self.mul(acc, self.pow(self.gen_elem[slot], exps[g]));
            }
        }
        acc
    }

    fn detect(p: &GradedPresentation) -> Result<TGroup> {
        let degrees = p.degrees();
        let zero_gens: Vec<usize> =
            (0..degrees.len()).filter(|&i| degrees[i].is_zero()).collect();
        if zero_gens.is_empty() {
            return Ok(TGroup::trivial());
        }
        let slot_of: BTreeMap<usize, usize> =
            zero_gens.iter().enumerate().map(|(s, &g)| (g, s)).collect();
        let k = zero_gens.len();
        // Element ids: 0 identity, 1..=k the generators.
        // Find a product rule for every unordered generator pair.
        let mut pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for r in p.relations() {
            let terms = r.terms();
            if terms.len() != 2 {
                continue;
            }
            let classify = |exps: &[u32]| -> Option<PatTerm> {
                let total: u32 = exps.iter().sum();
                let z: u32 = zero_gens.iter().map(|&g| exps[g]).sum();
                if total != z {
                    return None; // involves a positive-degree generator
                }
                match total {
                    0 => Some(PatTerm::Unit),
                    1 => {
                        let g = zero_gens.iter().find(|&&g| exps[g] == 1).copied()?;
                        Some(PatTerm::Single(slot_of[&g]))
                    }
                    2 => {
                        let mut found: Vec<usize> = Vec::new();
                        for &g in &zero_gens {
                            for _ in 0..exps[g] {
                                found.push(slot_of[&g]);
                            }
                        }
                        if found.len() == 2 {
                            Some(PatTerm::Pair(found[0].min(found[1]), found[0].max(found[1])))
                        } else {
                            None
                        }
                    }
                    _ => None,
                }
            };
            let (a, b) = (classify(&terms[0].exps), classify(&terms[1].exps));
            let unit_coeffs = terms[0].coeff.abs().is_one()
                && terms[1].coeff.abs().is_one()
                && terms[0].coeff == -terms[1].coeff.clone();
            if !unit_coeffs {
                continue;
            }
            match (a, b) {
                (Some(PatTerm::Pair(i, j)), Some(PatTerm::Single(s)))
                | (Some(PatTerm::Single(s)), Some(PatTerm::Pair(i, j))) => {
                    pair.insert((i, j), s + 1);
                }
                (Some(PatTerm::Pair(i, j)), Some(PatTerm::Unit))
                | (Some(PatTerm::Unit), Some(PatTerm::Pair(i, j))) => {
                    pair.insert((i, j), 0);
                }
                _ => {}
            }
        }
        let mut table = vec![vec![0usize; k + 1]; k + 1];
        for a in 0..=k {
            table[a][0] = a;
            table[0][a] = a;
        }
        for i in 0..k {
            for j in i..k {
                let Some(&e) = pair.get(&(i, j)) else {
                    return Err(Error::Unsupported(format!(
                        "degree-0 generators {} and {} have no product relation; \
                         the engine needs a full multiplication table",
                        p.generators()[zero_gens[i]].name,
                        p.generators()[zero_gens[j]].name
                    )));
                };
                table[i + 1][j + 1] = e;
                table[j + 1][i + 1] = e;
            }
        }
        let g = TGroup {
            size: k + 1,
            gen_elem: (1..=k).collect(),
            gen_index: zero_gens.clone(),
            table,
        };
        // The folded basis is only correct if the table is a group law.
        for a in 0..g.size {
            let mut seen = vec![false; g.size];
            for b in 0..g.size {
                seen[g.mul(a, b)] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::Unsupported("degree-0 generators do not close into a group".into()));
            }
            for b in 0..g.size {
                for c in 0..g.size {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(Error::Unsupported(
                            "degree-0 generator products are not associative".into(),
                        ));
                    }
                }
            }
        }
        Ok(g)
    }
}

enum PatTerm {
    Unit,
    Single(usize),
    Pair(usize, usize),
}

/// Per-degree data: monomial basis, relation lattice in Smith form.
struct DegreeData {
    basis: Vec<(Vec<u32>, usize)>,
    index: BTreeMap<(Vec<u32>, usize), usize>,
    diag: Vec<BigInt>,
    rank: usize,
    u: IntMatrix,
}

impl DegreeData {
    fn class(&self) -> GroupClass {
        let torsion: Vec<BigInt> =
            self.diag.iter().filter(|d| !d.is_one()).cloned().collect();
        GroupClass { free_rank: self.basis.len() - self.rank, torsion }
    }
}

pub struct GradedEngine {
    pres: GradedPresentation,
    limit: usize,
    tgroup: TGroup,
    /// Scaled integer weights of the positive-degree generators.
    weights: Vec<(usize, u64)>,
    scale: BigInt,
    relation_degrees: Vec<BigRational>,
    cache: Mutex<BTreeMap<BigRational, std::sync::Arc<DegreeData>>>,
    mono_cache: Mutex<BTreeMap<BigRational, std::sync::Arc<Vec<Vec<u32>>>>>,
}

impl GradedEngine {
    pub fn new(pres: &GradedPresentation, limit: usize) -> Result<Self> {
        let tgroup = TGroup::detect(pres)?;
        let degrees = pres.degrees();
        let mut scale = BigInt::one();
        for d in &degrees {
            if d.is_positive() {
                scale = scale.lcm(d.denom());
            }
        }
        let mut weights = Vec::new();
        for (i, d) in degrees.iter().enumerate() {
            if d.is_positive() {
                let w = (d * BigRational::from(scale.clone())).to_integer();
                let w = w.to_u64().ok_or_else(|| Error::ResourceLimit("generator degree too large".into()))?;
                weights.push((i, w));
            }
        }
        let mut relation_degrees = Vec::new();
        for r in pres.relations() {
            let d = r.homogeneous_degree(&degrees)?.expect("nonzero relation");
            relation_degrees.push(d);
        }
        Ok(GradedEngine {
            pres: pres.clone(),
            limit,
            tgroup,
            weights,
            scale,
            relation_degrees,
            cache: Mutex::new(BTreeMap::new()),
            mono_cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    /// Integer target of the knapsack for a degree, if the degree is
    /// representable at all.
    fn target(&self, degree: &BigRational) -> Option<u64> {
        let t = degree * BigRational::from(self.scale.clone());
        if !t.is_integer() || t.is_negative() {
            return None;
        }
        t.to_integer().to_u64()
    }

    /// All exponent vectors over the positive-degree generators with the
    /// given scaled weight.
    fn positive_monomials(&self, degree: &BigRational) -> std::sync::Arc<Vec<Vec<u32>>> {
        if let Some(hit) = self.mono_cache.lock().unwrap().get(degree) {
            return hit.clone();
        }
        let n = self.pres.generators().len();
        let mut out: Vec<Vec<u32>> = Vec::new();
        if let Some(target) = self.target(degree) {
            let mut current = vec![0u32; n];
            fn rec(
                weights: &[(usize, u64)],
                k: usize,
                remaining: u64,
                current: &mut Vec<u32>,
                out: &mut Vec<Vec<u32>>,
            ) {
                if k == weights.len() {
                    if remaining == 0 {
                        out.push(current.clone());
                    }
                    return;
                }
                if k + 1 == weights.len() {
                    let (idx, w) = weights[k];
                    if remaining % w == 0 {
                        current[idx] = (remaining / w) as u32;
                        out.push(current.clone());
                        current[idx] = 0;
                    }
                    return;
                }
                let (idx, w) = weights[k];
                let mut e = 0u32;
                loop {
                    let used = w.checked_mul(e as u64);
                    match used {
                        Some(u) if u <= remaining => {
                            current[idx] = e;
                            rec(weights, k + 1, remaining - u, current, out);
                            e += 1;
                        }
                        _ => break,
                    }
                }
                current[idx] = 0;
            }
            if self.weights.is_empty() {
                if target == 0 {
                    out.push(current.clone());
                }
            } else {
                rec(&self.weights, 0, target, &mut current, &mut out);
            }
        }
        out.sort();
        let arc = std::sync::Arc::new(out);
        self.mono_cache.lock().unwrap().insert(degree.clone(), arc.clone());
        arc
    }

    /// All degrees at most `max_degree` realized by some monomial.
    pub fn occurring_degrees(&self, max_degree: &BigRational) -> Vec<BigRational> {
        let Some(max_t) = self.target(&floor_to_scale(max_degree, &self.scale)) else {
            return Vec::new();
        };
        let max_t = max_t.min(10_000_000);
        let mut reachable = vec![false; (max_t + 1) as usize];
        reachable[0] = true;
        for &(_, w) in &self.weights {
            for t in w..=max_t {
                if reachable[(t - w) as usize] {
                    reachable[t as usize] = true;
                }
            }
        }
        reachable
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .map(|(t, _)| BigRational::new(BigInt::from(t), self.scale.clone()))
            .collect()
    }

    fn degree_data(&self, degree: &BigRational) -> Result<std::sync::Arc<DegreeData>> {
        if let Some(hit) = self.cache.lock().unwrap().get(degree) {
            return Ok(hit.clone());
        }
        let monos = self.positive_monomials(degree);
        let t = self.tgroup.size;
        let count = monos.len().checked_mul(t).unwrap_or(usize::MAX);
        if count > self.limit {
            return Err(Error::ResourceLimit(format!(
                "degree {} needs {} basis monomials, limit is {}",
                degree, count, self.limit
            )));
        }
        let mut basis: Vec<(Vec<u32>, usize)> = Vec::with_capacity(count);
        let mut index: BTreeMap<(Vec<u32>, usize), usize> = BTreeMap::new();
        for m in monos.iter() {
            for a in 0..t {
                index.insert((m.clone(), a), basis.len());
                basis.push((m.clone(), a));
            }
        }
        // Accumulate the relation lattice as a column echelon basis.
        let mut echelon = Echelon::new(basis.len());
        for (ri, r) in self.pres.relations().iter().enumerate() {
            let rdeg = &self.relation_degrees[ri];
            let mdeg = degree - rdeg;
            if mdeg.is_negative() {
                continue;
            }
            let mults = self.positive_monomials(&mdeg);
            for m in mults.iter() {
                for a in 0..t {
                    let col = self.fold_multiple(&index, m, a, r);
                    echelon.insert(col);
                }
            }
        }
        let b = echelon.into_matrix(basis.len());
        let snf = intlin::snf(&b);
        let diag: Vec<BigInt> = (0..snf.rank).map(|i| snf.d.get(i, i).clone()).collect();
        let data = std::sync::Arc::new(DegreeData { basis, index, diag, rank: snf.rank, u: snf.u });
        self.cache.lock().unwrap().insert(degree.clone(), data.clone());
        Ok(data)
    }

    /// The vector of `monomial * t-element * relation` in the folded basis.
    fn fold_multiple(
        &self,
        index: &BTreeMap<(Vec<u32>, usize), usize>,
        m: &[u32],
        a: usize,
        r: &Poly,
    ) -> Vec<(usize, BigInt)> {
        let mut entries: BTreeMap<usize, BigInt> = BTreeMap::new();
        for term in r.terms() {
            let mut pos = term.exps.clone();
            for &g in &self.tgroup.gen_index {
                pos[g] = 0;
            }
            for (i, e) in m.iter().enumerate() {
                pos[i] += e;
            }
            let elem = self.tgroup.mul(a, self.tgroup.fold(&term.exps));
            let idx = *index.get(&(pos, elem)).expect("folded monomial in basis");
            *entries.entry(idx).or_insert_with(BigInt::zero) += &term.coeff;
        }
        entries.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Fold an arbitrary homogeneous polynomial into the degree basis.
    fn fold_poly(&self, data: &DegreeData, p: &Poly) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); data.basis.len()];
        for term in p.terms() {
            let mut pos = term.exps.clone();
            for &g in &self.tgroup.gen_index {
                pos[g] = 0;
            }
            let elem = self.tgroup.fold(&term.exps);
            let idx = *data.index.get(&(pos, elem)).expect("monomial in basis");
            v[idx] += &term.coeff;
        }
        v
    }

    /// Invariant factors of one graded piece.
    pub fn piece(&self, degree: &BigRational) -> Result<GroupClass> {
        Ok(self.degree_data(degree)?.class())
    }

    /// All graded pieces up to `max_degree`.
    pub fn graded_pieces(&self, max_degree: &BigRational) -> Result<GradedGroupTable> {
        let mut table = GradedGroupTable::new();
        for d in self.occurring_degrees(max_degree) {
            table.insert(d.clone(), self.piece(&d)?);
        }
        Ok(table)
    }

    /// Coordinates of a homogeneous element in the canonical residue
    /// system of its degree: torsion coordinates reduced modulo the
    /// invariant factors, free coordinates exact. The zero vector is
    /// returned exactly when the element lies in the relation lattice.
    pub fn normal_form(&self, element: &Poly) -> Result<Vec<BigInt>> {
        if element.is_zero() {
            return Ok(Vec::new());
        }
        if element.nvars() != Some(self.pres.generators().len()) {
            return Err(Error::Invalid("element is not over the presentation generators".into()));
        }
        let degree = element
            .homogeneous_degree(&self.pres.degrees())?
            .expect("nonzero element has a degree");
        let data = self.degree_data(&degree)?;
        let v = self.fold_poly(&data, element);
        let w = data.u.mul_vec(&v);
        let mut out = Vec::new();
        for (i, d) in data.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            out.push(w[i].mod_floor(d));
        }
        for item in w.iter().skip(data.rank) {
            out.push(item.clone());
        }
        Ok(out)
    }

    pub fn is_zero_class(&self, element: &Poly) -> Result<bool> {
        Ok(self.normal_form(element)?.iter().all(|c| c.is_zero()))
    }

    /// Degree-by-degree comparison of invariant factors up to
    /// `max_degree`. A `false` verdict certifies that the rings are not
    /// isomorphic as graded groups; `true` is only a necessary condition
    /// for ring isomorphism.
    pub fn equal(
        a: &GradedPresentation,
        b: &GradedPresentation,
        max_degree: &BigRational,
        limit: usize,
    ) -> Result<(bool, Vec<(BigRational, GroupClass, GroupClass)>)> {
        let ea = GradedEngine::new(a, limit)?;
        let eb = GradedEngine::new(b, limit)?;
        let mut degrees: std::collections::BTreeSet<BigRational> = std::collections::BTreeSet::new();
        degrees.extend(ea.occurring_degrees(max_degree));
        degrees.extend(eb.occurring_degrees(max_degree));
        let mut mismatches = Vec::new();
        for d in degrees {
            // A degree with no monomials on one side is the trivial group
            // there; piece() computes exactly that from an empty basis.
            let ca = ea.piece(&d)?;
            let cb = eb.piece(&d)?;
            if ca != cb {
                mismatches.push((d, ca, cb));
            }
        }
        Ok((mismatches.is_empty(), mismatches))
    }
}

fn floor_to_scale(degree: &BigRational, scale: &BigInt) -> BigRational {
    let scaled = degree * BigRational::from(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale.clone())
}

/// Incremental column echelon accumulator over the integers. Keeps at
/// most one pivot column per row, so the stored basis never exceeds the
/// ambient dimension.
struct Echelon {
    dim: usize,
    /// pivot row -> column (dense), pivot entry is the first nonzero.
    columns: BTreeMap<usize, Vec<BigInt>>,
}

impl Echelon {
    fn new(dim: usize) -> Self {
        Echelon { dim, columns: BTreeMap::new() }
    }

    fn insert(&mut self, sparse: Vec<(usize, BigInt)>) {
        let mut col = vec![BigInt::zero(); self.dim];
        for (i, c) in sparse {
            col[i] = c;
        }
        self.reduce(col);
    }

    fn reduce(&mut self, mut col: Vec<BigInt>) {
        for r in 0..self.dim {
            if col[r].is_zero() {
                continue;
            }
            match self.columns.get_mut(&r) {
                None => {
                    if col[r].is_negative() {
                        for e in col.iter_mut() {
                            *e = -std::mem::take(e);
                        }
                    }
                    self.columns.insert(r, col);
                    return;
                }
                Some(pivot) => {
                    let a = pivot[r].clone();
                    let b = col[r].clone();
                    if b.mod_floor(&a).is_zero() {
                        let q = b / &a;
                        for i in r..self.dim {
                            let v = &col[i] - &q * &pivot[i];
                            col[i] = v;
                        }
                    } else {
                        // Extended gcd combine: pivot becomes gcd, col's
                        // entry at r becomes zero.
                        let ext = a.extended_gcd(&b);
                        let (g, x, y) = (ext.gcd, ext.x, ext.y);
                        let (pa, pb) = (&a / &g, &b / &g);
                        for i in r..self.dim {
                            let new_pivot = &pivot[i] * &x + &col[i] * &y;
                            let new_col = &pivot[i] * &pb - &col[i] * &pa;
                            pivot[i] = new_pivot;
                            col[i] = new_col;
                        }
                        debug_assert_eq!(pivot[r], g);
                        debug_assert!(col[r].is_zero());
                    }
                }
            }
        }
    }

    fn into_matrix(self, dim: usize) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.columns.into_values().collect();
        IntMatrix::from_cols(dim, &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chowring::{Generator, GradedPresentation};
    use num_traits::FromPrimitive;

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    fn z_t_mod_24t2() -> GradedPresentation {
        let g = vec![Generator { name: "t".into(), degree: rat(1) }];
        GradedPresentation::new(g, vec![Poly::var(1, 0).pow(2).scale(&24.into())]).unwrap()
    }

    #[test]
    fn pieces_of_truncated_polynomial_ring() {
        let e = GradedEngine::new(&z_t_mod_24t2(), 10_000).unwrap();
        let table = e.graded_pieces(&rat(5)).unwrap();
        assert_eq!(table[&rat(0)], GroupClass { free_rank: 1, torsion: vec![] });
        assert_eq!(table[&rat(1)], GroupClass { free_rank: 1, torsion: vec![] });
        for d in 2..=5 {
            assert_eq!(table[&rat(d)], GroupClass { free_rank: 0, torsion: vec![24.into()] });
        }
    }

    #[test]
    fn normal_form_residues() {
        let e = GradedEngine::new(&z_t_mod_24t2(), 10_000).unwrap();
        // 25 t^2 is congruent to t^2
        let p = Poly::var(1, 0).pow(2).scale(&25.into());
        assert_eq!(e.normal_form(&p).unwrap(), vec![BigInt::one()]);
        // any relation maps to zero
        let r = Poly::var(1, 0).pow(2).scale(&24.into());
        assert!(e.is_zero_class(&r).unwrap());
    }

    #[test]
    fn degree_zero_group_ring() {
        // Z[u]/(u^2 - 1) graded with deg u = 0: every piece has rank 2.
        let g = vec![Generator { name: "u".into(), degree: rat(0) }];
        let rel = Poly::var(1, 0).pow(2).sub(&Poly::constant(1, BigInt::one()));
        let p = GradedPresentation::new(g, vec![rel]).unwrap();
        let e = GradedEngine::new(&p, 10_000).unwrap();
        let t = e.graded_pieces(&rat(3)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[&rat(0)], GroupClass { free_rank: 2, torsion: vec![] });
    }

    #[test]
    fn missing_table_is_rejected() {
        let g = vec![Generator { name: "u".into(), degree: rat(0) }];
        let p = GradedPresentation::new(g, vec![]).unwrap();
        assert!(matches!(GradedEngine::new(&p, 10_000), Err(Error::Unsupported(_))));
    }

    #[test]
    fn invariant_factor_canonicalization() {
        assert_eq!(canonical_invariant_factors(&[2.into(), 3.into()]), vec![BigInt::from(6)]);
        assert_eq!(
            canonical_invariant_factors(&[2.into(), 4.into(), 3.into()]),
            vec![BigInt::from(2), BigInt::from(12)]
        );
        assert_eq!(canonical_invariant_factors(&[]), Vec::<BigInt>::new());
    }

    #[test]
    fn equality_and_certified_inequality() {
        let a = z_t_mod_24t2();
        let (eq, _) = GradedEngine::equal(&a, &a, &rat(4), 10_000).unwrap();
        assert!(eq);
        let g = vec![Generator { name: "t".into(), degree: rat(1) }];
        let b =
            GradedPresentation::new(g, vec![Poly::var(1, 0).pow(2).scale(&23.into())]).unwrap();
        let (eq, mismatches) = GradedEngine::equal(&a, &b, &rat(4), 10_000).unwrap();
        assert!(!eq);
        assert_eq!(mismatches[0].0, rat(2));
    }

    #[test]
    fn resource_limit_is_reported() {
        let e = GradedEngine::new(&z_t_mod_24t2(), 0).unwrap();
        assert!(matches!(e.graded_pieces(&rat(2)), Err(Error::ResourceLimit(_))));
    }
}
