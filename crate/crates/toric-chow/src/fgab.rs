//! Finitely generated abelian groups in invariant-factor form,
//! homomorphisms between them, quotients, and the Gale dual construction.
//!
//! A group is stored as `Z^rank + Z/m_1 + ... + Z/m_r` with
//! `m_1 | m_2 | ... | m_r` and every `m_j > 1`. Elements are integer
//! vectors of length `rank + r`, free coordinates first, torsion
//! coordinates reduced into `[0, m_j)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intlin::{self, IntMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl std::fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank == 1 {
            parts.push("Z".into());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
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

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for w in torsion.windows(2) {
            if !w[1].mod_floor(&w[0]).is_zero() {
                return Err(Error::Invalid(format!(
                    "torsion orders {} | {} violate the divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        if torsion.iter().any(|m| *m <= BigInt::one()) {
            return Err(Error::Invalid("torsion orders must be > 1".into()));
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        FgAbGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of stored coordinates: rank + torsion count.
    pub fn dims(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.dims() == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dims()]
    }

    /// Reduce torsion coordinates into their canonical range `[0, m_j)`.
    pub fn canonicalize(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.dims() {
            return Err(Error::Dimension(format!(
                "element has {} coordinates, group needs {}",
                v.len(),
                self.dims()
            )));
        }
        let mut out = v.to_vec();
        for (j, m) in self.torsion.iter().enumerate() {
            let i = self.rank + j;
            out[i] = out[i].mod_floor(m);
        }
        Ok(out)
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.canonicalize(v).map(|c| c.iter().all(|e| e.is_zero())).unwrap_or(false)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.canonicalize(&s)
    }

    pub fn neg(&self, a: &[BigInt]) -> Result<Vec<BigInt>> {
        let s: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.canonicalize(&s)
    }

    /// Free part of an element (first `rank` coordinates).
    pub fn free_part(&self, v: &[BigInt]) -> Vec<BigInt> {
        v[..self.rank].to_vec()
    }

    /// Torsion part of an element (last coordinates, canonical range).
    pub fn torsion_part(&self, v: &[BigInt]) -> Vec<BigInt> {
        v[self.rank..].to_vec()
    }

    /// Columns presenting the relations of this group inside `Z^dims`:
    /// one column `m_j * e_{rank+j}` per torsion factor.
    pub fn relation_columns(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.dims(), self.torsion.len());
        for (j, ord) in self.torsion.iter().enumerate() {
            m.set(self.rank + j, j, ord.clone());
        }
        m
    }

    /// All elements of a finite group, in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>> {
        if self.rank > 0 {
            return Err(Error::Invalid("cannot enumerate an infinite group".into()));
        }
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
        for m in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut c = BigInt::zero();
                while &c < m {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    next.push(v);
                    c += 1;
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// Homomorphism between groups in invariant-factor coordinates.
/// Column `j` of `matrix` is the image of the j-th source generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.dims() || matrix.cols() != source.dims() {
            return Err(Error::Dimension(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dims(),
                source.dims()
            )));
        }
        // Well-definedness: order of each source torsion generator must
        // annihilate its image.
        for (j, m) in source.torsion.iter().enumerate() {
            let col = matrix.col(source.rank + j);
            let scaled: Vec<BigInt> = col.iter().map(|x| x * m).collect();
            if !target.is_zero_element(&scaled) {
                return Err(Error::Invalid(format!(
                    "hom not well-defined: {} * image of torsion generator {} is nonzero",
                    m, j
                )));
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.dims()) }
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.source.dims() {
            return Err(Error::Dimension("element does not match hom source".into()));
        }
        self.target.canonicalize(&self.matrix.mul_vec(v))
    }

    pub fn compose_after(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.target != self.source {
            return Err(Error::Dimension("hom composition mismatch".into()));
        }
        GroupHom::new(inner.source.clone(), self.target.clone(), self.matrix.mul(&inner.matrix))
    }
}

/// Cokernel of an integer matrix viewed as a map into `Z^rows`.
///
/// Returns the quotient in invariant-factor form together with the matrix
/// expressing the class of each standard basis vector of the codomain in
/// the quotient's coordinates (free rows first, sign-normalized so the
/// first nonzero entry of each free row is positive).
pub fn cokernel(m: &IntMatrix) -> (FgAbGroup, IntMatrix) {
    let snf = intlin::snf(m);
    let n = m.rows();
    let mut free_rows: Vec<usize> = (snf.rank..n).collect();
    let mut torsion_rows: Vec<usize> = Vec::new();
    let mut torsion: Vec<BigInt> = Vec::new();
    for i in 0..snf.rank {
        let d = snf.d.get(i, i);
        if !d.is_one() {
            torsion_rows.push(i);
            torsion.push(d.clone());
        }
    }
    free_rows.sort_unstable();
    let mut proj = IntMatrix::zero(free_rows.len() + torsion_rows.len(), n);
    for (out_i, &ri) in free_rows.iter().chain(torsion_rows.iter()).enumerate() {
        for j in 0..n {
            proj.set(out_i, j, snf.u.get(ri, j).clone());
        }
    }
    // Canonical sign on free coordinates.
    for i in 0..free_rows.len() {
        let first = (0..n).find(|&j| !proj.get(i, j).is_zero());
        if let Some(j) = first {
            if proj.get(i, j).is_negative() {
                proj.negate_row(i);
            }
        }
    }
    let group = FgAbGroup { rank: free_rows.len(), torsion };
    // Reduce torsion rows to canonical representatives.
    let mut canon = proj.clone();
    for j in 0..n {
        let col = proj.col(j);
        let c = group.canonicalize(&col).expect("projection column");
        for i in 0..group.dims() {
            canon.set(i, j, c[i].clone());
        }
    }
    (group, canon)
}

/// Quotient of `g` by the subgroup generated by `elements`, with the
/// projection hom.
pub fn quotient(g: &FgAbGroup, elements: &[Vec<BigInt>]) -> Result<(FgAbGroup, GroupHom)> {
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for e in elements {
        cols.push(g.canonicalize(e)?);
    }
    let rel = g.relation_columns();
    let gens = IntMatrix::from_cols(g.dims(), &cols);
    let presentation = gens.hstack(&rel);
    let (q, proj) = cokernel(&presentation);
    let hom = GroupHom::new(g.clone(), q.clone(), proj)?;
    Ok((q, hom))
}

/// Gale dual of `beta: Z^n -> N`.
///
/// Builds the matrix `[B, Q]` of the mapping cone (columns of `B` are the
/// chosen integer lifts of the b_i, `Q` carries the torsion orders),
/// computes `ndual = coker([B,Q]^t)` in invariant-factor coordinates, and
/// returns the composite `Z^n -> ndual` of the coordinate inclusion with
/// the quotient projection.
pub fn gale_dual(beta: &GroupHom) -> Result<(FgAbGroup, GroupHom)> {
    if !beta.source.is_free() {
        return Err(Error::Invalid("gale dual requires a free source".into()));
    }
    let n = beta.source.rank();
    let dr = beta.target.dims();
    let r = beta.target.torsion().len();
    let b = &beta.matrix; // (d+r) x n
    let mut q = IntMatrix::zero(dr, r);
    for (j, m) in beta.target.torsion().iter().enumerate() {
        q.set(beta.target.rank() + j, j, m.clone());
    }
    let bq = b.hstack(&q); // (d+r) x (n+r)
    let (ndual, proj) = cokernel(&bq.transpose()); // proj: dims x (n+r)
    let first_n: Vec<usize> = (0..n).collect();
    let matrix = proj.select_cols(&first_n);
    let hom = GroupHom::new(FgAbGroup::free(n), ndual.clone(), matrix)?;
    Ok((ndual, hom))
}

/// The dual map on lattices, `beta^*: N^* -> (Z^n)^*`, i.e. the transpose
/// of the free part. Rows of its matrix are the circuit coefficient
/// vectors (theta(b_1), ..., theta(b_n)) for theta running over the dual
/// basis of the free part of N.
pub fn dual_lattice_maps(beta: &GroupHom) -> Result<GroupHom> {
    if !beta.source.is_free() {
        return Err(Error::Invalid("dual requires a free source".into()));
    }
    let n = beta.source.rank();
    let d = beta.target.rank();
    let free_rows: Vec<usize> = (0..d).collect();
    let bfree = beta.matrix.select_rows(&free_rows); // d x n
    GroupHom::new(FgAbGroup::free(d), FgAbGroup::free(n), bfree.transpose())
}

/// Lattice membership with torsion: is `target` an integer combination of
/// `generators` inside `ambient`?
pub fn subgroup_contains(ambient: &FgAbGroup, generators: &[Vec<BigInt>], target: &[BigInt]) -> Result<bool> {
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for g in generators {
        cols.push(ambient.canonicalize(g)?);
    }
    let t = ambient.canonicalize(target)?;
    let gens = IntMatrix::from_cols(ambient.dims(), &cols);
    let m = gens.hstack(&ambient.relation_columns());
    Ok(intlin::solve(&m, &t)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cokernel_examples() {
        // identity -> trivial group
        let (g, _) = cokernel(&IntMatrix::identity(3));
        assert!(g.is_trivial());
        // row [6,4] as a map Z^2 -> Z has cokernel Z/2
        let (g, _) = cokernel(&IntMatrix::from_rows(&[vec![6, 4]]));
        assert_eq!(g, FgAbGroup::new(0, vec![2.into()]).unwrap());
        // diag(2,3) ~ Z/6
        let (g, _) = cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(g, FgAbGroup::new(0, vec![6.into()]).unwrap());
    }

    #[test]
    fn quotient_examples() {
        let g = FgAbGroup::new(1, vec![2.into()]).unwrap();
        // quotient by nothing: same invariants, surjective projection
        let (q, _) = quotient(&g, &[]).unwrap();
        assert_eq!(q, g);
        // (Z + Z/2) / <(2,1)> = Z/4
        let (q, proj) = quotient(&g, &[big(&[2, 1])]).unwrap();
        assert_eq!(q, FgAbGroup::new(0, vec![4.into()]).unwrap());
        assert!(q.is_zero_element(&proj.apply(&big(&[2, 1])).unwrap()));
        // quotient by a generating set: trivial
        let (q, _) = quotient(&g, &[big(&[1, 0]), big(&[0, 1])]).unwrap();
        assert!(q.is_trivial());
    }

    #[test]
    fn gale_dual_reduced_p1() {
        // N = Z, beta = [1]: dual is trivial, beta_dual is the zero map.
        let beta = GroupHom::new(FgAbGroup::free(1), FgAbGroup::free(1), IntMatrix::from_rows(&[vec![1]])).unwrap();
        let (nd, bd) = gale_dual(&beta).unwrap();
        assert!(nd.is_trivial());
        assert_eq!(bd.matrix.rows(), 0);
    }

    #[test]
    fn gale_dual_elliptic_example() {
        // N = Z + Z/2, b1 = (2,1), b2 = (-3,0): dual Z with matrix [6,4].
        let n = FgAbGroup::new(1, vec![2.into()]).unwrap();
        let beta =
            GroupHom::new(FgAbGroup::free(2), n, IntMatrix::from_rows(&[vec![2, -3], vec![1, 0]])).unwrap();
        let (nd, bd) = gale_dual(&beta).unwrap();
        assert_eq!(nd, FgAbGroup::free(1));
        assert_eq!(bd.matrix, IntMatrix::from_rows(&[vec![6, 4]]));
    }

    #[test]
    fn gale_dual_gerbe_example() {
        // N = Z^2 + Z/2 + Z/4 over the Hirzebruch F_2 rays.
        let n = FgAbGroup::new(2, vec![2.into(), 4.into()]).unwrap();
        let beta = GroupHom::new(
            FgAbGroup::free(4),
            n,
            IntMatrix::from_rows(&[
                vec![1, 0, -1, 0],
                vec![0, 1, 2, -1],
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 1],
            ]),
        )
        .unwrap();
        let (nd, bd) = gale_dual(&beta).unwrap();
        assert_eq!(nd, FgAbGroup::free(2));
        // Compare relation lattices: the kernel of our matrix must equal
        // the kernel of the printed one.
        let printed = IntMatrix::from_rows(&[vec![2, -4, 2, 0], vec![0, 4, 0, 4]]);
        let ours_ker = intlin::hnf(&intlin::kernel(&bd.matrix)).0;
        let printed_ker = intlin::hnf(&intlin::kernel(&printed)).0;
        assert_eq!(ours_ker, printed_ker);
    }

    #[test]
    fn dual_map_is_free_transpose() {
        let n = FgAbGroup::new(1, vec![2.into()]).unwrap();
        let beta =
            GroupHom::new(FgAbGroup::free(2), n, IntMatrix::from_rows(&[vec![2, -3], vec![1, 0]])).unwrap();
        let d = dual_lattice_maps(&beta).unwrap();
        assert_eq!(d.matrix, IntMatrix::from_rows(&[vec![2], vec![-3]]));
    }

    #[test]
    fn membership_with_torsion() {
        let g = FgAbGroup::new(1, vec![2.into()]).unwrap();
        // standard basis generates everything
        assert!(subgroup_contains(&g, &[big(&[1, 0]), big(&[0, 1])], &big(&[17, 1])).unwrap());
        // (0,1) = 3*(2,1) + 2*(-3,0)
        assert!(subgroup_contains(&g, &[big(&[2, 1]), big(&[-3, 0])], &big(&[0, 1])).unwrap());
        // torsion coordinate identically zero among generators
        assert!(!subgroup_contains(&g, &[big(&[2, 0]), big(&[-3, 0])], &big(&[0, 1])).unwrap());
    }
}
