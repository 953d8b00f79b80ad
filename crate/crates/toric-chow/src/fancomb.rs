//! Simplicial fan combinatorics: face queries, minimal non-faces,
//! minimal cone containing a rational point, links and quotient fans.
//!
//! Cones are sorted ray-index sets; the face lattice is implicit in the
//! list of maximal cones. Ray vectors need not be primitive, only
//! nonzero. Completeness is never assumed.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fgab::GroupHom;
use crate::intlin::IntMatrix;
use crate::{Error, Result};

pub type Cone = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Cone>,
}

impl Fan {
    /// Shape checks only; run [`Fan::validate`] for the fan axioms.
    pub fn new(ambient_rank: usize, rays: Vec<Vec<BigInt>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != ambient_rank {
                return Err(Error::Invalid(format!("ray {} has {} coordinates, ambient rank is {}", i, r.len(), ambient_rank)));
            }
        }
        let mut cones: Vec<Cone> = Vec::new();
        for c in &max_cones {
            let set: Cone = c.iter().copied().collect();
            if set.len() != c.len() {
                return Err(Error::Invalid(format!("cone {:?} repeats a ray index", c)));
            }
            if let Some(&i) = set.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::Invalid(format!("cone {:?} references missing ray {}", c, i)));
            }
            cones.push(set);
        }
        // Canonical cone order keeps derived fans comparable.
        cones.sort_by_key(|c| c.iter().copied().collect::<Vec<_>>());
        cones.dedup();
        Ok(Fan { ambient_rank, rays, max_cones: cones })
    }

    pub fn trivial(ambient_rank: usize) -> Self {
        Fan { ambient_rank, rays: Vec::new(), max_cones: Vec::new() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    fn ray_matrix(&self, cone: &Cone) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        IntMatrix::from_cols(self.ambient_rank, &cols)
    }

    /// All fan axioms. Returns the empty list when the fan is valid;
    /// diagnostics name the offending ray or cone pair.
    pub fn validate(&self) -> Vec<String> {
        let mut diags = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            if r.iter().all(|x| x.is_zero()) {
                diags.push(format!("ray {} is the zero vector", i));
            }
        }
        for c in &self.max_cones {
            let m = self.ray_matrix(c);
            if m.rank() != c.len() {
                diags.push(format!("cone {:?} has linearly dependent rays", c));
            }
        }
        for (a, b) in self.max_cones.iter().tuple_combinations() {
            if a.is_subset(b) || b.is_subset(a) {
                diags.push(format!(
                    "maximal cone {:?} is contained in {:?}",
                    a.iter().collect::<Vec<_>>(),
                    b.iter().collect::<Vec<_>>()
                ));
                continue;
            }
            if !self.intersects_in_common_face(a, b) {
                diags.push(format!(
                    "cones {:?} and {:?} do not intersect in a common face",
                    a.iter().collect::<Vec<_>>(),
                    b.iter().collect::<Vec<_>>()
                ));
            }
        }
        diags
    }

    /// Exact check that cone(a) intersect cone(b) equals the cone on the
    /// shared rays. A violation is a point with positive mass outside the
    /// shared rays in both simplicial coordinate systems, which is a
    /// rational feasibility question handled by Fourier-Motzkin.
    fn intersects_in_common_face(&self, a: &Cone, b: &Cone) -> bool {
        let shared: Cone = a.intersection(b).copied().collect();
        let av: Vec<usize> = a.iter().copied().collect();
        let bv: Vec<usize> = b.iter().copied().collect();
        let nvars = av.len() + bv.len();
        // Equalities: sum_i x_i b_i - sum_j y_j b_j = 0 coordinatewise,
        // and the outside coordinates sum to 1.
        let mut eqs: Vec<Vec<BigRational>> = Vec::new(); // row: coeffs, last = rhs
        for coord in 0..self.ambient_rank {
            let mut row = vec![BigRational::zero(); nvars + 1];
            for (k, &i) in av.iter().enumerate() {
                row[k] = BigRational::from(self.rays[i][coord].clone());
            }
            for (k, &j) in bv.iter().enumerate() {
                row[av.len() + k] = -BigRational::from(self.rays[j][coord].clone());
            }
            eqs.push(row);
        }
        let mut norm = vec![BigRational::zero(); nvars + 1];
        for (k, &i) in av.iter().enumerate() {
            if !shared.contains(&i) {
                norm[k] = BigRational::one();
            }
        }
        for (k, &j) in bv.iter().enumerate() {
            if !shared.contains(&j) {
                norm[av.len() + k] = BigRational::one();
            }
        }
        norm[nvars] = BigRational::one();
        eqs.push(norm);
        // x >= 0 for every variable.
        let mut ineqs: Vec<Vec<BigRational>> = Vec::new();
        for v in 0..nvars {
            let mut row = vec![BigRational::zero(); nvars + 1];
            row[v] = BigRational::one();
            ineqs.push(row);
        }
        !rational_feasible(eqs, ineqs, nvars)
    }

    /// Is the index set a face of some maximal cone? The empty set is the
    /// zero cone and always a face.
    pub fn is_cone(&self, rays: &Cone) -> bool {
        if rays.is_empty() {
            return true;
        }
        self.max_cones.iter().any(|c| rays.is_subset(c))
    }

    /// All faces of all maximal cones, ordered by size then
    /// lexicographically. Includes the zero cone.
    pub fn all_cones(&self) -> Vec<Cone> {
        let mut set: BTreeSet<Cone> = BTreeSet::new();
        set.insert(Cone::new());
        for c in &self.max_cones {
            let elems: Vec<usize> = c.iter().copied().collect();
            for k in 1..=elems.len() {
                for sub in elems.iter().copied().combinations(k) {
                    set.insert(sub.into_iter().collect());
                }
            }
        }
        let mut cones: Vec<Cone> = set.into_iter().collect();
        cones.sort_by_key(|c| (c.len(), c.iter().copied().collect::<Vec<_>>()));
        cones
    }

    /// Inclusion-minimal ray sets that are not cones. These index the
    /// Stanley-Reisner generators.
    pub fn minimal_nonfaces(&self) -> Vec<Cone> {
        let n = self.rays.len();
        let mut found: Vec<Cone> = Vec::new();
        for size in 2..=n {
            for comb in (0..n).combinations(size) {
                let set: Cone = comb.into_iter().collect();
                if found.iter().any(|f| f.is_subset(&set)) {
                    continue;
                }
                if !self.is_cone(&set) {
                    found.push(set);
                }
            }
        }
        found
    }

    /// The unique cone whose relative interior contains the point,
    /// together with the positive coefficients on that cone's rays.
    /// The origin lies in the zero cone.
    pub fn minimal_cone_containing(&self, point: &[BigRational]) -> Result<Option<(Cone, Vec<BigRational>)>> {
        if point.len() != self.ambient_rank {
            return Err(Error::Dimension("point dimension does not match fan".into()));
        }
        if point.iter().all(|x| x.is_zero()) {
            return Ok(Some((Cone::new(), Vec::new())));
        }
        for cone in self.all_cones() {
            if cone.is_empty() {
                continue;
            }
            let cols: Vec<Vec<BigRational>> = cone
                .iter()
                .map(|&i| self.rays[i].iter().map(|x| BigRational::from(x.clone())).collect())
                .collect();
            if let Some(coeffs) = solve_rational(&cols, point) {
                if coeffs.iter().all(|c| c.is_positive()) {
                    return Ok(Some((cone, coeffs)));
                }
            }
        }
        Ok(None)
    }

    /// Ray indices i outside `cone` with `cone + {i}` still a cone.
    pub fn link(&self, cone: &Cone) -> Result<Vec<usize>> {
        if !self.is_cone(cone) {
            return Err(Error::NotAFace(format!("{:?} is not a cone of the fan", cone)));
        }
        Ok((0..self.rays.len())
            .filter(|i| !cone.contains(i))
            .filter(|&i| {
                let mut c = cone.clone();
                c.insert(i);
                self.is_cone(&c)
            })
            .collect())
    }

    /// Quotient fan: rays are the images of the link rays of `cone` under
    /// `projection` (a surjection of the ambient free lattice killing
    /// exactly the span of the cone), cones are the images of the cones
    /// containing `cone`. Ray order follows ascending link index.
    pub fn quotient_fan(&self, cone: &Cone, projection: &GroupHom) -> Result<Fan> {
        if !self.is_cone(cone) {
            return Err(Error::NotAFace(format!("{:?} is not a cone of the fan", cone)));
        }
        if projection.source.rank() != self.ambient_rank || !projection.source.is_free() || !projection.target.is_free() {
            return Err(Error::Invalid("projection must be a map of free lattices from the ambient".into()));
        }
        let proj = &projection.matrix;
        for &i in cone {
            if !proj.mul_vec(&self.rays[i]).iter().all(|x| x.is_zero()) {
                return Err(Error::Invalid(format!("projection does not kill cone ray {}", i)));
            }
        }
        if proj.rank() != self.ambient_rank - cone.len() {
            return Err(Error::Invalid("projection kernel does not match the cone span".into()));
        }
        let link = self.link(cone)?;
        let rays: Vec<Vec<BigInt>> = link.iter().map(|&j| proj.mul_vec(&self.rays[j])).collect();
        let pos: std::collections::BTreeMap<usize, usize> =
            link.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for max in &self.max_cones {
            if cone.is_subset(max) {
                let img: Vec<usize> = max.iter().filter(|j| !cone.contains(j)).map(|j| pos[j]).collect();
                cones.push(img);
            }
        }
        cones.sort();
        cones.dedup();
        Fan::new(projection.target.rank(), rays, cones)
    }
}

/// Exact Gaussian elimination; returns the unique solution of the square
/// or overdetermined system `cols * x = rhs` when one exists.
fn solve_rational(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    let k = cols.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !aug[i][c].is_zero()) else {
            return None; // dependent columns not expected here
        };
        aug.swap(r, p);
        let inv = aug[r][c].clone();
        for j in c..=k {
            aug[r][j] = &aug[r][j] / &inv;
        }
        for i in 0..n {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=k {
                    aug[i][j] = &aug[i][j] - &f * &aug[r][j];
                }
            }
        }
        pivot_rows.push(r);
        r += 1;
    }
    if aug.iter().skip(r).any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| aug[c][k].clone()).collect())
}

/// Feasibility of `{eqs(x) = rhs, ineqs(x) >= rhs, x in Q^nvars}` where
/// each row stores coefficients followed by the right-hand side.
/// Equalities are removed by substitution, then inequalities by
/// Fourier-Motzkin elimination.
fn rational_feasible(mut eqs: Vec<Vec<BigRational>>, mut ineqs: Vec<Vec<BigRational>>, nvars: usize) -> bool {
    let mut alive: Vec<bool> = vec![true; nvars];
    // Substitute equalities one at a time.
    while let Some(eq) = eqs.pop() {
        let Some(var) = (0..nvars).find(|&v| alive[v] && !eq[v].is_zero()) else {
            if !eq[nvars].is_zero() {
                return false; // 0 = nonzero
            }
            continue;
        };
        alive[var] = false;
        let c = eq[var].clone();
        let subst = |row: &mut Vec<BigRational>| {
            if row[var].is_zero() {
                return;
            }
            let f = &row[var] / &c;
            for j in 0..=nvars {
                row[j] = &row[j] - &f * &eq[j];
            }
            row[var] = BigRational::zero();
        };
        for row in eqs.iter_mut() {
            subst(row);
        }
        for row in ineqs.iter_mut() {
            subst(row);
        }
    }
    // Fourier-Motzkin on the remaining inequalities.
    for var in 0..nvars {
        if !alive[var] {
            continue;
        }
        let (mut pos, mut neg, mut rest): (Vec<_>, Vec<_>, Vec<_>) = (Vec::new(), Vec::new(), Vec::new());
        for row in ineqs.drain(..) {
            if row[var].is_positive() {
                pos.push(row);
            } else if row[var].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for p in &pos {
            for q in &neg {
                // p scaled + q scaled eliminates var; both are >= rows.
                let a = p[var].clone();
                let b = -q[var].clone();
                let mut row = vec![BigRational::zero(); nvars + 1];
                for j in 0..=nvars {
                    row[j] = &p[j] * &b + &q[j] * &a;
                }
                rest.push(row);
            }
        }
        ineqs = rest;
    }
    // Only constants remain: every row is 0 >= rhs.
    ineqs.iter().all(|row| !row[nvars].is_positive())
}
