//! The stacky fan core: validation, the reduced stacky fan, Gale duals,
//! the Picard group, gerbe data (the key matrix identity x~ = A M C x),
//! and the decomposition into a nontrivial gerbe times a classifying
//! stack.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::fancomb::Fan;
use crate::fgab::{self, FgAbGroup, GroupHom};
use crate::intlin::{self, IntMatrix};
use crate::{Error, Result};

/// A stacky fan: group N, simplicial fan over the free part of N, and a
/// lattice map beta whose i-th column lifts the i-th ray vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    group: FgAbGroup,
    fan: Fan,
    beta: GroupHom,
}

#[derive(Clone, Debug)]
pub struct StackyValidation {
    pub diagnostics: Vec<String>,
    /// True when the columns of beta generate the torsion part of N — the
    /// hypothesis of both presentation theorems.
    pub torsion_generated: bool,
}

impl StackyValidation {
    pub fn is_ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

impl StackyFan {
    /// Shape checks are enforced here; the fan axioms and the finite
    /// cokernel condition are reported by [`StackyFan::validate`].
    pub fn new(group: FgAbGroup, fan: Fan, beta: GroupHom) -> Result<Self> {
        if fan.ambient_rank() != group.rank() {
            return Err(Error::Dimension(format!(
                "fan lives in rank {} but the group has rank {}",
                fan.ambient_rank(),
                group.rank()
            )));
        }
        if !beta.source.is_free() || beta.source.rank() != fan.ray_count() {
            return Err(Error::Dimension("beta must have free source of rank = ray count".into()));
        }
        if beta.target != group {
            return Err(Error::Dimension("beta target does not match the group".into()));
        }
        Ok(StackyFan { group, fan, beta })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn beta(&self) -> &GroupHom {
        &self.beta
    }

    /// The i-th column of beta as an element of N.
    pub fn ray_lift(&self, i: usize) -> Vec<BigInt> {
        self.group.canonicalize(&self.beta.matrix.col(i)).expect("beta column")
    }

    pub fn validate(&self) -> StackyValidation {
        let mut diagnostics = self.fan.validate();
        let n = self.fan.ray_count();
        let d = self.group.rank();
        for i in 0..n {
            let col = self.beta.matrix.col(i);
            if col[..d] != self.fan.rays()[i][..] {
                diagnostics.push(format!("free part of beta column {} does not equal ray {}", i, i));
            }
        }
        let free_rows: Vec<usize> = (0..d).collect();
        let bbar = self.beta.matrix.select_rows(&free_rows);
        if bbar.rank() != d {
            diagnostics.push(format!(
                "beta does not have finite cokernel: rays span rank {} < {}",
                bbar.rank(),
                d
            ));
        }
        let lifts: Vec<Vec<BigInt>> = (0..n).map(|i| self.ray_lift(i)).collect();
        let mut torsion_generated = true;
        for j in 0..self.group.torsion().len() {
            let mut gen = self.group.zero_element();
            gen[d + j] = BigInt::one();
            match fgab::subgroup_contains(&self.group, &lifts, &gen) {
                Ok(true) => {}
                Ok(false) => torsion_generated = false,
                Err(e) => diagnostics.push(format!("torsion membership check failed: {}", e)),
            }
        }
        StackyValidation { diagnostics, torsion_generated }
    }

    pub fn torsion_generated(&self) -> bool {
        self.validate().torsion_generated
    }
}

/// The underlying reduced stacky fan: N modulo torsion, beta's free part.
/// Idempotent.
pub fn reduce(sf: &StackyFan) -> StackyFan {
    let d = sf.group().rank();
    let free_rows: Vec<usize> = (0..d).collect();
    let bbar = sf.beta().matrix.select_rows(&free_rows);
    let beta = GroupHom::new(FgAbGroup::free(sf.fan().ray_count()), FgAbGroup::free(d), bbar)
        .expect("free part hom");
    StackyFan::new(FgAbGroup::free(d), sf.fan().clone(), beta).expect("reduced stacky fan")
}

/// Picard group of the associated stack: the Gale dual group of beta.
pub fn picard(sf: &StackyFan) -> Result<FgAbGroup> {
    Ok(fgab::gale_dual(sf.beta())?.0)
}

/// A canonical Picard generator carrying a root construction.
#[derive(Clone, Debug)]
pub struct RootBundle {
    /// The generator t_i written as an integer combination of the ray
    /// classes x_j (a row of C).
    pub class_in_rays: Vec<BigInt>,
    /// Coordinates of t_i in the invariant-factor coordinates of the
    /// reduced dual group.
    pub class_in_dual: Vec<BigInt>,
    /// Order of the root taken along this bundle (> 1).
    pub order: BigInt,
}

/// The data of the gerbe structure over the reduced stack: the bases
/// diagonalizing the comparison map between the two Picard groups, and
/// the matrices of the associated formula x~ = A M t = A M C x = E x.
#[derive(Clone, Debug)]
pub struct GerbeData {
    pub reduced: StackyFan,
    /// Gale dual of the reduced fan and its dual map (classes of x_i).
    pub nbar_dual: FgAbGroup,
    pub nbar_dual_map: GroupHom,
    /// Gale dual of the stacky fan itself.
    pub n_dual: FgAbGroup,
    pub n_dual_map: GroupHom,
    /// x = A t: rows are the t-coordinates of the ray classes.
    pub a: IntMatrix,
    /// Diagonal matrix of root orders (1 entries allowed).
    pub m: IntMatrix,
    /// t = C x: each canonical generator as a combination of ray classes.
    pub c: IntMatrix,
    /// E = A M C, the matrix of the twisted ray classes.
    pub e: IntMatrix,
    /// Columns are the t-basis in the reduced dual's coordinates.
    pub t_basis: IntMatrix,
    pub root_bundles: Vec<RootBundle>,
    /// Set when either dual group has torsion; the matrices are then
    /// computed on the free parts and downstream results hold modulo that
    /// torsion.
    pub dual_torsion_caveat: bool,
}

/// Solve for z with `map(z) = target` in the target group (free rows
/// exact, torsion rows modulo their orders). Deterministic Hermite
/// solution.
fn solve_in_group(map: &GroupHom, target: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let stacked = map.matrix.hstack(&map.target.relation_columns());
    let t = map.target.canonicalize(target)?;
    match intlin::solve(&stacked, &t)? {
        Some(sol) => Ok(Some(sol[..map.source.dims()].to_vec())),
        None => Ok(None),
    }
}

/// Compute the gerbe data of a stacky fan satisfying the
/// torsion-generation hypothesis.
pub fn gerbe_data(sf: &StackyFan) -> Result<GerbeData> {
    let validation = sf.validate();
    if !validation.is_ok() {
        return Err(Error::Diagnostics(validation.diagnostics));
    }
    if !validation.torsion_generated {
        return Err(Error::HypothesisNotSatisfied(
            "the rays do not generate the torsion part of N; decompose the stack first".into(),
        ));
    }
    let reduced = reduce(sf);
    let (n_dual, n_dual_map) = fgab::gale_dual(sf.beta())?;
    let (nbar_dual, nbar_dual_map) = fgab::gale_dual(reduced.beta())?;
    let caveat = !n_dual.is_free() || !nbar_dual.is_free();

    let n = sf.fan().ray_count();
    let s = nbar_dual.rank();
    debug_assert_eq!(s, n_dual.rank());

    // Free parts of both dual maps.
    let abar = nbar_dual_map.matrix.select_rows(&(0..s).collect::<Vec<_>>());
    let bfree = n_dual_map.matrix.select_rows(&(0..s).collect::<Vec<_>>());

    // The comparison map phi on free parts: phi(class-bar of e_k) = class
    // of e_k. Solve through the full group so torsion lifts stay exact.
    let mut phi = IntMatrix::zero(s, s);
    for k in 0..s {
        let mut target = vec![BigInt::zero(); nbar_dual.dims()];
        target[k] = BigInt::one();
        let z = solve_in_group(&nbar_dual_map, &target)?
            .ok_or_else(|| Error::Integrity("reduced dual map is not surjective".into()))?;
        let img = bfree.mul_vec(&z);
        for i in 0..s {
            phi.set(i, k, img[i].clone());
        }
    }

    let snf = intlin::snf(&phi);
    if snf.rank != s {
        return Err(Error::Integrity("comparison map between dual groups is not full rank".into()));
    }
    let v_inv = snf.v.inverse_unimodular()?;
    let a = v_inv.mul(&abar).transpose(); // n x s
    let m = snf.d.clone(); // s x s diagonal

    // t = C x: deterministic integral solution of (V^-1 Abar) C^T = I.
    let va = v_inv.mul(&abar);
    let mut c = IntMatrix::zero(s, n);
    for j in 0..s {
        let mut e = vec![BigInt::zero(); s];
        e[j] = BigInt::one();
        let w = intlin::solve(&va, &e)?
            .ok_or_else(|| Error::Integrity("canonical generators are not integral in ray classes".into()))?;
        for i in 0..n {
            c.set(j, i, w[i].clone());
        }
    }
    let e = a.mul(&m).mul(&c);

    let mut root_bundles = Vec::new();
    for k in 0..s {
        let order = m.get(k, k).clone();
        if order > BigInt::one() {
            root_bundles.push(RootBundle {
                class_in_rays: c.row(k),
                class_in_dual: snf.v.col(k),
                order,
            });
        }
    }

    Ok(GerbeData {
        reduced,
        nbar_dual,
        nbar_dual_map,
        n_dual,
        n_dual_map,
        a,
        m,
        c,
        e,
        t_basis: snf.v.clone(),
        root_bundles,
        dual_torsion_caveat: caveat,
    })
}

impl GerbeData {
    /// Coefficients (a_{1,i}, ..., a_{n,i}) of the twisted ray class
    /// x~_i = sum_j a_{j,i} x_j. When every root order is 1 the gerbe is
    /// trivial and x~_i is x_i on the nose; otherwise this is row i of E.
    pub fn twisted_ray(&self, i: usize) -> Result<Vec<BigInt>> {
        let n = self.e.rows();
        if i >= n {
            return Err(Error::Dimension(format!("ray index {} out of range", i)));
        }
        if self.root_bundles.is_empty() {
            let mut unit = vec![BigInt::zero(); n];
            unit[i] = BigInt::one();
            return Ok(unit);
        }
        Ok(self.e.row(i))
    }
}

/// The expansion of the i-th stack-level ray bundle in the orbifold ray
/// bundles (the coefficient vector of x~_i).
pub fn line_bundle_expansion(gd: &GerbeData, i: usize) -> Result<Vec<BigInt>> {
    gd.twisted_ray(i)
}

/// Decompose a stacky fan as (core gerbe) x (classifying stack): the core
/// group keeps only the torsion generated by the rays, and mu is the
/// quotient torsion. The core always satisfies the torsion-generation
/// hypothesis.
pub fn decompose(sf: &StackyFan) -> Result<(StackyFan, FgAbGroup)> {
    let d = sf.group().rank();
    let r = sf.group().torsion().len();
    let n = sf.fan().ray_count();
    let tor_group = FgAbGroup::new(0, sf.group().torsion().to_vec())?;
    let tau: Vec<Vec<BigInt>> = (0..n).map(|i| sf.ray_lift(i)[d..].to_vec()).collect();

    // Subgroup of the torsion generated by the tau(b_i): Z^n modulo the
    // kernel of the map into the torsion group.
    let tau_matrix = IntMatrix::from_cols(r, &tau);
    let stacked = tau_matrix.hstack(&tor_group.relation_columns());
    let ker = intlin::kernel(&stacked); // (n + r) x k
    let ker_proj = ker.select_rows(&(0..n).collect::<Vec<_>>());
    let (sub, sub_proj) = fgab::cokernel(&ker_proj);
    debug_assert_eq!(sub.rank(), 0, "subgroup of a finite group is finite");

    let core_group = FgAbGroup::new(d, sub.torsion().to_vec())?;
    let mut core_beta = IntMatrix::zero(core_group.dims(), n);
    for i in 0..n {
        for j in 0..d {
            core_beta.set(j, i, sf.beta().matrix.get(j, i).clone());
        }
        for j in 0..sub.torsion().len() {
            core_beta.set(d + j, i, sub_proj.get(j, i).clone());
        }
    }
    let beta = GroupHom::new(FgAbGroup::free(n), core_group.clone(), core_beta)?;
    let core = StackyFan::new(core_group, sf.fan().clone(), beta)?;

    let (mu, _) = fgab::quotient(&tor_group, &tau)?;
    Ok((core, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fancomb::Fan;

    pub(crate) fn elliptic_stack() -> StackyFan {
        let n = FgAbGroup::new(1, vec![2.into()]).unwrap();
        let fan = Fan::new(1, vec![vec![2.into()], vec![(-3).into()]], vec![vec![0], vec![1]]).unwrap();
        let beta =
            GroupHom::new(FgAbGroup::free(2), n.clone(), IntMatrix::from_rows(&[vec![2, -3], vec![1, 0]]))
                .unwrap();
        StackyFan::new(n, fan, beta).unwrap()
    }

    pub(crate) fn f2_gerbe() -> StackyFan {
        let n = FgAbGroup::new(2, vec![2.into(), 4.into()]).unwrap();
        let fan = Fan::new(
            2,
            vec![
                vec![1.into(), 0.into()],
                vec![0.into(), 1.into()],
                vec![(-1).into(), 2.into()],
                vec![0.into(), (-1).into()],
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap();
        let beta = GroupHom::new(
            FgAbGroup::free(4),
            n.clone(),
            IntMatrix::from_rows(&[
                vec![1, 0, -1, 0],
                vec![0, 1, 2, -1],
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 1],
            ]),
        )
        .unwrap();
        StackyFan::new(n, fan, beta).unwrap()
    }

    fn zmod2_split_stack() -> StackyFan {
        // N = Z + Z/2 with rays carrying no torsion.
        let n = FgAbGroup::new(1, vec![2.into()]).unwrap();
        let fan = Fan::new(1, vec![vec![2.into()], vec![(-3).into()]], vec![vec![0], vec![1]]).unwrap();
        let beta =
            GroupHom::new(FgAbGroup::free(2), n.clone(), IntMatrix::from_rows(&[vec![2, -3], vec![0, 0]]))
                .unwrap();
        StackyFan::new(n, fan, beta).unwrap()
    }

    #[test]
    fn validation_cases() {
        let v = elliptic_stack().validate();
        assert!(v.is_ok() && v.torsion_generated);

        let v = zmod2_split_stack().validate();
        assert!(v.is_ok() && !v.torsion_generated);

        // single ray in rank 2: infinite cokernel
        let fan = Fan::new(2, vec![vec![1.into(), 0.into()]], vec![vec![0]]).unwrap();
        let beta = GroupHom::new(FgAbGroup::free(1), FgAbGroup::free(2), IntMatrix::from_rows(&[vec![1], vec![0]]))
            .unwrap();
        let sf = StackyFan::new(FgAbGroup::free(2), fan, beta).unwrap();
        assert!(!sf.validate().is_ok());
    }

    #[test]
    fn reduce_cases() {
        let sf = elliptic_stack();
        let red = reduce(&sf);
        assert_eq!(red.group(), &FgAbGroup::free(1));
        assert_eq!(red.beta().matrix, IntMatrix::from_rows(&[vec![2, -3]]));
        assert_eq!(reduce(&red), red);

        let red = reduce(&f2_gerbe());
        assert_eq!(red.group(), &FgAbGroup::free(2));
        assert_eq!(red.beta().matrix, IntMatrix::from_rows(&[vec![1, 0, -1, 0], vec![0, 1, 2, -1]]));
    }

    #[test]
    fn picard_groups() {
        assert_eq!(picard(&elliptic_stack()).unwrap(), FgAbGroup::free(1));
        assert_eq!(picard(&f2_gerbe()).unwrap(), FgAbGroup::free(2));
        // N = Z, beta = [1]: trivial Picard group
        let fan = Fan::new(1, vec![vec![1.into()]], vec![vec![0]]).unwrap();
        let beta = GroupHom::new(FgAbGroup::free(1), FgAbGroup::free(1), IntMatrix::from_rows(&[vec![1]])).unwrap();
        let sf = StackyFan::new(FgAbGroup::free(1), fan, beta).unwrap();
        assert!(picard(&sf).unwrap().is_trivial());
    }

    #[test]
    fn gerbe_data_elliptic() {
        let gd = gerbe_data(&elliptic_stack()).unwrap();
        assert!(!gd.dual_torsion_caveat);
        assert_eq!(gd.m, IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(gd.root_bundles.len(), 1);
        assert_eq!(gd.root_bundles[0].order, BigInt::from(2));
        // x~ = E x must reduce to (2x1, 2x2) modulo the circuit 2x1 - 3x2:
        // E row i - 2 e_i must be an integer multiple of (2, -3).
        for i in 0..2 {
            let row = gd.e.row(i);
            let mut diff = row.clone();
            diff[i] -= BigInt::from(2);
            let circ = IntMatrix::from_rows(&[vec![2], vec![-3]]);
            assert!(intlin::solve(&circ, &diff).unwrap().is_some(), "row {} = {:?}", i, row);
        }
    }

    #[test]
    fn gerbe_data_f2() {
        let gd = gerbe_data(&f2_gerbe()).unwrap();
        let diag: Vec<BigInt> = (0..2).map(|i| gd.m.get(i, i).clone()).collect();
        assert_eq!(diag, vec![BigInt::from(2), BigInt::from(4)]);
        // A M must reproduce the t-coordinates of the full dual classes.
        let am = gd.a.mul(&gd.m);
        assert_eq!(am.transpose().rank(), 2);
    }

    #[test]
    fn gerbe_data_requires_hypothesis() {
        assert!(matches!(gerbe_data(&zmod2_split_stack()), Err(Error::HypothesisNotSatisfied(_))));
    }

    #[test]
    fn torsion_free_gerbe_is_identity_like() {
        let sf = reduce(&elliptic_stack());
        let gd = gerbe_data(&sf).unwrap();
        assert_eq!(gd.m, IntMatrix::identity(1));
        assert!(gd.root_bundles.is_empty());
    }

    #[test]
    fn decompose_cases() {
        // Hypothesis already holds: core = input, mu trivial.
        let sf = elliptic_stack();
        let (core, mu) = decompose(&sf).unwrap();
        assert!(mu.is_trivial());
        assert_eq!(core.group(), sf.group());
        assert_eq!(core.beta().matrix, sf.beta().matrix);

        // Torsion untouched by rays: core is the reduced fan, mu = Z/2.
        let sf = zmod2_split_stack();
        let (core, mu) = decompose(&sf).unwrap();
        assert_eq!(mu, FgAbGroup::new(0, vec![2.into()]).unwrap());
        assert_eq!(core.group(), &FgAbGroup::free(1));
        assert!(core.validate().torsion_generated);

        // Rays generating an index-2 subgroup of Z/4.
        let n = FgAbGroup::new(1, vec![4.into()]).unwrap();
        let fan = Fan::new(1, vec![vec![1.into()], vec![(-1).into()]], vec![vec![0], vec![1]]).unwrap();
        let beta =
            GroupHom::new(FgAbGroup::free(2), n.clone(), IntMatrix::from_rows(&[vec![1, -1], vec![2, 0]]))
                .unwrap();
        let sf = StackyFan::new(n, fan, beta).unwrap();
        let (core, mu) = decompose(&sf).unwrap();
        assert_eq!(mu, FgAbGroup::new(0, vec![2.into()]).unwrap());
        assert_eq!(core.group(), &FgAbGroup::new(1, vec![2.into()]).unwrap());
        assert!(core.validate().torsion_generated);
    }
}
