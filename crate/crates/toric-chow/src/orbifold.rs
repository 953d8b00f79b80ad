//! Box elements, inertia components, quotient stacky fans, the orbifold
//! product, the obstruction-bundle Euler class, and assembly of the
//! integral orbifold Chow ring presentation.
//!
//! A box element is a lattice element whose free part has all fractional
//! coordinates in [0,1) with respect to the rays of some cone; its age
//! (the sum of those coordinates) is the rational degree shift of the
//! corresponding twisted sector.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chowring::engine::{canonical_invariant_factors, GradedEngine, GradedGroupTable, GroupClass};
use crate::chowring::{chow_ring, Generator, GradedPresentation, Poly};
use crate::fancomb::Cone;
use crate::fgab::{self, FgAbGroup, GroupHom};
use crate::stacky::{gerbe_data, GerbeData, StackyFan};
use crate::{Error, Result};

/// An element of Box(Sigma): a lattice element together with its minimal
/// cone, the fractional coordinates on that cone's rays, and the age.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxElement {
    pub element: Vec<BigInt>,
    pub cone: Cone,
    /// Fractional coordinates in (0,1), aligned with ascending cone index.
    pub fracs: Vec<BigRational>,
    pub age: BigRational,
}

impl BoxElement {
    pub fn is_zero(&self) -> bool {
        self.element.iter().all(|x| x.is_zero())
    }

    /// Deterministic sort key: age, then cone, then element coordinates.
    fn sort_key(&self) -> (BigRational, Vec<usize>, Vec<BigInt>) {
        (self.age.clone(), self.cone.iter().copied().collect(), self.element.clone())
    }
}

fn ray_rationals(sf: &StackyFan, v: &[BigInt]) -> Vec<BigRational> {
    v[..sf.group().rank()].iter().map(|x| BigRational::from(x.clone())).collect()
}

/// Split a lattice element per the unique decomposition c = v + sum m_i b_i
/// over the minimal cone containing its free part: v is a box element and
/// the m_i are nonnegative integers. Returns `None` when the free part
/// lies outside the fan's support.
pub fn box_decompose(sf: &StackyFan, c: &[BigInt]) -> Result<Option<(BoxElement, BTreeMap<usize, u32>)>> {
    let c = sf.group().canonicalize(c)?;
    let point = ray_rationals(sf, &c);
    let Some((cone, coeffs)) = sf.fan().minimal_cone_containing(&point)? else {
        return Ok(None);
    };
    let mut floors: BTreeMap<usize, u32> = BTreeMap::new();
    let mut element = c.clone();
    let mut fracs: Vec<BigRational> = Vec::new();
    let mut box_cone = Cone::new();
    for (k, &i) in cone.iter().enumerate() {
        let floor = coeffs[k].floor();
        let frac = &coeffs[k] - &floor;
        let m = floor.to_integer();
        if m.is_positive() {
            let mq: u32 = m
                .try_into()
                .map_err(|_| Error::ResourceLimit("floor coefficient exceeds u32".into()))?;
            floors.insert(i, mq);
            let lift = sf.ray_lift(i);
            for (idx, l) in lift.iter().enumerate() {
                element[idx] -= l * BigInt::from(mq);
            }
        }
        if frac.is_positive() {
            box_cone.insert(i);
            fracs.push(frac);
        }
    }
    let element = sf.group().canonicalize(&element)?;
    let age: BigRational = fracs.iter().cloned().sum();
    Ok(Some((BoxElement { element, cone: box_cone, fracs, age }, floors)))
}

/// All box elements, zero first, in a canonical deterministic order.
pub fn enumerate_boxes(sf: &StackyFan) -> Result<Vec<BoxElement>> {
    let d = sf.group().rank();
    let mut out: Vec<BoxElement> = Vec::new();
    let torsion_group = FgAbGroup::new(0, sf.group().torsion().to_vec())?;
    let torsion_lifts = torsion_group.elements()?;

    for cone in sf.fan().all_cones() {
        let free_reps: Vec<Vec<BigInt>> = if cone.is_empty() {
            vec![vec![BigInt::zero(); d]]
        } else {
            fundamental_domain_points(sf, &cone)?
        };
        for rep in free_reps {
            // Keep only representatives supported on exactly this cone, so
            // each box is attached to its minimal cone once.
            let point: Vec<BigRational> = rep.iter().map(|x| BigRational::from(x.clone())).collect();
            let (min_cone, coeffs) = sf
                .fan()
                .minimal_cone_containing(&point)?
                .ok_or_else(|| Error::Integrity("box representative left the support".into()))?;
            if min_cone != cone {
                continue;
            }
            for tors in &torsion_lifts {
                let mut element = rep.clone();
                element.extend(tors.iter().cloned());
                let age: BigRational = coeffs.iter().cloned().sum();
                out.push(BoxElement {
                    element,
                    cone: min_cone.clone(),
                    fracs: coeffs.clone(),
                    age,
                });
            }
        }
    }
    out.sort_by_key(|b| b.sort_key());
    out.dedup_by(|a, b| a.element == b.element);
    debug_assert!(out.first().map(|b| b.is_zero()).unwrap_or(false), "zero box must come first");
    Ok(out)
}

/// Lattice points of the half-open fundamental parallelepiped of a cone:
/// representatives of (rational span of the cone's rays intersected with
/// the lattice) modulo the integer span of the rays, with coordinates in
/// [0,1).
fn fundamental_domain_points(sf: &StackyFan, cone: &Cone) -> Result<Vec<Vec<BigInt>>> {
    use crate::intlin::{self, IntMatrix};
    let d = sf.group().rank();
    let k = cone.len();
    let cols: Vec<Vec<BigInt>> = cone.iter().map(|&i| sf.fan().rays()[i].clone()).collect();
    let bsigma = IntMatrix::from_cols(d, &cols);
    let snf = intlin::snf(&bsigma);
    if snf.rank != k {
        return Err(Error::Integrity("cone rays are dependent".into()));
    }
    let u_inv = snf.u.inverse_unimodular()?;
    // Columns j < k of u_inv form a basis of the saturated span; the ray
    // lattice sits inside with indices (d_1, ..., d_k).
    let mut reps: Vec<Vec<BigInt>> = vec![Vec::new()];
    for j in 0..k {
        let dj = snf.d.get(j, j).clone();
        let mut next = Vec::new();
        for r in &reps {
            let mut c = BigInt::zero();
            while c < dj {
                let mut v = r.clone();
                v.push(c.clone());
                next.push(v);
                c += 1;
            }
        }
        reps = next;
    }
    let mut out = Vec::new();
    for c in reps {
        // Lattice point z = sum_j c_j * basis_j, then reduced into the
        // half-open parallelepiped spanned by the rays.
        let mut z = vec![BigInt::zero(); d];
        for (j, cj) in c.iter().enumerate() {
            for i in 0..d {
                z[i] += u_inv.get(i, j) * cj;
            }
        }
        let zq: Vec<BigRational> = z.iter().map(|x| BigRational::from(x.clone())).collect();
        let coeffs = solve_in_cone(&bsigma, &zq)
            .ok_or_else(|| Error::Integrity("representative outside the cone span".into()))?;
        for (j, a) in coeffs.iter().enumerate() {
            let floor = a.floor().to_integer();
            if !floor.is_zero() {
                for i in 0..d {
                    z[i] -= bsigma.get(i, j) * &floor;
                }
            }
        }
        out.push(z);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Rational solve of `cols * a = rhs` for a full-column-rank matrix.
fn solve_in_cone(m: &crate::intlin::IntMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols: Vec<Vec<BigRational>> = (0..m.cols())
        .map(|j| m.col(j).into_iter().map(BigRational::from).collect())
        .collect();
    rational_solve(&cols, rhs)
}

fn rational_solve(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    let k = cols.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..k {
        let p = (r..n).find(|&i| !aug[i][c].is_zero())?;
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
        r += 1;
    }
    if aug.iter().skip(r).any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| aug[c][k].clone()).collect())
}

/// The inverse of a box element in its local group: the unique box
/// supported on the same cone with v + inverse(v) = sum of the cone's ray
/// lifts. Involutive; fixes zero.
pub fn box_inverse(sf: &StackyFan, v: &BoxElement) -> Result<BoxElement> {
    let mut w = sf.group().neg(&v.element)?;
    for &i in &v.cone {
        let lift = sf.ray_lift(i);
        for (idx, l) in lift.iter().enumerate() {
            w[idx] += l;
        }
    }
    let w = sf.group().canonicalize(&w)?;
    let (bx, floors) = box_decompose(sf, &w)?
        .ok_or_else(|| Error::Integrity("inverse left the fan support".into()))?;
    if !floors.is_empty() {
        return Err(Error::Integrity("inverse decomposition has nonzero floors".into()));
    }
    Ok(bx)
}

/// The data behind a product of two boxes: the unique third box with
/// v1 + v2 + v3 = 0 in the local group, its inverse v-check (the box part
/// of v1 + v2), and the floor multiplicities of the split.
#[derive(Clone, Debug)]
pub struct BoxSum {
    pub v3: BoxElement,
    pub check_v3: BoxElement,
    pub floors: BTreeMap<usize, u32>,
}

/// Lemma-style split of v1 + v2 when the two boxes share a cone;
/// `None` when no cone of the fan contains both.
pub fn box_sum_third(sf: &StackyFan, v1: &BoxElement, v2: &BoxElement) -> Result<Option<BoxSum>> {
    let union: Cone = v1.cone.union(&v2.cone).copied().collect();
    if !sf.fan().is_cone(&union) {
        return Ok(None);
    }
    let c = sf.group().add(&v1.element, &v2.element)?;
    let (check_v3, floors) = box_decompose(sf, &c)?
        .ok_or_else(|| Error::Integrity("sum of boxes left the support".into()))?;
    let v3 = box_inverse(sf, &check_v3)?;
    Ok(Some(BoxSum { v3, check_v3, floors }))
}

/// One component of the (first) inertia stack.
#[derive(Clone, Debug)]
pub struct InertiaComponent {
    pub box_element: BoxElement,
    pub sector: StackyFan,
    pub local_group: FgAbGroup,
}

/// A 3-twisted sector: boxes (v1, v2, v3) with v1 + v2 + v3 = 0 in the
/// local group of their common cone.
#[derive(Clone, Debug)]
pub struct InertiaTriple {
    pub v1: BoxElement,
    pub v2: BoxElement,
    pub v3: BoxElement,
    pub sector: StackyFan,
}

pub enum Inertia {
    Components(Vec<InertiaComponent>),
    Triples(Vec<InertiaTriple>),
}

/// Quotient stacky fan by a cone: group N modulo the cone's ray lifts,
/// quotient fan on the link, beta given by the images of the link lifts.
pub fn quotient_stacky_fan(sf: &StackyFan, cone: &Cone) -> Result<(StackyFan, GroupHom)> {
    if !sf.fan().is_cone(cone) {
        return Err(Error::NotAFace(format!("{:?} is not a cone of the fan", cone)));
    }
    let lifts: Vec<Vec<BigInt>> = cone.iter().map(|&i| sf.ray_lift(i)).collect();
    let (q, proj) = fgab::quotient(sf.group(), &lifts)?;
    // Induced projection of the ambient free lattices for the fan.
    let free_rows: Vec<usize> = (0..q.rank()).collect();
    let free_cols: Vec<usize> = (0..sf.group().rank()).collect();
    let pf = proj.matrix.select_rows(&free_rows).select_cols(&free_cols);
    let pf_hom = GroupHom::new(FgAbGroup::free(sf.group().rank()), FgAbGroup::free(q.rank()), pf)?;
    let qfan = sf.fan().quotient_fan(cone, &pf_hom)?;
    let link = sf.fan().link(cone)?;
    let cols: Vec<Vec<BigInt>> = link.iter().map(|&j| proj.apply(&sf.ray_lift(j)).expect("link image")).collect();
    let beta_matrix = crate::intlin::IntMatrix::from_cols(q.dims(), &cols);
    let beta = GroupHom::new(FgAbGroup::free(link.len()), q.clone(), beta_matrix)?;
    let sector = StackyFan::new(q, qfan, beta)?;
    Ok((sector, proj))
}

/// Inertia stack components of order 1 or 2.
pub fn inertia(sf: &StackyFan, order: u8) -> Result<Inertia> {
    let boxes = enumerate_boxes(sf)?;
    match order {
        1 => {
            let mut out = Vec::new();
            for b in boxes {
                let (sector, _) = quotient_stacky_fan(sf, &b.cone)?;
                let local_group = sector.group().clone();
                out.push(InertiaComponent { box_element: b, sector, local_group });
            }
            Ok(Inertia::Components(out))
        }
        2 => {
            let mut out = Vec::new();
            for v1 in &boxes {
                for v2 in &boxes {
                    let Some(sum) = box_sum_third(sf, v1, v2)? else {
                        continue;
                    };
                    let union: Cone = v1.cone.union(&v2.cone).copied().collect();
                    let (sector, _) = quotient_stacky_fan(sf, &union)?;
                    out.push(InertiaTriple { v1: v1.clone(), v2: v2.clone(), v3: sum.v3, sector });
                }
            }
            Ok(Inertia::Triples(out))
        }
        _ => Err(Error::Invalid("inertia order must be 1 or 2".into())),
    }
}

/// Euler class of the obstruction bundle on a 3-twisted sector, as a
/// polynomial in the ray generators: the product of the twisted classes
/// over rays where v1 + v2 + v3 = sum a_i b_i has coefficient a_i = 2.
pub fn obstruction_euler(
    sf: &StackyFan,
    gd: &GerbeData,
    v1: &BoxElement,
    v2: &BoxElement,
    v3: &BoxElement,
) -> Result<Poly> {
    let n = sf.fan().ray_count();
    let union: Cone = v1.cone.union(&v2.cone).copied().collect::<Cone>().union(&v3.cone).copied().collect();
    if !sf.fan().is_cone(&union) {
        return Err(Error::Invalid("triple does not span a cone".into()));
    }
    let mut c = sf.group().add(&v1.element, &v2.element)?;
    c = sf.group().add(&c, &v3.element)?;
    // Solve c = sum a_i b_i exactly over the union cone (free part fixes
    // the rational a_i; the full lattice identity must hold in N).
    let cols: Vec<Vec<BigInt>> = union.iter().map(|&i| sf.ray_lift(i)).collect();
    let m = crate::intlin::IntMatrix::from_cols(sf.group().dims(), &cols)
        .hstack(&sf.group().relation_columns());
    let sol = crate::intlin::solve(&m, &c)?
        .ok_or_else(|| Error::Integrity("triple sum is not an integer combination of cone rays".into()))?;
    let mut euler = Poly::constant(n, BigInt::one());
    for (k, &i) in union.iter().enumerate() {
        let a = &sol[k];
        if *a == BigInt::from(2) {
            euler = euler.mul(&Poly::linear(&gd.twisted_ray(i)?));
        } else if !a.is_one() {
            return Err(Error::Integrity(format!(
                "obstruction coefficient {} on ray {} is outside {{1,2}}",
                a, i
            )));
        }
    }
    Ok(euler)
}

/// The orbifold product of two box generators: `None` encodes zero,
/// otherwise the box part of v1 + v2 together with the polynomial factor
/// (a product of twisted ray classes over the ray generators).
///
/// Grading additivity age(v1) + age(v2) = age(result) + deg(factor) is
/// enforced.
pub fn orbifold_product(
    sf: &StackyFan,
    gd: &GerbeData,
    v1: &BoxElement,
    v2: &BoxElement,
) -> Result<Option<(BoxElement, Poly)>> {
    let n = sf.fan().ray_count();
    let Some(sum) = box_sum_third(sf, v1, v2)? else {
        return Ok(None);
    };
    let mut factor = Poly::constant(n, BigInt::one());
    let mut factor_degree = BigRational::zero();
    for (&i, &mult) in &sum.floors {
        factor = factor.mul(&Poly::linear(&gd.twisted_ray(i)?).pow(mult));
        factor_degree += BigRational::from(BigInt::from(mult));
    }
    let expected = &v1.age + &v2.age;
    let got = &sum.check_v3.age + &factor_degree;
    if expected != got {
        return Err(Error::Integrity(format!(
            "grading additivity violated: age {} + {} != {} + {}",
            v1.age, v2.age, sum.check_v3.age, factor_degree
        )));
    }
    Ok(Some((sum.check_v3, factor)))
}

/// Names and positions of the generators of the orbifold presentation:
/// the ray generators x_1..x_n followed by one generator per nonzero box.
pub struct OrbifoldRing {
    pub presentation: GradedPresentation,
    /// Nonzero boxes in generator order; generator index of box k is
    /// `ray_count + k`.
    pub boxes: Vec<BoxElement>,
    pub gerbe: GerbeData,
}

/// Assemble the integral orbifold Chow ring presentation: ray generators
/// in degree 1, one generator of degree age(v) per nonzero box, circuit
/// relations, twisted Stanley-Reisner relations, vanishing products of
/// boxes with rays outside their star, and one relation per unordered box
/// pair evaluating the orbifold product.
pub fn orbifold_ring(sf: &StackyFan) -> Result<OrbifoldRing> {
    let gd = gerbe_data(sf)?;
    let all_boxes = enumerate_boxes(sf)?;
    let (zero, boxes) = all_boxes
        .split_first()
        .ok_or_else(|| Error::Integrity("box enumeration produced nothing".into()))?;
    if !zero.is_zero() {
        return Err(Error::Integrity("zero box missing".into()));
    }
    let boxes = boxes.to_vec();
    let n = sf.fan().ray_count();
    let total = n + boxes.len();

    let mut generators: Vec<Generator> = (0..n)
        .map(|i| Generator { name: format!("x{}", i + 1), degree: BigRational::one() })
        .collect();
    for (k, b) in boxes.iter().enumerate() {
        generators.push(Generator { name: format!("y{}", k + 1), degree: b.age.clone() });
    }

    let embed: Vec<usize> = (0..n).collect();
    let box_gen = |k: usize| Poly::var(total, n + k);
    let box_index = |b: &BoxElement| -> usize {
        boxes.iter().position(|x| x.element == b.element).expect("box in list")
    };

    let mut relations: Vec<Poly> = Vec::new();
    // Circuits.
    for j in 0..sf.group().rank() {
        let coeffs: Vec<BigInt> = (0..n).map(|i| sf.beta().matrix.get(j, i).clone()).collect();
        relations.push(Poly::linear(&coeffs).embed(&embed, total));
    }
    // Twisted Stanley-Reisner relations.
    for nonface in sf.fan().minimal_nonfaces() {
        let mut p = Poly::constant(n, BigInt::one());
        for &i in &nonface {
            p = p.mul(&Poly::linear(&gd.twisted_ray(i)?));
        }
        relations.push(p.embed(&embed, total));
    }
    // A box kills every twisted ray class whose ray shares no cone with it.
    for (k, b) in boxes.iter().enumerate() {
        for i in 0..n {
            let mut c = b.cone.clone();
            c.insert(i);
            if !sf.fan().is_cone(&c) {
                let xt = Poly::linear(&gd.twisted_ray(i)?).embed(&embed, total);
                relations.push(box_gen(k).mul(&xt));
            }
        }
    }
    // Products of box pairs.
    for k1 in 0..boxes.len() {
        for k2 in k1..boxes.len() {
            let lhs = box_gen(k1).mul(&box_gen(k2));
            let rhs = match orbifold_product(sf, &gd, &boxes[k1], &boxes[k2])? {
                None => Poly::zero(),
                Some((bx, factor)) => {
                    let f = factor.embed(&embed, total);
                    if bx.is_zero() {
                        f
                    } else {
                        f.mul(&box_gen(box_index(&bx)))
                    }
                }
            };
            relations.push(lhs.sub(&rhs));
        }
    }

    let presentation = GradedPresentation::new(generators, relations)?;
    Ok(OrbifoldRing { presentation, boxes, gerbe: gd })
}

/// How [`orbifold_ring_routed`] obtained its answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbifoldRouting {
    Direct,
    /// The torsion-generation hypothesis failed; the ring was computed on
    /// the gerbe core of the decomposition and extended by the
    /// classifying-stack generators of mu.
    ViaDecomposition { mu: FgAbGroup },
}

/// Orbifold Chow presentation of any valid stacky fan, routing inputs
/// that fail the torsion-generation hypothesis through the gerbe
/// decomposition.
pub fn orbifold_ring_routed(sf: &StackyFan) -> Result<(OrbifoldRing, OrbifoldRouting)> {
    let validation = sf.validate();
    if !validation.is_ok() {
        return Err(Error::Diagnostics(validation.diagnostics));
    }
    if validation.torsion_generated {
        Ok((orbifold_ring(sf)?, OrbifoldRouting::Direct))
    } else {
        let (core, mu) = crate::stacky::decompose(sf)?;
        let mut ring = orbifold_ring(&core)?;
        ring.presentation = crate::chowring::bmu_extension(&ring.presentation, &mu)?;
        Ok((ring, OrbifoldRouting::ViaDecomposition { mu }))
    }
}

/// Outcome of the module-decomposition certification: the orbifold ring's
/// graded pieces versus the degree-wise direct sum of age-shifted sector
/// Chow groups.
pub struct ModuleDecomposition {
    pub verdict: bool,
    pub orbifold: GradedGroupTable,
    pub sector_sum: GradedGroupTable,
    pub sectors: Vec<(BoxElement, GradedGroupTable)>,
}

pub fn module_decomposition_check(
    sf: &StackyFan,
    max_degree: &BigRational,
    limit: usize,
) -> Result<ModuleDecomposition> {
    let ring = orbifold_ring(sf)?;
    let engine = GradedEngine::new(&ring.presentation, limit)?;
    let orbifold = engine.graded_pieces(max_degree)?;

    let boxes = enumerate_boxes(sf)?;
    let mut sectors = Vec::new();
    let mut sums: BTreeMap<BigRational, (usize, Vec<BigInt>)> = BTreeMap::new();
    for b in boxes {
        let (sector, _) = quotient_stacky_fan(sf, &b.cone)?;
        let (chow, _) = chow_ring(&sector)?;
        let sector_engine = GradedEngine::new(&chow, limit)?;
        let bound = max_degree - &b.age;
        let mut shifted = GradedGroupTable::new();
        if !bound.is_negative() {
            for (deg, class) in sector_engine.graded_pieces(&bound)? {
                let total = &deg + &b.age;
                let entry = sums.entry(total.clone()).or_insert_with(|| (0, Vec::new()));
                entry.0 += class.free_rank;
                entry.1.extend(class.torsion.iter().cloned());
                shifted.insert(total, class);
            }
        }
        sectors.push((b, shifted));
    }
    let mut sector_sum = GradedGroupTable::new();
    for (deg, (free_rank, torsion)) in sums {
        sector_sum.insert(deg, GroupClass { free_rank, torsion: canonical_invariant_factors(&torsion) });
    }

    let mut verdict = true;
    let mut degrees: std::collections::BTreeSet<BigRational> = std::collections::BTreeSet::new();
    degrees.extend(orbifold.keys().cloned());
    degrees.extend(sector_sum.keys().cloned());
    for d in degrees {
        if &d > max_degree {
            continue;
        }
        let a = orbifold.get(&d).cloned().unwrap_or_else(GroupClass::trivial);
        let b = sector_sum.get(&d).cloned().unwrap_or_else(GroupClass::trivial);
        if a != b {
            verdict = false;
        }
    }
    Ok(ModuleDecomposition { verdict, orbifold, sector_sum, sectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fancomb::Fan;
    use crate::intlin::IntMatrix;

    fn elliptic_stack() -> StackyFan {
        let n = FgAbGroup::new(1, vec![2.into()]).unwrap();
        let fan = Fan::new(1, vec![vec![2.into()], vec![(-3).into()]], vec![vec![0], vec![1]]).unwrap();
        let beta =
            GroupHom::new(FgAbGroup::free(2), n.clone(), IntMatrix::from_rows(&[vec![2, -3], vec![1, 0]]))
                .unwrap();
        StackyFan::new(n, fan, beta).unwrap()
    }

    fn p112() -> StackyFan {
        let fan = Fan::new(
            2,
            vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()], vec![(-1).into(), (-2).into()]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let beta = GroupHom::new(
            FgAbGroup::free(3),
            FgAbGroup::free(2),
            IntMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, -2]]),
        )
        .unwrap();
        StackyFan::new(FgAbGroup::free(2), fan, beta).unwrap()
    }

    fn by_element<'a>(boxes: &'a [BoxElement], v: &[i64]) -> &'a BoxElement {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        boxes.iter().find(|b| b.element == v).expect("box present")
    }

    #[test]
    fn smooth_fan_has_only_zero_box() {
        let fan = Fan::new(1, vec![vec![1.into()], vec![(-1).into()]], vec![vec![0], vec![1]]).unwrap();
        let beta = GroupHom::new(FgAbGroup::free(2), FgAbGroup::free(1), IntMatrix::from_rows(&[vec![1, -1]]))
            .unwrap();
        let sf = StackyFan::new(FgAbGroup::free(1), fan, beta).unwrap();
        let boxes = enumerate_boxes(&sf).unwrap();
        assert_eq!(boxes.len(), 1);
        assert!(boxes[0].is_zero());
    }

    #[test]
    fn elliptic_boxes() {
        let sf = elliptic_stack();
        let boxes = enumerate_boxes(&sf).unwrap();
        assert_eq!(boxes.len(), 8);
        let ages: Vec<BigRational> = boxes.iter().skip(1).map(|b| b.age.clone()).collect();
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());
        let two_thirds = BigRational::new(2.into(), 3.into());
        let mut expected =
            vec![BigRational::zero(), third.clone(), third, half.clone(), half, two_thirds.clone(), two_thirds];
        expected.sort();
        let mut got = ages.clone();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn p112_box() {
        let sf = p112();
        let boxes = enumerate_boxes(&sf).unwrap();
        assert_eq!(boxes.len(), 2);
        let v = &boxes[1];
        assert_eq!(v.element, vec![BigInt::zero(), BigInt::from(-1)]);
        assert_eq!(v.cone, [0, 2].into_iter().collect::<Cone>());
        assert_eq!(v.age, BigRational::one());
        // self-inverse: 2v = b1 + b3
        let inv = box_inverse(&sf, v).unwrap();
        assert_eq!(&inv, v);
    }

    #[test]
    fn elliptic_inverse_and_sum() {
        let sf = elliptic_stack();
        let boxes = enumerate_boxes(&sf).unwrap();
        let v = by_element(&boxes, &[1, 1]);
        let inv = box_inverse(&sf, v).unwrap();
        assert_eq!(inv.element, vec![BigInt::one(), BigInt::zero()]);
        // v + v = (2,0) = b1 + (0,1): box part is u = (0,1), floor 1 on ray 0.
        let sum = box_sum_third(&sf, v, v).unwrap().unwrap();
        assert_eq!(sum.check_v3.element, vec![BigInt::zero(), BigInt::one()]);
        assert_eq!(sum.floors, [(0usize, 1u32)].into_iter().collect());
        // v and w1 live on opposite rays: no common cone.
        let w1 = by_element(&boxes, &[-1, 0]);
        assert!(box_sum_third(&sf, v, w1).unwrap().is_none());
    }

    #[test]
    fn quotient_stacky_fans() {
        let sf = elliptic_stack();
        // by the zero cone: the stack itself
        let (q, _) = quotient_stacky_fan(&sf, &Cone::new()).unwrap();
        assert_eq!(q.group(), sf.group());
        // by ray 0: B(Z/4)
        let (q, _) = quotient_stacky_fan(&sf, &[0].into_iter().collect()).unwrap();
        assert_eq!(q.group(), &FgAbGroup::new(0, vec![4.into()]).unwrap());
        assert_eq!(q.fan().ray_count(), 0);
        // by ray 1: B(Z/6)
        let (q, _) = quotient_stacky_fan(&sf, &[1].into_iter().collect()).unwrap();
        assert_eq!(q.group(), &FgAbGroup::new(0, vec![6.into()]).unwrap());

        // P(1,1,2) by the cone {0,2}: B(Z/2)
        let (q, _) = quotient_stacky_fan(&p112(), &[0, 2].into_iter().collect()).unwrap();
        assert_eq!(q.group(), &FgAbGroup::new(0, vec![2.into()]).unwrap());
        assert_eq!(q.fan().ray_count(), 0);
    }

    #[test]
    fn inertia_counts() {
        let sf = elliptic_stack();
        match inertia(&sf, 1).unwrap() {
            Inertia::Components(cs) => {
                assert_eq!(cs.len(), 8);
            }
            _ => unreachable!(),
        }
        match inertia(&p112(), 1).unwrap() {
            Inertia::Components(cs) => {
                assert_eq!(cs.len(), 2);
                assert_eq!(cs[1].local_group, FgAbGroup::new(0, vec![2.into()]).unwrap());
                assert_eq!(cs[1].sector.fan().ray_count(), 0);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn products_match_printed_relations() {
        let sf = elliptic_stack();
        let gd = gerbe_data(&sf).unwrap();
        let boxes = enumerate_boxes(&sf).unwrap();
        let v = by_element(&boxes, &[1, 1]);
        let u = by_element(&boxes, &[0, 1]);
        let w1 = by_element(&boxes, &[-1, 0]);
        let w2 = by_element(&boxes, &[-2, 0]);

        // v * v = u * (twisted ray class 1)
        let (bx, factor) = orbifold_product(&sf, &gd, v, v).unwrap().unwrap();
        assert_eq!(&bx, u);
        assert_eq!(factor, Poly::linear(&gd.e.row(0)));
        // u * u = 1
        let (bx, factor) = orbifold_product(&sf, &gd, u, u).unwrap().unwrap();
        assert!(bx.is_zero());
        assert_eq!(factor, Poly::constant(2, BigInt::one()));
        // v * w1 = 0
        assert!(orbifold_product(&sf, &gd, v, w1).unwrap().is_none());
        // w1 * w1 = w2, no factor
        let (bx, factor) = orbifold_product(&sf, &gd, w1, w1).unwrap().unwrap();
        assert_eq!(&bx, w2);
        assert_eq!(factor, Poly::constant(2, BigInt::one()));
        // w1 * w2 = twisted ray class 2 (the cube of w1)
        let (bx, factor) = orbifold_product(&sf, &gd, w1, w2).unwrap().unwrap();
        assert!(bx.is_zero());
        assert_eq!(factor, Poly::linear(&gd.e.row(1)));
        // with the alternative torsion lift (-1,1), the cube lands on u
        let w1_alt = by_element(&boxes, &[-1, 1]);
        let (bx, _) = orbifold_product(&sf, &gd, w1_alt, w2).unwrap().unwrap();
        assert_eq!(&bx, u);
    }

    #[test]
    fn euler_classes() {
        let sf = elliptic_stack();
        let gd = gerbe_data(&sf).unwrap();
        let boxes = enumerate_boxes(&sf).unwrap();
        let w2 = by_element(&boxes, &[-2, 0]);
        // (w2, w2, w2): sum (-6, 0) = 2 b2, Euler class = twisted class of ray 1.
        let e = obstruction_euler(&sf, &gd, w2, w2, w2).unwrap();
        assert_eq!(e, Poly::linear(&gd.e.row(1)));
        // all-ones coefficients give the empty product
        let v = by_element(&boxes, &[1, 1]);
        let u = by_element(&boxes, &[0, 1]);
        let rho1 = by_element(&boxes, &[1, 0]);
        // v + rho1 + u = (2, 0) ... not a {1,2} pattern; use the p112 triple instead.
        let _ = (v, u, rho1);
        let sfp = p112();
        let gdp = gerbe_data(&sfp).unwrap();
        let bx = enumerate_boxes(&sfp).unwrap();
        let vp = &bx[1];
        let e = obstruction_euler(&sfp, &gdp, vp, vp, &bx[0].clone()).unwrap_or_else(|_| Poly::zero());
        // v + v + 0 = b1 + b3 has coefficients (1,1): empty product = 1.
        assert_eq!(e, Poly::constant(3, BigInt::one()));
    }

    #[test]
    fn orbifold_ring_p112() {
        let sf = p112();
        let ring = orbifold_ring(&sf).unwrap();
        assert_eq!(ring.presentation.generators().len(), 4);
        // The box shares no cone with ray 1, so y1 kills the twisted class
        // of ray 1 (which is 2*x1 in these coordinates).
        let names = ring.presentation.names();
        assert!(ring.presentation.relations().iter().any(|r| r.display(&names) == "x2*y1"));
    }
}
