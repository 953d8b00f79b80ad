//! Graded integer ring presentations and the operations that produce
//! them: the Stanley-Reisner presentation of a stacky fan, linear
//! elimination, root-gerbe extension and classifying-stack extension.
//!
//! A presentation is a list of named generators with positive (or, for
//! orbifold rings, zero) rational degrees and homogeneous integer
//! relations. Comparisons between presentations go through the
//! graded-piece engine in [`engine`], never through ring isomorphism in
//! general.

pub mod engine;
mod poly;

pub use poly::{Poly, Term};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fgab::FgAbGroup;
use crate::stacky::{decompose, gerbe_data, GerbeData, StackyFan};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    generators: Vec<Generator>,
    relations: Vec<Poly>,
}

impl GradedPresentation {
    /// Validates shape, nonnegative degrees, and homogeneity of every
    /// relation. Relations are sign-normalized; zero relations dropped.
    pub fn new(generators: Vec<Generator>, relations: Vec<Poly>) -> Result<Self> {
        let degrees: Vec<BigRational> = generators.iter().map(|g| g.degree.clone()).collect();
        if degrees.iter().any(|d| d.is_negative()) {
            return Err(Error::Invalid("generator degrees must be nonnegative".into()));
        }
        let mut names = std::collections::BTreeSet::new();
        for g in &generators {
            if !names.insert(&g.name) {
                return Err(Error::Invalid(format!("duplicate generator name {}", g.name)));
            }
        }
        let mut out = Vec::new();
        for r in relations {
            if r.is_zero() {
                continue;
            }
            if r.nvars() != Some(generators.len()) {
                return Err(Error::Invalid("relation has wrong exponent vector length".into()));
            }
            r.homogeneous_degree(&degrees)?;
            out.push(r.sign_normalized());
        }
        Ok(GradedPresentation { generators, relations: out })
    }

    pub fn integers() -> Self {
        GradedPresentation { generators: Vec::new(), relations: Vec::new() }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn degrees(&self) -> Vec<BigRational> {
        self.generators.iter().map(|g| g.degree.clone()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// Short human-readable form `Z[a,b]/(r1, r2, ...)`.
    pub fn display(&self) -> String {
        let names = self.names();
        if self.generators.is_empty() {
            return "Z".to_string();
        }
        let rels: Vec<String> = self.relations.iter().map(|r| r.display(&names)).collect();
        if rels.is_empty() {
            format!("Z[{}]", names.join(","))
        } else {
            format!("Z[{}]/({})", names.join(","), rels.join(", "))
        }
    }
}

fn one_rational() -> BigRational {
    BigRational::from(BigInt::one())
}

/// Fresh generator names `t`, `t2`, `t3`, ... avoiding collisions.
fn fresh_names(taken: &[String], count: usize) -> Vec<String> {
    let taken: std::collections::BTreeSet<&str> = taken.iter().map(|s| s.as_str()).collect();
    let mut out = Vec::new();
    let mut k = 0usize;
    while out.len() < count {
        k += 1;
        let cand = if k == 1 { "t".to_string() } else { format!("t{}", k) };
        if !taken.contains(cand.as_str()) {
            out.push(cand);
        }
    }
    out
}

/// The twisted ray class `x~_i` as a polynomial in the x generators.
pub fn twisted_ray_class(gd: &GerbeData, i: usize) -> Poly {
    Poly::linear(&gd.twisted_ray(i).expect("ray index"))
}

/// Stanley-Reisner presentation of a stacky fan satisfying the
/// torsion-generation hypothesis: generators x_1..x_n in degree 1,
/// circuit relations, and one product of twisted ray classes per minimal
/// non-face.
pub fn sr_ring(sf: &StackyFan, gd: &GerbeData) -> Result<GradedPresentation> {
    let n = sf.fan().ray_count();
    let generators: Vec<Generator> =
        (0..n).map(|i| Generator { name: format!("x{}", i + 1), degree: one_rational() }).collect();
    let mut relations = circuit_relations(sf);
    for nonface in sf.fan().minimal_nonfaces() {
        let mut p = Poly::constant(n, BigInt::one());
        for &i in &nonface {
            p = p.mul(&twisted_ray_class(gd, i));
        }
        relations.push(p);
    }
    GradedPresentation::new(generators, relations)
}

/// Iwanari presentation for a torsion-free stacky fan: same ideal with
/// untwisted ray classes.
pub fn reduced_sr_ring(sf: &StackyFan) -> Result<GradedPresentation> {
    if !sf.group().is_free() {
        return Err(Error::Invalid("reduced presentation requires a torsion-free group".into()));
    }
    let n = sf.fan().ray_count();
    let generators: Vec<Generator> =
        (0..n).map(|i| Generator { name: format!("x{}", i + 1), degree: one_rational() }).collect();
    let mut relations = circuit_relations(sf);
    for nonface in sf.fan().minimal_nonfaces() {
        let mut p = Poly::constant(n, BigInt::one());
        for &i in &nonface {
            p = p.mul(&Poly::var(n, i));
        }
        relations.push(p);
    }
    GradedPresentation::new(generators, relations)
}

/// One linear relation per dual basis vector of the free part of N:
/// sum_i (b-bar_i)_j x_i.
fn circuit_relations(sf: &StackyFan) -> Vec<Poly> {
    let d = sf.group().rank();
    let n = sf.fan().ray_count();
    let mut out = Vec::new();
    for j in 0..d {
        let coeffs: Vec<BigInt> = (0..n).map(|i| sf.beta().matrix.get(j, i).clone()).collect();
        out.push(Poly::linear(&coeffs));
    }
    out
}

/// Substitution produced by [`eliminate_linear`]: old generator `i`
/// equals `map[i]` in the new presentation.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub map: Vec<Poly>,
}

/// Eliminate degree-1 generators along the lattice of degree-1 linear
/// relations. Generators hit by a unit elementary divisor are substituted
/// away; divisors e > 1 survive as generators with a relation e*t; all
/// other relations are rewritten through the substitution.
pub fn eliminate_linear(p: &GradedPresentation) -> Result<(GradedPresentation, Substitution)> {
    let one = one_rational();
    let deg1: Vec<usize> =
        (0..p.generators.len()).filter(|&i| p.generators[i].degree == one).collect();
    let is_linear = |r: &Poly| {
        r.terms().iter().all(|t| t.exps.iter().sum::<u32>() == 1)
            && r.homogeneous_degree(&p.degrees()).map(|d| d == Some(one.clone())).unwrap_or(false)
    };
    let linear: Vec<&Poly> = p.relations.iter().filter(|r| is_linear(r)).collect();
    if linear.is_empty() || deg1.is_empty() {
        let map = (0..p.generators.len()).map(|i| Poly::var(p.generators.len(), i)).collect();
        return Ok((p.clone(), Substitution { map }));
    }

    let col_of: std::collections::BTreeMap<usize, usize> =
        deg1.iter().enumerate().map(|(c, &g)| (g, c)).collect();
    let n1 = deg1.len();
    let mut rows = crate::intlin::IntMatrix::zero(linear.len(), n1);
    for (ri, r) in linear.iter().enumerate() {
        for t in r.terms() {
            let g = t.exps.iter().position(|&e| e == 1).expect("linear term");
            rows.set(ri, col_of[&g], t.coeff.clone());
        }
    }
    let snf = crate::intlin::snf(&rows);
    // rows = U^-1 D V^-1, so with x = V y the relations become D y = 0.
    let v = &snf.v;
    let mut kept: Vec<usize> = Vec::new(); // y indices that survive
    let mut torsion_orders: Vec<Option<BigInt>> = Vec::new();
    for j in 0..n1 {
        let d = if j < snf.rank { snf.d.get(j, j).clone() } else { BigInt::zero() };
        if d.is_one() {
            continue;
        }
        kept.push(j);
        torsion_orders.push(if d.is_zero() { None } else { Some(d) });
    }

    // Names: a surviving y reuses the name of the last old generator that
    // it equals on the nose; the rest get fresh t-names.
    let mut names: Vec<Option<String>> = vec![None; kept.len()];
    for (yi, &j) in kept.iter().enumerate() {
        for (&g, &c) in col_of.iter() {
            // x_g = sum over kept jj of V[c][jj] y_jj; reuse g's name when
            // that sum is exactly y_j.
            let matches = kept.iter().all(|&jj| {
                let expected = if jj == j { BigInt::one() } else { BigInt::zero() };
                *v.get(c, jj) == expected
            });
            if matches {
                names[yi] = Some(p.generators[g].name.clone());
            }
        }
    }
    let fresh_count = names.iter().filter(|n| n.is_none()).count();
    let fresh = fresh_names(&p.names(), fresh_count);
    let mut fresh_it = fresh.into_iter();
    let final_names: Vec<String> =
        names.into_iter().map(|n| n.unwrap_or_else(|| fresh_it.next().expect("fresh name"))).collect();

    // New generator list: surviving y block first, untouched generators after.
    let untouched: Vec<usize> =
        (0..p.generators.len()).filter(|i| !col_of.contains_key(i)).collect();
    let new_count = kept.len() + untouched.len();
    let mut generators: Vec<Generator> = Vec::with_capacity(new_count);
    for name in &final_names {
        generators.push(Generator { name: name.clone(), degree: one.clone() });
    }
    for &i in &untouched {
        generators.push(p.generators[i].clone());
    }

    // Substitution for every old generator.
    let mut map: Vec<Poly> = Vec::with_capacity(p.generators.len());
    for i in 0..p.generators.len() {
        if let Some(&c) = col_of.get(&i) {
            let coeffs: Vec<BigInt> = (0..new_count)
                .map(|k| if k < kept.len() { v.get(c, kept[k]).clone() } else { BigInt::zero() })
                .collect();
            map.push(Poly::linear(&coeffs));
        } else {
            let pos = kept.len() + untouched.iter().position(|&u| u == i).expect("untouched");
            map.push(Poly::var(new_count, pos));
        }
    }

    let mut relations: Vec<Poly> = Vec::new();
    for (yi, ord) in torsion_orders.iter().enumerate() {
        if let Some(e) = ord {
            relations.push(Poly::var(new_count, yi).scale(e));
        }
    }
    for r in &p.relations {
        if is_linear(r) {
            continue;
        }
        let s = r.substitute(&map, new_count);
        if !s.is_zero() {
            relations.push(s);
        }
    }
    let out = GradedPresentation::new(generators, relations)?;
    Ok((out, Substitution { map }))
}

/// Chow presentation of the stack of m-th roots of a line bundle: adjoin
/// a degree-1 generator t with the relation c1(L) - m t.
pub fn root_gerbe_ring(base: &GradedPresentation, bundle_class: &Poly, m: &BigInt) -> Result<GradedPresentation> {
    if !m.is_positive() {
        return Err(Error::Invalid(format!("root order must be positive, got {}", m)));
    }
    if !bundle_class.is_zero() {
        if bundle_class.nvars() != Some(base.generators.len()) {
            return Err(Error::Invalid("bundle class is not over the base generators".into()));
        }
        let deg = bundle_class.homogeneous_degree(&base.degrees())?;
        if deg != Some(one_rational()) || bundle_class.terms().iter().any(|t| t.exps.iter().sum::<u32>() != 1) {
            return Err(Error::Invalid("bundle class must be a degree-1 combination of generators".into()));
        }
    }
    let n = base.generators.len();
    let name = fresh_names(&base.names(), 1).remove(0);
    let mut generators = base.generators.clone();
    generators.push(Generator { name, degree: one_rational() });
    let embed_map: Vec<usize> = (0..n).collect();
    let mut relations: Vec<Poly> =
        base.relations.iter().map(|r| r.embed(&embed_map, n + 1)).collect();
    let class = if bundle_class.is_zero() {
        Poly::zero()
    } else {
        bundle_class.embed(&embed_map, n + 1)
    };
    relations.push(class.sub(&Poly::var(n + 1, n).scale(m)));
    GradedPresentation::new(generators, relations)
}

/// Tensor with the Chow ring of the classifying stack of a finite abelian
/// group: one degree-1 generator with relation r_i t_i per invariant
/// factor.
pub fn bmu_extension(base: &GradedPresentation, mu: &FgAbGroup) -> Result<GradedPresentation> {
    if mu.rank() != 0 {
        return Err(Error::Invalid("classifying-stack extension requires a finite group".into()));
    }
    if mu.torsion().is_empty() {
        return Ok(base.clone());
    }
    let n = base.generators.len();
    let s = mu.torsion().len();
    let names = fresh_names(&base.names(), s);
    let mut generators = base.generators.clone();
    for name in &names {
        generators.push(Generator { name: name.clone(), degree: one_rational() });
    }
    let embed_map: Vec<usize> = (0..n).collect();
    let mut relations: Vec<Poly> =
        base.relations.iter().map(|r| r.embed(&embed_map, n + s)).collect();
    for (j, order) in mu.torsion().iter().enumerate() {
        relations.push(Poly::var(n + s, n + j).scale(order));
    }
    GradedPresentation::new(generators, relations)
}

/// How [`chow_ring`] obtained its answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChowRouting {
    /// The torsion-generation hypothesis held; direct Stanley-Reisner
    /// presentation.
    Direct,
    /// The hypothesis failed; the stack was decomposed as a gerbe times a
    /// classifying stack and the presentation extended accordingly.
    ViaDecomposition { mu: FgAbGroup },
}

/// Integral Chow ring presentation of any valid stacky fan. Inputs that
/// fail the torsion-generation hypothesis are routed through the gerbe
/// decomposition and a classifying-stack extension.
pub fn chow_ring(sf: &StackyFan) -> Result<(GradedPresentation, ChowRouting)> {
    let validation = sf.validate();
    if !validation.diagnostics.is_empty() {
        return Err(Error::Diagnostics(validation.diagnostics));
    }
    if validation.torsion_generated {
        let gd = gerbe_data(sf)?;
        Ok((sr_ring(sf, &gd)?, ChowRouting::Direct))
    } else {
        let (core, mu) = decompose(sf)?;
        let gd = gerbe_data(&core)?;
        let base = sr_ring(&core, &gd)?;
        Ok((bmu_extension(&base, &mu)?, ChowRouting::ViaDecomposition { mu }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chowring::engine::GradedEngine;
    use crate::fancomb::Fan;
    use crate::fgab::GroupHom;
    use crate::intlin::IntMatrix;

    fn p1_smooth() -> StackyFan {
        let fan = Fan::new(1, vec![vec![1.into()], vec![(-1).into()]], vec![vec![0], vec![1]]).unwrap();
        let beta = GroupHom::new(FgAbGroup::free(2), FgAbGroup::free(1), IntMatrix::from_rows(&[vec![1, -1]])).unwrap();
        StackyFan::new(FgAbGroup::free(1), fan, beta).unwrap()
    }

    fn p32() -> StackyFan {
        let fan = Fan::new(1, vec![vec![2.into()], vec![(-3).into()]], vec![vec![0], vec![1]]).unwrap();
        let beta = GroupHom::new(FgAbGroup::free(2), FgAbGroup::free(1), IntMatrix::from_rows(&[vec![2, -3]])).unwrap();
        StackyFan::new(FgAbGroup::free(1), fan, beta).unwrap()
    }

    #[test]
    fn smooth_p1_chow() {
        let sf = p1_smooth();
        let p = reduced_sr_ring(&sf).unwrap();
        assert_eq!(p.display(), "Z[x1,x2]/(x1 - x2, x1*x2)");
    }

    #[test]
    fn weighted_p32_reduced() {
        let p = reduced_sr_ring(&p32()).unwrap();
        assert_eq!(p.display(), "Z[x1,x2]/(2*x1 - 3*x2, x1*x2)");
        let (e, _) = eliminate_linear(&p).unwrap();
        assert_eq!(e.generators().len(), 1);
        assert_eq!(e.display(), "Z[t]/(6*t^2)");
    }

    #[test]
    fn elimination_identity_when_no_linear_relations() {
        let g = vec![Generator { name: "a".into(), degree: one_rational() }];
        let p = GradedPresentation::new(g, vec![Poly::var(1, 0).pow(2).scale(&5.into())]).unwrap();
        let (e, sub) = eliminate_linear(&p).unwrap();
        assert_eq!(e, p);
        assert_eq!(sub.map[0], Poly::var(1, 0));
    }

    #[test]
    fn root_gerbe_trivial_cases() {
        let base = reduced_sr_ring(&p32()).unwrap();
        // m = 1: eliminating the new relation recovers the base gradings
        let (eb, _) = eliminate_linear(&base).unwrap();
        let class = Poly::var(2, 0).sub(&Poly::var(2, 1)); // t' = x1 - x2
        let r = root_gerbe_ring(&base, &class, &BigInt::one()).unwrap();
        let (er, _) = eliminate_linear(&r).unwrap();
        let three = BigRational::from(BigInt::from(3));
        let (eq, _) = GradedEngine::equal(&eb, &er, &three, 100_000).unwrap();
        assert!(eq);
        // zero class: adjoin t with relation k t
        let r = root_gerbe_ring(&base, &Poly::zero(), &BigInt::from(4)).unwrap();
        assert!(r.relations().iter().any(|p| p.display(&r.names()) == "4*t"));
        assert!(root_gerbe_ring(&base, &class, &BigInt::zero()).is_err());
    }

    #[test]
    fn root_gerbe_doubling_matches_p64() {
        // Base P(3,2) with bundle t', order 2: substitute t' = 2t to get 24t^2.
        let base = reduced_sr_ring(&p32()).unwrap();
        let class = Poly::var(2, 0).sub(&Poly::var(2, 1));
        let r = root_gerbe_ring(&base, &class, &BigInt::from(2)).unwrap();
        let (er, _) = eliminate_linear(&r).unwrap();
        assert_eq!(er.display(), "Z[t]/(24*t^2)");
    }

    #[test]
    fn bmu_cases() {
        let base = GradedPresentation::integers();
        let mu = FgAbGroup::new(0, vec![2.into()]).unwrap();
        let p = bmu_extension(&base, &mu).unwrap();
        assert_eq!(p.display(), "Z[t]/(2*t)");
        let mu = FgAbGroup::new(0, vec![2.into(), 4.into()]).unwrap();
        let p = bmu_extension(&base, &mu).unwrap();
        assert_eq!(p.display(), "Z[t,t2]/(2*t, 4*t2)");
        assert_eq!(bmu_extension(&base, &FgAbGroup::trivial()).unwrap(), base);
        assert!(bmu_extension(&base, &FgAbGroup::free(1)).is_err());
    }
}
