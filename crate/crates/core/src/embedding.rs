//! Embedding a central extension `G` of `B` by `A` into a twisted product
//! `A ×_β̃ L` with `β̃` bilinear and `L = (Q/Z)^k` depending only on `B`.
//!
//! Pipeline: the commutator pairing `α` of `G`, the universal triple
//! `(C, i_B, β)` for `α`, the divisible target `j: B → L`, a factor map
//! `χ: C → L` with `χ ∘ i_B = j`, `β̃ = χ ∘ β`, and finally `f: G → L` built
//! one cyclic subgroup at a time so that `φ(g) = (π g, f(g))` is an injective
//! homomorphism.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::abelian::{present, subgroup_type, AbelianGroup};
use crate::cocycle::BilinearMatrix;
use crate::cohomology::{apply_j, bilinear_eval, LCocycle};
use crate::error::{Error, Result};
use crate::matrix::{big, solve_congruences_with, solve_mod_uniform, to_u64, IntMatrix};
use crate::qz::{QZVector, QZ};
use crate::twisted::{ExtElement, ExtensionGroup};

/// `(C, i_B, β)` for an alternating `α: A × A → B`.
#[derive(Clone, Debug)]
pub struct UniversalTriple {
    pub alpha: BilinearMatrix,
    pub c_group: AbelianGroup,
    /// `C.rank × B.rank`; column `t` is `i_B` of the `t`-th generator of `B`.
    pub i_b: IntMatrix,
    /// `β(g_i, g_j)` in coordinates of `C`.
    pub beta: BilinearMatrix,
}

impl UniversalTriple {
    pub fn group_a(&self) -> &AbelianGroup {
        self.alpha.group_a()
    }

    pub fn group_b(&self) -> &AbelianGroup {
        self.alpha.group_b()
    }

    /// `i_B(v)` for `v` in coordinates of `B`.
    pub fn include(&self, v: &[u64]) -> Vec<u64> {
        self.group_b().apply_hom(&self.i_b, v, &self.c_group)
    }
}

/// Presents `C` on the generators of `B` and symbols `β_ij` with relations
/// `e_t b_t = 0`, `d_i β_ij = d_j β_ij = 0` and `β_ij − β_ji = α(g_i, g_j)`
/// for `i < j`. Injectivity of `i_B` is checked twice: by the order of its
/// image, and by factoring the section candidate through the triple.
pub fn universal_triple(alpha: &BilinearMatrix) -> Result<UniversalTriple> {
    if !alpha.is_alternating() {
        return Err(Error::NotAlternating("universal triple input".into()));
    }
    let a = alpha.group_a();
    let b = alpha.group_b();
    let k = a.rank();
    let m = b.rank();
    let gens = m + k * k;
    let sym = |i: usize, j: usize| m + i * k + j;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for (t, &e) in b.factors().iter().enumerate() {
        let mut c = vec![BigInt::zero(); gens];
        c[t] = big(e);
        cols.push(c);
    }
    for i in 0..k {
        for j in 0..k {
            for d in [a.factors()[i], a.factors()[j]] {
                let mut c = vec![BigInt::zero(); gens];
                c[sym(i, j)] = big(d);
                cols.push(c);
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let mut c = vec![BigInt::zero(); gens];
            c[sym(i, j)] += 1;
            c[sym(j, i)] -= 1;
            for (t, &v) in alpha.entry(i, j).iter().enumerate() {
                c[t] -= big(v);
            }
            cols.push(c);
        }
    }
    let mut rel = IntMatrix::zeros(gens, cols.len());
    for (r, c) in cols.iter().enumerate() {
        for (s, v) in c.iter().enumerate() {
            rel[(s, r)] = v.clone();
        }
    }
    let p = present(gens, &rel)?;
    let c_group = p.group.clone();
    let mut i_b = IntMatrix::zeros(c_group.rank(), m);
    for t in 0..m {
        for (q, v) in p.image_of_generator(t).into_iter().enumerate() {
            i_b[(q, t)] = big(v);
        }
    }
    let entries = (0..k)
        .map(|i| (0..k).map(|j| p.image_of_generator(sym(i, j))).collect())
        .collect();
    let beta = BilinearMatrix::new(a, &c_group, entries)?;
    let triple = UniversalTriple {
        alpha: alpha.clone(),
        c_group,
        i_b,
        beta,
    };
    let image: Vec<Vec<u64>> = (0..m).map(|t| triple.include(b.generator(t).coords())).collect();
    if subgroup_type(&image, triple.c_group.factors()).order() != b.order() {
        return Err(Error::Inconsistent("i_B is not injective".into()));
    }
    let psi = section(&triple)?;
    for t in 0..m {
        let back = triple.c_group.apply_hom(&psi, &triple.include(b.generator(t).coords()), b);
        if back != b.generator(t).coords() {
            return Err(Error::Inconsistent("section does not split i_B".into()));
        }
    }
    Ok(triple)
}

/// `β′(x, y) = Σ_{i<j} x_i y_j α(g_i, g_j)`, so that `β′(x, y) − β′(y, x) = α(x, y)`.
pub fn section_bilinear(alpha: &BilinearMatrix) -> BilinearMatrix {
    let a = alpha.group_a();
    let b = alpha.group_b();
    let k = a.rank();
    let entries = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i < j { alpha.entry(i, j).to_vec() } else { vec![0; b.rank()] })
                .collect()
        })
        .collect();
    BilinearMatrix::new(a, b, entries).expect("entries of a bilinear map are compatible")
}

/// The map `ψ: C → B` with `ψ ∘ i_B = id` and `ψ ∘ β = β′` for the section bilinear map.
pub fn section(t: &UniversalTriple) -> Result<IntMatrix> {
    let b = t.group_b();
    verify_universal_property(t, b, &section_bilinear(&t.alpha), &IntMatrix::identity(b.rank()))
}

/// The unique `ψ: C → C′` with `φ′ = ψ ∘ i_B` and `β′ = ψ ∘ β`.
///
/// Errors with invalid input when the candidate diagram does not commute,
/// i.e. `β′(x, y) − β′(y, x) ≠ φ′(α(x, y))` for some generator pair.
pub fn verify_universal_property(
    t: &UniversalTriple,
    c_prime: &AbelianGroup,
    beta_prime: &BilinearMatrix,
    phi_prime: &IntMatrix,
) -> Result<IntMatrix> {
    let a = t.group_a();
    let b = t.group_b();
    let k = a.rank();
    if beta_prime.group_a() != a || beta_prime.group_b() != c_prime {
        return Err(Error::GroupMismatch("candidate bilinear map has the wrong groups".into()));
    }
    if !phi_prime.is_well_defined_hom(b.factors(), c_prime.factors()) {
        return Err(Error::InvalidInput("candidate φ′ is not a well-defined homomorphism".into()));
    }
    for i in 0..k {
        for j in 0..k {
            let lhs = c_prime.sub_coords(beta_prime.entry(i, j), beta_prime.entry(j, i));
            let rhs = b.apply_hom(phi_prime, t.alpha.entry(i, j), c_prime);
            if lhs != rhs {
                return Err(Error::InvalidInput(format!(
                    "candidate diagram does not commute at generator pair ({i}, {j})"
                )));
            }
        }
    }
    let c = &t.c_group;
    let mut images: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    for s in 0..b.rank() {
        let unit = b.generator(s);
        images.push((t.include(unit.coords()), b.apply_hom(phi_prime, unit.coords(), c_prime)));
    }
    for i in 0..k {
        for j in 0..k {
            images.push((t.beta.entry(i, j).to_vec(), beta_prime.entry(i, j).to_vec()));
        }
    }
    let spanning: Vec<Vec<u64>> = images.iter().map(|(x, _)| x.clone()).collect();
    if subgroup_type(&spanning, c.factors()).order() != c.order() {
        return Err(Error::Inconsistent("triple generators do not span C".into()));
    }
    let q = c.rank();
    let mut psi = IntMatrix::zeros(c_prime.rank(), q);
    for (r, &mr) in c_prime.factors().iter().enumerate() {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (src, dst) in &images {
            rows.push(src.iter().map(|&v| v % mr).collect::<Vec<_>>());
            rhs.push(dst[r]);
        }
        for (s, &cs) in c.factors().iter().enumerate() {
            let mut row = vec![0u64; q];
            row[s] = cs % mr;
            rows.push(row);
            rhs.push(0);
        }
        let sol = solve_mod_uniform(rows, rhs, q, mr)
            .ok_or_else(|| Error::Inconsistent("no factoring map exists".into()))?;
        for (s, v) in sol.into_iter().enumerate() {
            psi[(r, s)] = big(v);
        }
    }
    if !psi.is_well_defined_hom(c.factors(), c_prime.factors()) {
        return Err(Error::Inconsistent("factoring map is not well defined".into()));
    }
    Ok(psi)
}

/// `L = (Q/Z)^k` for `B = ⊕ Z/e_t` and `j(f_t) = 1/e_t` in coordinate `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibleTarget {
    pub rank: usize,
    pub j: Vec<QZVector>,
}

impl DivisibleTarget {
    pub fn apply(&self, v: &[u64]) -> QZVector {
        apply_j(&self.j, v, self.rank)
    }
}

pub fn divisible_target(b: &AbelianGroup) -> DivisibleTarget {
    let rank = b.rank();
    let j = b
        .factors()
        .iter()
        .enumerate()
        .map(|(t, &e)| {
            let mut v = QZVector::zero(rank);
            v.0[t] = QZ::new(1, e).expect("positive modulus");
            v
        })
        .collect();
    DivisibleTarget { rank, j }
}

/// `χ: C → L` with `χ ∘ i_B = j`, given by its values on the generators of
/// `C`: `χ = j ∘ ψ` for the section `ψ`. On the presentation symbols this
/// means `χ(β_ij) = j(α(g_i, g_j))` for `i < j` and `0` otherwise.
pub fn factor_map(t: &UniversalTriple, target: &DivisibleTarget) -> Result<Vec<QZVector>> {
    let psi = section(t)?;
    let b = t.group_b();
    let chi: Vec<QZVector> = (0..t.c_group.rank())
        .map(|q| target.apply(&t.c_group.apply_hom(&psi, t.c_group.generator(q).coords(), b)))
        .collect();
    check_factor_map(t, target, &chi)?;
    Ok(chi)
}

/// A factor map found by solving `χ ∘ i_B = j` directly in the coordinates of
/// `C`, with free coordinates set to zero. It can differ from
/// [`factor_map`]; the two resulting `β̃` differ by a symmetric bilinear
/// map, which is a coboundary over `L`.
pub fn factor_map_by_congruences(t: &UniversalTriple, target: &DivisibleTarget) -> Result<Vec<QZVector>> {
    let c = &t.c_group;
    let b = t.group_b();
    let q = c.rank();
    let m = c
        .factors()
        .iter()
        .chain(b.factors())
        .fold(BigInt::one(), |acc, &d| acc.lcm(&big(d)));
    let mut chi = vec![QZVector::zero(target.rank); q];
    for coord in 0..target.rank {
        // χ_coord(c_s) = x_s / c_s with x_s ∈ Z/c_s.
        let mut mat = IntMatrix::zeros(b.rank(), q);
        let mut rhs = Vec::new();
        for s in 0..b.rank() {
            let col = t.include(b.generator(s).coords());
            for (r, &v) in col.iter().enumerate() {
                mat[(s, r)] = big(v) * (&m / big(c.factors()[r]));
            }
            rhs.push(target.j[s].coords()[coord].numerator_over(&m).expect("denominator divides M"));
        }
        let targets = vec![m.clone(); b.rank()];
        let unknown: Vec<BigInt> = c.factors().iter().map(|&d| big(d)).collect();
        let x = solve_congruences_with(&mat, &targets, Some(&unknown), &rhs)
            .ok_or_else(|| Error::Inconsistent("j does not extend over C".into()))?;
        for (r, v) in x.iter().enumerate() {
            chi[r].0[coord] = QZ::new(v.clone(), big(c.factors()[r]))?;
        }
    }
    check_factor_map(t, target, &chi)?;
    Ok(chi)
}

fn apply_chi(chi: &[QZVector], v: &[u64], rank: usize) -> QZVector {
    apply_j(chi, v, rank)
}

fn check_factor_map(t: &UniversalTriple, target: &DivisibleTarget, chi: &[QZVector]) -> Result<()> {
    for (s, &d) in t.c_group.factors().iter().enumerate() {
        if !chi[s].scale(&big(d)).is_zero() {
            return Err(Error::Inconsistent("χ is not a homomorphism on C".into()));
        }
    }
    let b = t.group_b();
    for s in 0..b.rank() {
        if apply_chi(chi, &t.include(b.generator(s).coords()), target.rank) != target.j[s] {
            return Err(Error::Inconsistent("χ ∘ i_B ≠ j".into()));
        }
    }
    Ok(())
}

/// `β̃ = χ ∘ β` on generator pairs.
pub fn beta_tilde(t: &UniversalTriple, chi: &[QZVector], rank: usize) -> Vec<Vec<QZVector>> {
    let k = t.group_a().rank();
    (0..k)
        .map(|i| (0..k).map(|j| apply_chi(chi, t.beta.entry(i, j), rank)).collect())
        .collect()
}

/// `f` on a cyclic group `⟨g⟩`: `f(a g) = a f(g) + C(a, 2) β(g, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicExtension {
    pub fg: QZVector,
    pub beta_gg: QZVector,
}

impl CyclicExtension {
    /// Case 1 (`n₀ = None`: no positive power of `g` lies in the known
    /// subgroup): `f(g) = 0`. Case 2: `f(g)` is the canonical `n₀`-th root of
    /// `f(n₀ g) − C(n₀, 2) β(g, g)`.
    pub fn new(n0: Option<(u64, &QZVector)>, beta_gg: &QZVector) -> Self {
        let fg = match n0 {
            None => QZVector::zero(beta_gg.len()),
            Some((n, f_n0)) => f_n0.sub(&beta_gg.scale(&binom2(n as i64))).canonical_root(n),
        };
        CyclicExtension {
            fg,
            beta_gg: beta_gg.clone(),
        }
    }

    pub fn value(&self, a: i64) -> QZVector {
        self.fg.scale(&BigInt::from(a)).add(&self.beta_gg.scale(&binom2(a)))
    }
}

/// `C(a, 2) = a(a − 1)/2` for any integer `a`.
fn binom2(a: i64) -> BigInt {
    BigInt::from(a) * BigInt::from(a - 1) / 2
}

/// The embedding data produced by [`embed`].
#[derive(Clone, Debug)]
pub struct EmbeddingResult {
    pub source: ExtensionGroup,
    pub triple: UniversalTriple,
    pub target: DivisibleTarget,
    pub chi: Vec<QZVector>,
    pub beta_tilde: Vec<Vec<QZVector>>,
    /// `f(g)` for every element, in the order of [`ExtensionGroup::elements`].
    pub f: Vec<QZVector>,
    /// `h(x) = f(ℓ(x))`, in element order of `A`.
    pub h: Vec<QZVector>,
    /// The subgroup of `L` generated by the values of `f`.
    pub image_f: AbelianGroup,
    pub report: EmbeddingReport,
}

/// Outcome of every identity checked on an embedding.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EmbeddingReport {
    /// `f(xy) = f(x) + f(y) + β̃(x̄, ȳ)` on all pairs.
    pub additivity: bool,
    /// `f ∘ i = j` and `f` is injective on `i(B)`.
    pub restriction_is_j: bool,
    /// `f(g^n) = n f(g) + C(n, 2) β̃(ḡ, ḡ)` for `0 ≤ n ≤ exp(G)`.
    pub power_formula: bool,
    /// `f([x, y]) = β̃(x̄, ȳ) − β̃(ȳ, x̄)` on all pairs.
    pub commutator_formula: bool,
    pub phi_injective: bool,
    pub phi_homomorphism: bool,
    /// `∂h = j ∘ γ − β̃` exactly.
    pub coboundary_witness: bool,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.additivity
            && self.restriction_is_j
            && self.power_formula
            && self.commutator_formula
            && self.phi_injective
            && self.phi_homomorphism
            && self.coboundary_witness
    }
}

impl EmbeddingResult {
    pub fn l_rank(&self) -> usize {
        self.target.rank
    }

    pub fn f_of(&self, g: &ExtElement) -> &QZVector {
        &self.f[self.source.index_of(g)]
    }

    /// `φ(g) = (π g, f(g))`.
    pub fn phi(&self, g: &ExtElement) -> (Vec<u64>, QZVector) {
        (g.a.clone(), self.f_of(g).clone())
    }

    pub fn beta_tilde_at(&self, x: &[u64], y: &[u64]) -> QZVector {
        bilinear_eval(&self.beta_tilde, x, y, self.target.rank)
    }

    /// Multiplication in `A ×_β̃ L`.
    pub fn target_mul(&self, u: &(Vec<u64>, QZVector), v: &(Vec<u64>, QZVector)) -> (Vec<u64>, QZVector) {
        let a = self.source.group_a();
        (
            a.add_coords(&u.0, &v.0),
            u.1.add(&v.1).add(&self.beta_tilde_at(&u.0, &v.0)),
        )
    }

    /// Whether `A ×_β̃ L` is abelian, i.e. `β̃` is symmetric.
    pub fn target_is_abelian(&self) -> bool {
        let k = self.beta_tilde.len();
        (0..k).all(|i| (0..k).all(|j| self.beta_tilde[i][j] == self.beta_tilde[j][i]))
    }

    pub fn j_gamma(&self) -> Result<LCocycle> {
        LCocycle::from_cocycle(self.source.gamma(), &self.target.j, self.target.rank)
    }

    pub fn beta_tilde_cocycle(&self) -> Result<LCocycle> {
        LCocycle::from_bilinear(self.source.group_a(), &self.beta_tilde, self.target.rank)
    }
}

/// Extends `f = j` on `i(B)` to all of `G`, one cyclic subgroup at a time.
///
/// Generators are processed in the order `ℓ(g_1), …, ℓ(g_k)` followed by
/// any `ℓ(a)` not yet covered, in lexicographic order. Every step checks the
/// seam `f_U = f_V` on `U ∩ V`, torsion consistency of `f_V`, and that the
/// combined `f_W` agrees on two decompositions of each new element.
pub fn extend_f(g: &ExtensionGroup, beta_tilde: &[Vec<QZVector>], target: &DivisibleTarget) -> Result<Vec<QZVector>> {
    let a = g.group_a();
    let b = g.group_b();
    let k = a.rank();
    let rank = target.rank;
    if beta_tilde.len() != k || beta_tilde.iter().any(|r| r.len() != k || r.iter().any(|v| v.len() != rank)) {
        return Err(Error::Structure("β̃ must be a k × k table of L-values".into()));
    }
    for i in 0..k {
        for jj in 0..k {
            let d = big(a.factors()[i]);
            if !beta_tilde[i][jj].scale(&d).is_zero() || !beta_tilde[i][jj].scale(&big(a.factors()[jj])).is_zero() {
                return Err(Error::InvalidInput(format!("β̃ is not bilinear at ({i}, {jj})")));
            }
        }
    }
    let bt = |x: &[u64], y: &[u64]| bilinear_eval(beta_tilde, x, y, rank);
    let n = g.order() as usize;
    let mut f: Vec<Option<QZVector>> = vec![None; n];
    let mut known: Vec<usize> = Vec::new();
    for v in b.elements() {
        let e = g.i(v.coords());
        let idx = g.index_of(&e);
        f[idx] = Some(target.apply(v.coords()));
        known.push(idx);
    }
    for i in 0..k {
        for jj in 0..k {
            let gi = g.ell(a.generator(i).coords());
            let gj = g.ell(a.generator(jj).coords());
            let c = g.commutator(&gi, &gj);
            let lhs = f[g.index_of(&c)].as_ref().expect("commutators lie in i(B)");
            let rhs = bt(&gi.a, &gj.a).sub(&bt(&gj.a, &gi.a));
            if *lhs != rhs {
                return Err(Error::CommutatorIncompatible(i, jj));
            }
        }
    }

    let sequence = (0..k)
        .map(|i| g.ell(a.generator(i).coords()))
        .chain(a.elements().map(|x| g.ell(x.coords())));
    for gen in sequence {
        let gidx = g.index_of(&gen);
        if f[gidx].is_some() {
            continue;
        }
        // Powers g^0, g^1, … up to the first one in the known subgroup.
        let mut powers = vec![g.identity()];
        loop {
            let next = g.mul(powers.last().unwrap(), &gen);
            let in_h = f[g.index_of(&next)].is_some();
            powers.push(next);
            if in_h {
                break;
            }
        }
        let n0 = powers.len() - 1;
        let g_n0 = powers[n0].clone();
        let f_n0 = f[g.index_of(&g_n0)].clone().unwrap();
        let cyc = CyclicExtension::new(Some((n0 as u64, &f_n0)), &bt(&gen.a, &gen.a));

        let order = g.element_order(&gen) as i64;
        for t in 0..=(order / n0 as i64) {
            let p = g.power(&gen, t * n0 as i64);
            let fu = f[g.index_of(&p)].as_ref().expect("powers of g^n0 are known");
            if cyc.value(t * n0 as i64) != *fu {
                return Err(Error::Inconsistent(format!("seam disagreement at {}·g", t * n0 as i64)));
            }
        }
        for t in 0..order {
            if cyc.value(t + order) != cyc.value(t) || cyc.value(t - order) != cyc.value(t) {
                return Err(Error::Inconsistent("cyclic extension is not periodic".into()));
            }
        }

        let g_n0_inv = g.inv(&g_n0);
        let mut new = Vec::new();
        for &u in &known {
            let ue = g.element_at(u);
            let fu = f[u].clone().unwrap();
            for (t, v) in powers.iter().enumerate().take(n0) {
                let w = g.mul(&ue, v);
                let fw = fu.add(&cyc.value(t as i64)).add(&bt(&ue.a, &v.a));
                let u2 = g.mul(&ue, &g_n0_inv);
                let f_u2 = f[g.index_of(&u2)].as_ref().expect("H is a subgroup");
                let v2 = g.power(&gen, (t + n0) as i64);
                let fw2 = f_u2.add(&cyc.value((t + n0) as i64)).add(&bt(&u2.a, &v2.a));
                if fw != fw2 {
                    return Err(Error::Inconsistent(format!("combined f is not well defined at {w:?}")));
                }
                let widx = g.index_of(&w);
                match &f[widx] {
                    Some(old) if t == 0 => {
                        if *old != fw {
                            return Err(Error::Inconsistent("combined f changes known values".into()));
                        }
                    }
                    Some(_) => return Err(Error::Inconsistent("cosets of H overlap".into())),
                    None => new.push((widx, fw)),
                }
            }
        }
        for (idx, v) in new {
            f[idx] = Some(v);
            known.push(idx);
        }
    }
    f.into_iter()
        .map(|v| v.ok_or_else(|| Error::Inconsistent("f is not defined on all of G".into())))
        .collect()
}

/// Values of `f` and `β̃` scaled to integers modulo a common denominator.
struct IntegerView {
    n: BigInt,
    rank: usize,
    f: Vec<Vec<u64>>,
    modulus: u64,
}

impl IntegerView {
    fn new(values: &[QZVector], rank: usize, extra: &[&QZVector]) -> Option<Self> {
        let n = values
            .iter()
            .chain(extra.iter().copied())
            .fold(BigInt::one(), |acc, v| acc.lcm(&v.order()));
        let modulus = n.to_u64()?;
        let scale = |v: &QZVector| -> Vec<u64> {
            v.coords().iter().map(|c| to_u64(&c.numerator_over(&n).unwrap())).collect()
        };
        Some(IntegerView {
            f: values.iter().map(scale).collect(),
            rank,
            n,
            modulus,
        })
    }

    fn scale(&self, v: &QZVector) -> Vec<u64> {
        v.coords().iter().map(|c| to_u64(&c.numerator_over(&self.n).unwrap())).collect()
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + b) % self.modulus).collect()
    }

    fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + self.modulus - b) % self.modulus).collect()
    }
}

fn verify(result: &EmbeddingResult) -> Result<EmbeddingReport> {
    let g = &result.source;
    let a = g.group_a();
    let b = g.group_b();
    let rank = result.target.rank;
    let na = a.order() as usize;
    let a_elems: Vec<Vec<u64>> = a.elements().map(|x| x.into_coords()).collect();
    let bt_values: Vec<QZVector> = (0..na * na)
        .map(|i| result.beta_tilde_at(&a_elems[i / na], &a_elems[i % na]))
        .collect();
    let extra: Vec<&QZVector> = bt_values.iter().chain(&result.target.j).collect();
    let view = IntegerView::new(&result.f, rank, &extra)
        .ok_or_else(|| Error::Capacity {
            what: "common denominator of f".into(),
            size: u128::MAX,
            limit: u64::MAX as u128,
        })?;
    let bt: Vec<Vec<u64>> = bt_values.iter().map(|v| view.scale(v)).collect();
    let bt_at = |x: &[u64], y: &[u64]| &bt[a.index_of(x) * na + a.index_of(y)];

    let elems: Vec<ExtElement> = g.elements().collect();
    let n = elems.len();
    let mut report = EmbeddingReport::default();

    report.additivity = (0..n).all(|x| {
        (0..n).all(|y| {
            let xy = g.index_of(&g.mul(&elems[x], &elems[y]));
            view.f[xy] == view.add(&view.add(&view.f[x], &view.f[y]), bt_at(&elems[x].a, &elems[y].a))
        })
    });

    let mut seen = HashSet::new();
    report.restriction_is_j = b.elements().all(|v| {
        let idx = g.index_of(&g.i(v.coords()));
        let expected = view.scale(&result.target.apply(v.coords()));
        seen.insert(view.f[idx].clone()) && view.f[idx] == expected
    });

    let exponent = elems.iter().fold(1u64, |acc, e| acc.lcm(&g.element_order(e)));
    report.power_formula = elems.iter().enumerate().all(|(x, e)| {
        let mut p = g.identity();
        (0..=exponent).all(|m| {
            let lhs = &view.f[g.index_of(&p)];
            let c2 = (m as u128 * (m as u128).saturating_sub(1) / 2 % view.modulus as u128) as u64;
            let rhs: Vec<u64> = (0..view.rank)
                .map(|t| {
                    ((m as u128 * view.f[x][t] as u128 + c2 as u128 * bt_at(&e.a, &e.a)[t] as u128)
                        % view.modulus as u128) as u64
                })
                .collect();
            p = g.mul(&p, e);
            *lhs == rhs
        })
    });

    report.commutator_formula = (0..n).all(|x| {
        (0..n).all(|y| {
            let c = g.index_of(&g.commutator(&elems[x], &elems[y]));
            view.f[c] == view.sub(bt_at(&elems[x].a, &elems[y].a), bt_at(&elems[y].a, &elems[x].a))
        })
    });

    let images: HashSet<(Vec<u64>, Vec<u64>)> = (0..n).map(|x| (elems[x].a.clone(), view.f[x].clone())).collect();
    report.phi_injective = images.len() == n;
    // φ(x)φ(y) = (x̄ + ȳ, f(x) + f(y) + β̃(x̄, ȳ)) and φ(xy) = (x̄ + ȳ, f(xy)).
    report.phi_homomorphism = report.additivity && (0..n).all(|x| elems[x].a == *g.pi(&elems[x]));

    let dh = LCocycle::coboundary(a, &result.h, rank)?;
    let rhs = result.j_gamma()?.sub(&result.beta_tilde_cocycle()?)?;
    report.coboundary_witness = dh == rhs;
    Ok(report)
}

/// The full pipeline. Fails with [`Error::Inconsistent`] if any identity of
/// [`EmbeddingReport`] does not hold.
pub fn embed(g: &ExtensionGroup) -> Result<EmbeddingResult> {
    let alpha = g.gamma().commutator_pairing()?;
    let triple = universal_triple(&alpha)?;
    let target = divisible_target(g.group_b());
    let chi = factor_map(&triple, &target)?;
    embed_with_factor_map(g, triple, target, chi)
}

/// [`embed`] with a caller-supplied factor map `χ` for the given triple.
pub fn embed_with_factor_map(
    g: &ExtensionGroup,
    triple: UniversalTriple,
    target: DivisibleTarget,
    chi: Vec<QZVector>,
) -> Result<EmbeddingResult> {
    check_factor_map(&triple, &target, &chi)?;
    let bt = beta_tilde(&triple, &chi, target.rank);
    let f = extend_f(g, &bt, &target)?;
    let a = g.group_a();
    let h: Vec<QZVector> = a.elements().map(|x| f[g.index_of(&g.ell(x.coords()))].clone()).collect();
    let image_f = value_subgroup(&f, target.rank);
    let mut result = EmbeddingResult {
        source: g.clone(),
        triple,
        target,
        chi,
        beta_tilde: bt,
        f,
        h,
        image_f,
        report: EmbeddingReport::default(),
    };
    result.report = verify(&result)?;
    if !result.report.passed() {
        return Err(Error::Inconsistent(format!("embedding checks failed: {:?}", result.report)));
    }
    Ok(result)
}

/// The subgroup of `(Q/Z)^rank` generated by `values`.
pub fn value_subgroup(values: &[QZVector], rank: usize) -> AbelianGroup {
    let n = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(&v.order()));
    let Some(m) = n.to_u64() else {
        return AbelianGroup::trivial();
    };
    if rank == 0 || m == 1 {
        return AbelianGroup::trivial();
    }
    let gens: Vec<Vec<u64>> = values
        .iter()
        .map(|v| v.coords().iter().map(|c| to_u64(&c.numerator_over(&n).unwrap())).collect())
        .collect();
    subgroup_type(&gens, &vec![m; rank])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{carry_cocycle, Cocycle};

    fn z(n: u64) -> AbelianGroup {
        AbelianGroup::cyclic(n)
    }

    fn q(n: i64, d: i64) -> QZ {
        QZ::new(n, d).unwrap()
    }

    fn heisenberg_alpha(p: u64, k: usize) -> BilinearMatrix {
        let a = AbelianGroup::new(vec![p; k]).unwrap();
        let mut e = vec![vec![vec![0u64]; k]; k];
        e[0][1] = vec![1];
        e[1][0] = vec![p - 1];
        BilinearMatrix::new(&a, &z(p), e).unwrap()
    }

    #[test]
    fn triple_for_zero_pairing_on_cyclic() {
        let t = universal_triple(&BilinearMatrix::zero(&z(3), &z(3))).unwrap();
        assert_eq!(t.c_group.factors(), &[3, 3]);
        let img = t.include(&[1]);
        assert_ne!(img, t.beta.entry(0, 0).to_vec());
        let both = vec![img, t.beta.entry(0, 0).to_vec()];
        assert_eq!(subgroup_type(&both, t.c_group.factors()).order(), 9);
    }

    #[test]
    fn triple_for_heisenberg_pairing() {
        let t = universal_triple(&heisenberg_alpha(3, 3)).unwrap();
        assert_eq!(t.c_group.factors(), &[3; 7]);
        let diff = t.c_group.sub_coords(t.beta.entry(0, 1), t.beta.entry(1, 0));
        assert_eq!(diff, t.include(&[1]));
        assert_eq!(t.beta.entry(0, 2), t.beta.entry(2, 0));
        assert_eq!(t.beta.entry(1, 2), t.beta.entry(2, 1));
    }

    #[test]
    fn triple_with_trivial_b() {
        let a = AbelianGroup::new(vec![2, 2]).unwrap();
        let t = universal_triple(&BilinearMatrix::zero(&a, &AbelianGroup::trivial())).unwrap();
        // β_11, β_22, β_12 = β_21.
        assert_eq!(t.c_group.factors(), &[2, 2, 2]);
    }

    #[test]
    fn non_alternating_input_rejected() {
        let beta = BilinearMatrix::new(&z(3), &z(3), vec![vec![vec![1]]]).unwrap();
        assert!(matches!(universal_triple(&beta), Err(Error::NotAlternating(_))));
    }

    #[test]
    fn universal_property_factorizations() {
        let t = universal_triple(&heisenberg_alpha(3, 2)).unwrap();
        let psi = verify_universal_property(&t, &t.c_group, &t.beta, &t.i_b).unwrap();
        assert_eq!(psi, IntMatrix::identity(t.c_group.rank()));

        let s = section(&t).unwrap();
        let b = t.group_b();
        assert_eq!(t.c_group.apply_hom(&s, &t.include(&[1]), b), vec![1]);

        let trivial = AbelianGroup::trivial();
        let zero = BilinearMatrix::zero(t.group_a(), &trivial);
        let psi0 = verify_universal_property(&t, &trivial, &zero, &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(psi0.rows(), 0);

        let zero_b = BilinearMatrix::zero(t.group_a(), b);
        assert!(matches!(
            verify_universal_property(&t, b, &zero_b, &IntMatrix::identity(1)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn section_formula_has_the_right_sign() {
        let alpha = heisenberg_alpha(5, 3);
        let s = section_bilinear(&alpha);
        let a = alpha.group_a();
        let b = alpha.group_b();
        for x in a.elements() {
            for y in a.elements() {
                let d = b.sub_coords(&s.eval(x.coords(), y.coords()), &s.eval(y.coords(), x.coords()));
                assert_eq!(d, alpha.eval(x.coords(), y.coords()));
            }
        }
    }

    #[test]
    fn divisible_targets() {
        let t = divisible_target(&z(3));
        assert_eq!(t.rank, 1);
        assert_eq!(t.j, vec![QZVector(vec![q(1, 3)])]);
        assert_eq!(divisible_target(&AbelianGroup::trivial()).rank, 0);
        let t = divisible_target(&AbelianGroup::new(vec![2, 4]).unwrap());
        assert_eq!(t.j[0], QZVector(vec![q(1, 2), QZ::zero()]));
        assert_eq!(t.j[1], QZVector(vec![QZ::zero(), q(1, 4)]));
        for v in AbelianGroup::new(vec![2, 4]).unwrap().elements() {
            assert_eq!(t.apply(v.coords()).is_zero(), v.is_zero());
        }
    }

    #[test]
    fn factor_maps() {
        let t = universal_triple(&heisenberg_alpha(3, 3)).unwrap();
        let target = divisible_target(&z(3));
        let chi = factor_map(&t, &target).unwrap();
        let bt = beta_tilde(&t, &chi, 1);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if (i, j) == (0, 1) { q(1, 3) } else { QZ::zero() };
                assert_eq!(bt[i][j], QZVector(vec![expected]), "({i}, {j})");
            }
        }
        let chi2 = factor_map_by_congruences(&t, &target).unwrap();
        let bt2 = beta_tilde(&t, &chi2, 1);
        let diff01 = bt2[0][1].sub(&bt2[1][0]);
        assert_eq!(diff01, QZVector(vec![q(1, 3)]));
        let a = t.group_a();
        let c1 = LCocycle::from_bilinear(a, &bt, 1).unwrap();
        let c2 = LCocycle::from_bilinear(a, &bt2, 1).unwrap();
        assert!(c1.cohomologous(&c2).unwrap().is_some());
    }

    #[test]
    fn case_one_code_path_on_infinite_cyclic() {
        // g of infinite order with H = 0: no positive power of g lies in H.
        let beta_gg = QZVector(vec![q(1, 5)]);
        let cyc = CyclicExtension::new(None, &beta_gg);
        assert!(cyc.fg.is_zero());
        for a in -12i64..12 {
            for b in -12i64..12 {
                let lhs = cyc.value(a + b);
                let cross = beta_gg.scale(&BigInt::from(a * b));
                assert_eq!(lhs, cyc.value(a).add(&cyc.value(b)).add(&cross));
            }
        }
    }

    #[test]
    fn case_two_root_choice() {
        let cyc = CyclicExtension::new(Some((3, &QZVector(vec![q(1, 3)]))), &QZVector::zero(1));
        assert_eq!(cyc.fg, QZVector(vec![q(1, 9)]));
        let cyc = CyclicExtension::new(Some((3, &QZVector::zero(1))), &QZVector::zero(1));
        assert!(cyc.fg.is_zero());
    }

    #[test]
    fn carry_extension_embeds_with_root_one_ninth() {
        let g = ExtensionGroup::build(&carry_cocycle(3, 3).unwrap()).unwrap();
        let r = embed(&g).unwrap();
        assert!(r.report.passed());
        assert_eq!(r.phi(&g.ell(&[1])), (vec![1], QZVector(vec![q(1, 9)])));
        assert!(r.beta_tilde.iter().flatten().all(QZVector::is_zero));
        assert!(r.target_is_abelian());
        assert_eq!(r.image_f.factors(), &[9]);
    }

    #[test]
    fn direct_sum_embeds_through_j() {
        let a = AbelianGroup::new(vec![2, 2]).unwrap();
        let g = ExtensionGroup::build(&Cocycle::zero(&a, &z(4)).unwrap()).unwrap();
        let r = embed(&g).unwrap();
        for e in g.elements() {
            assert_eq!(*r.f_of(&e), r.target.apply(&e.b));
        }
        assert!(r.beta_tilde.iter().flatten().all(QZVector::is_zero));
    }

    #[test]
    fn incompatible_seed_is_reported() {
        let a = AbelianGroup::new(vec![3, 3]).unwrap();
        let g = ExtensionGroup::build(&heisenberg_alpha(3, 2).to_cocycle().unwrap()).unwrap();
        let target = divisible_target(&z(3));
        let zero = vec![vec![QZVector::zero(1); 2]; 2];
        assert_eq!(a.rank(), 2);
        assert!(matches!(
            extend_f(&g, &zero, &target),
            Err(Error::CommutatorIncompatible(0, 1))
        ));
    }
}
