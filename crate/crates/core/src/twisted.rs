//! The extension group `G = A ×_γ B` built from a cocycle: pairs `(a, b)`
//! multiplied by `(a, b)(a′, b′) = (a + a′, b + b′ + γ(a, a′))`.
//!
//! When `γ` is bilinear this is the twisted product.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::abelian::{present, subgroup_type, AbelianGroup, Indexer};
use crate::cocycle::{all_bilinear, coboundary, BilinearMatrix, Cocycle};
use crate::error::{capacity, Error, Result};
use crate::matrix::{big, solve_mod_uniform, IntMatrix};
use crate::Limits;

/// An element `(a, b)` of an extension group, by coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    gamma: Cocycle,
    ia: Indexer,
    bilinear: Option<BilinearMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub order: u128,
    pub exponent: u64,
    /// `(element order, count)`, sorted by order.
    pub order_histogram: Vec<(u64, u64)>,
    pub center_order: u128,
    pub derived_subgroup: AbelianGroup,
    pub abelianization: AbelianGroup,
    pub is_abelian: bool,
    /// 0 for the trivial group, 1 when abelian, 2 otherwise.
    pub nilpotency_class: u8,
}

impl ExtensionGroup {
    pub fn build(gamma: &Cocycle) -> Result<Self> {
        Self::build_with(gamma, &Limits::default())
    }

    /// Validates `γ` and checks the identity, inverse and transversal laws
    /// exhaustively. Associativity of the multiplication is equivalent to the
    /// cocycle identity, which validation checks on all of `A³`.
    pub fn build_with(gamma: &Cocycle, limits: &Limits) -> Result<Self> {
        let order = gamma.group_a().order() * gamma.group_b().order();
        capacity("|G|", order, limits.max_group_order)?;
        gamma.require_valid()?;
        let g = ExtensionGroup {
            gamma: gamma.clone(),
            ia: Indexer::new(gamma.group_a()),
            bilinear: gamma.is_bilinear(),
        };
        g.check_laws()?;
        Ok(g)
    }

    fn check_laws(&self) -> Result<()> {
        let e = self.identity();
        for x in self.elements() {
            if self.mul(&x, &e) != x || self.mul(&e, &x) != x {
                return Err(Error::Inconsistent(format!("identity law fails at {x:?}")));
            }
            if self.mul(&x, &self.inv(&x)) != e || self.mul(&self.inv(&x), &x) != e {
                return Err(Error::Inconsistent(format!("inverse law fails at {x:?}")));
            }
        }
        let a = self.group_a();
        for x in 0..self.ia.len() {
            let lx = self.ell(self.ia.coords(x));
            if self.pi(&lx) != self.ia.coords(x) {
                return Err(Error::Inconsistent("π∘ℓ ≠ id".into()));
            }
            for y in 0..self.ia.len() {
                let lhs = self.mul(&lx, &self.ell(self.ia.coords(y)));
                let rhs = self.mul(
                    &self.ell(self.ia.coords(self.ia.add(x, y))),
                    &self.i(self.gamma.at(x, y)),
                );
                if lhs != rhs {
                    return Err(Error::Inconsistent(format!(
                        "transversal relation fails at ({:?}, {:?}) in {a}",
                        self.ia.coords(x),
                        self.ia.coords(y)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn gamma(&self) -> &Cocycle {
        &self.gamma
    }

    pub fn group_a(&self) -> &AbelianGroup {
        self.gamma.group_a()
    }

    pub fn group_b(&self) -> &AbelianGroup {
        self.gamma.group_b()
    }

    /// The generator matrix of `γ` when `γ` is bilinear.
    pub fn bilinear(&self) -> Option<&BilinearMatrix> {
        self.bilinear.as_ref()
    }

    pub fn order(&self) -> u128 {
        self.group_a().order() * self.group_b().order()
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement {
            a: vec![0; self.group_a().rank()],
            b: vec![0; self.group_b().rank()],
        }
    }

    pub fn element(&self, a: &[i64], b: &[i64]) -> Result<ExtElement> {
        Ok(ExtElement {
            a: self.group_a().element(a)?.into_coords(),
            b: self.group_b().element(b)?.into_coords(),
        })
    }

    pub fn contains(&self, g: &ExtElement) -> bool {
        self.group_a().contains_coords(&g.a) && self.group_b().contains_coords(&g.b)
    }

    /// Position of `g` in [`ExtensionGroup::elements`].
    pub fn index_of(&self, g: &ExtElement) -> usize {
        self.ia.index(&g.a) * self.group_b().order() as usize + self.group_b().index_of(&g.b)
    }

    /// Inverse of [`ExtensionGroup::index_of`].
    pub fn element_at(&self, i: usize) -> ExtElement {
        let nb = self.group_b().order() as usize;
        ExtElement {
            a: self.ia.coords(i / nb).to_vec(),
            b: self.group_b().coords_of(i % nb),
        }
    }

    /// All elements, `A`-part major, both parts in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = ExtElement> + '_ {
        let nb = self.group_b().order() as usize;
        (0..self.ia.len()).flat_map(move |x| {
            (0..nb).map(move |y| ExtElement {
                a: self.ia.coords(x).to_vec(),
                b: self.group_b().coords_of(y),
            })
        })
    }

    pub fn mul(&self, g: &ExtElement, h: &ExtElement) -> ExtElement {
        let (x, y) = (self.ia.index(&g.a), self.ia.index(&h.a));
        let b = self.group_b();
        ExtElement {
            a: self.ia.coords(self.ia.add(x, y)).to_vec(),
            b: b.add_coords(&b.add_coords(&g.b, &h.b), self.gamma.at(x, y)),
        }
    }

    /// `(a, b)⁻¹ = (−a, −b − γ(a, −a))`.
    pub fn inv(&self, g: &ExtElement) -> ExtElement {
        let x = self.ia.index(&g.a);
        let nx = self.ia.neg(x);
        let b = self.group_b();
        ExtElement {
            a: self.ia.coords(nx).to_vec(),
            b: b.neg_coords(&b.add_coords(&g.b, self.gamma.at(x, nx))),
        }
    }

    /// `i(b) = (0, b)`.
    pub fn i(&self, b: &[u64]) -> ExtElement {
        ExtElement {
            a: vec![0; self.group_a().rank()],
            b: b.to_vec(),
        }
    }

    /// `π(a, b) = a`.
    pub fn pi<'g>(&self, g: &'g ExtElement) -> &'g [u64] {
        &g.a
    }

    /// `ℓ(a) = (a, 0)`.
    pub fn ell(&self, a: &[u64]) -> ExtElement {
        ExtElement {
            a: a.to_vec(),
            b: vec![0; self.group_b().rank()],
        }
    }

    /// `gⁿ` for any integer `n`. Uses the closed form when `γ` is bilinear,
    /// the partial-sum form otherwise; in debug builds both are compared.
    pub fn power(&self, g: &ExtElement, n: i64) -> ExtElement {
        let m = self.reduce_exponent(g, n);
        let p = self.power_partial_sum(g, m);
        if let Some(closed) = self.power_closed_form(g, m) {
            debug_assert_eq!(closed, p);
            return closed;
        }
        p
    }

    /// A nonnegative exponent congruent to `n` modulo a multiple of the order of `g`.
    fn reduce_exponent(&self, g: &ExtElement, n: i64) -> u64 {
        let period = self.group_a().element_from_reduced(g.a.clone()).order() * self.group_b().exponent();
        n.rem_euclid(period as i64) as u64
    }

    /// `(a, b)ⁿ = (na, nb + Σ_{t=1}^{n−1} γ(ta, a))` for `n ≥ 0`.
    pub fn power_partial_sum(&self, g: &ExtElement, n: u64) -> ExtElement {
        let b = self.group_b();
        let x = self.ia.index(&g.a);
        let mut acc = b.scale_coords(&g.b, &big(n));
        let mut t = x;
        for _ in 1..n {
            acc = b.add_coords(&acc, self.gamma.at(t, x));
            t = self.ia.add(t, x);
        }
        ExtElement {
            a: self.ia.coords(self.ia.scale(x, n)).to_vec(),
            b: acc,
        }
    }

    /// `(a, b)ⁿ = (na, nb + C(n, 2) γ(a, a))`, valid only for bilinear `γ`.
    pub fn power_closed_form(&self, g: &ExtElement, n: u64) -> Option<ExtElement> {
        self.bilinear.as_ref()?;
        let b = self.group_b();
        let x = self.ia.index(&g.a);
        let binom = big(n) * big(n.saturating_sub(1)) / 2;
        Some(ExtElement {
            a: self.ia.coords(self.ia.scale(x, n)).to_vec(),
            b: b.add_coords(&b.scale_coords(&g.b, &big(n)), &b.scale_coords(self.gamma.at(x, x), &binom)),
        })
    }

    /// `[g, h] = g⁻¹h⁻¹gh = (0, γ(a, a′) − γ(a′, a))`.
    pub fn commutator(&self, g: &ExtElement, h: &ExtElement) -> ExtElement {
        let (x, y) = (self.ia.index(&g.a), self.ia.index(&h.a));
        let c = self.i(&self.group_b().sub_coords(self.gamma.at(x, y), self.gamma.at(y, x)));
        debug_assert_eq!(c, self.commutator_direct(g, h));
        c
    }

    /// `g⁻¹h⁻¹gh` by multiplication.
    pub fn commutator_direct(&self, g: &ExtElement, h: &ExtElement) -> ExtElement {
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    pub fn element_order(&self, g: &ExtElement) -> u64 {
        let oa = self.group_a().element_from_reduced(g.a.clone()).order();
        let p = self.power_partial_sum(g, oa);
        oa * self.group_b().element_from_reduced(p.b).order()
    }

    pub fn is_abelian(&self) -> bool {
        self.gamma.is_symmetric()
    }

    pub fn structure_report(&self) -> Result<StructureReport> {
        let a = self.group_a();
        let b = self.group_b();
        let alpha = self.gamma.commutator_pairing()?;

        let mut hist = BTreeMap::new();
        let mut exponent = 1u64;
        for g in self.elements() {
            let o = self.element_order(&g);
            exponent = exponent.lcm(&o);
            *hist.entry(o).or_insert(0u64) += 1;
        }

        let k = a.rank();
        let radical = a
            .elements()
            .filter(|x| (0..k).all(|i| alpha.eval(x.coords(), a.generator(i).coords()).iter().all(|&c| c == 0)))
            .count() as u128;

        let mut commutators = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                commutators.push(alpha.entry(i, j).to_vec());
            }
        }
        let derived = subgroup_type(&commutators, b.factors());

        // Generators ℓ(g_1), …, ℓ(g_k), then i(f_1), …, i(f_m).
        let m = b.rank();
        let mut rels: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..k {
            let gi = self.ell(a.generator(i).coords());
            let carry = self.power_partial_sum(&gi, a.factors()[i]).b;
            let mut r = vec![BigInt::from(0); k + m];
            r[i] = big(a.factors()[i]);
            for t in 0..m {
                r[k + t] = -big(carry[t]);
            }
            rels.push(r);
        }
        for t in 0..m {
            let mut r = vec![BigInt::from(0); k + m];
            r[k + t] = big(b.factors()[t]);
            rels.push(r);
        }
        for c in &commutators {
            let mut r = vec![BigInt::from(0); k + m];
            for t in 0..m {
                r[k + t] = big(c[t]);
            }
            rels.push(r);
        }
        let mut rel = IntMatrix::zeros(k + m, rels.len());
        for (col, r) in rels.iter().enumerate() {
            for (row, v) in r.iter().enumerate() {
                rel[(row, col)] = v.clone();
            }
        }
        let abelianization = present(k + m, &rel)?.group;

        let is_abelian = alpha.is_zero();
        let order = self.order();
        Ok(StructureReport {
            order,
            exponent,
            order_histogram: hist.into_iter().collect(),
            center_order: radical * b.order(),
            derived_subgroup: derived,
            abelianization,
            is_abelian,
            nilpotency_class: if order == 1 { 0 } else if is_abelian { 1 } else { 2 },
        })
    }

    /// A bilinear cocycle cohomologous to `γ`, or `None` when the class of
    /// `γ` has no bilinear representative.
    ///
    /// Two independent routes run and must agree: enumeration of every
    /// bilinear map with the right commutator pairing, with a coboundary test
    /// against each, and a single
    /// congruence system in the unknowns `β(g_i, g_j)` and `h(x)`.
    pub fn is_twisted_product_class(&self) -> Result<Option<BilinearMatrix>> {
        self.is_twisted_product_class_with(&Limits::default())
    }

    pub fn is_twisted_product_class_with(&self, limits: &Limits) -> Result<Option<BilinearMatrix>> {
        capacity(
            "|A| for a coboundary search",
            self.group_a().order(),
            limits.max_cohomologous_order,
        )?;
        let by_search = self.bilinear_by_enumeration(limits.max_bilinear_candidates)?;
        let by_system = self.bilinear_by_congruences()?;
        match (&by_search, &by_system) {
            (Some(_), Some(_)) | (None, None) => Ok(by_search),
            _ => Err(Error::Inconsistent(format!(
                "bilinear representative: enumeration found {}, congruence system found {}",
                by_search.is_some(),
                by_system.is_some()
            ))),
        }
    }

    fn bilinear_by_enumeration(&self, limit: u128) -> Result<Option<BilinearMatrix>> {
        if let Some(beta) = &self.bilinear {
            return Ok(Some(beta.clone()));
        }
        // β − βᵀ is the commutator pairing of the class, so other candidates cannot match.
        let alpha = self.gamma.commutator_pairing()?;
        for beta in all_bilinear(self.group_a(), self.group_b(), limit)? {
            if beta.sub(&beta.transpose())? != alpha {
                continue;
            }
            let c = beta.to_cocycle()?;
            if let Some(h) = self.gamma.cohomologous_unchecked(&c)? {
                debug_assert_eq!(coboundary(&h)?, self.gamma.sub(&c)?);
                return Ok(Some(beta));
            }
        }
        Ok(None)
    }

    /// Solves `γ(x, g) = β(x, g) + h(x) + h(g) − h(x + g)` over all `x` and
    /// standard generators `g`, one cyclic factor of `B` at a time, with
    /// `β(g_i, g_j)` constrained by `d_i β_ij = d_j β_ij = 0`.
    fn bilinear_by_congruences(&self) -> Result<Option<BilinearMatrix>> {
        let a = self.group_a();
        let b = self.group_b();
        let n = self.ia.len();
        let k = a.rank();
        let gens: Vec<usize> = (0..k).map(|i| a.generator(i).index()).collect();
        let mut entries = vec![vec![vec![0u64; b.rank()]; k]; k];
        for (c, &e) in b.factors().iter().enumerate() {
            let unknowns = k * k + n.saturating_sub(1);
            let h = |x: usize| k * k + x - 1;
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for x in 0..n {
                for (j, &g) in gens.iter().enumerate() {
                    let mut row = vec![0u64; unknowns];
                    let xc = self.ia.coords(x);
                    for i in 0..k {
                        row[i * k + j] = xc[i] % e;
                    }
                    let xg = self.ia.add(x, g);
                    for (t, s) in [(x, 1), (g, 1), (xg, e - 1)] {
                        if t != 0 {
                            row[h(t)] = (row[h(t)] + s) % e;
                        }
                    }
                    rows.push(row);
                    rhs.push(self.gamma.at(x, g)[c]);
                }
            }
            for i in 0..k {
                for j in 0..k {
                    for d in [a.factors()[i], a.factors()[j]] {
                        let mut row = vec![0u64; unknowns];
                        row[i * k + j] = d % e;
                        rows.push(row);
                        rhs.push(0);
                    }
                }
            }
            let Some(sol) = solve_mod_uniform(rows, rhs, unknowns, e) else {
                return Ok(None);
            };
            for i in 0..k {
                for j in 0..k {
                    entries[i][j][c] = sol[i * k + j];
                }
            }
        }
        let beta = BilinearMatrix::new(a, b, entries)?;
        if self.gamma.cohomologous(&beta.to_cocycle()?)?.is_none() {
            return Err(Error::Inconsistent("congruence solution is not a coboundary shift".into()));
        }
        Ok(Some(beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::carry_cocycle;

    fn z(n: u64) -> AbelianGroup {
        AbelianGroup::cyclic(n)
    }

    fn assoc_exhaustive(g: &ExtensionGroup) -> bool {
        let els: Vec<_> = g.elements().collect();
        els.iter().all(|x| {
            els.iter().all(|y| {
                let xy = g.mul(x, y);
                els.iter().all(|w| g.mul(&xy, w) == g.mul(x, &g.mul(y, w)))
            })
        })
    }

    #[test]
    fn zero_cocycle_gives_direct_sum() {
        let g = ExtensionGroup::build(&Cocycle::zero(&z(3), &z(3)).unwrap()).unwrap();
        assert!(assoc_exhaustive(&g));
        let r = g.structure_report().unwrap();
        assert_eq!(r.order, 9);
        assert_eq!(r.exponent, 3);
        assert!(r.is_abelian);
        assert_eq!(r.abelianization.factors(), &[3, 3]);
    }

    #[test]
    fn carry_extension_is_cyclic_of_order_nine() {
        let g = ExtensionGroup::build(&carry_cocycle(3, 3).unwrap()).unwrap();
        assert!(assoc_exhaustive(&g));
        let x = g.ell(&[1]);
        assert_eq!(g.power(&x, 3), g.i(&[1]));
        assert_eq!(g.element_order(&x), 9);
        let r = g.structure_report().unwrap();
        assert_eq!(r.exponent, 9);
        assert!(r.is_abelian);
        assert_eq!(r.abelianization.factors(), &[9]);
        assert_eq!(r.center_order, 9);
        assert_eq!(r.nilpotency_class, 1);
    }

    #[test]
    fn bilinear_square_twist_has_exponent_three() {
        let beta = BilinearMatrix::new(&z(3), &z(3), vec![vec![vec![1]]]).unwrap();
        let g = ExtensionGroup::build(&beta.to_cocycle().unwrap()).unwrap();
        for e in g.elements() {
            assert_eq!(g.power(&e, 3), g.identity());
            assert_eq!(g.power_partial_sum(&e, 3), g.power_closed_form(&e, 3).unwrap());
            if e != g.identity() {
                assert_eq!(g.element_order(&e), 3);
            }
        }
    }

    #[test]
    fn powers_match_repeated_multiplication() {
        let g = ExtensionGroup::build(&carry_cocycle(4, 2).unwrap()).unwrap();
        for e in g.elements() {
            let mut acc = g.identity();
            for n in 0..10 {
                assert_eq!(g.power(&e, n), acc);
                acc = g.mul(&acc, &e);
            }
            assert_eq!(g.mul(&g.power(&e, -1), &e), g.identity());
        }
        assert_eq!(g.power(&g.ell(&[1]), 0), g.identity());
    }

    #[test]
    fn commutators_of_heisenberg_twist() {
        let a = AbelianGroup::new(vec![3, 3]).unwrap();
        let mut e = vec![vec![vec![0u64]; 2]; 2];
        e[0][1] = vec![1];
        let beta = BilinearMatrix::new(&a, &z(3), e).unwrap();
        let g = ExtensionGroup::build(&beta.to_cocycle().unwrap()).unwrap();
        let (g1, g2) = (g.ell(&[1, 0]), g.ell(&[0, 1]));
        assert_eq!(g.commutator(&g1, &g2), g.i(&[1]));
        for x in g.elements() {
            assert_eq!(g.commutator(&x, &x), g.identity());
        }
        let r = g.structure_report().unwrap();
        assert_eq!(r.order, 27);
        assert_eq!(r.nilpotency_class, 2);
        assert_eq!(r.derived_subgroup.factors(), &[3]);
        assert_eq!(r.center_order, 3);
        assert_eq!(r.abelianization.factors(), &[3, 3]);
        assert_eq!(g.is_twisted_product_class().unwrap(), Some(beta));
    }

    #[test]
    fn carry_class_has_no_bilinear_representative() {
        let g = ExtensionGroup::build(&carry_cocycle(3, 3).unwrap()).unwrap();
        assert_eq!(g.is_twisted_product_class().unwrap(), None);
    }

    #[test]
    fn coboundary_shift_of_bilinear_is_detected() {
        let a = AbelianGroup::new(vec![2, 4]).unwrap();
        let mut e = vec![vec![vec![0u64]; 2]; 2];
        e[0][1] = vec![1];
        let beta = BilinearMatrix::new(&a, &z(2), e).unwrap();
        let h = crate::cocycle::CochainMap::from_fn(&a, &z(2), |x| vec![(x[1] == 1) as i64]).unwrap();
        let shifted = beta.to_cocycle().unwrap().add(&coboundary(&h).unwrap()).unwrap();
        assert!(shifted.is_bilinear().is_none());
        let g = ExtensionGroup::build(&shifted).unwrap();
        let rep = g.is_twisted_product_class().unwrap().expect("class is bilinear");
        assert!(shifted.cohomologous(&rep.to_cocycle().unwrap()).unwrap().is_some());
    }

    #[test]
    fn capacity_and_invalid_input() {
        let bad = Cocycle::from_fn(&z(3), &z(3), |x, y| vec![(x[0] == 1 && y[0] == 1) as i64]).unwrap();
        assert!(matches!(ExtensionGroup::build(&bad), Err(Error::InvalidInput(_))));
        let small = Limits {
            max_group_order: 8,
            ..Limits::default()
        };
        assert!(matches!(
            ExtensionGroup::build_with(&carry_cocycle(3, 3).unwrap(), &small),
            Err(Error::Capacity { .. })
        ));
    }
}
