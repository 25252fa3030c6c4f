//! Runtime property suite, run by the `check` command.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{ext_space, AbelianGroup};
use crate::cocycle::{bilinear_basis, coboundary, CochainMap, Cocycle};
use crate::cohomology::{kernel_jstar_equals_ext, z2_b2_h2, H2Description};
use crate::embedding::{divisible_target, embed};
use crate::error::Result;
use crate::examples::{carry_extension, heisenberg_carry_cocycle};
use crate::matrix::{satisfies_congruences, smith_form, solve_congruences, IntMatrix, SnfTracking};
use crate::twisted::{ExtElement, ExtensionGroup};

#[derive(Clone, Debug, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    pub failure: Option<String>,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub outcomes: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub random_matrices: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            random_matrices: 1000,
            seed: 20240601,
        }
    }
}

/// Counts cases and remembers the first failure.
#[derive(Default)]
struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

fn timed(name: &str, f: impl FnOnce(&mut Tally) -> Result<()>) -> PropertyOutcome {
    let start = Instant::now();
    let mut t = Tally::default();
    if let Err(e) = f(&mut t) {
        t.failure.get_or_insert(e.to_string());
    }
    PropertyOutcome {
        name: name.to_string(),
        cases: t.cases,
        passed: t.failure.is_none(),
        failure: t.failure,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let outcomes = vec![
        timed("smith normal form", |t| snf_invariants(t, config)),
        timed("congruence solver", |t| congruence_invariants(t, config)),
        timed("extension group axioms", group_axioms),
        timed("schreier isomorphisms", |t| schreier_isomorphisms(t, config)),
        timed("embedding invariants", embedding_invariants),
        timed("kernel of j* is Ext", kernel_is_ext),
        timed("order of H2", h2_order_formula),
        timed("projector additivity", |t| projector_additivity(t, config)),
        timed("Ext and bilinear subgroups", subgroup_invariants),
        timed("coboundary denominator bound", denominator_bound),
    ];
    SuiteReport { outcomes }
}

/// All abelian groups of order at most `n`, as invariant-factor chains.
pub fn abelian_groups_up_to(n: u64) -> Vec<AbelianGroup> {
    fn chains(first_divides: u64, budget: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(acc.clone());
        let mut d = if acc.is_empty() { 2 } else { *acc.last().unwrap() };
        while d <= budget {
            if d % first_divides == 0 {
                acc.push(d);
                chains(d, budget / d, acc, out);
                acc.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    chains(1, n, &mut Vec::new(), &mut out);
    let mut groups: Vec<AbelianGroup> = out.into_iter().map(|f| AbelianGroup::new(f).unwrap()).collect();
    groups.sort_by_key(|g| (g.order(), g.factors().to_vec()));
    groups
}

/// The groups used for exhaustive checks at desk scale.
pub fn desk_groups() -> Vec<AbelianGroup> {
    vec![
        AbelianGroup::cyclic(2),
        AbelianGroup::cyclic(3),
        AbelianGroup::cyclic(4),
        AbelianGroup::new(vec![2, 2]).unwrap(),
    ]
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&data)
}

fn snf_invariants(t: &mut Tally, config: &SuiteConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for case in 0..config.random_matrices {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = random_matrix(&mut rng, r, c, 12);
        let f = smith_form(&m, SnfTracking::ALL);
        let (u, v) = (f.u.as_ref().unwrap(), f.v.as_ref().unwrap());
        let diag = f.diagonal();
        let mut ok = u.mul(&m).mul(v) == f.d
            && u.mul(f.u_inv.as_ref().unwrap()) == IntMatrix::identity(r)
            && v.mul(f.v_inv.as_ref().unwrap()) == IntMatrix::identity(c)
            && u.determinant().abs().is_one()
            && v.determinant().abs().is_one()
            && diag.iter().all(|d| !d.is_negative())
            && diag.windows(2).all(|w| w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        for i in 0..r {
            for j in 0..c {
                ok &= i == j || f.d[(i, j)].is_zero();
            }
        }
        t.check(ok, || format!("case {case}: {m:?}"));
    }
    Ok(())
}

fn congruence_invariants(t: &mut Tally, config: &SuiteConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9e37);
    for case in 0..config.random_matrices {
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let m = random_matrix(&mut rng, r, c, 6);
        let moduli: Vec<BigInt> = (0..r).map(|_| BigInt::from([2, 3, 4, 6][rng.gen_range(0..4)])).collect();
        let b: Vec<BigInt> = if case % 2 == 0 {
            let x0: Vec<BigInt> = (0..c).map(|_| BigInt::from(rng.gen_range(0..12))).collect();
            m.mul_vec(&x0)
        } else {
            moduli.iter().map(|q| BigInt::from(rng.gen_range(0..12)).mod_floor(q)).collect()
        };
        let found = solve_congruences(&m, &moduli, &b);
        let l = moduli.iter().fold(BigInt::one(), |acc, q| acc.lcm(q));
        let brute = brute_force_solvable(&m, &moduli, &b, &l);
        let ok = match &found {
            Some(x) => satisfies_congruences(&m, &moduli, x, &b) && x.iter().all(|v| !v.is_negative() && *v < l),
            None => !brute,
        } && (found.is_some() || case % 2 == 1);
        t.check(ok, || format!("case {case}: M = {m:?}, moduli = {moduli:?}, b = {b:?}"));
    }
    Ok(())
}

fn brute_force_solvable(m: &IntMatrix, moduli: &[BigInt], b: &[BigInt], l: &BigInt) -> bool {
    let n = m.cols();
    let l: u64 = l.try_into().unwrap();
    let total = l.pow(n as u32);
    (0..total).any(|mut code| {
        let x: Vec<BigInt> = (0..n)
            .map(|_| {
                let v = code % l;
                code /= l;
                BigInt::from(v)
            })
            .collect();
        satisfies_congruences(m, moduli, &x, b)
    })
}

fn group_axioms(t: &mut Tally) -> Result<()> {
    let mut cocycles = vec![carry_extension(3)?, heisenberg_carry_cocycle(2)?];
    for a in desk_groups() {
        for b in desk_groups() {
            let h2 = z2_b2_h2(&a, &b)?;
            cocycles.extend(h2.representatives().iter().cloned());
        }
    }
    for gamma in &cocycles {
        let g = ExtensionGroup::build(gamma)?;
        let elems: Vec<_> = g.elements().collect();
        let e = g.identity();
        let mut ok = true;
        for x in &elems {
            ok &= g.mul(x, &e) == *x && g.mul(&e, x) == *x && g.mul(x, &g.inv(x)) == e;
            for y in &elems {
                let xy = g.mul(x, y);
                ok &= g.commutator(x, y) == g.commutator_direct(x, y);
                ok &= elems.iter().all(|z| g.mul(&xy, z) == g.mul(x, &g.mul(y, z)));
            }
        }
        t.check(ok, || format!("group axioms fail for {:?}", gamma.group_a()));
    }
    Ok(())
}

fn random_cochain(rng: &mut ChaCha8Rng, a: &AbelianGroup, b: &AbelianGroup) -> Result<CochainMap> {
    CochainMap::from_fn(a, b, |x| {
        if x.iter().all(|&c| c == 0) {
            vec![0; b.rank()]
        } else {
            b.factors().iter().map(|&e| rng.gen_range(0..e as i64)).collect()
        }
    })
}

/// A cocycle mixing a random bilinear map with carry cocycles of the cyclic
/// factors of `A` pushed into `B`. Every class of `H²(A, B)` arises this way.
fn random_mixed_cocycle(rng: &mut ChaCha8Rng, a: &AbelianGroup, b: &AbelianGroup) -> Result<Cocycle> {
    let (group, basis) = bilinear_basis(a, b);
    let mut gamma = Cocycle::zero(a, b)?;
    for (m, &d) in basis.iter().zip(group.factors()) {
        gamma = gamma.add(&m.to_cocycle()?.scale(rng.gen_range(0..d as i64)))?;
    }
    let shifts: Vec<Vec<i64>> = a
        .factors()
        .iter()
        .map(|_| b.factors().iter().map(|&e| rng.gen_range(0..e as i64)).collect())
        .collect();
    let carries = Cocycle::from_fn(a, b, |x, y| {
        let mut v = vec![0i64; b.rank()];
        for (i, &d) in a.factors().iter().enumerate() {
            let carry = ((x[i] + y[i]) / d) as i64;
            for (t, c) in v.iter_mut().enumerate() {
                *c += carry * shifts[i][t];
            }
        }
        v
    })?;
    gamma.add(&carries)
}

/// For `γ′ = γ − ∂h` the map `(a, b) ↦ (a, b + h(a))` is an isomorphism
/// `G_γ → G_γ′`, checked on all pairs.
fn schreier_isomorphisms(t: &mut Tally, config: &SuiteConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5c4e);
    let coefficients = [
        AbelianGroup::cyclic(2),
        AbelianGroup::cyclic(3),
        AbelianGroup::new(vec![2, 2]).unwrap(),
        AbelianGroup::cyclic(8),
        AbelianGroup::new(vec![2, 4]).unwrap(),
    ];
    for a in abelian_groups_up_to(16).into_iter().filter(|a| a.order() > 1) {
        for b in coefficients.iter().filter(|b| a.order() * b.order() <= 256) {
            let gamma = random_mixed_cocycle(&mut rng, &a, b)?;
            let h = random_cochain(&mut rng, &a, b)?;
            let shifted = gamma.sub(&coboundary(&h)?)?;
            let g = ExtensionGroup::build(&gamma)?;
            let g2 = ExtensionGroup::build(&shifted)?;
            let phi = |x: &ExtElement| ExtElement {
                a: x.a.clone(),
                b: b.add_coords(&x.b, h.value_at(a.index_of(&x.a))),
            };
            let elems: Vec<_> = g.elements().collect();
            let images: HashSet<_> = elems.iter().map(|x| g2.index_of(&phi(x))).collect();
            let mut ok = images.len() == elems.len();
            for x in &elems {
                for y in &elems {
                    ok &= phi(&g.mul(x, y)) == g2.mul(&phi(x), &phi(y));
                }
            }
            ok &= match gamma.cohomologous(&shifted)? {
                Some(w) => coboundary(&w)? == gamma.sub(&shifted)?,
                None => false,
            };
            if a.order() <= 8 {
                let h2 = z2_b2_h2(&a, b)?;
                ok &= h2.project(&shifted)? == h2.project(&gamma)?;
            }
            t.check(ok, || format!("A = {:?}, B = {:?}", a.factors(), b.factors()));
        }
    }
    Ok(())
}

fn embedding_invariants(t: &mut Tally) -> Result<()> {
    let mut runs = vec![carry_extension(3)?, carry_extension(5)?, heisenberg_carry_cocycle(3)?];
    for a in desk_groups() {
        for b in desk_groups() {
            let h2 = z2_b2_h2(&a, &b)?;
            runs.extend(h2.classes().map(|c| h2.class_cocycle(&c)).collect::<Result<Vec<_>>>()?);
        }
    }
    for gamma in &runs {
        let g = ExtensionGroup::build(gamma)?;
        let r = embed(&g)?;
        let target = divisible_target(gamma.group_b());
        t.check(r.report.passed() && r.target == target, || {
            format!("A = {:?}, B = {:?}: {:?}", gamma.group_a().factors(), gamma.group_b().factors(), r.report)
        });
    }
    Ok(())
}

fn kernel_is_ext(t: &mut Tally) -> Result<()> {
    for a in desk_groups() {
        for b in desk_groups() {
            let r = kernel_jstar_equals_ext(&a, &b)?;
            t.check(r.passed() && r.kernel_order() as u128 == r.ext_order, || {
                format!("A = {:?}, B = {:?}", a.factors(), b.factors())
            });
        }
    }
    Ok(())
}

/// `|Hom(Λ²A, B)|` from the invariant factors.
pub fn hom_exterior_square_order(a: &AbelianGroup, b: &AbelianGroup) -> u128 {
    let d = a.factors();
    let mut n = 1u128;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            for e in b.factors() {
                n *= g.gcd(e) as u128;
            }
        }
    }
    n
}

fn h2_order_formula(t: &mut Tally) -> Result<()> {
    for a in abelian_groups_up_to(9) {
        for b in abelian_groups_up_to(9) {
            let h2 = z2_b2_h2(&a, &b)?;
            let expected = ext_space(&a, &b).order() * hom_exterior_square_order(&a, &b);
            t.check(h2.abstract_group().order() == expected, || {
                format!("A = {:?}, B = {:?}: {} vs {expected}", a.factors(), b.factors(), h2.abstract_group().order())
            });
        }
    }
    Ok(())
}

fn random_class(rng: &mut ChaCha8Rng, h2: &H2Description) -> Vec<u64> {
    h2.abstract_group().factors().iter().map(|&d| rng.gen_range(0..d)).collect()
}

fn random_cocycle(rng: &mut ChaCha8Rng, h2: &H2Description) -> Result<(Cocycle, Vec<u64>)> {
    let coords = random_class(rng, h2);
    let h = random_cochain(rng, h2.group_a(), h2.group_b())?;
    Ok((h2.class_cocycle(&coords)?.add(&coboundary(&h)?)?, coords))
}

fn projector_additivity(t: &mut Tally, config: &SuiteConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xadd);
    for a in desk_groups() {
        for b in desk_groups() {
            let h2 = z2_b2_h2(&a, &b)?;
            let h2g = h2.abstract_group().clone();
            for _ in 0..8 {
                let (g1, c1) = random_cocycle(&mut rng, &h2)?;
                let (g2, c2) = random_cocycle(&mut rng, &h2)?;
                let p1 = h2.project(&g1)?;
                let p2 = h2.project(&g2)?;
                let sum = h2.project(&g1.add(&g2)?)?;
                t.check(p1 == c1 && p2 == c2 && sum == h2g.add_coords(&p1, &p2), || {
                    format!("A = {:?}, B = {:?}", a.factors(), b.factors())
                });
            }
        }
    }
    Ok(())
}

fn subgroup_invariants(t: &mut Tally) -> Result<()> {
    for a in abelian_groups_up_to(8) {
        for b in desk_groups() {
            let h2 = z2_b2_h2(&a, &b)?;
            let ext = h2.ext_subgroup()?;
            let mut zero_pairing = 0u128;
            let mut ok = true;
            for c in h2.classes() {
                let gamma = h2.class_cocycle(&c)?;
                let pairing_zero = gamma.commutator_pairing()?.is_zero();
                zero_pairing += pairing_zero as u128;
                ok &= pairing_zero == ext.contains(&c);
            }
            ok &= zero_pairing == ext.order() && ext.order() == ext_space(&a, &b).order();
            let bil = h2.bilinear_subgroup()?;
            let zero = vec![0u64; h2.abstract_group().rank()];
            ok &= bil.subgroup.contains(&zero);
            for c in h2.classes().filter(|c| bil.subgroup.contains(c)) {
                ok &= match bil.representative(&c) {
                    Some(m) => h2.project(&m.to_cocycle()?)? == c && m.to_cocycle()?.is_bilinear().is_some(),
                    None => false,
                };
            }
            t.check(ok, || format!("A = {:?}, B = {:?}", a.factors(), b.factors()));
        }
    }
    Ok(())
}

/// Exhaustive over `h: A → (1/K)Z/Z` with `h(0) = 0` and `K = q · M₀ · exp(A)`:
/// whenever every value of `∂h` lies in `(1/M₀)Z/Z`, every `h(x)` lies in
/// `(1/(M₀ · exp(A)))Z/Z`, and `ord(x) · h(x) = Σ_t ∂h(x, t·x)`.
fn denominator_bound(t: &mut Tally) -> Result<()> {
    for a in abelian_groups_up_to(8).into_iter().filter(|a| a.order() > 1) {
        for m0 in [1u64, 2, 3] {
            for q in [2u64, 3] {
                let (found, ok) = denominator_bound_case(&a, m0, q);
                t.check(ok && found > 0, || format!("A = {:?}, M0 = {m0}, q = {q}", a.factors()));
            }
        }
    }
    Ok(())
}

/// Returns the number of admissible `h` and whether all satisfy the bound.
pub fn denominator_bound_case(a: &AbelianGroup, m0: u64, q: u64) -> (usize, bool) {
    let n = a.order() as usize;
    let k = q * m0 * a.exponent();
    let elems: Vec<Vec<u64>> = a.elements().map(|x| x.into_coords()).collect();
    let add = |x: usize, y: usize| a.index_of(&a.add_coords(&elems[x], &elems[y]));
    let step = k / m0;
    let bound_step = k / (m0 * a.exponent());
    let mut h = vec![0u64; n];
    let mut found = 0usize;
    let mut ok = true;
    // ∂h(x, y) ∈ (1/M₀)Z/Z means h(x) + h(y) − h(x + y) ≡ 0 mod K/M₀.
    fn admissible(h: &[u64], upto: usize, k: u64, step: u64, add: &dyn Fn(usize, usize) -> usize) -> bool {
        for x in 1..=upto {
            for y in 1..=upto {
                let s = add(x, y);
                if s <= upto && !(h[x] + h[y] + k - h[s]).is_multiple_of(step) {
                    return false;
                }
            }
        }
        true
    }
    fn search(
        i: usize,
        h: &mut Vec<u64>,
        k: u64,
        step: u64,
        add: &dyn Fn(usize, usize) -> usize,
        visit: &mut dyn FnMut(&[u64]),
    ) {
        if i == h.len() {
            visit(h);
            return;
        }
        for v in 0..k {
            h[i] = v;
            if admissible(h, i, k, step, add) {
                search(i + 1, h, k, step, add, visit);
            }
        }
        h[i] = 0;
    }
    let orders: Vec<u64> = a.elements().map(|x| x.order()).collect();
    let mut visit = |h: &[u64]| {
        found += 1;
        ok &= h.iter().all(|&v| v % bound_step == 0);
        for x in 0..n {
            let mut sum = 0u64;
            let mut tx = 0usize;
            for _ in 0..orders[x] {
                sum = (sum + h[x] + h[tx] + k - h[add(x, tx)]) % k;
                tx = add(tx, x);
            }
            ok &= (orders[x] * h[x]) % k == sum;
        }
    };
    if n == 1 {
        return (1, true);
    }
    search(1, &mut h, k, step, &add, &mut visit);
    (found, ok)
}
