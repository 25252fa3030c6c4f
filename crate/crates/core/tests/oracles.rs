//! Brute-force oracles for the linear-algebra computations.

use std::collections::HashSet;

use centext::abelian::{exterior_square, AbelianGroup, GroupElement};
use centext::cocycle::{all_bilinear, coboundary, CochainMap};
use centext::cohomology::z2_b2_h2;
use centext::properties::{abelian_groups_up_to, denominator_bound_case};
use centext::Cocycle;

fn elements(a: &AbelianGroup) -> Vec<Vec<u64>> {
    a.elements().map(GroupElement::into_coords).collect()
}

/// Every normalized table `A × A → B`, by mixed-radix counting over the
/// `(n − 1)²` free entries.
fn all_normalized(a: &AbelianGroup, b: &AbelianGroup) -> Vec<Vec<Vec<Vec<u64>>>> {
    let n = a.order() as usize;
    let bs = elements(b);
    let free = (n - 1) * (n - 1);
    let total = bs.len().pow(free as u32);
    (0..total)
        .map(|mut code| {
            let mut table = vec![vec![vec![0u64; b.rank()]; n]; n];
            for row in table.iter_mut().skip(1) {
                for cell in row.iter_mut().skip(1) {
                    *cell = bs[code % bs.len()].clone();
                    code /= bs.len();
                }
            }
            table
        })
        .collect()
}

fn is_cocycle(a: &AbelianGroup, b: &AbelianGroup, t: &[Vec<Vec<u64>>]) -> bool {
    let es = elements(a);
    let idx = |x: &[u64]| a.index_of(x);
    es.iter().all(|x| {
        es.iter().all(|y| {
            let xy = idx(&a.add_coords(x, y));
            es.iter().all(|z| {
                let yz = idx(&a.add_coords(y, z));
                let (x, y, z) = (idx(x), idx(y), idx(z));
                b.add_coords(&t[x][y], &t[xy][z]) == b.add_coords(&t[y][z], &t[x][yz])
            })
        })
    })
}

fn all_cochains(a: &AbelianGroup, b: &AbelianGroup) -> Vec<CochainMap> {
    let n = a.order() as usize;
    let bs = elements(b);
    let total = bs.len().pow(n as u32 - 1);
    (0..total)
        .map(|mut code| {
            let mut values = vec![vec![0i64; b.rank()]; n];
            for v in values.iter_mut().skip(1) {
                *v = bs[code % bs.len()].iter().map(|&c| c as i64).collect();
                code /= bs.len();
            }
            CochainMap::from_fn(a, b, |x| values[a.index_of(x)].clone()).unwrap()
        })
        .collect()
}

fn tiny_pairs() -> Vec<(AbelianGroup, AbelianGroup)> {
    let g = |f: &[u64]| AbelianGroup::new(f.to_vec()).unwrap();
    vec![
        (g(&[2]), g(&[2])),
        (g(&[2]), g(&[3])),
        (g(&[2]), g(&[4])),
        (g(&[2]), g(&[2, 2])),
        (g(&[3]), g(&[2])),
        (g(&[3]), g(&[3])),
        (g(&[3]), g(&[4])),
        (g(&[4]), g(&[2])),
        (g(&[2, 2]), g(&[2])),
    ]
}

#[test]
fn h2_matches_enumeration() {
    for (a, b) in tiny_pairs() {
        let z2: Vec<_> = all_normalized(&a, &b).into_iter().filter(|t| is_cocycle(&a, &b, t)).collect();
        let b2: HashSet<Vec<Vec<Vec<u64>>>> = all_cochains(&a, &b)
            .iter()
            .map(|h| coboundary(h).unwrap().to_table())
            .collect();
        let h2 = z2_b2_h2(&a, &b).unwrap();
        assert_eq!(h2.z2_order(), z2.len() as u128, "Z² for {a:?}, {b:?}");
        assert_eq!(h2.b2_order(), b2.len() as u128, "B² for {a:?}, {b:?}");
        assert_eq!(h2.abstract_group().order(), (z2.len() / b2.len()) as u128);
    }
}

#[test]
fn cohomologous_matches_enumeration() {
    for (a, b) in tiny_pairs() {
        let z2: Vec<Cocycle> = all_normalized(&a, &b)
            .into_iter()
            .filter(|t| is_cocycle(&a, &b, t))
            .map(|t| Cocycle::from_table(&a, &b, &t).unwrap())
            .collect();
        let b2: HashSet<Vec<Vec<Vec<u64>>>> = all_cochains(&a, &b)
            .iter()
            .map(|h| coboundary(h).unwrap().to_table())
            .collect();
        for x in z2.iter().take(12) {
            for y in &z2 {
                let brute = b2.contains(&x.sub(y).unwrap().to_table());
                let found = x.cohomologous(y).unwrap();
                assert_eq!(found.is_some(), brute);
                if let Some(h) = found {
                    assert_eq!(coboundary(&h).unwrap(), x.sub(y).unwrap());
                }
            }
        }
    }
}

#[test]
fn alternating_maps_match_exterior_square() {
    for a in abelian_groups_up_to(9) {
        for b in abelian_groups_up_to(9) {
            let Ok(all) = all_bilinear(&a, &b, 20_000) else {
                continue;
            };
            let alternating = all.iter().filter(|m| m.is_alternating()).count() as u128;
            let lambda = exterior_square(&a);
            let d = a.factors();
            let expected: u128 = (0..d.len())
                .flat_map(|i| (i + 1..d.len()).map(move |j| (i, j)))
                .map(|(i, j)| num_integer::gcd(d[i], d[j]) as u128)
                .product();
            assert_eq!(lambda.order(), expected, "Λ² of {a:?}");
            let hom: u128 = lambda
                .factors()
                .iter()
                .flat_map(|&l| b.factors().iter().map(move |&e| num_integer::gcd(l, e) as u128))
                .product();
            assert_eq!(alternating, hom, "alternating maps {a:?} → {b:?}");
        }
    }
}

/// Unpruned enumeration of `h: A → (1/K)Z/Z` against the pruned search.
#[test]
fn denominator_bound_by_full_enumeration() {
    for a in abelian_groups_up_to(4).into_iter().filter(|a| a.order() > 1) {
        let es = elements(&a);
        let n = es.len();
        for m0 in [1u64, 2, 3] {
            for q in [2u64, 3] {
                let k = q * m0 * a.exponent();
                let mut count = 0usize;
                let mut h = vec![0u64; n];
                loop {
                    let admissible = (0..n).all(|x| {
                        (0..n).all(|y| {
                            let s = a.index_of(&a.add_coords(&es[x], &es[y]));
                            (h[x] + h[y] + k - h[s]).is_multiple_of(k / m0)
                        })
                    });
                    if admissible {
                        count += 1;
                        assert!(h.iter().all(|&v| v % (k / (m0 * a.exponent())) == 0), "{a:?} {m0} {q} {h:?}");
                    }
                    let mut i = 1;
                    while i < n {
                        h[i] += 1;
                        if h[i] < k {
                            break;
                        }
                        h[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
                let (found, ok) = denominator_bound_case(&a, m0, q);
                assert!(ok);
                assert_eq!(found, count, "{a:?} M0 = {m0} q = {q}");
            }
        }
    }
}

#[test]
fn denominator_bound_up_to_order_eight() {
    for a in abelian_groups_up_to(8).into_iter().filter(|a| a.order() > 1) {
        for m0 in [1u64, 2, 3, 4] {
            let (found, ok) = denominator_bound_case(&a, m0, 2);
            assert!(ok && found > 0, "{a:?} M0 = {m0}");
        }
    }
}
