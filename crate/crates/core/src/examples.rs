//! Two worked extensions.
//!
//! * The carry extension `Z/p → Z/p² → Z/p` with `γ(x, y) = ⌊(x + y)/p⌋`.
//! * The extension of `Z/p` by `(Z/p)³` presented as
//!   `⟨x, y, z | [x, y] central of order p, x^p = y^p = 1, z^p = [x, y], z central⟩`
//!   with transversal `ℓ(a, b, c) = x^a y^b z^c`, whose cocycle is
//!   `γ((a, b, c), (a′, b′, c′)) = −a′b + ⌊(c + c′)/p⌋`.

use serde::Serialize;

use crate::abelian::AbelianGroup;
use crate::cocycle::{all_bilinear, carry_cocycle, BilinearViolation, Cocycle};
use crate::embedding::{embed, EmbeddingResult};
use crate::error::{Error, Result};
use crate::twisted::ExtensionGroup;

pub fn carry_extension(p: u64) -> Result<Cocycle> {
    carry_cocycle(p, p)
}

pub fn heisenberg_carry_cocycle(p: u64) -> Result<Cocycle> {
    if p < 2 {
        return Err(Error::InvalidInput(format!("modulus must be at least 2, got {p}")));
    }
    let a = AbelianGroup::new(vec![p; 3])?;
    let b = AbelianGroup::cyclic(p);
    let p = p as i64;
    Cocycle::from_fn(&a, &b, |x, y| {
        let (b1, c1) = (x[1] as i64, x[2] as i64);
        let (a2, c2) = (y[0] as i64, y[2] as i64);
        vec![-a2 * b1 + (c1 + c2) / p]
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CarryReport {
    pub p: u64,
    pub valid: bool,
    pub first_bilinear_violation: Option<ViolationRecord>,
    /// `γ(p−1, p−1)` against the value predicted by bilinearity from `γ(1, 1)`.
    pub corner_actual: u64,
    pub corner_predicted: u64,
    pub bilinear_representative: bool,
    pub group_order: u128,
    pub exponent: u64,
    pub cyclic: bool,
    /// Every bilinear twist of `Z/p` by `Z/p` has exponent dividing `p`.
    pub bilinear_twists_have_exponent_p: bool,
    pub bilinear_twists_checked: usize,
    pub phi_generator: (Vec<u64>, Vec<String>),
    pub beta_tilde_zero: bool,
    pub target_abelian: bool,
    pub witness: Vec<Vec<String>>,
    pub witness_holds: bool,
    pub image_f: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationRecord {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub actual: Vec<u64>,
    pub predicted: Vec<u64>,
}

pub fn carry_report(p: u64) -> Result<CarryReport> {
    let gamma = carry_extension(p)?;
    let valid = gamma.validate().passed();
    let violation = match gamma.check_bilinear() {
        Ok(_) => None,
        Err(BilinearViolation::Mismatch { x, y, actual, predicted }) => Some(ViolationRecord { x, y, actual, predicted }),
        Err(BilinearViolation::Incompatible { i, j }) => {
            return Err(Error::Inconsistent(format!("carry cocycle has incompatible generator pair ({i}, {j})")))
        }
    };
    let corner = [p - 1];
    let g = ExtensionGroup::build(&gamma)?;
    let s = g.structure_report()?;
    let a = gamma.group_a();
    let mut checked = 0;
    let mut twists_ok = true;
    for delta in all_bilinear(a, gamma.group_b(), u128::MAX)? {
        let t = ExtensionGroup::build(&delta.to_cocycle()?)?;
        twists_ok &= t.elements().all(|e| t.power(&e, p as i64) == t.identity());
        checked += 1;
    }
    let r = embed(&g)?;
    let (x, fx) = r.phi(&g.ell(&[1]));
    Ok(CarryReport {
        p,
        valid,
        first_bilinear_violation: violation,
        corner_actual: gamma.at(a.index_of(&corner), a.index_of(&corner))[0],
        corner_predicted: gamma.bilinear_prediction(&corner, &corner)[0],
        bilinear_representative: g.is_twisted_product_class()?.is_some(),
        group_order: s.order,
        exponent: s.exponent,
        cyclic: s.exponent as u128 == s.order,
        bilinear_twists_have_exponent_p: twists_ok,
        bilinear_twists_checked: checked,
        phi_generator: (x, fx.to_strings()),
        beta_tilde_zero: r.beta_tilde.iter().flatten().all(|v| v.is_zero()),
        target_abelian: r.target_is_abelian(),
        witness: r.h.iter().map(|v| v.to_strings()).collect(),
        witness_holds: r.report.coboundary_witness,
        image_f: r.image_f.factors().to_vec(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HeisenbergReport {
    pub p: u64,
    pub valid: bool,
    /// The relations of the presentation hold for `x = ℓ(1,0,0)`, `y = ℓ(0,1,0)`, `z = ℓ(0,0,1)`.
    pub presentation_holds: bool,
    pub group_order: u128,
    pub exponent: u64,
    pub derived_subgroup: Vec<u64>,
    pub center_order: u128,
    pub bilinear_representative: bool,
    pub f_x: Vec<String>,
    pub f_y: Vec<String>,
    pub f_z: Vec<String>,
    pub embedding_verified: bool,
    pub image_f: Vec<u64>,
}

pub fn heisenberg_report(p: u64) -> Result<HeisenbergReport> {
    let gamma = heisenberg_carry_cocycle(p)?;
    let valid = gamma.validate().passed();
    let g = ExtensionGroup::build(&gamma)?;
    let s = g.structure_report()?;
    let r = embed(&g)?;
    let [x, y, z] = generators(&g);
    Ok(HeisenbergReport {
        p,
        valid,
        presentation_holds: presentation_holds(&g, p),
        group_order: s.order,
        exponent: s.exponent,
        derived_subgroup: s.derived_subgroup.factors().to_vec(),
        center_order: s.center_order,
        bilinear_representative: g.is_twisted_product_class()?.is_some(),
        f_x: r.f_of(&x).to_strings(),
        f_y: r.f_of(&y).to_strings(),
        f_z: r.f_of(&z).to_strings(),
        embedding_verified: r.report.passed(),
        image_f: r.image_f.factors().to_vec(),
    })
}

fn generators(g: &ExtensionGroup) -> [crate::twisted::ExtElement; 3] {
    [g.ell(&[1, 0, 0]), g.ell(&[0, 1, 0]), g.ell(&[0, 0, 1])]
}

fn presentation_holds(g: &ExtensionGroup, p: u64) -> bool {
    let [x, y, z] = generators(g);
    let c = g.commutator(&x, &y);
    let e = g.identity();
    let p = p as i64;
    c == g.i(&[1])
        && g.power(&x, p) == e
        && g.power(&y, p) == e
        && g.power(&z, p) == c
        && g.commutator(&x, &z) == e
        && g.commutator(&y, &z) == e
        && g.elements().all(|w| {
            let [a, b, cc] = [w.a[0] as i64, w.a[1] as i64, w.a[2] as i64];
            let lhs = g.mul(&g.mul(&g.power(&x, a), &g.power(&y, b)), &g.power(&z, cc));
            g.mul(&lhs, &g.i(&w.b)) == w
        })
}

/// Embeds the named example; used by reports that need the full result.
pub fn embed_example(name: &str, p: u64) -> Result<EmbeddingResult> {
    let gamma = match name {
        "carry" => carry_extension(p)?,
        "heisenberg-carry" => heisenberg_carry_cocycle(p)?,
        other => return Err(Error::InvalidInput(format!("unknown example {other:?}"))),
    };
    embed(&ExtensionGroup::build(&gamma)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carry_values() {
        let r = carry_report(3).unwrap();
        assert!(r.valid && !r.bilinear_representative && r.cyclic);
        assert_eq!((r.corner_actual, r.corner_predicted), (1, 0));
        assert_eq!(r.phi_generator, (vec![1], vec!["1/9".to_string()]));
        assert_eq!(r.witness, vec![vec!["0/1".to_string()], vec!["1/9".into()], vec!["2/9".into()]]);
        assert_eq!(r.bilinear_twists_checked, 3);
    }

    #[test]
    fn heisenberg_values() {
        let r = heisenberg_report(3).unwrap();
        assert!(r.valid && r.presentation_holds && r.embedding_verified);
        assert_eq!((r.group_order, r.exponent), (81, 9));
        assert_eq!(r.derived_subgroup, vec![3]);
        assert_eq!((r.f_x[0].as_str(), r.f_y[0].as_str(), r.f_z[0].as_str()), ("0/1", "0/1", "1/9"));
        assert_eq!(r.image_f, vec![9]);
        assert!(!r.bilinear_representative);
    }

    #[test]
    fn heisenberg_for_p_two_and_five() {
        for p in [2, 5] {
            let g = ExtensionGroup::build(&heisenberg_carry_cocycle(p).unwrap()).unwrap();
            assert!(presentation_holds(&g, p));
            assert_eq!(g.order(), (p as u128).pow(4));
        }
    }
}
