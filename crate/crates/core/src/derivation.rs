//! Necklaces acting on the tensor algebra as symplectic derivations, and the
//! Lie bracket of `a_g⁻`.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::necklace::{necklace_normal_form, DerivationElem, Necklace};
use crate::tensor::Tensor;
use crate::word::{Genus, Letter, Word};

/// `D_{N(x)}(w)`: each letter `y` of `w` is replaced, for every position `i`
/// of `x` with `x_i·y ≠ 0`, by `(x_i·y) x_{i+1}⋯x_m x_1⋯x_{i−1}`.
pub fn act_on_word(x: &Necklace, w: &Word, out: &mut LinComb<Word>, scale: &crate::Scalar) {
    let xs = x.letters();
    let m = xs.len();
    let ws = w.letters();
    for (k, y) in ws.iter().enumerate() {
        for i in 0..m {
            let p = xs[i].pair(*y);
            if p == 0 {
                continue;
            }
            let mut v: SmallVec<[Letter; 12]> = SmallVec::with_capacity(ws.len() + m - 2);
            v.extend_from_slice(&ws[..k]);
            v.extend_from_slice(&xs[i + 1..]);
            v.extend_from_slice(&xs[..i]);
            v.extend_from_slice(&ws[k + 1..]);
            out.add_term(Word(v), scale * &crate::Scalar::from_int(p));
        }
    }
}

/// Bilinear action of a necklace combination on a word combination.
pub fn act(u: &LinComb<Necklace>, t: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::new();
    for (x, cx) in u {
        for (w, cw) in t {
            act_on_word(x, w, &mut out, &(cx * cw));
        }
    }
    out
}

/// The derivation action `u · t`.
pub fn derivation_apply(u: &DerivationElem, t: &Tensor) -> Result<Tensor> {
    if u.genus() != t.genus() {
        return Err(Error::GenusMismatch(u.genus(), t.genus()));
    }
    Tensor::from_terms(t.genus(), act(u.terms(), t.terms()))
}

/// The left module action `σ(u)(m) = u·m` on `T`.
pub fn module_action(u: &DerivationElem, m: &Tensor) -> Result<Tensor> {
    derivation_apply(u, m)
}

/// The right action `σ̄(m ⊗ u) = −u·m`.
pub fn sigma_bar(m: &Tensor, u: &DerivationElem) -> Result<Tensor> {
    Ok(derivation_apply(u, m)?.neg())
}

/// `[N(x), N(y)] = Σ_{i,j} (x_i·y_j) N(x_{i+1}⋯x_{i−1} y_{j+1}⋯y_{j−1})`.
pub fn bracket_necklaces(x: &Necklace, y: &Necklace, out: &mut LinComb<Necklace>, scale: &crate::Scalar) {
    let xs = x.letters();
    let ys = y.letters();
    let (m, n) = (xs.len(), ys.len());
    if m + n <= 2 {
        return;
    }
    for i in 0..m {
        for j in 0..n {
            let p = xs[i].pair(ys[j]);
            if p == 0 {
                continue;
            }
            let mut v: SmallVec<[Letter; 12]> = SmallVec::with_capacity(m + n - 2);
            v.extend_from_slice(&xs[i + 1..]);
            v.extend_from_slice(&xs[..i]);
            v.extend_from_slice(&ys[j + 1..]);
            v.extend_from_slice(&ys[..j]);
            if let Some(nk) = Necklace::of(&Word(v)) {
                out.add_term(nk, scale * &crate::Scalar::from_int(p));
            }
        }
    }
}

pub fn bracket_terms(u: &LinComb<Necklace>, v: &LinComb<Necklace>) -> LinComb<Necklace> {
    let mut out = LinComb::new();
    for (x, cx) in u {
        for (y, cy) in v {
            bracket_necklaces(x, y, &mut out, &(cx * cy));
        }
    }
    out
}

/// The Lie bracket of `a_g⁻` in closed necklace form.
pub fn bracket(u: &DerivationElem, v: &DerivationElem) -> Result<DerivationElem> {
    if u.genus() != v.genus() {
        return Err(Error::GenusMismatch(u.genus(), v.genus()));
    }
    Ok(DerivationElem::from_terms_unchecked(
        u.genus(),
        bracket_terms(u.terms(), v.terms()),
    ))
}

/// The necklace element of a symplectic derivation given by its values on
/// the letters: `Σ_i A_i D(B_i) − B_i D(A_i)`.
pub fn derivation_to_necklace(g: Genus, on_letter: impl Fn(Letter) -> LinComb<Word>) -> Result<DerivationElem> {
    let mut t = LinComb::new();
    for i in 1..=g {
        let (a, b) = (Letter::a(i), Letter::b(i));
        let pre = |l: Letter, d: &LinComb<Word>, sign: i64, t: &mut LinComb<Word>| {
            for (w, c) in d {
                let mut v = Word::from_letters(&[l]);
                v.0.extend_from_slice(w.letters());
                t.add_term(v, c * &crate::Scalar::from_int(sign));
            }
        };
        pre(a, &on_letter(b), 1, &mut t);
        pre(b, &on_letter(a), -1, &mut t);
    }
    necklace_normal_form(&Tensor::from_terms(g, t)?)
}

/// The bracket computed as the commutator `D_u D_v − D_v D_u` of
/// derivations, read back on the letters. Used as an independent check of
/// [`bracket`].
pub fn bracket_commutator(u: &DerivationElem, v: &DerivationElem) -> Result<DerivationElem> {
    if u.genus() != v.genus() {
        return Err(Error::GenusMismatch(u.genus(), v.genus()));
    }
    derivation_to_necklace(u.genus(), |x| {
        let w = LinComb::single(Word::from_letters(&[x]), crate::Scalar::one());
        let uv = act(u.terms(), &act(v.terms(), &w));
        let vu = act(v.terms(), &act(u.terms(), &w));
        uv.diff(&vu)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::necklace_basis;
    use crate::tensor::omega;
    use crate::Scalar;
    use proptest::prelude::*;

    fn nk(g: Genus, s: &str) -> DerivationElem {
        DerivationElem::necklace(g, Necklace::of(&s.parse().unwrap()).unwrap())
    }

    fn word(g: Genus, s: &str) -> Tensor {
        Tensor::word(g, s.parse().unwrap())
    }

    #[test]
    fn apply_examples() {
        assert_eq!(derivation_apply(&nk(1, "a1 b1"), &word(1, "a1")).unwrap(), word(1, "a1").neg());
        assert_eq!(derivation_apply(&nk(1, "a1"), &word(1, "b1")).unwrap(), Tensor::unit(1));
        assert!(derivation_apply(&nk(1, "a1 a1 b1"), &omega(1)).unwrap().is_zero());
    }

    #[test]
    fn sigma_bar_examples() {
        assert_eq!(sigma_bar(&word(1, "a1"), &nk(1, "a1 b1")).unwrap(), word(1, "a1"));
        assert!(sigma_bar(&Tensor::unit(2), &nk(2, "a1 b2 b2")).unwrap().is_zero());
    }

    #[test]
    fn bracket_examples() {
        let two = Scalar::from_int(2);
        assert_eq!(bracket(&nk(1, "a1 a1"), &nk(1, "b1")).unwrap(), nk(1, "a1").scale(&two));
        assert!(bracket(&nk(1, "a1"), &nk(1, "b1")).unwrap().is_zero());
        let u = nk(2, "a1 b2 a2").add(&nk(2, "b1 b1")).unwrap();
        assert!(bracket(&u, &u).unwrap().is_zero());
    }

    #[test]
    fn bracket_matches_commutator_small_weights() {
        for g in 1..=2 {
            let basis: Vec<Necklace> = (1..=4).flat_map(|m| necklace_basis(g, m)).collect();
            for x in &basis {
                for y in &basis {
                    let (u, v) = (DerivationElem::necklace(g, x.clone()), DerivationElem::necklace(g, y.clone()));
                    assert_eq!(bracket(&u, &v).unwrap(), bracket_commutator(&u, &v).unwrap(), "{x} {y}");
                }
            }
        }
    }

    #[test]
    fn omega_is_annihilated() {
        for g in 1..=2 {
            for m in 1..=5 {
                for x in necklace_basis(g, m) {
                    let u = DerivationElem::necklace(g, x);
                    assert!(derivation_apply(&u, &omega(g)).unwrap().is_zero());
                }
            }
        }
    }

    fn arb_elem(g: Genus, max_w: usize) -> impl Strategy<Value = DerivationElem> {
        let letter = (0..2 * g).prop_map(Letter::from_code);
        let nk = proptest::collection::vec(letter, 1..=max_w)
            .prop_map(|v| Necklace::of(&Word::from_letters(&v)).unwrap());
        proptest::collection::vec((nk, -3i64..=3), 1..4).prop_map(move |ts| {
            DerivationElem::from_terms(g, ts.into_iter().map(|(n, c)| (n, Scalar::from_int(c))).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn skew_and_jacobi(u in arb_elem(2, 4), v in arb_elem(2, 4), w in arb_elem(2, 4)) {
            prop_assert_eq!(bracket(&u, &v).unwrap(), bracket(&v, &u).unwrap().neg());
            let j1 = bracket(&bracket(&u, &v).unwrap(), &w).unwrap();
            let j2 = bracket(&bracket(&v, &w).unwrap(), &u).unwrap();
            let j3 = bracket(&bracket(&w, &u).unwrap(), &v).unwrap();
            prop_assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
        }

        #[test]
        fn module_axiom(u in arb_elem(2, 3), v in arb_elem(2, 3), ws in proptest::collection::vec(0u8..4, 0..5)) {
            let m = Tensor::word(2, Word::from_letters(&ws.iter().map(|&c| Letter::from_code(c)).collect::<Vec<_>>()));
            let lhs = derivation_apply(&bracket(&u, &v).unwrap(), &m).unwrap();
            let uv = derivation_apply(&u, &derivation_apply(&v, &m).unwrap()).unwrap();
            let vu = derivation_apply(&v, &derivation_apply(&u, &m).unwrap()).unwrap();
            prop_assert_eq!(lhs, uv.sub(&vu).unwrap());
        }
    }
}
