//! Chevalley–Eilenberg chain and cochain operators, with and without
//! coefficients in `T`.
//!
//! Conventions: `∂` lowers `(p, w)` by `(1, 2)`, the coboundaries raise `p` by
//! one and lower `w` by two. On coefficient chains the coboundary is
//! `d(m⊗ξ) = μ(m)∧ξ − m⊗dξ`, which is the sign that makes `d∘d = 0` and
//! `d∂ + ∂d = 0` for the necklace bimodule.

use smallvec::SmallVec;

use crate::cobracket::{delta_necklace, mu_word};
use crate::derivation::{act_on_word, bracket_necklaces};
use crate::lincomb::LinComb;
use crate::necklace::Necklace;
use crate::scalar::Scalar;
use crate::wedge::{
    add_factors, add_mod_factors, mod_basis, mod_wedge_product, wedge_basis, wedge_product, ChainVector, Factors,
    ModChainVector, ModMono, Monomial, Wedge,
};
use crate::word::{Genus, Word};

fn sign(k: usize) -> Scalar {
    Scalar::sign(k)
}

/// `∂(X_1∧⋯∧X_p) = Σ_{i<j} (−1)^{i+j} [X_i,X_j]∧X_1∧…î…ĵ…∧X_p`.
pub fn boundary_mono(x: &Wedge) -> ChainVector {
    let fs = x.factors();
    let mut out = LinComb::new();
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let mut br = LinComb::new();
            bracket_necklaces(&fs[i], &fs[j], &mut br, &sign(i + j));
            for (n, c) in &br {
                let mut f: Factors = SmallVec::with_capacity(fs.len() - 1);
                f.push(n.clone());
                f.extend(fs.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, y)| y.clone()));
                add_factors(&mut out, f, c);
            }
        }
    }
    out
}

pub fn boundary(x: &ChainVector) -> ChainVector {
    x.map_linear(boundary_mono)
}

/// `∇ = −∂` on `Λ²`: `X∧Y ↦ [X,Y]`.
pub fn nabla(x: &ChainVector) -> ChainVector {
    boundary(x).neg()
}

/// `σ(Y)(X_1∧⋯∧X_p) = Σ_i X_1∧⋯∧[Y,X_i]∧⋯∧X_p`.
pub fn sigma_wedge_mono(y: &LinComb<Necklace>, x: &Wedge) -> ChainVector {
    let fs = x.factors();
    let mut out = LinComb::new();
    for i in 0..fs.len() {
        let mut br = LinComb::new();
        for (yn, cy) in y {
            bracket_necklaces(yn, &fs[i], &mut br, cy);
        }
        for (n, c) in &br {
            let mut f: Factors = fs.iter().cloned().collect();
            f[i] = n.clone();
            add_factors(&mut out, f, c);
        }
    }
    out
}

pub fn sigma_wedge(y: &LinComb<Necklace>, x: &ChainVector) -> ChainVector {
    x.map_linear(|m| sigma_wedge_mono(y, m))
}

/// `σ(Y)(m⊗ξ) = (Y·m)⊗ξ + m⊗σ(Y)ξ`.
pub fn sigma_mod_mono(y: &LinComb<Necklace>, x: &ModMono) -> ModChainVector {
    let mut out = LinComb::new();
    let mut acted = LinComb::new();
    for (yn, cy) in y {
        act_on_word(yn, &x.word, &mut acted, cy);
    }
    for (v, c) in &acted {
        out.add_term(ModMono::new(v.clone(), x.wedge.clone()), c.clone());
    }
    for (w, c) in &sigma_wedge_mono(y, &x.wedge) {
        out.add_term(ModMono::new(x.word.clone(), w.clone()), c.clone());
    }
    out
}

/// A Lie cobracket given on basis necklaces, valued in `Λ²`.
pub trait Cobracket: Send + Sync {
    fn delta(&self, x: &Necklace) -> ChainVector;

    /// Highest weight at which the values are exact, if truncated.
    fn cutoff(&self) -> Option<usize> {
        None
    }
}

/// A coaction `M → M⊗g` on words, valued in `T⊗Λ¹`.
pub trait Coaction: Send + Sync {
    fn mu(&self, m: &Word) -> ModChainVector;

    /// Highest weight at which the values are exact, if truncated.
    fn cutoff(&self) -> Option<usize> {
        None
    }
}

/// Schedler's cobracket as an element of `Λ²`: `Σ_{P<Q} c_{PQ} P∧Q`.
pub fn delta_wedge(x: &Necklace) -> ChainVector {
    let mut pairs = LinComb::new();
    delta_necklace(x, &mut pairs, &Scalar::one());
    let mut out = LinComb::new();
    for ((p, q), c) in &pairs {
        if p < q {
            out.add_term(Wedge::normalize(smallvec::smallvec![p.clone(), q.clone()]).unwrap().1, c.clone());
        }
    }
    out
}

/// `μ^alg` as an element of `T⊗Λ¹`.
pub fn mu_mod(m: &Word) -> ModChainVector {
    let mut pairs = LinComb::new();
    mu_word(m, &mut pairs, &Scalar::one());
    pairs
        .iter()
        .map(|((v, n), c)| (ModMono::new(v.clone(), Wedge::single(n.clone())), c.clone()))
        .collect()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AlgDelta;

impl Cobracket for AlgDelta {
    fn delta(&self, x: &Necklace) -> ChainVector {
        delta_wedge(x)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AlgMu;

impl Coaction for AlgMu {
    fn mu(&self, m: &Word) -> ModChainVector {
        mu_mod(m)
    }
}

/// `d(X_1∧⋯∧X_p) = Σ_i (−1)^i (δX_i)∧X_1∧…î…∧X_p`; so `dX = −δX`.
pub fn cochain_d_mono(x: &Wedge, delta: &dyn Cobracket) -> ChainVector {
    let fs = x.factors();
    let mut out = LinComb::new();
    for i in 0..fs.len() {
        let s = sign(i + 1);
        for (dw, c) in &delta.delta(&fs[i]) {
            let mut f: Factors = dw.factors().iter().cloned().collect();
            f.extend(x.without(i));
            add_factors(&mut out, f, &(c * &s));
        }
    }
    out
}

pub fn cochain_d(x: &ChainVector, delta: &dyn Cobracket) -> ChainVector {
    x.map_linear(|m| cochain_d_mono(m, delta))
}

/// `Γ(m⊗X_1∧⋯∧X_p) = Σ_i (−1)^i (X_i m)⊗X_1∧…î…∧X_p`.
pub fn gamma_mono(x: &ModMono) -> ModChainVector {
    let fs = x.wedge.factors();
    let mut out = LinComb::new();
    for i in 0..fs.len() {
        let mut acted = LinComb::new();
        act_on_word(&fs[i], &x.word, &mut acted, &sign(i + 1));
        if acted.is_zero() {
            continue;
        }
        let rest = Wedge::normalize(x.wedge.without(i)).expect("subset of a wedge").1;
        for (v, c) in &acted {
            out.add_term(ModMono::new(v.clone(), rest.clone()), c.clone());
        }
    }
    out
}

/// `∂(m⊗ξ) = Γ(m⊗ξ) + m⊗∂ξ`.
pub fn mod_boundary_mono(x: &ModMono) -> ModChainVector {
    let mut out = gamma_mono(x);
    for (w, c) in &boundary_mono(&x.wedge) {
        out.add_term(ModMono::new(x.word.clone(), w.clone()), c.clone());
    }
    out
}

pub fn mod_boundary(x: &ModChainVector) -> ModChainVector {
    x.map_linear(mod_boundary_mono)
}

/// `d(m⊗ξ) = μ(m)∧ξ − m⊗dξ`.
pub fn mod_cochain_d_mono(x: &ModMono, delta: &dyn Cobracket, mu: &dyn Coaction) -> ModChainVector {
    let mut out = LinComb::new();
    for (mm, c) in &mu.mu(&x.word) {
        let mut f: Factors = mm.wedge.factors().iter().cloned().collect();
        f.extend(x.wedge.factors().iter().cloned());
        add_mod_factors(&mut out, mm.word.clone(), f, c);
    }
    for (w, c) in &cochain_d_mono(&x.wedge, delta) {
        out.add_term(ModMono::new(x.word.clone(), w.clone()), -c);
    }
    out
}

pub fn mod_cochain_d(x: &ModChainVector, delta: &dyn Cobracket, mu: &dyn Coaction) -> ModChainVector {
    x.map_linear(|m| mod_cochain_d_mono(m, delta, mu))
}

/// `E_A(ξ) = ξ∧A`.
pub fn e_a(a: &ChainVector, x: &ChainVector) -> ChainVector {
    wedge_product(x, a)
}

/// `E_B(m⊗ξ) = m⊗ξ∧B`.
pub fn mod_e_a(b: &ChainVector, x: &ModChainVector) -> ModChainVector {
    mod_wedge_product(x, b)
}

/// A graded chain complex with enumerable `(p, w)` cells.
pub trait Complex: Send + Sync {
    type Mono: Monomial;

    fn genus(&self) -> Genus;

    /// Sorted monomial basis of the cell.
    fn basis(&self, p: usize, w: usize) -> Vec<Self::Mono>;

    fn boundary(&self, x: &Self::Mono) -> LinComb<Self::Mono>;
}

/// `(Λ* a_g⁻, ∂)`.
#[derive(Clone, Copy, Debug)]
pub struct LieComplex {
    pub g: Genus,
}

impl Complex for LieComplex {
    type Mono = Wedge;

    fn genus(&self) -> Genus {
        self.g
    }

    fn basis(&self, p: usize, w: usize) -> Vec<Wedge> {
        wedge_basis(self.g, p, w)
    }

    fn boundary(&self, x: &Wedge) -> ChainVector {
        boundary_mono(x)
    }
}

/// `(T ⊗ Λ* a_g⁻, ∂^M)`.
#[derive(Clone, Copy, Debug)]
pub struct ModuleComplex {
    pub g: Genus,
}

impl Complex for ModuleComplex {
    type Mono = ModMono;

    fn genus(&self) -> Genus {
        self.g
    }

    fn basis(&self, p: usize, w: usize) -> Vec<ModMono> {
        mod_basis(self.g, p, w)
    }

    fn boundary(&self, x: &ModMono) -> ModChainVector {
        mod_boundary_mono(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::bracket_terms;
    use proptest::prelude::*;

    fn nk(s: &str) -> Necklace {
        Necklace::of(&s.parse().unwrap()).unwrap()
    }

    fn wedge(fs: &[&str]) -> ChainVector {
        let mut out = LinComb::new();
        add_factors(&mut out, fs.iter().map(|s| nk(s)).collect(), &Scalar::one());
        out
    }

    #[test]
    fn boundary_examples() {
        let x = wedge(&["a1 a1", "b1"]);
        assert_eq!(boundary(&x), wedge(&["a1"]).scaled(&Scalar::from_int(-2)));
        assert!(boundary(&wedge(&["a1 b1 b1"])).is_zero());
        let xyz = wedge(&["a1 a1 b1", "b1 b1", "a1 b1"]);
        assert!(boundary(&boundary(&xyz)).is_zero());
    }

    #[test]
    fn sigma_example() {
        let y = LinComb::single(nk("b1"), Scalar::one());
        assert_eq!(sigma_wedge(&y, &wedge(&["a1 a1"])), wedge(&["a1"]).scaled(&Scalar::from_int(-2)));
    }

    #[test]
    fn cochain_examples() {
        let x = nk("a1 a2 b1 b2");
        let dx = cochain_d(&LinComb::single(Wedge::single(x.clone()), Scalar::one()), &AlgDelta);
        assert_eq!(dx, delta_wedge(&x).neg());
        assert!(cochain_d(&wedge(&["a1 b1"]), &AlgDelta).is_zero());
    }

    #[test]
    fn module_examples() {
        let m = ModMono::new("a1".parse().unwrap(), Wedge::single(nk("a1 b1")));
        let expected = LinComb::single(ModMono::new("a1".parse().unwrap(), Wedge::empty()), Scalar::one());
        assert_eq!(mod_boundary_mono(&m), expected);

        let unit = ModMono::new(Word::empty(), Wedge::single(nk("a1 b1")));
        assert!(gamma_mono(&unit).is_zero());

        let m = ModMono::new("a1 a1 b1".parse().unwrap(), Wedge::empty());
        let expected = LinComb::single(ModMono::new(Word::empty(), Wedge::single(nk("a1"))), Scalar::one());
        assert_eq!(mod_cochain_d_mono(&m, &AlgDelta, &AlgMu), expected);
        let m = ModMono::new("a1 b1".parse().unwrap(), Wedge::empty());
        assert!(mod_cochain_d_mono(&m, &AlgDelta, &AlgMu).is_zero());
    }

    #[test]
    fn delta_wedge_antisymmetrizes_to_schedler() {
        for m in 1..=7 {
            for x in crate::necklace::necklace_basis(2, m) {
                let mut pairs = LinComb::new();
                delta_necklace(&x, &mut pairs, &Scalar::one());
                let raw: LinComb<Vec<Necklace>> =
                    pairs.iter().map(|((p, q), c)| (vec![p.clone(), q.clone()], c.clone())).collect();
                let back = delta_wedge(&x).map_linear(|w| w.antisymmetrize());
                assert_eq!(back, raw);
            }
        }
    }

    fn arb_nk(max_w: usize) -> impl Strategy<Value = Necklace> {
        proptest::collection::vec(0u8..4, 1..=max_w).prop_map(|v| {
            Necklace::of(&v.iter().map(|&c| crate::Letter::from_code(c)).collect()).unwrap()
        })
    }

    fn arb_chain(p: usize, max_w: usize) -> impl Strategy<Value = ChainVector> {
        proptest::collection::vec((proptest::collection::vec(arb_nk(max_w), p), -2i64..=2), 1..3).prop_map(|ts| {
            let mut out = LinComb::new();
            for (fs, c) in ts {
                add_factors(&mut out, fs.into_iter().collect(), &Scalar::from_int(c));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn boundary_of_wedge_product(xs in proptest::collection::vec(arb_nk(4), 1..3), eta in arb_chain(2, 4)) {
            let Some((s, w)) = Wedge::normalize(xs.into_iter().collect()) else { return Ok(()) };
            let p = w.degree();
            let xi = LinComb::single(w.clone(), Scalar::from_int(s));
            let lhs = boundary(&wedge_product(&xi, &eta))
                .diff(&wedge_product(&boundary(&xi), &eta))
                .diff(&wedge_product(&xi, &boundary(&eta)).scaled(&sign(p)));
            let mut rhs = LinComb::new();
            for (i, x) in w.factors().iter().enumerate() {
                let rest = LinComb::single(Wedge::normalize(w.without(i)).unwrap().1, Scalar::from_int(s) * sign(i + 1));
                let ax = sigma_wedge(&LinComb::single(x.clone(), Scalar::one()), &eta);
                rhs.add_assign(&wedge_product(&rest, &ax));
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sigma_commutes_with_boundary(x in arb_chain(3, 4), y in arb_nk(4)) {
            let y = LinComb::single(y, Scalar::one());
            prop_assert_eq!(sigma_wedge(&y, &boundary(&x)), boundary(&sigma_wedge(&y, &x)));
        }

        #[test]
        fn sigma_is_derivation_of_wedge(x in arb_chain(1, 4), z in arb_chain(2, 4), y in arb_nk(4)) {
            let y = LinComb::single(y, Scalar::one());
            let lhs = sigma_wedge(&y, &wedge_product(&x, &z));
            let rhs = wedge_product(&sigma_wedge(&y, &x), &z).sum(&wedge_product(&x, &sigma_wedge(&y, &z)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cochain_product_rule(x in arb_chain(1, 6), y in arb_chain(2, 6)) {
            // d(ξ∧η) = dξ∧η + (−1)^p ξ∧dη with p = 1.
            let lhs = cochain_d(&wedge_product(&x, &y), &AlgDelta);
            let rhs = wedge_product(&cochain_d(&x, &AlgDelta), &y)
                .diff(&wedge_product(&x, &cochain_d(&y, &AlgDelta)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn chain_identities_on_random_monomials(x in arb_chain(3, 4)) {
            prop_assert!(boundary(&boundary(&x)).is_zero());
            let d = |v: &ChainVector| cochain_d(v, &AlgDelta);
            prop_assert!(d(&d(&x)).is_zero());
            prop_assert!(d(&boundary(&x)).sum(&boundary(&d(&x))).is_zero());
        }

        #[test]
        fn involutive_partial_identity(x in arb_chain(2, 5), y in arb_nk(6)) {
            // ∂(ξ∧dY) − ∂ξ∧dY − (−1)^p ξ∧∂dY = dσ(Y)ξ − σ(Y)dξ, p = 2.
            let yv = LinComb::single(Wedge::single(y.clone()), Scalar::one());
            let dy = cochain_d(&yv, &AlgDelta);
            let lhs = boundary(&wedge_product(&x, &dy))
                .diff(&wedge_product(&boundary(&x), &dy))
                .diff(&wedge_product(&x, &boundary(&dy)).scaled(&sign(2)));
            let ys = LinComb::single(y, Scalar::one());
            let rhs = cochain_d(&sigma_wedge(&ys, &x), &AlgDelta).diff(&sigma_wedge(&ys, &cochain_d(&x, &AlgDelta)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn module_identities_on_random_monomials(
            ls in proptest::collection::vec(0u8..4, 0..5),
            x in arb_chain(2, 3),
        ) {
            let word: Word = ls.iter().map(|&c| crate::Letter::from_code(c)).collect();
            let v: ModChainVector = x.iter().map(|(w, c)| (ModMono::new(word.clone(), w.clone()), c.clone())).collect();
            let d = |v: &ModChainVector| mod_cochain_d(v, &AlgDelta, &AlgMu);
            prop_assert!(mod_boundary(&mod_boundary(&v)).is_zero());
            prop_assert!(d(&d(&v)).is_zero());
            prop_assert!(d(&mod_boundary(&v)).sum(&mod_boundary(&d(&v))).is_zero());
        }
    }

    #[test]
    fn bracket_of_basis_is_integral() {
        let b = bracket_terms(&LinComb::single(nk("a1 a1 b1"), Scalar::one()), &LinComb::single(nk("b1 b1"), Scalar::one()));
        assert!(b.iter().all(|(_, c)| c.is_integer()));
    }
}
