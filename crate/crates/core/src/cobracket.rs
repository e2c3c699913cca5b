//! Schedler's cobracket `δ^alg` on necklaces and the coaction `μ^alg` on words.

use crate::derivation::{act, bracket_necklaces};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::necklace::{DerivationElem, Necklace};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::{Genus, Word};

/// An element of `a_g⁻ ⊗ a_g⁻`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiDerivationElem {
    pub g: Genus,
    pub terms: LinComb<(Necklace, Necklace)>,
}

/// An element of `T ⊗ a_g⁻`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorDerivElem {
    pub g: Genus,
    pub terms: LinComb<(Word, Necklace)>,
}

/// `δ^alg` on one necklace, evaluated on its canonical representative.
pub fn delta_necklace(x: &Necklace, out: &mut LinComb<(Necklace, Necklace)>, scale: &Scalar) {
    delta_word(x.word(), out, scale)
}

/// The double sum defining `δ^alg(N(w))` for an arbitrary representative `w`.
pub fn delta_word(w: &Word, out: &mut LinComb<(Necklace, Necklace)>, scale: &Scalar) {
    let xs = w.letters();
    let m = xs.len();
    for i in 0..m {
        for j in i + 1..m {
            let p = xs[i].pair(xs[j]);
            if p == 0 {
                continue;
            }
            let Some(left) = Necklace::of_letters(&xs[i + 1..j]) else {
                continue;
            };
            let mut rest = Word::from_letters(&xs[j + 1..]);
            rest.0.extend_from_slice(&xs[..i]);
            let Some(right) = Necklace::of(&rest) else {
                continue;
            };
            let c = scale * &Scalar::from_int(p);
            out.add_term((left.clone(), right.clone()), c.clone());
            out.add_term((right, left), -c);
        }
    }
}

pub fn delta_terms(u: &LinComb<Necklace>) -> LinComb<(Necklace, Necklace)> {
    let mut out = LinComb::new();
    for (x, c) in u {
        delta_necklace(x, &mut out, c);
    }
    out
}

pub fn schedler_delta(u: &DerivationElem) -> BiDerivationElem {
    BiDerivationElem {
        g: u.genus(),
        terms: delta_terms(u.terms()),
    }
}

/// `μ^alg(X_1⋯X_m) = Σ_{i<j} (X_i·X_j) X_1⋯X_{i−1}X_{j+1}⋯X_m ⊗ N(X_{i+1}⋯X_{j−1})`.
pub fn mu_word(w: &Word, out: &mut LinComb<(Word, Necklace)>, scale: &Scalar) {
    let xs = w.letters();
    let m = xs.len();
    for i in 0..m {
        for j in i + 1..m {
            let p = xs[i].pair(xs[j]);
            if p == 0 {
                continue;
            }
            let Some(n) = Necklace::of_letters(&xs[i + 1..j]) else {
                continue;
            };
            let mut v = Word::from_letters(&xs[..i]);
            v.0.extend_from_slice(&xs[j + 1..]);
            out.add_term((v, n), scale * &Scalar::from_int(p));
        }
    }
}

pub fn mu_terms(t: &LinComb<Word>) -> LinComb<(Word, Necklace)> {
    let mut out = LinComb::new();
    for (w, c) in t {
        mu_word(w, &mut out, c);
    }
    out
}

pub fn mu_alg(t: &Tensor) -> TensorDerivElem {
    TensorDerivElem {
        g: t.genus(),
        terms: mu_terms(t.terms()),
    }
}

impl BiDerivationElem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// The flip `T(P⊗Q) = Q⊗P`.
    pub fn swap(&self) -> Self {
        BiDerivationElem {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|((p, q), c)| ((q.clone(), p.clone()), c.clone()))
                .collect(),
        }
    }

    /// Diagonal adjoint action `σ(Y)(P⊗Q) = [Y,P]⊗Q + P⊗[Y,Q]`.
    pub fn sigma(&self, y: &DerivationElem) -> Result<Self> {
        if y.genus() != self.g {
            return Err(Error::GenusMismatch(y.genus(), self.g));
        }
        let mut out = LinComb::new();
        for ((p, q), c) in &self.terms {
            for (yn, cy) in y.terms() {
                let cc = c * cy;
                let mut left = LinComb::new();
                bracket_necklaces(yn, p, &mut left, &cc);
                for (n, cn) in &left {
                    out.add_term((n.clone(), q.clone()), cn.clone());
                }
                let mut right = LinComb::new();
                bracket_necklaces(yn, q, &mut right, &cc);
                for (n, cn) in &right {
                    out.add_term((p.clone(), n.clone()), cn.clone());
                }
            }
        }
        Ok(BiDerivationElem { g: self.g, terms: out })
    }

    /// Bracket contraction `Σ c [P,Q]`.
    pub fn contract(&self) -> DerivationElem {
        let mut out = LinComb::new();
        for ((p, q), c) in &self.terms {
            bracket_necklaces(p, q, &mut out, c);
        }
        DerivationElem::from_terms_unchecked(self.g, out)
    }
}

impl TensorDerivElem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// `σ(Y)(v⊗n) = (Y·v)⊗n + v⊗[Y,n]`.
    pub fn sigma(&self, y: &DerivationElem) -> Result<Self> {
        if y.genus() != self.g {
            return Err(Error::GenusMismatch(y.genus(), self.g));
        }
        let mut out = LinComb::new();
        for ((v, n), c) in &self.terms {
            let acted = act(y.terms(), &LinComb::single(v.clone(), c.clone()));
            for (v2, c2) in &acted {
                out.add_term((v2.clone(), n.clone()), c2.clone());
            }
            let mut br = LinComb::new();
            for (yn, cy) in y.terms() {
                bracket_necklaces(yn, n, &mut br, &(c * cy));
            }
            for (n2, c2) in &br {
                out.add_term((v.clone(), n2.clone()), c2.clone());
            }
        }
        Ok(TensorDerivElem { g: self.g, terms: out })
    }

    /// `(σ̄)(v⊗n) = −n·v`, summed.
    pub fn sigma_bar(&self) -> Tensor {
        let mut out = LinComb::new();
        for ((v, n), c) in &self.terms {
            let acted = act(&LinComb::single(n.clone(), c.clone()), &LinComb::single(v.clone(), Scalar::one()));
            out.sub_assign(&acted);
        }
        Tensor::from_terms(self.g, out).expect("letters stay in range")
    }
}

/// The cyclic sum `N(δ⊗1)δ(x)` of the coJacobi identity, as a combination
/// of ordered triples.
pub fn cojacobi_defect(x: &LinComb<Necklace>) -> LinComb<(Necklace, Necklace, Necklace)> {
    cojacobi_defect_with(x, |n| delta_terms(&LinComb::single(n.clone(), Scalar::one())))
}

/// As [`cojacobi_defect`] for an arbitrary cobracket given on basis necklaces.
pub fn cojacobi_defect_with(
    x: &LinComb<Necklace>,
    delta: impl Fn(&Necklace) -> LinComb<(Necklace, Necklace)>,
) -> LinComb<(Necklace, Necklace, Necklace)> {
    let mut first = LinComb::new();
    for (n, c) in x {
        first.add_scaled(&delta(n), c);
    }
    let mut out = LinComb::new();
    for ((p, q), c) in &first {
        for ((a, b), cc) in &delta(p) {
            let k = c * cc;
            out.add_term((a.clone(), b.clone(), q.clone()), k.clone());
            out.add_term((b.clone(), q.clone(), a.clone()), k.clone());
            out.add_term((q.clone(), a.clone(), b.clone()), k);
        }
    }
    out
}

/// `(1⊗δ)μ(w) + (1⊗(1−T))(μ⊗1)μ(w)`; vanishes for a comodule.
pub fn coaction_defect(w: &Word) -> LinComb<(Word, Necklace, Necklace)> {
    let mut mu = LinComb::new();
    mu_word(w, &mut mu, &Scalar::one());
    let mut out = LinComb::new();
    for ((v, n), c) in &mu {
        let mut d = LinComb::new();
        delta_necklace(n, &mut d, c);
        for ((a, b), cc) in &d {
            out.add_term((v.clone(), a.clone(), b.clone()), cc.clone());
        }
        let mut mu2 = LinComb::new();
        mu_word(v, &mut mu2, c);
        for ((v2, n2), cc) in &mu2 {
            out.add_term((v2.clone(), n2.clone(), n.clone()), cc.clone());
            out.add_term((v2.clone(), n.clone(), n2.clone()), -cc);
        }
    }
    out
}

/// `σ(Y)μ(m) − μ(Ym) + (σ̄⊗1)(1⊗δ)(m⊗Y)`; vanishes for a bimodule.
pub fn bimodule_defect(m: &Tensor, y: &DerivationElem) -> Result<TensorDerivElem> {
    let g = m.genus();
    let mut out = mu_alg(m).sigma(y)?.terms;
    let ym = act(y.terms(), m.terms());
    out.sub_assign(&mu_terms(&ym));
    for ((p, q), c) in &delta_terms(y.terms()) {
        let pm = act(&LinComb::single(p.clone(), c.clone()), m.terms());
        for (v, cv) in &pm {
            out.add_term((v.clone(), q.clone()), -cv);
        }
    }
    Ok(TensorDerivElem { g, terms: out })
}
