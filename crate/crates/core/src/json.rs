//! JSON forms of the algebraic types. Coefficients are exact rational
//! strings, words are space-separated letters and the empty word is `"1"`.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cobracket::{BiDerivationElem, TensorDerivElem};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::lincomb::LinComb;
use crate::necklace::{DerivationElem, Necklace};
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;
use crate::tensor::Tensor;
use crate::wedge::{ChainVector, Factors, ModChainVector, ModMono, Wedge};
use crate::word::{check_genus, Genus, Word};

/// A type with a serde-friendly mirror.
pub trait JsonForm: Sized {
    type Repr: Serialize + DeserializeOwned;

    fn to_repr(&self) -> Self::Repr;
    fn from_repr(r: Self::Repr) -> Result<Self>;

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_repr()).expect("plain data serializes")
    }

    fn from_json(s: &str) -> Result<Self> {
        let r = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))?;
        Self::from_repr(r)
    }
}

pub fn word_string(w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.to_string()
    }
}

pub fn parse_word(s: &str, g: Genus) -> Result<Word> {
    let w: Word = if s.trim() == "1" { Word::empty() } else { s.parse()? };
    w.check(g)?;
    Ok(w)
}

fn parse_necklace(s: &str, g: Genus) -> Result<Necklace> {
    Necklace::of(&parse_word(s, g)?).ok_or_else(|| Error::Invalid("the empty necklace is zero".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTerm {
    pub word: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub g: Genus,
    pub terms: Vec<WordTerm>,
}

impl JsonForm for Tensor {
    type Repr = TensorJson;

    fn to_repr(&self) -> TensorJson {
        TensorJson {
            g: self.genus(),
            terms: self
                .terms()
                .iter()
                .map(|(w, c)| WordTerm {
                    word: word_string(w),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    fn from_repr(r: TensorJson) -> Result<Self> {
        check_genus(r.g)?;
        let mut terms = LinComb::new();
        for t in r.terms {
            terms.add_term(parse_word(&t.word, r.g)?, t.coeff);
        }
        Tensor::from_terms(r.g, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceTerm {
    pub necklace: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub g: Genus,
    pub terms: Vec<NecklaceTerm>,
}

impl JsonForm for DerivationElem {
    type Repr = DerivationJson;

    fn to_repr(&self) -> DerivationJson {
        DerivationJson {
            g: self.genus(),
            terms: self
                .terms()
                .iter()
                .map(|(n, c)| NecklaceTerm {
                    necklace: n.word().to_string(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    fn from_repr(r: DerivationJson) -> Result<Self> {
        check_genus(r.g)?;
        let mut terms = LinComb::new();
        for t in r.terms {
            terms.add_term(parse_necklace(&t.necklace, r.g)?, t.coeff);
        }
        DerivationElem::from_terms(r.g, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTerm {
    pub left: String,
    pub right: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiDerivationJson {
    pub g: Genus,
    pub terms: Vec<PairTerm>,
}

impl JsonForm for BiDerivationElem {
    type Repr = BiDerivationJson;

    fn to_repr(&self) -> BiDerivationJson {
        BiDerivationJson {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|((x, y), c)| PairTerm {
                    left: x.word().to_string(),
                    right: y.word().to_string(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    fn from_repr(r: BiDerivationJson) -> Result<Self> {
        check_genus(r.g)?;
        let mut terms = LinComb::new();
        for t in r.terms {
            terms.add_term((parse_necklace(&t.left, r.g)?, parse_necklace(&t.right, r.g)?), t.coeff);
        }
        Ok(BiDerivationElem { g: r.g, terms })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordNecklaceTerm {
    pub word: String,
    pub necklace: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDerivJson {
    pub g: Genus,
    pub terms: Vec<WordNecklaceTerm>,
}

impl JsonForm for TensorDerivElem {
    type Repr = TensorDerivJson;

    fn to_repr(&self) -> TensorDerivJson {
        TensorDerivJson {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|((w, n), c)| WordNecklaceTerm {
                    word: word_string(w),
                    necklace: n.word().to_string(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    fn from_repr(r: TensorDerivJson) -> Result<Self> {
        check_genus(r.g)?;
        let mut terms = LinComb::new();
        for t in r.terms {
            terms.add_term((parse_word(&t.word, r.g)?, parse_necklace(&t.necklace, r.g)?), t.coeff);
        }
        Ok(TensorDerivElem { g: r.g, terms })
    }
}

/// A chain of `Λ* a_g⁻` together with its genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub g: Genus,
    pub vector: ChainVector,
}

/// A chain of `T ⊗ Λ* a_g⁻` together with its genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModChain {
    pub g: Genus,
    pub vector: ModChainVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeTerm {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    pub wedge: Vec<String>,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub g: Genus,
    pub terms: Vec<WedgeTerm>,
}

fn wedge_strings(w: &Wedge) -> Vec<String> {
    w.factors().iter().map(|n| n.word().to_string()).collect()
}

/// Sorts the factors into a wedge monomial; repeated factors give zero.
fn parse_wedge(fs: &[String], g: Genus) -> Result<Option<(Scalar, Wedge)>> {
    let factors: Factors = fs.iter().map(|s| parse_necklace(s, g)).collect::<Result<_>>()?;
    Ok(Wedge::normalize(factors).map(|(s, w)| (Scalar::from_int(s), w)))
}

impl JsonForm for Chain {
    type Repr = ChainJson;

    fn to_repr(&self) -> ChainJson {
        ChainJson {
            g: self.g,
            terms: self
                .vector
                .iter()
                .map(|(w, c)| WedgeTerm {
                    word: None,
                    wedge: wedge_strings(w),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    fn from_repr(r: ChainJson) -> Result<Self> {
        check_genus(r.g)?;
        let mut vector = LinComb::new();
        for t in r.terms {
            if t.word.is_some() {
                return Err(Error::Invalid("a chain of the Lie complex has no word factor".into()));
            }
            if let Some((s, w)) = parse_wedge(&t.wedge, r.g)? {
                vector.add_term(w, s * t.coeff);
            }
        }
        Ok(Chain { g: r.g, vector })
    }
}

impl JsonForm for ModChain {
    type Repr = ChainJson;

    fn to_repr(&self) -> ChainJson {
        ChainJson {
            g: self.g,
            terms: self
                .vector
                .iter()
                .map(|(m, c)| WedgeTerm {
                    word: Some(word_string(&m.word)),
                    wedge: wedge_strings(&m.wedge),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    fn from_repr(r: ChainJson) -> Result<Self> {
        check_genus(r.g)?;
        let mut vector = LinComb::new();
        for t in r.terms {
            let word = t.word.ok_or_else(|| Error::Invalid("module chain term without a word".into()))?;
            let word = parse_word(&word, r.g)?;
            if let Some((s, w)) = parse_wedge(&t.wedge, r.g)? {
                vector.add_term(ModMono::new(word, w), s * t.coeff);
            }
        }
        Ok(ModChain { g: r.g, vector })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub g: Genus,
    #[serde(rename = "D")]
    pub degree: usize,
    pub theta: BTreeMap<String, TensorJson>,
}

impl JsonForm for Expansion {
    type Repr = ExpansionJson;

    fn to_repr(&self) -> ExpansionJson {
        ExpansionJson {
            g: self.genus(),
            degree: self.cutoff(),
            theta: self
                .images()
                .iter()
                .enumerate()
                .map(|(k, t)| (format!("x{}", k + 1), t.tensor().to_repr()))
                .collect(),
        }
    }

    fn from_repr(r: ExpansionJson) -> Result<Self> {
        check_genus(r.g)?;
        let n = 2 * r.g as usize;
        if r.theta.len() != n {
            return Err(Error::Invalid(format!("expected images of x1..x{n}")));
        }
        let mut images = Vec::with_capacity(n);
        for k in 1..=n {
            let t = r
                .theta
                .get(&format!("x{k}"))
                .ok_or_else(|| Error::Invalid(format!("missing image of x{k}")))?;
            let t = Tensor::from_repr(t.clone())?;
            if t.terms().keys().any(|w| w.weight() > r.degree) {
                return Err(Error::Invalid(format!("image of x{k} has terms above degree {}", r.degree)));
            }
            images.push(TruncatedSeries::new(t, r.degree));
        }
        Expansion::new(r.g, r.degree, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::symplectic_expansion;
    use crate::tensor::omega;

    fn nk(s: &str) -> Necklace {
        Necklace::of(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn tensor_format() {
        let t = omega(1).add(&Tensor::unit(1).scale(&Scalar::new(3, 2))).unwrap();
        let s = t.to_json();
        assert!(s.contains("\"word\": \"1\""));
        assert!(s.contains("\"coeff\": \"3/2\""));
        assert_eq!(Tensor::from_json(&s).unwrap(), t);
    }

    #[test]
    fn letters_are_checked_against_genus() {
        let s = r#"{"g":1,"terms":[{"word":"a2","coeff":"1"}]}"#;
        assert!(Tensor::from_json(s).is_err());
    }

    #[test]
    fn derivation_and_pairs_round_trip() {
        let mut u = LinComb::new();
        u.add_term(nk("b1 a1"), Scalar::new(-1, 3));
        u.add_term(nk("a1 a1 b1"), Scalar::one());
        let u = DerivationElem::from_terms(1, u).unwrap();
        assert_eq!(DerivationElem::from_json(&u.to_json()).unwrap(), u);

        let d = crate::cobracket::schedler_delta(&DerivationElem::necklace(2, nk("a1 a2 b1 b2")));
        assert_eq!(BiDerivationElem::from_json(&d.to_json()).unwrap(), d);
        let m = crate::cobracket::mu_alg(&Tensor::word(1, "a1 a1 b1".parse().unwrap()));
        assert_eq!(TensorDerivElem::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn chain_factors_are_sorted_with_sign() {
        let s = r#"{"g":1,"terms":[{"wedge":["b1","a1"],"coeff":"2"},{"wedge":["a1","a1"],"coeff":"5"}]}"#;
        let c = Chain::from_json(s).unwrap();
        let w = Wedge::normalize(smallvec::smallvec![nk("a1"), nk("b1")]).unwrap().1;
        assert_eq!(c.vector, LinComb::single(w, Scalar::from_int(-2)));
        assert_eq!(Chain::from_json(&c.to_json()).unwrap(), c);
        assert!(ModChain::from_json(s).is_err());
    }

    #[test]
    fn expansion_round_trip() {
        let th = symplectic_expansion(1, 3).unwrap();
        let s = th.to_json();
        assert!(s.contains("\"D\": 3"));
        assert_eq!(Expansion::from_json(&s).unwrap(), th);
    }
}
