//! Free-group words, expansions `π → T̂`, and the degree-by-degree
//! construction of symplectic expansions.

use std::collections::BTreeSet;
use std::fmt;

use crate::derivation::act;
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::matrix::{Basis, SparseRationalMatrix};
use crate::necklace::{necklace_basis, necklace_normal_form, DerivationElem, Necklace};
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;
use crate::tensor::{omega, Tensor};
use crate::word::{check_genus, Genus, Letter, Word};

/// A freely reduced word in `x_1^{±1}, …, x_{2g}^{±1}`, stored as signed
/// generator indices. `x_{2i−1}` is `α_i` and `x_{2i}` is `β_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupWord {
    g: Genus,
    letters: Vec<i16>,
}

impl GroupWord {
    pub fn new(g: Genus, letters: impl IntoIterator<Item = i16>) -> Result<Self> {
        check_genus(g)?;
        let mut out: Vec<i16> = Vec::new();
        for x in letters {
            if x == 0 || x.unsigned_abs() as usize > 2 * g as usize {
                return Err(Error::Invalid(format!("generator x{} out of range for g = {g}", x.unsigned_abs())));
            }
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Ok(GroupWord { g, letters: out })
    }

    pub fn empty(g: Genus) -> Self {
        GroupWord { g, letters: Vec::new() }
    }

    pub fn genus(&self) -> Genus {
        self.g
    }

    pub fn letters(&self) -> &[i16] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            g: self.g,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.g != other.g {
            return Err(Error::GenusMismatch(self.g, other.g));
        }
        Self::new(self.g, self.letters.iter().chain(&other.letters).copied())
    }

    /// `h w h⁻¹`.
    pub fn conjugate_by(&self, h: &Self) -> Result<Self> {
        h.concat(self)?.concat(&h.inverse())
    }

    /// Exponent sums of the generators.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut out = vec![0; 2 * self.g as usize];
        for &x in &self.letters {
            out[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        out
    }

    /// Parses `x1 x2 x1^-1 x2^-1`; `1` or the empty string is the identity.
    pub fn parse(g: Genus, s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let bad = || Error::Invalid(format!("bad group letter {tok:?}"));
            let body = tok.strip_prefix('x').ok_or_else(bad)?;
            let (idx, inv) = match body.strip_suffix("^-1") {
                Some(i) => (i, true),
                None => (body, false),
            };
            let k: i16 = idx.parse().map_err(|_| bad())?;
            letters.push(if inv { -k } else { k });
        }
        Self::new(g, letters)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, x) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", x.unsigned_abs())?;
            if *x < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// `ζ = ∏_i α_i β_i α_i⁻¹ β_i⁻¹`.
pub fn boundary_word(g: Genus) -> Result<GroupWord> {
    let mut letters = Vec::new();
    for i in 1..=g as i16 {
        letters.extend([2 * i - 1, 2 * i, -(2 * i - 1), -(2 * i)]);
    }
    GroupWord::new(g, letters)
}

/// The homology class `[x_k]` as a letter.
pub fn generator_class(k: usize) -> Letter {
    let i = k.div_ceil(2) as u8;
    if k % 2 == 1 {
        Letter::a(i)
    } else {
        Letter::b(i)
    }
}

/// A map from the free group determined by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    g: Genus,
    cutoff: usize,
    theta: Vec<TruncatedSeries>,
}

impl Expansion {
    pub fn new(g: Genus, cutoff: usize, theta: Vec<TruncatedSeries>) -> Result<Self> {
        check_genus(g)?;
        if theta.len() != 2 * g as usize {
            return Err(Error::Invalid(format!("expected {} generator images, got {}", 2 * g, theta.len())));
        }
        for t in &theta {
            if t.genus() != g {
                return Err(Error::GenusMismatch(g, t.genus()));
            }
            if t.constant() != Scalar::one() {
                return Err(Error::Invalid("generator images must have constant term 1".into()));
            }
        }
        let theta = theta.into_iter().map(|t| t.with_cutoff(cutoff)).collect();
        Ok(Expansion { g, cutoff, theta })
    }

    /// `θ_0(x_k) = exp([x_k])`.
    pub fn naive(g: Genus, cutoff: usize) -> Result<Self> {
        let theta = (1..=2 * g as usize)
            .map(|k| TruncatedSeries::new(Tensor::letter(g, generator_class(k)), cutoff).exp())
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, cutoff, theta)
    }

    pub fn genus(&self) -> Genus {
        self.g
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Images of `x_1, …, x_{2g}`.
    pub fn images(&self) -> &[TruncatedSeries] {
        &self.theta
    }
}

/// `θ(w)`, multiplicatively, with `θ(x⁻¹) = θ(x)⁻¹`.
pub fn evaluate(theta: &Expansion, w: &GroupWord) -> Result<TruncatedSeries> {
    if theta.g != w.g {
        return Err(Error::GenusMismatch(theta.g, w.g));
    }
    let mut out = TruncatedSeries::one(theta.g, theta.cutoff);
    for &x in &w.letters {
        let t = &theta.theta[x.unsigned_abs() as usize - 1];
        let f = if x > 0 { t.clone() } else { t.inverse()? };
        out = out.mul(&f)?;
    }
    Ok(out)
}

/// Lyndon words of length `n` on the `2g` letters ordered by code (Duval).
pub fn lyndon_words(g: Genus, n: usize) -> Vec<Word> {
    let k = 2 * g as u8;
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        if w.len() == n {
            out.push(Word::from_letters(&w.iter().map(|&c| Letter::from_code(c)).collect::<Vec<_>>()));
        }
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// `(1/n) Σ_{d|n} μ(d) k^{n/d}`.
pub fn witt_dimension(k: u64, n: usize) -> u64 {
    fn mobius(mut d: usize) -> i64 {
        let mut r = 1;
        let mut p = 2;
        while p * p <= d {
            if d % p == 0 {
                d /= p;
                if d % p == 0 {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if d > 1 {
            r = -r;
        }
        r
    }
    let total: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (k as i64).pow((n / d) as u32)).sum();
    (total / n as i64) as u64
}

fn commutator(x: &LinComb<Word>, y: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let c = ca * cb;
            out.add_term(a.concat(b), c.clone());
            out.add_term(b.concat(a), -c);
        }
    }
    out
}

fn standard_bracketing(w: &Word) -> LinComb<Word> {
    let ls = w.letters();
    if ls.len() == 1 {
        return LinComb::single(w.clone(), Scalar::one());
    }
    // w = uv with v the longest proper suffix that is a Lyndon word.
    let split = (1..ls.len())
        .find(|&i| is_lyndon(&ls[i..]))
        .expect("a single letter is Lyndon");
    commutator(
        &standard_bracketing(&Word::from_letters(&ls[..split])),
        &standard_bracketing(&Word::from_letters(&ls[split..])),
    )
}

fn is_lyndon(ls: &[Letter]) -> bool {
    (1..ls.len()).all(|i| {
        let rot: Vec<Letter> = ls[i..].iter().chain(&ls[..i]).copied().collect();
        ls < rot.as_slice()
    })
}

/// The Lyndon basis of the weight-`n` part of the free Lie algebra on `H`,
/// each element expanded into `T`.
pub fn lie_basis(g: Genus, n: usize) -> Vec<Tensor> {
    lyndon_words(g, n)
        .iter()
        .map(|w| Tensor::from_terms(g, standard_bracketing(w)).expect("letters are in range"))
        .collect()
}

/// Dynkin's test: a series without constant term is Lie iff each weight-`n`
/// part `P_n` satisfies `ρ(P_n) = n·P_n`, with `ρ` the left-normed bracketing.
pub fn is_lie(t: &Tensor) -> bool {
    if !t.coeff(&Word::empty()).is_zero() {
        return false;
    }
    for n in t.weight_support() {
        let part = t.homogeneous(n);
        let mut rho = LinComb::new();
        for (w, c) in part.terms() {
            let ls = w.letters();
            let mut acc = LinComb::single(Word::from_letters(&ls[..1]), c.clone());
            for l in &ls[1..] {
                acc = commutator(&acc, &LinComb::single(Word::from_letters(&[*l]), Scalar::one()));
            }
            rho.add_assign(&acc);
        }
        if rho != part.terms().scaled(&Scalar::from_int(n as i64)) {
            return false;
        }
    }
    true
}

/// The conditions defining a symplectic expansion, each checked exactly
/// modulo words longer than the cutoff.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExpansionCheck {
    /// `θ(x) ≡ 1 + [x]` modulo weight 2.
    pub linear_term: bool,
    pub grouplike: bool,
    /// `log θ(x)` passes the Dynkin test.
    pub lie_logarithm: bool,
    /// `θ(ζ) = e^ω`.
    pub boundary: bool,
}

impl ExpansionCheck {
    pub fn passed(&self) -> bool {
        self.linear_term && self.grouplike && self.lie_logarithm && self.boundary
    }
}

pub fn check_expansion(theta: &Expansion) -> Result<ExpansionCheck> {
    let (g, d) = (theta.g, theta.cutoff);
    let mut linear_term = true;
    let mut grouplike = true;
    let mut lie_logarithm = true;
    for (k, t) in theta.theta.iter().enumerate() {
        let expect = Tensor::unit(g).add(&Tensor::letter(g, generator_class(k + 1)))?.truncate(d);
        linear_term &= t.tensor().truncate(1) == expect;
        grouplike &= t.is_grouplike();
        lie_logarithm &= is_lie(t.log()?.tensor());
    }
    let zeta = evaluate(theta, &boundary_word(g)?)?;
    let boundary = zeta == TruncatedSeries::new(omega(g), d).exp()?;
    Ok(ExpansionCheck {
        linear_term,
        grouplike,
        lie_logarithm,
        boundary,
    })
}

fn coords_of(words: &Basis<Word>, t: &LinComb<Word>) -> crate::linalg::SparseVec {
    words.coords(t).expect("basis collects every word")
}

/// A symplectic expansion modulo `T̂_{D+1}`: `θ(x_k) = exp(ℓ_k)` with `ℓ_k`
/// Lie, corrected one weight at a time until `log θ(ζ) ≡ ω` through weight
/// `D+1`.
pub fn symplectic_expansion(g: Genus, d: usize) -> Result<Expansion> {
    solve_expansion(g, d, None::<&mut rand::rngs::mock::StepRng>)
}

/// Like [`symplectic_expansion`], but each correction also gets a random
/// element of the solution space's kernel (coefficients `±1, ±2`), so
/// different seeds give different symplectic expansions.
pub fn random_symplectic_expansion(g: Genus, d: usize, rng: &mut impl rand::Rng) -> Result<Expansion> {
    solve_expansion(g, d, Some(rng))
}

fn solve_expansion<R: rand::Rng>(g: Genus, d: usize, mut rng: Option<&mut R>) -> Result<Expansion> {
    check_genus(g)?;
    if d < 2 {
        return Err(Error::Invalid("the degree must be at least 2".into()));
    }
    let n_gen = 2 * g as usize;
    let mut logs: Vec<Tensor> = (1..=n_gen).map(|k| Tensor::letter(g, generator_class(k))).collect();
    let build = |logs: &[Tensor], cutoff: usize| -> Result<Expansion> {
        let theta = logs
            .iter()
            .map(|l| TruncatedSeries::new(l.clone(), cutoff).exp())
            .collect::<Result<Vec<_>>>()?;
        Expansion::new(g, cutoff, theta)
    };
    let zeta = boundary_word(g)?;
    let om = omega(g);
    // The degree-n part of ℓ first shows up in log θ(ζ) at weight n+1. Going
    // up to n = D makes the output the truncation of a genuine symplectic
    // expansion, so any two outputs are related by some e^u.
    for n in 2..=d {
        let theta = build(&logs, n + 1)?;
        let log_zeta = evaluate(&theta, &zeta)?.log()?;
        let diff = log_zeta.tensor().sub(&om)?;
        if !diff.truncate(n).is_zero() {
            return Err(Error::SolveFailed(n));
        }
        let r = diff.homogeneous(n + 1);
        if r.is_zero() && rng.is_none() {
            continue;
        }
        // Unknowns: a Lyndon-basis element of weight n added to one ℓ_k.
        // Adding v to ℓ(α_i) moves log θ(ζ) by [v, B_i], adding it to
        // ℓ(β_i) moves it by [A_i, v].
        let basis = lie_basis(g, n);
        let mut columns = Vec::new();
        for k in 1..=n_gen {
            let i = k.div_ceil(2) as u8;
            for v in &basis {
                columns.push(if k % 2 == 1 {
                    commutator(v.terms(), Tensor::letter(g, Letter::b(i)).terms())
                } else {
                    commutator(Tensor::letter(g, Letter::a(i)).terms(), v.terms())
                });
            }
        }
        let words: BTreeSet<Word> = columns.iter().flat_map(|c| c.keys().cloned()).chain(r.terms().keys().cloned()).collect();
        let words = Basis::new(words.into_iter().collect());
        let m = SparseRationalMatrix::from_columns(words.len(), columns.iter().map(|c| coords_of(&words, c)).collect());
        let mut x: LinComb<u32> = m
            .solve(&coords_of(&words, &r.neg().into_terms()))
            .ok_or(Error::SolveFailed(n))?
            .into_iter()
            .collect();
        if let Some(rng) = rng.as_deref_mut() {
            for k in m.kernel_basis() {
                let c = Scalar::from_int(rng.gen_range(1..=2) * if rng.gen() { 1 } else { -1 });
                for (j, v) in k {
                    x.add_term(j, &c * &v);
                }
            }
        }
        for (j, c) in &x {
            let (k, b) = (*j as usize / basis.len(), *j as usize % basis.len());
            logs[k] = logs[k].add(&basis[b].scale(c))?;
        }
    }
    let theta = build(&logs, d)?;
    if !check_expansion(&theta)?.passed() {
        return Err(Error::SolveFailed(d));
    }
    Ok(theta)
}

/// `e^{D_u}(s)`, the exponential of the derivation `D_u` applied to `s`.
pub fn exp_derivation(u: &LinComb<Necklace>, s: &TruncatedSeries) -> TruncatedSeries {
    let d = s.cutoff();
    let mut out = s.tensor().terms().clone();
    let mut term = out.clone();
    for k in 1.. {
        term = act(u, &term).filter(|w| w.weight() <= d).scaled(&Scalar::new(1, k));
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
    }
    TruncatedSeries::new(Tensor::from_terms(s.genus(), out).expect("letters stay in range"), d)
}

/// `e^u ∘ θ`. Every component of `u` must have weight at least 3.
pub fn transform(theta: &Expansion, u: &DerivationElem) -> Result<Expansion> {
    if u.genus() != theta.g {
        return Err(Error::GenusMismatch(theta.g, u.genus()));
    }
    if let Some(m) = u.min_weight() {
        if m < 3 {
            return Err(Error::MinWeightTooLow(m));
        }
    }
    let images = theta.theta.iter().map(|t| exp_derivation(u.terms(), t)).collect();
    Expansion::new(theta.g, theta.cutoff, images)
}

/// The `u` with components of weight `3..=D+1` and `θ′ = e^u ∘ θ` modulo
/// `T̂_{D+1}`. Solved one weight at a time: the weight-`(k+1)` part of `u`
/// first shows up in weight `k` of `e^u θ(x)`, through `D_u([x])`.
pub fn compare_expansions(theta: &Expansion, theta2: &Expansion) -> Result<DerivationElem> {
    if theta.g != theta2.g {
        return Err(Error::GenusMismatch(theta.g, theta2.g));
    }
    if theta.cutoff != theta2.cutoff {
        return Err(Error::Inconsistent(format!("cutoffs {} and {} differ", theta.cutoff, theta2.cutoff)));
    }
    let (g, d) = (theta.g, theta.cutoff);
    let n_gen = 2 * g as usize;
    let mut u: LinComb<Necklace> = LinComb::new();
    for k in 1..=d {
        let current = transform(theta, &DerivationElem::from_terms(g, u.clone())?)?;
        let gaps: Vec<LinComb<Word>> = (0..n_gen)
            .map(|i| {
                let diff = theta2.theta[i].tensor().sub(current.theta[i].tensor()).expect("same genus");
                diff.homogeneous(k).into_terms()
            })
            .collect();
        if k == 1 {
            if gaps.iter().any(|x| !x.is_zero()) {
                return Err(Error::Inconsistent("the linear terms differ".into()));
            }
            continue;
        }
        if gaps.iter().all(LinComb::is_zero) {
            continue;
        }
        // Unknowns: necklaces of weight k+1; equations: the weight-k words of
        // D_N([x_i]) for every generator, stacked.
        let necklaces = necklace_basis(g, k + 1);
        let tag = |i: usize, w: &Word| {
            let mut key = Word::from_letters(&[generator_class(i + 1)]);
            key.0.extend(w.letters().iter().copied());
            key
        };
        let stack = |vals: &[LinComb<Word>]| -> LinComb<Word> {
            let mut out = LinComb::new();
            for (i, v) in vals.iter().enumerate() {
                for (w, c) in v {
                    out.add_term(tag(i, w), c.clone());
                }
            }
            out
        };
        let columns: Vec<LinComb<Word>> = necklaces
            .iter()
            .map(|n| {
                let u1 = LinComb::single(n.clone(), Scalar::one());
                let vals: Vec<LinComb<Word>> = (0..n_gen)
                    .map(|i| act(&u1, &LinComb::single(Word::from_letters(&[generator_class(i + 1)]), Scalar::one())))
                    .collect();
                stack(&vals)
            })
            .collect();
        let target = stack(&gaps);
        let words: BTreeSet<Word> = columns.iter().flat_map(|c| c.keys().cloned()).chain(target.keys().cloned()).collect();
        let words = Basis::new(words.into_iter().collect());
        let m = SparseRationalMatrix::from_columns(words.len(), columns.iter().map(|c| coords_of(&words, c)).collect());
        let x = m
            .solve(&coords_of(&words, &target))
            .ok_or_else(|| Error::Inconsistent(format!("no derivation matches the weight-{k} terms")))?;
        for (j, c) in x {
            u.add_term(necklaces[j as usize].clone(), c);
        }
    }
    let result = DerivationElem::from_terms(g, u)?;
    if transform(theta, &result)? != *theta2 {
        return Err(Error::Inconsistent("the recovered derivation does not reproduce the target".into()));
    }
    Ok(result)
}

/// `−N(θ(w))` in necklace form.
pub fn loop_tensor(theta: &Expansion, w: &GroupWord) -> Result<DerivationElem> {
    let t = evaluate(theta, w)?;
    let positive = t.tensor().terms().filter(|x| !x.is_empty());
    let n = Tensor::from_terms(theta.g, positive)?.cyclicize();
    Ok(necklace_normal_form(&n)?.neg())
}
