//! Property suites over basis elements and seeded random samples. Each
//! check counts its samples and failures and keeps the first failing input.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cobracket::{bimodule_defect, coaction_defect, cojacobi_defect, mu_alg, schedler_delta};
use crate::complex::{boundary_mono, cochain_d_mono, mod_boundary_mono, mod_cochain_d_mono, AlgDelta, AlgMu};
use crate::derivation::{act, bracket, bracket_commutator, derivation_apply};
use crate::lincomb::LinComb;
use crate::matrix::{assemble, Basis, SparseRationalMatrix};
use crate::necklace::{necklace_basis, DerivationElem, Necklace};
use crate::scalar::Scalar;
use crate::tensor::{omega, Tensor};
use crate::wedge::{mod_basis, wedge_basis, ModMono, Monomial, Wedge};
use crate::word::{Genus, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    /// Informational checks are reported but do not decide the outcome.
    #[serde(default = "yes")]
    pub gating: bool,
}

fn yes() -> bool {
    true
}

impl CheckResult {
    pub fn new(name: &str, samples: usize, failures: usize, first_failure: Option<String>) -> Self {
        CheckResult {
            name: name.into(),
            samples,
            failures,
            first_failure,
            gating: true,
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub g: Genus,
    pub max_weight: usize,
    pub seed: u64,
    pub random_samples: usize,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, g: Genus, max_weight: usize, seed: u64, random_samples: usize, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().filter(|c| c.gating).all(CheckResult::passed);
        SuiteReport {
            suite: suite.into(),
            g,
            max_weight,
            seed,
            random_samples,
            checks,
            passed,
        }
    }
}

/// Runs `holds` on every sample in parallel.
pub fn run_check<T: Sync + std::fmt::Debug>(name: &str, samples: &[T], holds: impl Fn(&T) -> bool + Sync) -> CheckResult {
    let bad: Vec<usize> = samples
        .par_iter()
        .enumerate()
        .filter(|(_, s)| !holds(s))
        .map(|(i, _)| i)
        .collect();
    CheckResult::new(name, samples.len(), bad.len(), bad.first().map(|&i| format!("{:?}", samples[i])))
}

/// Basis necklaces of weight `1..=max`.
pub fn basis_upto(g: Genus, max: usize) -> Vec<Necklace> {
    (1..=max).flat_map(|m| necklace_basis(g, m)).collect()
}

/// Unordered pairs of basis necklaces with weight sum at most `max_sum`.
pub fn basis_pairs(g: Genus, max_sum: usize) -> Vec<(Necklace, Necklace)> {
    let all = basis_upto(g, max_sum.saturating_sub(1));
    let mut out = Vec::new();
    for (i, x) in all.iter().enumerate() {
        for y in &all[i..] {
            if x.weight() + y.weight() <= max_sum {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

/// Unordered triples of basis necklaces with weight sum at most `max_sum`.
pub fn basis_triples(g: Genus, max_sum: usize) -> Vec<(Necklace, Necklace, Necklace)> {
    let all = basis_upto(g, max_sum.saturating_sub(2));
    let mut out = Vec::new();
    for (i, x) in all.iter().enumerate() {
        for (j, y) in all.iter().enumerate().skip(i) {
            if x.weight() + y.weight() + 1 > max_sum {
                continue;
            }
            for z in &all[j..] {
                if x.weight() + y.weight() + z.weight() <= max_sum {
                    out.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    out
}

pub fn random_word(g: Genus, rng: &mut impl Rng, min: usize, max: usize) -> Word {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| Letter::from_code(rng.gen_range(0..2 * g))).collect()
}

/// One to three necklaces of weight `1..=max` with nonzero coefficients in
/// `-3..=3`.
pub fn random_derivation(g: Genus, rng: &mut impl Rng, max: usize) -> DerivationElem {
    let mut terms = LinComb::new();
    for _ in 0..rng.gen_range(1..=3) {
        let n = Necklace::of(&random_word(g, rng, 1, max)).expect("nonempty");
        let c = rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 };
        terms.add_term(n, Scalar::from_int(c));
    }
    DerivationElem::from_terms(g, terms).expect("letters in range")
}

/// One to three words of weight `0..=max`.
pub fn random_tensor(g: Genus, rng: &mut impl Rng, max: usize) -> Tensor {
    let mut terms = LinComb::new();
    for _ in 0..rng.gen_range(1..=3) {
        let c = rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 };
        terms.add_term(random_word(g, rng, 0, max), Scalar::from_int(c));
    }
    Tensor::from_terms(g, terms).expect("letters in range")
}

fn de(g: Genus, n: &Necklace) -> DerivationElem {
    DerivationElem::necklace(g, n.clone())
}

fn skew(x: &DerivationElem, y: &DerivationElem) -> bool {
    bracket(x, y).unwrap() == bracket(y, x).unwrap().neg()
}

fn jacobi(x: &DerivationElem, y: &DerivationElem, z: &DerivationElem) -> bool {
    let b = |u: &DerivationElem, v: &DerivationElem| bracket(u, v).unwrap();
    let s = b(&b(x, y), z).add(&b(&b(y, z), x)).unwrap().add(&b(&b(z, x), y)).unwrap();
    s.is_zero()
}

fn coskew(x: &DerivationElem) -> bool {
    let d = schedler_delta(x);
    d.swap().terms == d.terms.neg()
}

fn cojacobi(x: &DerivationElem) -> bool {
    cojacobi_defect(x.terms()).is_zero()
}

fn compatibility(x: &DerivationElem, y: &DerivationElem) -> bool {
    let lhs = schedler_delta(&bracket(x, y).unwrap());
    let rhs = schedler_delta(y).sigma(x).unwrap().terms.diff(&schedler_delta(x).sigma(y).unwrap().terms);
    lhs.terms == rhs
}

fn involutive(x: &DerivationElem) -> bool {
    schedler_delta(x).contract().is_zero()
}

fn bracket_matches_commutator(x: &DerivationElem, y: &DerivationElem) -> bool {
    bracket(x, y).unwrap() == bracket_commutator(x, y).unwrap()
}

fn kills_omega(x: &DerivationElem) -> bool {
    derivation_apply(x, &omega(x.genus())).unwrap().is_zero()
}

/// Samples shared by the bialgebra checks.
struct Samples {
    singles: Vec<DerivationElem>,
    pairs: Vec<(DerivationElem, DerivationElem)>,
    triples: Vec<(DerivationElem, DerivationElem, DerivationElem)>,
}

fn bialgebra_samples(g: Genus, max_weight: usize, random: usize, rng: &mut impl Rng) -> Samples {
    let mut singles: Vec<DerivationElem> = basis_upto(g, max_weight).iter().map(|n| de(g, n)).collect();
    let mut pairs: Vec<_> = basis_pairs(g, max_weight).iter().map(|(x, y)| (de(g, x), de(g, y))).collect();
    let mut triples: Vec<_> = basis_triples(g, max_weight)
        .iter()
        .map(|(x, y, z)| (de(g, x), de(g, y), de(g, z)))
        .collect();
    let rw = max_weight.clamp(1, 5);
    for _ in 0..random {
        singles.push(random_derivation(g, rng, max_weight.max(1)));
        pairs.push((random_derivation(g, rng, rw), random_derivation(g, rng, rw)));
        triples.push((
            random_derivation(g, rng, rw.min(4)),
            random_derivation(g, rng, rw.min(4)),
            random_derivation(g, rng, rw.min(4)),
        ));
    }
    Samples { singles, pairs, triples }
}

/// Lie bialgebra axioms for `(a_g⁻, [,], δ^alg)`: all basis necklaces of
/// weight at most `max_weight`, all basis pairs and triples with weight sum at
/// most `max_weight`, and `random` seeded samples of each kind.
pub fn bialgebra_suite(g: Genus, max_weight: usize, random: usize, seed: u64, rng: &mut impl Rng) -> SuiteReport {
    let s = bialgebra_samples(g, max_weight, random, rng);
    let checks = vec![
        run_check("skew", &s.pairs, |(x, y)| skew(x, y)),
        run_check("Jacobi", &s.triples, |(x, y, z)| jacobi(x, y, z)),
        run_check("coskew", &s.singles, coskew),
        run_check("coJacobi", &s.singles, cojacobi),
        run_check("compatibility", &s.pairs, |(x, y)| compatibility(x, y)),
        run_check("involutivity", &s.singles, involutive),
    ];
    SuiteReport::new("bialgebra", g, max_weight, seed, random, checks)
}

/// The closed-form bracket against the commutator of derivations on all
/// basis pairs with weight sum at most `max_sum`, and `D_u(ω) = 0` on every
/// basis necklace of weight below `max_sum`.
pub fn bracket_oracle_suite(g: Genus, max_sum: usize, random: usize, seed: u64, rng: &mut impl Rng) -> SuiteReport {
    let mut pairs: Vec<_> = basis_pairs(g, max_sum).iter().map(|(x, y)| (de(g, x), de(g, y))).collect();
    let mut singles: Vec<DerivationElem> = basis_upto(g, max_sum.saturating_sub(1)).iter().map(|n| de(g, n)).collect();
    for _ in 0..random {
        pairs.push((random_derivation(g, rng, 5), random_derivation(g, rng, 4)));
        singles.push(random_derivation(g, rng, max_sum.saturating_sub(1).max(1)));
    }
    let checks = vec![
        run_check("bracket = commutator of derivations", &pairs, |(x, y)| bracket_matches_commutator(x, y)),
        run_check("derivations kill omega", &singles, kills_omega),
    ];
    SuiteReport::new("bracket-oracle", g, max_sum, seed, random, checks)
}

fn module_axiom(x: &DerivationElem, y: &DerivationElem, m: &Tensor) -> bool {
    let xy = bracket(x, y).unwrap();
    let lhs = act(xy.terms(), m.terms());
    let rhs = act(x.terms(), &act(y.terms(), m.terms())).diff(&act(y.terms(), &act(x.terms(), m.terms())));
    lhs == rhs
}

/// Involutive bimodule axioms for `(T, σ, μ^alg)`: every word of weight at
/// most `max_weight` for the comodule and involutivity identities, words and
/// basis necklaces with weight sum at most `max_weight` for the module and
/// compatibility identities, plus `random` seeded samples of each.
pub fn bimodule_suite(g: Genus, max_weight: usize, random: usize, seed: u64, rng: &mut impl Rng) -> SuiteReport {
    let mut words: Vec<Tensor> = (0..=max_weight).flat_map(|m| Word::all(g, m)).map(|w| Tensor::word(g, w)).collect();
    let basis = basis_upto(g, max_weight);
    let mut acting: Vec<(DerivationElem, Tensor)> = Vec::new();
    for n in &basis {
        for m in 0..=max_weight - n.weight() {
            for w in Word::all(g, m) {
                acting.push((de(g, n), Tensor::word(g, w)));
            }
        }
    }
    let mut triples: Vec<(DerivationElem, DerivationElem, Tensor)> = Vec::new();
    for (x, y) in basis_pairs(g, max_weight) {
        for m in 0..=max_weight - x.weight() - y.weight() {
            for w in Word::all(g, m) {
                triples.push((de(g, &x), de(g, &y), Tensor::word(g, w)));
            }
        }
    }
    let rw = max_weight.clamp(1, 5);
    for _ in 0..random {
        words.push(random_tensor(g, rng, max_weight));
        acting.push((random_derivation(g, rng, rw), random_tensor(g, rng, rw)));
        triples.push((
            random_derivation(g, rng, rw.min(4)),
            random_derivation(g, rng, rw.min(4)),
            random_tensor(g, rng, rw),
        ));
    }
    let checks = vec![
        run_check("module axiom", &triples, |(x, y, m)| module_axiom(x, y, m)),
        run_check("comodule", &words, |t| {
            t.terms().iter().fold(LinComb::new(), |mut acc, (w, c)| {
                acc.add_scaled(&coaction_defect(w), c);
                acc
            }).is_zero()
        }),
        run_check("compatibility", &acting, |(y, m)| bimodule_defect(m, y).unwrap().is_zero()),
        run_check("involutivity", &words, |t| mu_alg(t).sigma_bar().is_zero()),
    ];
    SuiteReport::new("bimodule", g, max_weight, seed, random, checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn pair_and_triple_enumeration() {
        let n1 = necklace_basis(1, 1).len();
        let n2 = necklace_basis(1, 2).len();
        // Pairs with weight sum ≤ 3: {1,1} unordered and 1×2.
        assert_eq!(basis_pairs(1, 3).len(), n1 * (n1 + 1) / 2 + n1 * n2);
        assert_eq!(basis_triples(1, 3).len(), n1 * (n1 + 1) * (n1 + 2) / 6);
    }

    #[test]
    fn suites_pass_on_small_ranges() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for g in 1..=2 {
            assert!(bialgebra_suite(g, 5, 20, 5, &mut rng).passed);
            assert!(bimodule_suite(g, 4, 20, 5, &mut rng).passed);
            assert!(bracket_oracle_suite(g, 5, 20, 5, &mut rng).passed);
            for kind in [ComplexKind::Lie, ComplexKind::Module] {
                assert!(chain_identities(kind, g, 3, 6).iter().all(CheckResult::passed));
            }
        }
    }
}

/// Which complex [`chain_identities`] runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexKind {
    /// `Λ* a_g⁻` with `∂` and `d(δ^alg)`.
    Lie,
    /// `T ⊗ Λ* a_g⁻` with `∂^M` and `d(δ^alg, μ^alg)`.
    Module,
}

fn cell_matrix<M, F>(basis: &dyn Fn(usize, usize) -> Vec<M>, src: (usize, usize), tgt: (usize, usize), op: F) -> SparseRationalMatrix
where
    M: Monomial,
    F: Fn(&M) -> LinComb<M> + Sync,
{
    let source = basis(src.0, src.1);
    let target = Basis::new(basis(tgt.0, tgt.1));
    assemble(&source, &target, op).expect("operators stay inside the target cell")
}

fn identities_on<M, B, D>(p_max: usize, w_max: usize, basis: &dyn Fn(usize, usize) -> Vec<M>, bd: B, cd: D) -> Vec<CheckResult>
where
    M: Monomial,
    B: Fn(&M) -> LinComb<M> + Sync + Copy,
    D: Fn(&M) -> LinComb<M> + Sync + Copy,
{
    let cells: Vec<(usize, usize)> = (0..=p_max).flat_map(|p| (0..=w_max).map(move |w| (p, w))).collect();
    let ok_dd_boundary = |&(p, w): &(usize, usize)| {
        if p < 2 || w < 4 {
            return true;
        }
        let first = cell_matrix(basis, (p, w), (p - 1, w - 2), bd);
        let second = cell_matrix(basis, (p - 1, w - 2), (p - 2, w - 4), bd);
        second.mul(&first).expect("shapes agree").is_zero()
    };
    let ok_dd = |&(p, w): &(usize, usize)| {
        if w < 4 {
            return true;
        }
        let first = cell_matrix(basis, (p, w), (p + 1, w - 2), cd);
        let second = cell_matrix(basis, (p + 1, w - 2), (p + 2, w - 4), cd);
        second.mul(&first).expect("shapes agree").is_zero()
    };
    let ok_mixed = |&(p, w): &(usize, usize)| {
        if w < 4 {
            return true;
        }
        let d_then_b = cell_matrix(basis, (p + 1, w - 2), (p, w - 4), bd).mul(&cell_matrix(basis, (p, w), (p + 1, w - 2), cd))
            .expect("shapes agree");
        if p == 0 {
            return d_then_b.is_zero();
        }
        let b_then_d = cell_matrix(basis, (p - 1, w - 2), (p, w - 4), cd).mul(&cell_matrix(basis, (p, w), (p - 1, w - 2), bd))
            .expect("shapes agree");
        d_then_b.add(&b_then_d).expect("shapes agree").is_zero()
    };
    vec![
        run_check_seq("boundary squares to zero", &cells, ok_dd_boundary),
        run_check_seq("coboundary squares to zero", &cells, ok_dd),
        run_check_seq("d∂ + ∂d = 0", &cells, ok_mixed),
    ]
}

/// Like [`run_check`], but one sample at a time; the samples here are cells
/// whose matrices are assembled in parallel.
fn run_check_seq<T: std::fmt::Debug>(name: &str, samples: &[T], holds: impl Fn(&T) -> bool) -> CheckResult {
    let bad: Vec<usize> = (0..samples.len()).filter(|&i| !holds(&samples[i])).collect();
    CheckResult::new(name, samples.len(), bad.len(), bad.first().map(|&i| format!("{:?}", samples[i])))
}

/// `∂∂ = 0`, `dd = 0` and `d∂ + ∂d = 0` as products of assembled matrices,
/// starting from every cell `(p, w)` with `p ≤ p_max`, `w ≤ w_max`. A
/// sample is the cell `(p, w)`.
pub fn chain_identities(kind: ComplexKind, g: Genus, p_max: usize, w_max: usize) -> Vec<CheckResult> {
    match kind {
        ComplexKind::Lie => identities_on(
            p_max,
            w_max,
            &|p, w| wedge_basis(g, p, w),
            boundary_mono,
            |x: &Wedge| cochain_d_mono(x, &AlgDelta),
        ),
        ComplexKind::Module => identities_on(
            p_max,
            w_max,
            &|p, w| mod_basis(g, p, w),
            mod_boundary_mono,
            |x: &ModMono| mod_cochain_d_mono(x, &AlgDelta, &AlgMu),
        ),
    }
}
