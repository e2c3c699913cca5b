use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use necklace_core::cobracket::{BiDerivationElem, TensorDerivElem};
use necklace_core::complex::{cochain_d, mod_cochain_d, AlgDelta, AlgMu, Cobracket, Coaction, LieComplex, ModuleComplex};
use necklace_core::deformation::{
    check_conditions, deform_delta, deform_mu, homotopy_check, verify_deformation_invariance, Caches, DeformationElement,
    InvarianceRange, InvarianceReport,
};
use necklace_core::derivation::bracket;
use necklace_core::expansion::{
    compare_expansions, loop_tensor, random_symplectic_expansion, symplectic_expansion, Expansion, GroupWord,
};
use necklace_core::homology::homology_report;
use necklace_core::json::{Chain, ChainJson, JsonForm};
use necklace_core::verify::{
    bialgebra_suite, bimodule_suite, bracket_oracle_suite, chain_identities, CheckResult, ComplexKind, SuiteReport,
};
use necklace_core::wedge::ChainVector;
use necklace_core::{DerivationElem, Error, Genus, LinComb, Result, Tensor};

use crate::parse::{parse_element, Element};
use crate::table;
use crate::{Cli, Command, Format, Handles, Suite};

/// Rendered output and whether every checked identity held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

/// Exit status for an error: 2 for bad input, 1 for a failed computation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Invalid(_)
        | Error::InvalidGenus
        | Error::GenusMismatch(..)
        | Error::LetterOutOfRange { .. }
        | Error::MinWeightTooLow(_)
        | Error::BeyondCutoff { .. } => 2,
        _ => 1,
    }
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("plain data serializes");
    s.push('\n');
    s
}

fn render<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String, ok: bool) -> Outcome {
    let text = match format {
        Format::Json => json(value),
        Format::Table => table(),
    };
    Outcome { text, ok }
}

/// A report together with the command that produced it and the seed.
#[derive(Serialize)]
struct Envelope<'a, T> {
    command: &'a str,
    seed: u64,
    report: T,
}

fn derivation(text: &str, g: Genus) -> Result<DerivationElem> {
    match parse_element(text, g)? {
        Element::Derivation(u) => Ok(u),
        other => Err(Error::Invalid(format!("`{text}` is a {}, expected necklaces", other.kind()))),
    }
}

fn tensor(text: &str, g: Genus) -> Result<Tensor> {
    match parse_element(text, g)? {
        Element::Tensor(t) => Ok(t),
        other => Err(Error::Invalid(format!("`{text}` is a {}, expected words", other.kind()))),
    }
}

/// A chain in Λ²; a single necklace sum is rejected.
fn chain(text: &str, g: Genus) -> Result<ChainVector> {
    match parse_element(text, g)? {
        Element::Chain(c) => Ok(c.vector),
        other => Err(Error::Invalid(format!("`{text}` is a {}, expected wedges N(..)^N(..)", other.kind()))),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_chain(path: &Path, g: Genus) -> Result<ChainVector> {
    let c = Chain::from_json(&read(path)?)?;
    if c.g != g {
        return Err(Error::GenusMismatch(g, c.g));
    }
    Ok(c.vector)
}

fn deformed_file(spec: &str) -> Result<Option<&Path>> {
    match spec {
        "alg" => Ok(None),
        s => match s.strip_prefix("deformed:") {
            Some(f) if !f.is_empty() => Ok(Some(Path::new(f))),
            _ => Err(Error::Invalid(format!("handle must be `alg` or `deformed:<file>`, got `{s}`"))),
        },
    }
}

fn delta_handle(h: &Handles, g: Genus) -> Result<Box<dyn Cobracket>> {
    Ok(match deformed_file(&h.delta)? {
        None => Box::new(AlgDelta),
        Some(f) => Box::new(deform_delta(&DeformationElement::new(load_chain(f, g)?)?)?),
    })
}

fn mu_handle(h: &Handles, g: Genus) -> Result<Box<dyn Coaction>> {
    Ok(match deformed_file(&h.mu)? {
        None => Box::new(AlgMu),
        Some(f) => Box::new(deform_mu(&load_chain(f, g)?)?),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let f = cli.format;
    match &cli.command {
        Command::Bracket { genus, x, y } => {
            let r = bracket(&derivation(x, genus.g)?, &derivation(y, genus.g)?)?;
            Ok(render(f, &r.to_repr(), || table::derivation(&r), true))
        }
        Command::Cobracket { genus, x, handles } => {
            let g = genus.g;
            let u = derivation(x, g)?;
            let delta = delta_handle(handles, g)?;
            let mut terms = LinComb::new();
            for (n, c) in u.terms() {
                for (w, cw) in &delta.delta(n) {
                    let (p, q) = (&w.factors()[0], &w.factors()[1]);
                    let k = c * cw;
                    terms.add_term((p.clone(), q.clone()), k.clone());
                    terms.add_term((q.clone(), p.clone()), -k);
                }
            }
            let r = BiDerivationElem { g, terms };
            Ok(render(f, &r.to_repr(), || table::pairs(&r), true))
        }
        Command::Mu { genus, m, handles } => {
            let g = genus.g;
            let t = tensor(m, g)?;
            let mu = mu_handle(handles, g)?;
            let mut terms = LinComb::new();
            for (w, c) in t.terms() {
                for (mm, cm) in &mu.mu(w) {
                    terms.add_term((mm.word.clone(), mm.wedge.factors()[0].clone()), c * cm);
                }
            }
            let r = TensorDerivElem { g, terms };
            Ok(render(f, &r.to_repr(), || table::tensor_deriv(&r), true))
        }
        Command::Verify {
            suite,
            genus,
            w,
            p,
            samples,
            a,
            b,
        } => {
            let report = verify(*suite, genus.g, *w, *p, *samples, a, b.as_deref(), cli.seed)?;
            let ok = report.passed;
            Ok(render(f, &report, || table::suite(&report), ok))
        }
        Command::Homology {
            genus,
            p,
            w,
            module,
            handles,
        } => {
            let g = genus.g;
            let delta = delta_handle(handles, g)?;
            let report = if *module {
                let mu = mu_handle(handles, g)?;
                homology_report(&ModuleComplex { g }, p.clone(), w.clone(), |x| mod_cochain_d(x, delta.as_ref(), mu.as_ref()))?
            } else {
                homology_report(&LieComplex { g }, p.clone(), w.clone(), |x| cochain_d(x, delta.as_ref()))?
            };
            let ok = report.consistent();
            let env = Envelope {
                command: "homology",
                seed: cli.seed,
                report: &report,
            };
            Ok(render(f, &env, || table::homology(&report), ok))
        }
        Command::Deform {
            genus,
            a,
            b,
            check_lemma31,
            p,
            w,
            module,
            save_handle,
        } => {
            let report = deform(genus.g, a, b.as_deref(), *check_lemma31, *p, *w, module.as_deref())?;
            if let Some(path) = save_handle {
                let c = Chain {
                    g: genus.g,
                    vector: chain(a, genus.g)?,
                };
                fs::write(path, c.to_json() + "\n")
                    .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            let ok = report.passed;
            let env = Envelope {
                command: "deform",
                seed: cli.seed,
                report: &report,
            };
            Ok(render(f, &env, || table::deform(&report), ok))
        }
        Command::Expand { genus, degree, random } => {
            let th = if *random {
                random_symplectic_expansion(genus.g, *degree, &mut ChaCha8Rng::seed_from_u64(cli.seed))?
            } else {
                symplectic_expansion(genus.g, *degree)?
            };
            Ok(render(f, &th.to_repr(), || table::expansion(&th), true))
        }
        Command::Compare { theta, theta_prime } => {
            let t1 = Expansion::from_json(&read(theta)?)?;
            let t2 = Expansion::from_json(&read(theta_prime)?)?;
            let u = compare_expansions(&t1, &t2)?;
            Ok(render(f, &u.to_repr(), || table::derivation(&u), true))
        }
        Command::Loop { theta, word } => {
            let th = Expansion::from_json(&read(theta)?)?;
            let w = GroupWord::parse(th.genus(), word)?;
            let u = loop_tensor(&th, &w)?;
            Ok(render(f, &u.to_repr(), || table::derivation(&u), true))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(suite: Suite, g: Genus, w: usize, p: usize, samples: usize, a: &str, b: Option<&str>, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match suite {
        Suite::Bialgebra => bialgebra_suite(g, w, samples, seed, &mut rng),
        Suite::Bracket => bracket_oracle_suite(g, w, samples, seed, &mut rng),
        Suite::Bimodule => bimodule_suite(g, w, samples, seed, &mut rng),
        Suite::Complex => {
            let mut checks = Vec::new();
            for (kind, label) in [(ComplexKind::Lie, "Lie"), (ComplexKind::Module, "module")] {
                for mut c in chain_identities(kind, g, p, w) {
                    c.name = format!("{label}: {}", c.name);
                    checks.push(c);
                }
            }
            SuiteReport::new("complex", g, w, seed, 0, checks)
        }
        Suite::Deformation => {
            let av = chain(a, g)?;
            let bv = match b {
                Some(b) => chain(b, g)?,
                None => av.clone(),
            };
            let el = DeformationElement::new(av.clone())?;
            let mut checks = vec![CheckResult::new(
                "A in N(g)",
                1,
                usize::from(!el.in_n),
                (!el.in_n).then(|| Error::NotInN.to_string()),
            )];
            let cells: Vec<(usize, usize)> = (0..=p.min(2)).flat_map(|p| (0..=w).map(move |w| (p, w))).collect();
            let mut bad = Vec::new();
            for &(cp, cw) in &cells {
                if !homotopy_check(g, &av, cp, cw)? {
                    bad.push((cp, cw));
                }
            }
            checks.push(CheckResult::new(
                "homotopy identity",
                cells.len(),
                bad.len(),
                bad.first().map(|c| format!("{c:?}")),
            ));
            if el.in_n {
                let delta = deform_delta(&el)?;
                let mu = deform_mu(&bv)?;
                for c in check_conditions(g, &delta, Some(&mu), &av, &bv, w) {
                    let r = CheckResult::new(&c.clause, 1, usize::from(!c.passed), None);
                    checks.push(if c.required { r } else { r.informational() });
                }
            }
            SuiteReport::new("deformation", g, w, seed, 0, checks)
        }
    })
}

/// Result of the `deform` command.
#[derive(Clone, Debug, Serialize)]
pub struct DeformReport {
    pub g: Genus,
    #[serde(rename = "A")]
    pub a: ChainJson,
    #[serde(rename = "B")]
    pub b: ChainJson,
    pub in_n: bool,
    /// Homotopy identity per cell, when requested.
    pub homotopy: Vec<HomotopyCell>,
    pub invariance: Option<InvarianceReport>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyCell {
    pub p: usize,
    pub w: usize,
    pub holds: bool,
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Invalid(format!("expected `p,w`, got `{s}`"));
    let (p, w) = s.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, w.trim().parse().map_err(|_| bad())?))
}

fn deform(g: Genus, a: &str, b: Option<&str>, lemma: bool, p: usize, w: usize, module: Option<&str>) -> Result<DeformReport> {
    let av = chain(a, g)?;
    let bv = match b {
        Some(b) => chain(b, g)?,
        None => av.clone(),
    };
    let module = module.map(parse_pair).transpose()?;
    let el = DeformationElement::new(av.clone())?;
    let mut homotopy = Vec::new();
    if lemma {
        for cp in 0..=p {
            for cw in 0..=w {
                homotopy.push(HomotopyCell {
                    p: cp,
                    w: cw,
                    holds: homotopy_check(g, &av, cp, cw)?,
                });
            }
        }
    }
    let (invariance, error) = if el.in_n {
        let range = InvarianceRange {
            p_max: p,
            w_max: w,
            module,
            condition_weight: w,
        };
        match verify_deformation_invariance(&el, &bv, range, &mut Caches::new(g)) {
            Ok(r) => (Some(r), None),
            Err(e @ (Error::ConditionFailed(_) | Error::NotChainMap { .. })) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        }
    } else {
        (None, Some(Error::NotInN.to_string()))
    };
    let passed = error.is_none() && homotopy.iter().all(|h| h.holds) && invariance.as_ref().is_none_or(|r| r.passed);
    Ok(DeformReport {
        g,
        a: Chain { g, vector: av }.to_repr(),
        b: Chain { g, vector: bv }.to_repr(),
        in_n: el.in_n,
        homotopy,
        invariance,
        error,
        passed,
    })
}
