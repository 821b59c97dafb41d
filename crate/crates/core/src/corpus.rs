//! Seeded Fermat-type inputs for property testing.

use crate::error::{Error, Result};
use crate::geometry::{base_change, jacobian_singular_primes, reduce_structure};
use crate::input::{build, AmbientSection, BaseChangeSection, FieldSection, Input, InputFile, SchemeSection};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    FermatHypersurface,
    FermatProduct,
    MixedLevel,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::FermatHypersurface, Profile::FermatProduct, Profile::MixedLevel];

    pub fn name(self) -> &'static str {
        match self {
            Profile::FermatHypersurface => "fermat-hypersurface",
            Profile::FermatProduct => "fermat-product",
            Profile::MixedLevel => "mixed-level",
        }
    }

    pub fn parse(s: &str) -> Option<Profile> {
        Profile::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub profile: Profile,
    pub file: InputFile,
}

impl CorpusInstance {
    pub fn text(&self) -> String {
        toml::to_string(&self.file).expect("input serialises")
    }

    pub fn input(&self) -> Result<Input> {
        build(self.file.clone(), None)
    }
}

/// Coefficient monomials in two parameters a, b.
fn coefficient(rng: &mut ChaCha8Rng, p: u32, a: &str, b: &str) -> String {
    let pool = ["1".to_string(), a.to_string(), b.to_string(), format!("{a}*{b}"), format!("{a}^{p}")];
    pool.choose(rng).unwrap().clone()
}

fn fermat(rng: &mut ChaCha8Rng, p: u32, vars: &[&str], q: u32, a: &str, b: &str) -> String {
    let mut terms: Vec<String> = vars[..vars.len() - 1]
        .iter()
        .map(|v| {
            let c = coefficient(rng, p, a, b);
            if c == "1" { format!("{v}^{q}") } else { format!("{c}*{v}^{q}") }
        })
        .collect();
    terms.push(format!("{}^{q}", vars[vars.len() - 1]));
    terms.join(" + ")
}

fn nonempty_subset(rng: &mut ChaCha8Rng, names: &[&str], proper: bool) -> Vec<String> {
    loop {
        let s: Vec<String> = names.iter().filter(|_| rng.gen_bool(0.5)).map(|s| s.to_string()).collect();
        if !s.is_empty() && (!proper || s.len() < names.len()) {
            return s;
        }
    }
}

fn candidate(rng: &mut ChaCha8Rng, profile: Profile, p: u32, forced_partial: bool) -> InputFile {
    let exps: &[u32] = if p == 2 { &[1, 1, 2] } else { &[1, 1, 1, 2] };
    let mut m = *exps.choose(rng).unwrap();
    match profile {
        Profile::FermatHypersurface => {
            let q = p.pow(m);
            let g = fermat(rng, p, &["x", "y", "z"], q, "s", "t");
            InputFile {
                field: FieldSection { p, params: vec!["s".into(), "t".into()], levels: None },
                ambient: AmbientSection { blocks: vec![vec!["x".into(), "y".into(), "z".into()]] },
                scheme: SchemeSection { generators: vec![g] },
                base_change: BaseChangeSection { raise: Some(nonempty_subset(rng, &["s", "t"], false)), levels: None },
            }
        }
        Profile::FermatProduct | Profile::MixedLevel => {
            if p == 3 {
                m = 1;
            }
            let n = if p == 2 { *[1u32, 1, 2].choose(rng).unwrap() } else { 1 };
            let g1 = fermat(rng, p, &["x", "y", "z"], p.pow(m), "s", "t");
            let qn = p.pow(n);
            let g2 = if rng.gen_bool(0.5) {
                // Coefficients linear in the first factor.
                format!("x*u^{qn} + y*v^{qn} + z*w^{qn}")
            } else {
                fermat(rng, p, &["u", "v", "w"], qn, "r", "s")
            };
            let params: Vec<String> = vec!["r".into(), "s".into(), "t".into()];
            let (levels, raise) = if profile == Profile::MixedLevel {
                // Partial towers: raise a proper subset, optionally over a
                // base that already contains a root.
                let raise = nonempty_subset(rng, &["r", "s", "t"], true);
                let levels = if !forced_partial && rng.gen_bool(0.3) {
                    let i = rng.gen_range(0..3);
                    let mut l = vec![0u32; 3];
                    l[i] = 1;
                    Some(l)
                } else {
                    None
                };
                (levels, raise)
            } else {
                (None, nonempty_subset(rng, &["r", "s", "t"], false))
            };
            InputFile {
                field: FieldSection { p, params, levels },
                ambient: AmbientSection {
                    blocks: vec![
                        vec!["x".into(), "y".into(), "z".into()],
                        vec!["u".into(), "v".into(), "w".into()],
                    ],
                },
                scheme: SchemeSection { generators: vec![g1, g2] },
                base_change: BaseChangeSection { raise: Some(raise), levels: None },
            }
        }
    }
}

/// The input is a normal complete intersection: reduced over K (certified)
/// and regular in codimension one.
fn acceptable(file: &InputFile) -> bool {
    let Ok(input) = build(file.clone(), None) else {
        return false;
    };
    let x = &input.x;
    if !x.flags.complete_intersection || !x.global_functions_are_constants() {
        return false;
    }
    let Ok((z, cert)) = reduce_structure(&base_change(x, x.field())) else {
        return false;
    };
    if cert.changed || !cert.status.is_certified() {
        return false;
    }
    matches!(jacobian_singular_primes(&z), Ok(p) if p.is_empty())
}

/// Deterministic family of `count` inputs; `p` cycles through `primes`.
pub fn gen_corpus(seed: u64, count: usize, profile: Profile, primes: &[u32]) -> Result<Vec<CorpusInstance>> {
    if primes.is_empty() || primes.iter().any(|&p| !crate::tower::is_prime(p)) {
        return Err(Error::InvalidArgument("corpus primes must be nonempty and prime".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 200 * count.max(1) {
            return Err(Error::Consistency("corpus generator keeps producing invalid instances".into()));
        }
        let p = primes[out.len() % primes.len()];
        let forced = profile == Profile::MixedLevel && out.is_empty();
        let file = candidate(&mut rng, profile, p, forced);
        if !acceptable(&file) {
            continue;
        }
        out.push(CorpusInstance { name: format!("{}-{seed}-{:03}", profile.name(), out.len()), profile, file });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_hypersurface_coefficients() {
        let c = gen_corpus(1, 1, Profile::FermatHypersurface, &[2]).unwrap();
        let g = &c[0].file.scheme.generators[0];
        for term in g.split(" + ") {
            let coeff: Vec<&str> = term.split('*').filter(|f| !f.starts_with(['x', 'y', 'z'])).collect();
            let coeff = coeff.join("*");
            assert!(["", "s", "t", "s*t", "s^2"].contains(&coeff.as_str()), "{term}");
        }
    }

    #[test]
    fn deterministic() {
        let a = gen_corpus(7, 4, Profile::MixedLevel, &[2, 3]).unwrap();
        let b = gen_corpus(7, 4, Profile::MixedLevel, &[2, 3]).unwrap();
        let ta: Vec<String> = a.iter().map(|c| c.text()).collect();
        let tb: Vec<String> = b.iter().map(|c| c.text()).collect();
        assert_eq!(ta, tb);
    }

    #[test]
    fn mixed_level_has_partial_tower() {
        let c = gen_corpus(3, 3, Profile::MixedLevel, &[2]).unwrap();
        let partial = c.iter().any(|i| {
            let input = i.input().unwrap();
            let raised = input.bc.raised().len();
            raised > 0 && raised < input.x.field().nsyms()
        });
        assert!(partial);
        for i in &c {
            assert!(crate::input::parse_input(&i.text()).is_ok());
        }
    }
}
