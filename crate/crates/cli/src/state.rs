//! State specifications accepted by `--state` and `--sigma`.
//!
//! | form             | meaning                                          |
//! |------------------|--------------------------------------------------|
//! | `bell`           | Bell pair, A and B one qubit each                |
//! | `ghz3`           | three-qubit GHZ, A = first two qubits, B = third |
//! | `maxmix:d`       | `I/d`                                            |
//! | `qubit:p`        | `diag(p, 1-p)`                                   |
//! | `file:path`      | operator JSON (any path ending in `.json` too)   |
//! | `random:d`       | seeded Ginibre density matrix                    |
//! | `randbip:AxB`    | seeded Ginibre bipartite state                   |
//! | `iid:p1,p2,...`  | i.i.d. base distribution                         |

use std::path::PathBuf;

use smoothspec::operator::{c, CVector};
use smoothspec::random::{generate_random_bipartite, generate_random_state, MAX_RANDOM_DIM};
use smoothspec::{BipartiteState, OperatorJson, QuantumState};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    File,
    Named,
    RandomDensity,
    RandomBipartite,
    IidBase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub kind: StateKind,
    pub payload: String,
    pub seed: u64,
}

/// A resolved specification: a dense state, or an i.i.d. base kept symbolic.
#[derive(Debug, Clone)]
pub enum Resolved {
    Dense(BipartiteState),
    Iid(Vec<f64>),
}

impl Resolved {
    /// The dense state; an i.i.d. base becomes the single-copy diagonal state.
    pub fn dense(&self) -> Result<BipartiteState> {
        match self {
            Resolved::Dense(s) => Ok(s.clone()),
            Resolved::Iid(base) => Ok(BipartiteState::trivial_b(QuantumState::from_diagonal(base)?)),
        }
    }
}

fn parse_dim(text: &str, spec: &str) -> Result<usize> {
    let d: usize = text.trim().parse().map_err(|_| CliError::bad_spec(spec, format!("`{text}` is not a dimension")))?;
    if d == 0 {
        return Err(CliError::bad_spec(spec, "dimension must be >= 1"));
    }
    Ok(d)
}

fn parse_prob(text: &str, spec: &str) -> Result<f64> {
    let p: f64 = text.trim().parse().map_err(|_| CliError::bad_spec(spec, format!("`{text}` is not a number")))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::bad_spec(spec, format!("{p} is not a probability")));
    }
    Ok(p)
}

impl StateSpec {
    pub fn parse(text: &str, seed: u64) -> Result<Self> {
        let text = text.trim();
        let (head, rest) = match text.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (text, None),
        };
        let spec = |kind, payload: &str| Ok(Self { kind, payload: payload.to_string(), seed });
        match (head, rest) {
            ("bell" | "ghz3", None) => spec(StateKind::Named, text),
            ("maxmix", Some(d)) => {
                parse_dim(d, text)?;
                spec(StateKind::Named, text)
            }
            ("qubit", Some(p)) => {
                parse_prob(p, text)?;
                spec(StateKind::Named, text)
            }
            ("file", Some(path)) if !path.is_empty() => spec(StateKind::File, path),
            ("random", Some(d)) => {
                parse_dim(d, text)?;
                spec(StateKind::RandomDensity, d)
            }
            ("randbip", Some(dims)) => {
                let (a, b) = dims.split_once('x').ok_or_else(|| CliError::bad_spec(text, "expected randbip:AxB"))?;
                parse_dim(a, text)?;
                parse_dim(b, text)?;
                spec(StateKind::RandomBipartite, dims)
            }
            ("iid", Some(list)) => {
                let base = list.split(',').map(|p| parse_prob(p, text)).collect::<Result<Vec<_>>>()?;
                let total: f64 = base.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(CliError::bad_spec(text, format!("base sums to {total}")));
                }
                spec(StateKind::IidBase, list)
            }
            _ if text.ends_with(".json") => spec(StateKind::File, text),
            _ => Err(CliError::bad_spec(
                text,
                "expected bell, ghz3, maxmix:d, qubit:p, file:path, random:d, randbip:AxB or iid:p1,p2,...",
            )),
        }
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let dense = |s: BipartiteState| Ok(Resolved::Dense(s));
        match self.kind {
            StateKind::Named => dense(named(&self.payload)?),
            StateKind::File => {
                let path = PathBuf::from(&self.payload);
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                let json: OperatorJson = serde_json::from_str(&text)?;
                let (dim_a, dim_b) = json.bipartite_dims()?;
                let state = QuantumState::new(json.to_operator()?)?;
                dense(BipartiteState::new(state, dim_a, dim_b)?)
            }
            StateKind::RandomDensity => {
                let d = parse_dim(&self.payload, &self.payload)?;
                dense(BipartiteState::trivial_b(generate_random_state(self.seed, d)?))
            }
            StateKind::RandomBipartite => {
                let (a, b) = self.payload.split_once('x').unwrap_or_default();
                let (a, b) = (parse_dim(a, &self.payload)?, parse_dim(b, &self.payload)?);
                if a * b > MAX_RANDOM_DIM {
                    return Err(smoothspec::Error::DimensionTooLarge { dim: a * b, limit: MAX_RANDOM_DIM }.into());
                }
                dense(generate_random_bipartite(self.seed, a, b)?)
            }
            StateKind::IidBase => {
                Ok(Resolved::Iid(self.payload.split(',').map(|p| parse_prob(p, &self.payload)).collect::<Result<_>>()?))
            }
        }
    }

    /// Resolves to a single-system state, as required of `sigma_B`.
    pub fn resolve_single(&self) -> Result<QuantumState> {
        let state = self.resolve()?.dense()?;
        if state.dim_b() != 1 {
            return Err(CliError::bad_spec(&self.payload, "expected a single-system state"));
        }
        Ok(state.state().clone())
    }
}

fn ket(amplitudes: &[f64]) -> CVector {
    CVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|&a| c(a)))
}

fn named(text: &str) -> Result<BipartiteState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let state = match text.split_once(':') {
        None if text == "bell" => BipartiteState::new(QuantumState::pure(&ket(&[h, 0.0, 0.0, h]))?, 2, 2)?,
        None if text == "ghz3" => {
            let mut amps = [0.0; 8];
            amps[0] = h;
            amps[7] = h;
            BipartiteState::new(QuantumState::pure(&ket(&amps))?, 4, 2)?
        }
        Some(("maxmix", d)) => BipartiteState::trivial_b(QuantumState::maximally_mixed(parse_dim(d, text)?)),
        Some(("qubit", p)) => {
            let p = parse_prob(p, text)?;
            BipartiteState::trivial_b(QuantumState::from_diagonal(&[p, 1.0 - p])?)
        }
        _ => return Err(CliError::bad_spec(text, "unknown named state")),
    };
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_form() {
        let kinds = [
            ("bell", StateKind::Named),
            ("ghz3", StateKind::Named),
            ("maxmix:4", StateKind::Named),
            ("qubit:0.75", StateKind::Named),
            ("file:x.txt", StateKind::File),
            ("state.json", StateKind::File),
            ("random:3", StateKind::RandomDensity),
            ("randbip:2x3", StateKind::RandomBipartite),
            ("iid:0.75,0.25", StateKind::IidBase),
        ];
        for (text, kind) in kinds {
            assert_eq!(StateSpec::parse(text, 0).unwrap().kind, kind, "{text}");
        }
        for bad in ["qubit:1.5", "maxmix:0", "iid:0.5,0.4", "randbip:2", "nonsense"] {
            assert!(StateSpec::parse(bad, 0).is_err(), "{bad}");
        }
    }

    #[test]
    fn named_states() {
        let ghz = StateSpec::parse("ghz3", 0).unwrap().resolve().unwrap().dense().unwrap();
        assert_eq!((ghz.dim_a(), ghz.dim_b()), (4, 2));
        assert!((ghz.state().trace() - 1.0).abs() < 1e-12);
        let q = StateSpec::parse("qubit:0.75", 0).unwrap().resolve().unwrap().dense().unwrap();
        assert_eq!(q.state().eigenvalues().unwrap(), vec![0.75, 0.25]);
    }

    #[test]
    fn random_kinds_repeat() {
        let a = StateSpec::parse("randbip:2x2", 9).unwrap().resolve().unwrap().dense().unwrap();
        let b = StateSpec::parse("randbip:2x2", 9).unwrap().resolve().unwrap().dense().unwrap();
        assert_eq!(a.op(), b.op());
        let c = StateSpec::parse("randbip:2x2", 10).unwrap().resolve().unwrap().dense().unwrap();
        assert_ne!(a.op(), c.op());
    }
}
