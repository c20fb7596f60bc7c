//! `family:key=value{,key=value}` channel specifications.

use crate::channels::ChannelSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    List(Vec<f64>),
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
struct Param {
    key: String,
    position: usize,
    value: Value,
}

/// A parsed but not yet validated channel specification.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSpec {
    family: String,
    params: Vec<Param>,
    len: usize,
    offset: usize,
}

const FAMILIES: &[(&str, &[&str])] = &[
    ("lossy", &["eta"]),
    ("thermal-loss", &["eta", "nbar"]),
    ("amplifier", &["g", "nbar"]),
    ("additive", &["xi"]),
    ("conjugate-amplifier", &[]),
    ("a2", &[]),
    ("b1", &[]),
    ("pauli", &["d", "probs"]),
    ("depolarizing", &["d", "p"]),
    ("dephasing", &["d", "p", "probs"]),
    ("erasure", &["d", "p"]),
    ("damping", &["p"]),
];

fn canonical_key(key: &str) -> &str {
    match key {
        "gain" => "g",
        other => other,
    }
}

impl RawSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_at(text, 0)
    }

    /// Parses `text` located at byte `offset` of a larger argument.
    pub(crate) fn parse_at(text: &str, offset: usize) -> Result<Self> {
        let at = |pos: usize, msg: String| Error::parse(offset + pos, msg);
        let (family, rest, rest_start) = match text.find(':') {
            Some(i) => (&text[..i], &text[i + 1..], i + 1),
            None => (text, "", text.len()),
        };
        let family = family.trim();
        let keys = FAMILIES
            .iter()
            .find(|(f, _)| *f == family)
            .map(|(_, k)| *k)
            .ok_or_else(|| at(0, format!("unknown channel family '{family}'")))?;
        let mut params: Vec<Param> = Vec::new();
        if !rest.trim().is_empty() {
            let mut pos = rest_start;
            for item in rest.split(',') {
                let start = pos;
                pos += item.len() + 1;
                let item_trim = item.trim();
                if item_trim.is_empty() {
                    return Err(at(start, "empty parameter".into()));
                }
                match item_trim.split_once('=') {
                    Some((key, value)) => {
                        let key = canonical_key(key.trim());
                        if !keys.contains(&key) {
                            return Err(at(start, format!("unknown key '{key}' for {family}")));
                        }
                        if params.iter().any(|p| p.key == key) {
                            return Err(at(start, format!("duplicate key '{key}'")));
                        }
                        let value_pos = start + item.find('=').expect("split") + 1;
                        let value = if value.trim() == "uniform" {
                            Value::Uniform
                        } else {
                            Value::List(vec![number(value, offset + value_pos)?])
                        };
                        params.push(Param { key: key.to_string(), position: offset + start, value });
                    }
                    None => match params.last_mut() {
                        Some(Param { value: Value::List(list), .. }) => list.push(number(item, offset + start)?),
                        _ => return Err(at(start, format!("expected key=value, got '{item_trim}'"))),
                    },
                }
            }
        }
        Ok(Self { family: family.to_string(), params, len: text.len(), offset })
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn has(&self, key: &str) -> bool {
        self.params.iter().any(|p| p.key == canonical_key(key))
    }

    /// Keys accepted by `family`, or `None` for an unknown family.
    pub fn keys_of(family: &str) -> Option<&'static [&'static str]> {
        FAMILIES.iter().find(|(f, _)| *f == family).map(|(_, k)| *k)
    }

    /// Builds the channel.
    pub fn build(&self) -> Result<ChannelSpec> {
        self.build_with(None)
    }

    /// Builds the channel with `key` replaced by `value`.
    pub fn build_with(&self, set: Option<(&str, f64)>) -> Result<ChannelSpec> {
        let end = self.offset + self.len;
        let scalar = |key: &str| -> Result<Option<f64>> {
            if let Some((k, v)) = set {
                if canonical_key(k) == key {
                    return Ok(Some(v));
                }
            }
            match self.params.iter().find(|p| p.key == key) {
                None => Ok(None),
                Some(Param { value: Value::List(l), position, .. }) if l.len() == 1 => Ok(Some(l[0])),
                Some(Param { position, .. }) => Err(Error::parse(*position, format!("'{key}' takes one number"))),
            }
        };
        let required = |key: &str| -> Result<f64> {
            scalar(key)?.ok_or_else(|| Error::parse(end, format!("{} requires '{key}'", self.family)))
        };
        let dim = |default: Option<usize>| -> Result<usize> {
            match scalar("d")? {
                None => default.ok_or_else(|| Error::parse(end, format!("{} requires 'd'", self.family))),
                Some(v) if v >= 1.0 && v.fract() == 0.0 => Ok(v as usize),
                Some(v) => {
                    let pos = self.position_of("d").unwrap_or(end);
                    Err(Error::parse(pos, format!("'d' must be a positive integer, got {v}")))
                }
            }
        };
        let list = |key: &str, n: usize| -> Result<Option<Vec<f64>>> {
            match self.params.iter().find(|p| p.key == key) {
                None => Ok(None),
                Some(Param { value: Value::Uniform, .. }) => Ok(Some(vec![1.0 / n as f64; n])),
                Some(Param { value: Value::List(l), .. }) => Ok(Some(l.clone())),
            }
        };
        match self.family.as_str() {
            "lossy" => ChannelSpec::lossy(required("eta")?),
            "thermal-loss" => ChannelSpec::thermal_loss(required("eta")?, required("nbar")?),
            "amplifier" => ChannelSpec::amplifier(required("g")?, scalar("nbar")?.unwrap_or(0.0)),
            "additive" => ChannelSpec::additive(required("xi")?),
            "conjugate-amplifier" => Ok(ChannelSpec::ConjugateAmplifier),
            "a2" => Ok(ChannelSpec::FormA2),
            "b1" => Ok(ChannelSpec::FormB1),
            "pauli" => {
                let d = dim(None)?;
                let probs = list("probs", d * d)?
                    .ok_or_else(|| Error::parse(end, "pauli requires 'probs'".to_string()))?;
                ChannelSpec::pauli(d, probs)
            }
            "depolarizing" => ChannelSpec::depolarizing(dim(Some(2))?, required("p")?),
            "dephasing" => {
                let d = dim(Some(2))?;
                match (scalar("p")?, list("probs", d)?) {
                    (Some(_), Some(_)) => {
                        Err(Error::parse(self.position_of("probs").unwrap_or(end), "give either 'p' or 'probs'"))
                    }
                    (Some(p), None) if d == 2 => ChannelSpec::qubit_dephasing(p),
                    (Some(_), None) => Err(Error::parse(
                        self.position_of("p").unwrap_or(end),
                        "'p' is for qubits; use 'probs' when d > 2",
                    )),
                    (None, Some(probs)) => ChannelSpec::dephasing(d, probs),
                    (None, None) => Err(Error::parse(end, "dephasing requires 'p' or 'probs'")),
                }
            }
            "erasure" => ChannelSpec::erasure(dim(Some(2))?, required("p")?),
            "damping" => ChannelSpec::damping(required("p")?),
            other => unreachable!("family {other} checked at parse time"),
        }
    }

    fn position_of(&self, key: &str) -> Option<usize> {
        self.params.iter().find(|p| p.key == key).map(|p| p.position)
    }
}

fn number(text: &str, position: usize) -> Result<f64> {
    let t = text.trim();
    t.parse::<f64>()
        .ok()
        .filter(|v| !v.is_nan())
        .ok_or_else(|| Error::parse(position, format!("expected a number, got '{t}'")))
}

/// Parses and validates a channel specification.
pub fn parse_channel(text: &str) -> Result<ChannelSpec> {
    RawSpec::parse(text)?.build()
}

/// `;`-separated members, each optionally prefixed by a weight `w@`.
pub fn parse_members(text: &str) -> Result<Vec<(Option<f64>, ChannelSpec)>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in text.split(';') {
        let start = pos;
        pos += part.len() + 1;
        if part.trim().is_empty() {
            return Err(Error::parse(start, "empty member"));
        }
        let (weight, body, body_start) = match part.split_once('@') {
            Some((w, body)) => (Some(number(w, start)?), body, start + w.len() + 1),
            None => (None, part, start),
        };
        let lead = body.len() - body.trim_start().len();
        out.push((weight, RawSpec::parse_at(body.trim(), body_start + lead)?.build()?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(parse_channel("lossy:eta=0.5").unwrap(), ChannelSpec::lossy(0.5).unwrap());
        assert_eq!(
            parse_channel("thermal-loss:eta=0.5,nbar=1").unwrap(),
            ChannelSpec::thermal_loss(0.5, 1.0).unwrap()
        );
        assert_eq!(parse_channel("amplifier:gain=2").unwrap(), ChannelSpec::amplifier(2.0, 0.0).unwrap());
        assert_eq!(parse_channel("erasure:d=4,p=0.5").unwrap(), ChannelSpec::erasure(4, 0.5).unwrap());
        assert_eq!(parse_channel("dephasing:p=0.3").unwrap(), ChannelSpec::qubit_dephasing(0.3).unwrap());
        assert_eq!(parse_channel("b1").unwrap(), ChannelSpec::FormB1);
    }

    #[test]
    fn list_values_continue_until_next_key() {
        let s = parse_channel("pauli:d=2,probs=0.7,0.1,0.1,0.1").unwrap();
        assert_eq!(s, ChannelSpec::pauli(2, vec![0.7, 0.1, 0.1, 0.1]).unwrap());
        let s = parse_channel("dephasing:probs=0.5,0.3,0.2,d=3").unwrap();
        assert_eq!(s, ChannelSpec::dephasing(3, vec![0.5, 0.3, 0.2]).unwrap());
        let s = parse_channel("pauli:d=3,probs=uniform").unwrap();
        assert_eq!(s, ChannelSpec::pauli(3, vec![1.0 / 9.0; 9]).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |t: &str| match parse_channel(t) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{t}: {other:?}"),
        };
        assert_eq!(pos("lossless:eta=0.5"), 0);
        assert_eq!(pos("lossy:zeta=0.5"), 6);
        assert_eq!(pos("lossy:eta=abc"), 10);
        assert_eq!(pos("thermal-loss:eta=0.5"), 20);
        assert_eq!(pos("lossy:eta=0.5,eta=0.6"), 14);
        assert_eq!(pos("lossy:0.5"), 6);
        assert!(matches!(parse_channel("lossy:eta=1.5"), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn override_replaces_axis() {
        let raw = RawSpec::parse("thermal-loss:nbar=1").unwrap();
        assert!(raw.build().is_err());
        assert_eq!(raw.build_with(Some(("eta", 0.3))).unwrap(), ChannelSpec::thermal_loss(0.3, 1.0).unwrap());
    }

    #[test]
    fn members() {
        let m = parse_members("0.25@lossy:eta=0.5; 0.75@damping:p=0.2").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1].0, Some(0.75));
        match parse_members("lossy:eta=0.5;lossy:bad=1") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 20),
            other => panic!("{other:?}"),
        }
    }
}
