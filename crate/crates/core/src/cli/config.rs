//! Flat `key = value` experiment files.
//!
//! Keys are the long flag names (`theta-qubits`, or `theta_qubits`). Blank
//! lines and `#` comments are ignored. `noise` may list several models
//! separated by `;`. Unknown or repeated keys are errors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub const KEYS: &[&str] = &[
    "graph",
    "size",
    "marked",
    "theta-qubits",
    "iterations",
    "max-iters",
    "shots",
    "seed",
    "noise",
    "coupling-map",
    "format",
    "out",
    "trials",
    "init",
    "layout",
    "transpiled",
    "circuit",
    "circuit-out",
];

/// Parsed entries: key → (line number, raw value).
pub type ConfigMap = BTreeMap<String, (usize, String)>;

pub fn parse_config(text: &str) -> Result<ConfigMap> {
    let mut map = ConfigMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected key = value, got {line:?}")))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::parse(line_no, format!("unknown key {key:?}")));
        }
        if map.contains_key(&key) {
            return Err(Error::parse(line_no, format!("key {key:?} given twice")));
        }
        map.insert(key, (line_no, value.trim().to_string()));
    }
    Ok(map)
}

/// Typed value of `key`, with the config line in any error.
pub fn typed<T: std::str::FromStr>(map: &ConfigMap, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some((line, raw)) => raw
            .parse()
            .map(Some)
            .map_err(|_| Error::parse(*line, format!("invalid value {raw:?} for {key}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let m =
            parse_config("# run\ngraph = hypercube\ntheta_qubits=3 # pinned\n\nnoise = 0,0.01,0; 0,0.02,0\n").unwrap();
        assert_eq!(m["graph"].1, "hypercube");
        assert_eq!(m["theta-qubits"], (3, "3".to_string()));
        assert_eq!(typed::<usize>(&m, "theta-qubits").unwrap(), Some(3));
        assert_eq!(typed::<usize>(&m, "size").unwrap(), None);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        match parse_config("graph = complete\ncolour = blue\n") {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains("colour")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config("shots\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_config("seed=1\nseed=2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        let m = parse_config("\n\nshots = many\n").unwrap();
        assert!(matches!(typed::<u64>(&m, "shots"), Err(Error::Parse { line: 3, .. })));
    }
}
