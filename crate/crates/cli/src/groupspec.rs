//! Parsing of `--group` arguments.

use anyhow::{bail, Context, Result};
use magnusforge::groups::{CayleyTable, CayleyTableSpec, Cyclic, DirectProduct, FreeAbelian, Group, Symmetric};

#[derive(Debug, Clone)]
pub enum GroupSpec {
    FreeAbelian(usize),
    Finite(CayleyTable),
    Lamplighter,
}

/// Accepts `z`, `zN`, `sN`, products such as `zxz` or `z5xs3`,
/// `lamplighter` (or `zwrz`), a path to a JSON Cayley table, or the JSON
/// itself. Products may not mix `z` with finite factors.
pub fn parse_group(s: &str) -> Result<GroupSpec> {
    let s = s.trim();
    if s.starts_with('{') {
        let spec: CayleyTableSpec = serde_json::from_str(s).context("malformed Cayley table JSON")?;
        return Ok(GroupSpec::Finite(CayleyTable::from_spec(spec)?));
    }
    if s.ends_with(".json") {
        let text = std::fs::read_to_string(s).with_context(|| format!("cannot read {s}"))?;
        let spec: CayleyTableSpec = serde_json::from_str(&text).context("malformed Cayley table JSON")?;
        return Ok(GroupSpec::Finite(CayleyTable::from_spec(spec)?));
    }
    let lower = s.to_ascii_lowercase();
    if lower == "lamplighter" || lower == "zwrz" {
        return Ok(GroupSpec::Lamplighter);
    }
    let factors: Vec<&str> = lower.split('x').collect();
    if factors.iter().any(|f| f.is_empty()) {
        bail!("malformed group spec `{s}`");
    }
    if factors.iter().all(|f| *f == "z") {
        return Ok(GroupSpec::FreeAbelian(factors.len()));
    }
    let mut tables = Vec::new();
    for f in factors {
        tables.push(finite_factor(f).with_context(|| format!("in group spec `{s}`"))?);
    }
    let mut acc = tables.remove(0);
    for t in tables {
        acc = product(&acc, &t);
    }
    Ok(GroupSpec::Finite(acc))
}

fn finite_factor(f: &str) -> Result<CayleyTable> {
    let n = |digits: &str| -> Result<u64> {
        let n: u64 = digits.parse().with_context(|| format!("bad order in `{f}`"))?;
        if n == 0 {
            bail!("order must be positive in `{f}`");
        }
        Ok(n)
    };
    if let Some(d) = f.strip_prefix('z') {
        if d.is_empty() {
            bail!("cannot mix z with finite factors");
        }
        let n = n(d)?;
        let gens: &[u64] = if n == 1 { &[] } else { &[1] };
        return Ok(CayleyTable::from_group(&Cyclic::new(n), gens).0);
    }
    if let Some(d) = f.strip_prefix('s') {
        let n = n(d)? as usize;
        if n > 6 {
            bail!("s{n} is too large to tabulate");
        }
        let group = Symmetric::new(n);
        let gens: Vec<_> = group
            .standard_generators()
            .into_iter()
            .filter(|g| !group.is_identity(g))
            .collect();
        return Ok(CayleyTable::from_group(&group, &gens).0);
    }
    bail!("unknown group factor `{f}`")
}

fn product(a: &CayleyTable, b: &CayleyTable) -> CayleyTable {
    let p = DirectProduct::new(a.clone(), b.clone());
    let mut gens: Vec<(usize, usize)> = a.generators().iter().map(|&g| (g, 0)).collect();
    gens.extend(b.generators().iter().map(|&g| (0, g)));
    CayleyTable::from_group(&p, &gens).0
}

impl GroupSpec {
    pub fn describe(&self) -> String {
        match self {
            GroupSpec::FreeAbelian(r) => FreeAbelian::new(*r).name(),
            GroupSpec::Finite(t) => t.name(),
            GroupSpec::Lamplighter => "Z wr Z".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert!(matches!(parse_group("zxz").unwrap(), GroupSpec::FreeAbelian(2)));
        assert!(matches!(parse_group("lamplighter").unwrap(), GroupSpec::Lamplighter));
        let GroupSpec::Finite(t) = parse_group("z2xz3").unwrap() else { panic!() };
        assert_eq!(t.order(), 6);
        let GroupSpec::Finite(t) = parse_group("s3").unwrap() else { panic!() };
        assert_eq!(t.order(), 6);
        let GroupSpec::Finite(t) = parse_group("z1").unwrap() else { panic!() };
        assert_eq!(t.order(), 1);
        let GroupSpec::Finite(t) = parse_group(r#"{"table": [[0, 1], [1, 0]]}"#).unwrap() else { panic!() };
        assert_eq!(t.order(), 2);
        for bad in ["zxz5", "q3", "z0", "zx", "{", "s9"] {
            assert!(parse_group(bad).is_err(), "{bad}");
        }
    }
}
