use anyhow::{anyhow, bail, Context, Result};

use randgroup_core::{BAutomaton, Lambda, Presentation, SignVector, Word};

/// `"+,-"`, `"(+,-)"`, `"+-"` or `"1,-1"`.
pub fn sign_vector(text: &str) -> Result<SignVector> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    if inner.chars().any(|c| c.is_ascii_digit()) {
        let values = inner
            .split(',')
            .map(|s| s.trim().parse::<i32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("bad sign vector {text:?}"))?;
        return Ok(SignVector::from_i32(&values)?);
    }
    let values: Vec<i32> = inner
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(anyhow!("bad sign {c:?} in {text:?}")),
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        bail!("empty sign vector");
    }
    Ok(SignVector::from_i32(&values)?)
}

/// `"p/q"` or a decimal such as `"0.25"`, read exactly.
pub fn lambda(text: &str) -> Result<Lambda> {
    let text = text.trim();
    let bad = || anyhow!("bad lambda {text:?}");
    if let Some((p, q)) = text.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Lambda::new(p, q));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Lambda::new(int * den + frac, den))
}

/// Text form (`"a1 A2"`) or a JSON array of signed integers.
pub fn word(text: &str) -> Result<Word> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Vec<i32> = serde_json::from_str(t).with_context(|| format!("bad word {text:?}"))?;
        return Ok(Word::from_signed(&v)?);
    }
    Ok(t.parse()?)
}

/// Comma-separated lengths.
pub fn lengths(text: &str) -> Result<Vec<usize>> {
    let v = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad length list {text:?}"))?;
    if v.is_empty() {
        bail!("empty length list");
    }
    Ok(v)
}

pub fn presentation(text: &str) -> Result<Presentation> {
    Ok(Presentation::from_json(text)?)
}

pub fn automaton(text: &str) -> Result<BAutomaton> {
    Ok(BAutomaton::from_json(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_forms() {
        for t in ["+,-", "(+,-)", "+-", "1,-1", "(1, -1)"] {
            assert_eq!(sign_vector(t).unwrap().to_i32(), vec![1, -1]);
        }
        assert!(sign_vector("").is_err());
        assert!(sign_vector("+x").is_err());
    }

    #[test]
    fn lambda_forms() {
        assert_eq!(lambda("1/2").unwrap(), Lambda::new(1, 2));
        assert_eq!(lambda("0.25").unwrap(), Lambda::new(1, 4));
        assert_eq!(lambda("1").unwrap(), Lambda::new(1, 1));
        assert!(lambda("1/0").is_err());
        assert!(lambda("-0.5").is_err());
    }

    #[test]
    fn word_forms() {
        assert_eq!(word("a1 A2").unwrap(), word("[1, -2]").unwrap());
        assert_eq!(lengths("6, 8,10").unwrap(), vec![6, 8, 10]);
        assert!(lengths("").is_err());
    }
}
