use std::fs;

use l1stab::{AnyMonic, Backend, Rational};

use crate::args::PolyInput;
use crate::Failure;

/// Undoes the `~` spelling of a leading minus sign.
pub fn literal(s: &str) -> String {
    match s.strip_prefix('~') {
        Some(rest) => format!("-{rest}"),
        None => s.to_string(),
    }
}

pub fn rational(s: &str) -> Result<Rational, Failure> {
    Ok(l1stab::scalar::parse_rational(&literal(s))?)
}

fn parse_poly(tokens: &[String], ascending: bool, backend: Backend) -> Result<AnyMonic, Failure> {
    let mut lits: Vec<String> = tokens.iter().map(|t| literal(t)).collect();
    if ascending {
        lits.reverse();
    }
    Ok(AnyMonic::parse_descending(&lits, backend)?)
}

/// Polynomials from the positional coefficients or from `--file`.
pub fn polynomials(input: &PolyInput) -> Result<Vec<AnyMonic>, Failure> {
    let backend = input.backend.into();
    match (&input.file, input.coeffs.is_empty()) {
        (Some(_), false) => Err(Failure::Usage("give coefficients or --file, not both".into())),
        (None, true) => Err(Failure::Usage("no coefficients given".into())),
        (None, false) => Ok(vec![parse_poly(&input.coeffs, input.ascending, backend)?]),
        (Some(path), true) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let mut out = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let content = line.split('#').next().unwrap_or("");
                let tokens: Vec<String> = content.split_whitespace().map(str::to_string).collect();
                if tokens.is_empty() {
                    continue;
                }
                let p = parse_poly(&tokens, input.ascending, backend)
                    .map_err(|f| Failure::Usage(format!("{}:{}: {}", path.display(), lineno + 1, message(&f))))?;
                out.push(p);
            }
            if out.is_empty() {
                return Err(Failure::Usage(format!("{}: no polynomials", path.display())));
            }
            Ok(out)
        }
    }
}

fn message(f: &Failure) -> &str {
    match f {
        Failure::Usage(m) | Failure::Compute(m) | Failure::Io(m) => m,
    }
}
