//! Canonical line format: `numerator/2 : id,id,...`, one term per line in
//! monomial order (constant first). Golden files are compared byte for byte.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{Half, Monomial, PbpError, PseudoBooleanPolynomial, Var};

impl PseudoBooleanPolynomial {
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms() {
            let ids: Vec<String> = m.vars().iter().map(|v| v.0.to_string()).collect();
            if ids.is_empty() {
                writeln!(out, "{}/2 :", c.twice()).unwrap();
            } else {
                writeln!(out, "{}/2 : {}", c.twice(), ids.join(",")).unwrap();
            }
        }
        out
    }

    pub fn from_canonical_text(text: &str) -> Result<Self, PbpError> {
        let mut p = PseudoBooleanPolynomial::zero();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| PbpError::Parse {
                line: n + 1,
                message: message.to_string(),
            };
            let (coeff, ids) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let numerator = coeff
                .trim()
                .strip_suffix("/2")
                .ok_or_else(|| err("coefficient must be written as k/2"))?;
            let numerator: BigInt = numerator.trim().parse().map_err(|_| err("bad numerator"))?;
            let mut vars = Vec::new();
            for id in ids.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let id: u32 = id.parse().map_err(|_| err("bad variable id"))?;
                if id == 0 {
                    return Err(err("variable ids start at 1"));
                }
                vars.push(Var(id));
            }
            p.add_term(Monomial::new(vars), &Half::from_twice(numerator));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_lines_are_sorted() {
        let p = PseudoBooleanPolynomial::from_terms([
            (3, vec![2]),
            (196, vec![]),
            (128, vec![1, 2, 3]),
        ]);
        assert_eq!(p.to_canonical_text(), "392/2 :\n256/2 : 1,2,3\n6/2 : 2\n");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(PseudoBooleanPolynomial::from_canonical_text("3 : 1").is_err());
        assert!(PseudoBooleanPolynomial::from_canonical_text("3/2 : 0").is_err());
        assert!(PseudoBooleanPolynomial::from_canonical_text("3/2 1").is_err());
    }
}
