//! Quadratic binary costs as Ising models over spins ±1.
//!
//! Bits and spins are related by `x = (1 − s)/2`, so spin `+1` is bit 0 and
//! spin `−1` is bit 1. Spin `i` stands for variable `x_{i+1}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::encoders::{CostFunction, Method};
use crate::pbp::{Half, PseudoBooleanPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsingError {
    #[error("degree {0} is above 2; quadratize first")]
    DegreeTooHigh(usize),
    #[error("expected {expected} spins, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("spin values must be +1 or -1 (got {0})")]
    NotASpin(i8),
    #[error("malformed model: {0}")]
    Parse(String),
}

/// `Σ h_i s_i + Σ_{i<j} J_ij s_i s_j + offset`.
///
/// Every parameter is stored as an integer numerator over one shared
/// denominator. Models compiled from cost functions use denominator 2;
/// physical models with split fields may need a larger one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsingModel {
    n_spins: usize,
    denominator: BigInt,
    h: Vec<BigInt>,
    j: BTreeMap<(usize, usize), BigInt>,
    offset: BigInt,
}

impl IsingModel {
    pub fn new(n_spins: usize) -> Self {
        IsingModel {
            n_spins,
            denominator: BigInt::from(2),
            h: vec![BigInt::zero(); n_spins],
            j: BTreeMap::new(),
            offset: BigInt::zero(),
        }
    }

    /// Builds a model from exact values; `j` keys may be given in either order
    /// and repeated keys add up.
    pub fn from_values(
        h: Vec<BigRational>,
        j: impl IntoIterator<Item = ((usize, usize), BigRational)>,
        offset: BigRational,
    ) -> Result<Self, IsingError> {
        let n = h.len();
        let mut couplings: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for ((a, b), v) in j {
            if a == b || a >= n || b >= n {
                return Err(IsingError::Parse(format!("invalid coupler ({a}, {b})")));
            }
            let key = (a.min(b), a.max(b));
            *couplings.entry(key).or_insert_with(BigRational::zero) += v;
        }
        let mut den = BigInt::from(2);
        for v in h.iter().chain(couplings.values()).chain([&offset]) {
            den = den.lcm(v.denom());
        }
        let num = |v: &BigRational| v.numer() * (&den / v.denom());
        let mut model = IsingModel {
            n_spins: n,
            h: h.iter().map(num).collect(),
            j: couplings.iter().map(|(&k, v)| (k, num(v))).collect(),
            offset: num(&offset),
            denominator: den,
        };
        model.j.retain(|_, v| !v.is_zero());
        Ok(model)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn h_numerators(&self) -> &[BigInt] {
        &self.h
    }

    pub fn j_numerators(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.j
    }

    pub fn offset_numerator(&self) -> &BigInt {
        &self.offset
    }

    fn value(&self, numerator: &BigInt) -> BigRational {
        BigRational::new(numerator.clone(), self.denominator.clone())
    }

    pub fn h(&self, i: usize) -> BigRational {
        self.value(&self.h[i])
    }

    /// Coupling between `a` and `b` in either order; zero when absent.
    pub fn j(&self, a: usize, b: usize) -> BigRational {
        let key = (a.min(b), a.max(b));
        self.j
            .get(&key)
            .map(|v| self.value(v))
            .unwrap_or_else(BigRational::zero)
    }

    pub fn offset(&self) -> BigRational {
        self.value(&self.offset)
    }

    pub fn h_values(&self) -> Vec<BigRational> {
        self.h.iter().map(|v| self.value(v)).collect()
    }

    /// Nonzero couplings `(i, j, J_ij)` with `i < j`.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, BigRational)> + '_ {
        self.j.iter().map(|(&(a, b), v)| (a, b, self.value(v)))
    }

    pub fn edge_count(&self) -> usize {
        self.j.len()
    }

    /// Largest `|h_i|` or `|J_ij|`.
    pub fn max_abs_param(&self) -> BigRational {
        let m = self
            .h
            .iter()
            .chain(self.j.values())
            .map(|v| v.abs())
            .max()
            .unwrap_or_default();
        self.value(&m)
    }

    pub fn energy(&self, spins: &[i8], include_offset: bool) -> Result<BigRational, IsingError> {
        if spins.len() != self.n_spins {
            return Err(IsingError::LengthMismatch {
                expected: self.n_spins,
                got: spins.len(),
            });
        }
        if let Some(&bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(IsingError::NotASpin(bad));
        }
        let mut total = if include_offset {
            self.offset.clone()
        } else {
            BigInt::zero()
        };
        for (i, h) in self.h.iter().enumerate() {
            total += h * spins[i] as i32;
        }
        for (&(a, b), v) in &self.j {
            total += v * (spins[a] * spins[b]) as i32;
        }
        Ok(self.value(&total))
    }

    /// Same model with every parameter, including the offset, multiplied by `k`.
    pub fn scaled(&self, k: &BigRational) -> IsingModel {
        let f = |v: &BigInt| self.value(v) * k;
        IsingModel::from_values(
            self.h.iter().map(f).collect(),
            self.j.iter().map(|(&key, v)| (key, f(v))),
            f(&self.offset),
        )
        .expect("valid couplers stay valid")
    }

    /// Sub-model on the listed spins, renumbered in list order. Fields and
    /// couplings touching other spins are dropped; the offset is kept.
    pub fn restrict(&self, keep: &[usize]) -> IsingModel {
        let position: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut out = IsingModel {
            n_spins: keep.len(),
            denominator: self.denominator.clone(),
            h: keep.iter().map(|&i| self.h[i].clone()).collect(),
            j: BTreeMap::new(),
            offset: self.offset.clone(),
        };
        for (&(a, b), v) in &self.j {
            if let (Some(&x), Some(&y)) = (position.get(&a), position.get(&b)) {
                out.j.insert((x.min(y), x.max(y)), v.clone());
            }
        }
        out
    }

    /// `{n_spins, denominator, h, J, offset_numerator}` with integer numerators.
    pub fn to_json(&self) -> Value {
        json!({
            "n_spins": self.n_spins,
            "denominator": int_json(&self.denominator),
            "h": self.h.iter().map(int_json).collect::<Vec<_>>(),
            "J": self.j.iter().map(|(&(a, b), v)| json!([a, b, int_json(v)])).collect::<Vec<_>>(),
            "offset_numerator": int_json(&self.offset),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self, IsingError> {
        let bad = |what: &str| IsingError::Parse(format!("missing or invalid {what}"));
        let n = value["n_spins"].as_u64().ok_or_else(|| bad("n_spins"))? as usize;
        let den = json_int(&value["denominator"]).ok_or_else(|| bad("denominator"))?;
        if !den.is_positive() {
            return Err(bad("denominator"));
        }
        let h: Vec<BigInt> = value["h"]
            .as_array()
            .ok_or_else(|| bad("h"))?
            .iter()
            .map(json_int)
            .collect::<Option<_>>()
            .ok_or_else(|| bad("h"))?;
        if h.len() != n {
            return Err(IsingError::LengthMismatch {
                expected: n,
                got: h.len(),
            });
        }
        let mut j = Vec::new();
        for entry in value["J"].as_array().ok_or_else(|| bad("J"))? {
            let e = entry
                .as_array()
                .filter(|e| e.len() == 3)
                .ok_or_else(|| bad("J entry"))?;
            let a = e[0].as_u64().ok_or_else(|| bad("J index"))? as usize;
            let b = e[1].as_u64().ok_or_else(|| bad("J index"))? as usize;
            let v = json_int(&e[2]).ok_or_else(|| bad("J value"))?;
            j.push(((a, b), BigRational::new(v, den.clone())));
        }
        let offset = json_int(&value["offset_numerator"]).ok_or_else(|| bad("offset_numerator"))?;
        let mut model = IsingModel::from_values(
            h.into_iter()
                .map(|v| BigRational::new(v, den.clone()))
                .collect(),
            j,
            BigRational::new(offset, den.clone()),
        )?;
        model.rebase(den);
        Ok(model)
    }

    /// Re-expresses the numerators over `den`, a multiple of the current denominator.
    fn rebase(&mut self, den: BigInt) {
        if den == self.denominator || !(&den % &self.denominator).is_zero() {
            return;
        }
        let k = &den / &self.denominator;
        for v in self.h.iter_mut().chain(self.j.values_mut()) {
            *v *= &k;
        }
        self.offset *= &k;
        self.denominator = den;
    }

    /// Plain coupler list: `0 i h_i` for fields and `i j J_ij` for couplers,
    /// spins numbered from 1, values as exact decimals.
    pub fn to_coupler_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# spins {}", self.n_spins).unwrap();
        writeln!(out, "# offset {}", format_exact(&self.offset())).unwrap();
        for (i, h) in self.h.iter().enumerate() {
            if !h.is_zero() {
                writeln!(out, "0 {} {}", i + 1, format_exact(&self.value(h))).unwrap();
            }
        }
        for (&(a, b), v) in &self.j {
            writeln!(out, "{} {} {}", a + 1, b + 1, format_exact(&self.value(v))).unwrap();
        }
        out
    }

    pub fn from_coupler_text(text: &str) -> Result<Self, IsingError> {
        let mut n: Option<usize> = None;
        let mut offset = BigRational::zero();
        let mut fields: Vec<(usize, BigRational)> = Vec::new();
        let mut couplers = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let err = |m: &str| IsingError::Parse(format!("line {}: {m}", lineno + 1));
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                match (parts.next(), parts.next()) {
                    (Some("spins"), Some(v)) => {
                        n = Some(v.parse().map_err(|_| err("bad spin count"))?)
                    }
                    (Some("offset"), Some(v)) => {
                        offset = parse_exact(v).ok_or_else(|| err("bad offset"))?
                    }
                    _ => {}
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err("expected `i j value`"));
            }
            let a: usize = parts[0].parse().map_err(|_| err("bad index"))?;
            let b: usize = parts[1].parse().map_err(|_| err("bad index"))?;
            let v = parse_exact(parts[2]).ok_or_else(|| err("bad value"))?;
            match (a, b) {
                (0, 0) => return Err(err("index 0 0")),
                (0, i) | (i, 0) => fields.push((i - 1, v)),
                (a, b) => couplers.push(((a - 1, b - 1), v)),
            }
        }
        let n = n.unwrap_or_else(|| {
            let f = fields.iter().map(|(i, _)| i + 1);
            let c = couplers.iter().map(|((a, b), _)| a.max(b) + 1);
            f.chain(c).max().unwrap_or(0)
        });
        let mut h = vec![BigRational::zero(); n];
        for (i, v) in fields {
            *h.get_mut(i)
                .ok_or_else(|| IsingError::Parse(format!("spin {} out of range", i + 1)))? += v;
        }
        IsingModel::from_values(h, couplers, offset)
    }
}

fn int_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn json_int(v: &Value) -> Option<BigInt> {
    if let Some(x) = v.as_i64() {
        return Some(BigInt::from(x));
    }
    v.as_str()?.parse().ok()
}

/// Exact decimal rendering; falls back to `a/b` when the expansion does not terminate.
pub fn format_exact(v: &BigRational) -> String {
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut digits = 0usize;
    let mut scaled = v.clone();
    while !scaled.is_integer() {
        if digits > 64 {
            return format!("{}/{}", v.numer(), v.denom());
        }
        scaled *= &ten;
        digits += 1;
    }
    let int = scaled.to_integer();
    if digits == 0 {
        return int.to_string();
    }
    let sign = if int.is_negative() { "-" } else { "" };
    let s = format!("{:0>width$}", int.abs().to_string(), width = digits + 1);
    let (whole, frac) = s.split_at(s.len() - digits);
    format!("{sign}{whole}.{frac}")
}

pub fn parse_exact(s: &str) -> Option<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let den: BigInt = b.parse().ok()?;
        let num: BigInt = a.parse().ok()?;
        return (!den.is_zero()).then(|| BigRational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let v = BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
    Some(if neg { -v } else { v })
}

/// Overall factor applied after substituting `x = (1 − s)/2`.
///
/// Direct-method models are halved and table-method models doubled; these
/// are the normalizations under which the published coefficient tables come
/// out exactly. Either way the ground energy of a valid factorization is 0.
pub fn ising_scale(method: Method) -> BigRational {
    match method {
        Method::Direct => BigRational::new(BigInt::one(), BigInt::from(2)),
        Method::Table => BigRational::from_integer(BigInt::from(2)),
    }
}

/// Converts a quadratic cost function; see [`ising_scale`].
pub fn to_ising(cf: &CostFunction) -> Result<IsingModel, IsingError> {
    to_ising_scaled(&cf.polynomial, cf.var_count(), &ising_scale(cf.method))
}

/// Substitutes `x = (1 − s)/2` into `poly` over `n_vars` variables and
/// multiplies the result by `scale`, so `energy(s) = scale · poly(x)`.
pub fn to_ising_scaled(
    poly: &PseudoBooleanPolynomial,
    n_vars: usize,
    scale: &BigRational,
) -> Result<IsingModel, IsingError> {
    let degree = poly.degree();
    if degree > 2 {
        return Err(IsingError::DegreeTooHigh(degree));
    }
    let n_vars = n_vars.max(
        poly.variables()
            .iter()
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0),
    );
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let mut h = vec![BigRational::zero(); n_vars];
    let mut j = Vec::new();
    let mut offset = BigRational::zero();
    for (m, c) in poly.terms() {
        let c = c.to_rational();
        match m.vars() {
            [] => offset += c,
            [a] => {
                offset += &c * &half;
                h[a.index()] -= &c * &half;
            }
            [a, b] => {
                let q = &c * &quarter;
                offset += &q;
                h[a.index()] -= &q;
                h[b.index()] -= &q;
                j.push(((a.index(), b.index()), q));
            }
            _ => unreachable!("degree checked"),
        }
    }
    IsingModel::from_values(
        h.into_iter().map(|v| v * scale).collect(),
        j.into_iter().map(|(k, v)| (k, v * scale)),
        offset * scale,
    )
}

/// Spins of a bit assignment: bit 1 is spin −1.
pub fn bits_to_spins(bits: &[bool]) -> Vec<i8> {
    bits.iter().map(|&b| if b { -1 } else { 1 }).collect()
}

pub fn spins_to_bits(spins: &[i8]) -> Vec<bool> {
    spins.iter().map(|&s| s < 0).collect()
}

/// Value of a logical-model parameter as a half-integer, when it is one.
pub fn as_half(v: &BigRational) -> Option<Half> {
    Half::from_rational(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoders::encode_direct;
    use crate::quadratize::quadratize;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn fifteen() -> IsingModel {
        let cf = encode_direct(&15u32.into(), 2, 3).unwrap();
        to_ising(&quadratize(&cf).unwrap().0).unwrap()
    }

    #[test]
    fn fifteen_fields_couplings_and_offset() {
        let m = fifteen();
        assert_eq!(m.h_values(), [58, 50, 12, -80].map(|v| r(v, 1)));
        let expected = [
            ((0, 1), 25),
            ((0, 2), -6),
            ((0, 3), -64),
            ((1, 2), 2),
            ((1, 3), -64),
            ((2, 3), 16),
        ];
        let got: Vec<_> = m.couplings().map(|(a, b, v)| ((a, b), v)).collect();
        assert_eq!(got, expected.map(|(k, v)| (k, r(v, 1))));
        assert_eq!(m.offset(), r(149, 1));
    }

    #[test]
    fn fifteen_energies() {
        let m = fifteen();
        assert_eq!(m.energy(&[1, 1, 1, 1], true).unwrap(), r(98, 1));
        assert_eq!(m.energy(&[-1, 1, -1, 1], true).unwrap(), r(0, 1));
        let s = [1, -1, -1, 1];
        assert_eq!(
            m.energy(&s, true).unwrap() - m.energy(&s, false).unwrap(),
            m.offset()
        );
        assert!(matches!(
            m.energy(&[1, 1], true),
            Err(IsingError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn single_linear_term() {
        let p = PseudoBooleanPolynomial::from_terms([(7, vec![1])]);
        let m = to_ising_scaled(&p, 1, &r(1, 1)).unwrap();
        assert_eq!(m.h(0), r(-7, 2));
        assert_eq!(m.offset(), r(7, 2));
    }

    #[test]
    fn cubic_is_rejected() {
        let p = PseudoBooleanPolynomial::from_terms([(1, vec![1, 2, 3])]);
        assert_eq!(
            to_ising_scaled(&p, 3, &r(1, 1)),
            Err(IsingError::DegreeTooHigh(3))
        );
    }

    #[test]
    fn json_and_coupler_text_round_trip() {
        let m = fifteen().scaled(&r(1, 8));
        assert_eq!(IsingModel::from_json(&m.to_json()).unwrap(), m);
        assert_eq!(
            IsingModel::from_coupler_text(&m.to_coupler_text()).unwrap(),
            m
        );
        let doc = fifteen().to_json();
        assert_eq!(doc["denominator"], json!(2));
        assert_eq!(doc["h"], json!([116, 100, 24, -160]));
        assert_eq!(doc["offset_numerator"], json!(298));
    }

    #[test]
    fn decimals() {
        assert_eq!(format_exact(&r(261, 2)), "130.5");
        assert_eq!(format_exact(&r(-261, 8)), "-32.625");
        assert_eq!(format_exact(&r(-1, 8)), "-0.125");
        assert_eq!(format_exact(&r(1, 3)), "1/3");
        assert_eq!(parse_exact("-32.625"), Some(r(-261, 8)));
        assert_eq!(parse_exact("1/3"), Some(r(1, 3)));
    }

    #[test]
    fn restrict_keeps_listed_spins() {
        let m = fifteen();
        let sub = m.restrict(&[3, 1]);
        assert_eq!(sub.h_values(), vec![r(-80, 1), r(50, 1)]);
        assert_eq!(sub.j(0, 1), r(-64, 1));
        assert_eq!(sub.offset(), m.offset());
    }
}
