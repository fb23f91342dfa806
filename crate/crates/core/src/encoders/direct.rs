use num_bigint::{BigInt, BigUint};

use super::{check_input, CostFunction, EncodeError, FactorLayout, Method};
use crate::pbp::{Half, Monomial, PseudoBooleanPolynomial, Role, VariableRegistry};

/// `(n − p·q)²` with free leading bits.
///
/// `p` has `l1 − 1` unknown bits and `q` has `l2 − 1`, registered lowest
/// weight first, so for `n = 15, l1 = 2, l2 = 3` the variables are
/// `p = 2x1 + 1` and `q = 4x3 + 2x2 + 1`.
pub fn encode_direct(n: &BigUint, l1: u32, l2: u32) -> Result<CostFunction, EncodeError> {
    encode_direct_with(n, l1, l2, false)
}

pub fn encode_direct_with(
    n: &BigUint,
    l1: u32,
    l2: u32,
    fixed_leading: bool,
) -> Result<CostFunction, EncodeError> {
    check_input(n, l1, l2)?;
    let layout = FactorLayout {
        l1,
        l2,
        fixed_leading,
    };
    let mut registry = VariableRegistry::new();
    let mut p = PseudoBooleanPolynomial::constant(1);
    let mut q = PseudoBooleanPolynomial::constant(1);
    for index in layout.p_positions() {
        let v = registry.push(Role::FactorP { index }, "")?;
        p.add_term(
            Monomial::new([v]),
            &Half::from_int(BigInt::from(1) << index),
        );
    }
    for index in layout.q_positions() {
        let v = registry.push(Role::FactorQ { index }, "")?;
        q.add_term(
            Monomial::new([v]),
            &Half::from_int(BigInt::from(1) << index),
        );
    }
    if fixed_leading {
        p.add_term(
            Monomial::constant(),
            &Half::from_int(BigInt::from(1) << (l1 - 1)),
        );
        q.add_term(
            Monomial::constant(),
            &Half::from_int(BigInt::from(1) << (l2 - 1)),
        );
    }
    let residual = &PseudoBooleanPolynomial::constant(BigInt::from(n.clone())) - &p.multiply(&q)?;
    let polynomial = residual.square()?;
    let registry = rename(registry);
    Ok(CostFunction {
        polynomial,
        registry,
        method: Method::Direct,
        n: n.clone(),
        layout,
    })
}

fn rename(registry: VariableRegistry) -> VariableRegistry {
    let mut out = VariableRegistry::new();
    for e in registry.entries() {
        out.push(e.role, format!("x{}", e.var.0))
            .expect("roles stay unique");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbp::Var;

    #[test]
    fn fifteen_matches_the_printed_cubic() {
        let cf = encode_direct(&15u32.into(), 2, 3).unwrap();
        let expected = PseudoBooleanPolynomial::from_terms([
            (128, vec![1, 2, 3]),
            (-56, vec![1, 2]),
            (-48, vec![1, 3]),
            (16, vec![2, 3]),
            (-52, vec![1]),
            (-52, vec![2]),
            (-96, vec![3]),
            (196, vec![]),
        ]);
        assert_eq!(cf.polynomial, expected);
        assert_eq!(
            cf.registry.get(Var(3)).unwrap().role,
            Role::FactorQ { index: 2 }
        );
    }

    #[test]
    fn nine_by_hand() {
        let cf = encode_direct(&9u32.into(), 2, 2).unwrap();
        let f = |a, b| cf.polynomial.evaluate_bits(&[a, b]).unwrap();
        assert_eq!(f(true, true), Half::from_int(0));
        assert_eq!(f(false, false), Half::from_int(64));
        assert_eq!(f(true, false), Half::from_int(36));
    }

    #[test]
    fn rejects_even_and_short() {
        assert!(matches!(
            encode_direct(&14u32.into(), 2, 3),
            Err(EncodeError::EvenInput(_))
        ));
        assert!(matches!(
            encode_direct(&15u32.into(), 1, 3),
            Err(EncodeError::LengthTooSmall { .. })
        ));
        assert!(matches!(
            encode_direct(&7u32.into(), 2, 2),
            Err(EncodeError::InputTooSmall(_))
        ));
    }

    #[test]
    fn fixed_leading_bits_drop_a_variable_per_factor() {
        let cf = encode_direct_with(&143u32.into(), 4, 4, true).unwrap();
        assert_eq!(cf.var_count(), 4);
        // p = 1 x2 x1 1 = 13, q = 1 x4 x3 1 = 11
        assert_eq!(
            cf.polynomial
                .evaluate_bits(&[false, true, true, false])
                .unwrap(),
            Half::zero()
        );
    }
}
