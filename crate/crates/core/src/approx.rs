//! The operator-norm bracket: `||A||_{inf->inf} / 2^{n+1} <= lindisc(A) <=
//! ||A||_{inf->inf} / 2`.
//!
//! The upper bound comes from rounding every coordinate to the nearest
//! integer; the lower bound is the polynomial-time `2^{n+1}`-factor
//! approximation. Both ends are exact rationals.

use num_bigint::BigInt;
use num_traits::One;

use crate::matrix::{
    operator_inf_norm, Bracket, LowerProvenance, Matrix, UpperProvenance,
};
use crate::rational::{half, Rational};

pub fn approx_lindisc(a: &Matrix) -> Bracket {
    let norm = operator_inf_norm(a);
    let lower = &norm / Rational::from_integer(BigInt::one() << (a.cols() + 1));
    let upper = norm * half();
    Bracket {
        lower,
        upper,
        lower_provenance: LowerProvenance::OperatorNorm,
        upper_provenance: UpperProvenance::OperatorNorm,
    }
}
