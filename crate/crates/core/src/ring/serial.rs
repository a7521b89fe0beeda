use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::QElement;
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// One (word, numerator, denominator) term. Integers are decimal strings so
/// they survive JSON readers without big-number support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub word: String,
    pub num: String,
    pub den: String,
}

impl QElement {
    /// Terms in canonical element order.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.sorted_terms()
            .into_iter()
            .map(|(g, c)| TermRecord {
                word: self.group().format_element(g),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect()
    }

    pub fn from_records(spec: GroupSpec, records: &[TermRecord]) -> Result<Self> {
        let mut out = QElement::zero(spec);
        for r in records {
            let g = spec.parse_word(&r.word)?;
            let num: BigInt = r.num.parse().map_err(|_| Error::parse(format!("bad numerator `{}`", r.num)))?;
            let den: BigInt = r.den.parse().map_err(|_| Error::parse(format!("bad denominator `{}`", r.den)))?;
            if den == BigInt::from(0) {
                return Err(Error::parse("zero denominator"));
            }
            out.add_term(g, &BigRational::new(num, den));
        }
        Ok(out)
    }
}
