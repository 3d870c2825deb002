//! String-based serde for the field types, using the expression syntax.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::{Monomial, Var};
use super::parse::{parse_element, parse_poly, parse_var};
use super::poly::MultiPoly;
use super::scalar::BaseScalar;
use super::tower::TowerElement;

macro_rules! via_string {
    ($t:ty, $parse:expr) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                let parse: fn(&str) -> Result<$t, String> = $parse;
                parse(&s).map_err(serde::de::Error::custom)
            }
        }
    };
}

via_string!(TowerElement, |s| parse_element(s).map_err(|e| e.to_string()));
via_string!(MultiPoly, |s| parse_poly(s).map_err(|e| e.to_string()));
via_string!(Var, |s| parse_var(s).ok_or_else(|| format!("'{s}' is not a variable")));
via_string!(BaseScalar, |s| parse_element(s)
    .ok()
    .and_then(|e| e.as_constant())
    .ok_or_else(|| format!("'{s}' is not a constant")));
via_string!(Monomial, |s| {
    let p = parse_poly(s).map_err(|e| e.to_string())?;
    match p.as_term() {
        Some((m, c)) if c.is_one() => Ok(m.clone()),
        _ => Err(format!("'{s}' is not a monomial")),
    }
});

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips() {
        let e = parse_element("(1 + 2*i)/3*sqrt(x1) - y2/x1").unwrap();
        let j = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<TowerElement>(&j).unwrap(), e);
        let m = Monomial::from_pairs([(Var::X(1), 2), (Var::T(3), 1)]);
        assert_eq!(serde_json::from_str::<Monomial>(&serde_json::to_string(&m).unwrap()).unwrap(), m);
        assert_eq!(serde_json::from_str::<Monomial>("\"1\"").unwrap(), Monomial::one());
        assert!(serde_json::from_str::<Monomial>("\"2*x1\"").is_err());
        let c = BaseScalar::from_ratio(-3, 7);
        assert_eq!(serde_json::from_str::<BaseScalar>(&serde_json::to_string(&c).unwrap()).unwrap(), c);
        assert_eq!(serde_json::to_string(&Var::L(4)).unwrap(), "\"l4\"");
    }
}
