use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{parse_rational, Block, MPoly, Monomial, PolyError, Var, VariableSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub n: usize,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: BTreeMap<String, u32>,
    pub num: String,
    pub den: String,
}

/// Wire form of a polynomial. Terms run from the highest monomial down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub space: SpaceJson,
    pub terms: Vec<TermJson>,
}

impl From<&MPoly> for PolyJson {
    fn from(p: &MPoly) -> Self {
        let space = p.space();
        let terms = p
            .terms()
            .rev()
            .map(|(m, c)| TermJson {
                exps: m.pairs().iter().map(|&(i, e)| (space.var(i).to_string(), e)).collect(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        PolyJson {
            space: SpaceJson {
                n: space.n(),
                blocks: space.blocks().to_vec(),
            },
            terms,
        }
    }
}

impl TryFrom<&PolyJson> for MPoly {
    type Error = PolyError;

    fn try_from(j: &PolyJson) -> Result<Self, PolyError> {
        let space = VariableSpace::new(j.space.n, j.space.blocks.clone())?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let num = parse_rational(&t.num)?;
            let den = parse_rational(&t.den)?;
            if num.denom() != &1.into() || den.denom() != &1.into() || den == BigRational::from_integer(0.into()) {
                return Err(PolyError::Json(format!("bad coefficient {}/{}", t.num, t.den)));
            }
            let mut pairs = Vec::with_capacity(t.exps.len());
            for (name, &e) in &t.exps {
                pairs.push((space.require(&Var::parse(name))?, e));
            }
            terms.push((Monomial::from_pairs(pairs), num / den));
        }
        Ok(MPoly::from_terms(&space, terms))
    }
}

impl MPoly {
    pub fn to_json(&self) -> PolyJson {
        PolyJson::from(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("polynomial JSON is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<MPoly, PolyError> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        MPoly::try_from(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn canonical_text_round_trips() {
        let s = VariableSpace::lz(2).unwrap();
        let l1 = MPoly::var(&s, &Var::Lambda(1)).unwrap();
        let z2 = MPoly::var(&s, &Var::Z(2)).unwrap();
        let p = &(&l1 * &z2).scale(&rat(-3, 2)) + &MPoly::constant(&s, int(7));
        let text = p.to_json_string();
        assert_eq!(
            text,
            r#"{"space":{"n":2,"blocks":[{"kind":"L"},{"kind":"Z"}]},"terms":[{"exps":{"l1":1,"z2":1},"num":"-3","den":"2"},{"exps":{},"num":"7","den":"1"}]}"#
        );
        let back = MPoly::from_json_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn rejects_unknown_variables() {
        let bad = r#"{"space":{"n":1,"blocks":[{"kind":"Z"}]},"terms":[{"exps":{"z2":1},"num":"1","den":"1"}]}"#;
        assert!(matches!(MPoly::from_json_str(bad), Err(PolyError::UnknownVariable(_))));
    }
}
