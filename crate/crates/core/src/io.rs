//! JSON formats.
//!
//! * group: `{"factors": [d1, ...]}`
//! * cocycle: `{"a": group, "b": group, "table": [[coords, ...], ...]}`, rows and
//!   columns in lexicographic element order
//! * bilinear map: `{"a": group, "b": group, "matrix": [[coords, ...], ...]}` on
//!   standard generators
//! * `Q/Z` values: reduced strings `"num/den"`
//!
//! Every writer emits pretty-printed JSON followed by a newline, so that
//! writing a parsed document reproduces it byte for byte.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::abelian::AbelianGroup;
use crate::cocycle::{BilinearMatrix, Cocycle};
use crate::embedding::EmbeddingResult;
use crate::error::{Error, Result};
use crate::qz::QZVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub factors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleJson {
    pub a: GroupJson,
    pub b: GroupJson,
    pub table: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearJson {
    pub a: GroupJson,
    pub b: GroupJson,
    pub matrix: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FValueJson {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub f: Vec<String>,
}

/// An embedding `φ: G → A ×_β̃ L` as data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingJson {
    pub cocycle: CocycleJson,
    pub l_rank: usize,
    pub j: Vec<Vec<String>>,
    pub beta_tilde: Vec<Vec<Vec<String>>>,
    pub f: Vec<FValueJson>,
    pub h: Vec<Vec<String>>,
    pub image_f: GroupJson,
}

impl From<&AbelianGroup> for GroupJson {
    fn from(g: &AbelianGroup) -> Self {
        GroupJson {
            factors: g.factors().to_vec(),
        }
    }
}

impl GroupJson {
    pub fn to_group(&self) -> Result<AbelianGroup> {
        AbelianGroup::new(self.factors.clone())
    }
}

impl From<&Cocycle> for CocycleJson {
    fn from(c: &Cocycle) -> Self {
        CocycleJson {
            a: c.group_a().into(),
            b: c.group_b().into(),
            table: c.to_table(),
        }
    }
}

impl CocycleJson {
    /// Builds the table; it is not validated as a cocycle.
    pub fn to_cocycle(&self) -> Result<Cocycle> {
        Cocycle::from_table(&self.a.to_group()?, &self.b.to_group()?, &self.table)
    }
}

impl From<&BilinearMatrix> for BilinearJson {
    fn from(m: &BilinearMatrix) -> Self {
        BilinearJson {
            a: m.group_a().into(),
            b: m.group_b().into(),
            matrix: m.entries().to_vec(),
        }
    }
}

impl BilinearJson {
    pub fn to_bilinear(&self) -> Result<BilinearMatrix> {
        BilinearMatrix::new(&self.a.to_group()?, &self.b.to_group()?, self.matrix.clone())
    }
}

impl From<&EmbeddingResult> for EmbeddingJson {
    fn from(r: &EmbeddingResult) -> Self {
        let strings = |v: &QZVector| v.to_strings();
        EmbeddingJson {
            cocycle: r.source.gamma().into(),
            l_rank: r.l_rank(),
            j: r.target.j.iter().map(strings).collect(),
            beta_tilde: r.beta_tilde.iter().map(|row| row.iter().map(strings).collect()).collect(),
            f: r.source
                .elements()
                .map(|g| FValueJson {
                    f: r.f_of(&g).to_strings(),
                    a: g.a,
                    b: g.b,
                })
                .collect(),
            h: r.h.iter().map(strings).collect(),
            image_f: (&r.image_f).into(),
        }
    }
}

impl EmbeddingJson {
    /// Checks that every `Q/Z` string parses, is reduced, and has `l_rank` coordinates.
    pub fn check_values(&self) -> Result<()> {
        let all = self
            .j
            .iter()
            .chain(self.beta_tilde.iter().flatten())
            .chain(self.f.iter().map(|v| &v.f))
            .chain(&self.h);
        for v in all {
            let parsed = QZVector::parse_strings(v)?;
            if parsed.len() != self.l_rank || parsed.to_strings() != *v {
                return Err(Error::InvalidInput(format!("bad L-value {v:?}")));
            }
        }
        Ok(())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON: {e}")))
}

pub fn parse_group(text: &str) -> Result<AbelianGroup> {
    from_json::<GroupJson>(text)?.to_group()
}

pub fn parse_cocycle(text: &str) -> Result<Cocycle> {
    from_json::<CocycleJson>(text)?.to_cocycle()
}

pub fn parse_bilinear(text: &str) -> Result<BilinearMatrix> {
    from_json::<BilinearJson>(text)?.to_bilinear()
}

pub fn parse_embedding(text: &str) -> Result<EmbeddingJson> {
    let e: EmbeddingJson = from_json(text)?;
    e.cocycle.to_cocycle()?;
    e.check_values()?;
    Ok(e)
}

/// Accepts `[d1, ...]` or a group document.
pub fn parse_group_arg(text: &str) -> Result<AbelianGroup> {
    let t = text.trim();
    if t.starts_with('[') {
        AbelianGroup::new(from_json(t)?)
    } else {
        parse_group(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::carry_cocycle;
    use crate::embedding::embed;
    use crate::twisted::ExtensionGroup;

    #[test]
    fn group_and_cocycle_round_trip() {
        let g = AbelianGroup::new(vec![2, 4]).unwrap();
        let s = to_json(&GroupJson::from(&g));
        assert_eq!(to_json(&GroupJson::from(&parse_group(&s).unwrap())), s);
        assert_eq!(parse_group_arg("[2, 4]").unwrap(), g);

        let c = carry_cocycle(3, 3).unwrap();
        let s = to_json(&CocycleJson::from(&c));
        assert_eq!(parse_cocycle(&s).unwrap(), c);
        assert_eq!(to_json(&CocycleJson::from(&parse_cocycle(&s).unwrap())), s);
    }

    #[test]
    fn embedding_round_trip() {
        let g = ExtensionGroup::build(&carry_cocycle(3, 3).unwrap()).unwrap();
        let e = EmbeddingJson::from(&embed(&g).unwrap());
        let s = to_json(&e);
        assert!(s.contains("\"1/9\""));
        assert_eq!(to_json(&parse_embedding(&s).unwrap()), s);
    }

    #[test]
    fn malformed_documents() {
        assert!(parse_group("{\"factors\": [0]}").is_err());
        assert!(parse_group("{\"factors\": [2], \"x\": 1}").is_err());
        assert!(parse_cocycle("{\"a\": {\"factors\": [2]}, \"b\": {\"factors\": [2]}, \"table\": []}").is_err());
        let bad = "{\"a\": {\"factors\": [2]}, \"b\": {\"factors\": [3]}, \"matrix\": [[[1]]]}";
        assert!(parse_bilinear(bad).is_err());
    }
}
