//! JSON shapes of frames and models.
//!
//! ```text
//! {"type":"kripke","worlds":N,"edges":[[i,j],...]}
//! {"type":"nbd","worlds":N,"dia":[m0,m1,...]}
//! {"frame":<frame>,"valuation":{"p":[0,2],...}}
//! ```

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::frame::{Frame, KripkeFrame, NbdFrame};
use super::model::{Model, Valuation};
use super::worldset::WorldSet;
use crate::formula::Var;

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum FrameDoc {
    Kripke { worlds: usize, edges: Vec<(usize, usize)> },
    Nbd { worlds: usize, dia: Vec<u64> },
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Frame::Kripke(k) => FrameDoc::Kripke {
                worlds: k.size(),
                edges: k.edges().collect(),
            },
            Frame::Nbd(n) => FrameDoc::Nbd {
                worlds: n.size(),
                dia: n.table().to_vec(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Frame, D::Error> {
        match FrameDoc::deserialize(d)? {
            FrameDoc::Kripke { worlds, edges } => {
                if worlds > super::MAX_WORLDS {
                    return Err(D::Error::custom(format!(
                        "worlds: {worlds} exceeds the limit of {}",
                        super::MAX_WORLDS
                    )));
                }
                KripkeFrame::new(worlds, edges)
                    .map(Frame::Kripke)
                    .map_err(|e| D::Error::custom(format!("edges: {e}")))
            }
            FrameDoc::Nbd { worlds, dia } => NbdFrame::new(worlds, dia)
                .map(Frame::Nbd)
                .map_err(|e| D::Error::custom(format!("dia: {e}"))),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.iter().map(|(v, set)| (v.as_str(), set)))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    frame: Frame,
    #[serde(default)]
    valuation: BTreeMap<Var, Vec<usize>>,
}

#[derive(Serialize)]
struct ModelOut<'a> {
    frame: &'a Frame,
    valuation: &'a Valuation,
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModelOut {
            frame: &self.frame,
            valuation: &self.val,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Model, D::Error> {
        let doc = ModelDoc::deserialize(d)?;
        let n = doc.frame.size();
        let mut val = Valuation::new(n);
        for (var, worlds) in doc.valuation {
            let set =
                WorldSet::from_worlds(n, worlds).map_err(|e| D::Error::custom(format!("valuation.{var}: {e}")))?;
            val.set(var, set).map_err(D::Error::custom)?;
        }
        Model::new(doc.frame, val).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_round_trip() {
        let k = Frame::Kripke(KripkeFrame::new(2, [(0, 1)]).unwrap());
        let text = serde_json::to_string(&k).unwrap();
        assert_eq!(text, r#"{"type":"kripke","worlds":2,"edges":[[0,1]]}"#);
        assert_eq!(serde_json::from_str::<Frame>(&text).unwrap(), k);

        let n: Frame = serde_json::from_str(r#"{"type":"nbd","worlds":1,"dia":[0,1]}"#).unwrap();
        assert_eq!(n.dia_bits(1), 1);
        let err = serde_json::from_str::<Frame>(r#"{"type":"nbd","worlds":1,"dia":[0]}"#).unwrap_err();
        assert!(err.to_string().contains("dia"));
    }

    #[test]
    fn model_round_trip() {
        let text = r#"{"frame":{"type":"kripke","worlds":3,"edges":[[0,1]]},"valuation":{"p":[0,2]}}"#;
        let m: Model = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), text);
        let bad = r#"{"frame":{"type":"kripke","worlds":3,"edges":[]},"valuation":{"p":[5]}}"#;
        let err = serde_json::from_str::<Model>(bad).unwrap_err();
        assert!(err.to_string().contains("valuation.p"));
    }
}
