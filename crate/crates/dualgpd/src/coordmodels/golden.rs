use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::groupoid::{CoordGroupoid, Family};
use super::CoordError;
use crate::exactcalc::{scalar, Mat, PolyMap};

/// Affine map `x -> A x + b` with entries as `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrozenAffine {
    pub matrix: Vec<Vec<String>>,
    pub offset: Vec<String>,
    pub dom: usize,
}

impl FrozenAffine {
    pub fn freeze(f: &PolyMap) -> Result<Self, CoordError> {
        let (a, b) = f.affine_parts()?;
        Ok(FrozenAffine { matrix: a.to_strings(), offset: scalar::vec_to_strings(&b), dom: f.dom() })
    }

    pub fn thaw(&self) -> Result<PolyMap, CoordError> {
        let a = Mat::from_strings(&self.matrix, self.dom)?;
        let b = self.offset.iter().map(|s| scalar::parse(s)).collect::<Result<Vec<_>, _>>()?;
        if a.rows() != b.len() {
            return Err(CoordError::Shape(format!("offset has {} entries for {} rows", b.len(), a.rows())));
        }
        Ok(PolyMap::affine(&a, &b))
    }
}

/// Structure maps of an affine groupoid, keyed by `source`, `target`, `identity`, `inverse`, `composition`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrozenGroupoid {
    pub name: String,
    pub base_dim: usize,
    pub arrow_dim: usize,
    pub maps: BTreeMap<String, FrozenAffine>,
}

impl FrozenGroupoid {
    pub fn freeze(g: &CoordGroupoid) -> Result<Self, CoordError> {
        let maps = [
            ("source", g.src_map()),
            ("target", g.tgt_map()),
            ("identity", g.unit_map()),
            ("inverse", g.inv_map()),
            ("composition", g.comp_map()),
        ]
        .into_iter()
        .map(|(k, f)| Ok((k.to_string(), FrozenAffine::freeze(f)?)))
        .collect::<Result<_, CoordError>>()?;
        Ok(FrozenGroupoid { name: g.name.clone(), base_dim: g.base_dim(), arrow_dim: g.arrow_dim(), maps })
    }

    pub fn thaw(&self) -> Result<CoordGroupoid, CoordError> {
        let get = |k: &str| {
            self.maps.get(k).ok_or_else(|| CoordError::Shape(format!("missing map {k}"))).and_then(FrozenAffine::thaw)
        };
        CoordGroupoid::new(
            self.name.clone(),
            Family::Custom,
            self.base_dim,
            self.arrow_dim,
            get("source")?,
            get("target")?,
            get("identity")?,
            get("inverse")?,
            get("composition")?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordmodels::{cotangent_groupoid, pair_groupoid};

    #[test]
    fn freeze_thaw_round_trip() {
        let c = cotangent_groupoid(&pair_groupoid(1)).unwrap();
        let frozen = FrozenGroupoid::freeze(&c.total).unwrap();
        let json = serde_json::to_string(&frozen).unwrap();
        let back: FrozenGroupoid = serde_json::from_str(&json).unwrap();
        let thawed = back.thaw().unwrap();
        assert_eq!(thawed.comp_map(), c.total.comp_map());
        assert_eq!(thawed.src_map(), c.total.src_map());
    }
}
