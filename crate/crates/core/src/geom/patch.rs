use std::fmt;

use serde::{Deserialize, Serialize};

use super::{triangles_overlap, ExactPoint, Isometry, TilePose};
use crate::error::{Error, Result};

/// Canonical byte encoding of an anchored patch.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatchKey(pub Vec<u8>);

impl PatchKey {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        hex::decode(s).map(PatchKey).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Debug for PatchKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.to_hex();
        write!(f, "PatchKey({}…)", &h[..h.len().min(16)])
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Patch {
    pub tiles: Vec<TilePose>,
}

impl Patch {
    pub fn new(tiles: Vec<TilePose>) -> Self {
        Patch { tiles }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn transform(&self, g: &Isometry) -> Patch {
        Patch::new(self.tiles.iter().map(|t| t.transform(g)).collect())
    }

    pub fn mirror(&self) -> Patch {
        Patch::new(self.tiles.iter().map(TilePose::mirror).collect())
    }

    /// The direct isometry taking tile `anchor` to the base pose of its
    /// chirality.
    pub fn anchor_frame(&self, anchor: usize) -> Result<Isometry> {
        let t = self.tiles.get(anchor).ok_or(Error::AnchorOutOfRange { anchor, len: self.tiles.len() })?;
        Ok(t.direct_part().inverse())
    }

    pub fn normalized(&self, anchor: usize) -> Result<Patch> {
        Ok(self.transform(&self.anchor_frame(anchor)?))
    }

    /// Serializes the tiles in canonical order, without normalizing.
    pub fn encode(&self) -> PatchKey {
        let mut sorted: Vec<&TilePose> = self.tiles.iter().collect();
        sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut out = Vec::with_capacity(4 + 64 * sorted.len());
        out.extend_from_slice(&(sorted.len() as u32).to_be_bytes());
        for t in sorted {
            t.tile_key_bytes(&mut out);
        }
        PatchKey(out)
    }

    /// Encoding of the patch after moving tile `anchor` to the base pose.
    pub fn canonical_key(&self, anchor: usize) -> Result<PatchKey> {
        Ok(self.normalized(anchor)?.encode())
    }

    /// Minimum canonical key over all anchors.
    pub fn class_key(&self) -> Option<PatchKey> {
        (0..self.tiles.len()).filter_map(|k| self.canonical_key(k).ok()).min()
    }

    pub fn vertices(&self) -> Vec<[ExactPoint; 3]> {
        self.tiles.iter().map(TilePose::vertices).collect()
    }

    /// Whether all tile interiors are pairwise disjoint.
    pub fn interiors_disjoint(&self) -> bool {
        let v = self.vertices();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if triangles_overlap(&v[i], &v[j]) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Chirality, UnitRotation};
    use crate::rational::ExactRational as Q;

    fn rot345() -> UnitRotation {
        UnitRotation::new(Q::ratio(3, 5), Q::ratio(4, 5)).unwrap()
    }

    #[test]
    fn single_tile_normalizes() {
        let t = TilePose::new(Chirality::Plus, rot345(), ExactPoint::new(Q::ratio(7, 5), Q::from(-3)));
        let k = Patch::new(vec![t]).canonical_key(0).unwrap();
        assert_eq!(k, Patch::new(vec![TilePose::base(Chirality::Plus)]).encode());
    }

    #[test]
    fn key_invariant_under_rotation() {
        let p = Patch::new(vec![
            TilePose::base(Chirality::Plus),
            TilePose::base(Chirality::Minus),
            TilePose::new(Chirality::Plus, UnitRotation::half(), ExactPoint::int(2, 1)),
        ]);
        let g = Isometry::direct(rot345(), ExactPoint::new(Q::ratio(1, 3), Q::from(2)));
        for k in 0..3 {
            assert_eq!(p.canonical_key(k).unwrap(), p.transform(&g).canonical_key(k).unwrap());
        }
        assert!(p.canonical_key(3).is_err());
    }

    #[test]
    fn minus_anchor_keeps_chirality() {
        let t = TilePose::new(Chirality::Minus, rot345(), ExactPoint::int(1, 1));
        let n = Patch::new(vec![t]).normalized(0).unwrap();
        assert_eq!(n.tiles[0], TilePose::base(Chirality::Minus));
    }
}
