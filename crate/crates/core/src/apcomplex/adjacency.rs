//! Adjacency types: ordered pairs of intersecting collared tiles, recorded
//! as the pose of the second tile in the canonical frame of the first.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corona::{CoronaScanner, EnumConfig, Enumeration};
use crate::error::{Error, Result};
use crate::geom::{tiles_intersect, TilePose};
use crate::par;
use crate::substitution::{expand, patch, SubstitutionRule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairType {
    pub a: usize,
    pub b: usize,
    /// Tile of class `b`, with the tile of class `a` at its base pose.
    pub pose: TilePose,
}

impl PairType {
    fn key(&self) -> PairKey {
        let mut bytes = Vec::with_capacity(64);
        self.pose.tile_key_bytes(&mut bytes);
        (self.a, self.b, bytes)
    }
}

type PairKey = (usize, usize, Vec<u8>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairScan {
    pub level: u32,
    pub scanned: usize,
    pub closed_total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub scans: Vec<PairScan>,
    pub stabilized_at: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Adjacency {
    pub pairs: Vec<PairType>,
    pub certificate: PairCertificate,
}

fn insert(set: &mut BTreeMap<PairKey, PairType>, p: PairType) -> bool {
    let k = p.key();
    if set.contains_key(&k) {
        return false;
    }
    set.insert(k, p);
    true
}

/// Every ordered pair of intersecting certified tiles of a patch.
pub fn scan_pairs(scanner: &CoronaScanner, e: &Enumeration) -> Result<Vec<PairType>> {
    let ids = scanner.classify(e)?;
    let tiles = &scanner.patch.tiles.tiles;
    let found = par::map_range(tiles.len(), |i| {
        let Some(a) = ids[i] else { return Vec::new() };
        let g = tiles[i].direct_part().inverse();
        scanner
            .neighbors(i)
            .into_iter()
            .filter_map(|j| ids[j].map(|b| PairType { a, b, pose: tiles[j].transform(&g) }))
            .collect()
    });
    Ok(found.into_iter().flatten().collect())
}

/// Adjacencies among the ten children of an adjacent pair.
pub fn child_pairs(p: &PairType, e: &Enumeration, r: &SubstitutionRule) -> Vec<PairType> {
    let ca = r.children_of(&TilePose::base(e.classes[p.a].chirality));
    let cb = r.children_of(&p.pose);
    let tiles: Vec<(usize, &TilePose)> =
        e.children[p.a].iter().copied().zip(&ca).chain(e.children[p.b].iter().copied().zip(&cb)).collect();
    let mut out = Vec::new();
    for (x, &(kx, tx)) in tiles.iter().enumerate() {
        let g = tx.direct_part().inverse();
        for (y, &(ky, ty)) in tiles.iter().enumerate() {
            if x != y && tiles_intersect(tx, ty) {
                out.push(PairType { a: kx, b: ky, pose: ty.transform(&g) });
            }
        }
    }
    out
}

fn close(set: &mut BTreeMap<PairKey, PairType>, mut work: Vec<PairType>, e: &Enumeration, r: &SubstitutionRule) {
    while !work.is_empty() {
        let next = par::flat_map(&work, |p| child_pairs(p, e, r));
        work = next.into_iter().filter(|p| insert(set, p.clone())).collect();
    }
}

/// Scans `patch(n)` for increasing `n`, closing the pair set under
/// substitution after each scan, until a scan adds nothing to the closed
/// set.
pub fn enumerate_pairs(r: &SubstitutionRule, e: &Enumeration, cfg: EnumConfig) -> Result<Adjacency> {
    let mut set: BTreeMap<PairKey, PairType> = BTreeMap::new();
    let mut scans = Vec::new();
    let mut p = patch(cfg.scan_level_start, r, cfg.max_level)?;
    loop {
        let scanner = CoronaScanner::new(&p);
        let found = scan_pairs(&scanner, e)?;
        let scanned = found.iter().map(PairType::key).collect::<BTreeSet<_>>().len();
        let new: Vec<PairType> = found.into_iter().filter(|q| insert(&mut set, q.clone())).collect();
        let grew = !new.is_empty();
        close(&mut set, new, e, r);
        scans.push(PairScan { level: p.level, scanned, closed_total: set.len() });
        log::info!("level {}: {} adjacency types scanned, {} after closure", p.level, scanned, set.len());
        if !grew && scans.len() > 1 {
            let certificate = PairCertificate { scans, stabilized_at: p.level };
            return Ok(Adjacency { pairs: set.into_values().collect(), certificate });
        }
        if p.level >= cfg.max_level {
            return Err(Error::NonStabilized(cfg.max_level));
        }
        p = expand(&p, r);
    }
}
