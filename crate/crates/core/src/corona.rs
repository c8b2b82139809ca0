//! First coronas and collared prototiles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_strictly_in_triangle, triangles_intersect, Chirality, Patch, PatchKey, TilePose};
use crate::par;
use crate::spatial::TriangleIndex;
use crate::substitution::{expand, patch, LeveledPatch, SubstitutionRule, DEFAULT_MAX_LEVEL};

/// A tile with every tile of the patch meeting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corona {
    pub center: TilePose,
    pub neighbors: Vec<TilePose>,
    pub key: PatchKey,
}

impl Corona {
    pub fn new(center: TilePose, neighbors: Vec<TilePose>) -> Self {
        let mut c = Corona { center, neighbors, key: PatchKey(Vec::new()) };
        c.key = c.patch().canonical_key(0).expect("center is tile 0");
        c
    }

    /// Center first, then neighbors.
    pub fn patch(&self) -> Patch {
        let mut tiles = Vec::with_capacity(self.neighbors.len() + 1);
        tiles.push(self.center.clone());
        tiles.extend(self.neighbors.iter().cloned());
        Patch::new(tiles)
    }

    /// The same corona moved so the center sits at the base pose.
    pub fn normalized(&self) -> Corona {
        let g = self.center.direct_part().inverse();
        let mut neighbors: Vec<TilePose> = self.neighbors.iter().map(|t| t.transform(&g)).collect();
        neighbors.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Corona { center: TilePose::base(self.center.chirality), neighbors, key: self.key.clone() }
    }

    pub fn mirror(&self) -> Corona {
        Corona::new(self.center.mirror(), self.neighbors.iter().map(TilePose::mirror).collect())
    }
}

/// The center tile lies in the open region, so every tile meeting it is a
/// tile of the patch.
pub fn is_certified(p: &LeveledPatch, t: usize) -> bool {
    p.tiles.tiles[t].vertices().iter().all(|v| point_strictly_in_triangle(v, &p.region))
}

pub fn first_corona(t: usize, p: &LeveledPatch) -> Result<Corona> {
    let len = p.tiles.len();
    if t >= len {
        return Err(Error::AnchorOutOfRange { anchor: t, len });
    }
    if !is_certified(p, t) {
        return Err(Error::BoundaryUncertain(t));
    }
    let v = p.tiles.vertices();
    let neighbors =
        (0..len).filter(|&j| j != t && triangles_intersect(&v[t], &v[j])).map(|j| p.tiles.tiles[j].clone()).collect();
    Ok(Corona::new(p.tiles.tiles[t].clone(), neighbors))
}

/// Corona extraction over a whole patch through a spatial index.
pub struct CoronaScanner<'a> {
    pub patch: &'a LeveledPatch,
    index: TriangleIndex,
}

impl<'a> CoronaScanner<'a> {
    pub fn new(patch: &'a LeveledPatch) -> Self {
        let index = TriangleIndex::new(par::map(&patch.tiles.tiles, TilePose::vertices));
        CoronaScanner { patch, index }
    }

    pub fn certified(&self, t: usize) -> bool {
        self.index.triangle(t).iter().all(|v| point_strictly_in_triangle(v, &self.patch.region))
    }

    pub fn neighbors(&self, t: usize) -> Vec<usize> {
        self.index.neighbors(t)
    }

    pub fn corona(&self, t: usize) -> Result<Corona> {
        if !self.certified(t) {
            return Err(Error::BoundaryUncertain(t));
        }
        let tiles = &self.patch.tiles.tiles;
        let neighbors = self.neighbors(t).into_iter().map(|j| tiles[j].clone()).collect();
        Ok(Corona::new(tiles[t].clone(), neighbors))
    }

    /// Corona of every certified tile; `None` elsewhere.
    pub fn coronas(&self) -> Vec<Option<Corona>> {
        par::map_range(self.patch.len(), |t| self.corona(t).ok())
    }

    /// Collared class of every certified tile.
    pub fn classify(&self, e: &Enumeration) -> Result<Vec<Option<usize>>> {
        par::map_range(self.patch.len(), |t| match self.corona(t) {
            Ok(c) => e.class_of(&c.key).map(Some).ok_or_else(|| Error::IncompleteEnumeration(format!("tile {t}"))),
            Err(_) => Ok(None),
        })
        .into_iter()
        .collect()
    }
}

/// Coronas of the five children of a corona's center, computed inside the
/// inflated corona.
pub fn child_coronas(c: &Corona, r: &SubstitutionRule) -> Vec<Corona> {
    let big = r.expand_patch(&c.patch());
    let v = big.vertices();
    (0..r.children.len())
        .map(|k| {
            let neighbors = (0..big.len())
                .filter(|&j| j != k && triangles_intersect(&v[k], &v[j]))
                .map(|j| big.tiles[j].clone())
                .collect();
            Corona::new(big.tiles[k].clone(), neighbors)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CollaredClass {
    pub id: usize,
    pub chirality: Chirality,
    /// Normalized: the center is at the base pose.
    pub representative: Corona,
    pub mirror: usize,
    pub key: PatchKey,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelScan {
    pub level: u32,
    pub tiles: usize,
    pub certified: usize,
    pub classes: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Certificate {
    pub scans: Vec<LevelScan>,
    pub stabilized_at: u32,
    pub closed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumConfig {
    pub scan_level_start: u32,
    pub max_level: u32,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { scan_level_start: 3, max_level: DEFAULT_MAX_LEVEL }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub classes: Vec<CollaredClass>,
    /// `children[j][k]`: class of child `k` of class `j`.
    pub children: Vec<Vec<usize>>,
    pub certificate: Certificate,
    lookup: HashMap<PatchKey, usize>,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, key: &PatchKey) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    pub fn mirror_permutation(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.mirror).collect()
    }

    pub fn count_by_chirality(&self) -> (usize, usize) {
        let plus = self.classes.iter().filter(|c| c.chirality == Chirality::Plus).count();
        (plus, self.len() - plus)
    }

    fn assemble(reps: BTreeMap<PatchKey, Corona>, r: &SubstitutionRule, certificate: Certificate) -> Result<Self> {
        let lookup: HashMap<PatchKey, usize> = reps.keys().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let mut classes = Vec::with_capacity(reps.len());
        for (id, (key, rep)) in reps.into_iter().enumerate() {
            let mkey = rep.mirror().key;
            let mirror =
                *lookup.get(&mkey).ok_or_else(|| Error::IncompleteEnumeration(format!("mirror of class {id}")))?;
            classes.push(CollaredClass { id, chirality: rep.center.chirality, representative: rep, mirror, key });
        }
        let mut e = Enumeration { classes, children: Vec::new(), certificate, lookup };
        e.children =
            par::map(&e.classes, |c| collared_children(c, &e, r).map(|v| v.into_iter().map(|(_, id)| id).collect()))
                .into_iter()
                .collect::<Result<_>>()?;
        Ok(e)
    }

    pub fn to_file(&self) -> EnumerationFile {
        EnumerationFile {
            classes: self
                .classes
                .iter()
                .map(|c| ClassRecord {
                    id: c.id,
                    chirality: c.chirality,
                    center: c.representative.center.clone(),
                    neighbors: c.representative.neighbors.clone(),
                    mirror: c.mirror,
                    key: c.key.to_hex(),
                })
                .collect(),
            children: self.children.clone(),
            certificate: self.certificate.clone(),
        }
    }

    /// Rebuilds from a dump, recomputing every key as a consistency check.
    pub fn from_file(f: EnumerationFile) -> Result<Self> {
        let mut classes = Vec::with_capacity(f.classes.len());
        let mut lookup = HashMap::new();
        for rec in f.classes {
            let rep = Corona::new(rec.center, rec.neighbors);
            if rep.key.to_hex() != rec.key || rec.id != classes.len() {
                return Err(Error::Parse(format!("class record {} is inconsistent", rec.id)));
            }
            lookup.insert(rep.key.clone(), rec.id);
            classes.push(CollaredClass {
                id: rec.id,
                chirality: rec.chirality,
                key: rep.key.clone(),
                representative: rep,
                mirror: rec.mirror,
            });
        }
        Ok(Enumeration { classes, children: f.children, certificate: f.certificate, lookup })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassRecord {
    pub id: usize,
    pub chirality: Chirality,
    pub center: TilePose,
    pub neighbors: Vec<TilePose>,
    pub mirror: usize,
    pub key: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumerationFile {
    pub classes: Vec<ClassRecord>,
    pub children: Vec<Vec<usize>>,
    pub certificate: Certificate,
}

/// Class of each child of `c`, as `(slot, id)` with slots counted from 1.
pub fn collared_children(c: &CollaredClass, e: &Enumeration, r: &SubstitutionRule) -> Result<Vec<(usize, usize)>> {
    child_coronas(&c.representative, r)
        .into_iter()
        .enumerate()
        .map(|(k, cc)| {
            e.class_of(&cc.key)
                .map(|id| (k + 1, id))
                .ok_or_else(|| Error::IncompleteEnumeration(format!("child {} of class {}", k + 1, c.id)))
        })
        .collect()
}

fn closed_under_children(reps: &BTreeMap<PatchKey, Corona>, r: &SubstitutionRule) -> bool {
    let reps: Vec<&Corona> = reps.values().collect();
    let keys: BTreeSet<&PatchKey> = reps.iter().map(|c| &c.key).collect();
    par::map(&reps, |c| child_coronas(c, r).iter().all(|cc| keys.contains(&cc.key))).into_iter().all(|ok| ok)
}

/// Scans `patch(n)` for increasing `n` until two consecutive levels give the
/// same class set and that set is closed under substitution.
pub fn enumerate_collared(r: &SubstitutionRule, cfg: EnumConfig) -> Result<Enumeration> {
    let mut reps: BTreeMap<PatchKey, Corona> = BTreeMap::new();
    let mut prev: Option<BTreeSet<PatchKey>> = None;
    let mut scans = Vec::new();
    let mut p = patch(cfg.scan_level_start, r, cfg.max_level)?;
    loop {
        let scanner = CoronaScanner::new(&p);
        let found: Vec<Corona> = scanner.coronas().into_iter().flatten().collect();
        let certified = found.len();
        let mut keys = BTreeSet::new();
        for c in found {
            if keys.insert(c.key.clone()) {
                reps.entry(c.key.clone()).or_insert_with(|| c.normalized());
            }
        }
        scans.push(LevelScan { level: p.level, tiles: p.len(), certified, classes: keys.len() });
        log::info!("level {}: {} certified tiles, {} classes", p.level, certified, keys.len());

        if prev.as_ref() == Some(&keys) && closed_under_children(&reps, r) {
            let certificate = Certificate { scans, stabilized_at: p.level, closed: true };
            return Enumeration::assemble(reps, r, certificate);
        }
        prev = Some(keys);
        if p.level >= cfg.max_level {
            return Err(Error::NonStabilized(cfg.max_level));
        }
        p = expand(&p, r);
    }
}

/// Classes of bare tiles, with coronas ignored.
#[derive(Clone, Debug)]
pub struct UncollaredClasses {
    pub chirality: Vec<Chirality>,
    pub children: Vec<Vec<usize>>,
}

pub fn enumerate_uncollared(r: &SubstitutionRule) -> UncollaredClasses {
    let mut keyed: BTreeMap<PatchKey, Chirality> = BTreeMap::new();
    for ch in [Chirality::Plus, Chirality::Minus] {
        keyed.insert(Patch::new(vec![TilePose::base(ch)]).encode(), ch);
    }
    let chirality: Vec<Chirality> = keyed.values().copied().collect();
    let id_of = |t: &TilePose| {
        let k = Patch::new(vec![t.clone()]).canonical_key(0).expect("single tile");
        keyed.keys().position(|x| *x == k).expect("two chiralities cover every tile")
    };
    let children = chirality.iter().map(|&ch| r.children_of(&TilePose::base(ch)).iter().map(id_of).collect()).collect();
    UncollaredClasses { chirality, children }
}

/// Counts of each collared class among the certified tiles of a patch.
pub fn class_histogram(p: &LeveledPatch, e: &Enumeration) -> Result<Vec<u64>> {
    let ids = CoronaScanner::new(p).classify(e)?;
    let mut counts = vec![0u64; e.len()];
    for id in ids.into_iter().flatten() {
        counts[id] += 1;
    }
    Ok(counts)
}
