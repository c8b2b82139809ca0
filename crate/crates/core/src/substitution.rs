//! The inflation rule and the level-n patch generator.
//!
//! Patches live at the inflated scale: `patch(n)` tiles `Φⁿ(T)` by unit
//! tiles, where `Φ(z) = λz + μ`. Tile `5i + k` of `patch(n+1)` is child `k`
//! of tile `i` of `patch(n)`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geom::{
    point_in_triangle, reference_vertices, signed_area2, Chirality, ExactPoint, Isometry, Patch, TilePose, UnitRotation,
};
use crate::par;
use crate::rational::{int, ExactRational as Q};

pub const DEFAULT_MAX_LEVEL: u32 = 9;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubstitutionRule {
    pub name: String,
    /// The multiplier `λ` of the similarity.
    pub expansion: ExactPoint,
    /// The constant `μ` of the similarity.
    pub offset: ExactPoint,
    /// Split of `Φ(T+)`, as poses of unit tiles.
    pub children: Vec<TilePose>,
}

pub fn pinwheel_rule() -> SubstitutionRule {
    use Chirality::{Minus, Plus};
    let pose = |ch, rot, x, y| TilePose::new(ch, rot, ExactPoint::int(x, y));
    SubstitutionRule {
        name: "pinwheel".to_string(),
        expansion: ExactPoint::int(2, -1),
        offset: ExactPoint::int(-2, 1),
        children: vec![
            pose(Plus, UnitRotation::identity(), 0, 0),
            pose(Minus, UnitRotation::identity(), -2, 1),
            pose(Plus, UnitRotation::half(), 2, 1),
            pose(Minus, UnitRotation::identity(), 0, 0),
            pose(Minus, UnitRotation::quarter(), 2, -1),
        ],
    }
}

impl SubstitutionRule {
    pub fn inflate_point(&self, z: &ExactPoint) -> ExactPoint {
        &(&self.expansion * z) + &self.offset
    }

    /// `(λⁿ, μₙ)` with `Φⁿ(z) = λⁿ z + μₙ`.
    pub fn power(&self, n: u32) -> (ExactPoint, ExactPoint) {
        let mut lam = ExactPoint::one();
        let mut mu = ExactPoint::zero();
        for _ in 0..n {
            lam = &lam * &self.expansion;
            mu = self.inflate_point(&mu);
        }
        (lam, mu)
    }

    pub fn inflate_point_n(&self, z: &ExactPoint, n: u32) -> ExactPoint {
        let (lam, mu) = self.power(n);
        &(&lam * z) + &mu
    }

    /// Area inflation factor `|λ|²`.
    pub fn area_factor(&self) -> Q {
        self.expansion.norm2()
    }

    /// Vertices of `Φⁿ` applied to the reference triangle.
    pub fn supertile_vertices(&self, ch: Chirality, n: u32) -> [ExactPoint; 3] {
        reference_vertices(ch).map(|v| self.inflate_point_n(&v, n))
    }

    /// `Φ ∘ g ∘ Φ⁻¹`, the isometry placing the supertile of the tile with
    /// isometry `g`.
    pub fn conjugate_by_phi(&self, g: &Isometry) -> Isometry {
        let lam = &self.expansion;
        let mu = &self.offset;
        let base = &(lam * &g.trans) + mu;
        if g.reflect {
            let omega = UnitRotation::from_point_ratio(lam, &lam.conj()).expect("expansion has rational modulus");
            let rot = omega.mul(&g.rot);
            let trans = &base - &rot.rotate(&mu.conj());
            Isometry { reflect: true, rot, trans }
        } else {
            let trans = &base - &g.rot.rotate(mu);
            Isometry::direct(g.rot.clone(), trans)
        }
    }

    /// The unit tiles splitting the supertile of `t`.
    pub fn children_of(&self, t: &TilePose) -> Vec<TilePose> {
        let h = self.conjugate_by_phi(&t.isometry());
        self.children.iter().map(|c| c.transform(&h)).collect()
    }

    pub fn expand_patch(&self, p: &Patch) -> Patch {
        Patch::new(par::flat_map(&p.tiles, |t| self.children_of(t)))
    }

    /// Stable digest of the rule data, used for cache keys and reports.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(&RuleFile::from(self)).expect("rule serializes");
        hex::encode(Sha256::digest(json))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&RuleFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: RuleFile = serde_json::from_str(s)?;
        f.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct Complex {
    re: Q,
    im: Q,
}

#[derive(Serialize, Deserialize)]
struct RuleFile {
    name: String,
    expansion: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<ExactPoint>,
    children: Vec<TilePose>,
}

impl From<&SubstitutionRule> for RuleFile {
    fn from(r: &SubstitutionRule) -> Self {
        RuleFile {
            name: r.name.clone(),
            expansion: Complex { re: r.expansion.x.clone(), im: r.expansion.y.clone() },
            offset: Some(r.offset.clone()),
            children: r.children.clone(),
        }
    }
}

impl TryFrom<RuleFile> for SubstitutionRule {
    type Error = Error;

    fn try_from(f: RuleFile) -> Result<Self> {
        let expansion = ExactPoint::new(f.expansion.re, f.expansion.im);
        let offset = match f.offset {
            Some(o) => o,
            None => derive_offset(&expansion, &f.children)
                .ok_or_else(|| Error::InvalidRule("cannot locate the supertile".into()))?,
        };
        Ok(SubstitutionRule { name: f.name, expansion, offset, children: f.children })
    }
}

/// Recovers `μ` from a child table: the unique translation for which
/// `λ·V+ + μ` has all three corners among the child vertices and contains
/// every child vertex.
fn derive_offset(lam: &ExactPoint, children: &[TilePose]) -> Option<ExactPoint> {
    let verts: Vec<ExactPoint> = children.iter().flat_map(|c| c.vertices()).collect();
    let refv = reference_vertices(Chirality::Plus);
    for w in &verts {
        let mu = w - &(lam * &refv[0]);
        let tri = refv.clone().map(|v| &(lam * &v) + &mu);
        if tri.iter().all(|c| verts.contains(c)) && verts.iter().all(|v| point_in_triangle(v, &tri)) {
            return Some(mu);
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleReport {
    pub checks: Vec<Check>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

/// Checks the rule invariants exactly; never errors, failures go in the report.
pub fn validate_rule(r: &SubstitutionRule) -> RuleReport {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| checks.push(Check { name, passed, detail });

    let factor = r.area_factor();
    let n = Q::from(r.children.len() as i64);
    push("area-factor", factor == n, format!("|λ|² = {factor}, children = {n}"));

    let region = r.supertile_vertices(Chirality::Plus, 1);
    let region_ok = signed_area2(&region[0], &region[1], &region[2]) == &factor * &Q::from(2);
    push("supertile-shape", region_ok, format!("Φ(T) = {region:?}"));

    let congruent = r.children.iter().all(|c| {
        let v = c.vertices();
        let d = |a: &ExactPoint, b: &ExactPoint| (a - b).norm2();
        d(&v[0], &v[2]) == Q::from(5) && d(&v[0], &v[1]) == Q::from(4) && d(&v[1], &v[2]) == Q::one()
    });
    push("congruence", congruent, "side lengths² (5,4,1)".into());

    let inside = r.children.iter().all(|c| c.vertices().iter().all(|v| point_in_triangle(v, &region)));
    push("containment", inside, "children inside Φ(T)".into());

    let disjoint = Patch::new(r.children.clone()).interiors_disjoint();
    push("disjoint", disjoint, "pairwise interiors".into());

    let area: Q = r
        .children
        .iter()
        .map(|c| {
            let v = c.vertices();
            signed_area2(&v[0], &v[1], &v[2]).abs()
        })
        .sum();
    let target = &factor * &Q::from(2);
    push("area-sum", area == target, format!("2·Σ area = {area}, expected {target}"));

    RuleReport { checks }
}

/// A patch tiling the level-n supertile of a base tile.
#[derive(Clone, Debug)]
pub struct LeveledPatch {
    pub level: u32,
    pub root: Chirality,
    pub tiles: Patch,
    pub region: [ExactPoint; 3],
}

impl LeveledPatch {
    pub fn base(r: &SubstitutionRule, root: Chirality) -> Self {
        LeveledPatch {
            level: 0,
            root,
            tiles: Patch::new(vec![TilePose::base(root)]),
            region: r.supertile_vertices(root, 0),
        }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn to_file(&self) -> PatchFile {
        PatchFile { level: self.level, tiles: self.tiles.tiles.clone() }
    }
}

/// JSON form of a patch.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatchFile {
    pub level: u32,
    pub tiles: Vec<TilePose>,
}

pub fn expand(p: &LeveledPatch, r: &SubstitutionRule) -> LeveledPatch {
    LeveledPatch {
        level: p.level + 1,
        root: p.root,
        tiles: r.expand_patch(&p.tiles),
        region: r.supertile_vertices(p.root, p.level + 1),
    }
}

/// Rough resident size of `patch(n)` in bytes.
pub fn estimate_bytes(level: u32) -> u64 {
    5u64.pow(level) * (400 + 40 * level as u64)
}

pub fn patch(n: u32, r: &SubstitutionRule, max_level: u32) -> Result<LeveledPatch> {
    patch_from(n, r, max_level, Chirality::Plus)
}

pub fn patch_from(n: u32, r: &SubstitutionRule, max_level: u32, root: Chirality) -> Result<LeveledPatch> {
    if n > max_level {
        return Err(Error::LevelCap { level: n, max: max_level });
    }
    log::info!("patch({n}): {} tiles, about {} MiB", 5u64.pow(n), estimate_bytes(n) >> 20);
    let mut p = LeveledPatch::base(r, root);
    for _ in 0..n {
        p = expand(&p, r);
    }
    Ok(p)
}

/// All levels `0..=n` in order.
pub fn patches_upto(n: u32, r: &SubstitutionRule, max_level: u32) -> Result<Vec<LeveledPatch>> {
    if n > max_level {
        return Err(Error::LevelCap { level: n, max: max_level });
    }
    let mut out = vec![LeveledPatch::base(r, Chirality::Plus)];
    for _ in 0..n {
        let next = expand(out.last().expect("nonempty"), r);
        out.push(next);
    }
    Ok(out)
}

/// Whether every coordinate denominator of the patch divides `m`.
pub fn denominators_divide(p: &Patch, m: u64) -> bool {
    let m = int::pow(m as i64, 1);
    p.tiles.iter().all(|t| {
        [t.rot.c(), t.rot.s(), &t.trans.x, &t.trans.y].iter().all(|q| (&m % &q.denom()) == dashu_int::IBig::ZERO)
    })
}

pub fn chirality_counts(p: &Patch) -> (usize, usize) {
    let plus = p.tiles.iter().filter(|t| t.chirality == Chirality::Plus).count();
    (plus, p.len() - plus)
}
