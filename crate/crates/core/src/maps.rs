//! Maps between space models and horizon-qualified certification of the map
//! classes: proper, bornologous, coarse, and bornotopy of pairs.
//!
//! Properness and bornologousness quantify over all bounded sets, so over an
//! infinite space they are only semi-decidable. Certificates therefore carry
//! the horizon they were checked at, and a Pass additionally requires
//! agreement between the horizon and its double; anything short of that is
//! reported Inconclusive rather than guessed.

use crate::dist::ExtDist;
use crate::model::ball;
use crate::point::Point;
use crate::space::Space;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Declarative description of a map between zoo spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapKind {
    Identity,
    /// Componentwise x -> a*x + b.
    Affine {
        #[serde(default = "one")]
        a: i64,
        #[serde(default)]
        b: i64,
    },
    /// Translation by an integer vector.
    Translate { v: Vec<i64> },
    /// Componentwise floor division by a positive integer.
    FloorDiv { q: i64 },
    /// Componentwise squaring.
    Square,
    Constant { point: Point },
    /// One-dimensional source embedded into coordinate `index` of Z^dim.
    Embed { dim: usize, index: usize },
    /// Projection of a coordinate space onto coordinate `index`.
    Project { index: usize },
    /// Composition, applied left to right.
    Compose { maps: Vec<MapKind> },
}

fn one() -> i64 {
    1
}

impl MapKind {
    fn apply(&self, p: &Point) -> Option<Point> {
        match self {
            MapKind::Identity => Some(p.clone()),
            MapKind::Affine { a, b } => {
                Some(Point::Coords(p.coords()?.iter().map(|x| a * x + b).collect()))
            }
            MapKind::Translate { v } => p.translate(v),
            MapKind::FloorDiv { q } => {
                if *q <= 0 {
                    return None;
                }
                Some(Point::Coords(p.coords()?.iter().map(|x| x.div_euclid(*q)).collect()))
            }
            MapKind::Square => Some(Point::Coords(p.coords()?.iter().map(|x| x * x).collect())),
            MapKind::Constant { point } => Some(point.clone()),
            MapKind::Embed { dim, index } => {
                let c = p.coords()?;
                if c.len() != 1 || *index >= *dim {
                    return None;
                }
                let mut v = vec![0; *dim];
                v[*index] = c[0];
                Some(Point::Coords(v))
            }
            MapKind::Project { index } => {
                let c = p.coords()?;
                Some(Point::int(*c.get(*index)?))
            }
            MapKind::Compose { maps } => {
                let mut cur = p.clone();
                for m in maps {
                    cur = m.apply(&cur)?;
                }
                Some(cur)
            }
        }
    }
}

/// Top-level map file: a [`MapKind`] description plus the schema stamp and an
/// optional display name.
#[derive(Clone, Debug)]
pub struct MapFile {
    pub schema: u32,
    pub kind: MapKind,
    pub name: Option<String>,
}

impl MapFile {
    // serde's flatten and deny_unknown_fields cannot be combined, so the
    // envelope fields are peeled off by hand.
    pub fn parse(text: &str) -> Result<MapFile> {
        let mut v: serde_json::Value = serde_json::from_str(text)?;
        let obj = v
            .as_object_mut()
            .ok_or_else(|| Error::input("map file must be a JSON object"))?;
        let schema = obj
            .remove("schema")
            .and_then(|s| s.as_u64())
            .ok_or_else(|| Error::input("map file is missing the schema field"))?
            as u32;
        if schema != crate::SCHEMA_VERSION {
            return Err(Error::input(format!("unsupported schema version {schema}")));
        }
        let name = match obj.remove("name") {
            Some(serde_json::Value::String(s)) => Some(s),
            Some(_) => return Err(Error::input("map name must be a string")),
            None => None,
        };
        let kind: MapKind = serde_json::from_value(v)?;
        Ok(MapFile { schema, kind, name })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.kind).expect("map kind serializes");
        let obj = v.as_object_mut().unwrap();
        obj.insert("schema".into(), self.schema.into());
        if let Some(n) = &self.name {
            obj.insert("name".into(), n.clone().into());
        }
        v
    }
}

/// A map between two pointed spaces with a total, deterministic evaluator.
#[derive(Clone)]
pub struct MapModel {
    pub source: Arc<Space>,
    pub target: Arc<Space>,
    kind: MapKind,
    name: String,
}

impl MapModel {
    pub fn new(source: Arc<Space>, target: Arc<Space>, kind: MapKind, name: impl Into<String>) -> MapModel {
        MapModel { source, target, kind, name: name.into() }
    }

    pub fn identity(space: Arc<Space>) -> MapModel {
        MapModel::new(Arc::clone(&space), space, MapKind::Identity, "id")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    /// Evaluates the map. The argument must lie in the source and the image
    /// in the target; anything else is an input error.
    pub fn eval(&self, p: &Point) -> Result<Point> {
        if !self.source.contains(p) {
            return Err(Error::input(format!("{p} is not in {}", self.source.name())));
        }
        let q = self
            .kind
            .apply(p)
            .ok_or_else(|| Error::input(format!("map {} undefined at {p}", self.name)))?;
        if !self.target.contains(&q) {
            return Err(Error::input(format!(
                "map {} sends {p} to {q}, outside {}",
                self.name,
                self.target.name()
            )));
        }
        Ok(q)
    }

    /// Whether f(xi_X) = xi_Y. Coarse sequences need this; the map classes of
    /// the entourage calculus do not, so it is reported separately.
    pub fn preserves_base(&self) -> Result<bool> {
        Ok(&self.eval(self.source.base())? == self.target.base())
    }

    /// Pointwise composition f o g (g applied first).
    pub fn compose(f: &MapModel, g: &MapModel) -> Result<MapModel> {
        if !same_presentation(&g.target, &f.source) {
            return Err(Error::input(format!(
                "cannot compose: {} lands in {}, but {} starts from {}",
                g.name,
                g.target.name(),
                f.name,
                f.source.name()
            )));
        }
        let kind = MapKind::Compose { maps: vec![g.kind.clone(), f.kind.clone()] };
        Ok(MapModel::new(
            Arc::clone(&g.source),
            Arc::clone(&f.target),
            kind,
            format!("{}∘{}", f.name, g.name),
        ))
    }
}

pub fn same_presentation(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || (a.name() == b.name() && a.base() == b.base())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Bornologous,
    Proper,
    Bornotopy,
    Coarse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CertVerdict {
    Pass,
    FailWitness { x: Point, y: Point },
    Inconclusive,
}

/// A horizon-qualified certification result.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub scale_in: ExtDist,
    pub scale_out: ExtDist,
    pub horizon: ExtDist,
    #[serde(flatten)]
    pub verdict: CertVerdict,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, CertVerdict::Pass)
    }
}

/// L = sup { d_Y(f x, f y) : x, y in ball(r), d_X(x, y) <= K }. Pass requires
/// L to be finite and stable when the ball doubles and carries it as
/// `scale_out`; a growing or infinite sup is a failure with the maximizing
/// pair as witness.
pub fn certify_bornologous(f: &MapModel, k: ExtDist, r: ExtDist) -> Result<Certificate> {
    if !k.is_finite() || !r.is_finite() {
        return Err(Error::input("bornologous certification needs finite K and r"));
    }
    // sup plus the pair achieving it; Err carries an infinite-distance pair.
    let sup_at = |h: ExtDist| -> Result<std::result::Result<(ExtDist, Point, Point), (Point, Point)>> {
        let m = ball(&f.source, h)?;
        let images: Vec<Point> =
            m.points().iter().map(|p| f.eval(p)).collect::<Result<Vec<_>>>()?;
        let mut sup = ExtDist::ZERO;
        let mut arg = (m.base().clone(), m.base().clone());
        for i in 0..m.len() {
            for j in (i + 1)..m.len() {
                if m.dist_idx(i, j) <= k {
                    let dy = f.target.dist(&images[i], &images[j])?;
                    if !dy.is_finite() {
                        return Ok(Err((m.point(i).clone(), m.point(j).clone())));
                    }
                    if dy > sup {
                        sup = dy;
                        arg = (m.point(i).clone(), m.point(j).clone());
                    }
                }
            }
        }
        Ok(Ok((sup, arg.0, arg.1)))
    };
    let near = sup_at(r)?;
    let far = sup_at(r.double())?;
    let (scale_out, verdict) = match (near, far) {
        (Err((x, y)), _) | (_, Err((x, y))) => {
            (ExtDist::Infinity, CertVerdict::FailWitness { x, y })
        }
        (Ok((a, _, _)), Ok((b, x, y))) => {
            if b <= a {
                (a, CertVerdict::Pass)
            } else {
                // The sup keeps growing with the horizon: no single L works.
                (b, CertVerdict::FailWitness { x, y })
            }
        }
    };
    Ok(Certificate { kind: CertKind::Bornologous, scale_in: k, scale_out, horizon: r, verdict })
}

/// Diameter of f^-1(target-ball(rho)) within the source ball of the horizon.
/// Pass requires the preimage to stop growing when the horizon doubles.
pub fn certify_proper(f: &MapModel, rho: ExtDist, horizon: ExtDist) -> Result<Certificate> {
    if !rho.is_finite() || !horizon.is_finite() {
        return Err(Error::input("proper certification needs finite rho and horizon"));
    }
    let preimage_at = |h: ExtDist| -> Result<Vec<Point>> {
        let src = ball(&f.source, h)?;
        let mut pre = Vec::new();
        for p in src.points() {
            let q = f.eval(p)?;
            if f.target.dist(f.target.base(), &q)? <= rho {
                pre.push(p.clone());
            }
        }
        Ok(pre)
    };
    let small = preimage_at(horizon)?;
    let large = preimage_at(horizon.double())?;
    let diameter = |pts: &[Point]| -> Result<ExtDist> {
        let mut d = ExtDist::ZERO;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                d = d.max(f.source.dist(&pts[i], &pts[j])?);
            }
        }
        Ok(d)
    };
    let stable = small.len() == large.len();
    let diam = diameter(&large)?;
    Ok(Certificate {
        kind: CertKind::Proper,
        scale_in: rho,
        scale_out: diam,
        horizon,
        verdict: if stable { CertVerdict::Pass } else { CertVerdict::Inconclusive },
    })
}

/// sup { d_Y(f x, g x) : x in ball(r) }. Pass requires a finite sup that stays
/// put when the ball doubles; an infinite displacement is a failure witness.
pub fn certify_bornotopic(f: &MapModel, g: &MapModel, r: ExtDist) -> Result<Certificate> {
    if !same_presentation(&f.source, &g.source) || !same_presentation(&f.target, &g.target) {
        return Err(Error::input("bornotopy needs a shared source and target"));
    }
    if !r.is_finite() {
        return Err(Error::input("bornotopy certification needs a finite radius"));
    }
    let sup_at = |h: ExtDist| -> Result<std::result::Result<ExtDist, Point>> {
        let m = ball(&f.source, h)?;
        let mut sup = ExtDist::ZERO;
        for p in m.points() {
            let d = f.target.dist(&f.eval(p)?, &g.eval(p)?)?;
            if !d.is_finite() {
                return Ok(Err(p.clone()));
            }
            sup = sup.max(d);
        }
        Ok(Ok(sup))
    };
    let (s1, s2) = (sup_at(r)?, sup_at(r.double())?);
    match (s1, s2) {
        (Err(x), _) | (_, Err(x)) => Ok(Certificate {
            kind: CertKind::Bornotopy,
            scale_in: r,
            scale_out: ExtDist::Infinity,
            horizon: r,
            verdict: CertVerdict::FailWitness { y: x.clone(), x },
        }),
        (Ok(a), Ok(b)) => Ok(Certificate {
            kind: CertKind::Bornotopy,
            scale_in: r,
            scale_out: b,
            horizon: r,
            verdict: if b <= a { CertVerdict::Pass } else { CertVerdict::Inconclusive },
        }),
    }
}

/// Bornologous and proper together, at shared scales.
pub fn certify_coarse(f: &MapModel, k: ExtDist, r: ExtDist) -> Result<Certificate> {
    let b = certify_bornologous(f, k, r)?;
    let p = certify_proper(f, r, r)?;
    let verdict = match (&b.verdict, &p.verdict) {
        (CertVerdict::Pass, CertVerdict::Pass) => CertVerdict::Pass,
        (CertVerdict::FailWitness { x, y }, _) => {
            CertVerdict::FailWitness { x: x.clone(), y: y.clone() }
        }
        _ => CertVerdict::Inconclusive,
    };
    Ok(Certificate {
        kind: CertKind::Coarse,
        scale_in: k,
        scale_out: b.scale_out,
        horizon: r,
        verdict,
    })
}

/// Checks that the preimage of the target ball is exactly a stated point set;
/// test helper for properness examples.
pub fn preimage_of_ball(f: &MapModel, rho: ExtDist, horizon: ExtDist) -> Result<Vec<Point>> {
    let src = ball(&f.source, horizon)?;
    let mut out = Vec::new();
    for p in src.points() {
        if f.target.dist(f.target.base(), &f.eval(p)?)? <= rho {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Re-checks a failure witness directly against the distance oracles.
pub fn witness_reproduces(f: &MapModel, k: ExtDist, x: &Point, y: &Point) -> Result<bool> {
    let dx = f.source.dist(x, y)?;
    let dy = f.target.dist(&f.eval(x)?, &f.eval(y)?)?;
    Ok(dx <= k && !dy.is_finite())
}
