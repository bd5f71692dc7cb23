//! JSON-serializable records shared between the library and the CLI.
//!
//! Every file the CLI emits embeds a [`FieldHeader`] (p, exp, q, w and the
//! irreducible polynomial), so outputs are self-describing: field elements
//! are canonical coordinate pairs [c0, c1] against the recorded basis and
//! can be re-checked by an independent implementation.

use serde::{Deserialize, Serialize};

use crate::gfield::{FieldCtx, Fq2Elem, FqElem};
use crate::onan::{EPointRow, LabeledPoints, TripleOnanConfig, TripleOnanParams};
use crate::plane::{ProjLine, ProjPoint};
use crate::search::{CanonicalSearch, SearchReport};
use crate::unital::Unital;
use crate::{Error, Result};

/// Field element as its (c0, c1) coordinate pair over {1, e}; base-field
/// elements are encoded with c1 = 0.
pub type ElemPair = [u32; 2];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub p: u32,
    pub exp: u32,
    pub q: u32,
    pub w: u32,
    /// Coefficients (low to high) of the irreducible polynomial defining
    /// GF(q) over GF(p); empty for prime q.
    pub modulus: Vec<u32>,
}

impl FieldHeader {
    pub fn from_ctx(ctx: &FieldCtx) -> FieldHeader {
        FieldHeader {
            p: ctx.p(),
            exp: ctx.ext_degree(),
            q: ctx.q(),
            w: ctx.w().index(),
            modulus: ctx.modulus().to_vec(),
        }
    }

    /// Rebuild the context this header describes, failing when the recorded
    /// canonical data disagrees.
    pub fn to_ctx(&self) -> Result<FieldCtx> {
        let ctx = FieldCtx::new(self.p, self.exp)?;
        if ctx.q() != self.q || ctx.w().index() != self.w || ctx.modulus() != self.modulus {
            return Err(Error::InvalidParams(
                "field header disagrees with the canonical context".into(),
            ));
        }
        Ok(ctx)
    }
}

pub fn elem_pair(ctx: &FieldCtx, x: Fq2Elem) -> ElemPair {
    let (c0, c1) = ctx.parts(x);
    [c0.index(), c1.index()]
}

pub fn elem_from_pair(ctx: &FieldCtx, pair: ElemPair) -> Result<Fq2Elem> {
    Ok(ctx.fq2(ctx.fq_from_index(pair[0])?, ctx.fq_from_index(pair[1])?))
}

pub fn fq_pair(a: FqElem) -> ElemPair {
    [a.index(), 0]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: ElemPair,
    pub y: ElemPair,
    pub z: ElemPair,
}

impl PointRecord {
    pub fn new(ctx: &FieldCtx, p: &ProjPoint) -> PointRecord {
        PointRecord { x: elem_pair(ctx, p.x), y: elem_pair(ctx, p.y), z: elem_pair(ctx, p.z) }
    }

    pub fn to_point(&self, ctx: &FieldCtx) -> Result<ProjPoint> {
        ProjPoint::new(
            ctx,
            elem_from_pair(ctx, self.x)?,
            elem_from_pair(ctx, self.y)?,
            elem_from_pair(ctx, self.z)?,
        )
    }
}

pub type LineRecord = [ElemPair; 3];

fn line_record(ctx: &FieldCtx, l: &ProjLine) -> LineRecord {
    [elem_pair(ctx, l.c[0]), elem_pair(ctx, l.c[1]), elem_pair(ctx, l.c[2])]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigPoints {
    #[serde(rename = "P")]
    pub p: PointRecord,
    #[serde(rename = "Q")]
    pub q: PointRecord,
    #[serde(rename = "X")]
    pub x: PointRecord,
    #[serde(rename = "Y")]
    pub y: PointRecord,
    #[serde(rename = "V")]
    pub v: PointRecord,
    #[serde(rename = "M")]
    pub m: PointRecord,
    #[serde(rename = "N")]
    pub n: PointRecord,
}

/// A Triple O'Nan in the wire format: parameters, the seven labeled points,
/// the six lines, and the BM-special flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationRecord {
    pub q: u32,
    pub p: u32,
    pub exp: u32,
    pub a: ElemPair,
    pub b: ElemPair,
    pub points: ConfigPoints,
    pub lines: Vec<LineRecord>,
    pub bm_special: bool,
}

impl ConfigurationRecord {
    pub fn new(ctx: &FieldCtx, params: &TripleOnanParams, cfg: &TripleOnanConfig) -> Self {
        let pts = cfg.points();
        ConfigurationRecord {
            q: ctx.q(),
            p: ctx.p(),
            exp: ctx.ext_degree(),
            a: elem_pair(ctx, params.a),
            b: elem_pair(ctx, params.b),
            points: ConfigPoints {
                p: PointRecord::new(ctx, &pts.p),
                q: PointRecord::new(ctx, &pts.q),
                x: PointRecord::new(ctx, &pts.x),
                y: PointRecord::new(ctx, &pts.y),
                v: PointRecord::new(ctx, &pts.v),
                m: PointRecord::new(ctx, &pts.m),
                n: PointRecord::new(ctx, &pts.n),
            },
            lines: cfg.lines().iter().map(|l| line_record(ctx, l)).collect(),
            bm_special: cfg.bm_special(),
        }
    }

    pub fn to_labeled_points(&self, ctx: &FieldCtx) -> Result<LabeledPoints> {
        Ok(LabeledPoints {
            p: self.points.p.to_point(ctx)?,
            q: self.points.q.to_point(ctx)?,
            x: self.points.x.to_point(ctx)?,
            y: self.points.y.to_point(ctx)?,
            v: self.points.v.to_point(ctx)?,
            m: self.points.m.to_point(ctx)?,
            n: self.points.n.to_point(ctx)?,
        })
    }

    /// Full geometric re-verification of a parsed record.
    pub fn reverify(&self, ctx: &FieldCtx, unital: &Unital) -> Result<TripleOnanConfig> {
        TripleOnanConfig::from_points(ctx, unital, self.to_labeled_points(ctx)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub x_values: u64,
    pub ordered_point_pairs: u64,
    pub ordered_st_pairs: u64,
    pub tuples_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReportRecord {
    pub q: u32,
    pub a: ElemPair,
    pub a_character: String,
    pub b: ElemPair,
    pub b_description: String,
    pub tuple_count: u64,
    pub config_count: u64,
    pub total_count: u64,
    pub wall_secs: f64,
    pub bounds: BoundsRecord,
}

pub fn describe_b(ctx: &FieldCtx, b: Fq2Elem) -> String {
    let (b0, b1) = ctx.parts(b);
    if b.is_zero() {
        "0".into()
    } else if b0.is_zero() {
        format!("{}*e", b1.index())
    } else if b1.is_zero() {
        format!("{}", b0.index())
    } else {
        format!("{}+{}*e", b0.index(), b1.index())
    }
}

impl SearchReportRecord {
    pub fn new(ctx: &FieldCtx, report: &SearchReport) -> Self {
        SearchReportRecord {
            q: report.q,
            a: elem_pair(ctx, report.a),
            a_character: report.a_character.as_str().into(),
            b: elem_pair(ctx, report.b),
            b_description: describe_b(ctx, report.b),
            tuple_count: report.tuple_count,
            config_count: report.config_count,
            total_count: report.total_count,
            wall_secs: report.wall_secs,
            bounds: BoundsRecord {
                x_values: report.bounds.x_values,
                ordered_point_pairs: report.bounds.ordered_point_pairs,
                ordered_st_pairs: report.bounds.ordered_st_pairs,
                tuples_checked: report.bounds.tuples_checked,
            },
        }
    }
}

/// Envelope for `search`: the report plus every canonical configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchJson {
    pub field: FieldHeader,
    pub report: SearchReportRecord,
    pub configurations: Vec<ConfigurationRecord>,
}

impl SearchJson {
    pub fn new(ctx: &FieldCtx, found: &CanonicalSearch) -> Self {
        SearchJson {
            field: FieldHeader::from_ctx(ctx),
            report: SearchReportRecord::new(ctx, &found.report),
            configurations: found
                .configs
                .iter()
                .map(|f| ConfigurationRecord::new(ctx, &f.params, &f.config))
                .collect(),
        }
    }
}

/// Envelope for `unital`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalJson {
    pub field: FieldHeader,
    pub a: ElemPair,
    pub b: ElemPair,
    pub a_character: String,
    pub discriminant: u32,
    pub classical: bool,
    pub conic: bool,
    pub size: u64,
    pub tangents: u64,
    pub secants: u64,
    /// Automorphism spot-check: number of random group elements whose image
    /// of the point set equals the point set.
    pub automorphism_checks_passed: u32,
    pub automorphism_checks: u32,
    pub seed: u64,
}

/// Envelope for `construct` with a Triple O'Nan result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructJson {
    pub field: FieldHeader,
    pub method: String,
    pub verified: bool,
    pub configuration: ConfigurationRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalRecord {
    pub point: PointRecord,
    pub in_unital: bool,
}

/// Envelope for `construct --method fengli`: an O'Nan that does not extend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FengLiJson {
    pub field: FieldHeader,
    pub a: ElemPair,
    pub b: ElemPair,
    pub lambda1: u32,
    pub lambda2: u32,
    pub lines: Vec<LineRecord>,
    pub points: Vec<PointRecord>,
    pub diagonals: Vec<DiagonalRecord>,
    pub extends: bool,
    pub scan_distinct_configs: u64,
}

/// Envelope for `cyclotomic`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub field: FieldHeader,
    pub order: u32,
    /// counts[i][j] = (i,j)_order
    pub counts: Vec<Vec<u64>>,
    pub identities_hold: bool,
}

/// Envelope for `equiv`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivJson {
    pub field: FieldHeader,
    pub classes: u64,
    pub representatives: Vec<(ElemPair, ElemPair)>,
}

/// Envelope for `count` (the invariance check).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountJson {
    pub field: FieldHeader,
    pub a: ElemPair,
    pub a_character: String,
    pub b_values: Vec<ElemPair>,
    pub canonical_count: u64,
    pub total_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPointRowRecord {
    pub q: u32,
    pub a_character: String,
    pub e: PointRecord,
    pub h_degenerate: bool,
    pub e_in_unital: bool,
}

impl EPointRowRecord {
    pub fn new(ctx: &FieldCtx, row: &EPointRow) -> Self {
        EPointRowRecord {
            q: row.q,
            a_character: row.a_character.as_str().into(),
            e: PointRecord::new(ctx, &row.e),
            h_degenerate: row.h_degenerate,
            e_in_unital: row.e_in_unital,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::canonical_search;
    use crate::unital::canonical;

    #[test]
    fn configuration_record_roundtrip() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let u = Unital::build(&ctx, canonical::square_params(&ctx).unwrap());
        let found = canonical_search(&ctx, &u, 1).unwrap();
        let f = &found.configs[0];
        let record = ConfigurationRecord::new(&ctx, &f.params, &f.config);
        let json = serde_json::to_string(&record).unwrap();
        let parsed: ConfigurationRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, record);
        let cfg = parsed.reverify(&ctx, &u).unwrap();
        assert_eq!(cfg.id(&ctx), f.config.id(&ctx));
    }

    #[test]
    fn field_header_roundtrip() {
        for (p, exp) in [(7u32, 1u32), (3, 2)] {
            let ctx = FieldCtx::new(p, exp).unwrap();
            let header = FieldHeader::from_ctx(&ctx);
            let json = serde_json::to_string(&header).unwrap();
            let parsed: FieldHeader = serde_json::from_str(&json).unwrap();
            let ctx2 = parsed.to_ctx().unwrap();
            assert_eq!(ctx2.q(), ctx.q());
            assert_eq!(ctx2.w(), ctx.w());
        }
    }

    #[test]
    fn tampered_header_rejected() {
        let ctx = FieldCtx::new(7, 1).unwrap();
        let mut header = FieldHeader::from_ctx(&ctx);
        header.w += 1;
        assert!(header.to_ctx().is_err());
    }
}
