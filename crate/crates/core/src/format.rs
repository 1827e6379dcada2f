//! The TOML document format shared by fixtures, reports and catalogs.
//!
//! Matrices are `{ rows, cols, entries }` with entries in row-major order. Over `F_p`
//! entries are residue integers, over `Q` strings `"a"` or `"a/b"`; either spelling is
//! accepted on input. Documents written by this module are canonical:
//! `to_toml(parse(text)) == text` for any `text` it produced.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Projective};
use crate::bimodule::Bimodule;
use crate::error::{format_error, Error, Result};
use crate::exactlin::Matrix;
use crate::resolution::{
    CheckReport, CompatibilityReport, GpModule, PositionReport, RComplex, ResolutionWindow, Verdict, Witness,
};
use crate::scalar::{FieldSpec, Scalar};
use crate::search::{Catalog, CatalogEntry};
use crate::special_rings::{MoritaData, MoritaMaps, MoritaWindow, Side, SpecialReport, SpecialVerdict, SpecialWitness};
use crate::tensor_ring::{StarMorphism, TensorRing};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum RawScalar {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<RawScalar>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebra {
    pub dim: usize,
    pub unit: Vec<RawScalar>,
    /// `c[(i·d + j)·d + k]` is the coefficient of `e_k` in `e_i e_j`.
    pub constants: Vec<RawScalar>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawBimodule {
    pub dim: usize,
    pub left: Vec<RawMatrix>,
    pub right: Vec<RawMatrix>,
}

/// A projective: either `rank = n` for `R^n` or a list of idempotents `e` giving `⊕ R e`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawObject {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<Vec<RawScalar>>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawStar {
    pub components: Vec<RawMatrix>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawWindow {
    pub lo: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    pub objects: Vec<RawObject>,
    pub maps: Vec<RawStar>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawComplex {
    pub lo: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    pub objects: Vec<RawObject>,
    pub maps: Vec<RawMatrix>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawMoritaMaps {
    pub tau: RawMatrix,
    pub sigma: RawMatrix,
    pub beta: RawMatrix,
    /// May be omitted when `U = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<RawMatrix>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawMoritaWindow {
    pub lo: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    pub p_ranks: Vec<usize>,
    pub q_ranks: Vec<usize>,
    pub maps: Vec<RawMoritaMaps>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawMorita {
    pub a: RawAlgebra,
    pub b: RawAlgebra,
    /// `(A, B)`-bimodule.
    pub v: RawBimodule,
    /// `(B, A)`-bimodule; omitted for a triangular ring.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<RawBimodule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<RawMoritaWindow>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum RawField {
    Prime(u64),
    Name(String),
}

/// An input bundle. Every section is optional; commands load what they need.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Bundle {
    pub field: RawField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RawAlgebra>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<RawBimodule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<RawWindow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<RawComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morita: Option<RawMorita>,
}

fn to_toml_string<T: Serialize>(v: &T) -> Result<String> {
    toml::to_string(v).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn from_toml_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))
}

pub fn scalar_to_raw<S: Scalar>(s: &S) -> RawScalar {
    let text = s.to_string();
    if S::field().is_finite() {
        if let Ok(v) = text.parse() {
            return RawScalar::Int(v);
        }
    }
    RawScalar::Text(text)
}

pub fn scalar_from_raw<S: Scalar>(r: &RawScalar, path: &str) -> Result<S> {
    match r {
        RawScalar::Int(v) => Ok(S::from_i64(*v)),
        RawScalar::Text(t) => S::parse_scalar(t).map_err(|e| format_error(path, e)),
    }
}

fn scalars_from_raw<S: Scalar>(v: &[RawScalar], path: &str) -> Result<Vec<S>> {
    v.iter()
        .enumerate()
        .map(|(i, r)| scalar_from_raw(r, &format!("{path}[{i}]")))
        .collect()
}

fn scalars_to_raw<S: Scalar>(v: &[S]) -> Vec<RawScalar> {
    v.iter().map(scalar_to_raw).collect()
}

pub fn matrix_to_raw<S: Scalar>(m: &Matrix<S>) -> RawMatrix {
    RawMatrix {
        rows: m.rows(),
        cols: m.cols(),
        entries: scalars_to_raw(m.entries()),
    }
}

pub fn matrix_from_raw<S: Scalar>(r: &RawMatrix, path: &str) -> Result<Matrix<S>> {
    if r.entries.len() != r.rows * r.cols {
        return Err(format_error(
            path,
            format!("{}x{} matrix needs {} entries, found {}", r.rows, r.cols, r.rows * r.cols, r.entries.len()),
        ));
    }
    let data = scalars_from_raw(&r.entries, &format!("{path}.entries"))?;
    Matrix::from_vec(r.rows, r.cols, data)
}

fn matrices_from_raw<S: Scalar>(v: &[RawMatrix], path: &str) -> Result<Vec<Matrix<S>>> {
    v.iter()
        .enumerate()
        .map(|(i, m)| matrix_from_raw(m, &format!("{path}[{i}]")))
        .collect()
}

pub fn algebra_to_raw<S: Scalar>(a: &Algebra<S>) -> RawAlgebra {
    RawAlgebra {
        dim: a.dim(),
        unit: scalars_to_raw(a.unit()),
        constants: scalars_to_raw(a.constants()),
    }
}

/// Checks every axiom; the error names the first violated one.
pub fn algebra_from_raw<S: Scalar>(r: &RawAlgebra, path: &str) -> Result<Algebra<S>> {
    let unit = scalars_from_raw(&r.unit, &format!("{path}.unit"))?;
    let consts = scalars_from_raw(&r.constants, &format!("{path}.constants"))?;
    Algebra::new(r.dim, consts, unit).map_err(|e| format_error(path, e))
}

pub fn bimodule_to_raw<S: Scalar>(m: &Bimodule<S>) -> RawBimodule {
    RawBimodule {
        dim: m.dim(),
        left: m.left_action().iter().map(matrix_to_raw).collect(),
        right: m.right_action().iter().map(matrix_to_raw).collect(),
    }
}

pub fn bimodule_from_raw<S: Scalar>(
    r: &RawBimodule,
    left: &Arc<Algebra<S>>,
    right: &Arc<Algebra<S>>,
    path: &str,
) -> Result<Bimodule<S>> {
    let l = matrices_from_raw(&r.left, &format!("{path}.left"))?;
    let rt = matrices_from_raw(&r.right, &format!("{path}.right"))?;
    Bimodule::new(left.clone(), right.clone(), r.dim, l, rt).map_err(|e| format_error(path, e))
}

pub fn object_to_raw<S: Scalar>(p: &Projective<S>) -> RawObject {
    match p.free_rank() {
        Some(n) => RawObject {
            rank: Some(n),
            idempotents: None,
        },
        None => RawObject {
            rank: None,
            idempotents: Some(p.summands().iter().map(|e| scalars_to_raw(e)).collect()),
        },
    }
}

pub fn object_from_raw<S: Scalar>(r: &RawObject, a: &Arc<Algebra<S>>, path: &str) -> Result<Projective<S>> {
    match (&r.rank, &r.idempotents) {
        (Some(n), None) => Ok(Projective::free(a, *n)),
        (None, Some(es)) => {
            let es = es
                .iter()
                .enumerate()
                .map(|(i, e)| scalars_from_raw(e, &format!("{path}.idempotents[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Projective::from_idempotents(a, es).map_err(|e| format_error(path, e))
        }
        _ => Err(format_error(path, "give exactly one of `rank` or `idempotents`")),
    }
}

fn objects_from_raw<S: Scalar>(v: &[RawObject], a: &Arc<Algebra<S>>, path: &str) -> Result<Vec<Projective<S>>> {
    v.iter()
        .enumerate()
        .map(|(i, o)| object_from_raw(o, a, &format!("{path}[{i}]")))
        .collect()
}

pub fn star_to_raw<S: Scalar>(s: &StarMorphism<S>) -> RawStar {
    RawStar {
        components: s.components.iter().map(matrix_to_raw).collect(),
    }
}

pub fn window_to_raw<S: Scalar>(w: &ResolutionWindow<S>) -> RawWindow {
    RawWindow {
        lo: w.lo(),
        period: w.period(),
        objects: w.objects().iter().map(object_to_raw).collect(),
        maps: w.maps().iter().map(star_to_raw).collect(),
    }
}

pub fn window_from_raw<S: Scalar>(r: &RawWindow, ring: &Arc<TensorRing<S>>, path: &str) -> Result<ResolutionWindow<S>> {
    let objects = objects_from_raw(&r.objects, ring.base(), &format!("{path}.objects"))?;
    let n = objects.len();
    if n == 0 {
        return Err(format_error(path, "window has no objects"));
    }
    let maps = r
        .maps
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let p = format!("{path}.maps[{k}]");
            let comps = matrices_from_raw(&m.components, &format!("{p}.components"))?;
            let tgt = &objects[(k + 1) % n];
            let src = objects.get(k).ok_or_else(|| format_error(&p, "no source object"))?;
            ring.star(src.module().clone(), tgt.module().clone(), comps).map_err(|e| format_error(&p, e))
        })
        .collect::<Result<Vec<_>>>()?;
    ResolutionWindow::new(ring.clone(), r.lo, objects, maps, r.period).map_err(|e| format_error(path, e))
}

pub fn complex_to_raw<S: Scalar>(c: &RComplex<S>) -> RawComplex {
    RawComplex {
        lo: c.lo,
        period: c.period,
        objects: c.objects.iter().map(object_to_raw).collect(),
        maps: c.maps.iter().map(matrix_to_raw).collect(),
    }
}

pub fn complex_from_raw<S: Scalar>(r: &RawComplex, a: &Arc<Algebra<S>>, path: &str) -> Result<RComplex<S>> {
    let c = RComplex {
        lo: r.lo,
        objects: objects_from_raw(&r.objects, a, &format!("{path}.objects"))?,
        maps: matrices_from_raw(&r.maps, &format!("{path}.maps"))?,
        period: r.period,
    };
    c.as_base_window().map_err(|e| format_error(path, e))?;
    Ok(c)
}

pub fn morita_to_raw<S: Scalar>(d: &MoritaData<S>, w: Option<&MoritaWindow<S>>) -> RawMorita {
    RawMorita {
        a: algebra_to_raw(&d.a),
        b: algebra_to_raw(&d.b),
        v: bimodule_to_raw(&d.v),
        u: (d.u.dim() > 0).then(|| bimodule_to_raw(&d.u)),
        window: w.map(|w| RawMoritaWindow {
            lo: w.lo,
            period: w.period,
            p_ranks: w.p_ranks.clone(),
            q_ranks: w.q_ranks.clone(),
            maps: w
                .maps
                .iter()
                .map(|m| RawMoritaMaps {
                    tau: matrix_to_raw(&m.tau),
                    sigma: matrix_to_raw(&m.sigma),
                    beta: matrix_to_raw(&m.beta),
                    gamma: (d.u.dim() > 0).then(|| matrix_to_raw(&m.gamma)),
                })
                .collect(),
        }),
    }
}

pub fn morita_from_raw<S: Scalar>(r: &RawMorita, path: &str) -> Result<(MoritaData<S>, Option<MoritaWindow<S>>)> {
    let a = Arc::new(algebra_from_raw(&r.a, &format!("{path}.a"))?);
    let b = Arc::new(algebra_from_raw(&r.b, &format!("{path}.b"))?);
    let v = bimodule_from_raw(&r.v, &a, &b, &format!("{path}.v"))?;
    let d = match &r.u {
        Some(u) => {
            let u = bimodule_from_raw(u, &b, &a, &format!("{path}.u"))?;
            MoritaData::new(a, b, v, u)
        }
        None => MoritaData::triangular(a, b, v),
    }
    .map_err(|e| format_error(path, e))?;
    let Some(rw) = &r.window else {
        return Ok((d, None));
    };
    let wpath = format!("{path}.window");
    let maps = rw
        .maps
        .iter()
        .enumerate()
        .map(|(s, m)| {
            let p = format!("{wpath}.maps[{s}]");
            let gamma = match &m.gamma {
                Some(g) => matrix_from_raw(g, &format!("{p}.gamma"))?,
                None if d.u.dim() == 0 => {
                    let q = rw.q_ranks.get(s).copied().unwrap_or(0);
                    Matrix::zeros(0, q * d.b.dim())
                }
                None => return Err(format_error(&p, "`gamma` is required when U ≠ 0")),
            };
            Ok(MoritaMaps {
                tau: matrix_from_raw(&m.tau, &format!("{p}.tau"))?,
                sigma: matrix_from_raw(&m.sigma, &format!("{p}.sigma"))?,
                beta: matrix_from_raw(&m.beta, &format!("{p}.beta"))?,
                gamma,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let w = MoritaWindow {
        lo: rw.lo,
        p_ranks: rw.p_ranks.clone(),
        q_ranks: rw.q_ranks.clone(),
        maps,
        period: rw.period,
    };
    w.validate(&d).map_err(|e| format_error(&wpath, e))?;
    Ok((d, Some(w)))
}

impl Bundle {
    pub fn parse(text: &str) -> Result<Self> {
        from_toml_str(text)
    }

    pub fn to_toml(&self) -> Result<String> {
        to_toml_string(self)
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        let text = match &self.field {
            RawField::Prime(p) => p.to_string(),
            RawField::Name(s) => s.clone(),
        };
        text.parse().map_err(|e| format_error("field", e))
    }

    /// Fails unless the bundle's field is the one `S` lives in.
    pub fn expect_field<S: Scalar>(&self) -> Result<()> {
        let f = self.field_spec()?;
        if f != S::field() {
            return Err(format_error("field", format!("bundle is over {f}, loader is over {}", S::field())));
        }
        Ok(())
    }

    pub fn algebra<S: Scalar>(&self) -> Result<Arc<Algebra<S>>> {
        self.expect_field::<S>()?;
        let r = self.ring.as_ref().ok_or_else(|| format_error("ring", "section is missing"))?;
        Ok(Arc::new(algebra_from_raw(r, "ring")?))
    }

    /// `T_R(M)`; a missing `bimodule` means `M = 0` and a missing `nilpotency` means `N = 0`.
    pub fn tensor_ring<S: Scalar>(&self) -> Result<Arc<TensorRing<S>>> {
        let r = self.algebra::<S>()?;
        let m = match &self.bimodule {
            Some(m) => bimodule_from_raw(m, &r, &r, "bimodule")?,
            None => Bimodule::zero(r.clone(), r.clone()),
        };
        let n = self.nilpotency.unwrap_or(0);
        TensorRing::new(r, m, n)
            .map(Arc::new)
            .map_err(|e| format_error("nilpotency", e))
    }

    pub fn resolution_window<S: Scalar>(&self, ring: &Arc<TensorRing<S>>) -> Result<ResolutionWindow<S>> {
        let w = self.window.as_ref().ok_or_else(|| format_error("window", "section is missing"))?;
        window_from_raw(w, ring, "window")
    }

    pub fn r_complex<S: Scalar>(&self, r: &Arc<Algebra<S>>) -> Result<RComplex<S>> {
        let c = self.complex.as_ref().ok_or_else(|| format_error("complex", "section is missing"))?;
        complex_from_raw(c, r, "complex")
    }

    pub fn morita_data<S: Scalar>(&self) -> Result<(MoritaData<S>, Option<MoritaWindow<S>>)> {
        self.expect_field::<S>()?;
        let m = self.morita.as_ref().ok_or_else(|| format_error("morita", "section is missing"))?;
        morita_from_raw(m, "morita")
    }

    /// A bundle holding a ring and, optionally, a window over it.
    pub fn from_window<S: Scalar>(ring: &TensorRing<S>, w: Option<&ResolutionWindow<S>>) -> Self {
        let m = ring.bimodule();
        Bundle {
            field: field_to_raw(S::field()),
            nilpotency: Some(ring.nilpotency()),
            ring: Some(algebra_to_raw(ring.base())),
            bimodule: (m.dim() > 0).then(|| bimodule_to_raw(m)),
            window: w.map(window_to_raw),
            complex: None,
            morita: None,
        }
    }
}

pub fn field_to_raw(f: FieldSpec) -> RawField {
    match f {
        FieldSpec::Prime(p) => RawField::Prime(p),
        FieldSpec::Rational => RawField::Name("Q".into()),
    }
}

// ---------------------------------------------------------------- reports

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawWitness {
    /// `block`, `kernel`, `functional` or `residual`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<RawScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<RawMatrix>>,
}

impl RawWitness {
    fn empty(kind: &str) -> Self {
        RawWitness {
            kind: kind.into(),
            j: None,
            equation: None,
            side: None,
            residual: None,
            vector: None,
            parts: None,
        }
    }
}

pub fn witness_to_raw<S: Scalar>(w: &Witness<S>) -> RawWitness {
    match w {
        Witness::C1 { j, residual } => RawWitness {
            j: Some(*j),
            residual: Some(matrix_to_raw(residual)),
            ..RawWitness::empty("block")
        },
        Witness::C2 { vector } => RawWitness {
            vector: Some(scalars_to_raw(vector)),
            ..RawWitness::empty("kernel")
        },
        Witness::C3 { functional } => RawWitness {
            parts: Some(functional.iter().map(matrix_to_raw).collect()),
            ..RawWitness::empty("functional")
        },
    }
}

pub fn witness_from_raw<S: Scalar>(r: &RawWitness, path: &str) -> Result<Witness<S>> {
    let missing = |f: &str| format_error(path, format!("`{}` witness needs `{f}`", r.kind));
    match r.kind.as_str() {
        "block" => Ok(Witness::C1 {
            j: r.j.ok_or_else(|| missing("j"))?,
            residual: matrix_from_raw(r.residual.as_ref().ok_or_else(|| missing("residual"))?, path)?,
        }),
        "kernel" => Ok(Witness::C2 {
            vector: scalars_from_raw(r.vector.as_ref().ok_or_else(|| missing("vector"))?, path)?,
        }),
        "functional" => Ok(Witness::C3 {
            functional: matrices_from_raw(r.parts.as_ref().ok_or_else(|| missing("parts"))?, path)?,
        }),
        other => Err(format_error(path, format!("unknown witness kind `{other}`"))),
    }
}

pub fn special_witness_to_raw<S: Scalar>(w: &SpecialWitness<S>) -> RawWitness {
    match w {
        SpecialWitness::Residual { equation, residual } => RawWitness {
            equation: Some(*equation),
            residual: Some(matrix_to_raw(residual)),
            ..RawWitness::empty("residual")
        },
        SpecialWitness::Kernel { side, vector } => RawWitness {
            side: Some(match side {
                Side::A => "A".into(),
                Side::B => "B".into(),
            }),
            vector: Some(scalars_to_raw(vector)),
            ..RawWitness::empty("kernel")
        },
        SpecialWitness::Functional { parts } => RawWitness {
            parts: Some(parts.iter().map(matrix_to_raw).collect()),
            ..RawWitness::empty("functional")
        },
    }
}

pub fn special_witness_from_raw<S: Scalar>(r: &RawWitness, path: &str) -> Result<SpecialWitness<S>> {
    let missing = |f: &str| format_error(path, format!("`{}` witness needs `{f}`", r.kind));
    match r.kind.as_str() {
        "residual" => Ok(SpecialWitness::Residual {
            equation: r.equation.ok_or_else(|| missing("equation"))?,
            residual: matrix_from_raw(r.residual.as_ref().ok_or_else(|| missing("residual"))?, path)?,
        }),
        "kernel" => Ok(SpecialWitness::Kernel {
            side: match r.side.as_deref() {
                Some("A") => Side::A,
                Some("B") => Side::B,
                _ => return Err(missing("side = \"A\" | \"B\"")),
            },
            vector: scalars_from_raw(r.vector.as_ref().ok_or_else(|| missing("vector"))?, path)?,
        }),
        "functional" => Ok(SpecialWitness::Functional {
            parts: matrices_from_raw(r.parts.as_ref().ok_or_else(|| missing("parts"))?, path)?,
        }),
        other => Err(format_error(path, format!("unknown witness kind `{other}`"))),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawVerdict {
    pub condition: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<RawWitness>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawNote {
    pub label: String,
    pub passed: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawPosition {
    pub k: i64,
    pub verdicts: Vec<RawVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<RawNote>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawCheckReport {
    /// `periodic(p)` or `window-local`.
    pub scope: String,
    pub passed: bool,
    pub positions: Vec<RawPosition>,
}

fn position_to_raw<S: Scalar>(p: &PositionReport<S>, labels: [&str; 3]) -> RawPosition {
    let verdicts = [&p.c1, &p.c2, &p.c3]
        .into_iter()
        .zip(labels)
        .map(|(v, l)| RawVerdict {
            condition: l.into(),
            passed: v.passed(),
            witness: match v {
                Verdict::Pass => None,
                Verdict::Fail(w) => Some(witness_to_raw(w)),
            },
        })
        .collect();
    RawPosition {
        k: p.k,
        verdicts,
        notes: Vec::new(),
    }
}

pub fn check_report_to_raw<S: Scalar>(r: &CheckReport<S>) -> RawCheckReport {
    RawCheckReport {
        scope: r.scope.to_string(),
        passed: r.passed(),
        positions: r.positions.iter().map(|p| position_to_raw(p, r.labels)).collect(),
    }
}

pub fn special_report_to_raw<S: Scalar>(r: &SpecialReport<S>) -> RawCheckReport {
    RawCheckReport {
        scope: r.scope.to_string(),
        passed: r.passed(),
        positions: r
            .positions
            .iter()
            .map(|p| RawPosition {
                k: p.k,
                verdicts: p
                    .verdicts
                    .iter()
                    .zip(&r.labels)
                    .map(|(v, l)| RawVerdict {
                        condition: (*l).into(),
                        passed: v.passed(),
                        witness: match v {
                            SpecialVerdict::Pass => None,
                            SpecialVerdict::Fail(w) => Some(special_witness_to_raw(w)),
                        },
                    })
                    .collect(),
                notes: p
                    .notes
                    .iter()
                    .map(|(l, b)| RawNote {
                        label: (*l).into(),
                        passed: *b,
                    })
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawHomology {
    pub k: i64,
    /// Dimension of the homology of `Hom_T(window, T)` at `k`.
    pub dim: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawOracle {
    pub exact_positions: Vec<i64>,
    pub homology: Vec<RawHomology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawGp {
    pub k: i64,
    pub dim: usize,
    /// Action matrices of the basis of `R` on `G`.
    pub action: Vec<RawMatrix>,
    pub u: RawMatrix,
    pub inclusion: RawMatrix,
}

pub fn gp_to_raw<S: Scalar>(k: i64, g: &GpModule<S>) -> RawGp {
    RawGp {
        k,
        dim: g.module.dim(),
        action: g.module.x.action().iter().map(matrix_to_raw).collect(),
        u: matrix_to_raw(&g.module.u),
        inclusion: matrix_to_raw(&g.inclusion),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawCompatFailure {
    pub i: usize,
    pub k: i64,
    /// `tensor` or `hom`.
    pub kind: String,
    pub witness: RawMatrix,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawCompat {
    pub levels: Vec<usize>,
    pub base: RawCheckReport,
    pub failures: Vec<RawCompatFailure>,
}

pub fn compat_to_raw<S: Scalar>(r: &CompatibilityReport<S>) -> RawCompat {
    RawCompat {
        levels: r.levels.clone(),
        base: check_report_to_raw(&r.base),
        failures: r
            .failures
            .iter()
            .map(|f| RawCompatFailure {
                i: f.i,
                k: f.k,
                kind: f.kind.to_string(),
                witness: matrix_to_raw(&f.witness),
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawCatalogEntry {
    pub rank: usize,
    pub passes: bool,
    pub kernel_dim: usize,
    pub count: u64,
    pub representative: RawStar,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawCatalog {
    pub max_rank: usize,
    pub entries: Vec<RawCatalogEntry>,
}

pub fn catalog_to_raw<S: Scalar>(c: &Catalog<S>) -> RawCatalog {
    RawCatalog {
        max_rank: c.max_rank,
        entries: c
            .entries
            .iter()
            .map(|e| RawCatalogEntry {
                rank: e.rank,
                passes: e.passes,
                kernel_dim: e.kernel_dim,
                count: u64::try_from(e.count).unwrap_or(u64::MAX),
                representative: star_to_raw(&e.representative),
            })
            .collect(),
    }
}

/// Rebuilds a catalog against `ring`; representatives are endomorphisms of `Ind(R^rank)`.
pub fn catalog_from_raw<S: Scalar>(r: &RawCatalog, ring: &TensorRing<S>) -> Result<Catalog<S>> {
    let entries = r
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let path = format!("catalog.entries[{i}]");
            let p = Projective::free(ring.base(), e.rank).module().clone();
            let comps = matrices_from_raw(&e.representative.components, &format!("{path}.representative.components"))?;
            let representative = ring.star(p.clone(), p, comps).map_err(|err| format_error(&path, err))?;
            Ok(CatalogEntry {
                rank: e.rank,
                passes: e.passes,
                kernel_dim: e.kernel_dim,
                count: e.count as u128,
                representative,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Catalog {
        max_rank: r.max_rank,
        entries,
    })
}

/// A command's output document.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub command: String,
    pub field: RawField,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<RawCheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<RawOracle>,
    /// The generic verdicts next to specialized ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<RawCheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gp: Option<RawGp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compatibility: Option<RawCompat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<RawCatalog>,
    /// A window produced by the command (lifted or transported), with its ring.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Bundle>,
}

impl ReportDoc {
    pub fn new(command: &str, field: FieldSpec, passed: bool) -> Self {
        ReportDoc {
            command: command.into(),
            field: field_to_raw(field),
            passed,
            mode: None,
            message: None,
            check: None,
            oracle: None,
            generic: None,
            agrees: None,
            gp: None,
            compatibility: None,
            catalog: None,
            output: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        from_toml_str(text)
    }

    pub fn to_toml(&self) -> Result<String> {
        to_toml_string(self)
    }
}
