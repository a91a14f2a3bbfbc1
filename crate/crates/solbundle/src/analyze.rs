//! Full-pipeline aggregation: runs every construction for one bundle and
//! exposes a serializable dataset.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::CycloNum;
use crate::bundle::{BundleError, BundleInvariants, Monodromy};
use crate::characters::{
    chern_simons, solve_characters, twist_and_dims, CharError, CharKind, LabelSet, TwistData,
};
use crate::loops::{loop_operator, s_matrix_loops};
use crate::pointed::{build_quad_group, modular_data_equiv, EquivData, QuadGroup};

/// Default bound on N for full modular-data construction; the S-matrices
/// have Θ(N²) cyclotomic entries, so this is a resource guard, not a
/// mathematical restriction. Override with `--max-n`.
pub const DEFAULT_MAX_N: u64 = 512;

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(
        "N = {n} exceeds the configured bound {max}; raise --max-n to proceed \
         (the S-matrices have Θ(N²) exact entries)"
    )]
    TooLarge { n: u64, max: u64 },
}

impl From<BundleError> for AnalyzeError {
    fn from(e: BundleError) -> Self {
        AnalyzeError::Char(CharError::Bundle(e))
    }
}

/// Everything the pipeline computes for a single bundle.
pub struct BundleData {
    pub monodromy: Monodromy,
    pub epsilon: i8,
    pub invariants: BundleInvariants,
    pub labels: LabelSet,
    pub twists: TwistData,
    pub s_loops: Vec<Vec<CycloNum>>,
    pub group: QuadGroup,
    pub equiv: EquivData,
}

/// Either a full dataset or the structured degenerate outcome (N ≤ 1, an
/// empty label set; nothing to construct but not an input error).
pub enum AnalyzeOutcome {
    Data(Box<BundleData>),
    Degenerate { n: u64 },
}

pub fn compute(m: &Monodromy, epsilon: i8, max_n: u64) -> Result<AnalyzeOutcome, AnalyzeError> {
    let n = m.n();
    if n <= 1 {
        return Ok(AnalyzeOutcome::Degenerate { n });
    }
    if n > max_n {
        return Err(AnalyzeError::TooLarge { n, max: max_n });
    }
    let invariants = m.invariants().map_err(CharError::from)?;
    let labels = solve_characters(m)?;
    let twists = twist_and_dims(m, &labels)?;
    let s_loops = s_matrix_loops(m, &labels, epsilon);
    let group = build_quad_group(m)?;
    let equiv = modular_data_equiv(&group);
    Ok(AnalyzeOutcome::Data(Box::new(BundleData {
        monodromy: *m,
        epsilon,
        invariants,
        labels,
        twists,
        s_loops,
        group,
        equiv,
    })))
}

// --- serializable dataset ---

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MatrixEcho {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl From<&Monodromy> for MatrixEcho {
    fn from(m: &Monodromy) -> Self {
        MatrixEcho { a: m.a(), b: m.b(), c: m.c(), d: m.d() }
    }
}

/// One cyclotomic value, exact (order + coefficient vector) and as floats.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CycloJson {
    pub order: u32,
    pub coeffs: Vec<String>,
    pub re: f64,
    pub im: f64,
}

impl From<&CycloNum> for CycloJson {
    fn from(x: &CycloNum) -> Self {
        let (re, im) = x.to_complex();
        CycloJson {
            order: x.order(),
            coeffs: x.coeffs().iter().map(|c| c.to_string()).collect(),
            re,
            im,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MatrixJson {
    pub order: u32,
    pub entries: Vec<Vec<CycloJson>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VectorJson {
    pub order: u32,
    pub entries: Vec<CycloJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ObjectJson {
    pub index: usize,
    pub name: String,
    pub kind: String,
    pub element: [u64; 2],
    pub mu: String,
    pub nu: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<[u8; 2]>,
    pub qtilde: u64,
    pub cs: String,
    pub torsion: String,
    pub theta: CycloJson,
    pub dim: String,
    pub loop_m: String,
    pub loop_n: String,
    pub sym_degree: u8,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FusionEntryJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub n: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FusionJson {
    pub rank: usize,
    pub nonzero: Vec<FusionEntryJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct QTableEntryJson {
    pub element: [u64; 2],
    pub q: u64,
}

/// The `analyze` payload. Field order is the serialization order; output is
/// byte-stable across runs.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct AnalyzeOutput {
    pub schema_version: u32,
    pub command: String,
    pub matrix: MatrixEcho,
    pub epsilon: i8,
    pub degenerate: bool,
    pub trace: i64,
    pub n: u64,
    pub sign: i8,
    pub r: u64,
    pub group_shape: [u64; 2],
    pub parity: String,
    pub h1_z2_dim: u32,
    pub rank: usize,
    pub invertible_count: usize,
    pub twodim_count: usize,
    pub d_squared: String,
    pub theta_order: u32,
    pub fusion_edge_case: bool,
    pub warnings: Vec<String>,
    pub objects: Vec<ObjectJson>,
    pub qtilde_table: Vec<QTableEntryJson>,
    pub s_loops: MatrixJson,
    pub s_equiv: MatrixJson,
    pub t_loops: VectorJson,
    pub t_equiv: VectorJson,
    pub fusion: FusionJson,
}

fn kind_token(kind: CharKind) -> &'static str {
    match kind {
        CharKind::ReduciblePlus => "reducible+",
        CharKind::ReducibleMinus => "reducible-",
        CharKind::Irreducible => "irreducible",
    }
}

pub fn to_output(data: &BundleData) -> AnalyzeOutput {
    let m = &data.monodromy;
    let inv = &data.invariants;
    let order = u32::try_from(data.labels.n).expect("order fits u32");

    let objects: Vec<ObjectJson> = data
        .labels
        .classes
        .iter()
        .enumerate()
        .map(|(index, class)| {
            let op = loop_operator(m, class);
            ObjectJson {
                index,
                name: class.name(),
                kind: kind_token(class.kind).to_string(),
                element: [class.kl.0, class.kl.1],
                mu: class.munu.0.to_string(),
                nu: class.munu.1.to_string(),
                eps: class.eps.map(|(x, y)| [x, y]),
                qtilde: data.group.q(class.kl),
                cs: chern_simons(m, class).to_string(),
                torsion: data.twists.torsion[index].to_string(),
                theta: CycloJson::from(&data.twists.theta[index]),
                dim: data.twists.dims[index].to_string(),
                loop_m: op.m.to_string(),
                loop_n: op.n.to_string(),
                sym_degree: op.sym_degree,
            }
        })
        .collect();

    let matrix_json = |mat: &[Vec<CycloNum>]| MatrixJson {
        order,
        entries: mat
            .iter()
            .map(|row| row.iter().map(CycloJson::from).collect())
            .collect(),
    };

    AnalyzeOutput {
        schema_version: 1,
        command: "analyze".to_string(),
        matrix: MatrixEcho::from(m),
        epsilon: data.epsilon,
        degenerate: false,
        trace: i64::try_from(m.trace()).expect("trace fits i64"),
        n: inv.n,
        sign: inv.sign,
        r: inv.r,
        group_shape: [inv.group_shape.0, inv.group_shape.1],
        parity: inv.parity.to_string(),
        h1_z2_dim: inv.h1_z2_dim,
        rank: data.labels.rank(),
        invertible_count: data.labels.invertible_count(),
        twodim_count: data.labels.twodim_count(),
        d_squared: data.twists.d_squared.to_string(),
        theta_order: data.twists.theta_order,
        fusion_edge_case: data.equiv.fusion_edge_case,
        warnings: Vec::new(),
        objects,
        qtilde_table: data
            .group
            .elements()
            .iter()
            .map(|&g| QTableEntryJson { element: [g.0, g.1], q: data.group.q(g) })
            .collect(),
        s_loops: matrix_json(&data.s_loops),
        s_equiv: matrix_json(&data.equiv.s),
        t_loops: VectorJson {
            order: data.twists.theta_order,
            entries: data.twists.theta.iter().map(CycloJson::from).collect(),
        },
        t_equiv: VectorJson {
            order,
            entries: data.equiv.t.iter().map(CycloJson::from).collect(),
        },
        fusion: FusionJson {
            rank: data.equiv.fusion.rank(),
            nonzero: data
                .equiv
                .fusion
                .nonzero()
                .map(|(i, j, k, n)| FusionEntryJson { i, j, k, n })
                .collect(),
        },
    }
}

/// The structured `analyze` payload for a degenerate bundle (N ≤ 1): no
/// label set, empty matrices, an explanatory warning.
pub fn degenerate_output(m: &Monodromy, epsilon: i8, n: u64) -> AnalyzeOutput {
    AnalyzeOutput {
        schema_version: 1,
        command: "analyze".to_string(),
        matrix: MatrixEcho::from(m),
        epsilon,
        degenerate: true,
        trace: i64::try_from(m.trace()).expect("trace fits i64"),
        n,
        sign: m.sign(),
        r: 1,
        group_shape: [1, n.max(1)],
        parity: crate::bundle::Parity::of(m).to_string(),
        h1_z2_dim: crate::bundle::h1_z2_dimension(m),
        rank: 0,
        invertible_count: 0,
        twodim_count: 0,
        d_squared: "0".to_string(),
        theta_order: 0,
        fusion_edge_case: false,
        warnings: vec![format!(
            "DegenerateBundle: N = {n} gives a trivial solution group and an empty label set"
        )],
        objects: Vec::new(),
        qtilde_table: Vec::new(),
        s_loops: MatrixJson { order: 1, entries: Vec::new() },
        s_equiv: MatrixJson { order: 1, entries: Vec::new() },
        t_loops: VectorJson { order: 1, entries: Vec::new() },
        t_equiv: VectorJson { order: 1, entries: Vec::new() },
        fusion: FusionJson { rank: 0, nonzero: Vec::new() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_z5_summary() {
        let m = Monodromy::new(2, 1, 1, 1).unwrap();
        let AnalyzeOutcome::Data(data) = compute(&m, 1, DEFAULT_MAX_N).unwrap() else {
            panic!("not degenerate");
        };
        let out = to_output(&data);
        assert_eq!(out.rank, 4);
        assert_eq!(out.d_squared, "10");
        assert_eq!(out.objects[0].name, "X+(0,0)");
        assert_eq!(out.objects[0].cs, "0");
        assert_eq!(out.objects[2].qtilde, 1);
        assert_eq!(out.s_loops.entries.len(), 4);
    }

    #[test]
    fn degenerate_outcome() {
        let m = Monodromy::new(0, 1, -1, -3).unwrap();
        match compute(&m, 1, DEFAULT_MAX_N).unwrap() {
            AnalyzeOutcome::Degenerate { n } => assert_eq!(n, 1),
            AnalyzeOutcome::Data(_) => panic!("expected degenerate"),
        }
    }

    #[test]
    fn size_guard() {
        // trace 1000 → N = 1002 > 512
        let m = Monodromy::new(999, 2, 499, 1).unwrap();
        assert!(matches!(
            compute(&m, 1, DEFAULT_MAX_N),
            Err(AnalyzeError::TooLarge { n: 1002, max: 512 })
        ));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = Monodromy::new(5, 2, 2, 1).unwrap();
        let AnalyzeOutcome::Data(data) = compute(&m, 1, DEFAULT_MAX_N).unwrap() else {
            panic!("not degenerate");
        };
        let out = to_output(&data);
        let text = serde_json::to_string(&out).unwrap();
        let parsed: AnalyzeOutput = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, out);
        assert_eq!(serde_json::to_string(&parsed).unwrap(), text);
    }
}
