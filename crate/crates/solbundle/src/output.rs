//! Output formats: JSON (exact, round-trippable), CSV, LaTeX tabulars, and
//! a human-readable pretty printer. All emitters are byte-deterministic for
//! a fixed configuration; timestamps appear only in the opt-in metadata
//! header.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::analyze::{AnalyzeOutput, BundleData, MatrixEcho};
use crate::batch::{row_to_csv, BatchAggregate, BatchRow, CSV_HEADER};
use crate::bundle::Monodromy;
use crate::characters::{brute_force_solutions, chern_simons, lift, qtilde, qtilde_class, torsion, CharClass, CharKind};
use crate::loops::loop_operator;
use crate::verify::{CheckStatus, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Latex,
    Pretty,
}

/// Comment prefix for non-JSON formats.
fn comment_prefix(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Latex => "%",
        _ => "#",
    }
}

/// Optional metadata header (the only place a timestamp may appear).
pub fn metadata_header(format: OutputFormat) -> String {
    let unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let p = comment_prefix(format);
    format!(
        "{p} solbundle {}\n{p} generated-at-unix: {unix}\n",
        env!("CARGO_PKG_VERSION")
    )
}

pub fn error_json(code: &str, message: &str) -> String {
    serde_json::json!({
        "schema_version": 1,
        "error": { "code": code, "message": message }
    })
    .to_string()
}

// --- analyze ---

pub fn analyze_json(out: &AnalyzeOutput) -> String {
    serde_json::to_string(out).expect("analyze output serializes")
}

fn object_table_header() -> &'static str {
    "index,kind,k,l,mu,nu,eps_x,eps_y,qtilde,cs,torsion,theta,dim,loop_m,loop_n,sym_degree"
}

fn object_table_rows(data: &BundleData) -> Vec<String> {
    let m = &data.monodromy;
    data.labels
        .classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let op = loop_operator(m, class);
            let (ex, ey) = class
                .eps
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .unwrap_or_default();
            format!(
                "{i},{},{},{},{},{},{ex},{ey},{},{},{},{},{},{},{},{}",
                kind_token(class.kind),
                class.kl.0,
                class.kl.1,
                class.munu.0,
                class.munu.1,
                data.group.q(class.kl),
                chern_simons(m, class),
                data.twists.torsion[i],
                compact(&data.twists.theta[i].to_string()),
                data.twists.dims[i],
                op.m,
                op.n,
                op.sym_degree,
            )
        })
        .collect()
}

fn kind_token(kind: CharKind) -> &'static str {
    match kind {
        CharKind::ReduciblePlus => "reducible+",
        CharKind::ReducibleMinus => "reducible-",
        CharKind::Irreducible => "irreducible",
    }
}

fn compact(s: &str) -> String {
    s.replace(' ', "")
}

fn summary_lines(data: &BundleData, prefix: &str) -> String {
    let inv = &data.invariants;
    let m = &data.monodromy;
    format!(
        "{prefix} A = {m}, trace {}, N = {}, sign {}, r = {}, G = Z_{} x Z_{}, parity {}, H1(M;Z2) dim {}\n\
         {prefix} rank {} = {} invertible + {} two-dimensional, D^2 = {}, epsilon = {}\n",
        m.trace(),
        inv.n,
        inv.sign,
        inv.r,
        inv.group_shape.0,
        inv.group_shape.1,
        inv.parity,
        inv.h1_z2_dim,
        data.labels.rank(),
        data.labels.invertible_count(),
        data.labels.twodim_count(),
        data.twists.d_squared,
        data.epsilon,
    )
}

pub fn analyze_csv(data: &BundleData) -> String {
    let mut out = summary_lines(data, "#");
    out.push_str(object_table_header());
    out.push('\n');
    for row in object_table_rows(data) {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn table_csv(data: &BundleData) -> String {
    let mut out = String::from(object_table_header());
    out.push('\n');
    for row in object_table_rows(data) {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn matrix_pretty(name: &str, mat: &[Vec<crate::arith::CycloNum>], order: u32) -> String {
    let mut out = format!("{name} (order {order}):\n");
    for row in mat {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str("  [ ");
        out.push_str(&cells.join(" | "));
        out.push_str(" ]\n");
    }
    out
}

pub fn analyze_pretty(data: &BundleData) -> String {
    let mut out = summary_lines(data, "");
    let order = u32::try_from(data.labels.n).expect("order fits u32");
    out.push_str("\nobjects:\n");
    out.push_str(&format!("  {}\n", object_table_header().replace(',', "  ")));
    for row in object_table_rows(data) {
        out.push_str(&format!("  {}\n", row.replace(',', "  ")));
    }
    out.push('\n');
    out.push_str(&matrix_pretty("S^l (loop operators)", &data.s_loops, order));
    out.push('\n');
    out.push_str(&matrix_pretty("S^e (equivariantization)", &data.equiv.s, order));
    out.push('\n');
    out.push_str(&format!("T^l (order {}): ", data.twists.theta_order));
    let t: Vec<String> = data.twists.theta.iter().map(|x| x.to_string()).collect();
    out.push_str(&t.join(" | "));
    out.push('\n');
    out.push_str(&format!("T^e (order {order}): "));
    let t: Vec<String> = data.equiv.t.iter().map(|x| x.to_string()).collect();
    out.push_str(&t.join(" | "));
    out.push('\n');
    out.push_str("\nfusion rules:\n");
    for (i, oi) in data.equiv.objects.iter().enumerate() {
        for (j, oj) in data.equiv.objects.iter().enumerate() {
            if j < i {
                continue;
            }
            let parts: Vec<String> = data
                .equiv
                .fusion
                .outputs(i, j)
                .iter()
                .map(|&(k, c)| {
                    let name = data.equiv.objects[k].name();
                    if c == 1 {
                        name
                    } else {
                        format!("{c}·{name}")
                    }
                })
                .collect();
            out.push_str(&format!("  {} ⊗ {} = {}\n", oi.name(), oj.name(), parts.join(" ⊕ ")));
        }
    }
    out
}

/// LaTeX emitter: a header tabular mirroring the simple-object counting
/// table (parity row, invertible count, two-dimensional count), then the
/// per-object data.
pub fn analyze_latex(data: &BundleData) -> String {
    let inv = &data.invariants;
    let (r, s) = inv.group_shape;
    let par = |v: u64| if v % 2 == 1 { "o" } else { "e" };
    let mut out = format!(
        "% A = {}, N = {}, r = {}, parity {}\n",
        data.monodromy, inv.n, inv.r, inv.parity
    );
    out.push_str("\\begin{tabular}{|l|c|c|c|c|}\n\\hline\n");
    out.push_str("$(r, N/r)$ & $X^{\\pm}_{(a,b)}$ & count & $Y_{(a,b)}$ & count \\\\ \\hline\n");
    out.push_str(&format!(
        "$({},{})$ & over 2-torsion & {} & orbits $\\{{a,-a\\}}$ & {} \\\\ \\hline\n",
        par(r),
        par(s),
        data.labels.invertible_count(),
        data.labels.twodim_count()
    ));
    out.push_str("\\end{tabular}\n\n");

    out.push_str("\\begin{tabular}{|l|l|c|c|c|c|c|}\n\\hline\n");
    out.push_str(
        "object & $(k,l)$ & $\\tilde q$ & $\\mathrm{CS}$ & $\\mathrm{Tor}$ & $\\theta$ & $d$ \\\\ \\hline\n",
    );
    let m = &data.monodromy;
    for (i, class) in data.labels.classes.iter().enumerate() {
        let cs = chern_simons(m, class);
        let theta = if cs.is_zero() {
            "1".to_string()
        } else {
            format!("$e^{{-2\\pi i \\cdot {cs}}}$")
        };
        out.push_str(&format!(
            "${}$ & $({},{})$ & {} & ${cs}$ & ${}$ & {theta} & {} \\\\\n",
            latex_name(class),
            class.kl.0,
            class.kl.1,
            data.group.q(class.kl),
            data.twists.torsion[i],
            data.twists.dims[i],
        ));
    }
    out.push_str("\\hline\n\\end{tabular}\n");
    out
}

fn latex_name(class: &CharClass) -> String {
    match class.kind {
        CharKind::ReduciblePlus => format!("X^{{+}}({},{})", class.kl.0, class.kl.1),
        CharKind::ReducibleMinus => format!("X^{{-}}({},{})", class.kl.0, class.kl.1),
        CharKind::Irreducible => format!("Y({},{})", class.kl.0, class.kl.1),
    }
}

pub fn degenerate_text(out: &AnalyzeOutput, format: OutputFormat) -> String {
    let p = comment_prefix(format);
    format!(
        "{p} A = [[{},{}],[{},{}]], trace {}, N = {}: degenerate bundle\n{p} {}\n",
        out.matrix.a,
        out.matrix.b,
        out.matrix.c,
        out.matrix.d,
        out.trace,
        out.n,
        out.warnings.first().map(String::as_str).unwrap_or("empty label set"),
    )
}

// --- verify ---

pub fn verify_json(report: &VerificationReport) -> String {
    serde_json::to_string(report).expect("report serializes")
}

pub fn verify_pretty(report: &VerificationReport) -> String {
    let s = &report.summary;
    let mut out = format!(
        "verify A = [[{},{}],[{},{}]]  epsilon {}\n",
        report.matrix.a, report.matrix.b, report.matrix.c, report.matrix.d, report.epsilon
    );
    out.push_str(&format!(
        "N = {}, r = {}, G = Z_{} x Z_{}, parity {}, rank {} ({} + {}), D^2 = {}, H1(M;Z2) dim {}\n",
        s.n,
        s.r,
        s.group_shape[0],
        s.group_shape[1],
        s.parity,
        s.rank,
        s.invertible_count,
        s.twodim_count,
        s.d_squared,
        s.h1_z2_dim
    ));
    if s.degenerate {
        out.push_str("degenerate bundle: empty label set, nothing to verify\n");
        return out;
    }
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
        };
        let info = if check.informational { " (informational)" } else { "" };
        out.push_str(&format!("  {status}{info} {}\n", check.name));
        if let Some(w) = &check.witness {
            out.push_str(&format!(
                "        at {}\n        left  = {}\n        right = {}\n",
                w.location, w.left, w.right
            ));
        }
    }
    let failed = report.failed_checks().len();
    out.push_str(&format!(
        "result: {} ({} checks, {failed} asserted failures)\n",
        if report.passed { "PASS" } else { "FAIL" },
        report.checks.len()
    ));
    out
}

pub fn verify_csv(report: &VerificationReport) -> String {
    let mut out = String::from("check,status,informational,location\n");
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
        };
        let location = check
            .witness
            .as_ref()
            .map(|w| w.location.replace(',', ";"))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{status},{},{location}\n",
            check.name, check.informational
        ));
    }
    out
}

pub fn verify_latex(report: &VerificationReport) -> String {
    let mut out = format!(
        "% verification of A = [[{},{}],[{},{}]]\n",
        report.matrix.a, report.matrix.b, report.matrix.c, report.matrix.d
    );
    out.push_str("\\begin{tabular}{|l|c|}\n\\hline\ncheck & status \\\\ \\hline\n");
    for check in &report.checks {
        let status = match (check.status, check.informational) {
            (CheckStatus::Pass, false) => "pass",
            (CheckStatus::Pass, true) => "pass (informational)",
            (CheckStatus::Fail, false) => "\\textbf{fail}",
            (CheckStatus::Fail, true) => "fail (informational)",
        };
        out.push_str(&format!("{} & {status} \\\\\n", check.name.replace('_', "\\_")));
    }
    out.push_str("\\hline\n\\end{tabular}\n");
    out
}

// --- oracle ---

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub k: u64,
    pub l: u64,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<[u8; 2]>,
    pub mu: String,
    pub nu: String,
    pub qtilde_raw: u64,
    pub qtilde: u64,
    pub cs: String,
    pub torsion: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct OracleOutput {
    pub schema_version: u32,
    pub command: String,
    pub matrix: MatrixEcho,
    pub n: u64,
    pub degenerate: bool,
    pub warnings: Vec<String>,
    pub rows: Vec<OracleRow>,
}

/// Brute-force character table: every solution of the defining congruences
/// with its invariants, for diffing against `analyze`.
pub fn build_oracle(m: &Monodromy) -> OracleOutput {
    let n = m.n();
    let solutions = brute_force_solutions(m);
    let mut warnings = Vec::new();
    let degenerate = n <= 1;
    if degenerate {
        warnings.push(format!(
            "DegenerateBundle: N = {n} gives a trivial solution group and an empty label set"
        ));
    }
    let rows = solutions
        .into_iter()
        .map(|(k, l)| {
            let munu = lift(m, (k, l));
            let two_torsion = (2 * k) % n == 0 && (2 * l) % n == 0;
            let eps = two_torsion.then(|| [u8::from(k != 0), u8::from(l != 0)]);
            let kind = if two_torsion { CharKind::ReduciblePlus } else { CharKind::Irreducible };
            let class = CharClass {
                kl: (k, l),
                munu: munu.clone(),
                kind,
                eps: eps.map(|e| (e[0], e[1])),
            };
            OracleRow {
                k,
                l,
                kind: if two_torsion { "reducible" } else { "irreducible" }.to_string(),
                eps,
                mu: munu.0.to_string(),
                nu: munu.1.to_string(),
                qtilde_raw: qtilde(m, (&munu.0, &munu.1)),
                qtilde: qtilde_class(m, (&munu.0, &munu.1)),
                cs: chern_simons(m, &class).to_string(),
                torsion: torsion(m, &class).to_string(),
            }
        })
        .collect();
    OracleOutput {
        schema_version: 1,
        command: "oracle".to_string(),
        matrix: MatrixEcho::from(m),
        n,
        degenerate,
        warnings,
        rows,
    }
}

pub fn oracle_json(out: &OracleOutput) -> String {
    serde_json::to_string(out).expect("oracle output serializes")
}

pub fn oracle_csv(out: &OracleOutput) -> String {
    let mut text = String::new();
    for w in &out.warnings {
        text.push_str(&format!("# {w}\n"));
    }
    text.push_str("k,l,kind,eps_x,eps_y,mu,nu,qtilde_raw,qtilde,cs,torsion\n");
    for row in &out.rows {
        let (ex, ey) = row
            .eps
            .map(|[x, y]| (x.to_string(), y.to_string()))
            .unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{ex},{ey},{},{},{},{},{},{}\n",
            row.k,
            row.l,
            row.kind,
            row.mu,
            row.nu,
            row.qtilde_raw,
            row.qtilde,
            row.cs,
            row.torsion
        ));
    }
    text
}

pub fn oracle_pretty(out: &OracleOutput) -> String {
    let mut text = format!(
        "brute-force solutions of A = [[{},{}],[{},{}]]: {} of N = {}\n",
        out.matrix.a,
        out.matrix.b,
        out.matrix.c,
        out.matrix.d,
        out.rows.len(),
        out.n
    );
    for w in &out.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    text.push_str(&oracle_csv_body_pretty(out));
    text
}

fn oracle_csv_body_pretty(out: &OracleOutput) -> String {
    let csv = oracle_csv(out);
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("  {}\n", l.replace(',', "  ")))
        .collect()
}

pub fn oracle_latex(out: &OracleOutput) -> String {
    let mut text = format!(
        "% brute-force character table, A = [[{},{}],[{},{}]], N = {}\n",
        out.matrix.a, out.matrix.b, out.matrix.c, out.matrix.d, out.n
    );
    text.push_str("\\begin{tabular}{|c|c|l|c|c|c|c|}\n\\hline\n");
    text.push_str("$(k,l)$ & kind & $(\\mu,\\nu)$ & $\\hat q$ & $\\tilde q$ & CS & Tor \\\\ \\hline\n");
    for row in &out.rows {
        text.push_str(&format!(
            "$({},{})$ & {} & $({},{})$ & {} & {} & ${}$ & ${}$ \\\\\n",
            row.k, row.l, row.kind, row.mu, row.nu, row.qtilde_raw, row.qtilde, row.cs, row.torsion
        ));
    }
    text.push_str("\\hline\n\\end{tabular}\n");
    text
}

// --- batch ---

pub fn batch_csv(rows: &[BatchRow], agg: Option<&BatchAggregate>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row_to_csv(row));
        out.push('\n');
    }
    if let Some(agg) = agg {
        out.push_str(&format!(
            "# aggregate total={} pass={} fail={} degenerate={} error={}\n",
            agg.total, agg.pass, agg.fail, agg.degenerate, agg.error
        ));
    }
    out
}

pub fn batch_jsonl(rows: &[BatchRow], agg: Option<&BatchAggregate>) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("row serializes"));
        out.push('\n');
    }
    if let Some(agg) = agg {
        out.push_str(
            &serde_json::json!({ "aggregate": agg }).to_string(),
        );
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::{compute, AnalyzeOutcome, DEFAULT_MAX_N};

    fn data(a: i64, b: i64, c: i64, d: i64) -> Box<BundleData> {
        let m = Monodromy::new(a, b, c, d).unwrap();
        match compute(&m, 1, DEFAULT_MAX_N).unwrap() {
            AnalyzeOutcome::Data(d) => d,
            AnalyzeOutcome::Degenerate { .. } => panic!("degenerate"),
        }
    }

    #[test]
    fn csv_object_table_has_all_rows() {
        let d = data(2, 1, 1, 1);
        let csv = analyze_csv(&d);
        let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), 1 + 4, "header plus one row per object");
        assert!(rows[1].starts_with("0,reducible+,0,0"));
        // no stray commas from cyclotomic rendering
        let cols = object_table_header().split(',').count();
        for row in &rows[1..] {
            assert_eq!(row.split(',').count(), cols, "row: {row}");
        }
    }

    #[test]
    fn latex_contains_tabular() {
        let d = data(2, 1, 1, 1);
        let tex = analyze_latex(&d);
        assert!(tex.contains("\\begin{tabular}"));
        assert!(tex.contains("X^{+}(0,0)"));
    }

    #[test]
    fn oracle_z5_has_five_rows() {
        let m = Monodromy::new(2, 1, 1, 1).unwrap();
        let out = build_oracle(&m);
        assert_eq!(out.rows.len(), 5);
        assert!(!out.degenerate);
        // the (0,0) row is reducible with zero CS
        assert_eq!(out.rows[0].kind, "reducible");
        assert_eq!(out.rows[0].cs, "0");
    }

    #[test]
    fn oracle_degenerate_trace_minus_three() {
        let m = Monodromy::new(0, 1, -1, -3).unwrap();
        let out = build_oracle(&m);
        assert_eq!(out.rows.len(), 1);
        assert!(out.degenerate);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn oracle_agrees_with_analyze_on_shared_fields() {
        let m = Monodromy::new(2, 1, 1, 1).unwrap();
        let oracle = build_oracle(&m);
        let d = data(2, 1, 1, 1);
        for class in &d.labels.classes {
            let row = oracle
                .rows
                .iter()
                .find(|r| (r.k, r.l) == class.kl)
                .expect("every class representative appears in the oracle");
            assert_eq!(row.qtilde, d.group.q(class.kl));
            assert_eq!(row.cs, chern_simons(&m, class).to_string());
        }
    }

    #[test]
    fn metadata_header_is_commented() {
        assert!(metadata_header(OutputFormat::Csv).starts_with("# "));
        assert!(metadata_header(OutputFormat::Latex).starts_with("% "));
    }
}
