//! One function per subcommand; each returns the process exit code.

use std::fmt::Write as _;
use std::path::Path;

use burnside::burnside as ring;
use burnside::chains::{self, BrokenChain, ChainFilter, FusionPoset};
use burnside::fusion::FusionSystem;
use burnside::lattice::SubgroupLattice;
use burnside::{bisets, rat, Rat};
use serde_json::{json, Value};

use crate::artifact::{
    diff_values, labeled_table, labeled_vector, rat_value, read_artifact, to_json, write_output,
    Artifact, Difference, Meta,
};
use crate::input::{parse_subgroup, ResolvedSystem};
use crate::{Failure, Format};

/// Labels of the S-conjugacy classes, in lattice class order.
fn s_labels(l: &SubgroupLattice) -> Vec<String> {
    (0..l.class_count())
        .map(|c| l.group().subgroup_label(l.subgroup(l.class(c).rep)))
        .collect()
}

/// Labels of the fusion classes (their chosen representatives).
fn f_labels(fs: &FusionSystem) -> Vec<String> {
    (0..fs.class_count()).map(|f| fs.label_of_class(f)).collect()
}

fn emit(artifact: &Artifact, text: String, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    match format {
        Format::Data => write_output(&to_json(artifact), out),
        Format::Text => write_output(&text, out),
    }
}

/// Render a labeled square table as aligned text.
fn render_table(
    title: &str,
    rows: &[String],
    cols: &[String],
    mut cell: impl FnMut(usize, usize) -> String,
) -> String {
    let mut header = vec![String::new()];
    header.extend(cols.iter().cloned());
    let mut grid = vec![header];
    for (i, r) in rows.iter().enumerate() {
        let mut line = vec![r.clone()];
        for j in 0..cols.len() {
            line.push(cell(i, j));
        }
        grid.push(line);
    }
    let widths: Vec<usize> = (0..=cols.len())
        .map(|j| grid.iter().map(|line| line[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = format!("{title}\n");
    for line in &grid {
        let mut rendered = String::new();
        for (j, cellv) in line.iter().enumerate() {
            if j > 0 {
                rendered.push_str("  ");
            }
            let _ = write!(rendered, "{cellv:>width$}", width = widths[j]);
        }
        out.push_str(rendered.trim_end());
        out.push('\n');
    }
    out.push('\n');
    out
}

fn rat_text(r: Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------------------
// marks
// ---------------------------------------------------------------------------

pub fn marks(
    lattice: &SubgroupLattice,
    mut meta: Meta,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    meta.group = Some(lattice.group().name().to_string());
    let labels = s_labels(lattice);
    let weyl: Vec<Value> = (0..lattice.class_count())
        .map(|c| Value::from(lattice.class(c).weyl_order))
        .collect();
    let t = ring::tables(lattice);
    let data = json!({
        "classes": labels,
        "weyl": labeled_vector(&labels, weyl),
        "mark": labeled_table(&labels, &labels, |i, j| Value::from(*t.mark().get(i, j))),
        "mobius": labeled_table(&labels, &labels, |i, j| rat_value(*t.mob().get(i, j))),
        "zeta_tilde": labeled_table(&labels, &labels, |i, j| Value::from(*t.zeta_tilde().get(i, j))),
        "mu_tilde": labeled_table(&labels, &labels, |i, j| Value::from(*t.mu_tilde().get(i, j))),
    });
    let artifact = Artifact {
        kind: "marks".to_string(),
        meta,
        data,
    };
    let mut text = String::new();
    text += &render_table("mark", &labels, &labels, |i, j| t.mark().get(i, j).to_string());
    text += &render_table("mobius", &labels, &labels, |i, j| rat_text(*t.mob().get(i, j)));
    text += &render_table("zeta_tilde", &labels, &labels, |i, j| {
        t.zeta_tilde().get(i, j).to_string()
    });
    text += &render_table("mu_tilde", &labels, &labels, |i, j| {
        t.mu_tilde().get(i, j).to_string()
    });
    emit(&artifact, text, format, out)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// fmark
// ---------------------------------------------------------------------------

pub fn fmark(
    system: &ResolvedSystem,
    method: crate::Method,
    mut meta: Meta,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let fs = &system.fusion;
    meta.group = Some(fs.lattice().group().name().to_string());
    let labels = f_labels(fs);
    let k = fs.class_count();
    let table: Vec<Vec<i64>> = match method {
        crate::Method::Matrix => (0..k)
            .map(|q| (0..k).map(|p| *fs.matrices().fmark.get(q, p)).collect())
            .collect(),
        crate::Method::Chains => (0..k)
            .map(|q| (0..k).map(|p| chains::fmark_via_chains(&**fs, q, p)).collect())
            .collect(),
    };
    let weyl: Vec<Value> = (0..k).map(|f| Value::from(fs.weyl_of_class(f))).collect();
    let data = json!({
        "classes": labels,
        "weyl": labeled_vector(&labels, weyl),
        "fmark": labeled_table(&labels, &labels, |i, j| Value::from(table[i][j])),
    });
    let artifact = Artifact {
        kind: "fmark".to_string(),
        meta,
        data,
    };
    let text = render_table("fmark", &labels, &labels, |i, j| table[i][j].to_string());
    emit(&artifact, text, format, out)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// alpha
// ---------------------------------------------------------------------------

pub fn alpha(
    system: &ResolvedSystem,
    method: crate::Method,
    filter: ChainFilter,
    mut meta: Meta,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let fs = &system.fusion;
    let l = fs.lattice();
    meta.group = Some(l.group().name().to_string());
    let slabels = s_labels(l);
    let flabels = f_labels(fs);
    let mut entries = serde_json::Map::new();
    let mut text = String::new();
    let mut diagnostics = Vec::new();
    for (f, flabel) in flabels.iter().enumerate() {
        let coeffs: Vec<Rat> = match method {
            crate::Method::Matrix => ring::to_orbits(l, &fs.stable_mark_vector(f)).coeffs,
            crate::Method::Chains => (0..l.class_count())
                .map(|sc| chains::coefficient_via_chains(&**fs, l.class(sc).rep, f, filter))
                .collect(),
        };
        for (sc, &c) in coeffs.iter().enumerate() {
            if !c.is_integer() || c < Rat::from_integer(0) {
                diagnostics.push(format!(
                    "alpha[{flabel}] has coefficient {} at {}",
                    rat_text(c),
                    slabels[sc]
                ));
            }
        }
        let values: Vec<Value> = coeffs.iter().map(|&c| rat_value(c)).collect();
        entries.insert(flabel.clone(), labeled_vector(&slabels, values));
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != Rat::from_integer(0))
            .map(|(sc, &c)| {
                if c == Rat::from_integer(1) {
                    format!("[S/{}]", slabels[sc])
                } else {
                    format!("{}*[S/{}]", rat_text(c), slabels[sc])
                }
            })
            .collect();
        let _ = writeln!(text, "alpha[{flabel}] = {}", terms.join(" + "));
    }
    let data = json!({
        "s_classes": slabels,
        "entries": Value::Object(entries),
    });
    let artifact = Artifact {
        kind: "alpha".to_string(),
        meta,
        data,
    };
    emit(&artifact, text, format, out)?;
    if diagnostics.is_empty() {
        Ok(0)
    } else {
        for d in &diagnostics {
            eprintln!("diagnostic: {d}");
        }
        Ok(1)
    }
}

// ---------------------------------------------------------------------------
// chains
// ---------------------------------------------------------------------------

/// What to enumerate: broken chains from a subgroup to a fusion class.
pub struct ChainQuery<'a> {
    pub from: &'a str,
    pub to: Option<&'a str>,
    pub filter: ChainFilter,
    pub tethered: bool,
}

pub fn chain_listing(
    system: &ResolvedSystem,
    query: &ChainQuery<'_>,
    mut meta: Meta,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let ChainQuery {
        from: from_spec,
        to: to_spec,
        filter,
        tethered,
    } = *query;
    let fs = &system.fusion;
    let l = fs.lattice();
    let g = l.group();
    meta.group = Some(g.name().to_string());
    let from_sub = parse_subgroup(g, from_spec)?;
    let from = l.index_of(&from_sub).expect("closure is in the lattice");
    let target = match to_spec {
        Some(spec) => {
            let sub = parse_subgroup(g, spec)?;
            fs.f_class_of_subgroup(l.index_of(&sub).expect("closure is in the lattice"))
        }
        None => fs.class_count() - 1,
    };
    let node_label = |node: usize| g.subgroup_label(l.subgroup(node));
    let all = chains::broken_chains(&**fs, from, target, tethered);
    let kept: Vec<&BrokenChain> = all
        .iter()
        .filter(|c| chains::passes_filter(&**fs, c, filter))
        .collect();
    let signed_sum: i64 = kept.iter().map(|c| c.sign()).sum();
    let mut listing = Vec::new();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "broken chains {} -> class of {}{}",
        node_label(from),
        fs.label_of_class(target),
        if tethered { " (tethered)" } else { "" }
    );
    for chain in &kept {
        let segments: Vec<Vec<String>> = chain
            .segments
            .iter()
            .map(|seg| seg.iter().map(|&n| node_label(n)).collect())
            .collect();
        let links: Vec<Value> = chain
            .segments
            .windows(2)
            .map(|w| {
                json!({
                    "from": node_label(*w[0].last().expect("segments are nonempty")),
                    "to": node_label(w[1][0]),
                })
            })
            .collect();
        listing.push(json!({
            "length": chain.length(),
            "sign": chain.sign(),
            "segments": segments,
            "links": links,
        }));
        let rendered: Vec<String> = chain
            .segments
            .iter()
            .map(|seg| {
                let names: Vec<String> = seg.iter().map(|&n| node_label(n)).collect();
                format!("({})", names.join(" < "))
            })
            .collect();
        let _ = writeln!(
            text,
            "  len {} sign {:+}  {}",
            chain.length(),
            chain.sign(),
            rendered.join(" ~ ")
        );
    }
    let _ = writeln!(text, "count {}  signed sum {}", kept.len(), signed_sum);
    let mut data = serde_json::Map::new();
    data.insert("from".into(), Value::from(node_label(from)));
    data.insert("target".into(), Value::from(fs.label_of_class(target)));
    data.insert("count".into(), Value::from(kept.len()));
    data.insert("signed_sum".into(), Value::from(signed_sum));
    if tethered {
        let fused_mark = fs.weyl_of_class(target) as i64 * signed_sum;
        data.insert("fused_mark".into(), Value::from(fused_mark));
        let _ = writeln!(text, "fused mark {fused_mark}");
    } else {
        let coeff = rat(fs.weyl_of_class(target) as i64, l.class(l.class_of(from)).weyl_order as i64)
            * rat(signed_sum, 1);
        data.insert("coefficient".into(), rat_value(coeff));
        let _ = writeln!(text, "coefficient {}", rat_text(coeff));
    }
    data.insert("chains".into(), Value::Array(listing));
    let artifact = Artifact {
        kind: "chains".to_string(),
        meta,
        data: Value::Object(data),
    };
    emit(&artifact, text, format, out)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// biset
// ---------------------------------------------------------------------------

pub fn biset(
    system: &ResolvedSystem,
    mut meta: Meta,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let fs = &system.fusion;
    if fs.ambient().is_none() {
        return Err(Failure::usage(
            "the biset command requires ambient mode (--ambient FILE)",
        ));
    }
    meta.group = Some(fs.lattice().group().name().to_string());
    let biset = bisets::minimal_biset(fs)?;
    let poset = biset.poset();
    let product = poset.product();
    let s_group = fs.lattice().group();
    let mut support: Vec<(String, String, i64)> = biset
        .support()
        .into_iter()
        .map(|(cls, k)| {
            let rep = poset.class(cls).rep;
            let node = product.subgroup_label(poset.node_subgroup(rep));
            let domain = s_group.subgroup_label(fs.lattice().subgroup(poset.domain_of(rep)));
            (node, domain, k)
        })
        .collect();
    support.sort();
    let report = bisets::verify_characteristic(&biset);
    let op = bisets::op_subgroup(fs)?;
    let op_label = s_group.subgroup_label(fs.lattice().subgroup(op));
    let op_contained = bisets::check_op_containment(&biset, op);
    let support_json: Vec<Value> = support
        .iter()
        .map(|(node, domain, k)| {
            json!({ "node": node, "domain": domain, "coefficient": k })
        })
        .collect();
    let data = json!({
        "support": support_json,
        "points": biset.points(),
        "points_over_s": biset.points_over_s(),
        "characteristic": {
            "twisted_diagonal": report.twisted_diagonal,
            "stable": report.stable,
            "coprime": report.coprime,
        },
        "normal_core": op_label,
        "normal_core_contained": op_contained,
    });
    let mut text = String::new();
    let _ = writeln!(text, "minimal characteristic biset");
    for (node, domain, k) in &support {
        let _ = writeln!(text, "  {k} * [SxS/{node}]  (domain {domain})");
    }
    let _ = writeln!(text, "points {}  points/|S| {}", biset.points(), biset.points_over_s());
    let _ = writeln!(
        text,
        "twisted diagonal {}  stable {}  coprime {}",
        report.twisted_diagonal, report.stable, report.coprime
    );
    let _ = writeln!(text, "normal core {op_label}  contained {op_contained}");
    let artifact = Artifact {
        kind: "biset".to_string(),
        meta,
        data,
    };
    emit(&artifact, text, format, out)?;
    Ok(u8::from(!report.is_characteristic() || !op_contained))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn verify(
    system: &ResolvedSystem,
    mut meta: Meta,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let fs = &system.fusion;
    let l = fs.lattice();
    meta.group = Some(l.group().name().to_string());
    let mut checks: Vec<(&str, bool)> = Vec::new();

    match fs.alpha_all() {
        Ok(alphas) => {
            checks.push(("alpha-integral-nonnegative", true));
            checks.push(("alpha-stable", alphas.iter().all(|a| fs.is_stable(a))));
            let delta = alphas.iter().enumerate().all(|(j, a)| {
                (0..fs.class_count())
                    .all(|i| a.coeffs[l.class_of(fs.class(i).rep)] == i64::from(i == j))
            });
            checks.push(("alpha-delta-at-representatives", delta));
            let chains_match = (0..fs.class_count()).all(|f| {
                (0..l.class_count()).all(|sc| {
                    chains::coefficient_via_chains(&**fs, l.class(sc).rep, f, ChainFilter::All)
                        == rat(alphas[f].coeffs[sc], 1)
                })
            });
            checks.push(("alpha-chains-match-matrix", chains_match));
        }
        Err(_) => checks.push(("alpha-integral-nonnegative", false)),
    }

    let fmark_match = (0..fs.class_count()).all(|q| {
        (0..fs.class_count())
            .all(|p| chains::fmark_via_chains(&**fs, q, p) == *fs.matrices().fmark.get(q, p))
    });
    checks.push(("fmark-chains-match-matrix", fmark_match));

    let cancellation = (0..l.class_count()).all(|sc| {
        (0..fs.class_count())
            .all(|f| chains::verify_cancellation(&**fs, l.class(sc).rep, f).is_ok())
    });
    checks.push(("cancellation-certificate", cancellation));

    if fs.ambient().is_some() {
        match bisets::minimal_biset(fs) {
            Ok(biset) => {
                let poset = biset.poset();
                let top = fs.class_count() - 1;
                let top_coeff =
                    biset.coefficients()[poset.s_class_of(poset.rep_node(top))];
                checks.push(("biset-minimal", top_coeff == 1));
                let report = bisets::verify_characteristic(&biset);
                checks.push(("biset-characteristic", report.is_characteristic()));
                let contained = bisets::op_subgroup(fs)
                    .map(|op| bisets::check_op_containment(&biset, op))
                    .unwrap_or(false);
                checks.push(("biset-normal-core-contained", contained));
            }
            Err(_) => checks.push(("biset-minimal", false)),
        }
    }

    let all_pass = checks.iter().all(|&(_, ok)| ok);
    let mut map = serde_json::Map::new();
    let mut text = String::new();
    for (name, ok) in &checks {
        map.insert((*name).to_string(), Value::from(*ok));
        let _ = writeln!(text, "{name}: {}", if *ok { "ok" } else { "FAIL" });
    }
    let _ = writeln!(
        text,
        "{}",
        if all_pass {
            "all checks passed".to_string()
        } else {
            format!(
                "{} check(s) failed",
                checks.iter().filter(|&&(_, ok)| !ok).count()
            )
        }
    );
    let data = json!({ "checks": Value::Object(map), "all_pass": all_pass });
    let artifact = Artifact {
        kind: "verify".to_string(),
        meta,
        data,
    };
    emit(&artifact, text, format, out)?;
    Ok(u8::from(!all_pass))
}

// ---------------------------------------------------------------------------
// diff
// ---------------------------------------------------------------------------

pub fn diff(
    a_path: &Path,
    b_path: &Path,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let a = read_artifact(a_path)?;
    let b = read_artifact(b_path)?;
    if a.kind != b.kind {
        return Err(Failure::usage(format!(
            "artifact kinds differ: {} vs {}",
            a.kind, b.kind
        )));
    }
    let mut differences: Vec<Difference> = Vec::new();
    diff_values("", &a.data, &b.data, &mut differences);
    let equal = differences.is_empty();
    let diffs_json: Vec<Value> = differences
        .iter()
        .map(|d| json!({ "path": d.path, "left": d.left, "right": d.right }))
        .collect();
    let data = json!({
        "compared_kind": a.kind,
        "equal": equal,
        "differences": diffs_json,
    });
    let artifact = Artifact {
        kind: "diff".to_string(),
        meta: Meta::new(),
        data,
    };
    let mut text = String::new();
    if equal {
        let _ = writeln!(text, "artifacts agree (kind {})", a.kind);
    } else {
        for d in &differences {
            let _ = writeln!(
                text,
                "{}: {} != {}",
                d.path,
                crate::artifact::pretty(&d.left),
                crate::artifact::pretty(&d.right)
            );
        }
        let _ = writeln!(text, "{} difference(s)", differences.len());
    }
    emit(&artifact, text, format, out)?;
    Ok(u8::from(!equal))
}
