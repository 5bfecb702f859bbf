use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use serde_json::{json, Value};
use ulrich_core::lattice::{chi as line_bundle_chi, is_ample, is_globally_generated};
use ulrich_core::oracle::{self, brute_force_parallel, LinearConstraint, RationalMatrix};
use ulrich_core::ulrich::{
    classify_trichotomy_parallel, enumerate_candidates_parallel, finiteness_certificate, verify_transformations,
    TrichotomyReport,
};
use ulrich_core::{DimVector, Divisor, Error, Quiver, Surface, TitsTarget, UlrichSystem};

use crate::{Format, Polarization, QuiverArg};

pub(crate) fn divisor(p: &Polarization) -> Result<Divisor> {
    let s: Surface = p.surface.parse()?;
    Ok(Divisor::parse(s, &p.h)?)
}

fn load_quiver(arg: &QuiverArg) -> Result<Quiver> {
    if let Ok(q) = Quiver::catalog(&arg.quiver) {
        return Ok(q);
    }
    let path = Path::new(&arg.quiver);
    if !path.is_file() {
        bail!(
            "unknown quiver {:?}: not a catalog name (k3, s4, k32, k51) or a file",
            arg.quiver
        );
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Quiver::from_json(&text)?)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?)
}

fn join(v: &[i64]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn target_json(t: TitsTarget) -> Value {
    match t {
        TitsTarget::Exactly(v) => json!(v),
        TitsTarget::Negative => json!("negative"),
    }
}

pub(crate) fn ample(p: &Polarization, format: Format) -> Result<String> {
    let h = divisor(p)?;
    let ample = is_ample(&h)?;
    let gg = is_globally_generated(&h).ok();
    Ok(match format {
        Format::Table => format!("{ample}\n"),
        Format::Json => json_text(&json!({
            "surface": h.surface(),
            "polarization": h.coeffs(),
            "ample": ample,
            "globally_generated": gg,
        })),
        Format::Csv => csv_text(
            &["surface", "H", "ample"],
            &[vec![h.surface().name(), h.to_string(), ample.to_string()]],
        )?,
    })
}

pub(crate) fn chi(p: &Polarization) -> Result<String> {
    Ok(format!("{}\n", line_bundle_chi(&divisor(p)?)?))
}

pub(crate) fn euler(q: &QuiverArg, alpha: &str, beta: &str) -> Result<String> {
    let q = load_quiver(q)?;
    let a: DimVector = alpha.parse().context("--alpha")?;
    let b: DimVector = beta.parse().context("--beta")?;
    Ok(format!("{}\n", q.euler_form(&a, &b)?))
}

pub(crate) fn roots(q: &QuiverArg, vectors: &[String], format: Format) -> Result<String> {
    let q = load_quiver(q)?;
    if vectors.is_empty() {
        let kind = q.diagram_type()?;
        let hyperbolic = q.is_hyperbolic()?;
        return Ok(match format {
            Format::Table => format!("type       {kind:?}\nhyperbolic {hyperbolic}\n"),
            Format::Json => json_text(&json!({
                "vertices": q.vertex_count(),
                "arrows": q.arrows(),
                "diagram_type": kind,
                "hyperbolic": hyperbolic,
            })),
            Format::Csv => csv_text(
                &["vertices", "diagram_type", "hyperbolic"],
                &[vec![
                    q.vertex_count().to_string(),
                    format!("{kind:?}"),
                    hyperbolic.to_string(),
                ]],
            )?,
        });
    }
    let mut rows = Vec::new();
    for text in vectors {
        let d: DimVector = text.parse().with_context(|| format!("--d {text}"))?;
        let class = q.classify_root(&d)?;
        rows.push((d.clone(), q.tits(&d)?, class));
    }
    Ok(match format {
        Format::Table => rows.iter().fold(String::new(), |mut out, (d, t, c)| {
            let _ = writeln!(out, "{d}  tits={t}  {c:?}");
            out
        }),
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(d, t, c)| json!({"vector": d, "tits": t, "class": c}))
                .collect(),
        )),
        Format::Csv => csv_text(
            &["vector", "tits", "class"],
            &rows
                .iter()
                .map(|(d, t, c)| vec![join(d.entries()), t.to_string(), format!("{c:?}")])
                .collect::<Vec<_>>(),
        )?,
    })
}

pub(crate) fn certify(p: &Polarization, allow_non_ample: bool, format: Format) -> Result<String> {
    let h = divisor(p)?;
    let sys = if allow_non_ample {
        UlrichSystem::build_unchecked(h.surface(), &h, 1)?
    } else {
        UlrichSystem::build(h.surface(), &h, 1)?
    };
    let cert = finiteness_certificate(&sys)?;
    Ok(match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "surface      {}", h.surface());
            let _ = writeln!(out, "polarization {h}");
            let _ = writeln!(out, "class        {:?}", cert.class);
            for row in &cert.matrix {
                let _ = writeln!(out, "  [{}]", join(row));
            }
            for b in &cert.basis {
                let _ = writeln!(out, "  kernel ({})", join(b));
            }
            out
        }
        Format::Json => json_text(&json!({
            "surface": h.surface(),
            "polarization": h.coeffs(),
            "class": cert.class,
            "matrix": cert.matrix,
            "basis": cert.basis,
        })),
        Format::Csv => csv_text(
            &["surface", "H", "class", "matrix"],
            &[vec![
                h.surface().name(),
                h.to_string(),
                format!("{:?}", cert.class),
                cert.matrix.iter().map(|r| join(r)).collect::<Vec<_>>().join(";"),
            ]],
        )?,
    })
}

struct Search {
    sys: UlrichSystem,
    target: TitsTarget,
    bound: Option<i64>,
    found: Vec<(DimVector, i64)>,
}

fn search(h: &Divisor, rank: i64, tits: &str, bound: Option<i64>, jobs: usize) -> Result<Search> {
    let sys = UlrichSystem::build(h.surface(), h, rank)?;
    let target: TitsTarget = tits.parse()?;
    let bound = match (bound, target) {
        (Some(b), _) => Some(b),
        (None, TitsTarget::Negative) => Some(10),
        (None, _) if finiteness_certificate(&sys)?.is_positive_definite() => None,
        (None, _) => Some(10),
    };
    let found = enumerate_candidates_parallel(&sys, target, bound, jobs)?
        .into_iter()
        .map(|d| {
            let t = sys.tits(&d)?;
            Ok((d, t))
        })
        .collect::<Result<_>>()?;
    Ok(Search {
        sys,
        target,
        bound,
        found,
    })
}

pub(crate) fn enumerate(
    p: &Polarization,
    rank: i64,
    tits: &str,
    bound: Option<i64>,
    jobs: usize,
    format: Format,
) -> Result<String> {
    let h = divisor(p)?;
    let Search {
        target, bound, found, ..
    } = search(&h, rank, tits, bound, jobs)?;
    Ok(match format {
        Format::Table => {
            let mut out = String::new();
            match bound {
                Some(b) => {
                    let _ = writeln!(out, "r={rank} tits={target} in box [0,{b}]: {} found", found.len());
                }
                None => {
                    let _ = writeln!(out, "r={rank} tits={target} complete: {} found", found.len());
                }
            }
            for (d, t) in &found {
                let _ = writeln!(out, "  {d}  tits={t}");
            }
            out
        }
        Format::Json => json_text(&json!({
            "surface": h.surface(),
            "polarization": h.coeffs(),
            "r": rank,
            "target": target_json(target),
            "bound": bound,
            "complete": bound.is_none(),
            "candidates": found.iter().map(|(d, t)| json!({"vector": d, "tits": t})).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_text(
            &["surface", "H", "r", "vector", "tits"],
            &found
                .iter()
                .map(|(d, t)| {
                    vec![
                        h.surface().name(),
                        h.to_string(),
                        rank.to_string(),
                        join(d.entries()),
                        t.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    })
}

pub(crate) fn render_report(rep: &TrichotomyReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Table => rep.to_table(),
        Format::Json => rep.to_json()? + "\n",
        Format::Csv => rep.to_csv()?,
    })
}

pub(crate) fn classify(p: &Polarization, rank_max: i64, bound: i64, jobs: usize, format: Format) -> Result<String> {
    let h = divisor(p)?;
    let rep = classify_trichotomy_parallel(h.surface(), &h, rank_max, bound, jobs)?;
    render_report(&rep, format)
}

fn parse_rationals(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<BigRational>()
                .map_err(|_| Error::Parse(format!("not a rational number: {:?}", part.trim())).into())
        })
        .collect()
}

pub(crate) fn verify_props(p: &Polarization, vector: Option<&str>) -> Result<String> {
    let h = divisor(p)?;
    let vectors = match vector {
        Some(text) => vec![parse_rationals(text)?],
        None => {
            let sys = UlrichSystem::build_unchecked(h.surface(), &h, 1)?;
            oracle::nullspace(&RationalMatrix::from_rows_i64(&[sys.rank_form()]))
        }
    };
    let mut ok = true;
    for v in &vectors {
        ok &= verify_transformations(h.surface(), &h, v)?;
    }
    Ok(format!("{ok}\n"))
}

pub(crate) fn verify(p: &Polarization, rank: i64, tits: &str, bound: i64, jobs: usize) -> Result<String> {
    if bound < 0 {
        return Err(Error::InvalidArgument(format!("bound must be non-negative, got {bound}")).into());
    }
    let h = divisor(p)?;
    let boxed = search(&h, rank, tits, Some(bound), jobs)?;
    let sys = &boxed.sys;
    let linear = [
        LinearConstraint::new(sys.rank_form().to_vec(), rank),
        LinearConstraint::new(sys.chi_form().to_vec(), 0),
    ];
    let oracle = brute_force_parallel(
        &linear,
        &sys.quiver().euler_matrix(),
        boxed.target,
        &vec![(0, bound); sys.dim()],
        jobs,
    )?;
    let fast: Vec<Vec<i64>> = boxed.found.iter().map(|(d, _)| d.0.clone()).collect();
    if fast != oracle {
        return Err(Error::Internal(format!(
            "enumerator found {} vectors, oracle {}",
            fast.len(),
            oracle.len()
        ))
        .into());
    }
    let mut out = format!(
        "box [0,{bound}]: enumerator and oracle agree on {} vectors\n",
        oracle.len()
    );
    if boxed.target != TitsTarget::Negative && finiteness_certificate(sys)?.is_positive_definite() {
        let complete = search(&h, rank, tits, None, jobs)?;
        let inside: Vec<Vec<i64>> = complete
            .found
            .iter()
            .map(|(d, _)| d.0.clone())
            .filter(|v| v.iter().all(|&x| x <= bound))
            .collect();
        if inside != oracle {
            return Err(Error::Internal("complete enumeration disagrees with the oracle inside the box".into()).into());
        }
        let _ = writeln!(
            out,
            "complete enumeration: {} vectors, {} outside the box",
            complete.found.len(),
            complete.found.len() - inside.len()
        );
    }
    Ok(out)
}
