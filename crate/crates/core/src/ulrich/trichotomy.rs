use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::certificate::{finiteness_certificate, FinitenessCertificate};
use super::enumerate::enumerate_candidates_parallel;
use super::system::UlrichSystem;
use crate::error::{Error, Result};
use crate::lattice::{Divisor, Surface};
use crate::quiver::{moduli_dim, DimVector, TitsTarget};

/// Evidence only: a candidate vector is a necessary fingerprint of an
/// Ulrich bundle, not a proof that one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    NoCandidates,
    FiniteEvidence,
    TameEvidence,
    WildEvidence,
}

impl Verdict {
    pub fn from_tits_values(values: impl IntoIterator<Item = i64>) -> Verdict {
        let (mut any, mut neg, mut zero) = (false, false, false);
        for t in values {
            any = true;
            neg |= t < 0;
            zero |= t == 0;
        }
        match (any, neg, zero) {
            (false, ..) => Verdict::NoCandidates,
            (_, true, _) => Verdict::WildEvidence,
            (_, _, true) => Verdict::TameEvidence,
            _ => Verdict::FiniteEvidence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub vector: Vec<i64>,
    pub tits: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCandidates {
    pub r: i64,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrichotomyReport {
    pub surface: Surface,
    pub polarization: Vec<i64>,
    pub certificate: FinitenessCertificate,
    pub ranks: Vec<RankCandidates>,
    pub verdict: Verdict,
    /// `(n, 1 - n^2 q)` for the first imaginary candidate, when wild.
    pub moduli_dims: Vec<(u32, i64)>,
}

impl TrichotomyReport {
    pub fn candidates(&self) -> impl Iterator<Item = (i64, &Candidate)> {
        self.ranks
            .iter()
            .flat_map(|r| r.candidates.iter().map(move |c| (r.r, c)))
    }

    /// The lowest-rank, then lexicographically first, candidate of negative
    /// Tits value.
    pub fn first_imaginary(&self) -> Option<(i64, &Candidate)> {
        self.candidates().find(|(_, c)| c.tits < 0)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Internal(format!("report serialization: {e}")))
    }

    /// One row per candidate: `surface, H, r, vector, tits`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        write_csv_rows(&mut w, std::slice::from_ref(self))?;
        finish_csv(w)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let h = join(&self.polarization);
        let _ = writeln!(out, "surface      {}", self.surface);
        let _ = writeln!(out, "polarization {h}");
        let _ = writeln!(
            out,
            "certificate  {:?} {:?}",
            self.certificate.class, self.certificate.matrix
        );
        let _ = writeln!(out, "verdict      {:?}", self.verdict);
        for rank in &self.ranks {
            if rank.candidates.is_empty() {
                let _ = writeln!(out, "  r={}  (none)", rank.r);
            }
            for c in &rank.candidates {
                let _ = writeln!(out, "  r={}  ({})  tits={}", rank.r, join(&c.vector), c.tits);
            }
        }
        for (n, d) in &self.moduli_dims {
            let _ = writeln!(out, "  moduli n={n}  dim={d}");
        }
        if self.certificate.is_positive_definite() {
            let _ = writeln!(
                out,
                "note: tits 0 candidates are bounded by the same certificate as tits 1"
            );
        }
        out
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn write_csv_rows<W: std::io::Write>(w: &mut csv::Writer<W>, reports: &[TrichotomyReport]) -> Result<()> {
    let err = |e: csv::Error| Error::Internal(format!("csv export: {e}"));
    w.write_record(["surface", "H", "r", "vector", "tits"]).map_err(err)?;
    for rep in reports {
        let h = join(&rep.polarization);
        for (r, c) in rep.candidates() {
            w.write_record([
                rep.surface.name(),
                h.clone(),
                r.to_string(),
                join(&c.vector),
                c.tits.to_string(),
            ])
            .map_err(err)?;
        }
    }
    Ok(())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv export: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(format!("csv export: {e}")))
}

/// CSV for several reports under one header.
pub fn reports_to_csv(reports: &[TrichotomyReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_csv_rows(&mut w, reports)?;
    finish_csv(w)
}

pub fn classify_trichotomy(s: Surface, h: &Divisor, r_max: i64, bound: i64) -> Result<TrichotomyReport> {
    classify_trichotomy_parallel(s, h, r_max, bound, 1)
}

/// Scans ranks `1..=r_max`. Negative Tits values are searched in the box
/// `[0, bound]`; Tits values 0 and 1 are enumerated completely when the
/// certificate is positive definite and within the box otherwise.
pub fn classify_trichotomy_parallel(
    s: Surface,
    h: &Divisor,
    r_max: i64,
    bound: i64,
    jobs: usize,
) -> Result<TrichotomyReport> {
    if r_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "rank bound must be positive, got {r_max}"
        )));
    }
    if bound < 0 {
        return Err(Error::InvalidArgument(format!(
            "bound must be non-negative, got {bound}"
        )));
    }
    let base = UlrichSystem::build(s, h, 1)?;
    let certificate = finiteness_certificate(&base)?;
    let exact_bound = (!certificate.is_positive_definite()).then_some(bound);
    let mut ranks = Vec::new();
    for r in 1..=r_max {
        let sys = base.with_rank(r)?;
        let mut found: Vec<DimVector> = enumerate_candidates_parallel(&sys, TitsTarget::Negative, Some(bound), jobs)?;
        for t in [0, 1] {
            found.extend(enumerate_candidates_parallel(
                &sys,
                TitsTarget::Exactly(t),
                exact_bound,
                jobs,
            )?);
        }
        found.sort();
        let candidates = found
            .into_iter()
            .map(|d| {
                let tits = sys.tits(&d)?;
                Ok(Candidate { vector: d.0, tits })
            })
            .collect::<Result<_>>()?;
        ranks.push(RankCandidates { r, candidates });
    }
    let verdict = Verdict::from_tits_values(ranks.iter().flat_map(|r| r.candidates.iter().map(|c| c.tits)));
    let mut report = TrichotomyReport {
        surface: s,
        polarization: h.coeffs().to_vec(),
        certificate,
        ranks,
        verdict,
        moduli_dims: Vec::new(),
    };
    if verdict == Verdict::WildEvidence {
        let (_, c) = report.first_imaginary().expect("wild verdict has a witness");
        let d = DimVector::new(c.vector.clone());
        report.moduli_dims = (1..=4)
            .map(|n| Ok((n, moduli_dim(base.quiver(), &d, n)?)))
            .collect::<Result<_>>()?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(s: Surface, h: &[i64], r_max: i64) -> TrichotomyReport {
        classify_trichotomy(s, &Divisor::new(s, h.to_vec()).unwrap(), r_max, 10).unwrap()
    }

    #[test]
    fn line_on_the_plane() {
        let rep = report(Surface::P2, &[1], 6);
        assert_eq!(rep.verdict, Verdict::FiniteEvidence);
        let all: Vec<_> = rep.candidates().map(|(r, c)| (r, c.vector.clone())).collect();
        assert_eq!(all, vec![(1, vec![0, 1])]);
        assert_eq!(rep.ranks.len(), 6);
        assert!(rep.moduli_dims.is_empty());
    }

    #[test]
    fn cubic_curve_class() {
        let rep = report(Surface::P2, &[3], 3);
        assert_eq!(rep.verdict, Verdict::WildEvidence);
        let (r, c) = rep.first_imaginary().unwrap();
        assert_eq!((r, c.vector.as_slice(), c.tits), (1, &[1, 2][..], -1));
    }

    #[test]
    fn anticanonical_cubic_surface() {
        let rep = report(Surface::X3, &[3, -1, -1, -1], 2);
        assert_eq!(rep.verdict, Verdict::WildEvidence);
        let (r, c) = rep.first_imaginary().unwrap();
        assert_eq!((r, c.vector.as_slice()), (1, &[1, 1, 1, 1, 1][..]));
        assert_eq!(rep.moduli_dims, vec![(1, 2), (2, 5), (3, 10), (4, 17)]);
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(Verdict::from_tits_values([]), Verdict::NoCandidates);
        assert_eq!(Verdict::from_tits_values([1, 1]), Verdict::FiniteEvidence);
        assert_eq!(Verdict::from_tits_values([1, 0]), Verdict::TameEvidence);
        assert_eq!(Verdict::from_tits_values([0, -3, 1]), Verdict::WildEvidence);
    }

    #[test]
    fn exports() {
        let rep = report(Surface::P2, &[1], 2);
        let json: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
        assert_eq!(json["verdict"], "FiniteEvidence");
        assert_eq!(json["surface"], "p2");
        assert_eq!(json["ranks"][0]["candidates"][0]["vector"], serde_json::json!([0, 1]));
        assert_eq!(json["certificate"]["class"], "PositiveDefinite");
        let csv = rep.to_csv().unwrap();
        assert_eq!(csv, "surface,H,r,vector,tits\np2,1,1,\"0,1\",1\n");
        assert!(rep.to_table().contains("FiniteEvidence"));
    }
}
