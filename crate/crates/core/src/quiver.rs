//! Finite acyclic quivers, their Euler and Tits forms, and the
//! finite/affine/indefinite trichotomy of the underlying diagram.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{self, Definiteness, RationalMatrix};

/// A quiver whose vertices are numbered so that every arrow increases the
/// index, which makes it acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
    name: Option<String>,
}

#[derive(Deserialize)]
struct QuiverDocument {
    vertices: usize,
    arrows: Vec<[usize; 2]>,
    #[serde(default)]
    name: Option<String>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidQuiver("a quiver needs at least one vertex".into()));
        }
        for &(s, t) in &arrows {
            if t >= vertex_count {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {s}->{t} leaves the vertex range 0..{vertex_count}"
                )));
            }
            if s >= t {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {s}->{t} does not point towards a larger vertex"
                )));
            }
        }
        Ok(Quiver {
            vertex_count,
            arrows,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Loads `{"vertices": n, "arrows": [[s, t], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: QuiverDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("quiver document: {e}")))?;
        let q = Quiver::new(doc.vertices, doc.arrows.into_iter().map(|[s, t]| (s, t)).collect())?;
        Ok(match doc.name {
            Some(n) => q.with_name(n),
            None => q,
        })
    }

    /// Looks up `k3`, `s4`, `k32` or `k51`.
    pub fn catalog(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "k3" => Ok(Quiver::k3()),
            "s4" => Ok(Quiver::s4()),
            "k32" => Ok(Quiver::k32()),
            "k51" => Ok(Quiver::k51()),
            other => Err(Error::Parse(format!("unknown catalog quiver {other:?}"))),
        }
    }

    /// The Kronecker quiver with `m` parallel arrows `0 -> 1`.
    pub fn kronecker(m: usize) -> Self {
        Quiver::new(2, vec![(0, 1); m])
            .expect("valid")
            .with_name(format!("K{m}"))
    }

    pub fn k3() -> Self {
        Quiver::kronecker(3).with_name("k3")
    }

    /// Source `0` with a double arrow to each of `1` and `2`.
    pub fn s4() -> Self {
        Quiver::new(3, vec![(0, 1), (0, 1), (0, 2), (0, 2)])
            .expect("valid")
            .with_name("s4")
    }

    /// Sources `0, 1, 2`, each with one arrow to each sink `3, 4`.
    pub fn k32() -> Self {
        let arrows = (0..3).flat_map(|s| (3..5).map(move |t| (s, t))).collect();
        Quiver::new(5, arrows).expect("valid").with_name("k32")
    }

    /// Sources `0..5`, each with one arrow to the sink `5`.
    pub fn k51() -> Self {
        Quiver::new(6, (0..5).map(|s| (s, 5)).collect())
            .expect("valid")
            .with_name("k51")
    }

    fn from_edges(n: usize, edges: &[(usize, usize)], name: String) -> Self {
        let arrows = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        Quiver::new(n, arrows).expect("valid").with_name(name)
    }

    /// Linearly oriented `A_n`.
    pub fn a_n(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Quiver::from_edges(n, &edges, format!("A{n}"))
    }

    /// `D_n`, `n >= 4`: a path `0..n-1` with an extra leaf `n-1` on vertex `n-3`.
    pub fn d_n(n: usize) -> Self {
        assert!(n >= 4);
        let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((n - 3, n - 1));
        Quiver::from_edges(n, &edges, format!("D{n}"))
    }

    /// `E_6`, `E_7`, `E_8`: a path `0..n-1` with a leaf on vertex 2.
    pub fn e_n(n: usize) -> Self {
        assert!((6..=8).contains(&n));
        let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((2, n - 1));
        Quiver::from_edges(n, &edges, format!("E{n}"))
    }

    /// Extended `A_n`: an acyclically oriented cycle on `n + 1` vertices.
    pub fn extended_a(n: usize) -> Self {
        assert!(n >= 1);
        let mut edges: Vec<_> = (1..=n).map(|i| (i - 1, i)).collect();
        edges.push((0, n));
        Quiver::from_edges(n + 1, &edges, format!("~A{n}"))
    }

    /// Extended `D_n`, `n >= 4`, on `n + 1` vertices.
    pub fn extended_d(n: usize) -> Self {
        assert!(n >= 4);
        let mut edges: Vec<_> = (2..n).map(|i| (i - 1, i)).collect();
        edges.push((0, 2));
        edges.push((n - 2, n));
        Quiver::from_edges(n + 1, &edges, format!("~D{n}"))
    }

    /// Extended `E_6` and `E_7`.
    pub fn extended_e(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = match n {
            6 => vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
            7 => vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
            _ => panic!("extended E{n} is not provided"),
        };
        let count = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap() + 1;
        Quiver::from_edges(count, &edges, format!("~E{n}"))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    fn check_len(&self, d: &DimVector) -> Result<()> {
        if d.len() != self.vertex_count {
            return Err(Error::LengthMismatch {
                expected: self.vertex_count,
                got: d.len(),
            });
        }
        Ok(())
    }

    /// `<alpha, beta> = sum_i alpha_i beta_i - sum_arrows alpha_s beta_t`.
    pub fn euler_form(&self, alpha: &DimVector, beta: &DimVector) -> Result<i64> {
        self.check_len(alpha)?;
        self.check_len(beta)?;
        let overflow = || Error::Overflow("Euler form");
        let mut acc: i64 = 0;
        for (a, b) in alpha.0.iter().zip(&beta.0) {
            acc = acc
                .checked_add(a.checked_mul(*b).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        for &(s, t) in &self.arrows {
            let term = alpha.0[s].checked_mul(beta.0[t]).ok_or_else(overflow)?;
            acc = acc.checked_sub(term).ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    /// The Tits form `q(d) = <d, d>`.
    pub fn tits(&self, d: &DimVector) -> Result<i64> {
        self.euler_form(d, d)
    }

    /// Matrix `E` with `<alpha, beta> = alpha^T E beta`.
    pub fn euler_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(s, t) in &self.arrows {
            m[s][t] -= 1;
        }
        m
    }

    /// `E + E^T`: 2 on the diagonal, minus the number of arrows joining `i`
    /// and `j` off it. Its quadratic form is `2 q`.
    pub fn symmetrized_matrix(&self) -> Vec<Vec<i64>> {
        let e = self.euler_matrix();
        let n = self.vertex_count;
        (0..n).map(|i| (0..n).map(|j| e[i][j] + e[j][i]).collect()).collect()
    }

    pub fn classify_root(&self, d: &DimVector) -> Result<RootClass> {
        let q = self.tits(d)?;
        if d.is_zero() {
            return Ok(RootClass::Zero);
        }
        if !d.is_positive() {
            return Ok(RootClass::NonRoot);
        }
        Ok(match q {
            1 => RootClass::Rigid,
            0 => RootClass::Isotropic,
            q if q < 0 => RootClass::Imaginary,
            _ => RootClass::NonRoot,
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(s, t) in &self.arrows {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == root)
    }

    /// The full subquiver on the given vertices, renumbered in increasing order.
    pub fn full_subquiver(&self, vertices: &[usize]) -> Result<Quiver> {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.iter().any(|&v| v >= self.vertex_count) {
            return Err(Error::InvalidArgument("subquiver vertex set out of range".into()));
        }
        let index = |v: usize| keep.binary_search(&v).ok();
        let arrows = self
            .arrows
            .iter()
            .filter_map(|&(s, t)| Some((index(s)?, index(t)?)))
            .collect();
        Quiver::new(keep.len(), arrows)
    }

    /// Finite, affine or indefinite according to the definiteness of `E + E^T`.
    pub fn diagram_type(&self) -> Result<DiagramType> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let sym = RationalMatrix::from_rows_i64(&self.symmetrized_matrix());
        let inertia = oracle::inertia(&sym)?;
        Ok(match Definiteness::from(inertia) {
            Definiteness::PositiveDefinite => DiagramType::Finite,
            Definiteness::PositiveSemidefinite if inertia.zero == 1 => DiagramType::Affine,
            _ => DiagramType::Indefinite,
        })
    }

    /// Indefinite, with every connected proper full subdiagram finite or affine.
    pub fn is_hyperbolic(&self) -> Result<bool> {
        if self.diagram_type()? != DiagramType::Indefinite {
            return Ok(false);
        }
        let n = self.vertex_count;
        let full = (1u64 << n) - 1;
        for mask in 1..full {
            let vertices: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
            let sub = self.full_subquiver(&vertices)?;
            if !sub.is_connected() {
                continue;
            }
            if sub.diagram_type()? == DiagramType::Indefinite {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}"),
            None => write!(
                f,
                "quiver({} vertices, {} arrows)",
                self.vertex_count,
                self.arrows.len()
            ),
        }
    }
}

/// Moduli dimension `1 - n^2 q(d)` of the family attached to `n d`.
pub fn moduli_dim(q: &Quiver, d: &DimVector, n: u32) -> Result<i64> {
    let t = q.tits(d)?;
    let n = i64::from(n);
    n.checked_mul(n)
        .and_then(|n2| n2.checked_mul(t))
        .and_then(|v| 1i64.checked_sub(v))
        .ok_or(Error::Overflow("moduli dimension"))
}

/// Dimension vector of a quiver representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<i64>);

impl DimVector {
    pub fn new(entries: Vec<i64>) -> Self {
        DimVector(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// All entries non-negative and not all zero.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&x| x >= 0) && !self.is_zero()
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }
}

impl From<Vec<i64>> for DimVector {
    fn from(v: Vec<i64>) -> Self {
        DimVector(v)
    }
}

impl From<&[i64]> for DimVector {
    fn from(v: &[i64]) -> Self {
        DimVector(v.to_vec())
    }
}

/// Parses a comma list such as `1,2,-3`.
impl FromStr for DimVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::lattice::parse_int_list(s).map(DimVector)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootClass {
    /// Tits value 1: a real root, carrying a unique indecomposable.
    Rigid,
    /// Tits value 0.
    Isotropic,
    /// Negative Tits value.
    Imaginary,
    NonRoot,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagramType {
    Finite,
    Affine,
    Indefinite,
}

/// Which Tits values a search should keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TitsTarget {
    Exactly(i64),
    Negative,
}

impl TitsTarget {
    pub fn accepts(&self, value: i64) -> bool {
        match *self {
            TitsTarget::Exactly(t) => value == t,
            TitsTarget::Negative => value < 0,
        }
    }

    /// Largest admissible Tits value.
    pub fn upper(&self) -> i64 {
        match *self {
            TitsTarget::Exactly(t) => t,
            TitsTarget::Negative => -1,
        }
    }
}

impl fmt::Display for TitsTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TitsTarget::Exactly(t) => write!(f, "{t}"),
            TitsTarget::Negative => f.write_str("negative"),
        }
    }
}

impl FromStr for TitsTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "neg" | "negative" => Ok(TitsTarget::Negative),
            other => other
                .parse::<i64>()
                .map(TitsTarget::Exactly)
                .map_err(|_| Error::Parse(format!("tits target must be neg, 0 or 1, got {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::from(v)
    }

    #[test]
    fn dim_vectors_parse_from_comma_lists() {
        assert_eq!("1, 2,-3".parse::<DimVector>().unwrap(), dv(&[1, 2, -3]));
        assert!("1,,2".parse::<DimVector>().is_err());
        assert!("".parse::<DimVector>().is_err());
    }

    #[test]
    fn euler_form_examples() {
        let k3 = Quiver::k3();
        assert_eq!(k3.euler_form(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), -3);
        assert_eq!(k3.euler_form(&dv(&[0, 1]), &dv(&[1, 0])).unwrap(), 0);
        assert_eq!(Quiver::s4().tits(&dv(&[1, 1, 1])).unwrap(), -1);
        for q in [Quiver::k3(), Quiver::s4(), Quiver::k32(), Quiver::k51()] {
            for i in 0..q.vertex_count() {
                let e = DimVector::unit(q.vertex_count(), i);
                assert_eq!(q.euler_form(&e, &e).unwrap(), 1);
            }
        }
    }

    #[test]
    fn tits_examples() {
        let k3 = Quiver::k3();
        assert_eq!(k3.tits(&dv(&[1, 3])).unwrap(), 1);
        assert_eq!(k3.tits(&dv(&[1, 1])).unwrap(), -1);
        assert_eq!(Quiver::k32().tits(&dv(&[1, 1, 1, 1, 1])).unwrap(), -1);
        assert!(matches!(k3.tits(&dv(&[1, 1, 1])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn root_classes() {
        let k3 = Quiver::k3();
        assert_eq!(k3.classify_root(&dv(&[1, 1])).unwrap(), RootClass::Imaginary);
        assert_eq!(k3.classify_root(&dv(&[1, 3])).unwrap(), RootClass::Rigid);
        assert_eq!(k3.classify_root(&dv(&[0, 0])).unwrap(), RootClass::Zero);
        assert_eq!(k3.classify_root(&dv(&[-1, 3])).unwrap(), RootClass::NonRoot);
        assert_eq!(k3.classify_root(&dv(&[2, 0])).unwrap(), RootClass::NonRoot);
        let kr2 = Quiver::kronecker(2);
        assert_eq!(kr2.classify_root(&dv(&[1, 1])).unwrap(), RootClass::Isotropic);
    }

    #[test]
    fn diagram_types() {
        assert_eq!(Quiver::k3().diagram_type().unwrap(), DiagramType::Indefinite);
        assert!(Quiver::k3().is_hyperbolic().unwrap());
        assert_eq!(Quiver::a_n(2).diagram_type().unwrap(), DiagramType::Finite);
        assert_eq!(Quiver::kronecker(2).diagram_type().unwrap(), DiagramType::Affine);
        let disconnected = Quiver::new(3, vec![(0, 1)]).unwrap();
        assert_eq!(disconnected.diagram_type(), Err(Error::Disconnected));
    }

    #[test]
    fn moduli_dimensions() {
        let k3 = Quiver::k3();
        assert_eq!(moduli_dim(&k3, &dv(&[1, 3]), 1).unwrap(), 0);
        assert_eq!(moduli_dim(&Quiver::kronecker(2), &dv(&[1, 1]), 1).unwrap(), 1);
        assert_eq!(moduli_dim(&k3, &dv(&[1, 1]), 2).unwrap(), 5);
    }

    #[test]
    fn construction_is_validated() {
        assert!(Quiver::new(2, vec![(1, 0)]).is_err());
        assert!(Quiver::new(2, vec![(0, 0)]).is_err());
        assert!(Quiver::new(2, vec![(0, 2)]).is_err());
        assert!(Quiver::new(0, vec![]).is_err());
        let q = Quiver::from_json(r#"{"vertices": 2, "arrows": [[0,1],[0,1],[0,1]]}"#).unwrap();
        assert_eq!(q.euler_matrix(), Quiver::k3().euler_matrix());
        assert!(Quiver::from_json(r#"{"vertices": 2, "arrows": [[1,0]]}"#).is_err());
        assert!(Quiver::catalog("k4").is_err());
    }

    #[test]
    fn tits_targets_parse() {
        assert_eq!("neg".parse::<TitsTarget>().unwrap(), TitsTarget::Negative);
        assert_eq!("1".parse::<TitsTarget>().unwrap(), TitsTarget::Exactly(1));
        assert!("one".parse::<TitsTarget>().is_err());
    }
}
