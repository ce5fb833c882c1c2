//! Structure-constant representation of naturally reductive homogeneous
//! spaces: bracket evaluation, reductive-split projections, the declared
//! inner product, exact validation of every algebraic hypothesis, and the
//! JSON file format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::scalars::{Radical, Rational, Ring, RADICAL_DIM};

/// Which block of the reductive split g = m ⊕ h to keep.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Part {
    M,
    H,
}

/// Zero-pattern classification of a vector with respect to the split.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Grading {
    Zero,
    MOnly,
    HOnly,
    Full,
}

/// A vector in the Lie algebra g, with coordinates on the declared basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgVec<T: Ring> {
    pub coeffs: Vec<T>,
}

impl<T: Ring> AlgVec<T> {
    pub fn zero(dim: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); dim],
        }
    }

    /// Basis vector `e_index` (zero-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coeffs[index] = T::one();
        v
    }

    /// Embeds tangent coordinates (length `dim_m`) into g (length `dim_g`).
    pub fn from_m_coords(coords: &[T], dim_g: usize) -> Self {
        let mut coeffs = coords.to_vec();
        coeffs.resize(dim_g, T::zero());
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Zero-pattern grading with respect to a split with `dim_m` tangent
    /// directions.
    pub fn grading(&self, dim_m: usize) -> Grading {
        let m_zero = self.coeffs[..dim_m].iter().all(|c| c.is_zero());
        let h_zero = self.coeffs[dim_m..].iter().all(|c| c.is_zero());
        match (m_zero, h_zero) {
            (true, true) => Grading::Zero,
            (false, true) => Grading::MOnly,
            (true, false) => Grading::HOnly,
            (false, false) => Grading::Full,
        }
    }

    pub fn add_assign(&mut self, other: &AlgVec<T>) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b.clone();
        }
    }

    pub fn scale(&mut self, factor: &T) {
        for a in self.coeffs.iter_mut() {
            *a *= factor.clone();
        }
    }
}

/// One summand `coeff · e_target` of a structure constant.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTerm {
    /// Zero-based target basis index.
    pub target: usize,
    pub coeff: Radical,
}

/// A naturally reductive homogeneous space given by structure constants on an
/// orthonormal basis, with the tangent block m first (indices `0..dim_m`) and
/// the isotropy block h after it.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub name: String,
    pub dim_g: usize,
    pub dim_m: usize,
    pub labels: Vec<String>,
    /// Whether the inner product is declared ad-invariant on all of g.
    pub normal: bool,
    /// Brackets of basis pairs, keyed by zero-based (i, j) with i < j;
    /// antisymmetry supplies the rest.
    brackets: BTreeMap<(usize, usize), Vec<BracketTerm>>,
}

impl AlgebraSpec {
    /// Builds a spec from one-based bracket data `[e_i, e_j] = Σ coeff · e_k`.
    ///
    /// Pairs may be given in either order; `i == j`, out-of-range indices, and
    /// duplicate unordered pairs are rejected.
    pub fn from_brackets(
        name: &str,
        dim_g: usize,
        dim_m: usize,
        normal: bool,
        labels: Option<Vec<String>>,
        pairs: Vec<((usize, usize), Vec<(usize, Radical)>)>,
    ) -> Result<Self> {
        if dim_m > dim_g {
            return Err(GeomError::SpecParse {
                location: "dim_m".into(),
                message: format!("dim_m = {dim_m} exceeds dim_g = {dim_g}"),
            });
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != dim_g {
                    return Err(GeomError::SpecParse {
                        location: "labels".into(),
                        message: format!("expected {dim_g} labels, got {}", l.len()),
                    });
                }
                l
            }
            None => (1..=dim_g).map(|i| format!("e{i}")).collect(),
        };
        let mut brackets: BTreeMap<(usize, usize), Vec<BracketTerm>> = BTreeMap::new();
        for (entry_idx, ((i1, j1), terms)) in pairs.into_iter().enumerate() {
            let loc = format!("brackets[{entry_idx}]");
            for (label, idx) in [("i", i1), ("j", j1)] {
                if idx == 0 || idx > dim_g {
                    return Err(GeomError::SpecParse {
                        location: format!("{loc}.{label}"),
                        message: format!("index {idx} out of range 1..={dim_g}"),
                    });
                }
            }
            if i1 == j1 {
                return Err(GeomError::SpecParse {
                    location: loc,
                    message: format!("bracket [{i1},{j1}] of a vector with itself must vanish"),
                });
            }
            // Normalize to i < j (zero-based), flipping signs if given as (j, i).
            let (key, flip) = if i1 < j1 {
                ((i1 - 1, j1 - 1), false)
            } else {
                ((j1 - 1, i1 - 1), true)
            };
            if brackets.contains_key(&key) {
                return Err(GeomError::SpecParse {
                    location: loc,
                    message: format!(
                        "duplicate bracket for the pair [{},{}]",
                        key.0 + 1,
                        key.1 + 1
                    ),
                });
            }
            let mut list = Vec::with_capacity(terms.len());
            for (term_idx, (k1, coeff)) in terms.into_iter().enumerate() {
                if k1 == 0 || k1 > dim_g {
                    return Err(GeomError::SpecParse {
                        location: format!("{loc}.terms[{term_idx}].k"),
                        message: format!("index {k1} out of range 1..={dim_g}"),
                    });
                }
                if coeff.is_zero() {
                    continue;
                }
                let coeff = if flip { -coeff } else { coeff };
                list.push(BracketTerm {
                    target: k1 - 1,
                    coeff,
                });
            }
            if !list.is_empty() {
                brackets.insert(key, list);
            }
        }
        Ok(Self {
            name: name.to_string(),
            dim_g,
            dim_m,
            labels,
            normal,
            brackets,
        })
    }

    /// Iterates the stored bracket data as one-based
    /// `((i, j), [(k, coeff), ...])` tuples with i < j.
    pub fn bracket_table(&self) -> impl Iterator<Item = ((usize, usize), Vec<(usize, Radical)>)> + '_ {
        self.brackets.iter().map(|(&(i, j), terms)| {
            (
                (i + 1, j + 1),
                terms
                    .iter()
                    .map(|t| (t.target + 1, t.coeff.clone()))
                    .collect(),
            )
        })
    }

    /// Structure constants of one basis pair (zero-based, i < j), if any.
    pub fn pair_terms(&self, i: usize, j: usize) -> Option<&[BracketTerm]> {
        self.brackets.get(&(i, j)).map(|v| v.as_slice())
    }

    /// Bilinear bracket of two vectors.
    pub fn bracket<T: Ring>(&self, x: &AlgVec<T>, y: &AlgVec<T>) -> Result<AlgVec<T>> {
        for v in [x, y] {
            if v.dim() != self.dim_g {
                return Err(GeomError::DimensionMismatch {
                    expected: self.dim_g,
                    got: v.dim(),
                });
            }
        }
        let mut out = AlgVec::zero(self.dim_g);
        for (&(i, j), terms) in &self.brackets {
            // coefficient of [e_i, e_j] in the expansion of [x, y]
            let mut c = x.coeffs[i].clone();
            c *= y.coeffs[j].clone();
            let mut c2 = x.coeffs[j].clone();
            c2 *= y.coeffs[i].clone();
            c -= c2;
            if c.is_zero() {
                continue;
            }
            for term in terms {
                let mut add = T::from_radical(&term.coeff);
                add *= c.clone();
                out.coeffs[term.target] += add;
            }
        }
        Ok(out)
    }

    /// Projection onto the m or h block.
    pub fn project<T: Ring>(&self, x: &AlgVec<T>, part: Part) -> AlgVec<T> {
        let mut out = x.clone();
        let (lo, hi) = match part {
            Part::M => (self.dim_m, self.dim_g),
            Part::H => (0, self.dim_m),
        };
        for c in out.coeffs[lo..hi].iter_mut() {
            *c = T::zero();
        }
        out
    }

    /// Declared inner product: the basis is orthonormal, so this is the
    /// coordinate dot product.
    pub fn inner<T: Ring>(&self, x: &AlgVec<T>, y: &AlgVec<T>) -> T {
        let mut acc = T::zero();
        for (a, b) in x.coeffs.iter().zip(&y.coeffs) {
            let mut p = a.clone();
            p *= b.clone();
            acc += p;
        }
        acc
    }

    /// Exactly checks every algebraic hypothesis; violations are data, not
    /// errors.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim_g;
        let basis: Vec<AlgVec<Radical>> = (0..n).map(|i| AlgVec::basis(n, i)).collect();
        let table: Vec<Vec<AlgVec<Radical>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.bracket(&basis[i], &basis[j]).expect("dims fixed"))
                    .collect()
            })
            .collect();
        let mut violations = Vec::new();

        // Antisymmetry: [e_i, e_j] + [e_j, e_i] = 0 (holds by construction;
        // checked anyway so externally built tables get audited too).
        let mut antisymmetry_pairs = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                antisymmetry_pairs += 1;
                let mut s = table[i][j].clone();
                s.add_assign(&table[j][i]);
                if s.coeffs.iter().any(|c| !c.is_zero()) {
                    violations.push(Violation::Antisymmetry { i, j });
                }
            }
        }

        // Jacobi identity over all unordered triples.
        let mut jacobi_triples = 0usize;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    jacobi_triples += 1;
                    let mut s = self.bracket(&table[a][b], &basis[c]).unwrap();
                    s.add_assign(&self.bracket(&table[b][c], &basis[a]).unwrap());
                    s.add_assign(&self.bracket(&table[c][a], &basis[b]).unwrap());
                    if s.coeffs.iter().any(|x| !x.is_zero()) {
                        violations.push(Violation::Jacobi { a, b, c });
                    }
                }
            }
        }

        // Reductivity [m, h] ⊂ m and closure of the isotropy algebra [h, h] ⊂ h.
        for u in 0..self.dim_m {
            for h in self.dim_m..n {
                if table[u][h].coeffs[self.dim_m..].iter().any(|c| !c.is_zero()) {
                    violations.push(Violation::Reductivity {
                        m_index: u,
                        h_index: h,
                    });
                }
            }
        }
        for h1 in self.dim_m..n {
            for h2 in (h1 + 1)..n {
                if table[h1][h2].coeffs[..self.dim_m].iter().any(|c| !c.is_zero()) {
                    violations.push(Violation::IsotropySubalgebra { h1, h2 });
                }
            }
        }

        // Naturally reductive condition on m:
        // <[u,v]_m, w> + <v, [u,w]_m> = 0 for all basis triples in m.
        let mut nr_triples = 0usize;
        for u in 0..self.dim_m {
            for v in 0..self.dim_m {
                for w in 0..self.dim_m {
                    nr_triples += 1;
                    let mut s = table[u][v].coeffs[w].clone();
                    s += table[u][w].coeffs[v].clone();
                    if !s.is_zero() {
                        violations.push(Violation::NaturallyReductive { u, v, w });
                    }
                }
            }
        }

        // Ad-invariance of the full inner product (normal metrics only):
        // <[u,v], w> = <u, [v,w]>.
        let mut ad_triples = 0usize;
        if self.normal {
            for u in 0..n {
                for v in 0..n {
                    for w in 0..n {
                        ad_triples += 1;
                        let lhs = table[u][v].coeffs[w].clone();
                        let rhs = table[v][w].coeffs[u].clone();
                        if lhs != rhs {
                            violations.push(Violation::AdInvariance { u, v, w });
                        }
                    }
                }
            }
        }

        ValidationReport {
            space: self.name.clone(),
            violations,
            antisymmetry_pairs,
            jacobi_triples,
            naturally_reductive_triples: nr_triples,
            ad_invariance_triples: ad_triples,
        }
    }

    /// JSON round trip: reads a spec file.
    pub fn load(path: &Path) -> Result<AlgebraSpec> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// JSON round trip: writes a spec file.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<AlgebraSpec> {
        let file: SpecFile = serde_json::from_str(text)?;
        let mut pairs = Vec::new();
        for (entry_idx, entry) in file.brackets.into_iter().enumerate() {
            let mut terms = Vec::new();
            for (term_idx, term) in entry.terms.into_iter().enumerate() {
                if term.coeff.len() != RADICAL_DIM {
                    return Err(GeomError::SpecParse {
                        location: format!("brackets[{entry_idx}].terms[{term_idx}].coeff"),
                        message: format!(
                            "expected {RADICAL_DIM} coefficient strings, got {}",
                            term.coeff.len()
                        ),
                    });
                }
                let coeff = Radical::from_coeff_strings(&term.coeff).map_err(|e| {
                    GeomError::SpecParse {
                        location: format!("brackets[{entry_idx}].terms[{term_idx}].coeff"),
                        message: e,
                    }
                })?;
                terms.push((term.k, coeff));
            }
            pairs.push(((entry.i, entry.j), terms));
        }
        AlgebraSpec::from_brackets(
            &file.name,
            file.dim_g,
            file.dim_m,
            file.normal,
            if file.labels.is_empty() {
                None
            } else {
                Some(file.labels)
            },
            pairs,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        let brackets = self
            .brackets
            .iter()
            .map(|(&(i, j), terms)| BracketEntryFile {
                i: i + 1,
                j: j + 1,
                terms: terms
                    .iter()
                    .map(|t| TermFile {
                        k: t.target + 1,
                        coeff: t.coeff.to_coeff_strings().to_vec(),
                    })
                    .collect(),
            })
            .collect();
        let file = SpecFile {
            name: self.name.clone(),
            dim_g: self.dim_g,
            dim_m: self.dim_m,
            labels: self.labels.clone(),
            normal: self.normal,
            brackets,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Resolves a builtin space by name.
    pub fn builtin(name: &str) -> Result<AlgebraSpec> {
        match name {
            "sp2_su2" => Ok(sp2_su2()),
            "su2_biinv" => Ok(su2_biinv()),
            other => Err(GeomError::UnknownSpace(other.to_string())),
        }
    }

    /// Abelian (zero-bracket) space of the given dimension — the flat model.
    pub fn flat(dim: usize) -> AlgebraSpec {
        AlgebraSpec::from_brackets("flat", dim, dim, true, None, Vec::new())
            .expect("static table")
    }
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    name: String,
    dim_g: usize,
    dim_m: usize,
    #[serde(default)]
    labels: Vec<String>,
    normal: bool,
    brackets: Vec<BracketEntryFile>,
}

#[derive(Serialize, Deserialize)]
struct BracketEntryFile {
    i: usize,
    j: usize,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    k: usize,
    coeff: Vec<String>,
}

/// A single exact violation found by [`AlgebraSpec::validate`]
/// (indices are zero-based; `Display` renders basis labels).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry { i: usize, j: usize },
    Jacobi { a: usize, b: usize, c: usize },
    Reductivity { m_index: usize, h_index: usize },
    IsotropySubalgebra { h1: usize, h2: usize },
    NaturallyReductive { u: usize, v: usize, w: usize },
    AdInvariance { u: usize, v: usize, w: usize },
}

/// Outcome of the exact validation pass.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub space: String,
    pub violations: Vec<Violation>,
    pub antisymmetry_pairs: usize,
    pub jacobi_triples: usize,
    pub naturally_reductive_triples: usize,
    pub ad_invariance_triples: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "validation of `{}`: {} violation(s)",
            self.space,
            self.violations.len()
        )?;
        writeln!(
            f,
            "  checked: {} antisymmetry pairs, {} Jacobi triples, {} naturally-reductive triples, {} ad-invariance triples",
            self.antisymmetry_pairs,
            self.jacobi_triples,
            self.naturally_reductive_triples,
            self.ad_invariance_triples
        )?;
        for v in &self.violations {
            match v {
                Violation::Antisymmetry { i, j } => {
                    writeln!(f, "  antisymmetry broken at pair ({}, {})", i + 1, j + 1)?
                }
                Violation::Jacobi { a, b, c } => writeln!(
                    f,
                    "  Jacobi identity broken at triple ({}, {}, {})",
                    a + 1,
                    b + 1,
                    c + 1
                )?,
                Violation::Reductivity { m_index, h_index } => writeln!(
                    f,
                    "  [m, h] escapes m at pair ({}, {})",
                    m_index + 1,
                    h_index + 1
                )?,
                Violation::IsotropySubalgebra { h1, h2 } => {
                    writeln!(f, "  [h, h] escapes h at pair ({}, {})", h1 + 1, h2 + 1)?
                }
                Violation::NaturallyReductive { u, v, w } => writeln!(
                    f,
                    "  naturally-reductive condition broken at triple ({}, {}, {})",
                    u + 1,
                    v + 1,
                    w + 1
                )?,
                Violation::AdInvariance { u, v, w } => writeln!(
                    f,
                    "  ad-invariance broken at triple ({}, {}, {})",
                    u + 1,
                    v + 1,
                    w + 1
                )?,
            }
        }
        Ok(())
    }
}

/// The seven-dimensional positively curved normal homogeneous space with
/// isotropy-irreducible tangent block: g = sp(2) on an orthonormal basis
/// Q1..Q10, tangent block m = span{Q1..Q7}, isotropy h = span{Q8,Q9,Q10}.
pub fn sp2_su2() -> AlgebraSpec {
    let r = Radical::rational;
    let s = Radical::surd;
    // √(3/2) = √6/2 and √(5/2) = √10/2.
    let pairs: Vec<((usize, usize), Vec<(usize, Radical)>)> = vec![
        ((1, 2), vec![(3, r(1, 1))]),
        ((1, 3), vec![(2, r(-1, 1))]),
        ((1, 4), vec![(5, r(-1, 1)), (10, s(-1, 1, 6))]),
        ((1, 5), vec![(4, r(1, 1)), (9, s(1, 1, 6))]),
        ((1, 6), vec![(7, r(-1, 1))]),
        ((1, 7), vec![(6, r(1, 1))]),
        ((1, 9), vec![(5, s(-1, 1, 6))]),
        ((1, 10), vec![(4, s(1, 1, 6))]),
        ((2, 3), vec![(1, r(1, 1)), (8, r(3, 1))]),
        ((2, 4), vec![(6, r(1, 1))]),
        ((2, 5), vec![(7, r(-1, 1))]),
        ((2, 6), vec![(4, r(-1, 1)), (9, s(1, 2, 6))]),
        ((2, 7), vec![(5, r(1, 1)), (10, s(-1, 2, 6))]),
        ((2, 8), vec![(3, r(-3, 1))]),
        ((2, 9), vec![(6, s(-1, 2, 6))]),
        ((2, 10), vec![(7, s(1, 2, 6))]),
        ((3, 4), vec![(7, r(1, 1))]),
        ((3, 5), vec![(6, r(1, 1))]),
        ((3, 6), vec![(5, r(-1, 1)), (10, s(1, 2, 6))]),
        ((3, 7), vec![(4, r(-1, 1)), (9, s(1, 2, 6))]),
        ((3, 8), vec![(2, r(3, 1))]),
        ((3, 9), vec![(7, s(-1, 2, 6))]),
        ((3, 10), vec![(6, s(-1, 2, 6))]),
        ((4, 5), vec![(1, r(-1, 1)), (8, r(1, 1))]),
        ((4, 6), vec![(2, r(1, 1)), (9, s(1, 2, 10))]),
        ((4, 7), vec![(3, r(1, 1)), (10, s(1, 2, 10))]),
        ((4, 8), vec![(5, r(-1, 1))]),
        ((4, 9), vec![(6, s(-1, 2, 10))]),
        ((4, 10), vec![(1, s(-1, 1, 6)), (7, s(-1, 2, 10))]),
        ((5, 6), vec![(3, r(1, 1)), (10, s(-1, 2, 10))]),
        ((5, 7), vec![(2, r(-1, 1)), (9, s(1, 2, 10))]),
        ((5, 8), vec![(4, r(1, 1))]),
        ((5, 9), vec![(1, s(1, 1, 6)), (7, s(-1, 2, 10))]),
        ((5, 10), vec![(6, s(1, 2, 10))]),
        ((6, 7), vec![(1, r(-1, 1)), (8, r(2, 1))]),
        ((6, 8), vec![(7, r(-2, 1))]),
        ((6, 9), vec![(2, s(1, 2, 6)), (4, s(1, 2, 10))]),
        ((6, 10), vec![(3, s(1, 2, 6)), (5, s(-1, 2, 10))]),
        ((7, 8), vec![(6, r(2, 1))]),
        ((7, 9), vec![(3, s(1, 2, 6)), (5, s(1, 2, 10))]),
        ((7, 10), vec![(2, s(-1, 2, 6)), (4, s(1, 2, 10))]),
        ((8, 9), vec![(10, r(1, 1))]),
        ((8, 10), vec![(9, r(-1, 1))]),
        ((9, 10), vec![(8, r(1, 1))]),
    ];
    let labels = (1..=10).map(|i| format!("Q{i}")).collect();
    AlgebraSpec::from_brackets("sp2_su2", 10, 7, true, Some(labels), pairs)
        .expect("static table")
}

/// su(2) with a bi-invariant metric: the round 3-sphere of constant curvature
/// 1/4 as a normal homogeneous space with trivial isotropy.
pub fn su2_biinv() -> AlgebraSpec {
    let r = Radical::rational;
    let pairs = vec![
        ((1, 2), vec![(3, r(1, 1))]),
        ((2, 3), vec![(1, r(1, 1))]),
        ((3, 1), vec![(2, r(1, 1))]),
    ];
    AlgebraSpec::from_brackets("su2_biinv", 3, 3, true, None, pairs).expect("static table")
}

/// Exact unit tangent vector from a rational parameter point: the inverse
/// stereographic image of y ∈ Q^(d−1),
///   x = ((1−‖y‖²), 2y₁, …, 2y_{d−1}) / (1+‖y‖²),
/// which satisfies Σ xᵢ² = 1 exactly.
pub fn rational_unit_direction(y: &[Rational]) -> Vec<Radical> {
    let norm_sq: Rational = y.iter().map(|q| q * q).sum();
    let denom = Rational::one() + norm_sq.clone();
    let mut out = Vec::with_capacity(y.len() + 1);
    out.push(Radical::from_rational(
        (Rational::one() - norm_sq) / denom.clone(),
    ));
    for q in y {
        out.push(Radical::from_rational(
            Rational::from_integer(2.into()) * q / denom.clone(),
        ));
    }
    out
}
