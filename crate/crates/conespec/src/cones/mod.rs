//! Cone descriptions and queries.
//!
//! A [`ConeSpec`] is a closed convex pointed cone living in a complex
//! coordinate space. Five shapes are supported:
//!
//! - the nonnegative orthant of R^n, viewed inside C^n;
//! - a polyhedral real cone, described by generators, facets, or both;
//! - the complexification P + iP of a real cone P;
//! - an invertible linear image T(K) of another cone;
//! - a section K ∩ X of a cone by a subspace, in local coordinates
//!   (constructed internally by the intersection machinery).
//!
//! Every membership-style query reduces to *margin rows*: real-linear
//! functionals x -> Re(w* x) that must be nonnegative (facet rows) or zero
//! (realness rows). The same rows drive phase-alignment arcs, interior
//! margins, violation measures, and probe scoring, so all queries agree with
//! each other by construction.

pub mod arcs;
pub mod hull;
pub mod lp;

mod align;
mod meets;
mod proper;

pub use align::{circle_align, AlignMode, Alignment};
pub use meets::{cone_meets_subspace, intersect_cone_with_subspace};
pub use proper::{find_proper_subcone, projectively_proper, DecompositionSpec, ProperSubcone};

use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::factor::{Cpqr, Lu};
use crate::linalg::schur::schur;
use crate::linalg::subspace::SubspaceBasis;
use crate::linalg::types::{c, CMatrix, CVector, C64};

/// How a phase constraint restricts z on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseShape {
    /// arg(z * value) must stay in the closed (or open) first quarter turn.
    Quarter,
    /// Re(z * value) must be nonnegative (or positive).
    Half,
}

/// One constraint on the phases z for which z*x can belong to a cone.
#[derive(Debug, Clone, Copy)]
pub struct PhaseConstraint {
    pub value: C64,
    pub shape: PhaseShape,
    /// Equality constraints pin Re(z * value) to exactly zero; they arise
    /// from realness requirements and are closed in every mode.
    pub equality: bool,
}

/// Margin functionals of a cone: x is a member when every inequality row has
/// Re(w* x) >= 0 and every equality row has Re(w* x) = 0. Rows have unit norm.
#[derive(Debug, Clone)]
pub struct MarginRows {
    pub ineq: Vec<CVector>,
    pub eq: Vec<CVector>,
}

/// Equality rows within this relative slack count as satisfied when scoring
/// interiors. Matches the default cone-membership tolerance, so the two
/// notions agree at default settings.
const REALNESS_GATE_REL: f64 = 1e-9;

impl MarginRows {
    /// Signed interior score, taken *relative* to the equality rows: once the
    /// equalities hold to within `REALNESS_GATE_REL` times the vector norm,
    /// the score is the smallest inequality margin (positive strictly inside
    /// the cone's relative interior). Away from the equality wall, the score
    /// is negative by at least the equality violation. Continuous on the
    /// equality wall and on either side of the gate.
    pub fn score(&self, x: &CVector) -> f64 {
        let mut ineq_min = f64::INFINITY;
        for w in &self.ineq {
            ineq_min = ineq_min.min(w.dot(x).re);
        }
        let mut eqv = 0.0f64;
        for w in &self.eq {
            eqv = eqv.max(w.dot(x).re.abs());
        }
        let gate = REALNESS_GATE_REL * x.norm().max(1.0);
        if ineq_min == f64::INFINITY {
            ineq_min = 0.0;
        }
        if eqv <= gate {
            ineq_min
        } else {
            ineq_min.min(-eqv)
        }
    }

    /// Nonnegative violation measure: 0 on the cone, growing continuously
    /// with distance-like units outside it.
    pub fn violation(&self, x: &CVector) -> f64 {
        let mut v = 0.0f64;
        for w in &self.ineq {
            v = v.max(-w.dot(x).re);
        }
        for w in &self.eq {
            v = v.max(w.dot(x).re.abs());
        }
        v.max(0.0)
    }
}

#[derive(Debug, Clone)]
enum ConeKind {
    Orthant,
    Polyhedral {
        generators: Option<Vec<Vec<f64>>>,
        facets: Option<Vec<Vec<f64>>>,
    },
    Complexified {
        base: Box<ConeSpec>,
        /// Facet rows of the base, resolved once at construction.
        base_facets: Vec<Vec<f64>>,
    },
    Transformed {
        transform: CMatrix,
        inverse: CMatrix,
        cond: f64,
        base: Box<ConeSpec>,
    },
    Section {
        ambient: Box<ConeSpec>,
        basis: SubspaceBasis,
        local_generators: Vec<CVector>,
        rows: MarginRows,
        solid: bool,
    },
}

/// A closed convex pointed cone with query support. See the module docs.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    dim: usize,
    kind: ConeKind,
}

fn check_real_rows(rows: &[Vec<f64>], dim: usize, what: &str) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidSpec(format!("{what}: empty list")));
    }
    for r in rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{what}: row of length {} in dimension {dim}",
                r.len()
            )));
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("{what}: non-finite entry")));
        }
    }
    Ok(())
}

fn unit_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter()
        .filter_map(|r| {
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n == 0.0 {
                None
            } else {
                Some(r.iter().map(|x| x / n).collect())
            }
        })
        .collect()
}

fn real_rank(rows: &[Vec<f64>], tol_rel: f64) -> Result<usize> {
    let m = CMatrix::from_real_rows(rows)?;
    let qr = Cpqr::factor(&m);
    Ok(qr.rank(tol_rel * m.norm_fro().max(f64::MIN_POSITIVE)))
}

impl ConeSpec {
    /// The nonnegative orthant of R^n inside C^n.
    pub fn orthant(n: usize) -> Result<ConeSpec> {
        if n == 0 {
            return Err(Error::InvalidSpec("orthant dimension must be positive".into()));
        }
        Ok(ConeSpec { dim: n, kind: ConeKind::Orthant })
    }

    /// A pointed solid polyhedral cone in R^dim from generators, facets, or
    /// both. The missing description is derived when dim <= 4; pointedness
    /// and solidity are always verified.
    pub fn polyhedral(
        dim: usize,
        generators: Option<Vec<Vec<f64>>>,
        facets: Option<Vec<Vec<f64>>>,
        tol: &ToleranceProfile,
    ) -> Result<ConeSpec> {
        if dim == 0 {
            return Err(Error::InvalidSpec("polyhedral dimension must be positive".into()));
        }
        let mut generators = generators;
        let mut facets = facets;
        if let Some(g) = &generators {
            check_real_rows(g, dim, "generators")?;
        }
        if let Some(h) = &facets {
            check_real_rows(h, dim, "facets")?;
        }
        match (&generators, &facets) {
            (None, None) => {
                return Err(Error::InvalidSpec(
                    "polyhedral cone needs generators or facets".into(),
                ))
            }
            (Some(g), None) => {
                let g = unit_rows(g);
                if g.is_empty() {
                    return Err(Error::InvalidSpec("all generators are zero".into()));
                }
                if dim <= hull::MAX_CONVERSION_DIM {
                    facets = Some(hull::facets_from_generators(&g, dim)?);
                }
                generators = Some(g);
            }
            (None, Some(h)) => {
                let h = unit_rows(h);
                if h.is_empty() {
                    return Err(Error::InvalidSpec("all facets are zero".into()));
                }
                if dim <= hull::MAX_CONVERSION_DIM {
                    generators = Some(hull::generators_from_facets(&h, dim)?);
                }
                facets = Some(h);
            }
            (Some(g), Some(h)) => {
                generators = Some(unit_rows(g));
                facets = Some(unit_rows(h));
            }
        }
        // cross-validate whatever pair is present
        if let (Some(g), Some(h)) = (&generators, &facets) {
            for (i, gen) in g.iter().enumerate() {
                for (j, fac) in h.iter().enumerate() {
                    let m: f64 = gen.iter().zip(fac).map(|(a, b)| a * b).sum();
                    if m < -1e-9 {
                        return Err(Error::InvalidSpec(format!(
                            "generator {i} violates facet {j} by {:.3e}",
                            -m
                        )));
                    }
                }
            }
        }
        // pointedness and solidity
        if let Some(g) = &generators {
            if !lp::lp_pointed(g, tol.tol_lp)? {
                return Err(Error::NotPointed("generators span a line".into()));
            }
            if real_rank(g, tol.tol_rank_rel)? < dim {
                return Err(Error::NotSolid("generators do not span the space".into()));
            }
        } else if let Some(h) = &facets {
            // facet-only description in high dimension
            if real_rank(h, tol.tol_rank_rel)? < dim {
                return Err(Error::NotPointed(
                    "facet normals do not span the space, so the cone contains a line".into(),
                ));
            }
            // solid iff some x has h x >= 1 for every facet
            let m = h.len();
            let mut a = vec![vec![0.0; dim + m]; m];
            for (r, row) in h.iter().enumerate() {
                a[r][..dim].copy_from_slice(row);
                a[r][dim + r] = -1.0;
            }
            let mut nonneg = vec![false; dim];
            nonneg.extend(vec![true; m]);
            let sol = lp::lp_feasible(&a, &vec![1.0; m], &nonneg, tol.tol_lp)?;
            if !sol.feasible {
                return Err(Error::NotSolid("facet system admits no interior point".into()));
            }
        }
        Ok(ConeSpec { dim, kind: ConeKind::Polyhedral { generators, facets } })
    }

    /// The complexification base + i*base of a real cone, inside C^n. The
    /// base must expose facet rows, which become quadrant constraints.
    pub fn complexified(base: ConeSpec) -> Result<ConeSpec> {
        if !base.is_real() {
            return Err(Error::InvalidSpec(
                "only real cones can be complexified".into(),
            ));
        }
        let base_facets = base.real_facets()?;
        Ok(ConeSpec {
            dim: base.dim,
            kind: ConeKind::Complexified { base: Box::new(base), base_facets },
        })
    }

    /// The image T(base) under an invertible map with condition number at
    /// most `tol.cond_cap`.
    pub fn transformed(transform: CMatrix, base: ConeSpec, tol: &ToleranceProfile) -> Result<ConeSpec> {
        if !transform.is_square() || transform.nrows() != base.dim {
            return Err(Error::DimensionMismatch("transform shape".into()));
        }
        let cond = condition_number(&transform)?;
        if !cond.is_finite() || cond > tol.cond_cap {
            return Err(Error::IllConditioned { cond, cap: tol.cond_cap });
        }
        let inverse = Lu::factor(&transform)?.inverse()?;
        Ok(ConeSpec {
            dim: base.dim,
            kind: ConeKind::Transformed { transform, inverse, cond, base: Box::new(base) },
        })
    }

    /// A section K ∩ span(basis) in local coordinates, with generators found
    /// by the intersection machinery. Crate-internal: use
    /// [`intersect_cone_with_subspace`].
    pub(crate) fn section(
        ambient: ConeSpec,
        basis: SubspaceBasis,
        local_generators: Vec<CVector>,
        tol: &ToleranceProfile,
    ) -> Result<ConeSpec> {
        if basis.ambient_dim() != ambient.dim {
            return Err(Error::DimensionMismatch("section basis".into()));
        }
        let d1 = basis.dim();
        if d1 == 0 {
            return Err(Error::InvalidSpec("section by the zero subspace".into()));
        }
        for (i, g) in local_generators.iter().enumerate() {
            if g.dim() != d1 {
                return Err(Error::DimensionMismatch("section generator length".into()));
            }
            let emb = basis.embed(g)?;
            let scale = emb.norm().max(1.0);
            if ambient.violation(&emb)? > tol.tol_cone(scale) * 10.0 {
                return Err(Error::InvalidSpec(format!(
                    "section generator {i} is not an ambient cone member"
                )));
            }
        }
        // restrict the ambient margin rows to the subspace
        let ambient_rows = ambient.margin_rows()?;
        let bmat = basis.as_matrix();
        let restrict = |w: &CVector| -> Option<CVector> {
            let wl = bmat.adjoint().matvec(w);
            let n = wl.norm();
            if n <= 1e-12 {
                None // the facet vanishes identically on the subspace
            } else {
                Some(wl.scale(c(1.0 / n, 0.0)))
            }
        };
        let rows = MarginRows {
            ineq: ambient_rows.ineq.iter().filter_map(restrict).collect(),
            eq: ambient_rows.eq.iter().filter_map(restrict).collect(),
        };
        // solid within the complex subspace iff the realified generators
        // span all 2*d1 real dimensions
        let realified: Vec<Vec<f64>> =
            local_generators.iter().map(|g| g.realified()).collect();
        let solid = !realified.is_empty()
            && real_rank(&realified, tol.tol_rank_rel)? == 2 * d1;
        Ok(ConeSpec {
            dim: d1,
            kind: ConeKind::Section {
                ambient: Box::new(ambient),
                basis,
                local_generators,
                rows,
                solid,
            },
        })
    }

    /// Dimension of the coordinate space the cone's members live in
    /// (the local dimension for sections).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            ConeKind::Orthant => "orthant",
            ConeKind::Polyhedral { .. } => "polyhedral",
            ConeKind::Complexified { .. } => "complexified",
            ConeKind::Transformed { .. } => "transformed",
            ConeKind::Section { .. } => "section",
        }
    }

    /// Whether the cone is contained in the real subspace R^n.
    pub fn is_real(&self) -> bool {
        match &self.kind {
            ConeKind::Orthant | ConeKind::Polyhedral { .. } => true,
            ConeKind::Complexified { .. } => false,
            ConeKind::Transformed { transform, base, .. } => {
                transform.max_imag() == 0.0 && base.is_real()
            }
            ConeKind::Section { ambient, basis, .. } => {
                ambient.is_real() && basis.vectors().iter().all(|v| v.max_imag() == 0.0)
            }
        }
    }

    /// For sections: whether the cone is solid within its subspace.
    /// Non-section cones are solid by construction.
    pub fn is_solid(&self) -> bool {
        match &self.kind {
            ConeKind::Section { solid, .. } => *solid,
            _ => true,
        }
    }

    /// For complexified cones: the underlying real cone.
    pub fn complexified_base(&self) -> Option<&ConeSpec> {
        match &self.kind {
            ConeKind::Complexified { base, .. } => Some(base),
            _ => None,
        }
    }

    /// For image cones T(K): the transform, its inverse, and the base cone.
    pub fn transformed_parts(&self) -> Option<(&CMatrix, &CMatrix, &ConeSpec)> {
        match &self.kind {
            ConeKind::Transformed { transform, inverse, base, .. } => {
                Some((transform, inverse, base))
            }
            _ => None,
        }
    }

    /// Condition number of the coordinate representation: how much membership
    /// margins can be distorted relative to the canonical description. 1 for
    /// cones described directly; the transform's condition number (times the
    /// base's own) for image cones.
    pub fn representation_condition(&self) -> f64 {
        match &self.kind {
            ConeKind::Transformed { cond, base, .. } => cond * base.representation_condition(),
            _ => 1.0,
        }
    }

    /// For sections: the subspace basis into the ambient space.
    pub fn section_basis(&self) -> Option<&SubspaceBasis> {
        match &self.kind {
            ConeKind::Section { basis, .. } => Some(basis),
            _ => None,
        }
    }

    /// For sections: the ambient cone.
    pub fn section_ambient(&self) -> Option<&ConeSpec> {
        match &self.kind {
            ConeKind::Section { ambient, .. } => Some(ambient),
            _ => None,
        }
    }

    /// Facet rows of a real cone, as real vectors. Errors on complex cones
    /// and on facet-less high-dimensional descriptions.
    pub fn real_facets(&self) -> Result<Vec<Vec<f64>>> {
        match &self.kind {
            ConeKind::Orthant => Ok((0..self.dim)
                .map(|i| {
                    let mut r = vec![0.0; self.dim];
                    r[i] = 1.0;
                    r
                })
                .collect()),
            ConeKind::Polyhedral { facets, .. } => facets.clone().ok_or_else(|| {
                Error::RepresentationMissing(
                    "polyhedral cone above dimension 4 carries no facet description".into(),
                )
            }),
            ConeKind::Transformed { inverse, base, transform, .. } => {
                if transform.max_imag() != 0.0 {
                    return Err(Error::RepresentationMissing(
                        "facet rows of a complex-transformed cone are not real".into(),
                    ));
                }
                let rows = base.real_facets()?;
                // h(T^{-1} x) >= 0: new row = h T^{-1}
                Ok(unit_rows(
                    &rows
                        .iter()
                        .map(|h| {
                            (0..self.dim)
                                .map(|j| {
                                    (0..self.dim)
                                        .map(|k| h[k] * inverse[(k, j)].re)
                                        .sum::<f64>()
                                })
                                .collect::<Vec<f64>>()
                        })
                        .collect::<Vec<_>>(),
                ))
            }
            ConeKind::Complexified { .. } | ConeKind::Section { .. } => Err(
                Error::RepresentationMissing("real facets of a non-real cone".into()),
            ),
        }
    }

    /// Generator rays of a real cone, as real vectors.
    pub fn real_generators(&self) -> Result<Vec<Vec<f64>>> {
        match &self.kind {
            ConeKind::Orthant => Ok((0..self.dim)
                .map(|i| {
                    let mut r = vec![0.0; self.dim];
                    r[i] = 1.0;
                    r
                })
                .collect()),
            ConeKind::Polyhedral { generators, .. } => generators.clone().ok_or_else(|| {
                Error::RepresentationMissing(
                    "polyhedral cone above dimension 4 carries no generator description".into(),
                )
            }),
            ConeKind::Transformed { transform, base, .. } => {
                if transform.max_imag() != 0.0 {
                    return Err(Error::RepresentationMissing(
                        "generators of a complex-transformed cone are not real".into(),
                    ));
                }
                let gens = base.real_generators()?;
                Ok(unit_rows(
                    &gens
                        .iter()
                        .map(|g| {
                            (0..self.dim)
                                .map(|i| {
                                    (0..self.dim)
                                        .map(|k| transform[(i, k)].re * g[k])
                                        .sum::<f64>()
                                })
                                .collect::<Vec<f64>>()
                        })
                        .collect::<Vec<_>>(),
                ))
            }
            ConeKind::Complexified { .. } | ConeKind::Section { .. } => Err(
                Error::RepresentationMissing("real generators of a non-real cone".into()),
            ),
        }
    }

    /// Vectors whose nonnegative REAL combinations fill the cone. For a
    /// complexified cone these are the base generators and their i-multiples.
    pub fn real_conic_generators(&self) -> Result<Vec<CVector>> {
        match &self.kind {
            ConeKind::Orthant | ConeKind::Polyhedral { .. } => Ok(self
                .real_generators()?
                .iter()
                .map(|g| CVector::from_real(g))
                .collect::<Result<Vec<_>>>()?),
            ConeKind::Complexified { base, .. } => {
                let gens = base.real_generators()?;
                let mut out = Vec::with_capacity(2 * gens.len());
                for g in &gens {
                    out.push(CVector::from_real(g)?);
                }
                for g in &gens {
                    out.push(CVector::from_real(g)?.scale(c(0.0, 1.0)));
                }
                Ok(out)
            }
            ConeKind::Transformed { transform, base, .. } => Ok(base
                .real_conic_generators()?
                .iter()
                .map(|g| transform.matvec(g).normalized())
                .collect()),
            ConeKind::Section { local_generators, .. } => Ok(local_generators.clone()),
        }
    }

    /// The margin functionals defining the cone. See [`MarginRows`].
    pub fn margin_rows(&self) -> Result<MarginRows> {
        match &self.kind {
            ConeKind::Orthant | ConeKind::Polyhedral { .. } => {
                let facets = self.real_facets()?;
                let ineq = facets
                    .iter()
                    .map(|h| CVector::from_real(h))
                    .collect::<Result<Vec<_>>>()?;
                let eq = (0..self.dim)
                    .map(|k| CVector::basis(self.dim, k).scale(c(0.0, 1.0)))
                    .collect();
                Ok(MarginRows { ineq, eq })
            }
            ConeKind::Complexified { base_facets, .. } => {
                let mut ineq = Vec::with_capacity(2 * base_facets.len());
                for h in base_facets {
                    let w = CVector::from_real(h)?;
                    ineq.push(w.clone());
                    // Re((i h)* x) = Im(h^T x) >= 0
                    ineq.push(w.scale(c(0.0, 1.0)));
                }
                Ok(MarginRows { ineq, eq: Vec::new() })
            }
            ConeKind::Transformed { inverse, base, .. } => {
                let rows = base.margin_rows()?;
                let invh = inverse.adjoint();
                let push = |w: &CVector| invh.matvec(w).normalized();
                Ok(MarginRows {
                    ineq: rows.ineq.iter().map(push).collect(),
                    eq: rows.eq.iter().map(push).collect(),
                })
            }
            ConeKind::Section { rows, .. } => Ok(rows.clone()),
        }
    }

    /// Nonnegative violation of membership; zero exactly on the cone (up to
    /// the chosen representation's conditioning).
    pub fn violation(&self, x: &CVector) -> Result<f64> {
        self.expect_dim(x)?;
        Ok(self.margin_rows()?.violation(x))
    }

    /// Signed interior margin: positive strictly inside. For real cones the
    /// interior is taken relative to R^n (a complex-perturbed point scores
    /// negative); solid complex cones use the genuine interior. Non-solid
    /// sections score negative infinity.
    pub fn margin_score(&self, x: &CVector) -> Result<f64> {
        self.expect_dim(x)?;
        if let ConeKind::Section { solid, .. } = &self.kind {
            if !solid {
                // relative interior never registers as solid-interior
                return Ok(f64::NEG_INFINITY);
            }
        }
        Ok(self.margin_rows()?.score(x))
    }

    /// Membership within absolute tolerance `tol_abs`. Falls back to a
    /// generator LP when no facet description exists.
    pub fn member(&self, x: &CVector, tol_abs: f64) -> Result<bool> {
        self.expect_dim(x)?;
        match self.violation(x) {
            Ok(v) => Ok(v <= tol_abs),
            Err(Error::RepresentationMissing(_)) => self.member_by_generators(x, tol_abs),
            Err(e) => Err(e),
        }
    }

    /// Strict interior membership with margin `tol_abs`.
    pub fn interior_member(&self, x: &CVector, tol_abs: f64) -> Result<bool> {
        Ok(self.margin_score(x)? > tol_abs)
    }

    fn member_by_generators(&self, x: &CVector, tol_abs: f64) -> Result<bool> {
        let gens = self.real_conic_generators()?;
        let m = gens.len();
        let xr = x.realified();
        let d = xr.len();
        let mut a = vec![vec![0.0; m]; d];
        for (k, g) in gens.iter().enumerate() {
            let gr = g.realified();
            for r in 0..d {
                a[r][k] = gr[r];
            }
        }
        let sol = lp::lp_feasible(&a, &xr, &vec![true; m], tol_abs.max(1e-12))?;
        Ok(sol.feasible)
    }

    fn expect_dim(&self, x: &CVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of dimension {} against cone of dimension {}",
                x.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Constraints on phases z such that z*x lies in the cone (closed mode)
    /// or its interior (open mode, decided by the consumer).
    pub fn alignment_constraints(&self, x: &CVector) -> Result<Vec<PhaseConstraint>> {
        self.expect_dim(x)?;
        match &self.kind {
            ConeKind::Orthant | ConeKind::Polyhedral { .. } => {
                let mut out = Vec::new();
                // realness: Im(z x_k) = 0 <=> Re(z * (-i x_k)) = 0
                for k in 0..self.dim {
                    out.push(PhaseConstraint {
                        value: x[k] * c(0.0, -1.0),
                        shape: PhaseShape::Half,
                        equality: true,
                    });
                }
                for h in self.real_facets()? {
                    let mut v = C64::ZERO;
                    for (k, hk) in h.iter().enumerate() {
                        v += c(*hk, 0.0) * x[k];
                    }
                    out.push(PhaseConstraint {
                        value: v,
                        shape: PhaseShape::Half,
                        equality: false,
                    });
                }
                Ok(out)
            }
            ConeKind::Complexified { base_facets, .. } => Ok(base_facets
                .iter()
                .map(|h| {
                    let mut v = C64::ZERO;
                    for (k, hk) in h.iter().enumerate() {
                        v += c(*hk, 0.0) * x[k];
                    }
                    PhaseConstraint { value: v, shape: PhaseShape::Quarter, equality: false }
                })
                .collect()),
            ConeKind::Transformed { inverse, base, .. } => {
                base.alignment_constraints(&inverse.matvec(x))
            }
            ConeKind::Section { rows, .. } => {
                let mut out = Vec::new();
                for w in &rows.ineq {
                    out.push(PhaseConstraint {
                        value: w.dot(x),
                        shape: PhaseShape::Half,
                        equality: false,
                    });
                }
                for w in &rows.eq {
                    out.push(PhaseConstraint {
                        value: w.dot(x),
                        shape: PhaseShape::Half,
                        equality: true,
                    });
                }
                Ok(out)
            }
        }
    }
}

/// 2-norm condition number via the singular values of T (eigenvalues of
/// T* T, which is Hermitian, so the Schur form is reliable).
fn condition_number(t: &CMatrix) -> Result<f64> {
    let gram = t.adjoint().matmul(t);
    let eigs = schur(&gram)?.eigenvalues();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for e in eigs {
        let v = e.re.max(0.0);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((hi / lo).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ToleranceProfile;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default_profile()
    }

    fn cv(res: &[f64]) -> CVector {
        CVector::from_real(res).unwrap()
    }

    #[test]
    fn orthant_membership_and_interior() {
        let k = ConeSpec::orthant(3).unwrap();
        assert!(k.member(&cv(&[1.0, 0.0, 2.0]), 1e-12).unwrap());
        assert!(!k.member(&cv(&[1.0, -0.1, 2.0]), 1e-9).unwrap());
        assert!(k.interior_member(&cv(&[1.0, 0.5, 2.0]), 1e-9).unwrap());
        assert!(!k.interior_member(&cv(&[1.0, 0.0, 2.0]), 1e-9).unwrap());
        // complex perturbation breaks realness
        let mut z = cv(&[1.0, 1.0, 1.0]);
        z = z.axpy(c(0.0, 0.5), &CVector::basis(3, 0));
        assert!(!k.member(&z, 1e-9).unwrap());
        assert!((k.violation(&z).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn polyhedral_wedge_round_trip() {
        let k = ConeSpec::polyhedral(
            2,
            Some(vec![vec![1.0, 0.0], vec![1.0, 1.0]]),
            None,
            &tol(),
        )
        .unwrap();
        assert!(k.member(&cv(&[2.0, 1.0]), 1e-10).unwrap());
        assert!(!k.member(&cv(&[-1.0, 0.0]), 1e-10).unwrap());
        assert!(!k.member(&cv(&[0.0, 1.0]), 1e-10).unwrap()); // above the wedge
        assert!(k.interior_member(&cv(&[1.0, 0.5]), 1e-6).unwrap());
        assert!(!k.interior_member(&cv(&[1.0, 1.0]), 1e-6).unwrap());
        let facets = k.real_facets().unwrap();
        assert_eq!(facets.len(), 2);
    }

    #[test]
    fn polyhedral_from_facets_derives_generators() {
        let k = ConeSpec::polyhedral(
            2,
            None,
            Some(vec![vec![0.0, 1.0], vec![1.0, -1.0]]),
            &tol(),
        )
        .unwrap();
        let gens = k.real_generators().unwrap();
        assert_eq!(gens.len(), 2);
        for g in &gens {
            assert!(k.member(&cv(g), 1e-9).unwrap());
        }
    }

    #[test]
    fn degenerate_polyhedral_rejected() {
        // a line is not pointed
        assert!(matches!(
            ConeSpec::polyhedral(
                2,
                Some(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]),
                None,
                &tol()
            ),
            Err(Error::NotPointed(_))
        ));
        // a single ray in R^2 is not solid
        assert!(matches!(
            ConeSpec::polyhedral(2, Some(vec![vec![1.0, 1.0]]), None, &tol()),
            Err(Error::NotSolid(_))
        ));
    }

    #[test]
    fn complexified_membership_quadrants() {
        let k = ConeSpec::complexified(ConeSpec::orthant(2).unwrap()).unwrap();
        // u + iv with u, v in the orthant
        let m = CVector::new(vec![c(1.0, 2.0), c(0.5, 0.0)]).unwrap();
        assert!(k.member(&m, 1e-12).unwrap());
        assert!(k.interior_member(&CVector::new(vec![c(1.0, 2.0), c(0.5, 1.0)]).unwrap(), 1e-6).unwrap());
        // negative imaginary part on a coordinate leaves the cone
        let out = CVector::new(vec![c(1.0, -0.3), c(0.5, 0.0)]).unwrap();
        assert!(!k.member(&out, 1e-9).unwrap());
        assert!((k.violation(&out).unwrap() - 0.3).abs() < 1e-12);
        // generators: e_k and i e_k
        let gens = k.real_conic_generators().unwrap();
        assert_eq!(gens.len(), 4);
        for g in &gens {
            assert!(k.member(g, 1e-12).unwrap());
        }
    }

    #[test]
    fn transformed_cone_tracks_base_through_the_map() {
        let t2 = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let k = ConeSpec::transformed(t2.clone(), ConeSpec::orthant(2).unwrap(), &tol()).unwrap();
        // T e1 = (1,0), T e2 = (1,1)
        assert!(k.member(&cv(&[1.0, 0.0]), 1e-10).unwrap());
        assert!(k.member(&cv(&[1.0, 1.0]), 1e-10).unwrap());
        assert!(k.member(&cv(&[2.0, 1.0]), 1e-10).unwrap());
        assert!(!k.member(&cv(&[0.0, 1.0]), 1e-9).unwrap());
        assert!(k.interior_member(&cv(&[2.0, 1.0]), 1e-8).unwrap());
        let f = k.real_facets().unwrap();
        assert_eq!(f.len(), 2);
        let g = k.real_generators().unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn ill_conditioned_transform_rejected() {
        let t2 = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 1e-12]]).unwrap();
        assert!(matches!(
            ConeSpec::transformed(t2, ConeSpec::orthant(2).unwrap(), &tol()),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn margin_score_sign_structure() {
        let k = ConeSpec::orthant(2).unwrap();
        assert!(k.margin_score(&cv(&[1.0, 1.0])).unwrap() > 0.9);
        assert!(k.margin_score(&cv(&[1.0, 0.0])).unwrap().abs() < 1e-12);
        assert!(k.margin_score(&cv(&[1.0, -0.5])).unwrap() < -0.4);
    }

    #[test]
    fn alignment_constraints_shapes() {
        let real = ConeSpec::orthant(2).unwrap();
        let x = CVector::new(vec![c(0.0, 1.0), c(0.0, 2.0)]).unwrap(); // i * positive vector
        let cs = real.alignment_constraints(&x).unwrap();
        assert_eq!(cs.len(), 4); // 2 realness + 2 facets
        assert_eq!(cs.iter().filter(|p| p.equality).count(), 2);
        let cx = ConeSpec::complexified(ConeSpec::orthant(2).unwrap()).unwrap();
        let cs2 = cx.alignment_constraints(&x).unwrap();
        assert!(cs2.iter().all(|p| p.shape == PhaseShape::Quarter && !p.equality));
    }
}
