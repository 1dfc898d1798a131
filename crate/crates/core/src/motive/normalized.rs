use std::collections::{BTreeMap, BTreeSet};

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::spec::{AbelianBlockDecl, BakerDecl, BlockCoords, EndoAction, FieldElem, LiftDecl, MotiveSpec};
use crate::arith::linalg::{self, QMat, QVec};
use crate::arith::{AlgebraicNumber, NumRepr};
use crate::error::{Error, Result};

/// Multiplication by θ on power-basis coordinates of `E(B)`.
#[derive(Clone, Debug)]
pub struct BlockField {
    pub degree: usize,
    pub theta: Option<AlgebraicNumber>,
    /// Monic minimal polynomial of θ, ascending, without the leading 1.
    pub minpoly_tail: QVec,
    declared: bool,
}

impl BlockField {
    fn rational() -> Self {
        BlockField { degree: 1, theta: None, minpoly_tail: vec![Rational::new()], declared: true }
    }

    fn undeclared() -> Self {
        BlockField { declared: false, ..BlockField::rational() }
    }

    fn from_theta(theta: &AlgebraicNumber) -> Self {
        let mp = theta.minpoly();
        let d = mp.len() - 1;
        let den = theta.denominator();
        let lead = Rational::from(&mp[d] * Integer::from(den.pow(d as u32)));
        let tail = (0..d).map(|k| Rational::from(&mp[k] * Integer::from(den.pow(k as u32))) / &lead).collect();
        BlockField { degree: d, theta: Some(theta.clone()), minpoly_tail: tail, declared: true }
    }

    pub fn is_declared(&self) -> bool {
        self.declared
    }

    /// θ·x for one element given by its `degree` coordinates.
    pub fn times_theta(&self, x: &[Rational]) -> QVec {
        let d = self.degree;
        let top = x[d - 1].clone();
        let mut out = vec![Rational::new(); d];
        out[1..d].clone_from_slice(&x[..d - 1]);
        for (o, c) in out.iter_mut().zip(&self.minpoly_tail) {
            *o -= Rational::from(&top * c);
        }
        out
    }

    /// θ applied to every consecutive `degree`-chunk of `v`.
    pub fn times_theta_vec(&self, v: &[Rational]) -> QVec {
        v.chunks(self.degree).flat_map(|c| self.times_theta(c)).collect()
    }

    /// A ℚ-basis of the `E`-span of `rows`.
    pub fn span_basis(&self, rows: &[QVec]) -> QMat {
        let mut all = vec![];
        for r in rows {
            let mut v = r.clone();
            for _ in 0..self.degree {
                let next = self.times_theta_vec(&v);
                all.push(v);
                v = next;
            }
        }
        linalg::rref(&all).0
    }

    /// Dimension over `E` of the span of `rows`.
    pub fn e_rank(&self, rows: &[QVec]) -> usize {
        self.span_basis(rows).len() / self.degree
    }

    /// Is the ℚ-span of `rows` stable under θ?
    pub fn is_stable(&self, rows: &[QVec]) -> bool {
        linalg::rank(&rows.to_vec()) == self.span_basis(rows).len()
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        self.degree == 2 && {
            let (c, b) = (&self.minpoly_tail[0], &self.minpoly_tail[1]);
            Rational::from(b * b) < Rational::from(c * 4u32)
        }
    }
}

/// A validated block with its position inside the concatenated coordinates.
#[derive(Clone, Debug)]
pub struct BlockInfo {
    pub decl: AbelianBlockDecl,
    pub field: BlockField,
    pub offset: usize,
}

impl BlockInfo {
    pub fn copies(&self) -> usize {
        self.decl.multiplicity as usize
    }

    /// Width of one copy: `basis_size` elements of `E(B)`.
    pub fn row_width(&self) -> usize {
        self.decl.basis_size as usize * self.field.degree
    }

    pub fn width(&self) -> usize {
        self.copies() * self.row_width()
    }

    /// The per-copy rows of this block inside a full coordinate vector.
    pub fn copy_rows(&self, v: &[Rational]) -> Vec<QVec> {
        let w = self.row_width();
        (0..self.copies()).map(|c| v[self.offset + c * w..self.offset + (c + 1) * w].to_vec()).collect()
    }

    fn all_copy_rows(&self, images: &QMat) -> Vec<QVec> {
        images.iter().flat_map(|v| self.copy_rows(v)).collect()
    }

    /// ℚ-dimension of `End(B^n)` acting on the block.
    pub fn end_dim(&self) -> usize {
        self.copies() * self.copies() * self.field.degree
    }
}

/// Three-valued saturation status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationStatus {
    Saturated,
    NotSaturated,
    /// Ranks are stable but lift data for a non-trivial `E(B)` is missing.
    Unknown,
}

/// A validated motive with its structure-map kernels and chosen splittings.
#[derive(Clone, Debug)]
pub struct NormalizedMotive {
    pub spec: MotiveSpec,
    pub blocks: Vec<BlockInfo>,
    /// Row `j`: concatenated coordinates of the image of the `j`-th generator of `L`.
    pub lattice_images: QMat,
    /// Row `k`: coordinates of the image of the `k`-th character of `T`.
    pub torus_images: QMat,
    /// Basis of `L′ = ker(L → A)` in `ℚ^r`.
    pub lattice_kernel: QMat,
    /// Basis of `X(T″) = ker(X(T) → A^∨)` in `ℚ^t`.
    pub torus_kernel: QMat,
    pub lattice_complement: QMat,
    pub torus_complement: QMat,
    pub lattice_action: Option<QMat>,
    pub torus_action: Option<QMat>,
}

/// Ranks (and data) of the Baker summand `[L′→T] ⊕ [L→T″]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BakerPart {
    pub lattice_rank: usize,
    pub torus_rank: usize,
    pub lattice_kernel_rank: usize,
    pub torus_kernel_rank: usize,
    pub baker: Option<BakerDecl>,
}

impl BakerPart {
    pub fn is_zero(&self) -> bool {
        self.lattice_kernel_rank == 0 && self.torus_kernel_rank == 0
    }

    /// Number of pairings in `L′⊗X(T) + L⊗X(T″)`: the largest possible rank.
    pub fn pairing_bound(&self) -> usize {
        let (r1, t2) = (self.lattice_kernel_rank, self.torus_kernel_rank);
        r1 * self.torus_rank + self.lattice_rank * t2 - r1 * t2
    }
}

/// Rank data of the saturation `M̃ = M₀ × M₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationRanks {
    /// `dim_ℚ End(A)`.
    pub end_dim: usize,
    /// `dim_ℚ End(A)·L`.
    pub lattice_sat_dim: usize,
    /// `dim_ℚ X(T)·End(A)`.
    pub torus_sat_dim: usize,
    /// Rank of the Baker factor's lattice, `dim End(A)·r − dim L_sat`.
    pub kernel_bound: usize,
}

/// Result of saturating a reduced motive.
#[derive(Clone, Debug)]
pub struct Saturation {
    pub baker: SaturationRanks,
    pub saturated: NormalizedMotive,
}

fn shape(msg: impl Into<String>) -> Error {
    Error::ShapeMismatch(msg.into())
}

fn q_matrix(rows: &[Vec<NumRepr>], n: usize, what: &str) -> Result<QMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(shape(format!("endo_action.{what} must be {n}×{n}")));
    }
    rows.iter().map(|r| r.iter().map(NumRepr::to_rational).collect()).collect()
}

fn parse_block(decl: &AbelianBlockDecl, offset: usize) -> Result<BlockInfo> {
    let id = &decl.id;
    if decl.genus == 0 || decl.endo_dim == 0 || decl.multiplicity == 0 {
        return Err(Error::InvariantViolation(format!(
            "block {id}: genus, endo_dim and multiplicity must be positive"
        )));
    }
    if decl.curve.is_some() && decl.genus != 1 {
        return Err(Error::InvariantViolation(format!("block {id}: a curve needs genus 1")));
    }
    if !(4 * decl.genus * decl.genus).is_multiple_of(decl.endo_dim) {
        return Err(Error::InvariantViolation(format!("block {id}: endo_dim must divide 4g²")));
    }
    if decl.genus == 1 && decl.endo_dim > 2 {
        return Err(Error::InvariantViolation(format!("block {id}: elliptic endo_dim must be 1 or 2")));
    }
    let field = match &decl.endo_field {
        Some(theta) => {
            let f = BlockField::from_theta(theta);
            if f.degree != decl.endo_dim as usize {
                return Err(Error::FieldMismatch(format!(
                    "block {id}: endo_field has degree {} but endo_dim is {}",
                    f.degree, decl.endo_dim
                )));
            }
            if decl.genus == 1 && f.degree == 2 && !f.is_imaginary_quadratic() {
                return Err(Error::FieldMismatch(format!("block {id}: CM field must be imaginary quadratic")));
            }
            f
        }
        None if decl.endo_dim == 1 => BlockField::rational(),
        None if decl.genus == 1 => {
            return Err(Error::FieldMismatch(format!("block {id}: CM block needs endo_field")));
        }
        None => BlockField::undeclared(),
    };
    if !decl.basis_points.is_empty() && decl.basis_points.len() != decl.basis_size as usize {
        return Err(shape(format!(
            "block {id}: {} basis_points for basis_size {}",
            decl.basis_points.len(),
            decl.basis_size
        )));
    }
    Ok(BlockInfo { decl: decl.clone(), field, offset })
}

fn parse_images(maps: &[BlockCoords], blocks: &[BlockInfo], width: usize, what: &str) -> Result<QMat> {
    let ids: BTreeMap<&str, &BlockInfo> = blocks.iter().map(|b| (b.decl.id.as_str(), b)).collect();
    let mut out = vec![];
    for (j, m) in maps.iter().enumerate() {
        let mut v = vec![Rational::new(); width];
        for (id, rows) in m {
            let b = ids.get(id.as_str()).ok_or_else(|| shape(format!("{what}[{j}]: unknown block '{id}'")))?;
            if rows.len() != b.copies() {
                return Err(shape(format!("{what}[{j}].{id}: {} rows for multiplicity {}", rows.len(), b.copies())));
            }
            let d = b.field.degree;
            for (c, row) in rows.iter().enumerate() {
                if row.len() != b.decl.basis_size as usize {
                    return Err(shape(format!(
                        "{what}[{j}].{id}[{c}]: {} entries for basis_size {}",
                        row.len(),
                        b.decl.basis_size
                    )));
                }
                for (k, elem) in row.iter().enumerate() {
                    let coeffs = elem.coeffs(d)?.ok_or_else(|| {
                        Error::FieldMismatch(format!("{what}[{j}].{id}[{c}][{k}]: more than {d} coefficients"))
                    })?;
                    if !b.field.is_declared() && !linalg::is_zero_vec(&coeffs) {
                        return Err(Error::NonCommutativeEndo(format!(
                            "block {id} has coordinates but no commutative endo_field"
                        )));
                    }
                    let at = b.offset + c * b.row_width() + k * d;
                    v[at..at + d].clone_from_slice(&coeffs);
                }
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Greedy complement built from whole θ-orbits, so it is an `E`-submodule.
fn stable_complement(sub: &QMat, n: usize, action: &QMat) -> QMat {
    let mut span = sub.clone();
    let mut comp = vec![];
    for e in linalg::identity(n) {
        if linalg::in_span(&span, &e) {
            continue;
        }
        let mut v = e;
        loop {
            if linalg::in_span(&span, &v) {
                break;
            }
            span.push(v.clone());
            comp.push(v.clone());
            v = linalg::vec_mat(&v, action);
        }
    }
    comp
}

fn check_action(action: &QMat, images: &QMat, field: &BlockField, what: &str) -> Result<()> {
    for (j, row) in action.iter().enumerate() {
        let lhs = linalg::vec_mat(row, images);
        let rhs = field.times_theta_vec(&images[j]);
        if lhs != rhs {
            return Err(Error::InvariantViolation(format!("endo_action.{what}: row {j} is not compatible with θ")));
        }
    }
    let n = action.len();
    let mut power = linalg::identity(n);
    let mut acc = linalg::zeros(n, n);
    for c in &field.minpoly_tail {
        for (a, p) in acc.iter_mut().flatten().zip(power.iter().flatten()) {
            *a += Rational::from(c * p);
        }
        power = power.iter().map(|r| linalg::vec_mat(r, action)).collect();
    }
    for (a, p) in acc.iter_mut().flatten().zip(power.iter().flatten()) {
        *a += p;
    }
    if acc.iter().flatten().any(|x| *x != 0) {
        return Err(Error::InvariantViolation(format!(
            "endo_action.{what} does not satisfy the minimal polynomial of θ"
        )));
    }
    Ok(())
}

/// Matrix of `action` restricted to the invariant subspace spanned by `basis`.
fn restrict_action(action: &QMat, basis: &QMat) -> QMat {
    basis.iter().map(|b| linalg::coords_in(basis, &linalg::vec_mat(b, action)).expect("complement is stable")).collect()
}

fn q_to_repr(m: &QMat) -> Vec<Vec<NumRepr>> {
    m.iter().map(|r| r.iter().map(|x| NumRepr::Str(x.to_string())).collect()).collect()
}

/// Checks shapes and fields, then computes kernels and splittings.
pub fn validate(spec: &MotiveSpec) -> Result<NormalizedMotive> {
    let mut blocks = vec![];
    let mut seen = BTreeSet::new();
    let mut offset = 0;
    for decl in &spec.blocks {
        if !seen.insert(decl.id.clone()) {
            return Err(shape(format!("duplicate block id '{}'", decl.id)));
        }
        let b = parse_block(decl, offset)?;
        offset += b.width();
        blocks.push(b);
    }
    let (r, t) = (spec.lattice_rank as usize, spec.torus_rank as usize);
    let pad = |m: &[BlockCoords], n: usize| if m.is_empty() { vec![BlockCoords::new(); n] } else { m.to_vec() };
    let (lattice_map, torus_map) = (pad(&spec.lattice_map, r), pad(&spec.torus_map, t));
    if lattice_map.len() != r {
        return Err(shape(format!("lattice_map has {} entries for lattice_rank {r}", spec.lattice_map.len())));
    }
    if torus_map.len() != t {
        return Err(shape(format!("torus_map has {} entries for torus_rank {t}", spec.torus_map.len())));
    }
    let lattice_images = parse_images(&lattice_map, &blocks, offset, "lattice_map")?;
    let torus_images = parse_images(&torus_map, &blocks, offset, "torus_map")?;
    if let Some(b) = &spec.baker {
        if let Some(rank) = b.rank {
            if !b.generators.is_empty() && rank as usize > b.generators.len() {
                return Err(Error::InvariantViolation("baker.rank exceeds the number of generators".into()));
            }
        }
        if b.generators.iter().any(|g| g.as_rational().is_some_and(|q| q == 0)) {
            return Err(Error::InvariantViolation("baker generators must be nonzero".into()));
        }
    }
    let (lattice_action, torus_action) = match &spec.endo_action {
        None => (None, None),
        Some(a) => {
            if blocks.len() != 1 {
                return Err(Error::InvariantViolation("endo_action needs exactly one block".into()));
            }
            let f = &blocks[0].field;
            let la = q_matrix(&a.lattice, r, "lattice")?;
            let ta = q_matrix(&a.torus, t, "torus")?;
            check_action(&la, &lattice_images, f, "lattice")?;
            check_action(&ta, &torus_images, f, "torus")?;
            (Some(la), Some(ta))
        }
    };
    let lattice_kernel = linalg::rref(&linalg::left_kernel(&lattice_images)).0;
    let torus_kernel = linalg::rref(&linalg::left_kernel(&torus_images)).0;
    let lattice_complement = match &lattice_action {
        Some(a) => stable_complement(&lattice_kernel, r, a),
        None => linalg::echelon_complement(&lattice_kernel, r),
    };
    let torus_complement = match &torus_action {
        Some(a) => stable_complement(&torus_kernel, t, a),
        None => linalg::echelon_complement(&torus_kernel, t),
    };
    Ok(NormalizedMotive {
        spec: spec.clone(),
        blocks,
        lattice_images,
        torus_images,
        lattice_kernel,
        torus_kernel,
        lattice_complement,
        torus_complement,
        lattice_action,
        torus_action,
    })
}

impl NormalizedMotive {
    pub fn lattice_rank(&self) -> usize {
        self.lattice_images.len()
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_images.len()
    }

    pub fn block(&self, id: &str) -> Option<&BlockInfo> {
        self.blocks.iter().find(|b| b.decl.id == id)
    }

    /// `dim_E(B)` of `Hom(A,B)·L`.
    pub fn rank_l(&self, b: &BlockInfo) -> usize {
        b.field.e_rank(&b.all_copy_rows(&self.lattice_images))
    }

    /// `dim_E(B)` of `Hom(A^∨,B^∨)·X(T)`.
    pub fn rank_t(&self, b: &BlockInfo) -> usize {
        b.field.e_rank(&b.all_copy_rows(&self.torus_images))
    }

    pub fn is_reduced(&self) -> bool {
        self.lattice_kernel.is_empty() && self.torus_kernel.is_empty()
    }

    /// Is the ℚ-span of the images stable under `End(A)`?
    fn images_stable(&self, images: &QMat, rank: impl Fn(&BlockInfo) -> usize) -> bool {
        let sat: usize = self.blocks.iter().map(|b| b.copies() * b.field.degree * rank(b)).sum();
        linalg::rank(images) == sat
    }

    pub fn lattice_stable(&self) -> bool {
        self.images_stable(&self.lattice_images, |b| self.rank_l(b))
    }

    pub fn torus_stable(&self) -> bool {
        self.images_stable(&self.torus_images, |b| self.rank_t(b))
    }

    /// Does any block with non-trivial `E(B)` meet both `L` and `X(T)`?
    fn lifts_matter(&self) -> bool {
        self.lattice_rank() > 0
            && self.torus_rank() > 0
            && self.blocks.iter().any(|b| b.field.degree > 1 && self.rank_l(b) > 0)
    }

    pub fn saturation_status(&self) -> SaturationStatus {
        if !self.is_reduced() || !self.lattice_stable() || !self.torus_stable() {
            return SaturationStatus::NotSaturated;
        }
        if !self.lifts_matter() {
            return SaturationStatus::Saturated;
        }
        match &self.spec.lifts {
            Some(LiftDecl { endo_stable: true }) => SaturationStatus::Saturated,
            Some(LiftDecl { endo_stable: false }) => SaturationStatus::NotSaturated,
            None => SaturationStatus::Unknown,
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation_status() == SaturationStatus::Saturated
    }

    /// Is the motive of Baker type (no abelian part in play)?
    pub fn is_baker_type(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Maps in spec form, regenerated from coordinate rows.
    fn maps_from_rows(&self, rows: &QMat) -> Vec<BlockCoords> {
        rows.iter()
            .map(|v| {
                let mut m = BlockCoords::new();
                for b in &self.blocks {
                    let copies = b.copy_rows(v);
                    if copies.iter().all(|r| linalg::is_zero_vec(r)) {
                        continue;
                    }
                    let d = b.field.degree;
                    let elems = copies.iter().map(|r| r.chunks(d).map(FieldElem::from_coeffs).collect()).collect();
                    m.insert(b.decl.id.clone(), elems);
                }
                m
            })
            .collect()
    }

    fn derived(
        &self,
        lattice: &QMat,
        torus: &QMat,
        action: Option<EndoAction>,
        lifts: Option<LiftDecl>,
    ) -> Result<Self> {
        let spec = MotiveSpec {
            name: self.spec.name.clone(),
            blocks: self.spec.blocks.clone(),
            torus_rank: torus.len() as u32,
            lattice_rank: lattice.len() as u32,
            torus_map: self.maps_from_rows(torus),
            lattice_map: self.maps_from_rows(lattice),
            baker: None,
            lifts,
            endo_action: action,
        };
        validate(&spec)
    }

    pub fn baker_part(&self) -> BakerPart {
        BakerPart {
            lattice_rank: self.lattice_rank(),
            torus_rank: self.torus_rank(),
            lattice_kernel_rank: self.lattice_kernel.len(),
            torus_kernel_rank: self.torus_kernel.len(),
            baker: self.spec.baker.clone(),
        }
    }

    /// Splits off `M_Bk = [L′→T] ⊕ [L→T″]`, returning it with `M_red = [L″→G′]`.
    pub fn reduce(&self) -> Result<(BakerPart, NormalizedMotive)> {
        let lat: QMat = self.lattice_complement.iter().map(|c| linalg::vec_mat(c, &self.lattice_images)).collect();
        let tor: QMat = self.torus_complement.iter().map(|c| linalg::vec_mat(c, &self.torus_images)).collect();
        let action = match (&self.lattice_action, &self.torus_action) {
            (Some(la), Some(ta)) => Some(EndoAction {
                lattice: q_to_repr(&restrict_action(la, &self.lattice_complement)),
                torus: q_to_repr(&restrict_action(ta, &self.torus_complement)),
            }),
            _ => None,
        };
        let red = self.derived(&lat, &tor, action, self.spec.lifts.clone())?;
        Ok((self.baker_part(), red))
    }

    pub fn saturation_ranks(&self) -> SaturationRanks {
        let end_dim = self.blocks.iter().map(BlockInfo::end_dim).sum::<usize>();
        let sat = |rank: &dyn Fn(&BlockInfo) -> usize| -> usize {
            self.blocks.iter().map(|b| b.copies() * b.field.degree * rank(b)).sum()
        };
        let lattice_sat_dim = sat(&|b| self.rank_l(b));
        let torus_sat_dim = sat(&|b| self.rank_t(b));
        SaturationRanks {
            end_dim,
            lattice_sat_dim,
            torus_sat_dim,
            kernel_bound: (end_dim * self.lattice_rank()).saturating_sub(lattice_sat_dim),
        }
    }

    /// Rows spanning `End(A)·images`, one block copy at a time.
    fn saturated_rows(&self, images: &QMat) -> QMat {
        let width = images.first().map_or(0, Vec::len);
        let mut out = vec![];
        for b in &self.blocks {
            let basis = b.field.span_basis(&b.all_copy_rows(images));
            for c in 0..b.copies() {
                for w in &basis {
                    let mut v = vec![Rational::new(); width];
                    let at = b.offset + c * b.row_width();
                    v[at..at + w.len()].clone_from_slice(w);
                    out.push(v);
                }
            }
        }
        out
    }

    /// `M_red ↦ (M₀, M₁)` with `M₁ = [End(A)·L → G_sat]` saturated.
    ///
    /// Fails with `MissingLift` when a non-trivial `E(B)` meets both `L`
    /// and `X(T)` and no lift data is declared.
    pub fn saturate(&self) -> Result<Saturation> {
        if !self.is_reduced() {
            return Err(Error::InvariantViolation("saturate expects a reduced motive".into()));
        }
        if self.lifts_matter() && self.spec.lifts.is_none() {
            return Err(Error::MissingLift("lifts of L into G are needed to saturate over a CM field".into()));
        }
        let lat = self.saturated_rows(&self.lattice_images);
        let tor = self.saturated_rows(&self.torus_images);
        let saturated = self.derived(&lat, &tor, None, Some(LiftDecl { endo_stable: true }))?;
        Ok(Saturation { baker: self.saturation_ranks(), saturated })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> MotiveSpec {
        serde_json::from_str(json).unwrap()
    }

    const CH4: &str = r#"{
        "blocks": [{"id": "E", "genus": 1, "endo_dim": 1, "curve": {"g2": 4, "g3": -4}, "basis_size": 2}],
        "torus_rank": 1, "lattice_rank": 1,
        "torus_map": [{"E": [[1, 0]]}],
        "lattice_map": [{"E": [[0, 1]]}]
    }"#;

    const CM: &str = r#"{
        "blocks": [{"id": "E", "genus": 1, "endo_dim": 2, "endo_field": {"minpoly": [1, 0, 1], "approx": {"re": "0", "im": "1"}}}],
        "torus_rank": 2, "lattice_rank": 2,
        "torus_map": [{"E": [[[1, 0]]]}, {"E": [[[0, 1]]]}],
        "lattice_map": [{"E": [[[1, 1]]]}, {"E": [[[-1, 1]]]}]
    }"#;

    #[test]
    fn chapter_four_is_reduced_and_saturated() {
        let m = validate(&spec(CH4)).unwrap();
        assert!(m.is_reduced());
        assert!(m.is_saturated());
        let b = &m.blocks[0];
        assert_eq!((m.rank_l(b), m.rank_t(b)), (1, 1));
        let (bk, red) = m.reduce().unwrap();
        assert!(bk.is_zero());
        assert_eq!(red.lattice_images, m.lattice_images);
    }

    #[test]
    fn pure_torus_motive() {
        let m = validate(&spec(r#"{"torus_rank": 1, "lattice_rank": 0}"#)).unwrap();
        assert!(m.lattice_kernel.is_empty());
        assert_eq!(m.torus_kernel.len(), 1);
        assert!(m.is_baker_type());
    }

    #[test]
    fn zero_row_creates_baker_summand() {
        let mut s = spec(CH4);
        s.lattice_rank = 2;
        s.lattice_map.push(BlockCoords::new());
        let m = validate(&s).unwrap();
        assert_eq!(m.lattice_kernel.len(), 1);
        let (bk, red) = m.reduce().unwrap();
        assert_eq!(bk.lattice_kernel_rank, 1);
        assert!(!bk.is_zero());
        assert!(red.is_reduced());
        assert_eq!(red.lattice_rank() + bk.lattice_kernel_rank, 2);
    }

    #[test]
    fn cm_stability_and_lifts() {
        let m = validate(&spec(CM)).unwrap();
        let b = &m.blocks[0];
        assert_eq!((m.rank_l(b), m.rank_t(b)), (1, 1));
        assert!(m.lattice_stable() && m.torus_stable());
        assert_eq!(m.saturation_status(), SaturationStatus::Unknown);
        assert!(matches!(m.saturate(), Err(Error::MissingLift(_))));
        let mut s = spec(CM);
        s.lifts = Some(LiftDecl { endo_stable: true });
        assert!(validate(&s).unwrap().is_saturated());
    }

    #[test]
    fn cm_single_point_saturates_to_rank_two() {
        let mut s = spec(CM);
        s.lattice_rank = 1;
        s.lattice_map.truncate(1);
        s.lifts = Some(LiftDecl { endo_stable: false });
        let m = validate(&s).unwrap();
        assert!(!m.lattice_stable());
        let sat = m.saturate().unwrap();
        assert_eq!(sat.saturated.lattice_rank(), 2);
        assert!(sat.saturated.is_saturated());
        let again = sat.saturated.saturate().unwrap();
        assert_eq!(again.saturated.lattice_rank(), 2);
        assert_eq!(again.saturated.torus_rank(), sat.saturated.torus_rank());
    }

    #[test]
    fn shape_and_field_errors() {
        let mut s = spec(CH4);
        s.lattice_rank = 2;
        assert!(matches!(validate(&s), Err(Error::ShapeMismatch(_))));
        let bad = CH4.replace(r#"[[0, 1]]"#, r#"[[[0, 1], 1]]"#);
        assert!(matches!(validate(&spec(&bad)), Err(Error::FieldMismatch(_))));
        let unknown = CH4.replace(r#"{"E": [[0, 1]]}"#, r#"{"F": [[0, 1]]}"#);
        assert!(matches!(validate(&spec(&unknown)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn endo_action_gives_stable_complements() {
        let json = r#"{
            "blocks": [{"id": "E", "genus": 1, "endo_dim": 2, "endo_field": {"minpoly": [1, 0, 1], "approx": {"re": "0", "im": "1"}}}],
            "torus_rank": 0, "lattice_rank": 4,
            "lattice_map": [{"E": [[[1, 0]]]}, {"E": [[[0, 1]]]}, {}, {}],
            "endo_action": {"lattice": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]}
        }"#;
        let m = validate(&spec(json)).unwrap();
        assert_eq!(m.lattice_kernel.len(), 2);
        let a = m.lattice_action.as_ref().unwrap();
        for v in m.lattice_kernel.iter().chain(&m.lattice_complement) {
            let img = linalg::vec_mat(v, a);
            let space = if m.lattice_kernel.contains(v) { &m.lattice_kernel } else { &m.lattice_complement };
            assert!(linalg::in_span(space, &img));
        }
        let (_, red) = m.reduce().unwrap();
        assert!(red.is_reduced());
        let wrong = json.replace("[[0, 1, 0, 0], [-1, 0, 0, 0]", "[[0, 1, 0, 0], [1, 0, 0, 0]");
        assert!(matches!(validate(&spec(&wrong)), Err(Error::InvariantViolation(_))));
    }
}
