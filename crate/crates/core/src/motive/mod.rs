//! Iso-1-motives `[L → G]` as declared data, with validation, reduction
//! `M ↦ (M_Bk, M_red)` and saturation.

mod normalized;
mod spec;

pub use normalized::{
    validate, BakerPart, BlockField, BlockInfo, NormalizedMotive, Saturation, SaturationRanks, SaturationStatus,
};
pub use spec::{
    AbelianBlockDecl, AuditMode, BakerDecl, BlockCoords, CurveDecl, EndoAction, FieldElem, LiftDecl, MotiveSpec,
};
