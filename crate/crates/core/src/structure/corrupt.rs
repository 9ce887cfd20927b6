//! Single-entry corruptions used as negative controls.

use super::spec::AlgebroidSpec;
use crate::error::Result;
use crate::exactmath::Scalar;
use crate::exterior::Multivector;
use crate::section::Section;

/// Add `e_1` to `[e_1, e_2]` only, leaving `[e_2, e_1]` untouched.
pub fn corrupt_bracket(spec: &AlgebroidSpec) -> Result<AlgebroidSpec> {
    let r = spec.rank();
    let (i, j) = if r > 1 { (0, 1) } else { (0, 0) };
    let mut parts = spec.parts().clone();
    let entry = parts.brackets.entry((i, j)).or_insert_with(|| Section::zero(r));
    *entry = entry.add(&Section::basis(r, 0));
    AlgebroidSpec::new(parts)
}

/// Add the smallest positive integer to `⟨e_r, e_r⟩` that keeps the determinant a unit.
pub fn corrupt_gram(spec: &AlgebroidSpec) -> Result<AlgebroidSpec> {
    let last_index = spec.rank() - 1;
    let mut last = None;
    for bump in 1..=4 {
        let mut parts = spec.parts().clone();
        let g = &parts.gram[(last_index, last_index)] + &Scalar::int(bump);
        parts.gram[(last_index, last_index)] = g;
        match AlgebroidSpec::new(parts) {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Add one to the first twist coefficient, or create `e_1∧e_2∧e_3∧e_4` when the twist is zero.
pub fn corrupt_twist(spec: &AlgebroidSpec) -> Result<AlgebroidSpec> {
    let h = spec.twist().cloned().unwrap_or_default();
    let blade = h.terms().next().map(|(b, _)| b).unwrap_or(0b1111);
    let bumped = h.add(&Multivector::blade(blade, Scalar::one()));
    spec.with_twist(Some(bumped))
}
