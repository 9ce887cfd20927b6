//! Inline forms and sections: `3/2*x1*d1^dx2 - dx1^dx3`. Basis names come from
//! the structure file; everything else in a term goes to the polynomial parser.

use crate::error::{Error, Result};
use crate::exactmath::{parse_scalar, Scalar};
use crate::exterior::{wedge_sign, Blade, Multivector};
use crate::section::Section;
use crate::structure::AlgebroidSpec;

/// Names in basis order: the declared ones, or `e1..er`.
pub fn basis_names(spec: &AlgebroidSpec) -> Vec<String> {
    match spec.basis_names() {
        Some(names) => names.to_vec(),
        None => (1..=spec.rank()).map(|i| format!("e{i}")).collect(),
    }
}

fn located(src: &str, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: format!("column {} of `{src}`", offset + 1),
        message: message.into(),
    }
}

/// Split at top-level `+`/`-`, keeping the sign with its term. A sign right
/// after `^` or `*` belongs to the factor.
fn split_terms(src: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut prev = None;
    for (i, ch) in src.char_indices() {
        if (ch == '+' || ch == '-') && i > start && !matches!(prev, Some('*' | '^')) {
            out.push((start, &src[start..i]));
            start = i;
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    out.push((start, &src[start..]));
    out
}

fn parse_blade(src: &str, offset: usize, factor: &str, names: &[String]) -> Result<Option<(Blade, i32)>> {
    let mut blade: Blade = 0;
    let mut sign = 1;
    for piece in factor.split('^') {
        let piece = piece.trim();
        let i = names
            .iter()
            .position(|n| n == piece)
            .ok_or_else(|| located(src, offset, format!("`{piece}` is not a basis name")))?;
        let bit = 1 << i;
        if blade & bit != 0 {
            return Ok(None);
        }
        sign *= wedge_sign(blade, bit);
        blade |= bit;
    }
    Ok(Some((blade, sign)))
}

fn is_blade_factor(factor: &str, names: &[String]) -> bool {
    let head = factor.split('^').next().unwrap_or("").trim();
    names.iter().any(|n| n == head)
}

/// A multivector from inline text. `names` index the blades and `nvars` bounds
/// the variables allowed in coefficients.
pub fn parse_form(src: &str, names: &[String], nvars: usize) -> Result<Multivector> {
    if src.trim().is_empty() {
        return Err(located(src, 0, "empty form"));
    }
    let mut out = Multivector::zero();
    for (offset, term) in split_terms(src) {
        let mut body = term.trim();
        let mut negative = false;
        if let Some(rest) = body.strip_prefix('-') {
            negative = true;
            body = rest.trim_start();
        } else if let Some(rest) = body.strip_prefix('+') {
            body = rest.trim_start();
        }
        if body.is_empty() {
            return Err(located(src, offset, "empty term"));
        }
        let mut blade: Option<(Blade, i32)> = Some((0, 1));
        let mut coeff_text = Vec::new();
        let mut seen_blade = false;
        for factor in body.split('*') {
            let factor = factor.trim();
            if is_blade_factor(factor, names) {
                if seen_blade {
                    return Err(located(src, offset, "write a product of basis names with `^`"));
                }
                seen_blade = true;
                blade = parse_blade(src, offset, factor, names)?;
            } else {
                coeff_text.push(factor);
            }
        }
        let coeff = if coeff_text.is_empty() {
            Scalar::one()
        } else {
            parse_scalar(&coeff_text.join("*")).map_err(|e| match e {
                Error::Parse { message, .. } => located(src, offset, format!("in `{}`: {message}", term.trim())),
                other => other,
            })?
        };
        if coeff.var_span() > nvars {
            return Err(located(src, offset, format!("the base has {nvars} variables")));
        }
        if let Some((b, s)) = blade {
            let signed = if negative == (s < 0) { coeff } else { -coeff };
            out.add_term(b, signed);
        }
    }
    Ok(out)
}

/// A section from inline text; every term must carry exactly one basis name.
pub fn parse_section(src: &str, spec: &AlgebroidSpec) -> Result<Section> {
    let names = basis_names(spec);
    let form = parse_form(src, &names, spec.nvars())?;
    let mut coeffs = vec![Scalar::zero(); spec.rank()];
    for (b, c) in form.terms() {
        if b.count_ones() != 1 {
            return Err(located(src, 0, "a section is a sum of single basis names"));
        }
        coeffs[b.trailing_zeros() as usize] = c.clone();
    }
    Ok(Section::new(coeffs))
}
