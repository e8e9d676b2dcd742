//! Round-trippable decimal formatting shared by the text outputs.

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn sig17(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}
