//! Text export formats. All reals print with 17 significant digits
//! ('.' decimal, no locale) so every value round-trips losslessly and
//! repeated runs are byte-identical.

use shapmc::{saliency_rgb, MseReport, SaliencyMap, ShapleyVector, VarianceReport};
use std::fmt::Write as _;

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per feature slot: index, column name, attribution.
pub fn attribution_csv(names: &[String], sv: &ShapleyVector, exclude_bias: bool) -> String {
    debug_assert_eq!(names.len(), sv.attributions.len());
    let mut text = String::from("feature,name,attribution\n");
    for (j, (name, a)) in names.iter().zip(&sv.attributions).enumerate() {
        if exclude_bias && j == 0 {
            continue;
        }
        let _ = writeln!(text, "{j},{name},{}", real(*a));
    }
    text
}

pub fn mse_csv(report: &MseReport) -> String {
    let mut text = String::from("algorithm,equivalent_samples,example,mse\n");
    for row in &report.rows {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            row.algorithm.as_str(),
            row.equivalent_samples,
            row.example,
            real(row.mse)
        );
    }
    text
}

pub fn variance_csv(report: &VarianceReport) -> String {
    let mut text = String::from("algorithm,step,avg_running_std\n");
    for row in &report.rows {
        let _ = writeln!(
            text,
            "{},{},{}",
            row.algorithm.as_str(),
            row.step,
            real(row.avg_running_std)
        );
    }
    text
}

/// Raw signed saliency values. Indices are the original feature slots, so
/// they start at 1: the bias slot is not part of a map.
pub fn saliency_csv(names: &[String], map: &SaliencyMap) -> String {
    debug_assert_eq!(names.len(), map.values.len() + 1);
    let mut text = String::from("feature,name,value\n");
    for (j, v) in map.values.iter().enumerate() {
        let _ = writeln!(text, "{},{},{}", j + 1, names[j + 1], real(*v));
    }
    text
}

/// Plain-text pixmap (P3), one pixel per line, row-major. Positive values
/// shade toward red, negative toward blue, zero is white.
pub fn ppm(values: &[f64], width: usize, height: usize) -> String {
    assert_eq!(values.len(), width * height);
    let mut text = format!("P3\n{width} {height}\n255\n");
    for [r, g, b] in saliency_rgb(values) {
        let _ = writeln!(text, "{r} {g} {b}");
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip_through_the_printed_form() {
        for v in [0.5, 2.0 / 3.0, -1.0e-12, 123456.789, f64::MIN_POSITIVE] {
            assert_eq!(real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn pixmap_matches_the_hand_derived_bytes() {
        let text = ppm(&[1.0, -0.5, 0.25, 0.0], 2, 2);
        assert_eq!(
            text,
            "P3\n2 2\n255\n255 0 0\n128 128 255\n255 192 192\n255 255 255\n"
        );
    }
}
