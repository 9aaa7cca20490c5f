use std::fmt::Write as _;

use twostep_core::frac::to_fixed6;
use twostep_core::{ConvexRegion, RationalPair, RationalPoint};

pub enum Stroke {
    Solid,
    Dashed,
    Dotted,
}

pub struct Overlay<'a> {
    pub region: &'a ConvexRegion,
    pub stroke: Stroke,
    pub colour: &'a str,
}

fn coords(x: &twostep_core::Q, y: &twostep_core::Q) -> (String, String) {
    // SVG's y axis points down.
    let flipped = twostep_core::frac::q(1, 1) - y;
    (to_fixed6(x), to_fixed6(&flipped))
}

fn polygon(out: &mut String, points: &[RationalPoint], style: &str) {
    let pts: Vec<String> = points
        .iter()
        .map(|p| {
            let (x, y) = coords(&p.x, &p.y);
            format!("{x},{y}")
        })
        .collect();
    writeln!(out, r#"  <polygon points="{}" {style}/>"#, pts.join(" ")).expect("string write");
}

/// Scatter of distinct P₂ pairs with one polygon per region, in the unit
/// square with `(0,0)` at the bottom left.
pub fn render(points: &[RationalPair], overlays: &[Overlay<'_>]) -> String {
    let mut out = String::new();
    out.push_str(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" width="600" height="600">"#,
    );
    out.push('\n');
    out.push_str(r#"  <rect x="0" y="0" width="1" height="1" fill="white" stroke="black" stroke-width="0.002"/>"#);
    out.push('\n');
    for o in overlays {
        let dash = match o.stroke {
            Stroke::Solid => "",
            Stroke::Dashed => r#" stroke-dasharray="0.02 0.01""#,
            Stroke::Dotted => r#" stroke-dasharray="0.003 0.006""#,
        };
        let style = format!(
            r#"fill="none" stroke="{}" stroke-width="0.003"{dash}"#,
            o.colour
        );
        polygon(&mut out, o.region.vertices(), &style);
    }
    for p in points {
        let (x, y) = coords(&p.x, &p.y);
        writeln!(
            out,
            r#"  <circle cx="{x}" cy="{y}" r="0.004" fill="black"/>"#
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}
