//! Poincaré-disk projection and SVG rendering.

use hyperpedal::{Error, MVec3};

/// Tolerance on `⟨x,x⟩ + 1` for a point to count as on the upper sheet.
pub const SHEET_TOL: f64 = 1e-6;

/// Consecutive projected points farther apart than this start a new polyline.
pub const JUMP: f64 = 0.25;

/// `(x2, x3) / (1 + x1)` for a point on the upper sheet.
pub fn project_poincare(p: &MVec3<f64>) -> Result<(f64, f64), Error> {
    let scale = p.max_abs().max(1.0);
    if !p.is_finite() || p.x1 <= 0.0 || (p.inner(p) + 1.0).abs() > SHEET_TOL * scale * scale {
        return Err(Error::OffUpperSheet(p.x1, p.x2, p.x3));
    }
    Ok((p.x2 / (1.0 + p.x1), p.x3 / (1.0 + p.x1)))
}

#[derive(Clone, Debug)]
pub struct Layer {
    pub label: String,
    pub color: &'static str,
    /// Sample points; `None` marks a gap.
    pub points: Vec<Option<MVec3<f64>>>,
}

#[derive(Clone, Debug)]
pub struct Marker {
    pub label: String,
    pub color: &'static str,
    pub radius: f64,
    pub at: MVec3<f64>,
}

pub const SOURCE_COLOR: &str = "#d62728";
pub const PEDAL_COLOR: &str = "#1f77b4";
pub const ORTHOTOMIC_COLOR: &str = "#2ca02c";
pub const EVOLUTE_COLOR: &str = "#ff7f0e";
pub const CAUSTIC_COLOR: &str = "#9467bd";
pub const POINT_COLOR: &str = "#e6b800";
pub const SINGULAR_COLOR: &str = "#000000";

fn coord(x: f64) -> String {
    let t = format!("{x:.6}");
    if t == "-0.000000" {
        "0.000000".into()
    } else {
        t
    }
}

/// Projected, rounded disk coordinates, or `None` unless strictly inside.
fn disk(p: &MVec3<f64>) -> Option<(String, String)> {
    let (u, w) = project_poincare(p).ok()?;
    let (a, b) = (coord(u), coord(-w));
    let (ra, rb): (f64, f64) = (a.parse().ok()?, b.parse().ok()?);
    (ra * ra + rb * rb < 1.0).then_some((a, b))
}

fn polylines(points: &[Option<MVec3<f64>>]) -> Vec<Vec<(String, String)>> {
    let mut runs: Vec<Vec<(String, String)>> = Vec::new();
    let mut current: Vec<(String, String)> = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for p in points {
        let projected = p.as_ref().and_then(|p| disk(p).map(|d| (d, project_poincare(p).unwrap())));
        match projected {
            Some((d, (u, w))) => {
                if let Some((lu, lw)) = last {
                    if (u - lu).hypot(w - lw) > JUMP {
                        runs.push(std::mem::take(&mut current));
                    }
                }
                current.push(d);
                last = Some((u, w));
            }
            None => {
                runs.push(std::mem::take(&mut current));
                last = None;
            }
        }
    }
    runs.push(current);
    runs.retain(|r| r.len() >= 2);
    runs
}

/// SVG 1.1 document of the Poincaré disk with the given layers and markers.
/// Only points strictly inside the unit disk are emitted.
pub fn render_svg(title: &str, layers: &[Layer], markers: &[Marker]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n",
    );
    out.push_str(&format!("<title>{}</title>\n", escape(title)));
    out.push_str(
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.004\"/>\n",
    );
    for layer in layers {
        out.push_str(&format!(
            "<g id=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"0.006\" stroke-linejoin=\"round\">\n",
            escape(&layer.label),
            layer.color
        ));
        for run in polylines(&layer.points) {
            let pts: Vec<String> = run.iter().map(|(a, b)| format!("{a},{b}")).collect();
            out.push_str(&format!("<polyline points=\"{}\"/>\n", pts.join(" ")));
        }
        out.push_str("</g>\n");
    }
    for m in markers {
        if let Some((a, b)) = disk(&m.at) {
            out.push_str(&format!(
                "<circle class=\"{}\" cx=\"{a}\" cy=\"{b}\" r=\"{}\" fill=\"{}\"/>\n",
                escape(&m.label),
                m.radius,
                m.color
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
