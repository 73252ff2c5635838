//! Renderings of the cone, chambers and game of a case report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::report::{CaseReport, Pair, RayLabel, StepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize, Deserialize)]
pub enum Format {
    #[default]
    Text,
    Svg,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub id: String,
    pub rays: Vec<RayLabel>,
    pub mobile: Option<[Pair; 2]>,
    pub chambers: Vec<[Pair; 2]>,
    pub minus_k: Option<Pair>,
    pub position: Option<String>,
    pub steps: Vec<StepReport>,
    pub verdict: String,
}

impl Diagram {
    pub fn from_report(r: &CaseReport) -> Diagram {
        Diagram {
            id: r.id.clone(),
            rays: r.cone.rays.clone(),
            mobile: r.cone.mobile,
            chambers: r.cone.chambers.clone(),
            minus_k: r.cone.minus_k,
            position: r.cone.position.clone(),
            steps: r.steps.clone(),
            verdict: r.verdict.clone(),
        }
    }
}

fn p(x: Pair) -> String {
    format!("({},{})", x[0], x[1])
}

pub fn render(r: &CaseReport, format: Format) -> String {
    let d = Diagram::from_report(r);
    match format {
        Format::Text => text(&d),
        Format::Svg => svg(&d),
        Format::Json => serde_json::to_string_pretty(&d).expect("diagram serializes"),
    }
}

fn text(d: &Diagram) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case {}", d.id);
    let _ = writeln!(s, "rays, clockwise:");
    for ray in &d.rays {
        let vars: Vec<String> = ray.variables.iter().map(|(n, w)| format!("{n}{}", p(*w))).collect();
        let mut tag = String::new();
        if let Some(m) = d.mobile {
            if m[0] == ray.ray {
                tag.push_str("  <- mobile start");
            }
            if m[1] == ray.ray {
                tag.push_str("  <- mobile end");
            }
        }
        if d.minus_k.is_some_and(|k| same_ray(k, ray.ray)) {
            tag.push_str("  <- -K");
        }
        let _ = writeln!(s, "  {:<10} {}{}", p(ray.ray), vars.join(" "), tag);
    }
    if let Some(m) = d.mobile {
        let _ = writeln!(s, "mobile cone <{}, {}>", p(m[0]), p(m[1]));
    }
    for (i, c) in d.chambers.iter().enumerate() {
        let _ = writeln!(s, "  chamber {}: <{}, {}>", i + 1, p(c[0]), p(c[1]));
    }
    if let Some(k) = d.minus_k {
        let _ = writeln!(s, "-K = {} ({})", p(k), d.position.as_deref().unwrap_or("?"));
    }
    let _ = writeln!(s, "game:");
    for st in &d.steps {
        let _ = writeln!(s, "  {}", st.text);
    }
    let _ = writeln!(s, "verdict: {}", d.verdict);
    s
}

fn same_ray(x: Pair, y: Pair) -> bool {
    x[0] * y[1] == x[1] * y[0] && x[0] * y[0] + x[1] * y[1] > 0
}

fn unit(x: Pair) -> (f64, f64) {
    let (a, b) = (x[0] as f64, x[1] as f64);
    let n = (a * a + b * b).sqrt().max(1e-9);
    (a / n, b / n)
}

fn svg(d: &Diagram) -> String {
    const C: f64 = 200.0;
    const R: f64 = 170.0;
    let pt = |x: Pair, scale: f64| {
        let (a, b) = unit(x);
        (C + a * R * scale, C - b * R * scale)
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="400" height="440" viewBox="0 0 400 440">"#);
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(&d.id));
    for (i, c) in d.chambers.iter().enumerate() {
        let (x1, y1) = pt(c[0], 1.0);
        let (x2, y2) = pt(c[1], 1.0);
        let shade = if i % 2 == 0 { "#dfe8f5" } else { "#c8d7ee" };
        let _ = writeln!(s, r#"<polygon points="{C},{C} {x1:.1},{y1:.1} {x2:.1},{y2:.1}" fill="{shade}" stroke="none"/>"#);
    }
    for ray in &d.rays {
        let (x, y) = pt(ray.ray, 1.0);
        let _ = writeln!(s, r##"<line x1="{C}" y1="{C}" x2="{x:.1}" y2="{y:.1}" stroke="#333" stroke-width="1.5"/>"##);
        let names: Vec<&str> = ray.variables.iter().map(|(n, _)| n.as_str()).collect();
        let (lx, ly) = pt(ray.ray, 1.08);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.1}" y="{ly:.1}" font-size="11" text-anchor="middle">{} {}</text>"#,
            escape(&names.join(",")),
            p(ray.ray)
        );
    }
    if let Some(k) = d.minus_k {
        let (x, y) = pt(k, 0.6);
        let _ = writeln!(s, r##"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="#c0392b"/>"##);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="11">-K {}</text>"#, x + 6.0, y - 6.0, p(k));
    }
    let _ = writeln!(s, r#"<text x="10" y="425" font-size="12">{}: {}</text>"#, escape(&d.id), escape(&d.verdict));
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
