//! Chart documents and their SVG / TikZ rendering.
//!
//! Charts follow the Adams orientation: stem rightward, filtration upward,
//! origin at the bottom left. Dots are classes, straight arrows are
//! differentials, solid lines are a_sigma-multiplications and dashed lines
//! u_{2sigma}-multiplications (drawn when both endpoints are present and the
//! coordinates differ).

use crate::algebra::{GenName, Monomial};
use crate::sseq::PageStack;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, Serialize)]
pub struct ChartDot {
    pub id: String,
    pub x: i64,
    pub y: i64,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartArrow {
    pub source: String,
    pub target: String,
    pub page: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartLine {
    pub from: String,
    pub to: String,
    /// "solid" for a_sigma, "dashed" for u_{2sigma}
    pub style: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartDoc {
    pub model: String,
    pub page: i64,
    pub max_stem: i64,
    pub max_filtration: i64,
    pub dots: Vec<ChartDot>,
    pub arrows: Vec<ChartArrow>,
    pub lines: Vec<ChartLine>,
}

/// Assemble a chart of the current page of a stack: surviving classes as
/// dots, the differentials of the page about to run as arrows, and the
/// multiplicative structure lines among the dots.
pub fn chart_of_page(stack: &PageStack, page: i64) -> ChartDoc {
    let mut dots = Vec::new();
    let mut by_monomial: BTreeMap<Monomial, (i64, i64)> = BTreeMap::new();
    for key in stack.keys().collect::<Vec<_>>() {
        for (lead, _) in stack.reps_at(key) {
            by_monomial.insert(lead.clone(), (key.x, key.y));
            dots.push(ChartDot {
                id: lead.to_string(),
                x: key.x,
                y: key.y,
                label: lead.to_string(),
            });
        }
    }
    dots.sort_by(|a, b| (a.x, a.y, &a.id).cmp(&(b.x, b.y, &b.id)));

    let arrows = stack
        .page_arrows(page)
        .iter()
        .flat_map(|a| {
            a.targets.iter().map(move |t| ChartArrow {
                source: a.source.to_string(),
                target: t.to_string(),
                page: a.page,
            })
        })
        .collect();

    let mut lines = Vec::new();
    for (m, &(x, y)) in &by_monomial {
        for (gen, style) in [(GenName::ASigma, "solid"), (GenName::U2Sigma, "dashed")] {
            let next = m.mul(&Monomial::gen(gen));
            if let Some(&(nx, ny)) = by_monomial.get(&next) {
                if (nx, ny) != (x, y) {
                    lines.push(ChartLine {
                        from: m.to_string(),
                        to: next.to_string(),
                        style,
                    });
                }
            }
        }
    }
    ChartDoc {
        model: stack.model.name.to_string(),
        page,
        max_stem: stack.range.max_stem,
        max_filtration: stack.range.max_filt,
        dots,
        arrows,
        lines,
    }
}

const UNIT: i64 = 20;
const MARGIN: i64 = 30;

/// Render to SVG on a fixed 20px grid, origin bottom-left.
pub fn render_svg(doc: &ChartDoc) -> String {
    let w = (doc.max_stem + 2) * UNIT + 2 * MARGIN;
    let h = (doc.max_filtration + 2) * UNIT + 2 * MARGIN;
    let px = |x: i64| MARGIN + (x + 1) * UNIT;
    let py = |y: i64| h - MARGIN - (y + 1) * UNIT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><marker id="tip" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z"/></marker></defs>"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{w}" height="{h}" fill="white"/>"#
    );
    // grid
    for gx in 0..=(doc.max_stem + 1) {
        let x = px(gx) - UNIT / 2;
        let _ = writeln!(
            s,
            r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#eeeeee"/>"##,
            py(doc.max_filtration + 1),
            py(-1)
        );
    }
    for gy in 0..=(doc.max_filtration + 1) {
        let y = py(gy) + UNIT / 2;
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#eeeeee"/>"##,
            px(-1),
            px(doc.max_stem + 1)
        );
    }
    let mut coords: BTreeMap<&str, (i64, i64)> = BTreeMap::new();
    for d in &doc.dots {
        coords.insert(&d.id, (d.x, d.y));
    }
    // multiplicative structure
    for l in &doc.lines {
        let (Some(&(x1, y1)), Some(&(x2, y2))) =
            (coords.get(l.from.as_str()), coords.get(l.to.as_str()))
        else {
            continue;
        };
        let dash = if l.style == "dashed" {
            r#" stroke-dasharray="4 3""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999"{dash}/>"##,
            px(x1),
            py(y1),
            px(x2),
            py(y2)
        );
    }
    // differentials
    for a in &doc.arrows {
        let (Some(&(x1, y1)), Some(&(x2, y2))) =
            (coords.get(a.source.as_str()), coords.get(a.target.as_str()))
        else {
            continue;
        };
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#cc3333" marker-end="url(#tip)"/>"##,
            px(x1),
            py(y1),
            px(x2),
            py(y2)
        );
    }
    // dots last, on top
    for d in &doc.dots {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="3" fill="black"><title>{}</title></circle>"#,
            px(d.x),
            py(d.y),
            xml_escape(&d.label)
        );
    }
    // axes labels every 5
    for gx in (0..=doc.max_stem).step_by(5) {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
            px(gx),
            h - 8,
            gx
        );
    }
    for gy in (0..=doc.max_filtration).step_by(5) {
        let _ = writeln!(
            s,
            r#"<text x="8" y="{}" font-size="10">{}</text>"#,
            py(gy) + 3,
            gy
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Render to a standalone TikZ picture.
pub fn render_tikz(doc: &ChartDoc) -> String {
    let mut s = String::new();
    s.push_str("\\begin{tikzpicture}[scale=0.5]\n");
    let mut coords: BTreeMap<&str, (i64, i64)> = BTreeMap::new();
    for d in &doc.dots {
        coords.insert(&d.id, (d.x, d.y));
    }
    for l in &doc.lines {
        let (Some(&(x1, y1)), Some(&(x2, y2))) =
            (coords.get(l.from.as_str()), coords.get(l.to.as_str()))
        else {
            continue;
        };
        let style = if l.style == "dashed" { "densely dashed" } else { "" };
        let _ = writeln!(s, "\\draw[gray,{}] ({},{}) -- ({},{});", style, x1, y1, x2, y2);
    }
    for a in &doc.arrows {
        let (Some(&(x1, y1)), Some(&(x2, y2))) =
            (coords.get(a.source.as_str()), coords.get(a.target.as_str()))
        else {
            continue;
        };
        let _ = writeln!(s, "\\draw[->,red] ({},{}) -- ({},{});", x1, y1, x2, y2);
    }
    for d in &doc.dots {
        let _ = writeln!(s, "\\fill ({},{}) circle (2pt);", d.x, d.y);
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
