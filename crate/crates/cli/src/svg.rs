//! Static SVG plots of planar regions with the unit circle and axes.

use shiftlab::C64;

const SIZE: f64 = 480.0;

/// Plot of a convex polygon over `[-1.1, 1.1]^2`, or a dot for a point.
pub fn region_svg(vertices: &[C64], title: &str) -> String {
    let extent = vertices.iter().map(|z| z.re.abs().max(z.im.abs())).fold(1.0, f64::max) * 1.1;
    let scale = SIZE / (2.0 * extent);
    let px = |z: C64| ((z.re + extent) * scale, (extent - z.im) * scale);
    let c = SIZE / 2.0;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    out.push_str(&format!("<title>{}</title>\n", escape(title)));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<line x1=\"0\" y1=\"{c:.3}\" x2=\"{SIZE}\" y2=\"{c:.3}\" stroke=\"#888\" stroke-width=\"1\"/>\n"
    ));
    out.push_str(&format!(
        "<line x1=\"{c:.3}\" y1=\"0\" x2=\"{c:.3}\" y2=\"{SIZE}\" stroke=\"#888\" stroke-width=\"1\"/>\n"
    ));
    out.push_str(&format!(
        "<circle cx=\"{c:.3}\" cy=\"{c:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        scale
    ));
    match vertices {
        [] => {}
        [z] => {
            let (x, y) = px(*z);
            out.push_str(&format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"steelblue\"/>\n"));
        }
        _ => {
            let pts: Vec<String> = vertices
                .iter()
                .map(|&z| {
                    let (x, y) = px(z);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            out.push_str(&format!(
                "<polygon points=\"{}\" fill=\"steelblue\" fill-opacity=\"0.4\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
                pts.join(" ")
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
