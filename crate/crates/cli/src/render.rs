//! SVG output. This is the only floating-point code in the workspace.

use std::fmt::Write;

use pinwheel_core::corona::Enumeration;
use pinwheel_core::geom::{Chirality, ExactPoint, TilePose};
use pinwheel_core::ExactRational as Q;

pub fn to_f64(q: &Q) -> f64 {
    match q.to_i128_pair() {
        Some((n, d)) => n as f64 / d as f64,
        None => q.to_string().parse::<f64>().unwrap_or(f64::NAN),
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.12}");
    if s == "-0.000000000000" {
        "0.000000000000".into()
    } else {
        s
    }
}

fn plane(p: &ExactPoint) -> (f64, f64) {
    (to_f64(&p.x), to_f64(&p.y))
}

/// A tile as drawn: whether it is the center, its chirality, its corners.
type Drawn = (bool, Chirality, Vec<(f64, f64)>);

struct Frame {
    min: (f64, f64),
    max: (f64, f64),
}

impl Frame {
    fn of<'a>(pts: impl Iterator<Item = &'a (f64, f64)>) -> Frame {
        let mut f = Frame { min: (f64::INFINITY, f64::INFINITY), max: (f64::NEG_INFINITY, f64::NEG_INFINITY) };
        for &(x, y) in pts {
            f.min = (f.min.0.min(x), f.min.1.min(y));
            f.max = (f.max.0.max(x), f.max.1.max(y));
        }
        f
    }

    fn width(&self) -> f64 {
        self.max.0 - self.min.0
    }

    fn height(&self) -> f64 {
        self.max.1 - self.min.1
    }
}

fn fill(ch: Chirality) -> &'static str {
    match ch {
        Chirality::Plus => "#d9e6f2",
        Chirality::Minus => "#f2e0c9",
    }
}

fn polygon(out: &mut String, pts: &[(f64, f64)], style: &str) {
    let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", fmt(x), fmt(-y))).collect();
    writeln!(out, r#"<polygon points="{}" {style}/>"#, coords.join(" ")).expect("write to string");
}

/// A patch drawn in its own coordinates, `y` pointing up. With `scale`,
/// every coordinate is divided by it first.
pub fn patch_svg(tiles: &[TilePose], outline: Option<&[ExactPoint; 3]>, scale: Option<(f64, f64, f64, f64)>) -> String {
    let map = |p: &ExactPoint| {
        let (x, y) = plane(p);
        match scale {
            // (z − μ)/λ with λ = a + bi, μ = c + di.
            Some((a, b, c, d)) => {
                let (u, v) = (x - c, y - d);
                let n = a * a + b * b;
                ((u * a + v * b) / n, (v * a - u * b) / n)
            }
            None => (x, y),
        }
    };
    let tris: Vec<(Chirality, Vec<(f64, f64)>)> =
        tiles.iter().map(|t| (t.chirality, t.vertices().iter().map(map).collect())).collect();
    let frame = Frame::of(tris.iter().flat_map(|(_, v)| v.iter()));
    let pad = 0.02 * frame.width().max(frame.height());
    let stroke = 0.004 * frame.width().max(frame.height());
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt(frame.min.0 - pad),
        fmt(-frame.max.1 - pad),
        fmt(frame.width() + 2.0 * pad),
        fmt(frame.height() + 2.0 * pad)
    )
    .expect("write to string");
    for (ch, v) in &tris {
        polygon(&mut out, v, &format!(r##"fill="{}" stroke="#333" stroke-width="{}""##, fill(*ch), fmt(stroke)));
    }
    if let Some(o) = outline {
        let v: Vec<(f64, f64)> = o.iter().map(map).collect();
        polygon(&mut out, &v, &format!(r##"fill="none" stroke="#c00" stroke-width="{}""##, fmt(2.0 * stroke)));
    }
    out.push_str("</svg>\n");
    out
}

/// All collared prototiles on one sheet: the center tile shaded, its
/// corona outlined, one cell per class.
pub fn prototile_sheet(e: &Enumeration, columns: usize) -> String {
    let cells: Vec<Vec<Drawn>> = e
        .classes
        .iter()
        .map(|c| {
            let rep = &c.representative;
            let center = (true, rep.center.chirality, rep.center.vertices().iter().map(plane).collect());
            let rest = rep.neighbors.iter().map(|t| (false, t.chirality, t.vertices().iter().map(plane).collect()));
            std::iter::once(center).chain(rest).collect()
        })
        .collect();
    let frame = Frame::of(cells.iter().flatten().flat_map(|(_, _, v)| v.iter()));
    let (w, h) = (frame.width() + 1.0, frame.height() + 2.0);
    let rows = e.len().div_ceil(columns);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" font-family="sans-serif">"#,
        fmt(w * columns as f64),
        fmt(h * rows as f64)
    )
    .expect("write to string");
    for (k, cell) in cells.iter().enumerate() {
        let (col, row) = (k % columns, k / columns);
        let ox = col as f64 * w + 0.5 - frame.min.0;
        let oy = row as f64 * h + 1.5 + frame.max.1;
        writeln!(out, r#"<g transform="translate({},{})">"#, fmt(ox), fmt(oy)).expect("write to string");
        for (is_center, ch, v) in cell {
            let style = if *is_center {
                format!(r##"fill="{}" stroke="#000" stroke-width="0.06""##, fill(*ch))
            } else {
                r##"fill="none" stroke="#777" stroke-width="0.03""##.to_string()
            };
            polygon(&mut out, v, &style);
        }
        let c = &e.classes[k];
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="0.8">{} {} (mirror {})</text>"#,
            fmt(frame.min.0),
            fmt(-frame.max.1 - 0.4),
            c.id,
            c.chirality.symbol(),
            c.mirror
        )
        .expect("write to string");
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_precision() {
        assert_eq!(fmt(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt(-0.0), "0.000000000000");
    }

    #[test]
    fn unit_scale_pulls_back_the_supertile() {
        let tiles = [TilePose::base(Chirality::Plus)];
        let svg = patch_svg(&tiles, None, Some((1.0, 0.0, 0.0, 0.0)));
        assert!(svg.contains("0.000000000000,0.000000000000 2.000000000000,0.000000000000"));
    }
}
