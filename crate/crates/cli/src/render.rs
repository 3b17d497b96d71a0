use std::fmt::Write;

use medcube_core::wallspace::CubeComplexSkeleton;
use medcube_core::MedianModel;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The 1-skeleton as an undirected DOT graph with wall names on edges.
pub fn dot(model: &MedianModel, skel: &CubeComplexSkeleton) -> String {
    let mut out = String::from("graph medcube {\n  node [shape=circle];\n");
    for v in model.ids() {
        let _ = writeln!(out, "  {};", quote(&model.label(v)));
    }
    for &(u, v, w) in skel.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(&skel.label(u)),
            quote(&skel.label(v)),
            quote(&skel.walls()[w])
        );
    }
    out.push_str("}\n");
    out
}

/// Splits the walls into two families when the crossing graph is connected,
/// bipartite, and every wall crosses another. Families are listed by wall
/// index.
pub fn two_families(model: &MedianModel) -> Option<(Vec<usize>, Vec<usize>)> {
    let k = model.wall_count();
    if k < 2 {
        return None;
    }
    let mut colour: Vec<Option<bool>> = vec![None; k];
    colour[0] = Some(false);
    let mut stack = vec![0usize];
    while let Some(w) = stack.pop() {
        let c = colour[w].expect("coloured before push");
        for u in 0..k {
            if u == w || !model.walls_cross(w, u) {
                continue;
            }
            match colour[u] {
                None => {
                    colour[u] = Some(!c);
                    stack.push(u);
                }
                Some(cu) if cu == c => return None,
                Some(_) => {}
            }
        }
    }
    if colour.iter().any(Option::is_none) {
        return None;
    }
    let a: Vec<usize> = (0..k).filter(|&w| colour[w] == Some(false)).collect();
    let b: Vec<usize> = (0..k).filter(|&w| colour[w] == Some(true)).collect();
    Some((a, b))
}

const UNIT: i64 = 48;
const MARGIN: i64 = 24;

/// An SVG drawing of a model whose walls form two crossing families. Each
/// vertex sits at (ones in the first family, ones in the second family).
pub fn svg(model: &MedianModel, skel: &CubeComplexSkeleton) -> Option<String> {
    let (fa, fb) = two_families(model)?;
    let at = |v: medcube_core::VertexId| {
        let b = model.vertex(v);
        let x = fa.iter().filter(|&&w| b.get(w)).count() as i64;
        let y = fb.iter().filter(|&&w| b.get(w)).count() as i64;
        (MARGIN + UNIT * x, MARGIN + UNIT * (fb.len() as i64 - y))
    };
    let width = 2 * MARGIN + UNIT * fa.len() as i64;
    let height = 2 * MARGIN + UNIT * fb.len() as i64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    out.push_str("  <g stroke=\"black\" stroke-width=\"2\">\n");
    for &(u, v, w) in skel.edges() {
        let (u, v) = (model.id_of(skel.vertex(u)).ok()?, model.id_of(skel.vertex(v)).ok()?);
        let ((x1, y1), (x2, y2)) = (at(u), at(v));
        let _ = writeln!(
            out,
            "    <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"><title>{}</title></line>",
            escape(&skel.walls()[w])
        );
    }
    out.push_str("  </g>\n  <g fill=\"white\" stroke=\"black\">\n");
    for v in model.ids() {
        let (x, y) = at(v);
        let _ = writeln!(
            out,
            "    <circle cx=\"{x}\" cy=\"{y}\" r=\"5\"><title>{}</title></circle>",
            escape(&model.label(v))
        );
    }
    out.push_str("  </g>\n</svg>\n");
    Some(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
