//! The line-oriented wallspace file format.
//!
//! ```text
//! # comment
//! walls x y
//! vertex origin 0 0
//! vertex east 1 0
//! weight x 1/2
//! layer y 2
//! parallel-walls
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;

use medcube_core::metric::{format_ratio, parse_ratio, WeightedWallspace};
use medcube_core::{Bits, MedianModel};
use num_rational::BigRational;
use num_traits::{One, Signed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WallspaceFile {
    pub walls: Vec<String>,
    pub vertices: Vec<(String, Bits)>,
    /// Explicit weights by wall index; absent walls weigh 1.
    pub weights: Vec<Option<BigRational>>,
    pub layers: Vec<Option<usize>>,
    pub parallel_walls: bool,
}

/// A whitespace-separated token with its 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

pub fn parse(text: &str) -> Result<WallspaceFile, ParseError> {
    let mut file = WallspaceFile::default();
    let mut have_walls = false;
    let mut wall_index: HashMap<String, usize> = HashMap::new();
    let mut names: HashSet<String> = HashSet::new();
    let mut rows: HashSet<Bits> = HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, directive)) = toks.first() else {
            continue;
        };
        let err = |column: usize, message: String| ParseError { line, column, message };
        let end_col = content.trim_end().chars().count() + 1;
        let walls_first = || err(col, format!("`{directive}` before `walls`"));
        match directive {
            "walls" => {
                if have_walls {
                    return Err(err(col, "second `walls` directive".into()));
                }
                have_walls = true;
                for &(c, w) in &toks[1..] {
                    if wall_index.insert(w.to_string(), file.walls.len()).is_some() {
                        return Err(err(c, format!("duplicate wall `{w}`")));
                    }
                    file.walls.push(w.to_string());
                }
                file.weights = vec![None; file.walls.len()];
                file.layers = vec![None; file.walls.len()];
            }
            "vertex" => {
                if !have_walls {
                    return Err(walls_first());
                }
                let &(name_col, name) = toks.get(1).ok_or_else(|| err(end_col, "missing vertex name".into()))?;
                let bits = &toks[2..];
                if bits.len() != file.walls.len() {
                    let c = bits.get(file.walls.len()).map_or(end_col, |t| t.0);
                    return Err(err(
                        c,
                        format!(
                            "vertex `{name}` has {} coordinates, expected {}",
                            bits.len(),
                            file.walls.len()
                        ),
                    ));
                }
                let mut values = Vec::with_capacity(bits.len());
                for &(c, b) in bits {
                    match b {
                        "0" => values.push(false),
                        "1" => values.push(true),
                        _ => return Err(err(c, format!("expected 0 or 1, found `{b}`"))),
                    }
                }
                if !names.insert(name.to_string()) {
                    return Err(err(name_col, format!("duplicate vertex name `{name}`")));
                }
                let bits = Bits::from_bools(values);
                if !rows.insert(bits.clone()) {
                    return Err(err(name_col, format!("vertex `{name}` repeats coordinates {bits}")));
                }
                file.vertices.push((name.to_string(), bits));
            }
            "weight" | "layer" => {
                if !have_walls {
                    return Err(walls_first());
                }
                if toks.len() != 3 {
                    let c = toks.get(3).map_or(end_col, |t| t.0);
                    return Err(err(c, format!("`{directive}` takes a wall and a value")));
                }
                let (wall_col, wall) = toks[1];
                let (value_col, value) = toks[2];
                let &w = wall_index
                    .get(wall)
                    .ok_or_else(|| err(wall_col, format!("unknown wall `{wall}`")))?;
                if directive == "weight" {
                    let r = parse_ratio(value)
                        .filter(|r| r.is_positive())
                        .ok_or_else(|| err(value_col, format!("weight must be a positive p/q, found `{value}`")))?;
                    if file.weights[w].replace(r).is_some() {
                        return Err(err(col, format!("second weight for `{wall}`")));
                    }
                } else {
                    let i = value
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| i >= 1)
                        .ok_or_else(|| err(value_col, format!("layer must be a positive integer, found `{value}`")))?;
                    if file.layers[w].replace(i).is_some() {
                        return Err(err(col, format!("second layer for `{wall}`")));
                    }
                }
            }
            "parallel-walls" => {
                if let Some(&(c, _)) = toks.get(1) {
                    return Err(err(c, "`parallel-walls` takes no arguments".into()));
                }
                file.parallel_walls = true;
            }
            _ => return Err(err(col, format!("unknown directive `{directive}`"))),
        }
    }
    if !have_walls {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing `walls` directive".into(),
        });
    }
    if file.vertices.is_empty() {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            message: "no vertices".into(),
        });
    }
    Ok(file)
}

impl WallspaceFile {
    /// Rows for model construction.
    pub fn rows(&self) -> Vec<(Option<String>, Bits)> {
        self.vertices.iter().map(|(n, b)| (Some(n.clone()), b.clone())).collect()
    }

    pub fn weight_vector(&self) -> Vec<BigRational> {
        self.weights
            .iter()
            .map(|w| w.clone().unwrap_or_else(BigRational::one))
            .collect()
    }

    pub fn has_weights(&self) -> bool {
        self.weights.iter().any(Option::is_some)
    }

    pub fn from_model(model: &MedianModel) -> Self {
        WallspaceFile {
            walls: model.walls().to_vec(),
            vertices: model.ids().map(|v| (model.label(v), model.vertex(v).clone())).collect(),
            weights: vec![None; model.wall_count()],
            layers: vec![None; model.wall_count()],
            parallel_walls: model.allows_parallel_walls(),
        }
    }

    pub fn from_wallspace(ws: &WeightedWallspace) -> Self {
        let mut file = Self::from_model(ws.model());
        file.weights = ws
            .weights()
            .iter()
            .map(|w| (!w.is_one()).then(|| w.clone()))
            .collect();
        file
    }

    /// The canonical text: vertices in lexicographic bit order, unit weights
    /// omitted, directives in a fixed order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("walls");
        for w in &self.walls {
            out.push(' ');
            out.push_str(w);
        }
        out.push('\n');
        if self.parallel_walls {
            out.push_str("parallel-walls\n");
        }
        let mut vertices = self.vertices.clone();
        vertices.sort_by(|a, b| a.1.cmp(&b.1));
        for (name, bits) in &vertices {
            out.push_str("vertex ");
            out.push_str(name);
            for b in bits.iter() {
                out.push_str(if b { " 1" } else { " 0" });
            }
            out.push('\n');
        }
        for (w, weight) in self.weights.iter().enumerate() {
            if let Some(r) = weight.as_ref().filter(|r| !r.is_one()) {
                out.push_str(&format!("weight {} {}\n", self.walls[w], format_ratio(r)));
            }
        }
        for (w, layer) in self.layers.iter().enumerate() {
            if let Some(i) = layer {
                out.push_str(&format!("layer {} {}\n", self.walls[w], i));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "# the unit square\nwalls x y\nvertex a 0 0\nvertex b 1 0\nvertex c 1 1\nvertex d 0 1\n";

    #[test]
    fn parses_a_square() {
        let f = parse(SQUARE).unwrap();
        assert_eq!(f.walls, ["x", "y"]);
        assert_eq!(f.vertices.len(), 4);
        assert!(!f.has_weights());
    }

    #[test]
    fn reports_positions() {
        let e = parse("walls x y\nvertex a 0 0 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 14));
        let e = parse("walls x y\nvertex a 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        let e = parse("walls x\n  frobnicate\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("frobnicate"));
        let e = parse("walls x\nvertex a 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        let e = parse("walls x\nvertex a 0\nweight z 1/2\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));
        let e = parse("walls x\nvertex a 0\nweight x 0/2\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));
        let e = parse("vertex a 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(parse("walls x\nvertex a 0\nvertex a 1\n").is_err());
        assert!(parse("walls x\nvertex a 0\nvertex b 0\n").is_err());
        assert!(parse("walls x x\n").is_err());
        assert!(parse("# nothing\n").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let text = "walls x y\nvertex d 0 1\nvertex a 0 0\nweight y 2/4\nlayer x 3\nvertex b 1 0\nweight x 1\n";
        let f = parse(text).unwrap();
        let canon = f.serialize();
        assert_eq!(
            canon,
            "walls x y\nvertex a 0 0\nvertex d 0 1\nvertex b 1 0\nweight y 1/2\nlayer x 3\n"
        );
        assert_eq!(parse(&canon).unwrap().serialize(), canon);
    }
}
