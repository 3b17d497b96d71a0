//! Named models: `square`, `cube-N`, `z2-N`, `z3-N`, `path-N`, `pmq-R`,
//! `star-K` and `tripod`. Other names are looked up as `NAME.walls` in the
//! directory named by `MEDCUBE_PRESET_DIR`.

use std::path::PathBuf;

use medcube_core::models::{self, GridSpec};
use medcube_core::{Error, MedianModel};

pub const PRESET_DIR_VAR: &str = "MEDCUBE_PRESET_DIR";

pub const BUILTIN: &[(&str, &str)] = &[
    ("square", "the unit square {0,1}^2"),
    ("cube-N", "the hypercube {0,1}^N"),
    ("z2-N", "the l1 grid on {0..N-1}^2"),
    ("z3-N", "the l1 grid on {0..N-1}^3"),
    ("path-N", "a path on N vertices"),
    ("pmq-R", "the plane minus the closed quadrant x<=0, y<=0 on [-R,R]^2"),
    ("star-K", "a star with K leaves"),
    ("tripod", "star-3"),
];

const MAX_CUBE: usize = 12;

/// A builtin preset, `None` if the name is not builtin.
pub fn builtin(name: &str) -> Option<Result<MedianModel, Error>> {
    if name == "square" {
        return Some(Ok(models::hypercube(2)));
    }
    if name == "tripod" {
        return builtin("star-3");
    }
    let (family, size) = name.rsplit_once('-')?;
    let size: usize = size.parse().ok()?;
    let too_large = |what: &str| Some(Err(Error::TooLarge(format!("{what} {size}"))));
    Some(match family {
        "cube" if size > MAX_CUBE => return too_large("cube dimension"),
        "cube" => Ok(models::hypercube(size)),
        "path" if size == 0 => Err(Error::InvalidCount(0)),
        "path" if size > 1 << 14 => return too_large("path length"),
        "path" => Ok(models::path(size)),
        "z2" | "z3" if size == 0 => Err(Error::InvalidCount(0)),
        "z2" | "z3" if size > 1 << 7 => return too_large("grid side"),
        "z2" => models::l1_grid(&GridSpec::boxed(&[size as i64 - 1; 2])).map(|g| g.model),
        "z3" => models::l1_grid(&GridSpec::boxed(&[size as i64 - 1; 3])).map(|g| g.model),
        "pmq" if size > 60 => return too_large("window radius"),
        "pmq" => models::plane_minus_quadrant(size as i64).map(|g| g.model),
        "star" if size == 0 => Err(Error::InvalidCount(0)),
        "star" if size > 1 << 10 => return too_large("star size"),
        "star" => {
            let leaves: Vec<String> = (1..=size).map(|i| format!("l{i}")).collect();
            let edges: Vec<(&str, &str)> = leaves.iter().map(|l| ("c", l.as_str())).collect();
            models::tree_model(&edges)
        }
        _ => return None,
    })
}

/// Path of a preset file in the preset directory, if one is configured.
pub fn preset_file(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(PRESET_DIR_VAR)?;
    let path = PathBuf::from(dir).join(format!("{name}.walls"));
    path.is_file().then_some(path)
}
