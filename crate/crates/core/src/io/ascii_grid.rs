//! ESRI-style ASCII grids: a `key value` header followed by `nrows` lines of
//! `ncols` whitespace-separated samples, north row first.

use std::fmt::Write as _;

use crate::environment::HeightGrid;
use crate::error::{Error, Result};

const DEFAULT_NODATA: f64 = -9999.0;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_ascii_grid(text: &str) -> Result<HeightGrid> {
    let mut ncols = None;
    let mut nrows = None;
    let mut cellsize = None;
    let mut nodata = None;
    let mut lines = text.lines().enumerate().peekable();

    while let Some(&(i, line)) = lines.peek() {
        let mut tokens = line.split_whitespace();
        let Some(key) = tokens.next() else {
            lines.next();
            continue;
        };
        if key.parse::<f64>().is_ok() {
            break;
        }
        let value = tokens
            .next()
            .ok_or_else(|| parse_err(i + 1, format!("header key '{key}' has no value")))?;
        let number: f64 = value
            .parse()
            .map_err(|_| parse_err(i + 1, format!("header value '{value}' is not a number")))?;
        match key.to_ascii_lowercase().as_str() {
            "ncols" => ncols = Some(number),
            "nrows" => nrows = Some(number),
            "cellsize" => cellsize = Some(number),
            "nodata_value" => nodata = Some(number),
            "xllcorner" | "yllcorner" | "xllcenter" | "yllcenter" => {}
            other => return Err(parse_err(i + 1, format!("unknown header key '{other}'"))),
        }
        lines.next();
    }

    let count = |v: Option<f64>, name: &str| -> Result<usize> {
        match v {
            Some(x) if x >= 1.0 && x.fract() == 0.0 => Ok(x as usize),
            Some(x) => Err(parse_err(1, format!("{name} must be a positive integer, got {x}"))),
            None => Err(parse_err(1, format!("missing header key {name}"))),
        }
    };
    let ncols = count(ncols, "ncols")?;
    let nrows = count(nrows, "nrows")?;
    let cellsize = cellsize.ok_or_else(|| parse_err(1, "missing header key cellsize"))?;
    let nodata = nodata.unwrap_or(DEFAULT_NODATA);

    let mut elevations = Vec::with_capacity(nrows * ncols);
    let mut void_mask = Vec::with_capacity(nrows * ncols);
    let mut rows_read = 0;
    let mut last_line = 0;
    for (i, line) in lines {
        last_line = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if rows_read == nrows {
            return Err(parse_err(i + 1, format!("more than {nrows} data rows")));
        }
        let before = elevations.len();
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| parse_err(i + 1, format!("'{token}' is not a number")))?;
            void_mask.push(v == nodata);
            elevations.push(if v == nodata { f64::NAN } else { v });
        }
        let got = elevations.len() - before;
        if got != ncols {
            return Err(parse_err(i + 1, format!("expected {ncols} values, found {got}")));
        }
        rows_read += 1;
    }
    if rows_read != nrows {
        return Err(parse_err(last_line, format!("expected {nrows} data rows, found {rows_read}")));
    }
    HeightGrid::new(nrows, ncols, cellsize, elevations, void_mask)
}

/// Writes `grid` with `NODATA_value -9999`. Finite samples use the shortest
/// representation that parses back to the same `f64`.
pub fn write_ascii_grid(grid: &HeightGrid) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ncols {}", grid.cols());
    let _ = writeln!(out, "nrows {}", grid.rows());
    let _ = writeln!(out, "xllcorner 0");
    let _ = writeln!(out, "yllcorner 0");
    let _ = writeln!(out, "cellsize {}", grid.spacing());
    let _ = writeln!(out, "NODATA_value {DEFAULT_NODATA}");
    for r in 0..grid.rows() {
        let row: Vec<String> = (0..grid.cols())
            .map(|c| match grid.elevation(r, c) {
                Some(z) => format!("{z}"),
                None => format!("{DEFAULT_NODATA}"),
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
