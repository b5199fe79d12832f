//! Long-format CSV sidecars and measured-distribution input.

use std::io::Write;
use std::path::Path;

use qwalk_core::lattice::Distribution;

use crate::error::CliError;

/// Formats `x` rounded to 12 significant digits, in its shortest form.
pub fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

/// Writes a header and `rows`, each a key column followed by
/// `position,probability`.
pub fn write_long<'a>(
    path: &Path,
    key: &str,
    rows: impl IntoIterator<Item = (String, &'a Distribution)>,
) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record([key, "position", "probability"])
        .map_err(csv_err(path))?;
    for (k, dist) in rows {
        for (x, p) in dist.iter() {
            w.write_record([k.as_str(), &x.to_string(), &sig12(p)])
                .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Writes a single distribution as `position,probability`.
pub fn write_distribution(path: &Path, dist: &Distribution) -> Result<(), CliError> {
    let mut out = String::from("position,probability\n");
    for (x, p) in dist.iter() {
        out.push_str(&format!("{x},{}\n", sig12(p)));
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(out.as_bytes()))
        .map_err(io_err(path))
}

/// Reads a `position,probability` CSV and checks that it is a normalized
/// distribution.
pub fn read_distribution(path: &Path) -> Result<Distribution, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err(path))?;
    let headers = reader.headers().map_err(csv_err(path))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["position", "probability"] {
        return Err(CliError::Input(format!(
            "{}: expected header `position,probability`, found `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut pairs = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let row = line + 2;
        let bad =
            |what: &str| CliError::Input(format!("{}: row {row}: invalid {what}", path.display()));
        let x: i64 = record[0].parse().map_err(|_| bad("position"))?;
        let p: f64 = record[1].parse().map_err(|_| bad("probability"))?;
        if !(p.is_finite() && p >= 0.0) {
            return Err(bad("probability"));
        }
        pairs.push((x, p));
    }
    if pairs.is_empty() {
        return Err(CliError::Input(format!("{}: no rows", path.display())));
    }
    let dist = Distribution::from_pairs(pairs)?;
    dist.require_normalized()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(dist)
}
