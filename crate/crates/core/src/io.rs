//! Text formats: operator matrices, coupling tables, scene files and sweep CSV.
//!
//! Every real number is written with 17 significant digits, which reads
//! back to the identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grading::{CouplingTable, SymmetryKind};
use crate::operator::{BasisLabel, ComplexMatrix};
use crate::scatter2d::{default_global_order, Disc, OperatorMode, Scene, SimConfig};

/// `x` with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_real(token: &str, line: usize) -> Result<f64> {
    let x: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("'{token}' is not a number")))?;
    if !x.is_finite() {
        return Err(Error::parse(line, format!("'{token}' is not finite")));
    }
    Ok(x)
}

fn parse_int<T: std::str::FromStr>(token: &str, line: usize) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("'{token}' is not an integer")))
}

/// Non-blank lines that are not `#` comments, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn write_label(out: &mut String, side: &str, index: usize, label: &BasisLabel) {
    write!(
        out,
        "{side} {index} {} {}",
        format_real(label.gamma.re),
        format_real(label.gamma.im)
    )
    .unwrap();
    for e in &label.eta {
        write!(out, " {e}").unwrap();
    }
    out.push('\n');
}

/// Matrix file: `rows cols`, one line of `re im` pairs per row, then one
/// `row <i> gamma_re gamma_im eta...` line per row label and likewise `col`
/// lines for the column labels.
pub fn matrix_to_string(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{} {}", format_real(z.re), format_real(z.im)))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    for (i, l) in m.row_labels().iter().enumerate() {
        write_label(&mut out, "row", i, l);
    }
    for (i, l) in m.col_labels().iter().enumerate() {
        write_label(&mut out, "col", i, l);
    }
    out
}

fn parse_label(tokens: &[&str], line: usize, n: usize, slots: &mut [Option<BasisLabel>]) -> Result<()> {
    if tokens.len() < 4 {
        return Err(Error::parse(line, "label line needs '<side> <index> gamma_re gamma_im [eta...]'"));
    }
    let index: usize = parse_int(tokens[1], line)?;
    if index >= n {
        return Err(Error::parse(line, format!("label index {index} out of range 0..{n}")));
    }
    if slots[index].is_some() {
        return Err(Error::parse(line, format!("{} label {index} given twice", tokens[0])));
    }
    let gamma = Complex64::new(parse_real(tokens[2], line)?, parse_real(tokens[3], line)?);
    let eta = tokens[4..].iter().map(|t| parse_int(t, line)).collect::<Result<Vec<i64>>>()?;
    slots[index] = Some(BasisLabel::new(gamma, eta));
    Ok(())
}

fn collect_labels(slots: Vec<Option<BasisLabel>>, side: &str) -> Result<Option<Vec<BasisLabel>>> {
    if slots.iter().all(Option::is_none) {
        return Ok(None);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::InvalidLabels(format!("{side} label {i} missing"))))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Inverse of [`matrix_to_string`]. Missing `col` lines reuse the row labels
/// of a square matrix; missing labels altogether leave index labels.
pub fn matrix_from_str(text: &str) -> Result<ComplexMatrix> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::parse(line, "header must be 'rows cols'"));
    }
    let (rows, cols): (usize, usize) = (parse_int(dims[0], line)?, parse_int(dims[1], line)?);
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (line, text) = lines
            .next()
            .ok_or_else(|| Error::parse(line + r + 1, format!("expected {rows} data rows, found {r}")))?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 2 * cols {
            return Err(Error::parse(
                line,
                format!("row {r} has {} numbers, expected {}", tokens.len(), 2 * cols),
            ));
        }
        for pair in tokens.chunks(2) {
            data.push(Complex64::new(parse_real(pair[0], line)?, parse_real(pair[1], line)?));
        }
    }
    let mut row_slots = vec![None; rows];
    let mut col_slots = vec![None; cols];
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match tokens[0] {
            "row" => parse_label(&tokens, line, rows, &mut row_slots)?,
            "col" => parse_label(&tokens, line, cols, &mut col_slots)?,
            other => return Err(Error::parse(line, format!("unexpected '{other}', expected a label line"))),
        }
    }
    let m = ComplexMatrix::from_vec(rows, cols, data)?;
    let row_labels = collect_labels(row_slots, "row")?;
    let col_labels = collect_labels(col_slots, "col")?;
    match (row_labels, col_labels) {
        (None, None) => Ok(m),
        (Some(r), Some(c)) => m.with_labels(r, c),
        (Some(r), None) if rows == cols => m.with_square_labels(r),
        (Some(r), None) => {
            let c = m.col_labels().to_vec();
            m.with_labels(r, c)
        }
        (None, Some(c)) => {
            let r = m.row_labels().to_vec();
            m.with_labels(r, c)
        }
    }
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    Ok(fs::write(path, matrix_to_string(m))?)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    matrix_from_str(&fs::read_to_string(path)?)
}

fn format_gamma(kind: SymmetryKind, g: Complex64) -> String {
    match kind {
        SymmetryKind::Continuous => format_real(g.re),
        SymmetryKind::Discrete => format!("{},{}", format_real(g.re), format_real(g.im)),
    }
}

fn parse_gamma(kind: SymmetryKind, token: &str, line: usize) -> Result<Complex64> {
    match kind {
        SymmetryKind::Continuous => Ok(Complex64::new(parse_real(token, line)?, 0.0)),
        SymmetryKind::Discrete => {
            let (re, im) = token
                .split_once(',')
                .ok_or_else(|| Error::parse(line, format!("discrete eigenvalue '{token}' must be 're,im'")))?;
            Ok(Complex64::new(parse_real(re, line)?, parse_real(im, line)?))
        }
    }
}

/// Coupling-table file: `kind: continuous|discrete`, `gammas_in: ...`,
/// `gammas_out: ...`, then one line of `X` values per outgoing eigenvalue.
/// Discrete eigenvalues are written `re,im`.
pub fn coupling_table_to_string(x: &CouplingTable) -> String {
    let kind = x.kind();
    let gammas = |gs: &[Complex64]| gs.iter().map(|&g| format_gamma(kind, g)).collect::<Vec<_>>().join(" ");
    let mut out = format!(
        "kind: {}\ngammas_in: {}\ngammas_out: {}\n",
        kind.name(),
        gammas(x.incoming_gammas()),
        gammas(x.outgoing_gammas())
    );
    let n_in = x.incoming_gammas().len();
    for r in 0..x.outgoing_gammas().len() {
        let row: Vec<String> = (0..n_in).map(|c| format_real(x.get(r, c))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn header<'a>(entry: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (line, text) = entry.ok_or_else(|| Error::parse(0, format!("missing '{key}:' line")))?;
    let rest = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| Error::parse(line, format!("expected '{key}:'")))?;
    Ok((line, rest.trim()))
}

pub fn coupling_table_from_str(text: &str) -> Result<CouplingTable> {
    let mut lines = content_lines(text);
    let (line, kind) = header(lines.next(), "kind")?;
    let kind = match kind {
        "continuous" => SymmetryKind::Continuous,
        "discrete" => SymmetryKind::Discrete,
        other => return Err(Error::parse(line, format!("unknown symmetry kind '{other}'"))),
    };
    let mut gammas = |key| -> Result<Vec<Complex64>> {
        let (line, rest) = header(lines.next(), key)?;
        rest.split_whitespace().map(|t| parse_gamma(kind, t, line)).collect()
    };
    let incoming = gammas("gammas_in")?;
    let outgoing = gammas("gammas_out")?;
    let mut values = Vec::with_capacity(incoming.len() * outgoing.len());
    let mut rows = 0;
    for (line, text) in lines {
        let row = text.split_whitespace().map(|t| parse_real(t, line)).collect::<Result<Vec<f64>>>()?;
        if row.len() != incoming.len() {
            return Err(Error::parse(
                line,
                format!("table row has {} values, expected {}", row.len(), incoming.len()),
            ));
        }
        values.extend(row);
        rows += 1;
    }
    if rows != outgoing.len() {
        return Err(Error::parse(
            0,
            format!("table has {rows} rows, expected {}", outgoing.len()),
        ));
    }
    CouplingTable::new(kind, incoming, outgoing, values)
}

pub fn write_coupling_table(path: impl AsRef<Path>, x: &CouplingTable) -> Result<()> {
    Ok(fs::write(path, coupling_table_to_string(x))?)
}

pub fn read_coupling_table(path: impl AsRef<Path>) -> Result<CouplingTable> {
    coupling_table_from_str(&fs::read_to_string(path)?)
}

/// Parsed scene file.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneFile {
    pub scene: Scene,
    pub global_order: Option<usize>,
    pub mode: Option<OperatorMode>,
}

impl SceneFile {
    /// Simulation settings, with defaults for anything the file leaves out.
    pub fn config(&self) -> SimConfig {
        SimConfig {
            global_order: self.global_order.unwrap_or_else(|| default_global_order(&self.scene)),
            local_order: None,
            mode: self.mode.unwrap_or_default(),
        }
    }
}

/// Scene file: `k = <real>`, optional `L = <int>` and
/// `mode = transition|full_s`, and one `disc <cx> <cy> <radius>` per disc.
pub fn scene_from_str(text: &str) -> Result<SceneFile> {
    let mut k = None;
    let mut global_order = None;
    let mut mode = None;
    let mut discs = Vec::new();
    for (line, text) in content_lines(text) {
        if let Some(rest) = text.strip_prefix("disc") {
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                return Err(Error::parse(line, format!("unknown entry '{text}'")));
            }
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.len() != 3 {
                return Err(Error::parse(line, "expected 'disc <cx> <cy> <radius>'"));
            }
            let v = tokens.iter().map(|t| parse_real(t, line)).collect::<Result<Vec<f64>>>()?;
            discs.push(Disc::new(v[0], v[1], v[2]));
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected 'key = value' or a disc line, got '{text}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let duplicate = || Error::parse(line, format!("'{key}' given twice"));
        match key {
            "k" => {
                if k.replace(parse_real(value, line)?).is_some() {
                    return Err(duplicate());
                }
            }
            "L" => {
                if global_order.replace(parse_int(value, line)?).is_some() {
                    return Err(duplicate());
                }
            }
            "mode" => {
                let m = value.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
                if mode.replace(m).is_some() {
                    return Err(duplicate());
                }
            }
            other => return Err(Error::parse(line, format!("unknown key '{other}'"))),
        }
    }
    let k = k.ok_or_else(|| Error::parse(0, "missing 'k = <wavenumber>'"))?;
    if discs.is_empty() {
        return Err(Error::parse(0, "scene has no disc lines"));
    }
    Ok(SceneFile {
        scene: Scene::new(discs, k)?,
        global_order,
        mode,
    })
}

pub fn scene_to_string(file: &SceneFile) -> String {
    let mut out = format!("k = {}\n", format_real(file.scene.wavenumber));
    if let Some(l) = file.global_order {
        writeln!(out, "L = {l}").unwrap();
    }
    if let Some(m) = file.mode {
        writeln!(out, "mode = {m}").unwrap();
    }
    for d in &file.scene.discs {
        writeln!(out, "disc {} {} {}", format_real(d.x), format_real(d.y), format_real(d.radius)).unwrap();
    }
    out
}

pub fn read_scene(path: impl AsRef<Path>) -> Result<SceneFile> {
    scene_from_str(&fs::read_to_string(path)?)
}

/// Generator eigenvalues, one real number per basis vector, separated by
/// whitespace or newlines.
pub fn generator_from_str(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (line, text) in content_lines(text) {
        for token in text.split_whitespace() {
            out.push(parse_real(token, line)?);
        }
    }
    if out.is_empty() {
        return Err(Error::parse(1, "generator file lists no eigenvalues"));
    }
    Ok(out)
}

pub fn read_generator(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    generator_from_str(&fs::read_to_string(path)?)
}

/// Sweep CSV with header `theta,M`.
pub fn sweep_to_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("theta,M\n");
    for (t, m) in samples {
        writeln!(out, "{},{}", format_real(*t), format_real(*m)).unwrap();
    }
    out
}

pub fn sweep_from_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "theta,M")) => {}
        _ => return Err(Error::parse(1, "expected header 'theta,M'")),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| {
            let (t, m) = l
                .split_once(',')
                .ok_or_else(|| Error::parse(line, "expected 'theta,M'"))?;
            Ok((parse_real(t, line)?, parse_real(m, line)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_matrix, rng};
    use crate::grading::{coupling_strengths, SymmetryGrading};

    #[test]
    fn matrix_round_trip_is_bit_exact() {
        let mut r = rng(7);
        let labels: Vec<BasisLabel> = (0..5)
            .map(|i| BasisLabel::new(Complex64::new(0.1 * i as f64, -1.0 / 3.0), vec![i, -i]))
            .collect();
        let m = random_matrix(&mut r, 5, 5).scale(Complex64::new(1e-300, 7e12));
        let m = m.with_square_labels(labels).unwrap();
        let back = matrix_from_str(&matrix_to_string(&m)).unwrap();
        assert_eq!(back, m);
        let rect = random_matrix(&mut r, 2, 3);
        assert_eq!(matrix_from_str(&matrix_to_string(&rect)).unwrap(), rect);
    }

    #[test]
    fn matrix_without_labels() {
        let m = matrix_from_str("2 2\n1 0 0 0\n0 0 1 0\n").unwrap();
        assert_eq!(m.as_slice(), ComplexMatrix::identity(2).as_slice());
    }

    #[test]
    fn matrix_errors_carry_lines() {
        match matrix_from_str("2 2\n1 0 0 0\n0 0 1\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matrix_from_str("1 1\n1 0\nrow 3 0 0\n").is_err());
        assert!(matrix_from_str("1 1\nx 0\n").is_err());
    }

    #[test]
    fn coupling_table_round_trip() {
        let mut r = rng(3);
        let s = random_matrix(&mut r, 4, 4);
        let g = SymmetryGrading::continuous(&[-1.0, 0.5, 0.5, 2.0]).unwrap();
        let x = coupling_strengths(&s, &g, &g).unwrap();
        assert_eq!(coupling_table_from_str(&coupling_table_to_string(&x)).unwrap(), x);

        let i = Complex64::i();
        let d = SymmetryGrading::discrete(&[i, -i, Complex64::new(1.0, 0.0), i]).unwrap();
        let x = coupling_strengths(&s, &d, &d).unwrap();
        let text = coupling_table_to_string(&x);
        assert!(text.starts_with("kind: discrete\n"));
        assert_eq!(coupling_table_from_str(&text).unwrap(), x);
    }

    #[test]
    fn scene_file_parses() {
        let text = "# two discs\nk = 6.283185307179586\nL = 25\nmode = full_s\ndisc 0 0 1\ndisc 0 1.35 0.3\n";
        let f = scene_from_str(text).unwrap();
        assert_eq!(f.scene.discs.len(), 2);
        assert_eq!(f.config().global_order, 25);
        assert_eq!(f.config().mode, OperatorMode::FullS);
        assert_eq!(scene_from_str(&scene_to_string(&f)).unwrap(), f);
    }

    #[test]
    fn scene_file_errors() {
        let err = scene_from_str("k = 1\ndisc 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("line 2"));
        assert!(matches!(scene_from_str("k = 1\nradius = 2\ndisc 0 0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(scene_from_str("k = 1\n").is_err());
        assert!(scene_from_str("k = inf\ndisc 0 0 1\n").is_err());
        assert!(scene_from_str("k = 1\nk = 2\ndisc 0 0 1\n").is_err());
        assert!(scene_from_str("k = 1\ndiscs 0 0 1\n").is_err());
        assert!(matches!(scene_from_str("k = 1\ndisc 0 0 1\ndisc 0.5 0 1\n"), Err(Error::InvalidScene(_))));
    }

    #[test]
    fn generator_file() {
        assert_eq!(generator_from_str("# gammas\n-1 0\n 2.5\n").unwrap(), vec![-1.0, 0.0, 2.5]);
        assert!(matches!(generator_from_str("1\n2 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(generator_from_str("\n").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let samples = vec![(-std::f64::consts::PI, 0.0), (0.1, 1.0 / 3.0), (2.0, 5e-17)];
        let text = sweep_to_csv(&samples);
        assert!(text.starts_with("theta,M\n-3.1415926535897931e0,"));
        assert_eq!(sweep_from_csv(&text).unwrap(), samples);
    }
}
