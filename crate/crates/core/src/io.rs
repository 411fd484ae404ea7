//! File formats: point clouds, cloud-set indexes, distance matrices, toy
//! CSV, and sweep-curve CSV.
//!
//! Reals are written with Rust's shortest round-trip formatting, so a value
//! read back compares equal to the one written. The binary matrix format is
//! magic `DSM1`, little-endian u64 n, then n*n little-endian f64 row-major.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3, PointCloud};
use crate::matrix::DistanceMatrix;

const MATRIX_MAGIC: &[u8; 4] = b"DSM1";

/// Default name of the ordered cloud-list file inside a cloud-set directory.
pub const INDEX_FILE: &str = "index.txt";

pub fn write_cloud(path: &Path, cloud: &PointCloud) -> Result<()> {
    let file = fs::File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    for p in cloud.points() {
        writeln!(w, "{} {} {}", p.x, p.y, p.z).map_err(Error::io(path))?;
    }
    w.flush().map_err(Error::io(path))
}

/// Reads one point per line (three whitespace-separated reals); blank lines
/// are ignored. Errors name the file and 1-based line.
pub fn read_cloud(path: &Path) -> Result<PointCloud> {
    let file = fs::File::open(path).map_err(Error::io(path))?;
    let reader = BufReader::new(file);
    let mut points = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(Error::io(path))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: format!("not a real number: {s:?}"),
            })
        };
        let mut fields = trimmed.split_whitespace();
        let (a, b, c) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), Some(c), None) => (a, b, c),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    msg: "expected exactly three coordinates".into(),
                })
            }
        };
        let point = Point3::new(parse(a)?, parse(b)?, parse(c)?).map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            msg: "non-finite coordinate".into(),
        })?;
        points.push(point);
    }
    PointCloud::new(points).map_err(|_| Error::Format {
        path: path.to_path_buf(),
        msg: "cloud file contains no points".into(),
    })
}

/// Writes each cloud to `cloud_NNNN.txt` under `dir` plus an ordered index
/// file; returns the filenames in order.
pub fn write_cloud_set(dir: &Path, clouds: &[PointCloud]) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let width = clouds.len().max(1).ilog10() as usize + 1;
    let names: Vec<String> = (0..clouds.len())
        .map(|i| format!("cloud_{i:0width$}.txt"))
        .collect();
    for (name, cloud) in names.iter().zip(clouds) {
        write_cloud(&dir.join(name), cloud)?;
    }
    let index = dir.join(INDEX_FILE);
    let mut body = String::new();
    for name in &names {
        body.push_str(name);
        body.push('\n');
    }
    fs::write(&index, body).map_err(Error::io(&index))?;
    Ok(names)
}

/// Reads a cloud set from an index file, or from a directory containing one.
/// Cloud filenames resolve relative to the index's directory.
pub fn read_cloud_set(path: &Path) -> Result<Vec<PointCloud>> {
    let index = if path.is_dir() {
        path.join(INDEX_FILE)
    } else {
        path.to_path_buf()
    };
    let base = index.parent().map(PathBuf::from).unwrap_or_default();
    let body = fs::read_to_string(&index).map_err(Error::io(&index))?;
    let mut clouds = Vec::new();
    for line in body.lines() {
        let name = line.trim();
        if name.is_empty() {
            continue;
        }
        clouds.push(read_cloud(&base.join(name))?);
    }
    if clouds.is_empty() {
        return Err(Error::Format {
            path: index,
            msg: "index lists no clouds".into(),
        });
    }
    Ok(clouds)
}

pub fn write_matrix_csv(path: &Path, m: &DistanceMatrix) -> Result<()> {
    let file = fs::File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", row.join(",")).map_err(Error::io(path))?;
    }
    w.flush().map_err(Error::io(path))
}

pub fn write_matrix_binary(path: &Path, m: &DistanceMatrix) -> Result<()> {
    let file = fs::File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    w.write_all(MATRIX_MAGIC).map_err(Error::io(path))?;
    w.write_all(&(m.n() as u64).to_le_bytes())
        .map_err(Error::io(path))?;
    for v in m.entries() {
        w.write_all(&v.to_le_bytes()).map_err(Error::io(path))?;
    }
    w.flush().map_err(Error::io(path))
}

/// Reads a matrix in either format, sniffing the binary magic.
pub fn read_matrix(path: &Path) -> Result<DistanceMatrix> {
    let mut file = fs::File::open(path).map_err(Error::io(path))?;
    let mut head = [0u8; 4];
    let got = file.read(&mut head).map_err(Error::io(path))?;
    if got == 4 && &head == MATRIX_MAGIC {
        read_matrix_binary_body(path, file)
    } else {
        drop(file);
        read_matrix_csv(path)
    }
}

pub fn read_matrix_csv(path: &Path) -> Result<DistanceMatrix> {
    let body = fs::read_to_string(path).map_err(Error::io(path))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    msg: format!("not a real number: {:?}", s.trim()),
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: "matrix is not square".into(),
        });
    }
    DistanceMatrix::new(n, rows.into_iter().flatten().collect()).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        msg: format!("invalid distance matrix: {e}"),
    })
}

pub fn read_matrix_binary(path: &Path) -> Result<DistanceMatrix> {
    let mut file = fs::File::open(path).map_err(Error::io(path))?;
    let mut head = [0u8; 4];
    file.read_exact(&mut head).map_err(Error::io(path))?;
    if &head != MATRIX_MAGIC {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: "bad magic, expected DSM1".into(),
        });
    }
    read_matrix_binary_body(path, file)
}

fn read_matrix_binary_body(path: &Path, mut file: fs::File) -> Result<DistanceMatrix> {
    let mut len_bytes = [0u8; 8];
    file.read_exact(&mut len_bytes).map_err(Error::io(path))?;
    let n = u64::from_le_bytes(len_bytes) as usize;
    let mut body = Vec::new();
    file.read_to_end(&mut body).map_err(Error::io(path))?;
    if body.len() != n * n * 8 {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: format!("expected {} entry bytes, found {}", n * n * 8, body.len()),
        });
    }
    let entries: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    DistanceMatrix::new(n, entries).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        msg: format!("invalid distance matrix: {e}"),
    })
}

/// Writes `x,y,true_label` rows with a header line.
pub fn write_toy_csv(path: &Path, points: &[Point2], labels: &[usize]) -> Result<()> {
    let file = fs::File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "x,y,true_label").map_err(Error::io(path))?;
    for (p, l) in points.iter().zip(labels) {
        writeln!(w, "{},{},{l}", p.x, p.y).map_err(Error::io(path))?;
    }
    w.flush().map_err(Error::io(path))
}

/// Reads numeric row vectors from a CSV file. A first line that does not
/// parse as numbers is treated as a header; columns named `true_label` or
/// `label` are dropped.
pub fn read_vectors_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let body = fs::read_to_string(path).map_err(Error::io(path))?;
    let mut keep: Option<Vec<bool>> = None;
    let mut vectors: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if idx == 0 && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            keep = Some(
                fields
                    .iter()
                    .map(|f| !matches!(*f, "true_label" | "label"))
                    .collect(),
            );
            continue;
        }
        let mask = keep.clone().unwrap_or_else(|| vec![true; fields.len()]);
        if fields.len() != mask.len() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: format!("expected {} columns, got {}", mask.len(), fields.len()),
            });
        }
        let row: Vec<f64> = fields
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(s, _)| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    msg: format!("not a real number: {s:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    msg: "ragged rows".into(),
                });
            }
        } else {
            width = Some(row.len());
        }
        vectors.push(row);
    }
    if vectors.is_empty() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: "no data rows".into(),
        });
    }
    Ok(vectors)
}

/// Writes a sweep curve as `k,score` rows with a header line.
pub fn write_curve_csv(path: &Path, ks: &[usize], scores: &[f64]) -> Result<()> {
    let file = fs::File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "k,score").map_err(Error::io(path))?;
    for (k, s) in ks.iter().zip(scores) {
        writeln!(w, "{k},{s}").map_err(Error::io(path))?;
    }
    w.flush().map_err(Error::io(path))
}
