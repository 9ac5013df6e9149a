//! Plot-ready files.
//!
//! CSVs use `\n` line endings and `{:.16e}` numbers, which round-trip every
//! `f64`. `scalogram.bin` is a one-line text header
//! `rows cols e_min e_max t_min t_max` followed by `rows * cols` row-major
//! little-endian `f64` magnitudes (energy in eV, time in optical cycles).

use std::io::{self, BufRead, Read, Write};

use crate::propagator::Trajectory;
use crate::spectral::{Scalogram, Spectrum};

pub const TRAJECTORY_HEADER: &str = "t_oc,D_x,D_y,L_z,norm";
pub const SPECTRUM_HEADER: &str = "energy_eV,power";

fn invalid(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for i in 0..traj.len() {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            traj.time_oc(i),
            traj.dipole[i][0],
            traj.dipole[i][1],
            traj.lz[i],
            traj.norm[i]
        )?;
    }
    w.flush()
}

pub fn write_spectrum_csv<W: Write>(mut w: W, spectrum: &Spectrum) -> io::Result<()> {
    writeln!(w, "{SPECTRUM_HEADER}")?;
    for (e, p) in spectrum.energies.iter().zip(&spectrum.power) {
        writeln!(w, "{e:.16e},{p:.16e}")?;
    }
    w.flush()
}

/// Rows of a numeric CSV with the expected header.
pub fn read_csv<R: BufRead>(r: R, header: &str) -> io::Result<Vec<Vec<f64>>> {
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(h)) if h == header => {}
        Some(Ok(h)) => return Err(invalid(format!("expected header {header:?}, got {h:?}"))),
        Some(Err(e)) => return Err(e),
        None => return Err(invalid("empty file")),
    }
    let width = header.split(',').count();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        let row = line
            .split(',')
            .map(|f| f.parse::<f64>().map_err(|e| invalid(format!("line {}: {e}", n + 2))))
            .collect::<io::Result<Vec<f64>>>()?;
        if row.len() != width {
            return Err(invalid(format!("line {}: {} fields, expected {width}", n + 2, row.len())));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_scalogram_bin<W: Write>(mut w: W, s: &Scalogram) -> io::Result<()> {
    let first = |v: &[f64]| v.first().copied().unwrap_or(0.0);
    let last = |v: &[f64]| v.last().copied().unwrap_or(0.0);
    writeln!(
        w,
        "{} {} {:e} {:e} {:e} {:e}",
        s.rows(),
        s.cols(),
        first(&s.energies),
        last(&s.energies),
        first(&s.times_oc),
        last(&s.times_oc)
    )?;
    for v in &s.magnitude {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalogramFile {
    pub rows: usize,
    pub cols: usize,
    pub energy_range: [f64; 2],
    pub time_range: [f64; 2],
    pub data: Vec<f64>,
}

pub fn read_scalogram_bin<R: Read>(mut r: R) -> io::Result<ScalogramFile> {
    let mut header = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        r.read_exact(&mut byte)?;
        if byte[0] == b'\n' {
            break;
        }
        header.push(byte[0]);
    }
    let header = String::from_utf8(header).map_err(|e| invalid(e.to_string()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(invalid(format!("header has {} fields, expected 6", fields.len())));
    }
    let int = |s: &str| s.parse::<usize>().map_err(|e| invalid(e.to_string()));
    let float = |s: &str| s.parse::<f64>().map_err(|e| invalid(e.to_string()));
    let (rows, cols) = (int(fields[0])?, int(fields[1])?);
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != rows * cols * 8 {
        return Err(invalid(format!("{} data bytes for a {rows}x{cols} grid", bytes.len())));
    }
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(ScalogramFile {
        rows,
        cols,
        energy_range: [float(fields[2])?, float(fields[3])?],
        time_range: [float(fields[4])?, float(fields[5])?],
        data,
    })
}
