//! Snapshot binary format (little endian): `M: u64`, `L: f64`, `j: u64`, `t: f64`,
//! then `M` pairs `(re, im): f64`.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::SpectralError;
use crate::grid::{Field, Grid};
use crate::integrate::MonitorSample;

pub fn write_snapshot<W: Write>(w: &mut W, field: &Field, j: usize) -> std::io::Result<()> {
    w.write_all(&(field.grid.points() as u64).to_le_bytes())?;
    w.write_all(&field.grid.length().to_le_bytes())?;
    w.write_all(&(j as u64).to_le_bytes())?;
    w.write_all(&field.time.to_le_bytes())?;
    for z in &field.samples {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read8<R: Read>(r: &mut R) -> Result<[u8; 8], SpectralError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(|e| SpectralError::Snapshot(e.to_string()))?;
    Ok(b)
}

/// Returns the field and the hierarchy index `j` it was written with.
pub fn read_snapshot<R: Read>(r: &mut R) -> Result<(Field, usize), SpectralError> {
    let m = u64::from_le_bytes(read8(r)?) as usize;
    let length = f64::from_le_bytes(read8(r)?);
    let j = u64::from_le_bytes(read8(r)?) as usize;
    let time = f64::from_le_bytes(read8(r)?);
    let grid = Grid::new(m, length).map_err(|e| SpectralError::Snapshot(e.to_string()))?;
    let mut samples = Vec::with_capacity(m);
    for _ in 0..m {
        let re = f64::from_le_bytes(read8(r)?);
        let im = f64::from_le_bytes(read8(r)?);
        samples.push(Complex64::new(re, im));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(|e| SpectralError::Snapshot(e.to_string()))? != 0 {
        return Err(SpectralError::Snapshot("trailing bytes".into()));
    }
    Ok((Field { grid, samples, time }, j))
}

/// Columns: `time, mass`, then `re_I{n}, im_I{n}` per monitored functional, then `l2_error`.
pub fn write_monitor_csv<W: Write>(w: &mut W, samples: &[MonitorSample]) -> std::io::Result<()> {
    let indices: Vec<i64> = samples
        .first()
        .map(|s| s.values.iter().map(|(n, _)| *n).collect())
        .unwrap_or_default();
    write!(w, "time,mass")?;
    for n in &indices {
        write!(w, ",re_I{n},im_I{n}")?;
    }
    writeln!(w, ",l2_error")?;
    for s in samples {
        write!(w, "{:.17e},{:.17e}", s.time, s.mass)?;
        for (_, v) in &s.values {
            write!(w, ",{:.17e},{:.17e}", v.re, v.im)?;
        }
        match s.l2_error {
            Some(e) => writeln!(w, ",{e:.17e}")?,
            None => writeln!(w, ",")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip() {
        let g = Grid::new(16, 3.5).unwrap();
        let mut f = Field::from_fn(g, |x| Complex64::new(x.sin(), x * x));
        f.time = 0.25;
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, 3).unwrap();
        assert_eq!(buf.len(), 32 + 16 * 16);
        let (back, j) = read_snapshot(&mut buf.as_slice()).unwrap();
        assert_eq!(j, 3);
        assert_eq!(back, f);
        assert!(read_snapshot(&mut &buf[..40]).is_err());
        buf.push(0);
        assert!(read_snapshot(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = MonitorSample {
            time: 0.0,
            mass: 1.0,
            values: vec![(-1, Complex64::new(1.0, 0.0)), (2, Complex64::new(0.5, -0.5))],
            l2_error: None,
        };
        let mut buf = Vec::new();
        write_monitor_csv(&mut buf, &[s]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "time,mass,re_I-1,im_I-1,re_I2,im_I2,l2_error");
        assert_eq!(lines.next().unwrap().split(',').count(), 7);
    }
}
