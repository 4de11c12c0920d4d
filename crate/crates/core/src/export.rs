//! Raster output: CSV, binary PGM and a gnuplot script.

use std::io::{self, Write};

use crate::region::RegionRaster;

/// Header of axis names then `code`; one line per cell in raster order.
pub fn write_csv<W: Write>(raster: &RegionRaster, mut w: W) -> io::Result<()> {
    let header: Vec<&str> = raster.axes.iter().map(|a| a.name.as_str()).collect();
    writeln!(w, "{},code", header.join(","))?;
    for (flat, code) in raster.cells.iter().enumerate() {
        let coords: Vec<String> = raster.coords(flat).iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{},{}", coords.join(","), code)?;
    }
    Ok(())
}

/// Grey level of a cell code.
pub fn pgm_level(code: u8) -> u8 {
    code.saturating_mul(85)
}

/// P5, maxval 255, pixel = code × 85. The first axis runs left to right and the second
/// bottom to top.
pub fn write_pgm<W: Write>(raster: &RegionRaster, mut w: W) -> io::Result<()> {
    if raster.axes.len() != 2 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "PGM output needs exactly two axes",
        ));
    }
    let (nx, ny) = (raster.axes[0].count, raster.axes[1].count);
    write!(w, "P5\n{nx} {ny}\n255\n")?;
    let mut row = vec![0u8; nx];
    for y in (0..ny).rev() {
        for (x, px) in row.iter_mut().enumerate() {
            *px = pgm_level(raster.cells[x * ny + y]);
        }
        w.write_all(&row)?;
    }
    Ok(())
}

/// Gnuplot script plotting the CSV at `csv_path`.
pub fn gnuplot_script(raster: &RegionRaster, csv_path: &str, title: &str) -> String {
    let names: Vec<&str> = raster.axes.iter().map(|a| a.name.as_str()).collect();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str("set key off\n");
    s.push_str("set palette defined (0 'white', 1 'dark-green', 2 'orange', 3 'grey')\n");
    s.push_str("set cbrange [0:3]\n");
    s.push_str("set cbtics ('not stable' 0, 'stable' 1, 'boundary' 2, 'degenerate' 3)\n");
    match names.len() {
        1 => {
            s.push_str(&format!("set xlabel '{}'\nset ylabel 'code'\n", names[0]));
            s.push_str(&format!(
                "plot '{csv_path}' every ::1 using 1:2 with steps\n"
            ));
        }
        2 => {
            s.push_str(&format!(
                "set xlabel '{}'\nset ylabel '{}'\n",
                names[0], names[1]
            ));
            s.push_str("set view map\n");
            s.push_str(&format!(
                "plot '{csv_path}' every ::1 using 1:2:3 with points pt 5 ps 0.3 palette\n"
            ));
        }
        _ => {
            s.push_str(&format!(
                "set xlabel '{}'\nset ylabel '{}'\nset zlabel '{}'\n",
                names[0], names[1], names[2]
            ));
            s.push_str(&format!(
                "splot '{csv_path}' every ::1 using 1:2:3:($4 == 1 ? 1 : 1/0) with points pt 7 ps 0.3\n"
            ));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{Axis, Sampling};
    use crate::verdict::Method;

    fn raster() -> RegionRaster {
        RegionRaster {
            axes: vec![
                Axis::new("x", 0.0, 1.0, 2, Sampling::Nodes).unwrap(),
                Axis::new("y", 0.0, 2.0, 3, Sampling::Nodes).unwrap(),
            ],
            cells: vec![0, 1, 2, 3, 1, 0],
            method: Method::Theorem1,
        }
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        write_csv(&raster(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,code");
        assert_eq!(lines[1], "0,0,0");
        assert_eq!(lines[2], "0,1,1");
        assert_eq!(lines[4], "1,0,3");
        assert_eq!(lines.len(), 7);
    }

    #[test]
    fn pgm_layout() {
        let mut out = Vec::new();
        write_pgm(&raster(), &mut out).unwrap();
        let header = b"P5\n2 3\n255\n";
        assert_eq!(&out[..header.len()], header);
        // top row is y = 2: cells (0,2) = 2 and (1,2) = 0
        assert_eq!(&out[header.len()..], &[170, 0, 85, 85, 0, 255]);
    }

    #[test]
    fn pgm_needs_two_axes() {
        let mut r = raster();
        r.axes.pop();
        assert!(write_pgm(&r, Vec::new()).is_err());
    }

    #[test]
    fn script_references_csv() {
        let s = gnuplot_script(&raster(), "region.csv", "t");
        assert!(s.contains("plot 'region.csv'"));
        assert!(s.contains("set xlabel 'x'"));
    }
}
