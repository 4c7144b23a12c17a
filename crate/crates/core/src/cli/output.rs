//! Plain-text renderings.

use crate::statevector::Counts;

/// Characters of a bar at frequency 1.
pub const BAR_WIDTH: usize = 50;

/// One line per observed outcome: label, bar, count and frequency. Bar
/// lengths are `round(frequency · BAR_WIDTH)`.
pub fn histogram(counts: &Counts) -> String {
    let mut out = String::new();
    let digits = counts.shots().to_string().len();
    for (label, n) in counts.iter() {
        let f = n as f64 / counts.shots() as f64;
        let bar = "#".repeat((f * BAR_WIDTH as f64).round() as usize);
        out.push_str(&format!("{label} | {bar:<BAR_WIDTH$} {n:>digits$} ({f:.4})\n"));
    }
    out
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn prob(p: f64) -> String {
    format!("{p:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bars_are_proportional() {
        let mut c = Counts::new(2);
        for _ in 0..3 {
            c.record(0b11);
        }
        c.record(0b01);
        let h = histogram(&c);
        let lines: Vec<&str> = h.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("01 | "));
        let bars: Vec<usize> = lines.iter().map(|l| l.matches('#').count()).collect();
        assert_eq!(bars, vec![13, 38]);
        for (bar, f) in bars.iter().zip([0.25, 0.75]) {
            assert!((*bar as f64 - f * BAR_WIDTH as f64).abs() <= 1.0);
        }
    }

    #[test]
    fn table_alignment() {
        let t = table(&["a", "bbb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bbb\nxyz  1\n");
    }
}
