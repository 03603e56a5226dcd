use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Column-named rows. Rendering sorts by `eps` descending, then by the time
/// column (`t` or `t_sup`) ascending, keeping insertion order for ties.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    fn column(&self, names: &[&str]) -> Option<usize> {
        self.columns.iter().position(|c| names.contains(&c.as_str()))
    }

    pub fn sorted_rows(&self) -> Vec<&Vec<Cell>> {
        let eps = self.column(&["eps"]);
        let t = self.column(&["t", "t_sup"]);
        let num = |row: &Vec<Cell>, i: Option<usize>| match i.map(|i| &row[i]) {
            Some(Cell::Num(x)) => *x,
            _ => 0.0,
        };
        let mut rows: Vec<&Vec<Cell>> = self.rows.iter().collect();
        rows.sort_by(|a, b| num(b, eps).total_cmp(&num(a, eps)).then_with(|| num(a, t).total_cmp(&num(b, t))));
        rows
    }

    /// UTF-8, comma-separated, LF line endings, numbers as `{:.11e}`.
    pub fn render(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in self.sorted_rows() {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => {
                        let _ = write!(out, "{x:.11e}");
                    }
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, table.render())
        .map_err(|e| std::io::Error::new(e.kind(), format!("writing {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(Table::new(&["eps", "t_sup", "error_h2"]).render(), "eps,t_sup,error_h2\n");
    }

    #[test]
    fn one_row_gives_two_lines() {
        let mut t = Table::new(&["eps", "t_sup", "error_h2"]);
        t.push(vec![0.1.into(), 0.5.into(), 0.0123.into()]);
        assert_eq!(t.render(), "eps,t_sup,error_h2\n1.00000000000e-1,5.00000000000e-1,1.23000000000e-2\n");
    }

    #[test]
    fn rows_sort_by_eps_then_time() {
        let mut t = Table::new(&["eps", "t", "label"]);
        for (e, s) in [(0.01, 2.0), (0.1, 1.0), (0.01, 1.0), (0.1, 0.5)] {
            t.push(vec![e.into(), s.into(), "x".into()]);
        }
        let order: Vec<(f64, f64)> = t
            .sorted_rows()
            .iter()
            .map(|r| match (&r[0], &r[1]) {
                (Cell::Num(e), Cell::Num(s)) => (*e, *s),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(order, vec![(0.1, 0.5), (0.1, 1.0), (0.01, 1.0), (0.01, 2.0)]);
    }
}
