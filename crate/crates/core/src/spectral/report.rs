use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::SpectralSequence;
use crate::filtered::Orientation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub p: i32,
    pub q: i32,
    #[serde(rename = "dimE")]
    pub dim_e: usize,
    pub d_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageReport {
    pub r: usize,
    pub cells: Vec<CellReport>,
    pub stable_from: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub orientation: Orientation,
    pub pages: Vec<PageReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub stable_from: usize,
    /// Nonzero `dim E_∞` cells.
    #[serde(serialize_with = "pairs")]
    pub infinity: BTreeMap<(i32, i32), usize>,
    pub total_by_degree: BTreeMap<i32, usize>,
    pub betti: BTreeMap<i32, usize>,
    /// `(p, q, dim E_∞, dim gr H)` where they differ.
    pub mismatches: Vec<(i32, i32, usize, usize)>,
}

impl LimitReport {
    pub fn converges(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn pairs<S: serde::Serializer>(m: &BTreeMap<(i32, i32), usize>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for ((p, q), d) in m {
        seq.serialize_element(&serde_json::json!({"p": p, "q": q, "dimE": d}))?;
    }
    seq.end()
}

impl SpectralSequence {
    pub fn report(&self) -> Vec<PageReport> {
        let stable_from = self.stable_from();
        self.pages
            .iter()
            .map(|pg| PageReport {
                r: pg.r,
                cells: pg
                    .cells
                    .iter()
                    .map(|(&(p, q), c)| CellReport { p, q, dim_e: c.dim(), d_rank: pg.differential[&(p, q)].rank() })
                    .collect(),
                stable_from,
            })
            .collect()
    }

    /// Page `r` as a grid: rows are `q` descending, columns are `p`, entries
    /// `dim` with the rank of the outgoing differential in brackets when nonzero.
    pub fn render_page(&self, r: usize) -> String {
        let pg = &self.pages[r];
        let ps: Vec<i32> = {
            let mut v: Vec<i32> = pg.cells.keys().map(|k| k.0).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut qs: Vec<i32> = pg.cells.keys().map(|k| k.1).collect();
        qs.sort_unstable();
        qs.dedup();
        qs.reverse();
        let entry = |p: i32, q: i32| -> String {
            match pg.cells.get(&(p, q)) {
                None => ".".into(),
                Some(c) => {
                    let rank = pg.differential[&(p, q)].rank();
                    if rank > 0 {
                        format!("{}[{}]", c.dim(), rank)
                    } else {
                        c.dim().to_string()
                    }
                }
            }
        };
        let width = ps
            .iter()
            .flat_map(|&p| qs.iter().map(move |&q| (p, q)))
            .map(|(p, q)| entry(p, q).len())
            .chain(ps.iter().map(|p| p.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(2);
        let mut out = String::new();
        let label = match self.orientation {
            Orientation::Cochain => "E_",
            Orientation::Chain => "E^",
        };
        let _ = writeln!(out, "{label}{r}");
        for &q in &qs {
            let _ = write!(out, "q={q:>3} |");
            for &p in &ps {
                let _ = write!(out, " {:>width$}", entry(p, q));
            }
            out.push('\n');
        }
        let _ = write!(out, "      +");
        for _ in &ps {
            let _ = write!(out, "{}", "-".repeat(width + 1));
        }
        out.push('\n');
        let _ = write!(out, "     p ");
        for &p in &ps {
            let _ = write!(out, " {p:>width$}");
        }
        out.push('\n');
        out
    }
}
