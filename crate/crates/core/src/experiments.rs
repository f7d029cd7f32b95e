//! Improvement tables and their qualitative trends.
//!
//! [`boundary_rate_table`] is the Poisson table with every `θ_j` set to the
//! boundary index `m = A + 1`, for `A ∈ {1, 3, 5, 7, 9}` and `n = 1, …, 10`.

use serde::Serialize;

use crate::distributions::{FamilyKind, FamilyParam};
use crate::error::{Error, Result};
use crate::estimators::ThresholdRule;
use crate::risk::{improvement_exact, truncation_risk, TruncationRisk};

pub const BOUNDARY_TABLE_THRESHOLDS: [f64; 5] = [1.0, 3.0, 5.0, 7.0, 9.0];
pub const BOUNDARY_TABLE_SIZES: [usize; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

/// Squared-error improvement of `V*` over `V` per `(A, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementGrid {
    a_values: Vec<f64>,
    n_values: Vec<usize>,
    /// Row-major: `cells[i][j]` is `(a_values[i], n_values[j])`.
    cells: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    #[serde(rename = "A")]
    pub a: f64,
    pub n: usize,
    pub improvement: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellFormat {
    Significant(usize),
    Decimals(usize),
}

impl CellFormat {
    /// Renders `x` with this precision.
    pub fn format(self, x: f64) -> String {
        format_cell(x, self)
    }
}

fn format_cell(x: f64, format: CellFormat) -> String {
    match format {
        CellFormat::Decimals(d) => format!("{x:.d$}"),
        CellFormat::Significant(digits) => {
            if x == 0.0 || !x.is_finite() {
                return format!("{x}");
            }
            let magnitude = x.abs().log10().floor() as i64;
            let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
            format!("{x:.decimals$}")
        }
    }
}

impl ImprovementGrid {
    pub fn new(a_values: Vec<f64>, n_values: Vec<usize>, cells: Vec<Vec<f64>>) -> Result<Self> {
        if cells.len() != a_values.len() || cells.iter().any(|row| row.len() != n_values.len()) {
            return Err(Error::InvalidParameter(format!(
                "grid cells must be {} × {}",
                a_values.len(),
                n_values.len()
            )));
        }
        if let Some(bad) = cells.iter().flatten().find(|c| !(**c >= 0.0)) {
            return Err(Error::InvalidParameter(format!("grid cells must be nonnegative, got {bad}")));
        }
        Ok(ImprovementGrid { a_values, n_values, cells })
    }

    pub fn a_values(&self) -> &[f64] {
        &self.a_values
    }

    pub fn n_values(&self) -> &[usize] {
        &self.n_values
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.cells
    }

    /// Cell at threshold `a` and size `n`, if both are on the grid.
    pub fn get(&self, a: f64, n: usize) -> Option<f64> {
        let i = self.a_values.iter().position(|&x| x == a)?;
        let j = self.n_values.iter().position(|&x| x == n)?;
        Some(self.cells[i][j])
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<GridCell> {
        self.a_values
            .iter()
            .zip(&self.cells)
            .flat_map(|(&a, row)| {
                self.n_values
                    .iter()
                    .zip(row)
                    .map(move |(&n, &improvement)| GridCell { a, n, improvement })
            })
            .collect()
    }

    /// CSV with header `A,n_1,n_2,…` and one row per threshold.
    pub fn to_csv(&self, format: CellFormat) -> String {
        let mut out = String::from("A");
        for n in &self.n_values {
            out.push_str(&format!(",{n}"));
        }
        out.push('\n');
        for (a, row) in self.a_values.iter().zip(&self.cells) {
            out.push_str(&format!("{a}"));
            for &c in row {
                out.push(',');
                out.push_str(&format_cell(c, format));
            }
            out.push('\n');
        }
        out
    }
}

/// Improvement grid for `kind` with every component at parameter `theta`.
pub fn family_improvement_table(
    kind: FamilyKind,
    a_values: &[f64],
    n_values: &[usize],
    theta: f64,
) -> Result<ImprovementGrid> {
    let fam = FamilyParam::new(kind, theta)?;
    let cells = a_values
        .iter()
        .map(|&a| {
            let rule = ThresholdRule::at_most(a)?;
            n_values
                .iter()
                .map(|&n| {
                    if n == 0 {
                        return Err(Error::InvalidParameter("n must be at least 1".into()));
                    }
                    improvement_exact(&vec![fam; n], &rule)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ImprovementGrid::new(a_values.to_vec(), n_values.to_vec(), cells)
}

/// Poisson improvements with `θ_j = A + 1` for the standard thresholds and
/// `n = 1, …, 10`.
pub fn boundary_rate_table() -> ImprovementGrid {
    let cells = BOUNDARY_TABLE_THRESHOLDS
        .iter()
        .map(|&a| {
            let rule = ThresholdRule::at_most(a).expect("table thresholds are valid");
            let fam = FamilyParam::poisson(rule.boundary() as f64).expect("boundary rate is positive");
            BOUNDARY_TABLE_SIZES
                .iter()
                .map(|&n| improvement_exact(&vec![fam; n], &rule).expect("poisson at_most is supported"))
                .collect()
        })
        .collect();
    ImprovementGrid::new(BOUNDARY_TABLE_THRESHOLDS.to_vec(), BOUNDARY_TABLE_SIZES.to_vec(), cells)
        .expect("table dimensions are fixed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail,
    /// Nothing to compare.
    Vacuous,
}

impl Check {
    pub fn passed(self) -> bool {
        self != Check::Fail
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrendReport {
    /// Every row ends (largest `n`) below its own maximum.
    pub falls_off_in_n: Check,
    /// At `n = 1`, cells strictly increase with `A`.
    pub rises_in_a_at_n1: Check,
}

impl TrendReport {
    pub fn passed(&self) -> bool {
        self.falls_off_in_n.passed() && self.rises_in_a_at_n1.passed()
    }
}

pub fn trend_report(grid: &ImprovementGrid) -> TrendReport {
    let falls_off_in_n = if grid.n_values.len() < 2 || grid.a_values.is_empty() {
        Check::Vacuous
    } else {
        let last = grid.n_values.iter().enumerate().max_by_key(|(_, &n)| n).map(|(j, _)| j).unwrap();
        Check::from_bool(grid.cells.iter().all(|row| {
            let peak = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            row[last] < peak
        }))
    };

    let rises_in_a_at_n1 = match grid.n_values.iter().position(|&n| n == 1) {
        Some(j) if grid.a_values.len() >= 2 => {
            let mut column: Vec<(f64, f64)> = grid.a_values.iter().zip(&grid.cells).map(|(&a, row)| (a, row[j])).collect();
            column.sort_by(|x, y| x.0.total_cmp(&y.0));
            Check::from_bool(column.windows(2).all(|w| w[1].1 > w[0].1))
        }
        _ => Check::Vacuous,
    };

    TrendReport { falls_off_in_n, rises_in_a_at_n1 }
}

/// [`truncation_risk`] over several rates.
pub fn truncation_sweep(thetas: &[f64], rule: &ThresholdRule) -> Result<Vec<TruncationRisk>> {
    thetas
        .iter()
        .map(|&t| truncation_risk(&FamilyParam::poisson(t)?, rule))
        .collect()
}
