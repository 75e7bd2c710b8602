//! Data behind the two figures: the oscillating `r_k^{-2}` trace and the
//! zone picture of `m_k = C²k^{-2τ} ∧ ε_k²`.

use std::f64::consts::PI;

use anyhow::Result;
use boxcar_core::risk::figure2_rows;
use boxcar_core::{BoxcarKernel, SmoothnessClass, Spectrum};

use crate::table::{fmt_f64, Table};

pub const FIG1_ALPHAS: [f64; 3] = [1.0, 1.5, 2.0];
pub const FIG1_C: f64 = 0.58;
pub const FIG1_K_MAX: u64 = 500;
pub const FIG2_EPS: f64 = 1e-8;
pub const FIG2_SIGMA: f64 = 1.5;
pub const FIG2_K_MAX: u64 = 2000;

fn alpha_col(alpha: f64) -> String {
    format!("hom_{alpha}")
}

/// `k, r_k, r_k^{-2}, (πka)²` and `(c k^{-α})^{-2}` for each `α`.
/// `(πka)^2` is the floor `|r_k| <= 1/(πka)` puts under `r_k^{-2}`.
pub fn fig1(kernel: &BoxcarKernel, k_max: u64, alphas: &[f64], c: f64) -> Result<Table> {
    let mut cols = vec!["k".to_string(), "r_k".into(), "inv_sq".into(), "floor".into()];
    cols.extend(alphas.iter().map(|&a| alpha_col(a)));
    let mut t = Table::new(&cols);
    let a = kernel.a().to_f64();
    for k in 0..=k_max {
        let r = kernel.eigenvalue_at(k)?;
        let kf = k as f64;
        let mut row = vec![k.to_string(), fmt_f64(r), fmt_f64(1.0 / (r * r)), fmt_f64((PI * kf * a).powi(2))];
        for &al in alphas {
            let h = if k == 0 { 1.0 } else { c * kf.powf(-al) };
            row.push(fmt_f64(1.0 / (h * h)));
        }
        t.push(row);
    }
    t.meta("homogeneous_c", c);
    t.meta("alphas", alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
    Ok(t)
}

/// `k, ε_k², C²k^{-2τ}, m_k, zone` with `k0`, `k1` in the header.
pub fn fig2<S: Spectrum + ?Sized>(kernel: &S, class: &SmoothnessClass, eps: f64, k_max: u64) -> Result<Table> {
    let (zones, rows) = figure2_rows(kernel, class, eps, k_max)?;
    let mut t = Table::new(&["k", "eps_k_sq", "c2k_pow", "m_k", "zone"]);
    t.meta("k0", zones.k0).meta("k1", zones.k1);
    for r in rows {
        t.push(vec![
            r.k.to_string(),
            fmt_f64(r.eps_k_sq),
            fmt_f64(r.c2k_pow),
            fmt_f64(r.m_k),
            r.zone.as_str().to_string(),
        ]);
    }
    Ok(t)
}

/// A gnuplot script reading `csv`.
pub fn plot_script(which: &str, csv: &str, table: &Table) -> String {
    let head = format!(
        "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\nset xlabel 'k'\nset logscale y\n"
    );
    match which {
        "fig1" => {
            let n = table.columns.len();
            let mut s = head + &format!("set title 'r_k^{{-2}}'\nplot '{csv}' using 1:3 with lines");
            for i in 5..=n {
                s += &format!(", '' using 1:{i} with lines dt 2");
            }
            s + "\n"
        }
        _ => {
            let k0 = table.get_meta("k0").unwrap_or("0");
            let k1 = table.get_meta("k1").unwrap_or("0");
            head + &format!(
                "set logscale x\nset arrow from {k0}, graph 0 to {k0}, graph 1 nohead dt 3\n\
                 set arrow from {k1}, graph 0 to {k1}, graph 1 nohead dt 3\n\
                 plot '{csv}' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines lw 2\n"
            )
        }
    }
}
