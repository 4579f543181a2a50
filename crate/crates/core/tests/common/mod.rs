//! Test-only oracles computed from first principles.
#![allow(dead_code)]

use disco_core::discrepancy::MeasureKind;

/// Cramér–von Mises statistic `∫ (F_n(t) - t)² dt` via the order-statistic
/// formula.
pub fn cramer_von_mises(x: &[f64]) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    1.0 / (12.0 * n * n)
        + s.iter()
            .enumerate()
            .map(|(i, &v)| (v - (2.0 * i as f64 + 1.0) / (2.0 * n)).powi(2))
            .sum::<f64>()
            / n
}

// 3-point Gauss–Legendre on [0, 1], exact for degree 5
const GL: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Cell edges: a uniform grid of `grid` cells plus every extra breakpoint.
fn edges(grid: usize, extra: &[f64]) -> Vec<f64> {
    let mut e: Vec<f64> = (0..=grid).map(|k| k as f64 / grid as f64).collect();
    e.extend(extra.iter().copied().filter(|v| *v > 0.0 && *v < 1.0));
    e.push(0.5);
    e.sort_by(f64::total_cmp);
    e.dedup();
    e
}

/// Quadrature nodes `(t, weight)` over [0, 1]; the integrand must be
/// polynomial (degree ≤ 5) between consecutive edges.
fn nodes_1d(edges: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(3 * edges.len());
    for w in edges.windows(2) {
        let h = w[1] - w[0];
        for (u, wt) in GL {
            out.push((w[0] + h * u, h * wt));
        }
    }
    out
}

/// Nodes `(a, b, weight)` over the unit square for an integrand that is
/// polynomial on each cell, except across the diagonal `a = b`, which is
/// resolved by splitting diagonal cells into triangles. `lower` keeps `a < b`,
/// `upper` keeps `a > b`.
fn nodes_pairs(edges: &[f64], lower: bool, upper: bool) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let cells: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1] - w[0])).collect();
    for (ia, &(a0, ha)) in cells.iter().enumerate() {
        for (ib, &(b0, hb)) in cells.iter().enumerate() {
            if ia == ib {
                // Duffy map of each triangle onto the unit square
                for (s, ws) in GL {
                    for (t, wt) in GL {
                        let w = ha * ha * s * ws * wt;
                        if lower {
                            out.push((a0 + ha * s * t, a0 + ha * s, w));
                        }
                        if upper {
                            out.push((a0 + ha * s, a0 + ha * s * t, w));
                        }
                    }
                }
                continue;
            }
            if (ia < ib && !lower) || (ia > ib && !upper) {
                continue;
            }
            for (u, wu) in GL {
                for (v, wv) in GL {
                    out.push((a0 + ha * u, b0 + hb * v, ha * hb * wu * wv));
                }
            }
        }
    }
    out
}

/// Box side anchored at `t`: `(length, contains(x))`.
type Side = fn(t: f64, x: f64) -> (f64, bool);

fn star_side(t: f64, x: f64) -> (f64, bool) {
    (t, x < t)
}

fn upper_side(t: f64, x: f64) -> (f64, bool) {
    (1.0 - t, x >= t)
}

fn centered_side(t: f64, x: f64) -> (f64, bool) {
    if t < 0.5 {
        (t, x < t)
    } else {
        (1.0 - t, x >= t)
    }
}

/// `∫_{[0,1]^|u|} (vol(B(t)) - #{x_i ∈ B(t)} / n)² dt` over the coordinates
/// `u`, with one side rule per coordinate.
fn local_l2(points: &[Vec<f64>], u: &[usize], sides: &[Side], grid: usize) -> f64 {
    let n = points.len() as f64;
    let axis_nodes: Vec<Vec<(f64, f64)>> = u
        .iter()
        .map(|&k| {
            let coords: Vec<f64> = points.iter().map(|p| p[k]).collect();
            nodes_1d(&edges(grid, &coords))
        })
        .collect();
    let integrand = |t: &[f64]| -> f64 {
        let vol: f64 = t.iter().zip(sides).map(|(&tk, side)| side(tk, 0.0).0).product();
        let count = points
            .iter()
            .filter(|p| u.iter().zip(t).zip(sides).all(|((&k, &tk), side)| side(tk, p[k]).1))
            .count() as f64;
        (vol - count / n).powi(2)
    };
    match u.len() {
        1 => axis_nodes[0].iter().map(|&(t, w)| w * integrand(&[t])).sum(),
        2 => {
            let mut acc = 0.0;
            for &(t0, w0) in &axis_nodes[0] {
                for &(t1, w1) in &axis_nodes[1] {
                    acc += w0 * w1 * integrand(&[t0, t1]);
                }
            }
            acc
        }
        _ => unreachable!("oracle covers d <= 2"),
    }
}

/// Interval indexed by a pair `(a, b)`: `(length, contains(x))`.
fn unanchored_interval(a: f64, b: f64, x: f64) -> (f64, bool) {
    (b - a, a <= x && x < b)
}

fn wrapped_interval(a: f64, b: f64, x: f64) -> (f64, bool) {
    if a <= b {
        (b - a, a <= x && x < b)
    } else {
        (1.0 - (a - b), x >= a || x < b)
    }
}

/// Per-axis moments of a pair-indexed family: `∫ vol²`, `∫ vol·χ_i` and
/// `∫ χ_i χ_j`.
struct Moments {
    vv: f64,
    vc: Vec<f64>,
    cc: Vec<Vec<f64>>,
}

fn pair_moments(coords: &[f64], wrapped: bool, grid: usize) -> Moments {
    let n = coords.len();
    let interval = if wrapped { wrapped_interval } else { unanchored_interval };
    let nodes = nodes_pairs(&edges(grid, coords), true, wrapped);
    let mut m = Moments {
        vv: 0.0,
        vc: vec![0.0; n],
        cc: vec![vec![0.0; n]; n],
    };
    let mut inside = Vec::with_capacity(n);
    for (a, b, w) in nodes {
        let len = interval(a, b, 0.0).0;
        m.vv += w * len * len;
        inside.clear();
        inside.extend((0..n).filter(|&i| interval(a, b, coords[i]).1));
        for &i in &inside {
            m.vc[i] += w * len;
            for &j in &inside {
                m.cc[i][j] += w;
            }
        }
    }
    m
}

/// `∫ (vol - count / n)²` over the pair-indexed family on the axes `u`,
/// expanded by Fubini into per-axis moments.
fn pair_l2(points: &[Vec<f64>], u: &[usize], wrapped: bool, grid: usize) -> f64 {
    let n = points.len();
    let moments: Vec<Moments> = u
        .iter()
        .map(|&k| pair_moments(&points.iter().map(|p| p[k]).collect::<Vec<_>>(), wrapped, grid))
        .collect();
    let nf = n as f64;
    let vv: f64 = moments.iter().map(|m| m.vv).product();
    let vc: f64 = (0..n).map(|i| moments.iter().map(|m| m.vc[i]).product::<f64>()).sum();
    let cc: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| moments.iter().map(|m| m.cc[i][j]).product::<f64>())
        .sum();
    vv - 2.0 / nf * vc + cc / (nf * nf)
}

fn nonempty_subsets(d: usize) -> Vec<Vec<usize>> {
    (1..1usize << d)
        .map(|mask| (0..d).filter(|k| mask >> k & 1 == 1).collect())
        .collect()
}

/// Squared discrepancy from its defining integral, for `d ≤ 2`. Quadrature
/// uses 3-point Gauss–Legendre on a uniform `grid`-cell mesh refined at every
/// point coordinate.
pub fn grid_discrepancy(kind: MeasureKind, points: &[Vec<f64>], grid: usize) -> f64 {
    let d = points[0].len();
    assert!((1..=2).contains(&d), "oracle covers d <= 2");
    let all: Vec<usize> = (0..d).collect();
    match kind {
        MeasureKind::StarL2 => local_l2(points, &all, &vec![star_side as Side; d], grid),
        MeasureKind::Modified => nonempty_subsets(d)
            .iter()
            .map(|u| local_l2(points, u, &vec![star_side as Side; u.len()], grid))
            .sum(),
        MeasureKind::Centered => nonempty_subsets(d)
            .iter()
            .map(|u| local_l2(points, u, &vec![centered_side as Side; u.len()], grid))
            .sum(),
        MeasureKind::Symmetric => {
            // every corner-anchored box family, weighted by 2^d
            let corners: Vec<Vec<Side>> = (0..1usize << d)
                .map(|mask| {
                    (0..d)
                        .map(|k| if mask >> k & 1 == 1 { upper_side as Side } else { star_side as Side })
                        .collect()
                })
                .collect();
            2f64.powi(d as i32) * corners.iter().map(|s| local_l2(points, &all, s, grid)).sum::<f64>()
        }
        MeasureKind::L2 => pair_l2(points, &all, false, grid),
        MeasureKind::WrapAround => nonempty_subsets(d).iter().map(|u| pair_l2(points, u, true, grid)).sum(),
        MeasureKind::SErsatz => panic!("the S-ersatz has no defining integral"),
    }
}
