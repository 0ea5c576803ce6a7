//! Rectangular barrier coverage front-end: reduce the minimum-shrinkage
//! question for sensor disks to a cut instance, solve it, and map powers back
//! to per-disk shrink amounts.
//!
//! Disks block an intruder crossing the rectangle bottom-to-top; the chain
//! from the left wall to the right wall must be opened. Two disks join with
//! weight `r_u + r_v - dist(u, v)` (the total shrink separating them) and a
//! disk joins a wall terminal with weight `r - dist(center, wall)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fptas::{
    solve_fast_fptas_run, solve_fptas_run, solve_integer_run, SolveOptions, SolverStats,
};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

fn default_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub x: f64,
    pub y: f64,
    #[serde(default = "default_radius")]
    pub r: f64,
}

/// Rectangle plus sensor disks; disk centers must lie inside the rectangle
/// and radii must be positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskConfig {
    pub rect: Rect,
    pub disks: Vec<Disk>,
}

impl DiskConfig {
    pub fn new(rect: Rect, disks: Vec<Disk>) -> Result<Self> {
        if !(rect.x0 < rect.x1 && rect.y0 < rect.y1)
            || ![rect.x0, rect.y0, rect.x1, rect.y1]
                .iter()
                .all(|v| v.is_finite())
        {
            return Err(Error::InvalidRectangle);
        }
        for (index, d) in disks.iter().enumerate() {
            if !d.r.is_finite() || d.r <= 0.0 {
                return Err(Error::InvalidRadius { index, radius: d.r });
            }
            if !(rect.x0 <= d.x && d.x <= rect.x1 && rect.y0 <= d.y && d.y <= rect.y1) {
                return Err(Error::DiskOutsideRectangle {
                    index,
                    x: d.x,
                    y: d.y,
                });
            }
        }
        Ok(DiskConfig { rect, disks })
    }

    /// Parses the JSON form
    /// `{"rect": {"x0":0,"y0":0,"x1":3,"y1":2}, "disks": [{"x":0.8,"y":1.0,"r":1.0}]}`
    /// (radius defaults to 1).
    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: DiskConfig =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        DiskConfig::new(raw.rect, raw.disks)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization cannot fail")
    }
}

/// Reduced cut instance with the disk-index-aligned vertex names.
#[derive(Debug, Clone)]
pub struct DiskReduction {
    pub instance: Instance,
    pub vertex_names: Vec<String>,
}

/// One vertex per disk; an edge appears exactly when its computed weight is
/// non-negative (zero-weight tangency edges are retained, they are removed by
/// any assignment).
pub fn reduce_disks(cfg: &DiskConfig) -> DiskReduction {
    let names: Vec<String> = (0..cfg.disks.len()).map(|i| format!("d{i}")).collect();
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    for (i, a) in cfg.disks.iter().enumerate() {
        let left = a.r - (a.x - cfg.rect.x0);
        if left >= 0.0 {
            edges.push(("s".to_string(), names[i].clone(), left));
        }
        let right = a.r - (cfg.rect.x1 - a.x);
        if right >= 0.0 {
            edges.push((names[i].clone(), "t".to_string(), right));
        }
        for (j, b) in cfg.disks.iter().enumerate().skip(i + 1) {
            let dist = (a.x - b.x).hypot(a.y - b.y);
            let weight = a.r + b.r - dist;
            if weight >= 0.0 {
                edges.push((names[i].clone(), names[j].clone(), weight));
            }
        }
    }
    let instance = Instance::new(names.clone(), &edges)
        .expect("reduction weights are non-negative and names are fresh");
    DiskReduction {
        instance,
        vertex_names: names,
    }
}

/// Which solver backs the shrinkage computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkMode {
    Fptas,
    Fast,
    /// Exact pseudo-polynomial solve; valid when the reduced weights happen
    /// to be integral.
    Integer,
}

/// Per-disk shrink amounts with the solver objective. Shrinks exceeding a
/// disk radius are geometrically meaningless and reported as warnings, not
/// clamped.
#[derive(Debug, Clone, Serialize)]
pub struct ShrinkResult {
    pub shrinks: Vec<f64>,
    pub objective: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug)]
pub struct ShrinkRun {
    pub result: ShrinkResult,
    pub stats: SolverStats,
}

/// Solves the reduced instance and interprets each power as the amount to
/// shrink the corresponding disk; the total is within (1 + eps) of the
/// minimum shrinkage for the approximate modes.
pub fn min_shrinkage(cfg: &DiskConfig, eps: f64, mode: ShrinkMode) -> Result<ShrinkResult> {
    Ok(min_shrinkage_run(cfg, eps, mode, &SolveOptions::default())?.result)
}

pub fn min_shrinkage_run(
    cfg: &DiskConfig,
    eps: f64,
    mode: ShrinkMode,
    opts: &SolveOptions,
) -> Result<ShrinkRun> {
    let reduction = reduce_disks(cfg);
    let (solve, stats) = match mode {
        ShrinkMode::Fptas => {
            let run = solve_fptas_run(&reduction.instance, eps, opts)?;
            (run.result, run.stats)
        }
        ShrinkMode::Fast => {
            let run = solve_fast_fptas_run(&reduction.instance, eps, opts)?;
            (run.result, run.stats)
        }
        ShrinkMode::Integer => {
            let run = solve_integer_run(&reduction.instance, opts)?;
            (run.result, run.stats)
        }
    };
    let shrinks: Vec<f64> = reduction
        .vertex_names
        .iter()
        .map(|name| solve.assignment.get(name).expect("vertex present"))
        .collect();
    let warnings = shrinks
        .iter()
        .enumerate()
        .filter(|&(i, &s)| s > cfg.disks[i].r)
        .map(|(i, &s)| {
            format!(
                "disk {i} shrinks by {s}, exceeding its radius {}",
                cfg.disks[i].r
            )
        })
        .collect();
    Ok(ShrinkRun {
        result: ShrinkResult {
            shrinks,
            objective: solve.objective,
            warnings,
        },
        stats,
    })
}

/// Renders the configuration: rectangle outline, original disks as outlines,
/// shrunken disks filled, and a legend with the total shrinkage. A disk
/// shrunk to nothing is drawn as a point marker.
pub fn render_svg(cfg: &DiskConfig, shrinks: &[f64]) -> Result<String> {
    if shrinks.len() != cfg.disks.len() {
        return Err(Error::ShrinkLengthMismatch {
            expected: cfg.disks.len(),
            got: shrinks.len(),
        });
    }
    let rect = cfg.rect;
    let max_r = cfg.disks.iter().map(|d| d.r).fold(1.0, f64::max);
    let margin = max_r + 0.5;
    let (vx, vy) = (rect.x0 - margin, rect.y0 - margin);
    let (vw, vh) = (
        rect.x1 - rect.x0 + 2.0 * margin,
        rect.y1 - rect.y0 + 2.0 * margin + 1.0,
    );
    let stroke = 0.02 * vw.max(vh);
    let point_marker = 0.015 * vw.max(vh);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx} {vy} {vw} {vh}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{stroke}\"/>\n",
        rect.x0,
        rect.y0,
        rect.x1 - rect.x0,
        rect.y1 - rect.y0
    ));
    let mut total = 0.0;
    for (disk, &shrink) in cfg.disks.iter().zip(shrinks) {
        total += shrink;
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"gray\" stroke-width=\"{stroke}\" stroke-dasharray=\"{stroke} {stroke}\"/>\n",
            disk.x, disk.y, disk.r
        ));
        let remaining = (disk.r - shrink).max(0.0);
        if remaining > 0.0 {
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{remaining}\" fill=\"steelblue\" fill-opacity=\"0.4\" stroke=\"steelblue\" stroke-width=\"{stroke}\"/>\n",
                disk.x, disk.y
            ));
        } else {
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{point_marker}\" fill=\"crimson\" class=\"point-marker\"/>\n",
                disk.x, disk.y
            ));
        }
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"{}\">total shrinkage: {total}</text>\n",
        rect.x0,
        rect.y1 + margin + 0.5,
        0.06 * vw.max(vh)
    ));
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Node;

    fn two_disk_config() -> DiskConfig {
        DiskConfig::new(
            Rect {
                x0: 0.0,
                y0: 0.0,
                x1: 3.0,
                y1: 2.0,
            },
            vec![
                Disk {
                    x: 0.8,
                    y: 1.0,
                    r: 1.0,
                },
                Disk {
                    x: 2.2,
                    y: 1.0,
                    r: 1.0,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_two_disk_reduction() {
        let red = reduce_disks(&two_disk_config());
        let g = &red.instance;
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        for e in g.edges() {
            let expected = match (e.u, e.v) {
                (Node::S, _) | (_, Node::S) => 0.2,
                (Node::T, _) | (_, Node::T) => 0.2,
                _ => 0.6,
            };
            assert!(
                (e.weight - expected).abs() <= 1e-9,
                "weight {} vs {expected}",
                e.weight
            );
        }
    }

    #[test]
    fn distant_disks_share_no_edge() {
        let cfg = DiskConfig::new(
            Rect {
                x0: 0.0,
                y0: 0.0,
                x1: 10.0,
                y1: 2.0,
            },
            vec![
                Disk {
                    x: 4.0,
                    y: 1.0,
                    r: 1.0,
                },
                Disk {
                    x: 6.5,
                    y: 1.0,
                    r: 1.0,
                },
            ],
        )
        .unwrap();
        let red = reduce_disks(&cfg);
        assert_eq!(red.instance.edge_count(), 0);
    }

    #[test]
    fn tangency_keeps_a_zero_weight_edge() {
        let cfg = DiskConfig::new(
            Rect {
                x0: 0.0,
                y0: 0.0,
                x1: 8.0,
                y1: 2.0,
            },
            vec![Disk {
                x: 1.0,
                y: 1.0,
                r: 1.0,
            }],
        )
        .unwrap();
        let red = reduce_disks(&cfg);
        assert_eq!(red.instance.edge_count(), 1);
        assert_eq!(red.instance.edges()[0].weight, 0.0);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        assert!(matches!(
            DiskConfig::new(
                Rect {
                    x0: 0.0,
                    y0: 0.0,
                    x1: 0.0,
                    y1: 2.0
                },
                vec![]
            ),
            Err(Error::InvalidRectangle)
        ));
        assert!(matches!(
            DiskConfig::new(
                Rect {
                    x0: 0.0,
                    y0: 0.0,
                    x1: 3.0,
                    y1: 2.0
                },
                vec![Disk {
                    x: 5.0,
                    y: 1.0,
                    r: 1.0
                }]
            ),
            Err(Error::DiskOutsideRectangle { .. })
        ));
        assert!(matches!(
            DiskConfig::new(
                Rect {
                    x0: 0.0,
                    y0: 0.0,
                    x1: 3.0,
                    y1: 2.0
                },
                vec![Disk {
                    x: 1.0,
                    y: 1.0,
                    r: 0.0
                }]
            ),
            Err(Error::InvalidRadius { .. })
        ));
    }

    #[test]
    fn two_disk_shrinkage_hits_the_band() {
        let out = min_shrinkage(&two_disk_config(), 0.1, ShrinkMode::Fptas).unwrap();
        assert!(out.objective >= 0.2 - 1e-9 && out.objective <= 0.22 + 1e-9);
        assert!(out.warnings.is_empty());
        let total: f64 = out.shrinks.iter().sum();
        assert!((total - out.objective).abs() <= 1e-9);
    }

    #[test]
    fn open_barrier_needs_no_shrinking() {
        let cfg = DiskConfig::new(
            Rect {
                x0: 0.0,
                y0: 0.0,
                x1: 10.0,
                y1: 2.0,
            },
            vec![
                Disk {
                    x: 0.5,
                    y: 1.0,
                    r: 1.0,
                },
                Disk {
                    x: 2.6,
                    y: 1.0,
                    r: 1.0,
                },
            ],
        )
        .unwrap();
        let out = min_shrinkage(&cfg, 0.5, ShrinkMode::Fast).unwrap();
        assert_eq!(out.objective, 0.0);
        assert!(out.shrinks.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn mirroring_preserves_the_objective() {
        let cfg = two_disk_config();
        let mirrored = DiskConfig::new(
            cfg.rect,
            cfg.disks
                .iter()
                .map(|d| Disk {
                    x: cfg.rect.x0 + cfg.rect.x1 - d.x,
                    y: d.y,
                    r: d.r,
                })
                .collect(),
        )
        .unwrap();
        let a = min_shrinkage(&cfg, 0.25, ShrinkMode::Fptas).unwrap();
        let b = min_shrinkage(&mirrored, 0.25, ShrinkMode::Fptas).unwrap();
        assert!((a.objective - b.objective).abs() <= 1e-9);
    }

    #[test]
    fn translation_leaves_reduced_weights_unchanged() {
        let cfg = two_disk_config();
        let (dx, dy) = (17.25, -4.5);
        let moved = DiskConfig::new(
            Rect {
                x0: cfg.rect.x0 + dx,
                y0: cfg.rect.y0 + dy,
                x1: cfg.rect.x1 + dx,
                y1: cfg.rect.y1 + dy,
            },
            cfg.disks
                .iter()
                .map(|d| Disk {
                    x: d.x + dx,
                    y: d.y + dy,
                    r: d.r,
                })
                .collect(),
        )
        .unwrap();
        let a = reduce_disks(&cfg).instance;
        let b = reduce_disks(&moved).instance;
        assert_eq!(a.edge_count(), b.edge_count());
        for (ea, eb) in a.edges().iter().zip(b.edges()) {
            assert!((ea.weight - eb.weight).abs() <= 1e-9);
        }
    }

    #[test]
    fn random_configs_stay_within_band_of_the_reduced_oracle() {
        use crate::oracle::oracle_opt;
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        for _ in 0..30 {
            let rect = Rect {
                x0: 0.0,
                y0: 0.0,
                x1: 5.0,
                y1: 3.0,
            };
            let disks: Vec<Disk> = (0..5)
                .map(|_| Disk {
                    x: rng.gen_range(0.0..5.0),
                    y: rng.gen_range(0.0..3.0),
                    r: rng.gen_range(0.4..1.4),
                })
                .collect();
            let cfg = DiskConfig::new(rect, disks).unwrap();
            let (opt, _, _) = oracle_opt(&reduce_disks(&cfg).instance).unwrap();
            for (eps, mode) in [(0.25, ShrinkMode::Fptas), (0.5, ShrinkMode::Fast)] {
                let out = min_shrinkage(&cfg, eps, mode).unwrap();
                assert!(
                    out.objective >= opt - 1e-9 && out.objective <= (1.0 + eps) * opt + 1e-9,
                    "objective {} outside [{opt}, {}]",
                    out.objective,
                    (1.0 + eps) * opt
                );
            }
        }
    }

    #[test]
    fn svg_rendering_cases() {
        let cfg = two_disk_config();
        // Zero shrinks: shrunken circles coincide with originals.
        let svg = render_svg(&cfg, &[0.0, 0.0]).unwrap();
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains("total shrinkage: 0"));
        // Full shrink renders a point marker.
        let svg = render_svg(&cfg, &[1.0, 0.0]).unwrap();
        assert!(svg.contains("point-marker"));
        // Computed shrinkage renders one visibly reduced circle.
        let out = min_shrinkage(&cfg, 0.1, ShrinkMode::Fptas).unwrap();
        let svg = render_svg(&cfg, &out.shrinks).unwrap();
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(matches!(
            render_svg(&cfg, &[0.0]),
            Err(Error::ShrinkLengthMismatch {
                expected: 2,
                got: 1
            })
        ));
    }
}
