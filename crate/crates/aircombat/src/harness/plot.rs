//! Renders a metrics log into line charts: per-episode sparse returns, the
//! blend weight, the evaluation return, and the training losses.

use super::metrics::{read_metrics, MetricsRecord};
use super::svg::{write_chart, Panel, Series};
use crate::Result;
use std::path::Path;

pub fn plot_metrics(metrics_path: &Path, out_svg: &Path) -> Result<()> {
    let records = read_metrics(metrics_path)?;

    let mut sparse_b = Vec::new();
    let mut sparse_r = Vec::new();
    let mut q_curve = Vec::new();
    let mut eval_curve = Vec::new();
    let mut critic = Vec::new();
    let mut actor = Vec::new();
    for rec in &records {
        match rec {
            MetricsRecord::Episode {
                episode,
                q,
                sparse_return_blue,
                sparse_return_red,
                ..
            } => {
                sparse_b.push((*episode as f64, *sparse_return_blue));
                sparse_r.push((*episode as f64, *sparse_return_red));
                q_curve.push((*episode as f64, *q));
            }
            MetricsRecord::Eval {
                episode,
                mean_sparse_return,
                ..
            } => {
                eval_curve.push((*episode as f64, *mean_sparse_return));
            }
            MetricsRecord::Update {
                update,
                critic_loss,
                actor_loss,
                ..
            } => {
                critic.push((*update as f64, *critic_loss));
                actor.push((*update as f64, *actor_loss));
            }
        }
    }

    write_chart(
        out_svg,
        &[
            Panel {
                title: "episode sparse return",
                x_label: "episode",
                y_label: "return",
                series: vec![
                    Series { name: "blue", points: sparse_b },
                    Series { name: "red", points: sparse_r },
                ],
            },
            Panel {
                title: "blend weight",
                x_label: "episode",
                y_label: "q",
                series: vec![Series { name: "q", points: q_curve }],
            },
            Panel {
                title: "evaluation (sparse only)",
                x_label: "episode",
                y_label: "mean return",
                series: vec![Series { name: "eval", points: eval_curve }],
            },
            Panel {
                title: "losses",
                x_label: "update",
                y_label: "loss",
                series: vec![
                    Series { name: "critic", points: critic },
                    Series { name: "actor", points: actor },
                ],
            },
        ],
    )
}
