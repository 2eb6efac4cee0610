//! Read a trained network back as weighted fuzzy rules.

use rfnn::data::synthetic::ucp_projects;
use rfnn::rules::{render_rule, rule_base, LabelScheme};
use rfnn::{train, TrainConfig};

fn main() -> rfnn::Result<()> {
    let data = ucp_projects(70, 5);
    let model = train(&data, &TrainConfig { m: 3, ..TrainConfig::default() })?;
    let scheme = LabelScheme::default().with_override("Methodology", vec!["traditional".into(), "mixed".into(), "agile".into()]);
    let base = rule_base(&model, &scheme)?;

    println!("bias {:.2} {}", base.bias, base.target);
    for rule in &base.rules {
        println!("{}", render_rule(rule, 2));
    }
    Ok(())
}
