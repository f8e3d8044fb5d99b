//! Graphviz output for networks and improvement graphs.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::dynamics::ImprovementGraph;
use crate::game::{payoff_vector, EdgeClass, Network, PlayerId, Strategy};
use crate::scalar::Scalar;

fn quote(s: &str) -> String {
    let escaped = s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
    format!("\"{escaped}\"")
}

fn strategy_name<S: Scalar>(net: &Network<S>, s: Strategy) -> String {
    match s {
        Strategy::Refusal => "refuse".into(),
        Strategy::Use(t) => net.product_name(t).map_or_else(|| t.to_string(), str::to_string),
    }
}

fn style(class: EdgeClass) -> &'static str {
    match class {
        EdgeClass::Control => "style=bold",
        EdgeClass::Inclination => "style=dashed",
        EdgeClass::Emotional => "style=dotted, color=gray50",
        EdgeClass::Plain => "style=solid",
    }
}

/// One node per player, one arc per edge. `roles` replaces player labels.
pub fn network_to_dot<S: Scalar>(net: &Network<S>, roles: Option<&BTreeMap<PlayerId, String>>) -> String {
    let mut out = String::from("digraph network {\n  node [shape=ellipse];\n");
    for (k, p) in net.players().iter().enumerate() {
        let id = PlayerId::from(k);
        let name = roles.and_then(|r| r.get(&id)).unwrap_or(&p.label);
        let offer: Vec<&str> = p.available.iter().filter_map(|t| net.product_name(*t)).collect();
        let label = format!("{k}: {name}\n{{{}}}", offer.join(","));
        writeln!(out, "  v{k} [label={}];", quote(&label)).unwrap();
    }
    for e in net.edges() {
        writeln!(
            out,
            "  v{} -> v{} [label={}, {}];",
            e.src,
            e.dst,
            quote(&e.weight.display_scalar()),
            style(e.class)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// States labelled with strategy and payoff vectors, moves labelled
/// `player→strategy (+gain)`. The start is drawn doubled, sinks boxed.
pub fn graph_to_dot<S: Scalar>(net: &Network<S>, g: &ImprovementGraph<S>) -> String {
    let mut out = String::from("digraph improvement {\n  node [shape=ellipse];\n");
    for k in 0..g.len() {
        let s = g.state(k);
        let pays = payoff_vector(net, s)
            .map(|v| v.iter().map(Scalar::display_scalar).collect::<Vec<_>>().join(","))
            .unwrap_or_default();
        let shape = if k == g.start() {
            ", shape=doublecircle"
        } else if g.sinks().contains(&k) {
            ", shape=box"
        } else {
            ""
        };
        writeln!(out, "  s{k} [label={}{shape}];", quote(&format!("{s}\n[{pays}]"))).unwrap();
    }
    for k in 0..g.len() {
        for a in g.arcs(k) {
            let label = format!(
                "{}→{} (+{})",
                a.mv.player,
                strategy_name(net, a.mv.to),
                a.mv.gain.display_scalar()
            );
            writeln!(out, "  s{k} -> s{} [label={}];", a.target, quote(&label)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Number of node statements in DOT text produced here.
pub fn count_nodes(dot: &str) -> usize {
    dot.lines()
        .filter(|l| {
            let l = l.trim_start();
            l.contains("[label=") && !l.contains("->")
        })
        .count()
}
