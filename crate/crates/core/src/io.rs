//! JSON documents: networks, states, traces and example cases.
//!
//! Scalars travel as strings (`"3/10"`, `"5"`), states as arrays of
//! strategy codes with `-1` for refusal.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cascade::{CascadeAssembly, CascadeLayout};
use crate::error::{Error, Result};
use crate::game::{
    check_state, Edge, EdgeClass, EdgeSelector, Move, Network, Player, PlayerId, ProductId, Strategy, StrategyState,
};
use crate::paradox::{CaseName, Mutation, ParadoxCase, ParadoxReport, VeryBadReport};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub products: Vec<String>,
    pub players: Vec<PlayerDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ports: Option<PortsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roles: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerDoc {
    pub label: String,
    pub available: Vec<u16>,
    pub thresholds: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub src: u32,
    pub dst: u32,
    pub weight: String,
    pub class: EdgeClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortsDoc {
    pub input_anchor: u32,
    pub output_source: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseDoc {
    pub claim: String,
    pub start: StrategyState,
    pub mutation: MutationDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum MutationDoc {
    Expand { player: u32, product: u16, threshold: String },
    Contract { player: u32, product: u16 },
    SetWeight { edge: EdgeSelector, weight: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub player: u32,
    pub to: Strategy,
    pub gain: String,
}

fn parse<S: Scalar>(text: &str, what: &str) -> Result<S> {
    S::parse_scalar(text).ok_or_else(|| Error::Format(format!("{what}: cannot read {text:?} as a number")))
}

pub fn network_doc<S: Scalar>(net: &Network<S>) -> NetworkDoc {
    NetworkDoc {
        products: net.products().to_vec(),
        players: net
            .players()
            .iter()
            .map(|p| PlayerDoc {
                label: p.label.clone(),
                available: p.available.iter().map(|t| t.0).collect(),
                thresholds: p
                    .thresholds
                    .iter()
                    .map(|(t, v)| (t.0.to_string(), v.format_scalar()))
                    .collect(),
            })
            .collect(),
        edges: net
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                src: e.src.0,
                dst: e.dst.0,
                weight: e.weight.format_scalar(),
                class: e.class,
            })
            .collect(),
        ports: None,
        roles: None,
        case: None,
    }
}

/// Rebuilds a network. Indices must be in range and every available product
/// needs a use price; everything else is left to `validate_network`.
pub fn network_from_doc<S: Scalar>(doc: &NetworkDoc) -> Result<Network<S>> {
    let k = doc.products.len();
    let n = doc.players.len();
    let mut players = Vec::with_capacity(n);
    for (i, p) in doc.players.iter().enumerate() {
        let mut thresholds = BTreeMap::new();
        for (key, v) in &p.thresholds {
            let t: u16 = key
                .parse()
                .map_err(|_| Error::Format(format!("player {i}: threshold key {key:?} is not a product index")))?;
            thresholds.insert(ProductId(t), parse(v, &format!("player {i} threshold"))?);
        }
        for t in p.available.iter().chain(thresholds.keys().map(|t| &t.0)) {
            if *t as usize >= k {
                return Err(Error::Format(format!("player {i}: product {t} does not exist")));
            }
        }
        if let Some(t) = p.available.iter().find(|t| !thresholds.contains_key(&ProductId(**t))) {
            return Err(Error::Format(format!("player {i}: product {t} has no use price")));
        }
        players.push(Player {
            label: p.label.clone(),
            available: p.available.iter().map(|t| ProductId(*t)).collect(),
            thresholds,
        });
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (j, e) in doc.edges.iter().enumerate() {
        if e.src as usize >= n || e.dst as usize >= n {
            return Err(Error::Format(format!("edge {j}: endpoint out of range")));
        }
        edges.push(Edge {
            src: PlayerId(e.src),
            dst: PlayerId(e.dst),
            weight: parse(&e.weight, &format!("edge {j} weight"))?,
            class: e.class,
        });
    }
    Ok(Network::from_parts(doc.products.clone(), players, edges))
}

pub fn write_network<S: Scalar>(net: &Network<S>) -> String {
    to_pretty(&network_doc(net))
}

pub fn read_network<S: Scalar>(text: &str) -> Result<Network<S>> {
    network_from_doc(&serde_json::from_str(text)?)
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents always serialize")
}

fn roles_doc(layouts: &[CascadeLayout]) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for (k, l) in layouts.iter().enumerate() {
        for (p, role) in l.roles() {
            let role = if layouts.len() > 1 { format!("cascade{k}:{role}") } else { role };
            out.insert(p.0.to_string(), role);
        }
    }
    out
}

/// A cascade with its ports and the role of every player.
pub fn cascade_doc<S: Scalar>(a: &CascadeAssembly<S>) -> NetworkDoc {
    let mut doc = network_doc(&a.net);
    doc.ports = Some(PortsDoc {
        input_anchor: a.layout.input_anchor.0,
        output_source: a.layout.output_source.0,
    });
    doc.roles = Some(roles_doc(std::slice::from_ref(&a.layout)));
    doc
}

pub fn mutation_doc<S: Scalar>(m: &Mutation<S>) -> MutationDoc {
    match m {
        Mutation::Expand {
            player,
            product,
            threshold,
        } => MutationDoc::Expand {
            player: player.0,
            product: product.0,
            threshold: threshold.format_scalar(),
        },
        Mutation::Contract { player, product } => MutationDoc::Contract {
            player: player.0,
            product: product.0,
        },
        Mutation::SetWeight { edge, weight } => MutationDoc::SetWeight {
            edge: edge.clone(),
            weight: weight.format_scalar(),
        },
    }
}

pub fn mutation_from_doc<S: Scalar>(m: &MutationDoc) -> Result<Mutation<S>> {
    Ok(match m {
        MutationDoc::Expand {
            player,
            product,
            threshold,
        } => Mutation::Expand {
            player: PlayerId(*player),
            product: ProductId(*product),
            threshold: parse(threshold, "expansion threshold")?,
        },
        MutationDoc::Contract { player, product } => Mutation::Contract {
            player: PlayerId(*player),
            product: ProductId(*product),
        },
        MutationDoc::SetWeight { edge, weight } => Mutation::SetWeight {
            edge: edge.clone(),
            weight: parse(weight, "new edge weight")?,
        },
    })
}

/// An example case: its network plus the `case` envelope.
pub fn case_doc<S: Scalar>(c: &ParadoxCase<S>) -> NetworkDoc {
    let mut doc = network_doc(&c.net);
    if let [layout] = c.layouts.as_slice() {
        doc.ports = Some(PortsDoc {
            input_anchor: layout.input_anchor.0,
            output_source: layout.output_source.0,
        });
    }
    doc.roles = Some(roles_doc(&c.layouts));
    doc.case = Some(CaseDoc {
        claim: c.claim.name().to_string(),
        start: c.start.clone(),
        mutation: mutation_doc(&c.mutation),
    });
    doc
}

/// Reads a case document back. Cascade layouts are not stored, so the
/// result carries none.
pub fn case_from_doc<S: Scalar>(doc: &NetworkDoc) -> Result<ParadoxCase<S>> {
    let env = doc
        .case
        .as_ref()
        .ok_or_else(|| Error::Format("document has no case envelope".into()))?;
    let claim = CaseName::parse(&env.claim)
        .ok_or_else(|| Error::Format(format!("unknown claim {:?}", env.claim)))?
        .claim();
    let net = network_from_doc(doc)?;
    check_state(&net, &env.start)?;
    Ok(ParadoxCase {
        name: env.claim.clone(),
        claim,
        start: env.start.clone(),
        mutation: mutation_from_doc(&env.mutation)?,
        net,
        layouts: Vec::new(),
        externals: Vec::new(),
        scope: None,
    })
}

pub fn read_state<S: Scalar>(text: &str, net: &Network<S>) -> Result<StrategyState> {
    let s: StrategyState = serde_json::from_str(text)?;
    check_state(net, &s)?;
    Ok(s)
}

pub fn trace_doc<S: Scalar>(moves: &[Move<S>]) -> Vec<TraceEntry> {
    moves
        .iter()
        .map(|m| TraceEntry {
            player: m.player.0,
            to: m.to,
            gain: m.gain.format_scalar(),
        })
        .collect()
}

pub fn trace_from_doc<S: Scalar>(entries: &[TraceEntry]) -> Result<Vec<Move<S>>> {
    entries
        .iter()
        .map(|e| {
            Ok(Move {
                player: PlayerId(e.player),
                to: e.to,
                gain: parse(&e.gain, "trace gain")?,
            })
        })
        .collect()
}


fn scalars<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(Scalar::format_scalar).collect()
}

/// Machine-readable verification report. Scalars use the wire form.
pub fn report_json<S: Scalar>(r: &ParadoxReport<S>) -> serde_json::Value {
    let sinks: Vec<serde_json::Value> = r
        .sinks
        .iter()
        .map(|s| {
            json!({
                "node": s.node,
                "state": s.state,
                "payoffs": scalars(&s.payoffs),
                "equilibrium_of_mutated": s.equilibrium_of_mutated,
                "equilibrium_of_original": s.equilibrium_of_original,
                "all_worse": s.all_worse,
                "all_better": s.all_better,
                "trace": trace_doc(&s.trace),
            })
        })
        .collect();
    let cycle = r.cycle.as_ref().map(|(states, moves)| {
        json!({
            "states": states,
            "moves": trace_doc(moves),
            "entry": trace_doc(&r.cycle_entry),
        })
    });
    json!({
        "case": r.case,
        "claim": r.claim.name(),
        "rule": r.rule.name(),
        "mutation": r.mutation,
        "verdict": r.verdict,
        "conditions": r.conditions,
        "start": r.start,
        "start_payoffs": scalars(&r.start_payoffs),
        "classification": r.classification,
        "states": r.states,
        "arcs": r.arcs,
        "max_out_degree": r.max_out_degree,
        "sinks": sinks,
        "cycle": cycle,
        "invariant_violations": r.invariant_violations,
    })
}

pub fn very_bad_json<S: Scalar>(r: &VeryBadReport<S>) -> serde_json::Value {
    json!({
        "case": "very-bad",
        "players": r.players,
        "cross_influence": r.cross_influence,
        "verdict": r.verdict(),
        "invariant_violations": r.invariant_violations,
        "reports": r.reports.iter().map(report_json).collect::<Vec<_>>(),
    })
}
