//! Rendering of clearing results and game reports as JSON, CSV and text.

use crate::clearing::ClearingResult;
use crate::game::{Efficiency, GameReport};
use crate::model::FinancialNetwork;
use crate::money::{self, Money};
use crate::strategy::StrategyProfile;
use serde_json::{json, Map, Value};
use std::fmt::Write;

fn s(m: &Money) -> Value {
    Value::String(money::fmt(m))
}

fn vec_json(v: &[Money]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

fn by_firm(net: &FinancialNetwork, v: &[Money]) -> Value {
    Value::Object((0..net.n()).map(|i| (net.id(i).to_string(), s(&v[i]))).collect())
}

pub fn clearing_json(net: &FinancialNetwork, profile: &StrategyProfile, res: &ClearingResult) -> Value {
    let assets = res.assets(net);
    let equities = res.equities(net);
    json!({
        "firms": (0..net.n()).map(|i| net.id(i)).collect::<Vec<_>>(),
        "profile": profile.to_json(net),
        "payments": res.payments.iter().map(|r| vec_json(r)).collect::<Vec<_>>(),
        "total_payments": by_firm(net, &res.totals()),
        "assets": by_firm(net, &assets),
        "equities": by_firm(net, &equities),
        "recovery_rates": by_firm(net, &res.recovery),
        "defaults": res.defaults.iter().map(|&i| net.id(i)).collect::<Vec<_>>(),
        "social_welfare": {
            "assets": money::fmt(&money::sum(&assets)),
            "equity": money::fmt(&money::sum(&equities)),
        },
        "proper": res.proper,
        "converged": res.converged,
        "rounds": res.rounds,
        "cds_rounds": res.outer_rounds,
    })
}

/// One line per firm: its balance sheet followed by its payment row.
pub fn clearing_csv(net: &FinancialNetwork, res: &ClearingResult) -> String {
    let mut out = String::from("firm,external,total_paid,assets,equity,default,recovery");
    for i in 0..net.n() {
        let _ = write!(out, ",to_{}", net.id(i));
    }
    out.push('\n');
    let assets = res.assets(net);
    let equities = res.equities(net);
    let totals = res.totals();
    for i in 0..net.n() {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            net.id(i),
            money::fmt(&net.firms[i].external),
            money::fmt(&totals[i]),
            money::fmt(&assets[i]),
            money::fmt(&equities[i]),
            res.is_default(i),
            money::fmt(&res.recovery[i])
        );
        for x in &res.payments[i] {
            let _ = write!(out, ",{}", money::fmt(x));
        }
        out.push('\n');
    }
    out
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let width: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|x| x.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, x)| format!("{x:>w$}", w = width[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn clearing_table(net: &FinancialNetwork, profile: &StrategyProfile, res: &ClearingResult) -> String {
    let mut rows = vec![{
        let mut h = vec!["paid by \\ to".to_string()];
        h.extend((0..net.n()).map(|i| net.id(i).to_string()));
        h.extend(["assets", "equity", "status"].map(String::from));
        h
    }];
    let assets = res.assets(net);
    let equities = res.equities(net);
    for i in 0..net.n() {
        let mut r = vec![net.id(i).to_string()];
        r.extend(res.payments[i].iter().map(money::fmt));
        r.push(money::fmt(&assets[i]));
        r.push(money::fmt(&equities[i]));
        r.push(if res.is_default(i) {
            format!("default (r = {})", money::fmt(&res.recovery[i]))
        } else {
            "solvent".into()
        });
        rows.push(r);
    }
    let mut out = format!("profile: {}\n", profile.label(net));
    out.push_str(&pad_table(&rows));
    let _ = writeln!(
        out,
        "social welfare: assets {}, equity {}",
        money::fmt(&money::sum(&assets)),
        money::fmt(&money::sum(&equities))
    );
    if !res.converged {
        out.push_str("warning: recovery rates did not converge\n");
    }
    out
}

fn efficiency_json(net: &FinancialNetwork, report: &GameReport, eff: &Efficiency) -> Value {
    let profiles: Vec<Value> = eff
        .equilibria
        .iter()
        .filter_map(|&i| report.row(i))
        .map(|r| json!({ "index": r.index, "label": r.profile.label(net), "welfare": money::fmt(&r.welfare) }))
        .collect();
    json!({
        "count": eff.equilibria.len(),
        "profiles": profiles,
        "worst_welfare": eff.worst.as_ref().map(money::fmt),
        "best_welfare": eff.best.as_ref().map(money::fmt),
        "price_of_anarchy": eff.poa.as_ref().map(|r| r.to_string()),
        "price_of_stability": eff.pos.as_ref().map(|r| r.to_string()),
    })
}

pub fn report_json(net: &FinancialNetwork, report: &GameReport) -> Value {
    let mut top = Map::new();
    top.insert("utility".into(), Value::String(report.mode.to_string()));
    top.insert("firms".into(), json!(report.firms));
    top.insert(
        "strategic_firms".into(),
        json!(report.strategic_firms.iter().map(|&i| net.id(i)).collect::<Vec<_>>()),
    );
    top.insert("profiles_examined".into(), json!(report.profiles_examined));
    top.insert(
        "nonconvergent_profiles".into(),
        json!(report.nonconvergent.iter().map(|p| p.label(net)).collect::<Vec<_>>()),
    );
    top.insert("opt".into(), json!(report.opt.as_ref().map(money::fmt)));
    top.insert(
        "opt_profile".into(),
        json!(report.opt_profile.and_then(|i| report.row(i)).map(|r| r.profile.label(net))),
    );
    top.insert("nash".into(), efficiency_json(net, report, &report.nash));
    if report.nash.equilibria.is_empty() {
        top.insert("note".into(), json!("no pure Nash equilibrium"));
    }
    if let Some((notion, k, eff)) = &report.coalition {
        let mut c = efficiency_json(net, report, eff);
        c["notion"] = json!(notion);
        c["max_coalition"] = json!(k);
        top.insert("coalition".into(), c);
    }
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            let mut row = json!({
                "index": r.index,
                "profile": r.profile.to_json(net),
                "label": r.profile.label(net),
                "utilities": by_firm(net, &r.utilities),
                "welfare": money::fmt(&r.welfare),
                "nash": r.nash,
            });
            if let Some(st) = r.stable {
                row["stable"] = json!(st);
            }
            row
        })
        .collect();
    top.insert("profiles".into(), Value::Array(rows));
    Value::Object(top)
}

/// One line per examined profile.
pub fn report_csv(net: &FinancialNetwork, report: &GameReport) -> String {
    let mut out = String::from("index,profile,welfare,nash");
    if report.coalition.is_some() {
        out.push_str(",stable");
    }
    for i in 0..net.n() {
        let _ = write!(out, ",u_{}", net.id(i));
    }
    out.push('\n');
    for r in &report.rows {
        let _ = write!(out, "{},\"{}\",{},{}", r.index, r.profile.label(net), money::fmt(&r.welfare), r.nash);
        if let Some(st) = r.stable {
            let _ = write!(out, ",{st}");
        }
        for u in &r.utilities {
            let _ = write!(out, ",{}", money::fmt(u));
        }
        out.push('\n');
    }
    out
}

fn ratio_line(out: &mut String, name: &str, eff: &Efficiency) {
    let f = |r: &Option<crate::game::Ratio>| r.as_ref().map_or("n/a".to_string(), |r| r.to_string());
    let _ = writeln!(out, "{name}: {} found, PoA {}, PoS {}", eff.equilibria.len(), f(&eff.poa), f(&eff.pos));
}

pub fn report_table(net: &FinancialNetwork, report: &GameReport) -> String {
    let mut rows = vec![{
        let mut h = vec!["#".to_string(), "profile".into()];
        h.extend((0..net.n()).map(|i| format!("u({})", net.id(i))));
        h.push("SW".into());
        h.push("NE".into());
        if report.coalition.is_some() {
            h.push("stable".into());
        }
        h
    }];
    for r in &report.rows {
        let mut line = vec![r.index.to_string(), r.profile.label(net)];
        line.extend(r.utilities.iter().map(money::fmt));
        line.push(money::fmt(&r.welfare));
        line.push(if r.nash { "yes" } else { "" }.into());
        if let Some(st) = r.stable {
            line.push(if st { "yes" } else { "" }.into());
        }
        rows.push(line);
    }
    let mut out = format!("utility: {}\n", report.mode);
    out.push_str(&pad_table(&rows));
    let _ = writeln!(
        out,
        "profiles: {}, OPT {}",
        report.profiles_examined,
        report.opt.as_ref().map_or("n/a".into(), money::fmt)
    );
    ratio_line(&mut out, "Nash equilibria", &report.nash);
    if report.nash.equilibria.is_empty() {
        out.push_str("no pure Nash equilibrium\n");
    }
    if let Some((notion, k, eff)) = &report.coalition {
        ratio_line(&mut out, &format!("{notion} equilibria (coalitions up to {k})"), eff);
    }
    if !report.nonconvergent.is_empty() {
        let _ = writeln!(out, "skipped {} nonconvergent profiles", report.nonconvergent.len());
    }
    out
}
