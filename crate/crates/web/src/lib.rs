//! Browser bindings for the boolean-ring tools. Every export takes and returns
//! plain strings; results are JSON documents for the demo page to render.
//! The `*_json` functions carry the logic and are tested natively.

use std::sync::Arc;

use fairdoc::boolpoly::{buchberger_moeller, parse_poly, Point, TermOrder, VariableContext};
use fairdoc::rulemine::{classify_rule, export_rules_json, mine_rules, Dataset};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest variable count for which the page enumerates a full truth table.
pub const TRUTH_TABLE_MAX_VARIABLES: usize = 8;

fn order(text: &str) -> Result<TermOrder, String> {
    match text.trim() {
        "" => Ok(TermOrder::default()),
        t => t.parse().map_err(|_| format!("unknown term order `{t}`")),
    }
}

fn context(names: &str) -> Result<Arc<VariableContext>, String> {
    let names: Vec<&str> = names.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    VariableContext::new(names).map(Arc::new).map_err(|e| e.to_string())
}

/// One point per line, as 0/1 digits; spaces and commas are ignored.
fn points(text: &str, n: usize) -> Result<Vec<Point>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let bits: Vec<u8> = line
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(format!("line {}: `{other}` is not 0 or 1", i + 1)),
                })
                .collect::<Result<_, _>>()?;
            if bits.len() != n {
                return Err(format!("line {}: {} values for {n} variables", i + 1, bits.len()));
            }
            Point::from_slice(&bits).map_err(|e| e.to_string())
        })
        .collect()
}

fn bits_string(p: &Point) -> String {
    p.to_vec().iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

pub fn basis_json(names: &str, point_text: &str, order_name: &str) -> Result<Value, String> {
    let ctx = context(names)?;
    let pts = points(point_text, ctx.len())?;
    if pts.is_empty() {
        return Err("no points given".into());
    }
    let ord = order(order_name)?;
    let gb = buchberger_moeller(&pts, &ctx, ord).map_err(|e| e.to_string())?;
    let basis: Vec<Value> = gb
        .basis
        .iter()
        .map(|g| {
            let rule = classify_rule(g).ok();
            json!({
                "polynomial": g.render(ord),
                "form": rule.as_ref().map(|f| f.tag().as_str()),
                "text": rule.and_then(|f| fairdoc::rulemine::render_form(&f, ctx.names()).ok()),
            })
        })
        .collect();
    let standard: Vec<String> = gb.standard_monomials.iter().map(|m| m.display(&ctx).to_string()).collect();
    Ok(json!({ "order": ord.name(), "points": pts.len(), "basis": basis, "standard_monomials": standard }))
}

pub fn mine_json(csv: &str, order_name: &str) -> Result<Value, String> {
    let ds = Dataset::load_csv(csv.as_bytes()).map_err(|e| e.to_string())?;
    let rs = mine_rules(&ds, order(order_name)?).map_err(|e| e.to_string())?;
    serde_json::from_slice(&export_rules_json(&rs)).map_err(|e| e.to_string())
}

/// Values of `poly` on every point of `{0,1}^n`, flagging the data points.
/// A polynomial that vanishes on all data points is a rule of the data.
pub fn truth_table_json(names: &str, poly: &str, point_text: &str) -> Result<Value, String> {
    let ctx = context(names)?;
    if ctx.len() > TRUTH_TABLE_MAX_VARIABLES {
        return Err(format!("at most {TRUTH_TABLE_MAX_VARIABLES} variables"));
    }
    let f = parse_poly(poly, &ctx).map_err(|e| e.to_string())?;
    let data = points(point_text, ctx.len())?;
    let mut rows = Vec::new();
    let mut vanishes = true;
    for p in ctx.all_points() {
        let value = f.eval(&p).map_err(|e| e.to_string())?;
        let in_data = data.contains(&p);
        vanishes &= !(in_data && value);
        rows.push(json!({ "point": bits_string(&p), "value": u8::from(value), "data": in_data }));
    }
    let rule = if vanishes && !data.is_empty() {
        classify_rule(&f).ok().and_then(|form| fairdoc::rulemine::render_form(&form, ctx.names()).ok())
    } else {
        None
    };
    Ok(json!({
        "variables": ctx.names(),
        "polynomial": f.render(TermOrder::default()),
        "rows": rows,
        "vanishes_on_data": vanishes,
        "rule": rule,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Reduced Gröbner basis of the vanishing ideal of the given points.
#[wasm_bindgen]
pub fn groebner_basis(names: &str, points: &str, order: &str) -> Result<String, JsError> {
    to_js(basis_json(names, points, order))
}

/// Rules mined from a CSV with an id column and 0/1 property columns.
#[wasm_bindgen]
pub fn mine_rules_csv(csv: &str, order: &str) -> Result<String, JsError> {
    to_js(mine_json(csv, order))
}

#[wasm_bindgen]
pub fn truth_table(names: &str, poly: &str, points: &str) -> Result<String, JsError> {
    to_js(truth_table_json(names, poly, points))
}
