import init, { groebner_basis, mine_rules_csv, truth_table } from "./pkg/fairdoc_web.js";

const $ = (id) => document.getElementById(id);

function el(tag, attrs = {}, ...children) {
  const e = document.createElement(tag);
  Object.assign(e, attrs);
  for (const c of children) e.append(c);
  return e;
}

function table(head, rows, rowClass = () => "") {
  const t = el("table");
  t.append(el("tr", {}, ...head.map((h) => el("th", { textContent: h }))));
  for (const r of rows) {
    const tr = el("tr", { className: rowClass(r) }, ...r.cells.map((c) => el("td", { textContent: c ?? "" })));
    t.append(tr);
  }
  return t;
}

// runs one operation and renders either its result or the error text
function show(out, op, render) {
  out.replaceChildren();
  try {
    render(out, JSON.parse(op()));
  } catch (e) {
    out.append(el("p", { className: "err", textContent: e.message ?? String(e) }));
  }
}

function renderBasis(out, r) {
  out.append(el("p", { textContent: `${r.basis.length} generators for ${r.points} points, order ${r.order}` }));
  out.append(table(["polynomial", "form", "rule"], r.basis.map((g) => ({ cells: [g.polynomial, g.form, g.text] }))));
  out.append(el("p", { className: "muted", textContent: "standard monomials: " + r.standard_monomials.join(", ") }));
}

function renderRules(out, r) {
  out.append(el("p", {
    textContent: `${r.basis_size} rules from ${r.row_count} objects (${r.distinct_point_count} distinct) over ${r.properties.length} properties, order ${r.order}`,
  }));
  out.append(table(["#", "form", "support", "rule"], r.rules.map((x, i) => ({ cells: [i + 1, x.form, x.support, x.text] }))));
}

function renderTable(out, r) {
  const verdict = r.vanishes_on_data ? `vanishes on the data: ${r.rule ?? r.polynomial + " = 0"}` : "not a rule of the data";
  out.append(el("p", { textContent: `${r.polynomial}: ${verdict}` }));
  const rows = r.rows.map((x) => ({ cells: [x.point, x.value], data: x.data, value: x.value }));
  out.append(table([r.variables.join(""), "value"], rows, (x) => (x.data ? (x.value ? "bad" : "data") : "")));
}

await init();

$("gb-run").onclick = () =>
  show($("gb-out"), () => groebner_basis($("gb-names").value, $("gb-points").value, $("gb-order").value), renderBasis);
$("mine-run").onclick = () =>
  show($("mine-out"), () => mine_rules_csv($("mine-csv").value, $("mine-order").value), renderRules);
$("tt-run").onclick = () =>
  show($("tt-out"), () => truth_table($("tt-names").value, $("tt-poly").value, $("tt-points").value), renderTable);
$("mine-file").onchange = async (ev) => {
  const f = ev.target.files[0];
  if (f) $("mine-csv").value = await f.text();
};
