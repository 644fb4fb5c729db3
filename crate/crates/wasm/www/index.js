// SPDX-License-Identifier: Apache-2.0
import init, { gridCheck, repairDemo, dipoleFlatNorm } from "./pkg/polychain_wasm.js";

const $ = (id) => document.getElementById(id);

function call(f, ...args) {
  try {
    return { value: JSON.parse(f(...args)) };
  } catch (e) {
    return { error: e.message ?? String(e) };
  }
}

function shade(v, limit) {
  if (v === 0) return "#fff";
  const a = Math.min(1, Math.abs(v) / Math.max(1, limit));
  return v > 0 ? `rgba(40, 90, 200, ${0.15 + 0.6 * a})` : `rgba(200, 60, 40, ${0.15 + 0.6 * a})`;
}

function gridTable(values, dims, limit) {
  const cols = dims.length === 1 ? dims[0] : dims[dims.length - 1];
  const rows = values.length / cols;
  let html = '<table class="grid">';
  for (let r = 0; r < rows; r++) {
    html += "<tr>";
    for (let c = 0; c < cols; c++) {
      const v = values[r * cols + c];
      html += `<td style="background:${shade(v, limit)}">${v}</td>`;
    }
    html += "</tr>";
  }
  return html + "</table>";
}

function runGrid() {
  const p = Number($("g-p").value);
  const r = call(gridCheck, BigInt(p), $("g-dims").value, $("g-theta").value);
  if (r.error) {
    $("g-out").innerHTML = `<p class="bad">${r.error}</p>`;
    return;
  }
  const v = r.value;
  if (v.dims.length > 2) {
    $("g-out").innerHTML = "<p>Only 1D and 2D grids are drawn.</p>";
    return;
  }
  $("g-out").innerHTML =
    `<div>θ ${gridTable(v.theta, v.dims, 3 * p)} select ${gridTable(v.select, v.dims, p)}</div>` +
    `<p class="${v.passed ? "ok" : "bad"}">M(∂ select) = ${v.lhs} ≤ (p−1)·M<sup>p</sup>(∂θ) = ${v.rhs}` +
    (v.ratio ? `; ratio ${v.ratio} (limit ${v.limit})` : "") + "</p>";
}

function drawChain(v, chain, title) {
  const xs = v.vertices.map((p) => p[0]);
  const ys = v.vertices.map((p) => (p.length > 1 ? p[1] : 0));
  const [minX, maxX, minY, maxY] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  const W = 300, H = 220, pad = 24;
  const sx = (x) => pad + ((x - minX) / Math.max(1e-9, maxX - minX)) * (W - 2 * pad);
  const sy = (y) => (maxY === minY ? H / 2 : H - pad - ((y - minY) / (maxY - minY)) * (H - 2 * pad));
  const coeff = new Map(chain.coeffs);
  const bd = new Map(chain.boundary);
  const seen = new Map();
  let svg = `<svg width="${W}" height="${H}" viewBox="0 0 ${W} ${H}"><text x="6" y="14">${title}</text>`;
  v.edges.forEach(([t, h], e) => {
    const c = coeff.get(e) ?? 0;
    if (c === 0) return;
    const key = Math.min(t, h) + ":" + Math.max(t, h);
    const n = seen.get(key) ?? 0;
    seen.set(key, n + 1);
    const [x1, y1, x2, y2] = [sx(xs[t]), sy(ys[t]), sx(xs[h]), sy(ys[h])];
    // Parallel edges bow out alternately.
    const bend = n === 0 ? 0 : (n % 2 ? 1 : -1) * Math.ceil(n / 2) * 18;
    const mx = (x1 + x2) / 2 - ((y2 - y1) / Math.hypot(x2 - x1, y2 - y1 || 1)) * bend;
    const my = (y1 + y2) / 2 + ((x2 - x1) / Math.hypot(x2 - x1 || 1, y2 - y1)) * bend;
    const color = c > 0 ? "#2a5ac8" : "#c83c28";
    svg += `<path d="M${x1},${y1} Q${mx},${my} ${x2},${y2}" stroke="${color}" fill="none" stroke-width="${1 + Math.min(4, Math.abs(c))}"/>`;
    svg += `<text x="${mx}" y="${my - 3}" font-size="10" fill="${color}">${c}</text>`;
  });
  v.vertices.forEach((_, i) => {
    const b = bd.get(i) ?? 0;
    const r = b === 0 ? 3 : 3 + Math.min(8, Math.abs(b));
    svg += `<circle cx="${sx(xs[i])}" cy="${sy(ys[i])}" r="${r}" fill="${b === 0 ? "#666" : b > 0 ? "#2a5ac8" : "#c83c28"}"/>`;
  });
  return svg + "</svg>";
}

function showRepair(r) {
  if (r.error) {
    $("r-out").innerHTML = `<p class="bad">${r.error}</p>`;
    return;
  }
  const v = r.value;
  $("r-out").innerHTML =
    drawChain(v, v.input, "input") + " " + drawChain(v, v.output, "repaired") +
    `<p>boundary mass ${v.input.boundary_mass} → ${v.output.boundary_mass} (bound (p−1)·M<sup>p</sup>(∂P) = ${v.bound})</p>` +
    `<p>descent of the positive representative: ${v.descent.length ? v.descent.join(" → ") : "already repaired"}</p>` +
    `<p class="${v.verified ? "ok" : "bad"}">${v.verified ? "certificate verified" : "verification failed"}</p>`;
}

function runRepair(bundle) {
  const p = BigInt($("r-p").value);
  const r = bundle
    ? call(repairDemo, p, -1, Number($("r-k").value), 0)
    : call(repairDemo, p, Number($("r-seed").value), 0, Number($("r-edges").value));
  showRepair(r);
}

function runDipole() {
  const r = call(dipoleFlatNorm, $("d-len").value, BigInt($("d-w").value), BigInt($("d-p").value));
  if (r.error) {
    $("d-out").innerHTML = `<p class="bad">${r.error}</p>`;
    return;
  }
  const v = r.value;
  $("d-out").innerHTML =
    `<p>M = ${v.mass}, F = ${v.flat} (S = ${v.filled} on the segment), ` +
    `F<sup>${v.p}</sup> = ${v.flat_mod_p} (S = ${v.filled_mod_p})</p>`;
}

await init();
$("status").textContent = "";
$("g-run").onclick = runGrid;
$("r-run").onclick = () => runRepair(false);
$("r-bundle").onclick = () => runRepair(true);
$("d-slider").oninput = (e) => {
  $("d-len").value = `${e.target.value}/4`;
  runDipole();
};
for (const id of ["d-len", "d-w", "d-p"]) $(id).onchange = runDipole;
runGrid();
runRepair(false);
runDipole();
