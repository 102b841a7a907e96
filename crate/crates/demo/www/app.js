import init, { Params, solve, sweepRho, boundary } from "./pkg/coexist_demo.js";

const $ = (id) => document.getElementById(id);
const status = (msg) => { $("status").textContent = msg; };

function params(overrides = {}) {
  const v = {
    n: parseInt($("n").value, 10),
    beta: parseFloat($("beta").value),
    inr: parseFloat($("inr").value),
    scr: parseFloat($("scr").value),
    rho: parseFloat($("rho").value),
    incoherent: $("incoherent").checked,
    corr: parseFloat($("corr").value),
    ...overrides,
  };
  return new Params(v.n, v.beta, v.inr, v.scr, v.rho, v.incoherent, v.corr);
}

function guarded(fn) {
  return () => {
    status("");
    try { fn(); } catch (e) { status(e.message ?? String(e)); }
  };
}

const fmt = (x, d = 4) => (Number.isFinite(x) ? x.toFixed(d) : "n/a");

function showSolution() {
  const s = solve(params());
  const rows = [
    ["feasible", s.feasible ? "yes" : `no (rho_max = ${fmt(s.rho_max_db, 2)} dB)`],
    ["rho_max [dB]", fmt(s.rho_max_db, 3)],
    ["R0 [bit/use]", fmt(s.r0)],
    ["R1 [bit/use]", fmt(s.r1)],
    ["CR [bit/use]", fmt(s.cr)],
    ["radar SINR [dB]", fmt(s.sinr_db, 3)],
    ["comm power toward radar, gamma_N", fmt(s.gamma_n)],
    ["radar energy, epsilon", fmt(s.epsilon, 3)],
  ];
  $("result").innerHTML = rows.map(([k, v]) => `<tr><td>${k}</td><td>${v}</td></tr>`).join("");
  s.free();
}

const SVG_NS = "http://www.w3.org/2000/svg";

function el(tag, attrs, text) {
  const e = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

// series: [{ label, color, points: [[x, y] | null, ...] }]
function plot(svg, title, xLabel, yLabel, series) {
  svg.replaceChildren();
  const w = +svg.getAttribute("width"), h = +svg.getAttribute("height"), m = 48;
  const pts = series.flatMap((s) => s.points.filter((p) => p));
  if (pts.length === 0) { svg.append(el("text", { x: m, y: h / 2 }, "no feasible points")); return; }
  const span = (vals) => {
    let lo = Math.min(...vals), hi = Math.max(...vals);
    if (hi - lo < 1e-9) { lo -= 0.5; hi += 0.5; }
    const pad = 0.05 * (hi - lo);
    return [lo - pad, hi + pad];
  };
  const [x0, x1] = span(pts.map((p) => p[0]));
  const [y0, y1] = span(pts.map((p) => p[1]));
  const px = (x) => m + ((x - x0) / (x1 - x0)) * (w - 2 * m);
  const py = (y) => h - m - ((y - y0) / (y1 - y0)) * (h - 2 * m);
  svg.append(el("rect", { x: m, y: m, width: w - 2 * m, height: h - 2 * m, fill: "none", stroke: "#000" }));
  svg.append(el("text", { x: w / 2, y: 20, "text-anchor": "middle" }, title));
  svg.append(el("text", { x: w / 2, y: h - 8, "text-anchor": "middle", "font-size": 12 }, xLabel));
  svg.append(el("text", { x: 12, y: h / 2, "text-anchor": "middle", "font-size": 12, transform: `rotate(-90 12 ${h / 2})` }, yLabel));
  for (let i = 0; i <= 4; i++) {
    const xv = x0 + (i / 4) * (x1 - x0), yv = y0 + (i / 4) * (y1 - y0);
    svg.append(el("text", { x: px(xv), y: h - m + 14, "text-anchor": "middle", "font-size": 10 }, xv.toFixed(2)));
    svg.append(el("text", { x: m - 4, y: py(yv) + 3, "text-anchor": "end", "font-size": 10 }, yv.toFixed(3)));
  }
  series.forEach((s, k) => {
    let run = [];
    const flush = () => {
      if (run.length) svg.append(el("polyline", { points: run.join(" "), fill: "none", stroke: s.color, "stroke-width": 2 }));
      run = [];
    };
    for (const p of s.points) {
      if (p) run.push(`${px(p[0]).toFixed(1)},${py(p[1]).toFixed(1)}`); else flush();
    }
    flush();
    svg.append(el("rect", { x: w - m - 120, y: m + 8 + 16 * k, width: 10, height: 10, fill: s.color }));
    svg.append(el("text", { x: w - m - 105, y: m + 17 + 16 * k, "font-size": 11 }, s.label));
  });
}

const pairs = (flat) => {
  const out = [];
  for (let i = 0; i < flat.length; i += 2) out.push(Number.isFinite(flat[i + 1]) ? [flat[i], flat[i + 1]] : null);
  return out;
};

function showSweep() {
  const joint = pairs(sweepRho(params(), 0, 20, 81));
  const series = [{ label: `beta = ${$("beta").value}`, color: "#1f77b4", points: joint }];
  const b = parseFloat($("beta").value);
  if (b !== 0) series.push({ label: "beta = 0", color: "#999", points: pairs(sweepRho(params({ beta: 0 }), 0, 20, 81)) });
  plot($("sweep-plot"), "Optimized CR versus minimum SINR", "rho_min [dB]", "CR [bit/use]", series);
}

function showRegion() {
  const series = [{ label: "configured noise", color: "#d62728", points: pairs(boundary(params(), 51)) }];
  if (parseFloat($("corr").value) !== 0) {
    series.push({ label: "white noise", color: "#1f77b4", points: pairs(boundary(params({ corr: 0 }), 51)) });
  }
  plot($("region-plot"), "Rate-region boundary", "R0 [bit/use]", "R1 [bit/use]", series);
}

await init();
$("solve").addEventListener("click", guarded(showSolution));
$("sweep").addEventListener("click", guarded(showSweep));
$("region").addEventListener("click", guarded(showRegion));
guarded(showSolution)();
