import init, { deriveParams, profileCurves, mixtureCurves } from "./pkg/gspi_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const status = (msg, err = false) => {
  $("status").textContent = msg;
  $("status").className = err ? "err" : "";
};

// series: [{values, color, bars}]; x runs from x0.
function plot(canvas, series, x0) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  ctx.clearRect(0, 0, w, h);
  const len = Math.max(...series.map((s) => s.values.length));
  const top = Math.max(1e-12, ...series.flatMap((s) => s.values));
  const sx = (i) => pad + (i + 0.5) * (w - 2 * pad) / len;
  const sy = (v) => h - pad - v / top * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#666";
  ctx.font = "11px sans-serif";
  const step = Math.max(1, Math.ceil(len / 20));
  for (let i = 0; i < len; i += step) ctx.fillText(String(i + x0), sx(i) - 4, h - pad + 14);
  ctx.fillText(top.toPrecision(3), 2, pad - 6);
  const bw = (w - 2 * pad) / len / series.length;
  series.forEach((s, k) => {
    ctx.fillStyle = s.color;
    ctx.strokeStyle = s.color;
    if (s.bars) {
      s.values.forEach((v, i) => ctx.fillRect(sx(i) - bw * series.length / 2 + k * bw, sy(v), bw * 0.9, h - pad - sy(v)));
    } else {
      ctx.lineWidth = 2;
      ctx.beginPath();
      s.values.forEach((v, i) => (i ? ctx.lineTo(sx(i), sy(v)) : ctx.moveTo(sx(i), sy(v))));
      ctx.stroke();
      ctx.lineWidth = 1;
    }
  });
}

function run(label, f) {
  status(label + "…");
  setTimeout(() => {
    const t = performance.now();
    try {
      f();
      status(`${label}: ${((performance.now() - t) / 1000).toFixed(2)} s`);
    } catch (e) {
      status(String(e), true);
    }
  }, 10);
}

await init();

$("derive").onclick = () => run("derive", () => {
  const p = JSON.parse(deriveParams(num("n"), num("c0"), num("factor")));
  $("params").textContent = `p1 = ${p.p1.toFixed(6)}   p2 = ${p.p2.toFixed(6)}   q2 = ${p.q2.toFixed(6)}`;
});

$("profiles").onclick = () => run("profiles", () => {
  const r = JSON.parse(profileCurves(num("n"), num("c0"), num("factor"), num("graphs"), num("seed")));
  $("params").textContent = `p1 = ${r.params.p1.toFixed(6)}   p2 = ${r.params.p2.toFixed(6)}   q2 = ${r.params.q2.toFixed(6)}`;
  const pair = (c) => [
    { values: c.one_cluster, color: "#1f77b4", bars: true },
    { values: c.two_cluster, color: "#d62728", bars: true },
  ];
  plot($("dist"), pair(r.distance), 1);
  plot($("paths"), pair(r.path_count), 1);
});

$("mixture").onclick = () => run("mixture", () => {
  const r = JSON.parse(mixtureCurves(num("mn"), num("mp2"), num("mq2"), num("mgraphs"), num("seed")));
  plot($("mix"), [
    { values: r.empirical, color: "#444", bars: true },
    { values: r.prediction, color: "#2ca02c", bars: false },
  ], 0);
});
