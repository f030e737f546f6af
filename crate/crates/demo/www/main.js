import init, { run_fronts, cell_trace, operator_histogram } from "./pkg/nsga2_fh_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const PAD = 40;

function call(fn, ...args) {
  const v = JSON.parse(fn(...args));
  if (v.error) throw new Error(v.error);
  return v;
}

function frame(ctx, xs, ys) {
  const [w, h] = [ctx.canvas.width, ctx.canvas.height];
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x) => PAD + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * PAD);
  const sy = (y) => h - PAD - ((y - y0) / (y1 - y0 || 1)) * (h - 2 * PAD);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(PAD, PAD, w - 2 * PAD, h - 2 * PAD);
  ctx.fillStyle = "#333";
  ctx.fillText(x0.toPrecision(3), PAD, h - PAD + 14);
  ctx.fillText(x1.toPrecision(3), w - PAD - 30, h - PAD + 14);
  ctx.fillText(y0.toPrecision(3), 2, h - PAD);
  ctx.fillText(y1.toPrecision(3), 2, PAD + 8);
  return { sx, sy };
}

function dots(ctx, pts, s, color, r) {
  ctx.fillStyle = color;
  for (const [x, y] of pts) {
    ctx.beginPath();
    ctx.arc(s.sx(x), s.sy(y), r, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function line(ctx, xs, ys, s, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(s.sx(x), s.sy(ys[i])) : ctx.moveTo(s.sx(x), s.sy(ys[i]))));
  ctx.stroke();
}

// VNT has three objectives; draw f1 against f2 side by side with f1 against f3.
function drawFronts() {
  const r = call(run_fronts, $("f-problem").value, num("f-pop"), num("f-gen"), BigInt(num("f-seed")));
  $("f-info").textContent = `archive ${r.archive.length} in ${r.archive_cells} cells, population front ${r.population.length}`;
  const ctx = $("f-plot").getContext("2d");
  const m = r.population[0].length;
  const pairs = m === 3 ? [[0, 1], [0, 2]] : [[0, 1]];
  const full = ctx.canvas.width;
  ctx.clearRect(0, 0, full, ctx.canvas.height);
  pairs.forEach(([i, j], k) => {
    const w = full / pairs.length;
    const sub = document.createElement("canvas");
    sub.width = w;
    sub.height = ctx.canvas.height;
    const c = sub.getContext("2d");
    const all = r.archive.concat(r.population);
    const s = frame(c, all.map((p) => p[i]), all.map((p) => p[j]));
    c.fillText(`f${i + 1} vs f${j + 1}`, w / 2 - 20, 14);
    dots(c, r.archive.map((p) => [p[i], p[j]]), s, "#1f77b4", 1.5);
    dots(c, r.population.map((p) => [p[i], p[j]]), s, "#d62728", 3);
    ctx.drawImage(sub, k * w, 0);
  });
}

function drawTrace() {
  const rows = call(cell_trace, num("t-cells"), num("t-sols"), num("t-gen"), BigInt(num("t-seed")));
  const ctx = $("t-plot").getContext("2d");
  const g = rows.map((r) => r.generation);
  const s = frame(ctx, g, [0, num("t-cells"), ...rows.map((r) => r.total)]);
  line(ctx, g, rows.map((r) => r.filled), s, "#2ca02c");
  line(ctx, g, rows.map((r) => r.empty), s, "#ff7f0e");
  line(ctx, g, rows.map((r) => r.total), s, "#555");
  ctx.strokeStyle = "#000";
  for (const r of rows.filter((r) => r.packed)) {
    ctx.beginPath();
    ctx.moveTo(s.sx(r.generation), PAD);
    ctx.lineTo(s.sx(r.generation), ctx.canvas.height - PAD);
    ctx.stroke();
  }
}

function drawHistogram() {
  const h = call(operator_histogram, $("h-kind").value, num("h-eta"), num("h-draws"), 60, 7n);
  const ctx = $("h-plot").getContext("2d");
  const mids = h.edges.slice(0, -1).map((e, i) => (e + h.edges[i + 1]) / 2);
  const s = frame(ctx, h.edges, [0, ...h.empirical, ...h.analytic]);
  ctx.fillStyle = "#9467bd88";
  h.empirical.forEach((v, i) => {
    const x = s.sx(h.edges[i]);
    ctx.fillRect(x, s.sy(v), s.sx(h.edges[i + 1]) - x - 1, s.sy(0) - s.sy(v));
  });
  line(ctx, mids, h.analytic, s, "#000");
}

function guarded(fn) {
  return () => {
    $("status").textContent = "";
    $("status").className = "";
    try {
      fn();
    } catch (e) {
      $("status").textContent = e.message;
      $("status").className = "err";
    }
  };
}

await init();
$("f-run").onclick = guarded(drawFronts);
$("t-run").onclick = guarded(drawTrace);
$("h-run").onclick = guarded(drawHistogram);
guarded(drawFronts)();
guarded(drawTrace)();
guarded(drawHistogram)();
