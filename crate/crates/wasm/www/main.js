import init, { simulate_wave, spectrum, structure_check } from "./pkg/phdg_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function setup() {
  return [num("n"), num("k"), num("beta"), num("tau"), num("xi")];
}

function frame(ctx, w, h, pad, xr, yr, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad / 2, w - 1.5 * pad, h - 1.5 * pad);
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(xlabel, w / 2, h - 6);
  ctx.fillText(ylabel, 4, 12);
  ctx.fillText(xr[0].toPrecision(3), pad, h - pad + 12);
  ctx.fillText(xr[1].toPrecision(3), w - pad, h - pad + 12);
  ctx.fillText(yr[1].toPrecision(3), 2, pad / 2 + 10);
  ctx.fillText(yr[0].toPrecision(3), 2, h - pad);
  const sx = (x) => pad + ((x - xr[0]) / (xr[1] - xr[0] || 1)) * (w - 1.5 * pad);
  const sy = (y) => h - pad - ((y - yr[0]) / (yr[1] - yr[0] || 1)) * (h - 1.5 * pad);
  return [sx, sy];
}

function range(...arrays) {
  let lo = Infinity, hi = -Infinity;
  for (const a of arrays) for (const v of a) { if (v < lo) lo = v; if (v > hi) hi = v; }
  if (!isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  const m = 0.05 * (hi - lo);
  return [lo - m, hi + m];
}

// Discontinuous polyline: breaks the line between elements (every `per` points).
function polyline(ctx, sx, sy, xs, ys, color, per = 0) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  for (let i = 0; i < xs.length; i++) {
    const start = i === 0 || (per > 0 && i % per === 0);
    start ? ctx.moveTo(sx(xs[i]), sy(ys[i])) : ctx.lineTo(sx(xs[i]), sy(ys[i]));
  }
  ctx.stroke();
}

function drawSimulation(r) {
  const z = r.z(), p = r.p(), ep = r.exact_p();
  const c = $("field"), ctx = c.getContext("2d");
  const [sx, sy] = frame(ctx, c.width, c.height, 40, [0, 1], range(p, ep), "z", `p at t = ${r.snapshot_time().toFixed(4)}`);
  const per = num("k") + 1;
  if (ep.length) polyline(ctx, sx, sy, z, ep, "#bbb");
  polyline(ctx, sx, sy, z, p, "#c33", per);

  const t = r.times(), h = r.hamiltonian();
  const e = $("energy"), ectx = e.getContext("2d");
  const [tx, ty] = frame(ectx, e.width, e.height, 40, [t[0], t[t.length - 1]], range(h), "t", "H");
  polyline(ectx, tx, ty, t, h, "#36c");

  const err = r.l2_error();
  $("report").textContent =
    `H(T) = ${h[h.length - 1].toExponential(6)}\n` +
    `max H = ${Math.max(...h).toExponential(6)}\n` +
    (isNaN(err) ? "no exact solution for t >= 2\n" : `L2 error vs characteristics = ${err.toExponential(4)}\n`);
}

function drawSpectrum(s) {
  const re = s.re(), im = s.im();
  const c = $("spectrum"), ctx = c.getContext("2d");
  const [sx, sy] = frame(ctx, c.width, c.height, 40, range(re, [0]), range(im), "Re λ", "Im λ");
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(sx(0), sy(Math.min(...im)));
  ctx.lineTo(sx(0), sy(Math.max(...im)));
  ctx.stroke();
  ctx.fillStyle = "#063";
  for (let i = 0; i < re.length; i++) ctx.fillRect(sx(re[i]) - 1.5, sy(im[i]) - 1.5, 3, 3);
  $("report").textContent = s.summary();
}

function guarded(f) {
  return () => {
    $("status").textContent = "";
    try { f(); } catch (e) { $("status").textContent = String(e.message ?? e); }
  };
}

await init();

$("preset").addEventListener("change", () => {
  const v = $("preset").value;
  if (v === "custom") return;
  const [b, t, x] = v.split(",");
  $("beta").value = b; $("tau").value = t; $("xi").value = x;
});
for (const id of ["beta", "tau", "xi"]) $(id).addEventListener("input", () => { $("preset").value = "custom"; });

$("run-sim").addEventListener("click", guarded(() => {
  drawSimulation(simulate_wave(...setup(), num("tf"), num("dt"), num("ts")));
}));
$("run-spec").addEventListener("click", guarded(() => {
  drawSpectrum(spectrum(...setup(), $("structure-only").checked));
}));
$("run-check").addEventListener("click", guarded(() => {
  $("report").textContent = structure_check(...setup());
}));
